"""Acceptance suite: ten headline criteria, one test and one printed
PASS/FAIL line each.

Three sub-checks are expected to fail and are left failing on purpose; each
is a faithful measurement of a documented model-level discrepancy, not an
integrator bug:

* criterion 1, the trapped population window [0.83, 0.89]: the delay-form
  cascade conserves the trapped bound state exactly and yields P_e1 = 0.97;
  unitarity (P_e1 + P_2photon ~ 1 here) makes the window incompatible with
  the simultaneous two-photon bound < 0.05, which this suite does enforce
  and pass;
* criterion 3, the dark-state floor 0.9: with zero field pre-history the
  exact final value is 1/(1 + sum_j gl gr tau_j)^2 = 0.835 for these
  delays - the 0.9 floor holds only in the tau -> 0 limit;
* criterion 8 on fig2/fig3, cascade norm drift < 0.01: the delay-form
  equations drop in-flight reabsorption channels, and their reconstructed
  two-photon sector inherits a few-percent bias (the direct discretized
  integration, run in criterion 6 and in test_frequency, conserves the norm
  to 1e-8).
"""
import math
import time

import numpy as np
import pytest

from wqsim import (AtomParams, KGrid, NetworkConfig, oracle_full_grid,
                   run_preset, solve_cee, solve_single_atom,
                   solve_two_atom_single_excitation, integrate, DelaySystem,
                   field_snapshot, check_mirror_boundary, eval_two_atom_field,
                   eval_single_atom_field, PRESETS)

WA = 50.0


def _report(num: int, title: str, checks: list[tuple[str, bool, str]]) -> None:
    ok = all(c[1] for c in checks)
    print(f"\nACCEPTANCE {num} [{'PASS' if ok else 'FAIL'}] {title}")
    for label, passed, detail in checks:
        print(f"    [{'pass' if passed else 'FAIL'}] {label}: {detail}")
    assert ok, f"criterion {num}: " + "; ".join(
        f"{label} ({detail})" for label, passed, detail in checks if not passed)


def _load_csv(path):
    data = np.genfromtxt(path, delimiter=",", names=True)
    return data


@pytest.fixture(scope="module")
def fig3_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig3")
    t0 = time.time()
    summary = run_preset("fig3", out)
    return summary, time.time() - t0, out


@pytest.fixture(scope="module")
def fig2_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig2")
    t0 = time.time()
    summary = run_preset("fig2", out)
    return summary, time.time() - t0, out


@pytest.fixture(scope="module")
def fig6_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig6")
    summary = run_preset("fig6", out)
    return summary, out


def test_criterion_1_fig3_trapping(fig3_run):
    summary, elapsed, out = fig3_run
    dk = 2 * 20.0 / (1001 - 1)
    checks = [
        ("P_e1(T) in [0.83, 0.89]",
         0.83 <= summary["pe1_final"] <= 0.89,
         f"P_e1 = {summary['pe1_final']:.4f}"),
        ("P_e2(T) < 0.02", summary["pe2_final"] < 0.02,
         f"P_e2 = {summary['pe2_final']:.4f}"),
        ("|c_ee(T)|^2 < 0.01", summary["cee_abs2_final"] < 0.01,
         f"|c_ee|^2 = {summary['cee_abs2_final']:.4f}"),
        ("spectral argmax at omega_a +- dk",
         abs(summary["spectral_argmax_k"] - WA) <= dk + 1e-12,
         f"argmax k = {summary['spectral_argmax_k']:.4f}, dk = {dk:.4f}"),
        ("two-photon norm < 0.05",
         summary["two_photon_norm_final"] < 0.05,
         f"norm = {summary['two_photon_norm_final']:.4f}"),
        ("runtime < 2 min at N=1001, dt=tau_min/64", elapsed < 120.0,
         f"{elapsed:.0f}s"),
    ]
    _report(1, "population trapping scenario", checks)


def test_criterion_2_fig2_two_photon(fig2_run):
    summary, elapsed, out = fig2_run
    checks = [
        ("|c_ee(T)|^2 < 0.01", summary["cee_abs2_final"] < 0.01,
         f"|c_ee|^2 = {summary['cee_abs2_final']:.2e}"),
        ("P_e1(T) < 0.02", summary["pe1_final"] < 0.02,
         f"P_e1 = {summary['pe1_final']:.4f}"),
        ("P_e2(T) < 0.02", summary["pe2_final"] < 0.02,
         f"P_e2 = {summary['pe2_final']:.4f}"),
        ("two-photon norm >= 0.95",
         summary["two_photon_norm_final"] >= 0.95,
         f"norm = {summary['two_photon_norm_final']:.4f}"),
        ("runtime < 2 min", elapsed < 120.0, f"{elapsed:.0f}s"),
    ]
    _report(2, "two-photon emission scenario", checks)


def test_criterion_3_dark_state():
    solid = PRESETS["fig4_solid"]
    traj = solve_cee(solid.config, solid.settings.t_end, solid.settings.dt)
    min_sq = float((np.abs(traj.states[:, 0]) ** 2).min())
    dashed = PRESETS["fig4_dashed"]
    traj_d = solve_cee(dashed.config, dashed.settings.t_end, dashed.settings.dt)
    end_sq = float(abs(traj_d.states[-1, 0]) ** 2)
    checks = [
        ("node positions: |c_ee(t)|^2 >= 0.9 on [0, 40 z1]", min_sq >= 0.9,
         f"min = {min_sq:.4f} (exact finite-delay floor 0.835)"),
        ("off-node contrast: |c_ee(40 z1)|^2 < 0.5", end_sq < 0.5,
         f"end = {end_sq:.4f}"),
    ]
    _report(3, "dark state and off-node contrast", checks)


def test_criterion_4_quarter_phase_decay_law():
    atom = AtomParams(2.25 * math.pi / WA, 0.2, 0.2)
    t_end = 40.0 * atom.position
    traj = solve_single_atom(atom, WA, t_end, 2 * atom.position / 64)
    err = float(np.abs(np.abs(traj.states[:, 0]) ** 2
                       - np.exp(-0.08 * traj.times)).max())
    checks = [("max | |c_e|^2 - e^{-0.08 t} | < 0.02", err < 0.02,
               f"max err = {err:.4f}")]
    _report(4, "quarter-phase analytic decay law", checks)


def test_criterion_5_atomic_mirror():
    atom = AtomParams(math.pi / WA, 0.2, 0.2)
    t_end = 40.0 * atom.position
    traj = solve_single_atom(atom, WA, t_end, 2 * atom.position / 64)
    final = float(abs(traj.states[-1, 0]) ** 2)
    checks = [("|c_e(40 z1)|^2 >= 0.95", final >= 0.95, f"{final:.4f}")]
    _report(5, "single atom at a node stays excited", checks)


def test_criterion_6_oracle_equivalence():
    cfg = PRESETS["fig2"].config
    t_end, dt = 6.0, 0.004
    t0 = time.time()
    cee = solve_cee(cfg, t_end, dt)

    def diff_at(n, stride):
        kg = KGrid.centered(cfg.omega_a, 45.0, n)
        orc = oracle_full_grid(cfg, kg, t_end, dt, ckk_stride=stride)
        m = min(len(cee.times), len(orc.times))
        return float(np.abs(np.abs(cee.states[:m, 0])
                            - np.abs(orc.cee[:m])).max())

    d_coarse = diff_at(81, 4)     # dk = 1.125: grid recurrence inside horizon
    d_half = diff_at(161, 4)      # dk halved
    d_quarter = diff_at(321, 4)   # dk halved again
    d_full = diff_at(2001, 4)     # headline grid
    elapsed = time.time() - t0
    checks = [
        ("Linf | |c_ee| | cascade vs direct < 0.02 at N=2001",
         d_full < 0.02, f"diff = {d_full:.4f}"),
        ("halving dk reduces the difference",
         d_coarse > d_half > d_quarter,
         f"dk ladder 1.125 -> 0.5625 -> 0.28: {d_coarse:.4f} -> "
         f"{d_half:.4f} -> {d_quarter:.4f} (floor {d_full:.4f})"),
        ("runtime < 10 min", elapsed < 600.0, f"{elapsed:.0f}s"),
    ]
    _report(6, "cascade vs direct-integration oracle", checks)


def test_criterion_7_cross_domain_identity():
    atom = AtomParams(0.12, 0.2, 0.45)
    cfg = NetworkConfig(atoms=(atom, AtomParams(0.3, 0.0, 0.0)), omega_a=WA)
    dt = 2 * atom.position / 64
    a = solve_cee(cfg, 6.0, dt)
    b = solve_single_atom(atom, WA, 6.0, dt)
    diff = float(np.abs(a.states[:, 0] - b.states[:, 0]).max())
    checks = [("pointwise |difference| < 1e-10", diff < 1e-10,
               f"max diff = {diff:.2e}")]
    _report(7, "frequency/spatial single-atom identity", checks)


def test_criterion_8_conservation(fig2_run, fig3_run, fig6_run):
    _, _, out2 = fig2_run
    _, _, out3 = fig3_run
    _, out6 = fig6_run
    drift2 = float(np.abs(_load_csv(out2 / "norm.csv")["total_norm"] - 1).max())
    drift3 = float(np.abs(_load_csv(out3 / "norm.csv")["total_norm"] - 1).max())
    drift6 = float(np.abs(_load_csv(out6 / "norm.csv")["total_norm"] - 1).max())
    checks = [
        ("two-photon scenario norm drift < 0.01", drift2 < 0.01,
         f"drift = {drift2:.4f}"),
        ("trapping scenario norm drift < 0.01", drift3 < 0.01,
         f"drift = {drift3:.4f}"),
        ("spatial single-excitation norm drift < 0.02", drift6 < 0.02,
         f"drift = {drift6:.4f}"),
    ]
    _report(8, "norm conservation on the reference runs", checks)


def test_criterion_9_integrator_order():
    system = DelaySystem(dim=1, delays=(), rhs=lambda t, y, yd: -y)
    errs = []
    for dt in (0.05, 0.025):
        traj = integrate(system, prehistory=1.0, t_span=(0.0, 2.0), dt=dt)
        errs.append(abs(traj.states[-1, 0] - np.exp(-2.0)))
    ratio = float(errs[0] / errs[1])

    dde = DelaySystem(dim=1, delays=(1.0,), rhs=lambda t, y, yd: -yd[0])
    traj = integrate(dde, prehistory=1.0, t_span=(0.0, 2.0), dt=1.0 / 64)
    t = traj.times
    exact = np.where(t <= 1.0, 1.0 - t, 1.0 - t + 0.5 * (t - 1.0) ** 2)
    poly_err = float(np.abs(traj.states[:, 0] - exact).max())
    checks = [
        ("error ratio under dt halving in [12, 20]", 12.0 <= ratio <= 20.0,
         f"ratio = {ratio:.2f}"),
        ("piecewise-polynomial delay solution to 1e-6", poly_err < 1e-6,
         f"max err = {poly_err:.2e}"),
    ]
    _report(9, "integrator order and delay handling", checks)


def test_criterion_10_boundary_and_causality():
    fig5 = PRESETS["fig5"]
    atom = fig5.config.atoms[0]
    traj5 = solve_single_atom(atom, WA, fig5.settings.t_end, fig5.settings.dt)
    fig6 = PRESETS["fig6"]
    traj6 = solve_two_atom_single_excitation(fig6.config, 15.0,
                                             fig6.settings.dt)
    residuals = []
    for frac in (0.3, 0.6, 1.0):
        residuals.append(check_mirror_boundary(
            field_snapshot(fig5.config, traj5, frac * traj5.t_end)))
        residuals.append(check_mirror_boundary(
            field_snapshot(fig6.config, traj6, frac * traj6.t_end)))
    max_res = max(residuals)

    t = 0.6 * traj5.t_end
    pr5, pl5 = eval_single_atom_field(atom.position + t + 0.1, t, traj5,
                                      atom, WA)
    t6 = 12.0
    pr6, pl6 = eval_two_atom_field(fig6.config.atoms[1].position + t6 + 0.1,
                                   t6, traj6, fig6.config)
    all_zero = (pr5[0] == 0.0 and pl5[0] == 0.0
                and pr6[0] == 0.0 and pl6[0] == 0.0)
    checks = [
        ("mirror residual < 1e-10 on all snapshots", max_res < 1e-10,
         f"max residual = {max_res:.2e}"),
        ("fields exactly zero outside the light cone", all_zero,
         f"values: {abs(pr5[0]):.1e}, {abs(pl5[0]):.1e}, "
         f"{abs(pr6[0]):.1e}, {abs(pl6[0]):.1e}"),
    ]
    _report(10, "mirror boundary and causality", checks)
