"""Two-excitation dynamics of the mirror-terminated two-atom network.

The cascade solves, in order: the closed delay equation for the doubly
excited amplitude, the per-mode pair equations for the single-photon
amplitudes (vectorized over the whole mode grid), and the two-photon
amplitudes by time quadrature.  `oracle_full_grid` integrates the raw
discretized integro-differential system instead - no delay reduction - and
serves as the brute-force cross-check for everything above.

Two-photon amplitudes are stored in the normalized convention in which the
plain quadrature  sum |c_kk|^2 dk^2  is the physical two-photon probability;
the symmetrized evolution equation produces an amplitude sqrt(2) larger, and
the conversion happens at the reporting boundary.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .dde import DelaySystem, Trajectory, dedupe_delays, integrate
from .errors import InvalidGeometry, NonFiniteState, OutsideMarkovRegimeWarning
from .model import KGrid, NetworkConfig, coupling_row, validate_config

TWO_PHOTON_SCALE = 1.0 / math.sqrt(2.0)

# phase advance per recorded node kept below this bound so that trapezoid
# quadrature of e^{i(k - omega_a) t} integrands stays at the few-1e-3 level
_MAX_PHASE_PER_NODE = 0.15


# ---------------------------------------------------------------------------
# closed c_ee equation and its Markov limit
# ---------------------------------------------------------------------------

def cee_system(config: NetworkConfig) -> DelaySystem:
    """Delay system for the doubly excited amplitude:
    dc/dt = -gamma_RL c + sum_j gamma_jL gamma_jR e^{i omega_a tau_j} c(t - tau_j).
    """
    validate_config(config)
    gamma_rl = config.gamma_rl
    taus = config.round_trip_delays
    coef = np.array([a.feedback * np.exp(1j * config.omega_a * tau)
                     for a, tau in zip(config.atoms, taus)])

    def rhs(t, y, ydel):
        acc = -gamma_rl * y
        for c, yd in zip(coef, ydel):
            acc = acc + c * yd
        return acc

    return DelaySystem(dim=1, delays=taus, rhs=rhs)


def solve_cee(config: NetworkConfig, t_end: float, dt: float) -> Trajectory:
    """Doubly excited amplitude on [0, t_end] with c_ee(0) = 1 and zero
    field history before the initial instant."""
    system = cee_system(config)
    return integrate(system, prehistory=0.0 + 0.0j, t_span=(0.0, t_end),
                     dt=dt, initial_state=1.0 + 0.0j)


def analytic_cee_markov(t, config: NetworkConfig):
    """Short-delay (Markov) closed form of c_ee: delayed amplitudes replaced
    by instantaneous ones while the delay phases are retained.  Modulus is
    <= 1 and non-increasing for t >= 0."""
    validate_config(config)
    rate = -config.gamma_rl
    phase = 0.0
    for atom, tau in zip(config.atoms, config.round_trip_delays):
        rate += atom.feedback * math.cos(config.omega_a * tau)
        phase += atom.feedback * math.sin(config.omega_a * tau)
    t = np.asarray(t, dtype=float)
    out = np.exp((rate + 1j * phase) * t)
    return out if out.ndim else complex(out)


# ---------------------------------------------------------------------------
# per-mode single-photon pair equations
# ---------------------------------------------------------------------------

@dataclass
class SpectralPairResult:
    """Single-photon amplitudes on the mode grid, recorded on a uniform
    subgrid of the integration nodes (spacing dt * stride)."""

    times: np.ndarray
    cee: np.ndarray            # c_ee sampled at `times`
    cegk: np.ndarray           # (n_times, n_modes): atom 1 excited + photon
    cgek: np.ndarray           # (n_times, n_modes): atom 2 excited + photon
    kgrid: KGrid
    config: NetworkConfig
    dt: float
    stride: int

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def index_at(self, t: float) -> int:
        return int(np.argmin(np.abs(self.times - t)))

    def populations_series(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(times, P_e1, P_e2): per-atom excited-state populations."""
        pee = np.abs(self.cee) ** 2
        p1 = pee + (np.abs(self.cegk) ** 2).sum(axis=1) * self.kgrid.dk
        p2 = pee + (np.abs(self.cgek) ** 2).sum(axis=1) * self.kgrid.dk
        return self.times, p1, p2


def _pair_record_stride(kgrid: KGrid, dt: float) -> int:
    half_width = float(np.max(np.abs(kgrid.k_values - kgrid.center)))
    if half_width <= 0.0:
        return 1
    return max(1, int(_MAX_PHASE_PER_NODE / (half_width * dt)))


def solve_spectral_pair(config: NetworkConfig, cee_traj: Trajectory,
                        kgrid: KGrid, t_end: float | None = None,
                        dt: float | None = None,
                        record_stride: int | None = None) -> SpectralPairResult:
    """Solve the driven pair equations for c_egk, c_gek on the whole grid.

    Both amplitudes start at zero and are driven by the precomputed c_ee;
    the four delays are the two mirror round trips and the mirror-path and
    direct inter-atom delays.  The per-mode systems share delays and are
    advanced together as one vectorized state.
    """
    validate_config(config)
    if len(config.atoms) != 2:
        raise InvalidGeometry("the two-excitation cascade needs two atoms")
    if dt is None:
        dt = cee_traj.dt
    if t_end is None:
        t_end = cee_traj.t_end
    if t_end > cee_traj.t_end + 1e-12:
        raise InvalidGeometry(
            f"c_ee trajectory ends at {cee_traj.t_end}, cannot drive to {t_end}"
        )
    a1, a2 = config.atoms
    n = len(kgrid)
    omega_a = config.omega_a
    tau1, tau2, tau_p, tau_m = config.delays
    e1 = a1.feedback * np.exp(1j * omega_a * tau1)
    e2 = a2.feedback * np.exp(1j * omega_a * tau2)
    ep_12 = a1.gamma_r * a2.gamma_l * np.exp(1j * omega_a * tau_p)
    em_12 = a1.gamma_l * a2.gamma_l * np.exp(1j * omega_a * tau_m)
    ep_21 = a1.gamma_l * a2.gamma_r * np.exp(1j * omega_a * tau_p)
    em_21 = a1.gamma_r * a2.gamma_r * np.exp(1j * omega_a * tau_m)
    g1 = coupling_row(kgrid, a1)
    g2 = coupling_row(kgrid, a2)
    detuning = kgrid.k_values - omega_a

    # c_ee at every half-step, precomputed once
    n_steps = int(np.ceil(t_end / dt - 1e-9))
    half_grid = 0.5 * dt * np.arange(2 * n_steps + 1)
    cee_half = cee_traj.sample_grid(half_grid)[:, 0]

    delays, at = dedupe_delays((tau1, tau2, tau_p, tau_m))

    def rhs(t, y, ydel):
        ce, cg = y[:n], y[n:]
        drive = cee_half[int(round(2.0 * t / dt))]
        ph = np.exp(1j * detuning * t)
        d1, d2, dp, dm = (ydel[at[0]], ydel[at[1]], ydel[at[2]], ydel[at[3]])
        dce = (-a1.damping * ce - 1j * drive * g2 * ph
               + e1 * d1[:n] + ep_12 * dp[n:] - em_12 * dm[n:])
        dcg = (-a2.damping * cg - 1j * drive * g1 * ph
               + e2 * d2[n:] + ep_21 * dp[:n] - em_21 * dm[:n])
        return np.concatenate([dce, dcg])

    system = DelaySystem(dim=2 * n, delays=delays, rhs=rhs)
    if record_stride is None:
        record_stride = _pair_record_stride(kgrid, dt)
    # the final node must land on the record grid
    while n_steps % record_stride:
        record_stride -= 1
    traj = integrate(system, prehistory=np.zeros(2 * n, complex),
                     t_span=(0.0, n_steps * dt), dt=dt,
                     record_stride=record_stride, record_derivatives=False)
    cee_rec = cee_traj.sample_grid(traj.times)[:, 0]
    return SpectralPairResult(times=traj.times, cee=cee_rec,
                              cegk=traj.states[:, :n], cgek=traj.states[:, n:],
                              kgrid=kgrid, config=config, dt=dt,
                              stride=record_stride)


# ---------------------------------------------------------------------------
# two-photon sector by time quadrature
# ---------------------------------------------------------------------------

def solve_two_photon(pair: SpectralPairResult,
                     at_times: list[float] | None = None
                     ) -> list[tuple[float, np.ndarray]]:
    """Two-photon amplitude matrices c_kk(k1, k2, t) at the requested times
    (default: the end of the pair record), by trapezoid quadrature of the
    symmetrized pair sources over the recorded nodes.

    Matrices are symmetric by construction and returned in the normalized
    convention (see module docstring).
    """
    cfg = pair.config
    a1, a2 = cfg.atoms
    g1 = coupling_row(pair.kgrid, a1)
    g2 = coupling_row(pair.kgrid, a2)
    det = pair.kgrid.k_values - cfg.omega_a
    times = pair.times
    h = float(times[1] - times[0])
    if at_times is None:
        at_times = [float(times[-1])]
    idx = [pair.index_at(t) for t in at_times]
    order = np.argsort(idx)

    n = len(pair.kgrid)
    acc_a = np.zeros((n, n), dtype=complex)
    acc_b = np.zeros((n, n), dtype=complex)
    out: list[tuple[float, np.ndarray]] = [(0.0, np.zeros((0, 0)))] * len(at_times)
    summed = -1   # highest node index already folded into the running sums
    for pos in order:
        m = idx[pos]
        for c0 in range(summed + 1, m + 1, 2048):
            c1 = min(m + 1, c0 + 2048)
            phases = np.exp(1j * np.outer(times[c0:c1], det))
            acc_a += pair.cegk[c0:c1].T @ phases
            acc_b += pair.cgek[c0:c1].T @ phases
        summed = max(summed, m)
        # trapezoid endpoint correction on [0, m]
        ph0 = np.exp(1j * times[0] * det)
        phm = np.exp(1j * times[m] * det)
        corr_a = 0.5 * (np.outer(pair.cegk[0], ph0) + np.outer(pair.cegk[m], phm))
        corr_b = 0.5 * (np.outer(pair.cgek[0], ph0) + np.outer(pair.cgek[m], phm))
        a = (acc_a - corr_a) * (h * g1)[None, :]
        b = (acc_b - corr_b) * (h * g2)[None, :]
        # (a + a.T) and (b + b.T) are each exactly symmetric in floating
        # point; keep that grouping so the result is too
        ckk = (-1j * TWO_PHOTON_SCALE) * ((a + a.T) + (b + b.T))
        out[pos] = (float(times[m]), ckk)
    return out


def two_photon_norm(ckk: np.ndarray, kgrid: KGrid) -> float:
    """Plain quadrature  sum |c_kk|^2 dk^2  (physical probability in the
    normalized convention)."""
    return float((np.abs(ckk) ** 2).sum() * kgrid.dk**2)


# ---------------------------------------------------------------------------
# state container, populations, norms
# ---------------------------------------------------------------------------

@dataclass
class TwoExcitationState:
    """Snapshot of the two-excitation amplitudes on a mode grid.

    `c_kk` lives on `ckk_grid` (defaults to `kgrid`); the oracle coarsens it
    to bound memory at n^2.  Symmetry of c_kk is validated on construction.
    """

    c_ee: complex
    c_egk: np.ndarray
    c_gek: np.ndarray
    c_kk: np.ndarray
    kgrid: KGrid
    ckk_grid: KGrid | None = None
    t: float = 0.0

    def __post_init__(self) -> None:
        if self.ckk_grid is None:
            self.ckk_grid = self.kgrid
        m = len(self.ckk_grid)
        if self.c_kk.shape != (m, m):
            raise ValueError(f"c_kk must be ({m}, {m}), got {self.c_kk.shape}")
        asym = float(np.abs(self.c_kk - self.c_kk.T).max()) if m else 0.0
        if asym > 1e-12 * max(1.0, float(np.abs(self.c_kk).max())):
            raise ValueError(f"c_kk must be exchange symmetric, asym={asym}")


def populations(state: TwoExcitationState, kgrid: KGrid | None = None
                ) -> tuple[float, float]:
    """(P_e1, P_e2): each atom's excited population, midpoint quadrature."""
    kg = kgrid or state.kgrid
    pee = abs(state.c_ee) ** 2
    p1 = pee + float((np.abs(state.c_egk) ** 2).sum()) * kg.dk
    p2 = pee + float((np.abs(state.c_gek) ** 2).sum()) * kg.dk
    return p1, p2


def total_norm(state: TwoExcitationState, kgrid: KGrid | None = None) -> float:
    """|c_ee|^2 + sum |c_egk|^2 dk + sum |c_gek|^2 dk + sum |c_kk|^2 dk^2."""
    kg = kgrid or state.kgrid
    p1, p2 = populations(state, kg)
    pee = abs(state.c_ee) ** 2
    return p1 + p2 - pee + two_photon_norm(state.c_kk, state.ckk_grid or kg)


# ---------------------------------------------------------------------------
# brute-force oracle: direct integration of the discretized continuum
# ---------------------------------------------------------------------------

@dataclass
class OracleResult:
    times: np.ndarray
    cee: np.ndarray
    checkpoints: list[TwoExcitationState]
    kgrid: KGrid
    ckk_grid: KGrid


def oracle_full_grid(config: NetworkConfig, kgrid: KGrid, t_end: float,
                     dt: float, ckk_stride: int = 4,
                     checkpoint_times: list[float] | None = None) -> OracleResult:
    """Integrate the full discretized integro-differential system by RK4:
    k-integrals become plain-dk sums, no delay reduction anywhere.

    The two-photon sector runs on (full grid) x (every ckk_stride-th mode) to
    bound memory; checkpoints report its symmetric square restriction.
    """
    validate_config(config)
    if len(config.atoms) != 2:
        raise InvalidGeometry("the two-excitation oracle needs two atoms")
    a1, a2 = config.atoms
    n = len(kgrid)
    sub = kgrid.subsample(ckk_stride)
    sub_idx = np.arange(0, n, ckk_stride)
    m = len(sub)
    dk = kgrid.dk
    dks = sub.dk
    det = kgrid.k_values - config.omega_a
    g1_0 = coupling_row(kgrid, a1)
    g2_0 = coupling_row(kgrid, a2)

    if checkpoint_times is None:
        checkpoint_times = [t_end]
    n_steps = int(np.ceil(t_end / dt - 1e-9))
    chk_steps = sorted({min(n_steps, max(0, int(round(t / dt))))
                        for t in checkpoint_times})

    size = 1 + 2 * n + n * m
    y = np.zeros(size, dtype=complex)
    y[0] = 1.0
    k_bufs = [np.empty(size, dtype=complex) for _ in range(4)]
    y_tmp = np.empty(size, dtype=complex)
    t1 = np.empty((n, m), dtype=complex)

    def rhs(t: float, state: np.ndarray, out: np.ndarray) -> None:
        cee = state[0]
        ce = state[1:1 + n]
        cg = state[1 + n:1 + 2 * n]
        ckk = state[1 + 2 * n:].reshape(n, m)
        ph = np.exp(1j * det * t)
        g1 = g1_0 * ph
        g2 = g2_0 * ph
        g1s = g1[sub_idx]
        g2s = g2[sub_idx]
        out[0] = -1j * dk * (ce @ np.conj(g2) + cg @ np.conj(g1))
        out[1:1 + n] = -1j * cee * g2 - 1j * dks * (ckk @ np.conj(g1s))
        out[1 + n:1 + 2 * n] = -1j * cee * g1 - 1j * dks * (ckk @ np.conj(g2s))
        okk = out[1 + 2 * n:].reshape(n, m)
        np.multiply(ce[:, None], g1s[None, :], out=okk)
        np.multiply(g1[:, None], ce[sub_idx][None, :], out=t1)
        okk += t1
        np.multiply(cg[:, None], g2s[None, :], out=t1)
        okk += t1
        np.multiply(g2[:, None], cg[sub_idx][None, :], out=t1)
        okk += t1
        okk *= -1j

    times = dt * np.arange(n_steps + 1)
    cee_rec = np.empty(n_steps + 1, dtype=complex)
    cee_rec[0] = y[0]
    checkpoints: list[TwoExcitationState] = []

    def snapshot(step: int) -> None:
        ckk = y[1 + 2 * n:].reshape(n, m)
        square = ckk[sub_idx, :] * TWO_PHOTON_SCALE
        square = 0.5 * (square + square.T)   # symmetric up to roundoff
        checkpoints.append(TwoExcitationState(
            c_ee=complex(y[0]), c_egk=y[1:1 + n].copy(),
            c_gek=y[1 + n:1 + 2 * n].copy(), c_kk=square,
            kgrid=kgrid, ckk_grid=sub, t=float(step * dt)))

    if 0 in chk_steps:
        snapshot(0)
    for step in range(n_steps):
        t = step * dt
        rhs(t, y, k_bufs[0])
        np.multiply(k_bufs[0], 0.5 * dt, out=y_tmp)
        y_tmp += y
        rhs(t + 0.5 * dt, y_tmp, k_bufs[1])
        np.multiply(k_bufs[1], 0.5 * dt, out=y_tmp)
        y_tmp += y
        rhs(t + 0.5 * dt, y_tmp, k_bufs[2])
        np.multiply(k_bufs[2], dt, out=y_tmp)
        y_tmp += y
        rhs(t + dt, y_tmp, k_bufs[3])
        k_bufs[1] += k_bufs[2]
        k_bufs[1] *= 2.0
        k_bufs[1] += k_bufs[0]
        k_bufs[1] += k_bufs[3]
        k_bufs[1] *= dt / 6.0
        y += k_bufs[1]
        cee_rec[step + 1] = y[0]
        if (step + 1) % 512 == 0 and not np.all(np.isfinite(y[:1 + 2 * n].view(float))):
            raise NonFiniteState(f"oracle state non-finite at t={(step + 1) * dt}")
        if (step + 1) in chk_steps:
            snapshot(step + 1)

    if not np.all(np.isfinite(y.view(float))):
        raise NonFiniteState("oracle state non-finite at end")
    return OracleResult(times=times, cee=cee_rec, checkpoints=checkpoints,
                        kgrid=kgrid, ckk_grid=sub)


# ---------------------------------------------------------------------------
# theorem-based steady-state classifier
# ---------------------------------------------------------------------------

class SteadyStateLabel(Enum):
    TWO_PHOTON = "TwoPhoton"
    ONE_PHOTON_TRAPPED = "OnePhotonTrapped"
    DARK_STATE = "DarkState"
    MIXED = "Mixed"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class SteadyStateClass:
    """Predicted long-time fate of the network (short-delay limit values)."""

    label: SteadyStateLabel
    cee_limit_sq: float
    pe1_limit: float
    pe2_limit: float
    markov_regime: bool


_NODE_TOL = 1e-6


def _at_node(z: float, omega_a: float) -> bool:
    """z = n pi / omega_a for a positive integer n, within 1e-6."""
    x = z * omega_a / math.pi
    return abs(x - round(x)) < _NODE_TOL and round(x) >= 1


def classify_steady_state(config: NetworkConfig) -> SteadyStateClass:
    """Apply the steady-state predicates in priority order:

    DarkState         nonchiral everywhere and every atom at a node position;
    OnePhotonTrapped  atom 1 nonchiral at a node and atom 2 coupled in
                      exactly one direction;
    TwoPhoton         some atom strictly chiral (forces decay of c_ee);
    Mixed             anything else.

    Warns OutsideMarkovRegimeWarning when the short-delay assumptions that
    back the predicates are violated; the label is still returned.
    """
    validate_config(config)
    wa = config.omega_a
    markov_ok = wa >= 10.0 and all(a.position <= 0.25 for a in config.atoms)
    if not markov_ok:
        warnings.warn(
            "configuration is outside the short-delay regime "
            "(omega_a >= 10 and z_j <= 0.25); classification is the "
            "short-delay prediction and may not match the full dynamics",
            OutsideMarkovRegimeWarning, stacklevel=2)

    atoms = config.atoms
    nonchiral = [not a.is_chiral for a in atoms]
    at_node = [_at_node(a.position, wa) for a in atoms]

    if all(nonchiral) and all(at_node):
        return SteadyStateClass(SteadyStateLabel.DARK_STATE, 1.0, 1.0, 1.0,
                                markov_ok)
    if (len(atoms) == 2 and nonchiral[0] and at_node[0]
            and ((atoms[1].gamma_r > 0.0) != (atoms[1].gamma_l > 0.0))):
        return SteadyStateClass(SteadyStateLabel.ONE_PHOTON_TRAPPED,
                                0.0, 1.0, 0.0, markov_ok)
    if any(a.is_chiral for a in atoms):
        return SteadyStateClass(SteadyStateLabel.TWO_PHOTON, 0.0, 0.0, 0.0,
                                markov_ok)
    rate = -config.gamma_rl + sum(
        a.feedback * math.cos(wa * tau)
        for a, tau in zip(atoms, config.round_trip_delays))
    decays = rate < -1e-12
    lim = 0.0 if decays else 1.0
    return SteadyStateClass(SteadyStateLabel.MIXED, lim, lim, lim, markov_ok)
