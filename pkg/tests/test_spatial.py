import math

import numpy as np
import pytest

from wqsim import (AtomParams, FieldSnapshot, MissingOrigin, NetworkConfig,
                   OutOfRange, check_mirror_boundary, eval_single_atom_field,
                   eval_two_atom_field, field_snapshot, single_atom_packets,
                   single_excitation_norm, solve_cee, solve_single_atom,
                   solve_two_atom_single_excitation, two_atom_packets)

WA = 50.0
ATOM = AtomParams(2.25 * math.pi / WA, 0.1, 0.3)

FIG6 = NetworkConfig(atoms=(AtomParams(1.0, 0.25, 0.25),
                            AtomParams(10.0, 0.1, 0.5)), omega_a=WA)


def solve_atom(atom=ATOM, t_end=3.0, div=64):
    return solve_single_atom(atom, WA, t_end, 2 * atom.position / div)


class TestSingleAtomAmplitude:
    def test_decoupled_frozen(self):
        atom = AtomParams(0.1, 0.0, 0.0)
        traj = solve_single_atom(atom, WA, 2.0, 0.01)
        assert np.abs(traj.states[:, 0] - 1.0).max() == 0.0

    def test_quarter_phase_decay_law(self):
        atom = AtomParams(2.25 * math.pi / WA, 0.2, 0.2)
        traj = solve_atom(atom, t_end=4.0)
        law = np.exp(-0.08 * traj.times)
        assert np.abs(np.abs(traj.states[:, 0]) ** 2 - law).max() < 0.02

    def test_node_atom_stays_excited(self):
        atom = AtomParams(math.pi / WA, 0.2, 0.2)
        traj = solve_atom(atom, t_end=40 * math.pi / WA)
        assert abs(traj.states[-1, 0]) ** 2 >= 0.95

    def test_cross_domain_identity(self):
        # one atom plus a fully decoupled second atom: same delay equation,
        # same engine, same coefficients
        cfg = NetworkConfig(atoms=(ATOM, AtomParams(1.0, 0.0, 0.0)),
                            omega_a=WA)
        dt = 2 * ATOM.position / 64
        a = solve_cee(cfg, 2.0, dt)
        b = solve_single_atom(ATOM, WA, 2.0, dt)
        assert np.abs(a.states[:, 0] - b.states[:, 0]).max() < 1e-10


class TestSingleAtomField:
    def test_mirror_cancellation_at_origin(self):
        traj = solve_atom()
        for t in (0.5, 1.0, 2.9):
            phi_r, phi_l = eval_single_atom_field(0.0, t, traj, ATOM, WA)
            assert abs(phi_r[0] + phi_l[0]) < 1e-10

    def test_ahead_of_light_cone_exactly_zero(self):
        traj = solve_atom()
        t = 1.5
        z = ATOM.position + t + 0.05
        phi_r, phi_l = eval_single_atom_field(z, t, traj, ATOM, WA)
        assert phi_r[0] == 0.0
        assert phi_l[0] == 0.0

    def test_boundary_averaging_at_atom(self):
        traj = solve_atom()
        t = 2.0
        right, _ = single_atom_packets(traj, ATOM, WA)
        f_r = right.segments[0][2]
        g_r = right.segments[1][2]
        u = np.array([t - ATOM.position])
        expected = 0.5 * (f_r(u)[0] + g_r(u)[0])
        phi_r, _ = eval_single_atom_field(ATOM.position, t, traj, ATOM, WA)
        assert phi_r[0] == pytest.approx(expected, rel=1e-12)

    def test_emission_jump_identity(self):
        # g_r(t - z1) - f_r(t - z1) = gamma_r c_e(t) e^{-i omega_a t}
        traj = solve_atom()
        right, _ = single_atom_packets(traj, ATOM, WA)
        f_r, g_r = right.segments[0][2], right.segments[1][2]
        ts = np.linspace(0.1, 2.9, 23)
        u = ts - ATOM.position
        lhs = g_r(u) - f_r(u)
        ce = traj.sample_grid(ts)[:, 0]
        rhs = ATOM.gamma_r * ce * np.exp(-1j * WA * ts)
        assert np.abs(lhs - rhs).max() < 1e-8

    def test_norm_conserved(self):
        traj = solve_atom(t_end=4.0)
        for t in (1.0, 2.5, 4.0):
            norm = single_excitation_norm(
                NetworkConfig(atoms=(ATOM,), omega_a=WA), traj, t)
            assert norm == pytest.approx(1.0, abs=0.01)

    def test_field_needs_recorded_history(self):
        traj = solve_atom(t_end=1.0)
        with pytest.raises(OutOfRange):
            eval_single_atom_field(0.1, 1.5, traj, ATOM, WA)


def solve_fig6(t_end=15.0):
    dt = min(FIG6.delays) / 64
    return solve_two_atom_single_excitation(FIG6, t_end, dt)


class TestTwoAtomSingleExcitation:
    def test_all_decoupled_frozen(self):
        cfg = NetworkConfig(atoms=(AtomParams(1.0, 0.0, 0.0),
                                   AtomParams(10.0, 0.0, 0.0)), omega_a=WA)
        traj = solve_two_atom_single_excitation(cfg, 5.0, 0.03)
        assert np.all(traj.states[:, 0] == 1.0)
        assert np.all(traj.states[:, 1] == 0.0)

    def test_reduces_to_single_atom(self):
        cfg = NetworkConfig(atoms=(AtomParams(1.0, 0.2, 0.3),
                                   AtomParams(10.0, 0.0, 0.0)), omega_a=WA)
        dt = min(cfg.delays) / 64
        traj = solve_two_atom_single_excitation(cfg, 6.0, dt)
        single = solve_single_atom(cfg.atoms[0], WA, 6.0, dt)
        assert np.abs(traj.states[:, 0] - single.states[:, 0]).max() < 1e-12
        assert np.all(traj.states[:, 1] == 0.0)

    def test_second_atom_silent_before_direct_delay(self):
        traj = solve_fig6(t_end=12.0)
        tau_direct = FIG6.atoms[1].position - FIG6.atoms[0].position
        before = traj.times < tau_direct - 1e-9
        assert np.all(traj.states[before, 1] == 0.0)
        after = traj.times >= tau_direct + 1.5
        assert np.abs(traj.states[after, 1]).max() > 0.01

    def test_right_coupling_receives_more(self):
        swapped = NetworkConfig(atoms=(FIG6.atoms[0],
                                       AtomParams(10.0, 0.5, 0.1)),
                                omega_a=WA)
        dt = min(FIG6.delays) / 64
        favored = solve_two_atom_single_excitation(FIG6, 15.0, dt)
        other = solve_two_atom_single_excitation(swapped, 15.0, dt)
        peak_f = np.abs(favored.states[:, 1]).max() ** 2
        peak_o = np.abs(other.states[:, 1]).max() ** 2
        assert peak_f > 2.0 * peak_o

    def test_mirror_cancellation(self):
        traj = solve_fig6()
        for t in (5.0, 12.0):
            phi_r, phi_l = eval_two_atom_field(0.0, t, traj, FIG6)
            assert abs(phi_r[0] + phi_l[0]) < 1e-10

    def test_causality_exact_zero(self):
        traj = solve_fig6()
        t = 12.0
        z = FIG6.atoms[1].position + t + 0.5
        phi_r, phi_l = eval_two_atom_field(z, t, traj, FIG6)
        assert phi_r[0] == 0.0
        assert phi_l[0] == 0.0

    def test_left_packet_source_identity(self):
        # g_l(t + z2) = gamma_2L c_2(t) e^{-i omega_a t}
        traj = solve_fig6()
        _, left = two_atom_packets(traj, FIG6)
        g_l = left.segments[1][2]
        z2 = FIG6.atoms[1].position
        ts = np.linspace(0.5, 4.0, 17)
        lhs = g_l(ts + z2)
        c2 = traj.sample_grid(ts)[:, 1]
        rhs = FIG6.atoms[1].gamma_l * c2 * np.exp(-1j * WA * ts)
        assert np.abs(lhs - rhs).max() < 1e-8

    def test_norm_conserved(self):
        traj = solve_fig6()
        for t in (4.0, 10.0, 15.0):
            norm = single_excitation_norm(FIG6, traj, t)
            assert norm == pytest.approx(1.0, abs=0.02)


class TestPacketShapes:
    def test_single_atom_outgoing_profile(self):
        # emitted density builds up toward the wavefront (earliest, strongest
        # emission travels farthest) and vanishes exactly past it
        traj = solve_atom(t_end=40 * ATOM.position)
        cfg = NetworkConfig(atoms=(ATOM,), omega_a=WA)
        t = traj.t_end
        snap = field_snapshot(cfg, traj, t)
        beyond = snap.z_values > ATOM.position + 1e-9
        z = snap.z_values[beyond]
        dens = np.abs(snap.phi_r[beyond]) ** 2
        front = ATOM.position + t
        peak_frac = (z[np.argmax(dens)] - ATOM.position) / (front - ATOM.position)
        assert peak_frac > 0.75
        assert dens[0] < 0.7 * dens.max()
        assert np.all(dens[z > front + 1e-9] == 0.0)

    def test_two_atom_outgoing_double_front(self):
        # beyond the outer atom the packet shows the direct front at t + z1
        # and the mirror echo switching on at t - z1, two z1 apart
        t = 15.0
        traj = solve_fig6(t_end=t)
        z1 = FIG6.atoms[0].position
        zs = np.array([t - z1 - 0.05, t - z1 + 0.05,
                       t + z1 - 0.1, t + z1 + 0.05])
        phi_r, _ = eval_two_atom_field(zs, t, traj, FIG6)
        dens = np.abs(phi_r) ** 2
        assert dens[3] == 0.0                      # past the direct front
        assert dens[2] > 0.02                      # just inside it
        jump = abs(dens[0] - dens[1])              # echo switches on
        assert jump > 0.3 * dens[1]


class TestSnapshots:
    def test_mirror_residual_and_missing_origin(self):
        traj = solve_fig6(t_end=6.0)
        snap = field_snapshot(FIG6, traj, 6.0)
        assert snap.z_values[0] == 0.0
        assert check_mirror_boundary(snap) < 1e-10
        shifted = FieldSnapshot(t=snap.t, z_values=snap.z_values + 0.5,
                                phi_r=snap.phi_r, phi_l=snap.phi_l)
        with pytest.raises(MissingOrigin):
            check_mirror_boundary(shifted)

    def test_negative_control_detects_violation(self):
        traj = solve_fig6(t_end=6.0)
        snap = field_snapshot(FIG6, traj, 6.0)
        broken = FieldSnapshot(t=snap.t, z_values=snap.z_values,
                               phi_r=snap.phi_r,
                               phi_l=np.zeros_like(snap.phi_l))
        assert check_mirror_boundary(broken) == abs(snap.phi_r[0])
