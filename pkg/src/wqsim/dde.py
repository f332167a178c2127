"""Fixed-step method-of-steps integrator for complex delay systems.

Classical RK4 stepping; every delayed evaluation c(t - tau) is answered by a
cubic-Hermite interpolant through the stored (state, derivative) nodes, and
queries before the initial instant return the constant pre-history (zero by
default: the field does not exist before t = 0).  The explicit scheme is kept
honest by requiring dt <= min(positive delay)/8, so no stage ever needs
extrapolation into the current step.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NonFiniteState, OutOfRange, StepTooLarge

RhsFunc = Callable[[float, np.ndarray, list[np.ndarray]], np.ndarray]


def dedupe_delays(delays: Sequence[float]) -> tuple[tuple[float, ...], list[int]]:
    """Collapse duplicates and sort ascending; returns (unique sorted delays,
    index of each original delay in that tuple).  Degenerate geometries (for
    example z2 = 3 z1, where a round trip equals the direct inter-atom delay)
    would otherwise violate the distinct-delays contract."""
    unique = sorted({float(d) for d in delays})
    index = [unique.index(float(d)) for d in delays]
    return tuple(unique), index


@dataclass(frozen=True)
class DelaySystem:
    """A pure delay system: dim, sorted distinct delays, and the rhs map.

    rhs(t, y, ydelayed) receives one delayed state per entry of `delays`
    (in the same order) and must return dy/dt without side effects.
    """

    dim: int
    delays: tuple[float, ...]
    rhs: RhsFunc

    def __post_init__(self) -> None:
        d = tuple(float(x) for x in self.delays)
        if any(x < 0 for x in d):
            raise ValueError(f"delays must be >= 0, got {d}")
        if len(set(d)) != len(d):
            raise ValueError(f"delays must be distinct, got {d}")
        if any(a > b for a, b in zip(d, d[1:])):
            raise ValueError(f"delays must be sorted ascending, got {d}")
        object.__setattr__(self, "delays", d)
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")


class HistoryBuffer:
    """Dense history on a uniform grid: states + derivatives, Hermite queries.

    Queries at t < t0 return the designated pre-history value; node hits are
    returned bit-exactly.  May be windowed (rolling) when used as the
    integrator's working history; `offset` tracks discarded leading nodes.
    """

    def __init__(self, dim: int, t0: float, dt: float, prehistory: np.ndarray,
                 capacity: int):
        self.t0 = float(t0)
        self.dt = float(dt)
        self.dim = dim
        self.prehistory = np.asarray(prehistory, dtype=complex).copy()
        self.states = np.empty((capacity, dim), dtype=complex)
        self.derivatives = np.empty((capacity, dim), dtype=complex)
        self.offset = 0      # index of the first retained node
        self.count = 0       # number of nodes ever pushed

    def push(self, y: np.ndarray, dy: np.ndarray) -> None:
        i = self.count - self.offset
        if i >= self.states.shape[0]:
            # rolling window: drop the oldest half
            keep = self.states.shape[0] // 2
            drop = self.states.shape[0] - keep
            self.states[:keep] = self.states[drop:]
            self.derivatives[:keep] = self.derivatives[drop:]
            self.offset += drop
            i -= drop
        self.states[i] = y
        self.derivatives[i] = dy
        self.count += 1

    @property
    def t_last(self) -> float:
        return self.t0 + (self.count - 1) * self.dt

    def sample(self, t: float) -> np.ndarray:
        if t < self.t0:
            return self.prehistory.copy()
        x = (t - self.t0) / self.dt
        nearest = round(x)
        if abs(x - nearest) < 1e-9 and 0 <= nearest <= self.count - 1:
            x = float(nearest)
        i = int(np.floor(x))
        if i >= self.count - 1:
            i = self.count - 1
        s = x - i
        j = i - self.offset
        if j < 0:
            raise OutOfRange(
                f"history at t={t!r} was discarded by the rolling window"
            )
        if s == 0.0:
            return self.states[j].copy()
        h00 = (1.0 + 2.0 * s) * (1.0 - s) ** 2
        h10 = s * (1.0 - s) ** 2
        h01 = s * s * (3.0 - 2.0 * s)
        h11 = s * s * (s - 1.0)
        return (h00 * self.states[j] + h10 * self.dt * self.derivatives[j]
                + h01 * self.states[j + 1] + h11 * self.dt * self.derivatives[j + 1])


@dataclass
class Trajectory:
    """Immutable record of a solve: node states on [0, t_end], dense samples.

    `stride` nodes of the integration grid separate consecutive records, so
    node spacing is stride * dt.  Hermite sampling needs derivatives; they are
    recorded unless the caller opted out to bound memory.
    """

    times: np.ndarray
    states: np.ndarray
    derivatives: np.ndarray | None
    dt: float
    stride: int
    prehistory: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self) -> None:
        self.dim = int(self.states.shape[1])

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def sample(self, t: float) -> np.ndarray:
        """State at time t: prehistory for t < 0, node-exact at grid points,
        cubic Hermite between nodes.  Raises OutOfRange beyond t_end."""
        if t > self.t_end + 1e-12 * max(1.0, abs(self.t_end)):
            raise OutOfRange(f"t={t!r} beyond trajectory end {self.t_end!r}")
        if t < self.times[0]:
            return self.prehistory.copy()
        h = self.dt * self.stride
        x = (t - self.times[0]) / h
        nearest = round(x)
        if abs(x - nearest) < 1e-9 and 0 <= nearest <= len(self.times) - 1:
            x = float(nearest)
        i = min(int(np.floor(x)), len(self.times) - 1)
        s = x - i
        if s == 0.0 or i == len(self.times) - 1:
            return self.states[i].copy()
        if self.derivatives is None:
            raise OutOfRange(
                "trajectory was recorded without derivatives; only node "
                "values can be sampled"
            )
        h00 = (1.0 + 2.0 * s) * (1.0 - s) ** 2
        h10 = s * (1.0 - s) ** 2
        h01 = s * s * (3.0 - 2.0 * s)
        h11 = s * s * (s - 1.0)
        return (h00 * self.states[i] + h10 * h * self.derivatives[i]
                + h01 * self.states[i + 1] + h11 * h * self.derivatives[i + 1])

    def sample_many(self, ts: Sequence[float]) -> np.ndarray:
        return np.stack([self.sample(t) for t in np.asarray(ts, dtype=float)])

    def sample_grid(self, ts: np.ndarray) -> np.ndarray:
        """Vectorized sample over an array of times -> (len(ts), dim).

        Same semantics as `sample`: prehistory before 0, Hermite between
        nodes, OutOfRange beyond t_end.
        """
        ts = np.asarray(ts, dtype=float)
        tol = 1e-12 * max(1.0, abs(self.t_end))
        if np.any(ts > self.t_end + tol):
            bad = float(ts[np.argmax(ts)])
            raise OutOfRange(f"t={bad!r} beyond trajectory end {self.t_end!r}")
        h = self.dt * self.stride
        x = (ts - self.times[0]) / h
        nearest = np.round(x)
        snap = np.abs(x - nearest) < 1e-9
        x = np.where(snap, nearest, x)
        pre_mask = ts < self.times[0]
        x = np.clip(x, 0.0, len(self.times) - 1)
        i = np.floor(x).astype(int)
        i = np.minimum(i, len(self.times) - 2) if len(self.times) > 1 else i * 0
        s = x - i
        on_node = (s == 0.0) | (s == 1.0)
        if self.derivatives is None:
            if not np.all(on_node | pre_mask):
                raise OutOfRange(
                    "trajectory was recorded without derivatives; only node "
                    "values can be sampled"
                )
            out = self.states[i + (s == 1.0)].astype(complex, copy=True)
        else:
            # Hermite weights are exact (1/0) at s = 0 and s = 1, so node
            # hits come out bit-exact without special-casing
            s = s[:, None]
            h00 = (1.0 + 2.0 * s) * (1.0 - s) ** 2
            h10 = s * (1.0 - s) ** 2
            h01 = s * s * (3.0 - 2.0 * s)
            h11 = s * s * (s - 1.0)
            out = (h00 * self.states[i] + h10 * h * self.derivatives[i]
                   + h01 * self.states[i + 1] + h11 * h * self.derivatives[i + 1])
        out[pre_mask] = self.prehistory
        return out


def sample(traj: Trajectory, t: float) -> np.ndarray:
    """Functional alias for Trajectory.sample."""
    return traj.sample(t)


def integrate(system: DelaySystem, prehistory: np.ndarray | complex,
              t_span: tuple[float, float], dt: float,
              initial_state: np.ndarray | complex | None = None,
              record_stride: int = 1, record_derivatives: bool = True,
              check_every: int = 64) -> Trajectory:
    """Integrate a DelaySystem over t_span = (0, T) with fixed step dt.

    The state before t = 0 is the constant `prehistory`; the state AT t = 0
    is `initial_state` (defaults to prehistory), which allows the jump
    initial conditions used by the amplitude equations (zero field history,
    unit initial amplitude).

    Raises StepTooLarge when dt exceeds min(positive delays)/8 and
    NonFiniteState when the state leaves the finite range.
    """
    t0, t_final = t_span
    if t0 != 0.0:
        raise ValueError("t_span must start at 0")
    if t_final <= 0.0 or dt <= 0.0:
        raise ValueError("need T > 0 and dt > 0")
    pos_delays = [d for d in system.delays if d > 0.0]
    if pos_delays:
        bound = min(pos_delays) / 8.0
        if dt > bound * (1.0 + 1e-12):
            raise StepTooLarge(
                f"dt={dt!r} exceeds min(delay)/8 = {bound!r}; "
                "reduce dt or the delay evaluation would need extrapolation"
            )
    if record_stride < 1:
        raise ValueError("record_stride must be >= 1")

    pre = np.atleast_1d(np.asarray(prehistory, dtype=complex))
    if pre.shape != (system.dim,):
        raise ValueError(f"prehistory must have shape ({system.dim},)")
    y = pre.copy() if initial_state is None else \
        np.atleast_1d(np.asarray(initial_state, dtype=complex)).copy()
    if y.shape != (system.dim,):
        raise ValueError(f"initial_state must have shape ({system.dim},)")

    n_steps = int(np.ceil(t_final / dt - 1e-9))
    # working history only needs to reach back one max-delay from the newest
    # stage time; keep double that plus slack before the window rolls
    if pos_delays:
        depth = int(np.ceil(max(system.delays) / dt)) + 4
        capacity = min(n_steps + 1, 2 * depth + 8)
    else:
        capacity = 16
    hist = HistoryBuffer(system.dim, 0.0, dt, pre, capacity)

    zero_idx = [i for i, d in enumerate(system.delays) if d == 0.0]

    def rhs_full(t: float, yy: np.ndarray) -> np.ndarray:
        ydel = [hist.sample(t - tau) for tau in system.delays]
        for i in zero_idx:
            ydel[i] = yy
        out = system.rhs(t, yy, ydel)
        return np.asarray(out, dtype=complex)

    dy = rhs_full(0.0, y)
    hist.push(y, dy)

    n_rec = n_steps // record_stride + 1
    times = np.empty(n_rec)
    states = np.empty((n_rec, system.dim), dtype=complex)
    derivs = np.empty((n_rec, system.dim), dtype=complex) if record_derivatives else None
    times[0], states[0] = 0.0, y
    if derivs is not None:
        derivs[0] = dy
    rec = 1

    half = 0.5 * dt
    for n in range(n_steps):
        t = n * dt
        k1 = dy                       # rhs at the node, reused from the push
        k2 = rhs_full(t + half, y + half * k1)
        k3 = rhs_full(t + half, y + half * k2)
        k4 = rhs_full(t + dt, y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t_new = (n + 1) * dt
        dy = rhs_full(t_new, y)
        hist.push(y, dy)
        if (n + 1) % check_every == 0 or n + 1 == n_steps:
            if not np.all(np.isfinite(y.view(float))):
                raise NonFiniteState(f"non-finite state at t={t_new!r}")
        if (n + 1) % record_stride == 0:
            times[rec], states[rec] = t_new, y
            if derivs is not None:
                derivs[rec] = dy
            rec += 1

    return Trajectory(times=times[:rec], states=states[:rec],
                      derivatives=None if derivs is None else derivs[:rec],
                      dt=dt, stride=record_stride, prehistory=pre)
