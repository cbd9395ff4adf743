"""Iteration schemes: Frank-Wolfe, flow discretization, Runge-Kutta multistep,
line-search and momentum variants, plus the driver loop.

All steps share the update form x + coefficient * (target - x) so that the
Euler tableau, the plain FW step and the unit-step flow step produce
bit-identical iterates.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .tableau import Tableau, validate

__all__ = [
    "StepSchedule",
    "Trajectory",
    "TrajectoryRecord",
    "RKStageState",
    "gamma_discrete",
    "fw_step",
    "flow_step",
    "rk_step",
    "fw_gap",
    "line_search_gamma",
    "momentum_step",
    "run",
]

FEASIBILITY_TOL = 1e-9


@dataclass(frozen=True)
class StepSchedule:
    """Mixing-coefficient family gamma(k) = c/(c+k), gamma(t) = c/(c+t)."""

    c: float = 2.0
    delta: float = 1.0

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("schedule constant c must be >= 1")
        if not 0.0 < self.delta <= 1.0:
            raise ValueError("discretization unit delta must be in (0, 1]")

    def gamma(self, k: int) -> float:
        if k < 0:
            raise ValueError("iteration index must be >= 0")
        return self.c / (self.c + k)

    def gamma_t(self, t: float) -> float:
        if t < 0:
            raise ValueError("time must be >= 0")
        return self.c / (self.c + t)


def gamma_discrete(sched: StepSchedule, k: int) -> float:
    """Discrete mixing coefficient c/(c+k)."""
    return sched.gamma(k)


@dataclass
class TrajectoryRecord:
    k: int
    t: float
    x: np.ndarray
    f_value: float
    fw_gap: float
    feas_violation: float
    stage_count: int


@dataclass
class Trajectory:
    """Time-stamped iterate sequence with per-step metrics."""

    records: list = field(default_factory=list)
    delta: float = 1.0
    method: str = ""

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def xs(self) -> np.ndarray:
        return np.array([r.x for r in self.records])

    def fs(self) -> np.ndarray:
        return np.array([r.f_value for r in self.records])

    def gaps(self) -> np.ndarray:
        return np.array([r.fw_gap for r in self.records])

    def ks(self) -> np.ndarray:
        return np.array([r.k for r in self.records])

    def max_violation(self) -> float:
        return max(r.feas_violation for r in self.records)

    def to_csv(self, target) -> None:
        """Write iter,t,f,gap,feas_violation rows with 17 significant digits."""
        if isinstance(target, (str,)) or hasattr(target, "__fspath__"):
            with open(target, "w", newline="\n") as fh:
                self._write_csv(fh)
        else:
            self._write_csv(target)

    def _write_csv(self, fh) -> None:
        fh.write("iter,t,f,gap,feas_violation\n")
        for r in self.records:
            fh.write(
                f"{r.k},{r.t:.17g},{r.f_value:.17g},{r.fw_gap:.17g},{r.feas_violation:.17g}\n"
            )

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        self._write_csv(buf)
        return buf.getvalue()


@dataclass
class RKStageState:
    """Per-stage internals of one Runge-Kutta step, kept for diagnostics."""

    xi: list
    xbar: list
    sbar: list
    gamma_tilde: np.ndarray


def _require_feasible(fset, x):
    if fset.violation(x) > FEASIBILITY_TOL:
        raise ValueError("iterate is outside the feasible set")


def fw_step(obj, fset, x, k: int, sched: StepSchedule) -> np.ndarray:
    """One vanilla Frank-Wolfe step: mix the LMO vertex in with weight gamma(k)."""
    x = np.asarray(x, dtype=float)
    _require_feasible(fset, x)
    s = fset.lmo(obj.gradient(x))
    gamma = sched.gamma(k)
    return x + gamma * (s - x)


def flow_step(obj, fset, x, t: float, sched: StepSchedule) -> np.ndarray:
    """Euler step of the continuous flow: x + delta * gamma(t) * (s - x).

    gamma is evaluated at the left endpoint of the time step. With delta = 1
    and t = k this is exactly ``fw_step``.
    """
    x = np.asarray(x, dtype=float)
    _require_feasible(fset, x)
    s = fset.lmo(obj.gradient(x))
    coef = sched.delta * sched.gamma_t(t)
    return x + coef * (s - x)


def rk_step(obj, fset, x, k: int, sched: StepSchedule, t: Tableau):
    """One generalized Runge-Kutta multistep update.

    Stages run in order; stage i evaluates the LMO at
    xbar_i = x + sum_j A_ij xi_j and scales the direction by
    gamma_tilde_i = c/(c+k+omega_i). Returns (x_next, RKStageState).
    """
    validate(t)
    if k < 1:
        raise ValueError("RK steps use schedule indices k >= 1")
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("iterate has non-finite entries")
    gamma_tilde = sched.c / (sched.c + k + t.omega)
    xi, xbars, sbars = [], [], []
    for i in range(t.q):
        xb = x.copy()
        for j in range(i):
            if t.A[i, j] != 0.0:
                xb = xb + t.A[i, j] * xi[j]
        s = fset.lmo(obj.gradient(xb))
        xi.append(gamma_tilde[i] * (s - xb))
        xbars.append(xb)
        sbars.append(s)
    incr = t.beta[0] * xi[0]
    for i in range(1, t.q):
        incr = incr + t.beta[i] * xi[i]
    state = RKStageState(xi=xi, xbar=xbars, sbar=sbars, gamma_tilde=gamma_tilde)
    return x + incr, state


def fw_gap(obj, fset, x) -> float:
    """Frank-Wolfe gap grad(x) . (x - s); upper-bounds f(x) - f* for convex f."""
    x = np.asarray(x, dtype=float)
    g = obj.gradient(x)
    s = fset.lmo(g)
    return float(g @ (x - s))


def _sublevel_max(obj, x, d, k: int, slack: float = 1e-14):
    """Largest gamma in [0, 1] keeping f(x + gamma d) <= f(x) + slack.

    Exponential probing doubles from 2/(2+k) up to 1, then 60 bisection steps
    pin the sublevel boundary. Returns (gamma_bar, hit_upper_clip).
    """
    fx = obj.value(x)

    def ok(g):
        return obj.value(x + g * d) <= fx + slack

    fallback = min(2.0 / (2.0 + k), 1.0)
    g = fallback
    if not ok(g):
        lo, hi = 0.0, g
    else:
        lo = g
        while lo < 1.0:
            g = min(1.0, 2.0 * g)
            if ok(g):
                lo = g
            else:
                break
        if lo >= 1.0:
            return 1.0, True
        hi = g
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo, False


def line_search_gamma(obj, x, d, k: int) -> float:
    """Aggressive step length max{2/(2+k), gamma_bar}.

    gamma_bar is the largest gamma in [0, 1] for which f does not increase
    along d (located by exponential probing plus bisection on the sublevel
    boundary; for convex f the sublevel set in gamma is an interval).
    """
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    if not np.all(np.isfinite(d)):
        raise ValueError("search direction has non-finite entries")
    gamma_bar, _ = _sublevel_max(obj, x, d, k)
    return max(min(2.0 / (2.0 + k), 1.0), gamma_bar)


def _descent_gamma(obj, x, d, k: int) -> float:
    """Monotone step length used by the +linesearch solver variants.

    Takes the midpoint of the sublevel interval [0, gamma_bar] (the exact
    minimizer when f is quadratic along d; never increases f for convex f),
    or the full step when gamma_bar clips at 1.
    """
    gamma_bar, clipped = _sublevel_max(obj, x, d, k)
    return gamma_bar if clipped else 0.5 * gamma_bar


def momentum_step(obj, fset, x, m_prev, k: int, sched: StepSchedule):
    """Momentum Frank-Wolfe step: the LMO sees an averaged gradient.

    m = (1 - d_k) m_prev + d_k grad(x) with d_k = 2/(k+2); then the usual
    mixing update with s = lmo(m). Returns (x_next, m).
    """
    x = np.asarray(x, dtype=float)
    m_prev = np.asarray(m_prev, dtype=float)
    if m_prev.shape != x.shape:
        raise ValueError("momentum buffer dimension does not match x")
    d_k = 2.0 / (k + 2.0)
    m = (1.0 - d_k) * m_prev + d_k * obj.gradient(x)
    s = fset.lmo(m)
    gamma = sched.gamma(k)
    return x + gamma * (s - x), m


METHODS = ("fw", "flow", "rk", "rk+linesearch", "fw+linesearch", "fw+momentum")


def run(
    obj,
    fset,
    x0,
    method: str,
    sched: StepSchedule,
    max_iter: int,
    stop_gap: float = 0.0,
    tableau: Tableau | None = None,
) -> Trajectory:
    """Drive one solver over max_iter steps, recording every iterate.

    RK schedule indices start at k = 1; everything else starts at k = 0.
    Stops early once fw_gap <= stop_gap (stop_gap = 0 disables the check).
    Feasibility is monitored (recorded per step), never enforced.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    needs_tableau = method in ("rk", "rk+linesearch")
    if needs_tableau:
        if tableau is None:
            raise ValueError(f"method {method!r} requires a tableau")
        validate(tableau)
    x = np.asarray(x0, dtype=float).copy()
    if fset.violation(x) > FEASIBILITY_TOL:
        raise ValueError("x0 is outside the feasible set")

    delta = sched.delta if method == "flow" else 1.0
    stage_count = tableau.q if needs_tableau else 1
    m = np.zeros_like(x)  # momentum buffer
    traj = Trajectory(delta=delta, method=method)

    for j in range(max_iter + 1):
        g = obj.gradient(x)
        s = fset.lmo(g)
        gap = float(g @ (x - s))
        traj.records.append(
            TrajectoryRecord(
                k=j,
                t=j * delta,
                x=x.copy(),
                f_value=obj.value(x),
                fw_gap=gap,
                feas_violation=fset.violation(x),
                stage_count=0 if j == 0 else stage_count,
            )
        )
        if j == max_iter:
            break
        if stop_gap > 0.0 and gap <= stop_gap:
            break

        if method == "fw":
            x = x + sched.gamma(j) * (s - x)
        elif method == "flow":
            coef = sched.delta * sched.gamma_t(j * delta)
            x = x + coef * (s - x)
        elif method == "fw+linesearch":
            d = s - x
            x = x + _descent_gamma(obj, x, d, j) * d
        elif method == "fw+momentum":
            d_k = 2.0 / (j + 2.0)
            m = (1.0 - d_k) * m + d_k * g
            sm = fset.lmo(m)
            x = x + sched.gamma(j) * (sm - x)
        elif method == "rk":
            x, _ = rk_step(obj, fset, x, j + 1, sched, tableau)
        else:  # rk+linesearch
            x = _rk_linesearch_step(obj, fset, x, j + 1, j, sched, tableau)
    return traj


def _rk_linesearch_step(obj, fset, x, k: int, k_ls: int, sched: StepSchedule, t: Tableau):
    """RK step with a per-stage line search on each stage coefficient.

    Stage i uses gamma_i = max(gamma_tilde_i, descent line search from the
    stage point along s_i - xbar_i); the stage increments are then combined
    with the beta weights as usual.
    """
    gamma_tilde = sched.c / (sched.c + k + t.omega)
    xi = []
    for i in range(t.q):
        xb = x.copy()
        for j in range(i):
            if t.A[i, j] != 0.0:
                xb = xb + t.A[i, j] * xi[j]
        s = fset.lmo(obj.gradient(xb))
        d = s - xb
        gamma = max(gamma_tilde[i], _descent_gamma(obj, xb, d, k_ls))
        xi.append(gamma * d)
    incr = t.beta[0] * xi[0]
    for i in range(1, t.q):
        incr = incr + t.beta[i] * xi[i]
    return x + incr
