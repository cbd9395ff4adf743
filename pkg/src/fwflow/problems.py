"""Canonical benchmark problems wiring objectives to feasible sets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import gen_lowrank, gen_sensing
from .geometry import Box, L1Ball, NuclearBall, VertexHull
from .objectives import LeastSquares, LogisticLoss, MatrixHuber, QuadraticDistance, ScalarHuber

__all__ = [
    "Problem",
    "triangle",
    "scalar_box",
    "scalar_huber",
    "sensing_least_squares",
    "sensing_logistic",
    "lowrank_huber",
]


@dataclass(frozen=True)
class Problem:
    """An objective, a feasible set, a start point, and the optimal value if known."""

    name: str
    objective: object
    feasible_set: object
    x0: np.ndarray
    f_star: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "x0", np.asarray(self.x0, dtype=float).ravel())


def triangle() -> Problem:
    """Quadratic distance to a boundary point of a triangle.

    The optimum x* = (0.2, 0) sits on the bottom edge, so late iterations
    zig-zag between the two bottom vertices — the classic slow regime.
    """
    hull = VertexHull([[-1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    obj = QuadraticDistance(target=[0.2, 0.0])
    return Problem("triangle", obj, hull, x0=[-0.4, 0.3], f_star=0.0)


def scalar_box() -> Problem:
    """f(x) = x^2/2 on [-1, 1], started at 1; the 1/k lower-bound probe problem."""
    obj = QuadraticDistance(target=[0.0])
    return Problem("scalar_box", obj, Box(-1.0, 1.0, dim=1), x0=[1.0], f_star=0.0)


def scalar_huber(eps: float = 0.1) -> Problem:
    """Huber variant of the scalar box problem (same LMO dynamics)."""
    return Problem("scalar_huber", ScalarHuber(eps), Box(-1.0, 1.0, dim=1), x0=[1.0], f_star=0.0)


def sensing_least_squares(
    m: int = 500,
    n: int = 100,
    sparsity: float = 0.1,
    noise_sd: float = 0.0,
    radius: float = 1000.0,
    seed: int = 0,
) -> Problem:
    """l1-constrained least squares on a synthetic sensing dataset."""
    ds, _ = gen_sensing(m, n, sparsity, noise_sd, seed)
    obj = LeastSquares(ds.features, ds.labels_or_response)
    return Problem("sensing", obj, L1Ball(radius, n), x0=np.zeros(n))


def sensing_logistic(
    m: int = 500,
    n: int = 100,
    sparsity: float = 0.1,
    noise_sd: float = 0.0,
    radius: float = 10.0,
    seed: int = 0,
) -> Problem:
    """l1-constrained logistic regression; labels are the sign of the response.

    The default radius of 10 keeps the optimum on the l1 boundary without
    saturating the loss, which is the regime where zig-zagging is visible.
    """
    ds, _ = gen_sensing(m, n, sparsity, noise_sd, seed)
    labels = np.where(ds.labels_or_response >= 0.0, 1.0, -1.0)
    obj = LogisticLoss(ds.features, labels)
    return Problem("logistic", obj, L1Ball(radius, n), x0=np.zeros(n))


def lowrank_huber(
    users: int = 20,
    items: int = 15,
    rank: int = 2,
    observed_fraction: float = 0.5,
    noise_sd: float = 0.1,
    radius: float = 50.0,
    delta: float = 1.0,
    seed: int = 0,
) -> Problem:
    """Nuclear-norm constrained Huber regression on synthetic low-rank ratings."""
    ds = gen_lowrank(users, items, rank, observed_fraction, noise_sd, seed)
    obj = MatrixHuber(ds.entries, users, items, delta=delta)
    fset = NuclearBall(radius, users, items)
    return Problem("lowrank", obj, fset, x0=np.zeros(users * items))


BUILDERS = {
    "triangle": triangle,
    "scalar_box": scalar_box,
    "scalar_huber": scalar_huber,
    "sensing": sensing_least_squares,
    "logistic": sensing_logistic,
    "lowrank": lowrank_huber,
}
