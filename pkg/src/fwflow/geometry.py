"""Feasible sets (compact convex domains) with linear minimization oracles.

Each set supports three operations: ``lmo`` (minimize a linear function over
the set), ``violation`` (constraint slack of a point, 0 inside), and
``diameter`` (sup of pairwise Euclidean distances). Module-level ``lmo``,
``contains`` and ``diameter`` wrap the methods.

Tie-breaking is deterministic everywhere: lowest-index vertex (hulls),
lowest-index coordinate (l1 ball), and sign(0) = +1 (boxes), so trajectories
are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

__all__ = [
    "VertexHull",
    "Box",
    "L1Ball",
    "NuclearBall",
    "lmo",
    "contains",
    "diameter",
]


def _check_gradient(set_dim: int, gradient: np.ndarray) -> np.ndarray:
    g = np.asarray(gradient, dtype=float).ravel()
    if g.shape[0] != set_dim:
        raise ValueError(
            f"gradient dimension {g.shape[0]} does not match set dimension {set_dim}"
        )
    if not np.all(np.isfinite(g)):
        raise ValueError("gradient has non-finite entries")
    return g


@dataclass(frozen=True)
class VertexHull:
    """Convex hull of a finite vertex list (one point per row)."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if v.shape[0] < 1:
            raise ValueError("VertexHull needs at least one vertex")
        object.__setattr__(self, "vertices", v)

    @classmethod
    def from_csv(cls, path) -> "VertexHull":
        """Load vertices from a CSV file, one comma-separated vertex per row."""
        rows = np.loadtxt(path, delimiter=",", ndmin=2)
        return cls(rows)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def lmo(self, gradient) -> np.ndarray:
        g = _check_gradient(self.dim, gradient)
        # argmin returns the first (lowest-index) minimizer on ties
        i = int(np.argmin(self.vertices @ g))
        return self.vertices[i].copy()

    def violation(self, point) -> float:
        x = np.asarray(point, dtype=float).ravel()
        if x.shape[0] != self.dim:
            raise ValueError("point dimension does not match hull dimension")
        # Nonnegative least squares over vertex weights with a sum-to-one row;
        # the residual is ~0 iff x is a convex combination of the vertices.
        system = np.vstack([self.vertices.T, np.ones(self.vertices.shape[0])])
        target = np.concatenate([x, [1.0]])
        _, resid = nnls(system, target)
        return float(resid)

    def diameter(self) -> float:
        v = self.vertices
        diffs = v[:, None, :] - v[None, :, :]
        return float(np.sqrt((diffs**2).sum(axis=2).max()))


@dataclass(frozen=True)
class Box:
    """Axis-aligned box [lower, upper]^dim."""

    lower: float
    upper: float
    dim: int = 1

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError("Box requires lower < upper")
        if self.dim < 1:
            raise ValueError("Box dimension must be >= 1")

    def lmo(self, gradient) -> np.ndarray:
        g = _check_gradient(self.dim, gradient)
        # sign(0) = +1 convention: zero coordinates pick the lower face
        return np.where(g >= 0.0, self.lower, self.upper).astype(float)

    def violation(self, point) -> float:
        x = np.asarray(point, dtype=float).ravel()
        if x.shape[0] != self.dim:
            raise ValueError("point dimension does not match box dimension")
        over = max(0.0, float(np.max(x - self.upper)))
        under = max(0.0, float(np.max(self.lower - x)))
        return max(over, under)

    def diameter(self) -> float:
        return (self.upper - self.lower) * float(np.sqrt(self.dim))


@dataclass(frozen=True)
class L1Ball:
    """l1-norm ball of radius alpha."""

    radius: float
    dim: int

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("L1Ball radius must be positive")
        if self.dim < 1:
            raise ValueError("L1Ball dimension must be >= 1")

    def lmo(self, gradient) -> np.ndarray:
        g = _check_gradient(self.dim, gradient)
        j = int(np.argmax(np.abs(g)))  # lowest index on ties
        s = np.zeros(self.dim)
        s[j] = -self.radius if g[j] >= 0.0 else self.radius
        return s

    def violation(self, point) -> float:
        x = np.asarray(point, dtype=float).ravel()
        if x.shape[0] != self.dim:
            raise ValueError("point dimension does not match ball dimension")
        return max(0.0, float(np.abs(x).sum() - self.radius))

    def diameter(self) -> float:
        return 2.0 * self.radius


@dataclass(frozen=True)
class NuclearBall:
    """Nuclear-norm ball of radius alpha over rows x cols matrices.

    Points are passed flattened (row-major, length rows*cols).
    """

    radius: float
    rows: int
    cols: int

    # power iteration settings for large matrices
    _svd_cutoff = 8
    _power_max_iter = 1000
    _power_tol = 1e-10

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("NuclearBall radius must be positive")
        if self.rows < 1 or self.cols < 1:
            raise ValueError("NuclearBall shape must be positive")

    @property
    def dim(self) -> int:
        return self.rows * self.cols

    def lmo(self, gradient) -> np.ndarray:
        g = _check_gradient(self.dim, gradient)
        G = g.reshape(self.rows, self.cols)
        if np.all(G == 0.0):
            u = np.zeros(self.rows)
            v = np.zeros(self.cols)
            u[0] = v[0] = 1.0
        elif min(self.rows, self.cols) <= self._svd_cutoff:
            U, _, Vt = np.linalg.svd(G, full_matrices=False)
            u, v = U[:, 0], Vt[0]
        else:
            u, v = self._top_singular_pair(G)
        return (-self.radius * np.outer(u, v)).ravel()

    def _top_singular_pair(self, G):
        # power iteration on G^T G from a fixed seeded start vector
        rng = np.random.default_rng(0)
        v = rng.standard_normal(self.cols)
        v /= np.linalg.norm(v)
        rayleigh = 0.0
        for _ in range(self._power_max_iter):
            w = G.T @ (G @ v)
            norm = np.linalg.norm(w)
            if norm == 0.0:
                break
            v = w / norm
            new_rayleigh = float(v @ (G.T @ (G @ v)))
            if abs(new_rayleigh - rayleigh) <= self._power_tol * max(1.0, new_rayleigh):
                rayleigh = new_rayleigh
                break
            rayleigh = new_rayleigh
        Gv = G @ v
        u = Gv / np.linalg.norm(Gv)
        return u, v

    def violation(self, point) -> float:
        x = np.asarray(point, dtype=float).ravel()
        if x.shape[0] != self.dim:
            raise ValueError("point dimension does not match matrix size")
        nuc = float(np.linalg.svd(x.reshape(self.rows, self.cols), compute_uv=False).sum())
        return max(0.0, nuc - self.radius)

    def diameter(self) -> float:
        return 2.0 * self.radius


def lmo(feasible_set, gradient) -> np.ndarray:
    """Return argmin over s in the set of gradient . s."""
    return feasible_set.lmo(gradient)


def contains(feasible_set, point, tol: float = 1e-9) -> bool:
    """True iff the point is within constraint slack ``tol`` of the set."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return feasible_set.violation(point) <= tol


def diameter(feasible_set) -> float:
    """Euclidean diameter of the set."""
    return feasible_set.diameter()
