"""Differentiable objective functions with values, gradients, and smoothness.

Every objective exposes ``value(x)``, ``gradient(x)``, a dimension ``dim``
and a smoothness constant ``smoothness`` (an upper bound on the Lipschitz
constant of the gradient). ``check_gradient`` compares the analytic gradient
against central finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

__all__ = [
    "QuadraticDistance",
    "ScalarHuber",
    "LeastSquares",
    "LogisticLoss",
    "MatrixHuber",
    "check_gradient",
]


def _check_x(dim: int, x) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != dim:
        raise ValueError(f"point dimension {x.shape[0]} does not match objective dimension {dim}")
    return x


@dataclass(frozen=True)
class QuadraticDistance:
    """f(x) = 0.5 ||x - target||^2."""

    target: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "target", np.asarray(self.target, dtype=float).ravel())

    @property
    def dim(self) -> int:
        return self.target.shape[0]

    @property
    def smoothness(self) -> float:
        return 1.0

    def value(self, x) -> float:
        x = _check_x(self.dim, x)
        return 0.5 * float(np.sum((x - self.target) ** 2))

    def gradient(self, x) -> np.ndarray:
        x = _check_x(self.dim, x)
        return x - self.target


@dataclass(frozen=True)
class ScalarHuber:
    """Scalar Huber function: x^2/2 inside |x| < eps, eps|x| - eps^2/2 outside."""

    eps: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("ScalarHuber eps must be positive")

    dim = 1
    smoothness = 1.0

    def value(self, x) -> float:
        v = float(_check_x(1, x)[0])
        if abs(v) < self.eps:
            return 0.5 * v * v
        return self.eps * abs(v) - 0.5 * self.eps**2

    def gradient(self, x) -> np.ndarray:
        v = float(_check_x(1, x)[0])
        if abs(v) < self.eps:
            return np.array([v])
        return np.array([self.eps if v > 0 else -self.eps])


class LeastSquares:
    """f(x) = 0.5 ||A x - b||^2."""

    def __init__(self, design, response):
        self.design = np.asarray(design, dtype=float)
        self.response = np.asarray(response, dtype=float).ravel()
        if self.design.shape[0] != self.response.shape[0]:
            raise ValueError("design and response row counts differ")
        self.smoothness = float(np.linalg.norm(self.design, 2) ** 2)

    @property
    def dim(self) -> int:
        return self.design.shape[1]

    def value(self, x) -> float:
        x = _check_x(self.dim, x)
        r = self.design @ x - self.response
        return 0.5 * float(r @ r)

    def gradient(self, x) -> np.ndarray:
        x = _check_x(self.dim, x)
        return self.design.T @ (self.design @ x - self.response)


class LogisticLoss:
    """Mean logistic loss over labels in {-1, +1}.

    f(x) = (1/m) sum_i log(1 + exp(-y_i a_i . x)). Using the mean keeps the
    smoothness constant (||A||_2^2 / (4m)) independent of the sample count.
    """

    def __init__(self, features, labels):
        self.features = np.asarray(features, dtype=float)
        self.labels = np.asarray(labels, dtype=float).ravel()
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError("features and labels row counts differ")
        if not np.all(np.isin(self.labels, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")
        m = self.features.shape[0]
        self.smoothness = float(np.linalg.norm(self.features, 2) ** 2) / (4.0 * m)

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def value(self, x) -> float:
        x = _check_x(self.dim, x)
        margins = self.labels * (self.features @ x)
        return float(np.logaddexp(0.0, -margins).mean())

    def gradient(self, x) -> np.ndarray:
        x = _check_x(self.dim, x)
        margins = self.labels * (self.features @ x)
        weights = self.labels * expit(-margins)
        return -(self.features.T @ weights) / self.features.shape[0]


class MatrixHuber:
    """Sum of Huber(delta) residuals on observed entries of a rows x cols matrix.

    Points are flattened matrices. Unobserved entries contribute nothing.
    """

    def __init__(self, entries, rows: int, cols: int, delta: float = 1.0):
        if not delta > 0:
            raise ValueError("MatrixHuber delta must be positive")
        entries = list(entries)
        self.rows = rows
        self.cols = cols
        self.delta = float(delta)
        self._idx = np.array([i * cols + j for i, j, _ in entries], dtype=int)
        self._vals = np.array([v for _, _, v in entries], dtype=float)
        if len(entries) and (self._idx.min() < 0 or self._idx.max() >= rows * cols):
            raise ValueError("entry indices outside matrix shape")
        self.smoothness = 1.0  # Huber curvature is at most 1 per entry

    @property
    def dim(self) -> int:
        return self.rows * self.cols

    def value(self, x) -> float:
        x = _check_x(self.dim, x)
        r = x[self._idx] - self._vals
        a = np.abs(r)
        quad = a < self.delta
        out = np.where(quad, 0.5 * r * r, self.delta * a - 0.5 * self.delta**2)
        return float(out.sum())

    def gradient(self, x) -> np.ndarray:
        x = _check_x(self.dim, x)
        r = x[self._idx] - self._vals
        g = np.zeros(self.dim)
        np.add.at(g, self._idx, np.clip(r, -self.delta, self.delta))
        return g


def check_gradient(obj, x, h: float = 1e-5) -> float:
    """Max relative error of the analytic gradient vs central differences.

    The error at coordinate i is |g_i - fd_i| / max(1, |g_i|). Nonsmooth
    points (Huber kinks) are the caller's responsibility to avoid.
    """
    if not h > 0:
        raise ValueError("finite-difference step h must be positive")
    x = np.asarray(x, dtype=float).ravel()
    g = obj.gradient(x)
    worst = 0.0
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = h
        fd = (obj.value(x + e) - obj.value(x - e)) / (2.0 * h)
        err = abs(g[i] - fd) / max(1.0, abs(g[i]))
        worst = max(worst, err)
    return worst
