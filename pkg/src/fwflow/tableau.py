"""Explicit Runge-Kutta tableaus, feasibility certificates, and rate constants.

A tableau (A, beta, omega) with q stages parametrizes a multistep mixing
scheme. The feasibility certificate z = q Gamma (I + A^T Gamma)^(-1) beta
(with Gamma = diag(c / (c + k + omega_i))) guarantees the iterates stay in
the feasible set whenever 0 <= z <= 1 componentwise for every k >= 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

__all__ = [
    "Tableau",
    "Certificate",
    "RateConstants",
    "validate",
    "builtin",
    "builtin_names",
    "certificate",
    "certificate_decay",
    "rate_constants",
]


@dataclass(frozen=True)
class Tableau:
    """Explicit Runge-Kutta tableau: stage matrix A, weights beta, offsets omega."""

    A: np.ndarray
    beta: np.ndarray
    omega: np.ndarray
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "A", np.atleast_2d(np.asarray(self.A, dtype=float)))
        object.__setattr__(self, "beta", np.asarray(self.beta, dtype=float).ravel())
        object.__setattr__(self, "omega", np.asarray(self.omega, dtype=float).ravel())

    @property
    def q(self) -> int:
        return self.beta.shape[0]

    @classmethod
    def from_json(cls, text: str, name: str = "") -> "Tableau":
        """Build a tableau from a JSON document {"A": [[..]], "beta": [..], "omega": [..]}."""
        doc = json.loads(text)
        return cls(A=doc["A"], beta=doc["beta"], omega=doc["omega"], name=name)

    def to_json(self) -> str:
        return json.dumps(
            {"A": self.A.tolist(), "beta": self.beta.tolist(), "omega": self.omega.tolist()}
        )


def validate(t: Tableau) -> None:
    """Raise ValueError naming the first violated tableau invariant."""
    q = t.q
    if t.A.shape != (q, q) or t.omega.shape[0] != q:
        raise ValueError("shape mismatch: A must be q x q and omega length q")
    if abs(float(t.beta.sum()) - 1.0) > 1e-12:
        raise ValueError(f"beta sum is {t.beta.sum()!r}, must be 1")
    if np.any(np.triu(t.A) != 0.0):
        raise ValueError("A is not strictly lower triangular")
    if t.omega[0] != 0.0:
        raise ValueError("omega[0] must be 0")
    if np.any(t.omega < 0.0) or np.any(t.omega > 1.0):
        raise ValueError("omega entries must lie in [0, 1]")


_BUILTINS = {
    "euler": Tableau(A=[[0.0]], beta=[1.0], omega=[0.0], name="euler"),
    "midpoint": Tableau(
        A=[[0.0, 0.0], [0.5, 0.0]],
        beta=[0.0, 1.0],
        omega=[0.0, 0.5],
        name="midpoint",
    ),
    "rk4": Tableau(
        A=[
            [0.0, 0.0, 0.0, 0.0],
            [0.5, 0.0, 0.0, 0.0],
            [0.0, 0.5, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ],
        beta=[1 / 6, 1 / 3, 1 / 3, 1 / 6],
        omega=[0.0, 0.5, 0.5, 1.0],
        name="rk4",
    ),
    "rk38": Tableau(
        A=[
            [0.0, 0.0, 0.0, 0.0],
            [1 / 3, 0.0, 0.0, 0.0],
            [-1 / 3, 1.0, 0.0, 0.0],
            [1.0, -1.0, 1.0, 0.0],
        ],
        beta=[1 / 8, 3 / 8, 3 / 8, 1 / 8],
        omega=[0.0, 1 / 3, 2 / 3, 1.0],
        name="rk38",
    ),
    "rk5": Tableau(
        A=[
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [1 / 4, 0.0, 0.0, 0.0, 0.0, 0.0],
            [1 / 8, 1 / 8, 0.0, 0.0, 0.0, 0.0],
            [0.0, -1 / 2, 1.0, 0.0, 0.0, 0.0],
            [3 / 16, 0.0, 0.0, 9 / 16, 0.0, 0.0],
            [-3 / 7, 2 / 7, 12 / 7, -12 / 7, 8 / 7, 0.0],
        ],
        beta=[7 / 90, 0.0, 32 / 90, 12 / 90, 32 / 90, 7 / 90],
        omega=[0.0, 1 / 4, 1 / 4, 1 / 2, 3 / 4, 1.0],
        name="rk5",
    ),
}


def builtin_names():
    return tuple(_BUILTINS)


def builtin(name: str) -> Tableau:
    """Return a built-in tableau: euler, midpoint, rk4, rk38, or rk5."""
    try:
        return _BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown tableau {name!r}; choose from {sorted(_BUILTINS)}") from None


@dataclass(frozen=True)
class Certificate:
    """Feasibility certificate z at iteration k for schedule constant c."""

    z: np.ndarray
    k: int
    c: float
    in_unit_interval: bool


def _gammas(t: Tableau, c: float, k: int) -> np.ndarray:
    return c / (c + k + t.omega)


def _solve_mixing(t: Tableau, gammas: np.ndarray) -> np.ndarray:
    """Solve (I + A^T Gamma) y = beta; the system is unit upper triangular."""
    M = np.eye(t.q) + t.A.T * gammas[None, :]
    return solve_triangular(M, t.beta, lower=False, unit_diagonal=True)


def certificate(t: Tableau, c: float, k: int) -> Certificate:
    """Compute z = q Gamma (I + A^T Gamma)^(-1) beta for one iteration index."""
    validate(t)
    if c < 1:
        raise ValueError("schedule constant c must be >= 1")
    if k < 1:
        raise ValueError("certificate is defined for k >= 1")
    gammas = _gammas(t, c, k)
    y = _solve_mixing(t, gammas)
    z = t.q * gammas * y
    inside = bool(np.all(z >= 0.0) and np.all(z <= 1.0))
    return Certificate(z=z, k=k, c=c, in_unit_interval=inside)


def certificate_decay(t: Tableau, c: float, k_max: int) -> np.ndarray:
    """Return ||z^(k)||_inf for k = 1..k_max."""
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    return np.array(
        [float(np.max(np.abs(certificate(t, c, k).z))) for k in range(1, k_max + 1)]
    )


@dataclass(frozen=True)
class RateConstants:
    """Constants of the one-step decrease bound and the O(1/k) rate curve."""

    p_max: float
    D2: float
    D3: float
    D4: float
    h0: float
    q: int
    c: float
    L: float
    diam: float
    max_abs_A: float

    def bound(self, k: int) -> float:
        """Guaranteed objective-error bound h0 / (k + 1)."""
        return self.h0 / (k + 1)


def rate_constants(t: Tableau, c: float, L: float, diam: float, h_x0: float = 0.0) -> RateConstants:
    """Rate constants of the worst-case O(1/k) convergence bound.

    p_max is the 2,inf-norm (max column 2-norm) of P^(1) = Gamma (I + A^T Gamma)^(-1)
    at k = 1; then D2 = q p_max diam, D3 = (q max|A|) D2, and
    D4 = (L D2^2 + 2 L D2 D3 + 2 D3) / 2. The rate curve h0/(k+1) starts from
    h0 = max(h_x0, D4 c^2 / (c - 1)), which needs c > 1.
    """
    validate(t)
    if c <= 1:
        raise ValueError("rate constants require c > 1")
    if L <= 0 or diam < 0:
        raise ValueError("L must be positive and diam nonnegative")
    gammas = _gammas(t, c, 1)
    M = np.eye(t.q) + t.A.T * gammas[None, :]
    Minv = solve_triangular(M, np.eye(t.q), lower=False, unit_diagonal=True)
    P = gammas[:, None] * Minv
    p_max = float(np.max(np.linalg.norm(P, axis=0)))
    max_abs_A = float(np.max(np.abs(t.A)))
    c1 = t.q * p_max
    c2 = t.q * max_abs_A
    D2 = c1 * diam
    D3 = c2 * c1 * diam
    D4 = (L * D2**2 + 2.0 * L * D2 * D3 + 2.0 * D3) / 2.0
    h0 = max(h_x0, D4 * c * c / (c - 1.0))
    return RateConstants(
        p_max=p_max,
        D2=D2,
        D3=D3,
        D4=D4,
        h0=h0,
        q=t.q,
        c=c,
        L=L,
        diam=diam,
        max_abs_A=max_abs_A,
    )
