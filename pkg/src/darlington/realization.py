"""State-space realization algebra for proper rational matrix functions.

A realization is a quadruple (A, B, C, D) representing
S(s) = C (sI - A)^{-1} B + D.  This module provides evaluation,
Kalman minimality analysis, series composition, inversion,
para-hermitian conjugation, transposition, SVD-staircase minimal
realization, construction of complex symmetric realizations for
symmetric transfer functions, and the Moebius change of variable that
moves strict contractivity from a finite imaginary point to infinity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DimensionError,
    NotSymmetricError,
    PoleError,
    SubspaceError,
    ValidationError,
)
from .linalg import DEFAULT_RANK_TOL, as_matrix

__all__ = [
    "Realization",
    "DegreeCertificate",
    "evaluate",
    "kalman_check",
    "minimal_realization",
    "compose",
    "invert",
    "para_conjugate",
    "transpose",
    "direct_sum",
    "subrealization",
    "probe_points",
    "transfer_distance",
    "symmetry_residual",
    "symmetrize",
    "mobius_precondition",
]

_PROBE_SEED = 0x5D1F  # fixed so probe grids are reproducible
_PROBE_COUNT = 32


@dataclass(frozen=True)
class Realization:
    """Immutable state-space quadruple (A, B, C, D).

    A is n x n, B is n x m, C is p x n, D is p x m; entries are stored
    as complex128 and must be finite.
    """
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        a = as_matrix(self.a, "A", square=True)
        d = as_matrix(self.d, "D")
        n = a.shape[0]
        p, m = d.shape
        b = np.asarray(self.b, dtype=complex).reshape(n, -1) if n else \
            np.zeros((0, m), dtype=complex)
        c = np.asarray(self.c, dtype=complex).reshape(-1, n) if n else \
            np.zeros((p, 0), dtype=complex)
        if b.shape != (n, m):
            raise DimensionError(f"B must be {n}x{m}, got {b.shape}")
        if c.shape != (p, n):
            raise DimensionError(f"C must be {p}x{n}, got {c.shape}")
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
            raise ValidationError("realization contains non-finite entries")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def outputs(self) -> int:
        return self.d.shape[0]

    @property
    def inputs(self) -> int:
        return self.d.shape[1]

    def poles(self) -> np.ndarray:
        return np.linalg.eigvals(self.a) if self.n else np.zeros(0, dtype=complex)


@dataclass(frozen=True)
class DegreeCertificate:
    """Outcome of the Kalman reachability/observability test."""
    mcmillan_degree: int
    reachable_rank: int
    observable_rank: int
    state_dim: int
    rank_tolerance: float
    reduction_transform: np.ndarray | None = None

    @property
    def minimal(self) -> bool:
        return (self.reachable_rank == self.state_dim
                and self.observable_rank == self.state_dim)


def evaluate(R: Realization, s: complex) -> np.ndarray:
    """Value of the transfer function at s; s = inf returns D.

    Raises PoleError if s lies within the eigenvalue clustering
    tolerance of the spectrum of A.
    """
    if isinstance(s, float) and math.isinf(s):
        return R.d.copy()
    if isinstance(s, complex) and (math.isinf(s.real) or math.isinf(s.imag)):
        return R.d.copy()
    s = complex(s)
    if R.n == 0:
        return R.d.copy()
    lam = R.poles()
    tol = linalg.default_cluster_tol(R.a)
    if np.min(np.abs(lam - s)) <= tol:
        raise PoleError(f"evaluation point {s:g} is within {tol:g} of a pole")
    return R.c @ np.linalg.solve(s * np.eye(R.n) - R.a, R.b) + R.d


def derivative(R: Realization, s: complex) -> np.ndarray:
    """Exact derivative S'(s) = -C (sI-A)^{-2} B of the rational matrix."""
    s = complex(s)
    if R.n == 0:
        return np.zeros_like(R.d)
    M = np.linalg.inv(s * np.eye(R.n) - R.a)
    return -R.c @ M @ M @ R.b


def _system_scale(*mats: np.ndarray) -> float:
    return max([1.0] + [np.linalg.norm(M, 2) for M in mats if M.size])


def _krylov_span(A: np.ndarray, B: np.ndarray, tol: float,
                 scale: float | None = None) -> np.ndarray:
    """Orthonormal basis of the smallest A-invariant subspace containing
    the columns of B (the reachable subspace).

    Rank decisions compare singular values against tol * scale, where
    scale defaults to the overall system magnitude; a self-relative
    threshold would keep numerically-zero input directions alive.
    """
    n = A.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if scale is None:
        scale = _system_scale(A, B)
    An = A / max(1.0, np.linalg.norm(A, 2))
    U, s, _ = np.linalg.svd(B, full_matrices=False)
    V = U[:, s > tol * scale]
    for _ in range(n):
        if V.shape[1] >= n:
            break
        W = An @ V
        W = W - V @ (V.conj().T @ W)
        W = W - V @ (V.conj().T @ W)  # reorthogonalize once
        U, s, _ = np.linalg.svd(W, full_matrices=False)
        new = U[:, s > tol * scale]
        if new.shape[1] == 0:
            break
        V = np.linalg.qr(np.hstack([V, new]))[0]
    return V


def kalman_check(R: Realization, rank_tol: float = DEFAULT_RANK_TOL) -> DegreeCertificate:
    """Ranks of the reachability and observability Krylov subspaces and
    the McMillan degree (rank of the observability x reachability
    product)."""
    n = R.n
    scale = _system_scale(R.a, R.b, R.c)
    V = _krylov_span(R.a, R.b, rank_tol, scale)
    W = _krylov_span(R.a.conj().T, R.c.conj().T, rank_tol, scale)
    reach = V.shape[1]
    obs = W.shape[1]
    if n == 0:
        deg = 0
    else:
        prod = W.conj().T @ V
        s = np.linalg.svd(prod, compute_uv=False) if prod.size else np.zeros(0)
        deg = int(np.sum(s > rank_tol * max(1.0, s[0] if s.size else 0.0)))
    return DegreeCertificate(mcmillan_degree=deg, reachable_rank=reach,
                             observable_rank=obs, state_dim=n,
                             rank_tolerance=rank_tol)


def probe_points(*realizations: Realization, count: int = _PROBE_COUNT,
                 seed: int = _PROBE_SEED) -> np.ndarray:
    """Deterministic probe grid for transfer-function comparisons.

    The union of the fixed imaginary points i*w for
    w in {0, +-0.1, +-1, +-10, +-100} and points drawn to the right of
    every pole of the given realizations (margin 1), avoiding poles.
    """
    poles = np.concatenate([R.poles() for R in realizations]) \
        if realizations else np.zeros(0, dtype=complex)

    def clear(z: complex) -> bool:
        return poles.size == 0 or np.min(np.abs(poles - z)) > 1e-3

    fixed = [1j * w
             for w in (0.0, 0.1, -0.1, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0)
             if clear(1j * w)]
    right = float(np.max(poles.real)) + 1.0 if poles.size else 1.0
    rng = np.random.default_rng(seed)
    extra = []
    while len(extra) < count - len(fixed):
        z = complex(right + 3.0 * rng.random(), 6.0 * (rng.random() - 0.5))
        if clear(z):
            extra.append(z)
    return np.array(fixed + extra)


def transfer_distance(R1: Realization, R2: Realization,
                      points: np.ndarray | None = None) -> float:
    """max over the probe grid of ||R1(s) - R2(s)|| / (1 + ||R1(s)||)."""
    pts = probe_points(R1, R2) if points is None else points
    worst = 0.0
    for s in pts:
        v1 = evaluate(R1, s)
        v2 = evaluate(R2, s)
        worst = max(worst, np.linalg.norm(v1 - v2, 2) / (1.0 + np.linalg.norm(v1, 2)))
    return worst


def symmetry_residual(R: Realization, points: np.ndarray | None = None) -> float:
    """max over the probe grid of ||S(s) - S(s)^T||."""
    pts = probe_points(R) if points is None else points
    return max(np.linalg.norm(evaluate(R, s) - evaluate(R, s).T, 2) for s in pts)


def compose(R1: Realization, R2: Realization) -> Realization:
    """Series product: realization of s -> R1(s) @ R2(s)."""
    if R1.inputs != R2.outputs:
        raise DimensionError(
            f"cannot compose {R1.outputs}x{R1.inputs} with {R2.outputs}x{R2.inputs}")
    n1, n2 = R1.n, R2.n
    A = np.block([[R2.a, np.zeros((n2, n1))],
                  [R1.b @ R2.c, R1.a]])
    B = np.vstack([R2.b, R1.b @ R2.d])
    C = np.hstack([R1.d @ R2.c, R1.c])
    D = R1.d @ R2.d
    return Realization(A, B, C, D)


def invert(R: Realization) -> Realization:
    """Realization of S^{-1}; requires square invertible D."""
    if R.outputs != R.inputs:
        raise DimensionError("inversion requires a square transfer function")
    s = np.linalg.svd(R.d, compute_uv=False)
    if s.size == 0 or s[-1] <= DEFAULT_RANK_TOL * max(1.0, s[0]):
        raise ValidationError("D is singular; the inverse realization formula needs D invertible")
    Dinv = np.linalg.inv(R.d)
    return Realization(R.a - R.b @ Dinv @ R.c, R.b @ Dinv, -Dinv @ R.c, Dinv)


def para_conjugate(R: Realization) -> Realization:
    """Realization of W^*(s) = W(-conj(s))^*, i.e. (-A*, -C*, B*, D*)."""
    return Realization(-R.a.conj().T, -R.c.conj().T, R.b.conj().T, R.d.conj().T)


def transpose(R: Realization) -> Realization:
    """Realization of S^T, i.e. (A^T, C^T, B^T, D^T)."""
    return Realization(R.a.T, R.c.T, R.b.T, R.d.T)


def direct_sum(R1: Realization, R2: Realization) -> Realization:
    """Realization of the block-diagonal function diag(R1(s), R2(s))."""
    n1, n2 = R1.n, R2.n
    A = np.block([[R1.a, np.zeros((n1, n2))], [np.zeros((n2, n1)), R2.a]])
    B = np.block([[R1.b, np.zeros((n1, R2.inputs))],
                  [np.zeros((n2, R1.inputs)), R2.b]])
    C = np.block([[R1.c, np.zeros((R1.outputs, n2))],
                  [np.zeros((R2.outputs, n1)), R2.c]])
    D = np.block([[R1.d, np.zeros((R1.outputs, R2.inputs))],
                  [np.zeros((R2.outputs, R1.inputs)), R2.d]])
    return Realization(A, B, C, D)


def subrealization(R: Realization, rows: slice, cols: slice) -> Realization:
    """View of a block of the transfer function: same (A, *), with the
    selected output rows of C/D and input columns of B/D."""
    return Realization(R.a, R.b[:, cols], R.c[rows, :], R.d[rows, cols])


def minimal_realization(R: Realization, rank_tol: float = DEFAULT_RANK_TOL,
                        check: bool = True) -> tuple[Realization, DegreeCertificate]:
    """Minimal realization via a two-stage SVD staircase.

    Restricts first to the reachable subspace, then cuts the
    unobservable part; the transfer function is preserved, verified on
    the probe grid when ``check`` is set.
    """
    scale = _system_scale(R.a, R.b, R.c)
    V = _krylov_span(R.a, R.b, rank_tol, scale)
    A1, B1, C1 = V.conj().T @ R.a @ V, V.conj().T @ R.b, R.c @ V
    W = _krylov_span(A1.conj().T, C1.conj().T, rank_tol, scale)
    A2, B2, C2 = W.conj().T @ A1 @ W, W.conj().T @ B1, C1 @ W
    out = Realization(A2, B2, C2, R.d)
    cert = kalman_check(out, rank_tol)
    transform = None
    if out.n < R.n:
        # unitary change of coordinates whose leading columns carry the
        # kept subspace; invertible by construction
        K = V @ W
        rest = np.linalg.svd(K, full_matrices=True)[0][:, K.shape[1]:] \
            if K.shape[1] < R.n else np.zeros((R.n, 0))
        transform = np.hstack([K, rest])
    cert = DegreeCertificate(
        mcmillan_degree=cert.mcmillan_degree,
        reachable_rank=cert.reachable_rank,
        observable_rank=cert.observable_rank,
        state_dim=cert.state_dim,
        rank_tolerance=rank_tol,
        reduction_transform=transform)
    if check and transfer_distance(out, R) > 1e-8:
        raise ValidationError(
            "staircase reduction changed the transfer function beyond "
            "tolerance; the rank tolerance is likely unsuitable")
    return out, cert


def symmetrize(R: Realization, rank_tol: float = DEFAULT_RANK_TOL,
               sym_tol: float = 1e-8) -> Realization:
    """Complex symmetric realization (A = A^T, B = C^T, D = D^T) of a
    symmetric transfer function.

    Solves the intertwining equations T A = A^T T, T B = C^T for the
    unique similarity T between the realization and its transpose
    (unique and symmetric because R is minimal), factors T = M^T M by
    Takagi, and returns (M A M^{-1}, M B, C M^{-1}, D).
    """
    if R.outputs != R.inputs:
        raise NotSymmetricError("a symmetric transfer function must be square")
    if symmetry_residual(R) > sym_tol:
        raise NotSymmetricError(
            "transfer function is not symmetric on the probe grid")
    struct = max(np.linalg.norm(R.a - R.a.T, 2),
                 np.linalg.norm(R.b - R.c.T, 2),
                 np.linalg.norm(R.d - R.d.T, 2))
    if struct <= 1e-9 * max(1.0, np.linalg.norm(R.a, 2)):
        return R
    cert = kalman_check(R, rank_tol)
    if not cert.minimal:
        raise ValidationError("symmetrize requires a minimal realization")
    n = R.n
    I = np.eye(n)
    M1 = np.kron(R.a.T, I) - np.kron(I, R.a.T)
    M2 = np.kron(R.b.T, I)
    rhs = np.concatenate([np.zeros(n * n, dtype=complex),
                          R.c.T.flatten(order="F")])
    vecT, *_ = np.linalg.lstsq(np.vstack([M1, M2]), rhs, rcond=None)
    T = vecT.reshape((n, n), order="F")
    T = (T + T.T) / 2
    res = max(np.linalg.norm(T @ R.a - R.a.T @ T, 2),
              np.linalg.norm(T @ R.b - R.c.T, 2))
    if res > 1e-7 * max(1.0, np.linalg.norm(T, 2)):
        raise SubspaceError(
            f"intertwining system residual {res:g}; realization may not be "
            "minimal or the function not symmetric")
    tk = linalg.takagi(T, sym_tol=1e-7)
    if tk.values[0] <= 1e-12 * max(1.0, tk.values[-1]):
        raise SubspaceError("similarity T is numerically singular")
    M = np.diag(np.sqrt(tk.values)) @ tk.u.T
    Minv = np.linalg.inv(M)
    out = Realization(M @ R.a @ Minv, M @ R.b, R.c @ Minv, R.d)
    if transfer_distance(out, R) > 1e-8:
        raise ValidationError("symmetrization changed the transfer function")
    return out


def mobius_precondition(R: Realization, omega0: float,
                        bypass_if_contractive: bool = False) -> Realization:
    """Realization of s -> S(i*omega0 + 1/s).

    The map sends infinity to i*omega0 and the right half-plane onto
    itself, so if S is strictly contractive at i*omega0 the result is
    strictly contractive at infinity, with the same McMillan degree.
    """
    if bypass_if_contractive:
        s = np.linalg.svd(R.d, compute_uv=False)
        if (s.size == 0) or (s[0] < 1.0 - 1e-12):
            return R
    val = evaluate(R, 1j * omega0)  # raises PoleError on a pole
    if np.linalg.norm(val, 2) >= 1.0 - 1e-12:
        raise ValidationError(
            f"S is not strictly contractive at i*{omega0:g} "
            f"(norm {np.linalg.norm(val, 2):g})")
    if R.n == 0:
        return R
    M = np.linalg.inv(R.a - 1j * omega0 * np.eye(R.n))
    return Realization(M, M @ R.b, -R.c @ M, R.d - R.c @ M @ R.b)
