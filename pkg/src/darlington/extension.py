"""Degree-preserving inner extensions and symmetric unitary extensions.

Every Hermitian solution P of the Riccati equation yields a 2p x 2p
inner function sharing the dynamics matrix A of the embedded Schur
function S:

    [[A | B1, B], [C1; C | DD]],   DD = [[-D*, (I-D*D)^{1/2}],
                                         [(I-DD*)^{1/2}, D]],

    B1 = -(P C* + B D*) (I - D D*)^{-1/2},
    C1 = -(I - D* D)^{-1/2} (B* P^{-1} + D* C).

Two such extensions with the same S block differ by the unitary factor
Q = S21^{-1} S21~ whose degree equals rank(P~ - P) and which is inner
exactly when P~ >= P.  For a symmetric realization of a symmetric S,
right-multiplying an extension by diag(Q, I) with Q = S21^{-1} S12^T
(that is, P~ = P^{-T}) produces a symmetric extension, unitary on the
imaginary axis.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionError, NotSymmetricError, ValidationError
from .realization import (
    Realization,
    compose,
    direct_sum,
    evaluate,
    minimal_realization,
    subrealization,
    symmetry_residual,
)
from .riccati import HatData, RiccatiSolution, build_hat, riccati_residual

__all__ = [
    "ExtensionBlocks",
    "QFactor",
    "frequency_grid",
    "innerness_residual",
    "unitary_axis_residual",
    "build_extension",
    "apply_gauge",
    "extension_from_left_factor",
    "compare_extensions",
    "symmetric_unitary_extension",
]


def frequency_grid() -> np.ndarray:
    """Standard 61-point frequency grid: 0 and +-j*10^k for
    j in {1, 1.5, 2, 3, 5, 7.5} and k in {-2, ..., 2}."""
    mags = [j * 10.0 ** k for k in range(-2, 3) for j in (1.0, 1.5, 2.0, 3.0, 5.0, 7.5)]
    return np.array([0.0] + [w for m in mags for w in (m, -m)])


def innerness_residual(R: Realization, grid: np.ndarray | None = None) -> float:
    """max over the frequency grid of || T(iw) T(iw)* - I ||."""
    grid = frequency_grid() if grid is None else grid
    p = R.outputs
    worst = 0.0
    for w in grid:
        T = evaluate(R, 1j * w)
        worst = max(worst, np.linalg.norm(T @ T.conj().T - np.eye(p), 2))
    return worst


def unitary_axis_residual(R: Realization, grid: np.ndarray | None = None) -> float:
    """Alias of innerness_residual: unitarity on the imaginary axis
    (stability not implied)."""
    return innerness_residual(R, grid)


@dataclass(frozen=True)
class ExtensionBlocks:
    """A 2p x 2p inner extension S_P of S with its constant blocks.

    ``realization`` is the full extension (state dimension n); the
    S block sits in the lower-right p x p corner.  ``z`` is the closed
    loop A_hat + P C_hat* C_hat (the dynamics of S21^{-1}).
    """
    realization: Realization
    p: int
    b1: np.ndarray
    c1: np.ndarray
    d11: np.ndarray
    d12: np.ndarray
    d21: np.ndarray
    p_matrix: np.ndarray
    z: np.ndarray
    hat: HatData
    residual_norm: float

    @property
    def s11(self) -> Realization:
        return subrealization(self.realization, slice(0, self.p), slice(0, self.p))

    @property
    def s12(self) -> Realization:
        return subrealization(self.realization, slice(0, self.p), slice(self.p, 2 * self.p))

    @property
    def s21(self) -> Realization:
        return subrealization(self.realization, slice(self.p, 2 * self.p), slice(0, self.p))

    @property
    def s22(self) -> Realization:
        return subrealization(self.realization, slice(self.p, 2 * self.p),
                              slice(self.p, 2 * self.p))

    @property
    def value_at_infinity(self) -> np.ndarray:
        return self.realization.d


@dataclass(frozen=True)
class QFactor:
    """Quotient Q = S21^{-1} S21~ of the left spectral factors of two
    extensions; unitary on the imaginary axis, already state-space
    minimized."""
    realization: Realization
    degree: int
    inner_flag: bool
    gamma_rank: int
    unitary_residual: float


def _as_p_matrix(P) -> np.ndarray:
    if isinstance(P, RiccatiSolution):
        return P.p
    return np.asarray(P, dtype=complex)


def build_extension(R: Realization, P, residual_tol: float = 1e-8,
                    inner_tol: float = 1e-8) -> ExtensionBlocks:
    """Inner 2p x 2p extension of S associated with a Riccati solution P.

    Parameters
    ----------
    R : Realization
        Minimal realization of a Schur function, strictly contractive
        at infinity.
    P : RiccatiSolution or array_like
        Hermitian positive-definite solution; its residual is verified
        against ``residual_tol * (1 + ||P||^2)``.

    Returns
    -------
    ExtensionBlocks
        The extension has the same McMillan degree as S, a unitary
        value at infinity, and passes the innerness check on the
        standard frequency grid.
    """
    hat = build_hat(R)
    Pm = _as_p_matrix(P)
    Pm = (Pm + Pm.conj().T) / 2
    res = riccati_residual(hat, Pm)
    if res > residual_tol * (1.0 + np.linalg.norm(Pm, 2) ** 2):
        raise ValidationError(
            f"Riccati residual {res:g} too large for an inner extension")
    w = np.linalg.eigvalsh(Pm)
    if w.size and w[0] <= 0:
        raise ValidationError("P must be positive definite")
    p = R.outputs
    Ip = np.eye(p)
    d21 = linalg.hermitian_sqrt(Ip - R.d @ R.d.conj().T)
    d12 = linalg.hermitian_sqrt(Ip - R.d.conj().T @ R.d)
    d11 = -R.d.conj().T
    Pinv = np.linalg.inv(Pm)
    c1 = -np.linalg.inv(d12) @ (R.b.conj().T @ Pinv + R.d.conj().T @ R.c)
    b1 = -(Pm @ R.c.conj().T + R.b @ R.d.conj().T) @ np.linalg.inv(d21)
    big = Realization(R.a,
                      np.hstack([b1, R.b]),
                      np.vstack([c1, R.c]),
                      np.block([[d11, d12], [d21, R.d]]))
    DD = big.d
    if np.linalg.norm(DD @ DD.conj().T - np.eye(2 * p), 2) > 1e-10:
        raise ValidationError("value at infinity is not unitary")
    resid = innerness_residual(big)
    if resid > inner_tol:
        raise ValidationError(
            f"extension fails the innerness check (residual {resid:g})")
    z = hat.a_hat + Pm @ hat.csc
    return ExtensionBlocks(realization=big, p=p, b1=b1, c1=c1, d11=d11,
                           d12=d12, d21=d21, p_matrix=Pm, z=z, hat=hat,
                           residual_norm=res)


def apply_gauge(E: ExtensionBlocks, U1, U2) -> ExtensionBlocks:
    """Constant unitary gauge diag(U2, I) S_P diag(U1, I); preserves
    innerness and the S block."""
    p = E.p
    U1 = np.asarray(U1, dtype=complex)
    U2 = np.asarray(U2, dtype=complex)
    for name, U in (("U1", U1), ("U2", U2)):
        if U.shape != (p, p):
            raise DimensionError(f"{name} must be {p}x{p}")
        if np.linalg.norm(U @ U.conj().T - np.eye(p), 2) > 1e-10:
            raise ValidationError(f"{name} is not unitary")
    R = E.realization
    b1 = E.b1 @ U1
    c1 = U2 @ E.c1
    d11 = U2 @ E.d11 @ U1
    d12 = U2 @ E.d12
    d21 = E.d21 @ U1
    big = Realization(R.a,
                      np.hstack([b1, R.b[:, p:]]),
                      np.vstack([c1, R.c[p:, :]]),
                      np.block([[d11, d12], [d21, R.d[p:, p:]]]))
    return ExtensionBlocks(realization=big, p=p, b1=b1, c1=c1, d11=d11,
                           d12=d12, d21=d21, p_matrix=E.p_matrix, z=E.z,
                           hat=E.hat, residual_norm=E.residual_norm)


def extension_from_left_factor(R: Realization, S21: Realization,
                               match_tol: float = 1e-8) -> ExtensionBlocks:
    """Unique inner extension of S whose lower-left block is a given
    minimal left spectral factor of I - S S*.

    S21 must share the dynamics and output matrices of R (realization
    [S21 S] = (A | [B1 B]; C | [D21 D])) and take the normalized value
    (I - D D*)^{1/2} at infinity.  P is recovered from the Lyapunov
    equation A P + P A* + B1 B1* + B B* = 0, which has a unique
    (Hermitian, positive definite) solution since A is stable.
    """
    import scipy.linalg as sla

    if S21.n != R.n or not (np.allclose(S21.a, R.a, atol=1e-12) and
                            np.allclose(S21.c, R.c, atol=1e-12)):
        raise ValidationError(
            "S21 must share the (C, A) pair of the realization of S")
    p = R.outputs
    d21_expected = linalg.hermitian_sqrt(np.eye(p) - R.d @ R.d.conj().T)
    if np.linalg.norm(S21.d - d21_expected, 2) > match_tol:
        raise ValidationError(
            "S21 has the wrong value at infinity; expected (I - DD*)^{1/2}")
    lam = R.poles()
    if lam.size and np.min(np.abs(lam.real)) < 1e-10:
        raise ValidationError(
            "A has an (almost) imaginary eigenvalue; the Lyapunov "
            "equation is singular")
    B1 = S21.b
    G = B1 @ B1.conj().T + R.b @ R.b.conj().T
    P = sla.solve_sylvester(R.a, R.a.conj().T, -G)
    P = (P + P.conj().T) / 2
    E = build_extension(R, P)
    if np.linalg.norm(E.b1 - B1, 2) > match_tol * (1.0 + np.linalg.norm(B1, 2)):
        raise ValidationError(
            "the given S21 is not a minimal left spectral factor of "
            "I - S S* (input matrix mismatch after the Lyapunov solve)")
    return E


def compare_extensions(E1: ExtensionBlocks, E2: ExtensionBlocks,
                       rank_tol: float = linalg.DEFAULT_RANK_TOL) -> QFactor:
    """Unitary quotient Q = S21^{-1} S21~ of two extensions of the same S.

    Q is realized on the closed loop Z of the first extension as
    (Z | (P~-P) C* D21^{-1}; -D21^{-1} C | I) and then state-space
    minimized; its degree equals rank(P~ - P) and it is inner exactly
    when P~ >= P in the Loewner order.  The pole-location certificate is
    cross-checked against the order test; on disagreement the order
    test wins and a warning is emitted.
    """
    if E1.p != E2.p:
        raise DimensionError("extensions have different block sizes")
    R1, R2 = E1.s22, E2.s22
    same = (R1.n == R2.n and np.allclose(R1.a, R2.a, atol=1e-10)
            and np.allclose(R1.b, R2.b, atol=1e-10)
            and np.allclose(R1.c, R2.c, atol=1e-10)
            and np.allclose(R1.d, R2.d, atol=1e-10))
    if not same:
        raise ValidationError("extensions do not share the same S block")
    p = E1.p
    gamma = E2.p_matrix - E1.p_matrix
    sv = linalg.svd_analysis(gamma, rank_tol=max(rank_tol, 1e-11))
    scale = max(1.0, np.linalg.norm(E1.p_matrix, 2), np.linalg.norm(E2.p_matrix, 2))
    grank = int(np.sum(sv.singular_values > max(rank_tol, 1e-11) * scale))
    d21inv = np.linalg.inv(E1.d21)
    raw = Realization(E1.z, gamma @ R1.c.conj().T @ d21inv,
                      -d21inv @ R1.c, np.eye(p))
    Qmin, cert = minimal_realization(raw, rank_tol=1e-8)
    if cert.mcmillan_degree != grank:
        raise ValidationError(
            f"degree of Q ({cert.mcmillan_degree}) does not equal "
            f"rank(P~ - P) = {grank}")
    ures = unitary_axis_residual(Qmin)
    if ures > 1e-8:
        raise ValidationError(
            f"Q is not unitary on the imaginary axis (residual {ures:g})")
    order = linalg.hermitian_order(E1.p_matrix, E2.p_matrix)
    inner = order in ("less_equal", "equal")
    if Qmin.n:
        poles = Qmin.poles()
        pole_inner = bool(np.all(poles.real < 1e-7 * (1 + np.max(np.abs(poles)))))
        if pole_inner != inner:
            warnings.warn(
                f"innerness certificates disagree for Q (Loewner order says "
                f"{inner}, pole locations say {pole_inner}); keeping the "
                "order verdict")
    return QFactor(realization=Qmin, degree=cert.mcmillan_degree,
                   inner_flag=inner, gamma_rank=grank, unitary_residual=ures)


def _identity_realization(p: int) -> Realization:
    return Realization(np.zeros((0, 0)), np.zeros((0, p)),
                       np.zeros((p, 0)), np.eye(p))


def symmetric_unitary_extension(E: ExtensionBlocks,
                                sym_tol: float = 1e-8) -> tuple[Realization, QFactor]:
    """Symmetric extension Sigma_P = S_P diag(Q, I), Q = S21^{-1} S12^T.

    Requires the source realization of S to be symmetric (A = A^T,
    B = C^T, D = D^T), which makes P^{-T} another Riccati solution with
    S_{P^{-T}} = S_P^T.  The result is unitary on the imaginary axis and
    symmetric; it is inner if and only if P^{-T} - P is positive
    semidefinite, in which case deg Sigma = deg S + deg Q and
    deg Q = rank(P^{-T} - P) >= kappa.
    """
    R = E.s22
    scale = max(1.0, np.linalg.norm(R.a, 2))
    struct = max(np.linalg.norm(R.a - R.a.T, 2),
                 np.linalg.norm(R.b - R.c.T, 2),
                 np.linalg.norm(R.d - R.d.T, 2))
    if struct > 1e-9 * scale:
        raise NotSymmetricError(
            "the source realization is not symmetric; run symmetrize first")
    Pt = np.linalg.inv(E.p_matrix.T)
    E2 = build_extension(R, Pt)
    Q = compare_extensions(E, E2)
    sigma_raw = compose(E.realization, direct_sum(Q.realization,
                                                  _identity_realization(E.p)))
    sigma, cert = minimal_realization(sigma_raw, rank_tol=1e-9)
    sres = symmetry_residual(sigma)
    if sres > sym_tol:
        raise ValidationError(
            f"symmetric extension failed the symmetry check ({sres:g})")
    if Q.inner_flag and cert.mcmillan_degree != R.n + Q.degree:
        raise ValidationError(
            f"degree of Sigma is {cert.mcmillan_degree}, expected "
            f"{R.n + Q.degree}")
    return sigma, Q
