"""Algebraic Riccati machinery for lossless embedding.

From a minimal realization of a Schur function strictly contractive at
infinity this module forms the shifted data

    A_hat = A + B D* (I - D D*)^{-1} C,
    B_hat B_hat* = B (I - D* D)^{-1} B*,
    C_hat* C_hat = C* (I - D D*)^{-1} C,

the associated 2n x 2n Hamiltonian matrix

    H = [[-A_hat*, -C_hat* C_hat], [B_hat B_hat*, A_hat]],

and solves the algebraic Riccati equation

    R(P) = P C_hat* C_hat P + A_hat P + P A_hat* + B_hat B_hat* = 0

for its extremal Hermitian solutions.  The closed-loop matrix of a
solution is Z = A_hat + P C_hat* C_hat; the minimal solution is the one
with spectrum of Z in the closed left half-plane, the maximal one has
it in the closed right half-plane.  The spectrum of H (symmetric about
the imaginary axis) is analyzed into its even/odd multiplicity
structure: kappa counts distinct open-right-half-plane eigenvalues of
odd algebraic multiplicity, and 2*n0 is the total multiplicity on the
imaginary axis.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import linalg
from .errors import (
    NotContractiveError,
    SpectralSplitError,
    SubspaceError,
    ValidationError,
)
from .realization import Realization

__all__ = [
    "HatData",
    "Hamiltonian",
    "RiccatiSolution",
    "HSpectrum",
    "build_hat",
    "build_hamiltonian",
    "riccati_residual",
    "solve_extremal",
    "analyze_spectrum",
]


@dataclass(frozen=True)
class HatData:
    """Shifted realization data entering the Riccati equation."""
    a_hat: np.ndarray
    bbs: np.ndarray     # B_hat @ B_hat*
    csc: np.ndarray     # C_hat* @ C_hat
    b_hat: np.ndarray
    c_hat: np.ndarray

    @property
    def n(self) -> int:
        return self.a_hat.shape[0]


@dataclass(frozen=True)
class Hamiltonian:
    """2n x 2n Hamiltonian matrix; satisfies H* J + J H = 0 for
    J = [[0, I], [-I, 0]]."""
    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2

    def structure_residual(self) -> float:
        n = self.n
        J = np.block([[np.zeros((n, n)), np.eye(n)],
                      [-np.eye(n), np.zeros((n, n))]])
        H = self.matrix
        return float(np.linalg.norm(H.conj().T @ J + J @ H, 2))


@dataclass(frozen=True)
class RiccatiSolution:
    """Hermitian solution P with its closed loop Z = A_hat + P C_hat*C_hat."""
    p: np.ndarray
    z: np.ndarray
    kind: str                 # "minimal" | "maximal" | "other"
    residual_norm: float
    subspace_condition: float = 1.0


@dataclass(frozen=True)
class HSpectrum:
    """Even/odd multiplicity structure of the Hamiltonian spectrum.

    ``clusters`` holds (center, multiplicity, half_plane) triples with
    half_plane in {"plus", "minus", "axis"}.  ``pi_roots`` lists the
    roots of the even square factor pi(s) with multiplicities, and
    ``chi_plus_roots`` the kappa simple odd roots in the open right
    half-plane (their reflections make up the conjugate factor).
    """
    clusters: tuple[tuple[complex, int, str], ...]
    kappa: int
    n0: int
    pi_roots: tuple[tuple[complex, int], ...]
    chi_plus_roots: tuple[complex, ...]
    cluster_tolerance: float

    @property
    def dim(self) -> int:
        return sum(m for _, m, _ in self.clusters)


def build_hat(R: Realization, contraction_margin: float = 1e-12) -> HatData:
    """Form the shifted Riccati data from a realization.

    Requires ``||D||_2 < 1 - contraction_margin`` (strict contractivity
    at infinity); otherwise a NotContractiveError suggests the Moebius
    preconditioning.
    """
    if R.outputs != R.inputs:
        raise ValidationError("embedding requires a square transfer function")
    p = R.outputs
    s = np.linalg.svd(R.d, compute_uv=False)
    dn = s[0] if s.size else 0.0
    if dn >= 1.0 - contraction_margin:
        raise NotContractiveError(
            f"||D||_2 = {dn:.6g} >= 1: S is not strictly contractive at "
            "infinity; apply mobius_precondition at a point of strict "
            "contractivity first")
    Ip = np.eye(p)
    Dl = np.linalg.inv(Ip - R.d @ R.d.conj().T)
    Dr = np.linalg.inv(Ip - R.d.conj().T @ R.d)
    a_hat = R.a + R.b @ R.d.conj().T @ Dl @ R.c
    b_hat = R.b @ linalg.hermitian_sqrt(Dr)
    c_hat = linalg.hermitian_sqrt(Dl) @ R.c
    bbs = R.b @ Dr @ R.b.conj().T
    csc = R.c.conj().T @ Dl @ R.c
    bbs = (bbs + bbs.conj().T) / 2
    csc = (csc + csc.conj().T) / 2
    return HatData(a_hat=a_hat, bbs=bbs, csc=csc, b_hat=b_hat, c_hat=c_hat)


def build_hamiltonian(hat: HatData) -> Hamiltonian:
    H = np.block([[-hat.a_hat.conj().T, -hat.csc],
                  [hat.bbs, hat.a_hat]])
    ham = Hamiltonian(matrix=H)
    if ham.structure_residual() > 1e-10 * (1.0 + np.linalg.norm(H, 2)):
        raise ValidationError("Hamiltonian structure identity violated")
    return ham


def riccati_residual(hat: HatData, P) -> float:
    """Spectral norm of R(P) = P CsC P + A_hat P + P A_hat* + BBs."""
    P = np.asarray(P, dtype=complex)
    R = P @ hat.csc @ P + hat.a_hat @ P + P @ hat.a_hat.conj().T + hat.bbs
    return float(np.linalg.norm(R, 2))


def _residual_matrix(hat: HatData, P: np.ndarray) -> np.ndarray:
    return P @ hat.csc @ P + hat.a_hat @ P + P @ hat.a_hat.conj().T + hat.bbs


def analyze_spectrum(H: Hamiltonian, cluster_tol: float | None = None) -> HSpectrum:
    """Cluster the Hamiltonian spectrum and extract (kappa, n0) and the
    even/odd factor split of its characteristic polynomial.

    The characteristic polynomial factors as pi(s)^2 chi+(s) chi-(s)
    where chi+ has kappa simple roots in the open right half-plane and
    chi- is its para-conjugate; imaginary-axis eigenvalues all carry
    even total multiplicity and contribute n0 = (total axis
    multiplicity)/2.
    """
    M = H.matrix
    base = linalg.default_cluster_tol(M) if cluster_tol is None else float(cluster_tol)
    lam = np.linalg.eigvals(M)
    tol, clusters = linalg.cluster_ladder(lam, base)
    band = tol
    labeled = []
    for center, members in clusters:
        m = len(members)
        if abs(center.real) <= band:
            labeled.append((complex(0.0, center.imag), m, "axis"))
        elif center.real > 0:
            labeled.append((center, m, "plus"))
        else:
            labeled.append((center, m, "minus"))
    for c, m, lab in labeled:
        if lab == "axis" and m % 2 != 0:
            raise SpectralSplitError(
                f"imaginary-axis eigenvalue {c:g} has odd multiplicity {m}; "
                "for a Schur function all axis partial multiplicities are "
                "even, so either S is not Schur or the clustering failed "
                f"(tolerance ladder reached {tol:g})")
    axis_total = sum(m for _, m, lab in labeled if lab == "axis")
    n0 = axis_total // 2
    # mirror-pairing consistency check
    plus = [(c, m) for c, m, lab in labeled if lab == "plus"]
    minus = [(c, m) for c, m, lab in labeled if lab == "minus"]
    for c, m in plus:
        mirror = [(c2, m2) for c2, m2 in minus
                  if abs(c2 - (-np.conj(c))) <= 10 * tol]
        if not mirror or mirror[0][1] != m:
            warnings.warn(
                f"eigenvalue {c:g} (multiplicity {m}) lacks a mirrored "
                "partner at the same multiplicity; clustering may be "
                "unreliable here")
    kappa = sum(1 for _, m in plus if m % 2 == 1)
    pi_roots: list[tuple[complex, int]] = []
    chi_plus: list[complex] = []
    for c, m, lab in labeled:
        if lab == "axis":
            pi_roots.append((c, m // 2))
        elif lab == "plus":
            if m // 2:
                pi_roots.append((c, m // 2))
            if m % 2 == 1:
                chi_plus.append(c)
        else:
            if m // 2:
                pi_roots.append((c, m // 2))
    odd_minus = sum(1 for _, m, lab in labeled if lab == "minus" and m % 2 == 1)
    if odd_minus != kappa:
        warnings.warn(
            f"odd-multiplicity counts differ across the axis ({kappa} right, "
            f"{odd_minus} left); clustering may be unreliable")
    # chi_H = pi^2 chi+ chi- must reassemble: 2*deg(pi) + 2*kappa = 2n
    if 2 * sum(k for _, k in pi_roots) + 2 * kappa != M.shape[0]:
        raise SpectralSplitError(
            "multiplicity split does not reassemble the characteristic "
            f"polynomial (deg pi = {sum(k for _, k in pi_roots)}, "
            f"kappa = {kappa}, dim = {M.shape[0]})")
    return HSpectrum(clusters=tuple(labeled), kappa=kappa, n0=n0,
                     pi_roots=tuple(pi_roots), chi_plus_roots=tuple(chi_plus),
                     cluster_tolerance=tol)


def _newton_refine(hat: HatData, P: np.ndarray, steps: int = 4) -> np.ndarray:
    """Newton iteration on R(P); each step solves the Sylvester equation
    Z dP + dP Z* = -R(P) with the current closed loop Z."""
    best = P
    best_res = riccati_residual(hat, P)
    for _ in range(steps):
        Z = hat.a_hat + best @ hat.csc
        R = _residual_matrix(hat, best)
        try:
            dP = sla.solve_sylvester(Z, Z.conj().T, -R)
        except (np.linalg.LinAlgError, ValueError):
            break
        cand = best + (dP + dP.conj().T) / 2
        res = riccati_residual(hat, cand)
        if not np.isfinite(res) or res >= best_res:
            break
        best, best_res = cand, res
    return best


def solve_extremal(hat: HatData, cluster_tol: float | None = None,
                   refine: bool = True) -> tuple[RiccatiSolution, RiccatiSolution]:
    """Minimal and maximal Hermitian solutions of the Riccati equation.

    Both are computed as graph subspaces of the Hamiltonian: the minimal
    solution stacks the spectral subspaces of the open right-half-plane
    eigenvalues, the maximal one those of the left half-plane.  For
    imaginary-axis eigenvalues (whose Jordan chains all have even
    length) both use the span of the leading half of every chain, which
    reproduces the unique solution when the extremal solutions coincide
    there.

    Returns (P_min, P_max); each result carries the residual norm and
    the condition number of the graph-subspace matrix X.
    """
    ham = build_hamiltonian(hat)
    n = hat.n
    H = ham.matrix
    spec = analyze_spectrum(ham, cluster_tol)
    band = spec.cluster_tolerance
    centers = [c for c, _, _ in spec.clusters]

    axis_bases = []
    for idx, (center, mult, lab) in enumerate(spec.clusters):
        if lab != "axis":
            continue
        basis = linalg._spectral_subspace(H, centers, idx)
        if basis.shape[1] != mult:
            raise SubspaceError(
                f"axis spectral subspace at {center:g} has dimension "
                f"{basis.shape[1]}, expected {mult}")
        N = basis.conj().T @ H @ basis - center * np.eye(mult)
        half = linalg.half_chain_basis(N, tol=max(1e-8, band))
        if 2 * half.shape[1] != mult:
            raise SubspaceError(
                f"leading-half chain subspace at {center:g} has dimension "
                f"{half.shape[1]}, expected {mult // 2}; partial "
                "multiplicities may not all be even")
        axis_bases.append(basis @ half)

    def graph_solution(side: str, kind: str) -> RiccatiSolution:
        cols = []
        for idx, (center, mult, lab) in enumerate(spec.clusters):
            if lab != side:
                continue
            basis = linalg._spectral_subspace(H, centers, idx)
            if basis.shape[1] != mult:
                raise SubspaceError(
                    f"spectral subspace at {center:g} has dimension "
                    f"{basis.shape[1]}, expected {mult}")
            cols.append(basis)
        cols.extend(axis_bases)
        Mb = np.hstack(cols) if cols else np.zeros((2 * n, 0), dtype=complex)
        if Mb.shape[1] != n:
            raise SubspaceError(
                f"graph subspace has dimension {Mb.shape[1]}, expected {n}")
        X, Y = Mb[:n, :], Mb[n:, :]
        sx = np.linalg.svd(X, compute_uv=False)
        if sx.size == 0 or sx[-1] <= 1e-13 * max(1.0, sx[0]):
            raise SubspaceError(
                f"graph-subspace matrix X is singular (condition "
                f"{sx[0] / max(sx[-1], 1e-300):.3g})")
        cond = float(sx[0] / sx[-1])
        P = Y @ np.linalg.inv(X)
        P = (P + P.conj().T) / 2
        if refine:
            P = _newton_refine(hat, P)
        res = riccati_residual(hat, P)
        scale = np.linalg.norm(P, 2)
        if res > 1e-8 * (1.0 + scale ** 2):
            raise ValidationError(
                f"Riccati residual {res:g} exceeds tolerance for the "
                f"{kind} solution (||P|| = {scale:g}, cond X = {cond:.3g})")
        w = np.linalg.eigvalsh(P)
        if w[0] <= 0:
            raise ValidationError(
                f"{kind} solution is not positive definite "
                f"(min eigenvalue {w[0]:g}); S may not be a Schur function")
        Z = hat.a_hat + P @ hat.csc
        return RiccatiSolution(p=P, z=Z, kind=kind, residual_norm=res,
                               subspace_condition=cond)

    # graph of P carries the -Z* dynamics: sigma(Z) in the closed left
    # half-plane (minimal) puts the graph on the right half-spectrum of H
    pmin = graph_solution("plus", "minimal")
    pmax = graph_solution("minus", "maximal")
    return pmin, pmax

