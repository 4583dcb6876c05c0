"""Dense complex-matrix decompositions and spectral utilities.

Eigenvalue and singular-value work is delegated to LAPACK through
numpy/scipy; this module adds the layers the rest of the package relies
on: eigenvalue clustering with multiplicity detection, spectral-subspace
extraction, Takagi factorization of complex symmetric matrices, and the
Loewner (positive-semidefinite) order on Hermitian matrices.

All returned objects are immutable value types carrying the tolerance
that was used, and all functions are pure.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import (
    ConvergenceError,
    DimensionError,
    NotSymmetricError,
    SpectralSplitError,
    ValidationError,
)

__all__ = [
    "DEFAULT_RANK_TOL",
    "DEFAULT_SYM_TOL",
    "DEFAULT_PSD_TOL",
    "EigenCluster",
    "SpectrumReport",
    "SvdResult",
    "TakagiResult",
    "cluster_ladder",
    "cluster_points",
    "default_cluster_tol",
    "eig_clustered",
    "half_chain_basis",
    "hermitian_order",
    "hermitian_sqrt",
    "svd_analysis",
    "takagi",
]

DEFAULT_RANK_TOL = 1e-9
DEFAULT_SYM_TOL = 1e-9
DEFAULT_PSD_TOL = 1e-9


def default_cluster_tol(M: np.ndarray) -> float:
    """Default eigenvalue clustering tolerance, 1e-7 * (1 + ||M||)."""
    return 1e-7 * (1.0 + np.linalg.norm(M, 2))


def as_matrix(M, name: str = "matrix", square: bool = False) -> np.ndarray:
    """Coerce to a 2-d complex array and validate finiteness."""
    A = np.atleast_2d(np.asarray(M, dtype=complex))
    if A.ndim != 2:
        raise DimensionError(f"{name} must be 2-dimensional, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError(f"{name} contains non-finite entries")
    if square and A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {A.shape}")
    return A


def _single_linkage(points, tol: float):
    pts = sorted(np.asarray(points, dtype=complex),
                 key=lambda z: (z.real, z.imag))
    groups: list[list] = []
    for z in pts:
        for g in groups:
            if abs(z - g[0]) <= tol:
                g[1].append(z)
                g[0] = np.mean(g[1])
                break
        else:
            groups.append([z, [z]])
    return groups


def cluster_points(points, tol: float):
    """Greedy single-linkage clustering of complex points.

    Clusters are merged until all cluster centers are pairwise farther
    apart than 2*tol, so the reported centers are unambiguous at the
    stated tolerance.  Returns a list of (center, members) pairs.
    """
    groups = _single_linkage(points, tol)
    merged = True
    while merged and len(groups) > 1:
        merged = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if abs(groups[i][0] - groups[j][0]) <= 2 * tol:
                    groups[i][1].extend(groups[j][1])
                    groups[i][0] = np.mean(groups[i][1])
                    del groups[j]
                    merged = True
                    break
            if merged:
                break
    return [(complex(g[0]), list(g[1])) for g in groups]


def cluster_ladder(points, base_tol: float, rungs: int = 5):
    """Persistence-based clustering: walk a tolerance ladder and accept
    the first rung whose multiplicity structure agrees with the next
    one.

    Double eigenvalues computed in floating point split far wider than
    the base tolerance (roughly the square root of the backward error),
    and this recovers them without merging genuinely distinct
    eigenvalues, which sit orders of magnitude apart at desk scale.
    Returns (tolerance used, clusters as (center, members) pairs).
    """
    ladder = [base_tol * 10.0 ** k for k in range(rungs)]
    structs = []
    for tol in ladder:
        cl = cluster_points(points, tol)
        structs.append((tol, cl, sorted((len(m) for _, m in cl), reverse=True)))
    for i in range(len(structs) - 1):
        if structs[i][2] == structs[i + 1][2]:
            return structs[i][0], structs[i][1]
    warnings.warn("cluster structure never stabilized along the tolerance "
                  "ladder; using the base tolerance")
    return structs[0][0], structs[0][1]


def _orth_columns(M: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of the column span of M at the given tolerance."""
    if M.size == 0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    if s.size == 0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    r = int(np.sum(s > tol * max(1.0, s[0])))
    return U[:, :r]


def _kernel(M: np.ndarray, tol: float, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis of the (right) kernel of M.

    The rank decision uses tol * max(scale, sigma_max); passing an
    explicit scale keeps a near-zero matrix from counting as full rank.
    """
    m, n = M.shape
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    U, s, Vh = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    cut = tol * max(scale if scale is not None else 0.0, smax, 1e-300)
    r = int(np.sum(s > cut))
    return Vh[r:].conj().T


@dataclass(frozen=True)
class EigenCluster:
    """One eigenvalue cluster of a matrix.

    ``basis`` spans the spectral subspace (generalized eigenvectors) of
    the cluster; ``chain_lengths`` are the Jordan block sizes detected
    within it, longest first.
    """
    center: complex
    multiplicity: int
    basis: np.ndarray
    chain_lengths: tuple[int, ...]


@dataclass(frozen=True)
class SpectrumReport:
    clusters: tuple[EigenCluster, ...]
    cluster_tolerance: float
    dim: int

    def __post_init__(self):
        total = sum(c.multiplicity for c in self.clusters)
        if total != self.dim:
            raise ValidationError(
                f"cluster multiplicities sum to {total}, expected {self.dim}")

    @property
    def eigenvalues(self) -> np.ndarray:
        """All eigenvalues repeated with multiplicity."""
        return np.concatenate(
            [[c.center] * c.multiplicity for c in self.clusters]
        ) if self.clusters else np.zeros(0, dtype=complex)


def _spectral_subspace(M: np.ndarray, centers, index: int) -> np.ndarray:
    """Orthonormal basis of the spectral subspace of the ``index``-th
    cluster center, via a sorted complex Schur form.

    Membership is decided by the nearest center, so the extraction
    cannot engulf a neighboring cluster no matter how the tolerances
    were chosen.
    """
    cs = np.asarray(centers, dtype=complex)

    def selected(lam):
        return int(np.argmin(np.abs(cs - lam))) == index

    try:
        _, Z, sdim = sla.schur(M, output="complex", sort=selected)
    except sla.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceError(f"Schur decomposition failed: {exc}") from exc
    return Z[:, :sdim]


def _chain_lengths(N: np.ndarray, tol: float) -> tuple[int, ...]:
    """Jordan block sizes of a (numerically) nilpotent matrix N from the
    rank sequence of its powers."""
    m = N.shape[0]
    if m == 0:
        return ()
    scale = max(1.0, np.linalg.norm(N, 2))
    ranks = [m]
    P = np.eye(m, dtype=complex)
    for _ in range(m):
        P = P @ (N / scale)
        s = np.linalg.svd(P, compute_uv=False)
        r = int(np.sum(s > tol))
        ranks.append(r)
        if r == 0:
            break
    # number of blocks of size >= j is rank(N^{j-1}) - rank(N^j)
    d = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))]
    d.append(0)
    sizes = []
    for j in range(1, len(d)):
        sizes.extend([j] * (d[j - 1] - d[j]))
    sizes.sort(reverse=True)
    return tuple(sizes)


def eig_clustered(M, cluster_tol: float | None = None) -> SpectrumReport:
    """Eigenvalues of a square complex matrix, clustered into multiple
    eigenvalues with spectral-subspace bases.

    Parameters
    ----------
    M : array_like, square
    cluster_tol : float, optional
        Clustering radius; defaults to ``1e-7 * (1 + ||M||)``.  Two
        computed eigenvalues closer than this are treated as one
        eigenvalue of higher multiplicity.  Cluster centers closer than
        twice the tolerance are merged (with a warning), so the returned
        centers are pairwise separated by more than ``2 * cluster_tol``.

    Returns
    -------
    SpectrumReport
        Clusters with algebraic multiplicity, an orthonormal basis of
        each spectral subspace, and the Jordan block sizes inside it.
    """
    A = as_matrix(M, "M", square=True)
    n = A.shape[0]
    tol = default_cluster_tol(A) if cluster_tol is None else float(cluster_tol)
    if n == 0:
        return SpectrumReport(clusters=(), cluster_tolerance=tol, dim=0)
    try:
        lam = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration failed: {exc}") from exc
    raw = cluster_points(lam, tol)
    fine = sorted((len(g[1]) for g in _single_linkage(lam, tol)), reverse=True)
    coarse = sorted((len(m) for _, m in raw), reverse=True)
    if fine != coarse:
        warnings.warn(
            f"ambiguous eigenvalue clustering: centers closer than twice the "
            f"tolerance {tol:g} were merged (candidate multiplicity splits "
            f"{fine} vs {coarse})")
    centers = [center for center, _ in raw]
    clusters = []
    for idx, (center, members) in enumerate(raw):
        mult = len(members)
        basis = _spectral_subspace(A, centers, idx)
        if basis.shape[1] != mult:
            raise SpectralSplitError(
                f"spectral subspace at {center:g} has dimension "
                f"{basis.shape[1]}, expected multiplicity {mult}; "
                f"adjust cluster_tol (used {tol:g})")
        N = basis.conj().T @ A @ basis - center * np.eye(mult)
        chains = _chain_lengths(N, max(tol, 1e3 * np.finfo(float).eps * (1 + abs(center))))
        clusters.append(EigenCluster(center=center, multiplicity=mult,
                                     basis=basis, chain_lengths=chains))
    clusters.sort(key=lambda c: (c.center.real, c.center.imag))
    return SpectrumReport(clusters=tuple(clusters), cluster_tolerance=tol, dim=n)


def half_chain_basis(N: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis of the span of the leading halves of all Jordan
    chains of a nilpotent matrix.

    For a nilpotent N this equals ``sum_l ker(N^l) intersect im(N^l)``: on a
    single Jordan block of size 2k the term l=k produces exactly the
    first k chain vectors, and smaller/larger l contribute subspaces of
    it.  The construction is basis-free, so no explicit chain vectors
    are ever computed.
    """
    m = N.shape[0]
    if m == 0:
        return np.zeros((0, 0), dtype=complex)
    scale = max(1.0, np.linalg.norm(N, 2))
    Nn = N / scale
    cols = []
    P = np.eye(m, dtype=complex)
    for _ in range(m):
        P = P @ Nn
        U, s, Vh = np.linalg.svd(P)
        r = int(np.sum(s > tol))
        if r == 0:
            break
        ker = Vh[r:].conj().T
        if ker.shape[1] == 0:
            continue
        im = U[:, :r]
        # intersection of ker and im: kernel columns with no component
        # outside the image
        resid = ker - im @ (im.conj().T @ ker)
        _, s2, Vh2 = np.linalg.svd(resid)
        null = Vh2[int(np.sum(s2 > tol)):].conj().T
        if null.shape[1]:
            cols.append(ker @ null)
    if not cols:
        return np.zeros((m, 0), dtype=complex)
    return _orth_columns(np.hstack(cols), tol)


@dataclass(frozen=True)
class SvdResult:
    """Singular value decomposition with rank and kernel extraction.

    ``u @ diag(singular_values) @ v.conj().T`` reconstructs the input;
    ``kernel`` is an orthonormal basis of the right null space at
    ``rank_tolerance``.
    """
    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray
    rank: int
    kernel: np.ndarray
    rank_tolerance: float


def svd_analysis(M, rank_tol: float = DEFAULT_RANK_TOL) -> SvdResult:
    """SVD of M with rank and kernel determined at rank_tol * sigma_max."""
    A = as_matrix(M, "M")
    try:
        U, s, Vh = np.linalg.svd(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD failed to converge: {exc}") from exc
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rank_tol * max(1.0, smax) * (smax > 0)))
    kernel = Vh[rank:].conj().T
    k = min(A.shape)
    return SvdResult(u=U, singular_values=s, v=Vh.conj().T, rank=rank,
                     kernel=kernel, rank_tolerance=rank_tol)


@dataclass(frozen=True)
class TakagiResult:
    """Takagi factorization F = U diag(values) U^T of a complex
    symmetric matrix, with ``values`` nonnegative and ascending so that
    kernel-related columns come first.

    Note the kernel normalization: the first p-k columns u of U satisfy
    F @ conj(u) = 0, i.e. their conjugates form an orthonormal basis of
    ker F (the two coincide when the kernel is conjugation-invariant,
    in particular for real F).
    """
    u: np.ndarray
    values: np.ndarray
    sym_tolerance: float


def takagi(F, sym_tol: float = DEFAULT_SYM_TOL) -> TakagiResult:
    """Takagi factorization of a complex symmetric matrix.

    Computed from the SVD F = V S W* by resolving the unitary phase
    between V and W on each group of equal singular values; on the zero
    group any unitary completion works, and the columns are reordered so
    the zero singular values come first.

    Raises
    ------
    NotSymmetricError
        If ``||F - F^T|| > sym_tol * ||F||``.
    """
    A = as_matrix(F, "F", square=True)
    nrm = np.linalg.norm(A, 2)
    if np.linalg.norm(A - A.T, 2) > sym_tol * max(1.0, nrm):
        raise NotSymmetricError(
            f"matrix is not symmetric to tolerance {sym_tol:g}")
    A = (A + A.T) / 2
    p = A.shape[0]
    if p == 0:
        return TakagiResult(u=np.zeros((0, 0)), values=np.zeros(0),
                            sym_tolerance=sym_tol)
    V, s, Wh = np.linalg.svd(A)
    W = Wh.conj().T
    smax = s[0] if s.size else 0.0
    # group indices by (nearly) equal singular value
    groups: list[list[int]] = []
    for i, val in enumerate(s):
        if groups and abs(val - s[groups[-1][0]]) <= 1e-8 * max(1.0, smax):
            groups[-1].append(i)
        else:
            groups.append([i])
    blocks = []
    for idx in groups:
        if s[idx[0]] <= 1e-13 * max(1.0, smax):
            blocks.append(np.eye(len(idx), dtype=complex))
        else:
            # V[:,g]^T W[:,g] is unitary symmetric on each group; its
            # principal square root aligns the phases
            Zb = V[:, idx].T @ W[:, idx]
            blocks.append(np.asarray(sla.sqrtm(Zb), dtype=complex))
    Q = sla.block_diag(*blocks)
    U = V @ np.conj(Q)
    order = np.argsort(s)
    U, lam = U[:, order], s[order]
    if np.linalg.norm(U @ np.diag(lam) @ U.T - A, 2) > 1e-10 * max(1.0, nrm):
        raise ValidationError("Takagi reconstruction failed its tolerance")
    return TakagiResult(u=U, values=lam, sym_tolerance=sym_tol)


def hermitian_sqrt(M, psd_tol: float = DEFAULT_PSD_TOL) -> np.ndarray:
    """Hermitian square root of a Hermitian PSD matrix via eigh."""
    A = as_matrix(M, "M", square=True)
    A = (A + A.conj().T) / 2
    w, V = np.linalg.eigh(A)
    if w.size and w[0] < -psd_tol * max(1.0, abs(w[-1])):
        raise ValidationError(f"matrix is not PSD: min eigenvalue {w[0]:g}")
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


def hermitian_order(P, Q, psd_tol: float = DEFAULT_PSD_TOL) -> str:
    """Classify two Hermitian matrices in the Loewner order.

    Returns one of ``"equal"``, ``"less_equal"`` (P <= Q),
    ``"greater_equal"`` (P >= Q) or ``"incomparable"``, decided from the
    signed eigenvalues of Q - P at tolerance psd_tol * scale.
    """
    A = as_matrix(P, "P", square=True)
    B = as_matrix(Q, "Q", square=True)
    if A.shape != B.shape:
        raise DimensionError("P and Q must have the same shape")
    scale = max(1.0, np.linalg.norm(A, 2), np.linalg.norm(B, 2))
    for name, M in (("P", A), ("Q", B)):
        if np.linalg.norm(M - M.conj().T, 2) > DEFAULT_SYM_TOL * scale:
            raise NotSymmetricError(f"{name} is not Hermitian to tolerance")
    w = np.linalg.eigvalsh((B - A + (B - A).conj().T) / 2)
    cut = psd_tol * scale
    has_pos = bool(np.any(w > cut))
    has_neg = bool(np.any(w < -cut))
    if not has_pos and not has_neg:
        return "equal"
    if has_pos and not has_neg:
        return "less_equal"
    if has_neg and not has_pos:
        return "greater_equal"
    return "incomparable"
