"""Degree reduction of symmetric inner functions by two-sided division
with elementary Blaschke factors, down to the minimal symmetric inner
extension.

An elementary factor B(s) = I + (b_xi(s) - 1) u u*, with
b_xi(s) = (s - xi)/(s + conj(xi)), is inner of degree 1 with
det B = b_xi.  If a symmetric inner T has a zero xi of multiplicity at
least 2, there is a unit vector u with

    T(xi) u = 0   and   u^T T'(xi) u = 0,

and then B(s)^{-T} T(s) B(s)^{-1} is again symmetric inner, of degree
exactly deg T - 2.  Iterating from the 2n - n0 symmetric extension
built on the minimal Riccati solution, with u restricted to the first
coordinate block so the S block is preserved, terminates at the minimal
symmetric inner extension of degree n + kappa.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DarlingtonError, ReductionError, ValidationError
from .extension import (
    build_extension,
    innerness_residual,
    symmetric_unitary_extension,
)
from .realization import (
    Realization,
    compose,
    derivative,
    evaluate,
    kalman_check,
    minimal_realization,
    probe_points,
    symmetrize,
    symmetry_residual,
)
from .riccati import (
    HSpectrum,
    RiccatiSolution,
    analyze_spectrum,
    build_hamiltonian,
    build_hat,
    solve_extremal,
)

__all__ = [
    "BlaschkeFactor",
    "ZeroStructure",
    "SynthesisResult",
    "blaschke_realization",
    "blaschke_inverse_eval",
    "zero_structure",
    "find_reduction_vector",
    "reduce_once",
    "minimize_symmetric",
]


@dataclass(frozen=True)
class BlaschkeFactor:
    """Elementary inner factor B(s) = I + (b_xi(s) - 1) u u*."""
    xi: complex
    u: np.ndarray

    def __post_init__(self):
        xi = complex(self.xi)
        u = np.asarray(self.u, dtype=complex).ravel()
        if xi.real <= 0:
            raise ValidationError("xi must lie in the open right half-plane")
        nrm = np.linalg.norm(u)
        if nrm == 0:
            raise ValidationError("direction u must be nonzero")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "u", u / nrm)

    @property
    def dim(self) -> int:
        return self.u.size

    def scalar(self, s: complex) -> complex:
        """b_xi(s) = (s - xi)/(s + conj(xi))."""
        return (s - self.xi) / (s + np.conj(self.xi))

    def __call__(self, s: complex) -> np.ndarray:
        uu = np.outer(self.u, self.u.conj())
        return np.eye(self.dim) + (self.scalar(s) - 1.0) * uu


def blaschke_realization(f: BlaschkeFactor) -> Realization:
    """Degree-1 inner realization of B_{xi,u}:
    B(s) = I - 2 Re(xi)/(s + conj(xi)) u u*."""
    p = f.dim
    A = np.array([[-np.conj(f.xi)]])
    B = f.u.conj().reshape(1, p)
    C = -2 * f.xi.real * f.u.reshape(p, 1)
    D = np.eye(p, dtype=complex)
    return Realization(A, B, C, D)


def blaschke_inverse_eval(f: BlaschkeFactor, s: complex) -> np.ndarray:
    """Pointwise inverse B^{-1}(s) = I + (b_xi(s)^{-1} - 1) u u*."""
    uu = np.outer(f.u, f.u.conj())
    return np.eye(f.dim) + (1.0 / f.scalar(s) - 1.0) * uu


def _blaschke_inverse_realization(f: BlaschkeFactor) -> Realization:
    """Realization of B^{-1}(s) = I + 2 Re(xi)/(s - xi) u u* (antistable)."""
    p = f.dim
    A = np.array([[f.xi]])
    B = f.u.conj().reshape(1, p)
    C = 2 * f.xi.real * f.u.reshape(p, 1)
    D = np.eye(p, dtype=complex)
    return Realization(A, B, C, D)


def _blaschke_inverse_transpose_realization(f: BlaschkeFactor) -> Realization:
    """Realization of B^{-T}(s); equals the inverse factor built on
    conj(u)."""
    g = BlaschkeFactor(xi=f.xi, u=np.conj(f.u))
    return _blaschke_inverse_realization(g)


@dataclass(frozen=True)
class ZeroStructure:
    """Zeros (eigenvalues of A - B D^{-1} C in the open right half-plane)
    of an inner function, clustered into multiplicities, with an
    orthonormal kernel basis of T(xi) per zero."""
    zeros: tuple[tuple[complex, int], ...]
    kernels: tuple[np.ndarray, ...]
    cluster_tolerance: float

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.zeros)


def zero_structure(T: Realization, cluster_tol: float | None = None,
                   inner_tol: float = 1e-7) -> ZeroStructure:
    """Zero locations and multiplicities of an inner T.

    T must pass the innerness grid check and have an invertible value
    at infinity (automatic for the extensions constructed here).  Zeros
    are clustered with the same persistence ladder used for the
    Hamiltonian spectrum.
    """
    resid = innerness_residual(T)
    if resid > inner_tol:
        raise ValidationError(
            f"zero_structure requires an inner function (grid residual {resid:g})")
    s = np.linalg.svd(T.d, compute_uv=False)
    if s.size == 0 or s[-1] <= 1e-10 * max(1.0, s[0]):
        raise ValidationError("value at infinity is singular")
    if T.n == 0:
        return ZeroStructure(zeros=(), kernels=(), cluster_tolerance=0.0)
    Az = T.a - T.b @ np.linalg.solve(T.d, T.c)
    lam = np.linalg.eigvals(Az)
    base = (linalg.default_cluster_tol(Az) if cluster_tol is None
            else float(cluster_tol))
    tol, clusters = linalg.cluster_ladder(lam, base)
    zeros = []
    kernels = []
    for center, members in sorted(clusters, key=lambda g: (g[0].real, g[0].imag)):
        if center.real <= tol:
            raise ValidationError(
                f"zero {center:g} is not in the open right half-plane; "
                "T is not inner or the clustering is unreliable")
        val = evaluate(T, center)
        scale = max(1.0, np.linalg.norm(val, 2))
        ker = linalg._kernel(val, 1e-6, scale=scale)
        zeros.append((center, len(members)))
        kernels.append(ker)
    return ZeroStructure(zeros=tuple(zeros), kernels=tuple(kernels),
                         cluster_tolerance=tol)


def find_reduction_vector(T: Realization, xi: complex,
                          support: int | None = None,
                          cond_tol: float = 1e-7,
                          kernel_tol: float = 1e-6) -> np.ndarray:
    """Unit vector u with T(xi) u = 0 and u^T T'(xi) u = 0.

    ``support`` restricts u to the first ``support`` coordinates (the
    extension-preserving form [u~; 0]).  The construction follows the
    kernel dimension: with a one-dimensional kernel the vector is
    forced; otherwise an isotropic vector of the 2 x 2 restriction
    R1 = V^T T'(xi) V of the derivative to a two-dimensional kernel
    subspace is used, where a singular R1 supplies its null direction
    (second-order vanishing) and an invertible R1 is resolved through
    its Takagi factorization U1^T R1 U1 = diag(l1^2, l2^2) with the
    isotropic combination (l2, i*l1)/sqrt(l1^2+l2^2).

    Raises
    ------
    ReductionError
        If no vector satisfying both interpolation conditions to
        ``cond_tol`` exists in the requested support.
    """
    xi = complex(xi)
    p_all = T.outputs
    k = p_all if support is None else int(support)
    if not 0 < k <= p_all:
        raise ValidationError(f"support must be in 1..{p_all}")
    Txi = evaluate(T, xi)
    Tpxi = derivative(T, xi)
    scale = max(1.0, np.linalg.norm(Txi, 2))
    dscale = max(1.0, np.linalg.norm(Tpxi, 2))
    ker = linalg._kernel(Txi[:, :k], kernel_tol, scale=scale)
    if ker.shape[1] == 0:
        raise ReductionError(
            f"T({xi:g}) has no kernel supported on the first {k} coordinates")
    if ker.shape[1] == 1:
        small = ker[:, 0]
    else:
        V2 = ker[:, :2]
        R1 = V2.T @ Tpxi[:k, :k] @ V2
        R1 = (R1 + R1.T) / 2
        sv = np.linalg.svd(R1, compute_uv=False)
        if sv[0] <= 1e-10 * dscale:
            x = np.array([1.0, 0.0], dtype=complex)
        elif sv[-1] <= 1e-8 * sv[0]:
            # singular restriction: its null direction vanishes to
            # second order
            _, _, Vh = np.linalg.svd(R1)
            x = Vh[-1].conj()
        else:
            tk = linalg.takagi(R1, sym_tol=1e-6)
            l1, l2 = np.sqrt(tk.values[0]), np.sqrt(tk.values[1])
            v = np.array([l2, 1j * l1]) / np.sqrt(l1 ** 2 + l2 ** 2)
            # with R1 = W Lam W^T the paper's U1 is conj(W)
            x = np.conj(tk.u) @ v
        small = V2 @ x
    small = small / np.linalg.norm(small)
    u = np.zeros(p_all, dtype=complex)
    u[:k] = small
    c1 = float(np.linalg.norm(Txi @ u))
    c2 = float(abs(u @ Tpxi @ u))
    if c1 > cond_tol * scale or c2 > cond_tol * dscale:
        raise ReductionError(
            f"interpolation conditions not met at {xi:g}: |T(xi)u| = {c1:g}, "
            f"|u^T T'(xi) u| = {c2:g}")
    return u


def reduce_once(T: Realization, f: BlaschkeFactor,
                inner_tol: float = 1e-7, sym_tol: float = 1e-7) -> Realization:
    """Two-sided division R = B^{-T} T B^{-1}, state-space minimized.

    The degree must drop to deg T - 2 exactly; innerness and symmetry
    are re-verified on their grids.
    """
    if f.dim != T.outputs:
        raise ValidationError("Blaschke direction has the wrong dimension")
    left = _blaschke_inverse_transpose_realization(f)
    right = _blaschke_inverse_realization(f)
    raw = compose(compose(left, T), right)
    out, cert = minimal_realization(raw, rank_tol=1e-8)
    if cert.mcmillan_degree != T.n - 2:
        raise ReductionError(
            f"degree after reduction is {cert.mcmillan_degree}, expected "
            f"{T.n - 2}; the interpolation conditions were not satisfied "
            "accurately enough")
    ir = innerness_residual(out)
    if ir > inner_tol:
        raise ReductionError(f"innerness lost after reduction ({ir:g})")
    sr = symmetry_residual(out)
    if sr > sym_tol:
        raise ReductionError(f"symmetry lost after reduction ({sr:g})")
    return out


@dataclass(frozen=True)
class SynthesisResult:
    """Outcome of the minimal symmetric inner extension pipeline."""
    extension: Realization
    degree: int
    kappa: int
    n0: int
    spectrum: HSpectrum
    p_min: RiccatiSolution
    p_max: RiccatiSolution
    factors: tuple[BlaschkeFactor, ...]
    innerness: float
    symmetry: float
    block_match: float


def _stage(name: str, exc: DarlingtonError) -> DarlingtonError:
    return type(exc)(f"stage '{name}': {exc}")


def minimize_symmetric(R: Realization, cluster_tol: float | None = None,
                       residual_tol: float = 1e-7) -> SynthesisResult:
    """Minimal-degree symmetric inner extension of a symmetric Schur
    function strictly contractive at infinity.

    Pipeline: symmetrize the (minimal) realization, solve the Riccati
    equation for the minimal solution, build its inner extension and
    the symmetric unitary extension of degree 2n - n0, then divide out
    elementary Blaschke factors supported on the first coordinate block
    at right-half-plane zeros of multiplicity >= 2 until the degree
    reaches n + kappa.  Every step is certified (degree drop, innerness,
    symmetry, S block match); a shortfall is a hard error.
    """
    try:
        cert = kalman_check(R)
        if not cert.minimal:
            raise ValidationError(
                "input realization is not minimal; apply minimal_realization")
        Rs = symmetrize(R)
    except DarlingtonError as exc:
        raise _stage("symmetrize", exc) from exc
    n, p = Rs.n, Rs.outputs
    try:
        hat = build_hat(Rs)
        ham = build_hamiltonian(hat)
        spectrum = analyze_spectrum(ham, cluster_tol)
        pmin, pmax = solve_extremal(hat, cluster_tol)
    except DarlingtonError as exc:
        raise _stage("riccati", exc) from exc
    kappa, n0 = spectrum.kappa, spectrum.n0
    try:
        E = build_extension(Rs, pmin)
        sigma, _ = symmetric_unitary_extension(E)
    except DarlingtonError as exc:
        raise _stage("symmetric-extension", exc) from exc
    if sigma.n != 2 * n - n0:
        raise ValidationError(
            f"stage 'symmetric-extension': degree {sigma.n} of the unitary "
            f"extension differs from 2n - n0 = {2 * n - n0}")
    target = n + kappa
    factors: list[BlaschkeFactor] = []
    current = sigma
    while current.n > target:
        reduced = None
        tried: list[str] = []
        zd = np.linalg.eigvals(current.a - current.b @ np.linalg.solve(current.d, current.c))
        zd = zd[zd.real > 0]
        if zd.size == 0:
            raise ReductionError(
                f"stage 'reduce': no right-half-plane zeros left at degree "
                f"{current.n} with target {target}")
        zscale = 1.0 + float(np.max(np.abs(zd)))
        for mult_tol in (1e-7, 1e-6, 1e-5, 1e-4, 1e-3):
            cands = [
                (c, len(m))
                for c, m in linalg.cluster_points(zd, mult_tol * zscale)
                if len(m) >= 2
            ]
            cands.sort(key=lambda cm: (-cm[1], abs(cm[0])))
            for xi, mult in cands:
                try:
                    u = find_reduction_vector(current, xi, support=p)
                    f = BlaschkeFactor(xi=xi, u=u)
                    reduced = reduce_once(current, f)
                except (ReductionError, ValidationError) as exc:
                    tried.append(f"{xi:.6g} (x{mult}): {exc}")
                    continue
                factors.append(f)
                break
            if reduced is not None:
                break
        if reduced is None:
            detail = "; ".join(tried) if tried else "no multiple zero found"
            raise ReductionError(
                f"stage 'reduce': stuck at degree {current.n} with target "
                f"{target}: {detail}")
        current = reduced
    final_deg = kalman_check(current).mcmillan_degree
    if final_deg != target:
        raise ValidationError(
            f"stage 'finalize': terminal degree {final_deg} differs from "
            f"n + kappa = {target}")
    ir = innerness_residual(current)
    sr = symmetry_residual(current)
    pts = probe_points(current, R)
    block = max(
        np.linalg.norm(evaluate(current, s)[p:, p:] - evaluate(R, s), 2)
        for s in pts)
    if max(ir, sr, block) > residual_tol:
        raise ValidationError(
            f"stage 'finalize': certification failed (inner {ir:g}, "
            f"symmetry {sr:g}, block match {block:g})")
    return SynthesisResult(extension=current, degree=final_deg, kappa=kappa,
                           n0=n0, spectrum=spectrum, p_min=pmin, p_max=pmax,
                           factors=tuple(factors), innerness=ir, symmetry=sr,
                           block_match=block)
