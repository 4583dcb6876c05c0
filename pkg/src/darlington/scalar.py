"""Scalar (p = 1) pipeline: polynomial arithmetic, the deficiency
polynomial mu = q q* - p1 p1*, its even/odd parity split, polynomial
spectral factorization, and the explicit minimal symmetric inner 2 x 2
extension of a scalar Schur fraction p1/q.

Polynomials are numpy coefficient arrays in ascending degree order.
The para-conjugate of a polynomial sends s to -s and conjugates the
coefficients, so (q q*)(iw) = |q(iw)|^2 on the imaginary axis.

Writing mu = c (r1 r1*)^2 r2 r2* with monic stable r1, r2 and all roots
of r2 simple singles out the odd-multiplicity roots off the imaginary
axis; kappa, the count of those in the open right half-plane, is the
degree excess of the minimal symmetric inner extension.  This scalar
route is fully independent of the state-space pipeline and serves as
its oracle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as npp

from . import linalg
from .errors import SpectralSplitError, ValidationError
from .extension import frequency_grid, innerness_residual
from .realization import (
    Realization,
    evaluate,
    minimal_realization,
    symmetry_residual,
)

__all__ = [
    "poly_trim",
    "poly_para",
    "poly_roots",
    "ScalarFactorization",
    "compute_mu",
    "spectral_factor_poly",
    "scalar_minimal_extension",
    "siso_realization",
]

_AXIS_BAND_FACTOR = 1e-7


def poly_trim(p) -> np.ndarray:
    """Coefficient array in ascending order with trailing zeros removed."""
    c = np.atleast_1d(np.asarray(p, dtype=complex)).ravel()
    nz = np.nonzero(np.abs(c) > 0)[0]
    if nz.size == 0:
        return np.zeros(1, dtype=complex)
    return c[: nz[-1] + 1]


def poly_para(p) -> np.ndarray:
    """Para-conjugate p*(s) = conj(p)(-s): conjugate coefficients with
    alternating signs."""
    c = poly_trim(p)
    return np.array([np.conj(v) * (-1) ** k for k, v in enumerate(c)])


def poly_roots(p, cluster_tol: float | None = None):
    """Roots via companion-matrix eigenvalues, clustered into
    multiplicities with the persistence ladder.

    Returns a tuple of (root, multiplicity) pairs and the tolerance
    used.
    """
    c = poly_trim(p)
    if c.size == 1:
        if abs(c[0]) == 0:
            raise ValidationError("the zero polynomial has no root structure")
        return (), 0.0
    roots = npp.polyroots(c)
    scale = 1.0 + float(np.max(np.abs(roots)))
    base = 1e-6 * scale if cluster_tol is None else float(cluster_tol)
    tol, clusters = linalg.cluster_ladder(roots, base)
    out = tuple(sorted(((complex(z), len(m)) for z, m in clusters),
                       key=lambda zm: (zm[0].real, zm[0].imag)))
    return out, tol


@dataclass(frozen=True)
class ScalarFactorization:
    """Parity split mu = constant * (r1 r1*)^2 * r2 r2*.

    r1 and r2 are monic with roots in the closed left half-plane and r2
    has simple roots; kappa counts the off-axis roots of r2 (equally,
    the distinct open-right-half-plane roots of mu of odd multiplicity).
    An imaginary-axis root of mu whose half-multiplicity is odd forces a
    simple axis root into r2; it does not count toward kappa and cancels
    out of the extension degree.
    """
    mu: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    kappa: int
    constant: float
    r2_offaxis: np.ndarray
    r2_axis: np.ndarray
    cluster_tolerance: float


def _sylvester_resultant(p, q) -> float:
    """Normalized magnitude of the resultant of two polynomials."""
    a, b = poly_trim(p), poly_trim(q)
    da, db = a.size - 1, b.size - 1
    if da == 0 or db == 0:
        return 1.0
    S = np.zeros((da + db, da + db), dtype=complex)
    for i in range(db):
        S[i, i:i + da + 1] = a[::-1]
    for i in range(da):
        S[db + i, i:i + db + 1] = b[::-1]
    det = np.linalg.det(S)
    norm = (np.linalg.norm(a, np.inf) ** db) * (np.linalg.norm(b, np.inf) ** da)
    return float(abs(det) / max(norm, 1e-300))


def _classify_mu_roots(mu: np.ndarray, rung_tols):
    """Cluster the roots of mu and validate the reflection structure at
    escalating tolerances; returns (tol, axis, pairs) where axis is a
    list of (i*w, even multiplicity) and pairs of (stable root, mult)."""
    roots = npp.polyroots(mu)
    scale = 1.0 + float(np.max(np.abs(roots))) if roots.size else 1.0
    last_err = None
    for tol in rung_tols:
        clusters = linalg.cluster_points(roots, tol * scale)
        band = max(tol * scale, _AXIS_BAND_FACTOR * scale)
        axis, left, right = [], [], []
        for z, members in clusters:
            m = len(members)
            if abs(z.real) <= band:
                axis.append((complex(0.0, z.imag), m))
            elif z.real < 0:
                left.append((z, m))
            else:
                right.append((z, m))
        try:
            for z, m in axis:
                if m % 2 != 0:
                    raise SpectralSplitError(
                        f"imaginary-axis root {z:g} has odd multiplicity {m}")
            unmatched = list(right)
            for z, m in left:
                mirror = -np.conj(z)
                hit = sorted((t for t in unmatched
                              if abs(t[0] - mirror) <= 10 * tol * scale),
                             key=lambda t: abs(t[0] - mirror))
                if not hit or hit[0][1] != m:
                    raise SpectralSplitError(
                        f"root {z:g} (x{m}) lacks a reflected partner")
                unmatched.remove(hit[0])
            if unmatched:
                raise SpectralSplitError(
                    f"unpaired right-half-plane roots: {unmatched}")
        except SpectralSplitError as exc:
            last_err = exc
            continue
        return tol * scale, axis, left
    raise SpectralSplitError(
        f"could not split the roots of mu consistently: {last_err}")


def compute_mu(p1, q, contraction_tol: float = 1e-9,
               coprime_tol: float = 1e-10,
               recon_tol: float = 1e-6) -> ScalarFactorization:
    """Deficiency polynomial mu = q q* - p1 p1* and its parity split.

    Validates that deg p1 <= deg q, q is stable, p1 and q are coprime
    (resultant test) and |p1| <= |q| on the imaginary-axis sample grid,
    then factors mu = c (r1 r1*)^2 r2 r2* by clustering its roots.  The
    reconstruction is verified against the coefficients of mu.
    """
    p1 = poly_trim(p1)
    q = poly_trim(q)
    if np.all(p1 == 0):
        raise ValidationError("p1 must not be identically zero")
    if p1.size > q.size:
        raise ValidationError("deg p1 must not exceed deg q")
    qroots, _ = poly_roots(q)
    if any(z.real >= -1e-12 for z, _ in qroots):
        raise ValidationError("q must have all roots in the open left half-plane")
    if _sylvester_resultant(p1, q) <= coprime_tol:
        # the normalized determinant is a conservative bound; condemn the
        # pair only if the root sets actually touch
        p1roots, _ = poly_roots(p1)
        if p1roots and qroots:
            sep = min(abs(z - w) for z, _ in p1roots for w, _ in qroots)
            scale = 1.0 + max(abs(z) for z, _ in list(p1roots) + list(qroots))
            if sep <= 1e-7 * scale:
                raise ValidationError(
                    f"p1 and q share a root near separation {sep:g}; they "
                    "must be coprime")
        else:
            raise ValidationError("p1 and q must be coprime (resultant is zero)")
    for w in frequency_grid():
        vq = npp.polyval(1j * w, q)
        vp = npp.polyval(1j * w, p1)
        if abs(vp) > abs(vq) * (1.0 + contraction_tol):
            raise ValidationError(
                f"|p1(iw)| exceeds |q(iw)| at w = {w:g}: S is not contractive")
    mu = poly_trim(npp.polysub(npp.polymul(q, poly_para(q)),
                               npp.polymul(p1, poly_para(p1))))
    if mu.size == 1 and abs(mu[0]) == 0:
        raise ValidationError("mu vanishes identically: S is inner, not "
                              "strictly contractive anywhere")
    tol, axis, pairs = _classify_mu_roots(mu, (1e-6, 1e-5, 1e-4, 1e-3))
    r1_roots, r2_off_roots, r2_axis_roots = [], [], []
    for z, m in pairs:
        r1_roots.extend([z] * (m // 2))
        if m % 2 == 1:
            r2_off_roots.append(z)
    for z, m in axis:
        e = m // 2
        r1_roots.extend([z] * (e // 2))
        if e % 2 == 1:
            r2_axis_roots.append(z)
    r1 = npp.polyfromroots(r1_roots).astype(complex)
    r2_off = npp.polyfromroots(r2_off_roots).astype(complex)
    r2_axis = npp.polyfromroots(r2_axis_roots).astype(complex)
    r2 = poly_trim(npp.polymul(r2_off, r2_axis))
    recon = npp.polymul(
        npp.polymul(npp.polymul(r1, poly_para(r1)), npp.polymul(r1, poly_para(r1))),
        npp.polymul(r2, poly_para(r2)))
    recon = poly_trim(recon)
    if recon.size != mu.size:
        raise SpectralSplitError(
            "parity split lost or gained degree against mu; root clustering "
            "is inconsistent")
    c = mu[-1] / recon[-1]
    if abs(c.imag) > 1e-8 * abs(c) or c.real <= 0:
        raise SpectralSplitError(f"parity-split constant {c:g} is not positive")
    c = float(c.real)
    err = np.linalg.norm(mu - c * recon) / max(np.linalg.norm(mu), 1e-300)
    if err > recon_tol:
        raise SpectralSplitError(
            f"parity split reconstructs mu to relative error {err:g} only")
    return ScalarFactorization(mu=mu, r1=r1, r2=r2, kappa=len(r2_off_roots),
                               constant=c, r2_offaxis=r2_off, r2_axis=r2_axis,
                               cluster_tolerance=tol)


def spectral_factor_poly(m, recon_tol: float = 1e-8) -> np.ndarray:
    """Stable polynomial p2 with p2 p2* = m.

    m must be para-symmetric (m* = m) and nonnegative on the imaginary
    axis; imaginary-axis roots must have even multiplicity and are
    assigned to p2 at half multiplicity, all other stable roots at full
    multiplicity.
    """
    m = poly_trim(m)
    if np.linalg.norm(m - poly_para(m)) > 1e-9 * np.linalg.norm(m):
        raise ValidationError("m is not para-symmetric (m* != m)")
    for w in frequency_grid():
        v = npp.polyval(1j * w, m)
        if v.real < -1e-9 * max(1.0, np.linalg.norm(m)):
            raise ValidationError(f"m(i{w:g}) = {v.real:g} is negative")
    if m.size == 1:
        return np.array([np.sqrt(m[0].real)], dtype=complex)
    tol, axis, pairs = _classify_mu_roots(m, (1e-6, 1e-5, 1e-4, 1e-3))
    stable = []
    for z, mult in pairs:
        stable.extend([z] * mult)
    for z, mult in axis:
        stable.extend([z] * (mult // 2))
    p2 = npp.polyfromroots(stable).astype(complex)
    # positive scale factor fixed at the grid point where m is largest
    grid = frequency_grid()
    vals = np.array([npp.polyval(1j * w, m).real for w in grid])
    w0 = grid[int(np.argmax(np.abs(vals)))]
    ratio = npp.polyval(1j * w0, m).real / abs(npp.polyval(1j * w0, p2)) ** 2
    if ratio <= 0:
        raise ValidationError("spectral factor scale is not positive")
    p2 = p2 * np.sqrt(ratio)
    err = np.linalg.norm(poly_trim(npp.polymul(p2, poly_para(p2))) - m)
    if err > recon_tol * max(1.0, np.linalg.norm(m)):
        raise ValidationError(
            f"spectral factor reconstructs m to error {err:g} only")
    return p2


def siso_realization(num, den) -> Realization:
    """Controllable-canonical realization of a proper scalar fraction."""
    num = poly_trim(num)
    den = poly_trim(den)
    if num.size > den.size:
        raise ValidationError("fraction is improper (deg num > deg den)")
    lead = den[-1]
    den = den / lead
    num = num / lead
    n = den.size - 1
    if n == 0:
        return Realization(np.zeros((0, 0)), np.zeros((0, 1)),
                           np.zeros((1, 0)), np.array([[num[0]]]))
    d = num[n] if num.size == n + 1 else 0.0
    full = np.zeros(n + 1, dtype=complex)
    full[: num.size] = num
    strict = full[:n] - d * den[:n]
    A = np.zeros((n, n), dtype=complex)
    A[:-1, 1:] = np.eye(n - 1)
    A[-1, :] = -den[:n]
    B = np.zeros((n, 1), dtype=complex)
    B[-1, 0] = 1.0
    C = strict.reshape(1, n)
    return Realization(A, B, C, np.array([[d]], dtype=complex))


def scalar_minimal_extension(p1, q) -> tuple[Realization, int]:
    """Explicit minimal symmetric inner 2 x 2 extension of S = p1/q.

    Built entrywise from the parity split,

        [[ -(p1*/q)(r2*/r2),  sqrt(c) r1 r1* r2*/q ],
         [ sqrt(c) r1 r1* r2*/q,  p1/q ]],

    where axis factors of r2 cancel in r2*/r2 up to sign, so the
    McMillan degree is deg q + kappa.  Symmetry, innerness, the S block
    and the degree are all verified before returning.
    """
    fac = compute_mu(p1, q)
    p1 = poly_trim(p1)
    q = poly_trim(q)
    dax = fac.r2_axis.size - 1
    sign = (-1.0) ** (dax + 1)
    num11 = sign * npp.polymul(poly_para(p1), poly_para(fac.r2_offaxis))
    den11 = npp.polymul(q, fac.r2_offaxis)
    off = np.sqrt(fac.constant) * npp.polymul(
        npp.polymul(fac.r1, poly_para(fac.r1)), poly_para(fac.r2))
    e11 = siso_realization(num11, den11)
    e12 = siso_realization(off, q)
    e21 = siso_realization(off, q)
    e22 = siso_realization(p1, q)
    n_states = e11.n + e12.n + e21.n + e22.n
    import scipy.linalg as sla
    A = sla.block_diag(e11.a, e12.a, e21.a, e22.a)
    Z = [np.zeros((r.n, 1)) for r in (e11, e12, e21, e22)]
    B = np.block([[e11.b, Z[0]], [Z[1], e12.b], [e21.b, Z[2]], [Z[3], e22.b]])
    C = np.block([
        [e11.c, e12.c, np.zeros((1, e21.n)), np.zeros((1, e22.n))],
        [np.zeros((1, e11.n)), np.zeros((1, e12.n)), e21.c, e22.c]])
    D = np.block([[e11.d, e12.d], [e21.d, e22.d]])
    big = Realization(A, B, C, D)
    out, cert = minimal_realization(big, rank_tol=1e-9)
    expected = (q.size - 1) + fac.kappa
    if cert.mcmillan_degree != expected:
        raise ValidationError(
            f"scalar extension degree {cert.mcmillan_degree} differs from "
            f"deg(q) + kappa = {expected}")
    ir = innerness_residual(out)
    sr = symmetry_residual(out)
    if max(ir, sr) > 1e-8:
        raise ValidationError(
            f"scalar extension failed certification (inner {ir:g}, "
            f"symmetric {sr:g})")
    pts = [1j * w for w in (0.17, -0.83, 3.1)] + [0.9 + 0.4j]
    for s in pts:
        want = npp.polyval(s, p1) / npp.polyval(s, q)
        got = evaluate(out, s)[1, 1]
        if abs(got - want) > 1e-8 * (1 + abs(want)):
            raise ValidationError("lower-right block does not match p1/q")
    return out, cert.mcmillan_degree
