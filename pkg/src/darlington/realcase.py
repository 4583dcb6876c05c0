"""Real-coefficient analysis: when does a real symmetric Schur function
admit a REAL symmetric inner extension at McMillan degree n?

A real rational S has a real minimal realization, and a real symmetric
S has a minimal realization that is signature symmetric:

    A^T = J A J,  B^T = C J,  C^T = J B,  D^T = D,
    J = diag(+-1).

The inner extension built on a Riccati solution P is real exactly when
P is real; in signature coordinates P~ = J P^{-T} J is again a solution
with S_{P~} = S_P^T, so a real symmetric extension of degree n requires
a real solution fixed by that involution.  The feasibility search below
restricts to the extremal solutions and their J-conjugates, which is
decisive for the worked families in scope; the report says which
obstruction blocked a witness.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .extension import build_extension
from .realization import Realization, evaluate, kalman_check
from .riccati import (
    analyze_spectrum,
    build_hamiltonian,
    build_hat,
    riccati_residual,
    solve_extremal,
)

__all__ = [
    "SignatureRealization",
    "signature_realization",
    "is_real_extension",
    "FeasibilityReport",
    "real_symmetric_feasibility",
]

_REAL_TOL = 1e-9
_STRUCT_TOL = 1e-10


@dataclass(frozen=True)
class SignatureRealization:
    """Real realization with A^T = JAJ, B^T = CJ, C^T = JB, D^T = D."""
    realization: Realization
    j: np.ndarray

    def __post_init__(self):
        R = self.realization
        j = np.asarray(self.j).ravel()
        if j.size != R.n or not np.all(np.abs(j) == 1):
            raise ValidationError("J must be a +-1 vector of length n")
        for name, M in (("A", R.a), ("B", R.b), ("C", R.c), ("D", R.d)):
            if np.linalg.norm(M.imag) > _REAL_TOL * (1 + np.linalg.norm(M)):
                raise ValidationError(f"{name} is not real")
        J = np.diag(j.astype(float))
        scale = 1.0 + np.linalg.norm(R.a, 2)
        ok = (np.linalg.norm(R.a.T - J @ R.a @ J, 2) <= _STRUCT_TOL * scale
              and np.linalg.norm(R.b.T - R.c @ J, 2) <= _STRUCT_TOL * scale
              and np.linalg.norm(R.c.T - J @ R.b, 2) <= _STRUCT_TOL * scale
              and np.linalg.norm(R.d.T - R.d, 2) <= _STRUCT_TOL * scale)
        if not ok:
            raise ValidationError("realization is not signature symmetric for J")
        object.__setattr__(self, "j", j.astype(int))

    @property
    def j_matrix(self) -> np.ndarray:
        return np.diag(self.j.astype(float))


def signature_realization(R: Realization) -> SignatureRealization:
    """Signature-symmetric form of a real minimal realization of a
    symmetric transfer function.

    Solves the real intertwining equations T A = A^T T, T B = C^T for
    the (unique, real symmetric, invertible) similarity T, factors
    T = M^T J M with M real through the eigendecomposition of T, and
    transforms the realization.
    """
    for name, M in (("A", R.a), ("B", R.b), ("C", R.c), ("D", R.d)):
        if np.linalg.norm(M.imag) > _REAL_TOL * (1 + np.linalg.norm(M)):
            raise ValidationError(f"{name} is not real; realcase needs a real realization")
    if not kalman_check(R).minimal:
        raise ValidationError("signature form needs a minimal realization")
    A, B, C = R.a.real, R.b.real, R.c.real
    n = R.n
    I = np.eye(n)
    M1 = np.kron(A.T, I) - np.kron(I, A.T)
    M2 = np.kron(B.T, I)
    rhs = np.concatenate([np.zeros(n * n), C.T.flatten(order="F")])
    vecT, *_ = np.linalg.lstsq(np.vstack([M1, M2]), rhs, rcond=None)
    T = vecT.reshape((n, n), order="F")
    T = (T + T.T) / 2
    res = max(np.linalg.norm(T @ A - A.T @ T, 2), np.linalg.norm(T @ B - C.T, 2))
    if res > 1e-7 * max(1.0, np.linalg.norm(T, 2)):
        raise ValidationError(
            f"no real intertwiner found (residual {res:g}); is the transfer "
            "function symmetric?")
    w, O = np.linalg.eigh(T)
    if np.min(np.abs(w)) <= 1e-12 * max(1.0, np.max(np.abs(w))):
        raise ValidationError("intertwiner T is numerically singular")
    order = np.argsort(-np.sign(w))  # +1 entries first
    w, O = w[order], O[:, order]
    j = np.sign(w).astype(int)
    M = np.diag(np.sqrt(np.abs(w))) @ O.T
    Minv = np.linalg.inv(M)
    out = Realization(M @ A @ Minv, M @ B, C @ Minv, R.d.real)
    return SignatureRealization(realization=out, j=j)


def is_real_extension(P, R: Realization, seed: int = 0x7EA1) -> bool:
    """True iff the inner extension built on P has real coefficients.

    Decided by ||Im P||, certified independently by the conjugate
    symmetry S(conj(s)) = conj(S(s)) of the extension at 16 random
    non-real points; the two verdicts must agree.
    """
    for name, M in (("A", R.a), ("B", R.b), ("C", R.c), ("D", R.d)):
        if np.linalg.norm(M.imag) > _REAL_TOL * (1 + np.linalg.norm(M)):
            raise ValidationError(f"{name} is not real")
    Pm = P.p if hasattr(P, "p") else np.asarray(P, dtype=complex)
    real_p = bool(np.linalg.norm(Pm.imag, 2) <= _REAL_TOL * (1 + np.linalg.norm(Pm, 2)))
    E = build_extension(R, Pm)
    rng = np.random.default_rng(seed)
    poles = E.realization.poles()
    right = float(np.max(poles.real)) + 1.0 if poles.size else 1.0
    worst = 0.0
    count = 0
    while count < 16:
        s = complex(right + 2 * rng.random(), 3 * (rng.random() - 0.5))
        if abs(s.imag) < 0.1:
            continue
        count += 1
        v1 = evaluate(E.realization, np.conj(s))
        v2 = np.conj(evaluate(E.realization, s))
        worst = max(worst, np.linalg.norm(v1 - v2, 2))
    certified = bool(worst <= 1e-8 * (1 + np.linalg.norm(Pm, 2)))
    if certified != real_p:
        raise ValidationError(
            f"realness certificates disagree: ||Im P|| says {real_p}, "
            f"conjugate symmetry (residual {worst:g}) says {certified}")
    return real_p


@dataclass(frozen=True)
class FeasibilityReport:
    """Verdict on real symmetric extendability at degree n."""
    feasible: bool
    witness: np.ndarray | None
    obstruction: str
    candidates_tried: int

    @property
    def kind(self) -> str:
        return "feasible_at_degree_n" if self.feasible else "infeasible_at_degree_n"


def real_symmetric_feasibility(SR: SignatureRealization) -> FeasibilityReport:
    """Search for a real Riccati solution P with J P^{-T} J = P, which is
    exactly the condition for S_P to be a real symmetric inner extension
    at the same degree.

    Only the extremal solutions and their J-conjugates are examined;
    if none qualifies the report carries the spectral obstruction.
    """
    R = SR.realization
    J = SR.j_matrix
    hat = build_hat(R)
    pmin, pmax = solve_extremal(hat)
    spectrum = analyze_spectrum(build_hamiltonian(hat))
    seen: list[np.ndarray] = []
    cands = []
    for sol in (pmin, pmax):
        for P in (sol.p, J @ np.linalg.inv(sol.p.T) @ J):
            if riccati_residual(hat, P) > 1e-7 * (1 + np.linalg.norm(P, 2) ** 2):
                continue
            if any(np.linalg.norm(P - Q, 2) <= 1e-9 * (1 + np.linalg.norm(P, 2))
                   for Q in seen):
                continue
            seen.append(P)
            cands.append(P)
    for P in cands:
        scale = 1.0 + np.linalg.norm(P, 2)
        real_ok = np.linalg.norm(P.imag, 2) <= _REAL_TOL * scale
        fixed = np.linalg.norm(J @ np.linalg.inv(P.T) @ J - P, 2) <= 1e-8 * scale
        if real_ok and fixed:
            return FeasibilityReport(feasible=True, witness=P.real.copy(),
                                     obstruction="", candidates_tried=len(cands))
    odd = [c for c, m, lab in spectrum.clusters if m % 2 == 1]
    if odd:
        reason = (f"chi_H is not a perfect square (odd-multiplicity "
                  f"eigenvalues near {np.round(odd, 6)}); no symmetric "
                  "extension at degree n exists even over the complex field")
    else:
        reason = ("chi_H is a perfect square, so complex symmetric "
                  "degree-n extensions exist, but no real extremal-lattice "
                  "solution satisfies J P^{-T} J = P; any degree-n real "
                  "symmetric extension would need a real solution fixed by "
                  "the J-involution and none was found")
    return FeasibilityReport(feasible=False, witness=None, obstruction=reason,
                             candidates_tried=len(cands))
