"""Shared fixtures: worked examples and randomized Schur instance
generators with conditioning control.

Random symmetric Schur functions are assembled from scalar fractions
p1/q (with a prescribed parity structure of mu = q q* - p1 p1*) placed
on the diagonal and mixed by a constant unitary congruence U^T diag U,
which preserves symmetry, contractivity and the Hamiltonian spectrum
structure.  Instances whose extremal Riccati solutions are badly
conditioned are redrawn, keeping every certified tolerance in this
suite meaningful in double precision.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.polynomial.polynomial as npp
import pytest
import scipy.linalg as sla

from darlington import (
    Realization,
    build_hat,
    minimal_realization,
    solve_extremal,
)
from darlington.scalar import poly_para, poly_trim, siso_realization, spectral_factor_poly


# --------------------------------------------------------- worked example

def coupled_pair_realization(zeta: float) -> Realization:
    """diag(f, f) with f(s) = 1/(s + zeta): the 2 x 2 worked example."""
    return Realization(-zeta * np.eye(2), np.eye(2), np.eye(2), np.zeros((2, 2)))


@pytest.fixture(scope="session")
def zeta2() -> Realization:
    return coupled_pair_realization(2.0)


@pytest.fixture(scope="session")
def zeta1() -> Realization:
    return coupled_pair_realization(1.0)


# ------------------------------------------------------ scalar generators

def random_unitary(rng: np.random.Generator, p: int) -> np.ndarray:
    Z = rng.normal(size=(p, p)) + 1j * rng.normal(size=(p, p))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def _random_stable_roots(rng: np.random.Generator, k: int,
                         re=(-1.8, -0.25), im=(-1.0, 1.0)) -> list[complex]:
    return [complex(rng.uniform(*re), rng.uniform(*im)) for _ in range(k)]


def random_scalar_fraction(rng: np.random.Generator, n: int,
                           kappa: int | None = None, n_axis: int = 0,
                           gain=(0.3, 0.85)):
    """Coefficients (p1, q) of a scalar Schur fraction of degree n,
    strictly contractive at infinity.

    With ``kappa`` given (requires n - kappa - n_axis even and >= 0) the
    parity structure of mu is prescribed: kappa simple off-axis root
    pairs, n_axis axis roots of multiplicity two, and double pairs for
    the remainder.  The poles of q are jittered copies of the stable
    roots of mu so that mu/(q q*) stays uniformly bounded on the axis,
    which keeps the resulting Riccati lattice well conditioned.  With
    ``kappa`` None the fraction is generic (mu has simple roots,
    kappa = n).
    """
    if kappa is None:
        q = npp.polyfromroots(_random_stable_roots(rng, n)).astype(complex)
        p1 = npp.polyfromroots(
            [complex(rng.uniform(-0.5, 1.0), rng.uniform(-1.0, 1.0))
             for _ in range(n)]).astype(complex)
        ws = np.linspace(-60, 60, 2401)
        ratio = max(abs(npp.polyval(1j * w, p1) / npp.polyval(1j * w, q))
                    for w in ws)
        p1 = p1 * (rng.uniform(*gain) / ratio)
        return poly_trim(p1), poly_trim(q)
    a2 = n - kappa - n_axis
    if a2 < 0 or a2 % 2:
        raise ValueError("need n - kappa - n_axis even and nonnegative")
    a = a2 // 2
    r1_roots = _random_stable_roots(rng, a)
    r2_roots = _random_stable_roots(rng, kappa)
    r1 = npp.polyfromroots(r1_roots).astype(complex) if a else np.array([1.0 + 0j])
    r2 = npp.polyfromroots(r2_roots).astype(complex) if kappa else np.array([1.0 + 0j])
    mu0 = npp.polymul(
        npp.polymul(npp.polymul(r1, poly_para(r1)), npp.polymul(r1, poly_para(r1))),
        npp.polymul(r2, poly_para(r2)))
    axis_ws = []
    for _ in range(n_axis):
        w0 = rng.uniform(-1.5, 1.5)
        axis_ws.append(w0)
        ax = np.array([-1j * w0, 1.0], dtype=complex)  # (s - i w0)
        mu0 = npp.polymul(mu0, -npp.polymul(ax, ax))   # -(s - i w0)^2 >= 0 on axis
    def jitter(z):
        d = complex(rng.uniform(-0.35, 0.35), rng.uniform(-0.35, 0.35))
        return complex(min(z.real + d.real, -0.15), z.imag + d.imag)
    q_roots = [jitter(z) for z in r1_roots for _ in range(2)]
    q_roots += [jitter(z) for z in r2_roots]
    q_roots += [jitter(complex(-0.4, w0)) for w0 in axis_ws]
    q = npp.polyfromroots(q_roots).astype(complex)
    qqs = npp.polymul(q, poly_para(q))
    ws = np.linspace(-60, 60, 2401)
    vq = np.array([npp.polyval(1j * w, qqs).real for w in ws])
    vm = np.array([npp.polyval(1j * w, mu0).real for w in ws])
    eps = rng.uniform(*gain) * float(np.min(vq / np.maximum(vm, 1e-290)))
    p1 = spectral_factor_poly(poly_trim(npp.polysub(qqs, eps * mu0)))
    return poly_trim(p1), poly_trim(q)


def scalar_mu_kappa(p1, q) -> tuple[np.ndarray, int]:
    """Independent kappa count: odd-multiplicity open-right-half-plane
    root clusters of mu = q q* - p1 p1* (pure polynomial arithmetic)."""
    from darlington.scalar import compute_mu
    fac = compute_mu(p1, q)
    return fac.mu, fac.kappa


def assemble_congruence(scalars: list[Realization],
                        U: np.ndarray) -> Realization:
    """Symmetric realization of U^T diag(s_1, ..., s_p) U."""
    A = sla.block_diag(*[r.a for r in scalars])
    B = sla.block_diag(*[r.b for r in scalars]) @ U
    C = U.T @ sla.block_diag(*[r.c for r in scalars])
    D = U.T @ sla.block_diag(*[r.d for r in scalars]) @ U
    return Realization(A, B, C, D)


# --------------------------------------------------------- instance suite

@dataclass
class Instance:
    """One randomized symmetric Schur test instance."""
    name: str
    realization: Realization
    p: int
    n: int
    expected_kappa: int | None = None
    expected_n0: int | None = None
    scalars: list = field(default_factory=list)  # (p1, q) pairs when built from them


def _well_conditioned(R: Realization, n0: int | None = None,
                      cap: float = 2e3) -> bool:
    """Accept an instance only if the extremal lattice is tame in the
    symmetric coordinates the pipeline actually works in: moderate
    solution norms, tiny residuals, and a clean spectral gap in
    P_max - P_min so the kernel dimension (= n0) is decidable."""
    import warnings
    from darlington import symmetrize
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            Rs = symmetrize(R)
            pmin, pmax = solve_extremal(build_hat(Rs))
    except Exception:
        return False
    if not (np.linalg.norm(pmax.p, 2) <= cap
            and np.linalg.norm(np.linalg.inv(pmin.p), 2) <= cap
            and max(pmin.residual_norm, pmax.residual_norm) <= 1e-10
            and pmin.subspace_condition <= 1e6
            and pmax.subspace_condition <= 1e6):
        return False
    if n0 is not None:
        w = np.sort(np.abs(np.linalg.eigvalsh(pmax.p - pmin.p)))
        scale = max(1.0, w[-1]) if w.size else 1.0
        if n0 > 0 and w[n0 - 1] > 1e-8 * scale:
            return False
        if n0 < w.size and w[n0] < 1e-4 * scale:
            return False
    return True


def _draw_instance(rng: np.random.Generator, spec: tuple) -> Instance | None:
    kind = spec[0]
    if kind == "scalar":
        _, n, kappa, n_axis = spec
        p1, q = random_scalar_fraction(rng, n, kappa=kappa, n_axis=n_axis)
        R, _ = minimal_realization(siso_realization(p1, q))
        if R.n != n:
            return None
        nome = f"p1-n{n}-k{'g' if kappa is None else kappa}-ax{n_axis}"
        return Instance(name=nome, realization=R, p=1, n=n,
                        expected_kappa=n if kappa is None else kappa,
                        expected_n0=0 if kappa is None else n_axis,
                        scalars=[(p1, q)])
    # congruence of scalar diagonals; distinct random components keep
    # the Hamiltonian spectra disjoint, so kappa and n0 add up
    _, parts = spec
    scalars, frs = [], []
    kap = ax = 0
    for (n_i, kappa_i, ax_i) in parts:
        p1, q = random_scalar_fraction(rng, n_i, kappa=kappa_i, n_axis=ax_i)
        r, _ = minimal_realization(siso_realization(p1, q))
        if r.n != n_i:
            return None
        scalars.append(r)
        frs.append((p1, q))
        kap += n_i if kappa_i is None else kappa_i
        ax += ax_i
    p = len(parts)
    U = random_unitary(rng, p)
    R = assemble_congruence(scalars, U)
    n = R.n
    nome = f"p{p}-" + "-".join(f"n{a}k{'g' if b is None else b}" for a, b, _ in parts)
    return Instance(name=nome, realization=R, p=p, n=n,
                    expected_kappa=kap, expected_n0=ax, scalars=frs)


_SUITE_SPECS = [
    # p = 1, n = 1..6
    ("scalar", 1, None, 0),
    ("scalar", 2, 0, 0),
    ("scalar", 2, None, 0),
    ("scalar", 3, 1, 0),
    ("scalar", 3, 0, 1),
    ("scalar", 4, 0, 0),
    ("scalar", 5, None, 0),
    ("scalar", 6, None, 0),
    # p = 2 (structured low-kappa content at larger n comes from sums of
    # small well-conditioned parts; conditioning is inherited blockwise)
    ("congruence", [(1, None, 0), (1, None, 0)]),
    ("congruence", [(2, 0, 0), (1, None, 0)]),
    ("congruence", [(2, 0, 0), (2, 0, 0)]),
    ("congruence", [(2, None, 0), (2, 0, 0)]),
    ("congruence", [(3, 1, 0), (1, None, 0)]),
    ("congruence", [(3, 0, 1), (1, None, 0)]),
    ("congruence", [(3, None, 0), (3, None, 0)]),
    # p = 3
    ("congruence", [(1, None, 0), (1, None, 0), (1, None, 0)]),
    ("congruence", [(2, 0, 0), (1, None, 0), (1, None, 0)]),
    ("congruence", [(2, 0, 0), (2, 0, 0), (1, None, 0)]),
    ("congruence", [(2, 0, 0), (2, 0, 0), (2, 0, 0)]),
    ("congruence", [(2, None, 0), (2, 0, 0), (1, None, 0)]),
]


def build_suite(seed: int = 2024, max_draws: int = 80) -> list[Instance]:
    rng = np.random.default_rng(seed)
    suite = []
    for spec in _SUITE_SPECS:
        inst = None
        for _ in range(max_draws):
            try:
                cand = _draw_instance(rng, spec)
            except Exception:
                continue
            if cand is not None and _well_conditioned(cand.realization,
                                                      cand.expected_n0):
                inst = cand
                break
        if inst is None:
            raise RuntimeError(f"could not draw a well-conditioned instance for {spec}")
        suite.append(inst)
    return suite


@pytest.fixture(scope="session")
def instance_suite() -> list[Instance]:
    return build_suite()


@pytest.fixture(scope="session")
def scalar_suite() -> list[tuple[np.ndarray, np.ndarray]]:
    """20 scalar fractions for the oracle-equivalence run."""
    rng = np.random.default_rng(77)
    out = []
    plan = [(1, None, 0), (2, None, 0), (2, 0, 0), (3, 1, 0), (3, None, 0),
            (4, 0, 0), (4, 2, 0), (3, 0, 1), (1, 1, 0), (2, 2, 0),
            (3, 3, 0), (4, None, 0), (4, 1, 1), (2, 1, 1), (3, 1, 0),
            (2, 0, 0), (5, None, 0), (5, None, 0), (6, None, 0), (6, None, 0)]
    for n, kappa, ax in plan:
        for _ in range(80):
            try:
                p1, q = random_scalar_fraction(rng, n, kappa=kappa, n_axis=ax)
                R, _ = minimal_realization(siso_realization(p1, q))
            except Exception:
                continue
            if R.n == n and _well_conditioned(R, 0 if kappa is None else ax):
                out.append((p1, q))
                break
        else:
            raise RuntimeError(f"no well-conditioned scalar instance for {(n, kappa, ax)}")
    return out
