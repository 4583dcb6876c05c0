"""Riccati layer: shifted data, Hamiltonian structure, extremal
solutions, spectrum split."""
import numpy as np
import pytest

from darlington import (
    Realization,
    analyze_spectrum,
    build_hamiltonian,
    build_hat,
    hermitian_order,
    riccati_residual,
    solve_extremal,
)
from darlington.errors import NotContractiveError

SQ3 = np.sqrt(3.0)


def symmetric_scalar(a: float, c: float, d: float) -> Realization:
    """f(s) = d + c (s - a)^{-1} c with its symmetric 1-state realization."""
    return Realization(np.array([[a]]), np.array([[c]]),
                       np.array([[c]]), np.array([[d]]))


class TestBuildHat:
    def test_d_zero_collapses(self, zeta2):
        hat = build_hat(zeta2)
        assert np.allclose(hat.a_hat, zeta2.a)
        assert np.allclose(hat.bbs, np.eye(2))
        assert np.allclose(hat.csc, np.eye(2))
        assert np.allclose(hat.b_hat, zeta2.b)
        assert np.allclose(hat.c_hat, zeta2.c)

    def test_worked_example_formula(self):
        # for A = a I, B = C = c I, D = d I the shifted dynamics is
        # (a (1-|d|^2) + c^2 conj(d)) / (1-|d|^2) times the identity
        a, c, d = -2.0, 1.0, 0.0
        R = Realization(a * np.eye(2), c * np.eye(2), c * np.eye(2),
                        d * np.eye(2))
        hat = build_hat(R)
        expected = (a * (1 - abs(d) ** 2) + c ** 2 * np.conj(d)) / (1 - abs(d) ** 2)
        assert np.allclose(hat.a_hat, expected * np.eye(2))

    def test_scalar_hand_riccati(self):
        # d = 1/2, c = sqrt(3)/2, a = -3/2 (Schur boundary family
        # a = -c^2/(1-d)): hat data collapses to A_hat = -1,
        # BBs = CsC = 1, so R(p) = (p - 1)^2 and P = 1 is the unique
        # solution
        R = symmetric_scalar(-1.5, SQ3 / 2, 0.5)
        hat = build_hat(R)
        assert abs(hat.a_hat[0, 0] + 1.0) < 1e-14
        assert abs(hat.bbs[0, 0] - 1.0) < 1e-14
        assert abs(hat.csc[0, 0] - 1.0) < 1e-14
        assert riccati_residual(hat, np.array([[1.0]])) < 1e-14
        pmin, pmax = solve_extremal(hat)
        assert abs(pmin.p[0, 0] - 1.0) < 1e-8
        assert abs(pmax.p[0, 0] - 1.0) < 1e-8

    def test_rejects_unit_d(self):
        R = symmetric_scalar(-1.0, 0.5, 1.0)
        with pytest.raises(NotContractiveError):
            build_hat(R)


class TestHamiltonian:
    def test_structure_identity(self, zeta2):
        ham = build_hamiltonian(build_hat(zeta2))
        assert ham.structure_residual() <= 1e-10

    def test_worked_example_spectrum(self, zeta2):
        ham = build_hamiltonian(build_hat(zeta2))
        lam = np.sort(np.linalg.eigvals(ham.matrix).real)
        assert np.allclose(lam, [-SQ3, -SQ3, SQ3, SQ3], atol=1e-8)

    def test_nilpotent_case(self, zeta1):
        ham = build_hamiltonian(build_hat(zeta1))
        lam = np.linalg.eigvals(ham.matrix)
        assert np.max(np.abs(lam)) < 1e-7
        # nilpotent of index 2
        H2 = ham.matrix @ ham.matrix
        assert np.linalg.norm(H2, 2) < 1e-12

    def test_spectrum_mirror_symmetry(self):
        rng = np.random.default_rng(17)
        A = np.diag([-1.0, -2.0]) + 0.1 * (rng.normal(size=(2, 2))
                                           + 1j * rng.normal(size=(2, 2)))
        A = (A + A.T) / 2
        B = rng.normal(size=(2, 2)) * 0.3
        R = Realization(A, B, B.T, np.zeros((2, 2)))
        ham = build_hamiltonian(build_hat(R))
        lam = np.linalg.eigvals(ham.matrix)
        mirrored = -np.conj(lam)
        for z in lam:
            assert np.min(np.abs(mirrored - z)) < 1e-8


class TestResidual:
    def test_extremal_roots_of_quadratic(self, zeta2):
        hat = build_hat(zeta2)
        # eigenvalues solve p^2 - 4p + 1 = 0
        assert riccati_residual(hat, (2 - SQ3) * np.eye(2)) < 1e-12
        assert riccati_residual(hat, (2 + SQ3) * np.eye(2)) < 1e-12

    def test_complex_solution(self, zeta2):
        hat = build_hat(zeta2)
        P = np.array([[2.0, 1j * SQ3], [-1j * SQ3, 2.0]])
        assert riccati_residual(hat, P) < 1e-12
        assert np.linalg.norm(P @ P.T - np.eye(2), 2) < 1e-12

    def test_zero_gives_bbs_norm(self, zeta2):
        hat = build_hat(zeta2)
        assert abs(riccati_residual(hat, np.zeros((2, 2)))
                   - np.linalg.norm(hat.bbs, 2)) < 1e-14


class TestSolveExtremal:
    def test_worked_example(self, zeta2):
        pmin, pmax = solve_extremal(build_hat(zeta2))
        assert np.allclose(pmin.p, (2 - SQ3) * np.eye(2), atol=1e-8)
        assert np.allclose(pmax.p, (2 + SQ3) * np.eye(2), atol=1e-8)
        assert pmin.kind == "minimal" and pmax.kind == "maximal"

    def test_unique_solution_case(self, zeta1):
        pmin, pmax = solve_extremal(build_hat(zeta1))
        assert np.allclose(pmin.p, np.eye(2), atol=1e-9)
        assert np.allclose(pmax.p, np.eye(2), atol=1e-9)

    def test_scalar_quadratic(self):
        # S = 0.5/(s+1) with the symmetric realization c^2 = 0.5: the
        # eigenvalue equation is p^2 - 4p + 1 = 0
        R = symmetric_scalar(-1.0, np.sqrt(0.5), 0.0)
        pmin, pmax = solve_extremal(build_hat(R))
        assert abs(pmin.p[0, 0] - (2 - SQ3)) < 1e-10
        assert abs(pmax.p[0, 0] - (2 + SQ3)) < 1e-10
        assert pmin.residual_norm < 1e-10 and pmax.residual_norm < 1e-10

    def test_closed_loop_spectra_split_hamiltonian(self, zeta2):
        hat = build_hat(zeta2)
        ham = build_hamiltonian(hat)
        pmin, _ = solve_extremal(hat)
        z_eigs = np.linalg.eigvals(pmin.z)
        anti = np.linalg.eigvals(-pmin.z.conj().T)
        union = np.sort_complex(np.concatenate([z_eigs, anti]))
        h_eigs = np.sort_complex(np.linalg.eigvals(ham.matrix))
        assert np.allclose(union, h_eigs, atol=1e-8)

    def test_minimal_has_stable_closed_loop(self, zeta2):
        pmin, pmax = solve_extremal(build_hat(zeta2))
        assert np.max(np.linalg.eigvals(pmin.z).real) <= 1e-8
        assert np.min(np.linalg.eigvals(pmax.z).real) >= -1e-8


class TestAnalyzeSpectrum:
    def test_even_double_pair(self, zeta2):
        spec = analyze_spectrum(build_hamiltonian(build_hat(zeta2)))
        assert (spec.kappa, spec.n0) == (0, 0)
        mults = sorted(m for _, m, _ in spec.clusters)
        assert mults == [2, 2]

    def test_axis_cluster(self, zeta1):
        spec = analyze_spectrum(build_hamiltonian(build_hat(zeta1)))
        assert (spec.kappa, spec.n0) == (0, 2)

    def test_simple_scalar(self):
        R = symmetric_scalar(-1.0, np.sqrt(0.5), 0.0)
        spec = analyze_spectrum(build_hamiltonian(build_hat(R)))
        assert (spec.kappa, spec.n0) == (1, 0)
        assert len(spec.chi_plus_roots) == 1
        assert abs(spec.chi_plus_roots[0] - SQ3 / 2) < 1e-8

    def test_pi_reassembly(self, zeta2):
        spec = analyze_spectrum(build_hamiltonian(build_hat(zeta2)))
        assert 2 * sum(m for _, m in spec.pi_roots) + 2 * spec.kappa == 4


class TestLatticeInvariants:
    @pytest.mark.parametrize("idx", range(6))
    def test_suite_invariants(self, instance_suite, idx):
        inst = instance_suite[idx]
        R = inst.realization
        from darlington import symmetrize
        Rs = symmetrize(R)
        hat = build_hat(Rs)
        pmin, pmax = solve_extremal(hat)
        # residual bounds
        assert pmin.residual_norm <= 1e-8
        assert pmax.residual_norm <= 1e-8
        # Loewner order
        assert hermitian_order(pmin.p, pmax.p, psd_tol=1e-9) in (
            "less_equal", "equal")
        # inverse-transpose pairing for symmetric realizations
        assert np.linalg.norm(np.linalg.inv(pmin.p.T) - pmax.p, 2) <= \
            1e-8 * (1 + np.linalg.norm(pmax.p, 2))
        # solution set closed under P -> P^{-T}
        assert riccati_residual(hat, np.linalg.inv(pmin.p.T)) <= 1e-8

    def test_hat_data_inherits_symmetry(self, instance_suite):
        # for a symmetric realization: A_hat = A_hat^T and BBs = CsC^T
        from darlington import symmetrize
        for inst in instance_suite[:6]:
            hat = build_hat(symmetrize(inst.realization))
            scale = 1.0 + np.linalg.norm(hat.a_hat, 2)
            assert np.linalg.norm(hat.a_hat - hat.a_hat.T, 2) <= 1e-9 * scale
            assert np.linalg.norm(hat.bbs - hat.csc.T, 2) <= 1e-9 * scale

    def test_kernel_dimension_is_n0(self, instance_suite):
        from darlington import symmetrize
        for inst in instance_suite:
            if inst.expected_n0 is None:
                continue
            Rs = symmetrize(inst.realization)
            hat = build_hat(Rs)
            pmin, pmax = solve_extremal(hat)
            gap = pmax.p - pmin.p
            w = np.linalg.eigvalsh(gap)
            scale = max(1.0, abs(w).max())
            n0 = int(np.sum(np.abs(w) <= 1e-7 * scale))
            assert n0 == inst.expected_n0, inst.name
