import numpy as np
import pytest

from bargtop.errors import NotAbsolutelyConvergent
from bargtop.forms import ComplexQuadraticForm, Weight
from bargtop.model import ModelInstance, model_problem
from bargtop.oracle import (
    _coherent_coefficients,
    is_plateau,
    monomial_indices,
    norm_trend,
    numeric_coherent_norm,
    numeric_weyl,
    singular_decay,
    truncated_matrix,
)
from bargtop.toeplitz import ToeplitzProblem, VerdictClass, classify_operator
from bargtop.verify import random_admissible_problem
from bargtop.weyl import weyl_symbol


def scalar_problem(lam, a=0.0):
    return model_problem(ModelInstance(1, lam, np.array([[a]])))


def trivial_problem(n=1):
    return ToeplitzProblem(Weight.model(n), ComplexQuadraticForm.zero(n))


class TestTruncatedMatrix:
    def test_trivial_symbol_is_identity(self):
        top = truncated_matrix(trivial_problem(), 12)
        assert np.max(np.abs(top.t - np.eye(12))) < 1e-12

    def test_diagonal_law(self):
        for lam in (-0.5, 1j, 0.2):
            inst = ModelInstance(1, lam, np.zeros((1, 1)))
            top = truncated_matrix(model_problem(inst), 40)
            expect = inst.gamma ** np.arange(1, 41)
            diag = np.diag(top.t)
            rel = np.abs(diag - expect) / np.abs(expect)
            assert np.max(rel) < 1e-12
            off = top.t - np.diag(diag)
            assert np.max(np.abs(off)) == 0.0

    def test_norm_at_gamma_half(self):
        top = truncated_matrix(scalar_problem(-0.5), 40)
        assert abs(top.spectral_norm() - 0.5) < 1e-12

    def test_refinement_stability(self):
        problem = scalar_problem(0.1, 0.02)
        t1 = truncated_matrix(problem, 12)
        t2 = truncated_matrix(problem, 12, order=2 * t1.spec.order)
        drift = np.max(np.abs(t1.t - t2.t)) / max(1.0, np.max(np.abs(t1.t)))
        assert drift < 1e-8

    def test_first_entry_against_gaussian_determinant(self):
        # <e^q e_0, e_0> = (2 pi)^{-1} integral e^{q - |x|^2/2}, a pure Gaussian:
        # equals det(G)^{-1/2} / 2 for the real-coordinate exponent matrix G
        from bargtop.forms import quadratic_matrix
        from bargtop.oracle import _block_complex

        problem = scalar_problem(0.08 - 0.3j, 0.04)
        top = truncated_matrix(problem, 6)

        def fn(t):
            x = _block_complex(t)
            return 2.0 * problem.weight.value(x) - problem.q.value(x)

        g = quadratic_matrix(fn, 2)
        expect = 1.0 / (2.0 * np.sqrt(np.linalg.det(g)))
        assert top.t[0, 0] == pytest.approx(expect, rel=1e-12)

    def test_parity_selection_rule(self):
        # q couples only monomials of equal degree parity when qxbx is scalar
        top = truncated_matrix(scalar_problem(0.05, 0.03), 10)
        for j in range(10):
            for k in range(10):
                if (j - k) % 2 == 1:
                    assert abs(top.t[j, k]) < 1e-13

    def test_radial_n2_tensor_rule(self):
        # radial q at n=2 goes through the tensor rule; entries are
        # gamma^(|alpha| + 2) on the diagonal
        inst = ModelInstance(2, -0.3 + 0.2j, np.zeros((2, 2)))
        top = truncated_matrix(model_problem(inst), 6, order=24)
        idx = monomial_indices(2, 6)
        g = inst.gamma
        for j, alpha in enumerate(idx):
            assert top.t[j, j] == pytest.approx(g ** (sum(alpha) + 2), rel=1e-11)
            for k in range(6):
                if k != j:
                    assert abs(top.t[j, k]) < 1e-11

    def test_rejects_pluriharmonic_weight(self):
        w = Weight(np.array([[0.25]]), np.array([[0.05]]))
        with pytest.raises(ValueError, match="pluriharmonic"):
            truncated_matrix(ToeplitzProblem(w, ComplexQuadraticForm.zero(1)), 4)


class TestTrendAndDecay:
    def test_trivial_symbol_all_ones(self):
        norms = norm_trend(trivial_problem(), (5, 10, 20))
        assert np.allclose(norms, 1.0, atol=1e-12)
        assert is_plateau(norms)

    def test_growth_for_expanding_gamma(self):
        inst = ModelInstance(1, 0.2, np.zeros((1, 1)))
        norms = norm_trend(model_problem(inst), (10, 20, 40))
        # diagonal law: ||T_N|| = |gamma|^N, so log-norm slope is log|gamma|
        slope = np.polyfit([10, 20, 40], np.log(norms), 1)[0]
        assert slope == pytest.approx(np.log(abs(inst.gamma)), rel=1e-6)
        assert not is_plateau(norms)

    def test_contracting_gamma_plateau(self):
        inst = ModelInstance(1, 1j, np.zeros((1, 1)))
        norms = norm_trend(model_problem(inst), (10, 20, 40))
        assert np.allclose(norms, abs(inst.gamma), atol=1e-12)
        assert is_plateau(norms)

    def test_monotone_nondecreasing(self):
        problem = scalar_problem(0.05, 0.04)
        norms = norm_trend(problem, (4, 8, 16, 32))
        for a, b in zip(norms, norms[1:]):
            assert b >= a - 1e-12

    def test_decay_ratios(self):
        for lam, expect in ((-0.5, 0.5), (1j, 5 ** -0.5)):
            est = singular_decay(scalar_problem(lam), 40)
            assert abs(est.ratio - expect) <= 0.05 * expect

    def test_no_decay_for_trivial_symbol(self):
        est = singular_decay(trivial_problem(), 40)
        assert abs(est.ratio - 1.0) <= 0.01


class TestNumericWeyl:
    def test_trivial_symbol(self):
        assert numeric_weyl(trivial_problem(), [0.7 + 0.2j]) == pytest.approx(1.0, abs=1e-10)

    def test_mehler_values(self):
        p = scalar_problem(-0.5)
        assert numeric_weyl(p, [0.0]) == pytest.approx(2 / 3, abs=1e-10)
        assert numeric_weyl(p, [1.0]) == pytest.approx((2 / 3) * np.exp(-1 / 3), abs=1e-9)

    def test_never_diverges_on_admissible_input(self):
        # admissibility implies Re q < Phi_herm < the convolution threshold
        rng = np.random.default_rng(0)
        for _ in range(20):
            problem = random_admissible_problem(rng, 1)
            try:
                numeric_weyl(problem, [0.3 - 0.1j], order=20)
            except NotAbsolutelyConvergent as exc:  # pragma: no cover
                pytest.fail(f"convolution unexpectedly divergent: {exc}")

    def test_matches_closed_form_n2(self):
        inst = ModelInstance(2, -0.2 + 0.1j, 0.02 * np.eye(2))
        problem = model_problem(inst)
        ws = weyl_symbol(problem)
        x = np.array([0.5 - 0.3j, 0.2j])
        got = numeric_weyl(problem, x, order=40)
        assert abs(got - ws.evaluate(x)) / abs(ws.evaluate(x)) < 1e-6


class TestCoherentNorms:
    def test_trivial_symbol_normalized(self):
        for r in (0.5, 1.0, 2.0, 4.0):
            got = numeric_coherent_norm(trivial_problem(), [r])
            assert got == pytest.approx(1.0, abs=1e-10)

    def test_trivial_symbol_n2(self):
        got = numeric_coherent_norm(trivial_problem(2), [1.0, 0.5j], nbasis=45, order=36)
        assert got == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("lam,expect", [(-0.5, -0.1875), (0.2, (1 / 0.36 - 1) / 4)])
    def test_log_norm_slopes(self, lam, expect):
        problem = scalar_problem(lam)
        radii = np.array([1.0, 2.0, 4.0])
        logs = [np.log(numeric_coherent_norm(problem, [r])) for r in radii]
        slope = np.polyfit(radii ** 2, logs, 1)[0]
        assert abs(slope - expect) <= 0.01 * abs(expect)

    def test_weak_convergence_of_coherent_states(self):
        # fixed basis element against k_w along a ray: coefficients vanish
        problem = trivial_problem()
        mags = []
        for r in (2.0, 5.0, 8.0):
            coeffs = _coherent_coefficients(problem, [r], nbasis=4, order=80)
            mags.append(np.abs(coeffs))
        for k in range(4):
            seq = [m[k] for m in mags]
            assert seq[1] < seq[0] and seq[2] < seq[1]
            assert seq[-1] < 1e-4


class TestVerdictConsistency:
    def test_oracle_agrees_with_certificates(self):
        cases = [
            (-0.5, VerdictClass.COMPACT),
            (1j, VerdictClass.COMPACT),
            (0.2, VerdictClass.UNBOUNDED),
            (0.0, VerdictClass.BOUNDED_NOT_COMPACT),
        ]
        for lam, expect in cases:
            problem = scalar_problem(lam)
            assert classify_operator(problem).verdict is expect
            norms = norm_trend(problem, (10, 20, 40))
            plateau = is_plateau(norms)
            if expect is VerdictClass.UNBOUNDED:
                assert not plateau
            else:
                assert plateau
            if expect is VerdictClass.COMPACT:
                inst = ModelInstance(1, lam, np.zeros((1, 1)))
                assert singular_decay(problem, 40).ratio < 0.99
