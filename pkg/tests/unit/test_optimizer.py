"""Smoothed objective, projection and descent tests"""
import math

import numpy as np
import pytest

from pb4_lab.core.grid import ScalarField, make_grid, sample
from pb4_lab.optimizer import (
    OptProblem,
    OptResult,
    certificate,
    gradient_check,
    history_is_monotone,
    is_feasible,
    minimize,
    objective,
    pinned_masks,
    project,
    random_feasible_init,
    rectangle_model,
)
from pb4_lab.quadrilateral import pb4_formula
from pb4_lab.types.enums import CertificateStatus
from pb4_lab.types.exceptions import UnsupportedError, ValidationError


@pytest.fixture
def small_torus():
    """32x32 periodic grid over [-0.5, 1.5]^2"""
    return make_grid((-0.5, 1.5, -0.5, 1.5), 32, 32, periodic_x=True, periodic_y=True)


def _trig_pair(grid):
    F = sample(grid, lambda x, y: 0.5 + 0.3 * np.sin(np.pi * x) * np.cos(np.pi * y))
    G = sample(grid, lambda x, y: 0.5 + 0.2 * np.cos(np.pi * x + 0.3) + 0.1 * np.sin(np.pi * y))
    return F, G


class TestObjective:
    """Test the surrogate and its adjoint gradient"""

    @pytest.mark.parametrize("q", [2.0, 3.0])
    def test_gradient_matches_finite_differences(self, small_torus, q):
        """Test the adjoint gradient against central differences"""
        problem = OptProblem(small_torus, pinned_masks(small_torus, 1.0), q, mu=1e-2)
        F, G = _trig_pair(small_torus)
        assert gradient_check(problem, F, G, directions=4, seed=3) <= 1e-5

    def test_commuting_pair_sits_on_the_floor(self, small_torus):
        """Test functions of y alone give exactly mu^(q/2) times the area"""
        problem = OptProblem(small_torus, pinned_masks(small_torus, 1.0), 2.0, mu=1e-4)
        F = sample(small_torus, lambda x, y: np.sin(y) ** 2)
        G = sample(small_torus, lambda x, y: np.cos(2 * y))
        value, dF, dG = objective(F, G, problem.q, mu=problem.mu)
        assert value == pytest.approx(problem.floor, rel=1e-12)
        assert np.all(dF.values == 0.0) and np.all(dG.values == 0.0)

    def test_area(self, small_torus):
        """Test the area under the standard density"""
        problem = OptProblem(small_torus, pinned_masks(small_torus, 1.0), 2.0)
        assert problem.area == pytest.approx(4.0)

    def test_q_inf_unsupported(self, small_torus):
        """Test the sup norm is not minimized"""
        with pytest.raises(UnsupportedError):
            OptProblem(small_torus, pinned_masks(small_torus, 1.0), math.inf)

    def test_box_must_hold_pins(self, small_torus):
        """Test a box excluding 0 is rejected"""
        with pytest.raises(ValidationError, match="cannot hold"):
            OptProblem(small_torus, pinned_masks(small_torus, 1.0), 2.0, box=(0.2, 1.0))


class TestFeasibility:
    """Test projection onto the admissible class"""

    def test_project_pins_and_clamps(self, small_torus):
        """Test projection lands in the feasible set"""
        problem = OptProblem(small_torus, pinned_masks(small_torus, 1.0), 2.0)
        wild = ScalarField(small_torus, np.random.default_rng(0).normal(size=small_torus.shape) * 3.0)
        F, G = project(problem, wild, wild)
        assert is_feasible(problem, F, G)
        assert not is_feasible(problem, wild, wild)

    def test_random_init_is_feasible(self, small_torus):
        """Test the smoothed noise start satisfies the pins"""
        problem = OptProblem(small_torus, pinned_masks(small_torus, 1.0), 2.0)
        init = random_feasible_init(problem, seed=7)
        assert init.admissible
        assert is_feasible(problem, init.F, init.G)

    def test_pins_cover_both_parities(self):
        """Test each side is pinned on two adjacent node lines"""
        problem, _ = rectangle_model(1.0, 3.0, 2.0, cells=64, eps=0.05, max_iter=0)
        masks = problem.masks
        assert np.count_nonzero(np.any(masks.X0.values, axis=0)) == 2
        assert np.count_nonzero(np.any(masks.X1.values, axis=0)) == 2
        assert np.count_nonzero(np.any(masks.Y0.values, axis=1)) == 2


class TestDescent:
    """Test the projected descent"""

    def test_random_start(self, small_torus):
        """Test the history never increases and the result stays feasible"""
        problem = OptProblem(small_torus, pinned_masks(small_torus, 1.0), 2.0, max_iter=5)
        result = minimize(problem, seed=2)
        assert history_is_monotone(result)
        assert len(result.history) >= 2
        assert result.history[-1].objective < result.history[0].objective
        assert is_feasible(problem, result.F, result.G)

    def test_warm_start_respects_lower_bound(self):
        """Test descent from the explicit pair stays above the formula"""
        problem, start = rectangle_model(1.0, 3.0, 2.0, cells=64, eps=0.05, max_iter=5)
        assert start.admissible
        assert problem.area == pytest.approx(3.0, rel=0.1)
        result = minimize(problem, start)
        assert history_is_monotone(result)
        formula = pb4_formula(1.0, 3.0, 2.0).value
        report = certificate(result, formula)
        assert report.status is CertificateStatus.LOWER_RESPECTED
        assert report.ratio >= 0.95

    def test_rectangle_model_needs_finite_B(self):
        """Test B = inf has no torus"""
        with pytest.raises(ValidationError, match="finite B"):
            rectangle_model(1.0, math.inf, 2.0)


class TestCertificate:
    """Test the optimizer certificate"""

    def _result(self, grid, objective_value, mu=1e-4):
        F = ScalarField(grid, np.zeros(grid.shape))
        return OptResult(F, F, objective_value, 2.0, mu, 4.0)

    def test_floor_only_gives_zero(self, small_torus):
        """Test an objective equal to the floor has final value 0"""
        result = self._result(small_torus, 1e-4 * 4.0)
        assert result.final_value == 0.0
        report = certificate(result, 0.0)
        assert report.status is CertificateStatus.LOWER_RESPECTED
        assert report.ratio == 0.0

    def test_gap(self, small_torus):
        """Test a final value well below the formula is a gap"""
        report = certificate(self._result(small_torus, 0.25 + 4e-4), 1.0)
        assert report.status is CertificateStatus.GAP
        assert report.final == pytest.approx(0.5)
        assert report.ratio == pytest.approx(0.5)

    def test_negative_formula_rejected(self, small_torus):
        """Test the formula must be nonnegative"""
        with pytest.raises(ValidationError, match="formula"):
            certificate(self._result(small_torus, 1.0), -1.0)


class TestRectangleModel:
    """Test the optimizer on the rectangle model against the closed form"""

    def test_gradient_on_warm_start(self):
        """Test the adjoint gradient at the explicit pair over ten random directions"""
        problem, start = rectangle_model(1.0, 3.0, 2.0, cells=64, eps=0.05, max_iter=0)
        assert gradient_check(problem, start.F, start.G, directions=10, seed=11) <= 1e-5

    @pytest.mark.slow
    def test_warm_start_lands_in_window(self):
        """Test the optimized value at 256 cells sits in [0.95, 1.10] sqrt(1.5)"""
        problem, start = rectangle_model(1.0, 3.0, 2.0, cells=256)
        result = minimize(problem, start)
        assert history_is_monotone(result)
        formula = pb4_formula(1.0, 3.0, 2.0).value
        assert formula == pytest.approx(math.sqrt(1.5))
        assert 0.95 * formula <= result.final_value <= 1.10 * formula

    @pytest.mark.slow
    @pytest.mark.parametrize("q", [1.0, 1.5, 2.0, 4.0])
    @pytest.mark.parametrize("A, B", [(1.0, 2.0), (1.0, 3.0), (2.0, 5.0)])
    def test_never_certifies_below_the_formula(self, q, A, B):
        """Test descent never reports a value below 0.95 of pb4^q"""
        problem, start = rectangle_model(A, B, q, cells=96, eps=0.03, max_iter=20)
        result = minimize(problem, start)
        report = certificate(result, pb4_formula(A, B, q).value)
        assert report.status is CertificateStatus.LOWER_RESPECTED, report
        assert report.ratio >= 0.95
