"""Quadrilateral formula, construction, certificate and invariance tests"""
import logging
import math
from dataclasses import replace

import numpy as np
import pytest

from pb4_lab.core.calculus import lq_norm
from pb4_lab.core.grid import NodeMask, aligned_axis, make_grid, sample
from pb4_lab.core.maps import AffineMap
from pb4_lab.quadrilateral import (
    FunctionPair,
    analytic_bracket,
    build_pair,
    formula_limit_table,
    holder_region_bounds,
    is_converging,
    is_supported_in,
    model_grid,
    pb4_formula,
    perturb_pair,
    power_mean_value,
    region_label,
    region_mask,
    require_converging,
    require_passed,
    stokes_defect,
    symp_invariance_check,
    verify_lower,
    verify_upper,
)
from pb4_lab.types.config import GridPolicy, QuadProblem
from pb4_lab.types.enums import Exactness, Region
from pb4_lab.types.exceptions import CertificateError, MapError, ResolutionError, ValidationError
from pb4_lab.types.responses import ConvergenceRow, LowerCertificate
from ..test_helpers import relative_gap


class TestFormula:
    """Test the closed-form pb4^q of a quadrilateral"""

    def test_q_one_is_two(self):
        """Test pb4^1 = 2 for any B"""
        assert pb4_formula(1, 2, 1).value == 2.0
        assert pb4_formula(0.3, math.inf, 1).value == 2.0

    def test_q_two(self):
        """Test (A, B, q) = (1, 3, 2) gives sqrt(1.5)"""
        assert pb4_formula(1, 3, 2).value == pytest.approx(math.sqrt(1.5), abs=1e-12)
        assert pb4_formula(1, 3, 2).exactness is Exactness.EXACT

    def test_infinite_B_drops_a_term(self):
        """Test B = inf keeps only 1 / A^(q - 1)"""
        assert pb4_formula(2, "inf", 2).value == pytest.approx(math.sqrt(0.5), abs=1e-12)

    def test_q_inf_is_lower_bound_only(self):
        """Test q = inf returns max(1/A, 1/(B - A)) flagged as a lower bound"""
        value = pb4_formula(1, 1.5, "inf")
        assert value.value == pytest.approx(2.0)
        assert value.exactness is Exactness.LOWER_BOUND_ONLY

    def test_limit_in_q(self):
        """Test large q approaches the q = inf value monotonically"""
        rows = formula_limit_table(1, 3, [10, 100, 1000])
        values = [v for _, v in rows]
        assert all(b <= a for a, b in zip(values, values[1:]))
        assert abs(values[-1] - pb4_formula(1, 3, math.inf).value) < 1e-3

    def test_large_q_does_not_overflow(self):
        """Test the power mean stays finite for tiny areas and large q"""
        assert power_mean_value([1e-3, 1.0], 500.0) == pytest.approx(1e3 ** (499.0 / 500.0), rel=1e-9)

    def test_invalid_areas(self):
        """Test A must be positive and below B"""
        with pytest.raises(ValidationError, match="need A < B"):
            pb4_formula(3, 2, 2)
        with pytest.raises(ValidationError, match="A:"):
            pb4_formula(0, 2, 2)
        with pytest.raises(ValidationError, match="q"):
            pb4_formula(1, 2, 0.5)

    def test_region_bounds(self):
        """Test the per-region lower bounds"""
        assert holder_region_bounds(1, 3, 2) == pytest.approx((1.0, 0.5))
        assert holder_region_bounds(2, math.inf, 2) == pytest.approx((0.5, 0.0))
        assert holder_region_bounds(2, math.inf, 1) == pytest.approx((1.0, 1.0))

    @pytest.mark.parametrize("q", [1.0, 1.5, 2.0, 4.0])
    @pytest.mark.parametrize("A, B", [(1.0, 2.0), (1.0, 3.0), (0.5, 4.0), (2.0, math.inf)])
    def test_doubling_both_areas(self, q, A, B):
        """Test pb4(2A, 2B) = 2^(-(q - 1)/q) pb4(A, B)"""
        scaled = pb4_formula(2 * A, 2 * B, q).value
        assert scaled == pytest.approx(2.0 ** (-(q - 1.0) / q) * pb4_formula(A, B, q).value, rel=1e-12)

    @pytest.mark.parametrize("q", [1.0, 2.0, 4.0])
    def test_infinite_B_is_the_limit(self, q):
        """Test pb4(A, B) decreases to pb4(A, inf) as B grows"""
        limit = pb4_formula(1.0, math.inf, q).value
        values = [pb4_formula(1.0, B, q).value for B in (10.0, 1e3, 1e6)]
        assert all(b <= a for a, b in zip(values, values[1:]))
        assert all(v >= limit for v in values)
        assert values[-1] == pytest.approx(limit, abs=1e-5)


def _aligned_grid(problem: QuadProblem, step: float):
    """Uniform grid with node lines on the multiples of step, covering K with a margin"""
    x_lo, x_hi, y_lo, y_hi = problem.support
    ax_lo, ax_hi, nx = aligned_axis(x_lo - 0.1, x_hi + 0.1, step)
    ay_lo, ay_hi, ny = aligned_axis(y_lo - 0.1, y_hi + 0.1, step)
    return make_grid((ax_lo, ax_hi, ay_lo, ay_hi), nx, ny)


class TestConstruction:
    """Test the explicit product pair"""

    def test_model_grid_has_node_lines_on_the_sides(self, quad_problem):
        """Test x = 0, x = A, y = 0 and y = 1 are node lines"""
        mesh = model_grid(quad_problem, GridPolicy(cells=128))
        for value, axis in ((0.0, mesh.xs), (quad_problem.A, mesh.xs), (0.0, mesh.ys), (1.0, mesh.ys)):
            assert np.min(np.abs(axis - value)) == 0.0
        x_lo, x_hi, y_lo, y_hi = quad_problem.support
        b_x_lo, b_x_hi, b_y_lo, b_y_hi = mesh.bounds
        assert b_x_lo < x_lo and b_x_hi > x_hi and b_y_lo < y_lo and b_y_hi > y_hi

    def test_pair_is_admissible(self, quad_pair):
        """Test F and G meet the four side conditions"""
        assert quad_pair.admissible
        masks = quad_pair.masks
        assert np.all(quad_pair.F.values[masks.X0.values] <= 0.0)
        assert np.all(quad_pair.F.values[masks.X1.values] >= 1.0 - 1e-9)
        assert np.all(quad_pair.G.values[masks.Y0.values] <= 1e-9)
        assert np.all(quad_pair.G.values[masks.Y1.values] >= 1.0 - 1e-9)

    def test_pair_supported_in_K(self, quad_pair, quad_problem):
        """Test both functions vanish off K"""
        assert is_supported_in(quad_pair.F, quad_problem.support, mesh=quad_pair.mesh)
        assert is_supported_in(quad_pair.G, quad_problem.support, mesh=quad_pair.mesh)

    def test_bracket_vanishes_away_from_the_strip(self, quad_pair, quad_problem):
        """Test rows well outside [-eps, 1 + eps] carry no bracket"""
        ys = quad_pair.mesh.ys
        h = quad_pair.mesh.fine_step
        e = quad_problem.eps
        far = (ys < -e - 2 * h) | (ys > 1 + e + 2 * h)
        assert np.all(quad_pair.bracket().values[far, :] == 0.0)

    def test_bracket_matches_closed_form(self, quad_pair, quad_problem):
        """Test the discrete bracket norm against -u1'(x) v1(y)"""
        exact = quad_pair.sample(analytic_bracket(quad_problem))
        density = quad_pair.density
        for q in (1.0, 2.0):
            assert relative_gap(lq_norm(quad_pair.bracket(), q, density), lq_norm(exact, q, density)) < 0.01

    def test_norm_is_squeezed(self, quad_pair):
        """Test the measured norm sits just above the formula"""
        ratio = lq_norm(quad_pair.bracket(), 2, quad_pair.density) / pb4_formula(1, 3, 2).value
        assert 0.97 <= ratio <= 1.06

    def test_graded_mesh_resolves_small_eps(self):
        """Test eps = 1e-3 gets at least 8 cells per eps on a 512-cell mesh"""
        problem = QuadProblem(A=1.0, B=3.0, q=2.0, eps=1e-3, C=2.999)
        mesh = model_grid(problem, GridPolicy(cells=512))
        assert mesh.fine_step <= problem.eps / 8
        assert not mesh.is_uniform
        for axis in (mesh.xs, mesh.ys):
            assert np.all(np.diff(axis) > 0)
        steps = np.diff(mesh.xs)
        for centre in (0.0, problem.A, problem.C):
            near = np.abs(mesh.xs[:-1] - centre) <= 2 * problem.eps
            assert np.all(steps[near] <= problem.eps / 8 + 1e-15)
        assert np.max(steps) > 10 * mesh.fine_step

    def test_small_eps_squeeze_and_stokes(self):
        """Test eps = 1e-3 stays within the squeeze window and the Stokes tolerance"""
        problem = QuadProblem(A=1.0, B=3.0, q=2.0, eps=1e-3, C=2.999)
        pair = build_pair(problem, model_grid(problem, GridPolicy(cells=128)))
        ratio = lq_norm(pair.bracket(), 2, pair.density) / pb4_formula(1, 3, 2).value
        assert 0.97 <= ratio <= 1.05
        assert stokes_defect(pair, Region.INSIDE).signed_integral == pytest.approx(-1.0, abs=0.03)
        assert stokes_defect(pair, Region.COMPLEMENT).signed_integral == pytest.approx(1.0, abs=0.03)

    def test_uniform_grid_must_resolve_eps(self, quad_problem):
        """Test a uniform grid with two cells per eps is refused"""
        with pytest.raises(ResolutionError, match="need 8"):
            build_pair(quad_problem, _aligned_grid(quad_problem, 0.01))

    def test_under_resolved_grid_can_be_allowed(self, quad_problem, caplog):
        """Test require_resolved=False builds the pair and logs a warning"""
        with caplog.at_level(logging.WARNING, logger="pb4_lab.quadrilateral.construction"):
            pair = build_pair(quad_problem, _aligned_grid(quad_problem, 0.01), require_resolved=False)
        assert pair.admissible
        assert pair.mesh.is_uniform
        assert "under-sampled" in caplog.text

    def test_coarse_grid_rejected(self, quad_problem):
        """Test a grid with too few cells across A - 4 eps"""
        with pytest.raises(ResolutionError, match="grid too coarse"):
            build_pair(quad_problem, model_grid(quad_problem, GridPolicy(cells=16)))

    def test_misaligned_grid_rejected(self, quad_problem):
        """Test sides of Pi must fall on node lines"""
        grid = make_grid((-0.1, 3.1, -0.1, 1.1), 401, 151)
        with pytest.raises(ResolutionError, match="no grid nodes"):
            build_pair(quad_problem, grid)

    def test_problem_validation(self):
        """Test the instance invariants A < C < B and 8 eps < min(A, C - A)"""
        with pytest.raises(ValidationError, match="need A < C < B"):
            QuadProblem(A=1.0, B=3.0, q=2.0, eps=0.01, C=3.5)
        with pytest.raises(ValidationError, match="too large"):
            QuadProblem(A=1.0, B=3.0, q=2.0, eps=0.2, C=2.5)

    def test_perturbed_pair_keeps_certificate(self, quad_pair, quad_problem):
        """Test the lower bounds hold for a random admissible perturbation"""
        perturbed = perturb_pair(quad_pair, quad_problem, amplitude=0.05, seed=1)
        assert perturbed.admissible
        assert not np.array_equal(perturbed.F.values, quad_pair.F.values)
        assert verify_lower(perturbed, 2.0, 1.0, 3.0).passed


class TestCertificates:
    """Test convergence tables and lower-bound certificates"""

    def test_verify_upper_rows(self):
        """Test ratios shrink toward 1 along the eps schedule"""
        rows = verify_upper(1.0, 3.0, 2.0, [0.04, 0.02], policy=GridPolicy(cells=256))
        assert [row.epsilon for row in rows] == [0.04, 0.02]
        assert [row.C for row in rows] == pytest.approx([2.96, 2.98])
        assert all(row.formula == pytest.approx(math.sqrt(1.5)) for row in rows)
        assert rows[1].ratio < rows[0].ratio
        assert rows[1].ratio >= 0.97

    def test_single_C_is_broadcast(self):
        """Test one C value serves every eps"""
        rows = verify_upper(1.0, 3.0, 1.0, [0.04, 0.02], [2.5], GridPolicy(cells=128))
        assert [row.C for row in rows] == [2.5, 2.5]

    def test_schedule_lengths_must_match(self):
        """Test mismatched C and eps schedules are rejected"""
        with pytest.raises(ValidationError, match="C schedule has 3 entries"):
            verify_upper(1.0, 3.0, 2.0, [0.04, 0.02], [2.5, 2.6, 2.7])

    def test_infinite_B_needs_C(self):
        """Test B = inf has no default C"""
        with pytest.raises(ValidationError, match="explicit C schedule"):
            verify_upper(1.0, math.inf, 2.0, [0.04])

    def test_stokes_signs(self, quad_pair):
        """Test the signed integral is -1 over Pi and +1 over the complement"""
        inside = stokes_defect(quad_pair, Region.INSIDE)
        outside = stokes_defect(quad_pair, Region.COMPLEMENT)
        assert inside.signed_integral == pytest.approx(-1.0, abs=0.03)
        assert outside.signed_integral == pytest.approx(1.0, abs=0.03)
        assert inside.abs_integral >= abs(inside.signed_integral)
        assert outside.region is Region.COMPLEMENT

    def test_verify_lower_passes(self, quad_pair):
        """Test the built pair respects both region bounds and the formula"""
        certificate = require_passed(verify_lower(quad_pair, 2.0, 1.0, 3.0))
        assert certificate.inside_integral >= 0.97 * certificate.inside_bound
        assert certificate.complement_integral >= 0.97 * certificate.complement_bound
        assert certificate.total_norm >= 0.97 * certificate.formula

    def test_require_passed_raises(self):
        """Test a failed certificate raises CertificateError"""
        failed = LowerCertificate(
            q=2.0, A=1.0, B=3.0, inside_integral=0.5, complement_integral=0.5, inside_bound=1.0,
            complement_bound=0.5, total_norm=1.0, formula=1.22, tolerance=0.03, passed=False,
        )
        with pytest.raises(CertificateError, match="lower bound violated"):
            require_passed(failed)

    def test_region_needs_inside_mask(self, quad_pair):
        """Test a pair without a mask for Pi cannot be split into regions"""
        with pytest.raises(ValidationError, match="no region mask"):
            stokes_defect(replace(quad_pair, inside=None), Region.INSIDE)

    def test_eps_schedule_must_decrease(self):
        """Test an increasing eps schedule is rejected before any pair is built"""
        with pytest.raises(ValidationError, match="eps schedule must decrease strictly"):
            verify_upper(1.0, 3.0, 2.0, [0.02, 0.04])
        with pytest.raises(ValidationError, match="eps schedule must decrease strictly"):
            verify_upper(1.0, 3.0, 2.0, [0.04, 0.04])

    def test_C_schedule_must_not_decrease(self):
        """Test C may not move away from B along the schedule"""
        with pytest.raises(ValidationError, match="C schedule must not decrease"):
            verify_upper(1.0, 3.0, 2.0, [0.04, 0.02], [2.6, 2.5])

    def test_C_must_stay_below_B(self):
        """Test C >= B is rejected"""
        with pytest.raises(ValidationError, match="stay below B"):
            verify_upper(1.0, 3.0, 2.0, [0.04], [3.0])

    @staticmethod
    def _rows(ratios):
        return [
            ConvergenceRow(epsilon=0.1 / 2 ** k, C=3.0 - 0.1 / 2 ** k, norm=r, formula=1.0, ratio=r)
            for k, r in enumerate(ratios)
        ]

    def test_require_converging(self):
        """Test only strictly decreasing ratios that stay above 1 - tol pass"""
        good = self._rows([1.2, 1.05, 1.01])
        assert is_converging(good)
        assert require_converging(good) == good
        for ratios in ([1.2, 1.2, 1.01], [1.01, 1.05], [1.2, 1.0, 0.9]):
            assert not is_converging(self._rows(ratios))
            with pytest.raises(CertificateError, match="not converging"):
                require_converging(self._rows(ratios))

    def test_verify_upper_rows_converge(self):
        """Test the default table passes require_converging"""
        rows = verify_upper(1.0, 3.0, 2.0, [0.08, 0.04, 0.02], policy=GridPolicy(cells=128))
        assert require_converging(rows) == rows

    def test_region_labels(self, quad_pair):
        """Test masks are recorded as INSIDE, COMPLEMENT or MASK"""
        inside = quad_pair.inside
        assert region_label(quad_pair, inside) is Region.INSIDE
        assert region_label(quad_pair, ~inside) is Region.COMPLEMENT
        assert region_label(quad_pair, Region.COMPLEMENT) is Region.COMPLEMENT
        assert stokes_defect(quad_pair, ~inside).region is Region.COMPLEMENT
        assert stokes_defect(quad_pair, NodeMask.full(quad_pair.grid)).region is Region.MASK

    def test_full_mask_integrates_to_zero(self, quad_pair):
        """Test the signed integral over the whole surface cancels"""
        record = stokes_defect(quad_pair, NodeMask.full(quad_pair.grid))
        assert record.signed_integral == pytest.approx(0.0, abs=1e-9)
        assert record.abs_integral > 1.9

    def test_mask_region_needs_a_mask(self, quad_pair):
        """Test Region.MASK cannot be resolved without an explicit mask"""
        with pytest.raises(ValidationError, match="needs an explicit node mask"):
            region_mask(quad_pair, Region.MASK)


class TestRefinement:
    """Test how the construction and its certificates respond to mesh refinement"""

    @staticmethod
    def _pair(eps, cells, cells_per_eps):
        problem = QuadProblem(A=1.0, B=3.0, q=2.0, eps=eps, C=3.0 - eps)
        return build_pair(problem, model_grid(problem, GridPolicy(cells=cells, cells_per_eps=cells_per_eps)))

    def test_stokes_defect_halves(self):
        """Test halving the fine step halves the Stokes defect on both regions"""
        coarse, fine = self._pair(0.02, 256, 16), self._pair(0.02, 256, 32)
        assert fine.mesh.fine_step == pytest.approx(0.5 * coarse.mesh.fine_step)
        for region in (Region.INSIDE, Region.COMPLEMENT):
            before = abs(abs(stokes_defect(coarse, region).signed_integral) - 1.0)
            after = abs(abs(stokes_defect(fine, region).signed_integral) - 1.0)
            assert before <= 0.03
            assert after == pytest.approx(0.5 * before, rel=0.1)

    def test_norm_is_stable_under_refinement(self):
        """Test doubling the resolution changes |{F,G}|_2 by less than 0.5%"""
        coarse, fine = self._pair(0.02, 128, 16), self._pair(0.02, 256, 32)
        before = lq_norm(coarse.bracket(), 2, coarse.density)
        after = lq_norm(fine.bracket(), 2, fine.density)
        assert relative_gap(after, before) < 0.005

    def test_upper_excess_halves_with_eps(self):
        """Test ratio - 1 roughly halves when eps and the mesh are halved together"""
        rows = verify_upper(1.0, 3.0, 2.0, [0.04, 0.02], policy=GridPolicy(cells=256))
        before, after = rows[0].ratio - 1.0, rows[1].ratio - 1.0
        assert before > 0.0 and after > 0.0
        assert 0.35 <= after / before <= 0.65


def _gaussian_pair(cells: int) -> FunctionPair:
    def F_fn(x, y):
        return np.exp(-((x + 0.1) ** 2 + (y - 0.05) ** 2) / (2 * 0.2 ** 2))

    def G_fn(x, y):
        return np.exp(-((x - 0.15) ** 2 + (y + 0.05) ** 2) / (2 * 0.2 ** 2))

    grid = make_grid((-1.0, 1.0, -1.0, 1.0), cells, cells)
    return FunctionPair(sample(grid, F_fn), sample(grid, G_fn), F_fn, G_fn)


class TestInvariance:
    """Test the bracket norm under area-preserving maps"""

    def test_identity_is_exact(self, quad_pair):
        """Test the identity map changes nothing"""
        report = symp_invariance_check(quad_pair, AffineMap.identity(), 2)
        assert report.relative_difference == 0.0
        assert report.passed

    @pytest.mark.parametrize("q", [1, 2])
    def test_shear(self, q):
        """Test a shear keeps |{F,G}|_q within one percent"""
        report = symp_invariance_check(_gaussian_pair(128), AffineMap.shear(0.5), q, cells=256)
        assert report.passed, report

    def test_stretch_rejected(self):
        """Test a map that scales area is refused"""
        stretch = AffineMap(((2.0, 0.0), (0.0, 1.0)), name="stretch")
        with pytest.raises(MapError, match="not area preserving"):
            symp_invariance_check(_gaussian_pair(32), stretch, 2)
