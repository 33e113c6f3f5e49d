"""End-to-end checks of the reference values and tolerances the lab is expected to reproduce"""
import json
import math

import pytest

from pb4_lab.cli import EXIT_OK, run
from pb4_lab.core.calculus import poisson_bracket
from pb4_lab.core.grid import make_grid
from pb4_lab.core.maps import CylinderToAnnulusMap
from pb4_lab.curves import bump_pair, cylinder_grid, cylinder_to_annulus, nonseparating_pair, pb4_curve_formula
from pb4_lab.highdim import decay_curve, product_lower_bound
from pb4_lab.quadrilateral import (
    build_pair,
    formula_limit_table,
    model_grid,
    pb4_formula,
    stokes_defect,
    symp_invariance_check,
    verify_upper,
)
from pb4_lab.types.config import CylinderModel, GridPolicy, HighDimSpec, QuadProblem
from pb4_lab.types.enums import Region
from ..test_helpers import gaussian

SCHEDULE = [0.1, 0.01, 0.001]


class TestReferenceValues:
    """Test closed forms against known values"""

    def test_quadrilateral(self):
        """Test pb4^q for the reference instances"""
        assert pb4_formula(1, 2, 1).value == 2.0
        assert pb4_formula(1, 3, 2).value == pytest.approx(math.sqrt(1.5), abs=1e-12)
        _, large_q = formula_limit_table(1, 3, [1000])[0]
        assert abs(large_q - max(1.0, 1.0 / 2.0)) < 1e-3

    def test_curves(self):
        """Test pb4^q of separating curves"""
        assert pb4_curve_formula(1, 1, 1).value == 2.0
        assert pb4_curve_formula(1, 4, "inf").value == 1.0
        assert pb4_curve_formula(2, "inf", 2).value == pytest.approx(math.sqrt(0.5), abs=1e-12)

    def test_product_bound(self):
        """Test the codimension-one product lower bound"""
        assert product_lower_bound(2, 1.0) == 1.0

    def test_annulus_radius(self):
        """Test the curve radius for A = pi, eps = 0.1"""
        annulus = cylinder_to_annulus(CylinderModel(math.pi, 2.0), 0.1, cells=256)
        assert annulus.curve_radius == pytest.approx(math.sqrt(1.01), abs=1e-12)


@pytest.mark.slow
class TestQuadrilateralSqueeze:
    """Test the explicit pairs approach the formula from above"""

    @pytest.mark.parametrize("q", [1.0, 2.0, 4.0])
    def test_ratios_shrink_to_one(self, q):
        """Test ratios decrease along the schedule and end in [0.97, 1.05]"""
        rows = verify_upper(1.0, 3.0, q, SCHEDULE, policy=GridPolicy(cells=512))
        ratios = [row.ratio for row in rows]
        assert all(b < a for a, b in zip(ratios, ratios[1:])), ratios
        assert 0.97 <= ratios[-1] <= 1.05

    @pytest.mark.parametrize("eps", SCHEDULE)
    def test_stokes(self, eps):
        """Test |signed integral| within 3% of 1 on both regions"""
        problem = QuadProblem(1.0, 3.0, 2.0, eps, 3.0 - eps)
        pair = build_pair(problem, model_grid(problem, GridPolicy(cells=512)))
        for region in (Region.INSIDE, Region.COMPLEMENT):
            assert 0.97 <= abs(stokes_defect(pair, region).signed_integral) <= 1.03


@pytest.mark.slow
class TestFlexibility:
    """Test the commuting approximation at the default resolution"""

    def test_default_flex_run(self, tmp_path):
        """Test delta = 0.05, eps_cell = 0.1 gives an exactly commuting pair within the bounds"""
        grid = make_grid((-0.25, 0.25, -0.25, 0.25), 800, 800)
        F, G = gaussian(grid, -0.01, 0.0, 0.02), gaussian(grid, 0.01, 0.0, 0.02)
        assert poisson_bracket(F, G).sup() >= 0.1

        out = tmp_path / "flex.json"
        assert run(["flex", "--delta", "0.05", "--eps_cell", "0.1", "--out", str(out)]) == EXIT_OK
        report = json.loads(out.read_text())
        assert report["max_bracket"] == 0.0
        assert report["sup_dist_F"] <= report["modulus_bound"]
        assert report["lq_dist_G"] <= report["lq_bound"]


class TestHighCodimension:
    """Test the decay of the vanishing profiles"""

    @pytest.mark.parametrize("n, d, q", [(2, 2, 2.0), (2, 1, 2.0), (2, 1, 3.0), (3, 2, 4.0)])
    def test_strictly_decreasing(self, n, d, q):
        """Test both columns fall as alpha shrinks"""
        table = decay_curve(HighDimSpec(n=n, d=d, q=q), [1.0, 0.5, 0.25, 0.1])
        assert table.is_strictly_decreasing()


class TestCurves:
    """Test the curve constructions at reference resolution"""

    def test_torus_meridian_commutes(self):
        """Test the non-separating pair on a 256x256 torus"""
        torus = make_grid((0.0, 1.0, 0.0, 1.0), 256, 256, periodic_x=True, periodic_y=True)
        pair = nonseparating_pair(torus, (0.1, 0.9), (0.2, 0.35, 0.5, 0.7))
        assert pair.admissible
        assert pair.bracket().sup() == 0.0

    @pytest.mark.slow
    def test_annulus_invariance(self):
        """Test the cylinder-to-annulus map keeps |{F,G}|_2 within one percent"""
        model = CylinderModel(1.0, 2.0)
        pair = bump_pair(model, cylinder_grid(model, 256))
        phi = CylinderToAnnulusMap(0.05, (0.0, model.length))
        report = symp_invariance_check(pair, phi, 2, cells=512)
        assert report.passed, report
