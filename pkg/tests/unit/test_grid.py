"""Grid, field, mask, stencil and field dump tests"""
import io

import numpy as np
import pytest

from pb4_lab.core.field_io import dump_field, dumps_field, load_field, loads_field
from pb4_lab.core.grid import (
    ExtendedExponent,
    NodeMask,
    ScalarField,
    aligned_axis,
    constant_field,
    make_grid,
    rectangle_mask,
    sample,
)
from pb4_lab.core.parallel import parallel_map, thread_count
from pb4_lab.core.stencils import derivative_matrix, stencil_for
from pb4_lab.types.exceptions import ConfigurationError, GridMismatchError, ValidationError


class TestGrid2D:
    """Test grid geometry"""

    def test_cell_centered_nodes(self):
        """Test nodes sit at cell centers"""
        grid = make_grid((0.0, 1.0, -1.0, 1.0), 4, 8)
        assert grid.shape == (8, 4)
        assert grid.hx == pytest.approx(0.25)
        assert grid.hy == pytest.approx(0.25)
        np.testing.assert_allclose(grid.xs, [0.125, 0.375, 0.625, 0.875])
        assert grid.area == pytest.approx(2.0)

    def test_degenerate_bounds_rejected(self):
        """Test empty or non-finite bounds are rejected"""
        with pytest.raises(ValidationError, match="Degenerate x-bounds"):
            make_grid((1.0, 1.0, 0.0, 1.0), 8, 8)
        with pytest.raises(ValidationError, match="Degenerate y-bounds"):
            make_grid((0.0, 1.0, 0.0, np.inf), 8, 8)

    def test_too_few_nodes_rejected(self):
        """Test a grid needs at least four nodes per axis"""
        with pytest.raises(ValidationError, match="nx"):
            make_grid((0.0, 1.0, 0.0, 1.0), 3, 8)

    def test_refined_grid(self):
        """Test refinement keeps bounds and periodicity"""
        grid = make_grid((0.0, 1.0, 0.0, 1.0), 8, 8, periodic_x=True)
        fine = grid.refined(2)
        assert fine.shape == (16, 16)
        assert fine.periodic_x and not fine.periodic_y
        assert fine.bounds == grid.bounds

    def test_aligned_axis_puts_nodes_on_multiples(self):
        """Test aligned axes have node centers on integer multiples of the step"""
        lo, hi, n = aligned_axis(-0.3, 1.2, 0.1)
        grid = make_grid((lo, hi, 0.0, 1.0), n, 4)
        np.testing.assert_allclose(grid.xs / 0.1, np.round(grid.xs / 0.1), atol=1e-9)
        assert grid.xs[0] == pytest.approx(-0.3)
        assert grid.xs[-1] == pytest.approx(1.2)


class TestScalarField:
    """Test sampled fields"""

    def test_sample_layout(self, unit_square_grid):
        """Test values[j, i] is the sample at (xs[i], ys[j])"""
        f = sample(unit_square_grid, lambda x, y: x + 10 * y)
        grid = unit_square_grid
        assert f.values[3, 5] == pytest.approx(grid.xs[5] + 10 * grid.ys[3])

    def test_values_are_immutable(self, unit_square_grid):
        """Test field values cannot be written in place"""
        f = constant_field(unit_square_grid, 1.0)
        with pytest.raises(ValueError):
            f.values[0, 0] = 2.0

    def test_non_finite_sample_rejected(self, unit_square_grid):
        """Test NaN or inf samples name the offending node"""
        with pytest.raises(ValidationError, match="non-finite sample"):
            sample(unit_square_grid, lambda x, y: np.where(x > 0.5, np.nan, 0.0))

    def test_shape_mismatch_rejected(self, unit_square_grid):
        """Test values must match the grid shape"""
        with pytest.raises(ValidationError, match="shape"):
            ScalarField(unit_square_grid, np.zeros((3, 3)))

    def test_arithmetic_requires_same_grid(self, unit_square_grid):
        """Test fields on different grids do not combine"""
        other = make_grid((0.0, 1.0, 0.0, 1.0), 32, 32)
        with pytest.raises(GridMismatchError):
            constant_field(unit_square_grid, 1.0) + constant_field(other, 1.0)

    def test_arithmetic(self, unit_square_grid):
        """Test field arithmetic and sup"""
        f = constant_field(unit_square_grid, 2.0)
        g = 3.0 * f - 1.0
        assert g.sup() == pytest.approx(5.0)
        assert (-g).sup() == pytest.approx(5.0)


class TestNodeMask:
    """Test node masks"""

    def test_rectangle_mask_is_closed(self):
        """Test boundary nodes of the rectangle are selected"""
        lo, hi, n = aligned_axis(-0.5, 1.5, 0.25)
        grid = make_grid((lo, hi, lo, hi), n, n)
        mask = rectangle_mask(grid, 0.0, 1.0, 0.0, 1.0)
        assert mask.count == 25

    def test_set_operations(self, unit_square_grid):
        """Test and, or, invert and disjointness"""
        left = rectangle_mask(unit_square_grid, 0.0, 0.5, 0.0, 1.0)
        right = ~left
        assert left.isdisjoint(right)
        assert (left | right).count == unit_square_grid.nx * unit_square_grid.ny
        assert (left & right).count == 0

    def test_mask_shape_checked(self, unit_square_grid):
        """Test masks must match the grid"""
        with pytest.raises(GridMismatchError):
            NodeMask(unit_square_grid, np.ones((2, 2), dtype=bool))


class TestExtendedExponent:
    """Test exponents in [1, inf]"""

    def test_coerce(self):
        """Test numbers and the literal inf are accepted"""
        assert ExtendedExponent.coerce("inf").is_inf
        assert ExtendedExponent.coerce(2).value == 2.0
        assert str(ExtendedExponent.coerce("inf")) == "inf"

    def test_below_one_rejected(self):
        """Test exponents below 1 are rejected"""
        with pytest.raises(ValidationError, match="q"):
            ExtendedExponent.coerce(0.5)


class TestStencils:
    """Test difference operators"""

    def test_exact_on_quadratics(self):
        """Test the non-periodic stencil differentiates quadratics exactly, ends included"""
        grid = make_grid((0.0, 1.0, 0.0, 1.0), 16, 8)
        f = sample(grid, lambda x, y: x ** 2 + 3 * y ** 2)
        fx, fy = stencil_for(grid).gradient(f.values)
        X, Y = grid.mesh()
        np.testing.assert_allclose(fx, 2 * X, atol=1e-10)
        np.testing.assert_allclose(fy, 6 * Y, atol=1e-10)

    def test_periodic_rows_sum_to_zero(self):
        """Test the periodic derivative kills constants"""
        D = derivative_matrix(12, 0.1, True)
        np.testing.assert_allclose(D @ np.ones(12), 0.0, atol=1e-12)

    def test_adjoint_is_transpose(self, periodic_grid):
        """Test <Dx a, b> = <a, Dx^T b>"""
        rng = np.random.default_rng(3)
        a = rng.normal(size=periodic_grid.shape)
        b = rng.normal(size=periodic_grid.shape)
        stencil = stencil_for(periodic_grid)
        assert np.sum(stencil.ddx(a) * b) == pytest.approx(np.sum(a * stencil.ddx_adjoint(b)), rel=1e-10)
        assert np.sum(stencil.ddy(a) * b) == pytest.approx(np.sum(a * stencil.ddy_adjoint(b)), rel=1e-10)


class TestFieldDump:
    """Test the CSV field format"""

    def test_dump_reloads_exactly(self, tmp_path):
        """Test a dumped field reloads bit for bit, grid included"""
        grid = make_grid((-0.5, 1.5, 0.0, 2.0), 6, 5, periodic_y=True)
        f = sample(grid, lambda x, y: np.sin(3 * x) * np.exp(y) / 7.0)
        path = tmp_path / "field.csv"
        dump_field(f, path)
        g = load_field(path)
        assert g.grid == grid
        assert np.array_equal(g.values, f.values)

    def test_stream_target(self):
        """Test dumping to and loading from streams"""
        f = constant_field(make_grid((0.0, 1.0, 0.0, 1.0), 4, 4), 0.1)
        buffer = io.StringIO()
        dump_field(f, buffer)
        assert buffer.getvalue() == dumps_field(f)
        assert np.array_equal(loads_field(buffer.getvalue()).values, f.values)

    def test_header_line(self):
        """Test the first two lines carry the grid"""
        text = dumps_field(constant_field(make_grid((0.0, 1.0, 0.0, 2.0), 4, 5), 0.0))
        lines = text.splitlines()
        assert lines[0] == "nx,ny,x_min,x_max,y_min,y_max,periodic_x,periodic_y"
        assert lines[1] == "4,5,0.0,1.0,0.0,2.0,false,false"
        assert len(lines) == 2 + 5

    def test_malformed_dump(self):
        """Test bad headers and ragged bodies raise ConfigurationError"""
        with pytest.raises(ConfigurationError, match="header"):
            loads_field("a,b\n1,2\n")
        text = dumps_field(constant_field(make_grid((0.0, 1.0, 0.0, 1.0), 4, 4), 0.0))
        with pytest.raises(ConfigurationError, match="expected 4 rows"):
            loads_field("\n".join(text.splitlines()[:-1]))


class TestParallel:
    """Test the thread fan-out"""

    def test_thread_count_from_environment(self, monkeypatch):
        """Test PB4_THREADS caps the workers"""
        monkeypatch.setenv("PB4_THREADS", "3")
        assert thread_count() == 3

    def test_invalid_thread_count(self, monkeypatch):
        """Test a non-integer PB4_THREADS is a configuration error"""
        monkeypatch.setenv("PB4_THREADS", "many")
        with pytest.raises(ConfigurationError, match="PB4_THREADS"):
            thread_count()

    def test_order_preserved(self, monkeypatch):
        """Test results keep the input order on several threads"""
        monkeypatch.setenv("PB4_THREADS", "4")
        assert parallel_map(lambda k: k * k, range(20)) == [k * k for k in range(20)]
