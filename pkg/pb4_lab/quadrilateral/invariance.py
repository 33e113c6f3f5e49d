"""Invariance of |{F,G}|_q under area-preserving changes of coordinates"""
import logging
import math
from typing import Optional

from ..core.calculus import lq_norm, poisson_bracket
from ..core.grid import ExponentLike, ExtendedExponent, Grid2D
from ..core.maps import AreaPreservingMap, image_grid, transport
from ..types.responses import InvarianceReport
from .construction import FunctionPair

logger = logging.getLogger(__name__)

INVARIANCE_TOL = 0.01


def _image_cells(pair: FunctionPair, phi: AreaPreservingMap, region: Grid2D, cells: Optional[int]) -> Optional[int]:
    """Enough image cells to match twice the fine step of a graded pair"""
    if pair.mesh.is_uniform:
        return cells
    x0, x1, y0, y1 = phi.image_bounds(region)
    needed = math.ceil(1.04 * max(x1 - x0, y1 - y0) / (2.0 * pair.mesh.fine_step))
    return max(cells or 0, needed)


def symp_invariance_check(
    pair: FunctionPair,
    phi: AreaPreservingMap,
    q: ExponentLike,
    cells: Optional[int] = None,
    tol: float = INVARIANCE_TOL,
) -> InvarianceReport:
    """
    Norm of {F,G} on the pair's mesh against the norm of {F o phi^-1, G o phi^-1}
    sampled independently on a uniform grid covering the image.

    The identity resamples on the pair's own mesh.
    """
    exponent = ExtendedExponent.coerce(q)
    region = pair.mesh.physical_grid()
    phi.check_area_preserving(region)
    before = lq_norm(pair.bracket(), exponent, pair.density)
    if phi.is_identity:
        F_img, G_img = pair.sample(pair.F_fn), pair.sample(pair.G_fn)
        after = lq_norm(poisson_bracket(F_img, G_img, pair.density), exponent, pair.density)
    else:
        target = image_grid(phi, region, _image_cells(pair, phi, region, cells))
        F_img = transport(pair.F_fn, phi, target)
        G_img = transport(pair.G_fn, phi, target)
        after = lq_norm(poisson_bracket(F_img, G_img), exponent)
    scale = max(abs(before), abs(after))
    relative = abs(after - before) / scale if scale > 0 else 0.0
    logger.info("%s: |{F,G}|_%s %.6g -> %.6g (rel %.2e)", phi.name, exponent, before, after, relative)
    return InvarianceReport(
        map_name=phi.name,
        q=exponent.value,
        norm_before=before,
        norm_after=after,
        relative_difference=relative,
        tolerance=tol,
        passed=relative <= tol,
    )
