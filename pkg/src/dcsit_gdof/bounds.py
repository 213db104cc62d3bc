"""Everything known about the sum-GDoF at one ``(alpha1, alpha2)`` point."""
from __future__ import annotations

from dataclasses import dataclass

from .achievability import closed_form_lower
from .core import (
    AlphaPair,
    GdofBounds,
    RegionCase,
    canonicalize,
    classify_region,
    converse_sum_upper,
    theorem1_sum_gdof,
)


@dataclass(frozen=True)
class PointBounds:
    alpha1: float
    alpha2: float
    canonical: AlphaPair
    swapped: bool
    closed_form: float | None
    bounds: GdofBounds
    a_sum_star: float | None

    @property
    def region(self) -> RegionCase:
        return self.bounds.region


def sum_gdof_bounds(alpha1: float, alpha2: float) -> PointBounds:
    """Canonicalize, classify, and bracket the sum-GDoF at a raw pair."""
    a, swapped = canonicalize(AlphaPair(alpha1, alpha2))
    region = classify_region(a)
    upper = converse_sum_upper(a)
    low = closed_form_lower(a)
    return PointBounds(
        alpha1=alpha1,
        alpha2=alpha2,
        canonical=a,
        swapped=swapped,
        closed_form=theorem1_sum_gdof(a),
        bounds=GdofBounds.from_values(None if low is None else low.sum_gdof, upper, region),
        a_sum_star=None if low is None else low.a_sum_star,
    )
