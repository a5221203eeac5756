"""Conformal radii, the ratio ``2d/r`` and their extremal constants."""

from .domains import domain_report
from .polygons import (
    M0,
    half_strip_constant,
    lambda_m2,
    m1_preimage,
    m2_preimage,
    m3,
    ngon_ratio,
    rhomb_ratio,
    sector_ratio,
    triangle_m1,
)
from .rectangle import (
    LAMBDA0,
    c_lambda,
    c_lambda_forms,
    c_lambda_k,
    c_tilde,
    conformal_radius_rect,
    landen_h,
    ratio_rect,
)
from .report import ExtremalReport
from .scans import (
    ConjectureScan,
    LemmaLimitScan,
    MonotonicityReport,
    conjecture_scan,
    lemma_limit_scan,
    rect_extremal_scan,
    segment_monotonicity_check,
)

__all__ = [
    "ConjectureScan",
    "ExtremalReport",
    "LAMBDA0",
    "LemmaLimitScan",
    "M0",
    "MonotonicityReport",
    "c_lambda",
    "c_lambda_forms",
    "c_lambda_k",
    "c_tilde",
    "conformal_radius_rect",
    "conjecture_scan",
    "domain_report",
    "half_strip_constant",
    "lambda_m2",
    "landen_h",
    "lemma_limit_scan",
    "m1_preimage",
    "m2_preimage",
    "m3",
    "ngon_ratio",
    "ratio_rect",
    "rect_extremal_scan",
    "rhomb_ratio",
    "sector_ratio",
    "segment_monotonicity_check",
    "triangle_m1",
]
