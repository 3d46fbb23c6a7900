//! Numerical tolerances shared across modules.

/// A dot product is active when it lies within `ACTIVE_REL * (1 + |max|)`
/// of the maximum.
pub const ACTIVE_REL: f64 = 1e-9;

/// Residual allowed when deciding nonnegative-combination feasibility.
pub const CONE_RESIDUAL: f64 = 1e-9;

/// Vertices closer than this fraction of the bounding-box diameter merge.
pub const DEDUP_REL: f64 = 1e-12;

/// Circumradius is recorded when max/min vertex norm is within this of 1.
pub const CIRCUMRADIUS_RATIO: f64 = 1e-9;

/// A point is "on" the boundary when its residual is below this.
pub const ON_BOUNDARY: f64 = 1e-10;

/// Gauge value tolerance for "z lies on the boundary of K".
pub const ON_UNIT_SPHERE: f64 = 1e-9;

/// Relative gap between the best and runner-up vertex required before the
/// support function is treated as differentiable.
pub const SUPPORT_GAP_REL: f64 = 1e-9;

/// Singular values below `RANK_REL * max` count as zero.
pub const RANK_REL: f64 = 1e-9;

/// Scale-aware comparison used by the active-set rule.
#[inline]
pub fn active_slack(max: f64) -> f64 {
    ACTIVE_REL * (1.0 + max.abs())
}

/// Two branch predicates are considered tied when their defining
/// quantities agree within `REGION_TIE_REL * (1 + scale)`.
pub const REGION_TIE_REL: f64 = 1e-9;

/// Oracle minimisers within `MULTI_ABS + MULTI_REL * value` of the global
/// minimum are all reported as closest points.
pub const MULTI_ABS: f64 = 1e-9;
pub const MULTI_REL: f64 = 1e-9;

/// Oracle minimisers closer than this are the same closest point.
pub const CLOSEST_DEDUP: f64 = 1e-6;

#[inline]
pub fn tied(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= REGION_TIE_REL * (1.0 + scale.abs())
}
