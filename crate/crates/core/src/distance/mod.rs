//! The gauge distance `ρ(x) = min_{y ∈ ∂U} γ(x - y)`.
//!
//! [`DistanceOracle`] evaluates it for any polytope and boundary by dense
//! sampling plus local refinement. The worked example setups also have
//! closed forms in [`closed_form`], selected through [`Problem`], and every
//! result carries a [`RegionTag`] naming the branch of the formula in force.

pub mod closed_form;
mod oracle;
mod touching;

use std::fmt;

use serde::Serialize;

use crate::boundary::{BoundaryShape, Membership, ParabolaSide, Side, Window};
use crate::polytope::{rank, DualPolytope};
use crate::{Error, Result, Vector};

pub use closed_form::{rho_ball_maxnorm, rho_parabola_maxnorm, rho_sphere_polytope, rho_two_disks_maxnorm};
pub use oracle::{rho_oracle, DistanceOracle, DEFAULT_BUDGET};
pub use touching::{verify_touching_ball, TouchingReport};

/// How a [`DistanceResult`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Oracle,
    ClosedForm,
}

/// Branch of a closed-form distance formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    OnBoundary,
    AboveParabola,
    FlatCone,
    BelowParabola,
    InsideBall,
    /// The touching ball meets the sphere in the relative interior of a
    /// face; for general inscribed polygons the index of the polar vertex
    /// whose cone contains `x - y` is recorded.
    SingularCone {
        polar_vertex: Option<usize>,
    },
    VertexBranch,
    TwoClosest,
    OneClosest,
    Unclassified,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::OnBoundary => "on-boundary",
            Branch::AboveParabola => "above-parabola",
            Branch::FlatCone => "flat-cone",
            Branch::BelowParabola => "below-parabola",
            Branch::InsideBall => "inside-ball",
            Branch::SingularCone { .. } => "singular-cone",
            Branch::VertexBranch => "vertex-branch",
            Branch::TwoClosest => "two-closest",
            Branch::OneClosest => "one-closest",
            Branch::Unclassified => "unclassified",
        }
    }
}

/// Which formula branch governs a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionTag {
    pub branch: Branch,
    /// Dimension of the face of `K°` exposed by `(x - y)/ρ`, i.e. of the
    /// set of gradients the gauge can take along the segment `[x, y]`.
    /// `None` on the boundary, where `ρ = 0`.
    pub active_face_dim: Option<usize>,
    /// Coordinates with `|x_j| <= ρ(x)` in the cube/ball setups.
    pub j: Option<Vec<usize>>,
    /// The point satisfies the defining inequalities of more than one
    /// branch; `branch` is then the one with the smallest label.
    pub boundary_of_regions: bool,
}

impl RegionTag {
    pub fn new(branch: Branch) -> Self {
        Self {
            branch,
            active_face_dim: None,
            j: None,
            boundary_of_regions: false,
        }
    }

    /// Stable text label, e.g. `flat-cone`, `singular-cone[j=1]` or
    /// `singular-cone[w=2]`. Indices are 0-based.
    pub fn label(&self) -> String {
        let base = self.branch.name();
        if let Branch::SingularCone { polar_vertex: Some(w) } = self.branch {
            return format!("{base}[w={w}]");
        }
        match &self.j {
            Some(j) if !j.is_empty() && matches!(self.branch, Branch::SingularCone { .. }) => {
                let parts: Vec<String> = j.iter().map(|k| k.to_string()).collect();
                format!("{base}[j={}]", parts.join(","))
            }
            _ => base.to_string(),
        }
    }
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `ρ(x)` with its closest points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceResult {
    pub value: f64,
    /// The ρ-closest points on `∂U`, sorted lexicographically.
    #[serde(serialize_with = "serialize_points")]
    pub closest: Vec<Vector>,
    pub region: RegionTag,
    pub method: Method,
}

fn serialize_points<S: serde::Serializer>(points: &[Vector], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(points.len()))?;
    for p in points {
        seq.serialize_element(p.as_slice())?;
    }
    seq.end()
}

impl DistanceResult {
    pub(crate) fn on_boundary(x: &Vector, method: Method) -> Self {
        Self {
            value: 0.0,
            closest: vec![x.clone()],
            region: RegionTag::new(Branch::OnBoundary),
            method,
        }
    }

    /// The closest point when it is unique.
    pub fn unique_closest(&self) -> Result<&Vector> {
        match self.closest.as_slice() {
            [y] => Ok(y),
            many => Err(Error::MultipleClosestPoints(many.len())),
        }
    }
}

pub(crate) fn sort_points(points: &mut [Vector]) {
    points.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(p, q)| p.total_cmp(q))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

/// Dimension of the face of `K°` exposed by `(x - y)/ρ`.
pub fn active_face_dim(p: &DualPolytope, x: &Vector, y: &Vector, rho: f64) -> Option<usize> {
    if rho <= 0.0 {
        return None;
    }
    let z = (x - y) / rho;
    let g = p.gauge(&z).ok()?;
    let active: Vec<&Vector> = g.active.iter().map(|&i| &p.polar_vertices()[i]).collect();
    Some(rank(&active).saturating_sub(1))
}

/// `ρ` by the brute-force oracle, for any polytope and boundary.
pub fn oracle_distance(p: &DualPolytope, b: &BoundaryShape, x: &Vector, budget: usize) -> Result<DistanceResult> {
    rho_oracle(p, b, x, budget)
}

/// `ρ` for a fixed polytope and boundary, by the closed form when the pair
/// is one of the worked examples and by the oracle otherwise.
#[derive(Clone, Debug)]
pub struct DistanceField {
    polytope: DualPolytope,
    boundary: BoundaryShape,
    problem: Option<Problem>,
    oracle: Option<DistanceOracle>,
}

impl DistanceField {
    pub fn new(polytope: DualPolytope, boundary: BoundaryShape, budget: usize) -> Result<Self> {
        let problem = Problem::recognize(&polytope, &boundary);
        let oracle = match DistanceOracle::new(polytope.clone(), boundary.clone(), budget) {
            Ok(o) => Some(o),
            Err(e @ Error::UnsupportedDimension { .. }) if problem.is_none() => return Err(e),
            Err(Error::UnsupportedDimension { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            polytope,
            boundary,
            problem,
            oracle,
        })
    }

    pub fn polytope(&self) -> &DualPolytope {
        &self.polytope
    }

    pub fn boundary(&self) -> &BoundaryShape {
        &self.boundary
    }

    pub fn problem(&self) -> Option<&Problem> {
        self.problem.as_ref()
    }

    pub fn oracle(&self) -> Option<&DistanceOracle> {
        self.oracle.as_ref()
    }

    pub fn query(&self, x: &Vector) -> Result<DistanceResult> {
        match (&self.problem, &self.oracle) {
            (Some(problem), _) => {
                if !problem.in_domain(x) {
                    return Err(Error::OutsideDomain);
                }
                problem.closed_form(x)
            }
            (None, Some(oracle)) => oracle.query(x),
            (None, None) => unreachable!("constructor keeps one evaluator"),
        }
    }

    /// The oracle answer, or the closed form where no oracle exists.
    pub fn query_oracle(&self, x: &Vector) -> Result<DistanceResult> {
        match &self.oracle {
            Some(o) => o.query(x),
            None => self.query(x),
        }
    }

    pub fn value(&self, x: &Vector) -> Result<f64> {
        self.query(x).map(|r| r.value)
    }
}

/// The worked example setups with closed-form distance fields, all measured
/// by a polytope gauge.
#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    /// Max-norm distance to the parabola `x₂ = x₁²`, from either side.
    ParabolaMaxNorm,
    /// Distance to the unit sphere, from either side, for a polytope whose
    /// vertices all have the same norm.
    SpherePolytope(DualPolytope),
    /// Max-norm distance to the unit sphere in `R^dim`.
    BallMaxNorm { dim: usize },
    /// Max-norm distance in the exterior of the unit disks at `(±1, 0)`.
    TwoDisksMaxNorm,
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::ParabolaMaxNorm => "parabola-maxnorm",
            Problem::SpherePolytope(_) => "sphere-polytope",
            Problem::BallMaxNorm { .. } => "ball-maxnorm",
            Problem::TwoDisksMaxNorm => "two-disks-maxnorm",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Problem::SpherePolytope(p) => p.dim(),
            Problem::BallMaxNorm { dim } => *dim,
            _ => 2,
        }
    }

    pub fn polytope(&self) -> DualPolytope {
        match self {
            Problem::SpherePolytope(p) => p.clone(),
            _ => DualPolytope::cube(self.dim()),
        }
    }

    /// The boundary with its default orientation.
    pub fn boundary(&self) -> BoundaryShape {
        match self {
            Problem::ParabolaMaxNorm => BoundaryShape::parabola(ParabolaSide::Above),
            Problem::SpherePolytope(_) | Problem::BallMaxNorm { .. } => {
                BoundaryShape::unit_sphere(self.dim(), Side::Interior)
            }
            Problem::TwoDisksMaxNorm => BoundaryShape::two_unit_disks(),
        }
    }

    /// The boundary oriented so that `x` lies in `Ū`; both sides of the
    /// parabola and the sphere are covered by the closed forms.
    pub fn boundary_at(&self, x: &Vector) -> BoundaryShape {
        let b = self.boundary();
        match b.region_membership(x) {
            Ok(Membership::Outside) => b.complement().unwrap_or(b),
            _ => b,
        }
    }

    /// Whether the closed form covers `x`.
    pub fn in_domain(&self, x: &Vector) -> bool {
        x.len() == self.dim()
            && match self {
                Problem::TwoDisksMaxNorm => self.boundary().region_membership(x).is_ok_and(|m| m != Membership::Outside),
                _ => true,
            }
    }

    /// Closed-form `ρ(x)` with closest points and region tag.
    pub fn closed_form(&self, x: &Vector) -> Result<DistanceResult> {
        match self {
            Problem::ParabolaMaxNorm => rho_parabola_maxnorm(x),
            Problem::SpherePolytope(p) => rho_sphere_polytope(p, x),
            Problem::BallMaxNorm { dim } => rho_ball_maxnorm(x, *dim),
            Problem::TwoDisksMaxNorm => rho_two_disks_maxnorm(x),
        }
    }

    /// The branch whose defining inequalities hold at `x`.
    pub fn classify(&self, x: &Vector) -> Result<RegionTag> {
        classify_region(self, x)
    }

    /// A window in the plane showing every branch of the formula.
    pub fn figure_window(&self) -> Window {
        match self {
            Problem::ParabolaMaxNorm => Window {
                min: [-2.0, -2.5],
                max: [2.0, 4.0],
            },
            Problem::SpherePolytope(_) => Window {
                min: [-3.0, -3.0],
                max: [3.0, 3.0],
            },
            Problem::BallMaxNorm { .. } => Window {
                min: [-4.0, -4.0],
                max: [4.0, 4.0],
            },
            Problem::TwoDisksMaxNorm => Window {
                min: [-4.5, -1.0],
                max: [4.5, 4.5],
            },
        }
    }

    /// Identifies a closed-form setup from a polytope and a boundary.
    pub fn recognize(p: &DualPolytope, b: &BoundaryShape) -> Option<Problem> {
        let cube = p.is_unit_cube();
        match b {
            BoundaryShape::Parabola { .. } if cube => Some(Problem::ParabolaMaxNorm),
            BoundaryShape::Sphere { center, radius, .. } if center.amax() == 0.0 && *radius == 1.0 => {
                if cube {
                    Some(Problem::BallMaxNorm { dim: p.dim() })
                } else if p.circumradius().is_some() {
                    Some(Problem::SpherePolytope(p.clone()))
                } else {
                    None
                }
            }
            BoundaryShape::DiskUnionExterior { .. } if cube && *b == BoundaryShape::two_unit_disks() => {
                Some(Problem::TwoDisksMaxNorm)
            }
            _ => None,
        }
    }

    /// Whether `tag` is consistent with the defining inequalities of its
    /// branch at `x`, with slack `tol`.
    pub fn predicate_holds(&self, tag: &RegionTag, x: &Vector, tol: f64) -> bool {
        let norm = x.norm();
        match (&tag.branch, self) {
            (Branch::OnBoundary, _) => self
                .boundary()
                .euclid_signed_distance(x)
                .is_ok_and(|d| d.abs() <= tol),
            (Branch::AboveParabola, Problem::ParabolaMaxNorm) => x[1] >= x[0] * x[0] - tol,
            (Branch::FlatCone, Problem::ParabolaMaxNorm) => x[0].abs() <= -x[1] + tol,
            (Branch::BelowParabola, Problem::ParabolaMaxNorm) => {
                x[1] <= x[0] * x[0] + tol && x[0].abs() >= -x[1] - tol
            }
            (Branch::InsideBall, _) => norm <= 1.0 + tol,
            (Branch::SingularCone { .. } | Branch::VertexBranch, Problem::BallMaxNorm { .. }) => {
                let Ok(r) = rho_ball_maxnorm(x, x.len()) else { return false };
                let j = tag.j.clone().unwrap_or_default();
                norm >= 1.0 - tol
                    && (0..x.len()).all(|k| {
                        if j.contains(&k) {
                            x[k].abs() <= r.value + tol
                        } else {
                            x[k].abs() >= r.value - tol
                        }
                    })
                    && (j.is_empty() == (tag.branch == Branch::VertexBranch))
            }
            (Branch::SingularCone { .. } | Branch::VertexBranch, Problem::SpherePolytope(_)) => norm >= 1.0 - tol,
            (Branch::TwoClosest, Problem::TwoDisksMaxNorm) => {
                x[0].abs() <= x[1].abs() - 2.0 + tol || x[0].abs() <= tol
            }
            (Branch::OneClosest, Problem::TwoDisksMaxNorm) => {
                !(x[0].abs() < x[1].abs() - 2.0 - tol) && x[0].abs() >= -tol
            }
            _ => false,
        }
    }
}

/// Region tag of `x` for one of the example setups.
pub fn classify_region(problem: &Problem, x: &Vector) -> Result<RegionTag> {
    if x.len() != problem.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.dim(),
            found: x.len(),
        });
    }
    if !problem.in_domain(x) {
        return Err(Error::OutsideDomain);
    }
    Ok(problem.closed_form(x)?.region)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;

    #[test]
    fn labels() {
        let mut t = RegionTag::new(Branch::SingularCone { polar_vertex: None });
        t.j = Some(vec![1]);
        assert_eq!(t.label(), "singular-cone[j=1]");
        assert_eq!(RegionTag::new(Branch::SingularCone { polar_vertex: Some(2) }).label(), "singular-cone[w=2]");
        assert_eq!(RegionTag::new(Branch::FlatCone).to_string(), "flat-cone");
    }

    #[test]
    fn classify_examples() {
        let t = classify_region(&Problem::ParabolaMaxNorm, &vector(&[0.0, -1.0])).unwrap();
        assert_eq!((t.branch, t.boundary_of_regions), (Branch::FlatCone, false));
        let t = classify_region(&Problem::BallMaxNorm { dim: 2 }, &vector(&[2.0, 1.0])).unwrap();
        assert!(t.boundary_of_regions);
        let t = classify_region(&Problem::TwoDisksMaxNorm, &vector(&[0.0, 3.0])).unwrap();
        assert_eq!(t.branch, Branch::TwoClosest);
        assert_eq!(
            classify_region(&Problem::TwoDisksMaxNorm, &vector(&[0.5, 0.0])),
            Err(Error::OutsideDomain)
        );
    }

    #[test]
    fn recognize_setups() {
        let cube = DualPolytope::cube(2);
        assert_eq!(
            Problem::recognize(&cube, &BoundaryShape::parabola(ParabolaSide::Above)),
            Some(Problem::ParabolaMaxNorm)
        );
        assert_eq!(
            Problem::recognize(&DualPolytope::cube(3), &BoundaryShape::unit_sphere(3, Side::Exterior)),
            Some(Problem::BallMaxNorm { dim: 3 })
        );
        let tri = DualPolytope::regular_polygon(3, 1.0, 0.3).unwrap();
        assert!(matches!(
            Problem::recognize(&tri, &BoundaryShape::unit_sphere(2, Side::Interior)),
            Some(Problem::SpherePolytope(_))
        ));
        assert_eq!(Problem::recognize(&tri, &BoundaryShape::two_unit_disks()), None);
    }
}
