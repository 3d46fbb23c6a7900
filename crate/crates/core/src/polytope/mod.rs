//! Convex polytopes with the origin in their interior, stored in dual form.
//!
//! A [`DualPolytope`] keeps the extreme points `z_j` of `K` next to the
//! vertices `v_i` of the polar body `K°`, which are exactly the facet normals
//! of `K` scaled so that `K = ∩ {x : <x, v_i> <= 1}`. With both lists at hand
//!
//! - the gauge is `γ(x) = max_i <x, v_i>`,
//! - the support function is `h(x) = γ°(x) = max_j <x, z_j>`,
//!
//! and swapping the lists yields the polar body.

mod cone;
mod duality;
mod hull;

use serde::{Deserialize, Serialize};

use crate::tol;
use crate::{Error, Result, Vector};

pub use cone::{cone_contains, nnls};
pub use duality::{check_duality_identities, DualityCheck, DualityReport};

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Numerical rank of a set of vectors.
pub fn rank(vectors: &[&Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let n = vectors[0].len();
    let m = crate::Matrix::from_fn(n, vectors.len(), |r, c| vectors[c][r]);
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol::RANK_REL * max).count()
}

/// Rank of the affine hull of a point set (number of independent
/// differences).
pub fn affine_rank(points: &[&Vector]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let diffs: Vec<Vector> = points[1..].iter().map(|p| *p - points[0]).collect();
    let refs: Vec<&Vector> = diffs.iter().collect();
    rank(&refs)
}

/// `conv(points)` in dimension 2 or 3. See [`DualPolytope::from_vertices`].
pub fn build_polytope(points: &[Vector]) -> Result<DualPolytope> {
    DualPolytope::from_vertices(points)
}

/// Verified ingestion of both vertex lists. See
/// [`DualPolytope::from_dual_pair`].
pub fn build_dual_pair(vertices: Vec<Vector>, polar_vertices: Vec<Vector>) -> Result<DualPolytope> {
    DualPolytope::from_dual_pair(vertices, polar_vertices)
}

/// Value of a max-of-dot-products evaluation and the indices attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct ActiveMax {
    pub value: f64,
    pub active: Vec<usize>,
}

fn active_max(points: &[Vector], x: &[f64]) -> ActiveMax {
    if x.iter().all(|c| *c == 0.0) {
        return ActiveMax {
            value: 0.0,
            active: (0..points.len()).collect(),
        };
    }
    let dots: Vec<f64> = points.iter().map(|p| dot(p.as_slice(), x)).collect();
    let max = dots.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let slack = tol::active_slack(max);
    let active = dots
        .iter()
        .enumerate()
        .filter(|(_, d)| **d >= max - slack)
        .map(|(i, _)| i)
        .collect();
    ActiveMax { value: max, active }
}

#[inline]
fn max_dot(points: &[Vector], x: &[f64]) -> f64 {
    points
        .iter()
        .map(|p| dot(p.as_slice(), x))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// A convex polytope `K` with `0 ∈ int K`, kept as a vertex list together
/// with the vertex list of its polar.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPolytope {
    dim: usize,
    vertices: Vec<Vector>,
    polar_vertices: Vec<Vector>,
    circumradius: Option<f64>,
}

impl DualPolytope {
    /// Builds `K = conv(points)` in dimension 2 or 3, computing the facet
    /// normals from the hull.
    pub fn from_vertices(points: &[Vector]) -> Result<Self> {
        let (vertices, polar_vertices) = hull::dual_from_points(points)?;
        let dim = vertices[0].len();
        Ok(Self::assemble(dim, vertices, polar_vertices))
    }

    /// Accepts a caller-supplied vertex list and polar vertex list after
    /// checking every consistency invariant. Works in any dimension.
    pub fn from_dual_pair(vertices: Vec<Vector>, polar_vertices: Vec<Vector>) -> Result<Self> {
        hull::validate_pair(&vertices, &polar_vertices)?;
        let dim = vertices[0].len();
        Ok(Self::assemble(dim, vertices, polar_vertices))
    }

    fn assemble(dim: usize, vertices: Vec<Vector>, polar_vertices: Vec<Vector>) -> Self {
        let circumradius = detect_circumradius(&vertices);
        Self {
            dim,
            vertices,
            polar_vertices,
            circumradius,
        }
    }

    /// The cube `[-1, 1]^n`, whose gauge is the maximum norm.
    pub fn cube(dim: usize) -> Self {
        assert!(dim >= 1, "cube needs dimension >= 1");
        let mut vertices = Vec::with_capacity(1 << dim);
        for mask in 0..(1usize << dim) {
            let v = Vector::from_fn(dim, |i, _| if mask >> i & 1 == 1 { -1.0 } else { 1.0 });
            vertices.push(v);
        }
        let mut polar = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            for s in [1.0, -1.0] {
                let mut v = Vector::zeros(dim);
                v[i] = s;
                polar.push(v);
            }
        }
        Self::assemble(dim, vertices, polar)
    }

    /// The cross-polytope `{|x|_1 <= 1}`, polar of the cube.
    pub fn cross_polytope(dim: usize) -> Self {
        Self::cube(dim).polar()
    }

    /// Regular polygon with `sides` vertices on the circle of radius
    /// `radius`, first vertex at angle `phase`.
    pub fn regular_polygon(sides: usize, radius: f64, phase: f64) -> Result<Self> {
        if sides < 3 {
            return Err(Error::InvalidInput(format!("a polygon needs >= 3 sides, got {sides}")));
        }
        let pts: Vec<Vector> = (0..sides)
            .map(|k| {
                let a = phase + std::f64::consts::TAU * k as f64 / sides as f64;
                crate::vector(&[radius * a.cos(), radius * a.sin()])
            })
            .collect();
        Self::from_vertices(&pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extreme points `z_j` of `K`.
    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Vertices `v_i` of `K°`, the facet normals of `K`.
    pub fn polar_vertices(&self) -> &[Vector] {
        &self.polar_vertices
    }

    /// Common Euclidean norm of the vertices, when they all agree.
    pub fn circumradius(&self) -> Option<f64> {
        self.circumradius
    }

    /// Largest Euclidean norm of a vertex, so `|x| <= R γ(x)`.
    pub fn max_vertex_norm(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `γ(x) = max_i <x, v_i>` together with the active polar vertices.
    pub fn gauge(&self, x: &Vector) -> Result<ActiveMax> {
        self.check_dim(x)?;
        Ok(active_max(&self.polar_vertices, x.as_slice()))
    }

    /// `h(x) = γ°(x) = max_j <x, z_j>` together with the active vertices.
    pub fn support(&self, x: &Vector) -> Result<ActiveMax> {
        self.check_dim(x)?;
        Ok(active_max(&self.vertices, x.as_slice()))
    }

    /// Gauge value only, for hot loops. No dimension check.
    #[inline]
    pub fn gauge_value(&self, x: &[f64]) -> f64 {
        max_dot(&self.polar_vertices, x).max(0.0)
    }

    /// Support value only, for hot loops. No dimension check.
    #[inline]
    pub fn support_value(&self, x: &[f64]) -> f64 {
        max_dot(&self.vertices, x).max(0.0)
    }

    /// The polar body `K°`: the two vertex lists trade places.
    pub fn polar(&self) -> Self {
        Self::assemble(self.dim, self.polar_vertices.clone(), self.vertices.clone())
    }

    /// The point reflection `-K`, whose gauge is `x ↦ γ(-x)`.
    pub fn reflected(&self) -> Self {
        Self::assemble(
            self.dim,
            self.vertices.iter().map(|v| -v).collect(),
            self.polar_vertices.iter().map(|v| -v).collect(),
        )
    }

    /// True when `K = -K`.
    pub fn is_symmetric(&self) -> bool {
        let tol = 1e-12 * (1.0 + self.max_vertex_norm());
        self.vertices
            .iter()
            .all(|v| self.vertices.iter().any(|w| (v + w).amax() <= tol))
    }

    /// True when this is the cube `[-1,1]^n` up to vertex order.
    pub fn is_unit_cube(&self) -> bool {
        same_point_set(&self.vertices, &Self::cube(self.dim).vertices, 1e-12)
    }

    fn on_boundary(&self, z: &Vector) -> Result<ActiveMax> {
        let g = self.gauge(z)?;
        let residual = (g.value - 1.0).abs();
        if residual > tol::ON_UNIT_SPHERE {
            return Err(Error::NotOnBoundary { residual });
        }
        Ok(g)
    }

    /// Normal cone `N(K, z)` at a boundary point, generated by the polar
    /// vertices of the facets through `z`.
    pub fn normal_cone(&self, z: &Vector) -> Result<NormalCone> {
        let g = self.on_boundary(z)?;
        let generators: Vec<Vector> = g.active.iter().map(|&i| self.polar_vertices[i].clone()).collect();
        let refs: Vec<&Vector> = generators.iter().collect();
        let cone_dim = rank(&refs);
        Ok(NormalCone {
            base_point: z.clone(),
            generator_indices: g.active,
            generators,
            cone_dim,
        })
    }

    /// `∂γ(x)`: the convex hull of the active polar vertices, or all of `K°`
    /// at the origin.
    pub fn gauge_subdifferential(&self, x: &Vector) -> Result<SubdifferentialResult> {
        let g = self.gauge(x)?;
        let active_polar_vertices: Vec<Vector> =
            g.active.iter().map(|&i| self.polar_vertices[i].clone()).collect();
        let is_singleton = active_polar_vertices.len() == 1;
        let gradient = is_singleton.then(|| active_polar_vertices[0].clone());
        Ok(SubdifferentialResult {
            point: x.clone(),
            value: g.value,
            active_indices: g.active,
            active_polar_vertices,
            is_singleton,
            gradient,
        })
    }

    /// `Dγ°(v)` when the support function has a unique maximising vertex
    /// with a clear runner-up gap.
    pub fn support_gradient(&self, v: &Vector) -> Result<Vector> {
        self.check_dim(v)?;
        let dots: Vec<f64> = self.vertices.iter().map(|z| z.dot(v)).collect();
        let (best, &max) = dots
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("polytope has vertices");
        let runner_up = dots
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != best)
            .map(|(_, d)| *d)
            .fold(f64::NEG_INFINITY, f64::max);
        let gap = tol::SUPPORT_GAP_REL * (1.0 + max.abs());
        if max - runner_up <= gap {
            let ties = dots.iter().filter(|d| **d >= max - gap).count();
            return Err(Error::SupportNotDifferentiable { ties });
        }
        Ok(self.vertices[best].clone())
    }

    /// Smallest face of `K` through a boundary point.
    pub fn face_of(&self, z: &Vector) -> Result<FaceDescriptor> {
        let g = self.on_boundary(z)?;
        let normals: Vec<&Vector> = g.active.iter().map(|&i| &self.polar_vertices[i]).collect();
        let r = rank(&normals);
        let face_dim = self.dim - r.min(self.dim);
        let classification = if face_dim + 1 == self.dim {
            FaceClass::Smooth
        } else if face_dim == 0 {
            FaceClass::Vertex
        } else {
            FaceClass::Singular
        };
        Ok(FaceDescriptor {
            face_dim,
            containing_facets: g.active,
            classification,
        })
    }

    /// Vertex list and polar list as plain coordinate arrays.
    pub fn to_file_format(&self) -> PolytopeFile {
        PolytopeFile {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.iter().cloned().collect()).collect(),
            polar_vertices: Some(
                self.polar_vertices
                    .iter()
                    .map(|v| v.iter().cloned().collect())
                    .collect(),
            ),
        }
    }
}

/// Same set of points up to ordering.
pub fn same_point_set(a: &[Vector], b: &[Vector], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|p| b.iter().any(|q| (p - q).amax() <= tol))
        && b.iter().all(|q| a.iter().any(|p| (p - q).amax() <= tol))
}

fn detect_circumradius(vertices: &[Vector]) -> Option<f64> {
    let norms: Vec<f64> = vertices.iter().map(|v| v.norm()).collect();
    let max = norms.iter().cloned().fold(0.0, f64::max);
    let min = norms.iter().cloned().fold(f64::INFINITY, f64::min);
    (min > 0.0 && max / min <= 1.0 + tol::CIRCUMRADIUS_RATIO).then_some(max)
}

/// Serialisable description of a polytope: `dim`, `vertices` and an
/// optional `polar_vertices`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeFile {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polar_vertices: Option<Vec<Vec<f64>>>,
}

impl PolytopeFile {
    /// Builds the polytope: through the verified pair when polar vertices
    /// are given, through the hull otherwise.
    pub fn build(&self) -> Result<DualPolytope> {
        let to_vecs = |rows: &[Vec<f64>]| -> Result<Vec<Vector>> {
            rows.iter()
                .map(|r| {
                    if r.len() != self.dim {
                        Err(Error::DimensionMismatch {
                            expected: self.dim,
                            found: r.len(),
                        })
                    } else {
                        Ok(Vector::from_column_slice(r))
                    }
                })
                .collect()
        };
        let vertices = to_vecs(&self.vertices)?;
        match &self.polar_vertices {
            Some(p) => DualPolytope::from_dual_pair(vertices, to_vecs(p)?),
            None => DualPolytope::from_vertices(&vertices),
        }
    }
}

/// `N(K, z)` at a boundary point `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalCone {
    pub base_point: Vector,
    pub generators: Vec<Vector>,
    pub generator_indices: Vec<usize>,
    pub cone_dim: usize,
}

impl NormalCone {
    /// Whether `w` is a nonnegative combination of the generators.
    pub fn contains(&self, w: &Vector) -> bool {
        cone_contains(&self.generators, w, tol::CONE_RESIDUAL)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubdifferentialResult {
    pub point: Vector,
    /// `γ(point)`.
    pub value: f64,
    pub active_indices: Vec<usize>,
    pub active_polar_vertices: Vec<Vector>,
    pub is_singleton: bool,
    pub gradient: Option<Vector>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceClass {
    Vertex,
    Singular,
    Smooth,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceDescriptor {
    pub face_dim: usize,
    pub containing_facets: Vec<usize>,
    pub classification: FaceClass,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;

    fn square() -> DualPolytope {
        DualPolytope::cube(2)
    }

    fn diamond() -> DualPolytope {
        DualPolytope::from_vertices(&[
            vector(&[1.0, 0.0]),
            vector(&[0.0, 1.0]),
            vector(&[-1.0, 0.0]),
            vector(&[0.0, -1.0]),
        ])
        .unwrap()
    }

    #[test]
    fn square_from_hull_has_axis_normals() {
        let p = DualPolytope::from_vertices(&[
            vector(&[1.0, 1.0]),
            vector(&[-1.0, 1.0]),
            vector(&[-1.0, -1.0]),
            vector(&[1.0, -1.0]),
            vector(&[0.2, 0.3]),
        ])
        .unwrap();
        let expected = [
            vector(&[1.0, 0.0]),
            vector(&[-1.0, 0.0]),
            vector(&[0.0, 1.0]),
            vector(&[0.0, -1.0]),
        ];
        assert!(same_point_set(p.polar_vertices(), &expected, 1e-12));
        assert_eq!(p.vertices().len(), 4);
        assert!((p.circumradius().unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn diamond_polar_is_square() {
        let d = diamond();
        assert!(same_point_set(d.polar_vertices(), square().vertices(), 1e-12));
    }

    #[test]
    fn gauge_of_max_norm() {
        let g = square().gauge(&vector(&[3.0, -2.0])).unwrap();
        assert_eq!(g.value, 3.0);
        assert_eq!(g.active.len(), 1);
        assert_eq!(square().polar_vertices()[g.active[0]], vector(&[1.0, 0.0]));
    }

    #[test]
    fn gauge_at_origin_activates_everything() {
        let p = square();
        let g = p.gauge(&vector(&[0.0, 0.0])).unwrap();
        assert_eq!(g.value, 0.0);
        assert_eq!(g.active, (0..4).collect::<Vec<_>>());
        let s = p.gauge_subdifferential(&vector(&[0.0, 0.0])).unwrap();
        assert!(!s.is_singleton);
        assert!(s.gradient.is_none());
    }

    #[test]
    fn gauge_matches_bisection_on_diamond() {
        // inf{λ : x/λ ∈ K} by bisection, using only the membership |x|_1 <= 1
        let x = [1.0, 1.0];
        let inside = |l: f64| (x[0] / l).abs() + (x[1] / l).abs() <= 1.0;
        let (mut lo, mut hi) = (1e-6, 1e6);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if inside(mid) {
                hi = mid
            } else {
                lo = mid
            }
        }
        let g = diamond().gauge(&vector(&x)).unwrap();
        assert!((g.value - hi).abs() < 1e-12);
        assert_eq!(g.active.len(), 1);
        assert_eq!(diamond().polar_vertices()[g.active[0]], vector(&[1.0, 1.0]));
    }

    #[test]
    fn support_of_max_norm_is_l1() {
        let p = square();
        let s = p.support(&vector(&[3.0, -2.0])).unwrap();
        assert_eq!(s.value, 5.0);
        assert_eq!(p.vertices()[s.active[0]], vector(&[1.0, -1.0]));
        assert_eq!(p.support(&vector(&[0.0, 0.0])).unwrap().value, 0.0);
        let s = p.support(&vector(&[0.6, 0.8])).unwrap();
        assert!((s.value - 1.4).abs() < 1e-15);
        assert_eq!(s.active.len(), 1);
        assert_eq!(p.vertices()[s.active[0]], vector(&[1.0, 1.0]));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        assert_eq!(
            square().gauge(&vector(&[1.0, 2.0, 3.0])),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn polar_of_cube_is_cross_polytope() {
        let c = DualPolytope::cube(3);
        let x = DualPolytope::cross_polytope(3);
        assert!(same_point_set(c.polar().vertices(), x.vertices(), 0.0));
        assert_eq!(c.polar().polar(), c);
        assert!((square().polar().polar_vertices().len()) == 4);
        // the square's vertices all have norm √2
        assert!((diamond().polar().circumradius().unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn normal_cones_of_square() {
        let p = square();
        let corner = p.normal_cone(&vector(&[1.0, 1.0])).unwrap();
        assert_eq!(corner.cone_dim, 2);
        assert!(same_point_set(
            &corner.generators,
            &[vector(&[1.0, 0.0]), vector(&[0.0, 1.0])],
            0.0
        ));
        assert!(corner.contains(&vector(&[2.0, 0.5])));
        assert!(!corner.contains(&vector(&[-0.1, 1.0])));
        let side = p.normal_cone(&vector(&[1.0, 0.3])).unwrap();
        assert_eq!(side.cone_dim, 1);
        assert_eq!(side.generators, vec![vector(&[1.0, 0.0])]);
        assert!(matches!(
            p.normal_cone(&vector(&[0.5, 0.3])),
            Err(Error::NotOnBoundary { .. })
        ));
    }

    #[test]
    fn cross_polytope_cone_membership_by_solve() {
        // λ1 (1,1) + λ2 (1,-1) = (3,1) gives λ = (2,1) >= 0
        let nc = diamond().normal_cone(&vector(&[1.0, 0.0])).unwrap();
        assert_eq!(nc.cone_dim, 2);
        assert!(nc.contains(&vector(&[3.0, 1.0])));
        assert!(!nc.contains(&vector(&[1.0, 3.0])));
    }

    #[test]
    fn subdifferential_and_euler_identity() {
        let p = square();
        let x = vector(&[2.0, 1.0]);
        let s = p.gauge_subdifferential(&x).unwrap();
        assert!(s.is_singleton);
        let g = s.gradient.clone().unwrap();
        assert_eq!(g, vector(&[1.0, 0.0]));
        assert_eq!(g.dot(&x), 2.0);
        assert_eq!(p.support_value(g.as_slice()), 1.0);
        let s2 = p.gauge_subdifferential(&(&x * 2.0)).unwrap();
        assert_eq!(s.active_indices, s2.active_indices);
        let diag = p.gauge_subdifferential(&vector(&[1.0, 1.0])).unwrap();
        assert!(!diag.is_singleton);
        assert_eq!(diag.active_indices.len(), 2);
    }

    #[test]
    fn faces_of_square_and_cube() {
        let f = square().face_of(&vector(&[1.0, 1.0])).unwrap();
        assert_eq!((f.face_dim, f.classification), (0, FaceClass::Vertex));
        let f = square().face_of(&vector(&[1.0, 0.5])).unwrap();
        assert_eq!((f.face_dim, f.classification), (1, FaceClass::Smooth));
        assert_eq!(f.containing_facets.len(), 1);
        let f = DualPolytope::cube(3).face_of(&vector(&[1.0, 1.0, 0.0])).unwrap();
        assert_eq!((f.face_dim, f.classification), (1, FaceClass::Singular));
    }

    #[test]
    fn support_gradient_needs_unique_vertex() {
        let p = square();
        assert_eq!(p.support_gradient(&vector(&[0.6, 0.8])).unwrap(), vector(&[1.0, 1.0]));
        assert_eq!(
            p.support_gradient(&vector(&[0.0, 1.0])),
            Err(Error::SupportNotDifferentiable { ties: 2 })
        );
    }

    #[test]
    fn reflection_and_symmetry() {
        let tri = DualPolytope::regular_polygon(3, 1.0, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(!tri.is_symmetric());
        assert!(square().is_symmetric());
        let x = vector(&[0.3, -0.7]);
        let r = tri.reflected();
        assert!((r.gauge_value(x.as_slice()) - tri.gauge_value((-&x).as_slice())).abs() < 1e-15);
        assert!(square().is_unit_cube());
        assert!(!diamond().is_unit_cube());
    }

    #[test]
    fn polytope_file_round_trip() {
        let p = DualPolytope::regular_polygon(5, 1.3, 0.1).unwrap();
        let desc = p.to_file_format();
        let back = desc.build().unwrap();
        assert!(same_point_set(back.vertices(), p.vertices(), 0.0));
        assert!(same_point_set(back.polar_vertices(), p.polar_vertices(), 0.0));
    }
}
