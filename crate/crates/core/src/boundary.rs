//! Oriented domain boundaries `∂U`.
//!
//! Every shape carries a side, and the inward normal `ν` always points into
//! the region `U` whose distance field is computed. The Euclidean distance
//! `d` is measured into `U`, so its Hessian at a boundary point is minus the
//! principal curvatures of `∂U` as seen from `U`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::tol;
use crate::{Error, Matrix, Result, Vector};

/// Which side of a closed curve or sphere is the region `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Interior,
    Exterior,
}

impl Side {
    pub fn flipped(self) -> Self {
        match self {
            Side::Interior => Side::Exterior,
            Side::Exterior => Side::Interior,
        }
    }
}

/// Which side of the parabola `x₂ = x₁²` is the region `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParabolaSide {
    Above,
    Below,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Inside,
    Outside,
    On,
}

/// An axis-aligned rectangle in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl Window {
    pub fn new(min: [f64; 2], max: [f64; 2]) -> Result<Self> {
        if !(min[0] < max[0] && min[1] < max[1]) || min.iter().chain(&max).any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "degenerate window [{}, {}] x [{}, {}]",
                min[0], max[0], min[1], max[1]
            )));
        }
        Ok(Self { min, max })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (0..2).all(|k| self.min[k] <= x[k] && x[k] <= self.max[k])
    }

    /// Node `(i, j)` of a `resolution × resolution` lattice covering the
    /// window, corners included.
    pub fn node(&self, i: usize, j: usize, resolution: usize) -> [f64; 2] {
        let t = |k: usize, idx: usize| {
            if resolution <= 1 {
                0.5 * (self.min[k] + self.max[k])
            } else {
                self.min[k] + (self.max[k] - self.min[k]) * idx as f64 / (resolution - 1) as f64
            }
        };
        [t(0, i), t(1, j)]
    }
}

/// The boundary of the domain together with its orientation.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryShape {
    /// Sphere `|x - center| = radius` in any dimension.
    Sphere { center: Vector, radius: f64, side: Side },
    /// The curve `x₂ = x₁²`.
    Parabola { side: ParabolaSide },
    /// A simple counter-clockwise polygon.
    Polygon { vertices: Vec<Vector>, side: Side },
    /// `U` is the complement of a union of closed disks; `∂U` is the part of
    /// the circles not covered by another disk.
    DiskUnionExterior { disks: Vec<(Vector, f64)> },
}

/// Euclidean foot point data at a point of `∂U`.
#[derive(Clone, Debug, PartialEq)]
pub struct FootpointResult {
    pub foot: Vector,
    pub euclid_dist: f64,
    pub normal: Vector,
    pub tangent_frame: Vec<Vector>,
}

fn finite(v: &Vector) -> bool {
    v.iter().all(|c| c.is_finite())
}

fn segments_cross(a: &Vector, b: &Vector, c: &Vector, d: &Vector) -> bool {
    let orient = |p: &Vector, q: &Vector, r: &Vector| (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
    let on_seg = |p: &Vector, q: &Vector, r: &Vector| {
        r[0] >= p[0].min(q[0]) && r[0] <= p[0].max(q[0]) && r[1] >= p[1].min(q[1]) && r[1] <= p[1].max(q[1])
    };
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    (o1 == 0.0 && on_seg(a, b, c))
        || (o2 == 0.0 && on_seg(a, b, d))
        || (o3 == 0.0 && on_seg(c, d, a))
        || (o4 == 0.0 && on_seg(c, d, b))
}

fn closest_on_segment(a: &Vector, b: &Vector, x: &Vector) -> (Vector, f64) {
    let d = b - a;
    let t = ((x - a).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
    (a + d * t, t)
}

/// Real roots of `t³ + p t + q = 0`, polished by Newton steps.
fn depressed_cubic_roots(p: f64, q: f64) -> Vec<f64> {
    let disc = q * q / 4.0 + p * p * p / 27.0;
    let mut roots = if disc > 0.0 {
        let s = disc.sqrt();
        vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt()]
    } else if p == 0.0 {
        vec![0.0]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3).map(|k| m * (theta - TAU * k as f64 / 3.0).cos()).collect()
    };
    for r in &mut roots {
        for _ in 0..3 {
            let f = *r * *r * *r + p * *r + q;
            let df = 3.0 * *r * *r + p;
            if df != 0.0 {
                *r -= f / df;
            }
        }
    }
    roots
}

/// Orthonormal basis of the complement of the unit vector `nu`.
fn tangent_frame(nu: &Vector) -> Vec<Vector> {
    let n = nu.len();
    if n == 2 {
        return vec![crate::vector(&[-nu[1], nu[0]])];
    }
    let mut frame: Vec<Vector> = Vec::with_capacity(n - 1);
    for k in 0..n {
        let mut e = Vector::zeros(n);
        e[k] = 1.0;
        e -= nu * nu.dot(&e);
        for f in &frame {
            e -= f * f.dot(&e);
        }
        let len = e.norm();
        if len > 1e-6 {
            frame.push(e / len);
        }
        if frame.len() == n - 1 {
            break;
        }
    }
    frame
}

impl BoundaryShape {
    pub fn sphere(center: Vector, radius: f64, side: Side) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !finite(&center) || center.is_empty() {
            return Err(Error::InvalidInput(format!("sphere needs a positive radius, got {radius}")));
        }
        Ok(Self::Sphere { center, radius, side })
    }

    /// The unit sphere `|x| = 1` in dimension `dim`.
    pub fn unit_sphere(dim: usize, side: Side) -> Self {
        Self::Sphere {
            center: Vector::zeros(dim),
            radius: 1.0,
            side,
        }
    }

    pub fn parabola(side: ParabolaSide) -> Self {
        Self::Parabola { side }
    }

    /// A polygon given by a counter-clockwise, simple vertex loop.
    pub fn polygon(vertices: Vec<Vector>, side: Side) -> Result<Self> {
        let m = vertices.len();
        if m < 3 || vertices.iter().any(|v| v.len() != 2 || !finite(v)) {
            return Err(Error::InvalidInput("a polygon needs >= 3 finite planar vertices".into()));
        }
        let area: f64 = (0..m)
            .map(|k| {
                let (a, b) = (&vertices[k], &vertices[(k + 1) % m]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum();
        if area <= 0.0 {
            return Err(Error::InvalidInput("polygon loop must be counter-clockwise".into()));
        }
        for i in 0..m {
            for j in (i + 1)..m {
                let adjacent = j == i + 1 || (i == 0 && j == m - 1);
                if !adjacent
                    && segments_cross(&vertices[i], &vertices[(i + 1) % m], &vertices[j], &vertices[(j + 1) % m])
                {
                    return Err(Error::InvalidInput(format!("polygon edges {i} and {j} intersect")));
                }
            }
        }
        Ok(Self::Polygon { vertices, side })
    }

    pub fn disk_union_exterior(disks: Vec<(Vector, f64)>) -> Result<Self> {
        if disks.is_empty() {
            return Err(Error::InvalidInput("disk union needs at least one disk".into()));
        }
        for (c, r) in &disks {
            if c.len() != 2 || !finite(c) || !(*r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidInput("disks need planar centers and positive radii".into()));
            }
        }
        Ok(Self::DiskUnionExterior { disks })
    }

    /// Unit disks centred at `(±1, 0)`, touching at the origin.
    pub fn two_unit_disks() -> Self {
        Self::DiskUnionExterior {
            disks: vec![(crate::vector(&[-1.0, 0.0]), 1.0), (crate::vector(&[1.0, 0.0]), 1.0)],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Sphere { center, .. } => center.len(),
            _ => 2,
        }
    }

    /// The same boundary seen from the other side, when that side is again
    /// one of the supported shapes.
    pub fn complement(&self) -> Option<Self> {
        match self {
            Self::Sphere { center, radius, side } => Some(Self::Sphere {
                center: center.clone(),
                radius: *radius,
                side: side.flipped(),
            }),
            Self::Parabola { side } => Some(Self::Parabola {
                side: match side {
                    ParabolaSide::Above => ParabolaSide::Below,
                    ParabolaSide::Below => ParabolaSide::Above,
                },
            }),
            Self::Polygon { vertices, side } => Some(Self::Polygon {
                vertices: vertices.clone(),
                side: side.flipped(),
            }),
            Self::DiskUnionExterior { .. } => None,
        }
    }

    fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Whether `y` lies inside a disk of the union other than `skip`, by more
    /// than the boundary tolerance.
    pub fn covered_by_other_disk(&self, y: &[f64], skip: usize) -> bool {
        match self {
            Self::DiskUnionExterior { disks } => disks.iter().enumerate().any(|(k, (c, r))| {
                k != skip && ((y[0] - c[0]).hypot(y[1] - c[1]) - r) < -tol::ON_BOUNDARY * (1.0 + r)
            }),
            _ => false,
        }
    }

    /// Signed Euclidean distance to `∂U`, positive inside `U`.
    pub fn euclid_signed_distance(&self, x: &Vector) -> Result<f64> {
        self.check_dim(x)?;
        Ok(match self {
            Self::Sphere { center, radius, side } => {
                let d = radius - (x - center).norm();
                match side {
                    Side::Interior => d,
                    Side::Exterior => -d,
                }
            }
            Self::Parabola { side } => {
                let d = self.parabola_foot(x).1;
                let above = x[1] > x[0] * x[0];
                let s = if above == (*side == ParabolaSide::Above) { 1.0 } else { -1.0 };
                s * d
            }
            Self::Polygon { vertices, side } => {
                let m = vertices.len();
                let d = (0..m)
                    .map(|k| {
                        let (p, _) = closest_on_segment(&vertices[k], &vertices[(k + 1) % m], x);
                        (x - p).norm()
                    })
                    .fold(f64::INFINITY, f64::min);
                let inside = point_in_polygon(vertices, x);
                let s = if inside == (*side == Side::Interior) { 1.0 } else { -1.0 };
                s * d
            }
            Self::DiskUnionExterior { disks } => {
                let outside_all = disks.iter().map(|(c, r)| (x - c).norm() - r).fold(f64::INFINITY, f64::min);
                if outside_all >= 0.0 {
                    outside_all
                } else {
                    -self.disk_union_foot(x).1
                }
            }
        })
    }

    /// Inside, outside or on `∂U` (within `1e-10`).
    pub fn region_membership(&self, x: &Vector) -> Result<Membership> {
        let s = match self {
            Self::Parabola { side } => {
                // the vertical residual is cheaper and exact on the curve
                let r = x[1] - x[0] * x[0];
                if r.abs() <= tol::ON_BOUNDARY {
                    return Ok(Membership::On);
                }
                self.check_dim(x)?;
                if *side == ParabolaSide::Above {
                    r
                } else {
                    -r
                }
            }
            _ => self.euclid_signed_distance(x)?,
        };
        Ok(if s.abs() <= tol::ON_BOUNDARY {
            Membership::On
        } else if s > 0.0 {
            Membership::Inside
        } else {
            Membership::Outside
        })
    }

    /// Distance from `y` to the boundary set, used to validate that a point
    /// claimed to lie on `∂U` really does.
    fn boundary_residual(&self, y: &Vector) -> f64 {
        match self {
            Self::Parabola { .. } => (y[1] - y[0] * y[0]).abs() / (1.0 + 4.0 * y[0] * y[0]).sqrt(),
            Self::DiskUnionExterior { disks } => {
                let on_some = disks
                    .iter()
                    .map(|(c, r)| ((y - c).norm() - r).abs())
                    .fold(f64::INFINITY, f64::min);
                let covered = disks.iter().map(|(c, r)| r - (y - c).norm()).fold(f64::NEG_INFINITY, f64::max);
                on_some.max(covered)
            }
            _ => self.euclid_signed_distance(y).map(f64::abs).unwrap_or(f64::INFINITY),
        }
    }

    fn require_on_boundary(&self, y: &Vector) -> Result<()> {
        self.check_dim(y)?;
        let residual = self.boundary_residual(y);
        if residual > tol::ON_BOUNDARY * (1.0 + y.norm()) {
            return Err(Error::NotOnBoundary { residual });
        }
        Ok(())
    }

    /// Unit normal at `y ∈ ∂U` pointing into `U`.
    pub fn inward_normal(&self, y: &Vector) -> Result<Vector> {
        self.require_on_boundary(y)?;
        match self {
            Self::Sphere { center, side, .. } => {
                let n = (y - center).normalize();
                Ok(match side {
                    Side::Interior => -n,
                    Side::Exterior => n,
                })
            }
            Self::Parabola { side } => {
                let n = crate::vector(&[-2.0 * y[0], 1.0]).normalize();
                Ok(match side {
                    ParabolaSide::Above => n,
                    ParabolaSide::Below => -n,
                })
            }
            Self::Polygon { vertices, side } => {
                let (a, b) = self.polygon_edge_at(vertices, y)?;
                let d = (b - a).normalize();
                let left = crate::vector(&[-d[1], d[0]]);
                Ok(match side {
                    Side::Interior => left,
                    Side::Exterior => -left,
                })
            }
            Self::DiskUnionExterior { disks } => {
                let on: Vec<usize> = self.disks_through(disks, y);
                match on.as_slice() {
                    [k] => Ok((y - &disks[*k].0).normalize()),
                    _ => Err(Error::CornerPoint),
                }
            }
        }
    }

    fn disks_through(&self, disks: &[(Vector, f64)], y: &Vector) -> Vec<usize> {
        let eps = 1e-9;
        disks
            .iter()
            .enumerate()
            .filter(|(_, (c, r))| ((y - c).norm() - r).abs() <= eps * (1.0 + r))
            .map(|(k, _)| k)
            .collect()
    }

    fn polygon_edge_at<'a>(&self, vertices: &'a [Vector], y: &Vector) -> Result<(&'a Vector, &'a Vector)> {
        let m = vertices.len();
        let scale = vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
        if vertices.iter().any(|v| (v - y).norm() <= 1e-9 * scale) {
            return Err(Error::CornerPoint);
        }
        (0..m)
            .map(|k| (&vertices[k], &vertices[(k + 1) % m]))
            .min_by(|(a, b), (c, d)| {
                let da = (y - closest_on_segment(a, b, y).0).norm();
                let dc = (y - closest_on_segment(c, d, y).0).norm();
                da.total_cmp(&dc)
            })
            .ok_or(Error::CornerPoint)
    }

    /// `D²d(y)` for the Euclidean distance measured into `U`.
    pub fn euclid_dist_hessian(&self, y: &Vector) -> Result<Matrix> {
        self.require_on_boundary(y)?;
        let n = self.dim();
        match self {
            Self::Sphere { center, radius, side } => {
                let u = (y - center).normalize();
                let p = (Matrix::identity(n, n) - &u * u.transpose()) / *radius;
                Ok(match side {
                    Side::Interior => -p,
                    Side::Exterior => p,
                })
            }
            Self::Parabola { side } => {
                let t = y[0];
                let s = 1.0 + 4.0 * t * t;
                let kappa = 2.0 / s.powf(1.5);
                let tangent = crate::vector(&[1.0, 2.0 * t]) / s.sqrt();
                let h = &tangent * tangent.transpose() * kappa;
                Ok(match side {
                    ParabolaSide::Above => -h,
                    ParabolaSide::Below => h,
                })
            }
            Self::Polygon { vertices, .. } => match self.polygon_edge_at(vertices, y) {
                Ok(_) => Ok(Matrix::zeros(2, 2)),
                Err(_) => Err(Error::NotTwiceDifferentiableHere),
            },
            Self::DiskUnionExterior { disks } => match self.disks_through(disks, y).as_slice() {
                [k] => {
                    let (c, r) = &disks[*k];
                    let u = (y - c).normalize();
                    Ok((Matrix::identity(2, 2) - &u * u.transpose()) / *r)
                }
                _ => Err(Error::NotTwiceDifferentiableHere),
            },
        }
    }

    /// Normal and tangent frame at a boundary point.
    pub fn frame_at(&self, y: &Vector) -> Result<FootpointResult> {
        let normal = self.inward_normal(y)?;
        Ok(FootpointResult {
            foot: y.clone(),
            euclid_dist: 0.0,
            tangent_frame: tangent_frame(&normal),
            normal,
        })
    }

    /// Euclidean nearest point of `∂U` to `x`, with the frame there.
    pub fn euclid_footpoint(&self, x: &Vector) -> Result<FootpointResult> {
        self.check_dim(x)?;
        let (foot, dist) = match self {
            Self::Sphere { center, radius, .. } => {
                let d = x - center;
                if d.norm() == 0.0 {
                    return Err(Error::InvalidInput("the centre has no unique foot point".into()));
                }
                (center + d.normalize() * *radius, (d.norm() - radius).abs())
            }
            Self::Parabola { .. } => self.parabola_foot(x),
            Self::Polygon { vertices, .. } => {
                let m = vertices.len();
                (0..m)
                    .map(|k| {
                        let (p, _) = closest_on_segment(&vertices[k], &vertices[(k + 1) % m], x);
                        let d = (x - &p).norm();
                        (p, d)
                    })
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("polygon has edges")
            }
            Self::DiskUnionExterior { .. } => self.disk_union_foot(x),
        };
        let normal = self.inward_normal(&foot)?;
        Ok(FootpointResult {
            tangent_frame: tangent_frame(&normal),
            foot,
            euclid_dist: dist,
            normal,
        })
    }

    fn parabola_foot(&self, x: &Vector) -> (Vector, f64) {
        // stationary points of |(t, t²) - x|²: 2t³ + (1 - 2x₂) t - x₁ = 0
        depressed_cubic_roots((1.0 - 2.0 * x[1]) / 2.0, -x[0] / 2.0)
            .into_iter()
            .map(|t| {
                let p = crate::vector(&[t, t * t]);
                let d = (x - &p).norm();
                (p, d)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("a cubic has a real root")
    }

    /// Nearest uncovered circle point: radial projections and pairwise
    /// circle intersections are the only candidates.
    fn disk_union_foot(&self, x: &Vector) -> (Vector, f64) {
        let Self::DiskUnionExterior { disks } = self else {
            unreachable!("only called for disk unions")
        };
        let mut candidates: Vec<Vector> = Vec::new();
        for (c, r) in disks {
            let d = x - c;
            if d.norm() > 0.0 {
                candidates.push(c + d.normalize() * *r);
            }
        }
        for i in 0..disks.len() {
            for j in (i + 1)..disks.len() {
                candidates.extend(circle_intersections(&disks[i], &disks[j]));
            }
        }
        candidates
            .into_iter()
            .filter(|y| {
                disks
                    .iter()
                    .all(|(c, r)| (y - c).norm() >= r - tol::ON_BOUNDARY * (1.0 + r))
            })
            .map(|y| {
                let d = (x - &y).norm();
                (y, d)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("a disk union has an uncovered boundary point")
    }

    /// Quasi-uniform points on `∂U`: uniform angles, arc parameter or edge
    /// length. The parabola needs a window bounding `x₁`.
    pub fn sample_boundary(&self, n: usize, window: Option<&Window>) -> Result<Vec<Vector>> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("need at least 2 samples, got {n}")));
        }
        match self {
            Self::Sphere { center, radius, .. } => match center.len() {
                1 => Ok(vec![center.add_scalar(*radius), center.add_scalar(-radius)]),
                2 => Ok((0..n)
                    .map(|k| {
                        let a = TAU * k as f64 / n as f64;
                        center + crate::vector(&[a.cos(), a.sin()]) * *radius
                    })
                    .collect()),
                3 => Ok(fibonacci_sphere(n)
                    .into_iter()
                    .map(|u| center + u * *radius)
                    .collect()),
                d => Err(Error::UnsupportedDimension {
                    dim: d,
                    reason: "sphere sampling is available in dimensions 1 to 3",
                }),
            },
            Self::Parabola { .. } => {
                let w = window.ok_or(Error::WindowRequired)?;
                Ok((0..n)
                    .map(|k| {
                        let t = w.min[0] + (w.max[0] - w.min[0]) * k as f64 / (n - 1) as f64;
                        crate::vector(&[t, t * t])
                    })
                    .collect())
            }
            Self::Polygon { vertices, .. } => {
                let m = vertices.len();
                let lengths: Vec<f64> = (0..m).map(|k| (&vertices[(k + 1) % m] - &vertices[k]).norm()).collect();
                let total: f64 = lengths.iter().sum();
                let mut out = Vec::with_capacity(n);
                for k in 0..n {
                    let mut s = total * k as f64 / n as f64;
                    let mut e = 0;
                    while e + 1 < m && s > lengths[e] {
                        s -= lengths[e];
                        e += 1;
                    }
                    let (a, b) = (&vertices[e], &vertices[(e + 1) % m]);
                    out.push(a + (b - a) * (s / lengths[e]).min(1.0));
                }
                Ok(out)
            }
            Self::DiskUnionExterior { disks } => {
                let total: f64 = disks.iter().map(|(_, r)| r).sum();
                let mut out = Vec::with_capacity(n);
                for (k, (c, r)) in disks.iter().enumerate() {
                    let count = ((n as f64 * r / total).round() as usize).max(1);
                    for i in 0..count {
                        let a = TAU * i as f64 / count as f64;
                        let y = c + crate::vector(&[a.cos(), a.sin()]) * *r;
                        if !self.covered_by_other_disk(y.as_slice(), k) {
                            out.push(y);
                        }
                    }
                }
                Ok(out)
            }
        }
    }
}

fn circle_intersections(a: &(Vector, f64), b: &(Vector, f64)) -> Vec<Vector> {
    let (c0, r0) = (&a.0, a.1);
    let (c1, r1) = (&b.0, b.1);
    let d = (c1 - c0).norm();
    if d == 0.0 || d > r0 + r1 || d < (r0 - r1).abs() {
        return Vec::new();
    }
    let along = (d * d + r0 * r0 - r1 * r1) / (2.0 * d);
    let h = (r0 * r0 - along * along).max(0.0).sqrt();
    let u = (c1 - c0) / d;
    let base = c0 + &u * along;
    let perp = crate::vector(&[-u[1], u[0]]);
    if h == 0.0 {
        vec![base]
    } else {
        vec![&base + &perp * h, &base - &perp * h]
    }
}

fn point_in_polygon(vertices: &[Vector], x: &Vector) -> bool {
    let m = vertices.len();
    let mut inside = false;
    for k in 0..m {
        let (a, b) = (&vertices[k], &vertices[(k + 1) % m]);
        if (a[1] > x[1]) != (b[1] > x[1]) {
            let xc = a[0] + (x[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if x[0] < xc {
                inside = !inside;
            }
        }
    }
    inside
}

fn fibonacci_sphere(n: usize) -> Vec<Vector> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let a = golden * k as f64;
            crate::vector(&[r * a.cos(), r * a.sin(), z])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;
    use approx::assert_abs_diff_eq;

    fn unit_circle(side: Side) -> BoundaryShape {
        BoundaryShape::unit_sphere(2, side)
    }

    #[test]
    fn circle_samples_at_uniform_angles() {
        let s = unit_circle(Side::Interior).sample_boundary(4, None).unwrap();
        let expected = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
        for (p, e) in s.iter().zip(expected) {
            assert_abs_diff_eq!(p[0], e[0], epsilon = 1e-15);
            assert_abs_diff_eq!(p[1], e[1], epsilon = 1e-15);
        }
    }

    #[test]
    fn parabola_samples_need_window() {
        let b = BoundaryShape::parabola(ParabolaSide::Above);
        assert_eq!(b.sample_boundary(5, None), Err(Error::WindowRequired));
        let w = Window::new([-2.0, 0.0], [2.0, 4.0]).unwrap();
        let s = b.sample_boundary(5, Some(&w)).unwrap();
        let ts: Vec<f64> = s.iter().map(|p| p[0]).collect();
        assert_eq!(ts, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert!(s.iter().all(|p| p[1] == p[0] * p[0]));
    }

    #[test]
    fn disk_union_samples_are_uncovered() {
        let b = BoundaryShape::two_unit_disks();
        let s = b.sample_boundary(100, None).unwrap();
        assert!(!s.is_empty());
        for p in &s {
            let d0 = (p - vector(&[-1.0, 0.0])).norm();
            let d1 = (p - vector(&[1.0, 0.0])).norm();
            let on_one = (d0 - 1.0).abs() < 1e-12 || (d1 - 1.0).abs() < 1e-12;
            assert!(on_one && d0 >= 1.0 - 1e-12 && d1 >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn sphere_normals_follow_side() {
        let y = vector(&[0.8, 0.6]);
        assert_eq!(unit_circle(Side::Exterior).inward_normal(&y).unwrap(), y);
        assert_eq!(unit_circle(Side::Interior).inward_normal(&y).unwrap(), -&y);
        assert!(matches!(
            unit_circle(Side::Interior).inward_normal(&vector(&[0.5, 0.0])),
            Err(Error::NotOnBoundary { .. })
        ));
    }

    #[test]
    fn parabola_normal_is_normalised_gradient() {
        let n = BoundaryShape::parabola(ParabolaSide::Above)
            .inward_normal(&vector(&[1.0, 1.0]))
            .unwrap();
        let expected = vector(&[-2.0, 1.0]) / 5f64.sqrt();
        assert_abs_diff_eq!((n - expected).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn polygon_corner_is_an_error() {
        let sq = BoundaryShape::polygon(
            vec![vector(&[-1.0, -1.0]), vector(&[1.0, -1.0]), vector(&[1.0, 1.0]), vector(&[-1.0, 1.0])],
            Side::Interior,
        )
        .unwrap();
        assert_eq!(sq.inward_normal(&vector(&[1.0, 1.0])), Err(Error::CornerPoint));
        assert_eq!(sq.inward_normal(&vector(&[1.0, 0.2])).unwrap(), vector(&[-1.0, 0.0]));
        assert_eq!(sq.euclid_dist_hessian(&vector(&[1.0, 0.2])).unwrap(), Matrix::zeros(2, 2));
        assert_eq!(
            sq.euclid_dist_hessian(&vector(&[-1.0, 1.0])),
            Err(Error::NotTwiceDifferentiableHere)
        );
    }

    #[test]
    fn polygon_validation() {
        let cw = vec![vector(&[0.0, 0.0]), vector(&[0.0, 1.0]), vector(&[1.0, 0.0])];
        assert!(BoundaryShape::polygon(cw, Side::Interior).is_err());
        let bowtie = vec![
            vector(&[0.0, 0.0]),
            vector(&[1.0, 1.0]),
            vector(&[1.0, 0.0]),
            vector(&[0.0, 1.0]),
        ];
        assert!(BoundaryShape::polygon(bowtie, Side::Interior).is_err());
    }

    #[test]
    fn sphere_hessians() {
        let y = vector(&[0.8, 0.6]);
        let h = unit_circle(Side::Interior).euclid_dist_hessian(&y).unwrap();
        let expected = Matrix::from_row_slice(2, 2, &[-0.36, 0.48, 0.48, -0.64]);
        assert_abs_diff_eq!((&h - &expected).amax(), 0.0, epsilon = 1e-15);
        let he = unit_circle(Side::Exterior).euclid_dist_hessian(&y).unwrap();
        assert_abs_diff_eq!((he + expected).amax(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn membership() {
        let c = unit_circle(Side::Interior);
        assert_eq!(c.region_membership(&vector(&[0.0, 0.0])).unwrap(), Membership::Inside);
        let p = BoundaryShape::parabola(ParabolaSide::Above);
        assert_eq!(p.region_membership(&vector(&[0.0, -1.0])).unwrap(), Membership::Outside);
        assert_eq!(p.region_membership(&vector(&[0.5, 0.25])).unwrap(), Membership::On);
        let d = BoundaryShape::two_unit_disks();
        assert_eq!(d.region_membership(&vector(&[0.0, 0.0])).unwrap(), Membership::On);
        assert_eq!(d.region_membership(&vector(&[0.5, 0.0])).unwrap(), Membership::Outside);
        assert_eq!(d.region_membership(&vector(&[0.0, 2.0])).unwrap(), Membership::Inside);
    }

    #[test]
    fn parabola_euclid_distance_matches_dense_search() {
        let b = BoundaryShape::parabola(ParabolaSide::Above);
        for x in [[0.0, 2.0], [1.5, -0.3], [-0.7, 0.1], [0.0, 0.3], [3.0, 1.0]] {
            let xv = vector(&x);
            let brute = (0..=400_000)
                .map(|k| {
                    let t = -4.0 + 8.0 * k as f64 / 400_000.0;
                    (t - x[0]).hypot(t * t - x[1])
                })
                .fold(f64::INFINITY, f64::min);
            let got = b.euclid_signed_distance(&xv).unwrap().abs();
            assert!((got - brute).abs() < 1e-8, "{x:?}: {got} vs {brute}");
        }
    }

    #[test]
    fn disk_union_foot_uses_cusp_when_nearest() {
        // overlapping disks: from (0, 0.5) both radial projections are covered
        let b = BoundaryShape::disk_union_exterior(vec![(vector(&[-0.5, 0.0]), 1.0), (vector(&[0.5, 0.0]), 1.0)])
            .unwrap();
        let s = b.euclid_signed_distance(&vector(&[0.0, 0.5])).unwrap();
        assert_abs_diff_eq!(s, 0.5 - 0.75f64.sqrt(), epsilon = 1e-15);
        let f = BoundaryShape::two_unit_disks().euclid_footpoint(&vector(&[3.0, 0.0])).unwrap();
        assert_abs_diff_eq!((f.foot - vector(&[2.0, 0.0])).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.euclid_dist, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn kernel_of_hessian_is_normal() {
        let b = BoundaryShape::parabola(ParabolaSide::Below);
        for t in [-1.3, 0.0, 0.4, 2.0] {
            let y = vector(&[t, t * t]);
            let h = b.euclid_dist_hessian(&y).unwrap();
            let n = b.inward_normal(&y).unwrap();
            assert!((h * n).norm() < 1e-14);
        }
    }

    #[test]
    fn three_dimensional_sphere_frame() {
        let b = BoundaryShape::unit_sphere(3, Side::Exterior);
        let y = vector(&[0.0, 0.6, 0.8]);
        let f = b.frame_at(&y).unwrap();
        assert_eq!(f.tangent_frame.len(), 2);
        for t in &f.tangent_frame {
            assert!(t.dot(&f.normal).abs() < 1e-12);
            assert!((t.norm() - 1.0).abs() < 1e-12);
        }
        let s = b.sample_boundary(500, None).unwrap();
        assert!(s.iter().all(|p| (p.norm() - 1.0).abs() < 1e-12));
    }
}
