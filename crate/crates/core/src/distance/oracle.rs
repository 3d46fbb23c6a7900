//! Brute-force evaluation of `ρ(x) = min_{y ∈ ∂U} γ(x - y)`.
//!
//! The boundary is split into parametrised pieces. A query evaluates the
//! gauge at every sample, then refines each sampled local minimum whose
//! value is within `(1 + 1e-3)` of the coarse minimum by golden-section
//! search between its neighbours, down to a parameter step of `1e-12`.

use std::f64::consts::{PI, TAU};

use super::{active_face_dim, sort_points, Branch, DistanceResult, Method, RegionTag};
use crate::boundary::{BoundaryShape, Membership};
use crate::polytope::DualPolytope;
use crate::tol;
use crate::{vector, Error, Result, Vector};

/// Sample count used when a caller does not choose one.
pub const DEFAULT_BUDGET: usize = 10_000;

const NEAR_OPTIMAL: f64 = 1e-3;
const PARAM_TOL: f64 = 1e-12;

/// One parametrised part of `∂U`.
#[derive(Clone, Debug)]
enum Piece {
    /// `center + radius (cos θ, sin θ)`, `θ ∈ [0, 2π)`; `disk` is the index
    /// of the disk in a union, whose other disks cover parts of the circle.
    Circle { center: Vector, radius: f64, disk: Option<usize> },
    /// `a + s (b - a)`, `s ∈ [0, 1]`.
    Segment { a: Vector, b: Vector },
    /// `(t, t²)`; the parameter window is chosen per query.
    Parabola,
    /// `center + radius · u(θ, φ)` on the 2-sphere.
    Sphere3 { center: Vector, radius: f64 },
    /// Finitely many points (the 0-sphere).
    Points(Vec<Vector>),
}

#[derive(Clone, Debug)]
struct Sampled {
    piece: Piece,
    params: Vec<f64>,
    points: Vec<Vec<f64>>,
}

/// A distance oracle for a fixed polytope, boundary and sample budget. The
/// query-independent samples are computed once.
#[derive(Clone, Debug)]
pub struct DistanceOracle {
    polytope: DualPolytope,
    boundary: BoundaryShape,
    budget: usize,
    sampled: Vec<Sampled>,
    /// Grid size of the 2-sphere sampling (`nθ`, `nφ = 2 nθ`).
    sphere_grid: usize,
    max_vertex_norm: f64,
}

#[derive(Clone, Debug)]
struct Candidate {
    value: f64,
    point: Vector,
}

fn golden_section(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, start: (f64, f64)) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = start;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for (t, v) in [(c, fc), (d, fd)] {
        if v < best.1 {
            best = (t, v);
        }
    }
    while (b - a).abs() > PARAM_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    best
}

impl DistanceOracle {
    pub fn new(polytope: DualPolytope, boundary: BoundaryShape, budget: usize) -> Result<Self> {
        if budget < 100 {
            return Err(Error::BudgetTooSmall(budget));
        }
        if polytope.dim() != boundary.dim() {
            return Err(Error::DimensionMismatch {
                expected: polytope.dim(),
                found: boundary.dim(),
            });
        }
        let pieces = pieces_of(&boundary)?;
        let lengths: Vec<f64> = pieces
            .iter()
            .map(|p| match p {
                Piece::Circle { radius, .. } => TAU * radius,
                Piece::Segment { a, b } => (b - a).norm(),
                _ => 1.0,
            })
            .collect();
        let total: f64 = lengths.iter().sum();
        let sphere_grid = ((budget as f64 / 2.0).sqrt().floor() as usize).max(4);
        let sampled = pieces
            .into_iter()
            .zip(&lengths)
            .map(|(piece, len)| {
                let count = ((budget as f64 * len / total).round() as usize).max(8);
                let params: Vec<f64> = match &piece {
                    Piece::Circle { .. } => (0..count).map(|k| TAU * k as f64 / count as f64).collect(),
                    Piece::Segment { .. } => (0..count).map(|k| k as f64 / (count - 1) as f64).collect(),
                    Piece::Points(pts) => (0..pts.len()).map(|k| k as f64).collect(),
                    Piece::Parabola | Piece::Sphere3 { .. } => Vec::new(),
                };
                let points = params.iter().map(|&t| eval_piece(&piece, t)).collect();
                Sampled { piece, params, points }
            })
            .collect();
        Ok(Self {
            max_vertex_norm: polytope.max_vertex_norm(),
            polytope,
            boundary,
            budget,
            sampled,
            sphere_grid,
        })
    }

    pub fn polytope(&self) -> &DualPolytope {
        &self.polytope
    }

    pub fn boundary(&self) -> &BoundaryShape {
        &self.boundary
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn gauge_to(&self, x: &[f64], y: &[f64]) -> f64 {
        let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.polytope.gauge_value(&d)
    }

    fn covered(&self, piece: &Piece, y: &[f64]) -> bool {
        match piece {
            Piece::Circle { disk: Some(k), .. } => self.boundary.covered_by_other_disk(y, *k),
            _ => false,
        }
    }

    fn objective(&self, piece: &Piece, x: &[f64], t: f64) -> f64 {
        let y = eval_piece(piece, t);
        if self.covered(piece, &y) {
            return f64::INFINITY;
        }
        self.gauge_to(x, &y)
    }

    /// `ρ(x)` with every closest point found.
    pub fn query(&self, x: &Vector) -> Result<DistanceResult> {
        if x.len() != self.polytope.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.polytope.dim(),
                found: x.len(),
            });
        }
        if self.boundary.region_membership(x)? == Membership::On {
            return Ok(DistanceResult::on_boundary(x, Method::Oracle));
        }
        let xs = x.as_slice();
        let mut coarse: Vec<(usize, Vec<f64>, Vec<f64>)> = Vec::with_capacity(self.sampled.len());
        let mut global = f64::INFINITY;
        for (k, s) in self.sampled.iter().enumerate() {
            let (params, values) = match &s.piece {
                Piece::Parabola => {
                    let params = self.parabola_params(xs);
                    let values: Vec<f64> = params.iter().map(|&t| self.objective(&s.piece, xs, t)).collect();
                    (params, values)
                }
                Piece::Sphere3 { .. } => (Vec::new(), Vec::new()),
                _ => {
                    let values = s
                        .points
                        .iter()
                        .map(|y| if self.covered(&s.piece, y) { f64::INFINITY } else { self.gauge_to(xs, y) })
                        .collect();
                    (s.params.clone(), values)
                }
            };
            global = values.iter().cloned().fold(global, f64::min);
            coarse.push((k, params, values));
        }
        let mut candidates: Vec<Candidate> = Vec::new();
        for (k, params, values) in &coarse {
            let piece = &self.sampled[*k].piece;
            match piece {
                Piece::Sphere3 { center, radius } => {
                    candidates.extend(self.sphere3_candidates(xs, center, *radius, &mut global));
                }
                Piece::Points(pts) => {
                    for (i, v) in values.iter().enumerate() {
                        candidates.push(Candidate {
                            value: *v,
                            point: pts[i].clone(),
                        });
                    }
                }
                _ => {
                    let periodic = matches!(piece, Piece::Circle { .. });
                    candidates.extend(self.refine_1d(piece, xs, params, values, periodic, global));
                }
            }
        }
        let best = candidates.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
        if !best.is_finite() {
            return Err(Error::InvalidInput("no reachable boundary point".into()));
        }
        let keep = best + tol::MULTI_ABS + tol::MULTI_REL * best;
        candidates.retain(|c| c.value <= keep);
        candidates.sort_by(|a, b| a.value.total_cmp(&b.value));
        let mut closest: Vec<Vector> = Vec::new();
        for c in candidates {
            if !closest.iter().any(|q| (q - &c.point).norm() <= tol::CLOSEST_DEDUP) {
                closest.push(c.point);
            }
        }
        sort_points(&mut closest);
        let mut region = RegionTag::new(Branch::Unclassified);
        region.active_face_dim = active_face_dim(&self.polytope, x, &closest[0], best);
        Ok(DistanceResult {
            value: best,
            closest,
            region,
            method: Method::Oracle,
        })
    }

    /// Window in `t` containing every parabola point within the gauge
    /// distance of the point straight above or below `x`.
    fn parabola_params(&self, x: &[f64]) -> Vec<f64> {
        let bound = self.gauge_to(x, &[x[0], x[0] * x[0]]);
        let half = self.max_vertex_norm * bound * (1.0 + 1e-9) + 1e-12;
        let n = self.budget;
        (0..n)
            .map(|k| x[0] - half + 2.0 * half * k as f64 / (n - 1) as f64)
            .collect()
    }

    fn refine_1d(
        &self,
        piece: &Piece,
        x: &[f64],
        params: &[f64],
        values: &[f64],
        periodic: bool,
        global: f64,
    ) -> Vec<Candidate> {
        let n = values.len();
        let threshold = global * (1.0 + NEAR_OPTIMAL) + 1e-12;
        let mut out = Vec::new();
        for i in 0..n {
            let v = values[i];
            if !(v <= threshold) {
                continue;
            }
            let (lo, hi) = if periodic {
                let step = TAU / n as f64;
                (
                    (values[(i + n - 1) % n], params[i] - step),
                    (values[(i + 1) % n], params[i] + step),
                )
            } else {
                (
                    if i > 0 { (values[i - 1], params[i - 1]) } else { (f64::INFINITY, params[i]) },
                    if i + 1 < n { (values[i + 1], params[i + 1]) } else { (f64::INFINITY, params[i]) },
                )
            };
            if v > lo.0 || v > hi.0 {
                continue;
            }
            let (t, value) = golden_section(|t| self.objective(piece, x, t), lo.1, hi.1, (params[i], v));
            out.push(Candidate {
                value,
                point: Vector::from_vec(eval_piece(piece, t)),
            });
        }
        out
    }

    fn sphere3_candidates(&self, x: &[f64], center: &Vector, radius: f64, global: &mut f64) -> Vec<Candidate> {
        let nt = self.sphere_grid;
        let np = 2 * nt;
        let unit = |theta: f64, phi: f64| [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        let point = |u: [f64; 3]| [center[0] + radius * u[0], center[1] + radius * u[1], center[2] + radius * u[2]];
        let mut grid = vec![0.0; nt * np];
        for i in 0..nt {
            let theta = PI * (i as f64 + 0.5) / nt as f64;
            for j in 0..np {
                let phi = TAU * j as f64 / np as f64;
                grid[i * np + j] = self.gauge_to(x, &point(unit(theta, phi)));
            }
        }
        let coarse = grid.iter().cloned().fold(f64::INFINITY, f64::min);
        *global = global.min(coarse);
        let threshold = coarse * (1.0 + NEAR_OPTIMAL) + 1e-12;
        let half = TAU / nt as f64;
        let mut out = Vec::new();
        for i in 0..nt {
            for j in 0..np {
                let v = grid[i * np + j];
                if v > threshold {
                    continue;
                }
                let mut is_min = true;
                for di in [-1i64, 0, 1] {
                    for dj in [-1i64, 0, 1] {
                        let ii = i as i64 + di;
                        if (di == 0 && dj == 0) || ii < 0 || ii >= nt as i64 {
                            continue;
                        }
                        let jj = (j as i64 + dj).rem_euclid(np as i64) as usize;
                        if grid[ii as usize * np + jj] < v {
                            is_min = false;
                        }
                    }
                }
                if !is_min {
                    continue;
                }
                let theta = PI * (i as f64 + 0.5) / nt as f64;
                let phi = TAU * j as f64 / np as f64;
                let c = vector(&unit(theta, phi));
                let (e1, e2) = tangent_pair(&c);
                let on_sphere = |a: f64, b: f64| {
                    let u = (&c + &e1 * a + &e2 * b).normalize();
                    [center[0] + radius * u[0], center[1] + radius * u[1], center[2] + radius * u[2]]
                };
                let inner = |a: f64| golden_section(|b| self.gauge_to(x, &on_sphere(a, b)), -half, half, (0.0, f64::INFINITY));
                let (a, _) = golden_section(|a| inner(a).1, -half, half, (0.0, v));
                let (b, value) = inner(a);
                let (point, value) = if value <= v {
                    (Vector::from_row_slice(&on_sphere(a, b)), value)
                } else {
                    (Vector::from_row_slice(&on_sphere(0.0, 0.0)), v)
                };
                out.push(Candidate { value, point });
            }
        }
        out
    }
}

fn tangent_pair(c: &Vector) -> (Vector, Vector) {
    let helper = if c[0].abs() < 0.9 { vector(&[1.0, 0.0, 0.0]) } else { vector(&[0.0, 1.0, 0.0]) };
    let e1 = (&helper - c * c.dot(&helper)).normalize();
    let e2 = vector(&[
        c[1] * e1[2] - c[2] * e1[1],
        c[2] * e1[0] - c[0] * e1[2],
        c[0] * e1[1] - c[1] * e1[0],
    ]);
    (e1, e2)
}

fn eval_piece(piece: &Piece, t: f64) -> Vec<f64> {
    match piece {
        Piece::Circle { center, radius, .. } => vec![center[0] + radius * t.cos(), center[1] + radius * t.sin()],
        Piece::Segment { a, b } => a.iter().zip(b.iter()).map(|(p, q)| p + t * (q - p)).collect(),
        Piece::Parabola => vec![t, t * t],
        Piece::Points(pts) => pts[t as usize].iter().cloned().collect(),
        Piece::Sphere3 { .. } => unreachable!("the 2-sphere is sampled on its own grid"),
    }
}

fn pieces_of(b: &BoundaryShape) -> Result<Vec<Piece>> {
    Ok(match b {
        BoundaryShape::Sphere { center, radius, .. } => match center.len() {
            1 => vec![Piece::Points(vec![center.add_scalar(*radius), center.add_scalar(-radius)])],
            2 => vec![Piece::Circle {
                center: center.clone(),
                radius: *radius,
                disk: None,
            }],
            3 => vec![Piece::Sphere3 {
                center: center.clone(),
                radius: *radius,
            }],
            d => {
                return Err(Error::UnsupportedDimension {
                    dim: d,
                    reason: "the oracle samples spheres in dimensions 1 to 3",
                })
            }
        },
        BoundaryShape::Parabola { .. } => vec![Piece::Parabola],
        BoundaryShape::Polygon { vertices, .. } => (0..vertices.len())
            .map(|k| Piece::Segment {
                a: vertices[k].clone(),
                b: vertices[(k + 1) % vertices.len()].clone(),
            })
            .collect(),
        BoundaryShape::DiskUnionExterior { disks } => disks
            .iter()
            .enumerate()
            .map(|(k, (c, r))| Piece::Circle {
                center: c.clone(),
                radius: *r,
                disk: Some(k),
            })
            .collect(),
    })
}

/// One-shot oracle query.
pub fn rho_oracle(p: &DualPolytope, b: &BoundaryShape, x: &Vector, budget: usize) -> Result<DistanceResult> {
    DistanceOracle::new(p.clone(), b.clone(), budget)?.query(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::Side;
    use approx::assert_abs_diff_eq;

    fn circle_cube() -> DistanceOracle {
        DistanceOracle::new(DualPolytope::cube(2), BoundaryShape::unit_sphere(2, Side::Interior), 10_000).unwrap()
    }

    #[test]
    fn budget_floor() {
        assert_eq!(
            DistanceOracle::new(DualPolytope::cube(2), BoundaryShape::unit_sphere(2, Side::Interior), 99).unwrap_err(),
            Error::BudgetTooSmall(99)
        );
    }

    #[test]
    fn corner_contact_inside_circle() {
        let r = circle_cube().query(&vector(&[0.3, 0.1])).unwrap();
        assert_abs_diff_eq!(r.value, 0.5, epsilon = 1e-9);
        assert_eq!(r.closest.len(), 1);
        assert_abs_diff_eq!((&r.closest[0] - vector(&[0.8, 0.6])).norm(), 0.0, epsilon = 1e-6);
    }

    #[test]
    fn symmetric_double_contact() {
        let r = circle_cube().query(&vector(&[0.5, 0.0])).unwrap();
        let rho = (7f64.sqrt() - 1.0) / 4.0;
        assert_abs_diff_eq!(r.value, rho, epsilon = 1e-9);
        assert_eq!(r.closest.len(), 2);
        for sign in [-1.0, 1.0] {
            let expected = vector(&[0.5 + rho, sign * rho]);
            assert!(r.closest.iter().any(|y| (y - &expected).norm() < 1e-6));
        }
    }

    #[test]
    fn boundary_points_are_their_own_closest_point() {
        let y = vector(&[0.6, 0.8]);
        let r = circle_cube().query(&y).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.closest, vec![y]);
    }

    #[test]
    fn parabola_ridge_has_two_closest_points() {
        let o = DistanceOracle::new(DualPolytope::cube(2), BoundaryShape::parabola(crate::boundary::ParabolaSide::Above), 10_000)
            .unwrap();
        let r = o.query(&vector(&[0.0, 2.0])).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-9);
        assert_eq!(r.closest.len(), 2);
    }

    #[test]
    fn three_dimensional_sphere() {
        let o = DistanceOracle::new(DualPolytope::cube(3), BoundaryShape::unit_sphere(3, Side::Exterior), 10_000).unwrap();
        let r = o.query(&vector(&[0.0, 1.2, 1.3])).unwrap();
        assert_abs_diff_eq!(r.value, 0.5 * (2.5 - 1.99f64.sqrt()), epsilon = 5e-7);
    }

    #[test]
    fn polygon_boundary() {
        // square of half-width 2 seen from inside with the max norm: 2 - |x|_∞
        let sq = BoundaryShape::polygon(
            vec![vector(&[-2.0, -2.0]), vector(&[2.0, -2.0]), vector(&[2.0, 2.0]), vector(&[-2.0, 2.0])],
            Side::Interior,
        )
        .unwrap();
        let o = DistanceOracle::new(DualPolytope::cross_polytope(2), sq, 1000).unwrap();
        let r = o.query(&vector(&[0.5, 0.25])).unwrap();
        // |·|_1 distance to the nearest side x = 2
        assert_abs_diff_eq!(r.value, 1.5, epsilon = 1e-9);
    }
}
