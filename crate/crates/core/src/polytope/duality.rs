//! Randomised checks of the identities linking `γ`, `γ°`, their
//! subdifferentials and the normal cones of `K` and `K°`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{cone_contains, same_point_set, DualPolytope};
use crate::Vector;

/// Outcome of one family of checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityCheck {
    pub name: &'static str,
    pub count: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
    /// Soft checks are reported but never counted as failures.
    pub hard: bool,
}

impl DualityCheck {
    fn new(name: &'static str, tolerance: f64, hard: bool) -> Self {
        Self {
            name,
            count: 0,
            failures: 0,
            worst_residual: 0.0,
            tolerance,
            hard,
        }
    }

    fn record(&mut self, residual: f64) {
        self.count += 1;
        self.worst_residual = self.worst_residual.max(residual);
        if self.hard && !(residual <= self.tolerance) {
            self.failures += 1;
        }
    }

    fn record_bool(&mut self, ok: bool) {
        self.record(if ok { 0.0 } else { 1.0 });
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityReport {
    pub samples: usize,
    pub checks: Vec<DualityCheck>,
}

impl DualityReport {
    pub fn hard_failures(&self) -> usize {
        self.checks.iter().filter(|c| c.hard).map(|c| c.failures).sum()
    }

    pub fn total_checks(&self) -> usize {
        self.checks.iter().map(|c| c.count).sum()
    }

    pub fn check(&self, name: &str) -> Option<&DualityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    let scale = 10f64.powf(rng.gen_range(-2.0..1.0));
    Vector::from_fn(n, |_, _| scale * rng.gen_range(-1.0..1.0))
}

fn random_convex_weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Draws `sample_count` seeded random points and checks homogeneity,
/// subadditivity, the generalised Cauchy–Schwarz inequality, the max-ratio
/// formula for `γ°`, Euler's identity, `γ°(Dγ) = 1`, the subgradient
/// relation `x/γ(x) ∈ ∂γ°(Dγ(x))`, normal-cone reciprocity between `K` and
/// `K°`, uniqueness of the support maximiser inside vertex normal cones and
/// the bipolar round-trip.
pub fn check_duality_identities(p: &DualPolytope, sample_count: usize, seed: u64) -> DualityReport {
    let n = p.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pp = p.polar().polar();
    let polar = p.polar();
    const REL: f64 = 1e-12;
    let mut homog = DualityCheck::new("homogeneity", REL, true);
    let mut subadd = DualityCheck::new("subadditivity", REL, true);
    let mut cs = DualityCheck::new("cauchy_schwarz", REL, true);
    let mut ratio = DualityCheck::new("max_ratio_gap", f64::INFINITY, false);
    let mut euler = DualityCheck::new("euler_identity", REL, true);
    let mut unit = DualityCheck::new("polar_gauge_of_gradient", REL, true);
    let mut active = DualityCheck::new("active_set_duality", 1e-9, true);
    let mut subgrad = DualityCheck::new("subgradient_of_polar", 0.0, true);
    let mut recip = DualityCheck::new("normal_cone_reciprocity", 0.0, true);
    let mut vertex_cone = DualityCheck::new("unique_support_in_vertex_cone", 0.0, true);
    let mut bipolar = DualityCheck::new("bipolar_round_trip", REL, true);

    let mut ratio_pool: Vec<Vector> = Vec::new();
    for _ in 0..sample_count {
        let x = random_point(&mut rng, n);
        let y = random_point(&mut rng, n);
        let gx = p.gauge_value(x.as_slice());
        let gy = p.gauge_value(y.as_slice());
        let hy = p.support_value(y.as_slice());

        let mut worst = 0.0f64;
        for t in [0.5, 2.0, 10.0] {
            let xt = &x * t;
            let gt = p.gauge_value(xt.as_slice());
            let ht = p.support_value(xt.as_slice());
            let hx = p.support_value(x.as_slice());
            worst = worst.max((gt - t * gx).abs() / (1.0 + gt));
            worst = worst.max((ht - t * hx).abs() / (1.0 + ht));
        }
        homog.record(worst);

        let gs = p.gauge_value((&x + &y).as_slice());
        subadd.record(((gs - gx - gy) / (1.0 + gx + gy)).max(0.0));

        cs.record(((x.dot(&y) - gx * hy) / (1.0 + x.norm() * y.norm())).max(0.0));

        ratio_pool.push(x.clone());
        if ratio_pool.len() > 64 {
            ratio_pool.remove(0);
        }
        let best = ratio_pool
            .iter()
            .filter(|q| p.gauge_value(q.as_slice()) > 0.0)
            .map(|q| q.dot(&y) / p.gauge_value(q.as_slice()))
            .fold(f64::NEG_INFINITY, f64::max);
        if best.is_finite() {
            ratio.record((hy - best).max(0.0) / (1.0 + hy));
        }

        bipolar.record((pp.gauge_value(x.as_slice()) - gx).abs() / (1.0 + gx));

        let g = p.gauge(&x).expect("dimension matches");
        if g.value <= 0.0 {
            continue;
        }
        for &i in &g.active {
            let v = &p.polar_vertices()[i];
            let r1 = (x.dot(v) / g.value - 1.0).abs();
            let r2 = (p.support_value(v.as_slice()) - 1.0).abs();
            active.record(r1.max(r2));
        }
        let sub = p.gauge_subdifferential(&x).expect("dimension matches");
        if let Some(d) = &sub.gradient {
            euler.record((d.dot(&x) - gx).abs() / (1.0 + gx));
            unit.record((p.support_value(d.as_slice()) - 1.0).abs());
            // ∂γ°(d) is the face of K exposed by d: conv of its active vertices
            let s = p.support(d).expect("dimension matches");
            let lifted: Vec<Vector> = s.active.iter().map(|&j| lift(&p.vertices()[j])).collect();
            subgrad.record_bool(cone_contains(&lifted, &lift(&(&x / gx)), 1e-9));
        }

        // Reciprocity at the boundary point xb = x/γ(x): v ∈ N(K, xb) ⟺ xb ∈ N(K°, v)
        // for v on ∂K°, tested on one v from the cone and one generic v.
        let xb = &x / gx;
        let normal_k = p.normal_cone(&xb).expect("on the unit sphere of γ");
        let w = random_convex_weights(&mut rng, g.active.len());
        let inside: Vector = g
            .active
            .iter()
            .zip(&w)
            .map(|(&i, c)| &p.polar_vertices()[i] * *c)
            .fold(Vector::zeros(n), |acc, t| acc + t);
        let generic = random_point(&mut rng, n);
        for v in [inside, generic] {
            let hv = p.support_value(v.as_slice());
            if hv <= 0.0 {
                continue;
            }
            let v = v / hv;
            let normal_polar = polar.normal_cone(&v).expect("on the unit sphere of γ°");
            recip.record_bool(normal_k.contains(&v) == normal_polar.contains(&xb));
        }

        // Inside a full-dimensional vertex cone the support has a unique maximiser.
        let j = rng.gen_range(0..p.vertices().len());
        let z = &p.vertices()[j];
        let nc = p.normal_cone(z).expect("vertices lie on the unit sphere");
        if nc.cone_dim == n {
            let w = random_convex_weights(&mut rng, nc.generators.len());
            let v: Vector = nc
                .generators
                .iter()
                .zip(&w)
                .map(|(g, c)| g * *c)
                .fold(Vector::zeros(n), |acc, t| acc + t);
            vertex_cone.record_bool(p.support_gradient(&v).map(|d| d == *z).unwrap_or(false));
        }
    }
    bipolar.record_bool(
        same_point_set(pp.vertices(), p.vertices(), 1e-12)
            && same_point_set(pp.polar_vertices(), p.polar_vertices(), 1e-12),
    );

    DualityReport {
        samples: sample_count,
        checks: vec![
            homog, subadd, cs, ratio, euler, unit, active, subgrad, recip, vertex_cone, bipolar,
        ],
    }
}

/// `(x, 1)`, turning convex-hull membership into cone membership.
fn lift(x: &Vector) -> Vector {
    Vector::from_fn(x.len() + 1, |i, _| if i < x.len() { x[i] } else { 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;

    #[test]
    fn cube_passes_every_hard_check() {
        let r = check_duality_identities(&DualPolytope::cube(2), 2000, 7);
        assert_eq!(r.hard_failures(), 0, "{r:#?}");
        assert!(r.check("cauchy_schwarz").unwrap().worst_residual <= 1e-12);
        assert!(r.check("euler_identity").unwrap().count > 1000);
    }

    #[test]
    fn triangle_passes_every_hard_check() {
        let tri = DualPolytope::from_vertices(&[
            vector(&[1.0, 0.0]),
            vector(&[0.0, 1.0]),
            vector(&[-1.0, -1.0]),
        ])
        .unwrap();
        let r = check_duality_identities(&tri, 2000, 3);
        assert_eq!(r.hard_failures(), 0, "{r:#?}");
    }

    #[test]
    fn same_seed_same_report() {
        let p = DualPolytope::cube(3);
        assert_eq!(check_duality_identities(&p, 300, 11), check_duality_identities(&p, 300, 11));
    }
}
