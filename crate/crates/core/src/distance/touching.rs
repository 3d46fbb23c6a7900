//! Touching-ball certificate: the scaled ball `K_x = x - ρ(x) K` lies in the
//! closure of `U`, and its contact points with `∂U` are the closest points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::DistanceResult;
use crate::boundary::{BoundaryShape, Membership};
use crate::polytope::DualPolytope;
use crate::{Error, Vector};

const PROBE_SEED: u64 = 0x70c4_b411;
const CONTACT_TOL: f64 = 1e-9;
const NORMAL_TOL: f64 = 1e-8;
const VERTEX_SHRINK: f64 = 1.0 - 1e-7;

/// Violations found by [`verify_touching_ball`].
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TouchingReport {
    pub probes: usize,
    /// Probes of the open ball `int K_x` lying outside `U`, among the
    /// vertices of `K_x` pulled slightly inwards and `probes` uniform samples.
    pub escapes: usize,
    /// Reported closest points with `γ(x - y) ≠ ρ`.
    pub off_ball: usize,
    /// Reported closest points not on `∂U`.
    pub off_boundary: usize,
    /// Closest points where `ν(y) ∉ N(K, (x - y)/ρ)`.
    pub normal_violations: usize,
    /// Closest points at a corner of `∂U`, where `ν` is undefined.
    pub normal_skipped: usize,
    pub worst_escape: f64,
}

impl TouchingReport {
    pub fn passed(&self) -> bool {
        self.escapes == 0 && self.off_ball == 0 && self.off_boundary == 0 && self.normal_violations == 0
    }
}

/// Checks `res` against the touching-ball characterisation at `x`. Points
/// outside `b` are checked against the complement of `b` when it exists.
pub fn verify_touching_ball(
    p: &DualPolytope,
    b: &BoundaryShape,
    x: &Vector,
    res: &DistanceResult,
    probe_count: usize,
) -> TouchingReport {
    let complement;
    let domain = match b.region_membership(x) {
        Ok(Membership::Outside) => match b.complement() {
            Some(c) => {
                complement = c;
                &complement
            }
            None => b,
        },
        _ => b,
    };
    let rho = res.value;
    let n = p.dim();
    let mut report = TouchingReport {
        probes: probe_count + p.vertices().len(),
        ..Default::default()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let probe = |k: &Vector, report: &mut TouchingReport| {
        let q = x - k * rho;
        if let Ok(Membership::Outside) = domain.region_membership(&q) {
            report.escapes += 1;
            let depth = domain.euclid_signed_distance(&q).map(|s| -s).unwrap_or(f64::NAN);
            report.worst_escape = report.worst_escape.max(depth);
        }
    };
    if rho > 0.0 {
        // the vertices of K_x reach furthest, so they are probed first
        for v in p.vertices() {
            probe(&(v * VERTEX_SHRINK), &mut report);
        }
        // uniform in K by rejection from its bounding box
        let radius = p.max_vertex_norm();
        let mut drawn = 0;
        while drawn < probe_count {
            let k = Vector::from_fn(n, |_, _| rng.gen_range(-radius..radius));
            if p.gauge_value(k.as_slice()) < 1.0 {
                drawn += 1;
                probe(&k, &mut report);
            }
        }
    }

    for y in &res.closest {
        let gap = (p.gauge_value((x - y).as_slice()) - rho).abs();
        if gap > CONTACT_TOL * (1.0 + rho) {
            report.off_ball += 1;
        }
        if domain.region_membership(y).ok() != Some(Membership::On) {
            report.off_boundary += 1;
            continue;
        }
        if rho <= 0.0 {
            continue;
        }
        match domain.inward_normal(y) {
            Ok(nu) => {
                let k = (x - y) / rho;
                // -ν ∈ N(K_x, y) is the same as ν ∈ N(K, k) since K_x = x - ρK
                let inside = p
                    .gauge(&k)
                    .map(|g| {
                        let gens: Vec<Vector> = g.active.iter().map(|&i| p.polar_vertices()[i].clone()).collect();
                        crate::polytope::cone_contains(&gens, &nu, NORMAL_TOL)
                    })
                    .unwrap_or(false);
                if !inside {
                    report.normal_violations += 1;
                }
            }
            Err(Error::CornerPoint) => report.normal_skipped += 1,
            Err(_) => report.normal_violations += 1,
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{ParabolaSide, Side};
    use crate::distance::{rho_parabola_maxnorm, rho_sphere_polytope};
    use crate::vector;

    #[test]
    fn parabola_ridge_point() {
        let p = DualPolytope::cube(2);
        let b = BoundaryShape::parabola(ParabolaSide::Above);
        let x = vector(&[0.0, 2.0]);
        let res = rho_parabola_maxnorm(&x).unwrap();
        assert_eq!(res.closest.len(), 2);
        let r = verify_touching_ball(&p, &b, &x, &res, 1000);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.normal_skipped, 0);
    }

    #[test]
    fn circle_corner_contact() {
        let p = DualPolytope::cube(2);
        let b = BoundaryShape::unit_sphere(2, Side::Interior);
        let x = vector(&[0.3, 0.1]);
        let res = rho_sphere_polytope(&p, &x).unwrap();
        assert!(verify_touching_ball(&p, &b, &x, &res, 1000).passed());
    }

    #[test]
    fn inflated_ball_escapes() {
        let p = DualPolytope::cube(2);
        let b = BoundaryShape::unit_sphere(2, Side::Interior);
        let x = vector(&[0.3, 0.1]);
        let mut res = rho_sphere_polytope(&p, &x).unwrap();
        res.value *= 1.1;
        let r = verify_touching_ball(&p, &b, &x, &res, 1000);
        assert!(r.escapes > 0);
        assert!(!r.passed());
    }

    #[test]
    fn exterior_points_use_the_complement() {
        let p = DualPolytope::cube(2);
        let b = BoundaryShape::unit_sphere(2, Side::Interior);
        let x = vector(&[2.0, 0.3]);
        let res = rho_sphere_polytope(&p, &x).unwrap();
        assert!(verify_touching_ball(&p, &b, &x, &res, 1000).passed());
    }
}
