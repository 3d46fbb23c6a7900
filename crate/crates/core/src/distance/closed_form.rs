//! Closed-form distance fields of the example setups.
//!
//! All four use a polytope gauge against a curved boundary:
//!
//! - the max norm and the parabola `x₂ = x₁²`, from both sides;
//! - a polytope with equal vertex norms `r` and the unit sphere;
//! - the max norm and the unit sphere in `R^n`;
//! - the max norm in the exterior of two touching unit disks.

use super::{active_face_dim, sort_points, Branch, DistanceOracle, DistanceResult, Method, RegionTag};
use crate::boundary::{BoundaryShape, Membership, Side};
use crate::polytope::DualPolytope;
use crate::tol::{self, tied};
use crate::{vector, Error, Result, Vector};

fn check_dim(x: &Vector, n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    Ok(())
}

fn finish(
    p: &DualPolytope,
    x: &Vector,
    value: f64,
    mut closest: Vec<Vector>,
    mut region: RegionTag,
) -> DistanceResult {
    sort_points(&mut closest);
    closest.dedup_by(|a, b| (&*a - &*b).norm() <= tol::CLOSEST_DEDUP);
    region.active_face_dim = active_face_dim(p, x, &closest[0], value);
    DistanceResult {
        value,
        closest,
        region,
        method: Method::ClosedForm,
    }
}

/// Max-norm distance to the parabola `x₂ = x₁²`.
///
/// With `s = |x₁|`:
///
/// - above the curve: `√(s + x₂ + 1/4) - s - 1/2`, touching at a lower
///   corner of the square, at both lower corners when `x₁ = 0`;
/// - in the cone `s <= -x₂`: `-x₂`, touching at the origin;
/// - elsewhere below: `s + 1/2 - √(s + x₂ + 1/4)`, touching at an upper
///   corner.
pub fn rho_parabola_maxnorm(x: &Vector) -> Result<DistanceResult> {
    check_dim(x, 2)?;
    let cube = DualPolytope::cube(2);
    let (a, b) = (x[0], x[1]);
    let s = a.abs();
    if (b - a * a).abs() <= tol::ON_BOUNDARY {
        return Ok(DistanceResult::on_boundary(x, Method::ClosedForm));
    }
    let sign = if a >= 0.0 { 1.0 } else { -1.0 };
    if b > a * a {
        let rho = (s + b + 0.25).sqrt() - s - 0.5;
        let closest = if a.abs() <= 1e-12 * (1.0 + x.norm()) {
            vec![vector(&[-rho, b - rho]), vector(&[rho, b - rho])]
        } else {
            vec![vector(&[a + sign * rho, b - rho])]
        };
        return Ok(finish(&cube, x, rho, closest, RegionTag::new(Branch::AboveParabola)));
    }
    let on_edge = tied(s, -b, x.norm());
    if s <= -b {
        let mut tag = RegionTag::new(if on_edge { Branch::BelowParabola } else { Branch::FlatCone });
        tag.boundary_of_regions = on_edge;
        return Ok(finish(&cube, x, -b, vec![vector(&[0.0, 0.0])], tag));
    }
    let rho = s + 0.5 - (s + b + 0.25).sqrt();
    let mut tag = RegionTag::new(Branch::BelowParabola);
    tag.boundary_of_regions = on_edge;
    Ok(finish(&cube, x, rho, vec![vector(&[a - sign * rho, b + rho])], tag))
}

/// Coordinates of `x` with `|x_j| <= ρ` and `ρ` itself, for `|x| > 1` and the
/// max norm against the unit sphere.
///
/// `J` starts empty. For a given `J` the distance solves
/// `Σ_{i∉J} (|x_i| - ρ)² = 1`, whose smaller root is
/// `(|x̂|₁ - √(|x̂|₁² + m - m|x̂|²)) / m` on the `m` remaining coordinates.
/// While the root is missing or some remaining `|x_i|` is at most the root,
/// the smallest remaining coordinate joins `J`. Adding one coordinate at a
/// time keeps `J` inside the true index set, so the scan stops exactly there.
pub fn ball_exterior_scan(x: &[f64]) -> Result<(f64, Vec<usize>)> {
    let n = x.len();
    let mut in_j = vec![false; n];
    loop {
        let rest: Vec<usize> = (0..n).filter(|&i| !in_j[i]).collect();
        let m = rest.len();
        if m == 0 {
            return Err(Error::EmptyComplement);
        }
        let s1: f64 = rest.iter().map(|&i| x[i].abs()).sum();
        let s2: f64 = rest.iter().map(|&i| x[i] * x[i]).sum();
        let disc = s1 * s1 + m as f64 * (1.0 - s2);
        let smallest = *rest
            .iter()
            .min_by(|&&i, &&k| x[i].abs().total_cmp(&x[k].abs()))
            .expect("m > 0");
        if disc < 0.0 {
            in_j[smallest] = true;
            continue;
        }
        let t = (s1 - disc.sqrt()) / m as f64;
        if x[smallest].abs() <= t {
            in_j[smallest] = true;
            continue;
        }
        let j: Vec<usize> = (0..n).filter(|&i| in_j[i]).collect();
        debug_assert!(j.iter().all(|&k| x[k].abs() <= t * (1.0 + 1e-12) + 1e-15));
        return Ok((t, j));
    }
}

/// Max-norm distance to the unit sphere in `R^n`.
///
/// Inside: `(-|x|₁ + √(|x|₁² + n - n|x|²)) / n`, touching at the corners
/// `x + ρ sgn(x)` (both signs where `x_i = 0`). Outside: the coordinates in
/// `J = {j : |x_j| <= ρ}` are dropped and the exterior formula is applied to
/// the projection `x̂`; the closest point is `x_i - ρ sgn(x_i)` off `J` and
/// `0` on `J`.
pub fn rho_ball_maxnorm(x: &Vector, n: usize) -> Result<DistanceResult> {
    check_dim(x, n)?;
    let cube = DualPolytope::cube(n);
    let norm = x.norm();
    if (norm - 1.0).abs() <= tol::ON_BOUNDARY {
        return Ok(DistanceResult::on_boundary(x, Method::ClosedForm));
    }
    let near_sphere = tied(norm, 1.0, 1.0);
    if norm < 1.0 {
        let l1 = x.lp_norm(1);
        let nf = n as f64;
        let rho = (-l1 + (l1 * l1 + nf - nf * norm * norm).sqrt()) / nf;
        let zero_tol = 1e-12 * (1.0 + norm);
        let zeros: Vec<usize> = (0..n).filter(|&i| x[i].abs() <= zero_tol).collect();
        let mut closest = Vec::with_capacity(1 << zeros.len());
        for mask in 0..(1usize << zeros.len()) {
            let mut y = x.clone();
            for i in 0..n {
                let s = match zeros.iter().position(|&k| k == i) {
                    Some(bit) => {
                        if mask >> bit & 1 == 1 {
                            -1.0
                        } else {
                            1.0
                        }
                    }
                    None => x[i].signum(),
                };
                y[i] += rho * s;
            }
            closest.push(y);
        }
        let mut tag = RegionTag::new(Branch::InsideBall);
        tag.boundary_of_regions = near_sphere;
        return Ok(finish(&cube, x, rho, closest, tag));
    }
    let (rho, j) = ball_exterior_scan(x.as_slice())?;
    let y = Vector::from_fn(n, |i, _| if j.contains(&i) { 0.0 } else { x[i] - x[i].signum() * rho });
    let tag_for = |j: Vec<usize>| {
        let mut tag = RegionTag::new(if j.is_empty() {
            Branch::VertexBranch
        } else {
            Branch::SingularCone { polar_vertex: None }
        });
        tag.j = Some(j);
        tag
    };
    let strict: Vec<usize> = (0..n).filter(|&i| x[i].abs() < rho && !tied(x[i].abs(), rho, rho)).collect();
    let loose: Vec<usize> = (0..n).filter(|&i| x[i].abs() <= rho || tied(x[i].abs(), rho, rho)).collect();
    let mut tag = if strict == loose {
        tag_for(j)
    } else {
        let (a, b) = (tag_for(strict), tag_for(loose));
        let mut t = if a.label() <= b.label() { a } else { b };
        t.boundary_of_regions = true;
        t
    };
    tag.boundary_of_regions |= near_sphere;
    Ok(finish(&cube, x, rho, vec![y], tag))
}

/// Distance to the unit sphere for a polytope whose vertices all have norm
/// `r`.
///
/// Inside the ball the touching body meets the sphere at vertices:
/// `ρ = (-h(-x) + √(h(-x)² + r² - r²|x|²)) / r²` with `h` the support
/// function. Outside, in the plane, each polar vertex `w` gives the
/// candidate `y = w/|w|`, accepted when `x - y ∈ N(K°, w)`, with
/// `ρ = γ(x - y)`; if no candidate is accepted the vertex branch
/// `ρ = (h(x) - √(h(x)² + r² - r²|x|²)) / r²` applies, which needs
/// `h(x)² + r² >= r²|x|²`. In higher dimensions the cube is delegated to
/// [`rho_ball_maxnorm`] and other exterior points to the oracle.
pub fn rho_sphere_polytope(p: &DualPolytope, x: &Vector) -> Result<DistanceResult> {
    check_dim(x, p.dim())?;
    let r = p.circumradius().ok_or(Error::NotInscribed)?;
    let n = p.dim();
    let norm = x.norm();
    if (norm - 1.0).abs() <= tol::ON_BOUNDARY {
        return Ok(DistanceResult::on_boundary(x, Method::ClosedForm));
    }
    let near_sphere = tied(norm, 1.0, 1.0);
    let r2 = r * r;
    if norm < 1.0 {
        let h = p.support(&-x)?;
        let rho = (-h.value + (h.value * h.value + r2 - r2 * norm * norm).sqrt()) / r2;
        let closest = h.active.iter().map(|&j| x - &p.vertices()[j] * rho).collect();
        let mut tag = RegionTag::new(Branch::InsideBall);
        tag.boundary_of_regions = near_sphere;
        return Ok(finish(p, x, rho, closest, tag));
    }
    if n >= 3 {
        if p.is_unit_cube() {
            return rho_ball_maxnorm(x, n);
        }
        let b = BoundaryShape::unit_sphere(n, Side::Exterior);
        return DistanceOracle::new(p.clone(), b, super::DEFAULT_BUDGET)?.query(x);
    }
    let mut candidates: Vec<(f64, usize, Vector)> = Vec::new();
    let mut borderline: Vec<usize> = Vec::new();
    if n == 2 {
        for (wi, w) in p.polar_vertices().iter().enumerate() {
            let y = w / w.norm();
            let d = x - &y;
            let margin = polar_cone_margin(p, w, &d);
            if tied(margin, 0.0, 0.0) {
                borderline.push(wi);
            }
            if margin >= -tol::REGION_TIE_REL {
                candidates.push((p.gauge_value(d.as_slice()), wi, y));
            }
        }
    }
    let (rho, closest, branch) = match candidates.iter().min_by(|a, b| a.0.total_cmp(&b.0)) {
        Some((rho, wi, y)) => (*rho, vec![y.clone()], Branch::SingularCone { polar_vertex: Some(*wi) }),
        None => {
            let h = p.support(x)?;
            let disc = h.value * h.value + r2 - r2 * norm * norm;
            if disc < -1e-12 * (1.0 + h.value * h.value) {
                return Err(Error::InvalidInput(format!(
                    "vertex branch without a real root: h(x)² + r² - r²|x|² = {disc}"
                )));
            }
            let rho = (h.value - disc.max(0.0).sqrt()) / r2;
            let closest = h.active.iter().map(|&j| x - &p.vertices()[j] * rho).collect();
            (rho, closest, Branch::VertexBranch)
        }
    };
    let mut tag = RegionTag::new(branch);
    if !borderline.is_empty() {
        // on a cone boundary the tied labels compete; the smallest wins
        let mut options = vec![tag.clone()];
        options.push(RegionTag::new(Branch::VertexBranch));
        options.extend(borderline.iter().map(|&wi| RegionTag::new(Branch::SingularCone { polar_vertex: Some(wi) })));
        tag = options.into_iter().min_by_key(|t| t.label()).expect("nonempty");
        tag.boundary_of_regions = true;
    }
    tag.boundary_of_regions |= near_sphere;
    Ok(finish(p, x, rho, closest, tag))
}

/// Signed distance of `d` to the boundary of `N(K°, w)` in the plane,
/// relative to `|d|`: nonnegative exactly when `d` lies in the cone spanned
/// by the vertices of `K` on the edge `{<z, w> = 1}`.
fn polar_cone_margin(p: &DualPolytope, w: &Vector, d: &Vector) -> f64 {
    let s = p.support(w).expect("dimension checked");
    let gens: Vec<&Vector> = s.active.iter().map(|&j| &p.vertices()[j]).collect();
    let dn = d.norm();
    if dn == 0.0 {
        return 0.0;
    }
    let unit = d / dn;
    match gens.as_slice() {
        [g] => {
            let gu = g.normalize();
            let cross = gu[0] * unit[1] - gu[1] * unit[0];
            if gu.dot(&unit) > 0.0 {
                -cross.abs()
            } else {
                -1.0
            }
        }
        [g0, g1, ..] => {
            let (a, b) = (g0.normalize(), g1.normalize());
            let det = a[0] * b[1] - a[1] * b[0];
            let l0 = (unit[0] * b[1] - unit[1] * b[0]) / det;
            let l1 = (a[0] * unit[1] - a[1] * unit[0]) / det;
            l0.min(l1)
        }
        [] => -1.0,
    }
}

/// Max-norm distance in the exterior of the unit disks at `(±1, 0)`.
///
/// Outside both disks the distance to `∂U` is the smaller of the distances
/// to the two disks, each a translate of [`rho_ball_maxnorm`]; when the two
/// agree both touching points are closest. In the cone
/// `|x₁| <= |x₂| - 2` the bottom (or top) side of the touching square spans
/// both disks and `ρ = |x₂| - 1`.
pub fn rho_two_disks_maxnorm(x: &Vector) -> Result<DistanceResult> {
    check_dim(x, 2)?;
    let b = BoundaryShape::two_unit_disks();
    match b.region_membership(x)? {
        Membership::Outside => return Err(Error::OutsideDomain),
        Membership::On => return Ok(DistanceResult::on_boundary(x, Method::ClosedForm)),
        Membership::Inside => {}
    }
    let cube = DualPolytope::cube(2);
    let centers = [vector(&[-1.0, 0.0]), vector(&[1.0, 0.0])];
    let per_disk: Vec<DistanceResult> = centers
        .iter()
        .map(|c| rho_ball_maxnorm(&(x - c), 2))
        .collect::<Result<_>>()?;
    let (r0, r1) = (per_disk[0].value, per_disk[1].value);
    let two = tied(r0, r1, r0.max(r1));
    let winner = if r1 < r0 { 1 } else { 0 };
    let value = if two { 0.5 * (r0 + r1) } else { per_disk[winner].value };
    let mut closest: Vec<Vector> = Vec::new();
    for (k, res) in per_disk.iter().enumerate() {
        if two || k == winner {
            closest.extend(res.closest.iter().map(|y| y + &centers[k]));
        }
    }
    let dark_edge = x[1].abs() >= 2.0 && tied(x[0].abs(), x[1].abs() - 2.0, x.norm());
    let mut tag = RegionTag::new(if two && !dark_edge {
        Branch::TwoClosest
    } else {
        Branch::OneClosest
    });
    tag.j = per_disk[winner].region.j.clone();
    tag.boundary_of_regions = dark_edge;
    Ok(finish(&cube, x, value, closest, tag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Max-norm distance from `x` to the unit sphere by solving
    /// `Σ max(|x_i| - ρ, 0)² = 1` with bisection (outside only).
    fn exterior_by_bisection(x: &[f64]) -> f64 {
        let f = |r: f64| x.iter().map(|c| (c.abs() - r).max(0.0).powi(2)).sum::<f64>() - 1.0;
        let (mut lo, mut hi) = (0.0, x.iter().map(|c| c.abs()).fold(0.0, f64::max));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn parabola_examples() {
        let r = rho_parabola_maxnorm(&vector(&[0.0, 2.0])).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-15);
        assert_eq!(r.closest, vec![vector(&[-1.0, 1.0]), vector(&[1.0, 1.0])]);
        let r = rho_parabola_maxnorm(&vector(&[0.0, -1.0])).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.closest, vec![vector(&[0.0, 0.0])]);
        assert_eq!(r.region.branch, Branch::FlatCone);
        let r = rho_parabola_maxnorm(&vector(&[2.0, 0.0])).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-15);
        assert_eq!(r.closest, vec![vector(&[1.0, 1.0])]);
        assert_eq!(rho_parabola_maxnorm(&vector(&[1.5, 2.25])).unwrap().value, 0.0);
    }

    #[test]
    fn parabola_closest_points_lie_on_curve_at_distance() {
        let cube = DualPolytope::cube(2);
        for &(a, b) in &[(0.3, 2.0), (-1.2, 0.4), (0.7, -2.0), (-1.9, -0.5), (0.0, 0.5)] {
            let x = vector(&[a, b]);
            let r = rho_parabola_maxnorm(&x).unwrap();
            for y in &r.closest {
                assert_abs_diff_eq!(y[1], y[0] * y[0], epsilon = 1e-12);
                assert_abs_diff_eq!(cube.gauge_value((&x - y).as_slice()), r.value, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn ball_examples() {
        let r = rho_ball_maxnorm(&vector(&[2.0, 0.2]), 2).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-15);
        assert_eq!(r.region.j, Some(vec![1]));
        let r = rho_ball_maxnorm(&vector(&[1.0, 1.0]), 2).unwrap();
        assert_abs_diff_eq!(r.value, 1.0 - 0.5f64.sqrt(), epsilon = 1e-15);
        assert_eq!(r.region.j, Some(vec![]));
        assert_eq!(r.region.branch, Branch::VertexBranch);
        let r = rho_ball_maxnorm(&vector(&[0.0, 1.2, 1.3]), 3).unwrap();
        assert_abs_diff_eq!(r.value, 0.5 * (2.5 - 1.99f64.sqrt()), epsilon = 1e-15);
        assert_eq!(r.region.j, Some(vec![0]));
        let r = rho_ball_maxnorm(&vector(&[0.0, 0.0, 0.0]), 3).unwrap();
        assert_eq!(r.closest.len(), 8);
        assert_abs_diff_eq!(r.value, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn exterior_scan_matches_bisection() {
        let pts: &[&[f64]] = &[
            &[2.0, 0.2],
            &[1.1, 0.05],
            &[0.3, 0.2, 3.0],
            &[0.9, 0.9, 0.9],
            &[1.2, -0.7, 0.1, 0.01],
            &[0.6, 0.6, 0.6, 0.6, 0.6],
            &[-3.0],
        ];
        for x in pts {
            let (rho, j) = ball_exterior_scan(x).unwrap();
            let expected = exterior_by_bisection(x);
            assert_abs_diff_eq!(rho, expected, epsilon = 1e-12);
            for (i, c) in x.iter().enumerate() {
                assert_eq!(j.contains(&i), c.abs() <= rho, "{x:?}");
            }
        }
    }

    #[test]
    fn sphere_cube_examples() {
        let cube = DualPolytope::cube(2);
        let r = rho_sphere_polytope(&cube, &vector(&[0.0, 0.0])).unwrap();
        assert_abs_diff_eq!(r.value, 0.5f64.sqrt(), epsilon = 1e-15);
        assert_eq!(r.closest.len(), 4);
        let r = rho_sphere_polytope(&cube, &vector(&[2.0, 0.0])).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-15);
        assert!(matches!(r.region.branch, Branch::SingularCone { polar_vertex: Some(_) }));
        assert_abs_diff_eq!((&r.closest[0] - vector(&[1.0, 0.0])).norm(), 0.0, epsilon = 1e-15);
        let r = rho_sphere_polytope(&cube, &vector(&[1.0, 1.0])).unwrap();
        assert_eq!(r.region.branch, Branch::VertexBranch);
        assert_abs_diff_eq!(r.value, 1.0 - 0.5f64.sqrt(), epsilon = 1e-15);
        let r = rho_sphere_polytope(&cube, &vector(&[0.3, 0.1])).unwrap();
        assert_abs_diff_eq!(r.value, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!((&r.closest[0] - vector(&[0.8, 0.6])).norm(), 0.0, epsilon = 1e-15);
        let r = rho_sphere_polytope(&cube, &vector(&[0.5, 0.0])).unwrap();
        assert_eq!(r.closest.len(), 2);
        assert_abs_diff_eq!(r.value, (7f64.sqrt() - 1.0) / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn sphere_polytope_needs_equal_norms() {
        let tri = DualPolytope::from_vertices(&[vector(&[1.0, 0.0]), vector(&[0.0, 1.0]), vector(&[-1.0, -1.0])]).unwrap();
        assert_eq!(rho_sphere_polytope(&tri, &vector(&[0.0, 0.0])), Err(Error::NotInscribed));
    }

    #[test]
    fn sphere_cube_agrees_with_ball_formula_in_the_plane() {
        let cube = DualPolytope::cube(2);
        for i in 0..=40 {
            for j in 0..=40 {
                let x = vector(&[-3.0 + 0.15 * i as f64 + 1e-3, -3.0 + 0.15 * j as f64 + 2e-3]);
                let a = rho_sphere_polytope(&cube, &x).unwrap();
                let b = rho_ball_maxnorm(&x, 2).unwrap();
                assert_abs_diff_eq!(a.value, b.value, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn two_disk_examples() {
        let r = rho_two_disks_maxnorm(&vector(&[0.0, 2.5])).unwrap();
        assert_abs_diff_eq!(r.value, 1.5, epsilon = 1e-15);
        assert_eq!(r.closest, vec![vector(&[-1.0, 1.0]), vector(&[1.0, 1.0])]);
        assert_eq!(r.region.branch, Branch::TwoClosest);
        let r = rho_two_disks_maxnorm(&vector(&[0.0, 2.0001])).unwrap();
        assert_abs_diff_eq!(r.value, 1.0001, epsilon = 1e-12);
        assert_eq!(r.closest.len(), 2);
        let r = rho_two_disks_maxnorm(&vector(&[3.0, 0.0])).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-15);
        assert_eq!(r.closest, vec![vector(&[2.0, 0.0])]);
        assert_eq!(r.region.branch, Branch::OneClosest);
        let r = rho_two_disks_maxnorm(&vector(&[1.0, 3.0])).unwrap();
        assert!(r.region.boundary_of_regions);
        assert_eq!(r.closest.len(), 2);
    }
}
