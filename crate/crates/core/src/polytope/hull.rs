//! Hull computation in dimensions 2 and 3, and verification of
//! caller-supplied vertex/facet pairs in any dimension.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{affine_rank, dot, rank};
use crate::tol;
use crate::{Error, Matrix, Result, Vector};

fn check_points(points: &[Vector], what: &str) -> Result<usize> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidInput(format!("{what} list is empty")));
    };
    let n = first.len();
    if n == 0 {
        return Err(Error::InvalidInput(format!("{what} have dimension 0")));
    }
    for p in points {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("{what} contain a non-finite coordinate")));
        }
    }
    Ok(n)
}

fn bbox_diameter(points: &[Vector]) -> f64 {
    let n = points[0].len();
    let mut sq = 0.0;
    for k in 0..n {
        let lo = points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
        sq += (hi - lo) * (hi - lo);
    }
    sq.sqrt()
}

fn dedup(points: &[Vector]) -> Vec<Vector> {
    let eps = tol::DEDUP_REL * bbox_diameter(points);
    let mut out: Vec<Vector> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| (p - q).norm() <= eps) {
            out.push(p.clone());
        }
    }
    out
}

/// Extreme points and facet normals of `conv(points)`.
pub(super) fn dual_from_points(points: &[Vector]) -> Result<(Vec<Vector>, Vec<Vector>)> {
    let n = check_points(points, "vertices")?;
    if n != 2 && n != 3 {
        return Err(Error::UnsupportedDimension {
            dim: n,
            reason: "hulls are computed in dimensions 2 and 3; supply both vertex lists instead",
        });
    }
    let pts = dedup(points);
    let refs: Vec<&Vector> = pts.iter().collect();
    if pts.len() < n + 1 || affine_rank(&refs) < n {
        return Err(Error::DegenerateHull(format!(
            "{} distinct points do not span dimension {n}",
            pts.len()
        )));
    }
    if n == 2 {
        hull_2d(&pts)
    } else {
        hull_3d(&pts)
    }
}

fn cross2(o: &Vector, a: &Vector, b: &Vector) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn hull_2d(pts: &[Vector]) -> Result<(Vec<Vector>, Vec<Vector>)> {
    let mut sorted: Vec<&Vector> = pts.iter().collect();
    sorted.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let scale = bbox_diameter(pts);
    let eps = 1e-14 * scale * scale;
    let mut chain: Vec<&Vector> = Vec::with_capacity(2 * sorted.len());
    for pass in 0..2 {
        let start = chain.len();
        let iter: Box<dyn Iterator<Item = &&Vector>> = if pass == 0 {
            Box::new(sorted.iter())
        } else {
            Box::new(sorted.iter().rev())
        };
        for p in iter {
            while chain.len() >= start + 2
                && cross2(chain[chain.len() - 2], chain[chain.len() - 1], p) <= eps
            {
                chain.pop();
            }
            chain.push(p);
        }
        chain.pop();
    }
    if chain.len() < 3 {
        return Err(Error::DegenerateHull("points are collinear".into()));
    }
    let vertices: Vec<Vector> = chain.iter().map(|p| (*p).clone()).collect();
    let mut polar = Vec::with_capacity(vertices.len());
    for k in 0..vertices.len() {
        let a = &vertices[k];
        let b = &vertices[(k + 1) % vertices.len()];
        let det = a[0] * b[1] - a[1] * b[0];
        if det <= 1e-12 * a.norm() * b.norm() {
            return Err(Error::OriginNotInterior);
        }
        polar.push(crate::vector(&[(b[1] - a[1]) / det, (a[0] - b[0]) / det]));
    }
    Ok((vertices, polar))
}

fn hull_3d(pts: &[Vector]) -> Result<(Vec<Vector>, Vec<Vector>)> {
    let scale = bbox_diameter(pts);
    let side_eps = 1e-12 * scale;
    let m = pts.len();
    let mut polar: Vec<Vector> = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            for k in (j + 1)..m {
                let u = &pts[j] - &pts[i];
                let w = &pts[k] - &pts[i];
                let normal = u.cross(&w);
                let len = normal.norm();
                if len <= 1e-12 * scale * scale {
                    continue;
                }
                let normal = normal / len;
                let offset = normal.dot(&pts[i]);
                let sides: Vec<f64> = pts.iter().map(|p| normal.dot(p) - offset).collect();
                let (normal, offset) = if sides.iter().all(|s| *s <= side_eps) {
                    (normal, offset)
                } else if sides.iter().all(|s| *s >= -side_eps) {
                    (-normal, -offset)
                } else {
                    continue;
                };
                if offset <= side_eps {
                    return Err(Error::OriginNotInterior);
                }
                let v = normal / offset;
                let dup = 1e-12 * v.norm();
                if !polar.iter().any(|q: &Vector| (q - &v).norm() <= dup) {
                    polar.push(v);
                }
            }
        }
    }
    let vertices: Vec<Vector> = pts
        .iter()
        .filter(|p| {
            let active: Vec<&Vector> = polar
                .iter()
                .filter(|v| (dot(v.as_slice(), p.as_slice()) - 1.0).abs() <= 1e-9)
                .collect();
            rank(&active) == 3
        })
        .cloned()
        .collect();
    Ok((vertices, polar))
}

fn inconsistent(msg: String) -> Error {
    Error::InconsistentPair(msg)
}

fn fmt(v: &Vector) -> String {
    let parts: Vec<String> = v.iter().map(|c| format!("{c}")).collect();
    format!("({})", parts.join(", "))
}

/// Runs every consistency invariant on a vertex list `z` and a polar list
/// `v`. Nothing about the input is trusted.
pub(super) fn validate_pair(z: &[Vector], v: &[Vector]) -> Result<()> {
    let n = check_points(z, "vertices")?;
    let nv = check_points(v, "polar vertices")?;
    if n != nv {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: nv,
        });
    }
    for (list, name) in [(z, "vertex"), (v, "polar vertex")] {
        for k in 0..n {
            for s in [1.0, -1.0] {
                let h = list.iter().map(|p| s * p[k]).fold(f64::NEG_INFINITY, f64::max);
                if h <= 0.0 {
                    let sign = if s > 0.0 { "+" } else { "-" };
                    return Err(inconsistent(format!(
                        "no {name} has positive {sign}e{k} component: the origin is not interior"
                    )));
                }
            }
        }
        let eps = tol::DEDUP_REL * bbox_diameter(list);
        for a in 0..list.len() {
            for b in (a + 1)..list.len() {
                if (&list[a] - &list[b]).norm() <= eps {
                    return Err(inconsistent(format!(
                        "duplicate {name} {} at indices {a} and {b}",
                        fmt(&list[a])
                    )));
                }
            }
        }
    }
    let active_tol = 1e-9;
    for (j, zj) in z.iter().enumerate() {
        let dots: Vec<f64> = v.iter().map(|vi| vi.dot(zj)).collect();
        let (imax, max) = argmax(&dots);
        if (max - 1.0).abs() > active_tol {
            return Err(inconsistent(format!(
                "vertex z[{j}] = {} has max <z, v> = {max} (attained at v[{imax}] = {}), expected 1",
                fmt(zj),
                fmt(&v[imax])
            )));
        }
        let active: Vec<&Vector> = v
            .iter()
            .zip(&dots)
            .filter(|(_, d)| (*d - 1.0).abs() <= active_tol)
            .map(|(p, _)| p)
            .collect();
        if rank(&active) < n {
            return Err(inconsistent(format!(
                "vertex z[{j}] = {} lies on facets of rank {} < {n}: not extreme",
                fmt(zj),
                rank(&active)
            )));
        }
    }
    for (i, vi) in v.iter().enumerate() {
        let dots: Vec<f64> = z.iter().map(|zj| zj.dot(vi)).collect();
        let (jmax, max) = argmax(&dots);
        if (max - 1.0).abs() > active_tol {
            return Err(inconsistent(format!(
                "polar vertex v[{i}] = {} has max <z, v> = {max} (attained at z[{jmax}] = {}), expected 1",
                fmt(vi),
                fmt(&z[jmax])
            )));
        }
        let witnesses: Vec<&Vector> = z
            .iter()
            .zip(&dots)
            .filter(|(_, d)| (*d - 1.0).abs() <= active_tol)
            .map(|(p, _)| p)
            .collect();
        if witnesses.len() < n || affine_rank(&witnesses) < n - 1 {
            return Err(inconsistent(format!(
                "polar vertex v[{i}] = {} touches only {} affinely independent vertices: not a facet normal",
                fmt(vi),
                affine_rank(&witnesses) + 1
            )));
        }
    }
    enumerate_exactly(z, v, n)?;
    cauchy_schwarz_sample(z, v, n)
}

fn argmax(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .cloned()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty")
}

fn binomial(m: usize, k: usize) -> f64 {
    (0..k).map(|i| (m - i) as f64 / (i + 1) as f64).product()
}

/// Every vertex of `{x : <x, v_i> <= 1}` must be listed in `z`, or
/// equivalently every facet of `conv(z)` must be listed in `v`; whichever
/// enumeration is shorter is run. Catches a missing facet normal that all
/// local checks accept.
fn enumerate_exactly(z: &[Vector], v: &[Vector], n: usize) -> Result<()> {
    if binomial(v.len(), n) <= binomial(z.len(), n) {
        for_each_vertex_of(v, n, |p| {
            if z.iter().any(|q| (q - p).amax() <= 1e-8 * (1.0 + q.amax())) {
                Ok(())
            } else {
                Err(inconsistent(format!(
                    "the polar list cuts out an extra vertex {} missing from the vertex list",
                    fmt(p)
                )))
            }
        })
    } else {
        for_each_vertex_of(z, n, |p| {
            if v.iter().any(|q| (q - p).amax() <= 1e-8 * (1.0 + q.amax())) {
                Ok(())
            } else {
                Err(inconsistent(format!(
                    "conv(vertices) has a facet with normal {} missing from the polar list",
                    fmt(p)
                )))
            }
        })
    }
}

/// Calls `f` on every vertex of `{x : <x, a_i> <= 1}`, found by solving all
/// nonsingular `n`-subsets of the constraints.
fn for_each_vertex_of(a: &[Vector], n: usize, mut f: impl FnMut(&Vector) -> Result<()>) -> Result<()> {
    let m = a.len();
    if m < n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let mat = Matrix::from_fn(n, n, |r, c| a[idx[r]][c]);
        let sv = mat.singular_values();
        if sv.min() > 1e-10 * sv.max() {
            if let Some(x) = mat.lu().solve(&Vector::from_element(n, 1.0)) {
                let max = a.iter().map(|ai| ai.dot(&x)).fold(f64::NEG_INFINITY, f64::max);
                if max <= 1.0 + 1e-9 {
                    f(&x)?;
                }
            }
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            if idx[k] < m - n + k {
                idx[k] += 1;
                for t in (k + 1)..n {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}

fn cauchy_schwarz_sample(z: &[Vector], v: &[Vector], n: usize) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let x = Vector::from_fn(n, |_, _| rng.gen_range(-2.0..2.0));
        let y = Vector::from_fn(n, |_, _| rng.gen_range(-2.0..2.0));
        let g = v.iter().map(|p| p.dot(&x)).fold(f64::NEG_INFINITY, f64::max);
        let h = z.iter().map(|p| p.dot(&y)).fold(f64::NEG_INFINITY, f64::max);
        if x.dot(&y) > g * h + 1e-12 * (1.0 + x.norm() * y.norm()) {
            return Err(inconsistent(format!(
                "<x, y> > γ(x) γ°(y) at x = {}, y = {}",
                fmt(&x),
                fmt(&y)
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{same_point_set, DualPolytope};
    use super::*;
    use crate::vector;

    fn square_vertices() -> Vec<Vector> {
        vec![
            vector(&[1.0, 1.0]),
            vector(&[-1.0, 1.0]),
            vector(&[-1.0, -1.0]),
            vector(&[1.0, -1.0]),
        ]
    }

    fn axis_normals(n: usize) -> Vec<Vector> {
        DualPolytope::cube(n).polar_vertices().to_vec()
    }

    #[test]
    fn triangle_normals_agree_with_half_plane_sampling() {
        let tri = [vector(&[1.0, 0.0]), vector(&[0.0, 1.0]), vector(&[-1.0, -1.0])];
        let p = DualPolytope::from_vertices(&tri).unwrap();
        assert_eq!(p.polar_vertices().len(), 3);
        // barycentric membership in conv(tri) against the half-plane test
        let inside_hull = |x: f64, y: f64| {
            let m = Matrix::from_row_slice(3, 3, &[1.0, 0.0, -1.0, 0.0, 1.0, -1.0, 1.0, 1.0, 1.0]);
            let l = m.lu().solve(&vector(&[x, y, 1.0])).unwrap();
            l.iter().all(|c| *c >= -1e-12)
        };
        let mut disagreements = 0;
        for i in 0..=200 {
            for j in 0..=200 {
                let x = -1.5 + 3.0 * i as f64 / 200.0 + 1e-7;
                let y = -1.5 + 3.0 * j as f64 / 200.0 + 2e-7;
                let by_normals = p.gauge_value(&[x, y]) <= 1.0;
                if by_normals != inside_hull(x, y) {
                    disagreements += 1;
                }
            }
        }
        assert_eq!(disagreements, 0);
        let pp = p.polar().polar();
        assert!(same_point_set(pp.vertices(), p.vertices(), 0.0));
    }

    #[test]
    fn hull_errors() {
        let off = [vector(&[1.0, 1.0]), vector(&[2.0, 1.0]), vector(&[1.0, 2.0])];
        assert_eq!(DualPolytope::from_vertices(&off), Err(Error::OriginNotInterior));
        let touching = [vector(&[0.0, 0.0]), vector(&[1.0, 0.0]), vector(&[0.0, 1.0])];
        assert_eq!(DualPolytope::from_vertices(&touching), Err(Error::OriginNotInterior));
        let line = [vector(&[1.0, 1.0]), vector(&[-1.0, -1.0]), vector(&[2.0, 2.0])];
        assert!(matches!(DualPolytope::from_vertices(&line), Err(Error::DegenerateHull(_))));
        let four = [vector(&[1.0, 0.0, 0.0, 0.0])];
        assert!(matches!(
            DualPolytope::from_vertices(&four),
            Err(Error::UnsupportedDimension { dim: 4, .. })
        ));
    }

    #[test]
    fn cube_hull_in_3d() {
        let cube = DualPolytope::cube(3);
        let mut pts = cube.vertices().to_vec();
        pts.push(vector(&[0.1, 0.2, -0.3]));
        pts.push(vector(&[1.0, 0.0, 0.0]));
        pts.push(vector(&[1.0, 1.0, 1.0]));
        let p = DualPolytope::from_vertices(&pts).unwrap();
        assert!(same_point_set(p.vertices(), cube.vertices(), 0.0));
        assert!(same_point_set(p.polar_vertices(), &axis_normals(3), 1e-15));
        let oct = DualPolytope::from_vertices(DualPolytope::cross_polytope(3).vertices()).unwrap();
        assert!(same_point_set(oct.polar_vertices(), cube.vertices(), 1e-15));
    }

    #[test]
    fn accepts_cube_pair() {
        let c = DualPolytope::cube(3);
        assert!(DualPolytope::from_dual_pair(c.vertices().to_vec(), axis_normals(3)).is_ok());
        let c5 = DualPolytope::cube(5);
        assert!(DualPolytope::from_dual_pair(c5.vertices().to_vec(), axis_normals(5)).is_ok());
        let x5 = c5.polar();
        assert!(DualPolytope::from_dual_pair(x5.vertices().to_vec(), x5.polar_vertices().to_vec()).is_ok());
    }

    #[test]
    fn rejects_missing_normal() {
        let polar: Vec<Vector> = axis_normals(2)
            .into_iter()
            .filter(|v| *v != vector(&[0.0, 1.0]))
            .collect();
        assert!(matches!(
            DualPolytope::from_dual_pair(square_vertices(), polar),
            Err(Error::InconsistentPair(_))
        ));
    }

    #[test]
    fn rejects_non_extreme_normal() {
        let mut polar = axis_normals(2);
        polar.push(vector(&[0.5, 0.5]));
        assert!(matches!(
            DualPolytope::from_dual_pair(square_vertices(), polar),
            Err(Error::InconsistentPair(_))
        ));
    }

    #[test]
    fn rejects_octahedron_missing_one_facet() {
        let oct = DualPolytope::cross_polytope(3);
        let polar: Vec<Vector> = oct.polar_vertices()[1..].to_vec();
        let err = DualPolytope::from_dual_pair(oct.vertices().to_vec(), polar).unwrap_err();
        assert!(matches!(err, Error::InconsistentPair(_)), "{err}");
    }

    #[test]
    fn rejects_scaled_and_duplicated_lists() {
        let scaled: Vec<Vector> = axis_normals(2).iter().map(|v| v * 2.0).collect();
        assert!(DualPolytope::from_dual_pair(square_vertices(), scaled).is_err());
        let mut dup = square_vertices();
        dup.push(vector(&[1.0, 1.0]));
        assert!(DualPolytope::from_dual_pair(dup, axis_normals(2)).is_err());
        let mismatch = vec![vector(&[1.0, 0.0, 0.0])];
        assert!(matches!(
            DualPolytope::from_dual_pair(square_vertices(), mismatch),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
