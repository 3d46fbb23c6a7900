//! Membership in finitely generated cones.

use crate::{Matrix, Vector};

/// Nonnegative least squares, `min |A λ - b|` subject to `λ >= 0`, by the
/// Lawson–Hanson active-set method. Columns of `a` are the generators.
pub fn nnls(a: &Matrix, b: &Vector) -> Vector {
    let m = a.ncols();
    let mut x = Vector::zeros(m);
    if m == 0 {
        return x;
    }
    let scale = a.amax().max(1.0) * b.amax().max(1.0);
    let eps = 1e-13 * scale;
    let mut passive = vec![false; m];
    for _ in 0..(3 * m + 30) {
        let w = a.transpose() * (b - a * &x);
        let next = (0..m)
            .filter(|&j| !passive[j] && w[j] > eps)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = next else { break };
        passive[j] = true;
        for _ in 0..(3 * m + 30) {
            let z = solve_passive(a, b, &passive);
            if (0..m).all(|i| !passive[i] || z[i] > 0.0) {
                x = z;
                break;
            }
            let mut alpha = f64::INFINITY;
            for i in 0..m {
                if passive[i] && z[i] <= 0.0 {
                    alpha = alpha.min(x[i] / (x[i] - z[i]));
                }
            }
            x += (z - &x) * alpha;
            for i in 0..m {
                if passive[i] && x[i] <= 1e-15 * scale {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
        }
    }
    x
}

fn solve_passive(a: &Matrix, b: &Vector, passive: &[bool]) -> Vector {
    let cols: Vec<usize> = (0..passive.len()).filter(|&i| passive[i]).collect();
    let mut z = Vector::zeros(passive.len());
    if cols.is_empty() {
        return z;
    }
    let sub = Matrix::from_fn(a.nrows(), cols.len(), |r, c| a[(r, cols[c])]);
    let sol = sub
        .svd(true, true)
        .solve(b, 1e-14)
        .expect("both factors were computed");
    for (k, &c) in cols.iter().enumerate() {
        z[c] = sol[k];
    }
    z
}

/// Whether `w` is a nonnegative combination of `generators`, up to a
/// residual of `tol · (1 + |w|)`. Plane cones with at most two generators
/// are decided by a direct solve.
pub fn cone_contains(generators: &[Vector], w: &Vector, tol: f64) -> bool {
    let slack = tol * (1.0 + w.norm());
    if generators.is_empty() {
        return w.norm() <= slack;
    }
    if w.len() == 2 && generators.len() <= 2 {
        if let Some(ok) = plane_solve(generators, w, slack) {
            return ok;
        }
    }
    let a = Matrix::from_fn(w.len(), generators.len(), |r, c| generators[c][r]);
    let lambda = nnls(&a, w);
    (a * lambda - w).norm() <= slack
}

fn plane_solve(g: &[Vector], w: &Vector, slack: f64) -> Option<bool> {
    if g.len() == 1 {
        let n2 = g[0].norm_squared();
        let l = g[0].dot(w) / n2;
        return Some(l >= -slack / n2.sqrt() && (w - &g[0] * l).norm() <= slack);
    }
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if det.abs() <= 1e-12 * g[0].norm() * g[1].norm() {
        return None;
    }
    let l0 = (w[0] * g[1][1] - w[1] * g[1][0]) / det;
    let l1 = (g[0][0] * w[1] - g[0][1] * w[0]) / det;
    // Distance from w to the cone when one coefficient is negative.
    if l0 >= 0.0 && l1 >= 0.0 {
        return Some(true);
    }
    let to_ray = |r: &Vector| {
        let t = (r.dot(w) / r.norm_squared()).max(0.0);
        (w - r * t).norm()
    };
    Some(to_ray(&g[0]).min(to_ray(&g[1])) <= slack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;

    #[test]
    fn nnls_recovers_nonnegative_solution() {
        let a = Matrix::from_row_slice(3, 4, &[1.0, 0.0, 1.0, 2.0, 0.0, 1.0, 1.0, 0.5, 1.0, 1.0, 0.0, 1.0]);
        let lambda = vector(&[0.5, 0.0, 2.0, 0.25]);
        let b = &a * &lambda;
        let x = nnls(&a, &b);
        assert!(x.iter().all(|v| *v >= 0.0));
        assert!((&a * &x - &b).norm() < 1e-12);
    }

    #[test]
    fn nnls_projects_infeasible_target() {
        // only the first quadrant is reachable; the best fit to (-1, 2) is (0, 2)
        let a = Matrix::identity(2, 2);
        let x = nnls(&a, &vector(&[-1.0, 2.0]));
        assert_eq!(x, vector(&[0.0, 2.0]));
    }

    #[test]
    fn three_dimensional_cone() {
        let g = vec![vector(&[1.0, 0.0, 0.0]), vector(&[0.0, 1.0, 0.0]), vector(&[0.0, 0.0, 1.0])];
        assert!(cone_contains(&g, &vector(&[0.3, 2.0, 0.0]), 1e-9));
        assert!(!cone_contains(&g, &vector(&[0.3, -1e-3, 1.0]), 1e-9));
        let edge = vec![vector(&[1.0, 0.0, 0.0]), vector(&[0.0, 1.0, 0.0])];
        assert!(!cone_contains(&edge, &vector(&[1.0, 1.0, 1e-6]), 1e-9));
    }

    #[test]
    fn plane_cones() {
        let g = vec![vector(&[1.0, 1.0]), vector(&[1.0, -1.0])];
        assert!(cone_contains(&g, &vector(&[3.0, 1.0]), 1e-9));
        assert!(cone_contains(&g, &vector(&[1.0, 1.0]), 1e-9));
        assert!(!cone_contains(&g, &vector(&[1.0, 1.001]), 1e-9));
        let ray = vec![vector(&[0.0, 2.0])];
        assert!(cone_contains(&ray, &vector(&[0.0, 5.0]), 1e-9));
        assert!(!cone_contains(&ray, &vector(&[0.0, -5.0]), 1e-9));
        assert!(cone_contains(&[], &vector(&[0.0, 0.0]), 1e-9));
    }
}
