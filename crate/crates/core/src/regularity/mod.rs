//! Derivatives of `ρ` at points with a unique closest point `y`:
//!
//! - `Dρ(x) = ν(y) / γ°(ν(y))`
//! - `Dy(x) = I - X(ν(y))` with `X(ν) = Dγ°(ν) ⊗ ν / γ°(ν)`
//! - `D²ρ(x) = (I - Xᵀ) D²d(y) (I - X) / γ°(ν(y))`
//!
//! where `ν` is the inward unit normal of `∂U` and `d` the Euclidean distance.
//! The finite-difference helpers here serve as independent oracles.

mod ridge;

pub use ridge::{ridge_scan, scan_points, RidgeCell, RidgeCounts, RidgeReport};

use serde::Serialize;

use crate::boundary::{BoundaryShape, Membership};
use crate::distance::{DistanceField, DistanceResult, DEFAULT_BUDGET};
use crate::polytope::DualPolytope;
use crate::{Error, Matrix, Result, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeSource {
    Formula,
    FiniteDifference,
}

/// First and second derivatives of `ρ` at one point. The projector, the
/// Jacobian and the Hessian need `γ°` to be differentiable at `ν(y)`; the
/// Hessian also needs a twice differentiable boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeBundle {
    pub grad: Vector,
    pub projector: Option<Matrix>,
    pub jacobian_y: Option<Matrix>,
    pub hessian: Option<Matrix>,
    pub source: DerivativeSource,
}

/// `X(ν) = Dγ°(ν) ⊗ ν / γ°(ν)`, a rank-one idempotent.
pub fn x_projector(p: &DualPolytope, nu: &Vector) -> Result<Matrix> {
    let z = p.support_gradient(nu)?;
    let h = p.support_value(nu.as_slice());
    if h <= 0.0 {
        return Err(Error::InvalidInput("zero normal".into()));
    }
    Ok(&z * nu.transpose() / h)
}

/// The unique closest point and its inward normal, after checking that `x`
/// lies in the closure of `U`.
fn foot(b: &BoundaryShape, x: &Vector, res: &DistanceResult) -> Result<(Vector, Vector)> {
    if b.region_membership(x)? == Membership::Outside {
        return Err(Error::OutsideDomain);
    }
    let y = res.unique_closest()?.clone();
    let nu = b.inward_normal(&y)?;
    Ok((y, nu))
}

/// `Dρ(x) = ν(y) / γ°(ν(y))`.
///
/// Ties in the support function at `ν` are allowed: a flat side of the
/// touching ball lying along `∂U` still gives a differentiable `ρ`.
pub fn grad_rho(p: &DualPolytope, b: &BoundaryShape, x: &Vector, res: &DistanceResult) -> Result<Vector> {
    let (_, nu) = foot(b, x, res)?;
    Ok(&nu / p.support_value(nu.as_slice()))
}

/// The limit of `Dρ` at a boundary point `y`, reached along the segment
/// entering `U` from `y`.
pub fn grad_rho_at_boundary(p: &DualPolytope, b: &BoundaryShape, y: &Vector) -> Result<Vector> {
    let nu = b.inward_normal(y)?;
    Ok(&nu / p.support_value(nu.as_slice()))
}

/// `Dy(x) = I - X(ν(y))`.
pub fn jacobian_closest(p: &DualPolytope, b: &BoundaryShape, x: &Vector, res: &DistanceResult) -> Result<Matrix> {
    let (_, nu) = foot(b, x, res)?;
    let n = nu.len();
    Ok(Matrix::identity(n, n) - x_projector(p, &nu)?)
}

/// `D²ρ(x) = (I - Xᵀ) D²d(y) (I - X) / γ°(ν(y))`.
pub fn hessian_rho(p: &DualPolytope, b: &BoundaryShape, x: &Vector, res: &DistanceResult) -> Result<Matrix> {
    let (y, nu) = foot(b, x, res)?;
    let n = nu.len();
    let dy = Matrix::identity(n, n) - x_projector(p, &nu)?;
    let d2 = b.euclid_dist_hessian(&y)?;
    let h = p.support_value(nu.as_slice());
    let m = dy.transpose() * d2 * &dy / h;
    Ok((&m + m.transpose()) * 0.5)
}

/// Every formula that applies at `x`.
pub fn derivative_bundle(
    p: &DualPolytope,
    b: &BoundaryShape,
    x: &Vector,
    res: &DistanceResult,
) -> Result<DerivativeBundle> {
    let grad = grad_rho(p, b, x, res)?;
    let (projector, jacobian_y, hessian) = match jacobian_closest(p, b, x, res) {
        Ok(jac) => {
            let n = jac.nrows();
            let hessian = hessian_rho(p, b, x, res).ok();
            (Some(Matrix::identity(n, n) - &jac), Some(jac), hessian)
        }
        Err(Error::SupportNotDifferentiable { .. }) => (None, None, None),
        Err(e) => return Err(e),
    };
    Ok(DerivativeBundle {
        grad,
        projector,
        jacobian_y,
        hessian,
        source: DerivativeSource::Formula,
    })
}

/// Gradient and Hessian of `field` by central differences.
pub fn fd_bundle(field: impl Fn(&Vector) -> f64, x: &Vector, h_grad: f64, h_hess: f64) -> DerivativeBundle {
    DerivativeBundle {
        grad: fd_gradient(&field, x, h_grad),
        projector: None,
        jacobian_y: None,
        hessian: Some(fd_hessian(&field, x, h_hess)),
        source: DerivativeSource::FiniteDifference,
    }
}

/// How the distance is continued outside `Ū`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignedConvention {
    /// `-d_{-K}(x, ∂U)`: the gauge of the reflected body, which makes the
    /// signed distance differentiable across `∂U`.
    #[default]
    Reflected,
    /// `-d_K(x, ∂U)`: the same gauge on both sides.
    SameGauge,
}

/// `ρ` in `Ū` and minus the exterior distance outside, with the reflected
/// body on the exterior.
pub fn signed_distance(p: &DualPolytope, b: &BoundaryShape, x: &Vector) -> Result<f64> {
    SignedDistance::new(p, b, SignedConvention::Reflected, DEFAULT_BUDGET)?.value(x)
}

/// A signed distance field with a chosen exterior convention.
#[derive(Clone, Debug)]
pub struct SignedDistance {
    inside: DistanceField,
    outside: DistanceField,
}

impl SignedDistance {
    pub fn new(p: &DualPolytope, b: &BoundaryShape, convention: SignedConvention, budget: usize) -> Result<Self> {
        let exterior_gauge = match convention {
            SignedConvention::Reflected => p.reflected(),
            SignedConvention::SameGauge => p.clone(),
        };
        Ok(Self {
            inside: DistanceField::new(p.clone(), b.clone(), budget)?,
            outside: DistanceField::new(exterior_gauge, b.complement().unwrap_or_else(|| b.clone()), budget)?,
        })
    }

    pub fn value(&self, x: &Vector) -> Result<f64> {
        Ok(match self.inside.boundary().region_membership(x)? {
            Membership::On => 0.0,
            Membership::Inside => self.inside.value(x)?,
            Membership::Outside => -self.outside.value(x)?,
        })
    }
}

/// Central-difference gradient.
pub fn fd_gradient(field: impl Fn(&Vector) -> f64, x: &Vector, h: f64) -> Vector {
    Vector::from_fn(x.len(), |i, _| {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[i] += h;
        xm[i] -= h;
        (field(&xp) - field(&xm)) / (2.0 * h)
    })
}

/// Central-difference Hessian, symmetrised.
pub fn fd_hessian(field: impl Fn(&Vector) -> f64, x: &Vector, h: f64) -> Matrix {
    let n = x.len();
    let shifted = |i: usize, si: f64, j: usize, sj: f64| {
        let mut y = x.clone();
        y[i] += si * h;
        y[j] += sj * h;
        field(&y)
    };
    let f0 = field(x);
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = (shifted(i, 1.0, i, 0.0) - 2.0 * f0 + shifted(i, -1.0, i, 0.0)) / (h * h);
        for j in 0..i {
            let v = (shifted(i, 1.0, j, 1.0) - shifted(i, 1.0, j, -1.0) - shifted(i, -1.0, j, 1.0)
                + shifted(i, -1.0, j, -1.0))
                / (4.0 * h * h);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// `|γ°(Dρ) - 1|` with `Dρ` from central differences.
pub fn hj_residual(p: &DualPolytope, field: impl Fn(&Vector) -> f64, x: &Vector, h: f64) -> f64 {
    let g = fd_gradient(field, x, h);
    (p.support_value(g.as_slice()) - 1.0).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{ParabolaSide, Side};
    use crate::distance::{rho_parabola_maxnorm, rho_sphere_polytope};
    use crate::vector;
    use approx::assert_abs_diff_eq;

    fn circle() -> BoundaryShape {
        BoundaryShape::unit_sphere(2, Side::Interior)
    }

    fn rho_cube(x: &Vector) -> f64 {
        rho_sphere_polytope(&DualPolytope::cube(2), x).unwrap().value
    }

    #[test]
    fn projector_examples() {
        let cube = DualPolytope::cube(2);
        let x = x_projector(&cube, &vector(&[0.6, 0.8])).unwrap();
        let expected = Matrix::from_row_slice(2, 2, &[3.0, 4.0, 3.0, 4.0]) / 7.0;
        assert_abs_diff_eq!((&x - &expected).amax(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((&x * &x - &x).amax(), 0.0, epsilon = 1e-15);
        let scaled = x_projector(&cube, &vector(&[3.0, 4.0])).unwrap();
        assert_abs_diff_eq!((scaled - x).amax(), 0.0, epsilon = 1e-15);
        assert!(matches!(
            x_projector(&cube, &vector(&[0.0, 1.0])),
            Err(Error::SupportNotDifferentiable { .. })
        ));
    }

    #[test]
    fn circle_corner_derivatives() {
        let cube = DualPolytope::cube(2);
        let x = vector(&[0.3, 0.1]);
        let res = rho_sphere_polytope(&cube, &x).unwrap();
        let g = grad_rho(&cube, &circle(), &x, &res).unwrap();
        assert_abs_diff_eq!((g - vector(&[-4.0 / 7.0, -3.0 / 7.0])).amax(), 0.0, epsilon = 1e-14);
        let jac = jacobian_closest(&cube, &circle(), &x, &res).unwrap();
        let expected = Matrix::from_row_slice(2, 2, &[3.0, -3.0, -4.0, 4.0]) / 7.0;
        assert_abs_diff_eq!((jac - expected).amax(), 0.0, epsilon = 1e-14);
        let hess = hessian_rho(&cube, &circle(), &x, &res).unwrap();
        let c = 25.0 / 68.6;
        let expected = Matrix::from_row_slice(2, 2, &[-c, c, c, -c]);
        assert_abs_diff_eq!((&hess - expected).amax(), 0.0, epsilon = 1e-12);
        let fd = fd_hessian(rho_cube, &x, 1e-4);
        assert_abs_diff_eq!((fd - hess).amax(), 0.0, epsilon = 1e-4);
    }

    #[test]
    fn fd_gradients() {
        let cube = DualPolytope::cube(2);
        let g = fd_gradient(|v: &Vector| cube.gauge_value(v.as_slice()), &vector(&[2.0, 1.0]), 1e-5);
        assert_abs_diff_eq!((g - vector(&[1.0, 0.0])).amax(), 0.0, epsilon = 1e-10);
        let g = fd_gradient(rho_cube, &vector(&[0.3, 0.1]), 1e-5);
        assert_abs_diff_eq!((g - vector(&[-4.0 / 7.0, -3.0 / 7.0])).amax(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn eikonal_residuals() {
        let cube = DualPolytope::cube(2);
        assert!(hj_residual(&cube, rho_cube, &vector(&[0.3, 0.1]), 1e-5) <= 1e-8);
        let parabola = |v: &Vector| rho_parabola_maxnorm(v).unwrap().value;
        assert!(hj_residual(&cube, parabola, &vector(&[0.5, 2.0]), 1e-5) <= 1e-8);
        assert!(hj_residual(&cube, parabola, &vector(&[0.0, 2.0]), 1e-3) > 0.1);
    }

    #[test]
    fn ridge_point_has_no_gradient() {
        let cube = DualPolytope::cube(2);
        let x = vector(&[0.0, 2.0]);
        let res = rho_parabola_maxnorm(&x).unwrap();
        let b = BoundaryShape::parabola(ParabolaSide::Above);
        assert_eq!(grad_rho(&cube, &b, &x, &res).unwrap_err(), Error::MultipleClosestPoints(2));
    }

    #[test]
    fn flat_cone_gradient() {
        // below the parabola, the touching square rests on the vertex with a flat side
        let cube = DualPolytope::cube(2);
        let x = vector(&[0.0, -1.0]);
        let b = BoundaryShape::parabola(ParabolaSide::Below);
        let res = rho_parabola_maxnorm(&x).unwrap();
        let g = grad_rho(&cube, &b, &x, &res).unwrap();
        assert_abs_diff_eq!((&g - vector(&[0.0, -1.0])).amax(), 0.0, epsilon = 1e-15);
        let bundle = derivative_bundle(&cube, &b, &x, &res).unwrap();
        assert!(bundle.hessian.is_none());
        let outside = BoundaryShape::parabola(ParabolaSide::Above);
        assert_eq!(grad_rho(&cube, &outside, &x, &res).unwrap_err(), Error::OutsideDomain);
    }

    #[test]
    fn signed_distance_examples() {
        let cube = DualPolytope::cube(2);
        let b = BoundaryShape::parabola(ParabolaSide::Above);
        assert_abs_diff_eq!(signed_distance(&cube, &b, &vector(&[0.0, -1.0])).unwrap(), -1.0, epsilon = 1e-15);
        assert_eq!(signed_distance(&cube, &b, &vector(&[0.5, 0.25])).unwrap(), 0.0);
        assert_abs_diff_eq!(signed_distance(&cube, &b, &vector(&[0.0, 2.0])).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn flat_boundary_has_zero_hessian() {
        let sq = BoundaryShape::polygon(
            vec![vector(&[-2.0, -2.0]), vector(&[2.0, -2.0]), vector(&[2.0, 2.0]), vector(&[-2.0, 2.0])],
            Side::Interior,
        )
        .unwrap();
        let tri = DualPolytope::regular_polygon(3, 1.0, 0.3).unwrap();
        let field = DistanceField::new(tri.clone(), sq.clone(), 2000).unwrap();
        let x = vector(&[0.4, -0.7]);
        let res = field.query(&x).unwrap();
        let h = hessian_rho(&tri, &sq, &x, &res).unwrap();
        assert_eq!(h.amax(), 0.0);
    }
}
