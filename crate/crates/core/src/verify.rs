//! Property suites over the worked example setups.
//!
//! Every suite returns a [`SuiteReport`] made of named checks, each with a
//! count, a failure count, the worst residual seen and its tolerance. Soft
//! checks are reported but do not fail the suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boundary::{BoundaryShape, Membership, Side};
use crate::distance::{verify_touching_ball, DistanceOracle, DistanceResult, Problem};
use crate::polytope::{check_duality_identities, cone_contains, DualPolytope};
use crate::regularity::{
    fd_gradient, fd_hessian, grad_rho, grad_rho_at_boundary, hessian_rho, jacobian_closest, ridge_scan, x_projector,
    SignedConvention, SignedDistance,
};
use crate::{vector, Matrix, Result, Vector};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub count: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub hard: bool,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, tolerance: f64, hard: bool) -> Self {
        Self {
            name: name.into(),
            count: 0,
            failures: 0,
            worst_residual: 0.0,
            tolerance,
            hard,
        }
    }

    /// Records a residual; NaN counts as a failure.
    pub fn record(&mut self, residual: f64) {
        self.count += 1;
        if residual.is_nan() || residual > self.tolerance {
            self.failures += 1;
        }
        if residual.is_nan() || residual > self.worst_residual {
            self.worst_residual = residual;
        }
    }

    pub fn record_bool(&mut self, ok: bool) {
        self.record(if ok { 0.0 } else { f64::INFINITY });
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    /// True when no hard check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.hard || c.passed())
    }

    pub fn total_checks(&self) -> usize {
        self.checks.iter().map(|c| c.count).sum()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, c: CheckResult) {
        self.checks.push(c);
    }
}

/// Sizes and seed shared by the suites.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub resolution: usize,
    pub budget: usize,
    pub duality_samples: usize,
    pub smooth_points: usize,
    pub c2_points: usize,
    pub structural_points: usize,
    pub probes: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            resolution: 101,
            budget: crate::distance::DEFAULT_BUDGET,
            duality_samples: 10_000,
            smooth_points: 200,
            c2_points: 50,
            structural_points: 100,
            probes: 1000,
            seed: 0x5eed,
        }
    }
}

/// The example setups checked by default, with display names.
pub fn example_setups() -> Vec<(&'static str, Problem)> {
    vec![
        ("parabola", Problem::ParabolaMaxNorm),
        ("sphere-square", Problem::SpherePolytope(DualPolytope::cube(2))),
        ("ball-maxnorm-2d", Problem::BallMaxNorm { dim: 2 }),
        ("ball-maxnorm-3d", Problem::BallMaxNorm { dim: 3 }),
        ("two-disks", Problem::TwoDisksMaxNorm),
    ]
}

/// Lifts a point of the figure window into the setup's dimension. In three
/// dimensions the window is the oblique plane
/// `(0, 0, 0.25) + s (1, 0, 0.3) + t (0, 1, 0.2)`, which meets every branch
/// of the cube formula.
pub fn embed(dim: usize, st: [f64; 2]) -> Vector {
    match dim {
        2 => vector(&st),
        3 => vector(&[st[0], st[1], 0.25 + 0.3 * st[0] + 0.2 * st[1]]),
        _ => {
            let mut v = Vector::zeros(dim);
            v[0] = st[0];
            v[1] = st[1];
            v
        }
    }
}

fn random_point(problem: &Problem, rng: &mut ChaCha8Rng) -> Vector {
    let w = problem.figure_window();
    if problem.dim() == 2 {
        vector(&[rng.gen_range(w.min[0]..w.max[0]), rng.gen_range(w.min[1]..w.max[1])])
    } else {
        Vector::from_fn(problem.dim(), |_, _| rng.gen_range(-2.5..2.5))
    }
}

/// Algebraic identities of gauge, support and polar body.
pub fn duality_suite(p: &DualPolytope, samples: usize, seed: u64) -> SuiteReport {
    let r = check_duality_identities(p, samples, seed);
    let mut suite = SuiteReport::new("duality");
    for c in r.checks {
        suite.push(CheckResult {
            name: c.name.to_string(),
            count: c.count,
            failures: c.failures,
            worst_residual: c.worst_residual,
            tolerance: c.tolerance,
            hard: c.hard,
        });
    }
    suite
}

/// Oracle against closed form on the lattice over the figure window.
pub fn closed_form_suite(name: &str, problem: &Problem, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new(format!("closed-form/{name}"));
    let mut agree = CheckResult::new("oracle-vs-closed-form", 5e-7, true);
    let mut predicate = CheckResult::new("region-predicate", 0.0, true);
    let mut counts = CheckResult::new("closest-count-agreement", 0.0, false);
    let oracle = DistanceOracle::new(problem.polytope(), problem.boundary(), cfg.budget)?;
    let w = problem.figure_window();
    let n = cfg.resolution;
    for i in 0..n {
        for j in 0..n {
            let x = embed(problem.dim(), w.node(i, j, n));
            if !problem.in_domain(&x) {
                continue;
            }
            let closed = problem.closed_form(&x)?;
            let brute = oracle.query(&x)?;
            agree.record((closed.value - brute.value).abs());
            predicate.record_bool(problem.predicate_holds(&closed.region, &x, 1e-9));
            counts.record_bool(closed.closest.len() == brute.closest.len());
        }
    }
    suite.push(agree);
    suite.push(predicate);
    suite.push(counts);
    Ok(suite)
}

const GRAD_STEP: f64 = 1e-5;
const HESS_STEP: f64 = 1e-4;

/// Whether the closed form is smooth on a neighbourhood of `x` of radius
/// `radius`: one branch label and one nearby closest point at every
/// stencil point.
fn smooth_near(problem: &Problem, x: &Vector, res: &DistanceResult, radius: f64) -> bool {
    let Ok(y) = res.unique_closest() else { return false };
    if res.region.boundary_of_regions || res.value < 1e-3 {
        return false;
    }
    let label = res.region.label();
    let n = x.len();
    let mut offsets = Vec::new();
    for i in 0..n {
        for s in [-1.0, 1.0] {
            let mut d = Vector::zeros(n);
            d[i] = s;
            offsets.push(d.clone());
            for j in 0..i {
                for t in [-1.0, 1.0] {
                    let mut e = d.clone();
                    e[j] = t;
                    offsets.push(e);
                }
            }
        }
    }
    offsets.iter().all(|d| {
        let z = x + d * radius;
        match problem.closed_form(&z) {
            Ok(r) => {
                !r.region.boundary_of_regions
                    && r.region.label() == label
                    && r.unique_closest().is_ok_and(|yz| (yz - y).norm() < 1e-2)
            }
            Err(_) => false,
        }
    })
}

fn matrix_gap(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).amax()
}

/// Derivative formulas against finite differences of the closed form.
pub fn derivative_suite(name: &str, problem: &Problem, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new(format!("derivatives/{name}"));
    let p = problem.polytope();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xd1ff);
    let field = |z: &Vector| problem.closed_form(z).map(|r| r.value).unwrap_or(f64::NAN);

    let mut grad = CheckResult::new("grad-vs-fd", 1e-6, true);
    let mut eikonal = CheckResult::new("eikonal-formula", 1e-12, true);
    let mut hj = CheckResult::new("hj-residual-fd", 1e-7, true);
    let mut hess = CheckResult::new("hessian-vs-fd", 1e-4, true);
    let mut jac = CheckResult::new("jacobian-vs-fd", 1e-4, true);
    let mut idempotent = CheckResult::new("projector-idempotent", 1e-10, true);
    let mut kernel = CheckResult::new("projector-kernel", 1e-10, true);
    let mut symmetric = CheckResult::new("hessian-symmetric", 1e-10, true);
    let mut ray = CheckResult::new("hessian-kernel", 1e-8, true);
    let mut constancy = CheckResult::new("segment-constancy", 1e-10, true);
    let mut limit = CheckResult::new("boundary-gradient-limit", 1e-8, true);
    let mut eigen = CheckResult::new("sphere-interior-eigenvalues", 1e-8, true);

    let mut smooth = 0;
    let mut c2 = 0;
    let mut attempts = 0;
    while (smooth < cfg.smooth_points || c2 < cfg.c2_points) && attempts < 200 * (cfg.smooth_points + cfg.c2_points) {
        attempts += 1;
        let x = random_point(problem, &mut rng);
        if !problem.in_domain(&x) {
            continue;
        }
        let b = problem.boundary_at(&x);
        let res = problem.closed_form(&x)?;
        if !smooth_near(problem, &x, &res, HESS_STEP) {
            continue;
        }
        let Ok(g) = grad_rho(&p, &b, &x, &res) else { continue };
        let hessian = hessian_rho(&p, &b, &x, &res);
        let want_smooth = smooth < cfg.smooth_points;
        let want_c2 = c2 < cfg.c2_points && hessian.is_ok();
        if !want_smooth && !want_c2 {
            continue;
        }
        if want_smooth {
            smooth += 1;
            let fd = fd_gradient(field, &x, GRAD_STEP);
            grad.record((&g - &fd).amax());
            eikonal.record((p.support_value(g.as_slice()) - 1.0).abs());
            hj.record((p.support_value(fd.as_slice()) - 1.0).abs());
        }
        if want_c2 {
            c2 += 1;
            let h = hessian?;
            let y = res.unique_closest()?.clone();
            let nu = b.inward_normal(&y)?;
            let z = p.support_gradient(&nu)?;
            let x_mat = x_projector(&p, &nu)?;
            hess.record(matrix_gap(&h, &fd_hessian(field, &x, HESS_STEP)));
            idempotent.record(matrix_gap(&(&x_mat * &x_mat), &x_mat));
            let n = x.len();
            kernel.record(((Matrix::identity(n, n) - &x_mat) * &z).amax());
            symmetric.record(matrix_gap(&h, &h.transpose()));
            ray.record((&h * &z).amax());

            let jy = jacobian_closest(&p, &b, &x, &res)?;
            let closest_at = |v: &Vector| {
                problem
                    .closed_form(v)
                    .ok()
                    .and_then(|r| r.unique_closest().ok().cloned())
                    .unwrap_or_else(|| Vector::from_element(n, f64::NAN))
            };
            let fd_jac = Matrix::from_fn(n, n, |r, c| {
                let mut e = Vector::zeros(n);
                e[c] = HESS_STEP;
                ((closest_at(&(&x + &e)) - closest_at(&(&x - &e))) / (2.0 * HESS_STEP))[r]
            });
            jac.record(matrix_gap(&jy, &fd_jac));

            for t in [0.25, 0.5, 0.75] {
                let xt = &x + (&y - &x) * t;
                let rt = problem.closed_form(&xt)?;
                let ht = hessian_rho(&p, &b, &xt, &rt);
                constancy.record(ht.map_or(f64::INFINITY, |ht| matrix_gap(&ht, &h)));
            }

            let y_side = &y + &z * 1e-7;
            let g_limit = grad_rho_at_boundary(&p, &b, &y)?;
            let r_side = problem.closed_form(&y_side)?;
            limit.record(grad_rho(&p, &b, &y_side, &r_side).map_or(f64::INFINITY, |g| (g - g_limit).amax()));

            let inside_sphere = matches!(problem, Problem::SpherePolytope(_) | Problem::BallMaxNorm { .. })
                && x.norm() < 1.0;
            if inside_sphere {
                let eig = h.clone().symmetric_eigen().eigenvalues;
                let zeros = eig.iter().filter(|l| l.abs() <= 1e-8).count();
                let negative = eig.iter().filter(|l| **l < -1e-8).count();
                eigen.record_bool(zeros == 1 && negative == n - 1);
            }
        }
    }
    let mut coverage = CheckResult::new("sample-coverage", 0.0, true);
    coverage.record_bool(smooth >= cfg.smooth_points);
    let c2_possible = !matches!(problem, Problem::TwoDisksMaxNorm) || c2 > 0;
    coverage.record_bool(c2 >= cfg.c2_points || !c2_possible);
    for c in [grad, eikonal, hj, hess, jac, idempotent, kernel, symmetric, ray, constancy, limit, eigen, coverage] {
        suite.push(c);
    }
    Ok(suite)
}

/// Touching ball, segment linearity, Lipschitz bound, closest-point
/// continuity, the normal inclusion at the foot point and exterior
/// uniqueness for the sphere setups.
pub fn structural_suite(name: &str, problem: &Problem, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new(format!("structure/{name}"));
    let p = problem.polytope();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x57c7);
    let mut escapes = CheckResult::new("touching-ball-escapes", 0.0, true);
    let mut contacts = CheckResult::new("touching-ball-contacts", 0.0, true);
    let mut linear = CheckResult::new("segment-linearity", 1e-7, true);
    let mut shared = CheckResult::new("segment-shares-closest", 1e-6, true);
    let mut lipschitz = CheckResult::new("lipschitz", 1e-9, true);
    let mut continuity = CheckResult::new("closest-point-continuity", 1e-2, true);
    let mut inclusion = CheckResult::new("footpoint-normal-inclusion", 0.0, true);
    let mut unique_outside = CheckResult::new("exterior-uniqueness", 0.0, true);
    let sphere = matches!(problem, Problem::SpherePolytope(_) | Problem::BallMaxNorm { .. });
    let oracle = if sphere {
        Some(DistanceOracle::new(
            p.clone(),
            BoundaryShape::unit_sphere(problem.dim(), Side::Exterior),
            cfg.budget,
        )?)
    } else {
        None
    };

    let mut taken = 0;
    let mut attempts = 0;
    while taken < cfg.structural_points && attempts < 1000 * cfg.structural_points {
        attempts += 1;
        let x = random_point(problem, &mut rng);
        if !problem.in_domain(&x) {
            continue;
        }
        let b = problem.boundary_at(&x);
        if b.region_membership(&x)? == Membership::On {
            continue;
        }
        taken += 1;
        let res = problem.closed_form(&x)?;
        let report = verify_touching_ball(&p, &b, &x, &res, cfg.probes);
        escapes.count += report.probes;
        escapes.failures += report.escapes;
        escapes.worst_residual = escapes.worst_residual.max(report.worst_escape);
        contacts.record((report.off_ball + report.off_boundary + report.normal_violations) as f64);

        for y in &res.closest {
            for k in 1..=10 {
                let t = k as f64 / 11.0;
                let z = &x + (y - &x) * t;
                let rz = problem.closed_form(&z)?;
                linear.record((rz.value - (1.0 - t) * res.value).abs());
                shared.record(rz.closest.iter().map(|q| (q - y).norm()).fold(f64::INFINITY, f64::min));
            }
            let w = (&x - y) / res.value;
            let Ok(nu) = b.inward_normal(y) else { continue };
            let mu = &nu / p.support_value(nu.as_slice());
            let active = p.gauge(&w)?.active;
            let lifted: Vec<Vector> = active
                .iter()
                .map(|&i| p.polar_vertices()[i].clone().insert_row(x.len(), 1.0))
                .collect();
            inclusion.record_bool(cone_contains(&lifted, &mu.clone().insert_row(x.len(), 1.0), 1e-8));
        }

        let other = random_point(problem, &mut rng);
        if problem.in_domain(&other) {
            let ro = problem.closed_form(&other)?.value;
            let up = ro - res.value - p.gauge_value((&other - &x).as_slice());
            let down = -p.gauge_value((&x - &other).as_slice()) - (ro - res.value);
            lipschitz.record(up.max(down).max(0.0));
        }

        if smooth_near(problem, &x, &res, 2e-4) {
            let y = res.unique_closest()?;
            let dir = Vector::from_fn(x.len(), |_, _| rng.gen_range(-1.0..1.0)).normalize();
            let moved = problem.closed_form(&(&x + dir * 1e-4))?;
            continuity.record(moved.closest.iter().map(|q| (q - y).norm()).fold(f64::INFINITY, f64::min));
        }

        if let Some(o) = &oracle {
            if x.norm() > 1.0 {
                unique_outside.record_bool(o.query(&x)?.closest.len() == 1);
            }
        }
    }
    for c in [escapes, contacts, linear, shared, lipschitz, continuity, inclusion, unique_outside] {
        suite.push(c);
    }
    Ok(suite)
}

/// Values pinned by hand, against the closed forms and the oracle.
pub fn pinned_values_suite(budget: usize) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("pinned-values");
    let mut closed = CheckResult::new("closed-form", 1e-9, true);
    let mut brute = CheckResult::new("oracle", 1e-6, true);
    let mut closest = CheckResult::new("closest-points", 1e-6, true);
    let mut gradient = CheckResult::new("gradient", 1e-9, true);
    let cube = DualPolytope::cube(2);
    let sphere_square = Problem::SpherePolytope(cube.clone());
    let cases: Vec<(Problem, Vector, f64, Vec<Vector>)> = vec![
        (sphere_square.clone(), vector(&[0.3, 0.1]), 0.5, vec![vector(&[0.8, 0.6])]),
        (
            Problem::TwoDisksMaxNorm,
            vector(&[0.0, 2.5]),
            1.5,
            vec![vector(&[-1.0, 1.0]), vector(&[1.0, 1.0])],
        ),
        (sphere_square.clone(), vector(&[0.0, 0.0]), 0.5f64.sqrt(), vec![]),
        (Problem::ParabolaMaxNorm, vector(&[0.0, 2.0]), 1.0, vec![]),
        (Problem::ParabolaMaxNorm, vector(&[2.0, 0.0]), 1.0, vec![]),
    ];
    for (problem, x, value, points) in &cases {
        let c = problem.closed_form(x)?;
        let o = DistanceOracle::new(problem.polytope(), problem.boundary(), budget)?.query(x)?;
        closed.record((c.value - value).abs());
        brute.record((o.value - value).abs());
        for (q, r) in points.iter().map(|q| (q, &c)).chain(points.iter().map(|q| (q, &o))) {
            closest.record(r.closest.iter().map(|y| (y - q).norm()).fold(f64::INFINITY, f64::min));
        }
        if !points.is_empty() {
            closest.record_bool(c.closest.len() == points.len() && o.closest.len() == points.len());
        }
    }
    let x = vector(&[0.3, 0.1]);
    let res = sphere_square.closed_form(&x)?;
    let g = grad_rho(&cube, &sphere_square.boundary(), &x, &res)?;
    gradient.record((g - vector(&[-4.0 / 7.0, -3.0 / 7.0])).amax());
    for c in [closed, brute, closest, gradient] {
        suite.push(c);
    }
    Ok(suite)
}

/// The regularity phenomena visible on ridge scans and on the signed
/// distance of an asymmetric gauge.
pub fn ridge_suite(budget: usize) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("ridges");
    let cube = DualPolytope::cube(2);

    let mut smooth_ridge = CheckResult::new("two-disk-axis-two-closest-no-grad-jump", 0.0, true);
    let problem = Problem::TwoDisksMaxNorm;
    let scan = ridge_scan(&cube, &problem.boundary(), &problem.figure_window(), 91, budget)?;
    for c in &scan.cells {
        if c.value.is_some() && c.x[0] == 0.0 && c.x[1] > 2.0 + 1e-9 {
            smooth_ridge.record_bool(c.multi_closest && !c.fd_grad_jump);
        }
    }
    let mut found = CheckResult::new("two-disk-axis-cells-found", 0.0, true);
    found.record_bool(smooth_ridge.count > 0);
    suite.push(smooth_ridge);
    suite.push(found);

    let mut parabola_ridge = CheckResult::new("parabola-multi-closest-on-axis", 0.0, true);
    let mut parabola_kink = CheckResult::new("parabola-flat-cone-second-jump", 0.0, true);
    let problem = Problem::ParabolaMaxNorm;
    let b = problem.boundary();
    let scan = ridge_scan(&cube, &b, &problem.figure_window(), 81, budget)?;
    for c in &scan.cells {
        let x = vector(&c.x);
        if c.value.is_none() || b.region_membership(&x)? == Membership::On {
            continue;
        }
        parabola_ridge.record_bool(c.multi_closest == (c.x[0] == 0.0 && c.x[1] > 0.0));
        if c.x[1] < -0.1 && (c.x[0].abs() + c.x[1]).abs() < 1e-9 {
            parabola_kink.record_bool(c.fd_second_jump && !c.fd_grad_jump);
        }
    }
    suite.push(parabola_ridge);
    suite.push(parabola_kink);

    let mut ball = CheckResult::new("ball-exterior-second-jump-only", 0.0, true);
    let problem = Problem::BallMaxNorm { dim: 2 };
    let scan = ridge_scan(&cube, &problem.boundary(), &problem.figure_window(), 81, budget)?;
    for c in &scan.cells {
        let (a, b) = (c.x[0].abs(), c.x[1].abs());
        let on_line = (b - (a - 1.0)).abs() < 1e-9 || (a - (b - 1.0)).abs() < 1e-9;
        if c.value.is_some() && on_line && a.hypot(b) > 1.0 + 1e-3 {
            ball.record_bool(c.fd_second_jump && !c.fd_grad_jump && c.second_gap > 0.1 && c.first_gap <= 1e-3);
        }
    }
    let mut ball_found = CheckResult::new("ball-exterior-cells-found", 0.0, true);
    ball_found.record_bool(ball.count > 0);
    suite.push(ball);
    suite.push(ball_found);

    let (same, reflected) = triangle_normal_slopes(budget, 360)?;
    let mut asym = CheckResult::new("triangle-same-gauge-slope-gap", 0.0, true);
    asym.record_bool(same > 0.05);
    asym.worst_residual = same;
    let mut refl = CheckResult::new("triangle-reflected-slope-gap", 1e-4, false);
    refl.record(reflected);
    suite.push(asym);
    suite.push(refl);
    Ok(suite)
}

/// Largest gap between the one-sided normal derivatives of the signed
/// distance across the unit circle, for the triangle with vertices at 90°,
/// 210° and 330°: first with the same gauge outside, then with the
/// reflected gauge.
pub fn triangle_normal_slopes(budget: usize, samples: usize) -> Result<(f64, f64)> {
    let tri = DualPolytope::regular_polygon(3, 1.0, std::f64::consts::FRAC_PI_2)?;
    let b = BoundaryShape::unit_sphere(2, Side::Interior);
    let t = 1e-6;
    let gap = |convention| -> Result<f64> {
        let sd = SignedDistance::new(&tri, &b, convention, budget)?;
        let mut worst: f64 = 0.0;
        for k in 0..samples {
            let a = std::f64::consts::TAU * k as f64 / samples as f64;
            let y = vector(&[a.cos(), a.sin()]);
            let nu = -&y;
            let inner = sd.value(&(&y + &nu * t))? / t;
            let outer = -sd.value(&(&y - &nu * t))? / t;
            worst = worst.max((inner - outer).abs());
        }
        Ok(worst)
    };
    Ok((gap(SignedConvention::SameGauge)?, gap(SignedConvention::Reflected)?))
}

/// Three-dimensional cube distance against the planar formula at the
/// projection `(x₁, x₂)` when `|x₃| ≤ ρ`, and both against the oracle.
pub fn projection_suite(samples: usize, budget: usize, seed: u64) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("projection-identity");
    let mut identity = CheckResult::new("3d-equals-2d", 1e-9, true);
    let mut oracle3 = CheckResult::new("3d-vs-oracle", 5e-7, true);
    let mut oracle2 = CheckResult::new("2d-vs-3d-oracle", 5e-7, true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e0);
    let oracle = DistanceOracle::new(DualPolytope::cube(3), BoundaryShape::unit_sphere(3, Side::Exterior), budget)?;
    let mut taken = 0;
    while taken < samples {
        let xh = vector(&[rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]);
        if xh.norm() <= 1.0 + 1e-6 {
            continue;
        }
        let d2 = crate::distance::rho_ball_maxnorm(&xh, 2)?.value;
        let x = vector(&[xh[0], xh[1], rng.gen_range(-d2..d2)]);
        let d3 = crate::distance::rho_ball_maxnorm(&x, 3)?.value;
        if x[2].abs() > d3 {
            identity.record(f64::INFINITY);
            continue;
        }
        taken += 1;
        let o = oracle.query(&x)?.value;
        identity.record((d3 - d2).abs());
        oracle3.record((d3 - o).abs());
        oracle2.record((d2 - o).abs());
    }
    for c in [identity, oracle3, oracle2] {
        suite.push(c);
    }
    Ok(suite)
}

/// Every suite over every example setup.
pub fn full_suite(cfg: &SuiteConfig) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    for p in [DualPolytope::cube(2), DualPolytope::cube(3), DualPolytope::regular_polygon(3, 1.0, 0.0)?] {
        out.push(duality_suite(&p, cfg.duality_samples, cfg.seed));
    }
    for (name, problem) in example_setups() {
        out.push(closed_form_suite(name, &problem, cfg)?);
        out.push(derivative_suite(name, &problem, cfg)?);
        out.push(structural_suite(name, &problem, cfg)?);
    }
    out.push(pinned_values_suite(cfg.budget)?);
    out.push(ridge_suite(cfg.budget)?);
    out.push(projection_suite(100, cfg.budget, cfg.seed)?);
    Ok(out)
}
