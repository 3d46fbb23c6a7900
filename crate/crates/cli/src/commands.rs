//! The subcommands. Each returns the process outcome; configuration and
//! file-system problems surface as [`Failure::Config`].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use gaugedist::distance::{DistanceField, Problem, DEFAULT_BUDGET};
use gaugedist::regularity::{derivative_bundle, fd_bundle, grad_rho_at_boundary, hj_residual};
use gaugedist::verify::{
    closed_form_suite, derivative_suite, duality_suite, pinned_values_suite, projection_suite, ridge_suite,
    structural_suite, SuiteConfig, SuiteReport,
};
use gaugedist::{BoundaryShape, DualPolytope, Matrix, Membership, Vector};
use serde::Serialize;

use crate::config::{ConfigError, JobConfig, Plane, SuiteName};
use crate::export;
use crate::grid::FieldGrid;

pub enum Failure {
    Config(String),
    Verification,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<gaugedist::Error> for Failure {
    fn from(e: gaugedist::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn io_failure(path: &Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure::Config(format!("{}: {e}", path.display()))
}

/// Command-line values that override the configuration file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    pub resolution: Option<usize>,
}

/// The parsed job with overrides applied and the geometry built.
pub struct Job {
    pub cfg: JobConfig,
    pub polytope: DualPolytope,
    pub boundary: Option<BoundaryShape>,
    pub out: PathBuf,
    pub seed: u64,
    pub budget: usize,
    pub resolution: Option<usize>,
}

impl Job {
    pub fn new(cfg: JobConfig, o: Overrides) -> Result<Self, Failure> {
        let polytope = cfg.polytope.build()?;
        let boundary = match &cfg.boundary {
            Some(b) => Some(b.build(polytope.dim())?),
            None => None,
        };
        let resolution = o.resolution.or(cfg.grid.resolution);
        if resolution.is_some_and(|r| r < 2) {
            return Err(Failure::Config("grid.resolution must be at least 2".into()));
        }
        let out = o.out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&out).map_err(io_failure(&out))?;
        let probe = out.join(".gaugedist-write-check");
        fs::write(&probe, b"").map_err(io_failure(&out))?;
        let _ = fs::remove_file(&probe);
        Ok(Self {
            seed: o.seed.or(cfg.seed).unwrap_or(0x5eed),
            budget: o.budget.or(cfg.budget).unwrap_or(DEFAULT_BUDGET),
            polytope,
            boundary,
            out,
            resolution,
            cfg,
        })
    }

    fn boundary(&self) -> Result<&BoundaryShape, Failure> {
        self.boundary
            .as_ref()
            .ok_or_else(|| Failure::Config("this command needs a [boundary] table".into()))
    }

    fn problem(&self) -> Option<Problem> {
        self.boundary.as_ref().and_then(|b| Problem::recognize(&self.polytope, b))
    }

    fn plane(&self) -> Result<Plane, Failure> {
        let g = &self.cfg.grid;
        let dim = self.polytope.dim();
        if dim == 3 && g.origin.is_none() && g.u.is_none() && g.v.is_none() {
            let v = |c: &[f64]| Vector::from_column_slice(c);
            return Ok(Plane {
                origin: v(&[0.0, 0.0, 0.25]),
                u: v(&[1.0, 0.0, 0.3]),
                v: v(&[0.0, 1.0, 0.2]),
            });
        }
        Ok(g.plane(dim)?)
    }
}

pub fn distfield(job: &Job) -> Result<FieldGrid, Failure> {
    let b = job.boundary()?.clone();
    let window = job.cfg.grid.window(job.problem().map(|p| p.figure_window()))?;
    let resolution = job.resolution.unwrap_or(201);
    let field = DistanceField::new(job.polytope.clone(), b, job.budget)?;
    let grid = FieldGrid::evaluate(&field, &job.plane()?, window, resolution)?;
    let csv = job.out.join("field.csv");
    export::write_csv(&grid, &csv).map_err(io_failure(&csv))?;
    if job.cfg.distfield.pgm {
        let pgm = job.out.join("field.pgm");
        export::write_pgm(&grid, &pgm).map_err(io_failure(&pgm))?;
    }
    if job.cfg.distfield.svg {
        let svg = job.out.join("regions.svg");
        export::write_svg(&grid, &svg).map_err(io_failure(&svg))?;
    }
    Ok(grid)
}

#[derive(Serialize)]
struct SuiteSummary<'a> {
    suite: &'a str,
    passed: bool,
    total_checks: usize,
    checks: &'a [gaugedist::verify::CheckResult],
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    passed: bool,
    total_checks: usize,
    seed: u64,
    budget: usize,
    suites: Vec<SuiteSummary<'a>>,
}

pub fn verify(job: &Job) -> Result<(), Failure> {
    let v = &job.cfg.verify;
    let defaults = SuiteConfig::default();
    let cfg = SuiteConfig {
        resolution: job.resolution.unwrap_or(defaults.resolution),
        budget: job.budget,
        duality_samples: v.duality_samples.unwrap_or(defaults.duality_samples),
        smooth_points: v.smooth_points.unwrap_or(defaults.smooth_points),
        c2_points: v.c2_points.unwrap_or(defaults.c2_points),
        structural_points: v.structural_points.unwrap_or(defaults.structural_points),
        probes: v.probes.unwrap_or(defaults.probes),
        seed: job.seed,
    };
    let problem = job.problem();
    let suites = match &v.suites {
        Some(s) => s.clone(),
        None if problem.is_some() => {
            vec![SuiteName::Duality, SuiteName::ClosedForm, SuiteName::Derivatives, SuiteName::Structure]
        }
        None => vec![SuiteName::Duality],
    };
    let needs_problem = || {
        problem.clone().ok_or_else(|| {
            Failure::Config("this suite needs a boundary with a closed-form distance (parabola, unit sphere or two disks with the cube, or the unit sphere with a polytope whose vertices share one norm)".into())
        })
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for s in suites {
        let name = problem.as_ref().map_or("custom", |p| p.name());
        match s {
            SuiteName::Duality => reports.push(duality_suite(&job.polytope, cfg.duality_samples, cfg.seed)),
            SuiteName::ClosedForm => reports.push(closed_form_suite(name, &needs_problem()?, &cfg)?),
            SuiteName::Derivatives => reports.push(derivative_suite(name, &needs_problem()?, &cfg)?),
            SuiteName::Structure => reports.push(structural_suite(name, &needs_problem()?, &cfg)?),
            SuiteName::Pinned => reports.push(pinned_values_suite(cfg.budget)?),
            SuiteName::Ridges => reports.push(ridge_suite(cfg.budget)?),
            SuiteName::Projection => reports.push(projection_suite(100, cfg.budget, cfg.seed)?),
        }
    }
    let passed = reports.iter().all(SuiteReport::passed);
    let report = VerifyReport {
        passed,
        total_checks: reports.iter().map(SuiteReport::total_checks).sum(),
        seed: cfg.seed,
        budget: cfg.budget,
        suites: reports
            .iter()
            .map(|r| SuiteSummary {
                suite: &r.suite,
                passed: r.passed(),
                total_checks: r.total_checks(),
                checks: &r.checks,
            })
            .collect(),
    };
    let path = job.out.join(v.report.as_deref().unwrap_or("report.json"));
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    fs::write(&path, text + "\n").map_err(io_failure(&path))?;
    for r in &reports {
        println!(
            "{} {}: {} checks",
            if r.passed() { "PASS" } else { "FAIL" },
            r.suite,
            r.total_checks()
        );
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn join(v: impl IntoIterator<Item = f64>) -> String {
    v.into_iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

fn join_matrix(m: &Option<Matrix>) -> String {
    m.as_ref().map_or(String::new(), |m| {
        (0..m.nrows())
            .map(|r| join(m.row(r).iter().cloned()))
            .collect::<Vec<_>>()
            .join("; ")
    })
}

#[derive(Default)]
struct Row {
    x: String,
    status: String,
    rho: String,
    grad: String,
    grad_fd: String,
    hessian: String,
    hessian_fd: String,
    hj_residual: String,
    closest: String,
}

pub fn derivatives(job: &Job) -> Result<(), Failure> {
    let b = job.boundary()?;
    let d = &job.cfg.derivatives;
    let inside = DistanceField::new(job.polytope.clone(), b.clone(), job.budget)?;
    let outside = match b.complement() {
        Some(c) => Some((c.clone(), DistanceField::new(job.polytope.clone(), c, job.budget)?)),
        None => None,
    };
    let mut rows = Vec::new();
    for coords in &d.points {
        let x = Vector::from_column_slice(coords);
        let mut row = Row {
            x: join(coords.iter().cloned()),
            ..Row::default()
        };
        if x.len() != job.polytope.dim() {
            row.status = format!("DimensionMismatch(expected {}, found {})", job.polytope.dim(), x.len());
            rows.push(row);
            continue;
        }
        let membership = b.region_membership(&x)?;
        if membership == Membership::On {
            row.status = "boundary-limit".into();
            row.rho = "0".into();
            match grad_rho_at_boundary(&job.polytope, b, &x) {
                Ok(g) => row.grad = join(g.iter().cloned()),
                Err(e) => row.status = format!("{e:?}"),
            }
            rows.push(row);
            continue;
        }
        let (side, field) = match (membership, &outside) {
            (Membership::Outside, Some((c, f))) => (c, f),
            (Membership::Outside, None) => {
                row.status = "OutsideDomain".into();
                rows.push(row);
                continue;
            }
            _ => (b, &inside),
        };
        let res = match field.query(&x) {
            Ok(r) => r,
            Err(e) => {
                row.status = format!("{e:?}");
                rows.push(row);
                continue;
            }
        };
        row.rho = res.value.to_string();
        row.closest = res
            .closest
            .iter()
            .map(|y| join(y.iter().cloned()))
            .collect::<Vec<_>>()
            .join("; ");
        let value = |z: &Vector| field.value(z).unwrap_or(f64::NAN);
        let fd = fd_bundle(value, &x, d.h_grad, d.h_hess);
        row.grad_fd = join(fd.grad.iter().cloned());
        row.hessian_fd = join_matrix(&fd.hessian);
        row.hj_residual = hj_residual(&job.polytope, value, &x, d.h_grad).to_string();
        match derivative_bundle(&job.polytope, side, &x, &res) {
            Ok(f) => {
                row.status = if f.hessian.is_some() { "ok" } else { "ok-no-hessian" }.into();
                row.grad = join(f.grad.iter().cloned());
                row.hessian = join_matrix(&f.hessian);
            }
            Err(e) => row.status = format!("{e:?}"),
        }
        rows.push(row);
    }
    let path = job.out.join("derivatives.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let write = |w: &mut csv::Writer<fs::File>, r: [&str; 9]| {
        w.write_record(r).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
    };
    write(
        &mut w,
        ["x", "status", "rho", "grad", "grad_fd", "hessian", "hessian_fd", "hj_residual", "closest"],
    )?;
    for r in &rows {
        write(
            &mut w,
            [&r.x, &r.status, &r.rho, &r.grad, &r.grad_fd, &r.hessian, &r.hessian_fd, &r.hj_residual, &r.closest],
        )?;
    }
    w.flush().map_err(io_failure(&path))?;
    Ok(())
}

/// Parses `"x1,x2,..."` points given on the command line.
pub fn parse_points(raw: &[String], dim: usize) -> Result<Vec<Vector>, Failure> {
    raw.iter()
        .map(|s| {
            let coords: Vec<f64> = s
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::Config(format!("point `{s}`: {e}")))?;
            if coords.len() != dim {
                return Err(Failure::Config(format!("point `{s}`: expected {dim} coordinates")));
            }
            Ok(Vector::from_vec(coords))
        })
        .collect()
}

/// `γ(x)` per point, one per line.
pub fn gauge(job: &Job, points: &[Vector], out: &mut impl Write) -> Result<(), Failure> {
    for x in points {
        writeln!(out, "{}", job.polytope.gauge(x)?.value).map_err(|e| Failure::Config(e.to_string()))?;
    }
    Ok(())
}

/// `γ°(x)` per point, or the polar vertices when no point is given.
pub fn polar(job: &Job, points: &[Vector], out: &mut impl Write) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Config(e.to_string());
    if points.is_empty() {
        for z in job.polytope.polar_vertices() {
            writeln!(out, "{}", join(z.iter().cloned())).map_err(io)?;
        }
    }
    for x in points {
        writeln!(out, "{}", job.polytope.support(x)?.value).map_err(io)?;
    }
    Ok(())
}
