//! Job configuration read from TOML. Unknown keys are rejected.

use std::fmt;
use std::path::{Path, PathBuf};

use gaugedist::boundary::{ParabolaSide, Side, Window};
use gaugedist::polytope::PolytopeFile;
use gaugedist::{vector, BoundaryShape, DualPolytope, Vector};
use serde::Deserialize;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<gaugedist::Error> for ConfigError {
    fn from(e: gaugedist::Error) -> Self {
        ConfigError(e.to_string())
    }
}

fn err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub polytope: PolytopeConfig,
    pub boundary: Option<BoundaryConfig>,
    #[serde(default)]
    pub grid: GridConfig,
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub distfield: DistfieldConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub derivatives: DerivativesConfig,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    #[default]
    Cube,
    CrossPolytope,
    RegularPolygon,
}

/// A preset, an inline vertex list (optionally with its polar list) or a
/// TOML file holding the same keys as the inline form.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeConfig {
    pub preset: Option<Preset>,
    pub dim: Option<usize>,
    pub sides: Option<usize>,
    pub radius: Option<f64>,
    pub phase: Option<f64>,
    pub vertices: Option<Vec<Vec<f64>>>,
    pub polar_vertices: Option<Vec<Vec<f64>>>,
    pub file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    Parabola,
    Sphere,
    Polygon,
    TwoDisks,
    DiskUnion,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskConfig {
    pub center: [f64; 2],
    pub radius: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    pub kind: BoundaryKind,
    /// `above`/`below` for the parabola, `interior`/`exterior` otherwise.
    pub side: Option<String>,
    pub center: Option<Vec<f64>>,
    pub radius: Option<f64>,
    pub vertices: Option<Vec<[f64; 2]>>,
    pub disks: Option<Vec<DiskConfig>>,
}

/// Planar lattice; in three dimensions the lattice lives on the plane
/// `origin + s u + t v`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub min: Option<[f64; 2]>,
    pub max: Option<[f64; 2]>,
    pub resolution: Option<usize>,
    pub origin: Option<Vec<f64>>,
    pub u: Option<Vec<f64>>,
    pub v: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistfieldConfig {
    #[serde(default = "yes")]
    pub pgm: bool,
    #[serde(default = "yes")]
    pub svg: bool,
}

impl Default for DistfieldConfig {
    fn default() -> Self {
        Self { pgm: true, svg: true }
    }
}

fn yes() -> bool {
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Duality,
    ClosedForm,
    Derivatives,
    Structure,
    Pinned,
    Ridges,
    Projection,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Defaults to every suite that applies to the configured setup.
    pub suites: Option<Vec<SuiteName>>,
    pub duality_samples: Option<usize>,
    pub smooth_points: Option<usize>,
    pub c2_points: Option<usize>,
    pub structural_points: Option<usize>,
    pub probes: Option<usize>,
    pub report: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivativesConfig {
    #[serde(default)]
    pub points: Vec<Vec<f64>>,
    #[serde(default = "default_h_grad")]
    pub h_grad: f64,
    #[serde(default = "default_h_hess")]
    pub h_hess: f64,
}

impl Default for DerivativesConfig {
    fn default() -> Self {
        Self {
            points: Vec::new(),
            h_grad: default_h_grad(),
            h_hess: default_h_hess(),
        }
    }
}

fn default_h_grad() -> f64 {
    1e-5
}

fn default_h_hess() -> f64 {
    1e-4
}

/// Reads and parses a job file; the error message names the file and,
/// for syntax and schema errors, the offending line and key.
pub fn load(path: &Path) -> Result<JobConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| err(format!("{}: {e}", path.display())))?;
    let mut cfg: JobConfig = toml::from_str(&text).map_err(|e| err(format!("{}: {e}", path.display())))?;
    if let Some(file) = &cfg.polytope.file {
        let resolved = path.parent().map(|d| d.join(file)).unwrap_or_else(|| file.clone());
        cfg.polytope.file = Some(resolved);
    }
    Ok(cfg)
}

impl PolytopeConfig {
    pub fn build(&self) -> Result<DualPolytope, ConfigError> {
        if let Some(file) = &self.file {
            if self.vertices.is_some() || self.preset.is_some() {
                return Err(err("polytope: give one of `file`, `vertices` or `preset`"));
            }
            let text = std::fs::read_to_string(file).map_err(|e| err(format!("{}: {e}", file.display())))?;
            let parsed: PolytopeFile = toml::from_str(&text).map_err(|e| err(format!("{}: {e}", file.display())))?;
            return Ok(parsed.build()?);
        }
        if let Some(vertices) = &self.vertices {
            if self.preset.is_some() {
                return Err(err("polytope: give one of `file`, `vertices` or `preset`"));
            }
            let dim = vertices.first().map_or(0, Vec::len);
            let desc = PolytopeFile {
                dim: self.dim.unwrap_or(dim),
                vertices: vertices.clone(),
                polar_vertices: self.polar_vertices.clone(),
            };
            return Ok(desc.build()?);
        }
        if self.polar_vertices.is_some() {
            return Err(err("polytope: `polar_vertices` needs `vertices`"));
        }
        let dim = self.dim.unwrap_or(2);
        Ok(match self.preset.unwrap_or_default() {
            Preset::Cube => DualPolytope::cube(dim),
            Preset::CrossPolytope => DualPolytope::cross_polytope(dim),
            Preset::RegularPolygon => {
                if dim != 2 {
                    return Err(err("polytope: regular-polygon is planar"));
                }
                DualPolytope::regular_polygon(
                    self.sides.ok_or_else(|| err("polytope: regular-polygon needs `sides`"))?,
                    self.radius.unwrap_or(1.0),
                    self.phase.unwrap_or(0.0),
                )?
            }
        })
    }
}

fn side_of(s: Option<&str>) -> Result<Side, ConfigError> {
    match s.unwrap_or("interior") {
        "interior" => Ok(Side::Interior),
        "exterior" => Ok(Side::Exterior),
        other => Err(err(format!("boundary.side: expected `interior` or `exterior`, got `{other}`"))),
    }
}

impl BoundaryConfig {
    pub fn build(&self, dim: usize) -> Result<BoundaryShape, ConfigError> {
        let b = match self.kind {
            BoundaryKind::Parabola => BoundaryShape::parabola(match self.side.as_deref().unwrap_or("above") {
                "above" => ParabolaSide::Above,
                "below" => ParabolaSide::Below,
                other => return Err(err(format!("boundary.side: expected `above` or `below`, got `{other}`"))),
            }),
            BoundaryKind::Sphere => {
                let center = self.center.clone().unwrap_or_else(|| vec![0.0; dim]);
                BoundaryShape::sphere(Vector::from_vec(center), self.radius.unwrap_or(1.0), side_of(self.side.as_deref())?)?
            }
            BoundaryKind::Polygon => {
                let vs = self.vertices.as_ref().ok_or_else(|| err("boundary: polygon needs `vertices`"))?;
                BoundaryShape::polygon(vs.iter().map(|v| vector(v)).collect(), side_of(self.side.as_deref())?)?
            }
            BoundaryKind::TwoDisks => BoundaryShape::two_unit_disks(),
            BoundaryKind::DiskUnion => {
                let ds = self.disks.as_ref().ok_or_else(|| err("boundary: disk-union needs `disks`"))?;
                BoundaryShape::disk_union_exterior(ds.iter().map(|d| (vector(&d.center), d.radius)).collect())?
            }
        };
        if b.dim() != dim {
            return Err(err(format!("boundary has dimension {} but the polytope has dimension {dim}", b.dim())));
        }
        Ok(b)
    }
}

/// Maps lattice coordinates `(s, t)` into the ambient space.
#[derive(Clone, Debug)]
pub struct Plane {
    pub origin: Vector,
    pub u: Vector,
    pub v: Vector,
}

impl Plane {
    pub fn point(&self, st: [f64; 2]) -> Vector {
        &self.origin + &self.u * st[0] + &self.v * st[1]
    }
}

impl GridConfig {
    pub fn window(&self, fallback: Option<Window>) -> Result<Window, ConfigError> {
        match (self.min, self.max, fallback) {
            (Some(min), Some(max), _) => Ok(Window::new(min, max)?),
            (None, None, Some(w)) => Ok(w),
            (None, None, None) => Err(err("grid: `min` and `max` are required for this setup")),
            _ => Err(err("grid: give both `min` and `max`")),
        }
    }

    pub fn plane(&self, dim: usize) -> Result<Plane, ConfigError> {
        let pick = |v: &Option<Vec<f64>>, default: Vector, name: &str| -> Result<Vector, ConfigError> {
            match v {
                Some(c) if c.len() == dim => Ok(Vector::from_vec(c.clone())),
                Some(c) => Err(err(format!("grid.{name}: expected {dim} coordinates, got {}", c.len()))),
                None => Ok(default),
            }
        };
        let axis = |k: usize| Vector::from_fn(dim, |i, _| if i == k { 1.0 } else { 0.0 });
        if dim < 2 {
            return Err(err("grid: the setup must have dimension >= 2"));
        }
        Ok(Plane {
            origin: pick(&self.origin, Vector::zeros(dim), "origin")?,
            u: pick(&self.u, axis(0), "u")?,
            v: pick(&self.v, axis(1), "v")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected_with_a_line() {
        let e = toml::from_str::<JobConfig>("[polytope]\npreset = \"cube\"\nbudjet = 3\n").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("budjet"), "{msg}");
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn presets_build() {
        let cfg: JobConfig = toml::from_str("[polytope]\npreset = \"regular-polygon\"\nsides = 6\n").unwrap();
        assert_eq!(cfg.polytope.build().unwrap().vertices().len(), 6);
        let cfg: JobConfig = toml::from_str("[polytope]\ndim = 3\n").unwrap();
        assert!(cfg.polytope.build().unwrap().is_unit_cube());
    }

    #[test]
    fn corrupted_pair_fails_at_ingestion() {
        let cfg: JobConfig = toml::from_str(
            "[polytope]\nvertices = [[1,1],[-1,1],[-1,-1],[1,-1]]\npolar_vertices = [[1,0],[0,1],[-1,0]]\n",
        )
        .unwrap();
        assert!(cfg.polytope.build().is_err());
    }
}
