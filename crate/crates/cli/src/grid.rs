//! Distance values over a lattice, evaluated in parallel.

use gaugedist::boundary::Window;
use gaugedist::distance::DistanceField;
use gaugedist::Error;
use rayon::prelude::*;

use crate::config::Plane;

/// Label of cells where the distance is not defined, such as the inside of
/// the disks when `U` is their exterior.
pub const OUTSIDE_DOMAIN: &str = "outside-domain";

#[derive(Clone, Debug, PartialEq)]
pub struct FieldCell {
    pub i: usize,
    pub j: usize,
    pub x: Vec<f64>,
    pub rho: f64,
    pub region: String,
    pub n_closest: usize,
    pub boundary_of_regions: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    pub window: Window,
    pub resolution: usize,
    /// Row-major in the first lattice index.
    pub cells: Vec<FieldCell>,
}

impl FieldGrid {
    pub fn evaluate(field: &DistanceField, plane: &Plane, window: Window, resolution: usize) -> Result<Self, Error> {
        let cells = (0..resolution * resolution)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / resolution, k % resolution);
                let x = plane.point(window.node(i, j, resolution));
                let coords = x.iter().cloned().collect();
                match field.query(&x) {
                    Ok(r) => Ok(FieldCell {
                        i,
                        j,
                        x: coords,
                        rho: r.value,
                        region: r.region.label(),
                        n_closest: r.closest.len(),
                        boundary_of_regions: r.region.boundary_of_regions,
                    }),
                    Err(Error::OutsideDomain) => Ok(FieldCell {
                        i,
                        j,
                        x: coords,
                        rho: 0.0,
                        region: OUTSIDE_DOMAIN.to_string(),
                        n_closest: 0,
                        boundary_of_regions: false,
                    }),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            window,
            resolution,
            cells,
        })
    }

    pub fn cell(&self, i: usize, j: usize) -> &FieldCell {
        &self.cells[i * self.resolution + j]
    }

    /// Distinct region labels in first-seen order.
    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for c in &self.cells {
            if !out.contains(&c.region) {
                out.push(c.region.clone());
            }
        }
        out
    }
}
