//! Grid scans flagging where `ρ` loses regularity.
//!
//! Each node gets four independent flags: several closest points, a jump
//! between one-sided first differences, a jump between one-sided second
//! differences and a tie between closed-form branches. Finite-difference
//! flags are left unset when a stencil point leaves the side of `∂U` that
//! the node lies on.

use rayon::prelude::*;
use serde::Serialize;

use crate::boundary::{BoundaryShape, Membership, Window};
use crate::distance::DistanceField;
use crate::polytope::DualPolytope;
use crate::{Result, Vector};

pub const FIRST_STEP: f64 = 1e-5;
pub const SECOND_STEP: f64 = 1e-3;
pub const FIRST_JUMP: f64 = 1e-3;
pub const SECOND_JUMP: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RidgeCell {
    pub x: Vec<f64>,
    /// `None` when `ρ` could not be evaluated at the node.
    pub value: Option<f64>,
    pub n_closest: usize,
    pub multi_closest: bool,
    pub fd_grad_jump: bool,
    pub fd_second_jump: bool,
    pub region_boundary: bool,
    /// Largest gap between one-sided first differences over the axes.
    pub first_gap: f64,
    /// Largest gap between one-sided second differences over the axes.
    pub second_gap: f64,
    /// The finite-difference stencil crossed `∂U` or left the domain.
    pub stencil_clipped: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RidgeCounts {
    pub cells: usize,
    pub evaluated: usize,
    pub multi_closest: usize,
    pub fd_grad_jump: usize,
    pub fd_second_jump: usize,
    pub region_boundary: usize,
    /// Cells with several closest points but continuous first differences.
    pub multi_without_grad_jump: usize,
    /// Cells with a second-difference jump but continuous first differences.
    pub second_without_first: usize,
}

impl RidgeCounts {
    fn add(mut self, c: &RidgeCell) -> Self {
        self.cells += 1;
        if c.value.is_none() {
            return self;
        }
        self.evaluated += 1;
        self.multi_closest += c.multi_closest as usize;
        self.fd_grad_jump += c.fd_grad_jump as usize;
        self.fd_second_jump += c.fd_second_jump as usize;
        self.region_boundary += c.region_boundary as usize;
        self.multi_without_grad_jump += (c.multi_closest && !c.fd_grad_jump && !c.stencil_clipped) as usize;
        self.second_without_first += (c.fd_second_jump && !c.fd_grad_jump) as usize;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RidgeReport {
    /// `None` for scans over an explicit point list.
    pub window: Option<Window>,
    pub resolution: usize,
    /// Row-major in the second coordinate: cell `(i, j)` is at `i * resolution + j`.
    pub cells: Vec<RidgeCell>,
    pub counts: RidgeCounts,
}

impl RidgeReport {
    pub fn cell(&self, i: usize, j: usize) -> &RidgeCell {
        &self.cells[i * self.resolution + j]
    }
}

/// Scans a `resolution × resolution` lattice over a planar window.
pub fn ridge_scan(
    p: &DualPolytope,
    b: &BoundaryShape,
    window: &Window,
    resolution: usize,
    budget: usize,
) -> Result<RidgeReport> {
    let points: Vec<Vector> = (0..resolution)
        .flat_map(|i| (0..resolution).map(move |j| (i, j)))
        .map(|(i, j)| Vector::from_row_slice(&window.node(i, j, resolution)))
        .collect();
    let mut report = scan_points(p, b, &points, budget)?;
    report.window = Some(*window);
    report.resolution = resolution;
    Ok(report)
}

/// Scans arbitrary points, for slices of higher-dimensional setups.
pub fn scan_points(p: &DualPolytope, b: &BoundaryShape, points: &[Vector], budget: usize) -> Result<RidgeReport> {
    let field = DistanceField::new(p.clone(), b.clone(), budget)?;
    let cells: Vec<RidgeCell> = points.par_iter().map(|x| scan_cell(&field, x)).collect();
    let counts = cells.iter().fold(RidgeCounts::default(), RidgeCounts::add);
    Ok(RidgeReport {
        window: None,
        resolution: points.len(),
        cells,
        counts,
    })
}

fn scan_cell(field: &DistanceField, x: &Vector) -> RidgeCell {
    let mut cell = RidgeCell {
        x: x.iter().cloned().collect(),
        value: None,
        n_closest: 0,
        multi_closest: false,
        fd_grad_jump: false,
        fd_second_jump: false,
        region_boundary: false,
        first_gap: 0.0,
        second_gap: 0.0,
        stencil_clipped: false,
    };
    let Ok(res) = field.query(x) else { return cell };
    cell.value = Some(res.value);
    cell.region_boundary = field.problem().is_some() && res.region.boundary_of_regions;
    cell.n_closest = match field.query_oracle(x) {
        Ok(o) => o.closest.len(),
        Err(_) => res.closest.len(),
    };
    cell.multi_closest = cell.n_closest >= 2;

    let b = field.boundary();
    let side = b.region_membership(x).ok();
    if side == Some(Membership::On) {
        cell.stencil_clipped = true;
        return cell;
    }
    let f0 = res.value;
    let eval = |k: usize, t: f64| -> Option<f64> {
        let mut y = x.clone();
        y[k] += t;
        if b.region_membership(&y).ok() != side {
            return None;
        }
        field.value(&y).ok()
    };
    for k in 0..x.len() {
        let first = (eval(k, FIRST_STEP), eval(k, -FIRST_STEP));
        let second = (
            eval(k, SECOND_STEP),
            eval(k, 2.0 * SECOND_STEP),
            eval(k, -SECOND_STEP),
            eval(k, -2.0 * SECOND_STEP),
        );
        match (first, second) {
            ((Some(fp), Some(fm)), (Some(p1), Some(p2), Some(m1), Some(m2))) => {
                let forward = (fp - f0) / FIRST_STEP;
                let backward = (f0 - fm) / FIRST_STEP;
                cell.first_gap = cell.first_gap.max((forward - backward).abs());
                let h2 = SECOND_STEP * SECOND_STEP;
                let forward2 = (p2 - 2.0 * p1 + f0) / h2;
                let backward2 = (f0 - 2.0 * m1 + m2) / h2;
                cell.second_gap = cell.second_gap.max((forward2 - backward2).abs());
            }
            _ => cell.stencil_clipped = true,
        }
    }
    cell.fd_grad_jump = cell.first_gap > FIRST_JUMP;
    cell.fd_second_jump = cell.second_gap > SECOND_JUMP;
    cell
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::ParabolaSide;

    #[test]
    fn parabola_ridge_is_the_positive_axis() {
        let w = Window::new([-1.0, 0.5], [1.0, 2.5]).unwrap();
        let r = ridge_scan(&DualPolytope::cube(2), &BoundaryShape::parabola(ParabolaSide::Above), &w, 9, 2000).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let c = r.cell(i, j);
                if c.value.is_none() || c.x[1] <= c.x[0] * c.x[0] {
                    continue;
                }
                assert_eq!(c.multi_closest, i == 4, "{c:?}");
                assert_eq!(c.fd_grad_jump, i == 4, "{c:?}");
            }
        }
    }

    #[test]
    fn two_disk_axis_is_smooth_with_two_closest_points() {
        let w = Window::new([-1.0, 2.5], [1.0, 4.0]).unwrap();
        let r = ridge_scan(&DualPolytope::cube(2), &BoundaryShape::two_unit_disks(), &w, 5, 2000).unwrap();
        for j in 0..5 {
            let c = r.cell(2, j);
            assert!(c.multi_closest && !c.fd_grad_jump, "{c:?}");
        }
        assert!(r.counts.multi_without_grad_jump >= 5);
    }
}
