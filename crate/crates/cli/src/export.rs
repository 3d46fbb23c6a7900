//! CSV field dumps, 16-bit PGM heat maps and SVG region maps.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use crate::grid::{FieldGrid, OUTSIDE_DOMAIN};

/// Writes one row per cell: lattice indices, coordinates, `ρ`, region
/// label, number of closest points and the region-tie flag.
pub fn write_csv(grid: &FieldGrid, path: &Path) -> io::Result<()> {
    let dim = grid.cells.first().map_or(2, |c| c.x.len());
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["i".to_string(), "j".to_string()];
    header.extend((1..=dim).map(|k| format!("x{k}")));
    header.extend(["rho", "region", "n_closest", "boundary_of_regions"].map(String::from));
    w.write_record(&header)?;
    for c in &grid.cells {
        let mut row = vec![c.i.to_string(), c.j.to_string()];
        row.extend(c.x.iter().map(|v| v.to_string()));
        row.push(c.rho.to_string());
        row.push(c.region.clone());
        row.push(c.n_closest.to_string());
        row.push(c.boundary_of_regions.to_string());
        w.write_record(&row)?;
    }
    w.flush()
}

/// Reads back a file written by [`write_csv`].
#[cfg(test)]
fn read_csv(path: &Path) -> io::Result<Vec<crate::grid::FieldCell>> {
    use crate::grid::FieldCell;
    let bad = |e: String| io::Error::new(io::ErrorKind::InvalidData, e);
    let mut r = csv::Reader::from_path(path)?;
    let dim = r.headers()?.len() - 6;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let num = |k: usize| rec[k].parse::<f64>().map_err(|e| bad(format!("column {k}: {e}")));
        let int = |k: usize| rec[k].parse::<usize>().map_err(|e| bad(format!("column {k}: {e}")));
        out.push(FieldCell {
            i: int(0)?,
            j: int(1)?,
            x: (0..dim).map(|k| num(2 + k)).collect::<io::Result<_>>()?,
            rho: num(2 + dim)?,
            region: rec[3 + dim].to_string(),
            n_closest: int(4 + dim)?,
            boundary_of_regions: rec[5 + dim] == *"true",
        });
    }
    Ok(out)
}

/// Binary 16-bit PGM with `ρ` scaled to the full range; the top row is the
/// largest second coordinate. Cells outside the domain are black.
pub fn write_pgm(grid: &FieldGrid, path: &Path) -> io::Result<()> {
    let n = grid.resolution;
    let inside = grid.cells.iter().filter(|c| c.region != OUTSIDE_DOMAIN);
    let (lo, hi) = inside.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| (lo.min(c.rho), hi.max(c.rho)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut bytes = format!("P5\n{n} {n}\n65535\n").into_bytes();
    for row in (0..n).rev() {
        for col in 0..n {
            let c = grid.cell(col, row);
            let level = if c.region == OUTSIDE_DOMAIN {
                0
            } else {
                (((c.rho - lo) / span) * 65535.0).round().clamp(0.0, 65535.0) as u16
            };
            bytes.extend_from_slice(&level.to_be_bytes());
        }
    }
    std::fs::File::create(path)?.write_all(&bytes)
}

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

/// One filled group of cells per region label, dashed lines between cells
/// with different labels and a legend.
pub fn write_svg(grid: &FieldGrid, path: &Path) -> io::Result<()> {
    let n = grid.resolution;
    let cell = (600.0 / n as f64).max(1.0);
    let size = cell * n as f64;
    let labels = grid.labels();
    let legend_h = 18.0 * labels.len() as f64 + 10.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{}" viewBox="0 0 {size} {}">"#,
        size + legend_h,
        size + legend_h
    );
    let w = &grid.window;
    let _ = writeln!(
        s,
        "<title>window [{}, {}] x [{}, {}], {n}x{n}</title>",
        w.min[0], w.max[0], w.min[1], w.max[1]
    );
    let px = |i: usize| i as f64 * cell;
    let py = |j: usize| size - (j + 1) as f64 * cell;
    for (k, label) in labels.iter().enumerate() {
        let color = if label == OUTSIDE_DOMAIN { "#ffffff" } else { PALETTE[k % PALETTE.len()] };
        let _ = writeln!(s, r#"<g fill="{color}" data-region="{label}">"#);
        for c in grid.cells.iter().filter(|c| &c.region == label) {
            let _ = writeln!(
                s,
                r#"<rect x="{:.3}" y="{:.3}" width="{cell:.3}" height="{cell:.3}"/>"#,
                px(c.i),
                py(c.j)
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("<g stroke=\"#000\" stroke-width=\"1\" stroke-dasharray=\"3,2\">\n");
    for i in 0..n {
        for j in 0..n {
            let here = &grid.cell(i, j).region;
            if i + 1 < n && grid.cell(i + 1, j).region != *here {
                let x = px(i + 1);
                let _ = writeln!(s, r#"<line x1="{x:.3}" y1="{:.3}" x2="{x:.3}" y2="{:.3}"/>"#, py(j), py(j) + cell);
            }
            if j + 1 < n && grid.cell(i, j + 1).region != *here {
                let y = py(j);
                let _ = writeln!(s, r#"<line x1="{:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}"/>"#, px(i), px(i) + cell);
            }
        }
    }
    s.push_str("</g>\n");
    for (k, label) in labels.iter().enumerate() {
        let color = if label == OUTSIDE_DOMAIN { "#ffffff" } else { PALETTE[k % PALETTE.len()] };
        let y = size + 8.0 + 18.0 * k as f64;
        let _ = writeln!(
            s,
            r##"<rect x="8" y="{y}" width="12" height="12" fill="{color}" stroke="#000"/><text x="26" y="{}" font-size="12" font-family="monospace">{label}</text>"##,
            y + 11.0
        );
    }
    s.push_str("</svg>\n");
    std::fs::write(path, s)
}
