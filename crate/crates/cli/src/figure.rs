//! Curve data for the mirror and subwavelength-cavity figures.

use std::path::{Path, PathBuf};

use crate::config::{FigureId, Grid, MethodSel};
use crate::error::CliError;
use crate::sweep::{mirror_row, subwavelength_row, tabulate, Point, MIRROR_HEADER, SUBWAVELENGTH_HEADER};
use crate::table::{num, Table};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Swept {
    /// Fixed `r`, swept `d/λ₀`.
    Distance { r: f64 },
    /// Fixed `d/λ₀`, swept `r`.
    Reflection { d_over_lambda: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    swept: Swept,
    grid: Grid,
}

impl Curve {
    fn points(&self) -> Vec<Point> {
        self.grid
            .points()
            .into_iter()
            .map(|x| match self.swept {
                Swept::Distance { r } => Point::from_d_over_lambda(r, x),
                Swept::Reflection { d_over_lambda } => Point::from_d_over_lambda(x, d_over_lambda),
            })
            .collect()
    }
}

fn lin(start: f64, stop: f64, count: usize) -> Grid {
    Grid { start, stop, count, log: false }
}

pub fn curves(id: FigureId) -> Vec<Curve> {
    let vs_d = |rs: &[f64], grid: Grid| {
        rs.iter()
            .map(|&r| Curve { label: format!("r{r}"), swept: Swept::Distance { r }, grid })
            .collect()
    };
    let vs_r = |ds: &[f64], grid: Grid| {
        ds.iter()
            .map(|&d| Curve { label: format!("d{d}"), swept: Swept::Reflection { d_over_lambda: d }, grid })
            .collect()
    };
    match id {
        FigureId::MirrorDielectric => vs_d(&[-1.0, -0.75, -0.5, -0.25], lin(0.0, 2.0, 401)),
        FigureId::MirrorPlasmonic => vs_d(&[0.25, 0.5, 0.75, 1.0], lin(0.0, 2.0, 401)),
        FigureId::SubwlDielectricVsR => vs_r(&[0.005, 0.01, 0.02], lin(-1.0, 0.0, 101)),
        FigureId::SubwlDielectricVsD => vs_d(&[-0.9, -0.5, -0.2], lin(0.0, 0.05, 101)),
        FigureId::SubwlPlasmonicVsR => vs_r(&[0.005, 0.01, 0.02], lin(0.0, 0.95, 96)),
        FigureId::SubwlPlasmonicVsD => vs_d(&[0.5, 0.8, 0.9], lin(0.0, 0.05, 101)),
    }
}

fn is_mirror(id: FigureId) -> bool {
    matches!(id, FigureId::MirrorDielectric | FigureId::MirrorPlasmonic)
}

/// Tables for every curve of `id`, in manifest order.
pub fn figure_tables(id: FigureId, tol: f64) -> Vec<(Curve, Table)> {
    curves(id)
        .into_iter()
        .map(|c| {
            let pts = c.points();
            let table = if is_mirror(id) {
                tabulate(MIRROR_HEADER, &pts, |p| mirror_row(p, MethodSel::All, tol, 0.0))
            } else {
                // a closed mirror (r = −1) only has the limit route
                tabulate(SUBWAVELENGTH_HEADER, &pts, |p| {
                    let m = if p.r.abs() == 1.0 { MethodSel::Limit } else { MethodSel::All };
                    subwavelength_row(p, m, tol)
                })
            };
            (c, table)
        })
        .collect()
}

pub const MANIFEST_HEADER: &[&str] = &["figure", "curve", "file", "axis", "r_mir", "d_over_lambda0", "start", "stop", "points"];

/// Writes one CSV per curve and `manifest.csv` into `dir`; returns the
/// written paths and all cell failures.
pub fn write_figure(id: FigureId, dir: &Path, tol: f64) -> Result<(Vec<PathBuf>, Vec<String>), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut manifest = Table::new(MANIFEST_HEADER);
    let mut paths = Vec::new();
    let mut failures = Vec::new();
    for (curve, table) in figure_tables(id, tol) {
        let file = format!("{}_{}.csv", id, curve.label);
        let path = dir.join(&file);
        table.write_file(&path)?;
        let (axis, r, d) = match curve.swept {
            Swept::Distance { r } => ("d_over_lambda0", num(r), String::new()),
            Swept::Reflection { d_over_lambda } => ("r_mir", String::new(), num(d_over_lambda)),
        };
        manifest.push(vec![
            id.to_string(),
            curve.label.clone(),
            file,
            axis.into(),
            r,
            d,
            num(curve.grid.start),
            num(curve.grid.stop),
            curve.grid.count.to_string(),
        ]);
        failures.extend(table.failures);
        paths.push(path);
    }
    let path = dir.join("manifest.csv");
    manifest.write_file(&path)?;
    paths.push(path);
    Ok((paths, failures))
}
