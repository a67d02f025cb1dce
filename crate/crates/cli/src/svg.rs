//! Static SVG projections of a trajectory onto a coordinate plane.

use std::fmt::Write as _;
use std::path::Path;

use piecewise_attractor::{Trajectory, TrajectoryPoint};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const CANVAS: f64 = 800.0;
pub const MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    #[default]
    Xy,
    Xz,
    Yz,
}

impl Plane {
    fn project(self, p: &TrajectoryPoint) -> (f64, f64) {
        match self {
            Plane::Xy => (p.x, p.y),
            Plane::Xz => (p.x, p.z),
            Plane::Yz => (p.y, p.z),
        }
    }

    fn labels(self) -> (&'static str, &'static str) {
        match self {
            Plane::Xy => ("X", "Y"),
            Plane::Xz => ("X", "Z"),
            Plane::Yz => ("Y", "Z"),
        }
    }
}

/// Renders one polyline on an 800×800 canvas.
///
/// Both axes share one scale so the projected shape keeps its aspect ratio;
/// the larger extent fills the canvas minus a 5% margin on each side and the
/// vertical axis points up.
pub fn render_projection(traj: &Trajectory, plane: Plane) -> Result<String> {
    if traj.is_empty() {
        return Err(CliError::config("cannot plot an empty trajectory"));
    }
    let projected: Vec<(f64, f64)> = traj.points().iter().map(|p| plane.project(p)).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &projected {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0);
    let usable = CANVAS * (1.0 - 2.0 * MARGIN);
    let scale = if span > 0.0 { usable / span } else { 1.0 };
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let half = CANVAS / 2.0;

    let mut points = String::with_capacity(projected.len() * 16);
    for (k, &(x, y)) in projected.iter().enumerate() {
        if k > 0 {
            points.push(' ');
        }
        let sx = half + (x - cx) * scale;
        let sy = half - (y - cy) * scale;
        write!(points, "{sx:.3},{sy:.3}").expect("writing to a String");
    }

    let (h, v) = plane.labels();
    Ok(format!(
        concat!(
            r#"<?xml version="1.0" encoding="UTF-8"?>"#,
            "\n",
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
            "\n",
            r#"<title>{h}-{v} projection</title>"#,
            "\n",
            r#"<rect width="100%" height="100%" fill="white"/>"#,
            "\n",
            r#"<polyline fill="none" stroke="black" stroke-width="0.6" points="{points}"/>"#,
            "\n</svg>\n"
        ),
        c = CANVAS,
        h = h,
        v = v,
        points = points
    ))
}

pub fn write_projection_svg(traj: &Trajectory, plane: Plane, path: &Path) -> Result<()> {
    let svg = render_projection(traj, plane)?;
    std::fs::write(path, svg).map_err(|e| CliError::io(path, e))
}
