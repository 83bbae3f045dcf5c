//! Instance files: bare CSV point lists and a JSON envelope that also
//! carries the exponent, labels, and generator metadata.
//!
//! CSV: UTF-8, one point per line, coordinates comma-separated with `.` as
//! the decimal separator. Floats are written in shortest round-trip form.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Alpha, Point, PointSet};

pub fn write_points_csv(path: impl AsRef<Path>, points: &PointSet) -> Result<()> {
    let mut out = String::new();
    for p in points.points() {
        let row: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a CSV point list; the exponent is not part of the format and must
/// be supplied by the caller.
pub fn read_points_csv(path: impl AsRef<Path>, alpha: Alpha) -> Result<PointSet> {
    let text = fs::read_to_string(path)?;
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let coords: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        let coords = coords
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        points.push(
            Point::new(coords)
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?,
        );
    }
    PointSet::new(points, alpha)
}

/// JSON instance envelope.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub alpha: f64,
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

impl InstanceFile {
    pub fn from_point_set(points: &PointSet) -> Self {
        InstanceFile {
            alpha: points.alpha().value(),
            dim: points.dim(),
            points: points
                .points()
                .iter()
                .map(|p| p.coords().to_vec())
                .collect(),
            labels: None,
            meta: None,
        }
    }

    pub fn to_point_set(&self) -> Result<PointSet> {
        let alpha = Alpha::new(self.alpha)?;
        let mut points = Vec::with_capacity(self.points.len());
        for (i, coords) in self.points.iter().enumerate() {
            if coords.len() != self.dim {
                return Err(Error::Parse(format!(
                    "point {i} has {} coordinates, envelope says dim {}",
                    coords.len(),
                    self.dim
                )));
            }
            points.push(Point::new(coords.clone()).map_err(|e| Error::Parse(e.to_string()))?);
        }
        PointSet::new(points, alpha)
    }
}

pub fn write_instance_json(path: impl AsRef<Path>, file: &InstanceFile) -> Result<()> {
    let mut text = serde_json::to_string_pretty(file)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_instance_json(path: impl AsRef<Path>) -> Result<InstanceFile> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
