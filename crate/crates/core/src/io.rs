//! Point sets and triangulations on disk.
//!
//! Points are read from CSV (`x,y` per line, optional header, `#` comments) or
//! JSON (`[[x, y], …]`), chosen by extension. Every write goes to a sibling
//! temporary file first and is renamed into place, so a failed run never
//! leaves a partial output behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{PcdError, Result};
use crate::geom2::{DelaunayTriangulation, Point2};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PcdError + '_ {
    move |source| PcdError::Io { path: path.to_path_buf(), source }
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> PcdError {
    PcdError::Parse { path: path.to_path_buf(), line, msg: msg.into() }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(io_err(path))
}

/// Writes `contents` to `path` atomically.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let mut tmp = PathBuf::from(path);
    let name = path
        .file_name()
        .ok_or_else(|| parse_err(path, 0, "not a file path"))?
        .to_string_lossy()
        .into_owned();
    tmp.set_file_name(format!(".{name}.tmp"));
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(path)(e)
    })
}

pub fn parse_points_csv(text: &str, path: &Path) -> Result<Vec<Point2>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(parse_err(path, i + 1, format!("expected 2 fields, found {}", fields.len())));
        }
        match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
            (Ok(x), Ok(y)) => out.push(Point2::new(x, y).map_err(|e| parse_err(path, i + 1, e.to_string()))?),
            _ if out.is_empty() && fields[0].parse::<f64>().is_err() && fields[1].parse::<f64>().is_err() => {}
            _ => return Err(parse_err(path, i + 1, format!("cannot parse {line:?} as two numbers"))),
        }
    }
    Ok(out)
}

pub fn parse_points_json(text: &str, path: &Path) -> Result<Vec<Point2>> {
    serde_json::from_str(text).map_err(|e| parse_err(path, e.line(), e.to_string()))
}

/// Reads a point file; `.json` is parsed as JSON, anything else as CSV.
pub fn read_points(path: &Path) -> Result<Vec<Point2>> {
    let text = read_text(path)?;
    if is_json(path) {
        parse_points_json(&text, path)
    } else {
        parse_points_csv(&text, path)
    }
}

pub fn points_to_csv(points: &[Point2]) -> String {
    let mut s = String::from("x,y\n");
    for p in points {
        s.push_str(&format!("{},{}\n", p.x(), p.y()));
    }
    s
}

pub fn write_points(path: &Path, points: &[Point2]) -> Result<()> {
    if is_json(path) {
        let mut s = serde_json::to_string(points)?;
        s.push('\n');
        write_atomic(path, s.as_bytes())
    } else {
        write_atomic(path, points_to_csv(points).as_bytes())
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// `{"points": [[x, y], …], "cells": [[i, j, k], …]}`.
pub fn write_triangulation(path: &Path, dt: &DelaunayTriangulation) -> Result<()> {
    write_atomic(path, to_json_pretty(dt)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2::delaunay;

    fn pts(c: &[(f64, f64)]) -> Vec<Point2> {
        c.iter().map(|&(x, y)| Point2::new(x, y).unwrap()).collect()
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let p = pts(&[(0.1, 0.2), (1.0 / 3.0, 2.5e-17), (-4.0, 7.0)]);
        write_points(&path, &p).unwrap();
        assert_eq!(read_points(&path).unwrap(), p);
        let path = dir.path().join("p.json");
        write_points(&path, &p).unwrap();
        assert_eq!(read_points(&path).unwrap(), p);
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 2);
    }

    #[test]
    fn csv_variants() {
        let p = Path::new("mem.csv");
        assert_eq!(parse_points_csv("0.5,0.5\n\n# c\n1, 2\n", p).unwrap().len(), 2);
        assert_eq!(parse_points_csv("x,y\n0.5,0.5\n", p).unwrap().len(), 1);
        assert!(parse_points_csv("", p).unwrap().is_empty());
        let err = parse_points_csv("0,0\n1,a\n", p).unwrap_err();
        assert!(matches!(err, PcdError::Parse { line: 2, .. }));
        assert!(parse_points_csv("1,2,3\n", p).is_err());
        assert!(parse_points_csv("nan,1\n", p).is_err());
    }

    #[test]
    fn missing_file_carries_path() {
        let err = read_points(Path::new("/nonexistent/pts.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/pts.csv"));
        assert!(matches!(err, PcdError::Io { .. }));
    }

    #[test]
    fn triangulation_json_shape() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.json");
        let dt = delaunay(&pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])).unwrap();
        write_triangulation(&path, &dt).unwrap();
        let v: serde_json::Value = serde_json::from_str(&read_text(&path).unwrap()).unwrap();
        assert_eq!(v["points"].as_array().unwrap().len(), 3);
        assert_eq!(v["cells"].as_array().unwrap().len(), 1);
    }
}
