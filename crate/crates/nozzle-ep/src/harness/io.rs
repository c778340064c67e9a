//! CSV files for fields and background profiles. Every float is written with 17 significant
//! digits, so a write-read cycle is bit-exact.

use std::fs;
use std::path::Path;

use ndarray::Array2;

use super::report::num;
use crate::background::BackgroundSolution;
use crate::domain::Grid;
use crate::error::{Error, Result};
use crate::state::FlowState;

pub const FIELD_HEADER: [&str; 3] = ["r", "theta", "value"];
pub const BACKGROUND_HEADER: [&str; 9] = ["r", "msq", "e", "rho", "u", "p", "phi", "csq", "bern"];
/// File stems of the state fields inside a state directory.
pub const STATE_FIELDS: [&str; 5] = ["u", "v", "phi", "s", "k"];

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse { file: path.display().to_string(), line, msg: e.to_string() }
}

/// `r,theta,value` rows, `θ` fastest.
pub fn write_field(path: &Path, grid: &Grid, field: &Array2<f64>) -> Result<()> {
    grid.check_field(field)?;
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(FIELD_HEADER).map_err(|e| csv_err(path, e))?;
    for i in 0..grid.nr {
        for j in 0..grid.ntheta {
            w.write_record([num(grid.r[i]), num(grid.theta[j]), num(field[[i, j]])]).map_err(|e| csv_err(path, e))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_field`]. Coordinates must match `grid` to `1e-12`.
pub fn read_field(path: &Path, grid: &Grid) -> Result<Array2<f64>> {
    let file = path.display().to_string();
    let bad = |line: usize, msg: String| Error::Parse { file: file.clone(), line, msg };
    let mut rd = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = rd.headers().map_err(|e| csv_err(path, e))?.clone();
    if header.iter().ne(FIELD_HEADER) {
        return Err(bad(1, format!("header `{}`, expected `r,theta,value`", header.iter().collect::<Vec<_>>().join(","))));
    }
    let mut out = grid.zeros();
    let mut n = 0usize;
    for rec in rd.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(n + 2, |p| p.line() as usize);
        if n >= grid.nr * grid.ntheta {
            return Err(bad(line, format!("more than {} data rows", grid.nr * grid.ntheta)));
        }
        let mut vals = [0.0; 3];
        for (k, v) in vals.iter_mut().enumerate() {
            let s = &rec[k];
            *v = s.trim().parse().map_err(|_| bad(line, format!("column `{}`: `{s}` is not a number", FIELD_HEADER[k])))?;
        }
        let (i, j) = (n / grid.ntheta, n % grid.ntheta);
        if (vals[0] - grid.r[i]).abs() > 1e-12 || (vals[1] - grid.theta[j]).abs() > 1e-12 {
            return Err(bad(line, format!("node ({}, {}) expected at r = {}, theta = {}", vals[0], vals[1], grid.r[i], grid.theta[j])));
        }
        out[[i, j]] = vals[2];
        n += 1;
    }
    if n != grid.nr * grid.ntheta {
        return Err(bad(n + 1, format!("{n} data rows, expected {}", grid.nr * grid.ntheta)));
    }
    Ok(out)
}

pub fn write_background(path: &Path, bg: &BackgroundSolution) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(BACKGROUND_HEADER).map_err(|e| csv_err(path, e))?;
    for i in 0..bg.len() {
        let row = [bg.r[i], bg.msq[i], bg.e[i], bg.rho[i], bg.u[i], bg.p[i], bg.phi[i], bg.csq[i], bg.bern[i]];
        w.write_record(row.map(num)).map_err(|e| csv_err(path, e))?;
    }
    w.flush()?;
    Ok(())
}

/// Rows of a background CSV, one `[f64; 9]` per node.
pub fn read_background(path: &Path) -> Result<Vec<[f64; 9]>> {
    let file = path.display().to_string();
    let mut rd = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = rd.headers().map_err(|e| csv_err(path, e))?.clone();
    if header.iter().ne(BACKGROUND_HEADER) {
        return Err(Error::Parse { file, line: 1, msg: "unexpected background header".into() });
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let mut row = [0.0; 9];
        for (k, v) in row.iter_mut().enumerate() {
            *v = rec[k].trim().parse().map_err(|_| Error::Parse { file: file.clone(), line, msg: format!("column `{}`: `{}` is not a number", BACKGROUND_HEADER[k], &rec[k]) })?;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// One CSV per field in `dir`, named after [`STATE_FIELDS`].
pub fn write_state(dir: &Path, grid: &Grid, state: &FlowState) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (name, f) in STATE_FIELDS.iter().zip([&state.u, &state.v, &state.phi, &state.s, &state.k]) {
        write_field(&dir.join(format!("{name}.csv")), grid, f)?;
    }
    Ok(())
}

pub fn read_state(dir: &Path, grid: &Grid) -> Result<FlowState> {
    let mut f = STATE_FIELDS.iter().map(|n| read_field(&dir.join(format!("{n}.csv")), grid)).collect::<Result<Vec<_>>>()?;
    let k = f.pop().unwrap();
    let s = f.pop().unwrap();
    let phi = f.pop().unwrap();
    let v = f.pop().unwrap();
    let u = f.pop().unwrap();
    Ok(FlowState { u, v, phi, s, k })
}
