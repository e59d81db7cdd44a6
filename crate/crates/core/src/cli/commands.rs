//! Report builders for the `gram`, `character`, `export-field` and
//! `planewave` subcommands.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::branching::{dual_pair_decomposition_check, maxw_character_series, rational_side_series, BranchingReport};
use crate::conformal::planewave::s_cap_nbar_block;
use crate::conformal::{extract_eh, light_cone_functional, MinkowskiPoint, PlaneWave, PlaneWaveConstraints};
use crate::error::{Error, Result};
use crate::fields::{maxwell_basis, MaxwellBasisLabel, Side, Sign};
use crate::linalg::C64;
use crate::pairing::gram_matrix;
use crate::par::{self, Exec};

/// Version tag written into the first line of exported field files.
pub const FIELD_SCHEMA: &str = "confmax-field-v1";

/// Column names of the exported field table.
pub const FIELD_COLUMNS: [&str; 16] = [
    "x1", "x2", "x3", "t", "e1_re", "e1_im", "e2_re", "e2_im", "e3_re", "e3_im", "h1_re", "h1_im", "h2_re", "h2_im",
    "h3_re", "h3_im",
];

/// Parses a family such as `L+` or `R-`.
pub fn parse_family(s: &str) -> Result<(Side, Sign)> {
    let l: MaxwellBasisLabel = format!("0{s}").parse()?;
    Ok((l.side, l.sign))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub labels: Vec<String>,
    /// Real and imaginary parts in units of `pi^2`.
    pub matrix_pi2: Vec<Vec<[f64; 2]>>,
    pub matrix_raw: Vec<Vec<[f64; 2]>>,
    pub quadrature_order: usize,
    pub estimated_error: f64,
}

pub fn gram_report(side: Side, sign: Sign, k_max: u32, exec: Exec) -> Result<GramReport> {
    let labels: Vec<MaxwellBasisLabel> = (0..=k_max).map(|k| MaxwellBasisLabel::new(k, side, sign)).collect();
    let g = gram_matrix(&labels, exec)?;
    let conv = |s: f64| -> Vec<Vec<[f64; 2]>> {
        g.values.iter().map(|r| r.iter().map(|v| [v.re / s, v.im / s]).collect()).collect()
    };
    Ok(GramReport {
        labels: g.labels.clone(),
        matrix_pi2: conv(PI * PI),
        matrix_raw: conv(1.0),
        quadrature_order: g.quadrature_order,
        estimated_error: g.estimated_error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterRow {
    /// Power of `x`.
    pub order: i32,
    pub sum_side: String,
    pub rational_side: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterReport {
    pub order: u32,
    pub family: String,
    pub rows: Vec<CharacterRow>,
    pub check: BranchingReport,
}

pub fn character_report(n: u32, sign: Sign) -> Result<CharacterReport> {
    let sum = maxw_character_series(n, sign)?;
    let rat = rational_side_series(n, sign)?;
    let s = sign.as_i32();
    let rows = (0..=n)
        .map(|j| CharacterRow {
            order: s * j as i32,
            sum_side: sum.coeff(j).to_string(),
            rational_side: rat.coeff(j).to_string(),
        })
        .collect();
    Ok(CharacterReport {
        order: n,
        family: if sign == Sign::Plus { "+".into() } else { "-".into() },
        rows,
        check: dual_pair_decomposition_check(n, sign)?,
    })
}

/// Grid of `points^4` Minkowski points in `[-half_width, half_width]^4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiGrid {
    pub points: usize,
    pub half_width: f64,
}

impl MinkowskiGrid {
    pub fn coordinates(&self) -> Result<Vec<f64>> {
        if self.points == 0 || !(self.half_width.is_finite() && self.half_width > 0.0) {
            return Err(Error::Domain("grid needs at least one point and a finite positive half-width".into()));
        }
        if self.points == 1 {
            return Ok(vec![0.0]);
        }
        let step = 2.0 * self.half_width / (self.points - 1) as f64;
        Ok((0..self.points).map(|i| -self.half_width + step * i as f64).collect())
    }

    /// Points in row order: `x1` slowest, `t` fastest.
    pub fn iter_points(&self) -> Result<Vec<MinkowskiPoint>> {
        let cs = self.coordinates()?;
        let mut out = Vec::with_capacity(cs.len().pow(4));
        for a in &cs {
            for b in &cs {
                for c in &cs {
                    for d in &cs {
                        out.push(MinkowskiPoint::new(*a, *b, *c, *d));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Writes `E` and `H` of the basis solution at every grid point as CSV.
/// Returns the number of data rows.
pub fn export_field<W: Write>(label: MaxwellBasisLabel, grid: MinkowskiGrid, out: W, exec: Exec) -> Result<usize> {
    let sol = maxwell_basis(label)?;
    let pts = grid.iter_points()?;
    let rows = par::map(exec, &pts, |p| extract_eh(&sol.omega, p));
    let mut out = out;
    writeln!(
        out,
        "# schema: {FIELD_SCHEMA}; label: {label}; grid: {}^4 on [-{h}, {h}]^4",
        grid.points,
        h = grid.half_width
    )?;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(FIELD_COLUMNS).map_err(io)?;
    for (p, r) in pts.iter().zip(rows) {
        let eh = r?;
        let mut rec: Vec<String> = p.to_array().iter().map(|v| format!("{v:e}")).collect();
        for z in eh.e.iter().chain(&eh.h) {
            rec.push(format!("{:e}", z.re));
            rec.push(format!("{:e}", z.im));
        }
        w.write_record(&rec).map_err(io)?;
    }
    w.flush()?;
    Ok(pts.len())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveReport {
    pub wave: PlaneWave,
    pub constraints: PlaneWaveConstraints,
    pub analytic_residual: f64,
    pub triad_determinant: Option<f64>,
    /// Value of the light-cone functional on `[[0, 0], [I, 0]]`; equals `freq`.
    pub light_cone_at_identity: Option<[f64; 2]>,
}

pub fn planewave_report(u: [f64; 3], freq: f64, e0: [C64; 3]) -> Result<PlaneWaveReport> {
    let wave = PlaneWave::new(u, freq, e0)?;
    let cone = light_cone_functional([u[0], u[1], u[2], freq], &s_cap_nbar_block(1.0)).ok().map(|v| [v.re, v.im]);
    Ok(PlaneWaveReport {
        constraints: wave.constraints(),
        analytic_residual: wave.analytic_residual(),
        triad_determinant: wave.triad_determinant().ok(),
        light_cone_at_identity: cone,
        wave,
    })
}
