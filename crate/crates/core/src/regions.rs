//! Heisenberg-allowed bands for `<ΔJ_x²>` against `|<J_z>|` when
//! `<J_x> = <J_y> = 0`, with the spin-squeezing line `|<J_z>|/2`.

use std::io::Write;

use serde::Serialize;

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionRow {
    pub jz_abs: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub squeeze_line: f64,
    pub feasible: bool,
}

impl RegionRow {
    /// Whether `var_x` lies in `[lower, upper]` up to `tol`.
    pub fn contains(&self, var_x: f64, tol: f64) -> bool {
        match (self.lower, self.upper) {
            (Some(lo), Some(hi)) => var_x >= lo - tol && var_x <= hi + tol,
            _ => false,
        }
    }

    /// Feasible with part of the band below the squeezing line.
    pub fn squeezable(&self) -> bool {
        matches!(self.lower, Some(lo) if self.feasible && lo < self.squeeze_line)
    }
}

/// Band `½{K ∓ √(K² − ξ jz²)}` with `K = J(J+1) − jz²`.
pub fn hup_bounds(j: f64, xi: f64, jz_abs: f64) -> Result<RegionRow> {
    if !(j > 0.0) || !j.is_finite() {
        return invalid("J must be positive");
    }
    if !(xi >= 1.0) || !xi.is_finite() {
        return invalid("xi must be at least 1");
    }
    if !(0.0..=j).contains(&jz_abs) {
        return invalid("|<Jz>| must lie in [0, J]");
    }
    let k = j * (j + 1.0) - jz_abs * jz_abs;
    let radicand = k * k - xi * jz_abs * jz_abs;
    let squeeze_line = jz_abs / 2.0;
    if radicand < 0.0 {
        return Ok(RegionRow { jz_abs, lower: None, upper: None, squeeze_line, feasible: false });
    }
    let r = radicand.sqrt();
    Ok(RegionRow {
        jz_abs,
        lower: Some((0.5 * (k - r)).max(0.0)),
        upper: Some(0.5 * (k + r)),
        squeeze_line,
        feasible: true,
    })
}

/// Rows on a uniform `|<J_z>|` grid over `[0, J]`.
pub fn region_grid(j: f64, xi: f64, n_points: usize) -> Result<Vec<RegionRow>> {
    if n_points < 2 {
        return invalid("a grid needs at least two points");
    }
    (0..n_points)
        .map(|i| {
            let jz = if i + 1 == n_points { j } else { j * i as f64 / (n_points - 1) as f64 };
            hup_bounds(j, xi, jz)
        })
        .collect()
}

/// Fraction of grid rows whose band reaches below the squeezing line.
pub fn feasible_squeezed_fraction(rows: &[RegionRow]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    rows.iter().filter(|r| r.squeezable()).count() as f64 / rows.len() as f64
}

/// `4 <ΔJ_x²><ΔJ_y²> / <J_z>²`, the uncertainty ratio used as `ξ`.
pub fn measured_xi(var_x: f64, var_y: f64, jz_abs: f64) -> Option<f64> {
    (jz_abs > 0.0).then(|| 4.0 * var_x * var_y / (jz_abs * jz_abs))
}

/// `%.{sig}g`-style formatting.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sig = sig.max(1);
    let exp = format!("{:.*e}", sig - 1, x);
    let (mantissa, e) = exp.split_once('e').expect("exponent form");
    let e: i32 = e.parse().expect("integer exponent");
    if e < -4 || e >= sig as i32 {
        let m = trim_zeros(mantissa);
        let sign = if e < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", e.abs());
    }
    let decimals = (sig as i32 - 1 - e).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CSV_HEADER: [&str; 5] = ["jz_over_J", "lower_over_J", "upper_over_J", "squeeze_line_over_J", "feasible"];

/// CSV with every length in units of `J`; infeasible bounds are empty fields.
pub fn write_region_csv<W: Write>(rows: &[RegionRow], j: f64, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Invariant(format!("csv output failed: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    let f = |x: f64| format_sig(x / j, 12);
    for r in rows {
        w.write_record([
            f(r.jz_abs),
            r.lower.map(f).unwrap_or_default(),
            r.upper.map(f).unwrap_or_default(),
            f(r.squeeze_line),
            if r.feasible { "1".into() } else { "0".into() },
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Invariant(format!("csv output failed: {e}")))?;
    Ok(())
}
