//! Text formats: fixed-precision numbers, CSV tables.

use std::io::{Read, Write};

use kapitza_core::stability::{classify, Stability};
use kapitza_core::{BoundaryCurve, BoundaryKind, DiagramGrid, Trajectory};

use crate::error::{CliError, CliResult};

/// Twelve significant digits, trailing zeros kept. Positional notation for
/// decimal exponents in `[-5, 12)`, scientific otherwise. `-0` prints as `0`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0.00000000000".into();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let e: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&e) {
        format!("{:.*}", (11 - e) as usize, x)
    } else {
        format!("{mant}e{e}")
    }
}

pub fn parse_num(s: &str) -> Option<f64> {
    s.trim().parse().ok()
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).from_reader(r)
}

/// One row of a diagram CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramRow {
    pub alpha: f64,
    pub beta: f64,
    pub trace: f64,
    pub class: Stability,
}

/// Writes `alpha,beta,trace,class`. The class column is derived from the
/// printed trace, so re-classifying a parsed file reproduces it exactly.
pub fn write_diagram_csv<W: Write>(out: W, grid: &DiagramGrid, tol: f64) -> CliResult<()> {
    let mut w = writer(out);
    w.write_record(["alpha", "beta", "trace", "class"])?;
    let g = grid.grid();
    for j in 0..grid.resolution.n_beta {
        let beta = num(g.beta_at(j));
        for i in 0..grid.resolution.n_alpha {
            let trace = num(grid.cell(i, j).trace);
            let printed = parse_num(&trace).unwrap_or(f64::NAN);
            let class = classify(printed, tol).kind.code().to_string();
            w.write_record([num(g.alpha_at(i)).as_str(), &beta, &trace, &class])?;
        }
    }
    w.flush().map_err(|e| CliError::io("<csv>", e))?;
    Ok(())
}

pub fn read_diagram_csv<R: Read>(input: R) -> CliResult<Vec<DiagramRow>> {
    let mut rows = Vec::new();
    let mut r = reader(input);
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != ["alpha", "beta", "trace", "class"] {
        return Err(CliError::Usage(
            "diagram CSV needs header alpha,beta,trace,class".into(),
        ));
    }
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = || CliError::Usage(format!("diagram CSV: malformed row {}", line + 2));
        let field = |k: usize| rec.get(k).and_then(parse_num).ok_or_else(bad);
        let class = rec
            .get(3)
            .and_then(|s| s.chars().next())
            .and_then(Stability::from_code)
            .ok_or_else(bad)?;
        rows.push(DiagramRow {
            alpha: field(0)?,
            beta: field(1)?,
            trace: field(2)?,
            class,
        });
    }
    Ok(rows)
}

/// Writes `curve_id,kind,alpha,beta`, points of each curve sorted by α.
pub fn write_boundary_csv<W: Write>(out: W, curves: &[BoundaryCurve]) -> CliResult<()> {
    let mut w = writer(out);
    w.write_record(["curve_id", "kind", "alpha", "beta"])?;
    for (id, c) in curves.iter().enumerate() {
        let mut pts = c.points.clone();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (a, b) in pts {
            w.write_record([id.to_string().as_str(), c.kind.label(), &num(a), &num(b)])?;
        }
    }
    w.flush().map_err(|e| CliError::io("<csv>", e))?;
    Ok(())
}

pub fn read_boundary_csv<R: Read>(input: R) -> CliResult<Vec<BoundaryCurve>> {
    let mut curves: Vec<(usize, BoundaryCurve)> = Vec::new();
    let mut r = reader(input);
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = || CliError::Usage(format!("boundary CSV: malformed row {}", line + 2));
        let id: usize = rec.get(0).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let kind = match rec.get(1) {
            Some("plus2") => BoundaryKind::TracePlus2,
            Some("minus2") => BoundaryKind::TraceMinus2,
            _ => return Err(bad()),
        };
        let a = rec.get(2).and_then(parse_num).ok_or_else(bad)?;
        let b = rec.get(3).and_then(parse_num).ok_or_else(bad)?;
        match curves.last_mut() {
            Some((last, c)) if *last == id => c.points.push((a, b)),
            _ => curves.push((
                id,
                BoundaryCurve {
                    kind,
                    points: vec![(a, b)],
                    closed_form: false,
                },
            )),
        }
    }
    Ok(curves.into_iter().map(|(_, c)| c).collect())
}

/// Writes `t,theta,omega`, keeping every `every`-th sample plus the last one.
pub fn write_trajectory_csv<W: Write>(out: W, traj: &Trajectory, every: usize) -> CliResult<()> {
    let mut w = writer(out);
    w.write_record(["t", "theta", "omega"])?;
    let every = every.max(1);
    let n = traj.samples.len();
    for (k, (t, s)) in traj.samples.iter().enumerate() {
        if k % every == 0 || k + 1 == n {
            w.write_record([num(*t), num(s.theta), num(s.omega)])?;
        }
    }
    w.flush().map_err(|e| CliError::io("<csv>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(2.0), "2.00000000000");
        assert_eq!(num(-3.0), "-3.00000000000");
        assert_eq!(num(-0.0), "0.00000000000");
        assert_eq!(num(0.1), "0.100000000000");
        assert_eq!(num(-1.2600735106701), "-1.26007351067");
        assert_eq!(num(9.9999999999999), "10.0000000000");
        assert_eq!(num(1.5e-7), "1.50000000000e-7");
        assert_eq!(num(8.24e13), "8.24000000000e13");
        assert_eq!(num(f64::NAN), "nan");
    }

    #[test]
    fn parse_inverts_format() {
        for x in [1.0, -2.5e-9, 3.0e17, 0.7380486899485192] {
            let y = parse_num(&num(x)).unwrap();
            assert!((y - x).abs() <= 1e-11 * x.abs());
        }
    }
}
