//! Result tables as CSV: fixed header, 12 significant digits, `NA` for
//! undefined cells, angles and gaps in units of π.

use std::f64::consts::PI;
use std::io::{self, Write};

use ptwalk_core::scan::{PtScanRow, SweepRow, WindingCell};
use ptwalk_core::topology::PhaseCell;
use ptwalk_core::PtTag;

pub const HEADER: &str = "alpha,beta,t,l1,l2,D,S,surviving_norm,W,gap_zero,gap_pi,pt_phase";
pub const NA: &str = "NA";
const DIGITS: usize = 12;

/// One output line; `None` prints as `NA`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CsvRow {
    pub alpha: f64,
    pub beta: f64,
    pub t: Option<usize>,
    pub l1: f64,
    pub l2: f64,
    pub diffusion: Option<f64>,
    pub entropy: Option<f64>,
    pub surviving_norm: Option<f64>,
    pub winding: Option<i32>,
    pub gap_zero: Option<f64>,
    pub gap_pi: Option<f64>,
    pub pt_phase: Option<PtTag>,
}

pub fn pt_label(tag: PtTag) -> &'static str {
    match tag {
        PtTag::Unbroken => "Unbroken",
        PtTag::BrokenZero => "BrokenZero",
        PtTag::BrokenPi => "BrokenPi",
    }
}

impl From<&SweepRow> for CsvRow {
    fn from(r: &SweepRow) -> Self {
        CsvRow {
            alpha: r.alpha,
            beta: r.beta,
            t: Some(r.t),
            l1: r.l1,
            l2: r.l2,
            diffusion: r.diffusion,
            entropy: r.entropy_bits,
            surviving_norm: Some(r.surviving_norm),
            winding: match r.winding {
                WindingCell::Winding(w) => Some(w.value),
                _ => None,
            },
            gap_zero: r.gaps.map(|g| g.gap_zero),
            gap_pi: r.gaps.map(|g| g.gap_pi),
            pt_phase: r.pt_tag(),
        }
    }
}

impl From<&PhaseCell> for CsvRow {
    fn from(c: &PhaseCell) -> Self {
        CsvRow {
            alpha: c.alpha,
            beta: c.beta,
            l1: 1.0,
            l2: 1.0,
            winding: c.winding.map(|w| w.value),
            gap_zero: Some(c.gaps.gap_zero),
            gap_pi: Some(c.gaps.gap_pi),
            ..CsvRow::default()
        }
    }
}

impl From<&PtScanRow> for CsvRow {
    fn from(r: &PtScanRow) -> Self {
        CsvRow {
            alpha: r.alpha,
            beta: r.beta,
            l1: r.l1,
            l2: r.l2,
            pt_phase: r.phase.as_ref().ok().map(|p| p.tag),
            ..CsvRow::default()
        }
    }
}

/// `%g`-style formatting with `digits` significant digits.
pub fn format_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return NA.into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn num(x: f64) -> String {
    // normalize -0 so that mirrored runs compare equal
    format_g(if x == 0.0 { 0.0 } else { x }, DIGITS)
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| NA.into(), num)
}

impl CsvRow {
    pub fn to_line(&self) -> String {
        [
            num(self.alpha / PI),
            num(self.beta / PI),
            self.t.map_or_else(|| NA.into(), |t| t.to_string()),
            num(self.l1),
            num(self.l2),
            opt(self.diffusion),
            opt(self.entropy),
            opt(self.surviving_norm),
            self.winding.map_or_else(|| NA.into(), |w| w.to_string()),
            opt(self.gap_zero.map(|g| g / PI)),
            opt(self.gap_pi.map(|g| g / PI)),
            self.pt_phase.map_or(NA, pt_label).into(),
        ]
        .join(",")
    }
}

pub fn write_csv<W: Write>(mut w: W, rows: &[CsvRow]) -> io::Result<()> {
    writeln!(w, "{HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.to_line())?;
    }
    w.flush()
}

pub fn to_csv_string(rows: &[CsvRow]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("ASCII output")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ptwalk_core::scan::{run_sweep, SweepSpec};
    use ptwalk_core::topology::phase_cell;

    #[test]
    fn general_format() {
        assert_eq!(format_g(0.0, 12), "0");
        assert_eq!(format_g(1.0, 12), "1");
        assert_eq!(format_g(-0.25, 12), "-0.25");
        assert_eq!(format_g(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_g(2.0 / 3.0 * 100.0, 12), "66.6666666667");
        assert_eq!(format_g(123456789012.0, 12), "123456789012");
        assert_eq!(format_g(1234567890123.0, 12), "1.23456789012e+12");
        assert_eq!(format_g(1.5e-7, 12), "1.5e-07");
        assert_eq!(format_g(0.0001, 12), "0.0001");
        assert_eq!(format_g(0.99999999999999, 12), "1");
        assert_eq!(format_g(f64::NAN, 12), "NA");
    }

    #[test]
    fn three_row_sweep() {
        let spec = SweepSpec {
            alpha_count: 3,
            t_values: vec![2],
            ..SweepSpec::default()
        };
        let rows: Vec<CsvRow> = run_sweep(&spec)
            .unwrap()
            .rows
            .iter()
            .map(CsvRow::from)
            .collect();
        let text = to_csv_string(&rows);
        let lines: Vec<&str> = text.split('\n').collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[4], "");
        assert_eq!(lines[0], HEADER);
        assert!(lines[1..4]
            .iter()
            .all(|l| l.ends_with(",Unbroken") && l.split(',').count() == 12));
        assert!(lines[1].starts_with("-1,0.25,2,1,1,"));
    }

    #[test]
    fn boundary_cell_is_na() {
        let cell = phase_cell(-PI / 4.0, PI / 4.0, 256).unwrap();
        let line = CsvRow::from(&cell).to_line();
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[8], "NA");
        assert_eq!(fields[9], "0");
        assert_eq!(fields[2], "NA");
    }
}
