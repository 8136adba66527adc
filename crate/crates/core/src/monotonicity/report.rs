use std::fmt::Write;

use super::{PropertyReport, Witness};
use crate::error::Result;
use crate::norms::NormSpec;
use crate::riesz::Vector;

/// Report precision.
pub const DIGITS: usize = 12;

pub fn fmt_sig(v: f64) -> String {
    crate::scalar::fmt_sig(v, DIGITS)
}

pub fn fmt_vec(v: &Vector<f64>) -> String {
    let parts: Vec<String> = v.coords().iter().map(|c| fmt_sig(*c)).collect();
    format!("({})", parts.join(", "))
}

pub fn csv_header() -> &'static str {
    "space,property,eps,delta_hat,witness_norm_plus,witness_norm_minus,verdict"
}

/// One row per (property, ε); properties without a curve get one row with
/// empty ε and δ̂ columns.
pub fn csv_rows(space: &str, spec: &NormSpec, reports: &[PropertyReport]) -> Result<Vec<String>> {
    let mut rows = Vec::new();
    for r in reports {
        match &r.curve {
            Some(c) => {
                for p in &c.samples {
                    let (a, b) = p.witness_norms.map_or((String::new(), String::new()), |(a, b)| (fmt_sig(a), fmt_sig(b)));
                    rows.push(format!(
                        "{space},{},{},{},{a},{b},{}",
                        r.property,
                        fmt_sig(p.eps),
                        fmt_sig(p.delta_hat),
                        r.verdict
                    ));
                }
            }
            None => {
                let (a, b) = match &r.witness {
                    Some(w) => {
                        let (a, b) = w.part_norms(spec)?;
                        (fmt_sig(a), fmt_sig(b))
                    }
                    None => (String::new(), String::new()),
                };
                rows.push(format!("{space},{},,,{a},{b},{}", r.property, r.verdict));
            }
        }
    }
    Ok(rows)
}

fn describe(w: &Witness) -> String {
    match w {
        Witness::Hnap { x, f, sum } => format!("x = {}, f = {}, sum = {}", fmt_vec(x), fmt_vec(f), fmt_sig(*sum)),
        Witness::Umoe { x, eps } => format!("x = {}, eps = {}", fmt_vec(x), fmt_sig(*eps)),
        Witness::Um { x, y, eps } => format!("x = {}, y = {}, eps = {}", fmt_vec(x), fmt_vec(y), fmt_sig(*eps)),
        Witness::Sm { x, eps, delta } | Witness::Wm { x, eps, delta } => {
            format!("x = {}, eps = {}, delta = {}", fmt_vec(x), fmt_sig(*eps), fmt_sig(*delta))
        }
        Witness::StrictMono { lesser, greater } => format!("lesser = {}, greater = {}", fmt_vec(lesser), fmt_vec(greater)),
    }
}

/// Deterministic plain-text rendering.
pub fn render_reports(space: &str, spec: &NormSpec, reports: &[PropertyReport]) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "space: {space}");
    for r in reports {
        let method = r.curve.as_ref().map(|c| format!(" ({})", c.method)).unwrap_or_default();
        let _ = writeln!(out, "[{}] {}{method}", r.property, r.verdict);
        if let Some(w) = &r.witness {
            let (a, b) = w.part_norms(spec)?;
            let _ = writeln!(out, "  witness {}", describe(w));
            let _ = writeln!(out, "  witness norms: plus = {}, minus = {}", fmt_sig(a), fmt_sig(b));
        }
        if let Some(c) = &r.curve {
            for p in &c.samples {
                let _ = writeln!(out, "  eps = {:<6} delta_hat = {}", fmt_sig(p.eps), fmt_sig(p.delta_hat));
            }
        }
        for n in &r.notes {
            let _ = writeln!(out, "  note: {n}");
        }
    }
    Ok(out)
}
