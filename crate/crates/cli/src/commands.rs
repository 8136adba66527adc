use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use bpb_core::bpb::{bpb_pair, positive_bpb_pair, sm_hnap_correction, umoe_strong_correction, Correction};
use bpb_core::monotonicity::{
    classify_properties, csv_header, csv_rows, fmt_sig, fmt_vec, render_reports, CheckConfig, Property, Verdict,
    DEFAULT_EPS_GRID, MAX_MODULI_DIM,
};
use bpb_core::norms::file::export_space;
use bpb_core::registry::{self, RegistrySpace};
use bpb_core::regression::{render_table, run_space, Row};

use crate::{
    base_config, check_eps, load_space, parse_properties, parse_vector, write_file, BpbArgs, CheckArgs, CmdResult,
    ExportArgs, Failure, ReproduceArgs, Variant, EXIT_FAILS, EXIT_GUARD, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE,
};

fn header(command: &str, fields: &[(&str, String)]) -> String {
    let mut s = format!("# bpblab {command}");
    for (k, v) in fields {
        let _ = write!(s, " | {k} {v}");
    }
    s.push('\n');
    s
}

fn is_modulus(p: Property) -> bool {
    matches!(p, Property::Um | Property::Umoe | Property::Sm | Property::Wm)
}

pub fn check(a: &CheckArgs, out: &mut dyn Write) -> CmdResult<i32> {
    let space = load_space(&a.source)?;
    let base = base_config(&a.common, a.exact)?;
    let mut grid = if a.eps.is_empty() { DEFAULT_EPS_GRID.to_vec() } else { a.eps.clone() };
    for e in &grid {
        check_eps(*e)?;
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let n = space.spec.dim();
    let props = parse_properties(&a.property, n)?;
    if n > MAX_MODULI_DIM && props.iter().any(|p| is_modulus(*p)) {
        return Err(Failure::new(EXIT_GUARD, format!("dimension {n} exceeds the moduli limit {MAX_MODULI_DIM}")));
    }
    let cfg = space.config(&base);
    let class = classify_properties(&space.spec, &props, &grid, &cfg)?;
    let mut text = header(
        "check",
        &[("space", space.name.clone()), ("seed", cfg.seed.to_string()), ("tol", format!("{:e}", cfg.tol))],
    );
    text.push_str(&render_reports(&space.name, &space.spec, &class.reports)?);
    for i in &class.inconsistencies {
        let _ = writeln!(text, "inconsistent: {i}");
    }
    out.write_all(text.as_bytes())?;
    if let Some(dir) = &a.csv {
        write_file(dir, &format!("{}.txt", space.name), &text)?;
        let mut csv = format!("{}\n", csv_header());
        for r in csv_rows(&space.name, &space.spec, &class.reports)? {
            csv.push_str(&r);
            csv.push('\n');
        }
        write_file(dir, &format!("{}.csv", space.name), &csv)?;
    }
    let verdicts: Vec<Verdict> = class.reports.iter().map(|r| r.verdict).collect();
    Ok(if verdicts.contains(&Verdict::FailsWitnessed) {
        EXIT_FAILS
    } else if verdicts.contains(&Verdict::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    })
}

fn render_correction(c: &Correction, text: &mut String) {
    let _ = writeln!(text, "y = {}", fmt_vec(&c.y));
    let _ = writeln!(text, "f = {}", fmt_vec(&c.f));
    let _ = writeln!(text, "dist_primal = {} (bound {})", fmt_sig(c.dist_primal), fmt_sig(c.bound_primal));
    let _ = writeln!(text, "dist_dual = {} (bound {})", fmt_sig(c.dist_dual), fmt_sig(c.bound_dual));
    let _ = writeln!(text, "residual = {}", fmt_sig(c.residual));
    let _ = writeln!(text, "y_positive = {}", c.y_positive);
    let _ = writeln!(text, "f_positive = {}", c.f_positive);
}

pub fn bpb(a: &BpbArgs, out: &mut dyn Write) -> CmdResult<i32> {
    let space = load_space(&a.source)?;
    let cfg = base_config(&a.common, false)?;
    check_eps(a.eps)?;
    let (x, f) = match &a.witness {
        Some(name) => {
            let r = space.registry.as_ref().ok_or_else(|| Failure::new(EXIT_USAGE, "--witness needs --registry"))?;
            let w = r.witness(name).ok_or_else(|| Failure::new(EXIT_USAGE, format!("no witness {name:?} in {}", r.name)))?;
            let f = w.f.clone().ok_or_else(|| Failure::new(EXIT_USAGE, format!("witness {name:?} has no functional")))?;
            (w.x.clone(), f)
        }
        None => match (&a.x, &a.f) {
            (Some(x), Some(f)) => (parse_vector(x)?, parse_vector(f)?),
            _ => return Err(Failure::new(EXIT_USAGE, "give --x and --f, or --witness")),
        },
    };
    let delta = a.delta.unwrap_or(a.eps);
    let variant = match a.variant {
        Variant::Classic => "classic",
        Variant::Positive => "positive",
        Variant::SmHnap => "sm-hnap",
        Variant::UmoeStrong => "umoe-strong",
    };
    let mut text = header(
        "bpb",
        &[
            ("space", space.name.clone()),
            ("variant", variant.into()),
            ("eps", fmt_sig(a.eps)),
            ("seed", cfg.seed.to_string()),
            ("tol", format!("{:e}", cfg.tol)),
        ],
    );
    let _ = writeln!(text, "x = {}", fmt_vec(&x));
    let _ = writeln!(text, "x* = {}", fmt_vec(&f));
    let ok = match a.variant {
        Variant::SmHnap => {
            let r = sm_hnap_correction(&space.spec, &x, &f, a.eps, &|_| delta)?;
            let _ = writeln!(text, "stage y = {}", fmt_vec(&r.stage.0));
            let _ = writeln!(text, "stage y* = {}", fmt_vec(&r.stage.1));
            let _ = writeln!(text, "b = {}", fmt_sig(r.b));
            let _ = writeln!(text, "defect = {}", fmt_sig(r.defect));
            render_correction(&r.correction, &mut text);
            let _ = writeln!(text, "hnap_violation = {}", r.hnap_violation);
            !r.hnap_violation && r.correction.verify(&space.spec, cfg.tol)?
        }
        v => {
            let c = match v {
                Variant::Classic => bpb_pair(&space.spec, &x, &f, a.eps)?,
                Variant::Positive => positive_bpb_pair(&space.spec, &x, &f, a.eps)?,
                _ => umoe_strong_correction(&space.spec, &x, &f, a.eps, &|_| delta)?,
            };
            render_correction(&c, &mut text);
            c.verify(&space.spec, cfg.tol)?
        }
    };
    let _ = writeln!(text, "contract: {}", if ok { "met" } else { "violated" });
    out.write_all(text.as_bytes())?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILS })
}

/// Regression rows, the rendered table and the exit status.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub rows: Vec<Row>,
    pub text: String,
    pub code: i32,
}

/// Runs the regression over `spaces`, writing one moduli CSV per space into
/// `csv` when given.
pub fn reproduce_spaces(spaces: &[RegistrySpace], base: &CheckConfig, csv: Option<&Path>) -> CmdResult<Outcome> {
    let mut rows = Vec::new();
    for s in spaces {
        let o = run_space(s, base)?;
        if let Some(dir) = csv {
            let mut text = format!("{}\n", csv_header());
            for r in csv_rows(&s.name, &s.spec, &o.reports)? {
                text.push_str(&r);
                text.push('\n');
            }
            write_file(dir, &format!("{}.csv", s.name), &text)?;
        }
        rows.extend(o.rows);
    }
    let bad = rows.iter().filter(|r| !r.ok).count();
    let mut text = render_table(&rows);
    let _ = writeln!(text, "{} rows, {bad} mismatches", rows.len());
    Ok(Outcome { rows, text, code: if bad == 0 { EXIT_OK } else { EXIT_FAILS } })
}

pub fn reproduce(a: &ReproduceArgs, out: &mut dyn Write) -> CmdResult<i32> {
    let base = base_config(&a.common, false)?;
    let spaces = registry::standard()?;
    let o = reproduce_spaces(&spaces, &base, a.csv.as_deref())?;
    let head = header("reproduce", &[("seed", base.seed.to_string()), ("tol", format!("{:e}", base.tol))]);
    out.write_all(head.as_bytes())?;
    out.write_all(o.text.as_bytes())?;
    Ok(o.code)
}

pub fn export(a: &ExportArgs, out: &mut dyn Write) -> CmdResult<i32> {
    let names = match &a.registry {
        Some(n) => vec![n.clone()],
        None => registry::standard_names(),
    };
    let lookup = |n: &str| registry::lookup(n).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()));
    match &a.out {
        None if names.len() == 1 => {
            let s = lookup(&names[0])?;
            writeln!(out, "{}", export_space(&s.name, &s.spec, true))?;
        }
        None => return Err(Failure::new(EXIT_USAGE, "exporting every space needs --out DIR")),
        Some(dir) => {
            for n in &names {
                let s = lookup(n)?;
                write_file(dir, &format!("{}.json", s.name), &format!("{}\n", export_space(&s.name, &s.spec, true)))?;
                writeln!(out, "wrote {}", dir.join(format!("{}.json", s.name)).display())?;
            }
        }
    }
    Ok(EXIT_OK)
}
