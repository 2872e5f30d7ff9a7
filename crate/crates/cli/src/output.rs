use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::report::{FormReport, Report};
use crate::run::{CliError, Format};

pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
        Format::Text => Ok(to_text(report)),
    }
}

pub fn to_json(report: &Report) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Invalid(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<Report, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Invalid(e.to_string()))
}

fn csv_err(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("csv: {e}"))
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// `lvalues` flattens to one row per critical point; other commands to one
/// row per root, or per table/threshold row when there are no forms.
pub fn to_csv(report: &Report) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if report.command == "lvalues" {
        w.write_record(["label", "k", "N", "epsilon", "outcome", "s", "L", "L_error", "Lambda"])
            .map_err(csv_err)?;
        for f in &report.forms {
            let base = base_fields(f);
            if f.l.is_empty() {
                let mut row = base.clone();
                row.extend(["", "", "", ""].map(String::from));
                w.write_record(&row).map_err(csv_err)?;
            }
            for (i, ((l, e), lam)) in f.l.iter().zip(&f.l_error).zip(&f.lambda).enumerate() {
                let mut row = base.clone();
                row.extend([(i + 1).to_string(), l.clone(), e.clone(), lam.clone()]);
                w.write_record(&row).map_err(csv_err)?;
            }
        }
    } else if !report.forms.is_empty() {
        w.write_record([
            "label", "k", "N", "epsilon", "outcome", "root", "re", "im", "deviation", "residual", "angle",
        ])
        .map_err(csv_err)?;
        for f in &report.forms {
            let base = base_fields(f);
            let roots = f.circle.as_ref().map(|c| c.roots.as_slice()).unwrap_or_default();
            if roots.is_empty() {
                let mut row = base.clone();
                row.extend(["", "", "", "", "", ""].map(String::from));
                w.write_record(&row).map_err(csv_err)?;
            }
            for (i, r) in roots.iter().enumerate() {
                let mut row = base.clone();
                row.extend([
                    i.to_string(),
                    r.re.clone(),
                    r.im.clone(),
                    r.deviation.clone(),
                    r.residual.clone(),
                    r.angle.clone(),
                ]);
                w.write_record(&row).map_err(csv_err)?;
            }
        }
    } else {
        w.write_record(["section", "k", "m", "N", "value", "least_level", "holds"])
            .map_err(csv_err)?;
        for t in &report.thresholds {
            w.write_record([
                "level-threshold".to_string(),
                t.k.to_string(),
                (t.k / 2 - 1).to_string(),
                opt(t.n),
                opt(t.szego_threshold.clone()),
                opt(t.szego_least_level),
                opt(t.szego_holds),
            ])
            .map_err(csv_err)?;
        }
        for r in &report.table {
            w.write_record([
                "table".to_string(),
                (2 * r.m + 2).to_string(),
                r.m.to_string(),
                r.least_level.to_string(),
                r.at_least.margin.clone(),
                r.least_level.to_string(),
                r.at_least.holds.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(csv_err)?;
    String::from_utf8(bytes).map_err(csv_err)
}

fn base_fields(f: &FormReport) -> Vec<String> {
    vec![
        f.label.clone(),
        opt(f.k),
        opt(f.n),
        opt(f.epsilon),
        f.outcome.clone(),
    ]
}

pub fn to_text(report: &Report) -> String {
    let mut s = String::new();
    for t in &report.thresholds {
        let _ = writeln!(s, "weight {}:", t.k);
        if let (Some(th), Some(least)) = (&t.szego_threshold, t.szego_least_level) {
            let _ = writeln!(s, "  monotone-coefficient threshold {th}, N ≥ {least} sufficient");
        }
        if let Some(c) = &t.large_weight {
            let _ = writeln!(s, "  {}: {} (margin {})", c.name, verdict(c.holds), c.margin);
        }
        for n in &t.notes {
            let _ = writeln!(s, "  note: {n}");
        }
    }
    if !report.table.is_empty() {
        let _ = writeln!(s, "{:>4} {:>6}", "m", "N(m)");
        for r in &report.table {
            let _ = writeln!(s, "{:>4} {:>6}", r.m, r.least_level);
        }
    }
    for f in &report.forms {
        let _ = writeln!(s, "{} ({}): {}", f.label, f.source, f.outcome);
        if let (Some(k), Some(n), Some(e)) = (f.k, f.n, f.epsilon) {
            let _ = writeln!(s, "  k = {k}, N = {n}, ε = {e:+}");
        }
        for (i, l) in f.l.iter().enumerate() {
            let _ = writeln!(s, "  L({}) = {l}", i + 1);
        }
        if let Some(c) = &f.circle {
            let _ = writeln!(
                s,
                "  {} roots, max |√N|ρ| - 1| = {}, circle {}",
                c.roots.len(),
                c.max_deviation,
                verdict(c.passed)
            );
        }
        if let Some(sc) = &f.sign_changes {
            let _ = writeln!(s, "  sign changes {} of {}", sc.count, sc.expected);
        }
        if let Some(a) = &f.angles {
            match (&a.max_residual, &a.error) {
                (Some(r), _) => {
                    let _ = writeln!(s, "  angle residual {r}");
                }
                (None, Some(e)) => {
                    let _ = writeln!(s, "  angles: {e}");
                }
                (None, None) => {
                    let _ = writeln!(s, "  predicted angles {}", a.predicted.join(" "));
                }
            }
        }
        if let Some(c) = &f.criteria {
            for x in c.central.iter().chain(c.large_weight.iter()) {
                let _ = writeln!(s, "  {}: {}", x.name, verdict(x.holds));
            }
        }
        if let Some(fail) = &f.failure {
            let _ = writeln!(s, "  failed at {}: {}", fail.stage, fail.message);
        }
    }
    if !report.forms.is_empty() {
        let _ = writeln!(s, "{} passed, {} failed", report.passed, report.failed);
    }
    s
}

fn verdict(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "fails"
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io("<stdout>".into(), e)),
    }
}
