//! Text, CSV and JSON renderings of the export records.

use std::fmt::Write as _;

use hecke_core::export::{
    ClassesExport, CuspsExport, PTableExport, ReportRow, SweepExport, TableExport,
};
use serde::Serialize;

use crate::args::Format;
use crate::CliError;

pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_rows(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn strings<const N: usize>(xs: [&str; N]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_default()
}

/// `"4/1"` reads better as `4` outside machine formats.
fn short_rational(s: &str) -> &str {
    s.strip_suffix("/1").unwrap_or(s)
}

fn report_header(timing: bool) -> Vec<String> {
    let mut h = strings([
        "q",
        "mu",
        "g",
        "kappa_sum",
        "m",
        "z_rr",
        "sum_nchi",
        "h_forms",
        "h_dirichlet",
        "y_diff",
        "verdict",
        "error",
    ]);
    if timing {
        h.push("elapsed_ms".into());
    }
    h
}

fn report_record(r: &ReportRow, timing: bool) -> Vec<String> {
    let mut row = vec![
        r.q.to_string(),
        opt(&r.mu),
        opt(&r.g),
        opt(&r.kappa_sum),
        opt(&r.m),
        opt(&r.z_rr),
        opt(&r.sum_nchi),
        opt(&r.h_forms),
        opt(&r.h_dirichlet),
        opt(&r.y_diff),
        r.verdict.to_string(),
        opt(&r.error),
    ];
    if timing {
        row.push(r.elapsed_ms.map(|t| format!("{t:.3}")).unwrap_or_default());
    }
    row
}

pub fn report(r: &ReportRow, format: Format, timing: bool) -> Result<String, CliError> {
    match format {
        Format::Json => json(r),
        Format::Csv => csv_rows(&report_header(timing), &[report_record(r, timing)]),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "q = {}", r.q).unwrap();
            if let Some(err) = &r.error {
                writeln!(s, "  error: {err}").unwrap();
            } else {
                let kappa = r
                    .kappa_sum
                    .as_deref()
                    .map(short_rational)
                    .unwrap_or_default();
                let rows = [
                    ("index mu", opt(&r.mu)),
                    ("genus g", opt(&r.g)),
                    ("sum of kappa", kappa.to_string()),
                    ("divisor degree m", opt(&r.m)),
                    ("z (Riemann-Roch)", opt(&r.z_rr)),
                    ("sum n*(n/q)", opt(&r.sum_nchi)),
                    ("h(-q) by forms", opt(&r.h_forms)),
                    ("h(-q) by Dirichlet", opt(&r.h_dirichlet)),
                    ("m+ - m-", opt(&r.y_diff)),
                ];
                for (name, value) in rows {
                    writeln!(s, "  {name:<20}{value}").unwrap();
                }
            }
            if let Some(t) = r.elapsed_ms {
                writeln!(s, "  {:<20}{t:.3}", "elapsed ms").unwrap();
            }
            writeln!(s, "verdict: {}", if r.verdict { "holds" } else { "FAILS" }).unwrap();
            Ok(s)
        }
    }
}

pub fn summary_line(sweep: &SweepExport) -> String {
    format!(
        "{} primes verified, {} failures",
        sweep.summary.verified, sweep.summary.failures
    )
}

pub fn sweep(sweep: &SweepExport, format: Format, timing: bool) -> Result<String, CliError> {
    match format {
        Format::Json => json(sweep),
        Format::Csv => {
            let rows: Vec<_> = sweep
                .reports
                .iter()
                .map(|r| report_record(r, timing))
                .collect();
            csv_rows(&report_header(timing), &rows)
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "{:>6} {:>8} {:>6} {:>10} {:>7} {:>7} {:>4} {:>7}  verdict",
                "q", "mu", "g", "sum kappa", "m", "z", "h", "m+-m-"
            )
            .unwrap();
            for r in &sweep.reports {
                match &r.error {
                    Some(err) => writeln!(s, "{:>6}  error: {err}", r.q).unwrap(),
                    None => writeln!(
                        s,
                        "{:>6} {:>8} {:>6} {:>10} {:>7} {:>7} {:>4} {:>7}  {}",
                        r.q,
                        opt(&r.mu),
                        opt(&r.g),
                        r.kappa_sum
                            .as_deref()
                            .map(short_rational)
                            .unwrap_or_default(),
                        opt(&r.m),
                        opt(&r.z_rr),
                        opt(&r.h_forms),
                        opt(&r.y_diff),
                        if r.verdict { "ok" } else { "FAIL" }
                    )
                    .unwrap(),
                }
            }
            writeln!(s, "{}", summary_line(sweep)).unwrap();
            Ok(s)
        }
    }
}

pub fn table(t: &TableExport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => json(t),
        Format::Csv => {
            let mut header = strings(["irrep", "degree"]);
            header.extend(t.classes.iter().map(|c| c.label.clone()));
            let rows: Vec<Vec<String>> = t
                .irreps
                .iter()
                .zip(&t.values)
                .map(|(irrep, row)| {
                    let mut r = vec![irrep.label.clone(), irrep.degree.to_string()];
                    r.extend(row.iter().map(|e| e.cell()));
                    r
                })
                .collect();
            csv_rows(&header, &rows)
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "q = {}, mode = {}, conductor = {}",
                t.q, t.mode, t.conductor
            )
            .unwrap();
            if let (Some(g), Some([a, b])) = (t.generator_gsplit, t.generator_gnorm1) {
                writeln!(s, "generators: {g} in F_q^*, {a}+{b}i of norm one").unwrap();
            }
            writeln!(s, "z<n>^k denotes exp(2 pi i k/n)").unwrap();
            for (irrep, row) in t.irreps.iter().zip(&t.values) {
                writeln!(s, "\n{} (degree {})", irrep.label, irrep.degree).unwrap();
                for (class, entry) in t.classes.iter().zip(row) {
                    writeln!(s, "  {:<20}{}", class.label, entry.text()).unwrap();
                }
            }
            Ok(s)
        }
    }
}

pub fn classes(c: &ClassesExport, format: Format) -> Result<String, CliError> {
    let join = |xs: &[u64], sep: &str| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(sep);
    match format {
        Format::Json => json(c),
        Format::Csv => {
            let header = strings([
                "label",
                "kind",
                "parameter",
                "size",
                "order",
                "a",
                "b",
                "c",
                "d",
            ]);
            let rows: Vec<Vec<String>> = c
                .classes
                .iter()
                .map(|r| {
                    let mut row = vec![
                        r.label.clone(),
                        r.kind.to_string(),
                        r.parameter
                            .as_deref()
                            .map(|p| join(p, ";"))
                            .unwrap_or_default(),
                        r.size.to_string(),
                        r.order.to_string(),
                    ];
                    row.extend(r.representative.iter().map(u64::to_string));
                    row
                })
                .collect();
            csv_rows(&header, &rows)
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "q = {}, |PSL2(F_q)| = {}, {} classes",
                c.q,
                c.group_order,
                c.classes.len()
            )
            .unwrap();
            writeln!(
                s,
                "{:<20}{:>10}{:>7}  representative",
                "class", "size", "order"
            )
            .unwrap();
            for r in &c.classes {
                let [a, b, cc, d] = r.representative;
                writeln!(
                    s,
                    "{:<20}{:>10}{:>7}  ({a} {b}; {cc} {d})",
                    r.label, r.size, r.order
                )
                .unwrap();
            }
            Ok(s)
        }
    }
}

pub fn cusps(c: &CuspsExport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => json(c),
        Format::Csv => {
            let rows: Vec<Vec<String>> = c
                .cusps
                .iter()
                .map(|r| {
                    vec![
                        r.r.to_string(),
                        r.s.to_string(),
                        r.width.to_string(),
                        r.kappa.clone(),
                    ]
                })
                .collect();
            csv_rows(&strings(["r", "s", "width", "kappa"]), &rows)
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "q = {}, index {}, {} cusps", c.q, c.index, c.cusps.len()).unwrap();
            writeln!(s, "{:<12}{:>6}  kappa", "cusp", "width").unwrap();
            for r in &c.cusps {
                writeln!(
                    s,
                    "{:<12}{:>6}  {}",
                    format!("{}/{}", r.r, r.s),
                    r.width,
                    short_rational(&r.kappa)
                )
                .unwrap();
            }
            Ok(s)
        }
    }
}

pub fn ptable(p: &PTableExport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => json(p),
        Format::Csv => {
            let mut header = strings(["irrep", "degree"]);
            header.extend((0..p.q).map(|n| format!("p{n}")));
            let rows: Vec<Vec<String>> = p
                .rows
                .iter()
                .map(|r| {
                    let mut row = vec![r.irrep.clone(), r.degree.to_string()];
                    row.extend(r.p.iter().map(u64::to_string));
                    row
                })
                .collect();
            csv_rows(&header, &rows)
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "q = {}: p(n) for n = 0..{}", p.q, p.q - 1).unwrap();
            for r in &p.rows {
                let ps: Vec<String> = r.p.iter().map(u64::to_string).collect();
                writeln!(s, "{:<12}{:>6}  {}", r.irrep, r.degree, ps.join(" ")).unwrap();
            }
            Ok(s)
        }
    }
}
