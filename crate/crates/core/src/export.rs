//! Serializable records for reports, tables, classes, cusps and p-tables.
//! Exact rationals are written as `"num/den"` strings.

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::character_table::{
    build_character_table, build_numeric_character_table, irreps, p_vector_for, table_conductor,
    TableError,
};
use crate::cyclotomic::CycloNumber;
use crate::hecke::{HeckeReport, SweepEntry};
use crate::modcurve::{cusp_representatives, ModCurveError};
use crate::psl2::{enumerate_classes, ClassKind, GroupError};

pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(r))
}

/// One verification result, flattened; numeric fields are absent when the
/// prime failed with an error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub q: u64,
    pub mu: Option<u64>,
    pub g: Option<u64>,
    pub kappa_sum: Option<String>,
    pub m: Option<i64>,
    pub z_rr: Option<i64>,
    pub sum_nchi: Option<i64>,
    pub h_forms: Option<u64>,
    pub h_dirichlet: Option<i64>,
    pub y_diff: Option<i64>,
    pub verdict: bool,
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl ReportRow {
    pub fn from_report(r: &HeckeReport, timing: bool) -> Self {
        ReportRow {
            q: r.q,
            mu: Some(r.mu),
            g: Some(r.g),
            kappa_sum: Some(rational_string(&r.kappa_sum)),
            m: Some(r.m),
            z_rr: Some(r.z_rr),
            sum_nchi: Some(r.sum_nchi),
            h_forms: Some(r.h_forms),
            h_dirichlet: Some(r.h_dirichlet),
            y_diff: Some(r.y_diff),
            verdict: r.verdict,
            error: None,
            elapsed_ms: timing.then_some(r.elapsed.as_secs_f64() * 1e3),
        }
    }

    pub fn from_entry(e: &SweepEntry, timing: bool) -> Self {
        match &e.outcome {
            Ok(r) => Self::from_report(r, timing),
            Err(err) => ReportRow {
                q: e.q,
                mu: None,
                g: None,
                kappa_sum: None,
                m: None,
                z_rr: None,
                sum_nchi: None,
                h_forms: None,
                h_dirichlet: None,
                y_diff: None,
                verdict: false,
                error: Some(err.to_string()),
                elapsed_ms: None,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub q_min: u64,
    pub q_max: u64,
    pub primes: usize,
    pub verified: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepExport {
    pub summary: SweepSummary,
    pub reports: Vec<ReportRow>,
}

impl SweepExport {
    pub fn new(q_min: u64, q_max: u64, entries: &[SweepEntry], timing: bool) -> Self {
        let verified = entries.iter().filter(|e| e.passed()).count();
        SweepExport {
            summary: SweepSummary {
                q_min,
                q_max,
                primes: entries.len(),
                verified,
                failures: entries.len() - verified,
            },
            reports: entries
                .iter()
                .map(|e| ReportRow::from_entry(e, timing))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassRecord {
    pub label: String,
    pub kind: &'static str,
    pub parameter: Option<Vec<u64>>,
    pub size: u64,
    pub representative: [u64; 4],
    pub order: u64,
}

fn class_record(q: u64, kind: ClassKind, size: u64) -> ClassRecord {
    let (name, parameter) = match kind {
        ClassKind::Identity => ("identity", None),
        ClassKind::Split { t } => ("split", Some(vec![t])),
        ClassKind::NonSplit { a, b } => ("nonsplit", Some(vec![a, b])),
        ClassKind::UnipotentPlus => ("unipotent_plus", None),
        ClassKind::UnipotentMinus => ("unipotent_minus", None),
    };
    let rep = kind.representative(q);
    ClassRecord {
        label: kind.to_string(),
        kind: name,
        parameter,
        size,
        representative: rep.entries(),
        order: rep.order(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassesExport {
    pub q: u64,
    pub group_order: u64,
    pub classes: Vec<ClassRecord>,
}

pub fn classes_export(q: u64) -> Result<ClassesExport, GroupError> {
    let classes = enumerate_classes(q)?;
    Ok(ClassesExport {
        q,
        group_order: crate::psl2::group_order(q),
        classes: classes
            .iter()
            .map(|c| class_record(q, c.kind, c.size))
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IrrepRecord {
    pub label: String,
    pub degree: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum EntryRecord {
    Exact {
        conductor: u64,
        coeffs: Vec<String>,
        text: String,
    },
    Numeric {
        re: String,
        im: String,
    },
}

impl EntryRecord {
    pub fn exact(x: &CycloNumber) -> Self {
        EntryRecord::Exact {
            conductor: x.conductor(),
            coeffs: x.coeffs().iter().map(rational_string).collect(),
            text: x.to_string(),
        }
    }

    /// Readable form: the power-basis expression, or `re+imi`.
    pub fn text(&self) -> String {
        match self {
            EntryRecord::Exact { text, .. } => text.clone(),
            EntryRecord::Numeric { .. } => self.cell(),
        }
    }

    /// Compact single-cell form, e.g. `7:[0/1,1/1,1/1]` or `-0.5+1.3228756555i`.
    pub fn cell(&self) -> String {
        match self {
            EntryRecord::Exact {
                conductor, coeffs, ..
            } => format!("{conductor}:[{}]", coeffs.join(",")),
            EntryRecord::Numeric { re, im } => {
                if im.starts_with('-') {
                    format!("{re}{im}i")
                } else {
                    format!("{re}+{im}i")
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableExport {
    pub q: u64,
    pub mode: &'static str,
    pub conductor: u64,
    pub generator_gsplit: Option<u64>,
    pub generator_gnorm1: Option<[u64; 2]>,
    pub classes: Vec<ClassRecord>,
    pub irreps: Vec<IrrepRecord>,
    /// `values[i][c]`: irreducible `i` at class `c`.
    pub values: Vec<Vec<EntryRecord>>,
}

fn decimal(x: f64) -> String {
    let v = if x.abs() < 5e-13 { 0.0 } else { x };
    format!("{v:.12}")
}

/// Exact table when `table_conductor(q) ≤ ceiling`, floating point otherwise.
pub fn table_export(q: u64, ceiling: u64) -> Result<TableExport, TableError> {
    match build_character_table(q, ceiling) {
        Ok(t) => Ok(TableExport {
            q,
            mode: "exact",
            conductor: table_conductor(q),
            generator_gsplit: Some(t.generator_gsplit),
            generator_gnorm1: Some([t.generator_gnorm1.0, t.generator_gnorm1.1]),
            classes: t
                .classes
                .iter()
                .map(|c| class_record(q, c.kind, c.size))
                .collect(),
            irreps: t
                .irreps
                .iter()
                .map(|i| IrrepRecord {
                    label: i.to_string(),
                    degree: i.degree(q),
                })
                .collect(),
            values: t
                .values
                .iter()
                .map(|row| row.iter().map(EntryRecord::exact).collect())
                .collect(),
        }),
        Err(TableError::ExactModeUnavailable { .. }) => {
            let t = build_numeric_character_table(q)?;
            Ok(TableExport {
                q,
                mode: "numeric",
                conductor: table_conductor(q),
                generator_gsplit: None,
                generator_gnorm1: None,
                classes: t
                    .classes
                    .iter()
                    .map(|c| class_record(q, c.kind, c.size))
                    .collect(),
                irreps: t
                    .irreps
                    .iter()
                    .map(|i| IrrepRecord {
                        label: i.to_string(),
                        degree: i.degree(q),
                    })
                    .collect(),
                values: t
                    .values
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|z| EntryRecord::Numeric {
                                re: decimal(z.re),
                                im: decimal(z.im),
                            })
                            .collect()
                    })
                    .collect(),
            })
        }
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuspRecord {
    pub r: i64,
    pub s: i64,
    pub width: u64,
    pub kappa: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuspsExport {
    pub q: u64,
    pub index: u64,
    pub cusps: Vec<CuspRecord>,
}

pub fn cusps_export(q: u64) -> Result<CuspsExport, ModCurveError> {
    let cusps = cusp_representatives(q)?;
    Ok(CuspsExport {
        q,
        index: crate::modcurve::gamma1_index(q),
        cusps: cusps
            .iter()
            .map(|c| CuspRecord {
                r: c.cusp.r,
                s: c.cusp.s,
                width: c.width,
                kappa: rational_string(&c.kappa),
            })
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PTableRecord {
    pub irrep: String,
    pub degree: u64,
    pub p: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PTableExport {
    pub q: u64,
    pub rows: Vec<PTableRecord>,
}

pub fn ptable_export(q: u64) -> Result<PTableExport, TableError> {
    if !crate::field::is_supported_prime(q) {
        return Err(TableError::UnsupportedPrime(q));
    }
    let rows = irreps(q)
        .into_iter()
        .map(|i| {
            let p = p_vector_for(q, i)?;
            Ok(PTableRecord {
                irrep: i.to_string(),
                degree: i.degree(q),
                p: p.0,
            })
        })
        .collect::<Result<_, TableError>>()?;
    Ok(PTableExport { q, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        let r = BigRational::new(6.into(), (-4).into());
        assert_eq!(rational_string(&r), "-3/2");
    }

    #[test]
    fn table_modes() {
        let exact = table_export(7, 1_000).unwrap();
        assert_eq!(exact.mode, "exact");
        assert_eq!(exact.values.len(), 6);
        let numeric = table_export(7, 10).unwrap();
        assert_eq!(numeric.mode, "numeric");
        // P column of pi_plus: conj of the Gauss sum, (-1 - i√7)/2
        let cell = numeric.values[4][4].cell();
        assert_eq!(cell, "-0.500000000000-1.322875655532i");
    }

    #[test]
    fn exports_have_expected_sizes() {
        assert_eq!(classes_export(11).unwrap().classes.len(), 8);
        assert_eq!(cusps_export(11).unwrap().cusps.len(), 10);
        let p = ptable_export(7).unwrap();
        assert_eq!(p.rows.len(), 6);
        assert!(p.rows.iter().all(|r| r.p.iter().sum::<u64>() == r.degree));
    }
}
