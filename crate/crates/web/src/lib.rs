//! wasm-bindgen exports for the browser demo in `www/`. Every export returns
//! a JSON string in the same shape the CLI emits with `--format json`.

use hecke_core::cyclotomic::DEFAULT_CONDUCTOR_CEILING;
use hecke_core::export::{cusps_export, table_export, ReportRow, SweepExport};
use hecke_core::field::is_supported_prime;
use hecke_core::hecke::{sweep_verify, verify_hecke_identity, SweepEntry};
use wasm_bindgen::prelude::*;

/// Largest range end accepted by [`sweep`]; keeps the page responsive.
pub const SWEEP_LIMIT: u32 = 5000;
/// Largest prime for which the page will render a character table.
pub const TABLE_LIMIT: u32 = 199;

fn check_q(q: u32) -> Result<u64, String> {
    let q = u64::from(q);
    if is_supported_prime(q) {
        Ok(q)
    } else {
        Err(format!(
            "q = {q} must be a prime with q = 3 (mod 4) and q > 3"
        ))
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn verify_json(q: u32) -> Result<String, String> {
    let q = check_q(q)?;
    let entry = SweepEntry {
        q,
        outcome: verify_hecke_identity(q),
    };
    to_json(&ReportRow::from_entry(&entry, false))
}

pub fn sweep_json(min: u32, max: u32) -> Result<String, String> {
    if min > max {
        return Err(format!("min {min} exceeds max {max}"));
    }
    if max > SWEEP_LIMIT {
        return Err(format!("max is limited to {SWEEP_LIMIT} in the browser"));
    }
    // one worker: wasm32-unknown-unknown has no threads
    let entries = sweep_verify(u64::from(min), u64::from(max), 1);
    to_json(&SweepExport::new(
        u64::from(min),
        u64::from(max),
        &entries,
        false,
    ))
}

pub fn table_json(q: u32, exact: bool) -> Result<String, String> {
    let q = check_q(q)?;
    if q > u64::from(TABLE_LIMIT) {
        return Err(format!(
            "tables are limited to q <= {TABLE_LIMIT} in the browser"
        ));
    }
    let ceiling = if exact { DEFAULT_CONDUCTOR_CEILING } else { 0 };
    let table = table_export(q, ceiling).map_err(|e| e.to_string())?;
    let cusps = cusps_export(q).map_err(|e| e.to_string())?;
    to_json(&serde_json::json!({ "table": table, "cusps": cusps }))
}

#[wasm_bindgen]
pub fn verify(q: u32) -> Result<String, JsError> {
    verify_json(q).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sweep(min: u32, max: u32) -> Result<String, JsError> {
    sweep_json(min, max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn character_table(q: u32, exact: bool) -> Result<String, JsError> {
    table_json(q, exact).map_err(|e| JsError::new(&e))
}
