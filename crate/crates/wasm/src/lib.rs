//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string; the page does the drawing. The work is
//! done by plain Rust functions so that it can be tested off the browser.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use menon_core::arith::{gcd, prime_power};
use menon_core::oracle::{self, SubsetCensus};
use menon_core::{FunctionTag, MemoCache, MenonParams, MenonStrategy, SequenceTable, SieveTables};

/// Largest n the page may enumerate; 2^20 subsets stay interactive.
pub const MAX_CENSUS_N: u64 = 20;
/// Largest n for tables and route comparisons.
pub const MAX_TABLE_N: u64 = 2000;

fn optional_k(k: u32) -> Option<u64> {
    (k > 0).then_some(u64::from(k))
}

pub fn sequence_json(function: &str, k: Option<u64>, n_max: u64) -> Result<String, String> {
    if n_max > MAX_TABLE_N {
        return Err(format!("n_max is capped at {MAX_TABLE_N} in the demo"));
    }
    let tag: FunctionTag = function
        .parse()
        .map_err(|e: menon_core::Error| e.to_string())?;
    let k = if tag.needs_k() { k } else { None };
    SequenceTable::compute(tag, k, n_max, MenonStrategy::Auto)
        .map(|t| t.to_json())
        .map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct GcdClass {
    pub gcd: u64,
    pub subsets: u64,
    /// f(⌊n/gcd⌋) or f_k(⌊n/gcd⌋); always equal to `subsets`.
    pub scaled_count: String,
    pub coprime_to_n: bool,
    /// gcd(gcd - 1, n), the weight of this class in the Menon-type sum.
    pub weight: u64,
}

#[derive(Debug, Serialize)]
pub struct Census {
    pub n: u64,
    pub k: Option<u64>,
    pub classes: Vec<GcdClass>,
    pub qualifying: String,
    pub menon_sum: String,
}

pub fn census(n: u64, k: Option<u64>) -> Result<Census, String> {
    let census = SubsetCensus::enumerate_with_limit(n, MAX_CENSUS_N).map_err(|e| e.to_string())?;
    let sieve = SieveTables::build(n).map_err(|e| e.to_string())?;
    let mut cache = MemoCache::new();
    let classes = (1..=n)
        .map(|j| {
            let m = n / j;
            let scaled = match k {
                None => cache.f(m, &sieve),
                Some(k) => cache.f_k(m, k, &sieve),
            }
            .map_err(|e| e.to_string())?;
            Ok(GcdClass {
                gcd: j,
                subsets: census.with_gcd(j, k),
                scaled_count: scaled.to_string(),
                coprime_to_n: gcd(j, n) == 1,
                weight: gcd(j - 1, n),
            })
        })
        .collect::<Result<_, String>>()?;
    let sum = census.menon_sum(k);
    Ok(Census {
        n,
        k,
        classes,
        qualifying: sum.count.to_string(),
        menon_sum: sum.total.to_string(),
    })
}

#[derive(Debug, Serialize)]
pub struct Route {
    pub name: &'static str,
    pub value: String,
    /// Fresh f / f_k evaluations the route needed.
    pub evaluations: u64,
}

/// M̄(n) or M̄_k(n) by every applicable route.
pub fn routes(n: u64, k: Option<u64>) -> Result<Vec<Route>, String> {
    if n == 0 || n > MAX_TABLE_N {
        return Err(format!("n must be in 1..={MAX_TABLE_N}"));
    }
    let sieve = SieveTables::build(n).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    let mut strategies = vec![MenonStrategy::Theorem];
    if prime_power(n).is_some() {
        strategies.push(MenonStrategy::PrimePower);
    }
    for strategy in strategies {
        let mut cache = MemoCache::new();
        let value = MenonParams::new(n, k, strategy)
            .evaluate(&sieve, &mut cache)
            .map_err(|e| e.to_string())?;
        let name = match strategy {
            MenonStrategy::PrimePower => "prime power",
            _ => "divisor triple sum",
        };
        out.push(Route {
            name,
            value: value.to_string(),
            evaluations: cache.evaluations(),
        });
    }
    let mut cache = MemoCache::new();
    let value = match k {
        None => oracle::gcd_class_mbar(n, &sieve, &mut cache),
        Some(k) => oracle::gcd_class_mbar_k(n, k, &sieve, &mut cache),
    }
    .map_err(|e| e.to_string())?;
    out.push(Route {
        name: "gcd classes",
        value: value.to_string(),
        evaluations: cache.evaluations(),
    });
    if n <= MAX_CENSUS_N {
        let sum = SubsetCensus::enumerate(n)
            .map_err(|e| e.to_string())?
            .menon_sum(k);
        out.push(Route {
            name: "enumeration",
            value: sum.total.to_string(),
            evaluations: 0,
        });
    }
    Ok(out)
}

fn to_js<T: Serialize>(result: Result<T, String>) -> Result<String, JsValue> {
    result
        .and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

/// `{"function", "k", "rows": [{"n", "value"}]}` for n = 1..=n_max; `k = 0` means none.
#[wasm_bindgen]
pub fn sequence(function: &str, k: u32, n_max: u32) -> Result<String, JsValue> {
    sequence_json(function, optional_k(k), u64::from(n_max)).map_err(|e| JsValue::from_str(&e))
}

/// Subsets of {1..n} grouped by their gcd, with each class's weight in M̄.
#[wasm_bindgen]
pub fn gcd_census(n: u32, k: u32) -> Result<String, JsValue> {
    to_js(census(u64::from(n), optional_k(k)))
}

/// M̄(n) (or M̄_k(n)) by each available route.
#[wasm_bindgen]
pub fn compare_routes(n: u32, k: u32) -> Result<String, JsValue> {
    to_js(routes(u64::from(n), optional_k(k)))
}
