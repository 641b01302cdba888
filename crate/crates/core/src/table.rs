//! Function tags, a single evaluation entry point, and sequence tables with
//! their CSV/JSON renderings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::SieveTables;
use crate::counts::{self, Count, MemoCache};
use crate::error::{require_positive, Error, Result};
use crate::menon::{self, MenonParams, MenonStrategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionTag {
    F,
    Fk,
    Phi,
    Phik,
    Menon,
    Mbar,
    Mbark,
}

impl FunctionTag {
    pub const ALL: [FunctionTag; 7] = [
        Self::F,
        Self::Fk,
        Self::Phi,
        Self::Phik,
        Self::Menon,
        Self::Mbar,
        Self::Mbark,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::F => "f",
            Self::Fk => "fk",
            Self::Phi => "phi",
            Self::Phik => "phik",
            Self::Menon => "menon",
            Self::Mbar => "mbar",
            Self::Mbark => "mbark",
        }
    }

    /// Whether the function takes a subset size `k`.
    pub fn needs_k(self) -> bool {
        matches!(self, Self::Fk | Self::Phik | Self::Mbark)
    }

    /// Whether a [`MenonStrategy`] applies.
    pub fn takes_strategy(self) -> bool {
        matches!(self, Self::Mbar | Self::Mbark)
    }
}

impl fmt::Display for FunctionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FunctionTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown function `{s}`")))
    }
}

/// Checks that `k` is present exactly when the function needs it.
pub fn check_k(tag: FunctionTag, k: Option<u64>) -> Result<()> {
    match (tag.needs_k(), k) {
        (true, None) => Err(Error::InvalidArgument(format!("`{tag}` requires k"))),
        (false, Some(_)) => Err(Error::InvalidArgument(format!("`{tag}` does not take k"))),
        (true, Some(k)) => require_positive("k", k),
        (false, None) => Ok(()),
    }
}

/// Evaluates one function at `n`. The strategy only affects `mbar`/`mbark`.
pub fn evaluate(
    tag: FunctionTag,
    n: u64,
    k: Option<u64>,
    strategy: MenonStrategy,
    sieve: &SieveTables,
    cache: &mut MemoCache,
) -> Result<Count> {
    check_k(tag, k)?;
    require_positive("n", n)?;
    let k_val = k.unwrap_or(0);
    match tag {
        FunctionTag::F => cache.f(n, sieve),
        FunctionTag::Fk => cache.f_k(n, k_val, sieve),
        FunctionTag::Phi => counts::phi_cap(n, sieve),
        FunctionTag::Phik => counts::phi_cap_k(n, k_val, sieve),
        FunctionTag::Menon => menon::menon_classic(n, sieve),
        FunctionTag::Mbar | FunctionTag::Mbark => {
            MenonParams::new(n, k, strategy).evaluate(sieve, cache)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: u64,
    /// Decimal digits; the values outgrow every fixed-width JSON number.
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceTable {
    pub function: String,
    pub k: Option<u64>,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidArgument(format!("unknown format `{other}`"))),
        }
    }
}

impl SequenceTable {
    /// Values at `n = 1..=n_max`, sharing one sieve and cache.
    pub fn compute(
        tag: FunctionTag,
        k: Option<u64>,
        n_max: u64,
        strategy: MenonStrategy,
    ) -> Result<Self> {
        require_positive("n_max", n_max)?;
        check_k(tag, k)?;
        let sieve = SieveTables::build(n_max)?;
        let mut cache = MemoCache::new();
        let rows = (1..=n_max)
            .map(|n| {
                // prime-power-only requests fall back to the theorem off prime powers
                let strategy = match strategy {
                    MenonStrategy::PrimePower => MenonStrategy::Auto,
                    s => s,
                };
                let value = evaluate(tag, n, k, strategy, &sieve, &mut cache)?;
                Ok(TableRow {
                    n,
                    value: value.to_string(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            function: tag.as_str().to_string(),
            k,
            rows,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value\n");
        for row in &self.rows {
            out.push_str(&format!("{},{}\n", row.n, row.value));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string(self).expect("table serializes");
        out.push('\n');
        out
    }

    pub fn render(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Csv => self.to_csv(),
            TableFormat::Json => self.to_json(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("bad table: {e}")))
    }

    /// Parses the decimal value strings back into exact counts.
    pub fn values(&self) -> Result<Vec<Count>> {
        self.rows
            .iter()
            .map(|r| {
                r.value.parse::<BigUint>().map_err(|e| {
                    Error::InvalidArgument(format!("row {}: `{}` ({e})", r.n, r.value))
                })
            })
            .collect()
    }
}
