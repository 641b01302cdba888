//! Exact counts of relatively prime subsets of `{1..n}` and the Menon-type
//! sums built on them, with brute-force and gcd-class oracles for checking
//! every closed form.

pub mod arith;
pub mod counts;
pub mod error;
pub mod menon;
pub mod oracle;
pub mod table;
pub mod verify;

pub use arith::SieveTables;
pub use counts::{Count, CountStrategy, MemoCache, SignedCount};
pub use error::{Error, Result};
pub use menon::{MenonParams, MenonStrategy};
pub use table::{FunctionTag, SequenceTable, TableFormat};
