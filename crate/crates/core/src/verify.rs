//! The verification sweep behind `menon verify`: every closed form checked
//! against the brute-force and gcd-class oracles, plus the structural
//! identities relating the functions to each other.

use std::fmt::{self, Display};

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd, is_prime, SieveTables};
use crate::counts::{self, Count, CountStrategy, MemoCache};
use crate::error::{Error, Result};
use crate::menon;
use crate::oracle::{self, GcdClassCounter, SubsetCensus, DEFAULT_ENUMERATION_LIMIT};

/// Known prefixes for n = 1..6.
pub const F_PREFIX: [u64; 6] = [1, 2, 5, 11, 26, 53];
pub const F2_PREFIX: [u64; 6] = [0, 1, 3, 5, 9, 11];
pub const MBAR_PREFIX: [u64; 6] = [1, 4, 16, 46, 134, 320];
pub const MBAR2_PREFIX: [u64; 6] = [0, 2, 9, 20, 46, 66];

/// Upper end of the prime-power consistency sweep.
pub const PRIME_POWER_CAP: u64 = 256;
/// Upper end of the `M̄_n(n) = n` and cardinality-partition sweeps.
pub const PARTITION_CAP: u64 = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub n_max_enum: u64,
    pub n_max_formula: u64,
    pub k_set: Vec<u64>,
    pub enumeration_limit: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n_max_enum: 16,
            n_max_formula: 300,
            k_set: vec![1, 2, 3],
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub n: u64,
    pub k: Option<u64>,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub range: String,
    pub pass: bool,
    pub mismatch: Option<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            write!(f, "[{status}] {} ({})", c.name, c.range)?;
            if let Some(m) = &c.mismatch {
                let k = m.k.map(|k| format!(", k = {k}")).unwrap_or_default();
                write!(
                    f,
                    ": n = {}{k}: expected {}, got {}",
                    m.n, m.expected, m.actual
                )?;
            }
            writeln!(f)?;
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        write!(
            f,
            "{} checks, {failed} failed: {}",
            self.checks.len(),
            if self.overall { "PASS" } else { "FAIL" }
        )
    }
}

/// Tracks the first disagreement within one check.
#[derive(Default)]
struct Probe {
    at: (u64, Option<u64>),
    mismatch: Option<Mismatch>,
}

impl Probe {
    fn at(&mut self, n: u64, k: Option<u64>) {
        self.at = (n, k);
    }

    fn expect<T: PartialEq + Display>(&mut self, n: u64, k: Option<u64>, expected: T, actual: T) {
        self.at(n, k);
        if self.mismatch.is_none() && expected != actual {
            self.mismatch = Some(Mismatch {
                n,
                k,
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }
}

struct Runner {
    checks: Vec<CheckResult>,
}

impl Runner {
    fn run(
        &mut self,
        name: impl Into<String>,
        range: impl Into<String>,
        body: impl FnOnce(&mut Probe) -> Result<()>,
    ) {
        let mut probe = Probe::default();
        if let Err(e) = body(&mut probe) {
            if probe.mismatch.is_none() {
                let (n, k) = probe.at;
                probe.mismatch = Some(Mismatch {
                    n,
                    k,
                    expected: "a value".into(),
                    actual: format!("error: {e}"),
                });
            }
        }
        self.checks.push(CheckResult {
            name: name.into(),
            range: range.into(),
            pass: probe.mismatch.is_none(),
            mismatch: probe.mismatch,
        });
    }
}

/// Runs the full sweep with a freshly built sieve.
pub fn run(config: &VerifyConfig) -> Result<VerificationReport> {
    let limit = config.n_max_formula.max(config.n_max_enum).max(6);
    let sieve = SieveTables::build(limit)?;
    run_with_sieve(config, &sieve)
}

/// Runs the full sweep against the given tables.
pub fn run_with_sieve(config: &VerifyConfig, sieve: &SieveTables) -> Result<VerificationReport> {
    if config.n_max_enum > config.enumeration_limit {
        return Err(Error::EnumerationLimit {
            n: config.n_max_enum,
            limit: config.enumeration_limit,
        });
    }
    if config.n_max_enum == 0 || config.n_max_formula == 0 {
        return Err(Error::InvalidArgument(
            "sweep bounds must be at least 1".into(),
        ));
    }
    if config.k_set.contains(&0) {
        return Err(Error::InvalidArgument("k values must be at least 1".into()));
    }
    let needed = config.n_max_formula.max(config.n_max_enum).max(6);
    sieve.ensure_covers(needed)?;

    let mut r = Runner { checks: Vec::new() };
    let mut cache = MemoCache::new();
    let s = sieve;

    reference_values(&mut r, s, &mut cache);
    sieve_invariants(&mut r, s, config.n_max_formula);
    oracle_agreement(&mut r, s, &mut cache, config)?;
    formula_sweeps(&mut r, s, &mut cache, config);

    let overall = r.checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        checks: r.checks,
        overall,
    })
}

fn reference_values(r: &mut Runner, s: &SieveTables, cache: &mut MemoCache) {
    for n in 1..=6u64 {
        let ix = n as usize - 1;
        r.run(format!("f({n}) = {}", F_PREFIX[ix]), "reference value", |p| {
            p.expect(n, None, Count::from(F_PREFIX[ix]), counts::f(n, s)?);
            Ok(())
        });
        r.run(
            format!("f_2({n}) = {}", F2_PREFIX[ix]),
            "reference value",
            |p| {
                p.expect(
                    n,
                    Some(2),
                    Count::from(F2_PREFIX[ix]),
                    counts::f_k(n, 2, s)?,
                );
                Ok(())
            },
        );
        r.run(
            format!("mbar({n}) = {}", MBAR_PREFIX[ix]),
            "reference value",
            |p| {
                p.expect(
                    n,
                    None,
                    Count::from(MBAR_PREFIX[ix]),
                    menon::mbar(n, s, cache)?,
                );
                Ok(())
            },
        );
        r.run(
            format!("mbar_2({n}) = {}", MBAR2_PREFIX[ix]),
            "reference value",
            |p| {
                p.expect(
                    n,
                    Some(2),
                    Count::from(MBAR2_PREFIX[ix]),
                    menon::mbar_k(n, 2, s, cache)?,
                );
                Ok(())
            },
        );
    }
}

fn sieve_invariants(r: &mut Runner, s: &SieveTables, n_max: u64) {
    let range = format!("1 <= n <= {n_max}");
    r.run("sum of phi over divisors = n", range.clone(), |p| {
        for n in 1..=n_max {
            p.expect(n, None, n, divisors(n)?.iter().map(|&d| s.phi(d)).sum());
        }
        Ok(())
    });
    r.run("sum of mu over divisors = [n = 1]", range.clone(), |p| {
        for n in 1..=n_max {
            let sum: i64 = divisors(n)?.iter().map(|&d| i64::from(s.mu(d))).sum();
            p.expect(n, None, i64::from(n == 1), sum);
        }
        Ok(())
    });
    r.run("phi = count of coprime residues", range.clone(), |p| {
        for n in 1..=n_max {
            p.expect(
                n,
                None,
                (1..=n).filter(|&a| gcd(a, n) == 1).count() as u64,
                s.phi(n),
            );
        }
        Ok(())
    });
    r.run("mu = mu from factorization", range, |p| {
        for n in 1..=n_max {
            p.expect(n, None, s.mu_by_factorization(n), s.mu(n));
        }
        Ok(())
    });
}

fn k_values(config: &VerifyConfig, n: u64) -> Vec<u64> {
    let mut ks = config.k_set.clone();
    ks.push(n);
    ks.sort_unstable();
    ks.dedup();
    ks
}

fn oracle_agreement(
    r: &mut Runner,
    s: &SieveTables,
    cache: &mut MemoCache,
    config: &VerifyConfig,
) -> Result<()> {
    let n_max = config.n_max_enum;
    let censuses = (1..=n_max)
        .map(|n| SubsetCensus::enumerate_with_limit(n, config.enumeration_limit))
        .collect::<Result<Vec<_>>>()?;
    let range = format!("1 <= n <= {n_max}");
    let k_range = format!("1 <= n <= {n_max}, k in {:?} and k = n", config.k_set);

    r.run(
        "enumeration covers all 2^n - 1 subsets",
        range.clone(),
        |p| {
            for c in &censuses {
                p.expect(c.n(), None, (1u64 << c.n()) - 1, c.total());
            }
            Ok(())
        },
    );

    r.run(
        "f: enumeration = gcd classes = formula",
        range.clone(),
        |p| {
            let mut classes = GcdClassCounter::new(None);
            for c in &censuses {
                let n = c.n();
                let brute = c.relatively_prime(None);
                p.expect(n, None, &brute, &classes.relatively_prime(n)?);
                p.expect(n, None, &brute, &counts::f(n, s)?);
            }
            Ok(())
        },
    );
    r.run(
        "f_k: enumeration = gcd classes = formula",
        k_range.clone(),
        |p| {
            for c in &censuses {
                let n = c.n();
                for k in k_values(config, n) {
                    let brute = c.relatively_prime(Some(k));
                    p.expect(
                        n,
                        Some(k),
                        &brute,
                        &GcdClassCounter::new(Some(k)).relatively_prime(n)?,
                    );
                    p.expect(n, Some(k), &brute, &counts::f_k(n, k, s)?);
                }
            }
            Ok(())
        },
    );
    r.run(
        "Phi: enumeration = gcd classes = formula",
        range.clone(),
        |p| {
            let mut classes = GcdClassCounter::new(None);
            for c in &censuses {
                let n = c.n();
                let brute = c.coprime_to_n(None);
                p.expect(n, None, &brute, &classes.coprime_to_n(n)?);
                p.expect(n, None, &brute, &counts::phi_cap(n, s)?);
            }
            Ok(())
        },
    );
    r.run(
        "Phi_k: enumeration = gcd classes = formula",
        k_range.clone(),
        |p| {
            for c in &censuses {
                let n = c.n();
                for k in k_values(config, n) {
                    let brute = c.coprime_to_n(Some(k));
                    p.expect(
                        n,
                        Some(k),
                        &brute,
                        &GcdClassCounter::new(Some(k)).coprime_to_n(n)?,
                    );
                    p.expect(n, Some(k), &brute, &counts::phi_cap_k(n, k, s)?);
                }
            }
            Ok(())
        },
    );
    r.run(
        "mbar: enumeration = gcd classes = theorem",
        range.clone(),
        |p| {
            for c in &censuses {
                let n = c.n();
                let brute = c.menon_sum(None).total;
                p.expect(n, None, &brute, &oracle::gcd_class_mbar(n, s, cache)?);
                p.expect(n, None, &brute, &menon::mbar(n, s, cache)?);
            }
            Ok(())
        },
    );
    r.run(
        "mbar_k: enumeration = gcd classes = theorem",
        k_range.clone(),
        |p| {
            for c in &censuses {
                let n = c.n();
                for k in k_values(config, n) {
                    let brute = c.menon_sum(Some(k)).total;
                    p.expect(
                        n,
                        Some(k),
                        &brute,
                        &oracle::gcd_class_mbar_k(n, k, s, cache)?,
                    );
                    p.expect(n, Some(k), &brute, &menon::mbar_k(n, k, s, cache)?);
                }
            }
            Ok(())
        },
    );
    r.run("mbar term count = Phi", range, |p| {
        for c in &censuses {
            let n = c.n();
            p.expect(n, None, c.menon_sum(None).count, counts::phi_cap(n, s)?);
        }
        Ok(())
    });
    r.run("mbar_k term count = Phi_k", k_range, |p| {
        for c in &censuses {
            let n = c.n();
            for k in k_values(config, n) {
                p.expect(
                    n,
                    Some(k),
                    c.menon_sum(Some(k)).count,
                    counts::phi_cap_k(n, k, s)?,
                );
            }
        }
        Ok(())
    });
    Ok(())
}

fn formula_sweeps(r: &mut Runner, s: &SieveTables, cache: &mut MemoCache, config: &VerifyConfig) {
    let n_max = config.n_max_formula;
    let range = format!("1 <= n <= {n_max}");
    let k_range = format!("1 <= n <= {n_max}, k in {:?}", config.k_set);

    r.run("f_1(n) = 1", range.clone(), |p| {
        for n in 1..=n_max {
            p.expect(
                n,
                Some(1),
                Count::from(1u32),
                counts::f_k_with(n, 1, s, CountStrategy::Blocked)?,
            );
        }
        Ok(())
    });
    r.run(
        "f_2(n) = sum of phi(j) for 2 <= j <= n",
        range.clone(),
        |p| {
            let mut partial = 0u64;
            for n in 1..=n_max {
                if n >= 2 {
                    partial += s.phi(n);
                }
                p.expect(n, Some(2), Count::from(partial), counts::f_k(n, 2, s)?);
            }
            Ok(())
        },
    );
    r.run("f: direct = blocked", k_range.clone(), |p| {
        for n in 1..=n_max {
            p.expect(
                n,
                None,
                counts::f_with(n, s, CountStrategy::Direct)?,
                counts::f_with(n, s, CountStrategy::Blocked)?,
            );
            for &k in &config.k_set {
                p.expect(
                    n,
                    Some(k),
                    counts::f_k_with(n, k, s, CountStrategy::Direct)?,
                    counts::f_k_with(n, k, s, CountStrategy::Blocked)?,
                );
            }
        }
        Ok(())
    });
    r.run("mbar: gcd classes = theorem", k_range.clone(), |p| {
        for n in 1..=n_max {
            p.expect(
                n,
                None,
                oracle::gcd_class_mbar(n, s, cache)?,
                menon::mbar(n, s, cache)?,
            );
            for &k in &config.k_set {
                p.expect(
                    n,
                    Some(k),
                    oracle::gcd_class_mbar_k(n, k, s, cache)?,
                    menon::mbar_k(n, k, s, cache)?,
                );
            }
        }
        Ok(())
    });
    r.run("menon: phi(n) tau(n) = direct sum", range.clone(), |p| {
        for n in 1..=n_max {
            p.expect(
                n,
                None,
                menon::menon_classic_direct(n)?,
                menon::menon_classic(n, s)?,
            );
        }
        Ok(())
    });
    r.run("mbar_1(n) = phi(n) tau(n)", range, |p| {
        for n in 1..=n_max {
            p.expect(
                n,
                Some(1),
                menon::menon_classic(n, s)?,
                menon::mbar_k(n, 1, s, cache)?,
            );
        }
        Ok(())
    });

    let pp_cap = PRIME_POWER_CAP.min(n_max);
    let pp_range = format!("p^t <= {pp_cap}");
    let prime_powers: Vec<(u64, u32, u64)> = (2..=pp_cap)
        .filter(|&p| is_prime(p))
        .flat_map(|p| {
            (1u32..)
                .map(move |t| (p, t, p.pow(t)))
                .take_while(move |&(_, _, q)| q <= pp_cap)
        })
        .collect();
    r.run(
        "prime-power specialization = theorem",
        pp_range.clone(),
        |p| {
            for &(pr, t, q) in &prime_powers {
                p.expect(
                    q,
                    None,
                    menon::mbar(q, s, cache)?,
                    menon::mbar_prime_power(pr, t, s, cache)?,
                );
                for &k in &config.k_set {
                    p.expect(
                        q,
                        Some(k),
                        menon::mbar_k(q, k, s, cache)?,
                        menon::mbar_k_prime_power(pr, t, k, s, cache)?,
                    );
                }
            }
            Ok(())
        },
    );
    r.run(
        "prime specialization = prime-power specialization",
        pp_range,
        |p| {
            for &(pr, t, _) in prime_powers.iter().filter(|pp| pp.1 == 1) {
                p.expect(
                    pr,
                    None,
                    menon::mbar_prime_power(pr, t, s, cache)?,
                    menon::mbar_prime(pr, s, cache)?,
                );
                for &k in &config.k_set {
                    p.expect(
                        pr,
                        Some(k),
                        menon::mbar_k_prime_power(pr, t, k, s, cache)?,
                        menon::mbar_k_prime(pr, k, s, cache)?,
                    );
                }
            }
            Ok(())
        },
    );

    let part_cap = PARTITION_CAP.min(n_max);
    let part_range = format!("1 <= n <= {part_cap}");
    r.run("mbar_n(n) = n", part_range.clone(), |p| {
        for n in 1..=part_cap {
            p.expect(n, Some(n), Count::from(n), menon::mbar_k(n, n, s, cache)?);
        }
        Ok(())
    });
    r.run("sum over k of f_k = f", part_range.clone(), |p| {
        for n in 1..=part_cap {
            let mut by_k = Count::from(0u32);
            for k in 1..=n {
                by_k += counts::f_k(n, k, s)?;
            }
            p.expect(n, None, counts::f(n, s)?, by_k);
        }
        Ok(())
    });
    r.run("sum over k of Phi_k = Phi", part_range.clone(), |p| {
        for n in 1..=part_cap {
            let mut by_k = Count::from(0u32);
            for k in 1..=n {
                by_k += counts::phi_cap_k(n, k, s)?;
            }
            p.expect(n, None, counts::phi_cap(n, s)?, by_k);
        }
        Ok(())
    });
    r.run("sum over k of mbar_k = mbar", part_range, |p| {
        for n in 1..=part_cap {
            let mut by_k = Count::from(0u32);
            for k in 1..=n {
                by_k += menon::mbar_k(n, k, s, cache)?;
            }
            p.expect(n, None, menon::mbar(n, s, cache)?, by_k);
        }
        Ok(())
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            n_max_enum: 8,
            n_max_formula: 60,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn small_sweep_passes() {
        let report = run(&small()).unwrap();
        assert!(report.overall, "{report}");
        assert!(report.check("mbar(2) = 4").unwrap().pass);
        assert!(report.check("f_2(6) = 11").is_some());
    }

    #[test]
    fn corrupted_mu_is_caught() {
        let sieve = SieveTables::build(60).unwrap().corrupt_mu(30, 1);
        let report = run_with_sieve(&small(), &sieve).unwrap();
        assert!(!report.overall);
        let failed = report.check("mu = mu from factorization").unwrap();
        assert_eq!(failed.mismatch.as_ref().unwrap().n, 30);
        assert!(report.check("mbar(6) = 320").unwrap().pass);
    }

    #[test]
    fn bad_configs_rejected() {
        let cfg = VerifyConfig {
            n_max_enum: 30,
            ..VerifyConfig::default()
        };
        assert!(matches!(
            run(&cfg),
            Err(Error::EnumerationLimit { n: 30, limit: 24 })
        ));
        let cfg = VerifyConfig {
            k_set: vec![0],
            ..small()
        };
        assert!(run(&cfg).is_err());
        let sieve = SieveTables::build(10).unwrap();
        assert!(matches!(
            run_with_sieve(&small(), &sieve),
            Err(Error::SieveTooSmall { .. })
        ));
    }

    #[test]
    fn report_json_round_trips() {
        let report = run(&VerifyConfig {
            n_max_enum: 3,
            n_max_formula: 10,
            ..small()
        })
        .unwrap();
        let back: VerificationReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
        assert!(report.to_string().ends_with("0 failed: PASS"));
    }
}
