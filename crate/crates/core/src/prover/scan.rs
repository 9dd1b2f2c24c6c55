use super::claim::{Condition, CongruenceClaim};
use crate::chars::{factorize, kronecker};
use crate::error::{Error, Result};
use crate::modseries::{ResidueRing, TruncSeries, TRUNCATION_CAP};
use crate::qgen;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default number of tested terms a residue class needs before it is reported.
pub const DEFAULT_MIN_SUPPORT: u64 = 20;

/// Outcome of testing one claim against computed coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectCheck {
    pub claim: CongruenceClaim,
    pub n_max: u64,
    pub pass: bool,
    /// Number of `t <= n_max` whose argument met every side condition.
    pub support: u64,
    /// First failing `t`, with its argument and residue.
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub t: u64,
    pub index: u64,
    pub residue: u32,
}

/// Largest coefficient index needed to check `claim` up to `t = n_max`.
pub fn required_index(claim: &CongruenceClaim, n_max: u64) -> Result<usize> {
    claim
        .max_index(n_max)
        .filter(|&i| i <= TRUNCATION_CAP as u64)
        .map(|i| i as usize)
        .ok_or_else(|| {
            Error::Budget(format!(
                "checking {claim} to n = {n_max} exceeds the {TRUNCATION_CAP}-term cap"
            ))
        })
}

/// Tests `pbar(d(A t + B)) = 0 (mod m)` for every `t <= n_max` meeting the
/// side conditions, computing the overpartition series once.
pub fn check_claim_direct(claim: &CongruenceClaim, n_max: u64) -> Result<DirectCheck> {
    claim.validate()?;
    if claim.modulus == 1 {
        let support = (0..=n_max).filter(|&t| claim.applies(claim.argument(t))).count() as u64;
        return Ok(DirectCheck {
            claim: claim.clone(),
            n_max,
            pass: true,
            support,
            counterexample: None,
        });
    }
    let trunc = required_index(claim, n_max)?;
    let series = qgen::overpartition_series(trunc, ResidueRing::new(claim.modulus)?)?;
    check_claim_in(&series, claim, n_max)
}

/// [`check_claim_direct`] against precomputed overpartition coefficients.
///
/// `series` may be reduced modulo any multiple of the claim's modulus.
pub fn check_claim_in(series: &TruncSeries, claim: &CongruenceClaim, n_max: u64) -> Result<DirectCheck> {
    claim.validate()?;
    let m = claim.modulus;
    if !(series.ring().modulus() as u64).is_multiple_of(m) {
        return Err(Error::RingMismatch {
            left: series.ring().modulus(),
            right: m as u32,
        });
    }
    let needed = required_index(claim, n_max)?;
    if needed > series.trunc() {
        return Err(Error::InsufficientTruncation {
            needed,
            have: series.trunc(),
        });
    }
    let mut support = 0;
    for t in 0..=n_max {
        let n = claim.argument(t);
        if !claim.applies(n) {
            continue;
        }
        support += 1;
        let index = n * claim.multiplier;
        let residue = (series.coeffs()[index as usize] as u64 % m) as u32;
        if residue != 0 {
            return Ok(DirectCheck {
                claim: claim.clone(),
                n_max,
                pass: false,
                support,
                counterexample: Some(Counterexample { t, index, residue }),
            });
        }
    }
    Ok(DirectCheck {
        claim: claim.clone(),
        n_max,
        pass: true,
        support,
        counterexample: None,
    })
}

/// The residue classes `B mod A` along which `pbar(d(A t + B))` vanished mod `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanFinding {
    pub modulus: u64,
    pub multiplier: u64,
    pub progression_modulus: u64,
    pub residues: Vec<u64>,
    /// Terms tested in each class.
    pub support: u64,
    /// The same set as one congruence on `n`, when the compression vocabulary fits.
    pub compressed: Option<CongruenceClaim>,
}

impl ScanFinding {
    /// One claim per surviving residue.
    pub fn claims(&self) -> Vec<CongruenceClaim> {
        self.residues
            .iter()
            .map(|&b| CongruenceClaim {
                modulus: self.modulus,
                multiplier: self.multiplier,
                progression: (self.progression_modulus, b),
                conditions: Vec::new(),
            })
            .collect()
    }
}

/// Parameters of a scan over `pbar(d(A t + B)) (mod m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub modulus: u64,
    pub multipliers: Vec<u64>,
    pub progression_moduli: Vec<u64>,
    /// Largest `t` tested in every class.
    pub n_max: u64,
    pub min_support: u64,
}

impl ScanConfig {
    /// Largest coefficient index the scan reads.
    pub fn required_index(&self) -> Result<usize> {
        let mut top = 0u64;
        for &d in &self.multipliers {
            for &a in &self.progression_moduli {
                let arg = a
                    .checked_mul(self.n_max)
                    .and_then(|x| x.checked_add(a - 1))
                    .and_then(|x| x.checked_mul(d));
                top = top.max(arg.unwrap_or(u64::MAX));
            }
        }
        if top > TRUNCATION_CAP as u64 {
            return Err(Error::Budget(format!(
                "scan needs {top} terms, above the {TRUNCATION_CAP}-term cap"
            )));
        }
        Ok(top as usize)
    }

    fn validate(&self) -> Result<()> {
        if self.modulus < 2 {
            return Err(Error::BadModulus(self.modulus));
        }
        if self.multipliers.contains(&0) || self.progression_moduli.contains(&0) {
            return Err(Error::Invalid("multipliers and moduli must be positive".into()));
        }
        Ok(())
    }
}

/// Largest `n_max` keeping every index `d(A n_max + A - 1)` within `budget`.
pub fn n_max_for_budget(budget: u64, d: u64, a: u64) -> u64 {
    (budget / d).saturating_sub(a - 1) / a
}

pub fn scan(cfg: &ScanConfig) -> Result<Vec<ScanFinding>> {
    cfg.validate()?;
    let series = qgen::overpartition_series(cfg.required_index()?, ResidueRing::new(cfg.modulus)?)?;
    scan_in(&series, cfg)
}

/// [`scan`] against precomputed overpartition coefficients.
pub fn scan_in(series: &TruncSeries, cfg: &ScanConfig) -> Result<Vec<ScanFinding>> {
    cfg.validate()?;
    let needed = cfg.required_index()?;
    if needed > series.trunc() {
        return Err(Error::InsufficientTruncation {
            needed,
            have: series.trunc(),
        });
    }
    let m = cfg.modulus;
    if !(series.ring().modulus() as u64).is_multiple_of(m) {
        return Err(Error::RingMismatch {
            left: series.ring().modulus(),
            right: m as u32,
        });
    }
    let support = cfg.n_max + 1;
    let coeffs = series.coeffs();
    let mut findings = Vec::new();
    for &d in &cfg.multipliers {
        for &a in &cfg.progression_moduli {
            let residues: Vec<u64> = (0..a)
                .into_par_iter()
                .filter(|&b| {
                    (0..=cfg.n_max)
                        .all(|t| (coeffs[(d * (a * t + b)) as usize] as u64).is_multiple_of(m))
                })
                .collect();
            if residues.is_empty() || support < cfg.min_support {
                continue;
            }
            let compressed = compress(a, &residues).map(|conditions| CongruenceClaim {
                modulus: m,
                multiplier: d,
                progression: (1, 0),
                conditions,
            });
            findings.push(ScanFinding {
                modulus: m,
                multiplier: d,
                progression_modulus: a,
                residues,
                support,
                compressed,
            });
        }
    }
    Ok(findings)
}

/// Expresses a set of residues mod `a` as one condition mod 8 plus at most one
/// Kronecker sign at an odd prime dividing `a`, if such a form is exact.
pub fn compress(a: u64, residues: &[u64]) -> Option<Vec<Condition>> {
    let matches = |pred: &dyn Fn(u64) -> bool| {
        let set: Vec<u64> = (0..a).filter(|&b| pred(b)).collect();
        set == residues
    };
    let mod8: Vec<Option<u64>> = if a.is_multiple_of(8) {
        let mut rs: Vec<u64> = residues.iter().map(|b| b % 8).collect();
        rs.dedup();
        if rs.len() == 1 && residues.iter().all(|b| b % 8 == rs[0]) {
            vec![Some(rs[0])]
        } else {
            vec![None]
        }
    } else {
        vec![None]
    };
    let odd_primes: Vec<u64> = factorize(a).into_iter().map(|(p, _)| p).filter(|&p| p > 2).collect();
    for r in mod8 {
        let in_class = |b: u64| r.is_none_or(|r| b % 8 == r);
        let residue_cond = r.map(|r| Condition::Residues { modulus: 8, set: vec![r] });
        if r.is_some() && matches(&|b| in_class(b)) {
            return Some(residue_cond.into_iter().collect());
        }
        for &p in &odd_primes {
            for sign in [1i8, -1, 0] {
                if matches(&|b| in_class(b) && kronecker(b as i64, p as i64) == sign) {
                    let mut conds: Vec<Condition> = residue_cond.clone().into_iter().collect();
                    conds.push(Condition::Kronecker { p, sign });
                    return Some(conds);
                }
            }
        }
    }
    None
}
