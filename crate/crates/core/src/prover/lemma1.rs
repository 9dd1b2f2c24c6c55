use super::report::ProofReport;
use super::theorems::first_mismatch;
use crate::chars::is_prime;
use crate::error::{Error, Result};
use crate::modseries::ResidueRing;
use crate::qgen::pochhammer;
use serde_json::json;
use std::time::Instant;

/// Checks `(q;q)^(p^alpha) = (q^p;q^p)^(p^(alpha-1))` in `Z/p^alpha Z` through `q^trunc`.
pub fn verify_lemma1(p: u64, alpha: u32, trunc: usize) -> Result<ProofReport> {
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    if alpha == 0 {
        return Err(Error::Invalid("alpha must be at least 1".into()));
    }
    let modulus = p
        .checked_pow(alpha)
        .filter(|&q| q <= u32::MAX as u64)
        .ok_or_else(|| Error::Budget(format!("{p}^{alpha} does not fit a word-size ring")))?;
    let ring = ResidueRing::new(modulus)?;
    let mut report = ProofReport::new(format!(
        "(q;q)^{modulus} = (q^{p};q^{p})^{} (mod {modulus})",
        modulus / p
    ));
    report.limit("truncation", trunc as u64);
    report.limit("modulus", modulus);

    let t = Instant::now();
    let left = pochhammer(1, trunc, ring)?.pow(modulus)?;
    let right = pochhammer(p as usize, trunc, ring)?.pow(modulus / p)?;
    let mismatch = first_mismatch(&left, &right);
    report.push(
        "compare",
        &format!("(q;q)^({p}^{alpha}) = (q^{p};q^{p})^({p}^{})", alpha - 1),
        json!({ "through": trunc, "first_mismatch": mismatch }),
        mismatch.is_none(),
        t,
    );
    Ok(report)
}
