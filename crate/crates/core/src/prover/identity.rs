use super::report::ProofReport;
use super::theorems::{cancel_phi, coeffs_json, first_mismatch, signed_dissection};
use crate::chars::is_prime;
use crate::error::{Error, Result};
use crate::halfint::Decomposition;
use crate::modseries::ResidueRing;
use serde_json::json;
use std::time::Instant;

/// Known combinations for `sum pbar(m n)(-q)^n (mod m)`, ascending in the power of F.
pub fn known_combination(m: u32) -> Option<Vec<u32>> {
    match m {
        17 => Some(vec![1, 13, 13, 0]),
        23 => Some(vec![1, 9, 5, 14, 17, 20]),
        _ => None,
    }
}

/// Smallest truncation the re-derivation runs at, whatever `trunc` is.
const MIN_DERIVE_TRUNC: usize = 64;

/// Checks `sum pbar(m n)(-q)^n = sum c_b F^b phi^(m-2-4b) (mod m)` through `q^trunc`
/// from both sides, and re-derives `c_b` through `U(m)` and cancellation of phi.
pub fn verify_identity(m: u32, trunc: usize) -> Result<ProofReport> {
    let expected = known_combination(m).ok_or_else(|| {
        Error::Invalid(format!("no stored combination for m = {m} (expected 17 or 23)"))
    })?;
    debug_assert!(is_prime(m as u64));
    let ring = ResidueRing::new(m as u64)?;
    let combination = Decomposition {
        k2: m - 2,
        ring,
        coeffs: expected.clone(),
    };
    let mut report = ProofReport::new(format!(
        "sum pbar({m}n)(-q)^n = {} (mod {m})",
        combination.to_expression()
    ));
    report.limit("truncation", trunc as u64);
    report.limit("generating_function_terms", (m as usize * trunc) as u64);

    let t = Instant::now();
    let left = signed_dissection(m, trunc)?;
    let right = combination.recombine(trunc)?;
    let mismatch = first_mismatch(&left, &right);
    report.push(
        "two_sided",
        &format!("sum pbar({m}n)(-q)^n = {}", combination.to_expression()),
        json!({
            "through": trunc,
            "first_mismatch": mismatch,
            "constant_terms": [left.coeffs()[0], right.coeffs()[0]],
        }),
        mismatch.is_none(),
        t,
    );

    let t = Instant::now();
    let derive_trunc = trunc.max(MIN_DERIVE_TRUNC);
    let c = cancel_phi(m, derive_trunc)?;
    report.push(
        "hecke_vs_u",
        &format!("phi(q)^{} | T({m}) = sum r_{}({m}n) q^n (mod {m})", m - 1, m - 1),
        json!({ "through": derive_trunc }),
        c.hecke_agrees,
        t,
    );

    let t = Instant::now();
    report.push(
        "decompose_full",
        &format!("phi(q)^{} | U({m}) lies in the weight {}/2 span", m - 1, m - 1),
        coeffs_json(&c.full),
        c.full.is_ok(),
        t,
    );

    let t = Instant::now();
    report.push(
        "derived_combination",
        &format!("(phi(q)^{} | U({m})) / phi(q) = {}", m - 1, combination.to_expression()),
        coeffs_json(&c.reduced),
        matches!(&c.reduced, Ok(d) if d.coeffs == expected),
        t,
    );
    Ok(report)
}
