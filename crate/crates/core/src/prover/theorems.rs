use super::report::ProofReport;
use crate::chars::DirichletChar;
use crate::error::Result;
use crate::halfint::{
    apply_u, decompose, hecke_t, sieve_progression, Decomposition, MonomialBasis, SpaceLabel,
};
use crate::modseries::{ResidueRing, TruncSeries};
use crate::qgen;
use crate::sturm::{progression_limit, sturm_bound};
use serde_json::json;
use std::time::Instant;

/// Output of the shared "U(p), decompose, cancel phi" stage.
pub(crate) struct Cancelled {
    pub hecke_agrees: bool,
    pub full: Result<Decomposition>,
    /// `(phi^(p-1) | U(p)) / phi`.
    pub quotient: TruncSeries,
    pub reduced: Result<Decomposition>,
}

/// Runs `phi^(p-1) -> U(p) -> decompose -> divide by phi -> decompose`
/// over Z/pZ through `trunc`.
pub(crate) fn cancel_phi(p: u32, trunc: usize) -> Result<Cancelled> {
    let ring = ResidueRing::new(p as u64)?;
    let k2 = p - 1;
    let f = qgen::r_m_series(k2, p as usize * trunc, ring)?;
    let label = SpaceLabel::gamma0(k2, 4, MonomialBasis::new(k2).character())?
        .inflate(p as u64)?;
    let (u_image, _) = apply_u(&f, &label, p as u64)?;
    let chi = label.character().cloned().unwrap_or_else(DirichletChar::trivial);
    let hecke = hecke_t(&f, k2, p as u64, &chi)?;
    let full = decompose(&u_image, k2);
    let phi = qgen::theta_phi(trunc, ring)?;
    let quotient = u_image.mul(&phi.invert()?)?;
    let reduced = decompose(&quotient, k2 - 1);
    Ok(Cancelled {
        hecke_agrees: hecke == u_image,
        full,
        quotient,
        reduced,
    })
}

/// `sum pbar(p n) (-1)^n q^n` through `trunc`, straight from the generating function.
pub(crate) fn signed_dissection(p: u32, trunc: usize) -> Result<TruncSeries> {
    let ring = ResidueRing::new(p as u64)?;
    let op = qgen::overpartition_series(p as usize * trunc, ring)?;
    op.compact_progression(p as usize, 0)?.transform(1, -1)
}

pub(crate) fn first_mismatch(a: &TruncSeries, b: &TruncSeries) -> Option<usize> {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .position(|(x, y)| x != y)
}

pub(crate) fn coeffs_json(d: &Result<Decomposition>) -> serde_json::Value {
    match d {
        Ok(d) => json!({ "coeffs": d.coeffs, "expression": d.to_expression() }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

/// Nonzero coefficients `(n, a(A n + B))` of a sieved series for `n <= max_n`.
fn progression_witness(g: &TruncSeries, a: u64, b: u64, max_n: u64) -> (u64, Vec<(u64, u32)>) {
    let mut bad = Vec::new();
    for n in 0..=max_n {
        let e = (a * n + b) as usize;
        let c = g.coeffs()[e];
        if c != 0 {
            bad.push((n, c));
        }
    }
    (max_n + 1, bad)
}

const DECOMPOSE_TRUNC: usize = 300;

/// `pbar(11(8n+5)) = 0 (mod 11)`.
pub fn prove_theorem_mod11() -> Result<ProofReport> {
    let p = 11u32;
    let ring = ResidueRing::new(11)?;
    let mut report = ProofReport::new("pbar(11(8n+5)) = 0 (mod 11)");
    report.limit("truncation", (p as usize * DECOMPOSE_TRUNC) as u64);

    let t = Instant::now();
    let head = qgen::r_m_series(10, 2, ring)?;
    report.push(
        "theta_power",
        "phi(q)^10 = 1 + 20q + 180q^2 + ...",
        json!({ "mod_11": head.coeffs() }),
        head.coeffs() == [1, 20 % 11, 180 % 11],
        t,
    );

    let t = Instant::now();
    let c = cancel_phi(p, DECOMPOSE_TRUNC)?;
    report.push(
        "hecke_vs_u",
        "phi(q)^10 | T(11) = sum r_10(11n) q^n (mod 11)",
        json!({ "through": DECOMPOSE_TRUNC }),
        c.hecke_agrees,
        t,
    );

    let t = Instant::now();
    report.push(
        "decompose_weight_5",
        "phi(q)^10 | U(11) = F(q)phi(q)^6 + phi(q)^10 (mod 11)",
        coeffs_json(&c.full),
        matches!(&c.full, Ok(d) if d.coeffs == [1, 1, 0]),
        t,
    );

    let t = Instant::now();
    let recombined_ok = match &c.reduced {
        Ok(d) => d.recombine(DECOMPOSE_TRUNC)? == c.quotient,
        Err(_) => false,
    };
    let reduced_ok = matches!(&c.reduced, Ok(d) if d.coeffs == [1, 1, 0]);
    report.push(
        "cancel_phi",
        "(phi(q)^10 | U(11)) / phi(q) = F(q)phi(q)^5 + phi(q)^9 (mod 11)",
        coeffs_json(&c.reduced),
        reduced_ok && recombined_ok,
        t,
    );

    let t = Instant::now();
    let g = signed_dissection(p, DECOMPOSE_TRUNC)?;
    let mismatch = first_mismatch(&g, &c.quotient);
    report.push(
        "generating_function",
        "sum pbar(11n)(-1)^n q^n = F(q)phi(q)^5 + phi(q)^9 (mod 11)",
        json!({ "through": DECOMPOSE_TRUNC, "first_mismatch": mismatch }),
        mismatch.is_none(),
        t,
    );

    let t = Instant::now();
    let (a, b) = (8u64, 5u64);
    let start = SpaceLabel::gamma0(9, 4, DirichletChar::trivial())?;
    let (sieved, derived) = sieve_progression(&c.quotient, &start, 1, a, b)?;
    let asserted = SpaceLabel::gamma0(9, 256, DirichletChar::trivial())?;
    let budget = sturm_bound(&asserted);
    let max_n = progression_limit(&budget, a, b)?;
    let (checked, bad) = progression_witness(&sieved, a, b, max_n);
    report.limit("sturm_bound", budget.bound);
    report.limit("max_n", max_n);
    report.limit("checked_indices", checked);
    report.push(
        "sieve_and_sturm",
        "sum a(8n+5) q^(8n+5) in M_9/2(Gamma0(256)); a(8n+5) = 0 (mod 11) for 8n+5 <= 289",
        json!({
            "derived_label": derived.to_string(),
            "asserted_label": asserted.to_string(),
            "bound": budget.bound,
            "checked": checked,
            "nonzero": bad,
        }),
        bad.is_empty() && derived == asserted && budget.bound == 289,
        t,
    );

    let t = Instant::now();
    let v = qgen::overpartition_series(55, ring)?.coefficient_at(55)?;
    report.push(
        "cross_check",
        "pbar(55) = 0 (mod 11)",
        json!({ "pbar_55_mod_11": v }),
        v == 0,
        t,
    );
    Ok(report)
}

/// `pbar(13 * 2^6 (8n+7)) = 0 (mod 13)`.
pub fn prove_theorem_mod13() -> Result<ProofReport> {
    let p = 13u32;
    let ring = ResidueRing::new(13)?;
    let mut report = ProofReport::new("pbar(13*64(8n+7)) = 0 (mod 13)");
    let (a, b) = (8u64, 7u64);
    let asserted =
        SpaceLabel::gamma0(11, 512, DirichletChar::kronecker(8).expect("nonzero discriminant"))?;
    let budget = sturm_bound(&asserted);
    let max_n = progression_limit(&budget, a, b)?;
    let big_trunc = 64 * budget.bound as usize;
    report.limit("truncation", big_trunc as u64);

    let t = Instant::now();
    let c = cancel_phi(p, DECOMPOSE_TRUNC)?;
    report.push(
        "hecke_vs_u",
        "phi(q)^12 | T(13) = sum r_12(13n) q^n (mod 13)",
        json!({ "through": DECOMPOSE_TRUNC }),
        c.hecke_agrees,
        t,
    );

    let t = Instant::now();
    report.push(
        "decompose_weight_6",
        "phi(q)^12 | U(13) = F(q)^2 phi(q)^4 + 4F(q)phi(q)^8 + phi(q)^12 (mod 13)",
        coeffs_json(&c.full),
        matches!(&c.full, Ok(d) if d.coeffs == [1, 4, 1, 0]),
        t,
    );

    let t = Instant::now();
    let reduced_ok = matches!(&c.reduced, Ok(d) if d.coeffs == [1, 4, 1]);
    report.push(
        "cancel_phi",
        "(phi(q)^12 | U(13)) / phi(q) = F(q)^2 phi(q)^3 + 4F(q)phi(q)^7 + phi(q)^11 (mod 13)",
        coeffs_json(&c.reduced),
        reduced_ok,
        t,
    );

    let t = Instant::now();
    let h = signed_dissection(p, DECOMPOSE_TRUNC)?;
    let mismatch = first_mismatch(&h, &c.quotient);
    report.push(
        "generating_function",
        "sum pbar(13n)(-1)^n q^n = F(q)^2 phi(q)^3 + 4F(q)phi(q)^7 + phi(q)^11 (mod 13)",
        json!({ "through": DECOMPOSE_TRUNC, "first_mismatch": mismatch }),
        mismatch.is_none(),
        t,
    );
    let Ok(reduced) = c.reduced else {
        return Ok(report);
    };

    let t = Instant::now();
    let mut series = reduced.recombine(big_trunc)?;
    let mut label = SpaceLabel::gamma0(11, 4, DirichletChar::trivial())?;
    let mut chain = vec![label.to_string()];
    for _ in 0..6 {
        if (label.level() / 4) % 2 != 0 {
            label = label.inflate(2)?;
            chain.push(label.to_string());
        }
        let (s, l) = apply_u(&series, &label, 2)?;
        series = s;
        label = l;
        chain.push(label.to_string());
    }
    report.push(
        "six_u2",
        "apply U(2) six times: sum b(64n) q^n",
        json!({ "largest_index": big_trunc, "labels": chain, "trunc_after": series.trunc() }),
        series.trunc() as u64 == budget.bound,
        t,
    );

    let t = Instant::now();
    let (sieved, derived) = sieve_progression(&series, &label, 1, a, b)?;
    let (checked, bad) = progression_witness(&sieved, a, b, max_n);
    report.limit("sturm_bound", budget.bound);
    report.limit("max_n", max_n);
    report.limit("checked_indices", checked);
    report.push(
        "sieve_and_sturm",
        "sum b(64(8n+7)) q^(8n+7) in M_11/2(Gamma0(512), chi_2); b(64(8n+7)) = 0 (mod 13) for 8n+7 <= 705",
        json!({
            "derived_label": derived.to_string(),
            "asserted_label": asserted.to_string(),
            "bound": budget.bound,
            "checked": checked,
            "nonzero": bad,
        }),
        bad.is_empty() && derived.level() == asserted.level() && budget.bound == 705,
        t,
    );

    let t = Instant::now();
    let v = qgen::overpartition_series(5824, ring)?.coefficient_at(5824)?;
    report.push(
        "cross_check",
        "pbar(5824) = 0 (mod 13)",
        json!({ "pbar_5824_mod_13": v }),
        v == 0,
        t,
    );
    Ok(report)
}
