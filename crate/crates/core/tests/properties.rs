use overpart::chars::DirichletChar;
use overpart::halfint::{
    apply_u, apply_v, decompose, expand_monomial, hecke_t, sieve_progression, Decomposition,
    Group, MonomialBasis, SpaceLabel,
};
use overpart::modseries::cache;
use overpart::modseries::{ResidueRing, TruncSeries};
use overpart::prover::{check_claim_direct, scan, ScanConfig};
use overpart::qgen;
use proptest::prelude::*;

fn ring(m: u64) -> ResidueRing {
    ResidueRing::new(m).unwrap()
}

fn exact_product(a: &[i64], b: &[i64]) -> Vec<i128> {
    let mut out = vec![0i128; a.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate().take(a.len() - i) {
            out[i + j] += x as i128 * y as i128;
        }
    }
    out
}

fn reduce(v: &[i128], m: u64) -> Vec<u32> {
    v.iter().map(|x| x.rem_euclid(m as i128) as u32).collect()
}

fn coeff_vec(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-1_000_000i64..1_000_000, len)
}

/// Mostly-zero vectors so the sparse paths get exercised too.
fn sparse_vec(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![6 => Just(0i64), 1 => -50i64..50], len)
}

fn moduli() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(9), Just(11), Just(13), Just(1 << 20), Just(4_294_967_291), 2u64..100_000]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_matches_exact_integers(a in coeff_vec(33), b in sparse_vec(33), m in moduli()) {
        let r = ring(m);
        let fa = TruncSeries::from_integers(r, &a).unwrap();
        let fb = TruncSeries::from_integers(r, &b).unwrap();
        let expected = reduce(&exact_product(&a, &b), m);
        prop_assert_eq!(fa.mul(&fb).unwrap().into_coeffs(), expected.clone());
        prop_assert_eq!(fb.mul(&fa).unwrap().into_coeffs(), expected);
    }

    #[test]
    fn ring_laws(a in coeff_vec(20), b in sparse_vec(20), c in coeff_vec(20), m in moduli()) {
        let r = ring(m);
        let (fa, fb, fc) = (
            TruncSeries::from_integers(r, &a).unwrap(),
            TruncSeries::from_integers(r, &b).unwrap(),
            TruncSeries::from_integers(r, &c).unwrap(),
        );
        let left = fa.mul(&fb).unwrap().mul(&fc).unwrap();
        let right = fa.mul(&fb.mul(&fc).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let dist = fa.mul(&fb.add(&fc).unwrap()).unwrap();
        prop_assert_eq!(dist, fa.mul(&fb).unwrap().add(&fa.mul(&fc).unwrap()).unwrap());
        prop_assert!(fa.sub(&fa).unwrap().is_zero());
        prop_assert_eq!(fa.add(&fa.neg()).unwrap(), TruncSeries::zero(r, 19).unwrap());
    }

    #[test]
    fn inverse_times_series_is_one(mut a in coeff_vec(40), m in prop_oneof![Just(11u64), Just(13), Just(17), Just(23), Just(1_000_003)]) {
        let r = ring(m);
        if a[0].rem_euclid(m as i64) == 0 {
            a[0] = 1;
        }
        let f = TruncSeries::from_integers(r, &a).unwrap();
        let inv = f.invert().unwrap();
        prop_assert_eq!(f.mul(&inv).unwrap(), TruncSeries::one(r, 39).unwrap());
    }

    #[test]
    fn non_unit_constant_term_is_rejected(a in sparse_vec(10)) {
        let mut a = a;
        a[0] = 3;
        let f = TruncSeries::from_integers(ring(9), &a).unwrap();
        prop_assert!(f.invert().is_err());
    }

    #[test]
    fn power_matches_repeated_product(a in sparse_vec(25), e in 0u64..9, m in moduli()) {
        let r = ring(m);
        let f = TruncSeries::from_integers(r, &a).unwrap();
        let mut acc = TruncSeries::one(r, 24).unwrap();
        for _ in 0..e {
            acc = acc.mul(&f).unwrap();
        }
        prop_assert_eq!(f.pow(e).unwrap(), acc);
    }

    #[test]
    fn reading_past_truncation_is_an_error(a in coeff_vec(12)) {
        let f = TruncSeries::from_integers(ring(101), &a).unwrap();
        prop_assert!(f.coefficient_at(11).is_ok());
        prop_assert!(f.coefficient_at(12).is_err());
    }

    #[test]
    fn qser_round_trip(a in coeff_vec(50), m in moduli()) {
        let f = TruncSeries::from_integers(ring(m), &a).unwrap();
        prop_assert_eq!(cache::decode(&cache::encode(&f)).unwrap(), f);
    }

    #[test]
    fn decompose_inverts_recombine(k2 in 1u32..=24, seed in prop::collection::vec(0u32..11, 7)) {
        let r = ring(11);
        let basis = MonomialBasis::new(k2);
        let coeffs: Vec<u32> = seed.into_iter().take(basis.len()).collect();
        prop_assume!(coeffs.len() == basis.len());
        let d = Decomposition { k2, ring: r, coeffs };
        let f = d.recombine(64).unwrap();
        prop_assert_eq!(decompose(&f, k2).unwrap(), d);
    }

    #[test]
    fn sieve_support(d in 1u64..5, a in 1u64..30, b_seed in 0u64..30, m in prop_oneof![Just(11u64), Just(13)]) {
        let b = b_seed % a;
        prop_assume!(overpart::chars::gcd(a, b) == 1);
        let r = ring(m);
        let f = qgen::overpartition_series((d * 200) as usize, r).unwrap();
        let label = SpaceLabel::new(9, 4, Group::Gamma0).unwrap();
        let (g, l) = sieve_progression(&f, &label, d, a, b).unwrap();
        prop_assert_eq!(l.level(), 4 * d * a * a);
        for (n, &c) in g.coeffs().iter().enumerate() {
            if n as u64 % a == b {
                prop_assert_eq!(c, f.coeffs()[d as usize * n]);
            } else {
                prop_assert_eq!(c, 0);
            }
        }
    }

    #[test]
    fn v_then_u_is_identity(a in coeff_vec(201), d in 1u64..12) {
        let r = ring(13);
        let f = TruncSeries::from_integers(r, &a).unwrap();
        let label = SpaceLabel::new(9, 4, Group::Gamma0).unwrap();
        let (g, lv) = apply_v(&f, &label, d).unwrap();
        prop_assert_eq!(lv.level(), 4 * d);
        let (h, lu) = apply_u(&g, &lv, d).unwrap();
        prop_assert_eq!(h.truncate(200).unwrap(), f);
        prop_assert_eq!(lu.level(), 4 * d);
    }
}

#[test]
fn triangularity_through_weight_twelve() {
    let r = ring(1_000_003);
    for k2 in 1..=24u32 {
        for (a, b) in MonomialBasis::new(k2).monomials {
            let s = expand_monomial(a, b, 64, r).unwrap();
            let b = b as usize;
            assert!(s.coeffs()[..b].iter().all(|&c| c == 0), "k2 {k2}, b {b}");
            assert_eq!(s.coeffs()[b], 1, "k2 {k2}, b {b}");
        }
    }
}

#[test]
fn hecke_is_u_mod_ell_on_weight_five_and_six() {
    let trunc = 500;
    for ell in [11u64, 13] {
        let r = ring(ell);
        for k2 in [10u32, 12] {
            let basis = MonomialBasis::new(k2);
            let chi = basis.character();
            let label = SpaceLabel::gamma0(k2, 4, chi.clone()).unwrap().inflate(ell).unwrap();
            for (i, f) in basis.expand(ell as usize * trunc, r).unwrap().into_iter().enumerate() {
                let t = hecke_t(&f, k2, ell, &chi).unwrap();
                let (u, _) = apply_u(&f, &label, ell).unwrap();
                assert_eq!(t.trunc(), trunc);
                assert_eq!(t, u, "ell {ell}, k2 {k2}, monomial {i}");
            }
        }
    }
}

#[test]
fn twist_applied_twice_by_real_character_fixes_units() {
    use overpart::halfint::apply_twist;
    let r = ring(1_000_003);
    let f = qgen::overpartition_series(200, r).unwrap();
    let label = SpaceLabel::new(9, 4, Group::Gamma0).unwrap();
    let psi = DirichletChar::kronecker(8).unwrap();
    let (g, _) = apply_twist(&f, &label, &psi).unwrap();
    let (h, l) = apply_twist(&g, &label, &psi).unwrap();
    assert_eq!(l.level(), 256);
    for n in 0..=200usize {
        if n % 2 == 1 {
            assert_eq!(h.coeffs()[n], f.coeffs()[n]);
        } else {
            assert_eq!(h.coeffs()[n], 0);
        }
    }
}

#[test]
fn scanner_claims_survive_a_longer_direct_check() {
    for (m, d, a) in [(5u64, 1u64, 40u64), (7, 16, 56), (3, 1, 24)] {
        let cfg = ScanConfig {
            modulus: m,
            multipliers: vec![d],
            progression_moduli: vec![a],
            n_max: 300,
            min_support: 20,
        };
        for finding in scan(&cfg).unwrap() {
            for claim in finding.claims() {
                let check = check_claim_direct(&claim, 1500).unwrap();
                assert!(check.pass, "{claim} fails at {:?}", check.counterexample);
            }
            if let Some(c) = &finding.compressed {
                assert!(check_claim_direct(c, 1500 * a).unwrap().pass, "{c}");
            }
        }
    }
}
