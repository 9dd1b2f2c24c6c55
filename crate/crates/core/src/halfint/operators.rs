use super::label::{Group, SpaceLabel};
use crate::chars::{char_group, gcd, is_prime, DirichletChar};
use crate::error::{Error, Result};
use crate::modseries::TruncSeries;

fn real_value(chi: &DirichletChar, n: u64) -> Result<i8> {
    chi.value(n).as_real().ok_or_else(|| {
        Error::Invalid(format!("character {} is not real-valued", chi.name()))
    })
}

/// `f | T(ell)` in integral weight `k2even / 2` with nebentypus `chi`,
/// through `floor(T / ell)`.
pub fn hecke_t(f: &TruncSeries, k2even: u32, ell: u64, chi: &DirichletChar) -> Result<TruncSeries> {
    if !k2even.is_multiple_of(2) || k2even == 0 {
        return Err(Error::Invalid(format!(
            "Hecke operator needs a positive even twice-weight, got {k2even}"
        )));
    }
    if !is_prime(ell) {
        return Err(Error::Invalid(format!("{ell} is not prime")));
    }
    let ring = f.ring();
    let l = ell as usize;
    let out_trunc = f.trunc() / l;
    let k = k2even / 2;
    let eps = real_value(chi, ell)?;
    let factor = ring.mul(ring.from_i64(eps as i64), ring.pow(ring.reduce(ell), (k - 1) as u64));
    let a = f.coeffs();
    let coeffs = (0..=out_trunc)
        .map(|n| {
            let mut c = a[l * n];
            if n % l == 0 {
                c = ring.add(c, ring.mul(factor, a[n / l]));
            }
            c
        })
        .collect();
    TruncSeries::from_residues(ring, coeffs)
}

/// `f | U(d) = sum a(dn) q^n`. Requires `d | level / 4`; inflate the label
/// first when that fails.
pub fn apply_u(f: &TruncSeries, label: &SpaceLabel, d: u64) -> Result<(TruncSeries, SpaceLabel)> {
    if d == 0 {
        return Err(Error::Invalid("U(0) is undefined".into()));
    }
    let n = label.level() / 4;
    if !n.is_multiple_of(d) {
        return Err(Error::Divisibility(format!(
            "U({d}) needs {d} | {n} at level {}",
            label.level()
        )));
    }
    let g = f.compact_progression(d as usize, 0)?;
    let chi_d = DirichletChar::chi_d(d)?;
    Ok((g, label.with(label.level(), Some(&chi_d))))
}

/// `f | V(d) = sum a(n) q^(dn)`.
pub fn apply_v(f: &TruncSeries, label: &SpaceLabel, d: u64) -> Result<(TruncSeries, SpaceLabel)> {
    if d == 0 {
        return Err(Error::Invalid("V(0) is undefined".into()));
    }
    let g = f.transform(d as usize, 1)?;
    let level = label
        .level()
        .checked_mul(d)
        .ok_or_else(|| Error::Invalid("level overflow".into()))?;
    let chi_d = DirichletChar::chi_d(d)?;
    Ok((g, label.with(level, Some(&chi_d))))
}

/// `f (x) psi = sum psi(n) a(n) q^n` for a real character `psi`.
pub fn apply_twist(
    f: &TruncSeries,
    label: &SpaceLabel,
    psi: &DirichletChar,
) -> Result<(TruncSeries, SpaceLabel)> {
    let ring = f.ring();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, &c)| Ok(ring.mul(c, ring.from_i64(real_value(psi, n as u64)? as i64))))
        .collect::<Result<Vec<_>>>()?;
    let m = psi.conductor();
    let level = label
        .level()
        .checked_mul(m * m)
        .ok_or_else(|| Error::Invalid("level overflow".into()))?;
    let psi2 = psi.mul(psi);
    Ok((
        TruncSeries::from_residues(ring, coeffs)?,
        label.with(level, Some(&psi2)),
    ))
}

/// `g = sum a(d(An+B)) q^(An+B)`, labelled at level `level * d * A^2`.
///
/// The label is Gamma0 with character `chi_d chi` when every character
/// mod `A` is real, Gamma1 otherwise.
pub fn sieve_progression(
    f: &TruncSeries,
    label: &SpaceLabel,
    d: u64,
    a: u64,
    b: u64,
) -> Result<(TruncSeries, SpaceLabel)> {
    if d == 0 || a == 0 {
        return Err(Error::Invalid("d and A must be positive".into()));
    }
    if gcd(a, b) != 1 {
        return Err(Error::NotCoprime { a, b });
    }
    if b >= a {
        return Err(Error::Invalid(format!("residue {b} is not reduced mod {a}")));
    }
    let g = f
        .compact_progression(d as usize, 0)?
        .extract_progression(a as usize, b as usize)?;
    let level = label
        .level()
        .checked_mul(d)
        .and_then(|l| l.checked_mul(a * a))
        .ok_or_else(|| Error::Invalid("level overflow".into()))?;
    let all_real = char_group(a)?.iter().all(DirichletChar::is_real);
    let new_label = if all_real && label.group() == Group::Gamma0 {
        label.with(level, Some(&DirichletChar::chi_d(d)?))
    } else {
        label.to_gamma1(level)
    };
    Ok((g, new_label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modseries::ResidueRing;
    use crate::qgen;

    fn ring(m: u64) -> ResidueRing {
        ResidueRing::new(m).unwrap()
    }

    fn g0(k2: u32, level: u64) -> SpaceLabel {
        SpaceLabel::new(k2, level, Group::Gamma0).unwrap()
    }

    #[test]
    fn hecke_constant_term() {
        let r = ring(1_000_003);
        let f = qgen::r_m_series(10, 22, r).unwrap();
        let chi = DirichletChar::kronecker(-4).unwrap();
        let t = hecke_t(&f, 10, 11, &chi).unwrap();
        assert_eq!(r.centered(t.coeffs()[0]), -14640);
        assert_eq!(t.trunc(), 2);
    }

    #[test]
    fn hecke_agrees_with_u_mod_ell() {
        let r = ring(11);
        let f = qgen::r_m_series(10, 2200, r).unwrap();
        let chi = DirichletChar::kronecker(-4).unwrap();
        let t = hecke_t(&f, 10, 11, &chi).unwrap();
        let (u, _) = apply_u(&f, &g0(10, 44), 11).unwrap();
        assert_eq!(t, u);
    }

    #[test]
    fn hecke_rejects_odd_weight_and_composite_ell() {
        let f = TruncSeries::zero(ring(11), 50).unwrap();
        let chi = DirichletChar::trivial();
        assert!(hecke_t(&f, 9, 11, &chi).is_err());
        assert!(hecke_t(&f, 10, 12, &chi).is_err());
        assert!(hecke_t(&f, 10, 11, &chi).unwrap().is_zero());
    }

    #[test]
    fn u_requires_divisibility() {
        let f = TruncSeries::one(ring(11), 50).unwrap();
        assert!(matches!(
            apply_u(&f, &g0(9, 4), 2),
            Err(Error::Divisibility(_))
        ));
        let (g, l) = apply_u(&f, &g0(9, 8), 2).unwrap();
        assert_eq!(g.trunc(), 25);
        assert_eq!(l.level(), 8);
        assert!(l.character().unwrap().equivalent(&DirichletChar::chi_d(2).unwrap()));
    }

    #[test]
    fn u_one_is_identity() {
        let r = ring(13);
        let f = qgen::theta_phi(100, r).unwrap();
        let l = g0(1, 4);
        let (g, l2) = apply_u(&f, &l, 1).unwrap();
        assert_eq!(g, f);
        assert_eq!(l2, l);
    }

    #[test]
    fn v_then_u_restores_series() {
        let r = ring(11);
        let f = qgen::theta_phi(200, r).unwrap();
        let (g, l) = apply_v(&f, &g0(1, 4), 11).unwrap();
        assert_eq!(l.level(), 44);
        assert_eq!(g.coeffs()[11], 2);
        assert_eq!(g.coeffs()[1], 0);
        let (h, _) = apply_u(&g, &l, 11).unwrap();
        assert_eq!(h.truncate(200).unwrap(), f);
    }

    #[test]
    fn twist_by_trivial_is_identity() {
        let r = ring(11);
        let f = qgen::theta_phi(100, r).unwrap();
        let l = g0(1, 4);
        let (g, l2) = apply_twist(&f, &l, &DirichletChar::trivial()).unwrap();
        assert_eq!(g, f);
        assert_eq!(l2, l);
    }

    #[test]
    fn twist_of_phi_by_eight() {
        let r = ring(1_000_003);
        let f = qgen::theta_phi(100, r).unwrap();
        let psi = DirichletChar::kronecker(8).unwrap();
        let (g, l) = apply_twist(&f, &g0(1, 4), &psi).unwrap();
        assert_eq!(l.level(), 256);
        for n in 0..=100u64 {
            let sq = (n as f64).sqrt() as u64;
            let expected: i64 = if n > 0 && sq * sq == n {
                2 * crate::chars::kronecker(8, n as i64) as i64
            } else {
                0
            };
            assert_eq!(r.centered(g.coeffs()[n as usize]), expected, "n = {n}");
        }
    }

    #[test]
    fn sieve_label_for_mod_eight() {
        let r = ring(11);
        let f = qgen::theta_phi(100, r).unwrap();
        let (g, l) = sieve_progression(&f, &g0(9, 4), 1, 8, 5).unwrap();
        assert_eq!(l.level(), 256);
        assert_eq!(l.group(), Group::Gamma0);
        for (n, &c) in g.coeffs().iter().enumerate() {
            if n % 8 != 5 {
                assert_eq!(c, 0);
            } else {
                assert_eq!(c, f.coeffs()[n]);
            }
        }
    }

    #[test]
    fn sieve_with_complex_characters_goes_to_gamma1() {
        let r = ring(11);
        let f = TruncSeries::one(r, 121 * 200).unwrap();
        let (_, l) = sieve_progression(&f, &g0(15, 4), 121, 88, 19).unwrap();
        assert_eq!(l.group(), Group::Gamma1);
        assert_eq!(l.level(), 4 * 121 * 88 * 88);
    }

    #[test]
    fn trivial_sieve_is_identity() {
        let r = ring(11);
        let f = qgen::theta_phi(60, r).unwrap();
        let l = g0(9, 4);
        let (g, l2) = sieve_progression(&f, &l, 1, 1, 0).unwrap();
        assert_eq!(g, f);
        assert_eq!(l2, l);
    }

    #[test]
    fn sieve_requires_coprime_residue() {
        let f = TruncSeries::one(ring(11), 60).unwrap();
        assert!(matches!(
            sieve_progression(&f, &g0(9, 4), 1, 8, 4),
            Err(Error::NotCoprime { .. })
        ));
    }
}
