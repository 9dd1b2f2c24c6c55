//! Standard q-expansions: q-Pochhammer products, eta quotients, the theta
//! function φ(q), F(q) = η(4z)^8/η(2z)^4, powers of φ, and the overpartition
//! generating function 1/φ(-q).

use crate::error::{Error, Result};
use crate::modseries::{ResidueRing, TruncSeries};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// `(q^delta; q^delta)_inf` through `q^trunc`.
///
/// Expanded from Euler's pentagonal number theorem: the support is
/// `delta * k(3k-1)/2` for `k` in Z with sign `(-1)^k`.
pub fn pochhammer(delta: usize, trunc: usize, ring: ResidueRing) -> Result<TruncSeries> {
    if delta == 0 {
        return Err(Error::Invalid("pochhammer step must be positive".into()));
    }
    let mut coeffs = vec![0u32; trunc + 1];
    coeffs[0] = 1;
    let minus_one = ring.neg(1);
    for k in 1usize.. {
        let lo = delta * (k * (3 * k - 1) / 2);
        if lo > trunc {
            break;
        }
        let sign = if k % 2 == 1 { minus_one } else { 1 };
        coeffs[lo] = sign;
        let hi = delta * (k * (3 * k + 1) / 2);
        if hi <= trunc {
            coeffs[hi] = sign;
        }
    }
    TruncSeries::from_residues_with_threshold(ring, coeffs, 1.0)
}

/// A finite product `prod eta(delta z)^r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaQuotient {
    factors: Vec<(usize, i64)>,
}

impl EtaQuotient {
    /// Sorts by `delta` and rejects repeated or zero deltas. Zero exponents are dropped.
    pub fn new(mut factors: Vec<(usize, i64)>) -> Result<Self> {
        factors.retain(|&(_, r)| r != 0);
        factors.sort_unstable_by_key(|&(d, _)| d);
        if factors.iter().any(|&(d, _)| d == 0) {
            return Err(Error::InvalidEta("delta must be positive".into()));
        }
        if factors.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidEta("repeated delta".into()));
        }
        Ok(Self { factors })
    }

    /// `eta(2z)^5 / (eta(z)^2 eta(4z)^2)`, which is φ(q).
    pub fn phi() -> Self {
        Self::new(vec![(1, -2), (2, 5), (4, -2)]).unwrap()
    }

    /// `eta(z)^2 / eta(2z)`, which is φ(-q).
    pub fn phi_minus() -> Self {
        Self::new(vec![(1, 2), (2, -1)]).unwrap()
    }

    /// `eta(2z) / eta(z)^2`, the overpartition generating function 1/φ(-q).
    pub fn overpartition() -> Self {
        Self::new(vec![(1, -2), (2, 1)]).unwrap()
    }

    /// `eta(4z)^8 / eta(2z)^4`.
    pub fn f_form() -> Self {
        Self::new(vec![(2, -4), (4, 8)]).unwrap()
    }

    pub fn factors(&self) -> &[(usize, i64)] {
        &self.factors
    }

    /// `sum delta * r`, i.e. 24 times the leading q-power.
    pub fn prefactor24(&self) -> i64 {
        self.factors.iter().map(|&(d, r)| d as i64 * r).sum()
    }

    /// Weight `sum r / 2`, returned doubled.
    pub fn twice_weight(&self) -> i64 {
        self.factors.iter().map(|&(_, r)| r).sum()
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|(d, r)| format!("{d}:{r}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses `delta:r,delta:r,...`, e.g. `2:5,1:-2,4:-2`.
impl FromStr for EtaQuotient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .split(',')
            .map(|part| {
                let (d, r) = part
                    .split_once(':')
                    .ok_or_else(|| Error::InvalidEta(format!("expected delta:r, got {part:?}")))?;
                let d = d
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| Error::InvalidEta(format!("{d:?}: {e}")))?;
                let r = r
                    .trim()
                    .parse::<i64>()
                    .map_err(|e| Error::InvalidEta(format!("{r:?}: {e}")))?;
                Ok((d, r))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }
}

/// An eta quotient's product part together with its `q^{prefactor24/24}` factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    pub prefactor24: i64,
    pub series: TruncSeries,
}

impl QExpansion {
    /// Absorbs the prefactor as a shift. The prefactor must be a nonnegative
    /// integral power of q; the shifted series stays known through the same
    /// truncation.
    pub fn into_series(self) -> Result<TruncSeries> {
        if self.prefactor24 % 24 != 0 || self.prefactor24 < 0 {
            return Err(Error::NonIntegralPrefactor(self.prefactor24));
        }
        Ok(self.series.shift((self.prefactor24 / 24) as usize))
    }
}

/// Expands the product part `prod (q^delta; q^delta)^r` through `q^trunc`.
///
/// Each unit of exponent is one multiplication or division by a pentagonal
/// (sparse) series, so the cost is `O(T^1.5 * sum |r|)`.
pub fn eta_quotient(q: &EtaQuotient, trunc: usize, ring: ResidueRing) -> Result<QExpansion> {
    // Work in q^g where g is the gcd of the deltas, then dilate back.
    let g = q.factors.iter().fold(0, |g, &(d, _)| gcd(g, d)).max(1);
    let inner = trunc / g;
    let mut series = TruncSeries::one(ring, inner)?;
    for &(delta, r) in &q.factors {
        let p = pochhammer(delta / g, inner, ring)?;
        for _ in 0..r.unsigned_abs() {
            series = if r > 0 { series.mul(&p)? } else { series.div(&p)? };
        }
    }
    let series = if g > 1 {
        series.transform_to(g, 1, trunc)?
    } else {
        series
    };
    Ok(QExpansion {
        prefactor24: q.prefactor24(),
        series,
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// φ(q) = sum over n in Z of q^{n^2}.
pub fn theta_phi(trunc: usize, ring: ResidueRing) -> Result<TruncSeries> {
    let mut coeffs = vec![0u32; trunc + 1];
    coeffs[0] = 1;
    let two = 2 % ring.modulus();
    for k in 1usize.. {
        let sq = k * k;
        if sq > trunc {
            break;
        }
        coeffs[sq] = two;
    }
    TruncSeries::from_residues_with_threshold(ring, coeffs, 1.0)
}

/// F(q) = η(4z)^8/η(2z)^4 = q + 4q^3 + 6q^5 + ..., as a plain series.
pub fn f_form(trunc: usize, ring: ResidueRing) -> Result<TruncSeries> {
    eta_quotient(&EtaQuotient::f_form(), trunc, ring)?.into_series()
}

/// φ(q)^m = sum r_m(n) q^n.
pub fn r_m_series(m_exp: u32, trunc: usize, ring: ResidueRing) -> Result<TruncSeries> {
    theta_phi(trunc, ring)?.pow(m_exp as u64)
}

pub const BRUTEFORCE_MAX_EXP: u32 = 12;
pub const BRUTEFORCE_MAX_N: u64 = 50;

/// Counts integer vectors `(x_1, ..., x_m)` with `sum x_i^2 = n` by
/// depth-first enumeration over the coordinates, pruning at the remaining
/// radius and memoizing on `(coordinates left, remainder)`.
pub fn r_m_bruteforce(n: u64, m_exp: u32) -> Result<u64> {
    if m_exp > BRUTEFORCE_MAX_EXP || n > BRUTEFORCE_MAX_N {
        return Err(Error::Budget(format!(
            "r_m brute force is limited to m <= {BRUTEFORCE_MAX_EXP}, n <= {BRUTEFORCE_MAX_N}"
        )));
    }
    let mut memo = vec![vec![None; n as usize + 1]; m_exp as usize + 1];
    Ok(count_vectors(m_exp as usize, n as i64, &mut memo))
}

fn count_vectors(dims: usize, rest: i64, memo: &mut [Vec<Option<u64>>]) -> u64 {
    if dims == 0 {
        return (rest == 0) as u64;
    }
    if let Some(v) = memo[dims][rest as usize] {
        return v;
    }
    let mut total = 0;
    let mut x = 0i64;
    while x * x <= rest {
        let ways = if x == 0 { 1 } else { 2 };
        total += ways * count_vectors(dims - 1, rest - x * x, memo);
        x += 1;
    }
    memo[dims][rest as usize] = Some(total);
    total
}

/// Two primes whose product bounds the exact integers recoverable by [`crt_pair`].
pub const CRT_PRIMES: (u64, u64) = (2_147_483_647, 2_147_483_629);

/// The unique `x < m1 * m2` with `x = a (mod m1)`, `x = b (mod m2)`.
pub fn crt_pair(a: u64, m1: u64, b: u64, m2: u64) -> Result<u64> {
    let r2 = ResidueRing::new(m2)?;
    let inv = r2
        .inv((m1 % m2) as u32)
        .ok_or(Error::NotCoprime { a: m1, b: m2 })?;
    let t = r2.mul(r2.sub(r2.reduce(b), r2.reduce(a)), inv) as u128;
    Ok((a as u128 + m1 as u128 * t) as u64)
}

/// Exact r_m(0..=trunc) via two word-size primes and CRT. Valid while the true
/// values stay below the product of [`CRT_PRIMES`].
pub fn r_m_exact(m_exp: u32, trunc: usize) -> Result<Vec<u64>> {
    let (p1, p2) = CRT_PRIMES;
    let a = r_m_series(m_exp, trunc, ResidueRing::new(p1)?)?;
    let b = r_m_series(m_exp, trunc, ResidueRing::new(p2)?)?;
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(&x, &y)| crt_pair(x as u64, p1, y as u64, p2))
        .collect()
}

/// Overpartition generating function `sum pbar(n) q^n = 1/φ(-q)`.
///
/// Inverts the sparse series φ(-q), so the cost is `O(T^1.5)`.
pub fn overpartition_series(trunc: usize, ring: ResidueRing) -> Result<TruncSeries> {
    theta_phi(trunc, ring)?.transform(1, -1)?.invert()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(m: u64) -> ResidueRing {
        ResidueRing::new(m).unwrap()
    }

    /// Term-by-term product of (1 - q^{delta k}).
    fn pochhammer_direct(delta: usize, trunc: usize, m: u64) -> Vec<u32> {
        let r = ring(m);
        let mut acc = vec![0u32; trunc + 1];
        acc[0] = 1;
        let mut k = delta;
        while k <= trunc {
            for n in (k..=trunc).rev() {
                acc[n] = r.sub(acc[n], acc[n - k]);
            }
            k += delta;
        }
        acc
    }

    #[test]
    fn euler_product_small_cases() {
        let p = pochhammer(1, 8, ring(101)).unwrap();
        assert_eq!(
            p.coeffs(),
            TruncSeries::from_integers(ring(101), &[1, -1, -1, 0, 0, 1, 0, 1, 0])
                .unwrap()
                .coeffs()
        );
        let p2 = pochhammer(2, 4, ring(101)).unwrap();
        assert_eq!(p2.coeffs(), &[1, 0, 100, 0, 100]);
    }

    #[test]
    fn pentagonal_expansion_matches_direct_product() {
        for delta in 1..=4 {
            let p = pochhammer(delta, 200, ring(1_000_003)).unwrap();
            assert_eq!(p.coeffs(), pochhammer_direct(delta, 200, 1_000_003).as_slice());
            assert_eq!(p.coeffs()[0], 1);
        }
    }

    #[test]
    fn eta_forms_of_phi() {
        let r = ring(1_000_003);
        let phi = theta_phi(2000, r).unwrap();
        let e = eta_quotient(&EtaQuotient::phi(), 2000, r).unwrap();
        assert_eq!(e.prefactor24, 0);
        assert_eq!(e.into_series().unwrap(), phi);

        let e = eta_quotient(&EtaQuotient::phi_minus(), 2000, r).unwrap();
        assert_eq!(e.prefactor24, 0);
        assert_eq!(e.into_series().unwrap(), phi.transform(1, -1).unwrap());
    }

    #[test]
    fn eta_2z_over_eta_z_squared_is_the_overpartition_series() {
        let r = ring(1_000_003);
        let q: EtaQuotient = "2:1,1:-2".parse().unwrap();
        let e = eta_quotient(&q, 500, r).unwrap().into_series().unwrap();
        assert_eq!(e, overpartition_series(500, r).unwrap());
        assert_ne!(e, theta_phi(500, r).unwrap().transform(1, -1).unwrap());
    }

    #[test]
    fn f_form_prefactor_and_divisor_sums() {
        assert_eq!(EtaQuotient::f_form().prefactor24(), 24);
        let r = ring(1_000_003);
        let f = f_form(300, r).unwrap();
        // F(q) = sum over odd n of sigma(n) q^n
        for n in 0..=300usize {
            let expected = if n % 2 == 1 {
                (1..=n).filter(|d| n % d == 0).sum::<usize>() as u32
            } else {
                0
            };
            assert_eq!(f.coeffs()[n], expected, "n = {n}");
        }
    }

    #[test]
    fn non_integral_prefactor_is_rejected() {
        let q = EtaQuotient::new(vec![(1, 1)]).unwrap();
        let e = eta_quotient(&q, 10, ring(7)).unwrap();
        assert_eq!(e.into_series(), Err(Error::NonIntegralPrefactor(1)));
    }

    #[test]
    fn eta_parsing() {
        let q: EtaQuotient = "2:5, 1:-2, 4:-2".parse().unwrap();
        assert_eq!(q, EtaQuotient::phi());
        assert_eq!(q.to_string(), "1:-2,2:5,4:-2");
        assert_eq!(q.twice_weight(), 1);
        assert!("2:1,2:3".parse::<EtaQuotient>().is_err());
        assert!("0:1".parse::<EtaQuotient>().is_err());
        assert!("2".parse::<EtaQuotient>().is_err());
    }

    #[test]
    fn theta_by_definition() {
        let phi = theta_phi(10, ring(11)).unwrap();
        assert_eq!(phi.coeffs(), &[1, 2, 0, 0, 2, 0, 0, 0, 0, 2, 0]);
        assert_eq!(phi.coefficient_at(6), Ok(0));
        assert!(phi.support_hint().is_some());
        assert_eq!(r_m_series(1, 10, ring(11)).unwrap(), phi);
    }

    #[test]
    fn brute_force_lattice_counts() {
        assert_eq!(r_m_bruteforce(4, 1), Ok(2));
        assert_eq!(r_m_bruteforce(1, 10), Ok(20));
        assert_eq!(r_m_bruteforce(2, 12), Ok(264));
        assert_eq!(r_m_bruteforce(0, 7), Ok(1));
        assert!(r_m_bruteforce(51, 2).is_err());
        assert!(r_m_bruteforce(3, 13).is_err());
    }

    #[test]
    fn crt_recovers_known_theta_powers() {
        assert_eq!(r_m_exact(10, 2).unwrap(), vec![1, 20, 180]);
        assert_eq!(r_m_exact(12, 3).unwrap(), vec![1, 24, 264, 1760]);
    }

    #[test]
    fn first_overpartition_numbers() {
        let p = overpartition_series(3, ring(13)).unwrap();
        assert_eq!(p.coeffs(), &[1, 2, 4, 8]);
    }
}
