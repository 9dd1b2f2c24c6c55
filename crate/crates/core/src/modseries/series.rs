use super::ring::ResidueRing;
use crate::error::{Error, Result};

/// Largest truncation any series may carry.
pub const TRUNCATION_CAP: usize = 64_000_000;

/// Density at or below which a support hint is attached.
pub const DEFAULT_DENSITY_THRESHOLD: f64 = 0.125;

/// A power series over Z/mZ known through `q^trunc` inclusive.
///
/// Coefficients are canonical residues. When few coefficients are nonzero the
/// series also carries the sorted list of its nonzero exponents, and products
/// and inversions iterate over that list instead of the dense vector.
#[derive(Clone)]
pub struct TruncSeries {
    ring: ResidueRing,
    coeffs: Vec<u32>,
    support: Option<Vec<usize>>,
}

impl std::fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        const SHOWN: usize = 12;
        let head = &self.coeffs[..self.coeffs.len().min(SHOWN)];
        write!(f, "TruncSeries({}, T={}, {:?}", self.ring, self.trunc(), head)?;
        if self.coeffs.len() > SHOWN {
            f.write_str(" ...")?;
        }
        f.write_str(")")
    }
}

impl PartialEq for TruncSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.coeffs == other.coeffs
    }
}

impl Eq for TruncSeries {}

fn check_trunc(trunc: usize) -> Result<()> {
    if trunc > TRUNCATION_CAP {
        return Err(Error::TruncationCap {
            requested: trunc,
            cap: TRUNCATION_CAP,
        });
    }
    Ok(())
}

impl TruncSeries {
    /// Builds a series from canonical residues, attaching a support hint at the
    /// default density threshold.
    pub fn from_residues(ring: ResidueRing, coeffs: Vec<u32>) -> Result<Self> {
        Self::from_residues_with_threshold(ring, coeffs, DEFAULT_DENSITY_THRESHOLD)
    }

    pub fn from_residues_with_threshold(
        ring: ResidueRing,
        coeffs: Vec<u32>,
        density_threshold: f64,
    ) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("a series needs at least one coefficient".into()));
        }
        check_trunc(coeffs.len() - 1)?;
        let m = ring.modulus();
        if let Some(bad) = coeffs.iter().find(|&&c| c >= m) {
            return Err(Error::Invalid(format!("residue {bad} is not reduced mod {m}")));
        }
        Ok(Self::build(ring, coeffs, density_threshold))
    }

    /// Reduces arbitrary integers into the ring.
    pub fn from_integers(ring: ResidueRing, values: &[i64]) -> Result<Self> {
        Self::from_residues(ring, values.iter().map(|&v| ring.from_i64(v)).collect())
    }

    fn build(ring: ResidueRing, coeffs: Vec<u32>, density_threshold: f64) -> Self {
        let nnz = coeffs.iter().filter(|&&c| c != 0).count();
        let support = ((nnz as f64) <= density_threshold * coeffs.len() as f64).then(|| {
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, _)| i)
                .collect()
        });
        Self {
            ring,
            coeffs,
            support,
        }
    }

    fn from_parts(ring: ResidueRing, coeffs: Vec<u32>) -> Self {
        Self::build(ring, coeffs, DEFAULT_DENSITY_THRESHOLD)
    }

    pub fn zero(ring: ResidueRing, trunc: usize) -> Result<Self> {
        check_trunc(trunc)?;
        Ok(Self::from_parts(ring, vec![0; trunc + 1]))
    }

    pub fn one(ring: ResidueRing, trunc: usize) -> Result<Self> {
        Self::monomial(ring, trunc, 0, 1)
    }

    /// `c * q^exponent`, or zero if the exponent lies beyond the truncation.
    pub fn monomial(ring: ResidueRing, trunc: usize, exponent: usize, c: u32) -> Result<Self> {
        check_trunc(trunc)?;
        let mut coeffs = vec![0; trunc + 1];
        if exponent <= trunc {
            coeffs[exponent] = c % ring.modulus();
        }
        Ok(Self::from_parts(ring, coeffs))
    }

    #[inline]
    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    #[inline]
    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }

    pub fn support_hint(&self) -> Option<&[usize]> {
        self.support.as_deref()
    }

    /// Coefficient of `q^n`; reading past the truncation is an error.
    pub fn coefficient_at(&self, n: usize) -> Result<u32> {
        self.coeffs.get(n).copied().ok_or(Error::BeyondTruncation {
            index: n,
            trunc: self.trunc(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    /// Nonzero `(exponent, coefficient)` pairs, using the hint when present.
    pub fn nonzero_terms(&self) -> Vec<(usize, u32)> {
        match &self.support {
            Some(s) => s.iter().map(|&i| (i, self.coeffs[i])).collect(),
            None => self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, c))
                .collect(),
        }
    }

    /// Drops coefficients above `q^trunc`.
    pub fn truncate(&self, trunc: usize) -> Result<Self> {
        if trunc > self.trunc() {
            return Err(Error::InsufficientTruncation {
                needed: trunc,
                have: self.trunc(),
            });
        }
        Ok(Self::from_parts(self.ring, self.coeffs[..=trunc].to_vec()))
    }

    /// Shifts by `q^k`, keeping the truncation.
    pub fn shift(&self, k: usize) -> Self {
        let t = self.trunc();
        let mut coeffs = vec![0; t + 1];
        if k <= t {
            coeffs[k..].copy_from_slice(&self.coeffs[..=t - k]);
        }
        Self::from_parts(self.ring, coeffs)
    }

    /// Divides by `q^k`; the low `k` coefficients must vanish.
    pub fn unshift(&self, k: usize) -> Result<Self> {
        if k > self.trunc() {
            return Err(Error::InsufficientTruncation {
                needed: k,
                have: self.trunc(),
            });
        }
        if let Some(i) = self.coeffs[..k].iter().position(|&c| c != 0) {
            return Err(Error::Invalid(format!(
                "cannot divide by q^{k}: coefficient of q^{i} is nonzero"
            )));
        }
        Ok(Self::from_parts(self.ring, self.coeffs[k..].to_vec()))
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.modulus(),
                right: other.ring.modulus(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let t = self.trunc().min(other.trunc());
        let r = self.ring;
        let coeffs = (0..=t).map(|i| r.add(self.coeffs[i], other.coeffs[i])).collect();
        Ok(Self::from_parts(r, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let t = self.trunc().min(other.trunc());
        let r = self.ring;
        let coeffs = (0..=t).map(|i| r.sub(self.coeffs[i], other.coeffs[i])).collect();
        Ok(Self::from_parts(r, coeffs))
    }

    pub fn neg(&self) -> Self {
        let r = self.ring;
        Self::from_parts(r, self.coeffs.iter().map(|&c| r.neg(c)).collect())
    }

    pub fn scale(&self, c: u32) -> Self {
        let r = self.ring;
        let c = c % r.modulus();
        Self::from_parts(r, self.coeffs.iter().map(|&x| r.mul(x, c)).collect())
    }

    /// Truncated product; the result is known through the smaller truncation.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let t = self.trunc().min(other.trunc());
        // Iterate over the sparser factor's nonzero terms.
        let (rows, dense) = match (&self.support, &other.support) {
            (Some(a), Some(b)) if b.len() < a.len() => (other.nonzero_terms(), self),
            (Some(_), _) => (self.nonzero_terms(), other),
            (None, Some(_)) => (other.nonzero_terms(), self),
            (None, None) => (self.nonzero_terms(), other),
        };
        Ok(Self::from_parts(
            self.ring,
            convolve_rows(self.ring, &rows, &dense.coeffs[..=t]),
        ))
    }

    /// `f^e` through the truncation of `f`; `f^0 = 1`.
    pub fn pow(&self, e: u64) -> Result<Self> {
        let t = self.trunc();
        if e == 0 {
            return Self::one(self.ring, t);
        }
        if e == 1 {
            return Ok(self.clone());
        }
        // Repeated sparse multiplication beats squaring when the base is thin.
        if let Some(s) = &self.support {
            let log_e = 64 - e.leading_zeros() as u64;
            let sparse_cost = (e - 1).saturating_mul(s.len() as u64);
            if sparse_cost <= log_e.saturating_mul(t as u64 / 2 + 1) {
                let mut acc = self.clone();
                for _ in 1..e {
                    acc = acc.mul(self)?;
                }
                return Ok(acc);
            }
        }
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc.expect("e >= 1"))
    }

    /// Multiplicative inverse through the same truncation.
    ///
    /// Runs the triangular recurrence over the nonzero terms of `f` only, so a
    /// series with `s` nonzero coefficients inverts in `O(T * s)`.
    pub fn invert(&self) -> Result<Self> {
        let r = self.ring;
        let inv0 = r.inv(self.coeffs[0]).ok_or(Error::NonUnit(self.coeffs[0]))?;
        let neg_inv0 = r.neg(inv0);
        let t = self.trunc();
        let tail: Vec<(usize, u64)> = self
            .nonzero_terms()
            .into_iter()
            .filter(|&(j, _)| j >= 1)
            .map(|(j, c)| (j, c as u64))
            .collect();
        let m = r.modulus() as u64;
        let budget = r.lazy_budget();
        let mut out = vec![0u32; t + 1];
        out[0] = inv0;
        for n in 1..=t {
            let live = tail.partition_point(|&(j, _)| j <= n);
            let mut acc = 0u64;
            for chunk in tail[..live].chunks(budget) {
                acc = chunk
                    .iter()
                    .fold(acc, |a, &(j, c)| a + c * out[n - j] as u64)
                    % m;
            }
            out[n] = r.mul(acc as u32, neg_inv0);
        }
        Ok(Self::from_parts(r, out))
    }

    /// `self / den` through the smaller truncation, by the same recurrence as
    /// [`invert`](Self::invert); cost `O(T * nnz(den))`.
    pub fn div(&self, den: &Self) -> Result<Self> {
        self.same_ring(den)?;
        let r = self.ring;
        let inv0 = r.inv(den.coeffs[0]).ok_or(Error::NonUnit(den.coeffs[0]))?;
        let t = self.trunc().min(den.trunc());
        let tail: Vec<(usize, u64)> = den
            .nonzero_terms()
            .into_iter()
            .filter(|&(j, _)| (1..=t).contains(&j))
            .map(|(j, c)| (j, r.neg(c) as u64))
            .collect();
        let m = r.modulus() as u64;
        let budget = r.lazy_budget();
        let mut out = vec![0u32; t + 1];
        for n in 0..=t {
            let mut acc = self.coeffs[n] as u64;
            let mut pending = 0usize;
            for &(j, c) in &tail {
                if j > n {
                    break;
                }
                acc += c * out[n - j] as u64;
                pending += 1;
                if pending == budget {
                    acc %= m;
                    pending = 0;
                }
            }
            out[n] = r.mul(r.reduce(acc), inv0);
        }
        Ok(Self::from_parts(r, out))
    }

    /// Substitutes `q -> sign * q^d`, keeping `trunc * d` as the new truncation.
    pub fn transform(&self, d: usize, sign: i8) -> Result<Self> {
        let t = self
            .trunc()
            .checked_mul(d)
            .ok_or(Error::TruncationCap {
                requested: usize::MAX,
                cap: TRUNCATION_CAP,
            })?;
        self.transform_to(d, sign, t)
    }

    /// Substitutes `q -> sign * q^d`, producing exactly `trunc` as truncation.
    /// `trunc` may not exceed `d * self.trunc() + d - 1`, since nothing beyond
    /// that is determined.
    pub fn transform_to(&self, d: usize, sign: i8, trunc: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("dilation factor must be positive".into()));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::Invalid(format!("sign must be +1 or -1, got {sign}")));
        }
        check_trunc(trunc)?;
        let known = self.trunc() * d + (d - 1);
        if trunc > known {
            return Err(Error::InsufficientTruncation {
                needed: trunc.div_ceil(d),
                have: self.trunc(),
            });
        }
        let r = self.ring;
        let mut coeffs = vec![0u32; trunc + 1];
        for (n, c) in self.nonzero_terms() {
            let Some(e) = n.checked_mul(d).filter(|&e| e <= trunc) else {
                continue;
            };
            coeffs[e] = if sign < 0 && n % 2 == 1 { r.neg(c) } else { c };
        }
        Ok(Self::from_parts(r, coeffs))
    }

    /// Keeps the terms with exponent `= b (mod a)`; truncation unchanged.
    pub fn extract_progression(&self, a: usize, b: usize) -> Result<Self> {
        check_progression(a, b)?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &c)| if n % a == b { c } else { 0 })
            .collect();
        Ok(Self::from_parts(self.ring, coeffs))
    }

    /// `g[n] = f[a*n + b]`, known through `floor((T - b) / a)`.
    pub fn compact_progression(&self, a: usize, b: usize) -> Result<Self> {
        check_progression(a, b)?;
        if b > self.trunc() {
            return Err(Error::InsufficientTruncation {
                needed: b,
                have: self.trunc(),
            });
        }
        let coeffs = self.coeffs[b..].iter().step_by(a).copied().collect();
        Ok(Self::from_parts(self.ring, coeffs))
    }

    /// Reinterprets the residues in a ring whose modulus divides this one's.
    pub fn reduce_mod(&self, ring: ResidueRing) -> Result<Self> {
        if !self.ring.modulus().is_multiple_of(ring.modulus()) {
            return Err(Error::Invalid(format!(
                "{} does not divide {}",
                ring.modulus(),
                self.ring.modulus()
            )));
        }
        let m = ring.modulus();
        Ok(Self::from_parts(ring, self.coeffs.iter().map(|&c| c % m).collect()))
    }
}

fn check_progression(a: usize, b: usize) -> Result<()> {
    if a == 0 || b >= a {
        return Err(Error::Invalid(format!(
            "progression needs a >= 1 and 0 <= b < a, got ({a}, {b})"
        )));
    }
    Ok(())
}

/// `out[i + j] += c * dense[j]` for each `(i, c)` row, reduced at the end.
fn convolve_rows(ring: ResidueRing, rows: &[(usize, u32)], dense: &[u32]) -> Vec<u32> {
    let t = dense.len() - 1;
    let m = ring.modulus() as u64;
    let budget = ring.lazy_budget();
    let mut acc = vec![0u64; t + 1];
    let mut pending = 0usize;
    for &(i, c) in rows {
        if i > t {
            break;
        }
        let c = c as u64;
        for (slot, &d) in acc[i..].iter_mut().zip(dense) {
            *slot += c * d as u64;
        }
        pending += 1;
        if pending == budget {
            acc.iter_mut().for_each(|x| *x %= m);
            pending = 0;
        }
    }
    acc.into_iter().map(|x| (x % m) as u32).collect()
}
