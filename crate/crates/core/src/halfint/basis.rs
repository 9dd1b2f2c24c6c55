use crate::chars::DirichletChar;
use crate::error::{Error, Result};
use crate::modseries::{ResidueRing, TruncSeries};
use crate::qgen::{self, EtaQuotient};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Extra coefficients [`decompose`] insists on beyond the last basis leading term.
pub const DECOMPOSE_MARGIN: usize = 8;

/// The monomials `F^b phi^a` with `a + 4b = k2`, ascending in `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialBasis {
    pub k2: u32,
    /// `(a, b)` pairs: exponent of phi, exponent of F.
    pub monomials: Vec<(u32, u32)>,
}

impl MonomialBasis {
    pub fn new(k2: u32) -> Self {
        let monomials = (0..=k2 / 4).map(|b| (k2 - 4 * b, b)).collect();
        Self { k2, monomials }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// The character of the graded piece on Gamma0(4): chi_{-4} for odd
    /// integral weight, trivial otherwise.
    pub fn character(&self) -> DirichletChar {
        if self.k2 % 4 == 2 {
            DirichletChar::kronecker(-4).expect("nonzero discriminant")
        } else {
            DirichletChar::trivial()
        }
    }

    /// Expansions of every monomial through `q^trunc`, computed in parallel.
    pub fn expand(&self, trunc: usize, ring: ResidueRing) -> Result<Vec<TruncSeries>> {
        self.monomials
            .par_iter()
            .map(|&(a, b)| expand_monomial(a, b, trunc, ring))
            .collect()
    }
}

pub fn basis_monomials(k2: u32) -> MonomialBasis {
    MonomialBasis::new(k2)
}

/// `F(q)^b * phi(q)^a` through `q^trunc`; leading term `q^b`.
pub fn expand_monomial(a: u32, b: u32, trunc: usize, ring: ResidueRing) -> Result<TruncSeries> {
    let mut s = if b == 0 {
        TruncSeries::one(ring, trunc)?
    } else {
        let fb = EtaQuotient::new(vec![(2, -4 * b as i64), (4, 8 * b as i64)])?;
        qgen::eta_quotient(&fb, trunc, ring)?.into_series()?
    };
    if a > 0 {
        let phi = qgen::theta_phi(trunc, ring)?;
        for _ in 0..a {
            s = s.mul(&phi)?;
        }
    }
    Ok(s)
}

/// Coordinates of a series in the monomial basis of weight `k2/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub k2: u32,
    pub ring: ResidueRing,
    /// One residue per monomial, indexed by the power of F.
    pub coeffs: Vec<u32>,
}

impl Decomposition {
    pub fn basis(&self) -> MonomialBasis {
        MonomialBasis::new(self.k2)
    }

    /// `sum coeffs[b] * F^b * phi^(k2 - 4b)` through `q^trunc`.
    pub fn recombine(&self, trunc: usize) -> Result<TruncSeries> {
        let parts = self.basis().expand(trunc, self.ring)?;
        combine(&parts, &self.coeffs, self.ring, trunc)
    }

    /// Human-readable form, highest power of F first, e.g. `F*phi^6 + phi^10`.
    pub fn to_expression(&self) -> String {
        let basis = self.basis();
        let terms: Vec<String> = basis
            .monomials
            .iter()
            .zip(&self.coeffs)
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(&(a, b), &c)| {
                let mut factors = Vec::new();
                match b {
                    0 => {}
                    1 => factors.push("F".to_string()),
                    _ => factors.push(format!("F^{b}")),
                }
                match a {
                    0 => {}
                    1 => factors.push("phi".to_string()),
                    _ => factors.push(format!("phi^{a}")),
                }
                let body = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
                if c == 1 {
                    body
                } else {
                    format!("{c}*{body}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn combine(
    parts: &[TruncSeries],
    coeffs: &[u32],
    ring: ResidueRing,
    trunc: usize,
) -> Result<TruncSeries> {
    let mut acc = TruncSeries::zero(ring, trunc)?;
    for (part, &c) in parts.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.add(&part.scale(c))?;
        }
    }
    Ok(acc)
}

/// Solves for the basis coordinates of `f` by forward substitution down the
/// triangular system, then requires the residual to vanish through `f.trunc()`.
pub fn decompose(f: &TruncSeries, k2: u32) -> Result<Decomposition> {
    let basis = MonomialBasis::new(k2);
    let needed = (k2 / 4) as usize + DECOMPOSE_MARGIN;
    if f.trunc() < needed {
        return Err(Error::InsufficientTruncation {
            needed,
            have: f.trunc(),
        });
    }
    let ring = f.ring();
    let parts = basis.expand(f.trunc(), ring)?;
    let mut residual = f.clone();
    let mut coeffs = Vec::with_capacity(parts.len());
    for (b, part) in parts.iter().enumerate() {
        debug_assert_eq!(part.coeffs()[b], 1);
        let c = residual.coeffs()[b];
        if c != 0 {
            residual = residual.sub(&part.scale(c))?;
        }
        coeffs.push(c);
    }
    if let Some(exponent) = residual.valuation() {
        return Err(Error::NotInSpan { k2, exponent });
    }
    Ok(Decomposition { k2, ring, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(m: u64) -> ResidueRing {
        ResidueRing::new(m).unwrap()
    }

    #[test]
    fn monomial_lists() {
        assert_eq!(MonomialBasis::new(10).monomials, vec![(10, 0), (6, 1), (2, 2)]);
        assert_eq!(
            MonomialBasis::new(12).monomials,
            vec![(12, 0), (8, 1), (4, 2), (0, 3)]
        );
        assert_eq!(MonomialBasis::new(9).monomials, vec![(9, 0), (5, 1), (1, 2)]);
        assert_eq!(MonomialBasis::new(3).len(), 1);
    }

    #[test]
    fn graded_piece_characters() {
        assert!(MonomialBasis::new(10)
            .character()
            .equivalent(&DirichletChar::kronecker(-4).unwrap()));
        assert!(MonomialBasis::new(12).character().is_principal());
        assert!(MonomialBasis::new(9).character().is_principal());
    }

    #[test]
    fn leading_terms_of_basis_elements() {
        let r = ring(1_000_003);
        let f1 = expand_monomial(6, 1, 4, r).unwrap();
        assert_eq!(&f1.coeffs()[..3], &[0, 1, 12]);
        let f2 = expand_monomial(8, 1, 4, r).unwrap();
        assert_eq!(&f2.coeffs()[..4], &[0, 1, 16, 116]);
        let f3 = expand_monomial(4, 2, 4, r).unwrap();
        assert_eq!(&f3.coeffs()[..4], &[0, 0, 1, 8]);
        assert_eq!(expand_monomial(0, 0, 3, r).unwrap().coeffs(), &[1, 0, 0, 0]);
        // mod 11: q + 12q^2 = q + q^2
        let f1 = expand_monomial(6, 1, 4, ring(11)).unwrap();
        assert_eq!(&f1.coeffs()[..3], &[0, 1, 1]);
    }

    #[test]
    fn basis_element_decomposes_to_a_unit_vector() {
        let r = ring(11);
        let f = expand_monomial(5, 1, 40, r).unwrap();
        assert_eq!(decompose(&f, 9).unwrap().coeffs, vec![0, 1, 0]);
    }

    #[test]
    fn out_of_span_reports_first_offending_exponent() {
        let r = ring(11);
        // phi^9 + q^20 is not in weight 9/2 with these leading terms
        let f = expand_monomial(9, 0, 40, r)
            .unwrap()
            .add(&TruncSeries::monomial(r, 40, 20, 1).unwrap())
            .unwrap();
        assert_eq!(
            decompose(&f, 9),
            Err(Error::NotInSpan { k2: 9, exponent: 20 })
        );
    }

    #[test]
    fn too_short_input_is_rejected() {
        let r = ring(11);
        let f = expand_monomial(9, 0, 5, r).unwrap();
        assert!(matches!(
            decompose(&f, 9),
            Err(Error::InsufficientTruncation { .. })
        ));
    }

    #[test]
    fn expression_rendering() {
        let d = Decomposition {
            k2: 12,
            ring: ring(13),
            coeffs: vec![1, 4, 1, 0],
        };
        assert_eq!(d.to_expression(), "F^2*phi^4 + 4*F*phi^8 + phi^12");
    }
}
