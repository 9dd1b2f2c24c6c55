//! Group indices and Sturm bounds.

use crate::chars::factorize;
use crate::error::{Error, Result};
use crate::halfint::{Group, LabelSummary, SpaceLabel};
use serde::{Deserialize, Serialize};

/// `[SL2(Z) : Gamma]` for `Gamma0(n)` or `Gamma1(n)`.
pub fn index_sl2(group: Group, n: u64) -> u64 {
    assert!(n >= 1, "level must be positive");
    let mut index: u64 = 1;
    for (p, e) in factorize(n) {
        index *= match group {
            Group::Gamma0 => p.pow(e - 1) * (p + 1),
            Group::Gamma1 => p.pow(2 * e - 2) * (p * p - 1),
        };
    }
    index
}

/// How far coefficients must be checked to pin down a form in a space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmBudget {
    pub label: LabelSummary,
    /// Weight of the form actually fed to Sturm's theorem (squared when half-integral).
    pub effective_weight: u32,
    pub index: u64,
    /// Largest exponent to check, inclusive.
    pub bound: u64,
    /// `(A, B, max_n)` once narrowed to a progression.
    pub per_progression: Option<(u64, u64, u64)>,
}

impl SturmBudget {
    fn raw(&self) -> u128 {
        self.effective_weight as u128 * self.index as u128 / 12
    }
}

pub fn sturm_bound(label: &SpaceLabel) -> SturmBudget {
    let k2 = label.twice_weight();
    let effective_weight = if k2 % 2 == 1 { k2 } else { k2 / 2 };
    let index = index_sl2(label.group(), label.level());
    let raw = effective_weight as u128 * index as u128 / 12;
    SturmBudget {
        label: label.into(),
        effective_weight,
        index,
        bound: (raw + 1) as u64,
        per_progression: None,
    }
}

/// Largest `n` to check along the progression `A n + B`.
///
/// On Gamma0 this is the largest `n` with `A n + B <= bound`. On Gamma1 the
/// limit is stated on the progression index directly, `floor(raw / A) + 1`
/// with `raw = floor(w * index / 12)`.
pub fn progression_limit(budget: &SturmBudget, a: u64, b: u64) -> Result<u64> {
    if a == 0 {
        return Err(Error::Invalid("progression modulus must be positive".into()));
    }
    match budget.label.group {
        Group::Gamma0 => {
            if b > budget.bound {
                return Err(Error::Invalid(format!(
                    "residue {b} exceeds the bound {}",
                    budget.bound
                )));
            }
            Ok((budget.bound - b) / a)
        }
        Group::Gamma1 => Ok((budget.raw() / a as u128 + 1) as u64),
    }
}

/// [`sturm_bound`] narrowed to a progression.
pub fn progression_budget(label: &SpaceLabel, a: u64, b: u64) -> Result<SturmBudget> {
    let mut budget = sturm_bound(label);
    let max_n = progression_limit(&budget, a, b)?;
    budget.per_progression = Some((a, b, max_n));
    Ok(budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::gcd;

    fn label(k2: u32, level: u64, group: Group) -> SpaceLabel {
        SpaceLabel::new(k2, level, group).unwrap()
    }

    #[test]
    fn small_indices() {
        assert_eq!(index_sl2(Group::Gamma0, 1), 1);
        assert_eq!(index_sl2(Group::Gamma0, 4), 6);
        assert_eq!(index_sl2(Group::Gamma0, 256), 384);
        assert_eq!(index_sl2(Group::Gamma0, 512), 768);
        assert_eq!(index_sl2(Group::Gamma1, 340736), 86_356_131_840);
        assert_eq!(index_sl2(Group::Gamma1, 562432), 235_843_485_696);
    }

    fn p1_points(n: u64) -> u64 {
        // classes of (c, d) with gcd(c, d, n) = 1 up to scaling by units
        let units: Vec<u64> = (1..=n).filter(|&u| gcd(u % n, n) == 1).collect();
        let mut seen = std::collections::HashSet::new();
        for c in 0..n {
            for d in 0..n {
                if gcd(gcd(c, d), n) != 1 {
                    continue;
                }
                let canon = units
                    .iter()
                    .map(|&u| ((u * c) % n, (u * d) % n))
                    .min()
                    .unwrap();
                seen.insert(canon);
            }
        }
        seen.len() as u64
    }

    fn primitive_rows(n: u64) -> u64 {
        let mut count = 0;
        for c in 0..n {
            for d in 0..n {
                if gcd(gcd(c, d), n) == 1 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn indices_match_coset_enumeration() {
        for n in 2..=30 {
            assert_eq!(index_sl2(Group::Gamma0, n), p1_points(n), "Gamma0({n})");
            assert_eq!(index_sl2(Group::Gamma1, n), primitive_rows(n), "Gamma1({n})");
        }
    }

    #[test]
    fn pinned_bounds() {
        let b = sturm_bound(&label(9, 256, Group::Gamma0));
        assert_eq!((b.effective_weight, b.index, b.bound), (9, 384, 289));
        assert_eq!(progression_limit(&b, 8, 5).unwrap(), 35);

        let b = sturm_bound(&label(11, 512, Group::Gamma0));
        assert_eq!((b.effective_weight, b.index, b.bound), (11, 768, 705));
        assert_eq!(progression_limit(&b, 8, 7).unwrap(), 87);

        let b = sturm_bound(&label(4, 4, Group::Gamma0));
        assert_eq!((b.effective_weight, b.bound), (2, 2));

        let b = sturm_bound(&label(15, 340736, Group::Gamma1));
        assert_eq!(progression_limit(&b, 88, 19).unwrap(), 1_226_649_601);
        let b = sturm_bound(&label(21, 562432, Group::Gamma1));
        assert_eq!(progression_limit(&b, 104, 3).unwrap(), 3_968_520_193);
    }

    #[test]
    fn progression_budget_records_limit() {
        let b = progression_budget(&label(9, 256, Group::Gamma0), 8, 5).unwrap();
        assert_eq!(b.per_progression, Some((8, 5, 35)));
        assert!(progression_budget(&label(9, 256, Group::Gamma0), 0, 5).is_err());
    }
}
