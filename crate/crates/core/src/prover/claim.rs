use crate::chars::{gcd, kronecker};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A side condition on `n` in `pbar(d n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `n mod modulus` lies in `set`.
    Residues { modulus: u64, set: Vec<u64> },
    /// `(n / p) = sign`.
    Kronecker { p: u64, sign: i8 },
}

impl Condition {
    pub fn holds(&self, n: u64) -> bool {
        match self {
            Condition::Residues { modulus, set } => set.contains(&(n % modulus)),
            Condition::Kronecker { p, sign } => kronecker(n as i64, *p as i64) == *sign,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Condition::Residues { modulus, set } => {
                if *modulus == 0 || set.iter().any(|r| r >= modulus) {
                    return Err(Error::Invalid(format!(
                        "residue condition {set:?} mod {modulus} is malformed"
                    )));
                }
            }
            Condition::Kronecker { p, sign } => {
                if *p < 2 || !(-1..=1).contains(sign) {
                    return Err(Error::Invalid(format!(
                        "Kronecker condition ({p}, {sign}) is malformed"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Residues { modulus, set } if set.len() == 1 => {
                write!(f, "n = {} (mod {modulus})", set[0])
            }
            Condition::Residues { modulus, set } => {
                let list: Vec<String> = set.iter().map(u64::to_string).collect();
                write!(f, "n mod {modulus} in {{{}}}", list.join(","))
            }
            Condition::Kronecker { p, sign } => write!(f, "(n/{p}) = {sign}"),
        }
    }
}

/// `pbar(d n) = 0 (mod m)` for `n = A t + B` satisfying every condition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CongruenceClaim {
    pub modulus: u64,
    pub multiplier: u64,
    pub progression: (u64, u64),
    #[serde(default)]
    pub conditions: Vec<Condition>,
}

impl CongruenceClaim {
    pub fn new(modulus: u64, multiplier: u64, a: u64, b: u64) -> Result<Self> {
        let claim = Self {
            modulus,
            multiplier,
            progression: (a, b),
            conditions: Vec::new(),
        };
        claim.validate()?;
        Ok(claim)
    }

    pub fn with_condition(mut self, c: Condition) -> Result<Self> {
        c.validate()?;
        self.conditions.push(c);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.progression;
        if self.modulus == 0 || self.multiplier == 0 {
            return Err(Error::Invalid("modulus and multiplier must be positive".into()));
        }
        if a == 0 || b >= a {
            return Err(Error::Invalid(format!("progression ({a}, {b}) needs 0 <= B < A")));
        }
        for c in &self.conditions {
            c.validate()?;
        }
        Ok(())
    }

    /// `n = A t + B`.
    pub fn argument(&self, t: u64) -> u64 {
        self.progression.0 * t + self.progression.1
    }

    pub fn applies(&self, n: u64) -> bool {
        self.conditions.iter().all(|c| c.holds(n))
    }

    /// Largest coefficient index of the overpartition series touched up to `t_max`.
    pub fn max_index(&self, t_max: u64) -> Option<u64> {
        self.argument(t_max).checked_mul(self.multiplier)
    }

    pub fn is_coprime_progression(&self) -> bool {
        gcd(self.progression.0, self.progression.1) == 1
    }
}

impl fmt::Display for CongruenceClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.progression;
        let arg = match (a, b) {
            (1, 0) => "n".to_string(),
            (_, 0) => format!("{a}n"),
            _ => format!("{a}n+{b}"),
        };
        let inner = if self.multiplier == 1 {
            arg
        } else if a == 1 && b == 0 {
            format!("{}n", self.multiplier)
        } else {
            format!("{}({arg})", self.multiplier)
        };
        write!(f, "pbar({inner}) = 0 (mod {})", self.modulus)?;
        if !self.conditions.is_empty() {
            let conds: Vec<String> = self.conditions.iter().map(|c| c.to_string()).collect();
            write!(f, " for {}", conds.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        let c = CongruenceClaim::new(11, 11, 8, 5).unwrap();
        assert_eq!(c.to_string(), "pbar(11(8n+5)) = 0 (mod 11)");
        let c = CongruenceClaim::new(17, 2057, 1, 0)
            .unwrap()
            .with_condition(Condition::Residues { modulus: 8, set: vec![3] })
            .unwrap()
            .with_condition(Condition::Kronecker { p: 11, sign: -1 })
            .unwrap();
        assert_eq!(
            c.to_string(),
            "pbar(2057n) = 0 (mod 17) for n = 3 (mod 8), (n/11) = -1"
        );
        assert!(c.applies(19) && !c.applies(27) && !c.applies(11));
    }

    #[test]
    fn malformed_claims_are_rejected() {
        assert!(CongruenceClaim::new(5, 1, 40, 40).is_err());
        assert!(CongruenceClaim::new(5, 0, 40, 35).is_err());
        assert!(CongruenceClaim::new(5, 1, 40, 35)
            .unwrap()
            .with_condition(Condition::Residues { modulus: 8, set: vec![9] })
            .is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = CongruenceClaim::new(7, 16, 56, 11)
            .unwrap()
            .with_condition(Condition::Kronecker { p: 7, sign: 1 })
            .unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<CongruenceClaim>(&s).unwrap(), c);
    }
}
