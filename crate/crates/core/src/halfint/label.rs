use crate::chars::DirichletChar;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    #[serde(rename = "g0")]
    Gamma0,
    #[serde(rename = "g1")]
    Gamma1,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Gamma0 => "Gamma0",
            Group::Gamma1 => "Gamma1",
        })
    }
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "g0" | "gamma0" => Ok(Group::Gamma0),
            "g1" | "gamma1" => Ok(Group::Gamma1),
            _ => Err(Error::Invalid(format!("unknown group {s:?} (expected g0 or g1)"))),
        }
    }
}

/// The space `M_{k2/2}(Gamma(level), chi)` a q-expansion is asserted to lie in.
///
/// This is bookkeeping only: the operators update it by their stated rules,
/// nothing checks that a series actually transforms like a modular form.
/// Characters are kept in primitive form, so `chi_0 mod 4` and the trivial
/// character compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceLabel {
    twice_weight: u32,
    level: u64,
    group: Group,
    character: Option<DirichletChar>,
}

impl SpaceLabel {
    pub fn gamma0(twice_weight: u32, level: u64, character: DirichletChar) -> Result<Self> {
        Self::check(twice_weight, level)?;
        Ok(Self {
            twice_weight,
            level,
            group: Group::Gamma0,
            character: Some(character.primitive()),
        })
    }

    pub fn gamma1(twice_weight: u32, level: u64) -> Result<Self> {
        Self::check(twice_weight, level)?;
        Ok(Self {
            twice_weight,
            level,
            group: Group::Gamma1,
            character: None,
        })
    }

    pub fn new(twice_weight: u32, level: u64, group: Group) -> Result<Self> {
        match group {
            Group::Gamma0 => Self::gamma0(twice_weight, level, DirichletChar::trivial()),
            Group::Gamma1 => Self::gamma1(twice_weight, level),
        }
    }

    fn check(twice_weight: u32, level: u64) -> Result<()> {
        if twice_weight == 0 {
            return Err(Error::Invalid("weight must be positive".into()));
        }
        if level == 0 || !level.is_multiple_of(4) {
            return Err(Error::Invalid(format!("level {level} is not a multiple of 4")));
        }
        Ok(())
    }

    pub fn twice_weight(&self) -> u32 {
        self.twice_weight
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn character(&self) -> Option<&DirichletChar> {
        self.character.as_ref()
    }

    pub fn is_half_integral(&self) -> bool {
        self.twice_weight % 2 == 1
    }

    /// Same space data at `level * factor`: the inclusion into a higher level.
    pub fn inflate(&self, factor: u64) -> Result<Self> {
        let level = self
            .level
            .checked_mul(factor)
            .ok_or_else(|| Error::Invalid("level overflow".into()))?;
        Ok(Self {
            level,
            ..self.clone()
        })
    }

    pub(crate) fn with(&self, level: u64, extra: Option<&DirichletChar>) -> Self {
        let character = match (&self.character, extra) {
            (Some(c), Some(e)) => Some(c.mul(e).primitive()),
            (c, _) => c.clone(),
        };
        Self {
            level,
            character,
            ..self.clone()
        }
    }

    pub(crate) fn to_gamma1(&self, level: u64) -> Self {
        Self {
            level,
            group: Group::Gamma1,
            character: None,
            ..self.clone()
        }
    }

    /// Weight as text, e.g. `9/2` or `5`.
    pub fn weight_str(&self) -> String {
        if self.is_half_integral() {
            format!("{}/2", self.twice_weight)
        } else {
            (self.twice_weight / 2).to_string()
        }
    }
}

impl fmt::Display for SpaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.character {
            Some(c) => write!(
                f,
                "M_{}({}({}), {})",
                self.weight_str(),
                self.group,
                self.level,
                c
            ),
            None => write!(f, "M_{}({}({}))", self.weight_str(), self.group, self.level),
        }
    }
}

/// Plain-data form of a label for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSummary {
    pub twice_weight: u32,
    pub level: u64,
    pub group: Group,
    pub character: Option<String>,
    pub text: String,
}

impl From<&SpaceLabel> for LabelSummary {
    fn from(l: &SpaceLabel) -> Self {
        Self {
            twice_weight: l.twice_weight,
            level: l.level,
            group: l.group,
            character: l.character.as_ref().map(|c| c.name()),
            text: l.to_string(),
        }
    }
}
