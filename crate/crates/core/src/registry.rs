//! Name-addressed series generators and proof pipelines.
//!
//! Both registries map a textual name to a boxed strategy, so front ends can
//! look things up without knowing the concrete types.

use crate::error::{Error, Result};
use crate::modseries::{ResidueRing, TruncSeries};
use crate::prover::{self, ProofReport};
use crate::qgen::{self, EtaQuotient};

/// Something that expands to a q-series over any residue ring.
pub trait SeriesGenerator: Send + Sync {
    /// Canonical name, also used as the cache key.
    fn name(&self) -> String;
    fn expand(&self, trunc: usize, ring: ResidueRing) -> Result<TruncSeries>;
}

struct Phi;

impl SeriesGenerator for Phi {
    fn name(&self) -> String {
        "phi".into()
    }

    fn expand(&self, trunc: usize, ring: ResidueRing) -> Result<TruncSeries> {
        qgen::theta_phi(trunc, ring)
    }
}

struct FForm;

impl SeriesGenerator for FForm {
    fn name(&self) -> String {
        "F".into()
    }

    fn expand(&self, trunc: usize, ring: ResidueRing) -> Result<TruncSeries> {
        qgen::f_form(trunc, ring)
    }
}

struct Overpartition;

impl SeriesGenerator for Overpartition {
    fn name(&self) -> String {
        "overpartition".into()
    }

    fn expand(&self, trunc: usize, ring: ResidueRing) -> Result<TruncSeries> {
        qgen::overpartition_series(trunc, ring)
    }
}

struct ThetaPower(u32);

impl SeriesGenerator for ThetaPower {
    fn name(&self) -> String {
        format!("rm:{}", self.0)
    }

    fn expand(&self, trunc: usize, ring: ResidueRing) -> Result<TruncSeries> {
        qgen::r_m_series(self.0, trunc, ring)
    }
}

/// Product part of an eta quotient, shifted by its integral q-power prefactor.
struct Eta(EtaQuotient);

impl SeriesGenerator for Eta {
    fn name(&self) -> String {
        format!("eta:{}", self.0)
    }

    fn expand(&self, trunc: usize, ring: ResidueRing) -> Result<TruncSeries> {
        qgen::eta_quotient(&self.0, trunc, ring)?.into_series()
    }
}

type GeneratorFactory = fn(Option<&str>) -> Result<Box<dyn SeriesGenerator>>;

struct GeneratorEntry {
    prefix: &'static str,
    usage: &'static str,
    factory: GeneratorFactory,
}

/// Resolves names like `phi`, `rm:10` or `eta:2:5,1:-2,4:-2`.
pub struct GeneratorRegistry {
    entries: Vec<GeneratorEntry>,
}

fn no_argument(name: &str, arg: Option<&str>) -> Result<()> {
    match arg {
        None => Ok(()),
        Some(a) => Err(Error::Invalid(format!("generator {name} takes no argument, got {a:?}"))),
    }
}

impl Default for GeneratorRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register("phi", "phi", |arg| {
            no_argument("phi", arg)?;
            Ok(Box::new(Phi))
        });
        r.register("F", "F", |arg| {
            no_argument("F", arg)?;
            Ok(Box::new(FForm))
        });
        r.register("overpartition", "overpartition", |arg| {
            no_argument("overpartition", arg)?;
            Ok(Box::new(Overpartition))
        });
        r.register("rm", "rm:<m>", |arg| {
            let m = arg
                .and_then(|a| a.parse::<u32>().ok())
                .filter(|&m| m >= 1)
                .ok_or_else(|| Error::Invalid("rm needs a positive exponent, e.g. rm:10".into()))?;
            Ok(Box::new(ThetaPower(m)))
        });
        r.register("eta", "eta:<delta>:<r>,...", |arg| {
            let spec = arg.ok_or_else(|| {
                Error::InvalidEta("eta needs factors, e.g. eta:2:5,1:-2,4:-2".into())
            })?;
            Ok(Box::new(Eta(spec.parse()?)))
        });
        r
    }
}

impl GeneratorRegistry {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn register(&mut self, prefix: &'static str, usage: &'static str, factory: GeneratorFactory) {
        self.entries.retain(|e| e.prefix != prefix);
        self.entries.push(GeneratorEntry {
            prefix,
            usage,
            factory,
        });
    }

    /// Usage strings of every registered generator.
    pub fn usages(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.usage).collect()
    }

    pub fn resolve(&self, spec: &str) -> Result<Box<dyn SeriesGenerator>> {
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let entry = self.entries.iter().find(|e| e.prefix == head).ok_or_else(|| {
            Error::Invalid(format!(
                "unknown generator {spec:?} (known: {})",
                self.usages().join(", ")
            ))
        })?;
        (entry.factory)(arg)
    }
}

/// A named end-to-end proof.
pub trait ProofPipeline: Send + Sync {
    fn name(&self) -> &'static str;
    fn statement(&self) -> &'static str;
    fn run(&self) -> Result<ProofReport>;
}

struct Mod11;

impl ProofPipeline for Mod11 {
    fn name(&self) -> &'static str {
        "thm11"
    }

    fn statement(&self) -> &'static str {
        "pbar(11(8n+5)) = 0 (mod 11)"
    }

    fn run(&self) -> Result<ProofReport> {
        prover::prove_theorem_mod11()
    }
}

struct Mod13;

impl ProofPipeline for Mod13 {
    fn name(&self) -> &'static str {
        "thm13"
    }

    fn statement(&self) -> &'static str {
        "pbar(13*64(8n+7)) = 0 (mod 13)"
    }

    fn run(&self) -> Result<ProofReport> {
        prover::prove_theorem_mod13()
    }
}

pub struct PipelineRegistry {
    pipelines: Vec<Box<dyn ProofPipeline>>,
}

impl Default for PipelineRegistry {
    fn default() -> Self {
        let mut r = Self {
            pipelines: Vec::new(),
        };
        r.register(Box::new(Mod11));
        r.register(Box::new(Mod13));
        r
    }
}

impl PipelineRegistry {
    pub fn register(&mut self, p: Box<dyn ProofPipeline>) {
        self.pipelines.retain(|q| q.name() != p.name());
        self.pipelines.push(p);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.pipelines.iter().map(|p| p.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn ProofPipeline> {
        self.pipelines
            .iter()
            .find(|p| p.name() == name)
            .map(|p| p.as_ref())
            .ok_or_else(|| {
                Error::Invalid(format!(
                    "unknown proof {name:?} (known: {})",
                    self.names().join(", ")
                ))
            })
    }
}
