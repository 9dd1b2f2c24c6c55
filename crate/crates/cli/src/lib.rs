//! The `overpart` command line.
//!
//! [`run`] takes the argument list and output streams and returns the exit
//! code, so the whole front end is testable in-process.

use clap::{Args, Parser, Subcommand, ValueEnum};
use overpart::halfint::{decompose, Group, SpaceLabel};
use overpart::modseries::cache::{self, SeriesCache};
use overpart::modseries::{ResidueRing, TruncSeries};
use overpart::prover::{self, CongruenceClaim, ProofReport, ScanConfig};
use overpart::registry::{GeneratorRegistry, PipelineRegistry};
use overpart::sturm::{progression_budget, sturm_bound};
use overpart::{qgen, Error};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "overpart", version, about = "Overpartition congruences via q-series and modular forms")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    output: Format,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Coefficient cache directory; falls back to $OVERPART_CACHE_DIR.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print coefficients of a generator: phi, F, overpartition, rm:<m>, eta:<delta>:<r>,...
    Expand {
        generator: String,
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long)]
        trunc: usize,
    },
    /// Write a series in the monomial basis F^b phi^(k2-4b).
    Decompose {
        #[arg(long)]
        k2: u32,
        #[arg(long = "mod")]
        modulus: u64,
        /// Whitespace-separated coefficients or a .qser file; stdin when absent.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Group index and Sturm bound for a space, optionally along a progression.
    Bound {
        #[arg(long)]
        weight2: u32,
        #[arg(long)]
        level: u64,
        #[arg(long)]
        group: Group,
        /// `A,B` for the progression `A n + B`.
        #[arg(long, value_parser = parse_pair)]
        progression: Option<(u64, u64)>,
    },
    /// Run a named proof pipeline (thm11, thm13).
    Prove { name: String },
    /// Check a stored combination for sum pbar(m n)(-q)^n (m = 17 or 23).
    VerifyIdentity {
        m: u32,
        #[arg(long, default_value_t = 2000)]
        trunc: usize,
    },
    /// Check (q;q)^(p^a) = (q^p;q^p)^(p^(a-1)) mod p^a.
    Lemma1 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        alpha: u32,
        #[arg(long, default_value_t = 500)]
        trunc: usize,
    },
    /// Find residues B mod A with pbar(d(A t + B)) = 0 mod m for all t <= nmax.
    Scan {
        #[arg(long = "mod")]
        modulus: u64,
        /// Comma-separated multipliers.
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<u64>,
        /// Comma-separated progression moduli.
        #[arg(long = "A", value_delimiter = ',', required = true)]
        a: Vec<u64>,
        #[arg(long)]
        nmax: u64,
        #[arg(long, default_value_t = prover::DEFAULT_MIN_SUPPORT)]
        min_support: u64,
    },
    /// Test a congruence claim given as JSON against computed coefficients.
    Check {
        #[arg(long)]
        claim: String,
        #[arg(long, default_value_t = 100)]
        nmax: u64,
    },
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected A,B, got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// What went wrong, mapped onto an exit code.
enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotInSpan { .. } => Failure::Math(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Ctx<'a> {
    format: Format,
    cache: Option<SeriesCache>,
    out: &'a mut (dyn Write + Send),
    err: &'a mut (dyn Write + Send),
}

impl Ctx<'_> {
    fn emit(&mut self, text: &str, value: serde_json::Value) {
        let _ = match self.format {
            Format::Text => writeln!(self.out, "{text}"),
            Format::Json => writeln!(
                self.out,
                "{}",
                serde_json::to_string_pretty(&value).expect("plain data")
            ),
        };
    }

    fn report(&mut self, r: &ProofReport) -> i32 {
        let _ = match self.format {
            Format::Text => write!(self.out, "{}", r.to_text()),
            Format::Json => writeln!(self.out, "{}", r.to_json()),
        };
        for (name, d) in &r.timings {
            let _ = writeln!(self.err, "{name}: {:.3}s", d.as_secs_f64());
        }
        if r.pass {
            EXIT_PASS
        } else {
            if let Some(s) = r.first_failure() {
                let _ = writeln!(self.err, "failed step {}: {}", s.name, s.witness);
            }
            EXIT_FAIL
        }
    }

    fn series(
        &self,
        key: &str,
        ring: ResidueRing,
        trunc: usize,
        compute: impl FnOnce() -> overpart::Result<TruncSeries>,
    ) -> overpart::Result<TruncSeries> {
        match &self.cache {
            Some(c) => c.get_or_compute(key, ring, trunc, compute),
            None => compute(),
        }
    }

    fn overpartitions(&self, ring: ResidueRing, trunc: usize) -> overpart::Result<TruncSeries> {
        self.series("overpartition", ring, trunc, || qgen::overpartition_series(trunc, ring))
    }
}

/// Runs the command line and returns its exit code.
pub fn run<I, S>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let cache = cli
        .global
        .cache_dir
        .clone()
        .map(SeriesCache::new)
        .or_else(SeriesCache::from_env);
    let mut ctx = Ctx {
        format: cli.global.output,
        cache,
        out,
        err,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            let _ = writeln!(ctx.err, "error: --threads must be positive");
            return EXIT_USAGE;
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| dispatch(cli.command, &mut ctx));
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Math(msg)) => {
            let _ = writeln!(ctx.err, "failed: {msg}");
            EXIT_FAIL
        }
    }
}

fn ring(m: u64) -> Result<ResidueRing, Failure> {
    Ok(ResidueRing::new(m)?)
}

fn join(coeffs: &[u32]) -> String {
    coeffs
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn read_series(input: Option<&PathBuf>, ring: ResidueRing) -> Result<TruncSeries, Failure> {
    let bytes = match input {
        Some(p) => std::fs::read(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        None => {
            let mut b = Vec::new();
            std::io::Read::read_to_end(&mut std::io::stdin(), &mut b)
                .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
            b
        }
    };
    if bytes.starts_with(cache::MAGIC) {
        let s = cache::decode(&bytes)?;
        return Ok(s.reduce_mod(ring)?);
    }
    let text = String::from_utf8(bytes).map_err(|_| Failure::Usage("input is not text".into()))?;
    let values = text
        .split_whitespace()
        .map(|w| w.parse::<i64>().map_err(|e| Failure::Usage(format!("{w:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(Failure::Usage("no coefficients in input".into()));
    }
    Ok(TruncSeries::from_integers(ring, &values)?)
}

fn dispatch(cmd: Command, ctx: &mut Ctx<'_>) -> Result<i32, Failure> {
    match cmd {
        Command::Expand {
            generator,
            modulus,
            trunc,
        } => {
            let g = GeneratorRegistry::default().resolve(&generator)?;
            let r = ring(modulus)?;
            let s = ctx.series(&g.name(), r, trunc, || g.expand(trunc, r))?;
            ctx.emit(
                &join(s.coeffs()),
                json!({ "generator": g.name(), "modulus": modulus, "trunc": trunc, "coeffs": s.coeffs() }),
            );
            Ok(EXIT_PASS)
        }
        Command::Decompose { k2, modulus, input } => {
            let r = ring(modulus)?;
            let f = read_series(input.as_ref(), r)?;
            let d = decompose(&f, k2)?;
            ctx.emit(
                &format!("{}\n{}", join(&d.coeffs), d.to_expression()),
                json!({ "k2": k2, "modulus": modulus, "coeffs": d.coeffs, "expression": d.to_expression() }),
            );
            Ok(EXIT_PASS)
        }
        Command::Bound {
            weight2,
            level,
            group,
            progression,
        } => {
            let label = SpaceLabel::new(weight2, level, group)?;
            let budget = match progression {
                Some((a, b)) => {
                    if a == 0 || level % (a * a) != 0 {
                        return Err(Failure::Usage(format!(
                            "progression modulus {a}: {a}^2 does not divide the level {level}"
                        )));
                    }
                    if b >= a {
                        return Err(Failure::Usage(format!("residue {b} is not reduced mod {a}")));
                    }
                    progression_budget(&label, a, b)?
                }
                None => sturm_bound(&label),
            };
            let mut text = format!(
                "{}\nindex {}\neffective weight {}\nbound {}",
                label, budget.index, budget.effective_weight, budget.bound
            );
            if let Some((a, b, n)) = budget.per_progression {
                text.push_str(&format!("\nlimit n <= {n} for {a}n+{b}"));
            }
            ctx.emit(&text, serde_json::to_value(&budget).expect("plain data"));
            Ok(EXIT_PASS)
        }
        Command::Prove { name } => {
            let registry = PipelineRegistry::default();
            let report = registry.get(&name)?.run()?;
            Ok(ctx.report(&report))
        }
        Command::VerifyIdentity { m, trunc } => {
            let report = prover::verify_identity(m, trunc)?;
            Ok(ctx.report(&report))
        }
        Command::Lemma1 { p, alpha, trunc } => {
            let report = prover::verify_lemma1(p, alpha, trunc)?;
            Ok(ctx.report(&report))
        }
        Command::Scan {
            modulus,
            d,
            a,
            nmax,
            min_support,
        } => {
            let cfg = ScanConfig {
                modulus,
                multipliers: d,
                progression_moduli: a,
                n_max: nmax,
                min_support,
            };
            let needed = cfg.required_index()?;
            let series = ctx.overpartitions(ring(modulus)?, needed)?;
            let findings = prover::scan_in(&series, &cfg)?;
            let mut lines = Vec::new();
            for f in &findings {
                let list: Vec<String> = f.residues.iter().map(u64::to_string).collect();
                lines.push(format!(
                    "pbar({}({}t+B)) = 0 (mod {}) for B in {{{}}} (support {})",
                    f.multiplier,
                    f.progression_modulus,
                    f.modulus,
                    list.join(","),
                    f.support
                ));
                if let Some(c) = &f.compressed {
                    lines.push(format!("  = {c}"));
                }
            }
            if lines.is_empty() {
                lines.push("no congruences found".into());
            }
            ctx.emit(&lines.join("\n"), json!(findings));
            Ok(EXIT_PASS)
        }
        Command::Check { claim, nmax } => {
            let claim: CongruenceClaim = serde_json::from_str(&claim)
                .map_err(|e| Failure::Usage(format!("claim: {e}")))?;
            claim.validate()?;
            let result = if claim.modulus == 1 {
                prover::check_claim_direct(&claim, nmax)?
            } else {
                let needed = prover::required_index(&claim, nmax)?;
                let series = ctx.overpartitions(ring(claim.modulus)?, needed)?;
                prover::check_claim_in(&series, &claim, nmax)?
            };
            let text = match &result.counterexample {
                None => format!("{claim}\npass (support {})", result.support),
                Some(c) => format!(
                    "{claim}\ncounterexample at t = {}: pbar({}) = {} (mod {})",
                    c.t, c.index, c.residue, claim.modulus
                ),
            };
            ctx.emit(&text, serde_json::to_value(&result).expect("plain data"));
            Ok(if result.pass { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}
