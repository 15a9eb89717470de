//! The `mgonal` command line. Every subcommand maps onto one library
//! operation and writes a single report to stdout; progress and warnings go
//! to stderr.
//!
//! Exit status: 0 success, 1 domain failure, 2 usage error.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{brute_force_congruence, PAdicContext};
use crate::census::{exceptional_set, parse_multiplier, scaling_experiment, CensusOptions};
use crate::error::{MgonalError, Result};
use crate::local::{criterion_value, locally_represents, locally_represents_at};
use crate::polygonal::{decompose_target, evaluate, polygonal_number, represents, MgonalForm};
use crate::quadratic::{jordan_decompose, reduced_quadratic, GramMatrix};
use crate::theorem::{
    admissible_k, bad_primes, k_constant, k_primes, k_stability_exponent, unit_deficient_primes, KConstant,
    StabilityExponent, DEFAULT_PAIR_CAP,
};

#[derive(Debug, Parser)]
#[command(name = "mgonal", version, about = "Sums of generalized m-gonal numbers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Omit wall-clock timings so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub stable_output: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct FormArgs {
    #[arg(long)]
    pub m: u64,
    /// Comma-separated coefficients, e.g. 1,1,1,2,4.
    #[arg(long, value_delimiter = ',', required = true)]
    pub coeffs: Vec<u64>,
}

impl FormArgs {
    fn form(&self) -> Result<MgonalForm> {
        MgonalForm::new(self.m, self.coeffs.clone())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pₘ(x), or Σ aᵢPₘ(xᵢ) when --coeffs is given.
    Eval {
        #[arg(long)]
        m: u64,
        #[arg(long, value_delimiter = ',')]
        coeffs: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        x: Vec<i64>,
    },
    /// Search for x with Σ aᵢPₘ(xᵢ) = N.
    Represent {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        n: u64,
        /// Exit with status 1 when no witness exists.
        #[arg(long)]
        expect_represented: bool,
    },
    /// Local verdicts at one prime or at every relevant prime.
    Local {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        prime: Option<u64>,
        /// With --prime, also count solutions of the diagonal criterion
        /// modulo p^precision by exhaustive search.
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Exceptional set on [0, bound].
    Exceptional {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// K(a) with its factor table, T(a), bad primes and stability exponents.
    Kconst {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Admissible (k, P) pairs for N.
    AdmissibleK {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        n: u64,
    },
    /// Jordan splitting over ℤₚ of a Gram matrix (default: the reduced form of the m-gonal form).
    Jordan {
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        coeffs: Option<Vec<u64>>,
        /// Gram matrix as JSON, e.g. [[2,1],[1,2]].
        #[arg(long)]
        gram: Option<String>,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// max exceptional N against m on bounds multiplier·(m−2)³.
    Scaling {
        #[arg(long, value_delimiter = ',', required = true)]
        coeffs: Vec<u64>,
        #[arg(long)]
        m_min: u64,
        #[arg(long)]
        m_max: u64,
        #[arg(long, default_value = "20")]
        multiplier: String,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Serialize)]
struct EvalReport {
    m: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<u64>>,
    x: Vec<i64>,
    #[serde(with = "crate::serde_exact")]
    value: BigInt,
}

#[derive(Serialize)]
struct RepresentReport {
    form: MgonalForm,
    n: u64,
    a: u64,
    b: u64,
    represented: bool,
    x: Option<Vec<i64>>,
}

#[derive(Serialize)]
struct OracleCount {
    #[serde(with = "crate::serde_exact")]
    c: BigInt,
    modulus: u64,
    solutions: usize,
}

#[derive(Serialize)]
struct KReport {
    form: MgonalForm,
    k: KConstant,
    k_primes: Vec<u64>,
    unit_deficient_primes: Vec<u64>,
    bad_primes: Vec<u64>,
    stability: Vec<StabilityExponent>,
}

/// What a subcommand produced: the report text and whether it is a domain failure.
struct Outcome {
    text: String,
    failed: bool,
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| MgonalError::Resource(format!("json: {e}")))
}

fn no_csv(format: Format) -> Result<()> {
    if format == Format::Csv {
        Err(MgonalError::invalid("csv output is available for exceptional and scaling only"))
    } else {
        Ok(())
    }
}

fn ok(text: String) -> Result<Outcome> {
    Ok(Outcome { text, failed: false })
}

fn jobs_opts(jobs: Option<usize>, stable: bool) -> CensusOptions {
    let mut o = jobs.map_or_else(CensusOptions::default, CensusOptions::with_jobs);
    o.stable_output = stable;
    o
}

fn dispatch(cli: &Cli, err: &mut dyn Write) -> Result<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Eval { m, coeffs, x } => {
            no_csv(format)?;
            let value = match coeffs {
                Some(c) => evaluate(&MgonalForm::new(*m, c.clone())?, x)?,
                None if x.len() == 1 => polygonal_number(*m, x[0])?,
                None => return Err(MgonalError::invalid("several x values need --coeffs")),
            };
            if format == Format::Text {
                return ok(value.to_string());
            }
            ok(json(&EvalReport { m: *m, coeffs: coeffs.clone(), x: x.clone(), value })?)
        }
        Command::Represent { form, n, expect_represented } => {
            no_csv(format)?;
            let f = form.form()?;
            let t = decompose_target(f.m(), *n)?;
            let w = represents(&f, *n);
            let failed = *expect_represented && w.is_none();
            let text = match format {
                Format::Text => match &w {
                    Some(w) => format!("{n} = {f} at x = {:?}", w.x),
                    None => format!("{f} does not represent {n}"),
                },
                _ => json(&RepresentReport {
                    form: f.clone(),
                    n: *n,
                    a: t.a,
                    b: t.b,
                    represented: w.is_some(),
                    x: w.map(|w| w.x),
                })?,
            };
            Ok(Outcome { text, failed })
        }
        Command::Local { form, n, prime, precision } => {
            no_csv(format)?;
            let f = form.form()?;
            let nb = BigInt::from(*n);
            match prime {
                Some(p) => {
                    let v = locally_represents_at(&f, &nb, *p)?;
                    let oracle = match (precision, criterion_value(&f, &nb, *p)) {
                        (Some(e), Some(c)) => {
                            let modulus = PAdicContext::new(*p, *e)?
                                .modulus()
                                .try_into()
                                .map_err(|_| MgonalError::invalid("p^precision must fit in 64 bits"))?;
                            let coeffs: Vec<i64> = f.coeffs().iter().map(|&a| a as i64).collect();
                            let zeros = vec![0; coeffs.len()];
                            let sols = brute_force_congruence(&coeffs, &zeros, &BigInt::from(0), &c, modulus)?;
                            Some(OracleCount { c, modulus, solutions: sols.len() })
                        }
                        _ => None,
                    };
                    if format == Format::Text {
                        return ok(format!("p={} represented={} rule={}", v.p, v.represented, v.rule));
                    }
                    let mut value = serde_json::to_value(v).map_err(|e| MgonalError::Resource(e.to_string()))?;
                    if let Some(o) = oracle {
                        value["oracle"] = serde_json::to_value(o).map_err(|e| MgonalError::Resource(e.to_string()))?;
                    }
                    ok(json(&value)?)
                }
                None => {
                    let r = locally_represents(&f, &nb)?;
                    if format == Format::Text {
                        let parts: Vec<String> =
                            r.verdicts.iter().map(|v| format!("p={}:{}:{}", v.p, v.represented, v.rule)).collect();
                        return ok(format!("represented={} {}", r.represented, parts.join(" ")));
                    }
                    ok(json(&r)?)
                }
            }
        }
        Command::Exceptional { form, bound, jobs } => {
            let f = form.form()?;
            if f.rank() < 5 {
                writeln!(err, "warning: rank {} < 5, almost regularity is not guaranteed", f.rank()).ok();
            }
            writeln!(err, "scanning [0, {bound}] for {f}").ok();
            let r = exceptional_set(&f, *bound, &jobs_opts(*jobs, cli.stable_output))?;
            match format {
                Format::Json => ok(json(&r)?),
                Format::Csv => ok(r.to_csv()?),
                Format::Text => ok(format!(
                    "{f} up to {bound}: {} exceptional {:?} (local {}, represented {})",
                    r.exceptional.len(),
                    r.exceptional,
                    r.counts.locally_represented,
                    r.counts.represented
                )),
            }
        }
        Command::Kconst { form } => {
            no_csv(format)?;
            let f = form.form()?;
            let k = k_constant(&f)?;
            let ps = k_primes(&f)?;
            let bad = bad_primes(&f)?;
            let mut stab_primes = ps.clone();
            stab_primes.extend(bad.iter().copied().filter(|q| !ps.contains(q)));
            stab_primes.sort_unstable();
            let stability = stab_primes
                .iter()
                .map(|&p| k_stability_exponent(&f, p))
                .collect::<Result<Vec<_>>>()?;
            if format == Format::Text {
                let product: Vec<String> = k.factors.iter().map(|x| format!("4*{}^{}", x.p, x.exponent)).collect();
                let mut text = format!("K = {} = {} - 1\np\texponent\te\tregime", k.value, product.join(" * "));
                for st in &stability {
                    let exponent = k.factors.iter().find(|x| x.p == st.p).map_or("-".to_string(), |x| x.exponent.to_string());
                    text.push_str(&format!("\n{}\t{}\t{}\t{}", st.p, exponent, st.e, st.regime.name()));
                }
                return ok(text);
            }
            ok(json(&KReport {
                form: f.clone(),
                k,
                k_primes: ps,
                unit_deficient_primes: unit_deficient_primes(&f)?,
                bad_primes: bad,
                stability,
            })?)
        }
        Command::AdmissibleK { form, n } => {
            no_csv(format)?;
            let f = form.form()?;
            let r = admissible_k(&f, *n, DEFAULT_PAIR_CAP)?;
            if format == Format::Text {
                let pairs: Vec<String> = r.pairs.iter().map(|p| format!("(k={}, P={})", p.k, p.p_value)).collect();
                return ok(format!("K = {}; {}", r.k_bound.value, pairs.join(" ")));
            }
            ok(json(&r)?)
        }
        Command::Jordan { m, coeffs, gram, prime, precision } => {
            no_csv(format)?;
            let g = match (gram, m, coeffs) {
                (Some(text), None, None) => serde_json::from_str::<GramMatrix>(text)
                    .map_err(|e| MgonalError::invalid(format!("--gram: {e}")))?,
                (None, Some(m), Some(c)) => reduced_quadratic(&MgonalForm::new(*m, c.clone())?)?.gram,
                _ => return Err(MgonalError::invalid("give either --gram or both --m and --coeffs")),
            };
            let det = g.determinant();
            let od = crate::arith::ord(&det, *prime).unwrap_or(0);
            let e = precision.unwrap_or((2 * od + 6).max(12));
            let d = jordan_decompose(&g, &PAdicContext::new(*prime, e)?)?;
            if format == Format::Text {
                return ok(format!("p={} precision={} scales={:?}", d.p, d.precision, d.scale_multiset()));
            }
            ok(json(&d)?)
        }
        Command::Scaling { coeffs, m_min, m_max, multiplier, jobs } => {
            let mult = parse_multiplier(multiplier)?;
            writeln!(err, "scaling {coeffs:?} over m in [{m_min}, {m_max}] with multiplier {mult}").ok();
            let r = scaling_experiment(coeffs, *m_min, *m_max, mult, &jobs_opts(*jobs, cli.stable_output))?;
            match format {
                Format::Json => ok(json(&r)?),
                Format::Csv => ok(r.to_csv()?),
                Format::Text => {
                    let mut s = String::new();
                    for row in &r.rows {
                        s.push_str(&format!("m={} bound={} max_exceptional={:?}\n", row.m, row.bound, row.max_exceptional));
                    }
                    s.push_str(&match r.slope {
                        Some(v) => format!("slope={v:.4}"),
                        None => "slope=n/a".to_string(),
                    });
                    ok(s)
                }
            }
        }
    }
}

fn usage_error(e: &MgonalError) -> bool {
    matches!(e, MgonalError::InvalidInput(_) | MgonalError::NonPrimitive { .. } | MgonalError::NotPrime(_))
}

/// Parse `args` (including the program name), run, and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                write!(out, "{text}").ok();
            } else {
                write!(err, "{text}").ok();
            }
            return code;
        }
    };
    match dispatch(&cli, err) {
        Ok(o) => {
            let text = o.text.trim_end();
            writeln!(out, "{text}").ok();
            i32::from(o.failed)
        }
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            if usage_error(&e) {
                2
            } else {
                1
            }
        }
    }
}
