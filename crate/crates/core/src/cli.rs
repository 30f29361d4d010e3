//! Command-line front end. [`run`] parses arguments, calls the library and
//! writes a single JSON document, or `key,value` rows with `--format csv`.
//!
//! Exit status: 0 on success, 2 for usage or validation errors, 1 for
//! internal failures. Monte Carlo subcommands draw from
//! [`crate::rng::stream`] keyed by `(seed, subcommand, worker)`.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{
    binomial_poisson_check, concentration_lower, concentration_upper, poisson_lower_tail,
    poisson_upper_tail, stein_poisson_bound, tail_iteration, ConcentrationParams, CouplingGap,
};
use crate::dist::{
    closed_form_size_bias, max_atom_diff, size_bias_discrete, BiasedLaw, DiscreteDist,
    Distribution, DistributionRepr, NamedDist,
};
use crate::error::{Error, Result};
use crate::inf_div::{
    buchstab_solve, compound_poisson_from_increment, dickman_solve, extract_increment,
    pmf_recursion_raw,
};
use crate::lognormal::{
    berg_pmf, orbit_moment, orbit_pmf, orbit_size_bias_check, LognormalMixture, StieltjesDensity,
};
use crate::midzuno::{exact_expectation, midzuno_sample, ratio_estimate, Population};
use crate::rng::{parallel_draws, stream, DEFAULT_SEED};
use crate::stats::mean_se;
use crate::stochastic::{
    expected_exit_time, simulate_renewal_inspection, skorohod_coupling, skorohod_exit_pmf,
    Interarrival,
};
use crate::sum_bias::{
    index_distribution, product_law, sample_size_biased_sum, size_biased_product_pmf,
    size_biased_sum_pmf, IndependentSum,
};

#[derive(Parser, Debug)]
#[command(
    name = "sizebias",
    version,
    about = "Size-biased distributions and their uses"
)]
struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Threads for Monte Carlo subcommands; 1 is the reference.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..=256))]
    workers: u16,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// A law given as `name:params`, `@file.json` or a pmf list on `0, 1, ...`.
#[derive(Debug, Clone)]
enum DistArg {
    Named(NamedDist),
    Given(Distribution),
}

fn parse_dist(s: &str) -> std::result::Result<DistArg, String> {
    if let Some(path) = s.strip_prefix('@') {
        let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        return Distribution::from_json(&text)
            .map(DistArg::Given)
            .map_err(|e| e.to_string());
    }
    if s.starts_with(|c: char| c.is_ascii_alphabetic()) {
        return NamedDist::from_str(s)
            .map(DistArg::Named)
            .map_err(|e| e.to_string());
    }
    let masses = parse_list(s)?;
    DiscreteDist::from_pmf(&masses)
        .map(|d| DistArg::Given(Distribution::Discrete(d)))
        .map_err(|e| e.to_string())
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number '{t}'"))
        })
        .collect()
}

/// `x:p,x:p,...` with possibly negative points.
fn parse_atoms(s: &str) -> std::result::Result<DiscreteDist, String> {
    let atoms = s
        .split(',')
        .map(|pair| {
            let (x, p) = pair
                .split_once(':')
                .ok_or_else(|| format!("'{pair}' is not x:p"))?;
            let num = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad number '{t}'"))
            };
            Ok((num(x)?, num(p)?))
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    DiscreteDist::signed(atoms).map_err(|e| e.to_string())
}

impl DistArg {
    fn label(&self) -> String {
        match self {
            DistArg::Named(nd) => nd.to_string(),
            DistArg::Given(_) => "table".into(),
        }
    }

    fn discrete(&self) -> Result<DiscreteDist> {
        match self {
            DistArg::Named(nd) => nd.tabulate(),
            DistArg::Given(Distribution::Discrete(d)) => Ok(d.clone()),
            DistArg::Given(Distribution::Grid(_)) => Err(Error::InvalidParameter(
                "this subcommand needs a discrete law".into(),
            )),
        }
    }

    fn interarrival(&self) -> Result<Interarrival> {
        Ok(match self {
            DistArg::Named(nd) => Interarrival::Named(*nd),
            _ => Interarrival::Discrete(self.discrete()?),
        })
    }
}

/// `E X* = E X^2 / E X` for a named law.
fn named_biased_mean(nd: &NamedDist) -> Result<f64> {
    match closed_form_size_bias(nd) {
        Ok(cf) => Ok(cf.shift
            + match cf.law {
                BiasedLaw::Named(law) => law.mean(),
                BiasedLaw::LinearDensity => 2.0 / 3.0,
            }),
        Err(Error::NoClosedForm(_)) => Ok(size_bias_discrete(&nd.tabulate()?)?.mean()),
        Err(e) => Err(e),
    }
}

fn atoms_json(d: &DiscreteDist) -> Value {
    serde_json::to_value(DistributionRepr::from(d)).expect("plain data serializes")
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Size bias of one law.
    Transform {
        #[arg(long, value_parser = parse_dist)]
        dist: DistArg,
    },
    /// Size bias of an independent sum.
    Sum {
        /// One term per flag; repeat for more terms.
        #[arg(long = "dist", required = true, value_parser = parse_dist)]
        terms: Vec<DistArg>,
        /// Repeat the term list this many times.
        #[arg(long, default_value_t = 1)]
        copies: usize,
        /// Monte Carlo draws of the biased sum.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Size bias of an independent product.
    Product {
        #[arg(long = "dist", required = true, value_parser = parse_dist)]
        terms: Vec<DistArg>,
    },
    /// Compound Poisson law with a given increment and mean.
    CompoundPoisson {
        #[arg(long, value_parser = parse_dist)]
        increment: DistArg,
        #[arg(long)]
        a: f64,
        /// Largest index of the returned pmf.
        #[arg(long, default_value_t = 50)]
        n: usize,
    },
    /// Infinite divisibility test for a law on 0, 1, 2, ...
    IdTest(IdTestArgs),
    /// Mean-a law with X* = X + U.
    Dickman(GridArgs),
    /// Mean-a law with X* = X + U(b, 1).
    Buchstab {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        b: f64,
    },
    /// Single-orbit law on b c^n.
    Orbit {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 12)]
        m: usize,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "-1,1,2,3,4"
        )]
        moments: Vec<i32>,
    },
    /// Moments of the perturbed lognormal density.
    Stieltjes {
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 4)]
        max_moment: i32,
    },
    /// Orbit law at b = sqrt(c) with masses times 1 + s(-1)^n, s = +-1.
    Berg {
        #[arg(long, allow_hyphen_values = true)]
        s: i8,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 12)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        max_moment: i32,
    },
    /// Lognormal density rebuilt from orbit laws.
    MixtureCheck {
        #[arg(long)]
        c: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,3")]
        points: Vec<f64>,
    },
    /// One Midzuno sample and its ratio estimate.
    Midzuno {
        /// CSV with header x,y.
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        m: usize,
        /// Also enumerate every subset for the exact expectation.
        #[arg(long)]
        exact: bool,
    },
    /// Covering interval and residual wait of a renewal process.
    Renewal {
        #[arg(long, value_parser = parse_dist)]
        dist: DistArg,
        #[arg(long, default_value_t = 1000.0)]
        horizon: f64,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
    },
    /// Exit interval whose Brownian exit law is the given mean-zero law.
    Skorohod {
        /// `x:p,x:p,...`
        #[arg(long, allow_hyphen_values = true, value_parser = parse_atoms)]
        atoms: DiscreteDist,
    },
    /// Poisson approximation bound.
    Stein(SteinArgs),
    /// Tail bounds from a bounded size-bias coupling.
    Concentration {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        x: f64,
        /// Include the exact Poisson(a) tail for comparison.
        #[arg(long)]
        poisson: bool,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct IdTestArgs {
    /// Masses at 0, 1, 2, ...
    #[arg(long, value_delimiter = ',')]
    pmf: Option<Vec<f64>>,
    #[arg(long, value_parser = parse_dist)]
    dist: Option<DistArg>,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long)]
    a: f64,
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    #[arg(long, default_value_t = 12.0)]
    xmax: f64,
    /// Report every stride-th node.
    #[arg(long, default_value_t = 100)]
    stride: usize,
}

#[derive(Args, Debug)]
struct SteinArgs {
    /// Binomial trials; with --p compares Binomial(n, p) to Poisson(np).
    #[arg(long, requires = "p", conflicts_with_all = ["lambda", "gap"])]
    n: Option<u32>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, requires = "gap")]
    lambda: Option<f64>,
    /// E|X* - (X + 1)| under some coupling.
    #[arg(long, requires = "lambda")]
    gap: Option<f64>,
}

enum Failure {
    Usage(String),
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Lib(Error::QuadratureFailure(_)) | Failure::Io(_) => 1,
            _ => 2,
        }
    }
}

/// Writes `v` with every float at 17 significant digits.
struct SigFigs;

impl serde_json::ser::Formatter for SigFigs {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }
}

fn to_json(v: &Value) -> Vec<u8> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigs);
    serde::Serialize::serialize(v, &mut ser).expect("writing to memory");
    buf.push(b'\n');
    buf
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&key(k), x, rows)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(&key(&i.to_string()), x, rows)),
        Value::Number(n) => {
            let s = match n.as_f64() {
                Some(f) if !n.is_i64() && !n.is_u64() => format!("{f:.16e}"),
                _ => n.to_string(),
            };
            rows.push((prefix.to_string(), s));
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => rows.push((prefix.to_string(), b.to_string())),
        Value::Null => rows.push((prefix.to_string(), String::new())),
    }
}

fn to_csv(v: &Value) -> Vec<u8> {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).expect("writing to memory");
    for (k, x) in rows {
        w.write_record([k, x]).expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match execute(&cli).and_then(|v| emit(&cli, &v, out)) {
        Ok(()) => 0,
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) => m.clone(),
                Failure::Lib(e) => e.to_string(),
                Failure::Io(e) => format!("i/o error: {e}"),
            };
            let _ = writeln!(err, "error: {msg}");
            f.code()
        }
    }
}

fn emit(cli: &Cli, v: &Value, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let bytes = match cli.format {
        Format::Json => to_json(v),
        Format::Csv => to_csv(v),
    };
    match &cli.out {
        Some(path) => fs::write(path, bytes).map_err(Failure::Io),
        None => out.write_all(&bytes).map_err(Failure::Io),
    }
}

fn thin(xs: &[f64], stride: usize) -> Vec<usize> {
    (0..xs.len()).step_by(stride.max(1)).collect()
}

fn execute(cli: &Cli) -> std::result::Result<Value, Failure> {
    let seed = cli.seed;
    let workers = usize::from(cli.workers);
    Ok(match &cli.cmd {
        Cmd::Transform { dist } => match dist {
            DistArg::Named(nd) => match closed_form_size_bias(nd) {
                Ok(cf) => json!({
                    "input": nd.to_string(),
                    "mean": nd.mean(),
                    "biased_mean": named_biased_mean(nd)?,
                    "closed_form": cf.to_string(),
                    "size_biased": if nd.is_discrete() { atoms_json(&cf.tabulate()?) } else { Value::Null },
                }),
                Err(Error::NoClosedForm(_)) => {
                    let b = size_bias_discrete(&nd.tabulate()?)?;
                    json!({
                        "input": nd.to_string(),
                        "mean": nd.mean(),
                        "biased_mean": b.mean(),
                        "closed_form": Value::Null,
                        "size_biased": atoms_json(&b),
                    })
                }
                Err(e) => return Err(e.into()),
            },
            DistArg::Given(d) => {
                let b = d.size_bias()?;
                json!({
                    "input": "table",
                    "mean": d.mean(),
                    "biased_mean": b.mean(),
                    "closed_form": Value::Null,
                    "size_biased": b.to_json_value(),
                })
            }
        },
        Cmd::Sum {
            terms,
            copies,
            samples,
        } => {
            if *copies == 0 {
                return Err(Failure::Usage("--copies must be at least 1".into()));
            }
            let one: Vec<DiscreteDist> =
                terms.iter().map(DistArg::discrete).collect::<Result<_>>()?;
            let all: Vec<DiscreteDist> = one
                .iter()
                .cycle()
                .take(one.len() * copies)
                .cloned()
                .collect();
            let s = IndependentSum::new(all)?;
            let biased = size_biased_sum_pmf(&s)?;
            let mc = if *samples > 0 {
                let chunks = parallel_draws(seed, "sum", workers, *samples, |rng, n| {
                    vec![sample_size_biased_sum(&s, rng, n)]
                });
                let draws: Vec<f64> = chunks.into_iter().collect::<Result<Vec<_>>>()?.concat();
                let (m, se) = mean_se(&draws);
                json!({"n": samples, "mean": m, "se": se})
            } else {
                Value::Null
            };
            json!({
                "terms": terms.iter().map(DistArg::label).collect::<Vec<_>>(),
                "copies": copies,
                "mean": s.terms().iter().map(DiscreteDist::mean).sum::<f64>(),
                "index_probs": index_distribution(&s)?.probs,
                "biased_mean": biased.mean(),
                "size_biased": atoms_json(&biased),
                "monte_carlo": mc,
            })
        }
        Cmd::Product { terms } => {
            let ds: Vec<DiscreteDist> =
                terms.iter().map(DistArg::discrete).collect::<Result<_>>()?;
            let biased = size_biased_product_pmf(&ds)?;
            json!({
                "terms": terms.iter().map(DistArg::label).collect::<Vec<_>>(),
                "mean": product_law(&ds)?.mean(),
                "biased_mean": biased.mean(),
                "size_biased": atoms_json(&biased),
            })
        }
        Cmd::CompoundPoisson { increment, a, n } => {
            let levy = compound_poisson_from_increment(&increment.discrete()?, *a)?;
            let f = pmf_recursion_raw(&levy, *n)?;
            json!({
                "a": levy.a(),
                "jumps": levy.jumps(),
                "total_rate": levy.total_rate(),
                "captured_mass": f.iter().sum::<f64>(),
                "pmf": f,
            })
        }
        Cmd::IdTest(args) => {
            let fx = match (&args.pmf, &args.dist) {
                (Some(p), _) => DiscreteDist::from_pmf(p)?,
                (None, Some(d)) => d.discrete()?,
                (None, None) => unreachable!("clap enforces the group"),
            };
            let r = extract_increment(&fx)?;
            let jumps = match r.levy() {
                Some(l) => serde_json::to_value(l?.jumps()).expect("plain data serializes"),
                None => Value::Null,
            };
            json!({
                "is_id": r.is_id,
                "witness_index": r.witness.map(|w| w.0),
                "witness_mass": r.witness.map(|w| w.1),
                "a": r.a,
                "examined": r.examined,
                "raw": r.raw,
                "jumps": jumps,
            })
        }
        Cmd::Dickman(g) => {
            let d = dickman_solve(g.a, g.h, g.xmax)?;
            let idx = thin(d.values(), g.stride);
            json!({
                "a": g.a,
                "h": g.h,
                "mass": d.total_mass(),
                "mean": d.mean(),
                "x": idx.iter().map(|&i| d.x(i)).collect::<Vec<_>>(),
                "density": idx.iter().map(|&i| d.values()[i]).collect::<Vec<_>>(),
            })
        }
        Cmd::Buchstab { grid: g, b } => {
            let d = buchstab_solve(g.a, *b, g.h, g.xmax)?;
            let idx = thin(d.values(), g.stride);
            json!({
                "a": g.a,
                "b": b,
                "h": g.h,
                "atom0": d.atom0(),
                "mass": d.total_mass(),
                "mean": d.mean(),
                "x": idx.iter().map(|&i| d.x(i)).collect::<Vec<_>>(),
                "density": idx.iter().map(|&i| d.values()[i]).collect::<Vec<_>>(),
            })
        }
        Cmd::Orbit { b, c, m, moments } => {
            let o = orbit_pmf(*b, *c, *m)?;
            let mom = moments
                .iter()
                .map(|&k| Ok(json!({"k": k, "value": orbit_moment(&o, k)?, "lognormal": (c.ln() * f64::from(k * k) / 2.0).exp()})))
                .collect::<Result<Vec<_>>>()?;
            json!({
                "b": o.b(),
                "c": c,
                "half_width": m,
                "atoms": atoms_json(&o.to_dist()?),
                "moments": mom,
                "scaling_identity": orbit_size_bias_check(&o)?,
            })
        }
        Cmd::Stieltjes {
            m,
            delta,
            sigma,
            max_moment,
        } => {
            let s = StieltjesDensity::new(*m, *delta, *sigma)?;
            let mut worst = 0.0f64;
            let mut rows = Vec::new();
            for n in 0..=*max_moment {
                let v = s.moment(n)?;
                let ln = (f64::from(n * n) * sigma * sigma / 2.0).exp();
                worst = worst.max(((v - ln) / ln).abs());
                rows.push(json!({"n": n, "perturbed": v, "lognormal": ln}));
            }
            json!({"m": m, "delta": delta, "sigma": sigma, "moments": rows, "max_rel_diff": worst})
        }
        Cmd::Berg {
            s,
            c,
            m,
            max_moment,
        } => {
            let d = berg_pmf(*s, *c, *m)?;
            let base = orbit_pmf(c.sqrt(), *c, *m)?.to_dist()?;
            let rows = (1..=*max_moment)
                .map(|n| Ok(json!({"n": n, "berg": d.moment(n)?, "base": base.moment(n)?})))
                .collect::<Result<Vec<_>>>()?;
            json!({"s": s, "c": c, "atoms": atoms_json(&d), "moments": rows})
        }
        Cmd::MixtureCheck { c, points } => {
            let mix = LognormalMixture::new(*c)?;
            let worst = crate::lognormal::mixture_reconstruction_check(*c, points)?;
            json!({"c": c, "k_c": mix.k_c(), "points": points, "max_abs_error": worst})
        }
        Cmd::Midzuno { csv, m, exact } => {
            let file = fs::File::open(csv)
                .map_err(|e| Failure::Usage(format!("{}: {e}", csv.display())))?;
            let pop = Population::from_csv(file)?;
            let mut rng = stream(seed, "midzuno", 0);
            let subset = midzuno_sample(&pop, *m, &mut rng)?;
            let mut v = json!({
                "estimate": ratio_estimate(&pop, &subset)?,
                "subset": subset,
                "seed": seed,
            });
            if *exact {
                v["target"] = json!(pop.ratio());
                v["exact_expectation"] = json!(exact_expectation(&pop, *m)?);
            }
            v
        }
        Cmd::Renewal { dist, horizon, n } => {
            let inter = dist.interarrival()?;
            let biased_mean = match dist {
                DistArg::Named(nd) => named_biased_mean(nd)?,
                _ => size_bias_discrete(&dist.discrete()?)?.mean(),
            };
            let chunks = parallel_draws(seed, "renewal", workers, *n, |rng, k| {
                vec![simulate_renewal_inspection(&inter, *horizon, k, rng)]
            });
            let draws = chunks.into_iter().collect::<Result<Vec<_>>>()?.concat();
            let (lm, lse) = mean_se(&draws.iter().map(|s| s.covering_length).collect::<Vec<_>>());
            let (wm, wse) = mean_se(&draws.iter().map(|s| s.residual_wait).collect::<Vec<_>>());
            json!({
                "dist": dist.label(),
                "horizon": horizon,
                "n": n,
                "covering_mean": lm,
                "covering_se": lse,
                "residual_mean": wm,
                "residual_se": wse,
                "biased_mean": biased_mean,
            })
        }
        Cmd::Skorohod { atoms } => {
            let sc = skorohod_coupling(atoms)?;
            let exit = skorohod_exit_pmf(&sc)?;
            json!({
                "p_plus": sc.p_plus,
                "p_zero": sc.p_zero,
                "p_minus": sc.p_minus,
                "uv_atoms": sc.uv_atoms,
                "exit_atoms": atoms_json(&exit),
                "max_exit_error": max_atom_diff(&exit, atoms),
                "expected_exit_time": expected_exit_time(&sc),
                "variance": atoms.moment(2)?,
            })
        }
        Cmd::Stein(s) => match (s.n, s.p, s.lambda, s.gap) {
            (Some(n), Some(p), _, _) => {
                let (bound, tv) = binomial_poisson_check(n, p)?;
                json!({"lambda": f64::from(n) * p, "gap": p, "bound": bound, "exact_tv": tv})
            }
            (_, _, Some(lambda), Some(gap)) => {
                let g = CouplingGap::new(gap, "user")?;
                json!({"lambda": lambda, "gap": gap, "bound": stein_poisson_bound(lambda, &g)?, "exact_tv": Value::Null})
            }
            _ => {
                return Err(Failure::Usage(
                    "give --n with --p, or --lambda with --gap".into(),
                ))
            }
        },
        Cmd::Concentration { a, c, x, poisson } => {
            let cp = ConcentrationParams::new(*a, *c, *x)?;
            if x >= a {
                let (tight, gaussian) = concentration_upper(&cp)?;
                let iterated = if x > a {
                    json!(tail_iteration(&cp)?)
                } else {
                    Value::Null
                };
                json!({
                    "side": "upper",
                    "tight": tight,
                    "gaussian": gaussian,
                    "iterated": iterated,
                    "poisson_exact": if *poisson { json!(poisson_upper_tail(*a, *x)) } else { Value::Null },
                })
            } else {
                let (tight, gaussian) = concentration_lower(&cp)?;
                json!({
                    "side": "lower",
                    "tight": tight,
                    "gaussian": gaussian,
                    "iterated": Value::Null,
                    "poisson_exact": if *poisson { json!(poisson_lower_tail(*a, *x)) } else { Value::Null },
                })
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("sizebias").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn value(args: &[&str]) -> Value {
        let (code, out, err) = call(args);
        assert_eq!(code, 0, "{err}");
        serde_json::from_str(&out).unwrap()
    }

    #[test]
    fn transform_poisson() {
        let v = value(&["transform", "--dist", "poisson:2"]);
        assert_eq!(v["closed_form"], "1 + Poisson(2)");
        assert_eq!(v["mean"], 2.0);
    }

    #[test]
    fn id_test_binomial() {
        let v = value(&["id-test", "--pmf", "0.25,0.5,0.25"]);
        assert_eq!(v["is_id"], false);
        assert_eq!(v["witness_index"], 2);
    }

    #[test]
    fn floats_use_seventeen_digits() {
        let (_, out, _) = call(&["stein", "--lambda", "1", "--gap", "0.1"]);
        assert!(out.contains("\"bound\":6.3212055882855764e-2"), "{out}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["bogus"]).0, 2);
        assert_eq!(call(&["transform", "--dist", "poisson:-1"]).0, 2);
        assert_eq!(
            call(&["concentration", "--a", "4", "--c", "0", "--x", "8"]).0,
            2
        );
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(call(&["berg", "--s", "2", "--c", "2"]).0, 2);
    }

    #[test]
    fn skorohod_negative_atoms() {
        let v = value(&["skorohod", "--atoms", "-1:0.5,1:0.5"]);
        assert_eq!(v["expected_exit_time"], 1.0);
    }

    #[test]
    fn csv_output() {
        let (code, out, _) = call(&["--format", "csv", "stein", "--n", "10", "--p", "0.1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("key,value\n"));
        assert!(out.contains("\nbound,6.3212055882855"));
    }
}
