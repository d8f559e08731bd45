//! `clogic` — command-line front end for the combinatory logic workbench.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime error.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use clogic::basis::Basis;
use clogic::enumerate::{census, count_terms, CensusResult};
use clogic::experiment::{export_result, run_experiment, ExperimentConfig, ExportFormat};
use clogic::reduce::{normalize, step_with_cost, ReductionOutcome};
use clogic::sample::{random_term, RandomSource};
use clogic::series::{
    self, coeff_C, coeff_subterm, coeff_TL, grammar_coeffs, inverse_sqrt_core, r0_stream,
    CoefficientStream, GrammarData,
};
use clogic::term::Term;

#[derive(Parser)]
#[command(name = "clogic", version, about = "Quantitative combinatory logic workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesFn {
    C,
    R0,
    Tl,
    Subterm,
    Invsqrt,
    Grammar,
}

#[derive(Subcommand)]
enum Command {
    /// Normal-order reduction of a single term.
    Reduce {
        #[arg(long)]
        term: String,
        #[arg(long)]
        fuel: u64,
        /// Print one line per contraction.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value = "sk")]
        basis: String,
    },
    /// Number of size-n terms over the basis.
    Count {
        #[arg(long, default_value = "sk")]
        basis: String,
        #[arg(long)]
        size: u64,
    },
    /// Exhaustive census of all size-n terms by reduction length.
    Census {
        #[arg(long, default_value = "sk")]
        basis: String,
        #[arg(long)]
        size: u64,
        #[arg(long)]
        fuel: u64,
        /// Also count terms containing this subterm.
        #[arg(long)]
        pattern: Option<String>,
        /// Also count principal-typeable terms (S/K basis only).
        #[arg(long)]
        typecheck: bool,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
    },
    /// Draw uniformly random size-n terms.
    Sample {
        #[arg(long, default_value = "sk")]
        basis: String,
        #[arg(long)]
        size: u64,
        #[arg(long)]
        count: u64,
        #[arg(long)]
        seed: u64,
        /// Print every sampled term.
        #[arg(long)]
        print: bool,
    },
    /// Monte Carlo normalisation experiment G(s, n, r).
    Experiment {
        #[arg(long, default_value = "sk")]
        basis: String,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        size: u64,
        #[arg(long)]
        fuel: u64,
        #[arg(long)]
        seed: u64,
        /// Worker hint; results never depend on it.
        #[arg(long)]
        workers: Option<usize>,
        /// Histogram CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Optional JSON result path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Exact generating-function coefficients a_0..a_N as CSV.
    Series {
        #[arg(long = "fn", value_enum)]
        func: SeriesFn,
        /// Truncation order N.
        #[arg(long)]
        n: u64,
        /// Basis cardinality (tl, subterm).
        #[arg(long)]
        d: Option<u64>,
        /// Pattern size (subterm).
        #[arg(long)]
        p: Option<u64>,
        /// Reduction grammar JSON; repeat for consecutive indices 1, 2, ...
        #[arg(long)]
        grammar: Vec<PathBuf>,
    },
    /// Asymptotic densities from a constants file.
    Density {
        #[arg(long)]
        constants: PathBuf,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e:#}");
        std::process::exit(2);
    }
}

fn load_basis(spec: &str) -> Result<Basis> {
    if spec == "sk" {
        return Ok(Basis::sk());
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("reading basis {spec}"))?;
    Ok(Basis::from_json(&text)?)
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Reduce {
            term,
            fuel,
            trace,
            basis,
        } => {
            let b = load_basis(&basis)?;
            let t = Term::parse(&term, &b).context("parsing --term")?;
            if trace {
                let mut cur = t.clone();
                let mut steps = 0u64;
                let mut index = 0u64;
                while let Some((next, cost)) = step_with_cost(&cur, &b) {
                    if steps + cost > fuel {
                        break;
                    }
                    steps += cost;
                    index += 1;
                    cur = next;
                    println!("{index}: {}", cur.print(&b));
                }
            }
            match normalize(&t, &b, fuel) {
                ReductionOutcome::NormalForm { result, steps } => {
                    println!("normal form: {}", result.print(&b));
                    println!("steps: {steps}");
                }
                ReductionOutcome::FuelExhausted { last, steps_taken } => {
                    println!("fuel exhausted after {steps_taken} steps");
                    println!("last: {}", last.print(&b));
                }
            }
        }
        Command::Count { basis, size } => {
            let b = load_basis(&basis)?;
            println!("{}", count_terms(b.cardinality() as u64, size));
        }
        Command::Census {
            basis,
            size,
            fuel,
            pattern,
            typecheck,
            out,
        } => {
            let b = load_basis(&basis)?;
            let pat = pattern
                .map(|p| Term::parse(&p, &b))
                .transpose()
                .context("parsing --pattern")?;
            if typecheck && !b.is_sk() {
                bail!("--typecheck requires the S/K basis");
            }
            let res = census(&b, size, fuel, pat.as_ref(), typecheck);
            match out {
                OutFormat::Csv => print!("{}", census_csv(&res)),
                OutFormat::Json => println!("{}", census_json(&res)?),
            }
        }
        Command::Sample {
            basis,
            size,
            count,
            seed,
            print,
        } => {
            let b = load_basis(&basis)?;
            for i in 0..count {
                let t = random_term(&b, size, &RandomSource::new(seed, i));
                if print {
                    println!("{}", t.print(&b));
                }
            }
            if !print {
                println!("sampled {count} terms of size {size} (seed {seed})");
            }
        }
        Command::Experiment {
            basis,
            samples,
            size,
            fuel,
            seed,
            workers,
            out,
            json,
        } => {
            let config = ExperimentConfig {
                samples,
                size,
                fuel,
                seed,
                workers: workers.unwrap_or(1),
                basis: load_basis(&basis)?,
            };
            let res = run_experiment(&config);
            std::fs::write(&out, export_result(&res, ExportFormat::Csv))
                .with_context(|| format!("writing {}", out.display()))?;
            if let Some(path) = json {
                std::fs::write(&path, export_result(&res, ExportFormat::Json))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            println!(
                "samples: {samples}  normalized: {}  fraction: {:.4}  E(X): {:.4}  log2(n): {:.4}",
                res.normalized, res.fraction_normalized, res.mean_reduction_length, res.log2_n
            );
        }
        Command::Series {
            func,
            n,
            d,
            p,
            grammar,
        } => {
            let stream = series_stream(func, n, d, p, &grammar)?;
            println!("n,coefficient");
            for (i, c) in stream.coeffs().iter().enumerate() {
                println!("{i},{c}");
            }
        }
        Command::Density { constants } => {
            let text = std::fs::read_to_string(&constants)
                .with_context(|| format!("reading {}", constants.display()))?;
            let file: ConstantsFile = serde_json::from_str(&text).context("parsing constants")?;
            let mut densities: BTreeMap<u32, f64> = file.densities;
            for (m, c_tilde) in file.c_tilde {
                densities
                    .entry(m)
                    .or_insert_with(|| series::density_from_constant(c_tilde));
            }
            if densities.is_empty() {
                bail!("constants file holds no densities");
            }
            let values: Vec<f64> = densities.values().copied().collect();
            for (m, v) in &densities {
                println!("{m},{v}");
            }
            println!("sum,{}", series::sum_densities(&values));
        }
    }
    Ok(())
}

#[derive(serde::Deserialize)]
struct ConstantsFile {
    /// m -> asymptotic density of the class reducing in exactly m steps.
    #[serde(default)]
    densities: BTreeMap<u32, f64>,
    /// m -> normalised singularity constant; converted to a density.
    #[serde(default)]
    c_tilde: BTreeMap<u32, f64>,
}

fn census_csv(res: &CensusResult) -> String {
    let mut out = String::from("reduction_length,count\n");
    if res.fuel_exhausted > 0u32.into() {
        out.push_str(&format!("-1,{}\n", res.fuel_exhausted));
    }
    for (k, v) in &res.by_reduction_length {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

fn census_json(res: &CensusResult) -> Result<String> {
    let buckets: BTreeMap<String, String> = res
        .by_reduction_length
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let value = serde_json::json!({
        "size": res.size,
        "total": res.total.to_string(),
        "by_reduction_length": buckets,
        "fuel_exhausted": res.fuel_exhausted.to_string(),
        "normal_forms": res.normal_forms.to_string(),
        "typeable": res.typeable.as_ref().map(|v| v.to_string()),
        "containing_pattern": res.containing_pattern.as_ref().map(|v| v.to_string()),
    });
    Ok(serde_json::to_string_pretty(&value)?)
}

fn series_stream(
    func: SeriesFn,
    n: u64,
    d: Option<u64>,
    p: Option<u64>,
    grammar: &[PathBuf],
) -> Result<CoefficientStream> {
    let order = n as usize;
    Ok(match func {
        SeriesFn::C => CoefficientStream::from_coeffs(
            (0..=n).map(|i| coeff_C(i).into()).collect(),
        ),
        SeriesFn::R0 => r0_stream(order),
        SeriesFn::Tl => {
            let d = d.context("--fn tl requires --d")?;
            CoefficientStream::from_coeffs((0..=n).map(|i| coeff_TL(d, i).into()).collect())
        }
        SeriesFn::Subterm => {
            let d = d.context("--fn subterm requires --d")?;
            let p = p.context("--fn subterm requires --p")?;
            CoefficientStream::from_coeffs(
                (0..=n)
                    .map(|i| coeff_subterm(d, p, i).map(Into::into))
                    .collect::<Result<_, _>>()?,
            )
        }
        SeriesFn::Invsqrt => inverse_sqrt_core(order),
        SeriesFn::Grammar => {
            if grammar.is_empty() {
                bail!("--fn grammar requires at least one --grammar file");
            }
            let mut lower = vec![r0_stream(order)];
            let mut last = None;
            for (expected, path) in grammar.iter().enumerate() {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let g = GrammarData::from_json(&text)
                    .with_context(|| format!("parsing {}", path.display()))?;
                if g.n != expected + 1 {
                    bail!(
                        "grammar files must cover indices 1, 2, ... in order; \
                         {} has index {}",
                        path.display(),
                        g.n
                    );
                }
                let stream = grammar_coeffs(&g, &lower, order)?;
                lower.push(stream.clone());
                last = Some(stream);
            }
            last.expect("at least one grammar file")
        }
    })
}
