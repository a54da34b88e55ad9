use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eliso::approx::{approx_auto, approx_c, approx_c_minus};
use eliso::domains::{
    domain_as_election, is_single_crossing_order, is_single_peaked, maximal_single_peaked_domain,
    sample_election, Axis, Domain, SamplingModel,
};
use eliso::error::Error;
use eliso::exact::{id_exact, kemeny_score_brute};
use eliso::fpt::fpt_value;
use eliso::io::{read_native, read_preflib_soc, write_native};
use eliso::isomorphism::are_isomorphic;
use eliso::limits::Limits;
use eliso::map::{embed_2d, pairwise_matrix, DistanceMatrix, Strategy};
use eliso::metrics::MetricKind;
use eliso::model::{DistanceResult, Election};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "eliso",
    version,
    about = "Isomorphic distances between ordinal elections"
)]
struct Cli {
    #[command(flatten)]
    limits: LimitArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LimitArgs {
    /// Largest candidate count for exhaustive search over candidate matchings
    #[arg(long, global = true, default_value_t = Limits::default().max_brute_candidates)]
    max_candidates: usize,
    /// Largest voter count for exhaustive search over voter matchings
    #[arg(long, global = true, default_value_t = Limits::default().max_brute_voters)]
    max_voters: usize,
    /// Largest budget for the adjacent-swap search
    #[arg(long, global = true, default_value_t = Limits::default().max_search_budget)]
    max_budget: u64,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            max_brute_candidates: self.max_candidates,
            max_brute_voters: self.max_voters,
            max_search_budget: self.max_budget,
            ..Limits::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Isomorphic distance between two elections
    Dist {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value = "swap", value_parser = parse_metric)]
        metric: MetricKind,
        #[arg(long, value_enum, default_value_t = Algo::Exact)]
        algo: Algo,
        /// Largest budget tried by `--algo fpt`
        #[arg(long)]
        k: Option<u64>,
        /// Parameter of `--algo approx-c-minus`
        #[arg(long, default_value_t = 1)]
        c: usize,
        /// Print the candidate and voter matchings
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        json: bool,
    },
    /// Exit 0 if the elections are isomorphic, 1 otherwise
    Iso {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Kemeny score and a consensus ranking
    Kemeny {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Pairwise distance matrix over election files or a directory of them
    Matrix {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "swap", value_parser = parse_metric)]
        metric: MetricKind,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        #[arg(long)]
        json: bool,
    },
    /// 2D coordinates for a JSON distance matrix, as CSV
    Embed {
        matrix: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
    },
    /// Sample elections in native format
    Generate {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Axis for `--model sp`, 1-based (default 1,2,...,m)
        #[arg(long)]
        axis: Option<String>,
        /// Output directory; stdout when omitted and count is 1
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Single-peaked and single-crossing domain tools
    Domain {
        /// Election to check; without it, `--sp-axis` prints the maximal domain
        file: Option<PathBuf>,
        /// Axis as 1-based candidates, e.g. "2,1,3"
        #[arg(long, conflicts_with = "sc_check")]
        sp_axis: Option<String>,
        /// Check that the votes, in file order, are single-crossing
        #[arg(long)]
        sc_check: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Exact,
    Fpt,
    Approx,
    ApproxCMinus,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exact,
    Approx,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Ic,
    Id,
    Sp,
}

fn parse_metric(s: &str) -> Result<MetricKind, String> {
    s.parse()
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let limits = cli.limits.limits();
    match cli.command {
        Command::Dist {
            first,
            second,
            metric,
            algo,
            k,
            c,
            witness,
            json,
        } => {
            let e = load(&first)?;
            let f = load(&second)?;
            let result = match algo {
                Algo::Exact => id_exact(&e, &f, metric, &limits)?,
                Algo::Approx => approx_c(&e, &f, metric)?,
                Algo::ApproxCMinus => approx_c_minus(&e, &f, metric, c, &limits)?,
                Algo::Auto => approx_auto(&e, &f, metric)?,
                Algo::Fpt => {
                    let k_max = k.unwrap_or(limits.max_search_budget);
                    match fpt_value(&e, &f, metric, k_max, &limits)? {
                        Some(r) => r,
                        None => {
                            if json {
                                println!(
                                    "{}",
                                    json!({ "metric": metric.name(), "value": null, "greater_than": k_max })
                                );
                            } else {
                                println!(">{k_max}");
                            }
                            return Ok(ExitCode::SUCCESS);
                        }
                    }
                }
            };
            print_distance(&result, metric, witness, json);
            Ok(ExitCode::SUCCESS)
        }
        Command::Iso {
            first,
            second,
            json,
        } => {
            let e = load(&first)?;
            let f = load(&second)?;
            let found = are_isomorphic(&e, &f)?;
            if json {
                let body = match &found {
                    Some(w) => json!({
                        "isomorphic": true,
                        "candidate_matching": one_based(w.candidate_matching.as_slice()),
                        "voter_matching": one_based(w.voter_matching.as_slice()),
                    }),
                    None => json!({ "isomorphic": false }),
                };
                println!("{body}");
            } else if let Some(w) = &found {
                println!("isomorphic");
                println!("candidates: {}", arrows(w.candidate_matching.as_slice()));
                println!("voters: {}", arrows(w.voter_matching.as_slice()));
            } else {
                println!("not isomorphic");
            }
            Ok(if found.is_some() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Kemeny { file, json } => {
            let e = load(&file)?;
            let (score, consensus) = kemeny_score_brute(&e, &limits)?;
            if json {
                println!(
                    "{}",
                    json!({ "score": score, "consensus": one_based(consensus.ranking()) })
                );
            } else {
                println!("{score}");
                println!("consensus: {}", spaced(consensus.ranking()));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Matrix {
            inputs,
            metric,
            strategy,
            json,
        } => {
            let files = expand_inputs(&inputs)?;
            if files.is_empty() {
                return Err(Failure::Usage("no election files found".into()));
            }
            let mut labels = Vec::with_capacity(files.len());
            let mut elections = Vec::with_capacity(files.len());
            for path in &files {
                labels.push(label_of(path));
                elections.push(load(path)?);
            }
            let strategy = match strategy {
                StrategyArg::Exact => Strategy::Exact,
                StrategyArg::Approx => Strategy::Approx,
                StrategyArg::Auto => Strategy::Auto,
            };
            let matrix = pairwise_matrix(labels, &elections, metric, strategy, &limits)?;
            if json {
                println!("{}", matrix.to_json());
            } else {
                print!("{}", matrix.to_table());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Embed {
            matrix,
            seed,
            iterations,
        } => {
            let text = read_text(&matrix)?;
            let matrix = DistanceMatrix::from_json(&text)?;
            let embedding = embed_2d(&matrix, seed, iterations)?;
            if embedding.degenerate {
                eprintln!("warning: all distances are zero; points coincide");
            }
            print!("{}", embedding.to_csv());
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate {
            model,
            m,
            n,
            seed,
            count,
            axis,
            out,
        } => {
            let model = match model {
                ModelArg::Ic => SamplingModel::ImpartialCulture,
                ModelArg::Id => SamplingModel::Identity,
                ModelArg::Sp => SamplingModel::SinglePeakedUniform(match &axis {
                    Some(text) => parse_axis(text)?,
                    None => Axis::natural(m),
                }),
            };
            match out {
                None if count == 1 => {
                    print!("{}", write_native(&sample_election(&model, m, n, seed)?));
                }
                None => {
                    return Err(Failure::Usage(
                        "--out is required when --count exceeds 1".into(),
                    ))
                }
                Some(dir) => {
                    fs::create_dir_all(&dir).map_err(|e| io_failure(&dir, e))?;
                    let width = count.saturating_sub(1).to_string().len();
                    for i in 0..count {
                        let e = sample_election(&model, m, n, seed.wrapping_add(i as u64))?;
                        let path = dir.join(format!("e{i:0width$}.elec"));
                        fs::write(&path, write_native(&e)).map_err(|err| io_failure(&path, err))?;
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Domain {
            file,
            sp_axis,
            sc_check,
        } => {
            if !sc_check && sp_axis.is_none() {
                return Err(Failure::Usage(
                    "one of --sp-axis or --sc-check is required".into(),
                ));
            }
            let Some(file) = file else {
                let Some(axis) = sp_axis else {
                    return Err(Failure::Usage("--sc-check needs an election file".into()));
                };
                let domain = maximal_single_peaked_domain(&parse_axis(&axis)?)?;
                print!("{}", write_native(&domain_as_election(&domain)?));
                return Ok(ExitCode::SUCCESS);
            };
            let e = load(&file)?;
            let holds = if sc_check {
                is_single_crossing_order(e.votes())?
            } else {
                let axis = parse_axis(sp_axis.as_deref().unwrap_or_default())?;
                let votes = Domain::new(e.num_candidates(), e.votes().to_vec())?;
                is_single_peaked(&votes, &axis)?
            };
            println!("{}", if holds { "yes" } else { "no" });
            Ok(if holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn print_distance(r: &DistanceResult, metric: MetricKind, witness: bool, json: bool) {
    if json {
        let mut body = json!({
            "metric": metric.name(),
            "value": r.value,
            "exact": r.exact,
            "tag": r.tag(),
            "solver": r.solver,
        });
        if witness {
            body["candidate_matching"] = json!(one_based(r.candidate_matching.as_slice()));
            body["voter_matching"] = json!(one_based(r.voter_matching.as_slice()));
        }
        println!("{body}");
        return;
    }
    println!("{}", r.value);
    println!("guarantee: {}", r.tag());
    if witness {
        println!("candidates: {}", arrows(r.candidate_matching.as_slice()));
        println!("voters: {}", arrows(r.voter_matching.as_slice()));
    }
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|x| x + 1).collect()
}

fn arrows(map: &[usize]) -> String {
    map.iter()
        .enumerate()
        .map(|(i, t)| format!("{}->{}", i + 1, t + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn spaced(xs: &[usize]) -> String {
    one_based(xs)
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_axis(text: &str) -> CliResult<Axis> {
    let order: Vec<usize> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(x) if x >= 1 => Ok(x - 1),
            _ => Err(Failure::Usage(format!("bad axis entry `{t}`"))),
        })
        .collect::<CliResult<_>>()?;
    Ok(Axis::new(order)?)
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Runtime(format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

/// `.soc` files are PrefLib, anything else the native format.
fn load(path: &Path) -> CliResult<Election> {
    let text = read_text(path)?;
    let parsed = if is_preflib(path) {
        read_preflib_soc(&text).map(|named| named.election)
    } else {
        read_native(&text)
    };
    parsed.map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn is_preflib(path: &Path) -> bool {
    path.extension()
        .is_some_and(|x| x.eq_ignore_ascii_case("soc"))
}

fn label_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Directories contribute their `.elec` and `.soc` files in name order.
fn expand_inputs(inputs: &[PathBuf]) -> CliResult<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(input)
                .map_err(|e| io_failure(input, e))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| {
                    p.is_file()
                        && p.extension().is_some_and(|x| {
                            x.eq_ignore_ascii_case("elec") || x.eq_ignore_ascii_case("soc")
                        })
                })
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(input.clone());
        }
    }
    Ok(files)
}
