//! The `circle-mbqc` command line.
//!
//! Exit codes: 0 on success, 1 when the computation itself fails (invalid word,
//! failed verification, ...), 2 for bad arguments or unreadable input.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::circlegraph::{
    comparability_grid, find_word_bruteforce, rank_width_exact, SimpleGraph,
};
use crate::error::Error;
use crate::gaussian::{
    marginal_prob, matching_covariance, overlap_full, product_covariance, wick_expectation,
    BlochVector, Measured, Outcome, SkewMatrix,
};
use crate::mbqc::{LocalFrame, MeasurementPlan, Simulator};
use crate::multigraph::{enumerate_words, tour_from_word, DoubleOccurrenceWord};
use crate::oracle;

const AFTER_HELP: &str = "\
File formats (all JSON):
  word    {\"letters\": [\"a\",\"d\",\"b\",\"a\",\"c\",\"b\",\"d\",\"c\"]}
  graph   {\"vertices\": [\"a\",\"b\"], \"edges\": [[\"a\",\"b\"]]}
  matrix  {\"dim\": 4, \"upper\": [[0,1,1.0],[2,3,1.0]]}   strict upper triangle, 0-based
  plan    {\"steps\": [{\"qubit\":\"a\",\"basis\":{\"static\":[0,0,1]}},
                     {\"qubit\":\"b\",\"basis\":{\"adaptive\":{\"+\":[1,0,0],\"-\":[0,1,0]}}}]}
          adaptive keys are the earlier outcomes in step order, over '+' and '-'
  frame   {\"a\": [[[re,im],[re,im]],[[re,im],[re,im]]]}   row-major 2x2 unitary per qubit
Half-edge (v, slot) is matrix row 4*rank(v) + slot - 1, vertices ranked by first appearance.
Probabilities are printed with 12 significant digits.
Sampling: shot k uses ChaCha8 seeded from --seed on stream k.";

#[derive(Parser, Debug)]
#[command(name = "circle-mbqc", version, about = "Exact simulation of measurements on circle graph states", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct WordArg {
    /// Word JSON file ("-" for stdin).
    #[arg(long, conflicts_with = "letters")]
    word: Option<String>,
    /// Word given inline, one character per letter (e.g. adbacbdc).
    #[arg(long)]
    letters: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Covariance matrix of the word's matching state.
    Build {
        #[command(flatten)]
        word: WordArg,
    },
    /// Labelled half-edge tour of the word.
    Tour {
        #[command(flatten)]
        word: WordArg,
    },
    /// Probability |<phi|G>|^2 for a product state given as Bloch vectors in vertex order.
    Overlap {
        #[command(flatten)]
        word: WordArg,
        /// JSON list of [x,y,z], one per vertex.
        #[arg(long)]
        blochs: String,
    },
    /// Probability of outcomes on a subset of qubits.
    Marginal {
        #[command(flatten)]
        word: WordArg,
        /// JSON list of [qubit, [x,y,z], outcome] with outcome 1 or -1.
        #[arg(long)]
        measure: String,
    },
    /// Seeded runs of a measurement plan, one transcript per line.
    Sample {
        #[command(flatten)]
        word: WordArg,
        #[arg(long)]
        plan: String,
        #[arg(long)]
        frame: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
    },
    /// Exact outcome distribution of a plan.
    Dist {
        #[command(flatten)]
        word: WordArg,
        #[arg(long)]
        plan: String,
        #[arg(long)]
        frame: Option<String>,
    },
    /// Brute-force verification against dense reference states.
    Verify {
        #[command(flatten)]
        word: WordArg,
        /// Check every connected loop-free word with up to K letters (K <= 4).
        #[arg(long, value_name = "K")]
        exhaustive_n: Option<usize>,
    },
    /// The n x n comparability grid.
    Grid {
        #[arg(long)]
        n: usize,
    },
    /// Exact rank width and a decomposition achieving it.
    Rankwidth {
        #[arg(long)]
        graph: String,
    },
    /// Cut rank of a vertex subset.
    Cutrank {
        #[arg(long)]
        graph: String,
        /// JSON list of vertex names.
        #[arg(long)]
        subset: String,
    },
    /// Local complementation at a vertex.
    Lc {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        vertex: String,
    },
    /// Search for a word whose circle graph is the given graph.
    WordSearch {
        #[arg(long)]
        graph: String,
    },
    /// Pfaffian of a skew-symmetric matrix.
    Pf {
        #[arg(long)]
        matrix: String,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Rounds to 12 significant digits and prints in plain decimal.
pub fn format_number(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded}")
}

fn rounded_json(x: f64) -> serde_json::Value {
    serde_json::from_str(&format_number(x)).unwrap_or(json!(x))
}

fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(Path::new(path))
        .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| Failure::Usage(format!("invalid {what}: {e}")))
}

fn load<T: serde::de::DeserializeOwned>(path: &str, what: &str) -> CliResult<T> {
    parse_json(&read_input(path)?, what)
}

fn load_word(arg: &WordArg) -> CliResult<DoubleOccurrenceWord> {
    match (&arg.word, &arg.letters) {
        (Some(path), _) => load(path, "word"),
        (None, Some(letters)) => letters.parse().map_err(Failure::from),
        (None, None) => Err(Failure::Usage("one of --word or --letters is required".into())),
    }
}

fn to_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output types serialize")
}

pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let rendered = e.to_string();
            let reason = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            let _ = writeln!(err, "error: {reason}");
            return 2;
        }
    };
    let mut lines = Vec::new();
    let result = dispatch(cli.command, &mut lines);
    for line in &lines {
        let _ = writeln!(out, "{line}");
    }
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Domain(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn dispatch(command: Command, lines: &mut Vec<String>) -> CliResult<()> {
    match command {
        Command::Build { word } => {
            let w = load_word(&word)?;
            let psi = matching_covariance(&tour_from_word(&w)?);
            lines.push(to_line(&psi.gamma));
        }
        Command::Tour { word } => {
            let w = load_word(&word)?;
            lines.push(to_line(&tour_from_word(&w)?.dump()));
        }
        Command::Overlap { word, blochs } => {
            let w = load_word(&word)?;
            let blochs: Vec<BlochVector> = parse_json(&blochs, "--blochs")?;
            let psi = matching_covariance(&tour_from_word(&w)?);
            let p = overlap_full(&product_covariance(&blochs), &psi)?;
            lines.push(format_number(p.value));
        }
        Command::Marginal { word, measure } => {
            let w = load_word(&word)?;
            let items: Vec<(String, BlochVector, i64)> = parse_json(&measure, "--measure")?;
            let psi = matching_covariance(&tour_from_word(&w)?);
            let measured = items
                .iter()
                .map(|(q, b, o)| {
                    let v = w.index_of(q).ok_or_else(|| Error::UnknownVertex(q.clone()))?;
                    Ok(Measured::new(v, *b, Outcome::from_i64(*o)?))
                })
                .collect::<crate::Result<Vec<_>>>()?;
            lines.push(format_number(marginal_prob(&psi, &measured)?.value));
        }
        Command::Sample {
            word,
            plan,
            frame,
            seed,
            shots,
        } => {
            let w = load_word(&word)?;
            let plan: MeasurementPlan = load(&plan, "plan")?;
            let frame: Option<LocalFrame> = frame.map(|p| load(&p, "frame")).transpose()?;
            let sim = Simulator::with_frame(&w, frame.as_ref())?;
            for shot in 0..shots {
                lines.push(to_line(&sim.sample_run(&plan, seed, shot)?));
            }
        }
        Command::Dist { word, plan, frame } => {
            let w = load_word(&word)?;
            let plan: MeasurementPlan = load(&plan, "plan")?;
            let frame: Option<LocalFrame> = frame.map(|p| load(&p, "frame")).transpose()?;
            let sim = Simulator::with_frame(&w, frame.as_ref())?;
            let dist: BTreeMap<String, serde_json::Value> = sim
                .exact_distribution(&plan)?
                .into_iter()
                .map(|(k, p)| (k, rounded_json(p)))
                .collect();
            lines.push(to_line(&dist));
        }
        Command::Verify { word, exhaustive_n } => {
            let words = match exhaustive_n {
                Some(k) => {
                    if k > oracle::DENSE_LIMIT {
                        return Err(Failure::Usage(format!(
                            "--exhaustive-n must be at most {}",
                            oracle::DENSE_LIMIT
                        )));
                    }
                    (2..=k).flat_map(enumerate_words).collect()
                }
                None => vec![load_word(&word)?],
            };
            let table = oracle::verify_table1();
            let mut ok = table.passed();
            lines.push(to_line(&json!({"word": null, "checks": table.checks})));
            for w in &words {
                let report = verify_word(w)?;
                ok &= report.passed();
                lines.push(to_line(&json!({"word": w.to_string(), "checks": report.checks})));
            }
            if !ok {
                return Err(Failure::Domain("verification failed".into()));
            }
        }
        Command::Grid { n } => {
            lines.push(to_line(&comparability_grid(n)));
        }
        Command::Rankwidth { graph } => {
            let g: SimpleGraph = load(&graph, "graph")?;
            let (width, decomposition) = rank_width_exact(&g)?;
            lines.push(to_line(&json!({"width": width, "decomposition": decomposition})));
        }
        Command::Cutrank { graph, subset } => {
            let g: SimpleGraph = load(&graph, "graph")?;
            let subset: Vec<String> = parse_json(&subset, "--subset")?;
            lines.push(g.cut_rank(&subset)?.to_string());
        }
        Command::Lc { graph, vertex } => {
            let g: SimpleGraph = load(&graph, "graph")?;
            lines.push(to_line(&g.local_complement(&vertex)?));
        }
        Command::WordSearch { graph } => {
            let g: SimpleGraph = load(&graph, "graph")?;
            match find_word_bruteforce(&g)? {
                Some(w) => lines.push(to_line(&w)),
                None => lines.push("not circle".to_string()),
            }
        }
        Command::Pf { matrix } => {
            let m: SkewMatrix = load(&matrix, "matrix")?;
            lines.push(format_number(m.pfaffian()));
        }
    }
    Ok(())
}

/// Every dense check for one word.
pub fn verify_word(w: &DoubleOccurrenceWord) -> crate::Result<oracle::Report> {
    let tour = tour_from_word(w)?;
    let psi = matching_covariance(&tour);
    let mut report = oracle::Report::default();
    report.push("pf(matching covariance) = 1", (psi.gamma.pfaffian() - 1.0).abs(), 0.0);
    report.extend(oracle::verify_covariance(&tour, &psi.gamma)?);
    report.extend(oracle::verify_cycle_stabilizers(&tour)?);
    report.extend(oracle::verify_embedding(&tour)?);
    if w.vertex_count() <= 3 {
        report.extend(oracle::verify_wick(&tour, |q| wick_expectation(&psi.gamma, q))?);
    }
    Ok(report)
}
