use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use morse_core::budget::{DEFAULT_MAX_FACETS, DEFAULT_MAX_SECONDS};
use morse_core::invariants::{invariants, multigraph_invariants};
use morse_core::io::{parse_input, serialize_morse_complex, Input};
use morse_core::iso::find_isomorphism_with;
use morse_core::reconstruct::{find_multigraph_isomorphism, reconstruct_multigraph_iso, MultigraphIso};
use morse_core::verify::{forest_identity_holds, run_all, CorpusConfig};
use morse_core::{find_morse_isomorphism, reconstruct_complex_iso, Budget, Error, Multigraph, MorseComplex, Parallelism};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;
const EXIT_INPUT: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Parser)]
#[command(name = "morse", version, about = "Morse complexes of simplicial complexes and multigraphs")]
struct Cli {
    /// Abort facet enumeration after this many facets.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_FACETS)]
    budget_facets: usize,
    /// Abort facet enumeration after this many seconds.
    #[arg(long, global = true, env = "MORSE_BUDGET_SECONDS", default_value_t = DEFAULT_MAX_SECONDS)]
    budget_seconds: u64,
    /// Seed for randomized corpus generation.
    #[arg(long, global = true, default_value_t = morse_core::corpus::DEFAULT_SEED)]
    seed: u64,
    /// Largest vertex count of the exhaustive complex corpus.
    #[arg(long, global = true, default_value_t = 5)]
    max_vertices: usize,
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Morse complex of FILE as a complex file followed by its pair table.
    Build { file: PathBuf },
    /// Print invariants of FILE, or of its Morse complex with --morse.
    Stats {
        file: PathBuf,
        #[arg(long)]
        morse: bool,
    },
    /// Decide whether A and B are isomorphic and print a bijection.
    Iso { a: PathBuf, b: PathBuf },
    /// Find an isomorphism of the Morse complexes of A and B and turn it into
    /// an isomorphism A -> B.
    Reconstruct { a: PathBuf, b: PathBuf },
    /// Run the built-in checks over generated corpora.
    Verify { suite: Suite },
    /// Check that the Morse complex of graph G equals the complex of directed
    /// forests of its doubled graph.
    Kozlov { graph: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Corpus,
}

enum Failure {
    Negative(String),
    Input(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Malformed(_) | Error::NotAFace(_) => Failure::Input(e.to_string()),
            other => Failure::Library(other),
        }
    }
}

type Outcome = Result<Vec<String>, Failure>;

fn read(path: &Path) -> Result<Input, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_input(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn budget(cli: &Cli) -> Budget {
    let parallelism = if cli.sequential { Parallelism::Sequential } else { Parallelism::default() };
    Budget::default()
        .with_max_facets(cli.budget_facets)
        .with_max_duration(Duration::from_secs(cli.budget_seconds))
        .with_parallelism(parallelism)
}

fn multigraph_lines(iso: &MultigraphIso, g: &Multigraph, h: &Multigraph) -> Vec<String> {
    let mut lines = iso.vertices.format_lines(g.vertex_labels(), h.vertex_labels());
    lines.extend(
        iso.edges
            .iter()
            .enumerate()
            .map(|(i, &j)| format!("edge {} -> {}", g.edge(i).label, h.edge(j).label)),
    );
    lines
}

fn mismatched() -> Failure {
    Failure::Input("inputs must both be complexes or both be multigraphs".into())
}

fn build(cli: &Cli, file: &Path) -> Outcome {
    let m = read(file)?.morse_complex();
    Ok(serialize_morse_complex(&m, &budget(cli))?.lines().map(str::to_string).collect())
}

fn stats(cli: &Cli, file: &Path, morse: bool) -> Outcome {
    let input = read(file)?;
    let report = match (&input, morse) {
        (_, true) => invariants(&input.morse_complex().underlying(&budget(cli))?),
        (Input::Complex(k), false) => {
            if k.is_empty() {
                return Err(Failure::Input("empty complex".into()));
            }
            invariants(k)
        }
        (Input::Multigraph(g), false) => multigraph_invariants(g),
    };
    Ok(report.to_lines())
}

fn iso(cli: &Cli, a: &Path, b: &Path) -> Outcome {
    match (read(a)?, read(b)?) {
        (Input::Complex(k), Input::Complex(l)) => find_isomorphism_with(&k, &l, budget(cli).parallelism)
            .map(|f| f.format_lines(k.labels(), l.labels()))
            .ok_or_else(|| Failure::Negative("not isomorphic".into())),
        (Input::Multigraph(g), Input::Multigraph(h)) => find_multigraph_isomorphism(&g, &h)
            .map(|f| multigraph_lines(&f, &g, &h))
            .ok_or_else(|| Failure::Negative("not isomorphic".into())),
        _ => Err(mismatched()),
    }
}

fn reconstruct(cli: &Cli, a: &Path, b: &Path) -> Outcome {
    let budget = budget(cli);
    let (a, b) = (read(a)?, read(b)?);
    let (ma, mb) = (a.morse_complex(), b.morse_complex());
    let f = find_morse_isomorphism(&ma, &mb, budget.parallelism)
        .ok_or_else(|| Failure::Negative("Morse complexes are not isomorphic".into()))?;
    match (a, b) {
        (Input::Complex(k), Input::Complex(l)) => {
            let r = reconstruct_complex_iso(&f, &k, &l, &ma, &mb)?;
            Ok(r.map.format_lines(k.labels(), l.labels()))
        }
        (Input::Multigraph(g), Input::Multigraph(h)) => {
            let iso = reconstruct_multigraph_iso(&f, &g, &h, &ma, &mb, &budget)?;
            Ok(multigraph_lines(&iso, &g, &h))
        }
        _ => Err(mismatched()),
    }
}

fn verify(cli: &Cli) -> Outcome {
    let cfg = CorpusConfig { seed: cli.seed, budget: budget(cli), max_vertices: cli.max_vertices, ..CorpusConfig::default() };
    let reports = run_all(&cfg);
    let lines: Vec<String> = reports.iter().map(ToString::to_string).collect();
    if reports.iter().all(|r| r.passed) {
        Ok(lines)
    } else {
        Err(Failure::Negative(lines.join("\n")))
    }
}

fn kozlov(cli: &Cli, file: &Path) -> Outcome {
    let g = match read(file)? {
        Input::Multigraph(g) => g,
        Input::Complex(k) => k.to_multigraph().map_err(|_| {
            Failure::Library(Error::Hypothesis { theorem: "the directed forest identity", detail: "input is not a graph".into() })
        })?,
    };
    let m = MorseComplex::of_multigraph(&g);
    let facets = m.ensure_facets(&budget(cli))?.len();
    if forest_identity_holds(m.diagram(), &m, &g, &budget(cli))? {
        Ok(vec![format!("identity=holds facets={facets}")])
    } else {
        Err(Failure::Negative(format!("identity=fails facets={facets}")))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match &cli.command {
        Command::Build { file } => build(&cli, file),
        Command::Stats { file, morse } => stats(&cli, file, *morse),
        Command::Iso { a, b } => iso(&cli, a, b),
        Command::Reconstruct { a, b } => reconstruct(&cli, a, b),
        Command::Verify { suite: Suite::Corpus } => verify(&cli),
        Command::Kozlov { graph } => kozlov(&cli, graph),
    };
    match outcome {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Negative(msg)) => {
            println!("{msg}");
            ExitCode::from(EXIT_NEGATIVE)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Budget(_) => EXIT_BUDGET,
                Error::Hypothesis { .. } => EXIT_HYPOTHESIS,
                _ => EXIT_INTERNAL,
            })
        }
    }
}
