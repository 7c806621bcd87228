//! Command-line front end: `check`, `count`, `enumerate`, `bench`.

use std::ffi::OsString;
use std::io::{self, BufWriter, Read, Write};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::compressed::{CompressedGraph, CompressionMode};
use crate::count::{brute_force_trails, count_best, count_edge_distinct, DEFAULT_BRUTE_CAP};
use crate::error::{Error, Result};
use crate::explore::{enumerate, EnumerateOptions};
use crate::graph::{check_eulerian, parse_edge_list, write_edge_list, EdgeId, Multigraph, NodeId, TrailKind};
use crate::testkit::{gen_random_eulerian, oracle_crossings_ahead_check, oracle_crossings_check, GenSpec};
use crate::tree::TrieFormat;
use crate::Mode;

#[derive(Debug, Parser)]
#[command(name = "eulertrail", version, about = "Enumerate and count Eulerian trails in directed (multi)graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the graph has an Eulerian trail.
    Check(InputArgs),
    /// Print the exact number of Eulerian trails.
    Count {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        counter: Option<Counter>,
        /// Stop enumeration-based counting at this many trails.
        #[arg(long)]
        max_trails: Option<u64>,
        /// Largest total edge count the brute-force counter accepts.
        #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
        cap: u64,
    },
    /// Enumerate trails and print them or their trie.
    Enumerate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        max_trails: Option<u64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Run oracle checks on every decoded trail (slow).
        #[arg(long)]
        validate: bool,
    },
    /// Time enumeration on a generated instance.
    Bench {
        #[arg(long, value_enum, default_value_t = ModeArg::Simple)]
        mode: ModeArg,
        #[arg(long, default_value_t = 5000)]
        gen_n: usize,
        #[arg(long, default_value_t = 6000)]
        gen_cycles: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        max_trails: u64,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Edge-list file, or `-` for standard input.
    pub input: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Simple)]
    pub mode: ModeArg,
    /// Start node name.
    #[arg(long)]
    pub start: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Simple,
    EdgeDistinct,
    NodeDistinct,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Simple => Mode::Simple,
            ModeArg::EdgeDistinct => Mode::EdgeDistinct,
            ModeArg::NodeDistinct => Mode::NodeDistinct,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Counter {
    Best,
    Enumerate,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    TrailsEdges,
    TrailsNodes,
    Trie,
    TrieShared,
    Count,
    Dot,
}

/// Outcome classes mapped to exit codes.
enum Failure {
    /// Exit 1: the graph has no trail, or a validation check failed.
    Negative(String),
    /// Exit 2: bad usage, unreadable or malformed input.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible(_) => Failure::Negative(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let mut out = BufWriter::new(stdout);
    let result = dispatch(cli.command, stdin, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(()), Ok(())) => 0,
        (Err(Failure::Negative(msg)), _) => {
            let _ = writeln!(stderr, "{msg}");
            1
        }
        (Err(Failure::Usage(msg)), _) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        (Ok(()), Err(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

/// Entry point of the `eulertrail` binary.
pub fn main_with_args(args: impl IntoIterator<Item = OsString>) -> i32 {
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(args, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(cmd: Command, stdin: &mut dyn Read, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Check(input) => cmd_check(&input, stdin, out),
        Command::Count {
            input,
            counter,
            max_trails,
            cap,
        } => cmd_count(&input, counter, max_trails, cap, stdin, out),
        Command::Enumerate {
            input,
            max_trails,
            format,
            validate,
        } => cmd_enumerate(&input, max_trails, format, validate, stdin, out),
        Command::Bench {
            mode,
            gen_n,
            gen_cycles,
            seed,
            max_trails,
        } => cmd_bench(mode.into(), gen_n, gen_cycles, seed, max_trails, out),
    }
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String> {
    let mut text = String::new();
    if path == "-" {
        stdin.read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{path}: {e}"))))?;
    }
    Ok(text)
}

fn load(input: &InputArgs, stdin: &mut dyn Read) -> Result<(Multigraph, Option<NodeId>)> {
    let text = read_input(&input.input, stdin)?;
    let g = parse_edge_list(&text, input.mode.into())?;
    let start = input
        .start
        .as_deref()
        .map(|s| g.node_by_name(s).ok_or_else(|| Error::UnknownNode(s.to_string())))
        .transpose()?;
    Ok((g, start))
}

fn cmd_check(input: &InputArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Outcome {
    let (g, start) = load(input, stdin)?;
    let info = check_eulerian(&g, start)?;
    if !info.feasible {
        return Err(Failure::Negative(format!(
            "infeasible: {}",
            info.reason.unwrap_or_default()
        )));
    }
    match info.kind {
        TrailKind::Circuit => writeln!(out, "feasible circuit, start {}", g.name(info.source))?,
        TrailKind::OpenTrail => writeln!(
            out,
            "feasible open trail, start {}, end {}",
            g.name(info.source),
            g.name(info.target)
        )?,
    }
    writeln!(out, "nodes {}, edges {}", g.node_count(), g.m_total())?;
    Ok(())
}

fn cmd_count(
    input: &InputArgs,
    counter: Option<Counter>,
    max_trails: Option<u64>,
    cap: u64,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
) -> Outcome {
    let mode: Mode = input.mode.into();
    let counter = counter.unwrap_or(if mode == Mode::NodeDistinct {
        Counter::Enumerate
    } else {
        Counter::Best
    });
    if counter == Counter::Best && mode == Mode::NodeDistinct {
        return Err(Failure::Usage(
            "--counter best has no node-distinct formula; use enumerate or brute".into(),
        ));
    }
    let (g, start) = load(input, stdin)?;
    let info = check_eulerian(&g, start)?.require()?;
    match counter {
        Counter::Best => {
            let z = if mode == Mode::Simple {
                count_best(&g, &info)?
            } else {
                count_edge_distinct(&g, &info)?
            };
            writeln!(out, "{z}")?;
        }
        Counter::Enumerate => {
            let opts = EnumerateOptions {
                max_trails,
                start,
                validate: false,
            };
            let run = enumerate(&g, mode, &opts)?;
            let flag = if run.cap_reached { " (cap reached)" } else { "" };
            writeln!(out, "{}{flag}", run.leaf_count())?;
        }
        Counter::Brute => {
            let trails = brute_force_trails(&g, info.source, mode, cap)?;
            writeln!(out, "{}", trails.len())?;
        }
    }
    Ok(())
}

fn cmd_enumerate(
    input: &InputArgs,
    max_trails: Option<u64>,
    format: Option<Format>,
    validate: bool,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
) -> Outcome {
    let mode: Mode = input.mode.into();
    let (g, start) = load(input, stdin)?;
    let opts = EnumerateOptions {
        max_trails,
        start,
        validate,
    };
    let run = enumerate(&g, mode, &opts)?;
    let format = format.unwrap_or(if mode == Mode::NodeDistinct {
        Format::TrailsNodes
    } else {
        Format::TrailsEdges
    });
    if validate {
        validate_run(&run, &g)?;
    }
    let tree = &run.tree;
    match format {
        Format::TrailsEdges | Format::TrailsNodes => {
            let mut res = Ok(());
            tree.visit_trails(&g, |t| {
                if res.is_ok() {
                    let line = if format == Format::TrailsEdges {
                        tree.edge_tokens(&g, t)
                    } else {
                        tree.node_names(&g, t)
                    };
                    res = writeln!(out, "{line}");
                }
            });
            res?;
        }
        Format::Trie => tree.emit(TrieFormat::Expanded, &mut IoRef(out))?,
        Format::TrieShared => tree.emit(TrieFormat::Shared, &mut IoRef(out))?,
        Format::Dot => tree.emit(TrieFormat::Dot, &mut IoRef(out))?,
        Format::Count => {
            let flag = if run.cap_reached { " (cap reached)" } else { "" };
            writeln!(out, "{}{flag}", run.leaf_count())?;
        }
    }
    Ok(())
}

/// Adapter so `&mut dyn Write` can be passed where `impl Write` is expected.
struct IoRef<'a>(&'a mut dyn Write);

impl Write for IoRef<'_> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.0.write(buf)
    }
    fn flush(&mut self) -> io::Result<()> {
        self.0.flush()
    }
}

/// Oracle crossing checks on the record walk of every decoded trail, plus
/// the structural checks of a finished run.
fn validate_run(run: &crate::explore::Enumeration, g: &Multigraph) -> Outcome {
    if !run.restored {
        return Err(Failure::Negative("validation: final rewind did not restore the graph".into()));
    }
    if !run.cap_reached && !run.tree.internal_states_branch() {
        return Err(Failure::Negative("validation: a stored state has fewer than two children".into()));
    }
    let nd = run.tree.mode() == Mode::NodeDistinct;
    let mut bad = None;
    run.tree.visit_trails(g, |t| {
        if bad.is_some() {
            return;
        }
        let walk: Vec<EdgeId> = if nd {
            t.windows(2)
                .map(|w| {
                    *g.out_edges(NodeId(w[0]))
                        .iter()
                        .find(|&&e| g.edge(e).head == NodeId(w[1]))
                        .expect("decoded trail follows records")
                })
                .collect()
        } else {
            t.iter().map(|&c| g.copy_owner(c)).collect()
        };
        if !oracle_crossings_check(g, &walk) || !oracle_crossings_ahead_check(g, &walk) {
            bad = Some(run.tree.node_names(g, t));
        }
    });
    match bad {
        Some(t) => Err(Failure::Negative(format!("validation: crossing oracle disagrees on trail {t}"))),
        None => Ok(()),
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn cmd_bench(mode: Mode, n: usize, cycles: usize, seed: u64, max_trails: u64, out: &mut dyn Write) -> Outcome {
    let t0 = Instant::now();
    let spec = if mode == Mode::NodeDistinct {
        GenSpec::multigraph(n, cycles, 4, seed).lengths(3, 30)
    } else {
        GenSpec::simple(n, cycles, seed).lengths(3, 30)
    };
    let g = gen_random_eulerian(&spec)?;
    let text = write_edge_list(&g);
    let gen_time = t0.elapsed();

    let t1 = Instant::now();
    let parsed = parse_edge_list(&text, mode)?;
    let info = check_eulerian(&parsed, None)?.require()?;
    let cmode = if mode == Mode::NodeDistinct {
        CompressionMode::NodeDistinct
    } else {
        CompressionMode::Simple
    };
    let built = CompressedGraph::build(&parsed, &info, cmode);
    let build_time = t1.elapsed();
    drop(built);

    let t2 = Instant::now();
    let opts = EnumerateOptions {
        max_trails: Some(max_trails),
        ..Default::default()
    };
    let run = enumerate(&parsed, mode, &opts)?;
    let enum_time = t2.elapsed();
    let c = run.counters;
    let m = parsed.m_total();
    writeln!(out, "instance: n={} m_total={} seed={seed} mode={}", parsed.node_count(), m, mode.name())?;
    writeln!(out, "generate_ms={:.3}", ms(gen_time))?;
    writeln!(out, "parse_build_ms={:.3}", ms(build_time))?;
    writeln!(out, "enumerate_ms={:.3} leaves={} cap_reached={}", ms(enum_time), c.leaves, run.cap_reached)?;
    writeln!(
        out,
        "walker_steps={} journal_entries={} transitions={} max_entries_per_take={}",
        c.walker_steps, c.journal_entries, c.transitions, c.max_entries_per_take
    )?;
    writeln!(
        out,
        "ratio={:.3}",
        c.work() as f64 / (m + c.leaves) as f64
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], input: &str) -> (i32, String, String) {
        let mut stdin = input.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["eulertrail"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut stdin, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    const TWO: &str = "a b\nb c\nc a\na d\nd e\ne a\n";

    #[test]
    fn check_reports() {
        let (code, out, _) = call(&["check", "-"], "a b\nb c\nc a\n");
        assert_eq!(code, 0);
        assert!(out.starts_with("feasible circuit, start a"));
        let (code, _, err) = call(&["check", "-"], "a b\na c\n");
        assert_eq!(code, 1);
        assert!(err.contains("out-surplus"), "{err}");
        let (code, _, _) = call(&["check", "/nonexistent/graph.txt"], "");
        assert_eq!(code, 2);
    }

    #[test]
    fn counts() {
        assert_eq!(call(&["count", "-"], TWO).1, "2\n");
        assert_eq!(call(&["count", "-", "--counter", "enumerate", "--max-trails", "1"], TWO).1, "1 (cap reached)\n");
        assert_eq!(call(&["count", "-", "--counter", "brute"], TWO).1, "2\n");
        assert_eq!(call(&["count", "-", "--mode", "node-distinct"], "a b 2\nb a 1\n").1, "1\n");
        assert_eq!(call(&["count", "-", "--mode", "edge-distinct"], "a b 2\nb a 1\n").1, "2\n");
        assert_eq!(call(&["count", "-", "--mode", "node-distinct", "--counter", "best"], "a b\n").0, 2);
    }

    #[test]
    fn enumerate_formats() {
        let (code, out, _) = call(&["enumerate", "-", "--format", "trails-nodes"], TWO);
        assert_eq!(code, 0);
        assert_eq!(out, "a b c a d e a\na d e a b c a\n");
        let (_, out, _) = call(&["enumerate", "-", "--format", "trie-shared"], "a b\nb c\nc a\n");
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.iter().filter(|l| l.starts_with('L') || l.starts_with('C')).count(), 5);
        assert_eq!(lines.iter().filter(|l| l.starts_with('T')).count(), 1);
        let (_, out, _) = call(&["enumerate", "-", "--mode", "edge-distinct"], "a b 2\nb a 1\n");
        assert_eq!(out, "e0 e2 e1\ne1 e2 e0\n");
        let (code, _, _) = call(&["enumerate", "-", "--validate"], TWO);
        assert_eq!(code, 0);
        let (code, _, _) = call(&["enumerate", "-", "--start", "zz"], TWO);
        assert_eq!(code, 2);
    }
}
