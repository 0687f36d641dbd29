//! Command implementations for the `fs-lollipop` binary.
//!
//! Exit codes: 0 success or connected, 10 disconnected (or unreachable),
//! 11 campaign violation, 2 usage or input error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::fs::{apply_moves, Bijection, FsSpace, DEFAULT_COMPONENT_CAP, MAX_COMPONENT_CAP};
use crate::graph::{
    make_complete, make_cycle, make_dandelion, make_lollipop, make_path, make_spider, make_star, parse_graph6,
    write_graph6, Graph,
};
use crate::lab::{
    run_corollary_campaign, run_k5_bounds_campaign, run_main_verification, run_problem1_scan, run_spider_subsumption,
    Caps, Mode, Report, RunOptions, ORACLE_MAX_ORDER,
};
use crate::theory::{build_certificate, find_disconnected_k_subset, is_special};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DISCONNECTED: i32 = 10;
pub const EXIT_VIOLATION: i32 = 11;

/// Environment variable overriding the default component cap.
pub const CAP_ENV: &str = "FS_LOLLIPOP_CAP";

#[derive(Debug, Parser)]
#[command(name = "fs-lollipop", version, about = "Connectedness of friends-and-strangers graphs of lollipops")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the full report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Wall-clock budget; the report is marked truncated when exceeded.
    #[arg(long)]
    pub budget_ms: Option<u64>,
    /// Record phase timings in the report (makes reports non-reproducible).
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub cap: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a family graph (e.g. lollipop:2,3) as graph6.
    Gen {
        spec: String,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Decide connectedness of FS(Lollipop_{n-k,k}, Y) from Y alone.
    Decide {
        y: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Build FS(X, Y) explicitly and count its components.
    Oracle {
        x: String,
        y: String,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Emit a special / non-special certificate pair, or "none".
    Certify {
        y: String,
        #[arg(long)]
        k: usize,
    },
    /// Shortest swap sequence between two configurations.
    Reach {
        x: String,
        y: String,
        src: String,
        dst: String,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Exhaustive subset-criterion vs oracle check at order n.
    Verify {
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a named campaign: main, corollary, k5bounds, problem1, spider.
    Campaign {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        /// (n,k) pairs for problem1, e.g. `--pairs 4,4 --pairs 5,3` or `4,4;5,3`.
        #[arg(long)]
        pairs: Vec<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr,
        }
    }
}

type CmdResult = Result<Outcome, String>;

/// Parse a graph argument: a family spec `name:params` or a graph6 string.
pub fn parse_graph_arg(arg: &str) -> Result<Graph, String> {
    let Some((name, params)) = arg.split_once(':') else {
        return parse_graph6(arg).map_err(|e| e.to_string());
    };
    let nums: Vec<usize> = params
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<usize>().map_err(|_| format!("bad number {p:?} in {arg:?}")))
        .collect::<Result<_, _>>()?;
    let one = || match nums.as_slice() {
        [n] => Ok(*n),
        _ => Err(format!("{name} takes one parameter, got {params:?}")),
    };
    let two = || match nums.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(format!("{name} takes two parameters, got {params:?}")),
    };
    let g = match name {
        "path" => make_path(one()?),
        "complete" => make_complete(one()?),
        "cycle" => make_cycle(one()?),
        "star" => make_star(one()?),
        "empty" => Graph::empty(one()?),
        "lollipop" => {
            let (p, k) = two()?;
            make_lollipop(p, k)
        }
        "dandelion" => {
            let (p, k) = two()?;
            make_dandelion(p, k)
        }
        "spider" => make_spider(&nums),
        other => return Err(format!("unknown graph family {other:?}")),
    };
    g.map_err(|e| e.to_string())
}

/// `"2,0,1"` or the compact `"201"` (orders up to 10).
pub fn parse_bijection(arg: &str) -> Result<Bijection, String> {
    let map: Vec<usize> = if arg.contains(',') {
        arg.split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| format!("bad position {p:?}")))
            .collect::<Result<_, _>>()?
    } else {
        arg.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| format!("bad digit {c:?}")))
            .collect::<Result<_, _>>()?
    };
    Bijection::new(map).map_err(|e| e.to_string())
}

fn parse_pairs(raw: &[String]) -> Result<Vec<(usize, usize)>, String> {
    let mut out = Vec::new();
    for chunk in raw.iter().flat_map(|r| r.split(';')).filter(|c| !c.trim().is_empty()) {
        let (n, k) = chunk
            .split_once(',')
            .ok_or_else(|| format!("pair {chunk:?} is not of the form n,k"))?;
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad pair {chunk:?}"));
        out.push((parse(n)?, parse(k)?));
    }
    Ok(out)
}

/// `--cap` beats `FS_LOLLIPOP_CAP`, which beats the default.
fn resolve_cap(flag: Option<usize>) -> Result<usize, String> {
    let cap = match flag {
        Some(c) => c,
        None => match std::env::var(CAP_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| format!("{CAP_ENV}={v:?} is not a number"))?,
            Err(_) => DEFAULT_COMPONENT_CAP,
        },
    };
    if cap > MAX_COMPONENT_CAP {
        return Err(format!("cap {cap} exceeds the maximum {MAX_COMPONENT_CAP}"));
    }
    Ok(cap)
}

fn set_str(set: crate::graph::VertexSet) -> String {
    let parts: Vec<String> = set.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn cmd_gen(spec: &str, format: Format) -> CmdResult {
    let g = parse_graph_arg(spec)?;
    let out = match format {
        Format::Json => {
            json!({ "graph6": write_graph6(&g), "order": g.order(), "edges": g.edges() }).to_string() + "\n"
        }
        _ => write_graph6(&g) + "\n",
    };
    Ok(Outcome::ok(EXIT_OK, out))
}

pub fn cmd_decide(y: &str, k: usize, format: Format) -> CmdResult {
    let y = parse_graph_arg(y)?;
    let witness = find_disconnected_k_subset(&y, k).map_err(|e| e.to_string())?;
    let code = if witness.is_some() { EXIT_DISCONNECTED } else { EXIT_OK };
    let out = match format {
        Format::Json => {
            json!({
                "n": y.order(),
                "k": k,
                "connected": witness.is_none(),
                "witness": witness,
            })
            .to_string()
                + "\n"
        }
        _ => match &witness {
            None => "connected\n".to_string(),
            Some(w) => format!(
                "disconnected\nwitness subset={} A={} B={}\n",
                set_str(w.subset),
                set_str(w.part_a),
                set_str(w.part_b)
            ),
        },
    };
    Ok(Outcome::ok(code, out))
}

pub fn cmd_oracle(x: &str, y: &str, cap: Option<usize>, format: Format) -> CmdResult {
    let (x, y) = (parse_graph_arg(x)?, parse_graph_arg(y)?);
    let cap = resolve_cap(cap)?;
    let comps = FsSpace::new(&x, cap)
        .and_then(|s| s.components(&y))
        .map_err(|e| e.to_string())?;
    let connected = comps.is_connected();
    let out = match format {
        Format::Json => json!({
            "n": x.order(),
            "connected": connected,
            "components": comps.component_count(),
            "sizes": comps.component_sizes().into_iter().map(|(_, s)| s).collect::<Vec<_>>(),
        })
        .to_string()
            + "\n",
        _ => format!(
            "{}\ncomponents {}\n",
            if connected { "connected" } else { "disconnected" },
            comps.component_count()
        ),
    };
    Ok(Outcome::ok(if connected { EXIT_OK } else { EXIT_DISCONNECTED }, out))
}

pub fn cmd_certify(y: &str, k: usize) -> CmdResult {
    let y = parse_graph_arg(y)?;
    let Some(w) = find_disconnected_k_subset(&y, k).map_err(|e| e.to_string())? else {
        return Ok(Outcome::ok(EXIT_OK, "none\n".into()));
    };
    let cert = build_certificate(&y, k, &w).map_err(|e| e.to_string())?;
    let n = y.order();
    let classes = (
        is_special(&cert.special, n, k, &w).map_err(|e| e.to_string())?,
        is_special(&cert.nonspecial, n, k, &w).map_err(|e| e.to_string())?,
    );
    if classes != (true, false) {
        return Err(format!("internal error: certificate classified as {classes:?}"));
    }
    let out = serde_json::to_string_pretty(&cert).map_err(|e| e.to_string())? + "\n";
    Ok(Outcome::ok(EXIT_DISCONNECTED, out))
}

pub fn cmd_reach(x: &str, y: &str, src: &str, dst: &str, cap: Option<usize>, format: Format) -> CmdResult {
    let (x, y) = (parse_graph_arg(x)?, parse_graph_arg(y)?);
    let (src, dst) = (parse_bijection(src)?, parse_bijection(dst)?);
    let cap = resolve_cap(cap)?;
    let moves = FsSpace::new(&x, cap)
        .and_then(|s| s.reach(&y, &src, &dst))
        .map_err(|e| e.to_string())?;
    let Some(moves) = moves else {
        return Ok(Outcome::ok(EXIT_DISCONNECTED, "unreachable\n".into()));
    };
    let end = apply_moves(&x, &y, &src, &moves).map_err(|e| format!("replay failed: {e}"))?;
    if end != dst {
        return Err("replay did not reach the target".into());
    }
    let out = match format {
        Format::Json => serde_json::to_string(&moves).map_err(|e| e.to_string())? + "\n",
        _ => {
            let mut s = format!("{} moves\n", moves.len());
            for m in &moves {
                let _ = writeln!(s, "swap {} {} persons {} {}", m.a, m.b, m.persons.0, m.persons.1);
            }
            s
        }
    };
    Ok(Outcome::ok(EXIT_OK, out))
}

fn run_options(output: &OutputArgs) -> Result<RunOptions, String> {
    Ok(RunOptions {
        caps: Caps {
            component_cap: resolve_cap(output.cap)?,
            time_budget_ms: output.budget_ms,
        },
        record_timing: output.timing,
    })
}

fn write_report(report: &Report, output: &OutputArgs) -> Result<Option<PathBuf>, String> {
    let Some(path) = &output.out else {
        return Ok(None);
    };
    match output.format {
        Format::Csv => {
            let file = fs::File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
            report.write_csv(file).map_err(|e| e.to_string())?;
        }
        Format::Plain => fs::write(path, report.summary_line() + "\n").map_err(|e| format!("{}: {e}", path.display()))?,
        Format::Json => {
            let text = report.to_json().map_err(|e| e.to_string())?;
            fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
        }
    }
    if report.passed() {
        return Ok(None);
    }
    let repro = reproducer_path(path);
    let text = serde_json::to_string_pretty(&report.counterexamples).map_err(|e| e.to_string())?;
    fs::write(&repro, text + "\n").map_err(|e| format!("{}: {e}", repro.display()))?;
    Ok(Some(repro))
}

fn reproducer_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".reproducers.json");
    out.with_file_name(name)
}

fn report_outcome(report: &Report, output: &OutputArgs, headline: String) -> CmdResult {
    let repro = write_report(report, output)?;
    let mut stdout = headline;
    for (key, value) in &report.summary.counters {
        let _ = writeln!(stdout, "{key} {value}");
    }
    if report.truncated {
        stdout.push_str("truncated\n");
    }
    let mut stderr = String::new();
    for c in &report.counterexamples {
        let _ = writeln!(
            stderr,
            "counterexample graph6={} k={} x={} reason={}",
            c.graph6.as_deref().unwrap_or("-"),
            c.k,
            c.x.as_deref().unwrap_or("-"),
            c.reason
        );
    }
    if let Some(p) = repro {
        let _ = writeln!(stderr, "reproducers written to {}", p.display());
    }
    Ok(Outcome {
        code: if report.passed() { EXIT_OK } else { EXIT_VIOLATION },
        stdout,
        stderr,
    })
}

pub fn cmd_verify(n: usize, output: &OutputArgs) -> CmdResult {
    let report = run_main_verification(n, &run_options(output)?).map_err(|e| e.to_string())?;
    let s = &report.summary;
    let headline = format!("{} comparisons, {} disagreements\n", s.comparisons, s.disagreements);
    report_outcome(&report, output, headline)
}

pub fn cmd_campaign(
    name: &str,
    n: Option<usize>,
    pairs: &[String],
    samples: Option<usize>,
    seed: u64,
    output: &OutputArgs,
) -> CmdResult {
    let opts = run_options(output)?;
    let need_n = || n.ok_or_else(|| format!("campaign {name} needs --n"));
    let sampled_or_exhaustive = |n: usize| match samples {
        Some(count) => Mode::Sampled { count, seed },
        None if n <= ORACLE_MAX_ORDER => Mode::Exhaustive,
        None => Mode::Sampled { count: 1000, seed },
    };
    let report = match name {
        "main" => run_main_verification(need_n()?, &opts),
        "corollary" => {
            let n = need_n()?;
            run_corollary_campaign(n, sampled_or_exhaustive(n), &opts)
        }
        "k5bounds" => run_k5_bounds_campaign(need_n()?, samples.unwrap_or(50), seed, &opts),
        "problem1" => {
            let pairs = parse_pairs(pairs)?;
            let mode = match samples {
                Some(count) => Mode::Sampled { count, seed },
                None => Mode::Exhaustive,
            };
            run_problem1_scan(&pairs, mode, &opts)
        }
        "spider" => {
            let n = need_n()?;
            run_spider_subsumption(n, sampled_or_exhaustive(n), &opts)
        }
        other => return Err(format!("unknown campaign {other:?} (main, corollary, k5bounds, problem1, spider)")),
    }
    .map_err(|e| e.to_string())?;
    report_outcome(&report, output, report.summary_line() + "\n")
}

pub fn execute(config: &CliConfig) -> Outcome {
    let result = match &config.command {
        Command::Gen { spec, format } => cmd_gen(spec, *format),
        Command::Decide { y, k, format } => cmd_decide(y, *k, *format),
        Command::Oracle { x, y, cap, format } => cmd_oracle(x, y, *cap, *format),
        Command::Certify { y, k } => cmd_certify(y, *k),
        Command::Reach {
            x,
            y,
            src,
            dst,
            cap,
            format,
        } => cmd_reach(x, y, src, dst, *cap, *format),
        Command::Verify { n, output } => cmd_verify(*n, output),
        Command::Campaign {
            name,
            n,
            pairs,
            samples,
            seed,
            output,
        } => cmd_campaign(name, *n, pairs, *samples, *seed, output),
    };
    result.unwrap_or_else(|e| Outcome::usage(format!("error: {e}")))
}

/// Parse `args` (including the program name) and run.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match CliConfig::try_parse_from(args) {
        Ok(config) => execute(&config),
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                Outcome::usage(rendered)
            } else {
                Outcome::ok(EXIT_OK, rendered)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("fs-lollipop").chain(args.iter().copied()))
    }

    #[test]
    fn family_specs() {
        assert_eq!(parse_graph_arg("lollipop:2,3").unwrap(), make_lollipop(2, 3).unwrap());
        assert_eq!(parse_graph_arg("spider:2,1,1").unwrap(), make_spider(&[2, 1, 1]).unwrap());
        assert_eq!(parse_graph_arg("D~{").unwrap(), make_complete(5).unwrap());
        assert!(parse_graph_arg("lollipop:2").is_err());
        assert!(parse_graph_arg("lollipop:3,1").is_err());
        assert!(parse_graph_arg("wheel:5").is_err());
        assert!(parse_graph_arg("path:x").is_err());
    }

    #[test]
    fn bijection_args() {
        assert_eq!(parse_bijection("2,0,1").unwrap().to_vec(), vec![2, 0, 1]);
        assert_eq!(parse_bijection("201").unwrap().to_vec(), vec![2, 0, 1]);
        assert!(parse_bijection("22").is_err());
    }

    #[test]
    fn pairs_syntax() {
        let raw = vec!["4,4;5,3".to_string(), "6,3".to_string()];
        assert_eq!(parse_pairs(&raw).unwrap(), vec![(4, 4), (5, 3), (6, 3)]);
        assert!(parse_pairs(&["4".to_string()]).is_err());
    }

    #[test]
    fn decide_exit_codes() {
        let out = run_args(&["decide", "complete:5", "--k", "3"]);
        assert_eq!((out.code, out.stdout.as_str()), (EXIT_OK, "connected\n"));
        let y = write_graph6(&crate::theory::Pattern::K3P2.graph());
        let out = run_args(&["decide", &y, "--k", "5"]);
        assert_eq!(out.code, EXIT_DISCONNECTED);
        assert_eq!(out.stdout, "disconnected\nwitness subset=[0,1,2,3,4] A=[0,1,2] B=[3,4]\n");
        assert_eq!(run_args(&["decide", "complete:5", "--k", "1"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["decide", "complete:5"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["bogus"]).code, EXIT_USAGE);
    }

    #[test]
    fn oracle_counts() {
        let out = run_args(&["oracle", "path:4", "complete:4"]);
        assert_eq!((out.code, out.stdout.as_str()), (EXIT_OK, "connected\ncomponents 1\n"));
        let out = run_args(&["oracle", "complete:4", "path:4"]);
        assert_eq!(out.code, EXIT_OK);
        let out = run_args(&["oracle", "path:3", "path:3"]);
        assert_eq!((out.code, out.stdout.as_str()), (EXIT_DISCONNECTED, "disconnected\ncomponents 2\n"));
        assert_eq!(run_args(&["oracle", "path:10", "path:10"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["oracle", "path:4", "path:4", "--cap", "11"]).code, EXIT_USAGE);
    }

    #[test]
    fn certify_output() {
        let y = write_graph6(&crate::theory::Pattern::K3P2.graph());
        let out = run_args(&["certify", &y, "--k", "5"]);
        assert_eq!(out.code, EXIT_DISCONNECTED);
        let cert: crate::theory::CertificatePair = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(cert.special.to_vec(), vec![0, 1, 2, 3, 4]);
        assert_eq!(cert.nonspecial.to_vec(), vec![3, 0, 1, 2, 4]);
        let out = run_args(&["certify", "complete:5", "--k", "3"]);
        assert_eq!((out.code, out.stdout.as_str()), (EXIT_OK, "none\n"));
    }

    #[test]
    fn reach_output() {
        let out = run_args(&["reach", "path:2", "complete:2", "01", "01"]);
        assert_eq!((out.code, out.stdout.as_str()), (EXIT_OK, "0 moves\n"));
        let out = run_args(&["reach", "path:2", "complete:2", "01", "10", "--format", "json"]);
        assert_eq!(out.stdout, "[{\"a\":0,\"b\":1,\"persons\":[0,1]}]\n");
        let out = run_args(&["reach", "path:3", "path:3", "0,1,2", "2,1,0"]);
        assert_eq!((out.code, out.stdout.as_str()), (EXIT_DISCONNECTED, "unreachable\n"));
        assert_eq!(run_args(&["reach", "path:3", "path:3", "0,1,1", "2,1,0"]).code, EXIT_USAGE);
    }

    #[test]
    fn verify_summary() {
        let out = run_args(&["verify", "4"]);
        assert_eq!((out.code, out.stdout.as_str()), (EXIT_OK, "192 comparisons, 0 disagreements\n"));
    }

    #[test]
    fn gen_prints_graph6() {
        let out = run_args(&["gen", "path:4"]);
        assert_eq!(out.stdout, "Ch\n");
    }
}
