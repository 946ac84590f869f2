//! `pantsrigid`: build rigid sets, check the lemmas about them, run the
//! embedding search and convert graph files.
//!
//! Exit codes: 0 pass, 1 violation or resource failure, 2 usage or
//! malformed input.

mod config;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pantsrigid::pants::{thick_graph, PantsSubgraph};
use pantsrigid::rigidset::{build_x, build_x5, build_z, core_pentagon, five_holed_multicurves, gamma};
use pantsrigid::verify::{check_restriction_in, check_z_graph, rigidity_search, run_suite, SearchParams, SuiteReport, SUITES};

#[derive(Parser)]
#[command(name = "pantsrigid", version, about = "Finite rigid sets in pants graphs of punctured spheres")]
struct Cli {
    /// Settings file with key = value lines; flags win over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build gamma, Z, X5, X or thick and write it as JSON or DOT.
    Build(BuildArgs),
    /// Run a suite of lemma checks, optionally against a graph file.
    Verify(VerifyArgs),
    /// Enumerate embeddings of X5 into a ball and certify them.
    Search(SearchArgs),
    /// Re-emit a graph file as canonical JSON or DOT.
    Export(ExportArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    n: Option<usize>,
    /// gamma, Z, X5, X or thick.
    #[arg(long)]
    what: Option<String>,
    /// json or dot.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    max_vertices: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    n: Option<usize>,
    /// farey, Z, thick, sym, restriction or all.
    #[arg(long)]
    suite: Option<String>,
    /// Graph file to check instead of a freshly built one (Z and
    /// restriction suites).
    input: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    twist_bound: Option<usize>,
    #[arg(long)]
    certify_depth: Option<usize>,
    #[arg(long)]
    max_vertices: Option<usize>,
}

#[derive(Args)]
struct ExportArgs {
    input: PathBuf,
    /// json or dot.
    #[arg(long)]
    format: Option<String>,
}

enum Fail {
    Usage(String),
    Failed(String),
}

type Res<T> = Result<T, Fail>;

/// Flag, then settings file, then default.
struct Settings {
    file: BTreeMap<String, String>,
}

impl Settings {
    fn get<T: FromStr>(&self, key: &str, flag: Option<T>, default: T) -> Res<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.file.get(key) {
            Some(s) => s.parse().map_err(|_| Fail::Usage(format!("bad value for {key}: {s}"))),
            None => Ok(default),
        }
    }

    fn positive(&self, key: &str, flag: Option<usize>, default: usize) -> Res<usize> {
        let v = self.get(key, flag, default)?;
        if v == 0 {
            return Err(Fail::Usage(format!("{key} must be positive")));
        }
        Ok(v)
    }

    fn n(&self, flag: Option<usize>) -> Res<usize> {
        let n = self.get("n", flag, 5)?;
        if n < 5 {
            return Err(Fail::Usage(format!("n must be at least 5, got {n}")));
        }
        Ok(n)
    }

    fn format(&self, flag: Option<String>) -> Res<String> {
        let f = self.get("format", flag, "json".to_string())?;
        if f != "json" && f != "dot" {
            return Err(Fail::Usage(format!("format must be json or dot, got {f}")));
        }
        Ok(f)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Res<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail::Failed(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| Fail::Failed(e.to_string()))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn graph_text(g: &PantsSubgraph, format: &str) -> String {
    if format == "dot" {
        g.to_dot()
    } else {
        g.to_json_string()
    }
}

fn catalan(k: usize) -> usize {
    let mut c: usize = 1;
    for i in 0..k {
        c = c.saturating_mul(2 * (2 * i + 1)) / (i + 2);
    }
    c
}

fn build(s: &Settings, a: BuildArgs, out: Option<&Path>) -> Res<i32> {
    let what = s.get("what", a.what, String::new())?;
    let format = s.format(a.format)?;
    let max_vertices = s.positive("max-vertices", a.max_vertices, 200_000)?;
    let n = s.n(a.n)?;
    let fixed_five = |w: &str| -> Res<()> {
        if n != 5 {
            return Err(Fail::Usage(format!("{w} lives in S_0,5; drop --n or pass --n 5")));
        }
        Ok(())
    };
    let failed = |e: String| Fail::Failed(e);
    let g = match what.as_str() {
        "gamma" => {
            if format == "dot" {
                return Err(Fail::Usage("gamma is a curve list, not a graph; use --format json".into()));
            }
            let g = gamma(n).map_err(|e| failed(e.to_string()))?;
            let curves: Vec<Value> = g
                .chords
                .iter()
                .zip(&g.curves)
                .map(|(ch, c)| json!({"chord": [ch.i, ch.j], "chain": ch.is_chain(n), "curve": c.to_string(), "pairs": c.pairs()}))
                .collect();
            emit(out, &pretty(&json!({"n": n, "count": curves.len(), "curves": curves})))?;
            return Ok(0);
        }
        "Z" => {
            if catalan(n - 2) > max_vertices {
                return Err(failed(format!("Z for n = {n} has {} vertices, over --max-vertices {max_vertices}", catalan(n - 2))));
            }
            build_z(n).map_err(|e| failed(e.to_string()))?
        }
        "X5" => {
            fixed_five("X5")?;
            build_x5().map_err(|e| failed(e.to_string()))?
        }
        "X" => build_x(n, 7).map_err(|e| failed(e.to_string()))?,
        "thick" => {
            let h = five_holed_multicurves(n).map_err(|e| failed(e.to_string()))?.remove(0);
            let mut core = PantsSubgraph::new(n);
            let z = core_pentagon().map(|v| h.apply_vertex(&v));
            for i in 0..5 {
                core.add_vertex_edge(&z[i], &z[(i + 1) % 5]).map_err(|e| failed(e.to_string()))?;
            }
            thick_graph(&core).map_err(|e| failed(e.to_string()))?
        }
        "" => return Err(Fail::Usage("build needs --what (gamma, Z, X5, X or thick)".into())),
        w => return Err(Fail::Usage(format!("unknown --what {w}; expected gamma, Z, X5, X or thick"))),
    };
    if g.vertex_count() > max_vertices {
        return Err(failed(format!("{} vertices, over --max-vertices {max_vertices}", g.vertex_count())));
    }
    emit(out, &graph_text(&g, &format))?;
    Ok(0)
}

/// Reads a graph file. Broken JSON is a usage error; JSON that parses but
/// describes an invalid graph is returned as Err(reason) for reporting.
fn read_graph(path: &Path) -> Res<Result<PantsSubgraph, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    Ok(PantsSubgraph::from_json(&v).map_err(|e| e.to_string()))
}

fn verify(s: &Settings, a: VerifyArgs, out: Option<&Path>) -> Res<i32> {
    let suite = s.get("suite", a.suite, "all".to_string())?;
    if !SUITES.contains(&suite.as_str()) {
        return Err(Fail::Usage(format!("unknown suite {suite}; expected one of {}", SUITES.join(", "))));
    }
    let report = match a.input {
        None => {
            let n = s.n(a.n)?;
            if suite == "Z" && n > 8 {
                return Err(Fail::Failed(format!("Z checks run up to n = 8, got {n}")));
            }
            run_suite(&suite, n, false).map_err(Fail::Usage)?
        }
        Some(path) => {
            let lemma = match suite.as_str() {
                "Z" => "Z",
                "restriction" => "restriction",
                _ => return Err(Fail::Usage("an input graph can only be checked with --suite Z or --suite restriction".into())),
            };
            let r = match read_graph(&path)? {
                Ok(g) if lemma == "Z" => check_z_graph(g.n(), &g),
                Ok(g) if (6..=7).contains(&g.n()) => check_restriction_in(g.n(), &g),
                Ok(g) => return Err(Fail::Usage(format!("restriction checks need n = 6 or 7, file has n = {}", g.n()))),
                Err(reason) => serde_json::from_value(json!({
                    "lemma": "graph-file", "status": "violated", "witness": reason, "details": null,
                }))
                .expect("report"),
            };
            SuiteReport { suite: suite.clone(), params: json!({"input": path.display().to_string()}), reports: vec![r] }
        }
    };
    emit(out, &pretty(&report.to_json()))?;
    Ok(report.exit_code())
}

fn search(s: &Settings, a: SearchArgs, out: Option<&Path>) -> Res<i32> {
    let d = SearchParams::default();
    let p = SearchParams {
        n: s.n(a.n)?,
        radius: s.positive("radius", a.radius, d.radius)?,
        twist_bound: s.positive("twist-bound", a.twist_bound, d.twist_bound)?,
        certify_depth: s.positive("certify-depth", a.certify_depth, d.certify_depth)?,
        max_vertices: s.positive("max-vertices", a.max_vertices, d.max_vertices)?,
        max_maps: d.max_maps,
    };
    if p.n > 6 {
        return Err(Fail::Usage(format!("search supports n = 5 or 6, got {}", p.n)));
    }
    let r = rigidity_search(&p).map_err(Fail::Failed)?;
    let mut v = serde_json::to_value(&r).expect("report");
    v["summary"] = json!({
        "found": r.found, "certified": r.certified, "uncertified": r.uncertified,
        "falsified": r.falsified, "partial": r.partial,
    });
    v["lemma"] = serde_json::to_value(r.lemma_report()).expect("report");
    emit(out, &pretty(&v))?;
    Ok(i32::from(r.falsified > 0 || r.partial))
}

fn export(s: &Settings, a: ExportArgs, out: Option<&Path>) -> Res<i32> {
    let format = s.format(a.format)?;
    let g = read_graph(&a.input)?.map_err(|e| Fail::Usage(format!("{}: {e}", a.input.display())))?;
    emit(out, &graph_text(&g, &format))?;
    Ok(0)
}

fn run(cli: Cli) -> Res<i32> {
    let file = match &cli.config {
        Some(p) => config::load(p).map_err(Fail::Usage)?,
        None => BTreeMap::new(),
    };
    let s = Settings { file };
    let threads = s.get("threads", cli.threads, 0)?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| Fail::Failed(e.to_string()))?;
    }
    let out: Option<PathBuf> = match cli.out {
        Some(p) => Some(p),
        None => s.file.get("out").map(PathBuf::from),
    };
    let out = out.as_deref();
    match cli.cmd {
        Cmd::Build(a) => build(&s, a, out),
        Cmd::Verify(a) => verify(&s, a, out),
        Cmd::Search(a) => search(&s, a, out),
        Cmd::Export(a) => export(&s, a, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Failed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
