//! Command-line front end.
//!
//! Exit status: 0 on success, 2 when a verification fails or a conjecture
//! check finds a counterexample (the report with its witnesses goes to
//! stdout), 1 on usage, input or resource errors (diagnostics on stderr).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use crate::census::{
    split_census, tree_split, verify_suite, CensusError, CensusOptions, Models, Suite, SuiteParams,
};
use crate::hypergeom::{regular_subdivision, Hypersimplex};
use crate::tableaux::Tableau;
use crate::webtrop::{CacheEvent, WebCache, WebModel, WeightVector, DEFAULT_MAX_MONOMIALS};

#[derive(Parser, Debug)]
#[command(name = "positroidal", version, about = "Tableaux, tropical Plücker weights and positroidal subdivisions")]
#[command(args_override_self = true)]
struct Cli {
    /// key=value file supplying defaults for long flags; flags given on the
    /// command line win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Web-model cache directory (default: $POSITROIDAL_CACHE_DIR or ~/.cache/positroidal)
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Do not read or write the on-disk web-model cache
    #[arg(long, global = true)]
    no_cache: bool,
    /// Monomial budget for expanding web-matrix minors
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_MONOMIALS)]
    max_monomials: u64,
    /// Write the result here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Output format (csv is available for census and verify)
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include wall-clock timings in reports (makes output nondeterministic)
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weight vector wt_T of a tableau, in lexicographic subset order
    Wt(TableauArgs),
    /// Maximal cells of the regular subdivision induced by a tableau or weight
    Subdivide(SourceArgs),
    /// Classification record of the induced subdivision
    Classify(SourceArgs),
    /// Split census over all one-column tableaux of Δ(k,n)
    Census(CensusArgs),
    /// Run a named verification suite
    Verify(VerifyArgs),
    /// Leaf bipartition and DOT tree of the split labelled by {i,j}
    Tree(TreeArgs),
    /// Inspect or populate the web-model cache
    Cache(CacheArgs),
}

#[derive(Args, Debug)]
struct Shape {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Args, Debug)]
struct TableauArgs {
    #[command(flatten)]
    shape: Shape,
    /// Rows top to bottom separated by ';', entries by ','
    #[arg(long)]
    tableau: String,
}

#[derive(Args, Debug)]
struct SourceArgs {
    #[command(flatten)]
    shape: Shape,
    #[arg(long, conflicts_with = "weight", required_unless_present = "weight")]
    tableau: Option<String>,
    /// JSON array of numbers or "p/q" strings, inline or as a file path
    #[arg(long)]
    weight: Option<String>,
    /// Include per-cell certificates and facets
    #[arg(long)]
    detailed: bool,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[command(flatten)]
    shape: Shape,
    /// Budget on the number of one-column sources C(n,k)
    #[arg(long, default_value_t = 70)]
    max_sources: usize,
    /// Skip the pairwise split compatibility LPs
    #[arg(long)]
    no_compatibility: bool,
    /// Skip the independent certification pass
    #[arg(long)]
    no_certify: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// splits-2n, gr38-noncoarsest, additivity, positroidal-random, fixtures or all
    #[arg(long)]
    suite: String,
    /// Values of n for splits-2n, comma separated
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 1729)]
    seed: u64,
    /// Largest n at which the brute-force edge oracle runs
    #[arg(long, default_value_t = 6)]
    edge_max_n: usize,
    #[arg(long)]
    no_certify: bool,
}

#[derive(Args, Debug)]
struct TreeArgs {
    #[arg(long)]
    n: usize,
    /// The pair i,j
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pair: Vec<usize>,
    /// Write the DOT rendering here
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CacheArgs {
    #[arg(value_enum)]
    action: CacheAction,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CacheAction {
    Status,
    Clear,
    Warm,
}

/// Failure modes of a command, mapped to exit statuses.
enum Failure {
    Usage(String),
    /// A report that did not pass, already rendered.
    Verdict,
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Usage(e.to_string())
            }
        }
    )*};
}

usage_from!(
    crate::tableaux::TableauError,
    crate::webtrop::WebError,
    crate::hypergeom::GeomError,
    CensusError
);

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Expands `--config FILE` into flags that are not already present.
fn apply_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let pos = argv.iter().position(|a| a == "--config" || a.starts_with("--config="));
    let Some(pos) = pos else {
        return Ok(argv);
    };
    let path = if argv[pos] == "--config" {
        argv.get(pos + 1).cloned().ok_or("--config needs a file")?
    } else {
        argv[pos]["--config=".len()..].to_string()
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    // insert after the subcommand so command-line flags (later) win
    let sub = argv
        .iter()
        .enumerate()
        .skip(1)
        .find(|(i, a)| {
            !a.starts_with('-') && !(*i > 0 && (argv[i - 1] == "--config" || takes_value(&argv[i - 1])))
        })
        .map(|(i, _)| i);
    let mut injected = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected key=value", lineno + 1))?;
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        let flag = format!("--{key}");
        if argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}="))) {
            continue;
        }
        match value {
            "true" => injected.push(flag),
            "false" => {}
            v => {
                injected.push(flag);
                injected.push(v.to_string());
            }
        }
    }
    let mut out = argv.clone();
    let at = sub.map_or(out.len(), |i| i + 1);
    out.splice(at..at, injected);
    Ok(out)
}

fn takes_value(flag: &str) -> bool {
    matches!(flag, "--cache-dir" | "--max-monomials" | "--output" | "--format")
}

/// Runs the command line; returns the exit status.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let argv = match apply_config(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let matches = match Cli::command().try_get_matches_from(&argv) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return 1;
        }
    };
    let mut io = Io { out, err };
    match execute(&cli, &mut io) {
        Ok(()) => 0,
        Err(Failure::Verdict) => 2,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            1
        }
    }
}

fn cache_of(cli: &Cli) -> WebCache {
    WebCache::new(cli.cache_dir.clone().unwrap_or_else(WebCache::default_dir))
}

fn models_of(cli: &Cli) -> Models {
    if cli.no_cache {
        Models::in_memory(cli.max_monomials)
    } else {
        Models::with_cache(cache_of(cli), cli.max_monomials)
    }
}

fn report_events(models: &Models, io: &mut Io) {
    for (k, n, event) in models.take_events() {
        if let CacheEvent::Invalidated { found_version } = event {
            let _ = writeln!(
                io.err,
                "notice: cached web model for (k,n)=({k},{n}) had format version {found_version}; rebuilt"
            );
        }
    }
}

fn emit(cli: &Cli, io: &mut Io, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => write_file(path, text),
        None => {
            let nl = if text.ends_with('\n') { "" } else { "\n" };
            match write!(io.out, "{text}{nl}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Usage(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    fs::write(path, body).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn require_json(cli: &Cli, what: &str) -> Result<(), Failure> {
    if cli.format == Format::Csv {
        return Err(Failure::Usage(format!("{what} output is JSON only")));
    }
    Ok(())
}

fn read_weight(k: usize, n: usize, arg: &str) -> Result<WeightVector, Failure> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read weight file {arg}: {e}")))?
    };
    Ok(WeightVector::from_json(k, n, &text)?)
}

fn source_weight(cli: &Cli, io: &mut Io, args: &SourceArgs) -> Result<WeightVector, Failure> {
    let (k, n) = (args.shape.k, args.shape.n);
    match (&args.tableau, &args.weight) {
        (Some(t), None) => {
            let t = Tableau::parse(t, k, n)?;
            let models = models_of(cli);
            let w = models.get(k, n)?.weight_of(&t)?;
            report_events(&models, io);
            Ok(w)
        }
        (None, Some(w)) => read_weight(k, n, w),
        _ => Err(Failure::Usage("give exactly one of --tableau or --weight".into())),
    }
}

fn execute(cli: &Cli, io: &mut Io) -> Result<(), Failure> {
    match &cli.command {
        Command::Wt(args) => {
            require_json(cli, "wt")?;
            let (k, n) = (args.shape.k, args.shape.n);
            let t = Tableau::parse(&args.tableau, k, n)?;
            let models = models_of(cli);
            let w = models.get(k, n)?.weight_of(&t)?;
            report_events(&models, io);
            emit(cli, io, &serde_json::to_string(&w).expect("serializable"))
        }
        Command::Subdivide(args) => {
            require_json(cli, "subdivide")?;
            let w = source_weight(cli, io, args)?;
            let sub = regular_subdivision(&Hypersimplex::new(args.shape.k, args.shape.n)?, &w)?;
            let v = if args.detailed { sub.to_json_detailed() } else { serde_json::to_value(&sub).expect("ok") };
            emit(cli, io, &json(&v))
        }
        Command::Classify(args) => {
            require_json(cli, "classify")?;
            let w = source_weight(cli, io, args)?;
            let sub = regular_subdivision(&Hypersimplex::new(args.shape.k, args.shape.n)?, &w)?;
            let v = serde_json::json!({
                "k": sub.k(),
                "n": sub.n(),
                "key": sub.canonical_key(),
                "classification": sub.classification(),
            });
            emit(cli, io, &json(&v))
        }
        Command::Census(args) => {
            let models = models_of(cli);
            let opts = CensusOptions {
                max_sources: args.max_sources,
                certify: !args.no_certify,
                compatibility: !args.no_compatibility,
                timing: cli.timing,
            };
            let result = split_census(&models, args.shape.k, args.shape.n, &opts);
            report_events(&models, io);
            match result {
                Ok(report) => {
                    let text = match cli.format {
                        Format::Json => json(&report),
                        Format::Csv => report.to_csv(),
                    };
                    emit(cli, io, &text)?;
                    if report.passed() {
                        Ok(())
                    } else {
                        Err(Failure::Verdict)
                    }
                }
                Err(CensusError::Budget { partial, needed, cap, k, n }) => {
                    emit(cli, io, &json(&partial))?;
                    Err(Failure::Usage(format!(
                        "census of Δ({k},{n}) needs {needed} sources but the budget is {cap}; \
                         partial report written; raise --max-sources"
                    )))
                }
                Err(e) => Err(Failure::Usage(e.to_string())),
            }
        }
        Command::Verify(args) => {
            let suites: Vec<Suite> = if args.suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![args.suite.parse::<Suite>().map_err(|e| Failure::Usage(e.to_string()))?]
            };
            let params = SuiteParams {
                n_values: args.n.clone(),
                samples: args.samples,
                seed: args.seed,
                edge_max_n: args.edge_max_n,
                certify: !args.no_certify,
                timing: cli.timing,
            };
            let models = models_of(cli);
            let mut reports = Vec::new();
            for s in suites {
                let r = verify_suite(&models, s, &params);
                report_events(&models, io);
                reports.push(r.map_err(|e| Failure::Usage(e.to_string()))?);
            }
            let text = match cli.format {
                Format::Json if reports.len() == 1 => json(&reports[0]),
                Format::Json => json(&reports),
                Format::Csv => {
                    let mut s = String::new();
                    for (i, r) in reports.iter().enumerate() {
                        let csv = r.to_csv();
                        s.push_str(if i == 0 { &csv } else { csv.split_once('\n').map_or("", |x| x.1) });
                    }
                    s
                }
            };
            emit(cli, io, &text)?;
            if reports.iter().all(|r| r.passed()) {
                Ok(())
            } else {
                Err(Failure::Verdict)
            }
        }
        Command::Tree(args) => {
            require_json(cli, "tree")?;
            let [i, j] = args.pair[..] else {
                return Err(Failure::Usage("--pair expects two entries i,j".into()));
            };
            let t = tree_split(args.n, (i, j)).map_err(|e| Failure::Usage(e.to_string()))?;
            if let Some(path) = &args.dot {
                write_file(path, &t.to_dot())?;
            }
            emit(cli, io, &json(&t))
        }
        Command::Cache(args) => {
            require_json(cli, "cache")?;
            let cache = cache_of(cli);
            let v = match args.action {
                CacheAction::Status => {
                    let entries = cache.status()?;
                    serde_json::json!({
                        "dir": cache.dir().display().to_string(),
                        "version": crate::webtrop::CACHE_FORMAT_VERSION,
                        "count": entries.len(),
                        "entries": entries,
                    })
                }
                CacheAction::Clear => {
                    let removed = cache.clear()?;
                    serde_json::json!({"dir": cache.dir().display().to_string(), "removed": removed})
                }
                CacheAction::Warm => {
                    let (Some(k), Some(n)) = (args.k, args.n) else {
                        return Err(Failure::Usage("cache warm needs --k and --n".into()));
                    };
                    let (model, event): (WebModel, CacheEvent) = cache.get_or_build(k, n, cli.max_monomials)?;
                    if let CacheEvent::Invalidated { found_version } = event {
                        let _ = writeln!(
                            io.err,
                            "notice: cached web model for (k,n)=({k},{n}) had format version {found_version}; rebuilt"
                        );
                    }
                    let monomials: usize = model.minors().iter().map(|m| m.len()).sum();
                    serde_json::json!({
                        "file": cache.path(k, n).display().to_string(),
                        "k": k,
                        "n": n,
                        "event": event,
                        "monomials": monomials,
                    })
                }
            };
            emit(cli, io, &json(&v))
        }
    }
}
