//! Command-line front end: `strata enumerate | atlas | verify`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{mpsc, Arc};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use strata::admissible::{admissible_set, tau_of_mu, ConjClassCochar};
use strata::affine::{AffineWeylGroup, ParahoricType};
use strata::atlas::{build_atlas, cache_key, cache_load, cache_store, to_dot, DatumInfo};
use strata::error::Error;
use strata::root_datum::{parse_label, DiagramAutomorphism, RootDatum, UserDatumSpec};
use strata::sigma_classes::{b_of_g_mu, is_straight};
use strata::verify::{verify_common, verify_parahoric, CheckResult, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
/// Some check ran out of time but none failed.
pub const EXIT_BUDGET: i32 = 4;

pub const CACHE_ENV: &str = "STRATA_CACHE_DIR";
pub const DEFAULT_MATRIX: &str = include_str!("../data/default_matrix.json");

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } => EXIT_IO,
            Error::Internal(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "strata", version, about = "KR, EKOR and Newton index posets from root-datum combinatorics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Admissible set, straight elements and B(G, μ) as JSON.
    Enumerate(JobArgs),
    /// The stratification atlas as JSON or DOT.
    Atlas(JobArgs),
    /// Run the verification checks on one instance or a matrix file.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Args, Debug, Clone)]
pub struct JobArgs {
    /// GL(n), GSp(2g), SL(n), or a path to a JSON root-datum document.
    #[arg(long)]
    pub datum: String,
    /// Dominant cocharacter, comma separated, in lattice or ambient coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: String,
    /// identity or flip.
    #[arg(long, default_value = "identity")]
    pub sigma: String,
    /// iwahori, hyperspecial, all, or comma-separated node indices.
    #[arg(long, default_value = "iwahori")]
    pub parahoric: String,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub no_cache: bool,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, requires = "mu", conflicts_with = "matrix")]
    pub datum: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    #[arg(long, default_value = "identity")]
    pub sigma: String,
    #[arg(long, default_value = "all")]
    pub parahoric: String,
    /// JSON matrix file; the bundled default matrix is used when neither this
    /// nor `--datum` is given.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Wall-clock budget per (datum, μ, K) check group.
    #[arg(long)]
    pub budget_seconds: Option<u64>,
    /// Writes the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A parsed and validated job.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub datum: String,
    pub sigma: String,
    pub mu: Vec<i64>,
    pub parahorics: Vec<ParahoricType>,
    group: Arc<AffineWeylGroup>,
}

impl JobSpec {
    pub fn new(datum: &str, sigma: &str, mu: &str, parahoric: &str) -> CliResult<Self> {
        let group = Arc::new(build_group(datum, sigma)?);
        let raw = parse_ints(mu)?;
        let mu = group.datum().cochar_from_user(&raw).map_err(Error::from)?;
        ConjClassCochar::new(&group, &mu)?;
        let parahorics = parse_parahorics(&group, parahoric)?;
        Ok(Self { datum: datum.to_string(), sigma: sigma.to_string(), mu, parahorics, group })
    }

    pub fn group(&self) -> &AffineWeylGroup {
        &self.group
    }
}

fn build_group(datum: &str, sigma: &str) -> CliResult<AffineWeylGroup> {
    let (d, s) = if Path::new(datum).is_file() {
        if sigma != "identity" {
            return Err(CliError::usage("--sigma cannot be combined with a datum file; put sigma in the document"));
        }
        let text = std::fs::read_to_string(datum)
            .map_err(|source| Error::Io { path: PathBuf::from(datum), source })?;
        UserDatumSpec::from_json(&text).and_then(|spec| spec.build()).map_err(Error::from)?
    } else {
        let d = RootDatum::build(parse_label(datum).map_err(Error::from)?).map_err(Error::from)?;
        let s = match sigma {
            "identity" | "id" => DiagramAutomorphism::identity(&d),
            "flip" => DiagramAutomorphism::flip(&d).map_err(Error::from)?,
            other => return Err(CliError::usage(format!("unknown sigma '{other}' (expected identity or flip)"))),
        };
        (d, s)
    };
    Ok(AffineWeylGroup::new(d, s)?)
}

fn parse_ints(text: &str) -> CliResult<Vec<i64>> {
    let t = text.trim().trim_start_matches('[').trim_end_matches(']');
    t.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| CliError::usage(format!("cannot parse '{text}' as an integer vector"))))
        .collect()
}

fn parse_parahorics(group: &AffineWeylGroup, text: &str) -> CliResult<Vec<ParahoricType>> {
    let t = text.trim().to_ascii_lowercase();
    Ok(match t.as_str() {
        "all" => ParahoricType::all(group),
        "iwahori" | "" | "[]" => vec![ParahoricType::iwahori()],
        "hyperspecial" => vec![ParahoricType::hyperspecial(group)],
        _ => {
            let nodes: Vec<usize> = parse_ints(&t)?
                .into_iter()
                .map(|x| usize::try_from(x).map_err(|_| CliError::usage(format!("bad node index {x}"))))
                .collect::<CliResult<_>>()?;
            vec![ParahoricType::new(group, nodes)?]
        }
    })
}

fn single_parahoric(spec: &JobSpec) -> CliResult<&ParahoricType> {
    match spec.parahorics.as_slice() {
        [j] => Ok(j),
        _ => Err(CliError::usage("this command needs a single parahoric")),
    }
}

#[derive(Serialize)]
struct ClassDoc {
    nu: strata::Cochar,
    kappa: Vec<i64>,
    members: Vec<String>,
}

#[derive(Serialize)]
struct EnumerateDoc {
    datum: DatumInfo,
    mu: Vec<i64>,
    tau: String,
    adm: Vec<String>,
    straight: Vec<String>,
    b_of_g_mu: Vec<ClassDoc>,
}

/// Adm(μ), its straight elements and B(G, μ).
pub fn cmd_enumerate(spec: &JobSpec) -> CliResult<String> {
    let g = spec.group();
    let mu = ConjClassCochar::new(g, &spec.mu)?;
    let adm = admissible_set(g, &mu);
    let mut straight = Vec::new();
    for w in adm.elements() {
        if is_straight(g, w)? {
            straight.push(g.format(w));
        }
    }
    let classes = b_of_g_mu(g, &adm, true)?;
    let doc = EnumerateDoc {
        datum: DatumInfo::of(g),
        mu: mu.mu_dominant.clone(),
        tau: g.format(&tau_of_mu(g, &mu)?),
        adm: adm.elements().iter().map(|w| g.format(w)).collect(),
        straight,
        b_of_g_mu: classes
            .into_iter()
            .map(|c| ClassDoc {
                nu: c.newton.nu,
                kappa: c.newton.kappa,
                members: c.members.iter().map(|w| g.format(w)).collect(),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc).expect("document serializes") + "\n")
}

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("strata-cache"))
}

/// The atlas document in the requested format.
pub fn cmd_atlas(spec: &JobSpec, format: Format, use_cache: bool) -> CliResult<String> {
    let g = spec.group();
    let j = single_parahoric(spec)?;
    let key = cache_key(g, &spec.mu, j);
    let dir = cache_dir();
    let cached = if use_cache { cache_load(&dir, &key)? } else { None };
    let atlas = match cached {
        Some(a) => a,
        None => {
            let a = build_atlas(g, &spec.mu, j)?;
            if use_cache {
                cache_store(&dir, &key, &a)?;
            }
            a
        }
    };
    Ok(match format {
        Format::Json => atlas.to_json() + "\n",
        Format::Dot => to_dot(&atlas),
    })
}

/// One line of a verification matrix file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixEntry {
    pub datum: String,
    #[serde(default = "identity")]
    pub sigma: String,
    pub mu: Vec<i64>,
    #[serde(default = "all")]
    pub parahoric: String,
}

fn identity() -> String {
    "identity".into()
}

fn all() -> String {
    "all".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub instances: Vec<MatrixEntry>,
}

pub fn parse_matrix(text: &str) -> CliResult<Vec<JobSpec>> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("bad matrix file: {e}")))?;
    file.instances
        .iter()
        .map(|e| {
            let mu: Vec<String> = e.mu.iter().map(i64::to_string).collect();
            JobSpec::new(&e.datum, &e.sigma, &mu.join(","), &e.parahoric)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportLine {
    pub datum: String,
    pub sigma: String,
    pub mu: Vec<i64>,
    pub parahoric: Option<Vec<usize>>,
    pub name: String,
    /// `pass`, `fail`, `skipped` or `budget-exceeded`.
    pub status: String,
    pub detail: String,
}

impl ReportLine {
    pub fn render(&self) -> String {
        let tag = match self.status.as_str() {
            "pass" => "PASS",
            "fail" => "FAIL",
            "skipped" => "SKIP",
            _ => "BUDGET",
        };
        let k = self.parahoric.as_ref().map_or("-".to_string(), |j| format!("{j:?}"));
        format!("{tag:<6} {} σ={} μ={:?} K={k} {}: {}", self.datum, self.sigma, self.mu, self.name, self.detail)
    }
}

/// Runs one check group on its own worker; `None` when over budget.
fn run_with_budget<T: Send + 'static>(
    budget: Option<Duration>,
    job: impl FnOnce() -> T + Send + 'static,
) -> Option<T> {
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(job());
    });
    match budget {
        Some(d) => rx.recv_timeout(d).ok(),
        None => rx.recv().ok(),
    }
}

/// Runs every check for each job. Results are in job order, then the
/// `K`-independent checks, then each `K` in turn.
pub fn cmd_verify(jobs: &[JobSpec], budget: Option<Duration>) -> Vec<ReportLine> {
    let mut lines = Vec::new();
    for spec in jobs {
        let mut groups: Vec<Option<ParahoricType>> = vec![None];
        groups.extend(spec.parahorics.iter().cloned().map(Some));
        for k in groups {
            let g = spec.group.clone();
            let mu = spec.mu.clone();
            let kk = k.clone();
            let out = run_with_budget(budget, move || match &kk {
                None => verify_common(&g, &mu),
                Some(j) => verify_parahoric(&g, &mu, j),
            });
            let line = |name: &str, status: &str, detail: String, parahoric: Option<Vec<usize>>| ReportLine {
                datum: spec.group.datum().name().to_string(),
                sigma: spec.sigma.clone(),
                mu: spec.mu.clone(),
                parahoric,
                name: name.into(),
                status: status.into(),
                detail,
            };
            let nodes = k.as_ref().map(|j| j.nodes().to_vec());
            match out {
                None => lines.push(line("all", "budget-exceeded", "budget exceeded".into(), nodes)),
                Some(Err(e)) => lines.push(line("error", "fail", e.to_string(), nodes)),
                Some(Ok(checks)) => lines.extend(checks.into_iter().map(|c: CheckResult| {
                    let status = match c.status {
                        Status::Pass => "pass",
                        Status::Fail => "fail",
                        Status::Skipped => "skipped",
                    };
                    line(&c.name, status, c.detail, c.parahoric)
                })),
            }
        }
    }
    lines
}

pub fn verify_exit_code(lines: &[ReportLine]) -> i32 {
    if lines.iter().any(|l| l.status == "fail") {
        EXIT_FAIL
    } else if lines.iter().any(|l| l.status == "budget-exceeded") {
        EXIT_BUDGET
    } else {
        EXIT_OK
    }
}

fn write_output(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source }.into()),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source }.into()),
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> CliResult<i32> {
    match cli.command {
        Command::Enumerate(a) => {
            if a.format != Format::Json {
                return Err(CliError::usage("enumerate only supports --format json"));
            }
            let spec = JobSpec::new(&a.datum, &a.sigma, &a.mu, &a.parahoric)?;
            write_output(a.out.as_deref(), &cmd_enumerate(&spec)?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Atlas(a) => {
            let spec = JobSpec::new(&a.datum, &a.sigma, &a.mu, &a.parahoric)?;
            write_output(a.out.as_deref(), &cmd_atlas(&spec, a.format, !a.no_cache)?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let jobs = match (&a.datum, &a.matrix) {
                (Some(d), _) => vec![JobSpec::new(d, &a.sigma, a.mu.as_deref().unwrap_or_default(), &a.parahoric)?],
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.clone(), source })?;
                    parse_matrix(&text)?
                }
                (None, None) => parse_matrix(DEFAULT_MATRIX)?,
            };
            let lines = cmd_verify(&jobs, a.budget_seconds.map(Duration::from_secs));
            let mut text = String::new();
            for l in &lines {
                text.push_str(&l.render());
                text.push('\n');
            }
            let count = |s: &str| lines.iter().filter(|l| l.status == s).count();
            text.push_str(&format!(
                "{} checks: {} passed, {} failed, {} skipped, {} over budget\n",
                lines.len(),
                count("pass"),
                count("fail"),
                count("skipped"),
                count("budget-exceeded")
            ));
            write_output(None, &text, stdout)?;
            if let Some(path) = &a.out {
                let json = serde_json::to_string_pretty(&lines).expect("report serializes") + "\n";
                write_output(Some(path), &json, stdout)?;
            }
            Ok(verify_exit_code(&lines))
        }
    }
}

/// Parses `args` and runs the command, returning the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(stdout, "{}", e.render()) } else { write!(stderr, "{}", e.render()) };
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}
