//! The `kdist` command line.
//!
//! Every subcommand writes one JSON object to standard output, except
//! `matrix` and `bench`, which write CSV. Exit codes: 0 on success
//! (including negative squared distances, which are reported, not refused),
//! 1 on domain errors, 2 on usage, I/O or parse errors.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{bench, records_to_csv, BenchConfig};
use crate::collection::{distance_matrix, nearest_neighbor, Embedding, ShapeCollection};
use crate::currents::{current_distance, curve_atoms, mesh_atoms, CurrentAtoms};
use crate::distance::{kernel_distance, DistanceResult};
use crate::error::Error;
use crate::features::{approx_distance_sq, embed_current, embed_measure, sample_feature_map};
use crate::io::{parse_curve, parse_mesh, parse_points};
use crate::ipm::{ipm_lower_bound, tv_distance};
use crate::kernels::{check_positive_definite, gram_matrix, GramReport, KernelSpec};
use crate::shapes::DiscreteMeasure;
use crate::spectral::spectral_lift;

/// Environment variable consulted when `--threads` is absent.
pub const THREADS_ENV: &str = "KDIST_THREADS";

const DEFAULT_RHO: usize = 256;

#[derive(Debug, Parser)]
#[command(name = "kdist", version, about = "Kernel and current distances between shapes")]
struct Cli {
    /// Maximum worker threads (default: KDIST_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelKind {
    Gaussian,
    Box,
}

#[derive(Debug, Args)]
struct KernelArgs {
    #[arg(long, value_enum)]
    kernel: KernelKind,
    /// Gaussian bandwidth: K(x,y) = exp(-|x-y|^2 / sigma^2).
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Box cutoff radius.
    #[arg(long, default_value_t = crate::kernels::DEFAULT_BOX_WIDTH)]
    width: f64,
}

impl KernelArgs {
    fn spec(&self) -> Result<KernelSpec, CliError> {
        match self.kernel {
            KernelKind::Gaussian => KernelSpec::gaussian(self.sigma),
            KernelKind::Box => KernelSpec::box_kernel(self.width),
        }
        .map_err(CliError::Usage)
    }
}

#[derive(Debug, Args)]
struct FeatureArgs {
    /// Use a random Fourier feature map of this dimension instead of the exact sum.
    #[arg(long = "features", value_name = "RHO")]
    rho: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct PairArgs {
    /// First input (`-` for standard input).
    a: PathBuf,
    /// Second input (`-` for standard input).
    b: PathBuf,
    #[command(flatten)]
    kernel: KernelArgs,
    #[command(flatten)]
    features: FeatureArgs,
    /// Negative squares above -tolerance are reported as distance 0.
    #[arg(long)]
    clamp_tolerance: Option<f64>,
    /// Emit JSON (the only output format; accepted for compatibility).
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShapeKind {
    Points,
    Curves,
    Surfaces,
}

impl ShapeKind {
    fn extension(self) -> &'static str {
        match self {
            ShapeKind::Points => "csv",
            ShapeKind::Curves => "poly",
            ShapeKind::Surfaces => "off",
        }
    }
}

#[derive(Debug, Args)]
struct CollectionArgs {
    /// Directory of shapes (`*.csv`, `*.poly` or `*.off` by kind).
    #[arg(long)]
    dir: PathBuf,
    #[arg(long, value_enum, default_value = "points")]
    kind: ShapeKind,
    #[command(flatten)]
    kernel: KernelArgs,
    /// Feature dimension (default 256).
    #[arg(long = "features", value_name = "RHO")]
    rho: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kernel distance between two point files.
    Points(PairArgs),
    /// Current distance between two polylines.
    Curves(PairArgs),
    /// Current distance between two OFF triangle meshes.
    Surfaces(PairArgs),
    /// Smallest Gram eigenvalue and PSD verdict for a point file.
    GramCheck {
        points: PathBuf,
        #[command(flatten)]
        kernel: KernelArgs,
        /// Absolute eigenvalue tolerance (default 1e-8 * n).
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Exact spectral lifting of a point file.
    Lift {
        points: PathBuf,
        #[command(flatten)]
        kernel: KernelArgs,
    },
    /// Kernel distance, sampled IPM lower bound and total variation.
    Ipm {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Pairwise lifted distances over a directory of shapes, as CSV.
    Matrix(CollectionArgs),
    /// Nearest shape in a directory to a query shape.
    Nn {
        #[command(flatten)]
        collection: CollectionArgs,
        #[arg(long)]
        query: PathBuf,
    },
    /// Exact vs feature timing on synthetic inputs, as CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1000usize, 2000, 4000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_RHO)]
        rho: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(Error),
    Io(PathBuf, std::io::Error),
    Parse(PathBuf, Error),
    Domain(Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(e) => write!(f, "usage error: {e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Parse(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Domain(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
    }
}

fn load<T>(path: &Path, parse: fn(&[u8]) -> crate::Result<T>) -> Result<T, CliError> {
    parse(&read_input(path)?).map_err(|e| CliError::Parse(path.to_path_buf(), e))
}

fn load_atoms(path: &Path, kind: ShapeKind) -> Result<CurrentAtoms, CliError> {
    Ok(match kind {
        ShapeKind::Curves => curve_atoms(&load(path, parse_curve)?),
        ShapeKind::Surfaces => mesh_atoms(&load(path, parse_mesh)?),
        ShapeKind::Points => unreachable!("points have no atoms"),
    })
}

#[derive(Serialize)]
struct DistanceOutput {
    d_squared: f64,
    d: Option<f64>,
    clamped: bool,
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    atoms: Option<[usize; 2]>,
    time_ms: f64,
}

impl DistanceOutput {
    fn new(r: DistanceResult, method: &'static str, time_ms: f64) -> Self {
        DistanceOutput {
            d_squared: r.d_squared,
            d: r.d,
            clamped: r.clamped,
            method,
            rho: None,
            seed: None,
            atoms: None,
            time_ms,
        }
    }
}

fn gaussian_sigma(k: &KernelSpec) -> Result<f64, CliError> {
    match *k {
        KernelSpec::Gaussian { sigma } => Ok(sigma),
        KernelSpec::Box { .. } => Err(CliError::Domain(Error::NoFeatureMap("box"))),
    }
}

fn ms_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn features_output(d_squared: f64, rho: usize, seed: u64, time_ms: f64) -> DistanceOutput {
    let mut out = DistanceOutput::new(DistanceResult::from_squared(d_squared, 0.0), "features", time_ms);
    out.rho = Some(rho);
    out.seed = Some(seed);
    out
}

fn cmd_points(args: &PairArgs) -> Result<DistanceOutput, CliError> {
    let k = args.kernel.spec()?;
    let p = load(&args.a, parse_points)?;
    let q = load(&args.b, parse_points)?;
    match args.features.rho {
        None => {
            let start = Instant::now();
            let r = kernel_distance(&k, &p, &q, args.clamp_tolerance)?;
            Ok(DistanceOutput::new(r, "exact", ms_since(start)))
        }
        Some(rho) => {
            let sigma = gaussian_sigma(&k)?;
            let seed = args.features.seed;
            let start = Instant::now();
            let f = sample_feature_map(sigma, p.dim(), rho, seed)?;
            let d2 = approx_distance_sq(&embed_measure(&f, &p)?, &embed_measure(&f, &q)?)?;
            Ok(features_output(d2, rho, seed, ms_since(start)))
        }
    }
}

fn cmd_currents(args: &PairArgs, kind: ShapeKind) -> Result<DistanceOutput, CliError> {
    let k = args.kernel.spec()?;
    let s = load_atoms(&args.a, kind)?;
    let t = load_atoms(&args.b, kind)?;
    let mut out = match args.features.rho {
        None => {
            let start = Instant::now();
            let r = current_distance(&k, &s, &t, args.clamp_tolerance)?;
            DistanceOutput::new(r, "exact", ms_since(start))
        }
        Some(rho) => {
            let sigma = gaussian_sigma(&k)?;
            let seed = args.features.seed;
            let start = Instant::now();
            let f = sample_feature_map(sigma, s.dim(), rho, seed)?;
            let d2 = approx_distance_sq(&embed_current(&f, &s)?, &embed_current(&f, &t)?)?;
            features_output(d2, rho, seed, ms_since(start))
        }
    };
    out.atoms = Some([s.len(), t.len()]);
    Ok(out)
}

#[derive(Serialize)]
struct LiftOutput {
    n: usize,
    rank: usize,
    eigenvalues: Vec<f64>,
    dropped_negative: f64,
    is_positive_semidefinite: bool,
}

#[derive(Serialize)]
struct IpmOutput {
    d_k: Option<f64>,
    lower_bound: f64,
    tv: f64,
}

#[derive(Serialize)]
struct NnOutput {
    name: String,
    index: usize,
    distance: f64,
}

fn shape_files(dir: &Path, kind: ShapeKind) -> Result<Vec<PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::Io(dir.to_path_buf(), e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == kind.extension()) {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(CliError::Usage(Error::InvalidParameter(format!(
            "no *.{} files in {}",
            kind.extension(),
            dir.display()
        ))));
    }
    Ok(files)
}

/// Loads a shape and embeds it, sampling the feature map on first use.
struct Embedder {
    sigma: f64,
    rho: usize,
    seed: u64,
    kind: ShapeKind,
    map: Option<crate::features::FeatureMapSpec>,
}

impl Embedder {
    fn embed(&mut self, path: &Path) -> Result<Embedding, CliError> {
        enum Loaded {
            Points(DiscreteMeasure),
            Atoms(CurrentAtoms),
        }
        let loaded = match self.kind {
            ShapeKind::Points => Loaded::Points(load(path, parse_points)?),
            kind => Loaded::Atoms(load_atoms(path, kind)?),
        };
        let dim = match &loaded {
            Loaded::Points(p) => p.dim(),
            Loaded::Atoms(a) => a.dim(),
        };
        let f = match &self.map {
            Some(f) => f,
            None => self
                .map
                .insert(sample_feature_map(self.sigma, dim, self.rho, self.seed)?),
        };
        Ok(match loaded {
            Loaded::Points(p) => embed_measure(f, &p)?.into(),
            Loaded::Atoms(a) => embed_current(f, &a)?.into(),
        })
    }
}

fn build_collection(args: &CollectionArgs) -> Result<(ShapeCollection, Embedder), CliError> {
    let k = args.kernel.spec()?;
    let mut embedder = Embedder {
        sigma: gaussian_sigma(&k)?,
        rho: args.rho.unwrap_or(DEFAULT_RHO),
        seed: args.seed,
        kind: args.kind,
        map: None,
    };
    let files = shape_files(&args.dir, args.kind)?;
    let mut entries = Vec::with_capacity(files.len());
    for path in &files {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        entries.push((name, embedder.embed(path)?));
    }
    let mut collection = ShapeCollection::new(embedder.map.clone().expect("at least one file"));
    for (name, e) in entries {
        collection.push(name, e)?;
    }
    Ok((collection, embedder))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes") + "\n"
}

fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Points(args) => Ok(to_json(&cmd_points(args)?)),
        Command::Curves(args) => Ok(to_json(&cmd_currents(args, ShapeKind::Curves)?)),
        Command::Surfaces(args) => Ok(to_json(&cmd_currents(args, ShapeKind::Surfaces)?)),
        Command::GramCheck {
            points,
            kernel,
            tolerance,
        } => {
            let k = kernel.spec()?;
            let p = load(points, parse_points)?;
            let pts: Vec<&[f64]> = p.points().collect();
            let g = gram_matrix(&k, &pts)?;
            let tol = tolerance.unwrap_or_else(|| GramReport::default_tolerance(p.len()));
            Ok(to_json(&check_positive_definite(&g, tol)?))
        }
        Command::Lift { points, kernel } => {
            let k = kernel.spec()?;
            let p = load(points, parse_points)?;
            let pts: Vec<&[f64]> = p.points().collect();
            let l = spectral_lift(&k, &pts)?;
            Ok(to_json(&LiftOutput {
                n: l.len(),
                rank: l.rank(),
                is_positive_semidefinite: l.is_positive_semidefinite(),
                dropped_negative: l.dropped_negative,
                eigenvalues: l.eigenvalues,
            }))
        }
        Command::Ipm {
            a,
            b,
            kernel,
            trials,
            seed,
        } => {
            let k = kernel.spec()?;
            let p = load(a, parse_points)?;
            let q = load(b, parse_points)?;
            let d_k = kernel_distance(&k, &p, &q, None)?.d;
            Ok(to_json(&IpmOutput {
                d_k,
                lower_bound: ipm_lower_bound(&k, &p, &q, *trials, *seed)?,
                tv: tv_distance(&p, &q)?,
            }))
        }
        Command::Matrix(args) => {
            let (c, _) = build_collection(args)?;
            let m = distance_matrix(&c);
            let mut out = String::from("name");
            for name in c.names() {
                out.push(',');
                out.push_str(&csv_field(name));
            }
            out.push('\n');
            for (name, row) in c.names().iter().zip(&m) {
                out.push_str(&csv_field(name));
                for v in row {
                    out.push_str(&format!(",{v}"));
                }
                out.push('\n');
            }
            Ok(out)
        }
        Command::Nn { collection, query } => {
            let (c, mut embedder) = build_collection(collection)?;
            let q = embedder.embed(query)?;
            let (index, distance) = nearest_neighbor(&c, &q)?;
            Ok(to_json(&NnOutput {
                name: c.names()[index].clone(),
                index,
                distance,
            }))
        }
        Command::Bench {
            sizes,
            rho,
            seed,
            sigma,
            dim,
            reps,
        } => {
            let cfg = BenchConfig {
                sizes: sizes.clone(),
                rho: *rho,
                seed: *seed,
                sigma: *sigma,
                dim: *dim,
                repetitions: *reps,
            };
            Ok(records_to_csv(&bench(&cfg).map_err(CliError::Usage)?))
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<usize, String> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got {v:?}")),
        _ => Ok(0),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let threads = match thread_count(cli.threads) {
        Ok(t) => t,
        Err(msg) => {
            let _ = writeln!(stderr, "usage error: {msg}");
            return 2;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker threads: {e}");
            return 1;
        }
    };
    match pool.install(|| execute(&cli.command)) {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}
