//! The `cpat` command line: argument parsing, dispatch, file I/O and the
//! on-disk cache of cluster tables.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cluster::{cluster_counts, count_clusters_oracle, ClusterTotals};
use crate::collection::PatternCollection;
use crate::equivalence::{canonical_form, classify_s5, compare_collections, S5Report};
use crate::error::{Error, Result};
use crate::graph::build_graph;
use crate::monotone::{emit_ode_system, emit_single_pattern_ode, monotone_cluster_counts, monotone_witness, verify_ode, OdeSystem};
use crate::series::{avoidance_from_cluster_gf, cluster_gf_from_totals, count_distribution_oracle, BiSeries};

pub const CACHE_ENV: &str = "CPAT_CACHE_DIR";
pub const DEFAULT_ORACLE_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GfKind {
    /// `x + sum cl_{n,q} x^n t^q / n!`
    Cluster,
    /// `sum alpha_{n,q} x^n t^q / n!`
    Occurrence,
}

#[derive(Debug, Parser)]
#[command(name = "cpat", version, about = "Consecutive pattern avoidance via the cluster method")]
pub struct Cli {
    /// Worker threads for the compute kernels (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory for cached cluster tables.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PatternsArg {
    /// File with one pattern per line; `#` starts a comment.
    #[arg(long, short)]
    pub patterns: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of permutations by length (and by occurrence count).
    Count {
        #[command(flatten)]
        input: PatternsArg,
        #[arg(long, short = 'n')]
        n: usize,
        /// Also split by the number of occurrences.
        #[arg(long)]
        occurrences: bool,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Cluster counts `cl_{n,q}`.
    Clusters {
        #[command(flatten)]
        input: PatternsArg,
        #[arg(long, short = 'n')]
        n: usize,
        /// Largest cluster size (default `n - 1`).
        #[arg(long, short = 'q')]
        q: Option<usize>,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// The overlap graph.
    Graph {
        #[command(flatten)]
        input: PatternsArg,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Coefficients of a generating function.
    Gf {
        #[command(flatten)]
        input: PatternsArg,
        #[arg(long, short = 'n')]
        n: usize,
        #[arg(long, value_enum, default_value = "occurrence")]
        kind: GfKind,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Compare two collections.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Order through which the generating functions are compared.
        #[arg(long, short = 'n', default_value_t = 12)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check monotonicity and emit the ODE system.
    Monotone {
        #[command(flatten)]
        input: PatternsArg,
        /// For one pattern, emit the single equation in `y_(1)` only.
        #[arg(long)]
        scalar: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check an ODE system (JSON) against the series of a collection.
    VerifyOde {
        #[command(flatten)]
        input: PatternsArg,
        #[arg(long)]
        system: PathBuf,
        #[arg(long, short = 'n', default_value_t = 20)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Classify the patterns of length 5.
    ClassifyS5 {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare the recurrences with brute-force enumeration.
    Oracle {
        #[command(flatten)]
        input: PatternsArg,
        #[arg(long, short = 'n')]
        n: usize,
        #[arg(long, short = 'q')]
        q: Option<usize>,
        /// Allow `n` above the cap.
        #[arg(long)]
        force: bool,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        cap: usize,
    },
}

/// The validated settings of one invocation.
#[derive(Debug)]
pub struct RunConfig {
    pub command: Command,
    pub threads: Option<usize>,
    pub cache: Option<Cache>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        let (n, format, allowed): (Option<usize>, Format, &[Format]) = match &cli.command {
            Command::Count { n, format, .. } => (Some(*n), *format, &[Format::Tsv, Format::Json]),
            Command::Clusters { n, format, .. } => (Some(*n), *format, &[Format::Tsv, Format::Json]),
            Command::Graph { format, .. } => (None, *format, &[Format::Dot, Format::Json]),
            Command::Gf { n, format, .. } => (Some(*n), *format, &[Format::Tsv, Format::Json]),
            Command::Equiv { n, format, .. } => (Some(*n), *format, &[Format::Text, Format::Json]),
            Command::Monotone { format, .. } => (None, *format, &[Format::Text, Format::Json]),
            Command::VerifyOde { n, format, .. } => (Some(*n), *format, &[Format::Text, Format::Json]),
            Command::ClassifyS5 { format } => (None, *format, &[Format::Text, Format::Json]),
            Command::Oracle { n, force, cap, .. } => {
                if *n > *cap && !force {
                    return Err(Error::OracleCap { n: *n, cap: *cap });
                }
                (Some(*n), Format::Tsv, &[Format::Tsv])
            }
        };
        if n == Some(0) {
            return bad("--n must be at least 1");
        }
        if !allowed.contains(&format) {
            return bad(&format!("format {format:?} is not available for this subcommand"));
        }
        if cli.threads == Some(0) {
            return bad("--threads must be at least 1");
        }
        Ok(RunConfig {
            command: cli.command,
            threads: cli.threads,
            cache: cli.cache_dir.map(Cache::new),
        })
    }
}

/// Hex SHA-256 of the canonical form of the overlap graph. Collections with
/// isomorphic labeled graphs have the same cluster numbers and share a key.
pub fn cache_key(c: &PatternCollection) -> String {
    let digest = Sha256::digest(canonical_form(&build_graph(c)).as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Cluster tables stored as TSV files named by [`cache_key`] and `(N, Q)`.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, c: &PatternCollection, n_max: usize, q_max: usize) -> PathBuf {
        self.dir.join(format!("{}-n{n_max}-q{q_max}.tsv", cache_key(c)))
    }

    /// A stored table, if present and readable.
    pub fn load(&self, c: &PatternCollection, n_max: usize, q_max: usize) -> Option<ClusterTotals> {
        let text = fs::read_to_string(self.path(c, n_max, q_max)).ok()?;
        let t = ClusterTotals::from_tsv(&text).ok()?;
        (t.n_max == n_max && t.q_max == q_max).then_some(t)
    }

    /// Writes to a temporary file in the cache directory, then renames it.
    pub fn store(&self, c: &PatternCollection, totals: &ClusterTotals) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(c, totals.n_max, totals.q_max);
        let tmp = self.dir.join(format!(
            ".{}.{}.tmp",
            path.file_name().unwrap().to_string_lossy(),
            std::process::id()
        ));
        fs::write(&tmp, totals.to_tsv())?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn totals(&self, c: &PatternCollection, n_max: usize, q_max: usize) -> Result<ClusterTotals> {
        if let Some(t) = self.load(c, n_max, q_max) {
            return Ok(t);
        }
        let t = cluster_counts(c, n_max, q_max).totals();
        self.store(c, &t)?;
        Ok(t)
    }
}

fn totals(cache: Option<&Cache>, c: &PatternCollection, n_max: usize, q_max: usize) -> Result<ClusterTotals> {
    match cache {
        Some(cache) => cache.totals(c, n_max, q_max),
        None => Ok(cluster_counts(c, n_max, q_max).totals()),
    }
}

pub fn read_collection(path: &Path) -> Result<PatternCollection> {
    let text = fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })?;
    PatternCollection::parse(&text)
}

#[derive(Serialize)]
struct Row<'a> {
    n: usize,
    q: usize,
    value: &'a str,
}

fn rows_json(rows: &[(usize, usize, String)]) -> Vec<Row<'_>> {
    rows.iter().map(|(n, q, v)| Row { n: *n, q: *q, value: v }).collect()
}

#[derive(Serialize)]
struct TotalsJson<'a> {
    n_max: usize,
    q_max: usize,
    cl: Vec<Row<'a>>,
}

#[derive(Serialize)]
struct CountJson<'a> {
    n_max: usize,
    alpha_n: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<Vec<Row<'a>>>,
}

#[derive(Serialize)]
struct SeriesJson<'a> {
    order: usize,
    terms: Vec<Row<'a>>,
}

#[derive(Serialize)]
struct GraphJson<'a> {
    vertices: Vec<String>,
    edges: &'a [crate::graph::Edge],
    canonical_key: String,
}

#[derive(Serialize)]
struct MonotoneJson<'a> {
    monotone: bool,
    witness: Option<&'a crate::monotone::MonotoneWitness>,
    system: Option<&'a OdeSystem>,
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Output text and exit status of a successful dispatch. Status 1 reports a
/// negative finding (a failed check), not an error.
pub struct Outcome {
    pub stdout: String,
    pub status: i32,
}

impl From<String> for Outcome {
    fn from(stdout: String) -> Self {
        Outcome { stdout, status: 0 }
    }
}

fn occurrence_series(cache: Option<&Cache>, c: &PatternCollection, n: usize) -> Result<BiSeries> {
    let t = totals(cache, c, n, n.saturating_sub(1))?;
    avoidance_from_cluster_gf(&cluster_gf_from_totals(&t, n)?)
}

pub fn dispatch(cfg: &RunConfig) -> Result<Outcome> {
    let cache = cfg.cache.as_ref();
    match &cfg.command {
        Command::Count {
            input,
            n,
            occurrences,
            format,
        } => {
            let c = read_collection(&input.patterns)?;
            let s = occurrence_series(cache, &c, *n)?;
            match format {
                Format::Json => {
                    let alpha_n = (0..=*n).map(|i| s.count(i, 0).map(|v| v.to_string())).collect::<Result<_>>()?;
                    let rows: Vec<(usize, usize, String)> = if *occurrences {
                        s.counts()?.into_iter().map(|((n, q), v)| (n, q, v.to_string())).collect()
                    } else {
                        Vec::new()
                    };
                    let out = CountJson {
                        n_max: *n,
                        alpha_n,
                        alpha: occurrences.then(|| rows_json(&rows)),
                    };
                    Ok(to_json(&out)?.into())
                }
                _ if *occurrences => Ok(s.to_alpha_tsv()?.into()),
                _ => Ok(s.to_alpha_n_tsv()?.into()),
            }
        }
        Command::Clusters { input, n, q, format } => {
            let c = read_collection(&input.patterns)?;
            let t = totals(cache, &c, *n, q.unwrap_or(n - 1))?;
            match format {
                Format::Json => {
                    let rows: Vec<_> = t.counts.iter().map(|(&(n, q), v)| (n, q, v.to_string())).collect();
                    to_json(&TotalsJson {
                        n_max: t.n_max,
                        q_max: t.q_max,
                        cl: rows_json(&rows),
                    })
                    .map(Into::into)
                }
                _ => Ok(t.to_tsv().into()),
            }
        }
        Command::Graph { input, format } => {
            let c = read_collection(&input.patterns)?;
            let g = build_graph(&c);
            match format {
                Format::Json => to_json(&GraphJson {
                    vertices: g.vertices().iter().map(|v| v.compact()).collect(),
                    edges: g.edges(),
                    canonical_key: cache_key(&c),
                })
                .map(Into::into),
                _ => Ok(g.to_dot().into()),
            }
        }
        Command::Gf { input, n, kind, format } => {
            let c = read_collection(&input.patterns)?;
            let s = match kind {
                GfKind::Cluster => cluster_gf_from_totals(&totals(cache, &c, *n, n - 1)?, *n)?,
                GfKind::Occurrence => occurrence_series(cache, &c, *n)?,
            };
            match format {
                Format::Json => {
                    let rows: Vec<_> = s.terms().map(|((n, q), v)| (n, q, v.to_string())).collect();
                    to_json(&SeriesJson {
                        order: s.order(),
                        terms: rows_json(&rows),
                    })
                    .map(Into::into)
                }
                _ => Ok(s.to_coeff_tsv().into()),
            }
        }
        Command::Equiv { a, b, n, format } => {
            let (ca, cb) = (read_collection(a)?, read_collection(b)?);
            let check = compare_collections(&ca, &cb, *n)?;
            if *format == Format::Json {
                return to_json(&check).map(Into::into);
            }
            let text = if check.theorem13 && check.equal_to_order {
                "equivalent (overlap-set condition holds)".to_string()
            } else if check.graphs_isomorphic && check.equal_to_order {
                "equivalent (isomorphic overlap graphs)".to_string()
            } else if let Some((n, q, x, y)) = &check.first_difference {
                format!("not equivalent (alpha_{{{n},{q}}} is {x} versus {y})")
            } else {
                format!("agree through n = {n}; no sufficient condition found")
            };
            Ok((text + "\n").into())
        }
        Command::Monotone { input, scalar, format } => {
            let c = read_collection(&input.patterns)?;
            let witness = monotone_witness(&c);
            let system = match (&witness, scalar) {
                (Some(_), _) => None,
                (None, true) if c.len() == 1 => Some(emit_single_pattern_ode(c.get(0))?),
                (None, true) => return Err(Error::Config("--scalar needs a single pattern".into())),
                (None, false) => Some(emit_ode_system(&c)?),
            };
            let stdout = match format {
                Format::Json => to_json(&MonotoneJson {
                    monotone: witness.is_none(),
                    witness: witness.as_ref(),
                    system: system.as_ref(),
                })?,
                _ => match (&witness, &system) {
                    (Some(w), _) => format!("not monotone: {w}\n"),
                    (None, Some(s)) => format!("monotone\n{}", s.pretty()),
                    (None, None) => unreachable!(),
                },
            };
            Ok(Outcome {
                stdout,
                status: i32::from(witness.is_some()),
            })
        }
        Command::VerifyOde {
            input,
            system,
            n,
            format,
        } => {
            let c = read_collection(&input.patterns)?;
            let sys = read_system(system)?;
            let counts = monotone_cluster_counts(&c, *n, *n)?;
            let series = sys
                .vertices
                .iter()
                .map(|v| {
                    counts
                        .vertices
                        .iter()
                        .position(|w| w == v)
                        .map(|i| counts.series(i, *n))
                        .ok_or_else(|| Error::Config(format!("vertex ({v}) is not in the overlap graph")))
                })
                .collect::<Result<Vec<_>>>()?;
            let report = verify_ode(&sys, &series, *n)?;
            let stdout = match format {
                Format::Json => to_json(&report)?,
                _ => {
                    let mut s = String::new();
                    for e in &report.equations {
                        let verdict = match (&e.first_mismatch, e.boundary_ok) {
                            (None, true) => "holds".to_string(),
                            (None, false) => "boundary data disagree".to_string(),
                            (Some(m), _) => format!("fails at x^{} t^{}: {} versus {}", m.n, m.q, m.lhs, m.rhs),
                        };
                        let _ = writeln!(s, "y_({}) through x^{}: {verdict}", e.vertex, e.checked_through);
                    }
                    s
                }
            };
            Ok(Outcome {
                stdout,
                status: i32::from(!report.passed()),
            })
        }
        Command::ClassifyS5 { format } => {
            let r = classify_s5();
            match format {
                Format::Json => to_json(&r).map(Into::into),
                _ => Ok(s5_text(&r).into()),
            }
        }
        Command::Oracle { input, n, q, .. } => {
            let c = read_collection(&input.patterns)?;
            let q_max = q.unwrap_or(n - 1);
            let t = totals(cache, &c, *n, q_max)?;
            let mut out = String::from("check\tn\tq\toracle\trecurrence\n");
            let mut ok = true;
            for m in 1..=*n {
                for k in 1..=q_max.min(m - 1) {
                    let (o, r) = (count_clusters_oracle(&c, m, k), t.get(m, k));
                    ok &= o == r;
                    let _ = writeln!(out, "cl\t{m}\t{k}\t{o}\t{r}");
                }
            }
            let s = occurrence_series(cache, &c, *n)?;
            let dist = count_distribution_oracle(&c, *n);
            for k in 0..=*n {
                let o = dist.get(&k).copied().unwrap_or(0);
                let r = s.count(*n, k)?;
                ok &= r == o.into();
                let _ = writeln!(out, "alpha\t{n}\t{k}\t{o}\t{r}");
            }
            let _ = writeln!(out, "# {}", if ok { "agree" } else { "DISAGREE" });
            Ok(Outcome {
                stdout: out,
                status: i32::from(!ok),
            })
        }
    }
}

/// Reads a system written either bare or inside the output of `monotone
/// --format json`.
pub fn read_system(path: &Path) -> Result<OdeSystem> {
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    if let Some(inner) = v.get_mut("system") {
        v = inner.take();
    }
    if v.is_null() {
        return Err(Error::Config(format!("{} contains no ODE system", path.display())));
    }
    Ok(serde_json::from_value(v)?)
}

fn s5_text(r: &S5Report) -> String {
    let mut s = String::new();
    let sizes = r.orbit_sizes();
    let _ = writeln!(s, "{} orbits; by size: {sizes:?}", r.orbits.len());
    for b in &r.buckets {
        let _ = writeln!(
            s,
            "overlaps {:?}: {} orbits, {} classes",
            b.overlaps,
            b.representatives.len(),
            b.classes.len()
        );
        for class in b.classes.iter().filter(|c| c.len() > 1) {
            let _ = writeln!(s, "  equivalent: {}", class.join(" ~ "));
        }
    }
    let unresolved: Vec<_> = r
        .pairs
        .iter()
        .filter(|p| !p.equivalent && p.separated_by.is_none())
        .collect();
    let _ = writeln!(s, "pairs: {}; unresolved: {}", r.pairs.len(), unresolved.len());
    for p in unresolved {
        let _ = writeln!(s, "  unresolved: {} {}", p.a, p.b);
    }
    s
}

/// Parses `args`, runs the command and writes its output. Returns the exit
/// status: 0 on success, 1 on a domain error or failed check, 2 on a usage
/// error.
pub fn cli_main<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(if code == 0 { &mut *out as &mut dyn Write } else { err }, "{}", e.render());
            return code;
        }
    };
    let cfg = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let run = || dispatch(&cfg);
    let result = match cfg.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(Error::Config(e.to_string())),
        },
        None => run(),
    };
    match result {
        Ok(o) => {
            let _ = out.write_all(o.stdout.as_bytes());
            o.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::NINE_PAIR;
    use crate::collection::collection;

    fn run(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cli_main(std::iter::once("cpat").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn cache_keys() {
        let c = collection(&["123"]);
        assert_eq!(cache_key(&c), cache_key(&c));
        assert_eq!(cache_key(&c).len(), 64);
        assert_ne!(cache_key(&c), cache_key(&collection(&["132"])));
        assert_eq!(
            cache_key(&collection(&[NINE_PAIR[0]])),
            cache_key(&collection(&[NINE_PAIR[1]]))
        );
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(&[]).0, 2);
        assert_eq!(run(&["count", "--n", "3"]).0, 2);
        assert_eq!(run(&["graph", "-p", "x", "--format", "tsv"]).0, 2);
        let (code, _, err) = run(&["oracle", "-p", "x", "-n", "11"]);
        assert_eq!(code, 2);
        assert!(err.contains("--force"));
    }

    #[test]
    fn missing_file_exits_1() {
        let (code, _, err) = run(&["graph", "-p", "/nonexistent/patterns.txt"]);
        assert_eq!(code, 1);
        assert!(err.contains("/nonexistent/patterns.txt"));
    }
}
