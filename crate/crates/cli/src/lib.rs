//! Command-line driver: reproducible tables and machine-readable reports for
//! the operad Hochschild complexes and bracket star-diagram complexes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use operad_homology::checks;
use operad_homology::error::Error as CoreError;
use operad_homology::hochschild::{build_complex, BuiltComplex, ComplexKind};
use operad_homology::homology::Ring;
use operad_homology::operad::{component_basis, graded_dimensions, OperadId};
use operad_homology::star_diagrams::{build_star_complex, spectral_coordinates, Mode, StarComplex};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Resource(String),
    Invariant(String),
    Io(std::io::Error),
    Failed(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Resource(m) => write!(f, "resource cap exceeded: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violation: {m}"),
            CliError::Io(e) => write!(f, "io: {e}"),
            CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Resource(_) => 2,
            CliError::Invariant(_) | CliError::Failed(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ResourceCap(m) => CliError::Resource(m),
            CoreError::Invariant(m) => CliError::Invariant(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "ophom", about = "Hochschild and bracket star-diagram complexes of the knot-space operads", disable_help_subcommand = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperadArg {
    Lie,
    Assoc,
    Comm,
    Poiss,
    Gerst,
    Bv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ComplexArg {
    AssocFull,
    CommFull,
    PoissFull,
    PoissNorm,
    PoissZero,
    BvFull,
    BvNorm,
    BvE0,
    BvF1,
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RingArg {
    Q,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Report format
    #[arg(long, value_enum, default_value = "text")]
    pub format: FormatArg,
    /// Output path; stdout when omitted. Relative paths resolve against
    /// OPERAD_HOMOLOGY_OUT when that variable is set.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Largest slice basis the builders may enumerate
    #[arg(long, default_value_t = 200_000)]
    pub max_basis: usize,
    /// Wall-clock limit in seconds
    #[arg(long)]
    pub time_limit: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Component bases and graded dimensions of one operad
    Basis {
        #[arg(long, value_enum)]
        operad: OperadArg,
        /// Bracket degree parameter of the operad (ignored by Lie, Assoc, Comm)
        #[arg(long, default_value_t = 2)]
        d: i64,
        /// Arity (or maximal arity with --up-to)
        #[arg(long)]
        n: usize,
        /// Report all arities up to n
        #[arg(long, default_value_t = false)]
        up_to: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Slice dimensions and boundary matrices of one complex
    Complex {
        #[arg(long, value_enum)]
        complex: ComplexArg,
        /// Dimension of the ambient space of knots (d >= 3); the operads are
        /// taken at parameter d - 1
        #[arg(long, default_value_t = 3)]
        d: i64,
        #[arg(long, default_value_t = 3)]
        max_i: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Betti and torsion tables per bigrading
    Homology {
        #[arg(long, value_enum)]
        complex: ComplexArg,
        #[arg(long, default_value_t = 3)]
        d: i64,
        #[arg(long, default_value_t = 3)]
        max_i: usize,
        #[arg(long, value_enum, default_value = "q")]
        ring: RingArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Chord-diagram ranks against the independent four-term oracle
    Chords {
        #[arg(long, default_value_t = 3)]
        d: i64,
        #[arg(long, default_value_t = 3)]
        max_i: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the invariant suites and print a pass/fail matrix
    Verify {
        /// Suite name filter (substring; "all" runs everything)
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        max_i: usize,
        /// Seed for the randomized batteries
        #[arg(long, default_value_t = 20240905)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Serialize)]
struct Report<C: Serialize, R: Serialize> {
    config: C,
    results: Vec<R>,
}

#[derive(Serialize, Clone)]
struct BasisConfig {
    command: String,
    operad: String,
    d: i64,
    n: usize,
    format: String,
}

#[derive(Serialize)]
struct BasisRecord {
    n: usize,
    dim: usize,
    degrees: BTreeMap<String, usize>,
}

#[derive(Serialize, Clone)]
struct ComplexConfig {
    command: String,
    complex: String,
    d: i64,
    operad_parameter: i64,
    max_i: usize,
    ring: Option<String>,
    format: String,
    max_basis: usize,
}

#[derive(Serialize)]
struct SliceRecord {
    i: usize,
    j: usize,
    p: i64,
    q: i64,
    dim: usize,
    boundary_rows: usize,
    boundary_cols: usize,
    boundary: Vec<(usize, usize, String)>,
}

#[derive(Serialize)]
struct HomologyRecord {
    i: usize,
    j: usize,
    p: i64,
    q: i64,
    dim: usize,
    betti: usize,
    torsion: Vec<String>,
}

#[derive(Serialize)]
struct ChordRecord {
    i: usize,
    chords: usize,
    oracle_rank: usize,
    oracle_dim: usize,
    homology_betti: usize,
    matches: bool,
}

#[derive(Serialize)]
struct VerifyRecord {
    name: String,
    passed: bool,
    detail: String,
}

fn operad_id(arg: OperadArg, d: i64) -> Result<OperadId, CliError> {
    Ok(match arg {
        OperadArg::Lie => OperadId::lie(),
        OperadArg::Assoc => OperadId::assoc(),
        OperadArg::Comm => OperadId::comm(),
        OperadArg::Poiss => OperadId::poiss(d),
        OperadArg::Gerst => OperadId::gerst(),
        OperadArg::Bv => OperadId::bv(d).map_err(CoreError::from)?,
    })
}

enum AnyComplex {
    Operadic(BuiltComplex),
    Star(StarComplex),
}

fn build_any(arg: ComplexArg, knot_d: i64, max_i: usize, max_basis: usize) -> Result<AnyComplex, CliError> {
    if knot_d < 3 {
        return Err(CliError::Usage("knot-space complexes need d >= 3".into()));
    }
    let dp = knot_d - 1;
    let j_cap = 2 * max_i + 2;
    let built = match arg {
        ComplexArg::AssocFull => build_complex(ComplexKind::Full, OperadId::assoc(), 0, j_cap, max_basis)?,
        ComplexArg::CommFull => build_complex(ComplexKind::Full, OperadId::comm(), 0, j_cap, max_basis)?,
        ComplexArg::PoissFull => build_complex(ComplexKind::Full, OperadId::poiss(dp), max_i, j_cap, max_basis)?,
        ComplexArg::PoissNorm => build_complex(ComplexKind::Normalized, OperadId::poiss(dp), max_i, j_cap, max_basis)?,
        ComplexArg::PoissZero => build_complex(ComplexKind::ZeroQuotient, OperadId::poiss(dp), max_i, j_cap, max_basis)?,
        ComplexArg::BvFull => build_complex(ComplexKind::Full, OperadId::bv(dp).map_err(CoreError::from)?, max_i, j_cap, max_basis)?,
        ComplexArg::BvNorm => build_complex(ComplexKind::Normalized, OperadId::bv(dp).map_err(CoreError::from)?, max_i, j_cap, max_basis)?,
        ComplexArg::BvE0 => build_complex(ComplexKind::E0, OperadId::bv(dp).map_err(CoreError::from)?, max_i, j_cap, max_basis)?,
        ComplexArg::BvF1 => build_complex(ComplexKind::F1, OperadId::bv(dp).map_err(CoreError::from)?, max_i, j_cap, max_basis)?,
        ComplexArg::Star => {
            let mode = if knot_d.rem_euclid(2) == 1 { Mode::OddD } else { Mode::EvenD };
            return Ok(AnyComplex::Star(build_star_complex(mode, max_i, max_basis)?));
        }
    };
    Ok(AnyComplex::Operadic(built))
}

fn complex_name(arg: ComplexArg) -> &'static str {
    match arg {
        ComplexArg::AssocFull => "assoc-full",
        ComplexArg::CommFull => "comm-full",
        ComplexArg::PoissFull => "poiss-full",
        ComplexArg::PoissNorm => "poiss-norm",
        ComplexArg::PoissZero => "poiss-zero",
        ComplexArg::BvFull => "bv-full",
        ComplexArg::BvNorm => "bv-norm",
        ComplexArg::BvE0 => "bv-e0",
        ComplexArg::BvF1 => "bv-f1",
        ComplexArg::Star => "star",
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Basis { operad, d, n, up_to, out } => {
            let op = operad_id(*operad, *d)?;
            let config = BasisConfig {
                command: "basis".into(),
                operad: format!("{operad:?}").to_lowercase(),
                d: op.d,
                n: *n,
                format: format!("{:?}", out.format).to_lowercase(),
            };
            let lo = if *up_to { 0 } else { *n };
            let mut results = Vec::new();
            for k in lo..=*n {
                let basis = component_basis(op, k).map_err(CliError::from)?;
                let degrees: BTreeMap<String, usize> = graded_dimensions(op, k)
                    .map(|m| m.into_iter().map(|(deg, c)| (deg.to_string(), c)).collect())
                    .unwrap_or_default();
                results.push(BasisRecord { n: k, dim: basis.len(), degrees });
            }
            emit(out, &config, &results, |r| {
                let degs = r
                    .degrees
                    .iter()
                    .map(|(k, v)| format!("{k}:{v}"))
                    .collect::<Vec<_>>()
                    .join(" ");
                format!("n={} dim={} degrees[{}]", r.n, r.dim, degs)
            }, &["n", "dim", "degrees"], |r| vec![r.n.to_string(), r.dim.to_string(), r
                .degrees
                .iter()
                .map(|(k, v)| format!("{k}:{v}"))
                .collect::<Vec<_>>()
                .join(";")])
        }
        Command::Complex { complex, d, max_i, out } => {
            let started = Instant::now();
            let built = build_any(*complex, *d, *max_i, out.max_basis)?;
            check_time(out, started)?;
            let config = ComplexConfig {
                command: "complex".into(),
                complex: complex_name(*complex).into(),
                d: *d,
                operad_parameter: d - 1,
                max_i: *max_i,
                ring: None,
                format: format!("{:?}", out.format).to_lowercase(),
                max_basis: out.max_basis,
            };
            let mut results = Vec::new();
            match &built {
                AnyComplex::Operadic(c) => {
                    for (&(i, j), slice) in &c.slices {
                        let (p, q) = spectral_coordinates(i, j, *d);
                        results.push(SliceRecord {
                            i,
                            j,
                            p,
                            q,
                            dim: c.dim(i, j),
                            boundary_rows: slice.boundary.rows,
                            boundary_cols: slice.boundary.cols,
                            boundary: slice
                                .boundary
                                .iter()
                                .map(|(r, cc, v)| (r, cc, v.to_string()))
                                .collect(),
                        });
                    }
                }
                AnyComplex::Star(c) => {
                    for (&(i, j), slice) in &c.slices {
                        let (p, q) = spectral_coordinates(i, j, *d);
                        results.push(SliceRecord {
                            i,
                            j,
                            p,
                            q,
                            dim: slice.basis.len(),
                            boundary_rows: slice.boundary.rows,
                            boundary_cols: slice.boundary.cols,
                            boundary: slice
                                .boundary
                                .iter()
                                .map(|(r, cc, v)| (r, cc, v.to_string()))
                                .collect(),
                        });
                    }
                }
            }
            emit(out, &config, &results, |r| {
                format!(
                    "({},{}) p={} q={} dim={} boundary {}x{} ({} entries)",
                    r.i, r.j, r.p, r.q, r.dim, r.boundary_rows, r.boundary_cols, r.boundary.len()
                )
            }, &["i", "j", "p", "q", "dim", "boundary_rows", "boundary_cols", "nnz"], |r| vec![
                r.i.to_string(),
                r.j.to_string(),
                r.p.to_string(),
                r.q.to_string(),
                r.dim.to_string(),
                r.boundary_rows.to_string(),
                r.boundary_cols.to_string(),
                r.boundary.len().to_string(),
            ])
        }
        Command::Homology { complex, d, max_i, ring, out } => {
            let started = Instant::now();
            let built = build_any(*complex, *d, *max_i, out.max_basis)?;
            check_time(out, started)?;
            let ring_core = match ring {
                RingArg::Q => Ring::Q,
                RingArg::Z => Ring::Z,
            };
            let config = ComplexConfig {
                command: "homology".into(),
                complex: complex_name(*complex).into(),
                d: *d,
                operad_parameter: d - 1,
                max_i: *max_i,
                ring: Some(format!("{ring:?}")),
                format: format!("{:?}", out.format).to_lowercase(),
                max_basis: out.max_basis,
            };
            let mut results = Vec::new();
            match &built {
                AnyComplex::Operadic(c) => {
                    let keys: Vec<(usize, usize)> = c.slices.keys().copied().collect();
                    for (i, j) in keys {
                        check_time(out, started)?;
                        let h = c.slice_homology(i, j, ring_core).map_err(CliError::from)?;
                        let (p, q) = spectral_coordinates(i, j, *d);
                        results.push(HomologyRecord {
                            i,
                            j,
                            p,
                            q,
                            dim: h.dim,
                            betti: h.betti,
                            torsion: h.torsion.iter().map(|t| t.to_string()).collect(),
                        });
                    }
                }
                AnyComplex::Star(c) => {
                    let keys: Vec<(usize, usize)> = c.slices.keys().copied().collect();
                    for (i, j) in keys {
                        check_time(out, started)?;
                        let h = c.slice_homology(i, j, ring_core).map_err(CliError::from)?;
                        let (p, q) = spectral_coordinates(i, j, *d);
                        results.push(HomologyRecord {
                            i,
                            j,
                            p,
                            q,
                            dim: h.dim,
                            betti: h.betti,
                            torsion: h.torsion.iter().map(|t| t.to_string()).collect(),
                        });
                    }
                }
            }
            emit(out, &config, &results, |r| {
                format!(
                    "({},{}) p={} q={} p+q={} dim={} betti={} torsion[{}]",
                    r.i,
                    r.j,
                    r.p,
                    r.q,
                    r.p + r.q,
                    r.dim,
                    r.betti,
                    r.torsion.join(",")
                )
            }, &["i", "j", "p", "q", "dim", "betti", "torsion"], |r| vec![
                r.i.to_string(),
                r.j.to_string(),
                r.p.to_string(),
                r.q.to_string(),
                r.dim.to_string(),
                r.betti.to_string(),
                r.torsion.join(";"),
            ])
        }
        Command::Chords { d, max_i, out } => {
            if *d < 3 {
                return Err(CliError::Usage("chord tables need d >= 3".into()));
            }
            let mode = if d.rem_euclid(2) == 1 { Mode::OddD } else { Mode::EvenD };
            let config = ComplexConfig {
                command: "chords".into(),
                complex: format!("star-{}", if mode == Mode::OddD { "odd" } else { "even" }),
                d: *d,
                operad_parameter: d - 1,
                max_i: *max_i,
                ring: Some("Q".into()),
                format: format!("{:?}", out.format).to_lowercase(),
                max_basis: out.max_basis,
            };
            let mut results = Vec::new();
            for i in 1..=*max_i {
                let (chords, oracle_rank, oracle_dim, betti) = chord_row(mode, i)?;
                results.push(ChordRecord {
                    i,
                    chords,
                    oracle_rank,
                    oracle_dim,
                    homology_betti: betti,
                    matches: betti == oracle_dim,
                });
            }
            emit(out, &config, &results, |r| {
                format!(
                    "i={} chords={} oracle_rank={} oracle_dim={} homology={} match={}",
                    r.i, r.chords, r.oracle_rank, r.oracle_dim, r.homology_betti, r.matches
                )
            }, &["i", "chords", "oracle_rank", "oracle_dim", "homology_betti", "matches"], |r| vec![
                r.i.to_string(),
                r.chords.to_string(),
                r.oracle_rank.to_string(),
                r.oracle_dim.to_string(),
                r.homology_betti.to_string(),
                r.matches.to_string(),
            ])
        }
        Command::Verify { suite, max_i, seed, out } => {
            let all = checks::run_all(*seed, *max_i);
            let selected: Vec<_> = all
                .into_iter()
                .filter(|r| suite == "all" || r.name.contains(suite.as_str()))
                .collect();
            if selected.is_empty() {
                return Err(CliError::Usage(format!("no suite matches '{suite}'")));
            }
            let config = BasisConfig {
                command: "verify".into(),
                operad: suite.clone(),
                d: *seed as i64,
                n: *max_i,
                format: format!("{:?}", out.format).to_lowercase(),
            };
            let results: Vec<VerifyRecord> = selected
                .iter()
                .map(|r| VerifyRecord { name: r.name.clone(), passed: r.passed, detail: r.detail.clone() })
                .collect();
            let failed = results.iter().filter(|r| !r.passed).count();
            emit(out, &config, &results, |r| {
                format!("{} {}{}", if r.passed { "PASS" } else { "FAIL" }, r.name, if r.detail.is_empty() { String::new() } else { format!("  [{}]", r.detail) })
            }, &["name", "passed", "detail"], |r| vec![
                r.name.clone(),
                r.passed.to_string(),
                r.detail.clone(),
            ])?;
            if failed > 0 {
                return Err(CliError::Failed(format!("{failed} checks failed")));
            }
            Ok(())
        }
    }
}

fn chord_row(mode: Mode, i: usize) -> Result<(usize, usize, usize, usize), CliError> {
    use operad_homology::bialgebra::four_t;
    use operad_homology::homology::{rank_q, SparseIntMatrix};
    use operad_homology::star_diagrams::{full_differential, star_slice_basis, BsdElement};
    let j = 2 * i;
    let top: Vec<_> = star_slice_basis(mode, i, j)
        .map_err(CliError::from)?
        .into_iter()
        .filter(|t| t.star_count() == 0)
        .collect();
    let below: Vec<_> = star_slice_basis(mode, i, j - 1)
        .map_err(CliError::from)?
        .into_iter()
        .filter(|t| t.star_count() == 0)
        .collect();
    let index: BTreeMap<_, usize> = top.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect();
    let mut m = SparseIntMatrix::zero(top.len(), below.len());
    for (c, t) in below.iter().enumerate() {
        let x = BsdElement::from_term(mode, j - 1, t.clone());
        let dx = full_differential(&x).map_err(CliError::from)?;
        for (t2, v) in &dx.element.terms {
            m.add_to(index[t2], c, v.clone());
        }
    }
    let betti = top.len() - rank_q(&m);
    let (orank, odim) = four_t::quotient(mode, i);
    Ok((top.len(), orank, odim, betti))
}

fn check_time(out: &OutputArgs, started: Instant) -> Result<(), CliError> {
    if let Some(limit) = out.time_limit {
        if started.elapsed().as_secs() > limit {
            return Err(CliError::Resource(format!("time limit of {limit}s exceeded")));
        }
    }
    Ok(())
}

fn emit<C: Serialize + Clone, R: Serialize>(
    out: &OutputArgs,
    config: &C,
    results: &[R],
    text_line: impl Fn(&R) -> String,
    csv_header: &[&str],
    csv_row: impl Fn(&R) -> Vec<String>,
) -> Result<(), CliError> {
    let body = match out.format {
        FormatArg::Json => {
            let report = Report { config: config.clone(), results: results.iter().collect::<Vec<_>>() };
            let mut s = serde_json::to_string_pretty(&report).expect("serializable report");
            s.push('\n');
            s
        }
        FormatArg::Csv => {
            let mut s = String::new();
            let config_json = serde_json::to_string(config).expect("serializable config");
            let _ = writeln!(s, "# config: {config_json}");
            let _ = writeln!(s, "{}", csv_header.join(","));
            for r in results {
                let cells: Vec<String> = csv_row(r)
                    .into_iter()
                    .map(|c| {
                        if c.contains(',') || c.contains('"') {
                            format!("\"{}\"", c.replace('"', "\"\""))
                        } else {
                            c
                        }
                    })
                    .collect();
                let _ = writeln!(s, "{}", cells.join(","));
            }
            s
        }
        FormatArg::Text => {
            let mut s = String::new();
            let config_json = serde_json::to_string(config).expect("serializable config");
            let _ = writeln!(s, "# {config_json}");
            for r in results {
                let _ = writeln!(s, "{}", text_line(r));
            }
            s
        }
    };
    match &out.output {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(path) => {
            let resolved = resolve_output(path);
            if let Some(parent) = resolved.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            let tmp = resolved.with_extension("tmp");
            {
                let mut f = std::fs::File::create(&tmp)?;
                f.write_all(body.as_bytes())?;
                f.sync_all()?;
            }
            std::fs::rename(&tmp, &resolved)?;
            Ok(())
        }
    }
}

fn resolve_output(path: &std::path::Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("OPERAD_HOMOLOGY_OUT") {
        Some(dir) => PathBuf::from(dir).join(path),
        None => path.to_path_buf(),
    }
}
