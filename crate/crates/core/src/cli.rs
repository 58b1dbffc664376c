//! The `geninv` command line: matrix files in, inverses, factors and
//! verification reports out.
//!
//! Exit codes: 0 success, 1 verification failed, 2 usage / I/O / parse
//! error, 3 a mathematical precondition failed (shape, zero matrix, ...).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::decomp::{core_ep_pair_decomposition, pair_svd_decomposition};
use crate::error::Error;
use crate::geninv::{self, CoreEpRoute, GeninvRoute, WeightedCoreEpRoute};
use crate::genrand::{self, Seed};
use crate::matcore::{c64, pinv, CMat, ComplexMatrix, ToleranceConfig};
use crate::verify::{self, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

/// On-disk matrix: `{"rows": m, "cols": n, "data": [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self::from_mat(m.as_mat())
    }

    fn from_mat(m: &CMat) -> Self {
        let data = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        if self.data.len() != self.rows {
            return Err(CliError::Parse(format!(
                "header says {} rows, data has {}",
                self.rows,
                self.data.len()
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for (i, row) in self.data.iter().enumerate() {
            if row.len() != self.cols {
                return Err(CliError::Parse(format!(
                    "row {i} has {} entries, header says {}",
                    row.len(),
                    self.cols
                )));
            }
            entries.extend(row.iter().map(|&[re, im]| c64(re, im)));
        }
        ComplexMatrix::new(self.rows, self.cols, entries).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        // serde_json prints the shortest decimal that round-trips each f64
        serde_json::to_string(self).expect("matrix serializes")
    }
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Usage(String),
    Precondition(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Precondition(_) => EXIT_PRECONDITION,
            _ => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Precondition(e) => write!(f, "precondition failed: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Precondition(e)
    }
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let file: MatrixFile =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    file.to_matrix()
        .map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))
}

pub fn write_matrix(path: &Path, m: &ComplexMatrix) -> Result<(), CliError> {
    write_text(path, &MatrixFile::from_matrix(m).to_json())
}

fn write_mat(path: &Path, m: &CMat) -> Result<(), CliError> {
    write_text(path, &MatrixFile::from_mat(m).to_json())
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, format!("{text}\n")).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[derive(Parser, Debug)]
#[command(name = "geninv", version, about = "Generalized inverses of complex matrices")]
struct Cli {
    /// Residual tolerance used by every verification threshold.
    #[arg(long, global = true, value_name = "TOL")]
    tol_residual: Option<f64>,
    /// Factor in the rank cutoff factor * max(m, n) * eps * sigma_max.
    #[arg(long, global = true, value_name = "FACTOR")]
    tol_rank_factor: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute an inverse and print the residuals of its defining system.
    Compute {
        kind: Kind,
        #[arg(short = 'A', value_name = "FILE")]
        a: PathBuf,
        #[arg(short = 'B', value_name = "FILE")]
        b: Option<PathBuf>,
        #[arg(short = 'W', value_name = "FILE")]
        w: Option<PathBuf>,
        /// Route name; see the README for the routes of each kind.
        #[arg(long)]
        route: Option<String>,
        /// Output matrix file; the matrix goes to stdout when omitted.
        #[arg(short = 'o', value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Build a pair decomposition and report its reconstruction residuals.
    Decomp {
        kind: DecompKind,
        #[arg(short = 'A', value_name = "FILE")]
        a: PathBuf,
        #[arg(short = 'B', value_name = "FILE")]
        b: PathBuf,
        /// Directory receiving one matrix file per factor.
        #[arg(short = 'o', value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Check a candidate against a characterization; exit 0 iff it passes.
    Verify {
        theorem: Theorem,
        #[arg(short = 'A', value_name = "FILE")]
        a: PathBuf,
        #[arg(short = 'B', value_name = "FILE")]
        b: Option<PathBuf>,
        #[arg(short = 'W', value_name = "FILE")]
        w: Option<PathBuf>,
        #[arg(short = 'X', value_name = "FILE")]
        x: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Write seeded random matrices with planted structure.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Replay a worked example.
    Example { name: ExampleName },
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// m x n matrix of rank r.
    Rank {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short = 'o', value_name = "FILE")]
        out: PathBuf,
    },
    /// n x n matrix of index k.
    Index {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        index: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short = 'o', value_name = "FILE")]
        out: PathBuf,
    },
    /// Pair (A m x n, B n x m) with core part of size t and index k.
    Pair {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
        /// Two files: A then B.
        #[arg(short = 'o', num_args = 2, value_names = ["A_FILE", "B_FILE"], required = true)]
        out: Vec<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Pinv,
    Drazin,
    CoreEp,
    Bt,
    GeninvWrt,
    WBt,
    WCoreEp,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum DecompKind {
    PairSvd,
    CoreEpPair,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Theorem {
    Penrose,
    GeninvSpaces,
    Projectors,
    RangeSystem,
    ProductSystem,
    Equivalence,
    GeninvProperties,
    CoreEp,
    Drazin,
    Bt,
    WCoreEpSystem,
    WCoreEp,
    WBtSystem,
    WBt,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ExampleName {
    /// 3x3 inverse with respect to a diagonal projector
    Worked,
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn tolerances(cli: &Cli) -> Result<ToleranceConfig, CliError> {
    let mut cfg = ToleranceConfig::default();
    if let Some(t) = cli.tol_residual {
        cfg.residual_tol = t;
    }
    if let Some(f) = cli.tol_rank_factor {
        cfg.rank_tol_factor = f;
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn io<T>(r: std::io::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Io(e.to_string()))
}

fn need<'p>(path: &'p Option<PathBuf>, flag: &str, what: &str) -> Result<&'p Path, CliError> {
    path.as_deref()
        .ok_or_else(|| CliError::Usage(format!("{what} needs {flag} <FILE>")))
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = tolerances(&cli)?;
    match cli.command {
        Command::Compute {
            kind,
            a,
            b,
            w,
            route,
            out: dest,
        } => {
            let a = read_matrix(&a)?;
            let (x, report) = compute(kind, &a, &b, &w, route.as_deref(), &cfg)?;
            let summary = residual_summary(&report);
            match dest {
                Some(path) => {
                    write_matrix(&path, &x)?;
                    io(writeln!(out, "wrote {} ({}x{})", path.display(), x.rows(), x.cols()))?;
                    io(write!(out, "{summary}"))?;
                }
                None => {
                    io(writeln!(out, "{}", MatrixFile::from_matrix(&x).to_json()))?;
                    io(write!(err, "{summary}"))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Decomp { kind, a, b, out: dest } => {
            let a = read_matrix(&a)?;
            let b = read_matrix(&b)?;
            decomp(kind, &a, &b, dest.as_deref(), &cfg, out)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            theorem,
            a,
            b,
            w,
            x,
            json,
        } => {
            let a = read_matrix(&a)?;
            let report = verify_cmd(theorem, &a, &b, &w, &x, &cfg)?;
            if json {
                io(writeln!(out, "{}", report.to_json()))?;
            } else {
                io(writeln!(out, "{report}"))?;
            }
            Ok(if report.overall { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Gen { what } => {
            generate(what, out)?;
            Ok(EXIT_OK)
        }
        Command::Example { name } => match name {
            ExampleName::Worked => worked_example(&cfg, out),
        },
    }
}

fn residual_summary(report: &VerificationReport) -> String {
    let mut s = format!("residuals ({}):\n", report.theorem_id);
    for c in &report.conditions {
        s.push_str(&format!("  {:<32} {:.3e}\n", c.label, c.residual));
    }
    s
}

fn parse_route<R>(route: Option<&str>, kind: &str) -> Result<R, CliError>
where
    R: std::str::FromStr + Default,
    R::Err: std::fmt::Display,
{
    match route {
        None => Ok(R::default()),
        Some(name) => name
            .parse::<R>()
            .map_err(|e| CliError::Usage(format!("{e} for {kind}"))),
    }
}

fn compute(
    kind: Kind,
    a: &ComplexMatrix,
    b: &Option<PathBuf>,
    w: &Option<PathBuf>,
    route: Option<&str>,
    cfg: &ToleranceConfig,
) -> Result<(ComplexMatrix, VerificationReport), CliError> {
    let routed = matches!(kind, Kind::CoreEp | Kind::GeninvWrt | Kind::WCoreEp);
    if route.is_some() && !routed {
        return Err(CliError::Usage(format!("{kind:?} has a single route")));
    }
    Ok(match kind {
        Kind::Pinv => {
            let x = pinv(a, cfg)?;
            let r = verify::check_penrose(a, &x, cfg)?;
            (x, r)
        }
        Kind::Drazin => {
            let x = geninv::drazin(a, cfg)?;
            let r = verify::check_drazin(a, &x, cfg)?;
            (x, r)
        }
        Kind::CoreEp => {
            let route: CoreEpRoute = parse_route(route, "core-ep")?;
            let x = geninv::core_ep(a, cfg, route)?;
            let r = verify::check_core_ep(a, &x, cfg)?;
            (x, r)
        }
        Kind::Bt => {
            let x = geninv::bt(a, cfg)?;
            let r = verify::check_geninv_wrt_spaces(a, a, &x, cfg)?;
            (x, r)
        }
        Kind::GeninvWrt => {
            let b = read_matrix(need(b, "-B", "geninv-wrt")?)?;
            let route: GeninvRoute = parse_route(route, "geninv-wrt")?;
            let x = geninv::geninv_wrt(a, &b, cfg, route)?;
            let r = verify::check_range_system(a, &b, &x, cfg)?;
            (x, r)
        }
        Kind::WBt => {
            let w = read_matrix(need(w, "-W", "w-bt")?)?;
            let x = geninv::w_bt(a, &w, cfg)?;
            let r = verify::check_w_bt_system(a, &w, &x, cfg)?;
            (x, r)
        }
        Kind::WCoreEp => {
            let w = read_matrix(need(w, "-W", "w-core-ep")?)?;
            let route: WeightedCoreEpRoute = parse_route(route, "w-core-ep")?;
            let x = geninv::w_core_ep(a, &w, cfg, route)?;
            let r = verify::check_w_core_ep_system(a, &w, &x, cfg)?;
            (x, r)
        }
    })
}

fn decomp(
    kind: DecompKind,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    dir: Option<&Path>,
    cfg: &ToleranceConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let rel = |err: f64, m: &ComplexMatrix| err / m.frobenius_norm().max(1.0);
    let mut lines = Vec::new();
    let mut files: Vec<(&str, CMat)> = Vec::new();
    match kind {
        DecompKind::PairSvd => {
            let d = pair_svd_decomposition(a, b, cfg)?;
            let (ra, rb) = d.row_orthonormality_residuals();
            lines.push(format!("r = {}, s = {}", d.r, d.s));
            lines.push(format!(
                "reconstruction A: {:.3e}",
                rel((d.reconstruct_a() - a.as_mat()).norm(), a)
            ));
            lines.push(format!(
                "reconstruction B: {:.3e}",
                rel((d.reconstruct_b() - b.as_mat()).norm(), b)
            ));
            lines.push(format!("A1A1*+A2A2*-I: {ra:.3e}"));
            lines.push(format!("B1B1*+B2B2*-I: {rb:.3e}"));
            files.push(("sigma_a", d.sigma_a_mat()));
            files.push(("sigma_b", d.sigma_b_mat()));
            files.extend([("U", d.u), ("V", d.v), ("A1", d.a1), ("A2", d.a2), ("B1", d.b1), ("B2", d.b2)]);
        }
        DecompKind::CoreEpPair => {
            let d = core_ep_pair_decomposition(a, b, cfg)?;
            let (nab, nba) = d.nilpotency_residuals();
            lines.push(format!(
                "t = {}, k = {} (Ind(AB) = {}, Ind(BA) = {})",
                d.t, d.k, d.index_ab, d.index_ba
            ));
            lines.push(format!(
                "reconstruction A: {:.3e}",
                rel((d.reconstruct_a() - a.as_mat()).norm(), a)
            ));
            lines.push(format!(
                "reconstruction B: {:.3e}",
                rel((d.reconstruct_b() - b.as_mat()).norm(), b)
            ));
            lines.push(format!(
                "lower-left blocks: {:.3e}, {:.3e}",
                d.lower_left.0, d.lower_left.1
            ));
            lines.push(format!("nilpotency A2B2: {nab:.3e}, B2A2: {nba:.3e}"));
            files.extend([
                ("U", d.u),
                ("V", d.v),
                ("A1", d.a1),
                ("A12", d.a12),
                ("A2", d.a2),
                ("B1", d.b1),
                ("B12", d.b12),
                ("B2", d.b2),
            ]);
        }
    }
    if let Some(dir) = dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        for (name, m) in &files {
            // empty blocks have no valid file form
            if m.nrows() > 0 && m.ncols() > 0 {
                write_mat(&dir.join(format!("{name}.json")), m)?;
            } else {
                lines.push(format!("{name} is empty ({}x{}), not written", m.nrows(), m.ncols()));
            }
        }
    }
    for l in lines {
        io(writeln!(out, "{l}"))?;
    }
    Ok(())
}

fn verify_cmd(
    theorem: Theorem,
    a: &ComplexMatrix,
    b: &Option<PathBuf>,
    w: &Option<PathBuf>,
    x: &Option<PathBuf>,
    cfg: &ToleranceConfig,
) -> Result<VerificationReport, CliError> {
    let name = format!("{theorem:?}");
    let load = |p: &Option<PathBuf>, flag: &str| -> Result<ComplexMatrix, CliError> { read_matrix(need(p, flag, &name)?) };
    use Theorem::*;
    let report = match theorem {
        GeninvProperties => verify::check_a01_properties(a, &load(b, "-B")?, cfg)?,
        Penrose => verify::check_penrose(a, &load(x, "-X")?, cfg)?,
        CoreEp => verify::check_core_ep(a, &load(x, "-X")?, cfg)?,
        Drazin => verify::check_drazin(a, &load(x, "-X")?, cfg)?,
        Bt => verify::check_bt(a, &load(x, "-X")?, cfg)?,
        GeninvSpaces | Projectors | RangeSystem | ProductSystem | Equivalence => {
            let (bm, xm) = (load(b, "-B")?, load(x, "-X")?);
            let check = match theorem {
                GeninvSpaces => verify::check_geninv_wrt_spaces,
                Projectors => verify::check_projector_theorem,
                RangeSystem => verify::check_range_system,
                ProductSystem => verify::check_product_system,
                _ => verify::check_equiv_theorem,
            };
            check(a, &bm, &xm, cfg)?
        }
        WCoreEpSystem | WCoreEp | WBtSystem | WBt => {
            let (wm, xm) = (load(w, "-W")?, load(x, "-X")?);
            let check = match theorem {
                WCoreEpSystem => verify::check_w_core_ep_system,
                WCoreEp => verify::check_w_core_ep,
                WBtSystem => verify::check_w_bt_system,
                _ => verify::check_w_bt,
            };
            check(a, &wm, &xm, cfg)?
        }
    };
    Ok(report)
}

fn generate(what: GenCommand, out: &mut dyn Write) -> Result<(), CliError> {
    match what {
        GenCommand::Rank {
            rows,
            cols,
            rank,
            seed,
            out: path,
        } => {
            let m = genrand::random_matrix_with_rank(rows, cols, rank, Seed(seed))?;
            write_matrix(&path, &m)?;
            io(writeln!(out, "wrote {} ({rows}x{cols}, rank {rank})", path.display()))?;
        }
        GenCommand::Index { n, index, seed, out: path } => {
            let m = genrand::random_with_index(n, index, Seed(seed))?;
            write_matrix(&path, &m)?;
            io(writeln!(out, "wrote {} ({n}x{n}, index {index})", path.display()))?;
        }
        GenCommand::Pair {
            rows,
            cols,
            t,
            k,
            seed,
            out: paths,
        } => {
            let (a, b) = genrand::random_pair_with_core_ep_structure(rows, cols, t, k, Seed(seed))?;
            write_matrix(&paths[0], &a)?;
            write_matrix(&paths[1], &b)?;
            io(writeln!(
                out,
                "wrote {} ({rows}x{cols}) and {} ({cols}x{rows}), t = {t}, k = {k}",
                paths[0].display(),
                paths[1].display()
            ))?;
        }
    }
    Ok(())
}

/// A = [[1,0,0],[0,1,2],[0,0,0]], B = diag(1,0,1). The inverse of A with
/// respect to B is [[1,0,0],[0,0,0],[0,1/2,0]]. The variant
/// with 1 in position (3,3) is returned alongside; it does not satisfy
/// AX = P_AB.
pub fn worked_example_matrices() -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let a = ComplexMatrix::from_real_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 2.0], [0.0, 0.0, 0.0]]).expect("valid");
    let b = ComplexMatrix::diagonal(&[1.0, 0.0, 1.0]);
    let variant = ComplexMatrix::from_real_rows(&[[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.5, 1.0]]).expect("valid");
    (a, b, variant)
}

fn worked_example(cfg: &ToleranceConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let (a, b, variant) = worked_example_matrices();
    let x = geninv::geninv_wrt(&a, &b, cfg, GeninvRoute::Definition)?;
    io(writeln!(out, "A = {a}"))?;
    io(writeln!(out, "B = {b}"))?;
    io(writeln!(out, "computed A^(B) = (ABB^+)^+ = {x}"))?;
    for route in GeninvRoute::ALL {
        let y = geninv::geninv_wrt(&a, &b, cfg, route)?;
        io(writeln!(out, "  route {:<13} distance to computed: {:.3e}", route.name(), (&y - &x).frobenius_norm()))?;
    }
    io(writeln!(out, "\nsystem check of the computed inverse:"))?;
    let good = verify::check_product_system(&a, &b, &x, cfg)?;
    io(writeln!(out, "{good}"))?;
    io(writeln!(out, "\nvariant with entry (3,3) = 1: {variant}"))?;
    let bad = verify::check_product_system(&a, &b, &variant, cfg)?;
    io(writeln!(out, "{bad}"))?;
    let penrose = verify::check_penrose(&a, &variant, cfg)?;
    let ax_residual = bad.condition("AX=P_AB").map_or(f64::NAN, |c| c.residual);
    io(writeln!(
        out,
        "\nflag: the (3,3) = 1 variant is not the inverse of A with respect to B; \
         ||AX - P_AB||_F = {ax_residual:.3e}, (AX)* = AX {}",
        if penrose.passed(verify::PENROSE_III) == Some(true) { "holds" } else { "fails" }
    ))?;
    Ok(if good.overall { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
