//! Command-line front end for `fermirep`: builds representations into JSON
//! matrix files, runs verification suites, prints selective-function and
//! structure-constant tables, and evaluates typed operator expressions.

pub mod expr;
pub mod matrix_file;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fermirep::fock::binomial;
use fermirep::liealg::{
    conjugate_rep, gell_mann, generalized_gell_mann, spin_matrices, structure_constants,
};
use fermirep::schwinger::{self, selective_function};
use fermirep::verify::{self, SuiteOptions};
use fermirep::{
    Error as CoreError, FockOperator, GeneratorSet, RepMeta, RepresentationResult,
    VerificationReport,
};
use thiserror::Error;

pub use expr::{Expr, ExprError, OperatorExpression};
pub use matrix_file::{Entry, Manifest, MatrixFile, Metadata, MANIFEST_NAME};

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed file: {0}")]
    Format(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(_) | CliError::Expr(_) => exit::USAGE,
            CliError::Io { .. } | CliError::Format(_) => exit::IO,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fermirep",
    version,
    about = "Fermionic Schwinger representations of U(n) and U(C(n,m))"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a representation and write one matrix file per generator.
    Build(BuildArgs),
    /// Run the verification suite, or verify a build directory.
    Verify(VerifyArgs),
    /// Print selective polynomials or structure constants.
    Table(TableArgs),
    /// Evaluate an operator expression.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Group {
    UnStandard,
    UnNonstandard,
    Ucnm,
    Mixed,
}

impl Group {
    fn name(self) -> &'static str {
        match self {
            Group::UnStandard => "un-standard",
            Group::UnNonstandard => "un-nonstandard",
            Group::Ucnm => "ucnm",
            Group::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub group: Group,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: Option<usize>,
    /// Place the generators on the N = m sector (mixed only).
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub xi_minus: bool,
    /// Place the conjugate generators on the N = n − m sector (mixed only).
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub xi_plus: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "n-max", alias = "n", default_value_t = 4)]
    pub n_max: usize,
    #[arg(long, default_value_t = fermirep::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Verify the matrices of a build directory instead of running the suite.
    #[arg(long)]
    pub from: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Selective,
    Structure,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(value_enum)]
    pub what: Table,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub expr: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compare against a matrix file; exit 1 when they differ by more than `--tol`.
    #[arg(long)]
    pub compare: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub tol: f64,
}

/// Runs a parsed command, writing normal output to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Build(a) => cmd_build(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Table(a) => cmd_table(&a, out),
        Command::Eval(a) => cmd_eval(&a, out),
    }
}

fn check_modes(n: usize) -> Result<(), CliError> {
    let cap = fermirep::max_modes();
    if n == 0 || n > cap {
        return Err(CliError::Usage(format!("n = {n} outside 1..={cap}")));
    }
    Ok(())
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

/// Generators used for a `d`-dimensional space: Gell-Mann at three, the
/// generalized set otherwise.
pub fn default_generators(d: usize) -> Result<(GeneratorSet, String), CliError> {
    if d == 3 {
        Ok((gell_mann(), "gell-mann".into()))
    } else {
        Ok((
            generalized_gell_mann(d)?,
            format!("generalized-gell-mann({d})"),
        ))
    }
}

/// Resolves a generator descriptor written into a manifest.
pub fn resolve_generators(desc: &str) -> Result<GeneratorSet, CliError> {
    let arg = |s: &str, prefix: &str| -> Option<String> {
        s.strip_prefix(prefix)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
            .map(str::to_string)
    };
    let dim = |s: String| {
        s.parse::<usize>()
            .map_err(|_| CliError::Format(format!("bad generator dimension in `{desc}`")))
    };
    if desc == "gell-mann" {
        Ok(gell_mann())
    } else if let Some(d) = arg(desc, "generalized-gell-mann") {
        Ok(generalized_gell_mann(dim(d)?)?)
    } else if let Some(d) = arg(desc, "spin") {
        Ok(spin_matrices(dim(d)?)?)
    } else if let Some(inner) = arg(desc, "conjugate") {
        let g = resolve_generators(&inner)?;
        Ok(conjugate_rep(&g, g.dim())?)
    } else {
        Err(CliError::Format(format!("unknown generator set `{desc}`")))
    }
}

/// Builds a group in memory, returning the representation, its generators and the manifest.
pub fn build_group(
    group: Group,
    n: usize,
    m: Option<usize>,
    xi: (bool, bool),
) -> Result<
    (
        RepresentationResult,
        GeneratorSet,
        Option<GeneratorSet>,
        Manifest,
    ),
    CliError,
> {
    check_modes(n)?;
    let need_m =
        || m.ok_or_else(|| CliError::Usage(format!("--m is required for {}", group.name())));
    let (rep, gens, gens2, desc, desc2) = match group {
        Group::UnStandard => {
            let (g, d) = default_generators(n)?;
            (schwinger::standard_rep(&g, n)?, g, None, d, None)
        }
        Group::UnNonstandard => {
            let (g, d) = default_generators(n)?;
            (schwinger::nssfr_un(&g, n)?, g, None, d, None)
        }
        Group::Ucnm | Group::Mixed => {
            let m = need_m()?;
            if m == 0 || m >= n {
                return Err(CliError::Usage(format!(
                    "m = {m} outside 1..={}",
                    n.saturating_sub(1)
                )));
            }
            let (g, d) = default_generators(binomial(n, m))?;
            if group == Group::Ucnm {
                (schwinger::rep_ucnm(&g, n, m)?, g, None, d, None)
            } else {
                let g2 = conjugate_rep(&g, g.dim())?;
                let rep = schwinger::mixed_rep(&g, &g2, n, m, xi.0, xi.1)?;
                let d2 = format!("conjugate({d})");
                (rep, g, Some(g2), d, Some(d2))
            }
        }
    };
    let files = rep
        .meta
        .labels
        .iter()
        .enumerate()
        .map(|(k, label)| format!("{:03}_{}.json", k + 1, sanitize(label)))
        .collect();
    let manifest = Manifest {
        group: group.name().into(),
        variant: rep.meta.variant,
        n,
        m: rep.meta.m,
        xi: rep.meta.xi,
        generators: desc,
        generators2: desc2,
        dim: 1 << n,
        labels: rep.meta.labels.clone(),
        files,
    };
    Ok((rep, gens, gens2, manifest))
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

fn cmd_build(a: &BuildArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (rep, _, _, manifest) = build_group(a.group, a.n, a.m, (a.xi_minus, a.xi_plus))?;
    fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    for (k, op) in rep.ops.iter().enumerate() {
        let meta = Metadata {
            construction: rep.meta.variant.name().into(),
            label: Some(manifest.labels[k].clone()),
            index: Some(k),
            m: rep.meta.m,
            generators: Some(manifest.generators.clone()),
            expression: None,
        };
        MatrixFile::from_operator(op, meta).write(&a.out.join(&manifest.files[k]))?;
    }
    manifest.write(&a.out)?;
    emit(
        out,
        &format!(
            "wrote {} generators ({}x{}) to {}\n",
            rep.len(),
            manifest.dim,
            manifest.dim,
            a.out.display()
        ),
    )?;
    Ok(exit::PASS)
}

/// Reads a build directory back into a representation and its generators.
pub fn load_build(
    dir: &Path,
) -> Result<(RepresentationResult, GeneratorSet, Option<GeneratorSet>), CliError> {
    let manifest = Manifest::read(dir)?;
    if manifest.files.len() != manifest.labels.len() {
        return Err(CliError::Format(
            "manifest lists mismatched files and labels".into(),
        ));
    }
    let ops = manifest
        .files
        .iter()
        .map(|f| {
            let op = MatrixFile::read(&dir.join(f))?.to_operator()?;
            if op.modes() != manifest.n {
                return Err(CliError::Format(format!(
                    "{f} acts on {} modes, manifest says {}",
                    op.modes(),
                    manifest.n
                )));
            }
            Ok(op)
        })
        .collect::<Result<Vec<FockOperator>, CliError>>()?;
    let gens = resolve_generators(&manifest.generators)?;
    let gens2 = manifest
        .generators2
        .as_deref()
        .map(resolve_generators)
        .transpose()?;
    let rep = RepresentationResult {
        ops,
        meta: RepMeta {
            variant: manifest.variant,
            n: manifest.n,
            m: manifest.m,
            labels: manifest.labels,
            xi: manifest.xi,
        },
    };
    Ok((rep, gens, gens2))
}

fn render(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(CliError::Usage(format!(
            "tolerance must be positive, got {}",
            a.tol
        )));
    }
    let report = match &a.from {
        Some(dir) => {
            let (rep, gens, gens2) = load_build(dir)?;
            verify::verify_representation(&rep, &gens, gens2.as_ref(), a.tol)?
        }
        None => {
            check_modes(a.n_max)?;
            verify::run_suite_with(&SuiteOptions::new(a.n_max, a.tol))?
        }
    };
    let text = render(&report, a.format);
    match &a.report {
        Some(path) => {
            fs::write(path, &text).map_err(|e| CliError::io(path, e))?;
            emit(out, report.to_text().lines().last().unwrap_or_default())?;
            emit(out, "\n")?;
        }
        None => emit(out, &text)?,
    }
    Ok(if report.overall {
        exit::PASS
    } else {
        exit::FAIL
    })
}

/// Formats a real number, as an integer when it is one.
pub fn format_real(v: f64) -> String {
    if (v - v.round()).abs() < 1e-12 {
        format!("{}", v.round() as i64)
    } else {
        let s = format!("{v:.12}");
        s.trim_end_matches('0').to_string()
    }
}

fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    match a.what {
        Table::Selective => {
            let ms: Vec<usize> = match a.m {
                Some(m) => vec![m],
                None => (1..a.n.max(1)).collect(),
            };
            if ms.is_empty() {
                return Err(CliError::Usage(format!(
                    "no selective functions for n = {}",
                    a.n
                )));
            }
            for m in ms {
                let p = selective_function(a.n, m)?;
                emit(out, &format!("f_{}^({})(x) = {p}\n", a.n, m))?;
            }
        }
        Table::Structure => {
            let (g, desc) = default_generators(a.n)?;
            let c = structure_constants(&g, fermirep::DEFAULT_TOL)?;
            emit(out, &format!("# nonzero f_ijk, i < j < k, for {desc}\n"))?;
            let k = g.len();
            for i in 0..k {
                for j in (i + 1)..k {
                    for l in (j + 1)..k {
                        let f = c.f(i, j, l);
                        if f.abs() > 1e-12 {
                            let sep = if k > 9 { "," } else { "" };
                            emit(
                                out,
                                &format!(
                                    "f_{}{sep}{}{sep}{} = {}\n",
                                    i + 1,
                                    j + 1,
                                    l + 1,
                                    format_real(f)
                                ),
                            )?;
                        }
                    }
                }
            }
        }
    }
    Ok(exit::PASS)
}

/// Renders an operator as a dense grid for small spaces, a sparse list otherwise.
pub fn render_operator(op: &FockOperator) -> String {
    let cell = |v: fermirep::Complex64| {
        if v.im == 0.0 {
            format_real(v.re)
        } else if v.re == 0.0 {
            format!("{}i", format_real(v.im))
        } else {
            format!("{}{:+}i", format_real(v.re), v.im)
        }
    };
    let mut s = String::new();
    if op.dim() <= 16 {
        let dense = op.to_dense();
        let cells: Vec<Vec<String>> = (0..op.dim())
            .map(|r| (0..op.dim()).map(|c| cell(dense[r][c])).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            s.push_str(line.join(" ").trim_end());
            s.push('\n');
        }
    } else {
        for (r, c, v) in op.entries() {
            s.push_str(&format!("({r}, {c}) {}\n", cell(v)));
        }
    }
    s
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    check_modes(a.n)?;
    let parsed = OperatorExpression::parse(&a.expr, a.n)?;
    let op = parsed.eval()?;
    if let Some(path) = &a.out {
        let meta = Metadata {
            construction: "expression".into(),
            expression: Some(parsed.to_string()),
            ..Metadata::default()
        };
        MatrixFile::from_operator(&op, meta).write(path)?;
    }
    match &a.compare {
        Some(path) => {
            let other = MatrixFile::read(path)?.to_operator()?;
            if other.modes() != op.modes() {
                emit(
                    out,
                    &format!("mismatch: {} modes against {}\n", op.modes(), other.modes()),
                )?;
                return Ok(exit::FAIL);
            }
            let diff = op.max_abs_diff(&other)?;
            let same = diff <= a.tol;
            emit(
                out,
                &format!(
                    "{} max |difference| = {diff:e} against {}\n",
                    if same { "match:" } else { "mismatch:" },
                    path.display()
                ),
            )?;
            Ok(if same { exit::PASS } else { exit::FAIL })
        }
        None => {
            if a.out.is_none() {
                emit(out, &render_operator(&op))?;
            }
            Ok(exit::PASS)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Result<i32, CliError>, String) {
        let cli = Cli::try_parse_from(std::iter::once("fermirep").chain(args.iter().copied()))
            .expect("arguments parse");
        let mut out = Vec::new();
        let code = run(cli, &mut out);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn selective_table_lines() {
        let (code, text) = run_args(&["table", "selective", "--n", "4", "--m", "2"]);
        assert_eq!(code.unwrap(), 0);
        assert_eq!(text, "f_4^(2)(x) = -x^2 + 4x - 3\n");
        let (_, text) = run_args(&["table", "selective", "--n", "3"]);
        assert_eq!(text, "f_3^(1)(x) = -x + 2\nf_3^(2)(x) = x - 1\n");
        let (code, _) = run_args(&["table", "selective", "--n", "4", "--m", "4"]);
        assert_eq!(code.unwrap_err().exit_code(), exit::USAGE);
    }

    #[test]
    fn structure_table_for_three() {
        let (code, text) = run_args(&["table", "structure", "--n", "3"]);
        assert_eq!(code.unwrap(), 0);
        assert!(text.lines().any(|l| l == "f_123 = 1"), "{text}");
        assert!(
            text.lines().any(|l| l == "f_458 = 0.866025403784"),
            "{text}"
        );
    }

    #[test]
    fn eval_prints_dense_grid() {
        let (code, text) = run_args(&["eval", "--expr", "adag(1)*a(2) + adag(2)*a(1)", "--n", "2"]);
        assert_eq!(code.unwrap(), 0);
        assert_eq!(text, "0 0 0 0\n0 0 1 0\n0 1 0 0\n0 0 0 0\n");
        let (code, _) = run_args(&["eval", "--expr", "a(5)", "--n", "3"]);
        assert_eq!(code.unwrap_err().exit_code(), exit::USAGE);
    }

    #[test]
    fn build_rejects_bad_sector() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let (code, _) = run_args(&[
            "build", "--group", "ucnm", "--n", "4", "--m", "0", "--out", out,
        ]);
        assert_eq!(code.unwrap_err().exit_code(), exit::USAGE);
        let (code, _) = run_args(&["build", "--group", "ucnm", "--n", "4", "--out", out]);
        assert_eq!(code.unwrap_err().exit_code(), exit::USAGE);
        let (code, _) = run_args(&[
            "build", "--group", "mixed", "--n", "4", "--m", "2", "--out", out,
        ]);
        assert_eq!(code.unwrap_err().exit_code(), exit::USAGE);
    }

    #[test]
    fn build_then_verify_directory() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let (code, _) = run_args(&[
            "build", "--group", "mixed", "--n", "3", "--m", "1", "--out", out,
        ]);
        assert_eq!(code.unwrap(), 0);
        let (code, text) = run_args(&["verify", "--from", out]);
        assert_eq!(code.unwrap(), 0, "{text}");
        let manifest = Manifest::read(dir.path()).unwrap();
        assert_eq!(
            manifest.generators2.as_deref(),
            Some("conjugate(gell-mann)")
        );
    }

    #[test]
    fn missing_build_directory_is_io() {
        let (code, _) = run_args(&["verify", "--from", "/nonexistent/fermirep"]);
        assert_eq!(code.unwrap_err().exit_code(), exit::IO);
    }

    #[test]
    fn descriptors_resolve() {
        assert_eq!(resolve_generators("gell-mann").unwrap().len(), 8);
        assert_eq!(
            resolve_generators("generalized-gell-mann(4)")
                .unwrap()
                .len(),
            15
        );
        assert_eq!(resolve_generators("spin(5)").unwrap().len(), 3);
        assert_eq!(resolve_generators("conjugate(gell-mann)").unwrap().len(), 8);
        assert!(resolve_generators("pauli").is_err());
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(-0.5), "-0.5");
        assert_eq!(format_real(3f64.sqrt() / 2.0), "0.866025403784");
    }
}
