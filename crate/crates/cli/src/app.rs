//! Argument parsing and dispatch. Reports go to stdout (or `--out`);
//! timings and diagnostics go to stderr, so reports are byte-identical
//! across runs with the same arguments.
//!
//! Exit status: 0 all checks pass, 1 contradiction (or a rejected
//! certificate, or a proven non-isomorphism), 2 undecided within budget,
//! 3 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use cartan_core::isomorphism::{certify, IsoOutcome};
use cartan_core::search::DEFAULT_BUDGET;
use cartan_core::{verify_certificate, AlgebraDescriptor, LieAlgebra, Prime, SearchConfig};

use crate::analyze::{analyze, render_analysis};
use crate::claims::{overall, render_reports, verify_claims, ClaimParams, Status, Suite};
use crate::files::{export_algebra, CertificateFile};
use crate::report::{Format, Grid};
use crate::source::{resolve, FamilySpec};
use crate::table::{generate_table, render_table, Simplicity, TableRanges};
use crate::{CliError, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(
    name = "cartan",
    version,
    about = "Cartan-type Lie algebras over small prime fields"
)]
pub struct Cli {
    /// Field characteristic.
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u8,
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Trial budget for randomised searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// Write the primary output here instead of stdout (for `iso`: the
    /// certificate file).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an algebra, e.g. `S(2,(2,2))'`, and write it as an algebra file.
    Construct { algebra: String },
    /// Structure summary of a family member or algebra file.
    Analyze { algebra: String },
    /// Dimensions and simplicity of the Cartan-type families against the
    /// listed closed forms.
    Table {
        /// Largest m1 + ... + mn.
        #[arg(long, default_value_t = 6)]
        max_sum: u32,
        /// Skip rows whose Witt algebra W(n, m) is larger than this.
        #[arg(long, default_value_t = 256)]
        max_dim: u64,
    },
    /// Run a verification suite on given or default instances.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// l for the witt suite.
        #[arg(long)]
        l: Option<u32>,
        /// Number of variables (checked against --m).
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated m, e.g. 1,2,1.
        #[arg(long, value_delimiter = ',')]
        m: Option<Vec<u32>>,
    },
    /// Search for an isomorphism between two algebras.
    Iso { source: String, target: String },
    /// Check a certificate file. Family members named in it are rebuilt;
    /// algebras named by hash must be supplied.
    CertVerify {
        certificate: PathBuf,
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        target: Option<String>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let started = Instant::now();
    let result = execute(&cli, out, err);
    let _ = writeln!(err, "elapsed: {:.3} s", started.elapsed().as_secs_f64());
    match result {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Usage(format!("cannot write output: {e}"))),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let p = Prime::new(cli.p).map_err(|e| CliError::Usage(e.to_string()))?;
    let cfg = SearchConfig::new(cli.seed, cli.budget);
    let out_path = cli.out.as_deref();
    match &cli.command {
        Command::Construct { algebra } => {
            let spec = FamilySpec::parse(algebra, p)?;
            let a = spec.build()?;
            emit(&export_algebra(a.algebra()), out_path, out)?;
            let _ = writeln!(err, "{}: dim {}", a.name(), a.dim());
            Ok(0)
        }
        Command::Analyze { algebra } => {
            let r = resolve(algebra, p)?;
            let name = r.descriptor.to_string();
            let (grid, status) = analyze(&name, &r.algebra, &cfg)?;
            emit(&render_analysis(&grid, cli.format, &name), out_path, out)?;
            Ok(status.exit_code())
        }
        Command::Table { max_sum, max_dim } => {
            if !p.is_two() {
                return Err(CliError::Usage("the table is for characteristic 2".into()));
            }
            let ranges = TableRanges {
                max_sum: *max_sum,
                max_dim: *max_dim,
            };
            let rows = generate_table(&ranges, &cfg);
            emit(&render_table(&rows, cli.format), out_path, out)?;
            Ok(table_status(&rows).exit_code())
        }
        Command::Verify { suite, l, n, m } => {
            if !p.is_two() {
                return Err(CliError::Usage(
                    "the suites are for characteristic 2".into(),
                ));
            }
            let params = ClaimParams {
                l: *l,
                n: *n,
                m: m.clone(),
            };
            let reports = verify_claims(*suite, &params, &cfg)?;
            emit(&render_reports(&reports, cli.format), out_path, out)?;
            let status = overall(&reports);
            for r in &reports {
                for line in r.failures() {
                    let _ = writeln!(err, "{line}");
                }
            }
            if status == Status::Contradiction {
                let _ = writeln!(
                    err,
                    "contradiction: at least one instance of the claim is false"
                );
            }
            Ok(status.exit_code())
        }
        Command::Iso { source, target } => iso(source, target, p, &cfg, cli, out, err),
        Command::CertVerify {
            certificate,
            source,
            target,
        } => cert_verify(certificate, source.as_deref(), target.as_deref(), cli, out),
    }
}

/// Pass unless a listed row disagrees with its closed form (other than the
/// annotated one-variable derived Witt rows) or is not simple.
pub fn table_status(rows: &[crate::TableRow]) -> Status {
    let mut status = Status::Pass;
    for r in rows.iter().filter(|r| r.listed) {
        let annotated = r.derived && r.m.len() == 1;
        if (r.agrees() == Some(false) && !annotated) || r.simple == Simplicity::NotSimple {
            return Status::Contradiction;
        }
        if matches!(r.simple, Simplicity::Unknown | Simplicity::Skipped) {
            status = Status::Unknown;
        }
    }
    status
}

fn iso(
    source: &str,
    target: &str,
    p: Prime,
    cfg: &SearchConfig,
    cli: &Cli,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let a = resolve(source, p)?;
    let b = resolve(target, p)?;
    let (search, cert) = certify(
        &a.algebra,
        &b.algebra,
        a.descriptor.clone(),
        b.descriptor.clone(),
        cfg,
    );
    let (outcome, detail, code) = match &search.outcome {
        IsoOutcome::Found(_) => ("isomorphic", "certificate verified".to_string(), 0),
        IsoOutcome::Absent(why) => ("not isomorphic", why.clone(), 1),
        IsoOutcome::Unknown(why) => ("unknown", why.clone(), 2),
    };
    let mut g = Grid::new(&["quantity", "value"]);
    for (k, v) in [
        ("source", a.descriptor.to_string()),
        ("target", b.descriptor.to_string()),
        ("method", format!("{:?}", search.method).to_lowercase()),
        ("replays", search.checks.to_string()),
        ("outcome", outcome.to_string()),
        ("detail", detail),
    ] {
        g.push(vec![k.to_string(), v]);
    }
    emit(&g.render(cli.format, "Isomorphism search"), None, out)?;
    if let (Some(c), Some(path)) = (&cert, cli.out.as_deref()) {
        emit(
            &CertificateFile::from_certificate(c).to_text(),
            Some(path),
            out,
        )?;
        let _ = writeln!(err, "certificate written to {}", path.display());
    }
    Ok(code)
}

/// An algebra named in a certificate, or supplied on the command line.
fn certificate_side(
    named: &AlgebraDescriptor,
    supplied: Option<&str>,
    p: Prime,
    side: &str,
) -> Result<LieAlgebra, CliError> {
    if let Some(arg) = supplied {
        let r = resolve(arg, p)?;
        if let (AlgebraDescriptor::Hash(want), AlgebraDescriptor::Hash(got)) =
            (named, &r.descriptor)
        {
            if want != got {
                return Err(CliError::Usage(format!(
                    "{side} file hash sha256:{got} differs from the certificate's sha256:{want}"
                )));
            }
        }
        return Ok(r.algebra);
    }
    match named {
        AlgebraDescriptor::Family { family, derived } => {
            let spec = FamilySpec {
                family: family.clone(),
                derived: *derived,
            };
            Ok(spec.build()?.into_algebra())
        }
        other => Err(CliError::Usage(format!(
            "the certificate names its {side} as {other}; supply it with --{side}"
        ))),
    }
}

fn cert_verify(
    path: &Path,
    source: Option<&str>,
    target: Option<&str>,
    cli: &Cli,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let file = CertificateFile::parse(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let cert = file.to_certificate();
    let p = file.prime();
    let a = certificate_side(&cert.source, source, p, "source")?;
    let b = certificate_side(&cert.target, target, p, "target")?;
    let verdict = verify_certificate(&a, &b, &cert.matrix);
    let mut g = Grid::new(&["quantity", "value"]);
    for (k, v) in [
        ("source", cert.source.to_string()),
        ("target", cert.target.to_string()),
        ("dim", cert.matrix.nrows().to_string()),
        ("verdict", verdict.to_string()),
    ] {
        g.push(vec![k.to_string(), v]);
    }
    emit(
        &g.render(cli.format, "Certificate check"),
        cli.out.as_deref(),
        out,
    )?;
    Ok(if verdict.is_accepted() { 0 } else { 1 })
}
