//! `gqs`: verification reports for generalized quantum statistics gradings.
//!
//! Exit status: 0 when every check passes, 1 when any check fails, 2 on
//! invalid parameters and 3 when an enumeration exceeds the search guard.
//! A relative `--out` path is resolved against `GQS_REPORT_DIR` when set.

pub mod checks;
pub mod report;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gqs_core::algebras::{build, Algebra, FamilyTag};
use gqs_core::cases::{build_caos, catalog, find_case, CaseSpec};
use gqs_core::enumerate::{enumerate_gradings, reconcile, EnumerateError, SearchSpace};
use gqs_core::relations::{compare_with_table, extract_triple_coefficients, TemplateId};
use rayon::prelude::*;
use thiserror::Error;

use crate::checks::case_checks;
use crate::report::{CheckRecord, ReportDocument, Section, Timing};

pub const REPORT_DIR_VAR: &str = "GQS_REPORT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("search space too large: {0}")]
    Guard(String),
    #[error("cannot write report: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Io(_) => 2,
            CliError::Guard(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    /// `B(0|n) = osp(1|2n)`, takes only `--n`.
    #[value(name = "B0")]
    B0,
    /// `C(n) = osp(2|2n-2)`, takes only `--n`.
    #[value(name = "C")]
    C,
    #[value(name = "D")]
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Markdown,
}

#[derive(Debug, Clone, Args)]
pub struct AlgebraArgs {
    #[arg(long, ignore_case = true)]
    pub family: FamilyArg,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
}

impl AlgebraArgs {
    pub fn tag(&self) -> Result<FamilyTag, CliError> {
        let need = |v: Option<usize>, name: &str| {
            v.ok_or_else(|| CliError::Invalid(format!("--{name} is required for family {:?}", self.family)))
        };
        let tag = match self.family {
            FamilyArg::A => FamilyTag::a(need(self.m, "m")?, need(self.n, "n")?),
            FamilyArg::B => FamilyTag::b(need(self.m, "m")?, need(self.n, "n")?),
            FamilyArg::B0 => {
                if self.m.is_some_and(|m| m > 0) {
                    return Err(CliError::Invalid("B0 is B(0|n); --m must be absent or 0".into()));
                }
                FamilyTag::b(0, need(self.n, "n")?)
            }
            FamilyArg::C => {
                if self.m.is_some() {
                    return Err(CliError::Invalid("C(n) takes only --n".into()));
                }
                FamilyTag::c(need(self.n, "n")?)
            }
            FamilyArg::D => FamilyTag::d(need(self.m, "m")?, need(self.n, "n")?),
        };
        tag.map_err(|e| CliError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads; defaults to the rayon default.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Add wall-clock timing to the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Parser)]
#[command(name = "gqs", version, about = "Verify gradings and relations of generalized quantum statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct the algebra and list its roots.
    Build(AlgebraArgs),
    /// Grading, operator, quadratic and relation checks for one case.
    VerifyCase {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        case: String,
    },
    /// Checks for every catalog case of the algebra.
    VerifyFamily(AlgebraArgs),
    /// Dump the triple-bracket coefficient table of one case.
    Extract {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        case: String,
    },
    /// Sweep toral elements and reconcile signatures with the catalog.
    Enumerate {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long, default_value_t = 2)]
        bound: i64,
    },
    /// Expected catalog values for the algebra.
    Tables(AlgebraArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Build(_) => "build",
            Command::VerifyCase { .. } => "verify-case",
            Command::VerifyFamily(_) => "verify-family",
            Command::Extract { .. } => "extract",
            Command::Enumerate { .. } => "enumerate",
            Command::Tables(_) => "tables",
        }
    }

    fn algebra_args(&self) -> &AlgebraArgs {
        match self {
            Command::Build(a) | Command::VerifyFamily(a) | Command::Tables(a) => a,
            Command::VerifyCase { alg, .. } | Command::Extract { alg, .. } | Command::Enumerate { alg, .. } => alg,
        }
    }
}

fn load(tag: FamilyTag) -> Result<Algebra, CliError> {
    build(tag).map_err(|e| CliError::Invalid(e.to_string()))
}

fn lookup_case(tag: FamilyTag, id: &str) -> Result<CaseSpec, CliError> {
    find_case(tag, id).map_err(|e| CliError::Invalid(e.to_string()))
}

fn build_report(alg: &Algebra) -> (Vec<CheckRecord>, Vec<Section>) {
    let expected = alg.tag.expected_dim();
    let mut checks = vec![CheckRecord::new(
        "dimension",
        alg.dim() == expected,
        format!("dim {} from the defining constraints; closed form {expected}", alg.dim()),
    )];
    checks.push(CheckRecord::new(
        "root_decomposition",
        alg.roots.len() + alg.rank() == alg.dim(),
        format!("{} root vectors plus Cartan rank {}", alg.roots.len(), alg.rank()),
    ));
    let involutive = alg
        .basis
        .basis()
        .iter()
        .all(|x| alg.omega(x).and_then(|w| alg.omega(&w)).is_ok_and(|ww| &ww == x));
    checks.push(CheckRecord::new("omega_involution", involutive, "omega^2 = id on the basis"));

    let mut roots = Section::new("Roots", &["weight", "parity"]);
    for (w, r) in alg.root_strings().into_iter().zip(&alg.roots) {
        roots.push(vec![w, if r.parity == 0 { "even" } else { "odd" }.to_string()]);
    }
    (checks, vec![roots])
}

fn extract_report(alg: &Algebra, spec: &CaseSpec) -> (Vec<CheckRecord>, Vec<Section>) {
    let caos = match build_caos(alg, spec) {
        Ok(c) => c,
        Err(e) => return (vec![CheckRecord::new("operators", false, e.to_string())], vec![]),
    };
    let table = match extract_triple_coefficients(&caos) {
        Ok(t) => t,
        Err(e) => return (vec![CheckRecord::new("extraction", false, e.to_string())], vec![]),
    };
    let mut checks = vec![CheckRecord::new(
        "extraction",
        true,
        format!("{} triple brackets over {} operator pairs", table.entries.len(), caos.len()),
    )];
    if let Some(id) = spec.relation_template {
        let id = match id {
            TemplateId::ParaBosePrinted | TemplateId::ParaBoseSwapped => {
                let (record, holding) = checks::para_bose_variant(&caos);
                checks.push(record);
                holding.unwrap_or(id)
            }
            id => id,
        };
        let agree = compare_with_table(&caos, id, &table);
        checks.push(match agree {
            Ok(m) => CheckRecord::new(
                format!("table_agreement.{id}"),
                m.is_empty(),
                m.first().map_or(format!("all tuples agree with {id}"), |f| format!("{} disagree, first {f}", m.len())),
            ),
            Err(e) => CheckRecord::new(format!("table_agreement.{id}"), false, e.to_string()),
        });
    }
    let mut ops = Section::new("Operators", &["pair", "label", "parity", "kind"]);
    for i in 0..caos.len() {
        ops.push(vec![
            (i + 1).to_string(),
            caos.labels[i].clone(),
            caos.parities[i].to_string(),
            caos.kinds[i].to_string(),
        ]);
    }
    let mut coeffs = Section::new("Triple brackets", &["bracket", "expansion"]);
    for (lhs, rhs) in table.rows(&caos) {
        coeffs.push(vec![lhs, rhs]);
    }
    (checks, vec![ops, coeffs])
}

fn enumerate_report(alg: &Algebra, bound: i64) -> Result<(Vec<CheckRecord>, Vec<Section>), CliError> {
    if bound < 1 {
        return Err(CliError::Invalid("--bound must be at least 1".into()));
    }
    let space = SearchSpace::for_algebra(alg, bound);
    let found = enumerate_gradings(alg, &space).map_err(|e| match e {
        EnumerateError::TooLarge { .. } => CliError::Guard(e.to_string()),
    })?;
    let sigs: Vec<_> = found.iter().map(|f| f.signature.clone()).collect();
    let rec = reconcile(alg, &sigs);

    let unverified = found.iter().filter(|f| !f.verified).count();
    let mut checks = vec![CheckRecord::new(
        "soundness",
        unverified == 0,
        format!(
            "{} signatures from {} lattice points (bound {bound}, half-integers {}); {unverified} fail verification",
            found.len(),
            space.points(),
            space.half_integers
        ),
    )];
    for row in &rec.rows {
        let ids: Vec<String> = row.matches.iter().map(|i| format!("#{}", i + 1)).collect();
        checks.push(CheckRecord::new(
            format!("reconcile.{}", row.case_id),
            !row.matches.is_empty(),
            format!(
                "G0 = {}, l={}, N={}, G0 dims ({}|{}); matched {}",
                row.g0_label,
                row.expected_length,
                row.expected_n,
                row.expected_g0.0,
                row.expected_g0.1,
                if ids.is_empty() { "nothing".to_string() } else { ids.join(", ") }
            ),
        ));
    }

    let mut table = Section::new(
        "Signatures",
        &["#", "l", "N", "dims", "G0 even|odd", "[G0,G0]", "Cartan rank", "representative h", "catalog rows"],
    );
    for (i, f) in found.iter().enumerate() {
        let s = &f.signature;
        let rows: Vec<&str> =
            rec.rows.iter().filter(|r| r.matches.contains(&i)).map(|r| r.case_id.as_str()).collect();
        table.push(vec![
            (i + 1).to_string(),
            s.length.to_string(),
            s.n_ops.to_string(),
            format!("{:?}", s.dims),
            format!("{}|{}", s.g0.even, s.g0.odd),
            s.g0.derived.to_string(),
            s.g0.cartan_rank.to_string(),
            f.coords_string(),
            if rows.is_empty() { "unmatched".to_string() } else { rows.join(", ") },
        ]);
    }
    let mut collisions = Section::new("Collisions", &["signature", "catalog rows"]);
    for c in &rec.collisions {
        collisions.push(vec![format!("#{}", c.signature + 1), c.case_ids.join(", ")]);
    }
    let mut sections = vec![table];
    if !collisions.rows.is_empty() {
        sections.push(collisions);
    }
    Ok((checks, sections))
}

fn tables_report(alg: &Algebra) -> Vec<Section> {
    let mut t = Section::new(
        format!("Catalog for {}", alg.tag),
        &["case", "G0", "l", "N", "G0 dims", "grading coordinates", "relations"],
    );
    for c in catalog(alg.tag) {
        t.push(vec![
            c.id.clone(),
            c.g0_label.clone(),
            c.expected_length.to_string(),
            c.expected_n.to_string(),
            format!("({}|{})", c.expected_g0_dims.0, c.expected_g0_dims.1),
            c.coords_string(),
            c.relation_template.map_or("-".to_string(), |t| t.to_string()),
        ]);
    }
    vec![t]
}

/// Builds the report for a parsed command line.
pub fn execute(cli: &Cli) -> Result<ReportDocument, CliError> {
    let tag = cli.command.algebra_args().tag()?;
    let case = match &cli.command {
        Command::VerifyCase { case, .. } | Command::Extract { case, .. } => Some(lookup_case(tag, case)?),
        _ => None,
    };
    let alg = load(tag)?;
    let (checks, sections) = match &cli.command {
        Command::Build(_) => build_report(&alg),
        Command::VerifyCase { .. } => (case_checks(&alg, case.as_ref().expect("looked up")), vec![]),
        Command::VerifyFamily(_) => {
            let checks = catalog(tag).par_iter().map(|spec| case_checks(&alg, spec)).collect::<Vec<_>>();
            (checks.into_iter().flatten().collect(), vec![])
        }
        Command::Extract { .. } => extract_report(&alg, case.as_ref().expect("looked up")),
        Command::Enumerate { bound, .. } => enumerate_report(&alg, *bound)?,
        Command::Tables(_) => (vec![], tables_report(&alg)),
    };
    Ok(ReportDocument::new(cli.command.name(), &alg, checks, sections))
}

pub fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(REPORT_DIR_VAR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn emit(cli: &Cli, doc: &ReportDocument) -> Result<(), CliError> {
    let text = match cli.output.format {
        Format::Json => doc.to_json(),
        Format::Markdown => doc.to_markdown(),
    };
    match &cli.output.out {
        Some(p) => {
            let path = resolve_out(p);
            if let Some(parent) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
            }
            std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            println!(
                "{} {}: {} ({} checks, {} failed) -> {}",
                doc.command,
                doc.algebra.name,
                doc.verdict.as_str(),
                doc.checks.len(),
                doc.count(report::Verdict::Fail),
                path.display()
            );
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(())
}

fn run_parsed(cli: &Cli) -> Result<bool, CliError> {
    let start = Instant::now();
    let mut doc = match cli.output.jobs {
        Some(0) => return Err(CliError::Invalid("--jobs must be positive".into())),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            pool.install(|| execute(cli))?
        }
        None => execute(cli)?,
    };
    if cli.output.timing {
        doc.timing = Some(Timing {
            elapsed_ms: start.elapsed().as_millis(),
        });
    }
    emit(cli, &doc)?;
    Ok(doc.passed())
}

/// Parses `args` and runs the command, returning the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_parsed(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("gqs: {e}");
            e.exit_code()
        }
    }
}
