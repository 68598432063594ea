//! Command-line front end. [`run`] parses arguments, executes one subcommand
//! and returns the process exit status: 0 success, 2 input error, 3
//! verification failure.

pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::connection::{compute, Computation};
use crate::error::{Error, Result};
use crate::group::GroupData;
use crate::invariants::{catalog_names, catalog_spec, fundamental_invariants, GroupSpec, InvariantSource, InvariantTuple};
use crate::poly::{parse_expr, Alphabet, Style};
use crate::rewrite::rewrite_invariant;
use crate::verify::{check_integrability, verify_computation, VerificationReport};

pub use render::{render_invariants, render_latex, render_text, system_from_json, system_to_json, SystemJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Catalog,
    Reynolds,
}

impl From<SourceArg> for InvariantSource {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Catalog => InvariantSource::Catalog,
            SourceArg::Reynolds => InvariantSource::Reynolds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSource {
    Catalog(String),
    SpecFile(PathBuf),
}

/// Everything one `compute` run needs.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub source: GroupSource,
    pub invariants: InvariantSource,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub cap: Option<usize>,
    pub verbosity: u8,
}

#[derive(Parser, Debug)]
#[command(name = "crgsys", version, about = "Integrable connections for complex reflection groups, in exact arithmetic")]
struct Cli {
    /// Print timings and extra diagnostics on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// Catalog group name (see `list`).
    #[arg(long, conflicts_with = "spec_file", required_unless_present = "spec_file")]
    group: Option<String>,
    /// Group specification file (JSON).
    #[arg(long)]
    spec_file: Option<PathBuf>,
    /// Maximum number of group elements generated before giving up.
    #[arg(long)]
    cap: Option<usize>,
    /// Where the fundamental invariants come from.
    #[arg(long, value_enum, default_value = "catalog")]
    invariants: SourceArg,
}

impl GroupArgs {
    fn source(&self) -> GroupSource {
        match (&self.group, &self.spec_file) {
            (Some(g), _) => GroupSource::Catalog(g.clone()),
            (None, Some(p)) => GroupSource::SpecFile(p.clone()),
            (None, None) => unreachable!("clap enforces one group source"),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the catalog groups.
    List,
    /// Compute and verify the connection matrices for a group.
    Compute {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the system here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check integrability of a stored JSON system.
    Verify { path: PathBuf },
    /// Express an invariant polynomial in x1..xn in terms of z1..zn.
    Rewrite {
        expr: String,
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Print the fundamental invariants used for a group.
    Invariants {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// A closed, validated group together with invariants listed in its spec.
#[derive(Clone, Debug)]
pub struct LoadedGroup {
    pub name: String,
    pub group: GroupData,
    pub spec_invariants: Option<InvariantTuple>,
}

pub fn load_spec(source: &GroupSource) -> Result<GroupSpec> {
    match source {
        GroupSource::Catalog(name) => Ok(catalog_spec(name)?),
        GroupSource::SpecFile(path) => Ok(GroupSpec::from_json(&std::fs::read_to_string(path)?)?),
    }
}

pub fn load_group(source: &GroupSource, cap: Option<usize>) -> Result<LoadedGroup> {
    let spec = load_spec(source)?;
    let group = spec.build_group(cap)?;
    let spec_invariants = spec.invariant_tuple()?;
    if let Some(phi) = &spec_invariants {
        if phi.len() != group.rank() {
            return Err(Error::Input("invariant count does not match the rank".into()));
        }
    }
    Ok(LoadedGroup { name: spec.name, group, spec_invariants })
}

pub fn select_invariants(g: &LoadedGroup, source: InvariantSource) -> Result<InvariantTuple> {
    match source {
        InvariantSource::Catalog => g.spec_invariants.clone().ok_or_else(|| {
            Error::Input(format!("group {} lists no invariants; use --invariants reynolds", g.name))
        }),
        InvariantSource::Reynolds => Ok(fundamental_invariants(&g.group)?),
    }
}

/// validate → invariants → Jacobian → scaled connection → z-rewrite → verify.
pub fn run_pipeline(source: &GroupSource, invariants: InvariantSource, cap: Option<usize>) -> Result<(Computation, VerificationReport)> {
    let g = load_group(source, cap)?;
    let phi = select_invariants(&g, invariants)?;
    let comp = compute(&g.group, &phi, &g.name)?;
    let report = verify_computation(&comp, &g.group);
    Ok((comp, report))
}

pub fn render(comp: &Computation, format: Format) -> String {
    match format {
        Format::Text => render_text(&comp.system),
        Format::Json => system_to_json(&comp.system),
        Format::Latex => render_latex(&comp.system),
    }
}

pub fn cmd_compute(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let (comp, report) = run_pipeline(&cfg.source, cfg.invariants, cfg.cap)?;
    let artifact = render(&comp, cfg.format);
    match &cfg.out {
        Some(path) => std::fs::write(path, &artifact)?,
        None => stdout.write_all(artifact.as_bytes())?,
    }
    let text = if cfg.verbosity > 0 { report.to_string() } else { report.summary() };
    stderr.write_all(text.as_bytes())?;
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_VERIFY })
}

pub fn cmd_verify(path: &Path, stdout: &mut dyn Write) -> Result<i32> {
    let text = std::fs::read_to_string(path)?;
    let cs = system_from_json(&text)?;
    let mut report = VerificationReport::default();
    match check_integrability(&cs) {
        Ok(c) => report.push(c),
        Err(e) => {
            writeln!(stdout, "FAIL integrability\n    {e}")?;
            return Ok(EXIT_VERIFY);
        }
    }
    stdout.write_all(report.summary().as_bytes())?;
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_VERIFY })
}

pub fn cmd_rewrite(expr: &str, source: &GroupSource, invariants: InvariantSource, cap: Option<usize>) -> Result<String> {
    let g = load_group(source, cap)?;
    let phi = select_invariants(&g, invariants)?;
    let f = parse_expr(expr, Alphabet::X, g.group.rank(), g.group.conductor())?;
    Ok(rewrite_invariant(&f, &phi)?.to_string())
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::List => {
            for name in catalog_names() {
                let spec = catalog_spec(name)?;
                let degrees = spec.invariant_tuple()?.map(|t| t.sorted_degrees()).unwrap_or_default();
                let degrees: Vec<String> = degrees.iter().map(ToString::to_string).collect();
                writeln!(stdout, "{name}\trank {}\tdegrees {}", spec.rank, degrees.join(","))?;
            }
            Ok(EXIT_OK)
        }
        Command::Compute { group, format, out } => {
            let cfg = RunConfig {
                source: group.source(),
                invariants: group.invariants.into(),
                format,
                out,
                cap: group.cap,
                verbosity: cli.verbose,
            };
            cmd_compute(&cfg, stdout, stderr)
        }
        Command::Verify { path } => cmd_verify(&path, stdout),
        Command::Rewrite { expr, group } => {
            let z = cmd_rewrite(&expr, &group.source(), group.invariants.into(), group.cap)?;
            writeln!(stdout, "{z}")?;
            Ok(EXIT_OK)
        }
        Command::Invariants { group, format } => {
            let g = load_group(&group.source(), group.cap)?;
            let phi = select_invariants(&g, group.invariants.into())?;
            let style = match format {
                Format::Text => Style::Text,
                Format::Latex => Style::Latex,
                Format::Json => {
                    let list: Vec<String> = phi.phis().iter().map(ToString::to_string).collect();
                    writeln!(stdout, "{}", serde_json::to_string_pretty(&list)?)?;
                    return Ok(EXIT_OK);
                }
            };
            stdout.write_all(render_invariants(&phi, style).as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{}", e.render()) } else { write!(stdout, "{}", e.render()) };
            return code;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("crgsys").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn rewrite_command() {
        assert_eq!(run_args(&["rewrite", "x1^4+x2^4", "--group", "G(2,1,2)"]), (0, "z1^2 - 2*z2\n".into(), String::new()));
        assert_eq!(run_args(&["rewrite", "x1^2+x2^2", "--group", "G(2,1,2)"]).1, "z1\n");
        let (code, _, err) = run_args(&["rewrite", "x1", "--group", "G(2,1,2)"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("not invariant"), "{err}");
    }

    #[test]
    fn unknown_group_and_usage() {
        let (code, _, err) = run_args(&["compute", "--group", "G99"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("unknown group `G99`"));
        assert_eq!(run_args(&["compute"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["compute", "--group", "G4", "--spec-file", "x.json"]).0, EXIT_INPUT);
    }

    #[test]
    fn list_and_invariants() {
        let (code, out, _) = run_args(&["list"]);
        assert_eq!(code, 0);
        assert!(out.contains("G7\trank 2\tdegrees 12,12"));
        let (_, out, _) = run_args(&["invariants", "--group", "D8", "--invariants", "reynolds"]);
        assert_eq!(out, "z1 = x1^2 + x2^2\nz2 = x1^4 + x2^4\n");
    }
}
