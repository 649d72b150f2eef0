//! `classlift detect|migrate|churn`.
//!
//! Exit codes: 0 when done with nothing left to do by hand, 1 when manual
//! work remains, 2 on I/O or parse failures.

use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::cases::{Diagnostic, Remediation};
use crate::churn::{self, diff_lines};
use crate::detect::{metrics, ClassMetrics};
use crate::error::{Error, Result};
use crate::files::{self, Loaded};
use crate::migrate::{detect_program, migrate_program, MigrateOptions, PlanStatus};
use crate::report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MANUAL: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "classlift", version, about = "Migrate ES5 class emulations to ES6 class syntax")]
pub struct Cli {
    /// Process files one at a time instead of on a thread pool.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List emulated classes with class count, method count and class density.
    Detect(DetectArgs),
    /// Rewrite emulated classes as ES6 classes.
    Migrate(MigrateArgs),
    /// Measure code churn between an original and a migrated tree.
    Churn(ChurnArgs),
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Files or directories to scan for `.js` files.
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Print the inventory as JSON.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON inventory to this file.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MigrateArgs {
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Compute everything, write no migrated files.
    #[arg(long)]
    pub dry_run: bool,
    /// Emit `C.m = function` methods as instance methods instead of static ones.
    #[arg(long)]
    pub rule1_literal: bool,
    /// Directory for the migrated tree.
    #[arg(long, value_name = "DIR", default_value = "classlift-out", conflicts_with = "in_place")]
    pub out: PathBuf,
    /// Overwrite the input files.
    #[arg(long)]
    pub in_place: bool,
    /// Write the JSON report to this file.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ChurnArgs {
    pub original: PathBuf,
    pub migrated: PathBuf,
    /// Print the metrics as JSON.
    #[arg(long)]
    pub json: bool,
}

struct Style {
    color: bool,
}

impl Style {
    fn detect() -> Self {
        Style { color: std::env::var_os("CLASSLIFT_NO_COLOR").is_none() && std::io::stdout().is_terminal() }
    }

    fn paint(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn status(&self, s: FileStatus) -> String {
        match s {
            FileStatus::Good => self.paint("32", "good"),
            FileStatus::PartiallyBlocked => self.paint("33", "partially-blocked"),
            FileStatus::Skipped => self.paint("31", "skipped"),
        }
    }
}

/// Parses `args` and runs the command, writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_FAILURE
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
        }
    };
    let parallel = !cli.sequential;
    let result = match &cli.command {
        Command::Detect(a) => cmd_detect(a, parallel, out, err),
        Command::Migrate(a) => cmd_migrate(a, parallel, out, err),
        Command::Churn(a) => cmd_churn(a, parallel, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "classlift: {e}");
            EXIT_FAILURE
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    }
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn io(e: std::io::Error) -> Error {
    Error::Io { path: PathBuf::from("<stdout>"), source: e }
}

fn skipped(loaded: &Loaded) -> Vec<SkippedFile> {
    loaded.skipped.iter().map(|(path, e)| SkippedFile { path: path.clone(), error: e.to_string() }).collect()
}

fn report_skipped(list: &[SkippedFile], err: &mut dyn Write) -> Result<()> {
    if !list.is_empty() {
        writeln!(err, "skipped (parse failure):").map_err(io)?;
        for s in list {
            writeln!(err, "  {}: {}", s.path.display(), s.error).map_err(io)?;
        }
    }
    Ok(())
}

pub fn cmd_detect(args: &DetectArgs, parallel: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let loaded = files::load(files::inputs(&args.paths)?, parallel)?;
    let (_, classes) = detect_program(&loaded.modules, parallel);
    let files: Vec<DetectedFile> =
        loaded.modules.iter().zip(classes).map(|(m, cs)| DetectedFile { path: m.path.clone(), metrics: metrics(&cs, [m]), classes: cs }).collect();
    let report = DetectReport {
        schema: SCHEMA,
        tool_version: TOOL_VERSION.into(),
        totals: ClassMetrics::sum(files.iter().map(|f| &f.metrics)),
        files,
        skipped: skipped(&loaded),
    };
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(path) = &args.report {
        write_file(path, &json)?;
    }
    if args.json {
        writeln!(out, "{json}").map_err(io)?;
    } else {
        let width = report.files.iter().map(|f| f.path.display().to_string().len()).max().unwrap_or(0).max(5);
        writeln!(out, "{:<width$} {:>7} {:>7} {:>5}", "file", "classes", "methods", "CD").map_err(io)?;
        for f in &report.files {
            writeln!(out, "{:<width$} {:>7} {:>7} {:>5.2}", f.path.display(), f.metrics.noc, f.metrics.nom, f.metrics.class_density).map_err(io)?;
            for c in &f.classes {
                let sup = c.superclass.as_deref().map(|s| format!(" extends {s}")).unwrap_or_default();
                let methods: Vec<&str> = c.methods.iter().map(|m| m.name.as_str()).collect();
                writeln!(out, "  {}{sup}: attributes [{}], methods [{}]", c.name, c.attributes.join(", "), methods.join(", ")).map_err(io)?;
            }
        }
        let t = &report.totals;
        writeln!(out, "{:<width$} {:>7} {:>7} {:>5.2}", "total", t.noc, t.nom, t.class_density).map_err(io)?;
    }
    report_skipped(&report.skipped, err)?;
    Ok(if report.skipped.is_empty() { EXIT_OK } else { EXIT_FAILURE })
}

fn print_diagnostic(d: &Diagnostic, out: &mut dyn Write) -> Result<()> {
    let rem = match &d.remediation {
        Remediation::Applied(_) => "applied",
        Remediation::Manual(_) => "manual",
        Remediation::Preserved => "preserved",
    };
    writeln!(out, "  {}:{} {:?} [{rem}] {}", d.location.start_line, d.location.start_col, d.kind, d.message).map_err(io)
}

pub fn cmd_migrate(args: &MigrateArgs, parallel: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let loaded = files::load(files::inputs(&args.paths)?, parallel)?;
    let options = MigrateOptions { rule1_literal: args.rule1_literal, parallel };
    let outcomes = migrate_program(&loaded.modules, options)?;

    let pairs: Vec<_> = outcomes.iter().map(|o| (o.path.clone(), o.original.clone(), o.output.clone())).collect();
    let (churn_totals, _) = churn::compute_churn(&pairs, parallel);
    let per_file: Vec<FileReport> = outcomes
        .iter()
        .zip(&loaded.modules)
        .map(|(o, m)| {
            let classes: Vec<_> = o.plans.iter().map(|p| p.class.clone()).collect();
            FileReport::new(o.path.clone(), o.changed(), metrics(&classes, [m]), diff_lines(&o.original, &o.output), o.plans.clone(), o.diagnostics.clone())
        })
        .collect();
    let totals = Totals::from_files(&per_file, churn_totals);
    let config = ConfigEcho {
        command: "migrate".into(),
        paths: args.paths.clone(),
        dry_run: args.dry_run,
        rule1_literal: args.rule1_literal,
        in_place: args.in_place,
        out: (!args.in_place).then(|| args.out.clone()),
        parallel,
    };
    let report = MigrationReport { schema: SCHEMA, tool_version: TOOL_VERSION.into(), config, per_file, skipped: skipped(&loaded), totals };

    if !args.dry_run {
        for (o, input) in outcomes.iter().zip(&loaded.inputs) {
            if args.in_place {
                if o.changed() {
                    write_file(&input.path, &o.output)?;
                }
            } else {
                write_file(&args.out.join(&input.relative), &o.output)?;
            }
        }
    }
    if let Some(path) = &args.report {
        write_file(path, &report.to_json())?;
    }

    if args.json {
        writeln!(out, "{}", report.to_json()).map_err(io)?;
    } else {
        let style = Style::detect();
        for f in &report.per_file {
            let migrated = f.plans.iter().filter(|p| !matches!(p.status, PlanStatus::Blocked(_))).count();
            writeln!(out, "{} {} ({} of {} classes migrated)", f.path.display(), style.status(f.status), migrated, f.plans.len()).map_err(io)?;
            for d in &f.diagnostics {
                print_diagnostic(d, out)?;
            }
        }
        let t = &report.totals;
        writeln!(
            out,
            "classes: {} good, {} fixed, {} blocked; bad cases: {} ({} applied); ugly cases preserved: {}; manual: {}",
            t.outcomes.good, t.outcomes.bad_fixed, t.outcomes.blocked, t.bad, t.bad_applied, t.ugly_preserved, t.manual
        )
        .map_err(io)?;
        write!(out, "{}", churn::table(&t.churn)).map_err(io)?;
        if args.dry_run {
            writeln!(out, "dry run: no files written").map_err(io)?;
        }
    }
    report_skipped(&report.skipped, err)?;
    Ok(if !report.skipped.is_empty() {
        EXIT_FAILURE
    } else if report.has_manual_work() {
        EXIT_MANUAL
    } else {
        EXIT_OK
    })
}

pub fn cmd_churn(args: &ChurnArgs, parallel: bool, out: &mut dyn Write) -> Result<i32> {
    for p in [&args.original, &args.migrated] {
        if !p.exists() {
            return Err(Error::Io { path: p.clone(), source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory") });
        }
    }
    let (m, _) = churn::compute_tree_churn(&args.original, &args.migrated, parallel)?;
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&m)?).map_err(io)?;
    } else {
        write!(out, "{}", churn::table(&m)).map_err(io)?;
    }
    Ok(EXIT_OK)
}
