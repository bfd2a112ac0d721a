//! `harmdist`: catalog, analysis, bound verification and plot data for
//! planar harmonic mappings of the unit disc.
//!
//! Exit codes: 0 all checks passed, 2 bound violations, 3 hypothesis not met
//! (unless `--allow-unmet`), 4 configuration error, 1 anything else.

mod analyze;
mod config;
mod plot;

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use harmdist::catalog::{self, HARMONIC_MOBIUS_FAMILY};
use harmdist::verifier::{
    counterexample_search, default_samples, verify_bound, write_pairs_csv, Target, VerifyStatus,
};
use serde::Serialize;

use config::{CliError, Flags, Settings};

#[derive(Parser)]
#[command(name = "harmdist", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List built-in maps with their known properties
    Catalog {
        /// Emit JSON instead of a table
        #[arg(long)]
        json: bool,
    },
    /// Operator values, norm estimates, order and criterion verdicts
    Analyze {
        #[command(flatten)]
        flags: Flags,
    },
    /// Check a two-point distortion bound on seeded pairs
    Verify {
        #[command(flatten)]
        flags: Flags,
        /// Bound name, e.g. becker_harmonic_bounds
        #[arg(long)]
        bound: Option<String>,
        /// Exit 0 when the bound's hypothesis is not met
        #[arg(long)]
        allow_unmet: bool,
        /// Pattern-search budget for hunting counterexamples (0 disables)
        #[arg(long)]
        search: Option<usize>,
    },
    /// Images of circles and radii as SVG + CSV, plus margin data with --bound
    Plot {
        #[command(flatten)]
        flags: Flags,
        #[arg(long)]
        bound: Option<String>,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HARMDIST_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Config(format!(
            "HARMDIST_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn cmd_catalog(json: bool) -> Result<u8, CliError> {
    if json {
        #[derive(Serialize)]
        struct Listing<'a> {
            entries: &'a [catalog::CatalogEntry],
            families: [&'a str; 1],
        }
        println!(
            "{}",
            to_json(&Listing {
                entries: catalog::ENTRIES,
                families: [HARMONIC_MOBIUS_FAMILY],
            })?
        );
        return Ok(0);
    }
    let show_f =
        |k: Option<catalog::Known<f64>>| k.map_or("?".to_string(), |k| format!("{}", k.value));
    println!(
        "{:<26} {:<8} {:<8} {:<6} {:<10} description",
        "name", "convex", "||S||", "order", "S_f = 0"
    );
    for e in catalog::ENTRIES {
        println!(
            "{:<26} {:<8} {:<8} {:<6} {:<10} {}",
            e.name,
            e.convex.map_or("?".to_string(), |k| k.value.to_string()),
            show_f(e.schwarzian_norm),
            show_f(e.order),
            if e.schwarzian_vanishes { "yes" } else { "no" },
            e.description,
        );
    }
    println!(
        "{:<26} {:<8} {:<8} {:<6} {:<10} h Möbius, |alpha| < 1",
        HARMONIC_MOBIUS_FAMILY, "?", "0", "?", "yes"
    );
    println!();
    println!("provenance:");
    for e in catalog::ENTRIES {
        for (what, prov) in [
            ("convex", e.convex.map(|k| k.provenance)),
            ("||S||", e.schwarzian_norm.map(|k| k.provenance)),
            ("order", e.order.map(|k| k.provenance)),
        ] {
            if let Some(p) = prov {
                println!("  {:<26} {:<7} {p}", e.name, what);
            }
        }
    }
    Ok(0)
}

fn cmd_analyze(flags: &Flags) -> Result<u8, CliError> {
    let settings = Settings::resolve(flags, None, false, None)?;
    let report = analyze::analyze(&settings);
    let text = to_json(&report)?;
    if let Some(dir) = &settings.out {
        ensure_dir(dir)?;
        write_file(&dir.join("analysis.json"), &text)?;
    }
    println!("{text}");
    Ok(0)
}

fn target_of(settings: &Settings) -> Target {
    Target {
        id: settings.map_id.clone(),
        map: settings.mapping.map.clone(),
        declared_univalent: settings.mapping.declared_univalent,
    }
}

fn cmd_verify(
    flags: &Flags,
    bound: Option<&str>,
    allow_unmet: bool,
    search: Option<usize>,
) -> Result<u8, CliError> {
    let settings = Settings::resolve(flags, bound, allow_unmet, search)?;
    let kind = settings
        .bound
        .ok_or_else(|| CliError::Config("verify needs --bound".into()))?;
    let target = target_of(&settings);
    let samples = default_samples(settings.counts, settings.seed, settings.sup.r_max)?;
    let v = verify_bound(&target, kind, &settings.params, &settings.sup, &samples)?;
    let text = v.report.to_json()?;
    let found = match (settings.search, &v.report.worst_pair) {
        (budget, Some(start)) if budget > 0 => Some(counterexample_search(
            &target,
            kind,
            &settings.params,
            &settings.sup,
            start,
            budget,
        )?),
        _ => None,
    };
    if let Some(dir) = &settings.out {
        ensure_dir(dir)?;
        write_file(&dir.join(format!("{}.json", kind.name())), &text)?;
        write_pairs_csv(
            &v.records,
            create(&dir.join(format!("{}.csv", kind.name())))?,
        )?;
        if let Some(found) = &found {
            write_file(
                &dir.join(format!("{}-search.json", kind.name())),
                &to_json(found)?,
            )?;
        }
    }
    println!("{text}");
    if let Some(found) = &found {
        eprintln!(
            "search: {} evaluations, worst relative margin {:.6e}",
            found.evaluations, found.relative_margin
        );
    }
    Ok(match v.report.status {
        VerifyStatus::Passed => 0,
        VerifyStatus::Violations => 2,
        VerifyStatus::HypothesisNotMet if settings.allow_unmet => 0,
        VerifyStatus::HypothesisNotMet => 3,
    })
}

fn cmd_plot(flags: &Flags, bound: Option<&str>) -> Result<u8, CliError> {
    let settings = Settings::resolve(flags, bound, true, None)?;
    let dir = settings
        .out
        .clone()
        .ok_or_else(|| CliError::Config("plot needs --out".into()))?;
    ensure_dir(&dir)?;
    let curves = plot::image_curves(&settings.mapping.map)?;
    write_file(&dir.join("image.svg"), &plot::render_svg(&curves))?;
    plot::write_curves_csv(&curves, create(&dir.join("image.csv"))?)?;
    if let Some(kind) = settings.bound {
        let samples = default_samples(settings.counts, settings.seed, settings.sup.r_max)?;
        let v = verify_bound(
            &target_of(&settings),
            kind,
            &settings.params,
            &settings.sup,
            &samples,
        )?;
        plot::write_margins_csv(
            &v.records,
            create(&dir.join(format!("{}-margins.csv", kind.name())))?,
        )?;
        write_file(
            &dir.join(format!("{}.json", kind.name())),
            &v.report.to_json()?,
        )?;
    }
    eprintln!("wrote plot files to {}", dir.display());
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    configure_threads()?;
    match &cli.command {
        Command::Catalog { json } => cmd_catalog(*json),
        Command::Analyze { flags } => cmd_analyze(flags),
        Command::Verify {
            flags,
            bound,
            allow_unmet,
            search,
        } => cmd_verify(flags, bound.as_deref(), *allow_unmet, *search),
        Command::Plot { flags, bound } => cmd_plot(flags, bound.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap would exit 2, which is reserved for bound violations
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("harmdist: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
