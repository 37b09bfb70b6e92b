//! Command-line front end.
//!
//! Map and database inputs resolve in order: the command-line flag, the
//! `[paths]` table of the config, then a fresh build from the config (the
//! synthetic map at `map_seed`, the database extracted from that map).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use geoduplex_core::region::Provenance;
use geoduplex_core::sim::{run_trial, Scene, Scheme};
use geoduplex_core::{build_database, generate_synthetic_map, IsolationDatabase, RadioMap};

use crate::assignment_io::format_assignment;
use crate::campaign::{power_dir_name, run_campaign_parallel, write_report};
use crate::config::RunConfig;
use crate::db_io::{format_database, load_database};
use crate::error::{write_file, Error, Result};
use crate::map_io::{format_radio_map, load_radio_map};

#[derive(Debug, Parser)]
#[command(name = "geoduplex", version, about = "Geometry-aware full-duplex scheduling simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic radio map from the config.
    GenMap(GenMapArgs),
    /// Extract the isolation database from a radio map.
    BuildDb(BuildDbArgs),
    /// Run the Monte Carlo campaign and write CDFs and summaries.
    Simulate(SimulateArgs),
    /// Schedule a single drop and write the assignment as CSV.
    Schedule(ScheduleArgs),
}

#[derive(Debug, Args)]
pub struct GenMapArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Shadowing seed (overrides `map_seed`).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildDbArgs {
    #[arg(long)]
    pub map: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub map: Option<PathBuf>,
    #[arg(long)]
    pub db: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Campaign seed (overrides `scenario.seed`).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; all cores by default. Results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Comma-separated scheme names.
    #[arg(long, value_delimiter = ',')]
    pub schemes: Option<Vec<Scheme>>,
    /// BS transmit power(s) in dBm, comma-separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub bs_power: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long)]
    pub map: Option<PathBuf>,
    #[arg(long)]
    pub db: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "FDregrand")]
    pub scheme: Scheme,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub trial: u64,
    /// BS transmit power in dBm (default: first configured power).
    #[arg(long, allow_negative_numbers = true)]
    pub bs_power: Option<f64>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load_map(flag: Option<&Path>, cfg: &RunConfig) -> Result<(RadioMap, String)> {
    match flag.map(Path::to_path_buf).or_else(|| cfg.paths.map()) {
        Some(p) => {
            let map = load_radio_map(&p)?;
            let id = p
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string());
            Ok((map, id))
        }
        None => Ok((
            generate_synthetic_map(&cfg.map, cfg.map_seed)?,
            format!("synthetic seed {}", cfg.map_seed),
        )),
    }
}

fn extract(map: &RadioMap, map_id: String, cfg: &RunConfig) -> Result<IsolationDatabase> {
    let carrier = cfg.link.f1.center_mhz();
    let att = cfg.attenuation.build(map, &cfg.extraction, carrier);
    Ok(build_database(
        map,
        &cfg.extraction,
        &*att,
        Provenance {
            map_id,
            attenuation_model: cfg.attenuation.label(carrier),
            params: cfg.extraction.clone(),
        },
    )?)
}

fn load_db(flag: Option<&Path>, map: &RadioMap, map_id: String, cfg: &RunConfig) -> Result<IsolationDatabase> {
    match flag.map(Path::to_path_buf).or_else(|| cfg.paths.database()) {
        Some(p) => load_database(&p),
        None => extract(map, map_id, cfg),
    }
}

fn out_path(flag: Option<PathBuf>, cfg: &RunConfig, what: &str) -> Result<PathBuf> {
    flag.or_else(|| cfg.paths.out())
        .ok_or_else(|| Error::Config(format!("no output path: pass --out or set paths.out for {what}")))
}

pub fn gen_map(args: GenMapArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg = RunConfig::load_or_default(args.config.as_deref())?;
    if let Some(s) = args.seed {
        cfg.map_seed = s;
    }
    let dest = args
        .out
        .or_else(|| cfg.paths.map())
        .ok_or_else(|| Error::Config("no output path: pass --out or set paths.map".into()))?;
    let map = generate_synthetic_map(&cfg.map, cfg.map_seed)?;
    write_file(&dest, &format_radio_map(&map))?;
    say(
        out,
        format_args!(
            "wrote {}: {} x {} pixels of {} m, seed {}",
            dest.display(),
            map.n_cols(),
            map.n_rows(),
            map.pixel_size(),
            cfg.map_seed
        ),
    )
}

pub fn build_db(args: BuildDbArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = RunConfig::load_or_default(args.config.as_deref())?;
    let (map, id) = load_map(args.map.as_deref(), &cfg)?;
    let db = extract(&map, id, &cfg)?;
    let dest = args
        .out
        .or_else(|| cfg.paths.database())
        .ok_or_else(|| Error::Config("no output path: pass --out or set paths.database".into()))?;
    write_file(&dest, &format_database(&db))?;
    if db.is_empty() {
        say(
            out,
            format_args!(
                "warning: no region pair reaches {} dB; the database is empty",
                cfg.extraction.admission_threshold_db
            ),
        )?;
    }
    say(out, format_args!("wrote {}: K = {}", dest.display(), db.len()))?;
    for p in db.pairs() {
        say(out, format_args!("  k={} alpha={} dB", p.k, p.alpha_db))?;
    }
    Ok(())
}

pub fn simulate(args: SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg = RunConfig::load_or_default(args.config.as_deref())?;
    if let Some(s) = args.seed {
        cfg.scenario.seed = s;
    }
    if let Some(t) = args.trials {
        cfg.scenario.trials = t;
    }
    if let Some(s) = args.schemes {
        cfg.scenario.schemes = s;
    }
    if let Some(p) = args.bs_power {
        cfg.bs_tx_powers_dbm = p;
    }
    cfg.validate()?;
    let root = out_path(args.out, &cfg, "simulate")?;
    let (map, id) = load_map(args.map.as_deref(), &cfg)?;
    let db = load_db(args.db.as_deref(), &map, id, &cfg)?;
    if db.is_empty() {
        say(out, format_args!("warning: the isolation database is empty"))?;
    }

    // run everything before touching the output tree
    let mut reports = Vec::new();
    for &p in &cfg.bs_tx_powers_dbm {
        let mut link = cfg.link.clone();
        link.bs_tx_power_dbm = p;
        let scene = Scene::new(map.clone(), db.clone(), link, cfg.scenario.clone())?;
        reports.push((p, run_campaign_parallel(&scene, args.threads)?));
    }
    std::fs::create_dir_all(&root).map_err(|e| Error::io(&root, e))?;
    write_file(&root.join("resolved_config.toml"), &cfg.to_toml_string()?)?;
    for (p, report) in &reports {
        write_report(report, &root.join(power_dir_name(*p)))?;
        say(out, format_args!("{}", report.summary))?;
    }
    say(out, format_args!("wrote {}", root.display()))
}

pub fn schedule_one(args: ScheduleArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg = RunConfig::load_or_default(args.config.as_deref())?;
    if let Some(s) = args.seed {
        cfg.scenario.seed = s;
    }
    let (map, id) = load_map(args.map.as_deref(), &cfg)?;
    let db = load_db(args.db.as_deref(), &map, id, &cfg)?;
    let mut link = cfg.link.clone();
    link.bs_tx_power_dbm = args.bs_power.unwrap_or(cfg.bs_tx_powers_dbm[0]);
    let scene = Scene::new(map, db, link, cfg.scenario.clone())?;
    let outcome = run_trial(&scene, args.scheme, args.trial)?;
    let csv = format_assignment(&outcome.assignment, &scene.plan())?;
    match args.out {
        Some(dest) => {
            write_file(&dest, &csv)?;
            say(
                out,
                format_args!(
                    "wrote {}: {} resources, {} MHz, objective {}",
                    dest.display(),
                    outcome.assignment.slots().len(),
                    outcome.occupied_bandwidth_hz / 1e6,
                    outcome.objective
                ),
            )
        }
        None => out
            .write_all(csv.as_bytes())
            .map_err(|e| Error::Output(format!("stdout: {e}"))),
    }
}

fn say(out: &mut dyn Write, args: std::fmt::Arguments<'_>) -> Result<()> {
    writeln!(out, "{args}").map_err(|e| Error::Output(format!("stdout: {e}")))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::GenMap(a) => gen_map(a, out),
        Command::BuildDb(a) => build_db(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Schedule(a) => schedule_one(a, out),
    }
}
