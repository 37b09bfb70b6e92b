//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use geoduplex::cli::{simulate, SimulateArgs};
use geoduplex_core::presets;
use geoduplex_core::region::sampling_lattice;
use geoduplex_core::scheduler::{pair_across_regions, solve_optimal, CostMatrix, DuplexMode, ResourcePlan, UserId};
use geoduplex_core::sim::{run_drop, trial_users, Scheme};
use geoduplex_core::propagation::PathlossSource;
use geoduplex_core::{ue_ue_pathloss, LinkBudgetConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

#[derive(Default)]
struct Report {
    failures: usize,
    lines: BTreeMap<u32, String>,
}

impl Report {
    fn check(&mut self, n: u32, title: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        let line = format!("criterion {n:>2}: {}  {title} ({detail})", if ok { "PASS" } else { "FAIL" });
        self.lines.insert(n, line);
    }
}

fn brute_force(cost: &[f64], n: usize) -> f64 {
    fn go(cost: &[f64], n: usize, row: usize, used: &mut [bool], acc: f64, best: &mut f64) {
        if row == n {
            *best = best.min(acc);
            return;
        }
        for c in 0..n {
            if !used[c] {
                used[c] = true;
                go(cost, n, row + 1, used, acc + cost[row * n + c], best);
                used[c] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(cost, n, 0, &mut vec![false; n], 0.0, &mut best);
    best
}

fn optimal_oracle(r: &mut Report) {
    let start = Instant::now();
    let plan = ResourcePlan::from_config(&LinkBudgetConfig::default());
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut mismatches = 0;
    for i in 0..200 {
        let n = 2 + i % 6;
        let data: Vec<f64> = (0..n * n).map(|_| rng.random_range(0.0..100.0)).collect();
        let cost = CostMatrix::from_values(n, n, data.clone()).unwrap();
        let a = solve_optimal(&cost, &plan).unwrap();
        // total in row order, as the exhaustive search accumulates it
        let mut pairs: Vec<(usize, usize)> = a
            .slots()
            .iter()
            .map(|s| {
                let dl = s.dl.expect("every user is paired");
                let ul = s.ul.expect("every user is paired");
                (((dl.0 - 1) / 2) as usize, ((ul.0 - 2) / 2) as usize)
            })
            .collect();
        pairs.sort();
        let total = pairs.iter().fold(0.0, |acc, &(row, col)| acc + data[row * n + col]);
        if pairs.len() != n || total != brute_force(&data, n) {
            mismatches += 1;
        }
    }
    let t = start.elapsed();
    r.check(
        1,
        "optimal matching equals exhaustive search",
        mismatches == 0 && t < Duration::from_secs(10),
        format!("200 matrices, n = 2..7, {mismatches} mismatches, {:.2} s", t.as_secs_f64()),
    );
}

fn drops(r: &mut Report) {
    let mut scene = presets::scene(46.0, 0).unwrap();
    scene.scenario.schemes = Scheme::ALL.to_vec();
    let plan = scene.plan();
    let mut violations = 0;
    let mut assignments = 0;
    let mut paired = 0;
    let mut off_floor = 0;
    for trial in 0..100 {
        let users = trial_users(&scene, trial).unwrap();
        for o in run_drop(&scene, trial).unwrap() {
            assignments += 1;
            violations += o.assignment.violations(&users, &plan).len();
            if o.scheme != Scheme::FdRegRand {
                continue;
            }
            let by_user: BTreeMap<UserId, _> = o.links.iter().map(|l| (l.user, l)).collect();
            for (dl, ul) in pair_across_regions(&users, &scene.db).pairs {
                paired += 1;
                let l = by_user[&dl];
                let exact = l.mode == DuplexMode::FullDuplex
                    && l.co_channel == Some(ul)
                    && l.interference_dbm == Some(-120.0)
                    && l.interference_source == Some(PathlossSource::RegionFloor);
                if !exact {
                    off_floor += 1;
                }
            }
        }
    }
    r.check(
        2,
        "assignments satisfy the scheduling constraints",
        violations == 0,
        format!("{assignments} assignments over 100 drops, {violations} violations"),
    );
    r.check(
        3,
        "region-paired links see exactly -120 dBm",
        paired > 0 && off_floor == 0,
        format!("{paired} region-paired links, {off_floor} not at -120 dBm"),
    );
}

fn read_series(dir: &Path, name: &str) -> Vec<f64> {
    let text = std::fs::read_to_string(dir.join(name)).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("value"));
    lines.map(|l| l.parse().unwrap()).collect()
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn median(s: &Value, scheme: &str, metric: &str, view: &str) -> f64 {
    s["schemes"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["scheme"] == scheme)
        .and_then(|x| {
            x["medians"]
                .as_array()
                .unwrap()
                .iter()
                .find(|m| m["metric"] == metric && m["view"] == view)
        })
        .and_then(|m| m["median"].as_f64())
        .unwrap_or(f64::NAN)
}

fn run_simulate(out: &Path, threads: Option<usize>) -> Duration {
    let start = Instant::now();
    let args = SimulateArgs {
        map: None,
        db: None,
        config: None,
        seed: Some(0),
        out: Some(out.to_path_buf()),
        threads,
        trials: Some(100),
        schemes: None,
        bs_power: Some(vec![20.0, 46.0]),
    };
    simulate(args, &mut Vec::new()).unwrap();
    start.elapsed()
}

fn campaign(r: &mut Report, root: &Path) {
    let elapsed = run_simulate(root, None);
    let low = root.join("bs_20dBm");
    let high = root.join("bs_46dBm");

    let reg = read_series(&low, "cdf_interference_FDregrand_whole.csv");
    let rand = read_series(&low, "cdf_interference_FDrand_whole.csv");
    let mass = |v: &[f64]| v.iter().filter(|&&x| x == -120.0).count() as f64 / v.len() as f64;
    let (m_reg, m_rand) = (mass(&reg), mass(&rand));
    r.check(
        4,
        "interference CDF jump at -120 dBm",
        m_reg >= 0.25 && m_rand <= 0.05 && elapsed < Duration::from_secs(120),
        format!(
            "FDregrand {m_reg:.4} >= 0.25, FDrand {m_rand:.4} <= 0.05, 100 trials, {:.1} s for both powers",
            elapsed.as_secs_f64()
        ),
    );

    let above = |v: &[f64]| v.iter().filter(|&&x| x > -100.0).count() as f64 / v.len() as f64;
    let (e_reg, e_rand) = (above(&reg), above(&rand));
    r.check(
        5,
        "interference exceedance reduction",
        e_rand > 0.0 && e_reg <= 0.7 * e_rand,
        format!("P(I > -100 dBm): FDregrand {e_reg:.4}, FDrand {e_rand:.4}, ratio {:.3} <= 0.7", e_reg / e_rand),
    );

    let mut ok6 = elapsed < Duration::from_secs(300);
    let mut ok7 = true;
    let mut d6 = Vec::new();
    let mut d7 = Vec::new();
    for (p, dir) in [(20, &low), (46, &high)] {
        let s = summary(dir);
        let all = |sc| median(&s, sc, "all_se", "whole");
        let (hd, reg, hyb) = (all("HD"), all("FDregrand"), all("FDregHDelse"));
        let (g_reg, g_hyb) = (reg / hd, hyb / hd);
        ok6 &= reg > hyb && hyb > hd && (1.5..=2.0).contains(&g_reg) && (1.1..=1.6).contains(&g_hyb);
        d6.push(format!("{p} dBm: FDregrand/HD {g_reg:.3}, FDregHDelse/HD {g_hyb:.3}"));

        let dl = |sc, view| median(&s, sc, "dl_se", view);
        let whole = dl("FDregrand", "whole") / dl("FDrand", "whole");
        let center = dl("FDregrand", "center") / dl("FDrand", "center");
        ok7 &= center > whole;
        d7.push(format!("{p} dBm: center {center:.3} > whole {whole:.3}"));
    }
    r.check(6, "median gain ordering FDregrand > FDregHDelse > HD", ok6, d6.join("; "));
    r.check(7, "cell-center amplification of the DL gain", ok7, d7.join("; "));

    let again = tempfile::tempdir().unwrap();
    run_simulate(again.path(), Some(2));
    let (a, b) = (tree(root), tree(again.path()));
    let identical = a == b && !a.is_empty();
    r.check(
        10,
        "simulate output is byte-identical across runs",
        identical,
        format!("{} files compared, second run on 2 threads", a.len()),
    );
}

fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn golden(r: &mut Report) {
    // hand-evaluated near and far formulas
    let near = |d: f64, f: f64| 32.45 + 20.0 * d.log10() + 20.0 * f.log10();
    let far = |d: f64, f: f64| 38.32 * d.log10() + 21.0 * f.log10() + 61.6;
    let cases = [(0.05, 81.07, far(0.05, 2000.0)), (0.049, 72.27, near(0.049, 2000.0))];
    let mut ok = true;
    let mut detail = Vec::new();
    for (d, want, oracle) in cases {
        let got = ue_ue_pathloss(d, 2000.0).unwrap();
        ok &= (oracle - want).abs() <= 0.01 && (got - want).abs() <= 0.01;
        detail.push(format!("{d} km: {got:.4} dB (oracle {oracle:.4}, expected {want})"));
    }
    r.check(8, "path-loss golden values", ok, detail.join("; "));
}

fn database(r: &mut Report) {
    let scene = presets::scene(46.0, 0).unwrap();
    let alphas: Vec<f64> = scene.db.pairs().iter().map(|p| p.alpha_db).collect();
    let lattices_ok = scene
        .db
        .pairs()
        .iter()
        .all(|p| sampling_lattice(&p.region_a, 25.0).is_ok() && sampling_lattice(&p.region_b, 25.0).is_ok());
    r.check(
        9,
        "preset scene database reconstruction",
        alphas.len() == 8 && alphas.iter().all(|&a| a == 140.0) && lattices_ok,
        format!("K = {}, alpha = {alphas:?}", alphas.len()),
    );
}

fn main() -> ExitCode {
    // the harness passes libtest flags; a name filter that excludes us skips the run
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return ExitCode::SUCCESS;
    }
    let mut r = Report::default();
    let out = tempfile::tempdir().unwrap();
    optimal_oracle(&mut r);
    drops(&mut r);
    campaign(&mut r, out.path());
    golden(&mut r);
    database(&mut r);
    for line in r.lines.values() {
        println!("{line}");
    }
    if r.failures == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria fail", r.failures);
        ExitCode::FAILURE
    }
}
