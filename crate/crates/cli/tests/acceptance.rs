//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Criteria 3 to 7 and 9 run against the bundled sample configuration at
//! `data/sample/config.toml`.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use geosched_cli::{cmd_sweep, evaluate, load_inputs, Cell, Inputs, Report, RunConfig};
use geosched_core::footprint::*;
use geosched_core::sched::{
    schedule_round, solve_hard, solve_soft, AssignmentProblem, HistoryLearner, PendingJob,
    RoundContext,
};
use geosched_core::sim::{check_capacity, Policy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sample_config() -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/sample/config.toml");
    RunConfig::load(&path).expect("bundled sample config loads")
}

// ---------------------------------------------------------------- 1

/// Minimum of `weight` over complete capacity-respecting assignments that
/// use only `allowed` pairs.
fn enumerate(
    p: &AssignmentProblem,
    allowed: &dyn Fn(usize, usize) -> bool,
    weight: &dyn Fn(usize, usize) -> f64,
) -> Option<f64> {
    fn go(
        j: usize,
        p: &AssignmentProblem,
        left: &mut [usize],
        acc: f64,
        allowed: &dyn Fn(usize, usize) -> bool,
        weight: &dyn Fn(usize, usize) -> f64,
        best: &mut Option<f64>,
    ) {
        if j == p.job_count() {
            if best.is_none_or(|b| acc < b) {
                *best = Some(acc);
            }
            return;
        }
        for n in 0..p.regions {
            if left[n] > 0 && allowed(j, n) {
                left[n] -= 1;
                go(j + 1, p, left, acc + weight(j, n), allowed, weight, best);
                left[n] += 1;
            }
        }
    }
    let mut best = None;
    go(
        0,
        p,
        &mut p.capacity.clone(),
        0.0,
        allowed,
        weight,
        &mut best,
    );
    best
}

fn random_problem(rng: &mut ChaCha8Rng) -> AssignmentProblem {
    let m = rng.gen_range(1..=6);
    let n = rng.gen_range(1..=4);
    let cost = (0..m * n).map(|_| rng.gen_range(0.0..1.5)).collect();
    let ratio = (0..m * n).map(|_| rng.gen_range(0.0..0.6)).collect();
    let cap = (0..n).map(|_| rng.gen_range(0..=3)).collect();
    let tol = rng.gen_range(0.0..0.5);
    let sigma = rng.gen_range(0.0..20.0);
    AssignmentProblem::from_matrices(n, cost, ratio, tol, cap, sigma)
}

fn solver_exactness() -> Verdict {
    const TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let started = Instant::now();
    let (mut hard, mut soft, mut infeasible) = (0, 0, 0);
    let mut instances = 0;
    while hard < 200 || soft < 200 {
        instances += 1;
        let p = random_problem(&mut rng);
        let oracle = enumerate(&p, &|j, n| p.feasible[p.at(j, n)], &|j, n| {
            p.cost[p.at(j, n)]
        });
        match (solve_hard(&p), oracle) {
            (Ok(s), Some(best)) => {
                ensure((s.objective - best).abs() <= TOL, || {
                    format!("hard {} vs {best}", s.objective)
                })?;
                hard += 1;
            }
            (Err(_), None) => infeasible += 1,
            (got, want) => {
                return Err(format!(
                    "hard {:?} vs enumeration {want:?}",
                    got.map(|s| s.objective)
                ))
            }
        }
        if p.total_capacity() >= p.job_count() {
            let best = enumerate(&p, &|_, _| true, &|j, n| {
                p.cost[p.at(j, n)] + p.penalty_weight * p.overshoot(j, n)
            })
            .ok_or("enumeration found no relaxed assignment")?;
            let s = solve_soft(&p);
            ensure((s.objective - best).abs() <= TOL, || {
                format!("soft {} vs {best}", s.objective)
            })?;
            soft += 1;
        }
    }
    let secs = started.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.2} s"))?;
    Ok(format!(
        "{instances} instances: {hard} hard optima, {infeasible} agreed infeasible, {soft} relaxed optima, {secs:.2} s"
    ))
}

// ---------------------------------------------------------------- 2

fn env(ci: f64, ewif: f64, wue: f64, wsf: f64, pue: f64) -> RegionEnvPoint {
    RegionEnvPoint {
        region: "r".into(),
        timestamp: 0,
        carbon_intensity: ci,
        ewif,
        wue,
        wsf,
        pue,
    }
}

fn server(embodied: f64, lifetime: f64, mfg_ci: f64, mfg_ewif: f64, wsf: f64) -> ServerSpec {
    ServerSpec {
        embodied_carbon_total: embodied,
        lifetime,
        mfg_carbon_intensity: mfg_ci,
        mfg_ewif,
        wsf_server: wsf,
    }
}

fn rec(energy: f64, exec_time: f64) -> JobEnergyRecord {
    JobEnergyRecord { energy, exec_time }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn footprint_model() -> Verdict {
    let none = server(0.0, 1.0, 1.0, 0.0, 0.0);
    let hydro = EnergySourceProfile {
        name: "hydro".into(),
        carbon_intensity: 17.0,
        ewif: 17.0,
    };
    let table = vec![
        hydro.clone(),
        EnergySourceProfile {
            name: "a".into(),
            carbon_intensity: 0.0,
            ewif: 2.0,
        },
        EnergySourceProfile {
            name: "b".into(),
            carbon_intensity: 0.0,
            ewif: 4.0,
        },
    ];
    let hundred_l = server(1e4, 1000.0, 100.0, 1.0, 0.0);
    let mfg = server(1000.0, 1.0, 500.0, 2.0, 0.0);
    let mfg_scarce = ServerSpec {
        wsf_server: 0.25,
        ..mfg.clone()
    };

    let examples: Vec<(&str, f64, f64)> = vec![
        (
            "coal carbon",
            total_carbon(&rec(1.0, 60.0), 1050.0, &none),
            1050.0,
        ),
        (
            "zero carbon",
            total_carbon(&rec(0.0, f64::EPSILON), 1050.0, &none),
            0.0,
        ),
        (
            "hydro carbon",
            total_carbon(
                &rec(2.0, 3600.0),
                hydro.carbon_intensity,
                &server(1.26e8, 1.26e8, 1.0, 0.0, 0.0),
            ),
            3634.0,
        ),
        (
            "offsite",
            offsite_water(&rec(1.0, 1.0), &env(0.0, hydro.ewif, 0.0, 0.0, 1.2)),
            20.4,
        ),
        (
            "offsite zero",
            offsite_water(&rec(0.0, 1.0), &env(0.0, 17.0, 0.0, 0.0, 1.2)),
            0.0,
        ),
        (
            "offsite scarce",
            offsite_water(&rec(1.0, 1.0), &env(0.0, 17.0, 0.0, 1.0, 1.2)),
            40.8,
        ),
        (
            "onsite zero",
            onsite_water(&rec(1.0, 1.0), &env(0.0, 0.0, 0.0, 0.0, 1.2)),
            0.0,
        ),
        (
            "onsite",
            onsite_water(&rec(2.0, 1.0), &env(0.0, 0.0, 1.5, 0.5, 1.2)),
            4.5,
        ),
        (
            "onsite identity",
            onsite_water(&rec(1.0, 1.0), &env(0.0, 0.0, 1.0, 0.0, 1.2)),
            1.0,
        ),
        (
            "embodied",
            embodied_water_total(&mfg).map_err(|e| e.to_string())?,
            4.0,
        ),
        (
            "embodied zero",
            embodied_water_total(&server(0.0, 1.0, 500.0, 2.0, 0.0)).map_err(|e| e.to_string())?,
            0.0,
        ),
        (
            "embodied scarce",
            embodied_water_total(&mfg_scarce).map_err(|e| e.to_string())?,
            5.0,
        ),
        (
            "total zero",
            total_water(&rec(1.0, 10.0), &env(0.0, 0.0, 0.0, 0.0, 1.2), &none)
                .map_err(|e| e.to_string())?,
            0.0,
        ),
        (
            "total",
            total_water(&rec(1.0, 10.0), &env(0.0, 17.0, 1.0, 0.0, 1.2), &none)
                .map_err(|e| e.to_string())?,
            21.4,
        ),
        (
            "total with embodied",
            total_water(&rec(1.0, 10.0), &env(0.0, 17.0, 1.0, 0.0, 1.2), &hundred_l)
                .map_err(|e| e.to_string())?,
            22.4,
        ),
        (
            "intensity zero",
            water_intensity(&env(0.0, 0.0, 0.0, 0.0, 1.2)),
            0.0,
        ),
        (
            "intensity",
            water_intensity(&env(0.0, 17.0, 1.0, 0.0, 1.2)),
            21.4,
        ),
        (
            "intensity scarce",
            water_intensity(&env(0.0, 17.0, 1.0, 1.0, 1.2)),
            42.8,
        ),
        (
            "hydro mix",
            mix_ewif(&EnergyMix::new([("hydro".to_string(), 1.0)]), &table)
                .map_err(|e| e.to_string())?,
            17.0,
        ),
        (
            "even mix",
            mix_ewif(
                &EnergyMix::new([("a".to_string(), 0.5), ("b".to_string(), 0.5)]),
                &table,
            )
            .map_err(|e| e.to_string())?,
            3.0,
        ),
        (
            "single mix",
            mix_ewif(&EnergyMix::new([("b".to_string(), 1.0)]), &table)
                .map_err(|e| e.to_string())?,
            4.0,
        ),
    ];
    for (name, got, want) in &examples {
        ensure((got - want).abs() <= 1e-12, || {
            format!("{name}: {got} != {want}")
        })?;
    }
    ensure(
        embodied_water_total(&server(1.0, 1.0, 0.0, 1.0, 0.0)).is_err(),
        || "zero mfg intensity accepted".into(),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..1000 {
        let e = env(
            rng.gen_range(0.0..1200.0),
            rng.gen_range(0.0..20.0),
            rng.gen_range(0.0..3.0),
            rng.gen_range(0.0..5.0),
            rng.gen_range(1.0..2.0),
        );
        let s = server(
            rng.gen_range(0.0..2e6),
            rng.gen_range(1e6..2e8),
            rng.gen_range(1.0..1000.0),
            rng.gen_range(0.0..20.0),
            rng.gen_range(0.0..5.0),
        );
        let r = rec(rng.gen_range(0.0..10.0), rng.gen_range(1.0..1e5));
        let k = rng.gen_range(0.0..50.0);
        let scaled = rec(k * r.energy, r.exec_time);
        let fail = |what: &str| format!("random input {i}: {what}");
        ensure(
            close(
                total_carbon(&scaled, e.carbon_intensity, &none),
                k * total_carbon(&r, e.carbon_intensity, &none),
            ),
            || fail("carbon linearity"),
        )?;
        ensure(
            close(offsite_water(&scaled, &e), k * offsite_water(&r, &e)),
            || fail("offsite linearity"),
        )?;
        ensure(
            close(onsite_water(&scaled, &e), k * onsite_water(&r, &e)),
            || fail("onsite linearity"),
        )?;

        let wsf2 = rng.gen_range(0.0..5.0);
        let e2 = RegionEnvPoint {
            wsf: wsf2,
            ..e.clone()
        };
        let ratio = (1.0 + wsf2) / (1.0 + e.wsf);
        ensure(
            close(offsite_water(&r, &e2), ratio * offsite_water(&r, &e)),
            || fail("offsite scarcity"),
        )?;
        ensure(
            close(onsite_water(&r, &e2), ratio * onsite_water(&r, &e)),
            || fail("onsite scarcity"),
        )?;
        ensure(
            close(water_intensity(&e2), ratio * water_intensity(&e)),
            || fail("intensity scarcity"),
        )?;
        let s2 = ServerSpec {
            wsf_server: wsf2,
            ..s.clone()
        };
        let ratio = (1.0 + wsf2) / (1.0 + s.wsf_server);
        let (a, b) = (
            embodied_water_total(&s2).unwrap(),
            embodied_water_total(&s).unwrap(),
        );
        ensure(close(a, ratio * b), || fail("embodied scarcity"))?;
    }
    Ok(format!(
        "{} worked examples exact, 1000 random inputs linear and scarcity-scaled",
        examples.len()
    ))
}

// ---------------------------------------------------------------- 3

fn constraints(cfg: &RunConfig, inputs: &Inputs, report: &Report) -> Verdict {
    let ids: BTreeSet<&str> = inputs.trace.iter().map(|e| e.job_id.as_str()).collect();
    ensure(ids.len() == inputs.trace.len(), || {
        "trace ids are not unique".into()
    })?;
    let (mut hard_rounds, mut relaxed_rounds) = (0, 0);
    for (label, out) in &report.runs {
        let slots = cfg
            .slots(&inputs.world.regions, label.capacity_scale)
            .map_err(|e| e.to_string())?;
        let cell = format!(
            "{} tol={} scale={}",
            label.policy, label.tolerance, label.capacity_scale
        );
        check_capacity(&out.outcomes, &slots).map_err(|v| format!("{cell}: {v:?}"))?;
        ensure(out.outcomes.len() == inputs.trace.len(), || {
            format!("{cell}: {} outcomes", out.outcomes.len())
        })?;
        let placed: BTreeSet<&str> = out.outcomes.iter().map(|o| o.job_id.as_str()).collect();
        ensure(placed == ids, || {
            format!("{cell}: placed ids differ from the trace")
        })?;
        for r in &out.rounds {
            if r.relaxed {
                relaxed_rounds += 1;
            } else {
                hard_rounds += 1;
                ensure(r.penalty == 0.0, || {
                    format!("{cell}: hard round at {} has penalty {}", r.at, r.penalty)
                })?;
            }
        }
    }
    Ok(format!(
        "{} runs within capacity, {} jobs placed once each, {hard_rounds} hard rounds penalty-free ({relaxed_rounds} relaxed)",
        report.runs.len(),
        inputs.trace.len()
    ))
}

// ---------------------------------------------------------------- 4

fn violation_bound(cfg: &RunConfig, report: &Report) -> Verdict {
    let mut notes = Vec::new();
    for &scale in &cfg.sweep.capacity_scales {
        for &tol in &cfg.sweep.tolerances {
            let out = report
                .run(Policy::Waterwise, tol, scale)
                .ok_or("missing waterwise cell")?;
            let v = out.metrics.violation_fraction;
            let bound = if tol >= 0.5 { 0.01 } else { 0.05 };
            ensure(v <= bound, || {
                format!(
                    "tol {tol} scale {scale}: violations {:.3}% > {:.0}%",
                    100.0 * v,
                    100.0 * bound
                )
            })?;
            let within: Vec<f64> = out
                .outcomes
                .iter()
                .filter(|o| !o.violated)
                .map(|o| o.normalized_service())
                .collect();
            let mean = within.iter().sum::<f64>() / within.len().max(1) as f64;
            ensure(mean <= 1.0 + tol + 1e-9, || {
                format!("tol {tol} scale {scale}: non-violating mean {mean}")
            })?;
            if tol == 1.0 {
                let s = out.metrics.mean_norm_service;
                ensure(s <= 1.15, || {
                    format!("scale {scale}: mean normalized service {s:.3} > 1.15")
                })?;
            }
            if scale == 1.0 {
                notes.push(format!("{:.0}%:{:.2}%", 100.0 * tol, 100.0 * v));
            }
        }
    }
    let s = report
        .run(Policy::Waterwise, 1.0, 1.0)
        .ok_or("missing waterwise cell")?
        .metrics
        .mean_norm_service;
    Ok(format!(
        "violations at scale 1 [{}], service {s:.3}x at full tolerance",
        notes.join(" ")
    ))
}

// ---------------------------------------------------------------- 5

fn co_optimization(report: &Report) -> Verdict {
    let rec = |p| {
        report
            .record(p, 0.5, 1.0)
            .ok_or_else(|| format!("missing {p} at tolerance 0.5"))
    };
    let ww = rec(Policy::Waterwise)?;
    let cs = ww.carbon_savings_pct.ok_or("undefined carbon savings")?;
    let hs = ww.water_savings_pct.ok_or("undefined water savings")?;
    ensure(cs > 0.0 && hs > 0.0, || {
        format!("savings carbon {cs:.2}% water {hs:.2}%")
    })?;
    let cgo = rec(Policy::CarbonGreedyOpt)?.total_carbon_g;
    let wgo = rec(Policy::WaterGreedyOpt)?.total_water_l;
    let c_gap = ww.total_carbon_g / cgo - 1.0;
    let w_gap = ww.total_water_l / wgo - 1.0;
    ensure(c_gap <= 0.15, || {
        format!("carbon {:.1}% above carbon oracle", 100.0 * c_gap)
    })?;
    ensure(w_gap <= 0.15, || {
        format!("water {:.1}% above water oracle", 100.0 * w_gap)
    })?;
    for p in [Policy::RoundRobin, Policy::LeastLoad] {
        let r = rec(p)?;
        ensure(
            r.total_carbon_g > ww.total_carbon_g || r.total_water_l > ww.total_water_l,
            || format!("{p} is not dominated"),
        )?;
    }
    Ok(format!(
        "savings carbon {cs:.2}% water {hs:.2}%, gap to oracles carbon {:+.1}% water {:+.1}%, round_robin and least_load dominated",
        100.0 * c_gap,
        100.0 * w_gap
    ))
}

// ---------------------------------------------------------------- 6

fn tolerance_monotonicity(cfg: &RunConfig, report: &Report) -> Verdict {
    let mut tols = cfg.sweep.tolerances.clone();
    tols.sort_by(f64::total_cmp);
    let mut series = Vec::new();
    for &scale in &cfg.sweep.capacity_scales {
        for (policy, pick) in [
            (
                Policy::CarbonGreedyOpt,
                (|r: &geosched_core::sim::MetricsRecord| r.total_carbon_g) as fn(&_) -> f64,
            ),
            (Policy::WaterGreedyOpt, |r| r.total_water_l),
        ] {
            let vals: Vec<f64> = tols
                .iter()
                .map(|&t| {
                    report
                        .record(policy, t, scale)
                        .map(pick)
                        .ok_or_else(|| format!("missing {policy} at {t}"))
                })
                .collect::<Result<_, _>>()?;
            ensure(vals.windows(2).all(|w| w[1] <= w[0]), || {
                format!("{policy} at scale {scale}: {vals:?}")
            })?;
            series.push(vals);
        }
    }
    Ok(format!(
        "{} oracle series non-increasing over tolerances {tols:?}",
        series.len()
    ))
}

// ---------------------------------------------------------------- 7

fn lambda_configurability(cfg: &RunConfig, inputs: &Inputs) -> Verdict {
    let cell = [Cell {
        policy: Policy::Waterwise,
        tolerance: 0.5,
        capacity_scale: 1.0,
    }];
    let at = |l: f64| -> Result<(f64, f64), String> {
        let mut c = cfg.clone();
        c.scheduler.lambda_co2 = l;
        c.scheduler.lambda_h2o = 1.0 - l;
        let r = evaluate(&c, inputs, &cell).map_err(|e| e.to_string())?;
        Ok((r.records[0].total_carbon_g, r.records[0].total_water_l))
    };
    let (c7, w7) = at(0.7)?;
    let (c3, w3) = at(0.3)?;
    ensure(c7 <= c3 && w7 >= w3, || {
        format!("0.7: ({c7:.0} g, {w7:.1} L) vs 0.3: ({c3:.0} g, {w3:.1} L)")
    })?;
    Ok(format!(
        "carbon {c7:.0} <= {c3:.0} g, water {w7:.1} >= {w3:.1} L"
    ))
}

// ---------------------------------------------------------------- 8

fn overhead(cfg: &RunConfig, inputs: &Inputs) -> Verdict {
    let world = &inputs.world;
    let regions = world.regions.len();
    let mut history = HistoryLearner::new(cfg.scheduler.history_window, regions);
    let mut times = Vec::new();
    let batch = 100;
    for (round, chunk) in inputs.trace.chunks(batch).enumerate() {
        if chunk.len() < batch {
            break;
        }
        let now = chunk[0].arrival.ceil();
        let envs: Vec<RegionEnvPoint> = world
            .env
            .iter()
            .map(|s| s.sample(now).cloned())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("{e:?}"))?;
        let ctx = RoundContext {
            envs: &envs,
            latency: &world.latency,
            server: &world.server,
            embodied_water: world.embodied_water,
            now,
        };
        let jobs: Vec<PendingJob> = chunk
            .iter()
            .enumerate()
            .map(|(i, e)| PendingJob {
                id: e.job_id.clone(),
                seq: round * batch + i,
                home: world.region_index(&e.home_region).expect("known region"),
                profile: world.profiles[&e.benchmark],
                received_at: now,
            })
            .collect();
        // alternate ample and short capacity to time both solver paths
        let per_region = if round % 2 == 0 { 30 } else { 15 };
        let started = Instant::now();
        let d = schedule_round(
            jobs,
            Vec::new(),
            &ctx,
            &vec![per_region; regions],
            &cfg.scheduler,
            &mut history,
        );
        times.push(started.elapsed().as_secs_f64() * 1e3);
        ensure(d.jobs.len() + d.deferred.len() == batch, || {
            format!("round {round} lost jobs")
        })?;
    }
    ensure(!times.is_empty(), || "no full batches in the trace".into())?;
    times.sort_by(f64::total_cmp);
    let median = times[times.len() / 2];
    let max = times[times.len() - 1];
    ensure(median < 100.0, || format!("median {median:.2} ms"))?;
    Ok(format!(
        "{} rounds of {batch} jobs x {regions} regions: median {median:.2} ms, max {max:.2} ms",
        times.len()
    ))
}

// ---------------------------------------------------------------- 9

fn determinism(cfg: &RunConfig, tmp: &Path) -> Verdict {
    let mut dirs: Vec<PathBuf> = Vec::new();
    for name in ["a", "b"] {
        let mut c = cfg.clone();
        c.out_dir = tmp.join(name);
        cmd_sweep(&c).map_err(|e| e.to_string())?;
        dirs.push(c.out_dir);
    }
    let mut bytes = 0;
    for f in ["outcomes.csv", "metrics.csv"] {
        let a = std::fs::read(dirs[0].join(f)).map_err(|e| e.to_string())?;
        let b = std::fs::read(dirs[1].join(f)).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{f} differs between invocations"))?;
        bytes += a.len();
    }
    Ok(format!(
        "outcomes.csv and metrics.csv identical ({bytes} bytes)"
    ))
}

fn main() -> ExitCode {
    let cfg = sample_config();
    let inputs = load_inputs(&cfg).expect("bundled sample loads");
    let cells = geosched_cli::sweep_cells(&cfg);
    let report = evaluate(&cfg, &inputs, &cells).expect("bundled sweep runs");
    let tmp = tempfile::tempdir().expect("temp dir");

    let results: Vec<(&str, Verdict)> = vec![
        ("solver exactness", solver_exactness()),
        ("footprint model", footprint_model()),
        ("constraints", constraints(&cfg, &inputs, &report)),
        ("violation bound", violation_bound(&cfg, &report)),
        ("co-optimization", co_optimization(&report)),
        (
            "tolerance monotonicity",
            tolerance_monotonicity(&cfg, &report),
        ),
        (
            "lambda configurability",
            lambda_configurability(&cfg, &inputs),
        ),
        ("overhead", overhead(&cfg, &inputs)),
        ("determinism", determinism(&cfg, tmp.path())),
    ];
    let mut failed = 0;
    for (i, (name, verdict)) in results.iter().enumerate() {
        match verdict {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
