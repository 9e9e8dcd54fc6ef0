//! The three subcommands.

use anyhow::Context;
use aps_core::engine::{default_schedule, run_aps, RunConfig, Schedule};
use aps_core::metrics::{format_bitstring, kld_vs_uniform, parse_bitstring};
use aps_core::oracle::{build_phase_table, PhaseMapKind, ProblemInstance};
use aps_core::scan::{find_peaks, scan_lambda, SchedulePolicy, SearchSpaceSize, SweepConfig};
use aps_core::state::{RegisterLayout, DEFAULT_QUBIT_CAP};
use aps_core::{grover_success_probability, run_grover_baseline_with_cap, sample};
use std::path::Path;

use crate::args::{
    ApsArgs, EigenScanArgs, Format, GroverArgs, MapChoice, PolicyChoice, SpaceChoice,
};
use crate::output;
use crate::CliError;

const CAP_ENV: &str = "APS_SIM_MAX_QUBITS";

fn qubit_cap() -> Result<u32, CliError> {
    match std::env::var(CAP_ENV) {
        Ok(raw) => raw
            .parse()
            .map_err(|_| CliError::usage(format!("{CAP_ENV} must be a qubit count, got {raw:?}"))),
        Err(_) => Ok(DEFAULT_QUBIT_CAP),
    }
}

fn load_instance(path: &Path) -> Result<ProblemInstance, CliError> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(CliError::Internal)?;
    ProblemInstance::from_json(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn check_instance_width(
    instance: &ProblemInstance,
    expected: Option<u32>,
) -> Result<u32, CliError> {
    let n = instance.n_qubits();
    if let Some(want) = expected {
        if want != n {
            return Err(CliError::usage(format!(
                "--n {want} is inconsistent with the {} instance, which needs {n} work qubits",
                instance.kind_name()
            )));
        }
    }
    Ok(n)
}

fn resolve_seed(shots: u64, seed: Option<u64>) -> Result<u64, CliError> {
    match (shots, seed) {
        (0, _) => Ok(seed.unwrap_or(0)),
        (_, Some(s)) => Ok(s),
        (_, None) => Err(CliError::usage("--shots requires an explicit --seed")),
    }
}

fn resolve_schedule(
    n: u32,
    m: u32,
    pre: Option<u32>,
    main: Option<u32>,
) -> Result<Schedule, CliError> {
    let mut schedule = default_schedule(n, m).map_err(|e| CliError::usage(e.to_string()))?;
    if let Some(pre) = pre {
        schedule.preprocessing_reps = pre;
    }
    if let Some(main) = main {
        schedule.main_reps = main;
    }
    Ok(schedule)
}

impl MapChoice {
    fn kind(self) -> PhaseMapKind {
        match self {
            MapChoice::Linear => PhaseMapKind::Linear,
            MapChoice::Triangular => PhaseMapKind::Triangular,
        }
    }
}

pub fn cmd_grover(args: GroverArgs) -> Result<(), CliError> {
    let cap = qubit_cap()?;
    let mut marked = Vec::with_capacity(args.marked.len());
    for raw in &args.marked {
        let (state, width) = parse_bitstring(raw).map_err(|e| CliError::usage(e.to_string()))?;
        if width != args.n {
            return Err(CliError::usage(format!(
                "marked state {raw:?} has {width} bits, expected {}",
                args.n
            )));
        }
        marked.push(state);
    }

    let dist = run_grover_baseline_with_cap(args.n, &marked, args.reps, cap)
        .map_err(|e| CliError::usage(e.to_string()))?;

    let mut unique = marked.clone();
    unique.sort_unstable();
    unique.dedup();
    let p_marked: f64 = unique.iter().map(|&m| dist[m as usize]).sum();
    let predicted = grover_success_probability(args.n, unique.len(), args.reps);

    println!(
        "grover: n = {}, marked = {{{}}}, reps = {}",
        args.n,
        unique
            .iter()
            .map(|&m| format_bitstring(m, args.n))
            .collect::<Vec<_>>()
            .join(", "),
        args.reps
    );
    println!("P(marked) simulated:   {p_marked:.9}");
    println!("P(marked) closed-form: {predicted:.9}");

    if let Some(out) = &args.out {
        let hist = sample(&dist, 0, 0).map_err(|e| CliError::usage(e.to_string()))?;
        output::write_file(out, &hist.to_csv())?;
    }
    Ok(())
}

pub fn cmd_aps(args: ApsArgs) -> Result<(), CliError> {
    let cap = qubit_cap()?;
    let instance = load_instance(&args.instance)?;
    let n = check_instance_width(&instance, args.n)?;
    let m = args.m.unwrap_or(n);
    let seed = resolve_seed(args.shots, args.seed)?;

    let h = instance
        .hamiltonian()
        .map_err(|e| CliError::usage(e.to_string()))?;
    let target = match args.target.or_else(|| instance.default_target()) {
        Some(t) if t != 0.0 => t,
        // a zero spectrum builds the all-zero table under any scale
        Some(_) if h.diag().iter().all(|&c| c == 0.0) => 1.0,
        Some(_) => return Err(CliError::usage("target cost must be nonzero")),
        None => {
            return Err(CliError::usage(
                "diagonal instances carry no target cost; pass --target",
            ))
        }
    };
    let map = args
        .phase_map
        .kind()
        .with_target(target)
        .map_err(|e| CliError::usage(e.to_string()))?;
    let table = build_phase_table(h.diag(), map).map_err(|e| CliError::usage(e.to_string()))?;

    let layout = RegisterLayout::with_cap(n, m, cap).map_err(|e| CliError::usage(e.to_string()))?;
    let schedule = resolve_schedule(n, m, args.pre_reps, args.main_reps)?;
    let config = RunConfig {
        layout,
        schedule,
        shots: args.shots,
        seed,
        trace: false,
    };
    let run = run_aps(&config, &table).map_err(|e| CliError::usage(e.to_string()))?;
    let kld = kld_vs_uniform(run.histogram.probabilities());
    let (top, top_prob) = run.histogram.top_state();

    println!(
        "aps: {} instance, n = {n}, m = {m}, schedule = {} preprocessing + {} main, \
         phase map = {}, target = {target}",
        instance.kind_name(),
        schedule.preprocessing_reps,
        schedule.main_reps,
        args.phase_map.kind().name()
    );
    println!("kld vs uniform: {kld:.6}");
    println!(
        "top state: {} (cost {}, probability {:.6})",
        format_bitstring(top, n),
        h.eigenvalue(top as usize),
        top_prob
    );
    for (state, p) in run.histogram.sorted_rows().iter().take(8) {
        println!(
            "  {}  p = {:<10.6} cost = {}",
            format_bitstring(*state, n),
            p,
            h.eigenvalue(*state as usize)
        );
    }

    if let Some(out) = &args.out {
        let metadata = output::run_metadata(
            &instance,
            &h,
            schedule,
            args.phase_map.kind().name(),
            target,
            args.shots,
            seed,
            kld,
            &run.histogram,
        );
        match args.format {
            Format::Csv => {
                output::write_file(out, &run.histogram.to_csv())?;
                let meta_path = output::sidecar(out, "meta.json");
                output::write_file(
                    &meta_path,
                    &serde_json::to_string_pretty(&metadata).unwrap(),
                )?;
            }
            Format::Json => {
                output::write_file(out, &serde_json::to_string_pretty(&metadata).unwrap())?;
            }
        }
    }
    Ok(())
}

pub fn cmd_eigen_scan(args: EigenScanArgs) -> Result<(), CliError> {
    let cap = qubit_cap()?;
    let instance = load_instance(&args.instance)?;
    let n = check_instance_width(&instance, args.n)?;
    let m = args.m.unwrap_or(n);
    let seed = resolve_seed(args.shots, args.seed)?;

    let h = instance
        .hamiltonian()
        .map_err(|e| CliError::usage(e.to_string()))?;
    let (default_min, default_max, default_step) = SweepConfig::default_grid(&h);
    let lambda_min = args.lambda_min.unwrap_or(default_min);
    let lambda_max = args.lambda_max.unwrap_or(default_max);
    let step = args.lambda_step.unwrap_or(default_step);
    if lambda_min <= 0.0 && lambda_max >= 0.0 {
        return Err(CliError::usage(format!(
            "the sweep range [{lambda_min}, {lambda_max}] contains 0, where the oracle is singular"
        )));
    }

    let layout = RegisterLayout::with_cap(n, m, cap).map_err(|e| CliError::usage(e.to_string()))?;
    let schedule = resolve_schedule(n, m, args.pre_reps, args.main_reps)?;
    let base = RunConfig {
        layout,
        schedule,
        shots: args.shots,
        seed,
        trace: false,
    };
    let mut sweep = SweepConfig::new(lambda_min, lambda_max, step, base);
    sweep.schedule_policy = match args.policy {
        PolicyChoice::Fixed => SchedulePolicy::Fixed,
        PolicyChoice::Adaptive => SchedulePolicy::DegeneracyAdaptive,
    };
    sweep.search_space = match args.search_space {
        SpaceChoice::Work => SearchSpaceSize::Work,
        SpaceChoice::Joint => SearchSpaceSize::Joint,
    };
    sweep.phase_map = args.phase_map.map(MapChoice::kind);

    let result = scan_lambda(&h, &sweep).map_err(|e| CliError::usage(e.to_string()))?;
    let peaks = if result.records.len() >= 3 {
        find_peaks(&result, args.min_prominence).map_err(|e| CliError::usage(e.to_string()))?
    } else {
        Vec::new()
    };

    println!(
        "eigen-scan: {} instance, n = {n}, m = {m}, grid [{lambda_min}, {lambda_max}] step {step}, \
         policy = {:?}, phase map = {}",
        instance.kind_name(),
        sweep.schedule_policy,
        result.meta.phase_map.name()
    );
    if peaks.is_empty() {
        eprintln!("warning: no peaks detected");
    } else {
        let listed: Vec<String> = peaks
            .iter()
            .map(|&l| {
                let record = result
                    .records
                    .iter()
                    .find(|r| (r.lambda - l).abs() < 1e-9)
                    .expect("peak from records");
                format!(
                    "{l} (top {}, kld {:.4})",
                    format_bitstring(record.top_state, n),
                    record.kld
                )
            })
            .collect();
        println!("peaks: {}", listed.join("; "));
    }

    if let Some(out) = &args.out {
        match args.format {
            Format::Csv => output::write_file(out, &result.to_csv())?,
            Format::Json => output::write_file(out, &result.to_json())?,
        }
        let peaks_doc = output::peaks_document(&result, &h, &peaks, sweep.degeneracy_tol);
        let peaks_path = output::sidecar(out, "peaks.json");
        output::write_file(
            &peaks_path,
            &serde_json::to_string_pretty(&peaks_doc).unwrap(),
        )?;
    } else if result.records.len() <= 40 {
        for r in &result.records {
            println!(
                "  lambda = {:<6} kld = {:<10.6} iters = {:<3} top = {} ({:.4})",
                r.lambda,
                r.kld,
                r.iterations,
                format_bitstring(r.top_state, n),
                r.top_prob
            );
        }
    }

    Ok(())
}
