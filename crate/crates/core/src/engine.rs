//! Drives the full search: a preprocessing stage of controlled oracle plus
//! local diffusion that lifts the marked amplitudes into the all-ones
//! ancilla slice, then a main stage of controlled oracle plus global
//! diffusion, then marginal measurement of the work register.
//!
//! The classic single-register Grover iteration is included as a baseline
//! with a closed-form success probability to validate against.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_4;

use crate::error::{ApsError, Result};
use crate::metrics::Histogram;
use crate::state::{sample, PhaseTable, RegisterLayout, StateVector};

/// Repetition counts for the two stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub preprocessing_reps: u32,
    pub main_reps: u32,
}

/// Empirical schedule: `floor(pi/4 * sqrt(2^m))` preprocessing rounds and
/// `round(sqrt(2^n))` main rounds.
pub fn default_schedule(n_work: u32, m_ancilla: u32) -> Result<Schedule> {
    if m_ancilla < 2 {
        return Err(ApsError::AncillaRequired {
            required: 2,
            got: m_ancilla,
        });
    }
    let preprocessing_reps = (FRAC_PI_4 * (2f64.powi(m_ancilla as i32)).sqrt()).floor() as u32;
    let main_reps = (2f64.powi(n_work as i32)).sqrt().round() as u32;
    Ok(Schedule {
        preprocessing_reps,
        main_reps,
    })
}

/// Everything one run needs: register split, schedule, and measurement
/// settings (`shots = 0` keeps the exact marginal distribution).
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub layout: RegisterLayout,
    pub schedule: Schedule,
    pub shots: u64,
    pub seed: u64,
    /// Record a statevector snapshot after every operation.
    pub trace: bool,
}

impl RunConfig {
    /// Exact-mode config (no sampling noise).
    pub fn exact(layout: RegisterLayout, schedule: Schedule) -> Self {
        Self {
            layout,
            schedule,
            shots: 0,
            seed: 0,
            trace: false,
        }
    }

    /// Layout with `m = n` and the default schedule.
    pub fn with_defaults(n_work: u32) -> Result<Self> {
        let layout = RegisterLayout::new(n_work, n_work)?;
        Ok(Self::exact(layout, default_schedule(n_work, n_work)?))
    }
}

/// Labelled statevector snapshot, recorded when tracing is on.
#[derive(Debug, Clone)]
pub struct TraceFrame {
    pub label: String,
    pub amplitudes: Vec<Complex64>,
}

/// Output of a run: the final state, the exact work distribution, and the
/// (possibly sampled) histogram.
#[derive(Debug, Clone)]
pub struct ApsRun {
    pub state: StateVector,
    pub distribution: Vec<f64>,
    pub histogram: Histogram,
    pub trace: Vec<TraceFrame>,
}

fn record(trace: &mut Vec<TraceFrame>, enabled: bool, label: String, state: &StateVector) {
    if enabled {
        trace.push(TraceFrame {
            label,
            amplitudes: state.amplitudes().to_vec(),
        });
    }
}

/// Runs the full search for one phase table.
///
/// Requires at least two ancillae. Deterministic for a fixed config.
pub fn run_aps(config: &RunConfig, table: &PhaseTable) -> Result<ApsRun> {
    let layout = config.layout;
    if layout.m_ancilla() < 2 {
        return Err(ApsError::AncillaRequired {
            required: 2,
            got: layout.m_ancilla(),
        });
    }
    if table.len() != layout.work_dim() {
        return Err(ApsError::TableLength {
            expected: layout.work_dim(),
            got: table.len(),
        });
    }

    let mut trace = Vec::new();
    let mut state = StateVector::uniform(layout);
    record(&mut trace, config.trace, "init".into(), &state);

    for rep in 0..config.schedule.preprocessing_reps {
        state.apply_controlled_phase_oracle(table)?;
        record(
            &mut trace,
            config.trace,
            format!("pre[{rep}].oracle"),
            &state,
        );
        state.apply_local_diffusion()?;
        record(
            &mut trace,
            config.trace,
            format!("pre[{rep}].local"),
            &state,
        );
    }
    for rep in 0..config.schedule.main_reps {
        state.apply_controlled_phase_oracle(table)?;
        record(
            &mut trace,
            config.trace,
            format!("main[{rep}].oracle"),
            &state,
        );
        state.apply_global_diffusion();
        record(
            &mut trace,
            config.trace,
            format!("main[{rep}].global"),
            &state,
        );
    }

    let distribution = state.marginal_work_distribution();
    let histogram = sample(&distribution, config.shots, config.seed)?;
    Ok(ApsRun {
        state,
        distribution,
        histogram,
        trace,
    })
}

/// Runs only the preprocessing stage and returns the amplitude modulus of
/// `(x*, all-ones ancilla)` for the first table entry with phase pi.
///
/// On the uniform start state this climbs from exactly `2^(-(n+m)/2)`
/// towards `2^(-n/2)` as the reps approach `pi/4 * sqrt(2^m)`.
pub fn preprocessing_amplitude_check(config: &RunConfig, table: &PhaseTable) -> Result<f64> {
    let layout = config.layout;
    if layout.m_ancilla() < 2 {
        return Err(ApsError::AncillaRequired {
            required: 2,
            got: layout.m_ancilla(),
        });
    }
    if table.len() != layout.work_dim() {
        return Err(ApsError::TableLength {
            expected: layout.work_dim(),
            got: table.len(),
        });
    }
    let marked = table.first_pi_entry(1e-9).ok_or(ApsError::NoPiEntry)?;

    let mut state = StateVector::uniform(layout);
    for _ in 0..config.schedule.preprocessing_reps {
        state.apply_controlled_phase_oracle(table)?;
        state.apply_local_diffusion()?;
    }
    Ok(state.amplitude(marked, layout.ancilla_dim() - 1).norm())
}

/// Classic Grover baseline on `n` work qubits with no ancillae: `reps`
/// rounds of binary pi-phase oracle plus global diffusion. Returns the
/// exact work distribution.
pub fn run_grover_baseline(n_work: u32, marked: &[u64], reps: u32) -> Result<Vec<f64>> {
    run_grover_baseline_with_cap(n_work, marked, reps, crate::state::DEFAULT_QUBIT_CAP)
}

/// [`run_grover_baseline`] with an explicit qubit cap.
pub fn run_grover_baseline_with_cap(
    n_work: u32,
    marked: &[u64],
    reps: u32,
    cap: u32,
) -> Result<Vec<f64>> {
    let layout = RegisterLayout::with_cap(n_work, 0, cap)?;
    let marked: BTreeSet<u64> = marked.iter().copied().collect();
    if marked.is_empty() {
        return Err(ApsError::EmptyMarkedSet);
    }
    let dim = layout.work_dim() as u64;
    if let Some(&state) = marked.iter().find(|&&s| s >= dim) {
        return Err(ApsError::MarkedOutOfRange { state, n_work });
    }

    let mut phases = vec![0.0; layout.work_dim()];
    for &m in &marked {
        phases[m as usize] = std::f64::consts::PI;
    }
    let table = PhaseTable::new(phases)?;

    let mut state = StateVector::uniform(layout);
    for _ in 0..reps {
        state.apply_phase_oracle(&table)?;
        state.apply_global_diffusion();
    }
    Ok(state.marginal_work_distribution())
}

/// Closed-form Grover success probability
/// `sin^2((2r+1) * asin(sqrt(k/N)))` for `k` marked states out of `N`.
pub fn grover_success_probability(n_work: u32, marked_count: usize, reps: u32) -> f64 {
    let n = (1u64 << n_work) as f64;
    let theta = (marked_count as f64 / n).sqrt().asin();
    ((2 * reps + 1) as f64 * theta).sin().powi(2)
}
