//! Statevector simulation of Grover-style amplitude amplification with
//! non-binary phase oracles.
//!
//! Instead of the classic binary marking, the oracle here appends a phase
//! proportional to each bitstring's cost, so states approximating a target
//! cost are amplified in proportion to how close they get. Two additions
//! make that work: the search space is expanded with ancilla qubits that
//! are ignored at measurement, and a *local* diffusion operator reflects
//! each work block about its ancilla mean as a preprocessing stage before
//! the usual global diffusion rounds.
//!
//! On top of the engine sit cost models (subset sum, max-cut, arbitrary
//! diagonal spectra), Kullback-Leibler scoring against the uniform
//! distribution, and a parameter sweep that locates the eigenvalues of a
//! diagonal cost operator as KLD peaks.
//!
//! # Example
//!
//! ```
//! use aps_core::engine::{run_aps, RunConfig};
//! use aps_core::oracle::{build_phase_table, subset_sum_cost, PhaseMap, SubsetSumInstance};
//!
//! let inst = SubsetSumInstance::new(vec![2.0, 3.0, 4.0, 8.0], 9.0)?;
//! let costs: Vec<f64> = (0..16).map(|x| subset_sum_cost(&inst, x)).collect();
//! let table = build_phase_table(&costs, PhaseMap::linear(9.0)?)?;
//!
//! let run = run_aps(&RunConfig::with_defaults(4)?, &table)?;
//! let (top, _prob) = run.histogram.top_state();
//! assert_eq!(top, 0b1110); // subset {2, 3, 4} sums to exactly 9
//! # Ok::<(), aps_core::ApsError>(())
//! ```

pub mod engine;
pub mod error;
pub mod metrics;
pub mod oracle;
pub mod scan;
pub mod state;

pub use engine::{
    default_schedule, grover_success_probability, preprocessing_amplitude_check, run_aps,
    run_grover_baseline, run_grover_baseline_with_cap, ApsRun, RunConfig, Schedule, TraceFrame,
};
pub use error::{ApsError, Result};
pub use metrics::{format_bitstring, kld, kld_vs_uniform, parse_bitstring, Histogram};
pub use oracle::{
    build_phase_table, hamiltonian_phase_map, linear_phase_map, maxcut_cost, maxcut_hamiltonian,
    subset_sum_cost, subset_sum_hamiltonian, triangular_phase_map, DiagonalHamiltonian, Graph,
    PhaseMap, PhaseMapKind, ProblemInstance, SubsetSumInstance,
};
pub use scan::{
    degeneracy, find_peaks, iteration_candidates, scan_lambda, SchedulePolicy, SearchSpaceSize,
    SweepConfig, SweepMetadata, SweepRecord, SweepResult,
};
pub use state::{sample, PhaseTable, RegisterLayout, StateVector, DEFAULT_QUBIT_CAP};
