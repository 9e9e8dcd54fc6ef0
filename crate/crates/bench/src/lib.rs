//! Shared fixtures for the benchmark targets.

use aps_core::engine::{default_schedule, RunConfig};
use aps_core::oracle::{build_phase_table, subset_sum_hamiltonian, PhaseMap, SubsetSumInstance};
use aps_core::state::{PhaseTable, RegisterLayout};
use aps_core::DiagonalHamiltonian;

/// The 4-element demo instance with a unique exact solution.
pub fn demo_instance() -> SubsetSumInstance {
    SubsetSumInstance::new(vec![2.0, 3.0, 4.0, 8.0], 9.0).unwrap()
}

pub fn demo_table() -> PhaseTable {
    let inst = demo_instance();
    let h = subset_sum_hamiltonian(&inst);
    build_phase_table(h.diag(), PhaseMap::linear(inst.target()).unwrap()).unwrap()
}

pub fn demo_config() -> RunConfig {
    RunConfig::with_defaults(4).unwrap()
}

/// Uniform-spectrum operator over `n` qubits for scan benchmarks.
pub fn unit_spectrum(n: usize) -> DiagonalHamiltonian {
    subset_sum_hamiltonian(&SubsetSumInstance::new(vec![1.0; n], 1.0).unwrap())
}

/// Exact-mode config for an `n + n` register.
pub fn square_config(n: u32) -> RunConfig {
    let layout = RegisterLayout::new(n, n).unwrap();
    RunConfig::exact(layout, default_schedule(n, n).unwrap())
}
