//! Sweeps the oracle parameter over a grid, running the search once per
//! value, and reads eigenvalues of a diagonal cost operator off the KLD
//! peaks: marking with `pi * cost / lambda` concentrates probability on
//! the eigenstates of eigenvalue `lambda`, so the divergence from uniform
//! peaks exactly when `lambda` hits the spectrum.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::engine::{run_aps, RunConfig};
use crate::error::{ApsError, Result};
use crate::metrics::{format_bitstring, kld_vs_uniform, parse_bitstring};
use crate::oracle::{build_phase_table, DiagonalHamiltonian, PhaseMapKind};

/// How the main-loop repetition count is chosen per grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchedulePolicy {
    /// Use the base config's schedule unchanged.
    Fixed,
    /// Try `round(sqrt(N/k)) - 1 ..= + 1` repetitions, where `k` is the
    /// degeneracy at the current grid value, and keep the best run.
    DegeneracyAdaptive,
}

/// Which state count plays the role of `N` in the adaptive schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchSpaceSize {
    /// `N = 2^n`, counting work states only (the degeneracy counts these).
    Work,
    /// `N = 2^(n+m)`, counting the expanded register.
    Joint,
}

/// Grid and policy for one sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Grid step; must be positive.
    pub step: f64,
    pub schedule_policy: SchedulePolicy,
    pub base: RunConfig,
    /// `None` selects automatically: triangular when the cost spectrum
    /// extends past `lambda_max` (suppressing harmonics of in-range
    /// eigenvalues), linear otherwise.
    pub phase_map: Option<PhaseMapKind>,
    /// Tolerance for counting basis states as degenerate at a grid value.
    pub degeneracy_tol: f64,
    pub search_space: SearchSpaceSize,
}

impl SweepConfig {
    pub fn new(lambda_min: f64, lambda_max: f64, step: f64, base: RunConfig) -> Self {
        Self {
            lambda_min,
            lambda_max,
            step,
            schedule_policy: SchedulePolicy::DegeneracyAdaptive,
            base,
            phase_map: None,
            degeneracy_tol: 1e-9,
            search_space: SearchSpaceSize::Work,
        }
    }

    /// Default grid for a spectrum: `[0.5, max + 0.5]` in steps of `0.1`.
    pub fn default_grid(h: &DiagonalHamiltonian) -> (f64, f64, f64) {
        (0.5, h.max_eigenvalue() + 0.5, 0.1)
    }

    fn grid(&self) -> Result<Vec<f64>> {
        if self.step <= 0.0 || !self.step.is_finite() {
            return Err(ApsError::InvalidSweep(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if self.lambda_max < self.lambda_min {
            return Err(ApsError::InvalidSweep(format!(
                "empty range [{}, {}]",
                self.lambda_min, self.lambda_max
            )));
        }
        let count = ((self.lambda_max - self.lambda_min) / self.step + 1e-9).floor() as usize + 1;
        let grid: Vec<f64> = (0..count)
            .map(|i| self.lambda_min + i as f64 * self.step)
            .collect();
        if grid.iter().any(|&l| l.abs() < 1e-9) {
            return Err(ApsError::InvalidSweep(
                "grid touches lambda = 0, where the oracle is singular".into(),
            ));
        }
        Ok(grid)
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub lambda: f64,
    pub kld: f64,
    pub iterations: u32,
    pub top_state: u64,
    pub top_prob: f64,
}

/// Settings a sweep actually ran with, kept alongside the records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub n_work: u32,
    pub m_ancilla: u32,
    pub schedule_policy: SchedulePolicy,
    pub phase_map: PhaseMapKind,
    pub search_space: SearchSpaceSize,
    pub preprocessing_reps: u32,
    pub shots: u64,
    pub seed: u64,
}

/// Sweep output: one record per grid value, in ascending lambda order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub meta: SweepMetadata,
    pub records: Vec<SweepRecord>,
}

impl SweepResult {
    /// CSV with columns `lambda,kld,iterations,top_state,top_prob`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,kld,iterations,top_state,top_prob\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.lambda,
                r.kld,
                r.iterations,
                format_bitstring(r.top_state, self.meta.n_work),
                r.top_prob
            ));
        }
        out
    }

    /// Parses the records of a sweep CSV; metadata is not stored in CSV,
    /// so the caller supplies it.
    pub fn records_from_csv(text: &str) -> Result<Vec<SweepRecord>> {
        let mut lines = text.lines();
        match lines.next() {
            Some("lambda,kld,iterations,top_state,top_prob") => {}
            other => return Err(ApsError::Parse(format!("bad sweep header: {other:?}"))),
        }
        let mut records = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(ApsError::Parse(format!("bad sweep row: {line:?}")));
            }
            let parse_f64 = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| ApsError::Parse(format!("bad number {s:?}")))
            };
            records.push(SweepRecord {
                lambda: parse_f64(fields[0])?,
                kld: parse_f64(fields[1])?,
                iterations: fields[2]
                    .parse()
                    .map_err(|_| ApsError::Parse(format!("bad count {:?}", fields[2])))?,
                top_state: parse_bitstring(fields[3])?.0,
                top_prob: parse_f64(fields[4])?,
            });
        }
        Ok(records)
    }

    /// JSON document with metadata and records; top states are written as
    /// bitstrings.
    pub fn to_json(&self) -> String {
        let records: Vec<serde_json::Value> = self
            .records
            .iter()
            .map(|r| {
                json!({
                    "lambda": r.lambda,
                    "kld": r.kld,
                    "iterations": r.iterations,
                    "top_state": format_bitstring(r.top_state, self.meta.n_work),
                    "top_prob": r.top_prob,
                })
            })
            .collect();
        let doc = json!({
            "meta": serde_json::to_value(&self.meta).expect("metadata serializes"),
            "records": records,
        });
        serde_json::to_string_pretty(&doc).expect("sweep serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: serde_json::Value =
            serde_json::from_str(text).map_err(|e| ApsError::Parse(e.to_string()))?;
        let meta: SweepMetadata = serde_json::from_value(doc["meta"].clone())
            .map_err(|e| ApsError::Parse(e.to_string()))?;
        let raw = doc["records"]
            .as_array()
            .ok_or_else(|| ApsError::Parse("records is not an array".into()))?;
        let mut records = Vec::with_capacity(raw.len());
        for r in raw {
            let bits = r["top_state"]
                .as_str()
                .ok_or_else(|| ApsError::Parse("top_state is not a string".into()))?;
            records.push(SweepRecord {
                lambda: r["lambda"]
                    .as_f64()
                    .ok_or_else(|| ApsError::Parse("lambda is not a number".into()))?,
                kld: r["kld"]
                    .as_f64()
                    .ok_or_else(|| ApsError::Parse("kld is not a number".into()))?,
                iterations: r["iterations"]
                    .as_u64()
                    .ok_or_else(|| ApsError::Parse("iterations is not a count".into()))?
                    as u32,
                top_state: parse_bitstring(bits)?.0,
                top_prob: r["top_prob"]
                    .as_f64()
                    .ok_or_else(|| ApsError::Parse("top_prob is not a number".into()))?,
            });
        }
        Ok(Self { meta, records })
    }
}

/// Number of basis states whose eigenvalue lies within `tol` of `lambda`.
pub fn degeneracy(h: &DiagonalHamiltonian, lambda: f64, tol: f64) -> usize {
    h.diag()
        .iter()
        .filter(|&&v| (v - lambda).abs() <= tol)
        .count()
}

/// Main-loop repetition counts to try for `k`-fold degenerate targets in a
/// space of `n_states`: `round(sqrt(N/k))` and its two neighbours, clamped
/// at zero.
pub fn iteration_candidates(n_states: usize, degeneracy: usize) -> Result<Vec<u32>> {
    if degeneracy == 0 || degeneracy > n_states {
        return Err(ApsError::InvalidSweep(format!(
            "degeneracy {degeneracy} outside 1..={n_states}"
        )));
    }
    let center = (n_states as f64 / degeneracy as f64).sqrt().round() as i64;
    let mut counts: Vec<u32> = [center - 1, center, center + 1]
        .iter()
        .map(|&c| c.max(0) as u32)
        .collect();
    counts.dedup();
    Ok(counts)
}

/// Runs the search once per grid value and records the divergence from
/// uniform, the repetition count used, and the most probable work state.
pub fn scan_lambda(h: &DiagonalHamiltonian, sweep: &SweepConfig) -> Result<SweepResult> {
    let grid = sweep.grid()?;
    let layout = sweep.base.layout;
    if h.n_qubits() != layout.n_work() {
        return Err(ApsError::InvalidSweep(format!(
            "spectrum over {} qubits, layout has {} work qubits",
            h.n_qubits(),
            layout.n_work()
        )));
    }

    let map_kind = sweep.phase_map.unwrap_or_else(|| {
        if h.max_eigenvalue() > sweep.lambda_max {
            PhaseMapKind::Triangular
        } else {
            PhaseMapKind::Linear
        }
    });
    let n_states = match sweep.search_space {
        SearchSpaceSize::Work => layout.work_dim(),
        SearchSpaceSize::Joint => layout.dim(),
    };

    let mut records = Vec::with_capacity(grid.len());
    for &lambda in &grid {
        let table = build_phase_table(h.diag(), map_kind.with_target(lambda)?)?;
        let candidates = match sweep.schedule_policy {
            SchedulePolicy::Fixed => vec![sweep.base.schedule.main_reps],
            SchedulePolicy::DegeneracyAdaptive => {
                let k = degeneracy(h, lambda, sweep.degeneracy_tol).max(1);
                iteration_candidates(n_states, k)?
            }
        };

        let mut best: Option<SweepRecord> = None;
        for &main_reps in &candidates {
            let mut config = sweep.base;
            config.schedule.main_reps = main_reps;
            config.trace = false;
            let run = run_aps(&config, &table)?;
            let score = kld_vs_uniform(run.histogram.probabilities());
            if best.as_ref().is_none_or(|b| score > b.kld) {
                let (top_state, top_prob) = run.histogram.top_state();
                best = Some(SweepRecord {
                    lambda,
                    kld: score,
                    iterations: main_reps,
                    top_state,
                    top_prob,
                });
            }
        }
        records.push(best.expect("at least one candidate runs"));
    }

    Ok(SweepResult {
        meta: SweepMetadata {
            n_work: layout.n_work(),
            m_ancilla: layout.m_ancilla(),
            schedule_policy: sweep.schedule_policy,
            phase_map: map_kind,
            search_space: sweep.search_space,
            preprocessing_reps: sweep.base.schedule.preprocessing_reps,
            shots: sweep.base.shots,
            seed: sweep.base.seed,
        },
        records,
    })
}

/// Grid values whose KLD exceeds both neighbours by at least
/// `min_prominence`; returned in ascending order.
pub fn find_peaks(result: &SweepResult, min_prominence: f64) -> Result<Vec<f64>> {
    let records = &result.records;
    if records.len() < 3 {
        return Err(ApsError::InvalidSweep(format!(
            "peak detection needs at least 3 records, got {}",
            records.len()
        )));
    }
    let mut peaks = Vec::new();
    for i in 1..records.len() - 1 {
        let (prev, here, next) = (records[i - 1].kld, records[i].kld, records[i + 1].kld);
        if here > prev && here > next && here - prev.max(next) >= min_prominence {
            peaks.push(records[i].lambda);
        }
    }
    Ok(peaks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{default_schedule, RunConfig};
    use crate::oracle::{subset_sum_hamiltonian, SubsetSumInstance};
    use crate::state::RegisterLayout;

    fn ones(n: usize) -> DiagonalHamiltonian {
        subset_sum_hamiltonian(&SubsetSumInstance::new(vec![1.0; n], 1.0).unwrap())
    }

    #[test]
    fn degeneracy_counts_binomial_coefficients() {
        let h = ones(7);
        assert_eq!(degeneracy(&h, 3.0, 1e-9), 35);
        assert_eq!(degeneracy(&h, 0.0, 1e-9), 1);
        assert_eq!(degeneracy(&h, 2.5, 1e-9), 0);
        assert_eq!(degeneracy(&ones(4), 2.0, 1e-9), 6);
    }

    #[test]
    fn degeneracies_partition_the_basis() {
        let h = ones(6);
        let total: usize = (0..=6).map(|j| degeneracy(&h, j as f64, 1e-9)).sum();
        assert_eq!(total, 64);
    }

    #[test]
    fn iteration_candidates_bracket_the_square_root() {
        assert_eq!(iteration_candidates(16, 1).unwrap(), vec![3, 4, 5]);
        assert_eq!(iteration_candidates(128, 35).unwrap(), vec![1, 2, 3]);
        assert_eq!(iteration_candidates(8, 8).unwrap(), vec![0, 1, 2]);
        assert!(iteration_candidates(8, 9).is_err());
        assert!(iteration_candidates(8, 0).is_err());
    }

    fn sweep_over(h: &DiagonalHamiltonian, min: f64, max: f64, step: f64) -> SweepConfig {
        let n = h.n_qubits();
        let layout = RegisterLayout::new(n, n).unwrap();
        let base = RunConfig::exact(layout, default_schedule(n, n).unwrap());
        SweepConfig::new(min, max, step, base)
    }

    #[test]
    fn zero_spectrum_scans_flat() {
        let h = DiagonalHamiltonian::new(vec![0.0; 8]).unwrap();
        let sweep = sweep_over(&h, 0.5, 2.5, 0.5);
        let result = scan_lambda(&h, &sweep).unwrap();
        assert_eq!(result.records.len(), 5);
        for r in &result.records {
            assert!(r.kld.abs() < 1e-12, "lambda={}", r.lambda);
        }
    }

    #[test]
    fn grid_touching_zero_is_rejected() {
        let h = ones(2);
        let sweep = sweep_over(&h, -0.5, 1.0, 0.5);
        assert!(matches!(
            scan_lambda(&h, &sweep),
            Err(ApsError::InvalidSweep(_))
        ));
    }

    #[test]
    fn four_ones_peaks_at_integer_eigenvalues() {
        let h = ones(4);
        let sweep = sweep_over(&h, 0.5, 3.5, 0.5);
        let result = scan_lambda(&h, &sweep).unwrap();
        // records at 0.5, 1.0, ..., 3.5
        let at = |lambda: f64| {
            result
                .records
                .iter()
                .find(|r| (r.lambda - lambda).abs() < 1e-9)
                .unwrap()
        };
        for j in [1.0, 2.0, 3.0] {
            assert!(at(j).kld > at(j - 0.5).kld, "lambda={j} vs {}", j - 0.5);
            assert!(at(j).kld > at(j + 0.5).kld, "lambda={j} vs {}", j + 0.5);
            let cost = at(j).top_state.count_ones() as f64;
            assert_eq!(cost, j, "top state at lambda={j}");
        }
    }

    #[test]
    fn scans_are_deterministic() {
        let h = ones(3);
        let sweep = sweep_over(&h, 0.5, 2.5, 0.5);
        let a = scan_lambda(&h, &sweep).unwrap();
        let b = scan_lambda(&h, &sweep).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fixed_policy_uses_the_base_schedule() {
        let h = ones(3);
        let mut sweep = sweep_over(&h, 0.5, 1.5, 0.5);
        sweep.schedule_policy = SchedulePolicy::Fixed;
        let result = scan_lambda(&h, &sweep).unwrap();
        for r in &result.records {
            assert_eq!(r.iterations, sweep.base.schedule.main_reps);
        }
    }

    #[test]
    fn auto_map_selection_depends_on_spectrum_reach() {
        let h = ones(3);
        let result = scan_lambda(&h, &sweep_over(&h, 0.5, 2.5, 0.5)).unwrap();
        assert_eq!(result.meta.phase_map, PhaseMapKind::Triangular);
        let result = scan_lambda(&h, &sweep_over(&h, 0.5, 3.5, 0.5)).unwrap();
        assert_eq!(result.meta.phase_map, PhaseMapKind::Linear);
    }

    #[test]
    fn find_peaks_on_monotone_sequence_is_empty() {
        let h = ones(3);
        let mut result = scan_lambda(&h, &sweep_over(&h, 0.5, 2.5, 0.5)).unwrap();
        for (i, r) in result.records.iter_mut().enumerate() {
            r.kld = i as f64;
        }
        assert!(find_peaks(&result, 0.0).unwrap().is_empty());
    }

    #[test]
    fn find_peaks_matches_direct_definition() {
        let h = ones(3);
        let mut result = scan_lambda(&h, &sweep_over(&h, 0.5, 2.5, 0.5)).unwrap();
        let shape = [0.0, 1.0, 0.0, 2.0, 0.0];
        for (r, &v) in result.records.iter_mut().zip(&shape) {
            r.kld = v;
        }
        let peaks = find_peaks(&result, 0.5).unwrap();
        assert_eq!(peaks.len(), 2);
        assert!((peaks[0] - 1.0).abs() < 1e-12);
        assert!((peaks[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn find_peaks_needs_three_records() {
        let h = ones(3);
        let mut result = scan_lambda(&h, &sweep_over(&h, 0.5, 2.5, 0.5)).unwrap();
        result.records.truncate(2);
        assert!(find_peaks(&result, 0.0).is_err());
    }

    #[test]
    fn peak_states_have_cost_near_the_peak() {
        let h = ones(4);
        let sweep = sweep_over(&h, 0.5, 3.5, 0.1);
        let result = scan_lambda(&h, &sweep).unwrap();
        for lambda in find_peaks(&result, 0.05).unwrap() {
            let record = result
                .records
                .iter()
                .find(|r| (r.lambda - lambda).abs() < 1e-9)
                .unwrap();
            let cost = h.eigenvalue(record.top_state as usize);
            assert!(
                (cost - lambda).abs() <= sweep.step + sweep.degeneracy_tol,
                "peak at {lambda} but top state costs {cost}"
            );
        }
    }

    #[test]
    fn sweep_csv_round_trips() {
        let h = ones(3);
        let result = scan_lambda(&h, &sweep_over(&h, 0.5, 2.5, 0.5)).unwrap();
        let csv = result.to_csv();
        let records = SweepResult::records_from_csv(&csv).unwrap();
        assert_eq!(records, result.records);
    }

    #[test]
    fn sweep_json_round_trips() {
        let h = ones(3);
        let result = scan_lambda(&h, &sweep_over(&h, 0.5, 2.5, 0.5)).unwrap();
        let back = SweepResult::from_json(&result.to_json()).unwrap();
        assert_eq!(back, result);
    }
}
