//! Dense statevector over a work+ancilla register and the unitary
//! primitives the search engine is built from: diagonal phase oracles
//! (uncontrolled and ancilla-controlled), local and global diffusion,
//! and marginal measurement of the work register.
//!
//! Index convention: the joint basis index of work value `x` and ancilla
//! value `a` is `i = x * 2^m + a`, i.e. work bits are the more significant
//! bits. This makes every work block a contiguous slice of length `2^m`.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::error::{ApsError, Result};
use crate::metrics::Histogram;

/// Default upper bound on total qubits; 2^26 complex doubles is ~1 GiB.
pub const DEFAULT_QUBIT_CAP: u32 = 26;

/// Split of the register into `n` work qubits and `m` ancilla qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterLayout {
    n_work: u32,
    m_ancilla: u32,
}

impl RegisterLayout {
    /// Layout with the default qubit cap.
    pub fn new(n_work: u32, m_ancilla: u32) -> Result<Self> {
        Self::with_cap(n_work, m_ancilla, DEFAULT_QUBIT_CAP)
    }

    /// Layout with an explicit cap on total qubits.
    pub fn with_cap(n_work: u32, m_ancilla: u32, cap: u32) -> Result<Self> {
        if n_work == 0 {
            return Err(ApsError::NoWorkQubits);
        }
        let total = n_work + m_ancilla;
        if total > cap || total >= usize::BITS {
            return Err(ApsError::DimensionCap {
                requested: total,
                cap: cap.min(usize::BITS - 1),
            });
        }
        Ok(Self { n_work, m_ancilla })
    }

    pub fn n_work(&self) -> u32 {
        self.n_work
    }

    pub fn m_ancilla(&self) -> u32 {
        self.m_ancilla
    }

    pub fn total_qubits(&self) -> u32 {
        self.n_work + self.m_ancilla
    }

    /// Joint dimension `2^(n+m)`.
    pub fn dim(&self) -> usize {
        1 << self.total_qubits()
    }

    /// Work-register dimension `2^n`.
    pub fn work_dim(&self) -> usize {
        1 << self.n_work
    }

    /// Ancilla-register dimension `2^m`.
    pub fn ancilla_dim(&self) -> usize {
        1 << self.m_ancilla
    }

    /// Joint index of work value `x` and ancilla value `a`.
    pub fn joint_index(&self, x: usize, a: usize) -> usize {
        debug_assert!(x < self.work_dim() && a < self.ancilla_dim());
        (x << self.m_ancilla) | a
    }
}

/// Reduce a phase into `[0, 2pi)`.
fn reduce_phase(phi: f64) -> f64 {
    let p = phi.rem_euclid(TAU);
    // rem_euclid can round a tiny negative input up to exactly TAU
    if p >= TAU {
        0.0
    } else {
        p
    }
}

/// Per-work-basis-state phases in radians, stored reduced into `[0, 2pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTable {
    phases: Vec<f64>,
}

impl PhaseTable {
    /// Builds a table from raw phases, reducing each mod 2pi.
    ///
    /// The length must be a power of two (one entry per work basis state).
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() || !phases.len().is_power_of_two() {
            return Err(ApsError::TableLength {
                expected: phases.len().next_power_of_two().max(2),
                got: phases.len(),
            });
        }
        for (index, p) in phases.iter().enumerate() {
            if !p.is_finite() {
                return Err(ApsError::NonFinitePhase { index });
            }
        }
        Ok(Self {
            phases: phases.into_iter().map(reduce_phase).collect(),
        })
    }

    /// All-zero table over `2^n_work` states.
    pub fn zero(n_work: u32) -> Self {
        Self {
            phases: vec![0.0; 1 << n_work],
        }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn phase(&self, x: usize) -> f64 {
        self.phases[x]
    }

    /// Index of the first entry equal to pi (within `tol`), if any.
    pub fn first_pi_entry(&self, tol: f64) -> Option<usize> {
        self.phases
            .iter()
            .position(|&p| (p - std::f64::consts::PI).abs() <= tol)
    }
}

/// Dense complex amplitude vector over the joint work+ancilla register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Equal superposition over the whole register: every amplitude
    /// `2^(-(n+m)/2)`.
    pub fn uniform(layout: RegisterLayout) -> Self {
        let dim = layout.dim();
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self {
            layout,
            amps: vec![amp; dim],
        }
    }

    /// Basis state `|x>|a>`.
    pub fn basis_state(layout: RegisterLayout, x: usize, a: usize) -> Result<Self> {
        if x >= layout.work_dim() || a >= layout.ancilla_dim() {
            return Err(ApsError::MarkedOutOfRange {
                state: x as u64,
                n_work: layout.n_work(),
            });
        }
        let mut amps = vec![Complex64::ZERO; layout.dim()];
        amps[layout.joint_index(x, a)] = Complex64::ONE;
        Ok(Self { layout, amps })
    }

    /// Wraps raw amplitudes; must match the layout dimension and be
    /// normalized within 1e-6.
    pub fn from_amplitudes(layout: RegisterLayout, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(ApsError::InvalidDistribution(format!(
                "amplitude vector has length {}, layout dimension is {}",
                amps.len(),
                layout.dim()
            )));
        }
        let state = Self { layout, amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(ApsError::InvalidDistribution(format!(
                "amplitude vector has norm {norm}, expected 1"
            )));
        }
        Ok(state)
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude of `|x>|a>`.
    pub fn amplitude(&self, x: usize, a: usize) -> Complex64 {
        self.amps[self.layout.joint_index(x, a)]
    }

    /// L2 norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_table(&self, table: &PhaseTable) -> Result<()> {
        if table.len() != self.layout.work_dim() {
            return Err(ApsError::TableLength {
                expected: self.layout.work_dim(),
                got: table.len(),
            });
        }
        Ok(())
    }

    /// Diagonal phase oracle: multiplies every amplitude of work value `x`
    /// by `e^{i phi(x)}`, for all ancilla values.
    pub fn apply_phase_oracle(&mut self, table: &PhaseTable) -> Result<()> {
        self.check_table(table)?;
        let block = self.layout.ancilla_dim();
        for (x, chunk) in self.amps.chunks_exact_mut(block).enumerate() {
            let phi = table.phase(x);
            if phi == 0.0 {
                continue;
            }
            let factor = Complex64::from_polar(1.0, phi);
            for amp in chunk {
                *amp *= factor;
            }
        }
        Ok(())
    }

    /// Controlled phase oracle: multiplies the amplitude of `(x, a)` by
    /// `e^{i phi(x)}` only on the all-ones ancilla slice `a = 2^m - 1`;
    /// every other amplitude is untouched.
    pub fn apply_controlled_phase_oracle(&mut self, table: &PhaseTable) -> Result<()> {
        let m = self.layout.m_ancilla();
        if m < 1 {
            return Err(ApsError::AncillaRequired {
                required: 1,
                got: m,
            });
        }
        self.check_table(table)?;
        let block = self.layout.ancilla_dim();
        let all_ones = block - 1;
        for (x, chunk) in self.amps.chunks_exact_mut(block).enumerate() {
            let phi = table.phase(x);
            if phi == 0.0 {
                continue;
            }
            chunk[all_ones] *= Complex64::from_polar(1.0, phi);
        }
        Ok(())
    }

    /// Local diffusion: within each work block, reflects the `2^m` ancilla
    /// amplitudes about their mean (`a <- 2*mu_x - a`). Never mixes
    /// amplitudes across distinct work values.
    pub fn apply_local_diffusion(&mut self) -> Result<()> {
        let m = self.layout.m_ancilla();
        if m < 2 {
            return Err(ApsError::AncillaRequired {
                required: 2,
                got: m,
            });
        }
        let block = self.layout.ancilla_dim();
        let inv = 1.0 / block as f64;
        for chunk in self.amps.chunks_exact_mut(block) {
            let mean = chunk.iter().sum::<Complex64>() * inv;
            let twice = mean + mean;
            for amp in chunk {
                *amp = twice - *amp;
            }
        }
        Ok(())
    }

    /// Global diffusion: reflects all `2^(n+m)` amplitudes about their mean.
    pub fn apply_global_diffusion(&mut self) {
        let inv = 1.0 / self.amps.len() as f64;
        let mean = self.amps.iter().sum::<Complex64>() * inv;
        let twice = mean + mean;
        for amp in &mut self.amps {
            *amp = twice - *amp;
        }
    }

    /// Work-register distribution `P(x) = sum_a |amp(x, a)|^2`, the result
    /// of measuring the work qubits and ignoring the ancillae.
    pub fn marginal_work_distribution(&self) -> Vec<f64> {
        let block = self.layout.ancilla_dim();
        self.amps
            .chunks_exact(block)
            .map(|chunk| chunk.iter().map(|a| a.norm_sqr()).sum())
            .collect()
    }
}

/// Draws `shots` multinomial samples from `dist` with a seeded generator.
///
/// `shots = 0` is exact mode: the distribution itself is returned as the
/// histogram frequencies. The same seed always yields the same histogram.
pub fn sample(dist: &[f64], shots: u64, seed: u64) -> Result<Histogram> {
    if dist.is_empty() || !dist.len().is_power_of_two() {
        return Err(ApsError::InvalidDistribution(format!(
            "distribution length {} is not a power of two",
            dist.len()
        )));
    }
    let mut total = 0.0;
    for (i, &p) in dist.iter().enumerate() {
        if p < -1e-12 || !p.is_finite() {
            return Err(ApsError::InvalidDistribution(format!("entry {i} is {p}")));
        }
        total += p.max(0.0);
    }
    if (total - 1.0).abs() > 1e-6 {
        return Err(ApsError::InvalidDistribution(format!(
            "probabilities sum to {total}"
        )));
    }

    let n_bits = dist.len().trailing_zeros();
    if shots == 0 {
        let probs = dist.iter().map(|&p| p.max(0.0) / total).collect();
        return Histogram::exact(n_bits, probs);
    }

    // cumulative table + binary search per shot
    let mut cdf = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for &p in dist {
        acc += p.max(0.0) / total;
        cdf.push(acc);
    }
    let last = cdf.len() - 1;
    cdf[last] = 1.0;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; dist.len()];
    for _ in 0..shots {
        let u: f64 = rng.random();
        let idx = cdf.partition_point(|&c| c <= u).min(last);
        counts[idx] += 1;
    }
    Ok(Histogram::from_counts(n_bits, &counts))
}
