//! Cost models for the supported problems and the cost-to-phase maps that
//! turn them into phase tables.
//!
//! Bit convention: the work bitstring is written `y_0 y_1 ... y_{n-1}` with
//! `y_0` the most significant bit, and `y_l` selects element `l` (subset
//! sum) or labels vertex `l` (max-cut).

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{ApsError, Result};
use crate::state::PhaseTable;

/// A set of reals and a target sum: find the subset whose sum is closest
/// to the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetSumInstance {
    elements: Vec<f64>,
    target: f64,
}

impl SubsetSumInstance {
    pub fn new(elements: Vec<f64>, target: f64) -> Result<Self> {
        if elements.is_empty() {
            return Err(ApsError::InvalidInstance(
                "subset-sum needs at least one element".into(),
            ));
        }
        if elements.iter().any(|e| !e.is_finite()) || !target.is_finite() {
            return Err(ApsError::InvalidInstance(
                "subset-sum values must be finite".into(),
            ));
        }
        Ok(Self { elements, target })
    }

    pub fn elements(&self) -> &[f64] {
        &self.elements
    }

    pub fn target(&self) -> f64 {
        self.target
    }

    /// One work qubit per element.
    pub fn n_qubits(&self) -> u32 {
        self.elements.len() as u32
    }
}

/// Sum of the elements selected by `x`; bit `y_0` (most significant)
/// selects element 0.
pub fn subset_sum_cost(inst: &SubsetSumInstance, x: u64) -> f64 {
    let n = inst.elements.len();
    debug_assert!(x < 1 << n);
    let total: f64 = inst
        .elements
        .iter()
        .enumerate()
        .filter(|(l, _)| (x >> (n - 1 - l)) & 1 == 1)
        .map(|(_, s)| s)
        .sum();
    // an empty f64 sum is -0.0, which would print as "-0"
    total + 0.0
}

/// Undirected weighted graph with no self-loops or duplicate edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    /// Edges are unordered pairs `(j, l, w)` with positive weight; they are
    /// stored with `j < l`.
    pub fn new(vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if vertices == 0 {
            return Err(ApsError::InvalidGraph("graph has no vertices".into()));
        }
        let mut normalized = Vec::with_capacity(edges.len());
        let mut seen = std::collections::HashSet::new();
        for (j, l, w) in edges {
            if j == l {
                return Err(ApsError::InvalidGraph(format!("self-loop at vertex {j}")));
            }
            if j >= vertices || l >= vertices {
                return Err(ApsError::InvalidGraph(format!(
                    "edge ({j},{l}) out of range for {vertices} vertices"
                )));
            }
            if w <= 0.0 || !w.is_finite() {
                return Err(ApsError::InvalidGraph(format!(
                    "edge ({j},{l}) has non-positive weight {w}"
                )));
            }
            let pair = (j.min(l), j.max(l));
            if !seen.insert(pair) {
                return Err(ApsError::InvalidGraph(format!(
                    "duplicate edge ({},{})",
                    pair.0, pair.1
                )));
            }
            normalized.push((pair.0, pair.1, w));
        }
        Ok(Self {
            vertices,
            edges: normalized,
        })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Sum of all edge weights: the max-cut cost of any bipartite graph,
    /// and the usual stand-in for the unknown best cut.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|&(_, _, w)| w).sum::<f64>() + 0.0
    }

    /// One work qubit per vertex.
    pub fn n_qubits(&self) -> u32 {
        self.vertices as u32
    }
}

/// Cut value of the bipartition labeled by `x`: the summed weight of edges
/// whose endpoints carry different labels, each edge counted once.
pub fn maxcut_cost(g: &Graph, x: u64) -> f64 {
    let n = g.vertices;
    debug_assert!(x < 1 << n);
    let side = |v: usize| (x >> (n - 1 - v)) & 1;
    let total: f64 = g
        .edges
        .iter()
        .filter(|&&(j, l, _)| side(j) != side(l))
        .map(|&(_, _, w)| w)
        .sum();
    total + 0.0
}

/// Diagonal cost operator: one real eigenvalue per computational basis
/// state, so the eigenvectors are the basis states themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalHamiltonian {
    diag: Vec<f64>,
}

impl DiagonalHamiltonian {
    pub fn new(diag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || !diag.len().is_power_of_two() {
            return Err(ApsError::InvalidInstance(format!(
                "diagonal length {} is not a power of two",
                diag.len()
            )));
        }
        if diag.iter().any(|v| !v.is_finite()) {
            return Err(ApsError::InvalidInstance(
                "diagonal entries must be finite".into(),
            ));
        }
        Ok(Self { diag })
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn eigenvalue(&self, x: usize) -> f64 {
        self.diag[x]
    }

    pub fn n_qubits(&self) -> u32 {
        self.diag.len().trailing_zeros()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.diag.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Diagonal of `sum_j s_j Z_j` with `Z = (I - sigma_z)/2`: entry `x` is the
/// subset sum selected by `x`.
pub fn subset_sum_hamiltonian(inst: &SubsetSumInstance) -> DiagonalHamiltonian {
    let diag = (0..1u64 << inst.n_qubits())
        .map(|x| subset_sum_cost(inst, x))
        .collect();
    DiagonalHamiltonian { diag }
}

/// Diagonal of the max-cut cost operator: entry `x` is the cut value of `x`.
pub fn maxcut_hamiltonian(g: &Graph) -> DiagonalHamiltonian {
    let diag = (0..1u64 << g.n_qubits())
        .map(|x| maxcut_cost(g, x))
        .collect();
    DiagonalHamiltonian { diag }
}

/// Linear cost-to-phase map `(pi * cost / target) mod 2pi`.
///
/// Maps `cost = target` to pi, but also marks every odd multiple of the
/// target with pi (the harmonic defect).
pub fn linear_phase_map(cost: f64, target: f64) -> Result<f64> {
    if target == 0.0 {
        return Err(ApsError::ZeroPhaseParam);
    }
    Ok((PI * cost / target).rem_euclid(2.0 * PI))
}

/// Triangular map `pi * max(0, 1 - |cost - target| / |target|)`.
///
/// Peaks at pi exactly at `cost = target`, decreases with the deviation and
/// is zero from `|cost - target| >= |target|` on, so odd multiples of the
/// target are not marked.
pub fn triangular_phase_map(cost: f64, target: f64) -> Result<f64> {
    if target == 0.0 {
        return Err(ApsError::ZeroPhaseParam);
    }
    Ok(PI * (1.0 - (cost - target).abs() / target.abs()).max(0.0))
}

/// Parameterized oracle phase `(pi * cost / lambda) mod 2pi`: eigenstates
/// with eigenvalue `lambda` receive exactly pi.
pub fn hamiltonian_phase_map(cost: f64, lambda: f64) -> Result<f64> {
    linear_phase_map(cost, lambda)
}

/// Selectable cost-to-phase map family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseMapKind {
    Linear,
    Triangular,
}

impl PhaseMapKind {
    pub fn with_target(self, target: f64) -> Result<PhaseMap> {
        match self {
            PhaseMapKind::Linear => PhaseMap::linear(target),
            PhaseMapKind::Triangular => PhaseMap::triangular(target),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PhaseMapKind::Linear => "linear",
            PhaseMapKind::Triangular => "triangular",
        }
    }
}

impl std::str::FromStr for PhaseMapKind {
    type Err = ApsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(PhaseMapKind::Linear),
            "triangular" => Ok(PhaseMapKind::Triangular),
            other => Err(ApsError::Parse(format!("unknown phase map {other:?}"))),
        }
    }
}

/// A phase map bound to its (nonzero) target parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMap {
    kind: PhaseMapKind,
    target: f64,
}

impl PhaseMap {
    pub fn linear(target: f64) -> Result<Self> {
        if target == 0.0 || !target.is_finite() {
            return Err(ApsError::ZeroPhaseParam);
        }
        Ok(Self {
            kind: PhaseMapKind::Linear,
            target,
        })
    }

    pub fn triangular(target: f64) -> Result<Self> {
        if target == 0.0 || !target.is_finite() {
            return Err(ApsError::ZeroPhaseParam);
        }
        Ok(Self {
            kind: PhaseMapKind::Triangular,
            target,
        })
    }

    pub fn kind(&self) -> PhaseMapKind {
        self.kind
    }

    pub fn target(&self) -> f64 {
        self.target
    }

    pub fn eval(&self, cost: f64) -> f64 {
        match self.kind {
            PhaseMapKind::Linear => (PI * cost / self.target).rem_euclid(2.0 * PI),
            PhaseMapKind::Triangular => {
                PI * (1.0 - (cost - self.target).abs() / self.target.abs()).max(0.0)
            }
        }
    }
}

/// Applies a phase map to per-state costs, yielding the oracle's table.
pub fn build_phase_table(costs: &[f64], map: PhaseMap) -> Result<PhaseTable> {
    PhaseTable::new(costs.iter().map(|&c| map.eval(c)).collect())
}

/// Problem instance as read from a JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ProblemInstance {
    SubsetSum {
        elements: Vec<f64>,
        target: f64,
    },
    Maxcut {
        vertices: usize,
        edges: Vec<(usize, usize, f64)>,
    },
    Diagonal {
        diag: Vec<f64>,
    },
}

impl ProblemInstance {
    /// Parses and validates an instance document.
    pub fn from_json(text: &str) -> Result<Self> {
        let inst: ProblemInstance =
            serde_json::from_str(text).map_err(|e| ApsError::Parse(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    fn validate(&self) -> Result<()> {
        match self {
            ProblemInstance::SubsetSum { elements, target } => {
                let inst = SubsetSumInstance::new(elements.clone(), *target)?;
                if inst.target() == 0.0 {
                    return Err(ApsError::InvalidInstance(
                        "subset-sum target must be nonzero".into(),
                    ));
                }
            }
            ProblemInstance::Maxcut { vertices, edges } => {
                Graph::new(*vertices, edges.clone())?;
            }
            ProblemInstance::Diagonal { diag } => {
                DiagonalHamiltonian::new(diag.clone())?;
            }
        }
        Ok(())
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ProblemInstance::SubsetSum { .. } => "subset-sum",
            ProblemInstance::Maxcut { .. } => "maxcut",
            ProblemInstance::Diagonal { .. } => "diagonal",
        }
    }

    /// Work qubits the instance needs.
    pub fn n_qubits(&self) -> u32 {
        match self {
            ProblemInstance::SubsetSum { elements, .. } => elements.len() as u32,
            ProblemInstance::Maxcut { vertices, .. } => *vertices as u32,
            ProblemInstance::Diagonal { diag } => diag.len().trailing_zeros(),
        }
    }

    /// The instance's cost spectrum as a diagonal operator.
    pub fn hamiltonian(&self) -> Result<DiagonalHamiltonian> {
        match self {
            ProblemInstance::SubsetSum { elements, target } => Ok(subset_sum_hamiltonian(
                &SubsetSumInstance::new(elements.clone(), *target)?,
            )),
            ProblemInstance::Maxcut { vertices, edges } => {
                Ok(maxcut_hamiltonian(&Graph::new(*vertices, edges.clone())?))
            }
            ProblemInstance::Diagonal { diag } => DiagonalHamiltonian::new(diag.clone()),
        }
    }

    /// Target cost implied by the instance: the subset-sum target, or the
    /// total edge weight for max-cut (the bipartite upper bound). Diagonal
    /// instances carry none.
    pub fn default_target(&self) -> Option<f64> {
        match self {
            ProblemInstance::SubsetSum { target, .. } => Some(*target),
            ProblemInstance::Maxcut { edges, .. } => {
                Some(edges.iter().map(|&(_, _, w)| w).sum::<f64>() + 0.0)
            }
            ProblemInstance::Diagonal { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn golden_subset_sum() -> SubsetSumInstance {
        SubsetSumInstance::new(vec![2.0, 3.0, 4.0, 8.0], 9.0).unwrap()
    }

    #[test]
    fn subset_sum_cost_uses_msb_first_bits() {
        let inst = golden_subset_sum();
        assert_eq!(subset_sum_cost(&inst, 0b1110), 9.0);
        assert_eq!(subset_sum_cost(&inst, 0b0000), 0.0);
        assert_eq!(subset_sum_cost(&inst, 0b1111), 17.0);
        assert_eq!(subset_sum_cost(&inst, 0b0001), 8.0);
    }

    #[test]
    fn subset_sum_cost_is_additive_over_disjoint_masks() {
        let inst = golden_subset_sum();
        for x in 0u64..16 {
            for y in 0u64..16 {
                if x & y == 0 {
                    let lhs = subset_sum_cost(&inst, x | y);
                    let rhs = subset_sum_cost(&inst, x) + subset_sum_cost(&inst, y);
                    assert!((lhs - rhs).abs() < 1e-12);
                }
            }
        }
    }

    fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn maxcut_cost_of_trivial_cut_is_zero() {
        assert_eq!(maxcut_cost(&triangle(), 0b000), 0.0);
        assert_eq!(maxcut_cost(&triangle(), 0b111), 0.0);
    }

    #[test]
    fn maxcut_cost_of_triangle_matches_brute_force() {
        // brute force: for each edge check the labels bit by bit
        let g = triangle();
        for x in 0u64..8 {
            let mut expect = 0.0;
            for &(j, l, w) in g.edges() {
                let bj = (x >> (2 - j)) & 1;
                let bl = (x >> (2 - l)) & 1;
                if bj != bl {
                    expect += w;
                }
            }
            assert_eq!(maxcut_cost(&g, x), expect, "x={x:03b}");
        }
        assert_eq!(maxcut_cost(&g, 0b001), 2.0);
    }

    #[test]
    fn maxcut_bipartition_of_complete_bipartite_graph_is_total_weight() {
        // K_{2,3} with parts {0,1} and {2,3,4}
        let edges: Vec<(usize, usize, f64)> = [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| (a, b, 1.0 + i as f64))
            .collect();
        let g = Graph::new(5, edges).unwrap();
        let labeling = 0b11000;
        assert_eq!(maxcut_cost(&g, labeling), g.total_weight());
    }

    #[test]
    fn maxcut_cost_is_complement_symmetric() {
        let g = Graph::new(4, vec![(0, 1, 0.5), (1, 2, 1.5), (2, 3, 2.5), (0, 3, 3.5)]).unwrap();
        for x in 0u64..16 {
            assert_eq!(maxcut_cost(&g, x), maxcut_cost(&g, !x & 0xF));
        }
    }

    #[test]
    fn graph_validation_rejects_bad_edges() {
        assert!(Graph::new(3, vec![(0, 0, 1.0)]).is_err());
        assert!(Graph::new(3, vec![(0, 3, 1.0)]).is_err());
        assert!(Graph::new(3, vec![(0, 1, 0.0)]).is_err());
        assert!(Graph::new(3, vec![(0, 1, -1.0)]).is_err());
        assert!(Graph::new(3, vec![(0, 1, 1.0), (1, 0, 2.0)]).is_err());
    }

    #[test]
    fn subset_sum_hamiltonian_of_seven_ones_has_binomial_degeneracies() {
        let inst = SubsetSumInstance::new(vec![1.0; 7], 3.0).unwrap();
        let h = subset_sum_hamiltonian(&inst);
        let binomial = [1, 7, 21, 35, 35, 21, 7, 1];
        for (value, expect) in binomial.iter().enumerate() {
            let count = h
                .diag()
                .iter()
                .filter(|&&v| (v - value as f64).abs() < 1e-9)
                .count();
            assert_eq!(count, *expect, "eigenvalue {value}");
        }
    }

    #[test]
    fn subset_sum_hamiltonian_small_cases() {
        let h = subset_sum_hamiltonian(&SubsetSumInstance::new(vec![5.0], 5.0).unwrap());
        assert_eq!(h.diag(), &[0.0, 5.0]);

        let h = subset_sum_hamiltonian(&SubsetSumInstance::new(vec![2.0, 3.0], 5.0).unwrap());
        let mut sorted = h.diag().to_vec();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(sorted, vec![0.0, 2.0, 3.0, 5.0]);
    }

    #[test]
    fn linear_map_targets_pi() {
        assert_eq!(linear_phase_map(9.0, 9.0).unwrap(), PI);
        assert_eq!(linear_phase_map(0.0, 9.0).unwrap(), 0.0);
        // the harmonic defect: odd multiples of the target also reach pi
        assert!((linear_phase_map(27.0, 9.0).unwrap() - PI).abs() < 1e-12);
        assert!(linear_phase_map(1.0, 0.0).is_err());
    }

    #[test]
    fn linear_map_marks_all_odd_multiples() {
        for t in 0..10 {
            let cost = 9.0 * (2 * t + 1) as f64;
            let phase = linear_phase_map(cost, 9.0).unwrap();
            assert!((phase - PI).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn triangular_map_suppresses_harmonics() {
        assert_eq!(triangular_phase_map(9.0, 9.0).unwrap(), PI);
        assert_eq!(triangular_phase_map(0.0, 9.0).unwrap(), 0.0);
        assert_eq!(triangular_phase_map(18.0, 9.0).unwrap(), 0.0);
        assert_eq!(triangular_phase_map(27.0, 9.0).unwrap(), 0.0);
        assert!(triangular_phase_map(1.0, 0.0).is_err());
    }

    #[test]
    fn hamiltonian_map_matches_parameterized_oracle() {
        assert_eq!(hamiltonian_phase_map(2.0, 2.0).unwrap(), PI);
        assert_eq!(hamiltonian_phase_map(0.0, 2.0).unwrap(), 0.0);
        assert!((hamiltonian_phase_map(3.0, 2.0).unwrap() - 1.5 * PI).abs() < 1e-12);
        assert!(hamiltonian_phase_map(3.0, 0.0).is_err());
    }

    #[test]
    fn build_phase_table_zero_costs_gives_zero_table() {
        let table = build_phase_table(&[0.0; 8], PhaseMap::linear(3.0).unwrap()).unwrap();
        assert!(table.phases().iter().all(|&p| p == 0.0));
    }

    #[test]
    fn golden_subset_sum_table_has_single_pi_entry() {
        let inst = golden_subset_sum();
        let costs: Vec<f64> = (0..16).map(|x| subset_sum_cost(&inst, x)).collect();
        let table = build_phase_table(&costs, PhaseMap::linear(9.0).unwrap()).unwrap();
        let pi_entries: Vec<usize> = (0..16)
            .filter(|&x| (table.phase(x) - PI).abs() < 1e-9)
            .collect();
        assert_eq!(pi_entries, vec![0b1110]);
    }

    #[test]
    fn binary_grover_table_has_two_phase_values() {
        let costs: Vec<f64> = (0..8).map(|x| if x == 5 { 9.0 } else { 0.0 }).collect();
        let table = build_phase_table(&costs, PhaseMap::linear(9.0).unwrap()).unwrap();
        for (x, &p) in table.phases().iter().enumerate() {
            if x == 5 {
                assert!((p - PI).abs() < 1e-12);
            } else {
                assert_eq!(p, 0.0);
            }
        }
    }

    #[test]
    fn problem_instance_json_round_trips() {
        let docs = [
            r#"{"type":"subset-sum","elements":[2,3,4,8],"target":9}"#,
            r#"{"type":"maxcut","vertices":3,"edges":[[0,1,1.0],[1,2,1.0],[0,2,1.0]]}"#,
            r#"{"type":"diagonal","diag":[0,1,1,2]}"#,
        ];
        for doc in docs {
            let inst = ProblemInstance::from_json(doc).unwrap();
            let back = ProblemInstance::from_json(&inst.to_json()).unwrap();
            assert_eq!(inst, back);
        }
    }

    #[test]
    fn problem_instance_rejects_invalid_documents() {
        assert!(
            ProblemInstance::from_json(r#"{"type":"subset-sum","elements":[],"target":9}"#)
                .is_err()
        );
        assert!(
            ProblemInstance::from_json(r#"{"type":"subset-sum","elements":[1,2],"target":0}"#)
                .is_err()
        );
        assert!(ProblemInstance::from_json(
            r#"{"type":"maxcut","vertices":2,"edges":[[0,0,1.0]]}"#
        )
        .is_err());
        assert!(ProblemInstance::from_json(r#"{"type":"diagonal","diag":[0,1,2]}"#).is_err());
        assert!(ProblemInstance::from_json(r#"{"type":"unknown"}"#).is_err());
    }

    #[test]
    fn default_targets_follow_the_instance() {
        let inst =
            ProblemInstance::from_json(r#"{"type":"subset-sum","elements":[2,3],"target":5}"#)
                .unwrap();
        assert_eq!(inst.default_target(), Some(5.0));
        let inst = ProblemInstance::from_json(
            r#"{"type":"maxcut","vertices":3,"edges":[[0,1,1.0],[1,2,2.0]]}"#,
        )
        .unwrap();
        assert_eq!(inst.default_target(), Some(3.0));
        let inst = ProblemInstance::from_json(r#"{"type":"diagonal","diag":[0,1]}"#).unwrap();
        assert_eq!(inst.default_target(), None);
    }

    proptest! {
        #[test]
        fn triangular_map_peaks_only_at_target(cost in -50.0f64..50.0, target in 0.5f64..20.0) {
            let phase = triangular_phase_map(cost, target).unwrap();
            prop_assert!((0.0..=PI).contains(&phase));
            if (cost - target).abs() > 1e-9 {
                prop_assert!(phase < PI);
            }
        }

        #[test]
        fn maxcut_complement_symmetry_holds(x in 0u64..16) {
            let g = Graph::new(4, vec![(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0)]).unwrap();
            prop_assert_eq!(maxcut_cost(&g, x), maxcut_cost(&g, !x & 0xF));
        }
    }
}
