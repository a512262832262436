//! Fully separable states that reproduce every one- and two-qubit
//! reduction of a connected graph state.
//!
//! A stabilizer element `∏_{v∈K} g_v` has X/Y letters exactly on `K`, so the
//! reduction to a pair `{i, j}` only receives elements with `K ⊆ {i, j}` and
//! no Z outside the pair. Three pair types survive, each forcing local
//! letters; a qubit never receives two different forced letters, and the
//! state diagonal in the eigenbasis of those letters matches all pairs.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, C64};
use crate::pauli::{Pauli, PauliString};
use crate::states::{graph_state, Graph};

/// Largest graph for which dense states are built.
pub const MAX_DENSE_QUBITS: usize = 8;

fn check_theorem_graph(g: &Graph) -> Result<()> {
    if g.n() <= 2 || !g.is_connected() {
        return Err(Error::Precondition(format!("needs a connected graph state with more than two qubits, got {g}")));
    }
    Ok(())
}

/// Two-qubit reduction `ρ_ij` (factor order `i`, `j`) from the stabilizer
/// elements supported inside `{i, j}`.
pub fn reduced_two_qubit(g: &Graph, i: usize, j: usize) -> Result<DensityMatrix> {
    if i == j {
        return Err(Error::InvalidParameter(format!("pair ({i}, {j}) needs two distinct qubits")));
    }
    for v in [i, j] {
        if v >= g.n() {
            return Err(Error::IndexOutOfRange { index: v, count: g.n() });
        }
    }
    let mut m = ComplexMatrix::zeros(4, 4);
    for mask in [0u64, 1 << i, 1 << j, (1 << i) | (1 << j)] {
        let s = g.stabilizer_element(mask);
        if s.support().iter().all(|&k| k == i || k == j) {
            let local = PauliString::from_letters(vec![s.letters[i], s.letters[j]]);
            local.accumulate_into(&mut m, C64::new(0.25 * s.sign as f64, 0.0));
        }
    }
    DensityMatrix::new(m, vec![2, 2])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum PairCase {
    /// `leaf` has `hub` as its only neighbor: `¼(𝟙 + X_leaf Z_hub)`.
    A { leaf: usize, hub: usize },
    /// Not adjacent, same neighborhood: `¼(𝟙 + X_i X_j)`.
    B,
    /// Adjacent, same neighborhood apart from each other: `¼(𝟙 + Y_i Y_j)`.
    C,
    /// Reduction is `𝟙/4`.
    Generic,
}

impl fmt::Display for PairCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairCase::A { leaf, hub } => write!(f, "a(leaf={leaf},hub={hub})"),
            PairCase::B => f.write_str("b"),
            PairCase::C => f.write_str("c"),
            PairCase::Generic => f.write_str("generic"),
        }
    }
}

/// Case of every unordered pair `(i, j)` with `i < j`.
pub type PairClassification = BTreeMap<(usize, usize), PairCase>;

fn classify_pair(g: &Graph, i: usize, j: usize) -> PairCase {
    let (ni, nj) = (g.neighbors(i), g.neighbors(j));
    let adjacent = g.has_edge(i, j);
    let mut hits = Vec::new();
    if adjacent && ni.len() == 1 {
        hits.push(PairCase::A { leaf: i, hub: j });
    }
    if adjacent && nj.len() == 1 {
        hits.push(PairCase::A { leaf: j, hub: i });
    }
    if !adjacent && ni == nj {
        hits.push(PairCase::B);
    }
    if adjacent {
        let (mut hi, mut hj) = (ni.clone(), nj.clone());
        hi.remove(&j);
        hj.remove(&i);
        if hi == hj {
            hits.push(PairCase::C);
        }
    }
    assert!(hits.len() <= 1, "pair ({i}, {j}) of {g} matches several cases: {hits:?}");
    hits.pop().unwrap_or(PairCase::Generic)
}

pub fn classify_pairs(g: &Graph) -> Result<PairClassification> {
    check_theorem_graph(g)?;
    let n = g.n();
    Ok((0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| ((i, j), classify_pair(g, i, j))).collect())
}

/// Letters each case forces, as `(qubit, letter)` pairs.
fn forced_letters(pair: (usize, usize), case: PairCase) -> Vec<(usize, Pauli)> {
    let (i, j) = pair;
    match case {
        PairCase::A { leaf, hub } => vec![(leaf, Pauli::X), (hub, Pauli::Z)],
        PairCase::B => vec![(i, Pauli::X), (j, Pauli::X)],
        PairCase::C => vec![(i, Pauli::Y), (j, Pauli::Y)],
        PairCase::Generic => Vec::new(),
    }
}

/// One letter per qubit satisfying every forced letter; unconstrained
/// qubits get Z.
pub fn assign_observables(g: &Graph, cls: &PairClassification) -> Result<Vec<Pauli>> {
    let mut forced: Vec<Option<(Pauli, (usize, usize))>> = vec![None; g.n()];
    let mut conflicts = Vec::new();
    for (&pair, &case) in cls {
        for (q, letter) in forced_letters(pair, case) {
            match forced[q] {
                None => forced[q] = Some((letter, pair)),
                Some((l, first)) if l != letter => {
                    conflicts.push(first);
                    conflicts.push(pair);
                }
                Some(_) => {}
            }
        }
    }
    if !conflicts.is_empty() {
        conflicts.sort_unstable();
        conflicts.dedup();
        return Err(Error::AssignmentConflict { pairs: conflicts });
    }
    Ok(forced.into_iter().map(|f| f.map_or(Pauli::Z, |(l, _)| l)).collect())
}

/// `Σ_α p_α |α⟩⟨α|` in the product eigenbasis of the assigned letters.
#[derive(Clone, Debug)]
pub struct MimicState {
    pub assignment: Vec<Pauli>,
    /// `p_α` with qubit 0 as the most significant bit of `α`; bit value 1
    /// means eigenvalue −1.
    pub probabilities: Vec<f64>,
    pub state: DensityMatrix,
}

/// Stabilizer elements whose letters all lie in `{I, O^(k)}`.
fn compatible_elements(g: &Graph, assignment: &[Pauli]) -> Vec<crate::states::StabilizerElement> {
    g.stabilizer_group()
        .into_iter()
        .filter(|s| s.letters.iter().zip(assignment).all(|(&p, &o)| p == Pauli::I || p == o))
        .collect()
}

/// `p_α = |⟨α|G⟩|² = 2^{−N} Σ_S sign_S ∏_{k ∈ supp S} (−1)^{α_k}`, the sum
/// running over stabilizer elements built from the assigned letters only.
/// The state is the same sum taken over operators.
pub fn mimic_state(g: &Graph) -> Result<MimicState> {
    let cls = classify_pairs(g)?;
    let assignment = assign_observables(g, &cls)?;
    let n = g.n();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::InvalidParameter(format!("dense mimic state for n = {n} is too large")));
    }
    let dim = 1usize << n;
    let norm = 1.0 / dim as f64;
    let elements = compatible_elements(g, &assignment);
    let probabilities: Vec<f64> = (0..dim)
        .map(|alpha| {
            elements
                .iter()
                .map(|s| {
                    let parity = s.support().iter().filter(|&&k| alpha >> (n - 1 - k) & 1 == 1).count();
                    let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
                    s.sign as f64 * sign
                })
                .sum::<f64>()
                * norm
        })
        .collect();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for s in &elements {
        s.accumulate_into(&mut m, norm);
    }
    let state = DensityMatrix::new(m.hermitian_part(), vec![2; n])?;
    Ok(MimicState { assignment, probabilities, state })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairLabel {
    pub i: usize,
    pub j: usize,
    #[serde(flatten)]
    pub case: PairCase,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem10Report {
    pub n: usize,
    pub classification: Vec<PairLabel>,
    pub assignment: Vec<Pauli>,
    /// Largest entrywise deviation between graph and mimic single-qubit
    /// reductions.
    pub single_deviation: f64,
    /// Same for all two-qubit reductions.
    pub pair_deviation: f64,
    /// Stabilizer-sum reductions against dense partial traces.
    pub reduction_deviation: f64,
    pub passed: bool,
}

pub fn verify_theorem10(g: &Graph, tol: f64) -> Result<Theorem10Report> {
    let cls = classify_pairs(g)?;
    let mimic = mimic_state(g)?;
    let graph = graph_state(g)?;
    let n = g.n();
    let mut single_deviation: f64 = 0.0;
    for k in 0..n {
        let a = graph.marginal(&[k])?;
        let b = mimic.state.marginal(&[k])?;
        single_deviation = single_deviation.max(a.matrix().max_abs_diff(b.matrix()));
    }
    let (mut pair_deviation, mut reduction_deviation): (f64, f64) = (0.0, 0.0);
    for &(i, j) in cls.keys() {
        let a = graph.marginal(&[i, j])?;
        let b = mimic.state.marginal(&[i, j])?;
        pair_deviation = pair_deviation.max(a.matrix().max_abs_diff(b.matrix()));
        let r = reduced_two_qubit(g, i, j)?;
        reduction_deviation = reduction_deviation.max(a.matrix().max_abs_diff(r.matrix()));
    }
    let passed = single_deviation <= tol && pair_deviation <= tol && reduction_deviation <= tol;
    Ok(Theorem10Report {
        n,
        classification: cls.into_iter().map(|((i, j), case)| PairLabel { i, j, case }).collect(),
        assignment: mimic.assignment,
        single_deviation,
        pair_deviation,
        reduction_deviation,
        passed,
    })
}
