use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, C64};
use crate::pauli::{Pauli, PauliString};

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop on vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidParameter(format!("edge ({a}, {b}) outside vertex range 0..{n}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self { n, edges: set })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, edges: BTreeSet::new() }
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|k| (k - 1, k))).expect("path edges")
    }

    pub fn complete(n: usize) -> Self {
        Self::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).expect("complete edges")
    }

    /// Vertex 0 joined to `leaves` other vertices.
    pub fn star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves).map(|k| (0, k))).expect("star edges")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Every labeled connected graph on `n` vertices.
    pub fn all_connected(n: usize) -> Vec<Graph> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        (0u64..(1u64 << pairs.len()))
            .map(|mask| Graph {
                n,
                edges: pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect(),
            })
            .filter(Graph::is_connected)
            .collect()
    }

    /// Parses the edge-list format: a header `n=<N>` followed by one
    /// 0-based `i j` pair per line. Blank lines and `#` comments are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let n = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("line {ln}: expected header `n=<N>`")))?;
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("line {ln}: bad vertex `{s}`")));
            match parts.as_slice() {
                [a, b] => edges.push((parse(a)?, parse(b)?)),
                _ => return Err(Error::Parse(format!("line {ln}: expected `i j`"))),
            }
        }
        Graph::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for (a, b) in &self.edges {
            s.push_str(&format!("{a} {b}\n"));
        }
        s
    }

    /// `g_v = X_v ⊗_{u ∈ N(v)} Z_u`.
    pub fn generator(&self, v: usize) -> StabilizerElement {
        let mut letters = vec![Pauli::I; self.n];
        letters[v] = Pauli::X;
        for u in self.neighbors(v) {
            letters[u] = Pauli::Z;
        }
        StabilizerElement { letters, sign: 1 }
    }

    pub fn generators(&self) -> Vec<StabilizerElement> {
        (0..self.n).map(|v| self.generator(v)).collect()
    }

    /// `∏_{v ∈ subset} g_v`, with `subset` a bit mask over vertices
    /// (bit `v` selects `g_v`).
    pub fn stabilizer_element(&self, subset: u64) -> StabilizerElement {
        let mut acc = StabilizerElement::identity(self.n);
        for v in 0..self.n {
            if subset >> v & 1 == 1 {
                acc = acc.mul(&self.generator(v));
            }
        }
        acc
    }

    /// All `2^n` elements of the stabilizer group.
    pub fn stabilizer_group(&self) -> Vec<StabilizerElement> {
        (0u64..(1u64 << self.n)).map(|m| self.stabilizer_element(m)).collect()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} {{", self.n)?;
        for (k, (a, b)) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}-{b}")?;
        }
        write!(f, "}}")
    }
}

/// Hermitian Pauli product with a real sign, as found in stabilizer groups
/// of graph states.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerElement {
    pub letters: Vec<Pauli>,
    pub sign: i8,
}

impl StabilizerElement {
    pub fn identity(n: usize) -> Self {
        Self { letters: vec![Pauli::I; n], sign: 1 }
    }

    fn as_pauli_string(&self) -> PauliString {
        PauliString { letters: self.letters.clone(), phase: if self.sign < 0 { 2 } else { 0 } }
    }

    /// Product of two elements.
    ///
    /// # Panics
    /// If the product carries an imaginary phase, which cannot happen for
    /// commuting elements such as the generators of a graph state.
    pub fn mul(&self, other: &StabilizerElement) -> StabilizerElement {
        let p = self.as_pauli_string().mul(&other.as_pauli_string());
        assert!(p.phase.is_multiple_of(2), "stabilizer product {p} has an imaginary phase");
        StabilizerElement { letters: p.letters, sign: if p.phase == 0 { 1 } else { -1 } }
    }

    pub fn support(&self) -> Vec<usize> {
        self.as_pauli_string().support()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        self.as_pauli_string().matrix()
    }

    pub(crate) fn accumulate_into(&self, target: &mut ComplexMatrix, coeff: f64) {
        self.as_pauli_string().accumulate_into(target, C64::new(coeff, 0.0));
    }
}

impl fmt::Display for StabilizerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.sign < 0 { '-' } else { '+' })?;
        for p in &self.letters {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// `|G⟩⟨G| = 2^{−n} Σ_{S ∈ 𝒮(G)} S`.
pub fn graph_state(g: &Graph) -> Result<DensityMatrix> {
    if g.n == 0 {
        return Err(Error::InvalidParameter("graph state needs at least one vertex".into()));
    }
    if g.n > 10 {
        return Err(Error::InvalidParameter(format!("dense graph state for n = {} is too large", g.n)));
    }
    let dim = 1usize << g.n;
    let mut m = ComplexMatrix::zeros(dim, dim);
    let w = 1.0 / dim as f64;
    for s in g.stabilizer_group() {
        s.accumulate_into(&mut m, w);
    }
    DensityMatrix::new(m.hermitian_part(), vec![2; g.n])
}
