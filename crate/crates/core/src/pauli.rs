use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{ComplexMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const XYZ: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        let i = C64::new(0.0, 1.0);
        let entries = match self {
            Pauli::I => [o, z, z, o],
            Pauli::X => [z, o, o, z],
            Pauli::Y => [z, -i, i, z],
            Pauli::Z => [o, z, z, -o],
        };
        ComplexMatrix::new(2, 2, entries.to_vec()).expect("2x2")
    }

    /// `self · other = i^phase · result`.
    pub fn product(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    /// Flips the computational basis bit (X and Y do).
    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// `⟨row|P|row ⊕ flip⟩` given the row bit.
    fn entry(self, row_bit: bool) -> C64 {
        match (self, row_bit) {
            (Pauli::I | Pauli::X, _) => C64::new(1.0, 0.0),
            (Pauli::Z, false) => C64::new(1.0, 0.0),
            (Pauli::Z, true) => C64::new(-1.0, 0.0),
            (Pauli::Y, false) => C64::new(0.0, -1.0),
            (Pauli::Y, true) => C64::new(0.0, 1.0),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// `i^phase · P₀ ⊗ P₁ ⊗ … ⊗ P_{n−1}` with qubit 0 the leftmost factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub letters: Vec<Pauli>,
    pub phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self { letters: vec![Pauli::I; n], phase: 0 }
    }

    pub fn from_letters(letters: Vec<Pauli>) -> Self {
        Self { letters, phase: 0 }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Qubits carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        self.letters.iter().enumerate().filter(|(_, &p)| p != Pauli::I).map(|(k, _)| k).collect()
    }

    pub fn mul(&self, other: &PauliString) -> PauliString {
        assert_eq!(self.len(), other.len(), "Pauli string length mismatch");
        let mut phase = self.phase + other.phase;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (ph, p) = a.product(b);
                phase += ph;
                p
            })
            .collect();
        PauliString { letters, phase: phase % 4 }
    }

    pub fn phase_factor(&self) -> C64 {
        match self.phase % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }

    /// Adds `coeff · self` to `target`, using that a Pauli string has one
    /// nonzero entry per row.
    pub fn accumulate_into(&self, target: &mut ComplexMatrix, coeff: C64) {
        let n = self.len();
        let dim = 1usize << n;
        assert_eq!(target.rows(), dim);
        let flip_mask =
            self.letters.iter().enumerate().filter(|(_, p)| p.flips()).fold(0usize, |m, (k, _)| m | (1 << (n - 1 - k)));
        let scale = coeff * self.phase_factor();
        for row in 0..dim {
            let mut v = scale;
            for (k, p) in self.letters.iter().enumerate() {
                if *p != Pauli::I {
                    v *= p.entry(row >> (n - 1 - k) & 1 == 1);
                }
            }
            target[(row, row ^ flip_mask)] += v;
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let dim = 1usize << self.len();
        let mut m = ComplexMatrix::zeros(dim, dim);
        self.accumulate_into(&mut m, C64::new(1.0, 0.0));
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize % 4];
        write!(f, "{prefix}")?;
        for p in &self.letters {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
