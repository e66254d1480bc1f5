/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Hermitian observable as a real-weighted sum of Pauli strings.
///
/// Each term's letter list has one entry per qubit, indexed by qubit number
/// (entry 0 acts on qubit 0, the least-significant bit).
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    terms: Vec<(f64, Vec<Pauli>)>,
}

impl Observable {
    pub fn new(terms: Vec<(f64, Vec<Pauli>)>) -> Self {
        Observable { terms }
    }

    /// `Z` on one qubit, identity elsewhere.
    pub fn single_z(qubit: usize, n_qubits: usize) -> Self {
        let mut letters = vec![Pauli::I; n_qubits];
        letters[qubit] = Pauli::Z;
        Observable { terms: vec![(1.0, letters)] }
    }

    pub fn terms(&self) -> &[(f64, Vec<Pauli>)] {
        &self.terms
    }
}
