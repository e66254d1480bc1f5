use std::f64::consts::PI;

use crate::circuit::Circuit;
use crate::error::Result;
use crate::gate::Gate;

/// Quantum Fourier transform on `n_qubits` qubits.
///
/// Maps the basis state with index `k` to `(1/sqrt(N)) sum_l exp(2*pi*i*k*l/N) |l>`
/// where `N = 2^n_qubits` and qubit 0 is the least-significant index bit.
/// Built from Hadamards, controlled phases of `pi/2^d`, and a final
/// qubit-reversal network of CNOT triples.
pub fn qft_circuit(n_qubits: usize) -> Result<Circuit> {
    let mut c = Circuit::new(n_qubits)?;
    for q in (0..n_qubits).rev() {
        c.push(Gate::h(q))?;
        for d in 1..=q {
            c.push(Gate::cphase(q - d, q, PI / (1u64 << d) as f64))?;
        }
    }
    for q in 0..n_qubits / 2 {
        let p = n_qubits - 1 - q;
        c.push(Gate::cnot(q, p))?;
        c.push(Gate::cnot(p, q))?;
        c.push(Gate::cnot(q, p))?;
    }
    Ok(c)
}

/// Inverse quantum Fourier transform: the adjoint of [`qft_circuit`].
pub fn inverse_qft_circuit(n_qubits: usize) -> Result<Circuit> {
    Ok(qft_circuit(n_qubits)?.adjoint())
}
