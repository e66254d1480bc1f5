use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QsimError, Result};

/// Hard cap on register width. A dense amplitude vector at this size is
/// 2^24 complex doubles (256 MiB); anything larger is out of scope.
pub const MAX_QUBITS: usize = 24;

/// Handle to a named parameter slot declared on a [`crate::Circuit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SlotId(pub(crate) usize);

impl SlotId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A gate angle: either a fixed number of radians or an affine function
/// `scale * slot + offset` of one parameter slot.
///
/// The affine form lets data-dependent encodings (fixed offset) and shared
/// trainable parameters (the slot) live in a single gate angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Fixed(f64),
    Param { slot: SlotId, scale: f64, offset: f64 },
}

impl Angle {
    /// Angle equal to the slot value itself.
    pub fn slot(slot: SlotId) -> Self {
        Angle::Param {
            slot,
            scale: 1.0,
            offset: 0.0,
        }
    }

    /// Angle `scale * slot + offset`.
    pub fn affine(slot: SlotId, scale: f64, offset: f64) -> Self {
        Angle::Param { slot, scale, offset }
    }

    pub(crate) fn resolve(&self, values: &[f64]) -> f64 {
        match *self {
            Angle::Fixed(v) => v,
            Angle::Param { slot, scale, offset } => scale * values[slot.0] + offset,
        }
    }

    pub(crate) fn slot_id(&self) -> Option<SlotId> {
        match *self {
            Angle::Fixed(_) => None,
            Angle::Param { slot, .. } => Some(slot),
        }
    }

    /// Adjoint circuits negate every angle; for the affine form both the
    /// scale and the offset flip sign.
    pub(crate) fn negate(&self) -> Angle {
        match *self {
            Angle::Fixed(v) => Angle::Fixed(-v),
            Angle::Param { slot, scale, offset } => Angle::Param {
                slot,
                scale: -scale,
                offset: -offset,
            },
        }
    }
}

impl From<f64> for Angle {
    fn from(v: f64) -> Self {
        Angle::Fixed(v)
    }
}

/// One quantum gate.
///
/// Qubit convention: qubit 0 is the least-significant bit of the basis-state
/// index. For `DenseUnitary`, `targets[j]` carries bit `j` of the matrix
/// row/column index, and the gate applies only where every control is 1.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Hadamard { target: usize },
    PauliX { target: usize },
    RotX { target: usize, angle: Angle },
    RotY { target: usize, angle: Angle },
    RotZ { target: usize, angle: Angle },
    Cnot { control: usize, target: usize },
    ControlledRotY { control: usize, target: usize, angle: Angle },
    ControlledPhase { control: usize, target: usize, angle: Angle },
    DenseUnitary {
        targets: Vec<usize>,
        controls: Vec<usize>,
        matrix: DMatrix<Complex64>,
    },
}

impl Gate {
    pub fn h(target: usize) -> Self {
        Gate::Hadamard { target }
    }

    pub fn x(target: usize) -> Self {
        Gate::PauliX { target }
    }

    pub fn rx(target: usize, angle: impl Into<Angle>) -> Self {
        Gate::RotX { target, angle: angle.into() }
    }

    pub fn ry(target: usize, angle: impl Into<Angle>) -> Self {
        Gate::RotY { target, angle: angle.into() }
    }

    pub fn rz(target: usize, angle: impl Into<Angle>) -> Self {
        Gate::RotZ { target, angle: angle.into() }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn cry(control: usize, target: usize, angle: impl Into<Angle>) -> Self {
        Gate::ControlledRotY { control, target, angle: angle.into() }
    }

    pub fn cphase(control: usize, target: usize, angle: impl Into<Angle>) -> Self {
        Gate::ControlledPhase { control, target, angle: angle.into() }
    }

    /// Builds a dense multi-qubit gate, rejecting non-square, wrongly sized,
    /// or non-unitary matrices (tolerance 1e-10 on max |U^H U - I|).
    pub fn dense_unitary(
        targets: Vec<usize>,
        controls: Vec<usize>,
        matrix: DMatrix<Complex64>,
    ) -> Result<Self> {
        let dim = 1usize << targets.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(QsimError::DenseShapeMismatch {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
                n_targets: targets.len(),
            });
        }
        check_unitary(&matrix)?;
        let gate = Gate::DenseUnitary { targets, controls, matrix };
        gate.check_wiring()?;
        Ok(gate)
    }

    /// All qubits the gate touches, targets first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Hadamard { target }
            | Gate::PauliX { target }
            | Gate::RotX { target, .. }
            | Gate::RotY { target, .. }
            | Gate::RotZ { target, .. } => vec![*target],
            Gate::Cnot { control, target }
            | Gate::ControlledRotY { control, target, .. }
            | Gate::ControlledPhase { control, target, .. } => vec![*target, *control],
            Gate::DenseUnitary { targets, controls, .. } => {
                targets.iter().chain(controls.iter()).copied().collect()
            }
        }
    }

    pub(crate) fn angle(&self) -> Option<&Angle> {
        match self {
            Gate::RotX { angle, .. }
            | Gate::RotY { angle, .. }
            | Gate::RotZ { angle, .. }
            | Gate::ControlledRotY { angle, .. }
            | Gate::ControlledPhase { angle, .. } => Some(angle),
            _ => None,
        }
    }

    /// Checks that targets and controls are pairwise distinct.
    pub(crate) fn check_wiring(&self) -> Result<()> {
        let qubits = self.qubits();
        for (i, a) in qubits.iter().enumerate() {
            if qubits[i + 1..].contains(a) {
                return Err(QsimError::OverlappingWires);
            }
        }
        Ok(())
    }

    /// Checks wiring plus range against a register width.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        self.check_wiring()?;
        for q in self.qubits() {
            if q >= n_qubits {
                return Err(QsimError::QubitOutOfRange { qubit: q, n_qubits });
            }
        }
        Ok(())
    }

    /// The same gate with every qubit index shifted up by `offset`.
    pub fn shifted(&self, offset: usize) -> Gate {
        let mut g = self.clone();
        match &mut g {
            Gate::Hadamard { target }
            | Gate::PauliX { target }
            | Gate::RotX { target, .. }
            | Gate::RotY { target, .. }
            | Gate::RotZ { target, .. } => *target += offset,
            Gate::Cnot { control, target }
            | Gate::ControlledRotY { control, target, .. }
            | Gate::ControlledPhase { control, target, .. } => {
                *control += offset;
                *target += offset;
            }
            Gate::DenseUnitary { targets, controls, .. } => {
                for q in targets.iter_mut().chain(controls.iter_mut()) {
                    *q += offset;
                }
            }
        }
        g
    }

    /// Adjoint gate: self-inverse kinds stay put, rotations and phases negate
    /// their angle, dense matrices take the conjugate transpose.
    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::Hadamard { .. } | Gate::PauliX { .. } | Gate::Cnot { .. } => self.clone(),
            Gate::RotX { target, angle } => Gate::RotX { target: *target, angle: angle.negate() },
            Gate::RotY { target, angle } => Gate::RotY { target: *target, angle: angle.negate() },
            Gate::RotZ { target, angle } => Gate::RotZ { target: *target, angle: angle.negate() },
            Gate::ControlledRotY { control, target, angle } => Gate::ControlledRotY {
                control: *control,
                target: *target,
                angle: angle.negate(),
            },
            Gate::ControlledPhase { control, target, angle } => Gate::ControlledPhase {
                control: *control,
                target: *target,
                angle: angle.negate(),
            },
            Gate::DenseUnitary { targets, controls, matrix } => Gate::DenseUnitary {
                targets: targets.clone(),
                controls: controls.clone(),
                matrix: matrix.adjoint(),
            },
        }
    }
}

/// Max elementwise deviation of U^H U from the identity; errors above 1e-10.
pub(crate) fn check_unitary(matrix: &DMatrix<Complex64>) -> Result<()> {
    let dim = matrix.nrows();
    let product = matrix.adjoint() * matrix;
    let mut deviation = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let expected = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            deviation = deviation.max((product[(i, j)] - expected).norm());
        }
    }
    if deviation > 1e-10 {
        return Err(QsimError::NotUnitary { deviation });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_unitary_rejects_non_unitary() {
        let m = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let err = Gate::dense_unitary(vec![0], vec![], m).unwrap_err();
        assert!(matches!(err, QsimError::NotUnitary { .. }));
    }

    #[test]
    fn dense_unitary_rejects_wrong_shape() {
        let m = DMatrix::from_element(2, 2, Complex64::new(0.0, 0.0));
        let err = Gate::dense_unitary(vec![0, 1], vec![], m).unwrap_err();
        assert!(matches!(err, QsimError::DenseShapeMismatch { .. }));
    }

    #[test]
    fn overlapping_wires_rejected() {
        let err = Gate::cnot(1, 1).validate(2).unwrap_err();
        assert_eq!(err, QsimError::OverlappingWires);
    }

    #[test]
    fn out_of_range_qubit_rejected() {
        let err = Gate::h(3).validate(2).unwrap_err();
        assert!(matches!(err, QsimError::QubitOutOfRange { qubit: 3, .. }));
    }

    #[test]
    fn adjoint_negates_affine_angles() {
        let angle = Angle::affine(SlotId(0), 2.0, 0.5);
        let g = Gate::ry(0, angle).adjoint();
        assert_eq!(
            *g.angle().unwrap(),
            Angle::Param { slot: SlotId(0), scale: -2.0, offset: -0.5 }
        );
    }
}
