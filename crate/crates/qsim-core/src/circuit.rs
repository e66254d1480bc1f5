use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{QsimError, Result};
use crate::gate::{Angle, Gate, SlotId, MAX_QUBITS};
use crate::observable::Observable;
use crate::state::Statevector;

/// Ordered gate list over a fixed-width register, with named parameter slots.
///
/// A slot is declared once and may feed any number of gate angles; binding a
/// slot substitutes its value into every referencing gate. Circuits are
/// immutable during evaluation and safe to share across threads.
#[derive(Debug, Clone)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    slots: Vec<String>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(QsimError::QubitCapExceeded { requested: n_qubits, max: MAX_QUBITS });
        }
        Ok(Circuit { n_qubits, gates: Vec::new(), slots: Vec::new() })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn slot_names(&self) -> &[String] {
        &self.slots
    }

    /// Declares a parameter slot, or returns the existing handle when the
    /// name is already declared.
    pub fn slot(&mut self, name: &str) -> SlotId {
        if let Some(pos) = self.slots.iter().position(|s| s == name) {
            return SlotId(pos);
        }
        self.slots.push(name.to_string());
        SlotId(self.slots.len() - 1)
    }

    /// Appends a gate after validating wiring, qubit range, and that any
    /// referenced slot is declared.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        if let Some(Angle::Param { slot, .. }) = gate.angle() {
            if slot.0 >= self.slots.len() {
                return Err(QsimError::UndeclaredSlot(format!("#{}", slot.0)));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends every gate of `other` with qubit indices shifted up by
    /// `offset`. Slots are merged by name.
    pub fn extend_shifted(&mut self, other: &Circuit, offset: usize) -> Result<()> {
        let slot_map: Vec<SlotId> =
            other.slots.iter().map(|name| self.slot(name)).collect();
        for gate in &other.gates {
            let mut shifted = gate.shifted(offset);
            if let Gate::RotX { angle, .. }
            | Gate::RotY { angle, .. }
            | Gate::RotZ { angle, .. }
            | Gate::ControlledRotY { angle, .. }
            | Gate::ControlledPhase { angle, .. } = &mut shifted
            {
                if let Angle::Param { slot, .. } = angle {
                    *slot = slot_map[slot.0];
                }
            }
            self.push(shifted)?;
        }
        Ok(())
    }

    /// The adjoint circuit: gates reversed, each replaced by its adjoint.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
            slots: self.slots.clone(),
        }
    }

    /// Resolves a name->value binding map into a slot-indexed vector.
    /// Bindings for undeclared names are ignored; missing bindings error.
    fn resolve(&self, bindings: &HashMap<String, f64>) -> Result<Vec<f64>> {
        self.slots
            .iter()
            .map(|name| {
                bindings
                    .get(name)
                    .copied()
                    .ok_or_else(|| QsimError::UnboundSlot(name.clone()))
            })
            .collect()
    }

    /// Runs the circuit on `initial` with the given slot bindings.
    pub fn run(&self, bindings: &HashMap<String, f64>, initial: &Statevector) -> Result<Statevector> {
        let values = self.resolve(bindings)?;
        self.run_resolved(&values, initial)
    }

    pub(crate) fn run_resolved(&self, values: &[f64], initial: &Statevector) -> Result<Statevector> {
        if initial.n_qubits() != self.n_qubits {
            return Err(QsimError::RegisterSizeMismatch {
                circuit: self.n_qubits,
                state: initial.n_qubits(),
            });
        }
        let mut state = initial.clone();
        for gate in &self.gates {
            state.apply_resolved(gate, values);
        }
        Ok(state)
    }

    /// Gradient of `<O>` after this circuit with respect to every slot, by
    /// the two-term parameter-shift rule.
    ///
    /// Controlled Y-rotations are differentiated through the exact
    /// decomposition `CRY(t) = RY(t/2); CNOT; RY(-t/2); CNOT`, so every
    /// parameterized occurrence is a plain rotation with shift `pi/2`. A slot
    /// feeding several gates accumulates one two-point term per occurrence.
    /// Parameterized gates outside {RX, RY, RZ, CRY} have no shift rule and
    /// are rejected.
    pub fn parameter_shift_gradient(
        &self,
        bindings: &HashMap<String, f64>,
        obs: &Observable,
        initial: &Statevector,
    ) -> Result<HashMap<String, f64>> {
        let values = self.resolve(bindings)?;
        let lowered = self.lower(&values)?;
        let mut grad = vec![0.0f64; self.slots.len()];
        for occ in 0..lowered.len() {
            let Some((slot, scale)) = lowered[occ].slot_term else {
                continue;
            };
            let plus = eval_lowered(&lowered, initial, occ, FRAC_PI_2)?.expectation(obs)?;
            let minus = eval_lowered(&lowered, initial, occ, -FRAC_PI_2)?.expectation(obs)?;
            grad[slot] += scale * (plus - minus) / 2.0;
        }
        Ok(self
            .slots
            .iter()
            .cloned()
            .zip(grad)
            .collect())
    }

    /// Expands the gate list into shift-rule primitives with resolved angles.
    fn lower(&self, values: &[f64]) -> Result<Vec<LoweredGate>> {
        let mut out = Vec::with_capacity(self.gates.len() + self.gates.len() / 2);
        for (position, gate) in self.gates.iter().enumerate() {
            match gate {
                Gate::ControlledRotY { control, target, angle } => {
                    let a = angle.resolve(values);
                    let term = angle_slot_term(angle);
                    out.push(LoweredGate {
                        gate: Gate::ry(*target, a / 2.0),
                        slot_term: term.map(|(s, sc)| (s, sc / 2.0)),
                    });
                    out.push(LoweredGate { gate: Gate::cnot(*control, *target), slot_term: None });
                    out.push(LoweredGate {
                        gate: Gate::ry(*target, -a / 2.0),
                        slot_term: term.map(|(s, sc)| (s, -sc / 2.0)),
                    });
                    out.push(LoweredGate { gate: Gate::cnot(*control, *target), slot_term: None });
                }
                Gate::RotX { target, angle } => out.push(LoweredGate {
                    gate: Gate::rx(*target, angle.resolve(values)),
                    slot_term: angle_slot_term(angle),
                }),
                Gate::RotY { target, angle } => out.push(LoweredGate {
                    gate: Gate::ry(*target, angle.resolve(values)),
                    slot_term: angle_slot_term(angle),
                }),
                Gate::RotZ { target, angle } => out.push(LoweredGate {
                    gate: Gate::rz(*target, angle.resolve(values)),
                    slot_term: angle_slot_term(angle),
                }),
                Gate::ControlledPhase { control, target, angle } => {
                    if angle.slot_id().is_some() {
                        return Err(QsimError::NoShiftRule { position });
                    }
                    out.push(LoweredGate {
                        gate: Gate::cphase(*control, *target, angle.resolve(values)),
                        slot_term: None,
                    });
                }
                other => out.push(LoweredGate { gate: other.clone(), slot_term: None }),
            }
        }
        Ok(out)
    }
}

/// Shift-rule primitive: a gate with resolved angle, plus the slot index and
/// chain-rule coefficient when the angle depends on a parameter.
struct LoweredGate {
    gate: Gate,
    slot_term: Option<(usize, f64)>,
}

fn angle_slot_term(angle: &Angle) -> Option<(usize, f64)> {
    match *angle {
        Angle::Fixed(_) => None,
        Angle::Param { slot, scale, .. } => Some((slot.0, scale)),
    }
}

fn eval_lowered(
    lowered: &[LoweredGate],
    initial: &Statevector,
    shifted_occ: usize,
    delta: f64,
) -> Result<Statevector> {
    let mut state = initial.clone();
    for (i, lg) in lowered.iter().enumerate() {
        if i == shifted_occ {
            // Only rotation gates carry slot terms after lowering, so the
            // shifted occurrence always has a plain Fixed angle to adjust.
            let mut g = lg.gate.clone();
            match &mut g {
                Gate::RotX { angle, .. } | Gate::RotY { angle, .. } | Gate::RotZ { angle, .. } => {
                    if let Angle::Fixed(v) = angle {
                        *angle = Angle::Fixed(*v + delta);
                    }
                }
                _ => unreachable!("shift applied to a non-rotation primitive"),
            }
            state.apply_resolved(&g, &[]);
        } else {
            state.apply_resolved(&lg.gate, &[]);
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn no_bindings() -> HashMap<String, f64> {
        HashMap::new()
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(2).unwrap();
        let s = Statevector::basis(2, 2).unwrap();
        let out = c.run(&no_bindings(), &s).unwrap();
        assert_eq!(out.amplitudes(), s.amplitudes());
    }

    #[test]
    fn zero_rotation_is_identity() {
        let mut c = Circuit::new(1).unwrap();
        let a = c.slot("a");
        c.push(Gate::ry(0, Angle::slot(a))).unwrap();
        let bindings = HashMap::from([("a".to_string(), 0.0)]);
        let out = c.run(&bindings, &Statevector::basis(1, 0).unwrap()).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[0].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn double_hadamard_is_identity() {
        let mut c = Circuit::new(1).unwrap();
        c.push(Gate::h(0)).unwrap();
        c.push(Gate::h(0)).unwrap();
        let out = c.run(&no_bindings(), &Statevector::basis(1, 0).unwrap()).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[0].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.amplitudes()[1].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn unbound_slot_is_reported() {
        let mut c = Circuit::new(1).unwrap();
        let a = c.slot("a");
        c.push(Gate::ry(0, Angle::slot(a))).unwrap();
        let err = c.run(&no_bindings(), &Statevector::basis(1, 0).unwrap()).unwrap_err();
        assert_eq!(err, QsimError::UnboundSlot("a".to_string()));
    }

    #[test]
    fn undeclared_slot_rejected_at_push() {
        let mut c = Circuit::new(1).unwrap();
        let err = c.push(Gate::ry(0, Angle::slot(SlotId(5)))).unwrap_err();
        assert!(matches!(err, QsimError::UndeclaredSlot(_)));
    }

    #[test]
    fn gradient_of_ry_matches_analytic() {
        // <Z> after RY(a)|0> is cos a, so the gradient is -sin a.
        let mut c = Circuit::new(1).unwrap();
        let a = c.slot("a");
        c.push(Gate::ry(0, Angle::slot(a))).unwrap();
        let obs = Observable::single_z(0, 1);
        let init = Statevector::basis(1, 0).unwrap();

        let g0 = c
            .parameter_shift_gradient(&HashMap::from([("a".into(), 0.0)]), &obs, &init)
            .unwrap();
        assert_abs_diff_eq!(g0["a"], 0.0, epsilon = 1e-12);

        let g1 = c
            .parameter_shift_gradient(&HashMap::from([("a".into(), PI / 2.0)]), &obs, &init)
            .unwrap();
        assert_abs_diff_eq!(g1["a"], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn shared_slot_accumulates_occurrences() {
        // Two RY(a) gates in sequence act like RY(2a): gradient -2 sin(2a).
        let mut c = Circuit::new(1).unwrap();
        let a = c.slot("a");
        c.push(Gate::ry(0, Angle::slot(a))).unwrap();
        c.push(Gate::ry(0, Angle::slot(a))).unwrap();
        let obs = Observable::single_z(0, 1);
        let init = Statevector::basis(1, 0).unwrap();
        let theta = 0.4f64;
        let g = c
            .parameter_shift_gradient(&HashMap::from([("a".into(), theta)]), &obs, &init)
            .unwrap();
        assert_abs_diff_eq!(g["a"], -2.0 * (2.0 * theta).sin(), epsilon = 1e-12);
    }

    #[test]
    fn cry_decomposition_matches_direct_application() {
        let theta = 1.234f64;
        let mut direct = Circuit::new(2).unwrap();
        direct.push(Gate::cry(1, 0, theta)).unwrap();

        let mut decomposed = Circuit::new(2).unwrap();
        decomposed.push(Gate::ry(0, theta / 2.0)).unwrap();
        decomposed.push(Gate::cnot(1, 0)).unwrap();
        decomposed.push(Gate::ry(0, -theta / 2.0)).unwrap();
        decomposed.push(Gate::cnot(1, 0)).unwrap();

        let mut init = Statevector::basis(2, 0).unwrap();
        init = init.apply_gate(&Gate::h(0)).unwrap();
        init = init.apply_gate(&Gate::h(1)).unwrap();
        let a = direct.run(&no_bindings(), &init).unwrap();
        let b = decomposed.run(&no_bindings(), &init).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert_abs_diff_eq!((x - y).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn parameterized_cphase_has_no_shift_rule() {
        let mut c = Circuit::new(2).unwrap();
        let a = c.slot("a");
        c.push(Gate::cphase(0, 1, Angle::slot(a))).unwrap();
        let err = c
            .parameter_shift_gradient(
                &HashMap::from([("a".into(), 0.3)]),
                &Observable::single_z(0, 2),
                &Statevector::basis(2, 0).unwrap(),
            )
            .unwrap_err();
        assert_eq!(err, QsimError::NoShiftRule { position: 0 });
    }

    #[test]
    fn extend_shifted_remaps_qubits_and_slots() {
        let mut inner = Circuit::new(1).unwrap();
        let a = inner.slot("a");
        inner.push(Gate::ry(0, Angle::slot(a))).unwrap();

        let mut outer = Circuit::new(3).unwrap();
        outer.slot("a");
        outer.extend_shifted(&inner, 2).unwrap();
        assert_eq!(outer.slot_names(), &["a".to_string()]);
        assert!(matches!(outer.gates()[0], Gate::RotY { target: 2, .. }));
    }
}
