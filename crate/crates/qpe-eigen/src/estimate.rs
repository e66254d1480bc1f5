use std::f64::consts::TAU;

use crate::error::{QpeError, Result};
use crate::pipeline::PhaseHistogram;

/// One eigenvalue estimate decoded from a phase bin.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenEstimate {
    /// Phase fraction in [0, 1).
    pub phase: f64,
    /// Estimated eigenvalue `2 pi phase / t` (omega squared for structural
    /// operators).
    pub lambda_estimate: f64,
    /// `sqrt(max(lambda, 0))`.
    pub omega_estimate: f64,
    /// Fraction of shots in this bin.
    pub weight: f64,
}

/// Decodes histogram bins into eigenvalue estimates, keeping bins whose
/// weight reaches `min_weight` and sorting by weight descending (phase
/// ascending on ties, for deterministic output).
pub fn phases_to_frequencies(
    hist: &PhaseHistogram,
    t: f64,
    min_weight: f64,
) -> Result<Vec<EigenEstimate>> {
    if !(t > 0.0) {
        return Err(QpeError::NonPositiveTime(t));
    }
    if !(0.0..1.0).contains(&min_weight) {
        return Err(QpeError::BadWeightThreshold(min_weight));
    }
    let denom = (1u64 << hist.n_ancilla) as f64;
    let mut estimates: Vec<EigenEstimate> = hist
        .entries
        .iter()
        .filter_map(|(bits, &count)| {
            let weight = count as f64 / hist.shots as f64;
            if weight < min_weight {
                return None;
            }
            let x = u64::from_str_radix(bits, 2).expect("histogram keys are binary");
            let phase = x as f64 / denom;
            let lambda_estimate = TAU * phase / t;
            Some(EigenEstimate {
                phase,
                lambda_estimate,
                omega_estimate: lambda_estimate.max(0.0).sqrt(),
                weight,
            })
        })
        .collect();
    estimates.sort_by(|a, b| {
        b.weight
            .total_cmp(&a.weight)
            .then(a.phase.total_cmp(&b.phase))
    });
    Ok(estimates)
}
