//! Entropic consequences of the bounds. Natural logarithms throughout.

use serde::Serialize;

use crate::cmur::StrategyResult;
use crate::error::{domain, Error, Result};
use crate::majorization::{combine, Combiner, UncertaintyVec, TOL};
use crate::qcore::{born_distribution, partial_trace, DensityMatrix, ProjectiveMeasurement, Subsystem};

/// Eigenvalues or probabilities below this are dropped from entropy sums.
pub const ENTROPY_FLOOR: f64 = 1e-14;

fn entropy_of(ps: impl IntoIterator<Item = f64>) -> f64 {
    ps.into_iter().filter(|&p| p > ENTROPY_FLOOR).map(|p| -p * p.ln()).sum()
}

/// `-Σ v_i ln v_i` in nats.
pub fn shannon_entropy(v: &UncertaintyVec) -> Result<f64> {
    if (v.weight() - 1.0).abs() > TOL {
        return domain(format!("Shannon entropy needs weight 1, got {}", v.weight()));
    }
    Ok(entropy_of(v.components().iter().copied()))
}

/// `S(ρ) = -Tr ρ ln ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of(rho.eigenvalues())
}

/// `S(A|B) = S(ρ_AB) - S(ρ_B)`; negative for entangled states.
pub fn conditional_vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    let rb = partial_trace(rho, Subsystem::B)?;
    Ok(von_neumann_entropy(rho) - von_neumann_entropy(&rb))
}

/// `c = max_{i,j} |⟨x_i|y_j⟩|²`.
pub fn max_overlap_c(x: &ProjectiveMeasurement, y: &ProjectiveMeasurement) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::Shape(format!("measurement dims {} and {}", x.dim(), y.dim())));
    }
    Ok(x.basis()
        .iter()
        .flat_map(|u| y.basis().iter().map(move |v| u.dotc(v).norm_sqr()))
        .fold(0.0, f64::max))
}

/// Entropic summary for a pair of measurements on `A`, all in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyReport {
    /// `H(X) + H(Y)` on `ρ_A`.
    pub h_sum: f64,
    /// `H(s⁽ˣ⁾ ⊗ s⁽ʸ⁾)`.
    pub cmur_lb: f64,
    /// `ln(1/c) + S(A|B)`.
    pub berta_lb: f64,
    pub c: f64,
    pub s_ab: f64,
}

/// Builds the report from the two conditional bounds `sx`, `sy` on the same state.
pub fn entropy_report(
    rho: &DensityMatrix,
    x: &ProjectiveMeasurement,
    y: &ProjectiveMeasurement,
    sx: &UncertaintyVec,
    sy: &UncertaintyVec,
) -> Result<EntropyReport> {
    let ra = partial_trace(rho, Subsystem::A)?;
    let px = UncertaintyVec::new(born_distribution(&ra, x)?)?;
    let py = UncertaintyVec::new(born_distribution(&ra, y)?)?;
    let h_sum = shannon_entropy(&px)? + shannon_entropy(&py)?;
    let cmur_lb = shannon_entropy(&combine(sx, sy, Combiner::DirectProduct))?;
    let c = max_overlap_c(x, y)?;
    let s_ab = conditional_vn_entropy(rho)?;
    Ok(EntropyReport { h_sum, cmur_lb, berta_lb: (1.0 / c).ln() + s_ab, c, s_ab })
}

/// Convenience wrapper taking two strategy results.
pub fn entropy_report_from_strategies(
    rho: &DensityMatrix,
    x: &ProjectiveMeasurement,
    y: &ProjectiveMeasurement,
    sx: &StrategyResult,
    sy: &StrategyResult,
) -> Result<EntropyReport> {
    entropy_report(rho, x, y, &sx.bound, &sy.bound)
}
