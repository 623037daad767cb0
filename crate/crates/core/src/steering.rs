//! Steering witnesses from the infinite-setting conditional bound.
//!
//! A two-qubit state whose correlation matrix has singular values `τ₁ ≥ τ₂ ≥ τ₃` is
//! steerable whenever `R_G(τ₃², τ₂², τ₁²) > 1/2`, where `R_G` is Carlson's completely
//! symmetric elliptic integral of the second kind (the spherical mean of
//! `√(x n_x² + y n_y² + z n_z²)`). Non-violation is inconclusive.

use std::f64::consts::{FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::qcore::{check_p, check_xi, correlation_data, rho_xi, DensityMatrix};

/// Relative error target for the duplication iterations.
const DUPLICATION_TOL: f64 = 1e-16;

/// Margin above 1/2 before the witness fires.
pub const WITNESS_MARGIN: f64 = 1e-9;

/// Without memory, the hemisphere average of the best first component is
/// `ε₁ / 2π = (3π/2) / 2π`.
pub const NO_MEMORY_AVERAGE: f64 = 0.75;

/// `ε₁ = ∫_hemisphere cos²(θ/2) dΩ = 3π/2`.
pub const EPSILON_ONE: f64 = 1.5 * PI;

/// Carlson's `R_F(x, y, z)`; at most one argument may be zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let mut q = (3.0 * DUPLICATION_TOL).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut a = a0;
    while q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        x = (x + lambda) / 4.0;
        y = (y + lambda) / 4.0;
        z = (z + lambda) / 4.0;
        a = (a + lambda) / 4.0;
        q /= 4.0;
    }
    let dx = 1.0 - x / a;
    let dy = 1.0 - y / a;
    let dz = -(dx + dy);
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

/// Carlson's `R_D(x, y, z)`; `z > 0` and at most one of `x, y` zero.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + 3.0 * z) / 5.0;
    let mut q = (DUPLICATION_TOL / 4.0).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut a = a0;
    let mut sum = 0.0;
    let mut fac = 1.0;
    while q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        sum += fac / (sz * (z + lambda));
        fac /= 4.0;
        x = (x + lambda) / 4.0;
        y = (y + lambda) / 4.0;
        z = (z + lambda) / 4.0;
        a = (a + lambda) / 4.0;
        q /= 4.0;
    }
    let dx = 1.0 - x / a;
    let dy = 1.0 - y / a;
    let dz = -(dx + dy) / 3.0;
    let xy = dx * dy;
    let z2 = dz * dz;
    let e2 = xy - 6.0 * z2;
    let e3 = (3.0 * xy - 8.0 * z2) * dz;
    let e4 = 3.0 * (xy - z2) * z2;
    let e5 = xy * z2 * dz;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    fac * series / (a * a.sqrt()) + 3.0 * sum
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RgMethod {
    /// Carlson duplication through `R_F` and `R_D`.
    Duplication,
    /// 64×128 product Gauss–Legendre rule over one octant of the sphere.
    Quadrature,
}

/// `R_G(x, y, z) = (1/4π) ∫ √(x sin²θ cos²φ + y sin²θ sin²φ + z cos²θ) dΩ`.
pub fn carlson_rg(x: f64, y: f64, z: f64, method: RgMethod) -> Result<f64> {
    if [x, y, z].iter().any(|v| !v.is_finite() || *v < 0.0) {
        return domain(format!("R_G needs nonnegative finite arguments, got ({x}, {y}, {z})"));
    }
    Ok(match method {
        RgMethod::Duplication => rg_duplication(x, y, z),
        RgMethod::Quadrature => rg_quadrature(x, y, z, 64, 128),
    })
}

fn rg_duplication(x: f64, y: f64, z: f64) -> f64 {
    let mut v = [x, y, z];
    v.sort_by(f64::total_cmp);
    let [lo, mid, hi] = v;
    if mid == 0.0 {
        return hi.sqrt() / 2.0;
    }
    // with the middle argument in the z slot every term is nonnegative
    let (x, y, z) = (lo, hi, mid);
    (z * carlson_rf(x, y, z) - (x - z) * (y - z) * carlson_rd(x, y, z) / 3.0 + (x * y / z).sqrt()) / 2.0
}

/// Product Gauss–Legendre rule with `n_theta × n_phi` nodes on `θ, φ ∈ [0, π/2]`;
/// the integrand is even in every coordinate, so one octant carries the full average.
pub fn rg_quadrature(x: f64, y: f64, z: f64, n_theta: usize, n_phi: usize) -> f64 {
    let (tn, tw) = gauss_legendre(n_theta, 0.0, PI / 2.0);
    let (pn, pw) = gauss_legendre(n_phi, 0.0, PI / 2.0);
    let mut acc = 0.0;
    for (t, wt) in tn.iter().zip(&tw) {
        let (st, ct) = t.sin_cos();
        let inner: f64 = pn
            .iter()
            .zip(&pw)
            .map(|(p, wp)| {
                let (sp, cp) = p.sin_cos();
                wp * (x * st * st * cp * cp + y * st * st * sp * sp + z * ct * ct).sqrt()
            })
            .sum();
        acc += wt * st * inner;
    }
    acc * 2.0 / PI
}

/// Gauss–Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - t * t) * dp * dp);
        nodes[i] = mid - half * t;
        nodes[n - 1 - i] = mid + half * t;
        weights[i] = half * w;
        weights[n - 1 - i] = half * w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (t * p1 - p0) / (t * t - 1.0))
}

/// Outcome of the steering tests for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteeringVerdict {
    pub rg_value: f64,
    /// `R_G > 1/2`: steerable. `false` is inconclusive.
    pub infinite_violated: bool,
    /// Only available for the `ρ_ξ` family.
    pub two_setting_violated: Option<bool>,
    /// Only available for the `ρ_ξ` family.
    pub three_setting_violated: Option<bool>,
    /// `τ₁ ≥ τ₂ ≥ τ₃`.
    pub taus: [f64; 3],
}

pub fn steering_witness(rho: &DensityMatrix) -> Result<SteeringVerdict> {
    let taus = correlation_data(rho)?.singular_values;
    let [t1, t2, t3] = taus;
    let rg_value = carlson_rg(t3 * t3, t2 * t2, t1 * t1, RgMethod::Duplication)?;
    Ok(SteeringVerdict {
        rg_value,
        infinite_violated: rg_value > 0.5 + WITNESS_MARGIN,
        two_setting_violated: None,
        three_setting_violated: None,
        taus,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Settings {
    Two,
    Three,
}

/// Finite-setting criteria for `ρ_ξ`: two settings fire iff `p > (1 + sin²2ξ)^{-1/2}`,
/// three iff `p > (1 + 2 sin²2ξ)^{-1/2}`.
pub fn finite_setting_criterion(xi: f64, p: f64, settings: Settings) -> Result<bool> {
    let p = check_p(p)?;
    Ok(p > finite_setting_threshold(xi, settings)?)
}

pub fn finite_setting_threshold(xi: f64, settings: Settings) -> Result<f64> {
    let xi = check_xi(xi)?;
    let s2 = (2.0 * xi).sin().powi(2);
    Ok(match settings {
        Settings::Two => (1.0 + s2).powf(-0.5),
        Settings::Three => (1.0 + 2.0 * s2).powf(-0.5),
    })
}

/// All three verdicts for `ρ_ξ`.
pub fn rho_xi_verdict(xi: f64, p: f64) -> Result<SteeringVerdict> {
    let mut v = steering_witness(&rho_xi(xi, p)?)?;
    v.two_setting_violated = Some(finite_setting_criterion(xi, p, Settings::Two)?);
    v.three_setting_violated = Some(finite_setting_criterion(xi, p, Settings::Three)?);
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum HemisphereSampler {
    /// Fibonacci lattice restricted to `z ≥ 0`.
    Fibonacci,
    /// Seeded uniform points on the upper hemisphere.
    Uniform { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HemisphereAverage {
    /// Mean over the sampled directions of `(1 + √(r̂ᵀ Λ_τ² r̂)) / 2`.
    pub finite_sum_avg: f64,
    /// `(1 + R_G(τ₃², τ₂², τ₁²)) / 2`.
    pub analytic_avg: f64,
    /// Same average without memory, `3/4`.
    pub no_memory_avg: f64,
}

/// Upper-hemisphere unit vectors.
pub fn hemisphere_points(m: usize, sampler: HemisphereSampler) -> Vec<[f64; 3]> {
    let golden = PI * (3.0 - 5f64.sqrt());
    let point = |z: f64, phi: f64| {
        let r = (1.0 - z * z).max(0.0).sqrt();
        [r * phi.cos(), r * phi.sin(), z]
    };
    match sampler {
        HemisphereSampler::Fibonacci => (0..m).map(|i| point(1.0 - (i as f64 + 0.5) / m as f64, golden * i as f64)).collect(),
        HemisphereSampler::Uniform { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..m)
                .map(|_| {
                    let z: f64 = rng.random_range(0.0..=1.0);
                    point(z, rng.random_range(0.0..2.0 * PI))
                })
                .collect()
        }
    }
}

/// Finite-sample estimate of the memory-assisted hemisphere average and its analytic value.
///
/// Only the correlation branch `(1 + |Λ_τ r̂|)/2` of the first bound component enters;
/// the local-Bloch-vector branch is left out.
pub fn hemisphere_functional(rho: &DensityMatrix, m_points: usize, sampler: HemisphereSampler) -> Result<HemisphereAverage> {
    if m_points < 1 {
        return domain("hemisphere functional needs at least one point");
    }
    let [t1, t2, t3] = correlation_data(rho)?.singular_values;
    let (a, b, c) = (t3 * t3, t2 * t2, t1 * t1);
    let pts = hemisphere_points(m_points, sampler);
    let total: f64 = pts.iter().map(|r| (1.0 + (a * r[0] * r[0] + b * r[1] * r[1] + c * r[2] * r[2]).sqrt()) / 2.0).sum();
    Ok(HemisphereAverage {
        finite_sum_avg: total / m_points as f64,
        analytic_avg: (1.0 + carlson_rg(a, b, c, RgMethod::Duplication)?) / 2.0,
        no_memory_avg: NO_MEMORY_AVERAGE,
    })
}

/// One `(ξ, p)` grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionRow {
    pub xi: f64,
    pub p: f64,
    pub rg_value: f64,
    pub v_two: bool,
    pub v_three: bool,
    pub v_inf: bool,
}

/// Verdicts over `ξ ∈ [0, π/4]` × `p ∈ [0, 1]` (endpoints included), `ξ`-major.
pub fn region_scan(xi_steps: usize, p_steps: usize) -> Result<Vec<RegionRow>> {
    if xi_steps < 2 || p_steps < 2 {
        return domain("region scan needs at least 2 steps per axis");
    }
    (0..xi_steps * p_steps)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / p_steps, idx % p_steps);
            let xi = FRAC_PI_4 * i as f64 / (xi_steps - 1) as f64;
            let p = j as f64 / (p_steps - 1) as f64;
            let v = rho_xi_verdict(xi, p)?;
            Ok(RegionRow {
                xi,
                p,
                rg_value: v.rg_value,
                v_two: v.two_setting_violated.unwrap_or(false),
                v_three: v.three_setting_violated.unwrap_or(false),
                v_inf: v.infinite_violated,
            })
        })
        .collect()
}
