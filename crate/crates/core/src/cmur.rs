//! Conditional majorization uncertainty relations.
//!
//! For a bipartite state and a measurement `X` on `A`, the party holding `B` picks a
//! measurement `X'` to make `X` as predictable as possible. The figure of merit is the
//! *majorized marginal* `p̄(x|x')`: sort each column of the joint distribution
//! `P(X, X')` in descending order and add the columns. For every `k` we maximize the sum
//! of the `k` largest components over `X'`; the lattice join of the `N` maximizers is the
//! state-dependent bound `s⁽ˣ⁾` with `p̄(x|x') ≺ s⁽ˣ⁾` for every `X'`.
//!
//! For a fixed `X'` the maximum over index assignments `{I_j⁽ᵏ⁾}` decouples per column,
//! so it is exactly the sum of each column's top `k` entries, which sorting realizes.
//!
//! The search swaps the two maximizations. For a fixed assignment the objective
//! `Σ_j ⟨x'_j|S_{I_j}|x'_j⟩` is linear in the projectors: a qubit `B` solves it exactly
//! through the top eigenvector of `S_{I_1} - S_{I_2}`, larger `B` runs a multi-start
//! Nelder–Mead over unitaries. Searching the sorted objective directly is unreliable,
//! because constant assignments make it flat on large regions.

use std::f64::consts::PI;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{haar_unitary, hermitian_from_params, paulis, unitary_from_hermitian, CMatrix, CVector};
use crate::majorization::{
    combine, lattice_join, lorenz_samples, majorizes, Combiner, LorenzCurve, MajorizationMode, PrefixMax,
    UncertaintyVec, TOL,
};
use crate::optim::nelder_mead_max;
use crate::qcore::{
    assemblage, bloch_angles_of, check_p, check_xi, Assemblage, DensityMatrix, JointDistribution,
    ProjectiveMeasurement, StateFamily, StateParams,
};

/// Values within this distance of the best found value count as ties.
const TIE_TOL: f64 = 1e-12;

/// Multi-start local search settings; used when `B` is larger than a qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub starts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { starts: 32, max_iters: 2000, tol: 1e-10, seed: 0 }
    }
}

/// `p̄(x|x')` together with an optional description of where it came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizedMarginal {
    pub vec: UncertaintyVec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<(String, String)>,
}

impl MajorizedMarginal {
    pub fn with_source(mut self, x: impl Into<String>, xp: impl Into<String>) -> Self {
        self.source = Some((x.into(), xp.into()));
        self
    }
}

/// Sorts each column descending and sums the columns.
pub fn majorized_marginal(p: &JointDistribution) -> MajorizedMarginal {
    MajorizedMarginal { vec: UncertaintyVec::from_nonneg(sorted_column_sum(p.entries())), source: None }
}

fn sorted_column_sum(p: &nalgebra::DMatrix<f64>) -> Vec<f64> {
    let mut acc = vec![0.0; p.nrows()];
    let mut col = vec![0.0; p.nrows()];
    for c in p.column_iter() {
        col.iter_mut().zip(c.iter()).for_each(|(d, s)| *d = *s);
        col.sort_by(|a, b| b.total_cmp(a));
        acc.iter_mut().zip(&col).for_each(|(a, v)| *a += v);
    }
    acc
}

/// The maximizing measurement for one `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KthOptimum {
    pub k: usize,
    pub measurement: ProjectiveMeasurement,
    /// Largest achievable sum of the `k` largest components of `p̄(x|x')`.
    pub wp_k: f64,
    /// `p̄(x|x')` under the maximizing measurement.
    pub vec: UncertaintyVec,
    /// Whether the winning local search met its tolerance.
    pub converged: bool,
}

/// The optimal strategy `{X'⁽ᵏ⁾}` and the bound `s⁽ˣ⁾`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyResult {
    pub per_k: Vec<KthOptimum>,
    pub bound: UncertaintyVec,
}

impl StrategyResult {
    pub fn converged(&self) -> bool {
        self.per_k.iter().all(|o| o.converged)
    }
}

/// Representative of the measurement axis `±t` with `θ ∈ [0, π/2]`, and `φ ∈ [0, π)` on the equator.
pub fn canonical_axis_angles(t: &Vector3<f64>) -> Result<(f64, f64)> {
    let n = t.norm();
    if !(n > 0.0) {
        return domain("zero measurement axis");
    }
    let u = t / n;
    const EQUATOR: f64 = 1e-14;
    let flip = if u.z.abs() <= EQUATOR { u.y.atan2(u.x).rem_euclid(2.0 * PI) >= PI - EQUATOR } else { u.z < 0.0 };
    let u = if flip { -u } else { u };
    let (theta, phi) = bloch_angles_of(&u)?;
    let phi = if theta == 0.0 { 0.0 } else { phi };
    Ok((theta.min(PI / 2.0), phi))
}

fn prefix_k(entries: &nalgebra::DMatrix<f64>, k: usize) -> f64 {
    sorted_column_sum(entries).iter().take(k).sum()
}

/// Maximizes the sum of the `k` largest components of `p̄(x|x')` over projective `X'` on `B`.
pub fn optimal_kth_measurement(
    rho: &DensityMatrix,
    x: &ProjectiveMeasurement,
    k: usize,
    search: &SearchConfig,
) -> Result<KthOptimum> {
    let asm = assemblage(rho, x)?;
    kth_from_assemblage(&asm, rho.dim_b(), k, search)
}

/// Enumerated index-set assignments beyond this count are sampled instead.
const MAX_ASSIGNMENTS: usize = 4096;

/// All `k`-subsets of `0..n`, lexicographic.
fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Non-decreasing `d`-tuples over `0..m`: one per multiset.
fn multisets(m: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; d];
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..d).rev().find(|&i| cur[i] + 1 < m) else {
            return out;
        };
        let next = cur[pos] + 1;
        cur[pos..].iter_mut().for_each(|c| *c = next);
    }
}

/// Index-set assignments to try, one per column of `X'`. Relabeling the outcomes of `X'`
/// permutes columns, so only multisets matter. Constant assignments come first.
fn assignments(n_subsets: usize, d: usize, search: &SearchConfig) -> Vec<Vec<usize>> {
    let count = binomial(n_subsets + d - 1, d);
    let mut out: Vec<Vec<usize>> = (0..n_subsets).map(|s| vec![s; d]).collect();
    if count <= MAX_ASSIGNMENTS {
        out.extend(multisets(n_subsets, d).into_iter().filter(|a| a.iter().any(|&s| s != a[0])));
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(search.seed ^ 0x5eed);
        let mut seen: std::collections::BTreeSet<Vec<usize>> = out.iter().cloned().collect();
        let target = (search.starts * 16).min(MAX_ASSIGNMENTS);
        let mut tries = 0;
        while out.len() < n_subsets + target && tries < 64 * target {
            tries += 1;
            let mut a: Vec<usize> = (0..d).map(|_| rng.random_range(0..n_subsets)).collect();
            a.sort_unstable();
            if seen.insert(a.clone()) {
                out.push(a);
            }
        }
    }
    out
}

/// A proposed optimal `X'` and its objective value.
struct Candidate {
    value: f64,
    basis: Vec<CVector>,
    /// Canonical axis angles when `B` is a qubit.
    angles: Option<(f64, f64)>,
    converged: bool,
}

/// Maximizes `Σ_j ⟨x'_j|S_j|x'_j⟩` over orthonormal bases for a qubit: with `H = S_1 - S_2`
/// the value is `Tr S_2 + λ_max(H)`, reached on the top eigenvector of `H`.
fn qubit_assignment(s1: &CMatrix, s2: &CMatrix) -> (Vector3<f64>, f64) {
    let h = s1 - s2;
    let [sx, sy, sz] = paulis();
    let half_tr = |m: &CMatrix| (m * &h).trace().re / 2.0;
    let axis = Vector3::new(half_tr(&sx), half_tr(&sy), half_tr(&sz));
    (axis, s2.trace().re + h.trace().re / 2.0 + axis.norm())
}

fn kth_from_assemblage(asm: &Assemblage, dim_b: usize, k: usize, search: &SearchConfig) -> Result<KthOptimum> {
    let n = asm.members.len();
    if k == 0 || k > n {
        return domain(format!("k = {k} outside 1..={n}"));
    }
    if search.starts == 0 {
        return domain("search needs at least one start");
    }
    if !(search.tol >= 0.0) {
        return domain("search tolerance must be nonnegative");
    }
    let finish = |measurement: ProjectiveMeasurement, converged: bool| -> Result<KthOptimum> {
        let p = asm.joint_with(&measurement)?;
        let vec = majorized_marginal(&p).vec;
        let wp_k = vec.prefix_sum(k);
        Ok(KthOptimum { k, measurement, wp_k, vec, converged })
    };
    let arbitrary = || if dim_b == 2 { ProjectiveMeasurement::qubit(0.0, 0.0) } else { Ok(ProjectiveMeasurement::computational(dim_b)) };
    if k == n {
        return finish(arbitrary()?, true);
    }

    let subsets = k_subsets(n, k);
    let sums: Vec<CMatrix> = subsets
        .iter()
        .map(|s| s.iter().fold(CMatrix::zeros(dim_b, dim_b), |acc, &i| acc + &asm.members[i]))
        .collect();
    let plan = assignments(subsets.len(), dim_b, search);
    let true_value = |basis: &[CVector]| prefix_k(&asm.joint_entries(basis), k);

    // constant assignments do not depend on X'; the arbitrary measurement stands in for all of them
    let pole = arbitrary()?;
    let mut candidates = vec![Candidate {
        value: true_value(pole.basis()),
        basis: pole.basis().to_vec(),
        angles: (dim_b == 2).then_some((0.0, 0.0)),
        converged: true,
    }];
    let varying: Vec<&Vec<usize>> = plan.iter().filter(|a| a.iter().any(|&s| s != a[0])).collect();

    if dim_b == 2 {
        for a in varying {
            let (axis, _) = qubit_assignment(&sums[a[0]], &sums[a[1]]);
            if axis.norm() <= 1e-15 {
                continue;
            }
            let m = ProjectiveMeasurement::qubit_from_bloch(&axis)?;
            candidates.push(Candidate {
                value: true_value(m.basis()),
                basis: m.basis().to_vec(),
                angles: Some(canonical_axis_angles(&axis)?),
                converged: true,
            });
        }
    } else {
        let per = search.starts.div_ceil(4).max(2);
        let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
        let jobs: Vec<(&Vec<usize>, CMatrix)> =
            varying.iter().flat_map(|a| (0..per).map(|_| (*a, haar_unitary(&mut rng, dim_b))).collect::<Vec<_>>()).collect();
        let runs: Vec<Candidate> = jobs
            .par_iter()
            .map(|(a, origin)| {
                let basis_at = |p: &[f64]| -> Vec<CVector> {
                    let u = origin * unitary_from_hermitian(&hermitian_from_params(dim_b, p));
                    u.column_iter().map(|c| c.into_owned()).collect()
                };
                let f = |p: &[f64]| {
                    basis_at(p).iter().zip(a.iter()).map(|(v, &s)| crate::linalg::expectation(&sums[s], v)).sum::<f64>()
                };
                let x0 = vec![0.0; dim_b * dim_b];
                let first = nelder_mead_max(f, &x0, 0.3, search.tol, search.max_iters);
                let polished = nelder_mead_max(f, &first.x, 3e-3, search.tol, search.max_iters);
                let best = if polished.value >= first.value { polished } else { first };
                let basis = basis_at(&best.x);
                Candidate { value: true_value(&basis), basis, angles: None, converged: best.converged }
            })
            .collect();
        candidates.extend(runs);
    }

    let best = candidates.iter().map(|c| c.value).fold(f64::NEG_INFINITY, f64::max);
    let mut tied = candidates.into_iter().filter(|c| c.value >= best - TIE_TOL);
    if dim_b == 2 {
        let c = tied
            .min_by(|a, b| {
                let (a, b) = (a.angles.unwrap_or_default(), b.angles.unwrap_or_default());
                a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
            })
            .expect("the arbitrary candidate is always present");
        let (t, p) = c.angles.unwrap_or_default();
        finish(ProjectiveMeasurement::qubit(t, p)?, c.converged)
    } else {
        let c = tied.next().expect("the arbitrary candidate is always present");
        finish(orthonormalized(c.basis)?, c.converged)
    }
}

/// Re-orthonormalizes a numerically unitary basis so it passes the 1e-12 check.
fn orthonormalized(mut basis: Vec<CVector>) -> Result<ProjectiveMeasurement> {
    for i in 0..basis.len() {
        for j in 0..i {
            let proj = basis[j].dotc(&basis[i]);
            let bj = basis[j].clone();
            basis[i] -= bj * proj;
        }
        let n = basis[i].norm();
        basis[i].unscale_mut(n);
    }
    ProjectiveMeasurement::new(basis)
}

/// Runs the `k`-th search for `k = 1..=N` and joins the resulting majorized marginals.
pub fn conditional_bound(rho: &DensityMatrix, x: &ProjectiveMeasurement, search: &SearchConfig) -> Result<StrategyResult> {
    let asm = assemblage(rho, x)?;
    let n = x.dim();
    let per_k = (1..=n)
        .into_par_iter()
        .map(|k| kth_from_assemblage(&asm, rho.dim_b(), k, search))
        .collect::<Result<Vec<_>>>()?;
    let vecs: Vec<UncertaintyVec> = per_k.iter().map(|o| o.vec.clone()).collect();
    let bound = lattice_join(&vecs)?;
    Ok(StrategyResult { per_k, bound })
}

/// Which party's uncertainty is reduced in the qubit closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `A` measures `X = σ(θ, φ)`; `B` chooses `X'`.
    ReduceAByB,
    /// `B` measures `X' = σ(θ, φ)`; `A` chooses `X`.
    ReduceBByA,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reduce_a_by_b" | "reduce_A_by_B" => Ok(Self::ReduceAByB),
            "reduce_b_by_a" | "reduce_B_by_A" => Ok(Self::ReduceBByA),
            other => domain(format!("unknown direction '{other}'")),
        }
    }
}

/// Closed-form optimum for the `ψ_ξ` / `ρ_ξ` families.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedForm {
    /// Canonical angles of the partner's optimal measurement; `None` when any
    /// measurement is optimal.
    pub optimal_angles: Option<(f64, f64)>,
    pub s_vec: UncertaintyVec,
}

/// Closed forms for `|ψ_ξ⟩` and `ρ_ξ` with the measured party using `σ(θ, φ)`.
///
/// The partner's optimal axis is `∝ (sin2ξ sinθ cosφ, -sin2ξ sinθ sinφ, cosθ)`, i.e.
/// `tan θ' = tan θ sin 2ξ` and `φ' = -φ`; angles are reported for the upper-hemisphere
/// representative of that axis.
pub fn qubit_closed_form(
    family: StateFamily,
    params: &StateParams,
    x_angles: (f64, f64),
    direction: Direction,
) -> Result<ClosedForm> {
    let (theta, phi) = x_angles;
    if !theta.is_finite() || !phi.is_finite() || !(0.0..=PI).contains(&theta) {
        return domain(format!("θ = {theta} outside [0, π]"));
    }
    let xi = check_xi(params.xi)?;
    let (c2, s2) = ((2.0 * xi).cos(), (2.0 * xi).sin());
    let root = (theta.cos().powi(2) + theta.sin().powi(2) * s2 * s2).sqrt();
    let axis = Vector3::new(s2 * theta.sin() * phi.cos(), -s2 * theta.sin() * phi.sin(), theta.cos());
    let axis_angles = || if axis.norm() > 1e-15 { canonical_axis_angles(&axis).ok() } else { None };
    let two = |s1: f64| UncertaintyVec::new(vec![s1, 1.0 - s1]);

    match family {
        StateFamily::PsiXi => Ok(ClosedForm { optimal_angles: axis_angles(), s_vec: two((1.0 + root) / 2.0)? }),
        StateFamily::RhoXi => {
            let p = check_p(params.p)?;
            let correlated = (1.0 + p * root) / 2.0;
            match direction {
                Direction::ReduceAByB => {
                    let marginal = (1.0 + c2 * theta.cos().abs()) / 2.0;
                    if marginal > correlated {
                        Ok(ClosedForm { optimal_angles: None, s_vec: two(marginal)? })
                    } else {
                        Ok(ClosedForm { optimal_angles: axis_angles(), s_vec: two(correlated)? })
                    }
                }
                Direction::ReduceBByA => Ok(ClosedForm { optimal_angles: axis_angles(), s_vec: two(correlated)? }),
            }
        }
        other => domain(format!("no closed form for {other:?}")),
    }
}

/// Threshold form of the `ρ_ξ` branch choice: `true` (any `X'` is optimal) iff
/// `cos θ ≥ p·tan 2ξ / √(1 - p²)`. Only meaningful for `cos θ ≥ 0`.
pub fn rho_xi_marginal_branch_by_threshold(xi: f64, p: f64, theta: f64) -> bool {
    if p >= 1.0 {
        return false;
    }
    let thr = p * (2.0 * xi).tan() / (1.0 - p * p).sqrt();
    theta.cos() >= thr
}

/// Folds `combine` over a list of bounds.
pub fn cmur_bound(bounds: &[UncertaintyVec], op: Combiner) -> Result<UncertaintyVec> {
    let (first, rest) = bounds.split_first().ok_or_else(|| Error::Domain("cmur_bound of an empty list".into()))?;
    Ok(rest.iter().fold(first.clone(), |acc, b| combine(&acc, b, op)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum SingleParticleMethod {
    /// `(1, cos θ, 2 sin²(θ/2), 0)` for `X = σ(θ, 0)`, `Y = σ(θ, π)`.
    QubitClosedForm,
    /// Lattice join of `p̄(x) ⊕ p̄(y)` over seeded random pure states (an inner approximation).
    Numeric { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleParticleBound {
    pub vec: UncertaintyVec,
    /// `true` for the sampled inner approximation.
    pub approximate: bool,
}

/// Bound `s` with `p̄(x) ⊕ p̄(y) ≺ s` for single-system states.
pub fn single_particle_bound(
    x: &ProjectiveMeasurement,
    y: &ProjectiveMeasurement,
    method: SingleParticleMethod,
) -> Result<SingleParticleBound> {
    if x.dim() != y.dim() {
        return Err(Error::Shape(format!("measurement dims {} and {}", x.dim(), y.dim())));
    }
    match method {
        SingleParticleMethod::QubitClosedForm => {
            let (Some((tx, px)), Some((ty, py))) = (x.bloch_angles(), y.bloch_angles()) else {
                return domain("closed form needs qubit measurements given by Bloch angles");
            };
            let wrap = |d: f64| {
                let d = d.rem_euclid(2.0 * PI);
                d.min(2.0 * PI - d)
            };
            if (tx - ty).abs() > 1e-12 || wrap(px) > 1e-12 || wrap(py - PI) > 1e-12 {
                return domain("closed form needs X = σ(θ, 0) and Y = σ(θ, π)");
            }
            // the pair at θ and at π - θ are related by a reflection, so |cos θ| keeps every entry nonnegative
            let c = tx.cos().abs();
            let vec = UncertaintyVec::new(vec![1.0, c, 1.0 - c, 0.0])?;
            Ok(SingleParticleBound { vec, approximate: false })
        }
        SingleParticleMethod::Numeric { samples, seed } => {
            let n = x.dim();
            let mut acc = PrefixMax::new(2 * n);
            let mut absorb = |psi: &CVector| {
                let px: Vec<f64> = x.basis().iter().map(|v| v.dotc(psi).norm_sqr()).collect();
                let py: Vec<f64> = y.basis().iter().map(|v| v.dotc(psi).norm_sqr()).collect();
                let v = UncertaintyVec::from_nonneg(px.into_iter().chain(py).collect());
                acc.absorb(&v);
            };
            for v in x.basis().iter().chain(y.basis()) {
                absorb(v);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let g = crate::linalg::complex_gaussian_matrix(&mut rng, n, 1);
                let psi = g.column(0).into_owned();
                let norm = psi.norm();
                absorb(&psi.unscale(norm));
            }
            Ok(SingleParticleBound { vec: acc.join(), approximate: true })
        }
    }
}

/// Comparison of a memory-assisted bound against a single-particle bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationReport {
    /// `s_mem ⊀ s_single`.
    pub violated: bool,
    /// Every `k` (1-based) where `Σ_{i≤k} s_mem > Σ_{i≤k} s_single + 1e-9`.
    pub crossing_indices: Vec<usize>,
    pub lorenz_pair: (LorenzCurve, LorenzCurve),
}

pub fn violation_report(s_mem: &UncertaintyVec, s_single: &UncertaintyVec) -> Result<ViolationReport> {
    if (s_mem.weight() - s_single.weight()).abs() > TOL {
        return domain(format!("weights differ: {} vs {}", s_mem.weight(), s_single.weight()));
    }
    let n = s_mem.len().max(s_single.len());
    let crossing_indices = (1..=n).filter(|&k| s_mem.prefix_sum(k) > s_single.prefix_sum(k) + TOL).collect();
    Ok(ViolationReport {
        violated: !majorizes(s_mem, s_single, MajorizationMode::StrictSum),
        crossing_indices,
        lorenz_pair: (lorenz_samples(s_mem), lorenz_samples(s_single)),
    })
}
