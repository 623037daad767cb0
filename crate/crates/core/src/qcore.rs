//! Bipartite states, projective measurements and the distributions they induce.
//!
//! Index ordering: `A` is always the left tensor factor, so the composite basis
//! index is `i_a * dim_b + i_b`.

use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::{Complex, DMatrix, Matrix3, Vector3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, shape, Error, Result};
use crate::linalg::{
    complex_gaussian_matrix, expectation, hermitian_eigenvalues, hermiticity_defect, hermitize,
    kron, kron_vec, paulis, projector, trace_re, CMatrix, CVector, ONE, ZERO,
};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in `[-EIGEN_CLAMP, 0)` count as zero; anything below is rejected.
pub const EIGEN_CLAMP: f64 = 1e-10;
pub const ORTHONORMAL_TOL: f64 = 1e-12;

/// Slack when checking closed parameter ranges such as `ξ ∈ [0, π/4]`.
const RANGE_SLACK: f64 = 1e-12;

/// A Hermitian, positive-semidefinite, unit-trace operator on `C^{dim_a} ⊗ C^{dim_b}`.
///
/// Single systems use `dim_b = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityMatrixJson", into = "DensityMatrixJson")]
pub struct DensityMatrix {
    dim_a: usize,
    dim_b: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates and wraps `matrix`.
    pub fn new(dim_a: usize, dim_b: usize, matrix: CMatrix) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return shape("subsystem dimensions must be positive");
        }
        let n = dim_a * dim_b;
        if matrix.nrows() != n || matrix.ncols() != n {
            return shape(format!(
                "expected a {n}x{n} matrix for dims ({dim_a}, {dim_b}), got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("non-finite entry".into()));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::Invalid(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Invalid(format!("trace is {tr}, expected 1")));
        }
        let matrix = hermitize(&matrix);
        let min_ev = hermitian_eigenvalues(&matrix).last().copied().unwrap_or(0.0);
        if min_ev < -EIGEN_CLAMP {
            return Err(Error::Invalid(format!("not positive semidefinite (eigenvalue {min_ev:e})")));
        }
        Ok(Self { dim_a, dim_b, matrix })
    }

    /// Normalizes a positive operator to unit trace, then validates.
    fn from_unnormalized(dim_a: usize, dim_b: usize, m: CMatrix) -> Result<Self> {
        let tr = trace_re(&m);
        if tr <= 0.0 {
            return Err(Error::Invalid("operator has non-positive trace".into()));
        }
        Self::new(dim_a, dim_b, hermitize(&m).unscale(tr))
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) state vector.
    pub fn from_pure(dim_a: usize, dim_b: usize, psi: &CVector) -> Result<Self> {
        if psi.len() != dim_a * dim_b {
            return shape(format!("state vector has length {}, expected {}", psi.len(), dim_a * dim_b));
        }
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::Invalid("zero state vector".into()));
        }
        Self::new(dim_a, dim_b, projector(&psi.unscale(norm)))
    }

    /// A single-system state (`dim_b = 1`).
    pub fn single(matrix: CMatrix) -> Result<Self> {
        let n = matrix.nrows();
        Self::new(n, 1, matrix)
    }

    /// `I / (dim_a·dim_b)`.
    pub fn maximally_mixed(dim_a: usize, dim_b: usize) -> Self {
        let n = dim_a * dim_b;
        let matrix = CMatrix::identity(n, n).unscale(n as f64);
        Self { dim_a, dim_b, matrix }
    }

    /// `ρ_A ⊗ ρ_B` for two single-system states.
    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        if a.is_bipartite() || b.is_bipartite() {
            return shape("product expects two single-system states");
        }
        Self::new(a.dim(), b.dim(), kron(&a.matrix, &b.matrix))
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn is_bipartite(&self) -> bool {
        self.dim_b > 1
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues in descending order, with values in `[-1e-10, 0)` clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
            .into_iter()
            .map(|l| if l < 0.0 { 0.0 } else { l })
            .collect()
    }

    /// Conjugates by `U_A ⊗ U_B`.
    pub fn local_unitary(&self, ua: &CMatrix, ub: &CMatrix) -> Result<Self> {
        if ua.nrows() != self.dim_a || ub.nrows() != self.dim_b {
            return shape("local unitary dimensions do not match the subsystems");
        }
        let u = kron(ua, ub);
        Self::new(self.dim_a, self.dim_b, hermitize(&(&u * &self.matrix * u.adjoint())))
    }

    /// Exchanges the roles of `A` and `B`.
    pub fn swap_subsystems(&self) -> Self {
        let (da, db) = (self.dim_a, self.dim_b);
        let idx = |a: usize, b: usize| a * db + b;
        let m = CMatrix::from_fn(da * db, da * db, |r, c| {
            let (rb, ra) = (r / da, r % da);
            let (cb, ca) = (c / da, c % da);
            self.matrix[(idx(ra, rb), idx(ca, cb))]
        });
        Self { dim_a: db, dim_b: da, matrix: m }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityMatrixJson {
    dim_a: usize,
    dim_b: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<DensityMatrixJson> for DensityMatrix {
    type Error = Error;

    fn try_from(j: DensityMatrixJson) -> Result<Self> {
        let n = j.dim_a * j.dim_b;
        let m = complex_rows(&j.entries, n, n)?;
        DensityMatrix::new(j.dim_a, j.dim_b, m)
    }
}

impl From<DensityMatrix> for DensityMatrixJson {
    fn from(d: DensityMatrix) -> Self {
        Self { dim_a: d.dim_a, dim_b: d.dim_b, entries: rows_of(&d.matrix) }
    }
}

fn complex_rows(entries: &[Vec<[f64; 2]>], rows: usize, cols: usize) -> Result<CMatrix> {
    if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
        return shape(format!("expected {rows} rows of {cols} [re, im] pairs"));
    }
    Ok(CMatrix::from_fn(rows, cols, |r, c| Complex::new(entries[r][c][0], entries[r][c][1])))
}

fn rows_of(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

/// Which subsystem a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced state of the kept subsystem.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    if !rho.is_bipartite() {
        return shape("partial trace needs a bipartite state");
    }
    let (da, db) = (rho.dim_a, rho.dim_b);
    let m = &rho.matrix;
    let reduced = match keep {
        Subsystem::A => CMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()),
        Subsystem::B => CMatrix::from_fn(db, db, |i, j| (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()),
    };
    DensityMatrix::single(hermitize(&reduced))
}

/// An ordered orthonormal basis; outcome `i` corresponds to basis vector `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasurementJson", into = "MeasurementJson")]
pub struct ProjectiveMeasurement {
    basis: Vec<CVector>,
    bloch_angles: Option<(f64, f64)>,
}

impl ProjectiveMeasurement {
    pub fn new(basis: Vec<CVector>) -> Result<Self> {
        let n = basis.len();
        if n == 0 {
            return shape("empty basis");
        }
        if basis.iter().any(|v| v.len() != n) {
            return shape(format!("basis of {n} vectors must have vectors of length {n}"));
        }
        for i in 0..n {
            for j in i..n {
                let ip = basis[i].dotc(&basis[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                if (ip.re - target).abs() > ORTHONORMAL_TOL || ip.im.abs() > ORTHONORMAL_TOL {
                    return Err(Error::Invalid(format!("basis is not orthonormal at ({i}, {j}): {ip}")));
                }
            }
        }
        Ok(Self { basis, bloch_angles: None })
    }

    /// Columns of a unitary, taken as the basis.
    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        Self::new(u.column_iter().map(|c| c.into_owned()).collect())
    }

    /// The computational basis.
    pub fn computational(dim: usize) -> Self {
        let basis = (0..dim).map(|i| CVector::from_fn(dim, |r, _| if r == i { ONE } else { ZERO })).collect();
        Self { basis, bloch_angles: None }
    }

    /// Eigenbasis of `σ(θ, φ) = cosθ σ_z + sinθ (cosφ σ_x + sinφ σ_y)`: outcome 1 is the
    /// `+1` eigenvector. `θ ∈ [0, π]`; `φ` is reduced mod 2π.
    pub fn qubit(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return domain("non-finite Bloch angle");
        }
        if !(-RANGE_SLACK..=PI + RANGE_SLACK).contains(&theta) {
            return domain(format!("θ = {theta} outside [0, π]"));
        }
        let theta = theta.clamp(0.0, PI);
        let phi = phi.rem_euclid(2.0 * PI);
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let e = Complex::from_polar(1.0, phi);
        let plus = CVector::from_vec(vec![Complex::new(c, 0.0), e * s]);
        let minus = CVector::from_vec(vec![Complex::new(s, 0.0), -e * c]);
        Ok(Self { basis: vec![plus, minus], bloch_angles: Some((theta, phi)) })
    }

    /// Measurement whose outcome-1 projector has Bloch vector `t` (normalized here).
    pub fn qubit_from_bloch(t: &Vector3<f64>) -> Result<Self> {
        let (theta, phi) = bloch_angles_of(t)?;
        Self::qubit(theta, phi)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    pub fn bloch_angles(&self) -> Option<(f64, f64)> {
        self.bloch_angles
    }

    pub fn projector(&self, i: usize) -> CMatrix {
        projector(&self.basis[i])
    }

    /// Bloch vector of the outcome-1 projector (qubits only).
    pub fn bloch_vector(&self) -> Result<Vector3<f64>> {
        if self.dim() != 2 {
            return Err(Error::UnsupportedDimension(format!("Bloch vector needs dim 2, got {}", self.dim())));
        }
        let p = self.projector(0);
        let s = paulis();
        Ok(Vector3::new(trace_re(&(&p * &s[0])), trace_re(&(&p * &s[1])), trace_re(&(&p * &s[2]))))
    }
}

/// Polar angles `(θ, φ)` of a nonzero 3-vector, `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
pub fn bloch_angles_of(t: &Vector3<f64>) -> Result<(f64, f64)> {
    let n = t.norm();
    if !(n > 0.0) || !n.is_finite() {
        return domain("Bloch vector must be nonzero and finite");
    }
    let theta = (t.z / n).clamp(-1.0, 1.0).acos();
    let phi = if t.x == 0.0 && t.y == 0.0 { 0.0 } else { t.y.atan2(t.x).rem_euclid(2.0 * PI) };
    Ok((theta, phi))
}

/// Unit vector with polar angles `(θ, φ)`.
pub fn bloch_unit(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasurementJson {
    dim: usize,
    basis: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bloch_angles: Option<(f64, f64)>,
}

impl TryFrom<MeasurementJson> for ProjectiveMeasurement {
    type Error = Error;

    fn try_from(j: MeasurementJson) -> Result<Self> {
        if let Some((theta, phi)) = j.bloch_angles {
            if j.dim != 2 {
                return shape("bloch_angles only apply to dim 2");
            }
            let m = Self::qubit(theta, phi)?;
            if !j.basis.is_empty() {
                let given = complex_rows(&j.basis, 2, 2)?;
                for (i, v) in m.basis.iter().enumerate() {
                    let overlap = given.row(i).transpose().dotc(v).norm();
                    if (overlap - 1.0).abs() > 1e-9 {
                        return Err(Error::Invalid("basis disagrees with bloch_angles".into()));
                    }
                }
            }
            return Ok(m);
        }
        let rows = complex_rows(&j.basis, j.dim, j.dim)?;
        Self::new(rows.row_iter().map(|r| r.transpose()).collect())
    }
}

impl From<ProjectiveMeasurement> for MeasurementJson {
    fn from(m: ProjectiveMeasurement) -> Self {
        let basis = m.basis.iter().map(|v| v.iter().map(|z| [z.re, z.im]).collect()).collect();
        Self { dim: m.dim(), basis, bloch_angles: m.bloch_angles }
    }
}

/// Born-rule distribution of a measurement on a single-system state.
pub fn born_distribution(rho: &DensityMatrix, x: &ProjectiveMeasurement) -> Result<Vec<f64>> {
    if rho.is_bipartite() {
        return shape("born_distribution expects a single-system state");
    }
    if rho.dim_a != x.dim() {
        return shape(format!("measurement dim {} vs state dim {}", x.dim(), rho.dim_a));
    }
    Ok(x.basis.iter().map(|v| expectation(&rho.matrix, v).max(0.0)).collect())
}

/// Outcome probabilities `P(X = i, X' = j)`; rows index `X` on `A`, columns `X'` on `B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDistribution {
    entries: DMatrix<f64>,
}

impl JointDistribution {
    /// Validates nonnegativity (entries in `[-1e-12, 0)` clamp to zero) and unit total.
    pub fn new(mut entries: DMatrix<f64>) -> Result<Self> {
        for v in entries.iter_mut() {
            if !v.is_finite() || *v < -1e-12 {
                return Err(Error::Invalid(format!("probability {v} is negative or non-finite")));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Invalid(format!("joint distribution sums to {total}")));
        }
        Ok(Self { entries })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return shape("ragged rows");
        }
        Self::new(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    /// Marginal of `X`.
    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.row_iter().map(|r| r.sum()).collect()
    }

    /// Marginal of `X'`.
    pub fn col_sums(&self) -> Vec<f64> {
        self.entries.column_iter().map(|c| c.sum()).collect()
    }
}

/// `P_ij = Tr[ρ_AB (|x_i⟩⟨x_i| ⊗ |x'_j⟩⟨x'_j|)]`.
pub fn joint_distribution(
    rho: &DensityMatrix,
    x: &ProjectiveMeasurement,
    xp: &ProjectiveMeasurement,
) -> Result<JointDistribution> {
    if !rho.is_bipartite() {
        return shape("joint distribution needs a bipartite state");
    }
    if x.dim() != rho.dim_a || xp.dim() != rho.dim_b {
        return shape(format!(
            "measurement dims ({}, {}) vs subsystem dims ({}, {})",
            x.dim(),
            xp.dim(),
            rho.dim_a,
            rho.dim_b
        ));
    }
    let p = DMatrix::from_fn(x.dim(), xp.dim(), |i, j| {
        expectation(&rho.matrix, &kron_vec(&x.basis[i], &xp.basis[j])).max(0.0)
    });
    JointDistribution::new(p)
}

/// Conditional (subnormalized) states left on `B` after `A` measures `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct Assemblage {
    pub members: Vec<CMatrix>,
    pub weights: Vec<f64>,
}

impl Assemblage {
    /// Joint distribution with a measurement on `B`: `P_ij = ⟨x'_j|ρ_{i|x}|x'_j⟩`.
    pub fn joint_with(&self, xp: &ProjectiveMeasurement) -> Result<JointDistribution> {
        let db = self.members.first().map_or(0, |m| m.nrows());
        if xp.dim() != db {
            return shape(format!("measurement dim {} vs B dim {db}", xp.dim()));
        }
        JointDistribution::new(self.joint_entries(xp.basis()))
    }

    /// Unvalidated joint entries for a basis on `B`; used in inner search loops.
    pub(crate) fn joint_entries(&self, basis: &[CVector]) -> DMatrix<f64> {
        DMatrix::from_fn(self.members.len(), basis.len(), |i, j| expectation(&self.members[i], &basis[j]).max(0.0))
    }

    /// `Σ_i ρ_{i|x}`, which equals `ρ_B`.
    pub fn total(&self) -> CMatrix {
        let db = self.members[0].nrows();
        self.members.iter().fold(CMatrix::zeros(db, db), |acc, m| acc + m)
    }
}

/// `ρ_{i|x} = ⟨x_i|ρ_AB|x_i⟩` (partial inner product on `A`).
pub fn assemblage(rho: &DensityMatrix, x: &ProjectiveMeasurement) -> Result<Assemblage> {
    if !rho.is_bipartite() {
        return shape("assemblage needs a bipartite state");
    }
    if x.dim() != rho.dim_a {
        return shape(format!("measurement dim {} vs A dim {}", x.dim(), rho.dim_a));
    }
    let (da, db) = (rho.dim_a, rho.dim_b);
    let m = &rho.matrix;
    let members: Vec<CMatrix> = x
        .basis
        .iter()
        .map(|v| {
            let member = CMatrix::from_fn(db, db, |r, c| {
                let mut acc = ZERO;
                for a in 0..da {
                    for b in 0..da {
                        acc += v[a].conj() * m[(a * db + r, b * db + c)] * v[b];
                    }
                }
                acc
            });
            hermitize(&member)
        })
        .collect();
    let weights = members.iter().map(|m| trace_re(m).max(0.0)).collect();
    Ok(Assemblage { members, weights })
}

/// Local Bloch vectors and Pauli correlation matrix of a two-qubit state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationData {
    pub a_vec: Vector3<f64>,
    pub b_vec: Vector3<f64>,
    pub t_matrix: Matrix3<f64>,
    /// Singular values of `t_matrix`, descending.
    pub singular_values: [f64; 3],
}

pub fn correlation_data(rho: &DensityMatrix) -> Result<CorrelationData> {
    if rho.dim_a != 2 || rho.dim_b != 2 {
        return Err(Error::UnsupportedDimension(format!(
            "correlation data needs a two-qubit state, got ({}, {})",
            rho.dim_a, rho.dim_b
        )));
    }
    let s = paulis();
    let id = CMatrix::identity(2, 2);
    let ev = |op: CMatrix| trace_re(&(&rho.matrix * op));
    let a_vec = Vector3::from_fn(|i, _| ev(kron(&s[i], &id)));
    let b_vec = Vector3::from_fn(|j, _| ev(kron(&id, &s[j])));
    let t_matrix = Matrix3::from_fn(|i, j| ev(kron(&s[i], &s[j])));
    let mut sv: Vec<f64> = t_matrix.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(CorrelationData { a_vec, b_vec, t_matrix, singular_values: [sv[0], sv[1], sv[2]] })
}

/// Named state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateFamily {
    /// `cos ξ |00⟩ + sin ξ |11⟩`.
    PsiXi,
    /// `(1-p)/2 · ρ_A^ξ ⊗ I + p |ψ_ξ⟩⟨ψ_ξ|`.
    RhoXi,
    RandomPure,
    RandomMixed,
}

impl std::str::FromStr for StateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi_xi" => Ok(Self::PsiXi),
            "rho_xi" => Ok(Self::RhoXi),
            "random_pure" => Ok(Self::RandomPure),
            "random_mixed" => Ok(Self::RandomMixed),
            other => domain(format!("unknown state family '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateParams {
    pub xi: f64,
    pub p: f64,
    pub seed: u64,
}

impl Default for StateParams {
    fn default() -> Self {
        Self { xi: 0.0, p: 1.0, seed: 0 }
    }
}

pub fn check_xi(xi: f64) -> Result<f64> {
    if !xi.is_finite() || !(-RANGE_SLACK..=FRAC_PI_4 + RANGE_SLACK).contains(&xi) {
        return domain(format!("ξ = {xi} outside [0, π/4]"));
    }
    Ok(xi.clamp(0.0, FRAC_PI_4))
}

pub fn check_p(p: f64) -> Result<f64> {
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return domain(format!("p = {p} outside [0, 1]"));
    }
    Ok(p)
}

/// Builds a two-qubit state of the named family. Random families are reproducible from `seed`.
pub fn build_state(family: StateFamily, params: &StateParams) -> Result<DensityMatrix> {
    match family {
        StateFamily::PsiXi => psi_xi(params.xi),
        StateFamily::RhoXi => rho_xi(params.xi, params.p),
        StateFamily::RandomPure => random_pure(2, 2, &mut ChaCha8Rng::seed_from_u64(params.seed)),
        StateFamily::RandomMixed => random_mixed(2, 2, &mut ChaCha8Rng::seed_from_u64(params.seed)),
    }
}

fn psi_xi_vector(xi: f64) -> CVector {
    CVector::from_vec(vec![Complex::new(xi.cos(), 0.0), ZERO, ZERO, Complex::new(xi.sin(), 0.0)])
}

pub fn psi_xi(xi: f64) -> Result<DensityMatrix> {
    let xi = check_xi(xi)?;
    DensityMatrix::from_pure(2, 2, &psi_xi_vector(xi))
}

pub fn rho_xi(xi: f64, p: f64) -> Result<DensityMatrix> {
    let xi = check_xi(xi)?;
    let p = check_p(p)?;
    let rho_a = CMatrix::from_diagonal(&CVector::from_vec(vec![
        Complex::new(xi.cos().powi(2), 0.0),
        Complex::new(xi.sin().powi(2), 0.0),
    ]));
    let noise = kron(&rho_a, &CMatrix::identity(2, 2)).scale((1.0 - p) / 2.0);
    let pure = projector(&psi_xi_vector(xi)).scale(p);
    DensityMatrix::new(2, 2, noise + pure)
}

/// Normalized complex Gaussian state vector.
pub fn random_pure<R: Rng + ?Sized>(dim_a: usize, dim_b: usize, rng: &mut R) -> Result<DensityMatrix> {
    let g = complex_gaussian_matrix(rng, dim_a * dim_b, 1);
    DensityMatrix::from_pure(dim_a, dim_b, &g.column(0).into_owned())
}

/// Normalized Wishart matrix `G G† / Tr(G G†)` with square complex Gaussian `G`.
pub fn random_mixed<R: Rng + ?Sized>(dim_a: usize, dim_b: usize, rng: &mut R) -> Result<DensityMatrix> {
    let n = dim_a * dim_b;
    let g = complex_gaussian_matrix(rng, n, n);
    DensityMatrix::from_unnormalized(dim_a, dim_b, &g * g.adjoint())
}

/// Haar-random projective measurement of dimension `dim`.
pub fn random_measurement<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ProjectiveMeasurement {
    if dim == 2 {
        let z: f64 = rng.random_range(-1.0..=1.0);
        let phi: f64 = rng.random_range(0.0..2.0 * PI);
        return ProjectiveMeasurement::qubit(z.acos(), phi).expect("angles in range");
    }
    ProjectiveMeasurement::from_unitary(&crate::linalg::haar_unitary(rng, dim)).expect("Haar unitary is orthonormal")
}
