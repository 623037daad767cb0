//! Small dense complex linear algebra used throughout the crate.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub const ONE: C64 = Complex { re: 1.0, im: 0.0 };
pub const I: C64 = Complex { re: 0.0, im: 1.0 };

/// Pauli matrices σ_x, σ_y, σ_z.
pub fn paulis() -> [CMatrix; 3] {
    [
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(hermitize(m)).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// `(M + M†)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let d = m - m.adjoint();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `⟨v|M|v⟩`, real part (M Hermitian).
pub fn expectation(m: &CMatrix, v: &CVector) -> f64 {
    v.dotc(&(m * v)).re
}

/// `|v⟩⟨v|`.
pub fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn trace_re(m: &CMatrix) -> f64 {
    m.trace().re
}

/// A matrix of i.i.d. standard complex Gaussians (real and imaginary parts ~ N(0, 1/2)).
pub fn complex_gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re * s, im * s)
    })
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix,
/// with the phases of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = complex_gaussian_matrix(rng, n, n);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `exp(iH)` for Hermitian `H` via its eigendecomposition.
pub fn unitary_from_hermitian(h: &CMatrix) -> CMatrix {
    let eig = SymmetricEigen::new(hermitize(h));
    let phases = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex::from_polar(1.0, l)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// Hermitian matrix from `n²` real parameters: the diagonal, then real and imaginary
/// parts of the strict upper triangle.
pub fn hermitian_from_params(n: usize, params: &[f64]) -> CMatrix {
    assert_eq!(params.len(), n * n, "expected n² parameters");
    let mut h = CMatrix::zeros(n, n);
    let mut it = params.iter().copied();
    for i in 0..n {
        h[(i, i)] = Complex::new(it.next().unwrap(), 0.0);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let re = it.next().unwrap();
            let im = it.next().unwrap();
            h[(i, j)] = Complex::new(re, im);
            h[(j, i)] = Complex::new(re, -im);
        }
    }
    h
}
