//! Generators and oracle checks shared by the property and acceptance targets.
#![allow(dead_code)]

use cmur_core::cmur::{cmur_bound, conditional_bound, majorized_marginal, SearchConfig};
use cmur_core::linalg::{complex_gaussian_matrix, hermitian_eigenvalues, CMatrix};
use cmur_core::majorization::{combine, lattice_join, majorizes, Combiner, MajorizationMode, UncertaintyVec};
use cmur_core::qcore::{
    assemblage, born_distribution, joint_distribution, partial_trace, random_measurement, random_mixed, random_pure,
    DensityMatrix, ProjectiveMeasurement, Subsystem,
};
use rand::Rng;

pub type Check = Result<usize, String>;

/// Random nonnegative vector of length `n` summing to `weight`.
pub fn random_vec<R: Rng>(rng: &mut R, n: usize, weight: f64) -> UncertaintyVec {
    // mix in exact zeros now and then; they stress the padding paths
    let raw: Vec<f64> = (0..n).map(|_| if rng.random_bool(0.1) { 0.0 } else { -rng.random::<f64>().max(1e-300).ln() }).collect();
    let s: f64 = raw.iter().sum();
    if s == 0.0 {
        return UncertaintyVec::uniform(n, weight);
    }
    UncertaintyVec::new(raw.into_iter().map(|x| weight * x / s).collect::<Vec<_>>()).unwrap()
}

/// Robin-Hood transfers: the result is majorized by `v`.
pub fn flatten<R: Rng>(rng: &mut R, v: &UncertaintyVec, steps: usize) -> UncertaintyVec {
    let mut c = v.components().to_vec();
    if c.len() < 2 {
        return v.clone();
    }
    for _ in 0..steps {
        let i = rng.random_range(0..c.len());
        let j = rng.random_range(0..c.len());
        let t: f64 = rng.random();
        let (a, b) = (c[i], c[j]);
        c[i] = t * a + (1.0 - t) * b;
        c[j] = (1.0 - t) * a + t * b;
    }
    UncertaintyVec::new(c).unwrap()
}

/// Moves mass from smaller to larger entries: the result majorizes `v`.
pub fn sharpen<R: Rng>(rng: &mut R, v: &UncertaintyVec, steps: usize) -> UncertaintyVec {
    let mut c = v.components().to_vec();
    if c.len() < 2 {
        return v.clone();
    }
    for _ in 0..steps {
        c.sort_by(|a, b| b.total_cmp(a));
        let i = rng.random_range(0..c.len() - 1);
        let j = rng.random_range(i + 1..c.len());
        let d = rng.random::<f64>() * c[j];
        c[i] += d;
        c[j] -= d;
    }
    UncertaintyVec::new(c).unwrap()
}

pub fn random_psd<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let g = complex_gaussian_matrix(rng, n, n);
    &g * g.adjoint()
}

fn diag_vec(m: &CMatrix) -> UncertaintyVec {
    UncertaintyVec::new((0..m.nrows()).map(|i| m[(i, i)].re).collect::<Vec<_>>()).unwrap()
}

fn eig_vec(m: &CMatrix) -> UncertaintyVec {
    UncertaintyVec::new(hermitian_eigenvalues(m)).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn check_partial_order<R: Rng>(rng: &mut R, cases: usize) -> Check {
    use MajorizationMode::StrictSum;
    for _ in 0..cases {
        let n = rng.random_range(1..=7);
        let c = random_vec(rng, n, 1.0);
        let b = flatten(rng, &c, 3);
        let a = flatten(rng, &b, 3);
        ensure(majorizes(&a, &a, StrictSum), || format!("not reflexive: {a:?}"))?;
        ensure(majorizes(&a, &b, StrictSum) && majorizes(&b, &c, StrictSum), || format!("flatten broke order: {a:?} {b:?} {c:?}"))?;
        ensure(majorizes(&a, &c, StrictSum), || format!("not transitive: {a:?} {b:?} {c:?}"))?;
        // unrelated triples: transitivity as an implication, antisymmetry
        let (x, y, z) = (random_vec(rng, n, 1.0), random_vec(rng, n, 1.0), random_vec(rng, n, 1.0));
        if majorizes(&x, &y, StrictSum) && majorizes(&y, &z, StrictSum) {
            ensure(majorizes(&x, &z, StrictSum), || format!("not transitive: {x:?} {y:?} {z:?}"))?;
        }
        for (p, q) in [(&a, &b), (&x, &y)] {
            if majorizes(p, q, StrictSum) && majorizes(q, p, StrictSum) {
                let same = p.components().iter().zip(q.components()).all(|(s, t)| (s - t).abs() <= 1e-9);
                ensure(same, || format!("not antisymmetric: {p:?} {q:?}"))?;
            }
        }
        let w = c.weight();
        ensure(majorizes(&UncertaintyVec::uniform(n, w), &c, StrictSum), || format!("uniform not minimal below {c:?}"))?;
        let mut top = vec![0.0; n];
        top[0] = w;
        ensure(majorizes(&c, &UncertaintyVec::new(top).unwrap(), StrictSum), || format!("point mass not maximal above {c:?}"))?;
    }
    Ok(cases)
}

pub fn check_join<R: Rng>(rng: &mut R, cases: usize) -> Check {
    use MajorizationMode::StrictSum;
    for _ in 0..cases {
        let n = rng.random_range(1..=7);
        let m = rng.random_range(1..=5);
        let inputs: Vec<UncertaintyVec> = (0..m).map(|_| random_vec(rng, n, 1.0)).collect();
        let j = lattice_join(&inputs).map_err(|e| e.to_string())?;
        for v in &inputs {
            ensure(majorizes(v, &j, StrictSum), || format!("{v:?} not below join {j:?}"))?;
        }
        // a common upper bound built from the inputs and one extra vector
        let mut with_extra = inputs.clone();
        with_extra.push(random_vec(rng, n, 1.0));
        let steps = rng.random_range(0..3);
        let u = sharpen(rng, &lattice_join(&with_extra).unwrap(), steps);
        ensure(inputs.iter().all(|v| majorizes(v, &u, StrictSum)), || "generated bound is not an upper bound".into())?;
        ensure(majorizes(&j, &u, StrictSum), || format!("join {j:?} not below upper bound {u:?}"))?;
        // arbitrary candidates: implication only
        let cand = random_vec(rng, n, 1.0);
        if inputs.iter().all(|v| majorizes(v, &cand, StrictSum)) {
            ensure(majorizes(&j, &cand, StrictSum), || format!("join {j:?} not below {cand:?}"))?;
        }
    }
    Ok(cases)
}

pub fn check_combiner_monotonicity<R: Rng>(rng: &mut R, cases: usize) -> Check {
    for _ in 0..cases {
        let (na, nb) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let (wa, wb) = (rng.random_range(0.2..2.0), rng.random_range(0.2..2.0));
        let a_hi = random_vec(rng, na, wa);
        let b_hi = random_vec(rng, nb, wb);
        let a = flatten(rng, &a_hi, 4);
        let b = flatten(rng, &b_hi, 4);
        for op in Combiner::ALL {
            let lo = combine(&a, &b, op);
            let hi = combine(&a_hi, &b_hi, op);
            ensure(majorizes(&lo, &hi, op.mode()), || format!("{op:?}: {lo:?} not below {hi:?}"))?;
        }
    }
    Ok(cases)
}

/// Schur, Lidskii and Schur-product oracles on random PSD pairs.
pub fn check_matrix_oracles<R: Rng>(rng: &mut R, cases: usize) -> Check {
    use MajorizationMode::{StrictSum, Weak};
    for _ in 0..cases {
        let n = rng.random_range(2..=5);
        let x = random_psd(rng, n);
        let y = random_psd(rng, n);
        let (ex, ey) = (eig_vec(&x), eig_vec(&y));

        ensure(majorizes(&diag_vec(&x), &ex, StrictSum), || "Schur: diagonal not below spectrum".into())?;

        let sum = eig_vec(&(&x + &y));
        let bound = combine(&ex, &ey, Combiner::VectorSum);
        ensure(majorizes(&sum, &bound, StrictSum), || format!("Lidskii: {sum:?} vs {bound:?}"))?;

        let had = x.component_mul(&y);
        let eh = eig_vec(&had);
        ensure(majorizes(&diag_vec(&had), &eh, StrictSum), || "Schur product: diagonal not below spectrum".into())?;
        let sv = UncertaintyVec::new(had.singular_values().iter().copied().collect::<Vec<_>>()).unwrap();
        let bound = combine(&ex, &ey, Combiner::Hadamard);
        ensure(majorizes(&sv, &bound, Weak), || format!("Schur product: {sv:?} vs {bound:?}"))?;
    }
    Ok(cases)
}

/// `p̄(x) ≺ p̄(x|x')` for random two-qubit states and measurement pairs.
pub fn check_conditioning<R: Rng>(rng: &mut R, cases: usize) -> Check {
    for _ in 0..cases {
        let rho = if rng.random_bool(0.5) { random_pure(2, 2, rng) } else { random_mixed(2, 2, rng) }.unwrap();
        let x = random_measurement(2, rng);
        let xp = random_measurement(2, rng);
        let joint = joint_distribution(&rho, &x, &xp).map_err(|e| e.to_string())?;
        let marginal = UncertaintyVec::new(joint.row_sums()).unwrap();
        let cond = majorized_marginal(&joint).vec;
        ensure(majorizes(&marginal, &cond, MajorizationMode::StrictSum), || format!("{marginal:?} not below {cond:?}"))?;
    }
    Ok(cases)
}

/// Marginal consistency, X'-independent assemblage weights, local-unitary invariance of τ.
pub fn check_qcore_invariants<R: Rng>(rng: &mut R, cases: usize) -> Check {
    for _ in 0..cases {
        let rho = if rng.random_bool(0.5) { random_pure(2, 2, rng) } else { random_mixed(2, 2, rng) }.unwrap();
        let x = random_measurement(2, rng);
        let xp = random_measurement(2, rng);
        let joint = joint_distribution(&rho, &x, &xp).map_err(|e| e.to_string())?;
        let pa = born_distribution(&partial_trace(&rho, Subsystem::A).unwrap(), &x).unwrap();
        let pb = born_distribution(&partial_trace(&rho, Subsystem::B).unwrap(), &xp).unwrap();
        for (s, t) in joint.row_sums().iter().zip(&pa).chain(joint.col_sums().iter().zip(&pb)) {
            ensure((s - t).abs() <= 1e-9, || format!("marginal mismatch {s} vs {t}"))?;
        }
        let asm = assemblage(&rho, &x).unwrap();
        for (w, r) in asm.weights.iter().zip(joint.row_sums()) {
            ensure((w - r).abs() <= 1e-10, || format!("assemblage weight {w} vs row sum {r}"))?;
        }
        let ua = cmur_core::linalg::haar_unitary(rng, 2);
        let ub = cmur_core::linalg::haar_unitary(rng, 2);
        let rotated = rho.local_unitary(&ua, &ub).map_err(|e| e.to_string())?;
        let t0 = cmur_core::qcore::correlation_data(&rho).unwrap().singular_values;
        let t1 = cmur_core::qcore::correlation_data(&rotated).unwrap().singular_values;
        ensure(t0.iter().zip(&t1).all(|(a, b)| (a - b).abs() <= 1e-8), || format!("τ changed: {t0:?} vs {t1:?}"))?;
    }
    Ok(cases)
}

/// Every probe `X'` yields a conditional distribution below the optimized bound, and the
/// bound combines soundly for two measurements on the same state.
pub fn check_bound_soundness<R: Rng>(rng: &mut R, states: usize, probes: usize) -> Check {
    let cfg = SearchConfig::default();
    for _ in 0..states {
        let rho = if rng.random_bool(0.5) { random_pure(2, 2, rng) } else { random_mixed(2, 2, rng) }.unwrap();
        let x = random_measurement(2, rng);
        let y = random_measurement(2, rng);
        let sx = conditional_bound(&rho, &x, &cfg).map_err(|e| e.to_string())?.bound;
        let sy = conditional_bound(&rho, &y, &cfg).map_err(|e| e.to_string())?.bound;
        let cond = |m: &ProjectiveMeasurement, xp: &ProjectiveMeasurement| {
            majorized_marginal(&joint_distribution(&rho, m, xp).unwrap()).vec
        };
        for _ in 0..probes {
            let xp = random_measurement(2, rng);
            let px = cond(&x, &xp);
            let gap = (1..=px.len()).map(|k| px.prefix_sum(k) - sx.prefix_sum(k)).fold(f64::MIN, f64::max);
            ensure(gap <= 1e-7, || format!("probe beats bound by {gap}"))?;
        }
        let xp = random_measurement(2, rng);
        let yp = random_measurement(2, rng);
        let (px, py) = (cond(&x, &xp), cond(&y, &yp));
        for op in Combiner::ALL {
            let lhs = combine(&px, &py, op);
            let rhs = cmur_bound(&[sx.clone(), sy.clone()], op).unwrap();
            ensure(majorizes(&lhs, &rhs, op.mode()), || format!("{op:?}: {lhs:?} not below {rhs:?}"))?;
        }
    }
    Ok(states)
}

pub fn random_qubit_pair<R: Rng>(rng: &mut R) -> (DensityMatrix, ProjectiveMeasurement) {
    (random_mixed(2, 2, rng).unwrap(), random_measurement(2, rng))
}
