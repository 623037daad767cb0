//! Majorization algebra on uncertainty vectors.
//!
//! Every [`UncertaintyVec`] is stored in descending order. Comparisons pad the shorter
//! operand with zeros, which matches the multiset meaning of direct sums.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Comparison tolerance for prefix-sum inequalities and weight equality.
pub const TOL: f64 = 1e-9;

/// A nonnegative vector kept in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UncertaintyVec {
    components: Vec<f64>,
}

impl UncertaintyVec {
    /// Sorts `values` descending. Entries in `[-1e-12, 0)` are clamped to zero; more
    /// negative or non-finite entries are rejected.
    pub fn new(values: impl Into<Vec<f64>>) -> Result<Self> {
        let mut components = values.into();
        for v in components.iter_mut() {
            if !v.is_finite() || *v < -1e-12 {
                return domain(format!("component {v} is negative or non-finite"));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        components.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { components })
    }

    /// Caller guarantees nonnegative finite entries.
    pub(crate) fn from_sorted_unchecked(components: Vec<f64>) -> Self {
        debug_assert!(components.windows(2).all(|w| w[0] >= w[1]));
        Self { components }
    }

    pub(crate) fn from_nonneg(mut components: Vec<f64>) -> Self {
        for v in components.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        components.sort_by(|a, b| b.total_cmp(a));
        Self { components }
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn weight(&self) -> f64 {
        self.components.iter().sum()
    }

    /// Sum of the `k` largest components (`k` beyond the length counts zeros).
    pub fn prefix_sum(&self, k: usize) -> f64 {
        self.components.iter().take(k).sum()
    }

    /// Prefix sums `S_1..S_n` padded with the total out to `n`.
    fn prefix_sums(&self, n: usize) -> Vec<f64> {
        let mut acc = 0.0;
        (0..n)
            .map(|i| {
                acc += self.components.get(i).copied().unwrap_or(0.0);
                acc
            })
            .collect()
    }

    /// `(w/n, …, w/n)`.
    pub fn uniform(n: usize, weight: f64) -> Self {
        Self { components: vec![weight / n as f64; n] }
    }
}

impl TryFrom<Vec<f64>> for UncertaintyVec {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<UncertaintyVec> for Vec<f64> {
    fn from(v: UncertaintyVec) -> Self {
        v.components
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MajorizationMode {
    /// Prefix sums ordered and totals equal.
    StrictSum,
    /// Prefix sums ordered; totals may differ.
    Weak,
}

/// Whether `a ≺ b` (or `a ≺_w b`): `b` is the upper bound.
pub fn majorizes(a: &UncertaintyVec, b: &UncertaintyVec, mode: MajorizationMode) -> bool {
    if mode == MajorizationMode::StrictSum && (a.weight() - b.weight()).abs() > TOL {
        return false;
    }
    let n = a.len().max(b.len());
    a.prefix_sums(n).iter().zip(b.prefix_sums(n)).all(|(sa, sb)| *sa <= sb + TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Combiner {
    /// `a ⊕ b`: concatenation.
    DirectSum,
    /// `a ⊗ b`: all pairwise products.
    DirectProduct,
    /// `a↓ + b↓`.
    VectorSum,
    /// `a↓ ∘ b↓`; bounds built with it hold only under weak majorization.
    Hadamard,
}

impl Combiner {
    pub const ALL: [Combiner; 4] = [Self::DirectSum, Self::DirectProduct, Self::VectorSum, Self::Hadamard];

    /// The majorization mode in which bounds built with this combiner hold.
    pub fn mode(self) -> MajorizationMode {
        match self {
            Self::Hadamard => MajorizationMode::Weak,
            _ => MajorizationMode::StrictSum,
        }
    }
}

impl std::str::FromStr for Combiner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct_sum" => Ok(Self::DirectSum),
            "direct_product" => Ok(Self::DirectProduct),
            "vector_sum" => Ok(Self::VectorSum),
            "hadamard" => Ok(Self::Hadamard),
            other => domain(format!("unknown combiner '{other}'")),
        }
    }
}

fn padded(v: &UncertaintyVec, n: usize) -> impl Iterator<Item = f64> + '_ {
    v.components.iter().copied().chain(std::iter::repeat(0.0)).take(n)
}

pub fn combine(a: &UncertaintyVec, b: &UncertaintyVec, op: Combiner) -> UncertaintyVec {
    match op {
        Combiner::DirectSum => UncertaintyVec::from_nonneg(a.components.iter().chain(&b.components).copied().collect()),
        Combiner::DirectProduct => UncertaintyVec::from_nonneg(
            a.components.iter().flat_map(|x| b.components.iter().map(move |y| x * y)).collect(),
        ),
        Combiner::VectorSum | Combiner::Hadamard => {
            let n = a.len().max(b.len());
            let out = padded(a, n).zip(padded(b, n)).map(|(x, y)| if op == Combiner::VectorSum { x + y } else { x * y });
            // both operands are descending and nonnegative, so the result already is
            UncertaintyVec::from_sorted_unchecked(out.collect())
        }
    }
}

/// Least upper bound under `≺`.
///
/// Takes the pointwise maximum of the prefix sums, replaces it with its least concave
/// majorant over `0..=n` (monotone-chain upper hull anchored at `(0, 0)` and `(n, w)`),
/// then differences.
pub fn lattice_join(vs: &[UncertaintyVec]) -> Result<UncertaintyVec> {
    let Some(first) = vs.first() else {
        return domain("lattice join of an empty set");
    };
    let w = first.weight();
    if let Some(bad) = vs.iter().find(|v| (v.weight() - w).abs() > TOL) {
        return domain(format!("lattice join needs equal weights: {w} vs {}", bad.weight()));
    }
    let n = vs.iter().map(UncertaintyVec::len).max().unwrap_or(0);
    let mut acc = PrefixMax::new(n);
    for v in vs {
        acc.absorb(v);
    }
    Ok(acc.join())
}

/// Running pointwise maximum of prefix sums; [`PrefixMax::join`] finishes the lattice join.
#[derive(Debug, Clone)]
pub(crate) struct PrefixMax {
    sums: Vec<f64>,
}

impl PrefixMax {
    pub(crate) fn new(n: usize) -> Self {
        Self { sums: vec![f64::NEG_INFINITY; n] }
    }

    pub(crate) fn absorb(&mut self, v: &UncertaintyVec) {
        let sums = v.prefix_sums(self.sums.len());
        for (s, p) in self.sums.iter_mut().zip(sums) {
            *s = s.max(p);
        }
    }

    pub(crate) fn join(&self) -> UncertaintyVec {
        let n = self.sums.len();
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(n + 1);
        pts.push((0.0, 0.0));
        pts.extend(self.sums.iter().enumerate().map(|(i, &s)| ((i + 1) as f64, s)));
        let hull = upper_hull(&pts);
        let env = evaluate_hull(&hull, n);
        let diffs = env.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
        // the envelope is concave, so differences are nonincreasing up to rounding
        UncertaintyVec::from_nonneg(diffs)
    }
}

/// Upper convex hull of points sorted by abscissa.
fn upper_hull(pts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &p in pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

fn evaluate_hull(hull: &[(f64, f64)], n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut seg = 0;
    for k in 0..=n {
        let x = k as f64;
        while seg + 1 < hull.len() - 1 && hull[seg + 1].0 <= x {
            seg += 1;
        }
        let (x0, y0) = hull[seg];
        let y = if seg + 1 < hull.len() {
            let (x1, y1) = hull[seg + 1];
            if x == x1 {
                y1
            } else {
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        } else {
            y0
        };
        out.push(y);
    }
    out
}

/// Block-sums consecutive runs of `block` components: `ε_i = Σ_j s_{(i-1)·block + j}`.
pub fn aggregate(s: &UncertaintyVec, n_sections: usize, block: usize) -> Result<UncertaintyVec> {
    if n_sections == 0 || block == 0 || s.len() != n_sections * block {
        return domain(format!(
            "aggregate needs length n_sections·block = {}·{} but got {}",
            n_sections,
            block,
            s.len()
        ));
    }
    Ok(UncertaintyVec::from_nonneg(s.components.chunks(block).map(|c| c.iter().sum()).collect()))
}

/// Points `(k, Σ_{i≤k} v_i)` for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorenzCurve {
    pub points: Vec<(usize, f64)>,
}

impl LorenzCurve {
    /// Two-column CSV with header `k,cumulative`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,cumulative\n");
        for (k, c) in &self.points {
            out.push_str(&format!("{k},{c}\n"));
        }
        out
    }

    pub fn value(&self, k: usize) -> f64 {
        self.points.get(k).map_or_else(|| self.points.last().map_or(0.0, |p| p.1), |p| p.1)
    }
}

pub fn lorenz_samples(v: &UncertaintyVec) -> LorenzCurve {
    let mut points = vec![(0, 0.0)];
    points.extend(v.prefix_sums(v.len()).into_iter().enumerate().map(|(i, s)| (i + 1, s)));
    LorenzCurve { points }
}

#[cfg(test)]
mod tests {
    use super::*;
    use MajorizationMode::*;

    fn uv(v: &[f64]) -> UncertaintyVec {
        UncertaintyVec::new(v.to_vec()).unwrap()
    }

    fn assert_close(a: &UncertaintyVec, b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
        for (x, y) in a.components().iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn construction_sorts_and_rejects_negatives() {
        assert_eq!(uv(&[0.1, 0.6, 0.3]).components(), &[0.6, 0.3, 0.1]);
        assert!(UncertaintyVec::new(vec![0.5, -0.1]).is_err());
        assert!(UncertaintyVec::new(vec![f64::NAN]).is_err());
        assert_eq!(uv(&[1.0, -1e-13]).components(), &[1.0, 0.0]);
    }

    #[test]
    fn majorizes_examples() {
        assert!(majorizes(&uv(&[0.5, 0.5]), &uv(&[0.7, 0.3]), StrictSum));
        assert!(!majorizes(&uv(&[1.0, 0.0]), &uv(&[0.5, 0.5]), StrictSum));
        let (a, b) = (uv(&[0.6, 0.3]), uv(&[0.7, 0.3]));
        assert!(majorizes(&a, &b, Weak));
        assert!(!majorizes(&a, &b, StrictSum));
    }

    #[test]
    fn majorizes_pads_with_zeros() {
        assert!(majorizes(&uv(&[0.5, 0.5]), &uv(&[1.0]), StrictSum));
        assert!(!majorizes(&uv(&[1.0]), &uv(&[0.5, 0.5]), StrictSum));
    }

    #[test]
    fn combine_examples() {
        let a = uv(&[0.7, 0.3]);
        let b = uv(&[0.6, 0.4]);
        assert_close(&combine(&a, &b, Combiner::DirectProduct), &[0.42, 0.28, 0.18, 0.12], 1e-15);
        assert_close(&combine(&uv(&[1.0, 0.0]), &uv(&[1.0, 0.0]), Combiner::DirectSum), &[1.0, 1.0, 0.0, 0.0], 0.0);
        assert_close(&combine(&a, &b, Combiner::VectorSum), &[1.3, 0.7], 1e-15);
        assert_close(&combine(&a, &b, Combiner::Hadamard), &[0.42, 0.12], 1e-15);
    }

    /// Least concave majorant by brute force: the best chord through any i ≤ k ≤ j.
    fn envelope_oracle(sums: &[f64]) -> Vec<f64> {
        let n = sums.len() - 1;
        (0..=n)
            .map(|k| {
                let mut best = sums[k];
                for i in 0..=k {
                    for j in k..=n {
                        if i < j {
                            let t = (k - i) as f64 / (j - i) as f64;
                            best = best.max(sums[i] + t * (sums[j] - sums[i]));
                        }
                    }
                }
                best
            })
            .collect()
    }

    fn join_oracle(vs: &[UncertaintyVec]) -> Vec<f64> {
        let n = vs.iter().map(|v| v.len()).max().unwrap();
        let mut sums = vec![0.0; n + 1];
        for k in 1..=n {
            sums[k] = vs.iter().map(|v| v.prefix_sum(k)).fold(f64::NEG_INFINITY, f64::max);
        }
        envelope_oracle(&sums).windows(2).map(|w| w[1] - w[0]).collect()
    }

    #[test]
    fn join_examples() {
        let j = lattice_join(&[uv(&[0.5, 0.5]), uv(&[0.9, 0.1])]).unwrap();
        assert_close(&j, &[0.9, 0.1], 1e-15);
        let v = uv(&[0.4, 0.35, 0.25]);
        assert_close(&lattice_join(&[v.clone(), v.clone()]).unwrap(), v.components(), 1e-15);

        let vs = [uv(&[0.6, 0.2, 0.2]), uv(&[0.5, 0.4, 0.1])];
        let oracle = join_oracle(&vs);
        assert!(oracle.iter().zip([0.6, 0.3, 0.1]).all(|(a, b)| (a - b).abs() < 1e-15));
        assert_close(&lattice_join(&vs).unwrap(), &[0.6, 0.3, 0.1], 1e-15);
    }

    #[test]
    fn join_needs_concave_envelope() {
        // prefix maxima (0.5, 0.55, 1.0) are not concave
        let vs = [uv(&[0.5, 0.25, 0.25]), uv(&[0.45, 0.1, 0.1, 0.1, 0.1, 0.1, 0.05]), uv(&[0.34, 0.33, 0.33])];
        let j = lattice_join(&vs).unwrap();
        let oracle = join_oracle(&vs);
        assert_close(&j, &oracle, 1e-14);
        for v in &vs {
            assert!(majorizes(v, &j, StrictSum));
        }
    }

    #[test]
    fn join_rejects_weight_mismatch() {
        assert!(matches!(lattice_join(&[uv(&[1.0]), uv(&[0.5])]), Err(Error::Domain(_))));
        assert!(lattice_join(&[]).is_err());
    }

    #[test]
    fn aggregate_examples() {
        assert_close(&aggregate(&uv(&[0.5, 0.3, 0.1, 0.1]), 2, 2).unwrap(), &[0.8, 0.2], 1e-15);
        assert_close(&aggregate(&uv(&[1.0, 1.0, 0.0, 0.0]), 2, 2).unwrap(), &[2.0, 0.0], 0.0);
        let m = 5;
        let mut copies = UncertaintyVec::new(vec![]).unwrap();
        for _ in 0..m {
            copies = combine(&copies, &uv(&[1.0, 0.0]), Combiner::DirectSum);
        }
        assert_close(&aggregate(&copies, 2, m).unwrap(), &[m as f64, 0.0], 0.0);
        assert!(aggregate(&uv(&[0.5, 0.5, 0.0]), 2, 2).is_err());
    }

    #[test]
    fn lorenz_examples() {
        assert_eq!(lorenz_samples(&uv(&[0.5, 0.5])).points, vec![(0, 0.0), (1, 0.5), (2, 1.0)]);
        assert_eq!(lorenz_samples(&uv(&[1.0, 0.0])).points, vec![(0, 0.0), (1, 1.0), (2, 1.0)]);
        let c = lorenz_samples(&uv(&[1.0, 0.5, 0.5, 0.0]));
        assert_eq!(c.points, vec![(0, 0.0), (1, 1.0), (2, 1.5), (3, 2.0), (4, 2.0)]);
        assert_eq!(c.to_csv(), "k,cumulative\n0,0\n1,1\n2,1.5\n3,2\n4,2\n");
    }

    #[test]
    fn json_is_a_plain_array() {
        let v = uv(&[0.2, 0.8]);
        assert_eq!(serde_json::to_string(&v).unwrap(), "[0.8,0.2]");
        let back: UncertaintyVec = serde_json::from_str("[0.1,0.9]").unwrap();
        assert_eq!(back.components(), &[0.9, 0.1]);
    }
}
