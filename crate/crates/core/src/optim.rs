//! Derivative-free local maximization (Nelder–Mead).

/// Outcome of a local search.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMax {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// Spread of objective values across the final simplex fell below the tolerance.
    pub converged: bool,
}

/// Maximizes `f` from `x0` with an initial simplex of edge `step`.
///
/// Stops when the spread of simplex values is below `tol` and the simplex diameter
/// is below `sqrt(tol)`, or after `max_iters` iterations.
pub fn nelder_mead_max<F>(f: F, x0: &[f64], step: f64, tol: f64, max_iters: usize) -> LocalMax
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let neg = |x: &[f64]| -f(x);
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut vals: Vec<f64> = simplex.iter().map(|x| neg(x)).collect();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iters {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let spread = vals[n] - vals[0];
        let diameter = simplex[1..]
            .iter()
            .map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread <= tol && diameter <= tol.sqrt() {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n).map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64).collect();
        let toward = |t: f64| -> Vec<f64> { (0..n).map(|j| centroid[j] + t * (simplex[n][j] - centroid[j])).collect() };

        let xr = toward(-alpha);
        let fr = neg(&xr);
        if fr < vals[0] {
            let xe = toward(-gamma);
            let fe = neg(&xe);
            if fe < fr {
                simplex[n] = xe;
                vals[n] = fe;
            } else {
                simplex[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            simplex[n] = xr;
            vals[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[n] {
            let xc = toward(-rho);
            let fc = neg(&xc);
            (xc, fc)
        } else {
            let xc = toward(rho);
            let fc = neg(&xc);
            (xc, fc)
        };
        if fc < vals[n].min(fr) {
            simplex[n] = xc;
            vals[n] = fc;
            continue;
        }
        for i in 1..=n {
            for j in 0..n {
                simplex[i][j] = simplex[0][j] + sigma * (simplex[i][j] - simplex[0][j]);
            }
            vals[i] = neg(&simplex[i]);
        }
    }

    let best = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    LocalMax { x: simplex[best].clone(), value: -vals[best], iterations, converged }
}
