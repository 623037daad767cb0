use cmur_core::cmur::{
    conditional_bound, qubit_closed_form, single_particle_bound, violation_report, Direction, SingleParticleMethod,
    StrategyResult,
};
use cmur_core::entropic::entropy_report;
use cmur_core::majorization::{combine, lattice_join, Combiner, UncertaintyVec};
use cmur_core::qcore::{psi_xi, DensityMatrix, ProjectiveMeasurement, StateFamily};
use cmur_core::steering::{
    hemisphere_functional, region_scan, rho_xi_verdict, steering_witness, HemisphereSampler,
};
use rayon::prelude::*;
use serde_json::json;

use crate::args::{Command, Figure1Cmd, Figure2Cmd, Figure3Cmd, JoinCmd, MeasureCmd, SteerCmd};
use crate::config::{Resolver, FIGURE1_XIS, FIGURE2_XIS};
use crate::error::CliError;
use crate::output::{emit, Cell, Format, Report, Table};

pub fn run(cmd: &Command) -> Result<(), CliError> {
    let common = cmd.common();
    let r = Resolver::new(common.config.as_deref(), cmd.name())?;
    let (report, default_format) = match cmd {
        Command::Bound(c) => (bound(c, &r)?, Format::Json),
        Command::Strategy(c) => (strategy(c, &r)?, Format::Json),
        Command::Figure1(c) => (figure1(c, &r)?, Format::Csv),
        Command::Figure2(c) => (figure2(c, &r)?, Format::Csv),
        Command::Figure3(c) => (figure3(c, &r)?, Format::Csv),
        Command::Steer(c) => (steer(c, &r)?, Format::Json),
        Command::Join(c) => (join(c, &r)?, Format::Json),
    };
    emit(report, r.format(common.format, default_format), r.out(&common.out).as_deref())
}

struct Solved {
    result: StrategyResult,
    closed_form: Option<serde_json::Value>,
}

fn solve(c: &MeasureCmd, r: &Resolver) -> Result<Solved, CliError> {
    let search = r.search(&c.search)?;
    let (rho, family) = r.state(&c.state, search.seed)?;
    let (x, angles) = r.measurement(&c.meas)?;
    let direction = r.direction(&c.meas)?;
    let rho = match direction {
        Direction::ReduceAByB => rho,
        Direction::ReduceBByA => rho.swap_subsystems(),
    };
    let result = conditional_bound(&rho, &x, &search)?;
    let closed_form = match (family, angles) {
        (Some((f @ (StateFamily::PsiXi | StateFamily::RhoXi), params)), Some(angles)) => {
            let cf = qubit_closed_form(f, &params, angles, direction)?;
            Some(json!({ "s": cf.s_vec, "optimal_angles": cf.optimal_angles }))
        }
        _ => None,
    };
    Ok(Solved { result, closed_form })
}

fn bound(c: &MeasureCmd, r: &Resolver) -> Result<Report, CliError> {
    let Solved { result, closed_form } = solve(c, r)?;
    let mut table = Table::new(vec!["k", "s_k", "wp_k"]);
    let s = result.bound.components();
    for (i, o) in result.per_k.iter().enumerate() {
        table.rows.push(vec![Cell::Int(o.k), Cell::Num(s.get(i).copied().unwrap_or(0.0)), Cell::Num(o.wp_k)]);
    }
    let mut doc = json!({
        "s": result.bound,
        "wp": result.per_k.iter().map(|o| o.wp_k).collect::<Vec<_>>(),
        "converged": result.converged(),
    });
    if let Some(cf) = closed_form {
        doc["closed_form"] = cf;
    }
    Ok(Report { table, json: Some(doc) })
}

fn strategy(c: &MeasureCmd, r: &Resolver) -> Result<Report, CliError> {
    let Solved { result, closed_form } = solve(c, r)?;
    let mut table = Table::new(vec!["k", "wp_k", "theta_prime", "phi_prime"]);
    for o in &result.per_k {
        let (t, p) = match o.measurement.bloch_angles() {
            Some((t, p)) => (Cell::Num(t), Cell::Num(p)),
            None => (Cell::Empty, Cell::Empty),
        };
        table.rows.push(vec![Cell::Int(o.k), Cell::Num(o.wp_k), t, p]);
    }
    let mut doc = serde_json::to_value(&result).map_err(CliError::io)?;
    if let Some(cf) = closed_form {
        doc["closed_form"] = cf;
    }
    Ok(Report { table, json: Some(doc) })
}

/// Bounds for the pair `X = σ(θ, 0)`, `Y = σ(θ, π)` on `|ψ_ξ⟩`.
fn pair_bounds(
    rho: &DensityMatrix,
    theta: f64,
    search: &cmur_core::cmur::SearchConfig,
) -> Result<(ProjectiveMeasurement, ProjectiveMeasurement, UncertaintyVec, UncertaintyVec), CliError> {
    let x = ProjectiveMeasurement::qubit(theta, 0.0)?;
    let y = ProjectiveMeasurement::qubit(theta, std::f64::consts::PI)?;
    let sx = conditional_bound(rho, &x, search)?.bound;
    let sy = conditional_bound(rho, &y, search)?.bound;
    Ok((x, y, sx, sy))
}

fn grid_points(xis: &[f64], thetas: &[f64]) -> Result<Vec<(f64, DensityMatrix, f64)>, CliError> {
    let mut out = Vec::with_capacity(xis.len() * thetas.len());
    for &xi in xis {
        let rho = psi_xi(xi)?;
        out.extend(thetas.iter().map(|&t| (xi, rho.clone(), t)));
    }
    Ok(out)
}

fn figure1(c: &Figure1Cmd, r: &Resolver) -> Result<Report, CliError> {
    let search = r.search(&c.search)?;
    let (thetas, xis) = r.theta_grid(&c.grid, 7, &FIGURE1_XIS)?;
    let method = match c.single_samples.or(r.file.single_samples) {
        Some(samples) => SingleParticleMethod::Numeric { samples, seed: search.seed },
        None => SingleParticleMethod::QubitClosedForm,
    };
    let blocks: Vec<Vec<Vec<Cell>>> = grid_points(&xis, &thetas)?
        .par_iter()
        .map(|(xi, rho, theta)| -> Result<Vec<Vec<Cell>>, CliError> {
            let (x, y, sx, sy) = pair_bounds(rho, *theta, &search)?;
            let single = single_particle_bound(&x, &y, method)?.vec;
            let report = violation_report(&combine(&sx, &sy, Combiner::DirectSum), &single)?;
            let (mem, one) = report.lorenz_pair;
            Ok(mem
                .points
                .iter()
                .zip(&one.points)
                .map(|(&(k, m), &(_, s))| vec![Cell::Num(*xi), Cell::Num(*theta), Cell::Int(k), Cell::Num(m), Cell::Num(s)])
                .collect())
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(vec!["xi", "theta", "k", "cum_mem", "cum_single"]);
    table.rows = blocks.into_iter().flatten().collect();
    Ok(Report { table, json: None })
}

fn figure2(c: &Figure2Cmd, r: &Resolver) -> Result<Report, CliError> {
    let search = r.search(&c.search)?;
    let (thetas, xis) = r.theta_grid(&c.grid, 50, &FIGURE2_XIS)?;
    let rows: Vec<Vec<Cell>> = grid_points(&xis, &thetas)?
        .par_iter()
        .map(|(xi, rho, theta)| -> Result<Vec<Cell>, CliError> {
            let (x, y, sx, sy) = pair_bounds(rho, *theta, &search)?;
            let e = entropy_report(rho, &x, &y, &sx, &sy)?;
            Ok(vec![Cell::Num(*theta), Cell::Num(*xi), Cell::Num(e.h_sum), Cell::Num(e.cmur_lb), Cell::Num(e.berta_lb)])
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(vec!["theta", "xi", "h_sum", "cmur_lb", "berta_lb"]);
    table.rows = rows;
    Ok(Report { table, json: None })
}

fn figure3(c: &Figure3Cmd, r: &Resolver) -> Result<Report, CliError> {
    let xi_steps = r.steps(c.xi_steps.or(r.file.xi_steps).unwrap_or(64), "xi_steps")?;
    let p_steps = r.steps(c.p_steps.or(r.file.p_steps).unwrap_or(64), "p_steps")?;
    let mut table = Table::new(vec!["xi", "p", "rg_value", "v_two", "v_three", "v_inf"]);
    table.rows = region_scan(xi_steps, p_steps)?
        .into_iter()
        .map(|row| {
            vec![
                Cell::Num(row.xi),
                Cell::Num(row.p),
                Cell::Num(row.rg_value),
                Cell::Bool(row.v_two),
                Cell::Bool(row.v_three),
                Cell::Bool(row.v_inf),
            ]
        })
        .collect();
    Ok(Report { table, json: None })
}

fn steer(c: &SteerCmd, r: &Resolver) -> Result<Report, CliError> {
    let seed = r.file.seed.unwrap_or(0);
    let (rho, family) = r.state(&c.state, seed)?;
    let verdict = match family {
        Some((StateFamily::RhoXi, params)) => rho_xi_verdict(params.xi, params.p)?,
        _ => steering_witness(&rho)?,
    };
    let hemisphere = match c.hemisphere_points.or(r.file.hemisphere_points) {
        Some(m) => Some(hemisphere_functional(&rho, m, HemisphereSampler::Fibonacci)?),
        None => None,
    };
    let opt_bool = |b: Option<bool>| b.map_or(Cell::Empty, Cell::Bool);
    let mut table = Table::new(vec![
        "rg_value",
        "infinite_violated",
        "two_setting_violated",
        "three_setting_violated",
        "tau1",
        "tau2",
        "tau3",
        "finite_sum_avg",
        "analytic_avg",
    ]);
    table.rows.push(vec![
        Cell::Num(verdict.rg_value),
        Cell::Bool(verdict.infinite_violated),
        opt_bool(verdict.two_setting_violated),
        opt_bool(verdict.three_setting_violated),
        Cell::Num(verdict.taus[0]),
        Cell::Num(verdict.taus[1]),
        Cell::Num(verdict.taus[2]),
        hemisphere.map_or(Cell::Empty, |h| Cell::Num(h.finite_sum_avg)),
        hemisphere.map_or(Cell::Empty, |h| Cell::Num(h.analytic_avg)),
    ]);
    let mut doc = json!({ "verdict": verdict, "steerable": verdict.infinite_violated });
    if let Some(h) = hemisphere {
        doc["hemisphere"] = json!(h);
    }
    Ok(Report { table, json: Some(doc) })
}

fn join(c: &JoinCmd, r: &Resolver) -> Result<Report, CliError> {
    let raw: Vec<Vec<f64>> = match (&c.vecs, &r.file.vecs) {
        (Some(s), _) => serde_json::from_str(&format!("[{s}]")).map_err(|e| CliError::Config(format!("--vecs: {e}")))?,
        (None, Some(v)) => v.clone(),
        (None, None) => return Err(CliError::Config("no vectors given: pass --vecs".into())),
    };
    let vecs = raw.into_iter().map(UncertaintyVec::new).collect::<Result<Vec<_>, _>>()?;
    let j = lattice_join(&vecs)?;
    let mut table = Table::new(vec!["k", "component"]);
    table.rows = j.components().iter().enumerate().map(|(i, &v)| vec![Cell::Int(i + 1), Cell::Num(v)]).collect();
    Ok(Report { table, json: Some(json!({ "join": j })) })
}
