//! Least-squares fit of the Lorentzian window model to a measured
//! transmission spectrum: deterministic coarse grid search followed by
//! derivative-free simplex refinement.

use crate::error::{Error, Result};
use crate::medium::{LorentzianEitModel, MeasuredSpectrum};

/// Result of a simplex minimization.
#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fmin: f64,
    pub iterations: usize,
    /// Best objective value after each iteration; never increases.
    pub history: Vec<f64>,
}

/// Nelder-Mead with standard coefficients (reflect 1, expand 2, contract
/// 0.5, shrink 0.5). Stops when the simplex's relative parameter spread
/// drops below `tol` or after `max_iter` iterations.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    step: &[f64],
    tol: f64,
    max_iter: usize,
) -> NelderMeadResult {
    let n = x0.len();
    assert_eq!(step.len(), n);
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step[i];
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut history = Vec::new();
    let mut iterations = 0;

    for _ in 0..max_iter {
        // order best..worst
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let reorder_pts: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let reorder_vals: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reorder_pts;
        values = reorder_vals;
        history.push(values[0]);
        iterations += 1;

        // convergence on relative parameter spread
        let mut spread = 0.0_f64;
        for v in &simplex[1..] {
            for d in 0..n {
                spread = spread.max((v[d] - simplex[0][d]).abs() / (1.0 + simplex[0][d].abs()));
            }
        }
        if spread < tol {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..n].iter().map(|v| v[d]).sum::<f64>() / n as f64)
            .collect();
        let worst = values[n];
        let point_at = |coef: f64| -> Vec<f64> {
            (0..n)
                .map(|d| centroid[d] + coef * (simplex[n][d] - centroid[d]))
                .collect()
        };

        let reflected = point_at(-1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = point_at(-2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let contracted = if fr < worst { point_at(-0.5) } else { point_at(0.5) };
            let fc = f(&contracted);
            if fc < worst.min(fr) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                // shrink toward the best vertex
                let best = simplex[0].clone();
                for i in 1..=n {
                    for (v, b) in simplex[i].iter_mut().zip(&best) {
                        *v = b + 0.5 * (*v - b);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    NelderMeadResult {
        x: simplex[best].clone(),
        fmin: values[best],
        iterations,
        history,
    }
}

fn sse(points: &[(f64, f64)], gamma: f64, depth: f64, floor: f64) -> f64 {
    let g2 = gamma * gamma;
    points
        .iter()
        .map(|&(f, t)| {
            let x = f * f / (g2 + f * f);
            let model = (-floor - depth * x).exp();
            let r = model - t;
            r * r
        })
        .sum()
}

/// Fits (gamma, depth, floor) to a measured transmission table by least
/// squares on the transmission (the measured quantity). Deterministic:
/// log-spaced coarse search over gamma in [min spacing, span] and depth in
/// [0.1, 20] with a linear floor sweep over [0, 5], refined by Nelder-Mead
/// in (ln gamma, sqrt depth, sqrt floor) space until the relative parameter
/// change is below 1e-8 or 10^4 iterations.
pub fn fit_lorentzian(
    measured: &MeasuredSpectrum,
    init: Option<LorentzianEitModel>,
) -> Result<(LorentzianEitModel, f64)> {
    let points = measured.points();
    let (t_min, t_max) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |acc, p| {
        (acc.0.min(p.1), acc.1.max(p.1))
    });
    if t_max - t_min < 1e-6 {
        return Err(Error::Unidentifiable(
            "transmission is flat: no window to fit".into(),
        ));
    }

    let span = measured.detuning_max() - measured.detuning_min();
    let min_spacing = points
        .windows(2)
        .map(|w| w[1].0 - w[0].0)
        .fold(f64::INFINITY, f64::min);

    // coarse search
    let mut best = (f64::INFINITY, min_spacing, 1.0, 0.0);
    let n_gamma = 24;
    let n_depth = 16;
    for ig in 0..n_gamma {
        let lg = (min_spacing.ln() * (n_gamma - 1 - ig) as f64 + span.ln() * ig as f64)
            / (n_gamma - 1) as f64;
        let gamma = lg.exp();
        for id in 0..n_depth {
            let ld = (0.1_f64.ln() * (n_depth - 1 - id) as f64 + 20.0_f64.ln() * id as f64)
                / (n_depth - 1) as f64;
            let depth = ld.exp();
            for ib in 0..=10 {
                let floor = 0.5 * ib as f64;
                let e = sse(points, gamma, depth, floor);
                if e < best.0 {
                    best = (e, gamma, depth, floor);
                }
            }
        }
    }
    if let Some(m) = init {
        let e = sse(points, m.gamma_hz(), m.depth(), m.floor());
        if e < best.0 {
            best = (e, m.gamma_hz(), m.depth(), m.floor());
        }
    }

    // refine in a parameterization that keeps the constraints open:
    // gamma = e^z0 > 0, depth = z1^2 >= 0, floor = z2^2 >= 0
    let z0 = vec![best.1.ln(), best.2.sqrt(), best.3.sqrt()];
    let objective = |z: &[f64]| sse(points, z[0].exp(), z[1] * z[1], z[2] * z[2]);
    let result = nelder_mead(objective, &z0, &[0.1, 0.1, 0.1], 1e-8, 10_000);

    let model = LorentzianEitModel::new(
        result.x[0].exp(),
        result.x[1] * result.x[1],
        result.x[2] * result.x[2],
    )?;
    let rms = (result.fmin / points.len() as f64).sqrt();
    Ok((model, rms))
}
