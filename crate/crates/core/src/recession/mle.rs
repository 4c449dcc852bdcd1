use super::QuarterlySeries;
use crate::error::{Error, Result};

/// Maximum-likelihood fit of `p_t = (1 + α₀ + α₁Y_{t−1})/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1LogitFit {
    pub alpha0: f64,
    pub alpha1: f64,
    pub log_likelihood: f64,
    pub converged: bool,
    /// Signs `(s₀, s₁)` of the face `s₀α₀ + s₁α₁ = 1` approached when the
    /// likelihood increases towards the boundary.
    pub boundary: Option<(f64, f64)>,
    /// Best point of the coarse grid, `(α₀, α₁, log-likelihood)`.
    pub grid_best: (f64, f64, f64),
}

fn feasible(a0: f64, a1: f64) -> bool {
    a0.abs() + a1.abs() < 1.0
}

/// Transition counts `(n₊₊, n₊₋, n₋₊, n₋₋)` indexed by (previous, current).
fn transitions(values: &[f64]) -> [f64; 4] {
    let mut c = [0.0; 4];
    for w in values.windows(2) {
        let idx = 2 * usize::from(w[0] < 0.0) + usize::from(w[1] < 0.0);
        c[idx] += 1.0;
    }
    c
}

fn loglik_counts(c: &[f64; 4], a0: f64, a1: f64) -> f64 {
    let p_plus = (1.0 + a0 + a1) / 2.0;
    let p_minus = (1.0 + a0 - a1) / 2.0;
    let term = |n: f64, p: f64| if n == 0.0 { 0.0 } else { n * p.ln() };
    term(c[0], p_plus) + term(c[1], 1.0 - p_plus) + term(c[2], p_minus) + term(c[3], 1.0 - p_minus)
}

/// `Σ_{t≥2} [1{y_t=1}·log p_t + 1{y_t=−1}·log(1−p_t)]`.
pub fn loglik_ar1(series: &QuarterlySeries, alpha0: f64, alpha1: f64) -> Result<f64> {
    if !feasible(alpha0, alpha1) {
        return Err(Error::spec(format!("|α₀| + |α₁| = {} is not below 1", alpha0.abs() + alpha1.abs())));
    }
    Ok(loglik_counts(&transitions(series.values()), alpha0, alpha1))
}

const GRID_STEP: f64 = 0.01;
const SIMPLEX_TOL: f64 = 1e-6;
const MAX_ITER: usize = 10_000;
const BOUNDARY_GAP: f64 = 1e-4;

/// Coarse grid with step 0.01 over `|α₀| + |α₁| < 1`, then a Nelder–Mead
/// simplex started at the best grid point; infeasible vertices score −∞ so
/// the simplex stays inside the region.
pub fn fit_mle(series: &QuarterlySeries) -> Result<Ar1LogitFit> {
    if series.len() < 10 {
        return Err(Error::TooShort { needed: 9, got: series.len() });
    }
    let c = transitions(series.values());
    let f = |p: [f64; 2]| if feasible(p[0], p[1]) { loglik_counts(&c, p[0], p[1]) } else { f64::NEG_INFINITY };

    let steps = (1.0 / GRID_STEP).round() as i32;
    let mut grid_best = (0.0, 0.0, f([0.0, 0.0]));
    for i in -steps..=steps {
        for j in -steps..=steps {
            if i.abs() + j.abs() >= steps {
                continue;
            }
            let p = [f64::from(i) * GRID_STEP, f64::from(j) * GRID_STEP];
            let v = f(p);
            if v > grid_best.2 {
                grid_best = (p[0], p[1], v);
            }
        }
    }

    let (best, value, diameter) = nelder_mead(&f, [grid_best.0, grid_best.1], GRID_STEP);
    let gap = 1.0 - best[0].abs() - best[1].abs();
    let boundary = (gap < BOUNDARY_GAP).then(|| (sign(best[0]), sign(best[1])));
    Ok(Ar1LogitFit {
        alpha0: best[0],
        alpha1: best[1],
        log_likelihood: value,
        converged: diameter < SIMPLEX_TOL && boundary.is_none(),
        boundary,
        grid_best,
    })
}

fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Maximises `f` in two dimensions. Returns the best vertex, its value and
/// the final simplex diameter.
fn nelder_mead<F: Fn([f64; 2]) -> f64>(f: &F, start: [f64; 2], step: f64) -> ([f64; 2], f64, f64) {
    let mut s: Vec<([f64; 2], f64)> = [start, [start[0] + step, start[1]], [start[0], start[1] + step]]
        .into_iter()
        .map(|p| (p, f(p)))
        .collect();
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    let diameter = |s: &[([f64; 2], f64)]| {
        let d = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
        d(s[0].0, s[1].0).max(d(s[0].0, s[2].0)).max(d(s[1].0, s[2].0))
    };
    for _ in 0..MAX_ITER {
        s.sort_by(|a, b| b.1.total_cmp(&a.1));
        if diameter(&s) < SIMPLEX_TOL {
            break;
        }
        let centroid = lerp(s[0].0, s[1].0, 0.5);
        let worst = s[2];
        let reflected = lerp(worst.0, centroid, 2.0);
        let fr = f(reflected);
        if fr > s[0].1 {
            let expanded = lerp(worst.0, centroid, 3.0);
            let fe = f(expanded);
            s[2] = if fe > fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr > s[1].1 {
            s[2] = (reflected, fr);
        } else {
            let contracted = if fr > worst.1 { lerp(worst.0, centroid, 1.5) } else { lerp(worst.0, centroid, 0.5) };
            let fc = f(contracted);
            if fc > worst.1.max(fr) {
                s[2] = (contracted, fc);
            } else {
                for i in 1..3 {
                    let p = lerp(s[0].0, s[i].0, 0.5);
                    s[i] = (p, f(p));
                }
            }
        }
    }
    s.sort_by(|a, b| b.1.total_cmp(&a.1));
    (s[0].0, s[0].1, diameter(&s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process_sim::{simulate_binary, BinaryDgpSpec};
    use crate::recession::Quarter;

    fn series(values: Vec<f64>) -> QuarterlySeries {
        QuarterlySeries::from_values(Quarter::new(1900, 1).unwrap(), values).unwrap()
    }

    #[test]
    fn flat_likelihood() {
        let s = series(vec![1.0, -1.0, -1.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -1.0, 1.0]);
        let ll = loglik_ar1(&s, 0.0, 0.0).unwrap();
        assert!((ll + 10.0 * 2f64.ln()).abs() < 1e-12);
        assert!(loglik_ar1(&s, 0.5, 0.5).is_err());
    }

    #[test]
    fn matches_closed_form_on_dgp1() {
        let traj = simulate_binary(&BinaryDgpSpec::dgp1(), 100_000, 21, 500).unwrap();
        let s = series(traj.labels().to_vec());
        let fit = fit_mle(&s).unwrap();
        assert!(fit.converged);
        let c = transitions(s.values());
        let p_plus = c[0] / (c[0] + c[1]);
        let p_minus = c[2] / (c[2] + c[3]);
        assert!((fit.alpha0 - (p_plus + p_minus - 1.0)).abs() < 1e-5);
        assert!((fit.alpha1 - (p_plus - p_minus)).abs() < 1e-5);
        assert!((fit.alpha0 + 0.25).abs() < 0.02 && (fit.alpha1 - 0.6).abs() < 0.02);
        assert!(fit.log_likelihood >= fit.grid_best.2);
        let truth = loglik_ar1(&s, -0.25, 0.6).unwrap();
        assert!(fit.log_likelihood - truth < 1.0 && fit.log_likelihood >= truth, "{}", fit.log_likelihood - truth);
    }

    #[test]
    fn alternating_goes_to_boundary() {
        let s = series((0..40).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect());
        let fit = fit_mle(&s).unwrap();
        assert!(fit.alpha1 < -0.9 && fit.alpha0.abs() < 0.05);
        assert!(fit.log_likelihood > loglik_ar1(&s, 0.0, 0.0).unwrap());
        assert!(!fit.converged && fit.boundary.is_some());
    }

    #[test]
    fn constant_series_flags_boundary() {
        let fit = fit_mle(&series(vec![-1.0; 30])).unwrap();
        assert!(!fit.converged);
        assert!(fit.boundary.is_some());
        assert!(fit.alpha0 - fit.alpha1 < -0.999);
    }

    #[test]
    fn too_short() {
        assert!(fit_mle(&series(vec![1.0; 5])).is_err());
    }
}
