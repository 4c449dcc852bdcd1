use super::GeometricEnvelope;

/// A nonnegative, nonincreasing sequence `j ↦ ε_j`, `j ≥ 0`.
pub trait EpsSequence {
    fn eps(&self, j: usize) -> f64;

    /// Upper bound on `Σ_{j>J} (j+1)^k ε_j`, when one is known.
    fn tail_certificate(&self, _k: u32, _j_max: usize) -> Option<f64> {
        None
    }
}

/// `ε_j = c·r^j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricEps {
    pub c: f64,
    pub r: f64,
}

impl EpsSequence for GeometricEps {
    fn eps(&self, j: usize) -> f64 {
        self.c * self.r.powi(j as i32)
    }

    /// The ratio of consecutive terms past `J` is at most
    /// `q = ((J+3)/(J+2))^k·r`, so the tail is below `f(J+1)/(1−q)`.
    fn tail_certificate(&self, k: u32, j_max: usize) -> Option<f64> {
        let jn = j_max as f64;
        let q = ((jn + 3.0) / (jn + 2.0)).powi(k as i32) * self.r;
        if q >= 1.0 {
            return None;
        }
        Some((jn + 2.0).powi(k as i32) * self.eps(j_max + 1) / (1.0 - q))
    }
}

/// `ε_j = c·exp(−b√j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StretchedExpEps {
    pub c: f64,
    pub b: f64,
}

impl From<GeometricEnvelope> for StretchedExpEps {
    fn from(e: GeometricEnvelope) -> Self {
        StretchedExpEps { c: e.c, b: e.b }
    }
}

/// `log Γ(m, z)` for integer `m ≥ 1`, from
/// `Γ(m, z) = (m−1)!·e^{−z}·Σ_{i<m} z^i/i!`.
fn ln_upper_gamma_int(m: u32, z: f64) -> f64 {
    let ln_fact = |i: u32| (1..=i).map(|x| f64::from(x).ln()).sum::<f64>();
    let terms: Vec<f64> = (0..m).map(|i| f64::from(i) * z.ln() - ln_fact(i)).collect();
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln();
    ln_fact(m - 1) - z + lse
}

impl EpsSequence for StretchedExpEps {
    fn eps(&self, j: usize) -> f64 {
        self.c * (-self.b * (j as f64).sqrt()).exp()
    }

    /// With `(j+1)^k ≤ (2j)^k` and `x^k e^{−b√x}` decreasing for
    /// `x ≥ (2k/b)²`, the tail is below
    /// `2^k·c·∫_J^∞ x^k e^{−b√x} dx = 2^{k+1}·c·Γ(2k+2, b√J)/b^{2k+2}`.
    fn tail_certificate(&self, k: u32, j_max: usize) -> Option<f64> {
        let jn = j_max as f64;
        if j_max == 0 || jn < (2.0 * f64::from(k) / self.b).powi(2) {
            return None;
        }
        let m = 2 * k + 2;
        let ln = f64::from(k + 1) * 2f64.ln() + self.c.ln() + ln_upper_gamma_int(m, self.b * jn.sqrt())
            - f64::from(m) * self.b.ln();
        Some(ln.exp())
    }
}

/// Any closure, with no tail certificate.
pub struct FnEps<F: Fn(usize) -> f64>(pub F);

impl<F: Fn(usize) -> f64> EpsSequence for FnEps<F> {
    fn eps(&self, j: usize) -> f64 {
        (self.0)(j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum A3Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl A3Verdict {
    pub fn name(self) -> &'static str {
        match self {
            A3Verdict::Holds => "holds",
            A3Verdict::Fails => "fails",
            A3Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct A3Row {
    pub k: u32,
    pub partial_sum: f64,
    pub tail_bound: Option<f64>,
    pub rhs: f64,
    pub verdict: A3Verdict,
    /// The last summed term is not negligible against the partial sum.
    pub diverging: bool,
}

/// Per-`k` comparison of `Σ_{j≥0}(j+1)^k ε_j` with `L₁L₂^k(k!)^μ`. A pass
/// means "verified up to `k_max`", never a proof for all `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct A3Report {
    pub l1: f64,
    pub l2: f64,
    pub mu: f64,
    pub j_max: usize,
    pub rows: Vec<A3Row>,
}

impl A3Report {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.verdict == A3Verdict::Holds)
    }

    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> crate::Result<()> {
        writeln!(out, "k,partial_sum,tail_bound,rhs,verdict,diverging")?;
        for r in &self.rows {
            let tail = r.tail_bound.map_or_else(|| "NaN".to_string(), |t| format!("{t:?}"));
            writeln!(
                out,
                "{},{:?},{},{:?},{},{}",
                r.k,
                r.partial_sum,
                tail,
                r.rhs,
                r.verdict.name(),
                r.diverging
            )?;
        }
        Ok(())
    }
}

const REL_TOL: f64 = 1e-12;

fn ln_factorial(k: u32) -> f64 {
    (1..=k).map(|x| f64::from(x).ln()).sum()
}

fn moment_sums<E: EpsSequence + ?Sized>(eps: &E, k_max: u32, j_max: usize) -> Vec<(f64, Option<f64>, bool)> {
    let values: Vec<f64> = (0..=j_max).map(|j| eps.eps(j)).collect();
    (0..=k_max)
        .map(|k| {
            let terms = values.iter().enumerate().map(|(j, e)| ((j + 1) as f64).powi(k as i32) * e);
            // Summing from the small end keeps rounding low.
            let all: Vec<f64> = terms.collect();
            let partial: f64 = all.iter().rev().sum();
            let last = all[j_max] * (j_max + 1) as f64;
            (partial, eps.tail_certificate(k, j_max), last > 1e-3 * partial)
        })
        .collect()
}

pub fn check_a3<E: EpsSequence + ?Sized>(
    eps: &E,
    l1: f64,
    l2: f64,
    mu: f64,
    k_max: u32,
    j_max: usize,
) -> A3Report {
    let rows = moment_sums(eps, k_max, j_max)
        .into_iter()
        .enumerate()
        .map(|(k, (partial_sum, tail_bound, diverging))| {
            let k = k as u32;
            let rhs = l1 * l2.powi(k as i32) * (mu * ln_factorial(k)).exp();
            let limit = rhs * (1.0 + REL_TOL);
            let verdict = if partial_sum > limit {
                A3Verdict::Fails
            } else if tail_bound.is_some_and(|t| partial_sum + t <= limit) && !diverging {
                A3Verdict::Holds
            } else {
                A3Verdict::Inconclusive
            };
            A3Row { k, partial_sum, tail_bound, rhs, verdict, diverging }
        })
        .collect();
    A3Report { l1, l2, mu, j_max, rows }
}

/// Least squares of `log S_k − μ·log k!` on `k` over `k = 0..=k_max`, where
/// `S_k` is the partial sum plus tail bound; both fitted constants are then
/// inflated by 10%.
pub fn fit_l1_l2<E: EpsSequence + ?Sized>(eps: &E, mu: f64, k_max: u32, j_max: usize) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = moment_sums(eps, k_max, j_max)
        .into_iter()
        .enumerate()
        .map(|(k, (p, t, _))| (k as f64, (p + t.unwrap_or(0.0)).ln() - mu * ln_factorial(k as u32)))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    (1.1 * intercept.exp(), 1.1 * slope.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weak_dependence::CoefficientSequence;

    #[test]
    fn geometric_equality_case() {
        let e = GeometricEps { c: 1.0, r: 0.5 };
        let r = check_a3(&e, 2.0, 1.0, 0.0, 0, 200);
        assert_eq!(r.rows[0].verdict, A3Verdict::Holds);
        assert!((r.rows[0].partial_sum + r.rows[0].tail_bound.unwrap() - 2.0).abs() < 1e-14);
        let tight = check_a3(&e, 1.99, 1.0, 0.0, 0, 200);
        assert_eq!(tight.rows[0].verdict, A3Verdict::Fails);
    }

    #[test]
    fn geometric_tail_is_an_upper_bound() {
        let e = GeometricEps { c: 0.7, r: 0.8 };
        for k in 0..6u32 {
            let t = e.tail_certificate(k, 60).unwrap();
            let exact: f64 = (61..5000).map(|j| ((j + 1) as f64).powi(k as i32) * e.eps(j)).sum();
            assert!(t >= exact * (1.0 - 1e-12) && t < 3.0 * exact, "k={k}: {t} vs {exact}");
        }
    }

    #[test]
    fn stretched_tail_is_an_upper_bound() {
        let e = StretchedExpEps { c: 2.0, b: 0.9 };
        for k in 0..5u32 {
            let j = 500;
            let t = e.tail_certificate(k, j).unwrap();
            let exact: f64 = (j + 1..400_000).map(|i| ((i + 1) as f64).powi(k as i32) * e.eps(i)).sum();
            assert!(t >= exact, "k={k}: {t} vs {exact}");
        }
        assert!(e.tail_certificate(8, 10).is_none());
    }

    #[test]
    fn upper_gamma_matches_small_cases() {
        // Γ(1, z) = e^{−z}; Γ(2, z) = (1 + z)e^{−z}.
        assert!((ln_upper_gamma_int(1, 3.0) + 3.0).abs() < 1e-14);
        assert!((ln_upper_gamma_int(2, 3.0) - (4f64.ln() - 3.0)).abs() < 1e-14);
    }

    #[test]
    fn harmonic_is_never_verified() {
        let e = FnEps(|j| 1.0 / (j as f64 + 1.0));
        for j_max in [100, 1000, 10_000] {
            let r = check_a3(&e, 5.0, 1.0, 0.0, 0, j_max);
            assert_ne!(r.rows[0].verdict, A3Verdict::Holds);
            assert!(r.rows[0].diverging);
        }
        let r = check_a3(&e, 5.0, 1.0, 0.0, 0, 10_000);
        assert_eq!(r.rows[0].verdict, A3Verdict::Fails);
    }

    #[test]
    fn fitted_envelope_passes() {
        let s = CoefficientSequence::geometric(0.3, 0.5).unwrap();
        let env: StretchedExpEps = GeometricEnvelope::calibrate(&s, 200).unwrap().into();
        let (l1, l2) = fit_l1_l2(&env, 2.0, 8, 20_000);
        let r = check_a3(&env, l1, l2, 2.0, 8, 20_000);
        assert!(r.all_hold(), "{r:?}");
    }

    #[test]
    fn verdicts_monotone_in_constants() {
        let env = StretchedExpEps { c: 1.0, b: 0.9 };
        let rank = |v: A3Verdict| match v {
            A3Verdict::Fails => 0,
            A3Verdict::Inconclusive => 1,
            A3Verdict::Holds => 2,
        };
        let base = check_a3(&env, 1.0, 3.0, 2.0, 8, 5000);
        for (l1, l2) in [(2.0, 3.0), (1.0, 5.0), (10.0, 10.0)] {
            let big = check_a3(&env, l1, l2, 2.0, 8, 5000);
            for (a, b) in base.rows.iter().zip(&big.rows) {
                assert!(rank(b.verdict) >= rank(a.verdict));
            }
        }
    }
}
