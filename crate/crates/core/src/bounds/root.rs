use crate::error::{Error, Result};

pub const BRACKET_LOW_FACTOR: f64 = 1e-30;
pub const BRACKET_HIGH_FACTOR: f64 = 1.0 - 1e-12;
pub const MAX_ITERATIONS: usize = 200;
pub const ABS_TOLERANCE: f64 = 1e-10;
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// A bisection root of an increasing function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub eps: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Root of an increasing `f` on `(0, 2M)` using the bracket
/// `[10⁻³⁰·2M, 2M(1 − 10⁻¹²)]`. Bisection continues past the absolute
/// tolerance until the residual is below `10⁻⁸` or the bracket collapses.
pub fn bisect_increasing<F: Fn(f64) -> f64>(f: F, two_m: f64, label: &str) -> Result<Root> {
    let mut lo = BRACKET_LOW_FACTOR * two_m;
    let mut hi = BRACKET_HIGH_FACTOR * two_m;
    let (mut flo, mut fhi) = (f(lo), f(hi));
    if !(fhi > 0.0) {
        return Err(Error::Infeasible(format!("{label}: φ(2M) = {fhi:.6e} is not positive")));
    }
    if !(flo < 0.0) {
        return Err(Error::Infeasible(format!("{label}: φ is non-negative at the lower bracket")));
    }
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm < 0.0 {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        if hi - lo < ABS_TOLERANCE && flo.abs().min(fhi.abs()) < RESIDUAL_TOLERANCE {
            break;
        }
    }
    let (eps, residual) = if flo.abs() <= fhi.abs() { (lo, flo) } else { (hi, fhi) };
    Ok(Root { eps, residual, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_square_root() {
        let r = bisect_increasing(|x| x * x - 2.0, 4.0, "t").unwrap();
        assert!((r.eps - 2f64.sqrt()).abs() < 1e-10);
        assert!(r.residual.abs() < 1e-8);
    }

    #[test]
    fn reports_missing_sign_change() {
        assert!(matches!(bisect_increasing(|x| x - 5.0, 2.0, "t"), Err(Error::Infeasible(_))));
        assert!(matches!(bisect_increasing(|x| x + 1.0, 2.0, "t"), Err(Error::Infeasible(_))));
    }

    #[test]
    fn tiny_roots_meet_residual() {
        let r = bisect_increasing(|x| 4.0 * x.ln() + 30.0, 2.0, "t").unwrap();
        assert!(r.residual.abs() < 1e-8);
        assert!((r.eps - (-7.5f64).exp()).abs() < 1e-12);
    }
}
