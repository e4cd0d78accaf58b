//! Numerical differentiation: Richardson-extrapolated central differences,
//! polynomial extrapolation to zero, and one-sided Taylor fits that admit
//! `x^k ln x` terms.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiffConfig<T> {
    /// Initial step as a fraction of the differentiation variable.
    pub rel_step: T,
    /// Number of step halvings in the Richardson tableau.
    pub richardson_levels: usize,
}

impl<T: Real> Default for DiffConfig<T> {
    fn default() -> Self {
        Self {
            rel_step: lit!(T, 1e-3),
            richardson_levels: 3,
        }
    }
}

impl<T: Real> DiffConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_step > T::zero()) || self.richardson_levels == 0 {
            return Err(crate::error::domain(
                "DiffConfig",
                "rel_step must be positive and richardson_levels >= 1",
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Derivative<T> {
    pub value: T,
    pub abs_err: T,
    /// Largest step actually used.
    pub step: T,
}

/// Central-difference derivative of `f` at `x` with initial step `h`,
/// refined by `levels` halvings and Richardson-extrapolated (even error
/// expansion). The error estimate is the difference between the two most
/// refined diagonal entries of the tableau.
pub fn central_richardson<T, F>(mut f: F, x: T, h: T, levels: usize) -> Result<Derivative<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let levels = levels.max(1);
    let two = lit!(T, 2.0);
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(levels);
    let mut step = h;
    for i in 0..levels {
        let d = (f(x + step)? - f(x - step)?) / (two * step);
        let mut row = Vec::with_capacity(i + 1);
        row.push(d);
        let mut factor = T::one();
        for j in 1..=i {
            factor = factor * lit!(T, 4.0);
            let prev = &rows[i - 1];
            let v = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - T::one());
            row.push(v);
        }
        rows.push(row);
        step = step / two;
    }
    let last = rows.last().expect("at least one level");
    let value = *last.last().expect("non-empty row");
    let abs_err = if rows.len() > 1 {
        let prev = &rows[rows.len() - 2];
        (value - *prev.last().expect("non-empty row")).abs()
    } else {
        T::epsilon() * value.abs()
    };
    Ok(Derivative {
        value,
        abs_err,
        step: h,
    })
}

/// Chooses a central-difference step around `x` that stays strictly inside
/// above `lower` and does not straddle any of `joins`.
pub fn bounded_step<T: Real>(variable: &'static str, x: T, h: T, lower: T, joins: &[T]) -> Result<T> {
    let mut step = h;
    let half = lit!(T, 0.5);
    if x - step <= lower {
        step = half * (x - lower);
    }
    for &j in joins {
        let d = (x - j).abs();
        if d > T::zero() && d < step {
            step = half * d;
        }
    }
    if !(step > T::zero()) || x - step <= lower || step < T::epsilon() * x.abs() * lit!(T, 1e3) {
        return Err(Error::StepCollapse {
            variable,
            at: x.as_f64(),
            step: step.as_f64(),
        });
    }
    Ok(step)
}

/// Polynomial (Neville) extrapolation of samples `(h_i, v_i)` to `h = 0`.
/// Returns the extrapolated value and the change contributed by the last
/// sample as an error estimate.
pub fn extrapolate_to_zero<T: Real>(samples: &[(T, T)]) -> (T, T) {
    assert!(!samples.is_empty(), "extrapolation needs at least one sample");
    let n = samples.len();
    let mut p: Vec<T> = samples.iter().map(|s| s.1).collect();
    let mut last_change = T::zero();
    for m in 1..n {
        for i in 0..n - m {
            let hi = samples[i].0;
            let him = samples[i + m].0;
            let new = (him * p[i] - hi * p[i + 1]) / (him - hi);
            if i == 0 {
                last_change = new - p[0];
            }
            p[i] = new;
        }
    }
    (p[0], last_change.abs())
}

/// Basis function of a one-sided Taylor fit about zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaylorTerm {
    /// `x^k`
    Power(u32),
    /// `x^k ln x` (taken as zero at `x = 0`)
    PowerLog(u32),
}

/// Least-squares fit of `f(x) ≈ Σ c_j φ_j(x)` on the grid `x_i = i·h`,
/// `i = 0..n_points`, returning the coefficients in the order of `terms`,
/// expressed in the unscaled variable `x`.
///
/// Admitting `x^k ln x` terms lets the fit recover the regular Taylor
/// coefficients of functions that are only finitely smooth at the origin.
pub fn fit_taylor_one_sided<T, F>(mut f: F, h: T, n_points: usize, terms: &[TaylorTerm]) -> Result<Vec<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let m = terms.len();
    if n_points < m || m == 0 {
        return Err(crate::error::domain(
            "fit_taylor_one_sided",
            "need at least as many points as basis terms",
        ));
    }
    // Fit in s = x / h so that the design matrix stays O(1)..O(n^k).
    let mut a = vec![vec![T::zero(); m]; n_points];
    let mut b = vec![T::zero(); n_points];
    for i in 0..n_points {
        let s = T::from_count(i);
        for (j, term) in terms.iter().enumerate() {
            a[i][j] = match *term {
                TaylorTerm::Power(k) => s.powi(k as i32),
                TaylorTerm::PowerLog(k) => {
                    if i == 0 {
                        T::zero()
                    } else {
                        s.powi(k as i32) * s.ln()
                    }
                }
            };
        }
        b[i] = f(T::from_count(i) * h)?;
    }
    let scaled = least_squares(a, b)?;

    // s^k ln s = h^-k (x^k ln x - ln h · x^k)
    let ln_h = h.ln();
    let mut out = vec![T::zero(); m];
    for (j, term) in terms.iter().enumerate() {
        match *term {
            TaylorTerm::Power(k) => out[j] = out[j] + scaled[j] / h.powi(k as i32),
            TaylorTerm::PowerLog(k) => {
                let hk = h.powi(k as i32);
                out[j] = out[j] + scaled[j] / hk;
                if let Some(p) = terms.iter().position(|t| *t == TaylorTerm::Power(k)) {
                    out[p] = out[p] - scaled[j] * ln_h / hk;
                } else {
                    return Err(crate::error::domain(
                        "fit_taylor_one_sided",
                        "x^k ln x term requires the matching x^k term",
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Householder QR least squares with column equilibration.
fn least_squares<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>> {
    let rows = a.len();
    let cols = a[0].len();
    let mut col_scale = vec![T::one(); cols];
    for (j, scale) in col_scale.iter_mut().enumerate() {
        let norm = a.iter().map(|r| r[j] * r[j]).fold(T::zero(), |s, v| s + v).sqrt();
        if norm > T::zero() {
            *scale = norm;
            for r in a.iter_mut() {
                r[j] = r[j] / norm;
            }
        }
    }
    for k in 0..cols {
        let norm = (k..rows)
            .map(|i| a[i][k] * a[i][k])
            .fold(T::zero(), |s, v| s + v)
            .sqrt();
        if norm == T::zero() {
            return Err(crate::error::domain("least_squares", "rank-deficient design matrix"));
        }
        let alpha = if a[k][k] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = (k..rows).map(|i| a[i][k]).collect();
        v[0] = v[0] - alpha;
        let vnorm2 = v.iter().fold(T::zero(), |s, &x| s + x * x);
        if vnorm2 == T::zero() {
            continue;
        }
        for j in k..cols {
            let dot = (k..rows).fold(T::zero(), |s, i| s + v[i - k] * a[i][j]);
            let f = lit!(T, 2.0) * dot / vnorm2;
            for i in k..rows {
                a[i][j] = a[i][j] - f * v[i - k];
            }
        }
        let dot = (k..rows).fold(T::zero(), |s, i| s + v[i - k] * b[i]);
        let f = lit!(T, 2.0) * dot / vnorm2;
        for i in k..rows {
            b[i] = b[i] - f * v[i - k];
        }
    }
    let mut x = vec![T::zero(); cols];
    for k in (0..cols).rev() {
        let s = ((k + 1)..cols).fold(b[k], |s, j| s - a[k][j] * x[j]);
        x[k] = s / a[k][k];
    }
    for (xj, s) in x.iter_mut().zip(col_scale) {
        *xj = *xj / s;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn richardson_derivative_of_exp() {
        let d = central_richardson(|x: f64| Ok(x.exp()), 1.0, 0.1, 4).unwrap();
        assert_relative_eq!(d.value, 1f64.exp(), max_relative = 1e-12);
        assert!(d.abs_err < 1e-9);
    }

    #[test]
    fn neville_recovers_quadratic_limit() {
        let g = |h: f64| 2.5 - 0.3 * h + 4.0 * h * h;
        let samples: Vec<(f64, f64)> = [0.4, 0.2, 0.1].iter().map(|&h| (h, g(h))).collect();
        let (v, _) = extrapolate_to_zero(&samples);
        assert_relative_eq!(v, 2.5, max_relative = 1e-13);
    }

    #[test]
    fn bounded_step_avoids_joins() {
        let h = bounded_step("T", 8.0, 0.5, 0.0, &[8.25]).unwrap();
        assert!(h < 0.25 && h > 0.0);
        assert!(bounded_step("T", 1e-30, 1.0, 0.0, &[]).is_ok());
        assert!(matches!(
            bounded_step("a", 1.0, 1.0, 1.0, &[]),
            Err(Error::StepCollapse { .. })
        ));
    }

    #[test]
    fn taylor_fit_with_log_term() {
        // f = 1 + 2x^2 - x^3 + 5 x^4 ln x + 0.7 x^4
        let f = |x: f64| {
            let l = if x > 0.0 { x.powi(4) * x.ln() } else { 0.0 };
            Ok(1.0 + 2.0 * x * x - x.powi(3) + 5.0 * l + 0.7 * x.powi(4))
        };
        let terms = [
            TaylorTerm::Power(0),
            TaylorTerm::Power(1),
            TaylorTerm::Power(2),
            TaylorTerm::Power(3),
            TaylorTerm::PowerLog(4),
            TaylorTerm::Power(4),
        ];
        let c = fit_taylor_one_sided(f, 0.01, 12, &terms).unwrap();
        assert_relative_eq!(c[0], 1.0, max_relative = 1e-12);
        assert!(c[1].abs() < 1e-9);
        assert_relative_eq!(c[2], 2.0, max_relative = 1e-8);
        assert_relative_eq!(c[3], -1.0, max_relative = 1e-6);
        assert_relative_eq!(c[4], 5.0, max_relative = 1e-5);
    }
}
