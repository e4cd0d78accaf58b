//! Polylogarithms Li₂, Li₃ on [0, 1], modified Bessel functions K₀..K₃ and ζ(3).

use crate::error::{domain, Result};
use crate::scalar::{lit, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Accuracy<T> {
    pub abs_tol: T,
    pub max_terms: usize,
}

impl<T: Real> Default for Accuracy<T> {
    fn default() -> Self {
        Self {
            abs_tol: lit!(T, 1e-12),
            max_terms: 100_000,
        }
    }
}

impl<T: Real> Accuracy<T> {
    pub fn new(abs_tol: T, max_terms: usize) -> Result<Self> {
        if !(abs_tol > T::zero()) || max_terms == 0 {
            return Err(domain("Accuracy", "abs_tol must be > 0 and max_terms >= 1"));
        }
        Ok(Self { abs_tol, max_terms })
    }
}

/// Apéry's constant ζ(3).
pub fn zeta3<T: Real>() -> T {
    lit!(T, crate::constants::ZETA3)
}

fn zeta2<T: Real>() -> T {
    T::PI() * T::PI() / lit!(T, 6.0)
}

// B_2, B_4, ..., B_30
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// ζ(1 - m) for m ≥ 1 via Bernoulli numbers. Returns `None` past the table.
fn zeta_nonpositive(m: usize) -> Option<f64> {
    // ζ(1 - m) = -B_m / m for m ≥ 2, ζ(0) = -1/2
    match m {
        1 => Some(-0.5),
        m if m % 2 == 1 => Some(0.0),
        m => BERNOULLI_EVEN.get(m / 2 - 1).map(|b| -b / m as f64),
    }
}

/// Li_k(z) for k ∈ {2, 3} and z ∈ [0, 1] with the default accuracy.
pub fn polylog<T: Real>(k: u32, z: T) -> Result<T> {
    polylog_with(k, z, &Accuracy::default())
}

/// Li_k(z) for k ∈ {2, 3} and z ∈ [0, 1].
///
/// Uses the defining series for z ≤ 1/2 and the expansion in μ = ln z
/// (convergent for |μ| < 2π) above.
pub fn polylog_with<T: Real>(k: u32, z: T, acc: &Accuracy<T>) -> Result<T> {
    if k != 2 && k != 3 {
        return Err(domain("polylog", format!("order {k} unsupported (2 or 3)")));
    }
    if !(z >= T::zero() && z <= T::one()) {
        return Err(domain("polylog", format!("argument {z} outside [0, 1]")));
    }
    if z == T::zero() {
        return Ok(T::zero());
    }
    if z == T::one() {
        return Ok(if k == 2 { zeta2() } else { zeta3() });
    }
    if z <= lit!(T, 0.5) {
        polylog_series(k, z, acc)
    } else {
        polylog_log_expansion(k, z.ln(), acc)
    }
}

fn polylog_series<T: Real>(k: u32, z: T, acc: &Accuracy<T>) -> Result<T> {
    let mut sum = T::zero();
    let mut zn = T::one();
    let tail_factor = T::one() / (T::one() - z);
    for n in 1..=acc.max_terms {
        zn = zn * z;
        let term = zn / T::from_count(n).powi(k as i32);
        sum = sum + term;
        if term * z * tail_factor <= acc.abs_tol.min(T::epsilon() * sum) || term == T::zero() {
            return Ok(sum);
        }
    }
    Err(domain(
        "polylog",
        format!("series did not reach tolerance in {} terms", acc.max_terms),
    ))
}

fn polylog_log_expansion<T: Real>(k: u32, mu: T, acc: &Accuracy<T>) -> Result<T> {
    let neg_log = (-mu).ln();
    // Li_k(e^μ) = μ^{k-1}/(k-1)! (H_{k-1} - ln(-μ)) + Σ_{j≠k-1} ζ(k-j) μ^j / j!
    let mut sum = if k == 2 {
        zeta2::<T>() + mu * (T::one() - neg_log)
    } else {
        zeta3::<T>() + zeta2::<T>() * mu + mu * mu * lit!(T, 0.5) * (lit!(T, 1.5) - neg_log)
    };
    let mut power = mu.powi(k as i32 - 1);
    let mut fact = if k == 2 { T::one() } else { lit!(T, 2.0) };
    let start = k as usize;
    for j in start..start + acc.max_terms {
        power = power * mu;
        fact = fact * T::from_count(j);
        let m = j + 1 - k as usize;
        let Some(zv) = zeta_nonpositive(m) else {
            return Err(domain("polylog", "log expansion ran past the Bernoulli table"));
        };
        let term = lit!(T, zv) * power / fact;
        sum = sum + term;
        // terms decay like (μ/2π)^j; stop once a nonzero term is negligible
        if zv != 0.0 && term.abs() <= acc.abs_tol.min(T::epsilon() * sum.abs()) {
            return Ok(sum);
        }
    }
    Err(domain("polylog", "log expansion did not converge"))
}

/// K_n(x) for n ∈ {0, 1, 2, 3} and x > 0 with the default accuracy.
pub fn bessel_k<T: Real>(n: u32, x: T) -> Result<T> {
    bessel_k_with(n, x, &Accuracy::default())
}

/// K_n(x) for n ∈ {0, 1, 2, 3} and x > 0.
///
/// K₀ and K₁ come from Temme's series for x ≤ 2 and Steed's continued
/// fraction above; higher orders follow by upward recurrence, which is
/// stable for K.
pub fn bessel_k_with<T: Real>(n: u32, x: T, acc: &Accuracy<T>) -> Result<T> {
    if n > 3 {
        return Err(domain("bessel_k", format!("order {n} unsupported (0..=3)")));
    }
    if !(x > T::zero()) || !x.is_finite() {
        return Err(domain("bessel_k", format!("argument {x} must be finite and > 0")));
    }
    let (k0, k1) = if x <= lit!(T, 2.0) {
        k01_temme(x, acc.max_terms)?
    } else {
        k01_steed(x, acc.max_terms)?
    };
    let two_over_x = lit!(T, 2.0) / x;
    let k2 = k0 + two_over_x * k1;
    Ok(match n {
        0 => k0,
        1 => k1,
        2 => k2,
        _ => k1 + lit!(T, 2.0) * two_over_x * k2,
    })
}

fn k01_temme<T: Real>(x: T, max_terms: usize) -> Result<(T, T)> {
    let euler = lit!(T, 0.577_215_664_901_532_9);
    let half_x = lit!(T, 0.5) * x;
    let mut ff = -euler - half_x.ln();
    let mut sum = ff;
    let mut p = lit!(T, 0.5);
    let mut q = lit!(T, 0.5);
    let mut c = T::one();
    let d = half_x * half_x;
    let mut sum1 = p;
    for i in 1..=max_terms {
        let fi = T::from_count(i);
        ff = (fi * ff + p + q) / (fi * fi);
        c = c * d / fi;
        p = p / fi;
        q = q / fi;
        let del = c * ff;
        sum = sum + del;
        sum1 = sum1 + c * (p - fi * ff);
        if del.abs() < sum.abs() * T::epsilon() {
            return Ok((sum, sum1 * lit!(T, 2.0) / x));
        }
    }
    Err(domain("bessel_k", "Temme series did not converge"))
}

fn k01_steed<T: Real>(x: T, max_terms: usize) -> Result<(T, T)> {
    let two = lit!(T, 2.0);
    let mut b = two * (T::one() + x);
    let mut d = T::one() / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = T::zero();
    let mut q2 = T::one();
    let a1 = lit!(T, 0.25);
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = T::one() + q * delh;
    for i in 1..=max_terms {
        let fi = T::from_count(i);
        a = a - two * fi;
        c = -a * c / (fi + T::one());
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q = q + c * qnew;
        b = b + two;
        d = T::one() / (b + a * d);
        delh = (b * d - T::one()) * delh;
        h = h + delh;
        let dels = q * delh;
        s = s + dels;
        if (dels / s).abs() < T::epsilon() {
            h = a1 * h;
            let k0 = (T::PI() / (two * x)).sqrt() * (-x).exp() / s;
            let k1 = k0 * (x + lit!(T, 0.5) - h) / x;
            return Ok((k0, k1));
        }
    }
    Err(domain("bessel_k", "continued fraction did not converge"))
}
