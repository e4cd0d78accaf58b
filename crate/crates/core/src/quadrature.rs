//! Globally adaptive Gauss–Kronrod (10/21-point) integration on finite and
//! semi-infinite intervals.
//!
//! The semi-infinite integrator maps `[a, ∞)` onto `[0, 1)` through
//! `x = a + s·t/(1 − t)`, where `s` is a caller-supplied length scale on
//! which the integrand decays.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance<T> {
    pub rel: T,
    pub abs: T,
    /// Cap on the number of subintervals held by the adaptive scheme.
    pub max_intervals: usize,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            rel: lit!(T, 1e-10),
            abs: lit!(T, 1e-14),
            max_intervals: 400,
        }
    }
}

impl<T: Real> Tolerance<T> {
    pub fn new(rel: T, abs: T) -> Self {
        Self {
            rel,
            abs,
            ..Self::default()
        }
    }

    fn target(&self, value: T) -> T {
        self.abs.max(self.rel * value.abs())
    }
}

/// Integral value with its error estimate.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub abs_err: T,
    pub evaluations: usize,
}

impl<T: Real> Estimate<T> {
    pub fn exact(value: T) -> Self {
        Self {
            value,
            abs_err: T::zero(),
            evaluations: 0,
        }
    }

    pub fn scaled(self, factor: T) -> Self {
        Self {
            value: self.value * factor,
            abs_err: self.abs_err * factor.abs(),
            evaluations: self.evaluations,
        }
    }
}

impl<T: Real> std::ops::Add for Estimate<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            value: self.value + rhs.value,
            abs_err: self.abs_err + rhs.abs_err,
            evaluations: self.evaluations + rhs.evaluations,
        }
    }
}

impl<T: Real> std::ops::Sub for Estimate<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self {
            value: self.value - rhs.value,
            abs_err: self.abs_err + rhs.abs_err,
            evaluations: self.evaluations + rhs.evaluations,
        }
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Clone, Copy, Debug)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    err: T,
    /// Part of `err` attributable to rounding; never refined away.
    floor: T,
}

impl<T: Real> Panel<T> {
    fn excess(&self) -> T {
        (self.err - self.floor).max(T::zero())
    }
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.excess() == other.excess()
    }
}

impl<T: Real> Eq for Panel<T> {}

impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.excess().partial_cmp(&other.excess()).unwrap_or(Ordering::Equal)
    }
}

fn gauss_kronrod_21<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Panel<T> {
    let half = lit!(T, 0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let abs_half = half_len.abs();

    let fc = f(center);
    let mut res_g = T::zero();
    let mut res_k = fc * lit!(T, WGK[10]);
    let mut res_abs = res_k.abs();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];

    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half_len * lit!(T, XGK[jtw]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        let sum = f1 + f2;
        res_g = res_g + lit!(T, WG[j]) * sum;
        res_k = res_k + lit!(T, WGK[jtw]) * sum;
        res_abs = res_abs + lit!(T, WGK[jtw]) * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half_len * lit!(T, XGK[jtwm1]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k = res_k + lit!(T, WGK[jtwm1]) * (f1 + f2);
        res_abs = res_abs + lit!(T, WGK[jtwm1]) * (f1.abs() + f2.abs());
    }

    let mean = res_k * half;
    let mut res_asc = lit!(T, WGK[10]) * (fc - mean).abs();
    for j in 0..10 {
        res_asc = res_asc + lit!(T, WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half_len;
    res_abs = res_abs * abs_half;
    res_asc = res_asc * abs_half;
    let mut err = ((res_k - res_g) * half_len).abs();
    if res_asc != T::zero() && err != T::zero() {
        let scale = (lit!(T, 200.0) * err / res_asc).powf(lit!(T, 1.5));
        err = res_asc * scale.min(T::one());
    }
    let floor = lit!(T, 50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (lit!(T, 50.0) * T::epsilon()) {
        err = err.max(floor);
    }
    Panel {
        a,
        b,
        value,
        err,
        floor,
    }
}

/// Adaptive integration of `f` over `[a, b]`.
pub fn integrate<T, F>(f: F, a: T, b: T, tol: &Tolerance<T>) -> Result<Estimate<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    integrate_with_breaks(f, &[a, b], tol)
}

/// Adaptive integration over `[points[0], points[last]]`, starting from the
/// subdivision given by `points` (which must be monotone).
pub fn integrate_with_breaks<T, F>(mut f: F, points: &[T], tol: &Tolerance<T>) -> Result<Estimate<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    if points.len() < 2 {
        return Ok(Estimate::exact(T::zero()));
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for w in points.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        heap.push(gauss_kronrod_21(&mut f, w[0], w[1]));
        evaluations += 21;
    }

    loop {
        let (value, err, excess) = heap.iter().fold((T::zero(), T::zero(), T::zero()), |acc, p| {
            (acc.0 + p.value, acc.1 + p.err, acc.2 + p.excess())
        });
        if !value.is_finite() || !err.is_finite() {
            return Err(Error::Quadrature {
                value: value.as_f64(),
                abs_err: err.as_f64(),
                evaluations,
            });
        }
        if excess <= tol.target(value) {
            return Ok(Estimate {
                value,
                abs_err: err,
                evaluations,
            });
        }
        if heap.len() >= tol.max_intervals {
            return Err(Error::Quadrature {
                value: value.as_f64(),
                abs_err: err.as_f64(),
                evaluations,
            });
        }
        let worst = heap.pop().expect("non-empty panel set");
        let mid = lit!(T, 0.5) * (worst.a + worst.b);
        if mid == worst.a || mid == worst.b {
            // interval exhausted at working precision
            return Err(Error::Quadrature {
                value: value.as_f64(),
                abs_err: err.as_f64(),
                evaluations,
            });
        }
        heap.push(gauss_kronrod_21(&mut f, worst.a, mid));
        heap.push(gauss_kronrod_21(&mut f, mid, worst.b));
        evaluations += 42;
    }
}

/// Adaptive integration of `f` over `[a, ∞)`.
///
/// `scale` is the length over which the integrand varies appreciably; the
/// mapped variable spends half its range on `[a, a + scale]`.
pub fn integrate_semi_infinite<T, F>(mut f: F, a: T, scale: T, tol: &Tolerance<T>) -> Result<Estimate<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let one = T::one();
    let mapped = move |t: T| {
        let d = one - t;
        let x = a + scale * t / d;
        if !x.is_finite() {
            return T::zero();
        }
        let v = f(x);
        if v == T::zero() {
            T::zero()
        } else {
            v * scale / (d * d)
        }
    };
    integrate(mapped, T::zero(), one, tol)
}
