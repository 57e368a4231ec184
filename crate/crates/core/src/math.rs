//! Scalar helpers on top of `libm`.

pub const LN_2: f64 = core::f64::consts::LN_2;

#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp2(x: f64) -> f64 {
    libm::exp2(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// `-x log2 x` with the convention `0 log 0 = 0`.
#[inline]
pub fn xlog2x_neg(x: f64) -> f64 {
    if x > 0.0 {
        -x * log2(x)
    } else {
        0.0
    }
}

/// Binary entropy `h(p) = -p log p - (1-p) log(1-p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    xlog2x_neg(p) + xlog2x_neg(1.0 - p)
}

/// log2 of `n!` via summation; exact enough for the moderate `n` used here.
pub fn log2_factorial(n: u64) -> f64 {
    (2..=n).map(|k| log2(k as f64)).sum()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Relative-or-absolute closeness used throughout the tests and checks.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    let scale = 1.0f64.max(a.abs()).max(b.abs());
    (a - b).abs() <= tol * scale
}
