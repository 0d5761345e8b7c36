//! Float helpers routed through `libm` so the crate stays `no_std` and the
//! numerics are identical in library and test builds.

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// Integer power by repeated squaring; exact for the small exponents used in
/// radial integrands.
pub fn powi(x: f64, n: i32) -> f64 {
    if n < 0 {
        return 1.0 / powi(x, -n);
    }
    let mut acc = 1.0;
    let mut base = x;
    let mut e = n as u32;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// Smallest integer `m` with `2^m >= n`; `n = 0` and `n = 1` give 0.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Odd double factorial `(2k+1)!! = 1*3*5*...*(2k+1)`.
pub fn odd_double_factorial(k: u32) -> f64 {
    let mut acc = 1.0;
    let mut i = 1u64;
    while i <= 2 * k as u64 + 1 {
        acc *= i as f64;
        i += 2;
    }
    acc
}

/// Factorial as f64, enough for the Laguerre/Legendre normalizations in scope.
pub fn factorial(n: u32) -> f64 {
    let mut acc = 1.0;
    for i in 2..=n as u64 {
        acc *= i as f64;
    }
    acc
}

/// Binomial coefficient C(n, k) in u128 (sector dimensions stay well inside).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
