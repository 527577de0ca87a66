//! Reference evaluations that share no code with [`crate::specfun`].
//!
//! These are slow and exist to cross-check the production special functions,
//! both in tests and in the `validate` command.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Fixed-point fraction bits used by [`bessel_j0_series`].
const SERIES_FRACTION_BITS: usize = 320;

/// J₀(x) from its power series, summed in 320-bit fixed point.
///
/// `x` is decomposed into an exact dyadic rational, so the only error is one
/// unit of 2⁻³²⁰ per term plus the final rounding to f64. Practical up to
/// `|x|` of a few hundred.
pub fn bessel_j0_series(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let (mantissa, exponent) = decompose(x.abs());
    // q = x²/4 = mantissa² · 2^(2·exponent − 2)
    let q_num = BigInt::from(mantissa) * BigInt::from(mantissa);
    let q_shift = 2 * exponent - 2;
    let one = BigInt::from(1u8) << SERIES_FRACTION_BITS;
    let mut term = one.clone();
    let mut sum = one;
    let q_approx = 0.25 * x * x;
    let mut k: u64 = 0;
    loop {
        k += 1;
        term *= &q_num;
        if q_shift >= 0 {
            term <<= q_shift as usize;
        } else {
            term >>= (-q_shift) as usize;
        }
        term /= BigInt::from(k * k);
        term = -term;
        sum += &term;
        if term.is_zero() && (k as f64) > q_approx {
            break;
        }
    }
    sum.to_f64().expect("bounded fixed-point sum") * (-(SERIES_FRACTION_BITS as f64)).exp2()
}

/// Splits a finite positive f64 into `(mantissa, exponent)` with
/// `x = mantissa · 2^exponent` exactly.
fn decompose(x: f64) -> (u64, i64) {
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & 0x000f_ffff_ffff_ffff;
    if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | 0x0010_0000_0000_0000, raw_exp - 1075)
    }
}

/// J₀(ζ) as the angular average `(1/2π) ∫₀^{2π} e^{−jζ cos ψ} dψ`.
///
/// The integrand is periodic and analytic, so the trapezoidal rule converges
/// geometrically; the point count grows with `|ζ|` to keep the aliasing
/// term (of order J_M(ζ)) negligible.
pub fn bessel_j0_angular_average(zeta: f64) -> f64 {
    let points = 64 + 4 * zeta.abs().ceil() as usize;
    let step = 2.0 * PI / points as f64;
    let sum: f64 = (0..points)
        .map(|i| (zeta * (i as f64 * step).cos()).cos())
        .sum();
    sum / points as f64
}

/// Fresnel integrals by composite 16-point Gauss-Legendre quadrature of the
/// defining integrals.
///
/// `[0, x]` is cut into panels no wider than a quarter oscillation of the
/// integrand, on which the rule is exact to rounding.
pub fn fresnel_quadrature(x: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 0.0);
    }
    let (nodes, weights) = gauss_legendre(16);
    let (mut c, mut s) = (0.0, 0.0);
    for (a, b) in fresnel_panels(x) {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for (t, w) in nodes.iter().zip(&weights) {
            let arg = 0.5 * PI * (mid + half * t).powi(2);
            c += half * w * arg.cos();
            s += half * w * arg.sin();
        }
    }
    (c, s)
}

/// The same integrals by adaptive Simpson on the same panels. Slow; kept as a
/// cross-check of [`fresnel_quadrature`].
pub fn fresnel_simpson(x: f64) -> (f64, f64) {
    let (mut c, mut s) = (0.0, 0.0);
    for (a, b) in fresnel_panels(x) {
        c += adaptive_simpson(&|t: f64| (0.5 * PI * t * t).cos(), a, b, 1e-15, 40);
        s += adaptive_simpson(&|t: f64| (0.5 * PI * t * t).sin(), a, b, 1e-15, 40);
    }
    (c, s)
}

fn fresnel_panels(x: f64) -> impl Iterator<Item = (f64, f64)> {
    // local angular frequency of cos(πt²/2) is πt
    let panels = if x > 0.0 { ((x * x).ceil() as usize * 2).max(8) } else { 0 };
    let width = x / panels.max(1) as f64;
    (0..panels).map(move |i| (i as f64 * width, (i + 1) as f64 * width))
}

/// Nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n(x) and P_{n-1}(x)
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}
