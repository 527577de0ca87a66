//! Special functions used by the closed-form gain expressions.
//!
//! * [`bessel_j0`]: Bessel function of the first kind, order zero.
//! * [`fresnel`]: Fresnel integrals `C(x) = ∫₀ˣ cos(πt²/2) dt` and
//!   `S(x) = ∫₀ˣ sin(πt²/2) dt`. Both tend to 1/2 as `x → ∞`.
//! * [`sinc`]: normalized sinc, `sin(πx)/(πx)`.
//! * [`find_root_bracketed`]: bisection on a sign-changing bracket.
//!
//! Everything here is a pure function of its arguments.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

/// Below this magnitude J₀ is summed from its power series, above it the
/// Hankel asymptotic expansion is used. Both branches stay under 2e-12
/// absolute error at the switchover.
pub const J0_SERIES_LIMIT: f64 = 12.0;

/// Fresnel integrals use their power series up to this argument and a
/// continued fraction for the complementary error function beyond.
const FRESNEL_SERIES_LIMIT: f64 = 1.5;

/// Tolerance used by the crate whenever it solves for a gain crossing.
pub const ROOT_TOL: f64 = 1e-12;

/// Bessel function of the first kind, order zero.
///
/// Power series for `|x| < 12`, optimally truncated Hankel expansion
/// beyond. Absolute error stays below 1e-10 on `|x| ≤ 50`.
pub fn bessel_j0(x: f64) -> Result<f64> {
    ensure_finite(x, "bessel_j0 argument")?;
    let x = x.abs();
    if x < J0_SERIES_LIMIT {
        Ok(j0_series(x))
    } else {
        Ok(j0_asymptotic(x))
    }
}

fn j0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -q / (k * k);
        sum += term;
        if k > q && term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn j0_asymptotic(x: f64) -> f64 {
    // J0(x) ~ sqrt(2/(πx)) (P cos χ − Q sin χ), χ = x − π/4, with
    // |a_k| = Π_{j≤k} (2j−1)² / (k! (8x)^k). Stop at the smallest term.
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a: f64 = 1.0;
    for k in 1..64u32 {
        let next = a * f64::from((2 * k - 1) * (2 * k - 1)) / (f64::from(k) * 8.0 * x);
        if next > a {
            break;
        }
        a = next;
        match k % 4 {
            1 => q -= a,
            2 => p -= a,
            3 => q += a,
            _ => p += a,
        }
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Fresnel cosine and sine integrals `(C(x), S(x))` for `x ≥ 0`.
pub fn fresnel(x: f64) -> Result<(f64, f64)> {
    ensure_finite(x, "fresnel argument")?;
    if x < 0.0 {
        return Err(Error::Domain(format!("fresnel argument must be ≥ 0, got {x}")));
    }
    if x == 0.0 {
        return Ok((0.0, 0.0));
    }
    if x <= FRESNEL_SERIES_LIMIT {
        Ok(fresnel_series(x))
    } else {
        fresnel_continued_fraction(x)
    }
}

fn fresnel_series(x: f64) -> (f64, f64) {
    // C = x Σ (-1)^k t^{2k} / ((4k+1)(2k)!),  S = x Σ (-1)^k t^{2k+1} / ((4k+3)(2k+1)!)
    let t = FRAC_PI_2 * x * x;
    let mut c = 0.0;
    let mut s = 0.0;
    // power = t^m / m!
    let mut power = 1.0;
    let mut m = 0u32;
    loop {
        let sign = if (m / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        let contrib = sign * power / f64::from(2 * m + 1);
        if m.is_multiple_of(2) {
            c += contrib;
        } else {
            s += contrib;
        }
        m += 1;
        power *= t / f64::from(m);
        if power < 1e-18 {
            break;
        }
    }
    (x * c, x * s)
}

fn fresnel_continued_fraction(x: f64) -> Result<(f64, f64)> {
    // C + iS = (1+i)/2 · [1 − e^{iπx²/2} · (1−i) x · F], where F is the
    // continued fraction of erfc evaluated by the modified Lentz method.
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let pix2 = PI * x * x;
    let mut b = Complex64::new(1.0, -pix2);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    let mut n = -1.0;
    let mut converged = false;
    for _ in 0..200 {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += 4.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!("fresnel continued fraction at x = {x}")));
    }
    h *= Complex64::new(x, -x);
    let phase = Complex64::from_polar(1.0, 0.5 * pix2);
    let cs = Complex64::new(0.5, 0.5) * (Complex64::new(1.0, 0.0) - phase * h);
    Ok((cs.re, cs.im))
}

/// Normalized sinc, `sin(πx)/(πx)` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> Result<f64> {
    ensure_finite(x, "sinc argument")?;
    let px = PI * x;
    if px.abs() < 1e-8 {
        return Ok(1.0 - px * px / 6.0);
    }
    // exact zeros at nonzero integers
    if x == x.round() {
        return Ok(0.0);
    }
    Ok(px.sin() / px)
}

/// Bisection on `[a, b]` for a function that changes sign across the bracket.
///
/// Returns the midpoint of the final bracket, whose width is at most `tol`
/// (or the f64 resolution at the root, whichever is larger). An endpoint
/// where `f` is exactly zero is returned directly.
pub fn find_root_bracketed<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    ensure_finite(a, "bracket start")?;
    ensure_finite(b, "bracket end")?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    #[test]
    fn j0_examples() {
        assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
        // frozen from the fixed-point series oracle
        assert!((bessel_j0(1.0).unwrap() - 0.765_197_686_557_966_6).abs() < 1e-12);
        assert!(bessel_j0(2.404_825_557_7).unwrap().abs() < 1e-8);
        assert!(matches!(bessel_j0(f64::NAN), Err(Error::Domain(_))));
        assert!(bessel_j0(f64::INFINITY).is_err());
    }

    #[test]
    fn j0_matches_series_oracle_across_switchover() {
        let mut x = 10.0;
        while x < 14.0 {
            let want = oracle::bessel_j0_series(x);
            assert!((bessel_j0(x).unwrap() - want).abs() < 1e-10, "x = {x}");
            x += 0.01;
        }
    }

    #[test]
    fn fresnel_examples() {
        assert_eq!(fresnel(0.0).unwrap(), (0.0, 0.0));
        let (c, s) = fresnel(1.0).unwrap();
        let (qc, qs) = oracle::fresnel_quadrature(1.0);
        assert!((c - qc).abs() < 1e-9 && (s - qs).abs() < 1e-9);
        // frozen reference pair from the quadrature oracle
        assert!((c - 0.779_893_400_376_822_8).abs() < 1e-12);
        assert!((s - 0.438_259_147_390_354_8).abs() < 1e-12);
        for x in [100.0, 150.5, 400.0] {
            let (c, s) = fresnel(x).unwrap();
            assert!((c - 0.5).abs() < 1e-2 && (s - 0.5).abs() < 1e-2, "x = {x}");
        }
        assert!(matches!(fresnel(-0.1), Err(Error::Domain(_))));
        assert!(fresnel(f64::NAN).is_err());
    }

    #[test]
    fn fresnel_continuous_at_series_limit() {
        let below = fresnel_series(FRESNEL_SERIES_LIMIT);
        let above = fresnel_continued_fraction(FRESNEL_SERIES_LIMIT).unwrap();
        assert!((below.0 - above.0).abs() < 1e-13);
        assert!((below.1 - above.1).abs() < 1e-13);
    }

    #[test]
    fn sinc_examples() {
        assert_eq!(sinc(0.0).unwrap(), 1.0);
        assert_eq!(sinc(1.0).unwrap(), 0.0);
        assert!((sinc(0.5).unwrap() - 2.0 / PI).abs() < 1e-15);
        assert!(sinc(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn root_finder_examples() {
        let r = find_root_bracketed(|x| x - 1.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((r - 1.0).abs() <= 1e-12);
        let r = find_root_bracketed(f64::cos, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - FRAC_PI_2).abs() <= 1e-12);
        let r = find_root_bracketed(
            |x| bessel_j0(x).unwrap().powi(2) - 0.5,
            0.5,
            2.0,
            ROOT_TOL,
        )
        .unwrap();
        // dense-grid scan oracle puts the crossing at 1.12636...
        assert!((r - 1.126_364_239_377_258).abs() < 1e-10);
        assert!(matches!(
            find_root_bracketed(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::Bracket { .. })
        ));
        assert!(find_root_bracketed(|x| x, -1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn j0_crossing_matches_grid_scan() {
        // independent: scan J0² on a fine grid, take the first cell that crosses 0.5
        let step = 1e-6;
        let mut x = 0.5;
        while bessel_j0(x + step).unwrap().powi(2) > 0.5 {
            x += step;
        }
        let r = find_root_bracketed(|x| bessel_j0(x).unwrap().powi(2) - 0.5, 0.5, 2.0, ROOT_TOL)
            .unwrap();
        assert!(r >= x - 1e-12 && r <= x + step + 1e-12);
    }

    proptest! {
        #[test]
        fn j0_is_even(x in -60.0f64..60.0) {
            prop_assert_eq!(bessel_j0(x).unwrap(), bessel_j0(-x).unwrap());
        }

        #[test]
        fn j0_bounded(x in -200.0f64..200.0) {
            prop_assert!(bessel_j0(x).unwrap().abs() <= 1.0);
        }

        #[test]
        fn j0_envelope(x in 10.0f64..500.0) {
            prop_assert!(bessel_j0(x).unwrap().abs() <= (2.0 / (PI * x)).sqrt() + 1e-6);
        }

        #[test]
        fn fresnel_bounds(x in 0.0f64..60.0) {
            let (c, s) = fresnel(x).unwrap();
            prop_assert!((0.0..=0.78).contains(&c));
            prop_assert!((0.0..=0.72).contains(&s));
        }

        #[test]
        fn bisection_finds_linear_roots(root in -50.0f64..50.0, slope in 0.1f64..10.0) {
            let r = find_root_bracketed(|x| slope * (x - root), -100.0, 100.0, 1e-12).unwrap();
            prop_assert!((r - root).abs() <= 1e-11);
        }
    }
}
