//! Numeric text output shared by every CSV and JSON writer.

/// Significant digits in all emitted numbers.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats like C's `%.12g`: 12 significant digits, trailing zeros trimmed,
/// scientific notation outside `1e-5 ≤ |x| < 1e12`.
pub fn sig12(x: f64) -> String {
    format_sig(x, SIGNIFICANT_DIGITS)
}

pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let digits = digits.max(1);
    // exponent after rounding to `digits` significant places
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("`e` in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

/// Rounds `x` to 12 significant digits (the value a reader of [`sig12`]
/// output recovers).
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("round trip of formatted f64")
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(-2.5), "-2.5");
        assert_eq!(sig12(std::f64::consts::PI), "3.14159265359");
        assert_eq!(sig12(350.842830848), "350.842830848");
        assert_eq!(sig12(1e-7), "1e-07");
        assert_eq!(sig12(0.000123456789012345), "0.000123456789012");
        assert_eq!(sig12(123456789012345.0), "1.23456789012e+14");
        assert_eq!(sig12(999999999999.9), "1e+12");
        assert_eq!(sig12(f64::INFINITY), "inf");
    }

    #[test]
    fn rounding_round_trips() {
        let x = 1.0 / 3.0;
        assert_eq!(round_sig12(x), sig12(x).parse::<f64>().unwrap());
        assert_eq!(round_sig12(0.0), 0.0);
    }
}
