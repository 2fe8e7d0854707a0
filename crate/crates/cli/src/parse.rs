//! Number literals accepted on the command line.
//!
//! Reals: anything `f64::from_str` takes, plus `pi` multiples such as
//! `pi`, `-pi`, `2pi`, `2*pi`, `pi/2`, `3pi/4`.
//! Complex: `re`, `re,im`, `re+imi`, `re-imi`, `imi`, `i`, `-i`, with
//! either part allowed to be a `pi` multiple.

use num_complex::Complex64;
use std::f64::consts::PI;

pub fn parse_real(text: &str) -> Result<f64, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Ok(x) = s.parse::<f64>() {
        return finite(x, text);
    }
    let lower = s.to_ascii_lowercase();
    let Some(pos) = lower.find("pi") else {
        return Err(format!("not a number: {text:?}"));
    };
    let coef = lower[..pos].trim_end_matches('*');
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| format!("bad coefficient in {text:?}"))?,
    };
    let rest = &lower[pos + 2..];
    let den = if rest.is_empty() {
        1.0
    } else if let Some(d) = rest.strip_prefix('/') {
        d.parse::<f64>().map_err(|_| format!("bad denominator in {text:?}"))?
    } else {
        return Err(format!("not a number: {text:?}"));
    };
    if den == 0.0 {
        return Err(format!("division by zero in {text:?}"));
    }
    finite(coef * PI / den, text)
}

fn finite(x: f64, text: &str) -> Result<f64, String> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("not a finite number: {text:?}"))
    }
}

/// Coefficient of `i`: empty or a bare sign means `±1`.
fn parse_imag_coef(text: &str) -> Result<f64, String> {
    match text.trim() {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        t => parse_real(t),
    }
}

/// `true` if the literal carries an imaginary unit (a trailing `i` that
/// is not the end of `pi`).
fn has_unit(s: &str) -> bool {
    let l = s.to_ascii_lowercase();
    l.ends_with('i') && !(l.ends_with("pi") && !l.ends_with("pii"))
}

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((re, im)) = s.split_once(',') {
        return Ok(Complex64::new(parse_real(re)?, parse_real(im)?));
    }
    if !has_unit(&s) {
        return Ok(Complex64::new(parse_real(&s)?, 0.0));
    }
    let body = &s[..s.len() - 1];
    // split at the last sign that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(parse_real(&body[..k])?, parse_imag_coef(&body[k..])?)),
        None => Ok(Complex64::new(0.0, parse_imag_coef(body)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals() {
        assert_eq!(parse_real("1.5").unwrap(), 1.5);
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("-pi").unwrap(), -PI);
        assert_eq!(parse_real("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_real("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_real("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_real("3PI/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_real("1e-3").unwrap(), 1e-3);
        for bad in ["", "x", "pi/0", "pi2", "1+2i", "inf", "NaN"] {
            assert!(parse_real(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn complex_forms() {
        let c = Complex64::new;
        assert_eq!(parse_complex("1").unwrap(), c(1.0, 0.0));
        assert_eq!(parse_complex("1,2").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("1-2i").unwrap(), c(1.0, -2.0));
        assert_eq!(parse_complex("1+i").unwrap(), c(1.0, 1.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("2.5i").unwrap(), c(0.0, 2.5));
        assert_eq!(parse_complex("-1e-3+1e-2i").unwrap(), c(-1e-3, 1e-2));
        assert_eq!(parse_complex("pi").unwrap(), c(PI, 0.0));
        assert_eq!(parse_complex("pi/2,1").unwrap(), c(PI / 2.0, 1.0));
        assert_eq!(parse_complex("1+pii").unwrap(), c(1.0, PI));
        assert_eq!(parse_complex(" 1 + 2i ").unwrap(), c(1.0, 2.0));
        for bad in ["", "1+", "1+2j", "a,b", "1,2,3"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }
}
