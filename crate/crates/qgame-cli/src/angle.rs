//! Parser for the angle and probability expressions used in scenario
//! configs.
//!
//! Angles are written as rational multiples of pi ("1/2 pi", "pi", "0")
//! or as "acos(x)" with a rational argument ("acos(-3/5)"), which keeps
//! config values exact instead of forcing decimal transcriptions. Plain
//! decimals are accepted as radians.

use std::f64::consts::PI;

/// Parse a plain number: integer, decimal, or a rational like "-3/5".
pub fn parse_number(input: &str) -> Result<f64, String> {
    let s = input.trim();
    if s.is_empty() {
        return Err(String::from("empty numeric expression"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {input:?}"))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {input:?}"))?;
        if d == 0.0 {
            return Err(format!("division by zero in {input:?}"));
        }
        return Ok(n / d);
    }
    s.parse()
        .map_err(|_| format!("bad numeric expression {input:?}"))
}

/// Parse an angle expression into radians.
pub fn parse_angle(input: &str) -> Result<f64, String> {
    let s = input.trim();
    if s.is_empty() {
        return Err(String::from("empty angle expression"));
    }
    if let Some(rest) = s.strip_prefix("acos(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| format!("unterminated acos in {input:?}"))?;
        let x = parse_number(inner)?;
        if !(-1.0..=1.0).contains(&x) {
            return Err(format!("acos argument {x} outside [-1, 1]"));
        }
        return Ok(x.acos());
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, s),
    };
    let value = if body == "pi" {
        PI
    } else if let Some(coef) = body
        .strip_suffix("pi")
        .map(|c| c.trim_end().trim_end_matches('*').trim_end())
    {
        parse_number(coef)? * PI
    } else {
        parse_number(body)?
    };
    Ok(if neg { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-15
    }

    #[test]
    fn angles() {
        assert!(close(parse_angle("0").unwrap(), 0.0));
        assert!(close(parse_angle("pi").unwrap(), PI));
        assert!(close(parse_angle("1/2 pi").unwrap(), PI / 2.0));
        assert!(close(parse_angle("3/4pi").unwrap(), 3.0 * PI / 4.0));
        assert!(close(parse_angle("2/3 * pi").unwrap(), 2.0 * PI / 3.0));
        assert!(close(parse_angle("-1/4 pi").unwrap(), -PI / 4.0));
        assert!(close(parse_angle("acos(-3/5)").unwrap(), (-0.6f64).acos()));
        assert!(close(parse_angle("acos(3/5)").unwrap(), (0.6f64).acos()));
        assert!(close(parse_angle("0.25").unwrap(), 0.25));
        assert!(parse_angle("acos(2)").is_err());
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("").is_err());
    }

    #[test]
    fn numbers() {
        assert!(close(parse_number("1/4").unwrap(), 0.25));
        assert!(close(parse_number("0.75").unwrap(), 0.75));
        assert!(close(parse_number("-3/5").unwrap(), -0.6));
        assert!(parse_number("1/0").is_err());
        assert!(parse_number("x").is_err());
    }
}
