use std::f64::consts::PI;

/// Parse an angle given in radians (`0.785`) or as a multiple of π (`0.25pi`, `-pi`, `π`).
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let lower = text.trim().to_ascii_lowercase();
    let multiple = lower.strip_suffix("pi").or_else(|| lower.strip_suffix('π'));
    let value = match multiple {
        Some(m) => {
            let m = m.trim().trim_end_matches('*').trim();
            let factor = match m {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => m.parse::<f64>().map_err(|_| format!("malformed angle {text:?}"))?,
            };
            factor * PI
        }
        None => lower.parse::<f64>().map_err(|_| format!("malformed angle {text:?}: expected radians or a multiple of pi"))?,
    };
    if !value.is_finite() {
        return Err(format!("angle {text:?} is not finite"));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn multiples_of_pi() {
        assert_eq!(parse_angle("0.25pi").unwrap(), 0.25 * PI);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi").unwrap(), -PI);
        assert_eq!(parse_angle("0.5*pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_angle(" 2π ").unwrap(), 2.0 * PI);
        assert!((parse_angle("0.25PI").unwrap() - FRAC_PI_4).abs() < 1e-16);
    }

    #[test]
    fn raw_radians() {
        assert_eq!(parse_angle("0.5235987755982989").unwrap(), FRAC_PI_6);
        assert_eq!(parse_angle("0").unwrap(), 0.0);
        assert_eq!(parse_angle("1e-3").unwrap(), 1e-3);
    }

    #[test]
    fn malformed() {
        for bad in ["", "abc", "0.2.5pi", "pipi", "nan", "inf", "1/4pi"] {
            assert!(parse_angle(bad).is_err(), "{bad:?}");
        }
    }
}
