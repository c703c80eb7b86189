//! Stable JSON number formatting.
//!
//! All exported floats are rounded to 12 significant digits with `-0`
//! normalized to `0`, so identical runs serialize byte-identically.

/// Round to 12 significant decimal digits; `-0` becomes `0`.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return 0.0;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(11 - magnitude);
    let rounded = (x * factor).round() / factor;
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// A complex value as a stable `[re, im]` pair.
pub fn complex_pair(re: f64, im: f64) -> serde_json::Value {
    serde_json::json!([sig12(re), sig12(im)])
}

/// Serialize with sorted keys (the default `serde_json` map is ordered)
/// and a trailing newline.
pub fn to_stable_string(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(sig12(1.0 / 3.0), 0.333333333333);
        assert_eq!(sig12(-0.0), 0.0);
        assert_eq!(sig12(1234.56789), 1234.56789);
        assert_eq!(sig12(1e-300 * 1e-300), 0.0); // underflow to zero
    }

    #[test]
    fn negative_zero_never_escapes() {
        let tiny = -1e-200;
        let v = sig12(tiny * 1e-200);
        assert!(v == 0.0 && v.is_sign_positive());
    }
}
