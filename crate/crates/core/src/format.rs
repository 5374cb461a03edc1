//! Number formatting shared by the JSON and CSV emitters.

use serde::{Serialize, Serializer};

/// Significant digits used for every real written to JSON or CSV.
pub const SIGNIFICANT_DIGITS: usize = 9;

/// Rounds `x` to `digits` significant decimal digits.
///
/// Non-finite values pass through unchanged.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let digits = digits.max(1);
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Shortest decimal representation of `x` after rounding to
/// [`SIGNIFICANT_DIGITS`].
pub fn fmt_real(x: f64) -> String {
    let r = round_sig(x, SIGNIFICANT_DIGITS);
    if r == 0.0 {
        // drop the sign of negative zero
        return "0".to_string();
    }
    // serde_json prints the shortest round-trip representation
    serde_json::to_string(&r).unwrap_or_else(|_| r.to_string())
}

/// `f64` wrapper that serializes rounded to [`SIGNIFICANT_DIGITS`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = round_sig(self.0, SIGNIFICANT_DIGITS);
        if r == 0.0 {
            s.serialize_f64(0.0)
        } else {
            s.serialize_f64(r)
        }
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real(x)
    }
}
