//! Lossless and decimal renderings shared by the JSON and CSV emitters.

use serde::Serialize;
use unimoment::{Float, Rational};

pub const SCHEMA: &str = "unimoment/1";

/// Significant digits in CSV decimal columns.
pub const CSV_DIGITS: usize = 20;

/// `"num/den"`, or just `"num"` for integers.
pub fn exact(q: &Rational) -> String {
    q.to_string()
}

pub fn exact_all(v: &[Rational]) -> Vec<String> {
    v.iter().map(exact).collect()
}

/// Decimal rendering with `digits` significant digits.
pub fn decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

pub fn decimal_exact(q: &Rational, digits: usize) -> String {
    let bits = (digits as f64 * 3.33) as u32 + 32;
    decimal(&Float::with_val(bits, q), digits)
}

/// All digits supported by the precision of `x`.
fn digits_for(x: &Float) -> usize {
    (x.prec() as f64 * std::f64::consts::LOG10_2).floor() as usize
}

/// A high-precision real together with a bound on its absolute error.
#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct Real {
    pub value: String,
    pub error_bound: String,
}

impl Real {
    pub fn new(x: &Float, error_bound: &Float) -> Real {
        Real {
            value: decimal(x, digits_for(x)),
            error_bound: decimal(error_bound, 3),
        }
    }

    /// A double computed from exact data by a few rounded operations.
    pub fn from_f64(x: f64, ops: u32) -> Real {
        let err = x.abs() * f64::EPSILON * ops as f64;
        Real {
            value: format!("{x:e}"),
            error_bound: format!("{err:.2e}"),
        }
    }
}
