use std::fmt;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

/// A numeric literal: exact when it can be, double precision otherwise.
///
/// Exact arithmetic silently degrades to `Real` on 64-bit overflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Number {
    Rational(Rational64),
    Real(f64),
}

impl Number {
    pub fn int(n: i64) -> Self {
        Number::Rational(Rational64::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Number::Rational(Rational64::new(num, den))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Number::Rational(r) => *r.numer() as f64 / *r.denom() as f64,
            Number::Real(x) => x,
        }
    }

    pub fn as_rational(self) -> Option<Rational64> {
        match self {
            Number::Rational(r) => Some(r),
            Number::Real(_) => None,
        }
    }

    pub fn is_zero(self) -> bool {
        match self {
            Number::Rational(r) => r.is_zero(),
            Number::Real(x) => x == 0.0,
        }
    }

    pub fn is_one(self) -> bool {
        match self {
            Number::Rational(r) => r.is_one(),
            Number::Real(x) => x == 1.0,
        }
    }

    pub fn is_negative(self) -> bool {
        match self {
            Number::Rational(r) => r.is_negative(),
            Number::Real(x) => x < 0.0,
        }
    }

    /// Parses a decimal literal (`12`, `0.25`, `1e-5`, `3.5E2`) exactly when the
    /// value fits in a 64-bit ratio.
    pub fn parse_decimal(text: &str) -> Option<Self> {
        let (mantissa, exponent) = match text.find(['e', 'E']) {
            Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
            None => (text, 0),
        };
        let (int_part, frac_part) = match mantissa.find('.') {
            Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return None;
        }
        let exact = (|| {
            let digits = format!("{int_part}{frac_part}");
            let mut numer: i64 = digits.trim_start_matches('0').parse().unwrap_or(0);
            if digits.trim_start_matches('0').len() > 18 {
                return None;
            }
            let scale = exponent - frac_part.len() as i32;
            let mut denom: i64 = 1;
            if scale >= 0 {
                numer = numer.checked_mul(10i64.checked_pow(scale as u32)?)?;
            } else {
                denom = 10i64.checked_pow((-scale) as u32)?;
            }
            Some(Number::Rational(Rational64::new(numer, denom)))
        })();
        exact.or_else(|| text.parse::<f64>().ok().map(Number::Real))
    }

    pub fn neg(self) -> Self {
        match self {
            Number::Rational(r) => r
                .numer()
                .checked_neg()
                .map(|n| Number::Rational(Rational64::new_raw(n, *r.denom())))
                .unwrap_or(Number::Real(-self.to_f64())),
            Number::Real(x) => Number::Real(-x),
        }
    }

    pub fn add(self, other: Self) -> Self {
        self.exact_or(other, |a, b| a.checked_add(&b), |a, b| a + b)
    }

    pub fn sub(self, other: Self) -> Self {
        self.exact_or(other, |a, b| a.checked_sub(&b), |a, b| a - b)
    }

    pub fn mul(self, other: Self) -> Self {
        self.exact_or(other, |a, b| a.checked_mul(&b), |a, b| a * b)
    }

    /// Division; `None` when dividing by an exact or floating zero.
    pub fn div(self, other: Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        Some(self.exact_or(other, |a, b| a.checked_div(&b), |a, b| a / b))
    }

    pub fn powi(self, exp: i32) -> Option<Self> {
        if exp < 0 && self.is_zero() {
            return None;
        }
        match self {
            Number::Rational(r) => {
                let base = if exp < 0 { r.recip() } else { r };
                let mut acc = Rational64::one();
                for _ in 0..exp.unsigned_abs() {
                    match acc.checked_mul(&base) {
                        Some(v) => acc = v,
                        None => return Some(Number::Real(self.to_f64().powi(exp))),
                    }
                }
                Some(Number::Rational(acc))
            }
            Number::Real(x) => Some(Number::Real(x.powi(exp))),
        }
    }

    /// Integer value if this is an exact integer that fits in `i32`.
    pub fn as_i32(self) -> Option<i32> {
        match self {
            Number::Rational(r) if r.is_integer() => r.to_integer().to_i32(),
            _ => None,
        }
    }

    fn exact_or(
        self,
        other: Self,
        exact: impl Fn(Rational64, Rational64) -> Option<Rational64>,
        real: impl Fn(f64, f64) -> f64,
    ) -> Self {
        if let (Number::Rational(a), Number::Rational(b)) = (self, other) {
            if let Some(r) = exact(a, b) {
                return Number::Rational(r);
            }
        }
        Number::Real(real(self.to_f64(), other.to_f64()))
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Number::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Number::Real(x) => write!(f, "{x:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(Number::parse_decimal("0.25"), Some(Number::ratio(1, 4)));
        assert_eq!(Number::parse_decimal("12"), Some(Number::int(12)));
        assert_eq!(Number::parse_decimal("1e-5"), Some(Number::ratio(1, 100_000)));
        assert_eq!(Number::parse_decimal("3.5E2"), Some(Number::int(350)));
        assert_eq!(Number::parse_decimal(".5"), Some(Number::ratio(1, 2)));
        assert_eq!(Number::parse_decimal("."), None);
    }

    #[test]
    fn long_literals_fall_back_to_real() {
        let n = Number::parse_decimal("0.30000000000000000004").unwrap();
        assert!(matches!(n, Number::Real(_)));
        assert!((n.to_f64() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn overflow_degrades_to_real() {
        let big = Number::int(i64::MAX / 2);
        let product = big.mul(Number::int(4));
        assert!(matches!(product, Number::Real(_)));
        assert!((product.to_f64() / (i64::MAX as f64 * 2.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn division_by_zero_is_rejected() {
        assert_eq!(Number::int(1).div(Number::int(0)), None);
        assert_eq!(Number::int(0).powi(-1), None);
        assert_eq!(Number::ratio(2, 3).powi(-2), Some(Number::ratio(9, 4)));
    }
}
