//! Scalar abstraction for the bound formulas.
//!
//! The Moore and cage formulas are plain polynomials in the degree, so they
//! are written once against [`Scalar`] and evaluated either exactly (with
//! [`Rational`](crate::Rational)) or approximately (with `f64`).

use std::fmt::Debug;

use num_traits::{Num, ToPrimitive};

use crate::Rational;

pub trait Scalar: Num + Clone + PartialOrd + Debug {}

impl<T> Scalar for T where T: Num + Clone + PartialOrd + Debug {}

/// `k` as a scalar, built by binary doubling from `one`.
pub fn from_u64<T: Scalar>(mut k: u64) -> T {
    let mut acc = T::zero();
    let mut pow = T::one();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc + pow.clone();
        }
        pow = pow.clone() + pow;
        k >>= 1;
    }
    acc
}

/// `p / q` as a scalar.
pub fn ratio<T: Scalar>(p: u64, q: u64) -> T {
    from_u64::<T>(p) / from_u64::<T>(q)
}

/// Integer power by repeated squaring.
pub fn powi<T: Scalar>(base: T, exp: u32) -> T {
    num_traits::pow(base, exp as usize)
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().ok()?;
            let q: i128 = q.trim().parse().ok()?;
            (q != 0).then(|| Rational::new(p, q))
        }
        None => s.parse::<i128>().ok().map(Rational::from_integer),
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter writing rationals as `"p/q"` (or `"p"` when integral).
pub mod serde_rational {
    use serde::Serializer;

    use crate::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_u64_matches_casts() {
        for k in [0u64, 1, 2, 7, 12, 1023] {
            assert_eq!(from_u64::<f64>(k), k as f64);
            assert_eq!(from_u64::<Rational>(k), Rational::from_integer(k as i128));
        }
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("29/4"), Some(Rational::new(29, 4)));
        assert_eq!(parse_rational(" 6 "), Some(Rational::from_integer(6)));
        assert_eq!(parse_rational("6/12"), Some(Rational::new(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
