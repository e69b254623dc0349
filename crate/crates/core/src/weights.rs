//! Exact rational arc weights.
//!
//! A [`WeightVector`] stores all weights as `i128` numerators over a single
//! positive common denominator. Every algorithm in the crate is invariant
//! under positive scaling, so they run on the numerators alone and convert
//! back to [`Rational`] only at the API boundary.

use std::str::FromStr;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::digraph::ArcId;
use crate::error::{Error, Result};

pub type Rational = num_rational::Ratio<i128>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    numer: Vec<i128>,
    denom: i128,
}

impl WeightVector {
    pub fn from_integers<I: IntoIterator<Item = i64>>(weights: I) -> Self {
        WeightVector {
            numer: weights.into_iter().map(i128::from).collect(),
            denom: 1,
        }
    }

    /// Brings all weights onto their least common denominator.
    pub fn from_rationals(weights: &[Rational]) -> Result<Self> {
        let mut denom: i128 = 1;
        for w in weights {
            let d = *w.denom();
            let g = denom.gcd(&d);
            denom = (denom / g).checked_mul(d).ok_or(Error::Overflow)?;
        }
        let numer = weights
            .iter()
            .map(|w| {
                (denom / w.denom())
                    .checked_mul(*w.numer())
                    .ok_or(Error::Overflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightVector { numer, denom })
    }

    pub fn len(&self) -> usize {
        self.numer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numer.is_empty()
    }

    pub fn numerators(&self) -> &[i128] {
        &self.numer
    }

    pub fn denominator(&self) -> i128 {
        self.denom
    }

    pub fn is_integral(&self) -> bool {
        self.denom == 1
    }

    pub fn get(&self, arc: ArcId) -> Rational {
        Rational::new(self.numer[arc], self.denom)
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        (0..self.len()).map(|a| self.get(a)).collect()
    }

    /// Converts a value on this vector's scale back to a rational.
    pub fn unscale(&self, scaled: i128) -> Rational {
        Rational::new(scaled, self.denom)
    }

    pub fn total<I: IntoIterator<Item = ArcId>>(&self, arcs: I) -> Rational {
        let sum: i128 = arcs.into_iter().map(|a| self.numer[a]).sum();
        self.unscale(sum)
    }
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = i128::from_str(n.trim()).map_err(|_| Error::InvalidRational(s.to_string()))?;
        let d = i128::from_str(d.trim()).map_err(|_| Error::InvalidRational(s.to_string()))?;
        if d.is_zero() {
            return Err(Error::InvalidRational(s.to_string()));
        }
        Ok(Rational::new(n, d))
    } else {
        i128::from_str(t)
            .map(Rational::from_integer)
            .map_err(|_| Error::InvalidRational(s.to_string()))
    }
}

/// `"n"` for integers, `"n/d"` otherwise, always in lowest terms with a
/// positive denominator.
pub fn format_rational(r: &Rational) -> String {
    let r = r.reduced();
    if r.is_integer() {
        r.numer().to_string()
    } else if r.denom().is_negative() {
        format!("{}/{}", -r.numer(), -r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapters writing rationals as strings and reading either strings or
/// JSON integers.
pub mod serde_rational {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    pub(crate) struct RationalVisitor;

    impl Visitor<'_> for RationalVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            f.write_str("an integer or a \"num/den\" string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
            Ok(Rational::from_integer(v.into()))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
            Ok(Rational::from_integer(v.into()))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
            parse_rational(v).map_err(E::custom)
        }
    }

    pub(crate) struct Wrapped(pub Rational);

    impl<'de> serde::Deserialize<'de> for Wrapped {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            d.deserialize_any(RationalVisitor).map(Wrapped)
        }
    }
}

pub mod serde_rational_vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::serde_rational::Wrapped;
    use super::{format_rational, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v: Vec<Wrapped> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|w| w.0).collect())
    }
}
