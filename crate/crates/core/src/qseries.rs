//! Truncated q-series with rational exponents and integer coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A finitely supported map from exponents to nonzero coefficients.
/// Terms with exponent above `order` are unknown and never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    terms: BTreeMap<BigRational, BigInt>,
    order: BigRational,
}

impl QSeries {
    pub fn zero(order: BigRational) -> QSeries {
        QSeries {
            terms: BTreeMap::new(),
            order,
        }
    }

    /// `q^0` truncated at `order` (empty if `order < 0`).
    pub fn one(order: BigRational) -> QSeries {
        let mut s = QSeries::zero(order);
        s.add_term(BigRational::zero(), BigInt::one());
        s
    }

    pub fn from_terms<I>(terms: I, order: BigRational) -> QSeries
    where
        I: IntoIterator<Item = (BigRational, BigInt)>,
    {
        let mut s = QSeries::zero(order);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn order(&self) -> &BigRational {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&BigRational, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &BigRational) -> BigInt {
        self.terms.get(exponent).cloned().unwrap_or_default()
    }

    /// Accumulates `c·q^e`; silently drops terms above the order.
    pub fn add_term(&mut self, exponent: BigRational, c: BigInt) {
        if c.is_zero() || exponent > self.order {
            return;
        }
        match self.terms.entry(exponent) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Coefficientwise sum, truncated at the smaller order.
    pub fn add(&self, other: &QSeries) -> QSeries {
        let order = (&self.order).min(&other.order).clone();
        let mut out = QSeries::zero(order);
        for (e, c) in self.iter().chain(other.iter()) {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Maps every term `(e, k)` to `(e + d, c·k)`; the order shifts by `d`.
    pub fn scale_shift(&self, c: &BigInt, d: &BigRational) -> QSeries {
        let mut out = QSeries::zero(&self.order + d);
        for (e, k) in self.iter() {
            out.add_term(e + d, k * c);
        }
        out
    }

    /// Drops everything above `order` (which must not exceed the current one).
    pub fn truncate(&self, order: &BigRational) -> Result<QSeries> {
        if order > &self.order {
            return Err(insufficient(order, &self.order));
        }
        Ok(QSeries {
            terms: self
                .terms
                .range(..=order.clone())
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
            order: order.clone(),
        })
    }

    /// True iff all coefficients with exponent `<= n` agree.
    pub fn equal_to_order(&self, other: &QSeries, n: &BigRational) -> Result<bool> {
        for s in [self, other] {
            if &s.order < n {
                return Err(insufficient(n, &s.order));
            }
        }
        let a = self.terms.range(..=n.clone());
        let b = other.terms.range(..=n.clone());
        Ok(a.eq(b))
    }
}

fn insufficient(needed: &BigRational, available: &BigRational) -> Error {
    Error::InsufficientTruncation {
        needed: needed.to_string(),
        available: available.to_string(),
    }
}

impl fmt::Display for QSeries {
    /// Plain-text rendering, e.g. `2q^(1/168) - 2q^(169/168) + O(q^(20))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.iter() {
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if !mag.is_one() || e.is_zero() {
                write!(f, "{mag}")?;
            }
            if !e.is_zero() {
                write!(f, "q^({e})")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^({}))", self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn series(terms: &[(i64, i64, i64)], order: i64) -> QSeries {
        QSeries::from_terms(
            terms.iter().map(|&(n, d, c)| (r(n, d), BigInt::from(c))),
            r(order, 1),
        )
    }

    #[test]
    fn add_examples() {
        let a = series(&[(0, 1, 1), (1, 2, 3)], 5);
        assert_eq!(a.add(&QSeries::zero(r(5, 1))), a);
        assert!(series(&[(1, 1, 1)], 5).add(&series(&[(1, 1, -1)], 5)).is_empty());
        let s = series(&[(0, 1, 1), (1, 2, 1)], 5).add(&series(&[(1, 2, 1)], 5));
        assert_eq!(s, series(&[(0, 1, 1), (1, 2, 2)], 5));
        assert_eq!(series(&[], 3).add(&series(&[], 7)).order(), &r(3, 1));
    }

    #[test]
    fn scale_shift_examples() {
        let a = series(&[(0, 1, 1), (1, 3, -2)], 5);
        assert_eq!(a.scale_shift(&BigInt::one(), &r(0, 1)), a);
        let m1 = BigInt::from(-1);
        assert_eq!(a.scale_shift(&m1, &r(0, 1)).scale_shift(&m1, &r(0, 1)), a);
        let one = series(&[(0, 1, 1)], 5);
        assert_eq!(one.scale_shift(&BigInt::one(), &r(3, 2)), QSeries::from_terms([(r(3, 2), BigInt::one())], r(13, 2)));
    }

    #[test]
    fn equal_to_order_examples() {
        let a = series(&[(0, 1, 1), (1, 1, 1)], 5);
        assert_eq!(a.equal_to_order(&a, &r(5, 1)), Ok(true));
        assert_eq!(a.equal_to_order(&series(&[(0, 1, 1)], 5), &r(1, 1)), Ok(false));
        assert_eq!(series(&[(0, 1, 1), (2, 1, 1)], 5).equal_to_order(&series(&[(0, 1, 1)], 5), &r(1, 1)), Ok(true));
        assert!(matches!(
            a.equal_to_order(&series(&[], 2), &r(3, 1)),
            Err(Error::InsufficientTruncation { .. })
        ));
    }

    #[test]
    fn terms_above_order_are_dropped() {
        let s = series(&[(0, 1, 1), (7, 1, 4)], 5);
        assert_eq!(s.len(), 1);
        assert_eq!(s.truncate(&r(-1, 1)).unwrap().len(), 0);
        assert!(s.truncate(&r(6, 1)).is_err());
    }

    #[test]
    fn display() {
        let s = series(&[(0, 1, 1), (1, 1, -1), (3, 2, 2)], 2);
        assert_eq!(s.to_string(), "1 - q^(1) + 2q^(3/2) + O(q^(2))");
    }

    fn arb_series() -> impl Strategy<Value = QSeries> {
        prop::collection::vec((-20i64..20, 1i64..6, -3i64..4), 0..8)
            .prop_map(|v| series(&v, 4))
    }

    proptest! {
        #[test]
        fn add_commutative_associative(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        }

        #[test]
        fn scale_shift_distributes(a in arb_series(), b in arb_series(), k in -3i64..4, n in -5i64..5, d in 1i64..4) {
            let (k, d) = (BigInt::from(k), r(n, d));
            prop_assert_eq!(a.add(&b).scale_shift(&k, &d), a.scale_shift(&k, &d).add(&b.scale_shift(&k, &d)));
        }
    }
}
