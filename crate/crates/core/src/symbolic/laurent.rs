//! Univariate Laurent polynomials with big-integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A finite sum `sum_e c_e t^e` with `e` ranging over all integers.
///
/// Stored sparsely; zero coefficients are never kept, so structural
/// equality is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn monomial(coeff: BigInt, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Leading (highest-exponent) term.
    pub fn leading(&self) -> Option<(i64, &BigInt)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitute `t -> t^k` for a positive integer `k`.
    pub fn dilate(&self, k: i64) -> Self {
        assert!(k > 0, "dilation factor must be positive");
        Self {
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Value at `t = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Exact division by `1 - t^k` (`k >= 1`), or `None` if it does not divide.
    pub fn div_one_minus_power(&self, k: i64) -> Option<Self> {
        assert!(k >= 1);
        if self.is_zero() {
            return Some(Self::zero());
        }
        // c(t) (1 - t^k) = a(t)  =>  c_e = a_e + c_{e-k}, scanning upward.
        let lo = self.min_exp().unwrap();
        let hi = self.max_exp().unwrap();
        let mut out = BTreeMap::new();
        let mut e = lo;
        while e <= hi - k {
            let mut c = self.coeff(e);
            if let Some(prev) = out.get(&(e - k)) {
                c += prev;
            }
            if !c.is_zero() {
                out.insert(e, c);
            }
            e += 1;
        }
        let q = Self { terms: out };
        let check = &q - &q.shift(k);
        (check == *self).then_some(q)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms(), "t", |e| e.to_string())
    }
}

/// Shared renderer: ascending exponents, explicit signs, `1` coefficients elided.
pub(crate) fn write_terms<'a, I, F>(
    f: &mut fmt::Formatter<'_>,
    terms: I,
    var: &str,
    exp_str: F,
) -> fmt::Result
where
    I: Iterator<Item = (i64, &'a BigInt)>,
    F: Fn(i64) -> String,
{
    let mut first = true;
    for (e, c) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        if e == 0 {
            write!(f, "{mag}")?;
            continue;
        }
        if !mag.is_one() {
            write!(f, "{mag}*")?;
        }
        let shown = exp_str(e);
        if shown == "1" {
            f.write_str(var)?;
        } else {
            write!(f, "{var}^{shown}")?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                *acc.entry(ea + eb).or_default() += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        out.terms = acc;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, c)))
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = lp(&[(0, 1), (2, 3)]);
        let b = lp(&[(2, 3)]);
        assert_eq!(&a - &b, LaurentPoly::one());
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplication_and_shift() {
        let a = lp(&[(-1, 1), (1, 1)]);
        assert_eq!(&a * &a, lp(&[(-2, 1), (0, 2), (2, 1)]));
        assert_eq!(a.shift(3), lp(&[(2, 1), (4, 1)]));
        assert_eq!(a.pow(3), &(&a * &a) * &a);
    }

    #[test]
    fn exact_division_by_cyclotomic_like_factor() {
        // (1 - t^4) / (1 - t^2) = 1 + t^2
        let a = lp(&[(0, 1), (4, -1)]);
        assert_eq!(a.div_one_minus_power(2), Some(lp(&[(0, 1), (2, 1)])));
        assert_eq!(lp(&[(0, 1), (3, 1)]).div_one_minus_power(2), None);
    }

    #[test]
    fn renders_canonically() {
        let a = lp(&[(3, 1), (-2, -1), (0, 2), (1, -1)]);
        assert_eq!(a.to_string(), "-t^-2 + 2 - t + t^3");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }
}
