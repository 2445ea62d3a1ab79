//! Graded polynomials in `q^(1/2)` and the (q-)binomial coefficients.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::laurent::{write_terms, LaurentPoly};
use crate::error::{Error, Result};

/// An exponent measured in units of one half.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        Self(twice)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integral(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Laurent polynomial in `q^(1/2)`: the value type of the M- and N-sums.
///
/// Internally the exponent of every term counts powers of `q^(1/2)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedPoly {
    half: LaurentPoly,
}

impl GradedPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self {
            half: LaurentPoly::one(),
        }
    }

    /// Lift a Laurent polynomial in `q` (integral exponents).
    pub fn from_q_poly(p: &LaurentPoly) -> Self {
        Self { half: p.dilate(2) }
    }

    /// `c * q^(e/2)`.
    pub fn monomial(coeff: BigInt, exp: HalfInt) -> Self {
        Self {
            half: LaurentPoly::monomial(coeff, exp.0),
        }
    }

    pub fn q_power(exp: HalfInt) -> Self {
        Self::monomial(BigInt::one(), exp)
    }

    pub fn is_zero(&self) -> bool {
        self.half.is_zero()
    }

    /// Terms as `(exponent of q, coefficient)` in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (HalfInt, &BigInt)> + '_ {
        self.half.terms().map(|(e, c)| (HalfInt(e), c))
    }

    pub fn value_at_one(&self) -> BigInt {
        self.half.eval_at_one()
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.half.has_nonnegative_coeffs()
    }

    /// Multiply by `q^(e/2)`.
    pub fn shift(&self, exp: HalfInt) -> Self {
        Self {
            half: self.half.shift(exp.0),
        }
    }

    /// The polynomial in `q` when every exponent is integral.
    pub fn to_q_poly(&self) -> Option<LaurentPoly> {
        if self.half.terms().all(|(e, _)| e % 2 == 0) {
            Some(LaurentPoly::from_terms(
                self.half.terms().map(|(e, c)| (e / 2, c.clone())),
            ))
        } else {
            None
        }
    }

    pub fn half_exponent_poly(&self) -> &LaurentPoly {
        &self.half
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.half.terms(), "q", |e| {
            if e % 2 == 0 {
                (e / 2).to_string()
            } else {
                format!("({e}/2)")
            }
        })
    }
}

impl AddAssign<&GradedPoly> for GradedPoly {
    fn add_assign(&mut self, rhs: &GradedPoly) {
        self.half += &rhs.half;
    }
}

impl Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        GradedPoly {
            half: &self.half + &rhs.half,
        }
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        GradedPoly {
            half: &self.half - &rhs.half,
        }
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly { half: -&self.half }
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        GradedPoly {
            half: &self.half * &rhs.half,
        }
    }
}

/// Binomial `binom(m + p, m)` as a falling factorial, valid for any integer `p`.
///
/// Vanishes for `-m <= p <= -1` and carries the sign `(-1)^m` for `p < -m`.
pub fn binom_ext(m: i64, p: i64) -> Result<BigInt> {
    if m < 0 {
        return Err(Error::invalid(format!("binomial lower index must be >= 0, got {m}")));
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=m {
        num *= BigInt::from(p + i);
        den *= BigInt::from(i);
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    Ok(q)
}

/// Gaussian binomial `[n choose k]_q` for `0 <= k <= n`, as a polynomial in `q`.
pub(crate) fn gaussian(n: i64, k: i64) -> LaurentPoly {
    debug_assert!(0 <= k && k <= n);
    let k = k.min(n - k);
    // Multiply in (1 - q^{n-k+i}) and divide out (1 - q^i) alternately so the
    // running value is always a polynomial.
    let mut acc = LaurentPoly::one();
    for i in 1..=k {
        let factor = LaurentPoly::from_terms([(0, 1), (n - k + i, -1)]);
        acc = &acc * &factor;
        acc = acc
            .div_one_minus_power(i)
            .expect("partial products of a Gaussian binomial are polynomial");
    }
    acc
}

/// The q-binomial `prod_{i=1}^m (1 - q^{p+i}) / (1 - q^i)` for any integer `p`.
///
/// For `p >= 0` this is the Gaussian binomial `[m+p choose m]_q`. For
/// `-m <= p <= -1` one numerator factor vanishes. For `p < -m`, writing
/// `s = -p - m`, it equals `(-1)^m q^{-S} [m+s-1 choose m]_q` with
/// `S = s + (s+1) + ... + (m+s-1)`.
pub fn qbinom(m: i64, p: i64) -> Result<GradedPoly> {
    Ok(GradedPoly::from_q_poly(&qbinom_q(m, p)?))
}

/// [`qbinom`] as a Laurent polynomial in `q` itself.
pub fn qbinom_q(m: i64, p: i64) -> Result<LaurentPoly> {
    if m < 0 {
        return Err(Error::invalid(format!("q-binomial lower index must be >= 0, got {m}")));
    }
    if m == 0 || p == 0 {
        return Ok(LaurentPoly::one());
    }
    if p > 0 {
        return Ok(gaussian(m + p, m));
    }
    if p >= -m {
        return Ok(LaurentPoly::zero());
    }
    let s = -p - m;
    let total: i64 = (s..s + m).sum();
    let sign = if m % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    Ok(gaussian(m + s - 1, m).shift(-total).scale(&sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, c)))
    }

    /// Independent oracle: evaluate the defining product at a rational point.
    fn product_formula_at(m: i64, p: i64, x: &BigRational) -> BigRational {
        let one = BigRational::one();
        let pw = |e: i64| -> BigRational {
            if e >= 0 {
                num_traits::pow(x.clone(), e as usize)
            } else {
                num_traits::pow(x.recip(), (-e) as usize)
            }
        };
        let mut acc = one.clone();
        for i in 1..=m {
            acc = acc * (&one - pw(p + i)) / (&one - pw(i));
        }
        acc
    }

    fn eval_laurent(poly: &LaurentPoly, x: &BigRational) -> BigRational {
        poly.terms()
            .map(|(e, c)| {
                let base = if e >= 0 {
                    num_traits::pow(x.clone(), e as usize)
                } else {
                    num_traits::pow(x.recip(), (-e) as usize)
                };
                base * BigRational::from_integer(c.clone())
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    #[test]
    fn binom_ext_examples() {
        assert_eq!(binom_ext(3, 2).unwrap(), BigInt::from(10));
        assert_eq!(binom_ext(2, -1).unwrap(), BigInt::zero());
        assert_eq!(binom_ext(1, -3).unwrap(), BigInt::from(-2));
        assert_eq!(binom_ext(0, -7).unwrap(), BigInt::one());
        assert!(binom_ext(-1, 2).is_err());
    }

    #[test]
    fn qbinom_examples() {
        assert_eq!(qbinom_q(2, 2).unwrap(), q(&[(0, 1), (1, 1), (2, 2), (3, 1), (4, 1)]));
        for m in 0..6 {
            assert!(qbinom_q(m, 0).unwrap().is_one());
        }
        assert_eq!(qbinom_q(1, -3).unwrap(), q(&[(-2, -1), (-1, -1)]));
        assert!(qbinom_q(3, -2).unwrap().is_zero());
        assert!(qbinom(-1, 0).is_err());
    }

    #[test]
    fn qbinom_matches_product_formula_at_rational_points() {
        let points = [BigRational::from_integer(2.into()), BigRational::new(3.into(), 5.into())];
        for m in 0..=5 {
            for p in -9..=5 {
                let poly = qbinom_q(m, p).unwrap();
                for x in &points {
                    assert_eq!(eval_laurent(&poly, x), product_formula_at(m, p, x), "m={m} p={p}");
                }
            }
        }
    }

    #[test]
    fn qbinom_at_one_is_binom_ext_exhaustive() {
        for m in 0..=6 {
            for p in -6..=6 {
                assert_eq!(
                    qbinom_q(m, p).unwrap().eval_at_one(),
                    binom_ext(m, p).unwrap(),
                    "m={m} p={p}"
                );
            }
        }
    }

    #[test]
    fn graded_rendering() {
        let g = GradedPoly::from_q_poly(&q(&[(1, 1), (2, 1), (3, 1)]));
        assert_eq!(g.to_string(), "q + q^2 + q^3");
        let h = GradedPoly::monomial(BigInt::from(-2), HalfInt(3));
        assert_eq!(h.to_string(), "-2*q^(3/2)");
        assert_eq!(GradedPoly::zero().to_string(), "0");
        assert_eq!(GradedPoly::one().to_string(), "1");
    }

    proptest! {
        #[test]
        fn nonnegative_p_is_palindromic_with_degree_mp(m in 0i64..7, p in 0i64..7) {
            let poly = qbinom_q(m, p).unwrap();
            prop_assert!(poly.has_nonnegative_coeffs());
            prop_assert_eq!(poly.max_exp().unwrap(), m * p);
            prop_assert_eq!(poly.min_exp().unwrap(), 0);
            for j in 0..=m * p {
                prop_assert_eq!(poly.coeff(j), poly.coeff(m * p - j));
            }
        }
    }
}
