//! Truncated Laurent series in descending powers of one variable.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::laurent::LaurentPoly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// `sum_k coeffs[k] * t^(lead - k*step)`, known exactly for `k < coeffs.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries<C> {
    pub lead: i64,
    pub step: i64,
    pub coeffs: Vec<C>,
}

impl<C: Clone + Zero> LaurentSeries<C> {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent still carried exactly.
    pub fn last_exponent(&self) -> i64 {
        self.lead - (self.coeffs.len() as i64 - 1) * self.step
    }

    /// Coefficient of `t^exp`, or `None` when `exp` lies below the truncation.
    pub fn coeff_at(&self, exp: i64) -> Option<C> {
        if self.coeffs.is_empty() || exp < self.last_exponent() {
            return None;
        }
        if exp > self.lead {
            return Some(C::zero());
        }
        let off = self.lead - exp;
        if off % self.step != 0 {
            return Some(C::zero());
        }
        Some(self.coeffs[(off / self.step) as usize].clone())
    }

    pub fn truncate(&self, terms: usize) -> Self {
        Self {
            lead: self.lead,
            step: self.step,
            coeffs: self.coeffs.iter().take(terms).cloned().collect(),
        }
    }

    /// Exponents carried exactly, from `lead` downward.
    pub fn exponents(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.coeffs.len() as i64).map(move |k| self.lead - k * self.step)
    }

    pub fn map<D, F: Fn(&C) -> D>(&self, f: F) -> LaurentSeries<D> {
        LaurentSeries {
            lead: self.lead,
            step: self.step,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl LaurentSeries<BigRational> {
    /// The same series with integer coefficients, if every coefficient is integral.
    pub fn to_integer(&self) -> Option<LaurentSeries<BigInt>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()?;
        Some(LaurentSeries {
            lead: self.lead,
            step: self.step,
            coeffs,
        })
    }
}

impl<C: fmt::Display + Clone + Zero> fmt::Display for LaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let e = self.lead - k as i64 * self.step;
            write!(f, "({c})*t^{e}")?;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.last_exponent() - self.step)
    }
}

fn exponent_gcd(p: &LaurentPoly, base: i64, acc: i64) -> i64 {
    p.terms().fold(acc, |g, (e, _)| g.gcd(&(base - e)))
}

/// Expand `num/den` in descending powers of the variable, `order` coefficients deep.
///
/// The step between retained exponents is the gcd of all exponent gaps in
/// numerator and denominator (so even functions of `t` advance by `t^-2`).
pub fn expand_laurent_at_infinity(
    num: &LaurentPoly,
    den: &LaurentPoly,
    order: usize,
) -> Result<LaurentSeries<BigRational>> {
    let (lead_d, lc) = match den.leading() {
        Some((e, c)) => (e, BigRational::from_integer(c.clone())),
        None => return Err(Error::DivisionByZero("series denominator is zero".into())),
    };
    let Some(lead_n) = num.max_exp() else {
        return Ok(LaurentSeries {
            lead: 0,
            step: 1,
            coeffs: vec![BigRational::zero(); order],
        });
    };
    let g = exponent_gcd(den, lead_d, exponent_gcd(num, lead_n, 0));
    let step = if g == 0 { 1 } else { g.abs() };
    let a = |k: usize| BigRational::from_integer(num.coeff(lead_n - k as i64 * step));
    let b = |k: usize| BigRational::from_integer(den.coeff(lead_d - k as i64 * step));
    let mut coeffs: Vec<BigRational> = Vec::with_capacity(order);
    for k in 0..order {
        let mut acc = a(k);
        for j in 1..=k {
            let bj = b(j);
            if !bj.is_zero() {
                acc -= bj * &coeffs[k - j];
            }
        }
        coeffs.push(acc / &lc);
    }
    Ok(LaurentSeries {
        lead: lead_n - lead_d,
        step,
        coeffs,
    })
}

/// [`expand_laurent_at_infinity`] for a rational function in which only `var` occurs.
pub fn expand_at_infinity(f: &Rational, var: usize, order: usize) -> Result<LaurentSeries<BigRational>> {
    let num = f
        .numerator()
        .to_univariate(var)
        .ok_or_else(|| Error::invalid(format!("numerator of {f} is not univariate")))?;
    let den = f
        .denominator()
        .to_univariate(var)
        .ok_or_else(|| Error::invalid(format!("denominator of {f} is not univariate")))?;
    expand_laurent_at_infinity(&num, &den, order)
}
