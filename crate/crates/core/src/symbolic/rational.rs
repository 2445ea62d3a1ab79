//! Rational functions as unreduced numerator/denominator pairs.
//!
//! No gcd is ever taken. Equality is decided by cross-multiplication. The
//! arithmetic does keep denominators small in the cases that matter here:
//! monomial denominators are combined through their lcm, and division first
//! tries to cancel the divisor's numerator exactly.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::laurent::LaurentPoly;
use super::multipoly::{Division, Monomial, MultiPoly, VarSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Rational {
    num: MultiPoly,
    den: MultiPoly,
}

impl Rational {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero(format!("rational function {num} / 0")));
        }
        Ok(Self { num, den }.normalized())
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.vars());
        Self { num: p, den }
    }

    pub fn constant(vars: &Arc<VarSet>, c: impl Into<BigInt>) -> Self {
        Self::from_poly(MultiPoly::constant(vars, c))
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        Self::constant(vars, 1)
    }

    pub fn var(vars: &Arc<VarSet>, i: usize) -> Self {
        Self::from_poly(MultiPoly::var(vars, i))
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPoly {
        &self.den
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.den = MultiPoly::one(self.num.vars());
            return self;
        }
        let g = self.num.monomial_content().gcd(self.den.monomial_content());
        if g != Monomial::ONE {
            self.num = self.num.div_monomial(g);
            self.den = self.den.div_monomial(g);
        }
        if let Some((m, c)) = self.den.as_monomial() {
            // Pull integer content of a monomial denominator into the numerator when exact.
            if !c.is_one() && self.num.terms().all(|(_, d)| (d % c).is_zero()) {
                let c = c.clone();
                self.num = MultiPoly::from_terms(
                    self.num.vars(),
                    self.num
                        .to_exponent_list()
                        .into_iter()
                        .map(|(e, d)| (e, d / &c)),
                );
                self.den = MultiPoly::term(self.num.vars(), 1, m);
            }
        }
        if self.den.leading_term().is_some_and(|(_, c)| c.is_negative()) {
            self.num = self.num.neg();
            self.den = self.den.neg();
        }
        self
    }

    /// The polynomial this function equals, if the denominator divides exactly.
    pub fn to_polynomial(&self) -> Option<MultiPoly> {
        if self.den.is_one() {
            return Some(self.num.clone());
        }
        match self.num.exact_divide(&self.den).ok()? {
            Division::Exact(q) => Some(q),
            Division::NotDivisible { .. } => None,
        }
    }

    /// Identity test by cross-multiplication.
    pub fn equals(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let rhs_num = if negate { other.num.neg() } else { other.num.clone() };
        if self.den == other.den {
            return Self {
                num: self.num.add(&rhs_num),
                den: self.den.clone(),
            }
            .normalized();
        }
        if let (Some((ma, ca)), Some((mb, cb))) = (self.den.as_monomial(), other.den.as_monomial()) {
            if ca.is_one() && cb.is_one() {
                let l = ma.lcm(mb);
                let one = BigInt::one();
                let num = self
                    .num
                    .mul_term(ma.quotient_of(l), &one)
                    .add(&rhs_num.mul_term(mb.quotient_of(l), &one));
                return Self {
                    num,
                    den: MultiPoly::term(self.vars(), 1, l),
                }
                .normalized();
            }
        }
        Self {
            num: self.num.mul(&other.den).add(&rhs_num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
        .normalized()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
        .normalized()
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        Self {
            num: self.num.mul(p),
            den: self.den.clone(),
        }
        .normalized()
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.num.is_zero() {
            return Err(Error::DivisionByZero(format!("({self}) / 0")));
        }
        let scaled = self.num.mul(&other.den);
        if !other.num.is_one() {
            if let Division::Exact(q) = scaled.exact_divide(&other.num)? {
                return Ok(Self { num: q, den: self.den.clone() }.normalized());
            }
        }
        Self::new(scaled, self.den.mul(&other.num))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            let e = n as u32;
            Ok(Self {
                num: self.num.pow(e),
                den: self.den.pow(e),
            })
        } else {
            self.recip()?.pow(-n)
        }
    }

    /// Simultaneous substitution of every variable by a rational function.
    pub fn substitute(&self, values: &[Rational]) -> Result<Rational> {
        let n = eval_poly_rational(&self.num, values)?;
        let d = eval_poly_rational(&self.den, values)?;
        n.div(&d)
    }

    /// Numerator and denominator after replacing each variable by a Laurent polynomial.
    pub fn eval_laurent(&self, values: &[LaurentPoly]) -> Result<(LaurentPoly, LaurentPoly)> {
        let n = self.num.eval_laurent(values);
        let d = self.den.eval_laurent(values);
        if d.is_zero() {
            return Err(Error::DivisionByZero(format!(
                "denominator {} vanishes under substitution",
                self.den
            )));
        }
        Ok((n, d))
    }
}

fn eval_poly_rational(p: &MultiPoly, values: &[Rational]) -> Result<Rational> {
    assert_eq!(values.len(), p.vars().len());
    let target = values
        .first()
        .map(|v| v.vars().clone())
        .unwrap_or_else(|| p.vars().clone());
    let mut powers: Vec<Vec<Rational>> = values.iter().map(|v| vec![Rational::one(v.vars())]).collect();
    let mut total = Rational::constant(&target, 0);
    for (m, c) in p.terms() {
        let mut t = Rational::constant(&target, c.clone());
        for (v, value) in values.iter().enumerate() {
            let e = m.exponent(v) as usize;
            while powers[v].len() <= e {
                let next = powers[v][powers[v].len() - 1].mul(value);
                powers[v].push(next);
            }
            if e > 0 {
                t = t.mul(&powers[v][e]);
            }
        }
        total = total.add(&t);
    }
    Ok(total)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
