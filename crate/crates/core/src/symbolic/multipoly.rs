//! Sparse multivariate polynomials over the integers.
//!
//! Monomials are packed into a `u128`, sixteen bits per variable, with
//! variable 0 in the most significant field. Numeric order on the packed
//! value is therefore lexicographic order with `v0 > v1 > ...`, which is the
//! term order used for leading terms and division.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::laurent::LaurentPoly;
use crate::error::{Error, Result};

pub const MAX_VARS: usize = 8;
const FIELD_BITS: u32 = 16;
const FIELD_MASK: u128 = 0xFFFF;
const GUARD: u128 = 0x8000_8000_8000_8000_8000_8000_8000_8000;

/// An exponent vector packed into sixteen-bit fields.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    fn shift_of(var: usize) -> u32 {
        (MAX_VARS - 1 - var) as u32 * FIELD_BITS
    }

    pub fn var(var: usize, exp: u32) -> Self {
        assert!(var < MAX_VARS, "variable index {var} out of range");
        assert!(exp < 0x8000, "exponent {exp} too large");
        Monomial((exp as u128) << Self::shift_of(var))
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        exps.iter()
            .enumerate()
            .fold(Monomial::ONE, |acc, (v, &e)| acc.mul(Monomial::var(v, e)))
    }

    pub fn exponent(self, var: usize) -> u32 {
        ((self.0 >> Self::shift_of(var)) & FIELD_MASK) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|v| self.exponent(v)).collect()
    }

    pub fn total_degree(self) -> u32 {
        (0..MAX_VARS).map(|v| self.exponent(v)).sum()
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        let s = self.0 + other.0;
        assert!(s & GUARD == 0, "monomial exponent overflow");
        Monomial(s)
    }

    pub fn divides(self, other: Monomial) -> bool {
        ((other.0 | GUARD) - self.0) & GUARD == GUARD
    }

    /// `other / self`, assuming [`Monomial::divides`].
    pub fn quotient_of(self, other: Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial(other.0 - self.0)
    }

    /// Componentwise minimum.
    pub fn gcd(self, other: Monomial) -> Monomial {
        let mut out = 0u128;
        for v in 0..MAX_VARS {
            let e = self.exponent(v).min(other.exponent(v)) as u128;
            out |= e << Self::shift_of(v);
        }
        Monomial(out)
    }

    /// Componentwise maximum.
    pub fn lcm(self, other: Monomial) -> Monomial {
        let mut out = 0u128;
        for v in 0..MAX_VARS {
            let e = self.exponent(v).max(other.exponent(v)) as u128;
            out |= e << Self::shift_of(v);
        }
        Monomial(out)
    }

    pub fn without_var(self, var: usize) -> Monomial {
        Monomial(self.0 & !(FIELD_MASK << Self::shift_of(var)))
    }
}

/// An ordered list of variable names shared by polynomials that interact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<I, S>(names: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_VARS {
            return Err(Error::invalid(format!(
                "at most {MAX_VARS} variables are supported, got {}",
                names.len()
            )));
        }
        Ok(Arc::new(Self { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Multivariate polynomial with canonical (zero-free) term map.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Arc<VarSet>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.check_compatible(other);
        self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

/// Outcome of an attempted exact division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Division {
    Exact(MultiPoly),
    /// The division algorithm stalled; `remainder` is the unreduced witness.
    NotDivisible { quotient: MultiPoly, remainder: MultiPoly },
}

impl MultiPoly {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        Self {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VarSet>, c: impl Into<BigInt>) -> Self {
        Self::term(vars, c, Monomial::ONE)
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        Self::constant(vars, 1)
    }

    pub fn term(vars: &Arc<VarSet>, c: impl Into<BigInt>, m: Monomial) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(m, c.into());
        p
    }

    pub fn var(vars: &Arc<VarSet>, i: usize) -> Self {
        assert!(i < vars.len(), "variable index {i} out of range");
        Self::term(vars, 1, Monomial::var(i, 1))
    }

    pub fn from_terms<I, C>(vars: &Arc<VarSet>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length mismatch");
            p.add_term(Monomial::from_exponents(&e), c.into());
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable sets"
        );
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
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
        self.terms.len() == 1 && self.terms.get(&Monomial::ONE).is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Monomial, &BigInt)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn leading_term(&self) -> Option<(Monomial, &BigInt)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn as_monomial(&self) -> Option<(Monomial, &BigInt)> {
        (self.terms.len() == 1).then(|| self.leading_term().unwrap())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    /// Smallest exponent of `var` over all terms (`None` for zero).
    pub fn min_degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(var)).min()
    }

    /// Greatest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::ONE,
            Some(first) => it.fold(*first, |g, m| g.gcd(*m)),
        }
    }

    /// Divide every term by a monomial known to divide all of them.
    pub fn div_monomial(&self, m: Monomial) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| {
                    assert!(m.divides(*t), "monomial does not divide term");
                    (m.quotient_of(*t), c.clone())
                })
                .collect(),
        }
    }

    pub fn mul_term(&self, m: Monomial, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(t, d)| (t.mul(m), d * c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        self.mul_term(Monomial::ONE, c)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.vars);
        }
        if let Some((m, c)) = other.as_monomial() {
            return self.mul_term(m, c);
        }
        if let Some((m, c)) = self.as_monomial() {
            return other.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(*mb)).or_default() += ca * cb;
            }
        }
        Self {
            vars: self.vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Exact division `self / divisor` by leading-term reduction.
    ///
    /// When `self = divisor * c` the leading term of every intermediate
    /// remainder is divisible by the leading term of `divisor`, so a stall
    /// proves non-divisibility.
    pub fn exact_divide(&self, divisor: &Self) -> Result<Division> {
        self.check_compatible(divisor);
        let (lm, lc) = match divisor.leading_term() {
            Some((m, c)) => (m, c.clone()),
            None => return Err(Error::DivisionByZero("polynomial divisor is zero".into())),
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.vars);
        while let Some((rm, rc)) = rem.leading_term() {
            if !lm.divides(rm) || !(rc % &lc).is_zero() {
                return Ok(Division::NotDivisible {
                    quotient: quot,
                    remainder: rem,
                });
            }
            let tm = lm.quotient_of(rm);
            let tc = rc / &lc;
            for (dm, dc) in &divisor.terms {
                rem.add_term(dm.mul(tm), -(dc * &tc));
            }
            quot.add_term(tm, tc);
        }
        Ok(Division::Exact(quot))
    }

    /// Divide exactly or fail with the remainder witness in the error.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        match self.exact_divide(divisor)? {
            Division::Exact(q) => Ok(q),
            Division::NotDivisible { remainder, .. } => Err(Error::NotDivisible {
                remainder: remainder.to_string(),
            }),
        }
    }

    /// Evaluate at integer values for every variable.
    pub fn eval(&self, values: &[BigInt]) -> BigInt {
        assert_eq!(values.len(), self.vars.len());
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, x) in values.iter().enumerate() {
                let e = m.exponent(v);
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Replace each variable by a univariate Laurent polynomial.
    pub fn eval_laurent(&self, values: &[LaurentPoly]) -> LaurentPoly {
        assert_eq!(values.len(), self.vars.len());
        let mut powers: Vec<Vec<LaurentPoly>> = vec![vec![LaurentPoly::one()]; values.len()];
        let mut total = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut t = LaurentPoly::monomial(c.clone(), 0);
            for (v, x) in values.iter().enumerate() {
                let e = m.exponent(v) as usize;
                while powers[v].len() <= e {
                    let next = &powers[v][powers[v].len() - 1] * x;
                    powers[v].push(next);
                }
                if e > 0 {
                    t = &t * &powers[v][e];
                }
            }
            total += &t;
        }
        total
    }

    /// Set one variable to an integer, keeping the variable set.
    pub fn specialize(&self, var: usize, value: &BigInt) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            let coeff = c * num_traits::pow(value.clone(), e as usize);
            out.add_term(m.without_var(var), coeff);
        }
        out
    }

    /// Re-express over a larger variable set; `map[i]` is the new index of variable `i`.
    pub fn embed(&self, target: &Arc<VarSet>, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.vars.len());
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mono = (0..self.vars.len())
                .fold(Monomial::ONE, |acc, v| acc.mul(Monomial::var(map[v], m.exponent(v))));
            out.add_term(mono, c.clone());
        }
        out
    }

    /// The univariate Laurent polynomial in `var`, if no other variable occurs.
    pub fn to_univariate(&self, var: usize) -> Option<LaurentPoly> {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            if m.without_var(var) != Monomial::ONE {
                return None;
            }
            out.add_term(m.exponent(var) as i64, c.clone());
        }
        Some(out)
    }

    /// Leading coefficient when `var` is moved into the coefficient ring.
    ///
    /// Terms are grouped by their monomial in the remaining variables; the
    /// group of largest total degree (ties broken lexicographically) wins and
    /// its coefficient, a polynomial in `var` alone, is returned.
    pub fn leading_coeff_excluding(&self, var: usize) -> Self {
        let key = |m: Monomial| {
            let rest = m.without_var(var);
            (rest.total_degree(), rest)
        };
        let top = match self.terms.keys().map(|m| key(*m)).max() {
            Some(k) => k,
            None => return Self::zero(&self.vars),
        };
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            if key(*m) == top {
                out.add_term(Monomial::var(var, m.exponent(var)), c.clone());
            }
        }
        out
    }

    /// Terms as `(exponent vector, coefficient)`, in ascending lexicographic order.
    pub fn to_exponent_list(&self) -> Vec<(Vec<u32>, BigInt)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.exponents(self.vars.len()), c.clone()))
            .collect()
    }
}

impl fmt::Display for MultiPoly {
    /// Descending lexicographic order, explicit signs, `*` between factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let mut factors = Vec::new();
            for v in 0..self.vars.len() {
                match m.exponent(v) {
                    0 => {}
                    1 => factors.push(self.vars.name(v).to_string()),
                    e => factors.push(format!("{}^{}", self.vars.name(v), e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}
