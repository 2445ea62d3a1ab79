//! The generating function
//!
//! ```text
//! Z(x_0, x_1) = sum_m prod_α x_{α,1}^{-q_0^(α)} x_{α,0}^{q_1^(α)} prod_{α,i} binom(m_i^(α) + q_i^(α), m_i^(α))
//! q_i^(α) = ℓ^(α) + sum_{j>i} sum_β (j - i) (C[α][β] m_j^(β) - δ_{αβ} n_j^(α))
//! ```
//!
//! for simply-laced types, its closed form in terms of Q-system solutions,
//! and the constant-term argument that links it to the fermionic sums.
//!
//! Several checks expand along the one-parameter specialization
//! `x_{α,0} = c`, `x_{α,1} = t^{w_α}` where `w` is the smallest positive
//! integer vector with `C w` constant. Then every unit of `sum j m_j^(β)`
//! lowers the `t`-exponent by the same step, so truncation is well defined.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fermionic::{m_sum_at_one, FermionicInput, KrCounts, ModeConfig};
use crate::liealg::{CartanData, Weight};
use crate::par;
use crate::qsystem::{Boundary, QSystem};
use crate::symbolic::{binom_ext, expand_laurent_at_infinity, LaurentPoly, LaurentSeries, MultiPoly, Rational};

/// Input of the generating function.
#[derive(Clone, Debug)]
pub struct ZSpec {
    pub cartan: CartanData,
    pub lambda: Weight,
    pub n: KrCounts,
    pub k: usize,
}

impl ZSpec {
    pub fn new(cartan: CartanData, lambda: Weight, n: KrCounts, k: usize) -> Result<Self> {
        if !cartan.is_simply_laced() {
            return Err(Error::Unsupported(format!(
                "generating functions are defined for simply-laced types, not {}",
                cartan.name()
            )));
        }
        cartan.check_weight(&lambda)?;
        if !lambda.is_dominant() {
            return Err(Error::invalid(format!("{lambda} is not dominant")));
        }
        if n.rank() != cartan.rank() {
            return Err(Error::invalid("module data does not match the rank"));
        }
        if k == 0 {
            return Err(Error::invalid("truncation level k must be at least 1"));
        }
        if n.max_support() > k {
            return Err(Error::invalid(format!("n has entries beyond k = {k}")));
        }
        Ok(Self { cartan, lambda, n, k })
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    /// The spec with `n_1` dropped and indices shifted down, at level `k - 1`.
    pub fn shifted(&self) -> Result<Self> {
        let rows = self
            .n
            .rows()
            .iter()
            .map(|row| row.iter().skip(1).copied().collect())
            .collect();
        Self::new(self.cartan.clone(), self.lambda.clone(), KrCounts::from_rows(rows)?, self.k - 1)
    }

    /// Default per-index cap `ℓ + sum j n_j + 5` (largest over nodes).
    pub fn default_cap(&self) -> i64 {
        (0..self.rank())
            .map(|a| self.lambda.0[a] + self.n.weighted_total(a))
            .max()
            .unwrap_or(0)
            + 5
    }

    /// The matching fermionic input, with strings truncated at `k`.
    pub fn fermionic_input(&self) -> Result<FermionicInput> {
        Ok(FermionicInput::new(self.cartan.clone(), self.lambda.clone(), self.n.clone())?
            .with_max_string(Some(self.k)))
    }
}

/// `q_i^(α)` for `0 <= i <= k`, indexed `[α][i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExponents(pub Vec<Vec<i64>>);

impl QExponents {
    pub fn get(&self, a: usize, i: usize) -> i64 {
        self.0[a][i]
    }
}

/// Exponents for a configuration `m[β][j-1]`, `1 <= j <= k` (missing entries are zero).
pub fn q_exponents(spec: &ZSpec, m: &[Vec<i64>]) -> QExponents {
    let r = spec.rank();
    let k = spec.k;
    let mget = |b: usize, j: usize| m[b].get(j - 1).copied().unwrap_or(0);
    let q = (0..r)
        .map(|a| {
            (0..=k)
                .map(|i| {
                    let mut q = spec.lambda.0[a];
                    for j in i + 1..=k {
                        let mut inner = -spec.n.get(a, j);
                        for b in 0..r {
                            inner += spec.cartan.entry(a, b) * mget(b, j);
                        }
                        q += (j - i) as i64 * inner;
                    }
                    q
                })
                .collect()
        })
        .collect();
    QExponents(q)
}

/// Specialization weights `w` and the common value of `C w`.
pub fn specialization_weights(cartan: &CartanData) -> (Vec<i64>, i64) {
    let r = cartan.rank();
    let x = cartan.solve(&vec![1; r]);
    let l = x.iter().fold(1i64, |acc, v| acc.lcm(v.denom()));
    let ints: Vec<i64> = x.iter().map(|v| (*v * l).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, v| acc.gcd(v));
    let w: Vec<i64> = ints.into_iter().map(|v| v / g).collect();
    let step = (0..r).map(|b| cartan.entry(0, b) * w[b]).sum();
    (w, step)
}

fn formal_qsystem(spec: &ZSpec, depth: usize) -> Result<QSystem> {
    QSystem::with_depth(&spec.cartan, Boundary::Formal, depth)
}

/// `prod f^e` over a list of factors, positive and negative exponents separately.
fn power_product(scale: Rational, factors: &[(&Rational, i64)]) -> Result<Rational> {
    let mut den = Rational::one(scale.vars());
    let mut num = scale;
    for (f, e) in factors {
        if *e > 0 {
            num = num.mul(&f.pow(*e)?);
        } else if *e < 0 {
            den = den.mul(&f.pow(-*e)?);
        }
    }
    num.div(&den)
}

fn closed_from(spec: &ZSpec, qs: &QSystem) -> Result<Rational> {
    let k = spec.k;
    let mut factors: Vec<(&Rational, i64)> = Vec::new();
    for a in 0..spec.rank() {
        let l1 = spec.lambda.0[a] + 1;
        let x = |i: usize| qs.entry(a, i).expect("table deep enough");
        factors.push((x(1), 1));
        factors.push((x(0), -1));
        factors.push((x(k), l1));
        factors.push((x(k + 1), -l1));
        for j in 1..=k {
            let c = spec.n.get(a, j);
            if c > 0 {
                factors.push((x(j), c));
            }
        }
    }
    power_product(Rational::one(qs.vars()), &factors)
}

/// `prod_α x_{α,1} x_{α,k}^{ℓ+1} / (x_{α,0} x_{α,k+1}^{ℓ+1}) prod_j x_{α,j}^{n_j}` over
/// the formal variables `x_{α,0}, x_{α,1}`.
pub fn z_closed(spec: &ZSpec) -> Result<Rational> {
    let qs = formal_qsystem(spec, spec.k + 1)?;
    closed_from(spec, &qs)
}

/// Exponents of the closed form as a product of Q-system entries, keyed by `(α, i)`.
fn closed_exponents(spec: &ZSpec, offset: usize) -> BTreeMap<(usize, usize), i64> {
    let k = spec.k;
    let mut e = BTreeMap::new();
    let mut push = |a: usize, i: usize, p: i64| *e.entry((a, i + offset)).or_insert(0) += p;
    for a in 0..spec.rank() {
        let l1 = spec.lambda.0[a] + 1;
        push(a, 1, 1);
        push(a, 0, -1);
        push(a, k, l1);
        push(a, k + 1, -l1);
        for j in 1..=k {
            push(a, j, spec.n.get(a, j));
        }
    }
    e.retain(|_, p| *p != 0);
    e
}

/// Whether substituting `(x_0, x_1) -> (x_1, x_2)` into `x_{α,i}` gives `x_{α,i+1}`
/// for every `i <= depth`.
pub fn translation_certificate(cartan: &CartanData, depth: usize) -> Result<bool> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(String, usize), bool>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (cartan.name(), depth);
    if let Some(&ok) = cache.lock().expect("cache").get(&key) {
        return Ok(ok);
    }
    let r = cartan.rank();
    let qs = QSystem::with_depth(cartan, Boundary::Formal, depth + 1)?;
    let values: Vec<Rational> = (0..r)
        .map(|b| qs.entry(b, 1).unwrap().clone())
        .chain((0..r).map(|b| qs.entry(b, 2).unwrap().clone()))
        .collect();
    let mut ok = true;
    'outer: for i in 2..=depth {
        for a in 0..r {
            let moved = qs.entry(a, i).unwrap().substitute(&values)?;
            if !moved.equals(qs.entry(a, i + 1).unwrap()) {
                ok = false;
                break 'outer;
            }
        }
    }
    cache.lock().expect("cache").insert(key, ok);
    Ok(ok)
}

/// Check `Z^(k)(x_0, x_1) = prod_α x_{α,1}^{n_1+2} / (x_{α,0} x_{α,2}) Z^(k-1)(x_1, x_2)`
/// between closed forms.
///
/// Both sides are products of Q-system entries. The substitution
/// `(x_0, x_1) -> (x_1, x_2)` sends `x_{α,i}` to `x_{α,i+1}` (checked exactly by
/// [`translation_certificate`]), after which the identity reduces to equality
/// of exponents on each entry.
pub fn verify_recursion(spec: &ZSpec) -> Result<bool> {
    if spec.k < 2 {
        return Err(Error::invalid("the recursion needs k >= 2"));
    }
    if !translation_certificate(&spec.cartan, spec.k)? {
        return Ok(false);
    }
    let lhs = closed_exponents(spec, 0);
    let mut rhs = closed_exponents(&spec.shifted()?, 1);
    for a in 0..spec.rank() {
        *rhs.entry((a, 1)).or_insert(0) += spec.n.get(a, 1) + 2;
        *rhs.entry((a, 0)).or_insert(0) -= 1;
        *rhs.entry((a, 2)).or_insert(0) -= 1;
    }
    rhs.retain(|_, p| *p != 0);
    Ok(lhs == rhs)
}

/// Every `m[β][j-1]` with `j` in `from..=k`, entries at most `cap`, and
/// `sum j m_j^(β) = s`.
fn configs_with_weight(rank: usize, k: usize, from: usize, s: i64, cap: i64) -> Vec<Vec<Vec<i64>>> {
    let slots: Vec<(usize, usize)> = (0..rank).flat_map(|b| (from..=k).map(move |j| (b, j))).collect();
    let mut out = Vec::new();
    let mut cur = vec![vec![0i64; k]; rank];
    fn rec(
        slots: &[(usize, usize)],
        idx: usize,
        rest: i64,
        cap: i64,
        cur: &mut Vec<Vec<i64>>,
        out: &mut Vec<Vec<Vec<i64>>>,
    ) {
        if idx == slots.len() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let (b, j) = slots[idx];
        let j = j as i64;
        for c in 0..=(rest / j).min(cap) {
            cur[b][j as usize - 1] = c;
            rec(slots, idx + 1, rest - c * j, cap, cur, out);
        }
        cur[b][j as usize - 1] = 0;
    }
    rec(&slots, 0, s, cap, &mut cur, &mut out);
    out
}

fn binomial_weight(spec: &ZSpec, m: &[Vec<i64>], q: &QExponents, from: usize) -> Result<BigInt> {
    let mut w = BigInt::one();
    for (a, row) in m.iter().enumerate() {
        for j in from..=spec.k {
            let c = row[j - 1];
            if c > 0 {
                w *= binom_ext(c, q.get(a, j))?;
                if w.is_zero() {
                    return Ok(w);
                }
            }
        }
    }
    Ok(w)
}

/// Partial sums of `Z` along `x_{α,0} = x_0`, `x_{α,1} = t^{w_α}`.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    /// Coefficients are Laurent polynomials in `x_0`.
    pub series: LaurentSeries<LaurentPoly>,
    pub weights: Vec<i64>,
    pub mode_cap: i64,
    /// Whether the cap left every retained coefficient exact.
    pub complete: bool,
}

impl TruncatedSeries {
    /// Coefficients with `x_0` set to an integer.
    pub fn at_x0(&self, x0: i64) -> LaurentSeries<BigRational> {
        let x = BigRational::from_integer(x0.into());
        self.series.map(|c| {
            c.terms().fold(BigRational::zero(), |acc, (e, v)| {
                let p = if e >= 0 {
                    num_traits::pow(x.clone(), e as usize)
                } else {
                    num_traits::pow(x.recip(), (-e) as usize)
                };
                acc + p * BigRational::from_integer(v.clone())
            })
        })
    }
}

/// The defining series of `Z`, truncated to `order` exponents below the top.
///
/// Entries of `m` are bounded by `mode_cap`; the result is exact when
/// `mode_cap >= order - 1`.
pub fn z_direct_truncated(spec: &ZSpec, mode_cap: i64, order: usize) -> Result<TruncatedSeries> {
    let r = spec.rank();
    let (weights, step) = specialization_weights(&spec.cartan);
    let lead: i64 = (0..r)
        .map(|a| weights[a] * (spec.n.weighted_total(a) - spec.lambda.0[a]))
        .sum();
    let coeffs = (0..order as i64)
        .map(|s| {
            let mut c = LaurentPoly::zero();
            for m in configs_with_weight(r, spec.k, 1, s, mode_cap) {
                let q = q_exponents(spec, &m);
                let w = binomial_weight(spec, &m, &q, 1)?;
                if !w.is_zero() {
                    let x0_exp: i64 = (0..r).map(|a| q.get(a, 1)).sum();
                    c.add_term(x0_exp, w);
                }
            }
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TruncatedSeries {
        series: LaurentSeries { lead, step, coeffs },
        weights,
        mode_cap,
        complete: mode_cap >= order as i64 - 1,
    })
}

/// Evaluate a rational function of the formal variables along the specialization.
fn specialize(f: &Rational, rank: usize, weights: &[i64], x0: i64) -> Result<(LaurentPoly, LaurentPoly)> {
    let values: Vec<LaurentPoly> = (0..rank)
        .map(|_| LaurentPoly::monomial(BigInt::from(x0), 0))
        .chain(weights.iter().map(|&w| LaurentPoly::monomial(BigInt::one(), w)))
        .collect();
    f.eval_laurent(&values)
}

/// Expansion at `t = ∞` of a specialized rational function, down to exponent `lowest`.
fn expand_down_to(num: &LaurentPoly, den: &LaurentPoly, lowest: i64) -> Result<LaurentSeries<BigRational>> {
    let top = num.max_exp().unwrap_or(0) - den.max_exp().unwrap_or(0);
    let order = (top - lowest + 1).max(1) as usize;
    expand_laurent_at_infinity(num, den, order)
}

/// `z_closed` expanded along the specialization, down to exponent `lowest`.
pub fn closed_expansion(spec: &ZSpec, x0: i64, lowest: i64) -> Result<LaurentSeries<BigRational>> {
    let (weights, _) = specialization_weights(&spec.cartan);
    let z = z_closed(spec)?;
    let (num, den) = specialize(&z, spec.rank(), &weights, x0)?;
    expand_down_to(&num, &den, lowest)
}

#[derive(Clone, Debug)]
pub struct SeriesComparison {
    pub exponents_compared: usize,
    /// `(exponent, direct, closed)` for every disagreement.
    pub mismatches: Vec<(i64, BigRational, BigRational)>,
}

impl SeriesComparison {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare the direct series with the closed form at `x_0 = x0` on every retained exponent.
pub fn compare_direct_closed(spec: &ZSpec, order: usize, x0: i64) -> Result<SeriesComparison> {
    let direct = z_direct_truncated(spec, order as i64, order)?;
    let d = direct.at_x0(x0);
    let closed = closed_expansion(spec, x0, d.last_exponent())?;
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for e in (d.last_exponent()..=d.lead).rev() {
        let a = d.coeff_at(e).unwrap_or_else(BigRational::zero);
        let b = closed.coeff_at(e).unwrap_or_else(BigRational::zero);
        compared += 1;
        if a != b {
            mismatches.push((e, a, b));
        }
    }
    // Nothing above the top exponent on the closed side either.
    for e in d.lead + 1..=closed.lead {
        let b = closed.coeff_at(e).unwrap_or_else(BigRational::zero);
        if !b.is_zero() {
            mismatches.push((e, BigRational::zero(), b));
        }
    }
    Ok(SeriesComparison {
        exponents_compared: compared,
        mismatches,
    })
}

/// Check `sum_{m<cap} x^{-2m} binom(m+q, m)` against the expansion of `(x^2/(x^2-1))^{q+1}`.
pub fn m1_identity_check(q: i64, cap: usize) -> Result<bool> {
    if q < 0 || (cap as i64) < q + 5 {
        return Err(Error::invalid(format!("need q >= 0 and cap >= q + 5 (q = {q}, cap = {cap})")));
    }
    let lhs: Vec<BigRational> = (0..cap as i64)
        .map(|m| binom_ext(m, q).map(BigRational::from_integer))
        .collect::<Result<_>>()?;
    let num = LaurentPoly::monomial(BigInt::one(), 2).pow((q + 1) as u32);
    let den = LaurentPoly::from_terms([(2, 1), (0, -1)]).pow((q + 1) as u32);
    let rhs = expand_laurent_at_infinity(&num, &den, cap)?;
    Ok(rhs.lead == 0 && rhs.step == 2 && rhs.coeffs == lhs)
}

/// Constant term in `x_1` of the closed form at `x_0 = 1` (rank one).
pub fn constant_term_extract(spec: &ZSpec) -> Result<BigInt> {
    if spec.rank() != 1 {
        return Err(Error::Unsupported(
            "constant-term extraction is single-variable (rank one only)".into(),
        ));
    }
    let s = closed_expansion(spec, 1, 0)?;
    let c = s.coeff_at(0).unwrap_or_else(BigRational::zero);
    if !c.is_integer() {
        return Err(Error::invalid(format!("constant term {c} is not integral")));
    }
    Ok(c.to_integer())
}

/// `constant_term_extract` next to `M(1)` with strings truncated at `k`.
pub fn constant_term_vs_msum(spec: &ZSpec) -> Result<(BigInt, BigInt)> {
    Ok((constant_term_extract(spec)?, m_sum_at_one(&spec.fermionic_input()?)?))
}

/// The factorization at split point `p`:
/// `Z = prod_α x_{α,1} x_{α,p-1} / (x_{α,0} x_{α,p}) prod_{j<p} x_{α,j}^{n_j} * sum_tail x_p^{-q_{p-1}} x_{p-1}^{q_p} prod_{j>=p} binom`.
#[derive(Clone, Debug)]
pub struct PartialFactorization {
    spec: ZSpec,
    p: usize,
    formal: QSystem,
    prefactor: Rational,
}

pub fn z_partial(spec: &ZSpec, p: usize) -> Result<PartialFactorization> {
    if p == 0 || p > spec.k {
        return Err(Error::invalid(format!("split point {p} outside 1..={}", spec.k)));
    }
    let formal = formal_qsystem(spec, spec.k + 1)?;
    let mut factors: Vec<(&Rational, i64)> = Vec::new();
    for a in 0..spec.rank() {
        factors.push((formal.entry(a, 1).unwrap(), 1));
        factors.push((formal.entry(a, p - 1).unwrap(), 1));
        factors.push((formal.entry(a, 0).unwrap(), -1));
        factors.push((formal.entry(a, p).unwrap(), -1));
        for j in 1..p {
            factors.push((formal.entry(a, j).unwrap(), spec.n.get(a, j)));
        }
    }
    let prefactor = power_product(Rational::one(formal.vars()), &factors)?;
    Ok(PartialFactorization {
        spec: spec.clone(),
        p,
        formal,
        prefactor,
    })
}

impl PartialFactorization {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn prefactor(&self) -> &Rational {
        &self.prefactor
    }

    /// `(q_{p-1}, q_p)` per node; only `m_j` with `j >= p` matter.
    pub fn tail_exponents(&self, m: &[Vec<i64>]) -> (Vec<i64>, Vec<i64>) {
        let q = q_exponents(&self.spec, m);
        let r = self.spec.rank();
        (
            (0..r).map(|a| q.get(a, self.p - 1)).collect(),
            (0..r).map(|a| q.get(a, self.p)).collect(),
        )
    }

    /// The tail summand for `m` (entries below `p` ignored), over the formal variables.
    pub fn tail_term(&self, m: &[Vec<i64>]) -> Result<Rational> {
        let m = self.tail_only(m);
        let q = q_exponents(&self.spec, &m);
        let w = binomial_weight(&self.spec, &m, &q, self.p)?;
        let mut factors: Vec<(&Rational, i64)> = Vec::new();
        for a in 0..self.spec.rank() {
            factors.push((self.formal.entry(a, self.p).unwrap(), -q.get(a, self.p - 1)));
            factors.push((self.formal.entry(a, self.p - 1).unwrap(), q.get(a, self.p)));
        }
        let vars = self.formal.vars();
        power_product(Rational::constant(vars, w), &factors)
    }

    fn tail_only(&self, m: &[Vec<i64>]) -> Vec<Vec<i64>> {
        m.iter()
            .map(|row| {
                (1..=self.spec.k)
                    .map(|j| if j >= self.p { row.get(j - 1).copied().unwrap_or(0) } else { 0 })
                    .collect()
            })
            .collect()
    }

    /// Sum of prefactor times tail terms expanded along the specialization at
    /// `x_0 = 1`, over tails of weight below `order`; comparable with the
    /// direct series on its first `order` exponents.
    pub fn series_at_x0_one(&self, order: usize) -> Result<LaurentSeries<BigRational>> {
        let (weights, step) = specialization_weights(&self.spec.cartan);
        let r = self.spec.rank();
        let lead: i64 = (0..r)
            .map(|a| weights[a] * (self.spec.n.weighted_total(a) - self.spec.lambda.0[a]))
            .sum();
        let lowest = lead - step * (order as i64 - 1);
        let mut acc: BTreeMap<i64, BigRational> = BTreeMap::new();
        for s in 0..order as i64 {
            for m in configs_with_weight(r, self.spec.k, self.p, s, order as i64) {
                let term = self.prefactor.mul(&self.tail_term(&m)?);
                if term.is_zero() {
                    continue;
                }
                let (num, den) = specialize(&term, r, &weights, 1)?;
                let series = expand_down_to(&num, &den, lowest)?;
                for e in series.exponents() {
                    if e >= lowest {
                        *acc.entry(e).or_insert_with(BigRational::zero) += series.coeff_at(e).unwrap();
                    }
                }
            }
        }
        let coeffs = (0..order as i64)
            .map(|s| acc.get(&(lead - step * s)).cloned().unwrap_or_else(BigRational::zero))
            .collect();
        // Exponents between the retained ones must cancel; keep them visible to callers.
        let stray = acc
            .iter()
            .any(|(e, c)| (lead - e) % step != 0 && !c.is_zero());
        if stray {
            return Err(Error::invalid("partial expansion has terms off the step lattice"));
        }
        Ok(LaurentSeries { lead, step, coeffs })
    }
}

/// A negative-vacancy tail term whose constant-term certificate failed.
#[derive(Clone, Debug)]
pub struct LemmaCounterexample {
    pub p: usize,
    pub alpha: usize,
    pub config: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct LemmaReport {
    pub p: usize,
    pub cap: i64,
    /// Tail configurations examined.
    pub enumerated: u64,
    /// (configuration, node) pairs with `q_p >= 0 > q_{p-1}` that were certified.
    pub checked: u64,
    /// Of those, how many vanished outright through a zero binomial.
    pub zero_binomial: u64,
    pub counterexamples: Vec<LemmaCounterexample>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    fn merge(mut self, o: LemmaReport) -> LemmaReport {
        self.enumerated += o.enumerated;
        self.checked += o.checked;
        self.zero_binomial += o.zero_binomial;
        self.counterexamples.extend(o.counterexamples);
        self
    }
}

/// Check that tail terms with `q_p^(α) >= 0 > q_{p-1}^(α)` have no constant term in `x_{α,1}` at `x_0 = 1`.
///
/// The full summand (prefactor included) is
/// `prod_β x_{β,1} x_{β,p-1}^{q_p+1} x_{β,p}^{-q_{p-1}-1} prod_{j<p} x_{β,j}^{n_j}` times binomials.
/// Its factors with non-negative exponent form a polynomial `N`, the others
/// a denominator. For rank one there is no denominator and the term is
/// expanded as a Laurent polynomial in `x_1`: its constant coefficient must
/// vanish and its lowest exponent must be at least 1. In higher rank
/// the certificate is that `N` is divisible by `x_{α,1}` and every
/// denominator factor has leading coefficient `±1` as a polynomial in the
/// other variables over `Z[x_{α,1}]`, so its inverse expands without
/// negative powers of `x_{α,1}`.
pub fn constant_term_lemma_check(spec: &ZSpec, p: usize, cap: i64) -> Result<LemmaReport> {
    if p == 0 || p > spec.k {
        return Err(Error::invalid(format!("split point {p} outside 1..={}", spec.k)));
    }
    let r = spec.rank();
    let k = spec.k;
    let kr = QSystem::with_depth(&spec.cartan, Boundary::Kr, k)?;
    let polys: Vec<Vec<MultiPoly>> = (0..r)
        .map(|a| {
            kr.row(a)[..=k]
                .iter()
                .map(|x| x.to_polynomial().ok_or_else(|| Error::invalid("Q-system entry is not polynomial")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let slots: Vec<(usize, usize)> = (0..r).flat_map(|b| (p..=k).map(move |j| (b, j))).collect();
    let radix = (cap + 1) as usize;
    let total = radix
        .checked_pow(slots.len() as u32)
        .ok_or_else(|| Error::CostGuard("tail enumeration too large".into()))?;
    let empty = || LemmaReport {
        p,
        cap,
        ..LemmaReport::default()
    };
    let report = par::fold_range(
        total,
        empty,
        |mut rep, mut idx| {
            let mut m = vec![vec![0i64; k]; r];
            for &(b, j) in slots.iter().rev() {
                m[b][j - 1] = (idx % radix) as i64;
                idx /= radix;
            }
            rep.enumerated += 1;
            let q = q_exponents(spec, &m);
            let nodes: Vec<usize> = (0..r).filter(|&a| q.get(a, p) >= 0 && q.get(a, p - 1) < 0).collect();
            if nodes.is_empty() {
                return rep;
            }
            let weight = match binomial_weight(spec, &m, &q, p) {
                Ok(w) => w,
                Err(e) => {
                    rep.counterexamples.push(LemmaCounterexample {
                        p,
                        alpha: nodes[0],
                        config: config_string(&m),
                        detail: e.to_string(),
                    });
                    return rep;
                }
            };
            rep.checked += nodes.len() as u64;
            if weight.is_zero() {
                rep.zero_binomial += nodes.len() as u64;
                return rep;
            }
            // Net exponent of every x_{β,i}.
            let mut exps: BTreeMap<(usize, usize), i64> = BTreeMap::new();
            for b in 0..r {
                *exps.entry((b, 1)).or_default() += 1;
                *exps.entry((b, p - 1)).or_default() += q.get(b, p) + 1;
                *exps.entry((b, p)).or_default() += -q.get(b, p - 1) - 1;
                for j in 1..p {
                    *exps.entry((b, j)).or_default() += spec.n.get(b, j);
                }
            }
            let mut num = MultiPoly::constant(kr.vars(), weight);
            let mut den: Vec<(usize, usize)> = Vec::new();
            for (&(b, i), &e) in &exps {
                if i == 0 {
                    continue;
                }
                if e > 0 {
                    num = num.mul(&polys[b][i].pow(e as u32));
                } else if e < 0 {
                    den.push((b, i));
                }
            }
            for &a in &nodes {
                if let Some(detail) = certify(&num, &den, &polys, a, r) {
                    rep.counterexamples.push(LemmaCounterexample {
                        p,
                        alpha: a,
                        config: config_string(&m),
                        detail,
                    });
                }
            }
            rep
        },
        LemmaReport::merge,
    );
    let mut report = report;
    report.p = p;
    report.cap = cap;
    Ok(report)
}

fn certify(num: &MultiPoly, den: &[(usize, usize)], polys: &[Vec<MultiPoly>], a: usize, r: usize) -> Option<String> {
    if num.is_zero() {
        return None;
    }
    if r == 1 {
        let lp = num.to_univariate(0)?;
        if !lp.coeff(0).is_zero() || lp.min_exp() < Some(1) {
            return Some(format!("term {lp} has a constant term"));
        }
        return None;
    }
    if num.min_degree_in(a).unwrap_or(0) < 1 {
        return Some(format!("numerator {num} is not divisible by x_{}_1", a + 1));
    }
    for &(b, i) in den {
        let lc = polys[b][i].leading_coeff_excluding(a);
        let unit = lc
            .as_monomial()
            .is_some_and(|(m, c)| m == crate::symbolic::Monomial::ONE && (c.is_one() || (-c).is_one()));
        if !unit {
            return Some(format!(
                "denominator factor x_{}_{} = {} has leading coefficient {lc}",
                b + 1,
                i,
                polys[b][i]
            ));
        }
    }
    None
}

fn config_string(m: &[Vec<i64>]) -> String {
    ModeConfig { m: m.to_vec() }.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(alg: &str, l: &[i64], n: &str, k: usize) -> ZSpec {
        let c: CartanData = alg.parse().unwrap();
        let counts = KrCounts::parse(c.rank(), n).unwrap();
        ZSpec::new(c, Weight(l.to_vec()), counts, k).unwrap()
    }

    fn int_coeffs(s: &LaurentSeries<BigRational>) -> Vec<i64> {
        s.coeffs.iter().map(|c| i64::try_from(&c.to_integer()).unwrap()).collect()
    }

    #[test]
    fn q_exponents_match_vacancies_on_zero_weight() {
        // A1, ℓ = 0, n_1 = 4, m_1 = 2: q_0 = 0 and q_1 = P_1 = 0.
        let s = spec("A1", &[0], "1:1=4", 2);
        let q = q_exponents(&s, &[vec![2, 0]]);
        assert_eq!(q.0, vec![vec![0, 0, 0]]);
        let q = q_exponents(&s, &[vec![0, 1]]);
        assert_eq!(q.0, vec![vec![0, 2, 0]]);
    }

    #[test]
    fn weights() {
        assert_eq!(specialization_weights(&"A1".parse().unwrap()), (vec![1], 2));
        assert_eq!(specialization_weights(&"A2".parse().unwrap()), (vec![1, 1], 1));
        assert_eq!(specialization_weights(&"A3".parse().unwrap()), (vec![3, 4, 3], 2));
    }

    #[test]
    fn closed_form_examples() {
        // k = 2, ℓ = 0, n = (4, 0), x_0 = 1: (x^7 - x^5) / (x^3 - 2x) = x^4 + x^2 + 2 + 4x^-2 + ...
        let s = spec("A1", &[0], "1:1=4", 2);
        let e = closed_expansion(&s, 1, -2).unwrap();
        assert_eq!((e.lead, e.step), (4, 2));
        assert_eq!(int_coeffs(&e)[..4], [1, 1, 2, 4]);
        // k = 1: x_1^{ℓ+n_1+2} / (x_0 x_2^{ℓ+1})
        let s = spec("A1", &[1], "1:1=2", 1);
        let z = z_closed(&s).unwrap();
        let qs = QSystem::with_depth(&s.cartan, Boundary::Formal, 2).unwrap();
        let x0 = qs.entry(0, 0).unwrap();
        let x1 = qs.entry(0, 1).unwrap();
        let x2 = qs.entry(0, 2).unwrap();
        let expected = x1.pow(5).unwrap().div(&x0.mul(&x2.pow(2).unwrap())).unwrap();
        assert!(z.equals(&expected));
        // ℓ = 0, n = 0, k = 1: x_1^2 / (x_0 x_2)
        let s = spec("A1", &[0], "", 1);
        let expected = x1.square().div(&x0.mul(x2)).unwrap();
        assert!(z_closed(&s).unwrap().equals(&expected));
    }

    #[test]
    fn direct_series_examples() {
        let s = spec("A1", &[0], "1:1=4", 2);
        let d = z_direct_truncated(&s, 5, 6).unwrap();
        assert!(d.complete);
        assert_eq!(int_coeffs(&d.at_x0(1))[..3], [1, 1, 2]);
        // k = 1, n = 0: geometric series in x^-2
        let s = spec("A1", &[0], "", 1);
        let d = z_direct_truncated(&s, 8, 8).unwrap();
        assert_eq!(d.series.lead, 0);
        assert_eq!(int_coeffs(&d.at_x0(1)), vec![1; 8]);
    }

    #[test]
    fn direct_matches_closed() {
        for (l, n, k) in [(0, "1:1=4", 2), (2, "1:1=1;1:2=1;1:3=1", 3), (1, "1:2=2", 2)] {
            let s = spec("A1", &[l], n, k);
            for x0 in [1, 2, -3] {
                let c = compare_direct_closed(&s, 12, x0).unwrap();
                assert!(c.passed(), "ℓ={l} n={n} x0={x0}: {:?}", c.mismatches);
                assert!(c.exponents_compared >= 12);
            }
        }
        let s = spec("A2", &[0, 1], "1:1=2", 2);
        let c = compare_direct_closed(&s, 10, 1).unwrap();
        assert!(c.passed(), "{:?}", c.mismatches);
    }

    #[test]
    fn recursion_examples() {
        assert!(verify_recursion(&spec("A1", &[0], "1:1=4", 2)).unwrap());
        assert!(verify_recursion(&spec("A1", &[2], "1:1=1;1:2=1;1:3=1", 3)).unwrap());
        assert!(verify_recursion(&spec("A2", &[0, 0], "1:1=2", 2)).unwrap());
        assert!(verify_recursion(&spec("A1", &[0], "", 1)).is_err());
    }

    #[test]
    fn m1_identity() {
        assert!(m1_identity_check(0, 6).unwrap());
        assert!(m1_identity_check(2, 8).unwrap());
        assert!(m1_identity_check(5, 12).unwrap());
        assert!(m1_identity_check(5, 6).is_err());
    }

    #[test]
    fn constant_terms() {
        assert_eq!(constant_term_extract(&spec("A1", &[0], "1:1=4", 2)).unwrap(), 2.into());
        assert_eq!(constant_term_extract(&spec("A1", &[2], "1:1=4", 2)).unwrap(), 3.into());
        assert_eq!(constant_term_extract(&spec("A1", &[0], "1:1=2", 1)).unwrap(), 1.into());
        let (c, m) = constant_term_vs_msum(&spec("A1", &[0], "1:1=4", 1)).unwrap();
        assert_eq!((c.clone(), m), (1.into(), 1.into()));
    }

    #[test]
    fn partial_factorization_reproduces_direct_series() {
        let s = spec("A1", &[0], "1:1=4", 2);
        let direct = z_direct_truncated(&s, 8, 8).unwrap().at_x0(1);
        for p in 1..=2 {
            let pf = z_partial(&s, p).unwrap();
            assert_eq!(pf.series_at_x0_one(8).unwrap(), direct, "p={p}");
        }
        assert!(z_partial(&s, 0).is_err());
        assert!(z_partial(&s, 3).is_err());
    }

    #[test]
    fn partial_tail_term_example() {
        // k = 2, p = 2, ℓ = 0, n = (4, 0), m_2 = 1: q_2 = 0, q_1 = 2.
        let s = spec("A1", &[0], "1:1=4", 2);
        let pf = z_partial(&s, 2).unwrap();
        let m = vec![vec![0, 1]];
        assert_eq!(pf.tail_exponents(&m), (vec![2], vec![0]));
        let t = pf.tail_term(&m).unwrap();
        let qs = QSystem::with_depth(&s.cartan, Boundary::Formal, 3).unwrap();
        let expected = Rational::one(qs.vars()).div(&qs.entry(0, 2).unwrap().square()).unwrap();
        assert!(t.equals(&expected));
    }

    #[test]
    fn lemma_small_cases() {
        for (n, k) in [("1:2=1", 2), ("1:1=2;1:2=1", 2)] {
            let s = spec("A1", &[0], n, k);
            for p in 1..=k {
                let rep = constant_term_lemma_check(&s, p, s.default_cap()).unwrap();
                assert!(rep.passed(), "{:?}", rep.counterexamples);
            }
        }
        let s = spec("A2", &[0, 0], "1:1=1;2:1=1", 2);
        for p in 1..=2 {
            let rep = constant_term_lemma_check(&s, p, 3).unwrap();
            assert!(rep.passed(), "{:?}", rep.counterexamples);
            assert!(rep.checked > 0);
        }
    }

    #[test]
    fn non_simply_laced_rejected() {
        let c: CartanData = "B2".parse().unwrap();
        assert!(ZSpec::new(c, Weight(vec![0, 0]), KrCounts::empty(2), 2).is_err());
    }
}
