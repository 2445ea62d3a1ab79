//! Restricted (M) and unrestricted (N) fermionic sums.
//!
//! A configuration is a family `m[α][i-1] = m_i^(α)` of string counts with
//! `sum_i i m_i^(α) = m^(α)` for every node, where the totals `m^(α)` are
//! fixed by the weight condition `C m = sum_j j n_j - λ`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::liealg::{CartanData, Weight};
use crate::par;
use crate::symbolic::{binom_ext, qbinom, GradedPoly, HalfInt};

/// Quadratic form used for the power of `q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Grading {
    /// `Q = 1/2 sum m_i P_i`.
    #[default]
    Paper,
    /// `Q = 1/2 sum B m m`.
    Cocharge,
}

impl Grading {
    pub const ALL: [Grading; 2] = [Grading::Paper, Grading::Cocharge];

    pub fn as_str(self) -> &'static str {
        match self {
            Grading::Paper => "paper",
            Grading::Cocharge => "cocharge",
        }
    }
}

impl FromStr for Grading {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Grading::Paper),
            "cocharge" => Ok(Grading::Cocharge),
            _ => Err(Error::invalid(format!("unknown grading {s:?} (expected paper|cocharge)"))),
        }
    }
}

/// Which vacancy numbers must be non-negative for a configuration to count in M.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum VacancyScope {
    /// Every string length up to the tail-stability bound.
    #[default]
    AllIndices,
    /// Only lengths `i` with `m_i^(α) > 0`.
    OccupiedOnly,
}

impl VacancyScope {
    pub fn as_str(self) -> &'static str {
        match self {
            VacancyScope::AllIndices => "all",
            VacancyScope::OccupiedOnly => "occupied",
        }
    }
}

impl FromStr for VacancyScope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" | "all_indices" => Ok(VacancyScope::AllIndices),
            "occupied" | "occupied_only" => Ok(VacancyScope::OccupiedOnly),
            _ => Err(Error::invalid(format!("unknown vacancy scope {s:?} (expected all|occupied)"))),
        }
    }
}

/// Multiplicities `n_j^(α)` of the KR modules `W(α, j)` in the tensor product.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KrCounts {
    n: Vec<Vec<i64>>,
}

impl KrCounts {
    pub fn empty(rank: usize) -> Self {
        Self { n: vec![Vec::new(); rank] }
    }

    /// From rows `n[α][j-1]`. Trailing zeros are dropped.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        if rows.iter().flatten().any(|&c| c < 0) {
            return Err(Error::invalid("KR multiplicities must be non-negative"));
        }
        let mut out = Self { n: rows };
        out.trim();
        Ok(out)
    }

    /// Parse `"α:j=count;..."` with 1-based `α` and `j`; repeated keys add up.
    pub fn parse(rank: usize, s: &str) -> Result<Self> {
        let mut out = Self::empty(rank);
        for entry in s.split(';').map(str::trim).filter(|e| !e.is_empty()) {
            let bad = || Error::invalid(format!("bad module entry {entry:?} (expected α:j=count)"));
            let (key, count) = entry.split_once('=').ok_or_else(bad)?;
            let (a, j) = key.split_once(':').ok_or_else(bad)?;
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let j: usize = j.trim().parse().map_err(|_| bad())?;
            let count: i64 = count.trim().parse().map_err(|_| bad())?;
            if a == 0 || a > rank {
                return Err(Error::invalid(format!("node {a} out of range 1..={rank}")));
            }
            if j == 0 || count < 0 {
                return Err(bad());
            }
            out.add(a - 1, j, count);
        }
        out.trim();
        Ok(out)
    }

    fn trim(&mut self) {
        for row in &mut self.n {
            while row.last() == Some(&0) {
                row.pop();
            }
        }
    }

    pub fn add(&mut self, a: usize, j: usize, count: i64) {
        let row = &mut self.n[a];
        if row.len() < j {
            row.resize(j, 0);
        }
        row[j - 1] += count;
        self.trim();
    }

    pub fn rank(&self) -> usize {
        self.n.len()
    }

    /// `n_j^(α)` for `j >= 1`.
    pub fn get(&self, a: usize, j: usize) -> i64 {
        self.n[a].get(j - 1).copied().unwrap_or(0)
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.n
    }

    /// Largest `j` with some `n_j^(α) > 0` (0 when empty).
    pub fn max_support(&self) -> usize {
        self.n.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `sum_j j n_j^(α)`.
    pub fn weighted_total(&self, a: usize) -> i64 {
        self.n[a].iter().enumerate().map(|(j, c)| (j as i64 + 1) * c).sum()
    }

    /// `sum_{α,j} j n_j^(α)`.
    pub fn load(&self) -> i64 {
        (0..self.rank()).map(|a| self.weighted_total(a)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.n.iter().all(Vec::is_empty)
    }

    /// The list `(α, j)` with repetition, in order of `α` then `j`.
    pub fn modules(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, row) in self.n.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                out.extend(std::iter::repeat_n((a, j + 1), c as usize));
            }
        }
        out
    }
}

impl fmt::Display for KrCounts {
    /// Same grammar as [`KrCounts::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (a, row) in self.n.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c > 0 {
                    parts.push(format!("{}:{}={c}", a + 1, j + 1));
                }
            }
        }
        f.write_str(&parts.join(";"))
    }
}

#[derive(Clone, Debug)]
pub struct FermionicInput {
    pub cartan: CartanData,
    pub lambda: Weight,
    pub n: KrCounts,
    pub grading: Grading,
    pub scope: VacancyScope,
    /// Longest string length allowed (`m_i = 0` for `i` above it). `None` means unbounded.
    pub max_string: Option<usize>,
}

impl FermionicInput {
    pub fn new(cartan: CartanData, lambda: Weight, n: KrCounts) -> Result<Self> {
        cartan.check_weight(&lambda)?;
        if n.rank() != cartan.rank() {
            return Err(Error::invalid(format!(
                "module data has {} nodes, {} has rank {}",
                n.rank(),
                cartan.name(),
                cartan.rank()
            )));
        }
        Ok(Self {
            cartan,
            lambda,
            n,
            grading: Grading::default(),
            scope: VacancyScope::default(),
            max_string: None,
        })
    }

    pub fn with_grading(mut self, grading: Grading) -> Self {
        self.grading = grading;
        self
    }

    pub fn with_scope(mut self, scope: VacancyScope) -> Self {
        self.scope = scope;
        self
    }

    pub fn with_max_string(mut self, k: Option<usize>) -> Self {
        self.max_string = k;
        self
    }
}

/// The totals `m^(α)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModeTotals(pub Vec<i64>);

/// String counts `m[α][i-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModeConfig {
    pub m: Vec<Vec<i64>>,
}

impl ModeConfig {
    pub fn get(&self, a: usize, i: usize) -> i64 {
        self.m[a].get(i - 1).copied().unwrap_or(0)
    }

    /// Largest `i` with `m_i^(α) > 0` over all nodes.
    pub fn max_part(&self) -> usize {
        self.m
            .iter()
            .map(|row| row.iter().rposition(|&c| c > 0).map_or(0, |p| p + 1))
            .max()
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.m.iter().flatten().all(|&c| c == 0)
    }
}

impl fmt::Display for ModeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (a, row) in self.m.iter().enumerate() {
            for (i, &c) in row.iter().enumerate() {
                if c > 0 {
                    parts.push(format!("{}:{}={c}", a + 1, i + 1));
                }
            }
        }
        f.write_str(&parts.join(";"))
    }
}

/// Solve `sum_β C[α][β] m^(β) = sum_j j n_j^(α) - λ^(α)` in non-negative integers.
pub fn solve_weight_condition(cartan: &CartanData, lambda: &Weight, n: &KrCounts) -> Option<ModeTotals> {
    let rhs: Vec<i64> = (0..cartan.rank())
        .map(|a| n.weighted_total(a) - lambda.0[a])
        .collect();
    let sol = cartan.solve(&rhs);
    sol.iter()
        .map(|x| (x.is_integer() && *x.numer() >= 0).then(|| x.to_integer()))
        .collect::<Option<Vec<_>>>()
        .map(ModeTotals)
}

/// `P_i^(α) = sum_j min(i,j) n_j^(α) - sum_{β,j} B(α,β,i,j) m_j^(β)`.
pub fn vacancy(cartan: &CartanData, n: &KrCounts, config: &ModeConfig, a: usize, i: usize) -> i64 {
    let i = i as i64;
    let mut p: i64 = n.rows()[a]
        .iter()
        .enumerate()
        .map(|(j, &c)| i.min(j as i64 + 1) * c)
        .sum();
    for (b, row) in config.m.iter().enumerate() {
        if cartan.entry(a, b) == 0 {
            continue;
        }
        for (j, &c) in row.iter().enumerate() {
            if c != 0 {
                p -= cartan.b_entry(a, b, i, j as i64 + 1) * c;
            }
        }
    }
    p
}

/// Index beyond which every vacancy number equals `λ^(α)`.
pub fn tail_bound(cartan: &CartanData, n: &KrCounts, config: &ModeConfig) -> usize {
    config.max_part() * cartan.max_abs_offdiag().max(1) as usize + n.max_support()
}

/// `Q` of a configuration, given its vacancy numbers `p[α][i-1]` on occupied indices.
pub fn energy(cartan: &CartanData, n: &KrCounts, config: &ModeConfig, grading: Grading) -> HalfInt {
    match grading {
        Grading::Paper => {
            let mut twice = 0;
            for (a, row) in config.m.iter().enumerate() {
                for (i, &c) in row.iter().enumerate() {
                    if c != 0 {
                        twice += c * vacancy(cartan, n, config, a, i + 1);
                    }
                }
            }
            HalfInt(twice)
        }
        Grading::Cocharge => {
            let mut twice = 0;
            for (a, ra) in config.m.iter().enumerate() {
                for (b, rb) in config.m.iter().enumerate() {
                    if cartan.entry(a, b) == 0 {
                        continue;
                    }
                    for (i, &ca) in ra.iter().enumerate() {
                        if ca == 0 {
                            continue;
                        }
                        for (j, &cb) in rb.iter().enumerate() {
                            if cb != 0 {
                                twice += cartan.b_entry(a, b, i as i64 + 1, j as i64 + 1) * ca * cb;
                            }
                        }
                    }
                }
            }
            HalfInt(twice)
        }
    }
}

/// Partitions of `total` into parts of size at most `max_part`, as multiplicity
/// vectors of length `min(total, max_part)`, ordered lexicographically in
/// `(m_top, ..., m_1)`.
pub fn partitions(total: i64, max_part: usize) -> Vec<Vec<i64>> {
    fn rec(i: usize, rest: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == 1 {
            cur[0] = rest;
            out.push(cur.clone());
            return;
        }
        for c in 0..=rest / i as i64 {
            cur[i - 1] = c;
            rec(i - 1, rest - c * i as i64, cur, out);
        }
        cur[i - 1] = 0;
    }
    if total == 0 {
        return vec![Vec::new()];
    }
    let top = (total as usize).min(max_part);
    if top == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(top, total, &mut vec![0; top], &mut out);
    out
}

/// All configurations with the given totals, indexable for parallel traversal.
#[derive(Clone, Debug)]
pub struct ModeSpace {
    per_node: Vec<Vec<Vec<i64>>>,
    len: usize,
}

impl ModeSpace {
    pub fn new(totals: &ModeTotals, max_string: Option<usize>) -> Self {
        let per_node: Vec<Vec<Vec<i64>>> = totals
            .0
            .iter()
            .map(|&t| partitions(t, max_string.unwrap_or(usize::MAX)))
            .collect();
        let len = per_node.iter().map(Vec::len).product();
        Self { per_node, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The `idx`-th configuration; node 0 varies slowest.
    pub fn get(&self, mut idx: usize) -> ModeConfig {
        let mut m = vec![Vec::new(); self.per_node.len()];
        for (a, parts) in self.per_node.iter().enumerate().rev() {
            m[a] = parts[idx % parts.len()].clone();
            idx /= parts.len();
        }
        ModeConfig { m }
    }

    pub fn iter(&self) -> impl Iterator<Item = ModeConfig> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

/// Every configuration with `sum_i i m_i^(α) = m^(α)`, each exactly once.
pub fn enumerate_modes(totals: &ModeTotals) -> impl Iterator<Item = ModeConfig> {
    let space = ModeSpace::new(totals, None);
    (0..space.len()).map(move |i| space.get(i))
}

/// Per-configuration evaluation.
#[derive(Clone, Debug)]
pub struct Term {
    pub energy: HalfInt,
    /// `q^Q prod qbinom(m_i, P_i)` over occupied indices.
    pub value: GradedPoly,
    /// Vacancy numbers `p[α][i-1]` for `i` up to the tail bound.
    pub vacancies: Vec<Vec<i64>>,
    pub restricted_all: bool,
    pub restricted_occupied: bool,
    /// Whether `P_i = λ^(α)` held for the three indices past the tail bound.
    pub tail_stable: bool,
}

pub fn evaluate_term(input: &FermionicInput, config: &ModeConfig) -> Result<Term> {
    let cartan = &input.cartan;
    let n = &input.n;
    let bound = tail_bound(cartan, n, config).max(1);
    let mut vacancies = vec![Vec::with_capacity(bound); cartan.rank()];
    let mut restricted_all = true;
    let mut restricted_occupied = true;
    let mut tail_stable = true;
    let mut value = GradedPoly::one();
    for a in 0..cartan.rank() {
        for i in 1..=bound {
            let p = vacancy(cartan, n, config, a, i);
            vacancies[a].push(p);
            let m = config.get(a, i);
            if p < 0 {
                restricted_all = false;
                if m > 0 {
                    restricted_occupied = false;
                }
            }
            if m > 0 {
                value = &value * &qbinom(m, p)?;
            }
        }
        for s in 1..=3 {
            if vacancy(cartan, n, config, a, bound + s) != input.lambda.0[a] {
                tail_stable = false;
            }
        }
    }
    let energy = energy(cartan, n, config, input.grading);
    Ok(Term {
        energy,
        value: value.shift(energy),
        vacancies,
        restricted_all,
        restricted_occupied,
        tail_stable,
    })
}

/// How the configurations split up.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TermStats {
    pub total: u64,
    /// Kept by the vacancy restriction of the input's scope.
    pub restricted: u64,
    /// Outside the restriction with a nonzero summand (these cancel among themselves).
    pub negative_nonzero: u64,
    /// Outside the restriction with a vanishing summand.
    pub negative_zero: u64,
    /// Kept under one scope but not the other.
    pub scope_divergent: u64,
    /// Configurations whose vacancies failed to settle at `λ` past the tail bound.
    pub tail_violations: u64,
}

impl TermStats {
    fn merge(mut self, o: TermStats) -> TermStats {
        self.total += o.total;
        self.restricted += o.restricted;
        self.negative_nonzero += o.negative_nonzero;
        self.negative_zero += o.negative_zero;
        self.scope_divergent += o.scope_divergent;
        self.tail_violations += o.tail_violations;
        self
    }
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub totals: Option<ModeTotals>,
    pub m: GradedPoly,
    pub n: GradedPoly,
    pub equal_graded: bool,
    pub equal_at_1: bool,
    pub stats: TermStats,
    pub elapsed: Duration,
}

impl IdentityReport {
    pub fn m_at_1(&self) -> BigInt {
        self.m.value_at_one()
    }

    pub fn n_at_1(&self) -> BigInt {
        self.n.value_at_one()
    }
}

struct Acc {
    m: GradedPoly,
    n: GradedPoly,
    stats: TermStats,
    err: Option<Error>,
}

impl Acc {
    fn new() -> Self {
        Self {
            m: GradedPoly::zero(),
            n: GradedPoly::zero(),
            stats: TermStats::default(),
            err: None,
        }
    }

    fn merge(mut self, o: Acc) -> Acc {
        self.m += &o.m;
        self.n += &o.n;
        self.stats = self.stats.merge(o.stats);
        self.err = self.err.or(o.err);
        self
    }
}

/// Compute M and N over one shared enumeration.
pub fn verify_mn(input: &FermionicInput) -> Result<IdentityReport> {
    let start = Instant::now();
    let Some(totals) = solve_weight_condition(&input.cartan, &input.lambda, &input.n) else {
        return Ok(IdentityReport {
            totals: None,
            m: GradedPoly::zero(),
            n: GradedPoly::zero(),
            equal_graded: true,
            equal_at_1: true,
            stats: TermStats::default(),
            elapsed: start.elapsed(),
        });
    };
    let space = ModeSpace::new(&totals, input.max_string);
    let acc = par::fold_range(
        space.len(),
        Acc::new,
        |mut acc, idx| {
            if acc.err.is_some() {
                return acc;
            }
            let config = space.get(idx);
            match evaluate_term(input, &config) {
                Ok(term) => {
                    let kept = match input.scope {
                        VacancyScope::AllIndices => term.restricted_all,
                        VacancyScope::OccupiedOnly => term.restricted_occupied,
                    };
                    acc.stats.total += 1;
                    if term.restricted_all != term.restricted_occupied {
                        acc.stats.scope_divergent += 1;
                    }
                    if !term.tail_stable {
                        acc.stats.tail_violations += 1;
                    }
                    if kept {
                        acc.stats.restricted += 1;
                        acc.m += &term.value;
                    } else if term.value.is_zero() {
                        acc.stats.negative_zero += 1;
                    } else {
                        acc.stats.negative_nonzero += 1;
                    }
                    acc.n += &term.value;
                }
                Err(e) => acc.err = Some(e),
            }
            acc
        },
        Acc::merge,
    );
    if let Some(e) = acc.err {
        return Err(e);
    }
    let equal_graded = acc.m == acc.n;
    let equal_at_1 = acc.m.value_at_one() == acc.n.value_at_one();
    Ok(IdentityReport {
        totals: Some(totals),
        m: acc.m,
        n: acc.n,
        equal_graded,
        equal_at_1,
        stats: acc.stats,
        elapsed: start.elapsed(),
    })
}

pub fn m_sum(input: &FermionicInput) -> Result<GradedPoly> {
    Ok(verify_mn(input)?.m)
}

pub fn n_sum(input: &FermionicInput) -> Result<GradedPoly> {
    Ok(verify_mn(input)?.n)
}

/// `M(1)` straight from ordinary binomials, without building graded polynomials.
pub fn m_sum_at_one(input: &FermionicInput) -> Result<BigInt> {
    let Some(totals) = solve_weight_condition(&input.cartan, &input.lambda, &input.n) else {
        return Ok(BigInt::zero());
    };
    let space = ModeSpace::new(&totals, input.max_string);
    let mut total = BigInt::zero();
    for config in space.iter() {
        let bound = tail_bound(&input.cartan, &input.n, &config).max(1);
        let mut term = BigInt::one();
        let mut kept = true;
        'outer: for a in 0..input.cartan.rank() {
            for i in 1..=bound {
                let m = config.get(a, i);
                if input.scope == VacancyScope::OccupiedOnly && m == 0 {
                    continue;
                }
                let p = vacancy(&input.cartan, &input.n, &config, a, i);
                if p < 0 {
                    kept = false;
                    break 'outer;
                }
                term *= binom_ext(m, p)?;
            }
        }
        if kept {
            total += term;
        }
    }
    Ok(total)
}
