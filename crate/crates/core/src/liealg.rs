//! Cartan data for the simple Lie algebras.
//!
//! Nodes are labelled as in Bourbaki and indexed from 0 in the API (node
//! `α` of the tables is index `α - 1`). Matrices follow
//!
//! ```text
//! C[a][b] = 2 (α_a, α_b) / (α_a, α_a)
//! ```
//!
//! so row `a` carries the multiplier when `α_a` is the shorter root. Under
//! this convention `B2 = [[2,-1],[-2,2]]`, `C2 = [[2,-2],[-1,2]]` and
//! `G2 = [[2,-3],[-1,2]]` (node 1 short, node 2 long).

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// Squared lengths of the simple roots and the edges of the Dynkin diagram.
fn diagram(family: Family, rank: usize) -> Result<(Vec<i64>, Vec<(usize, usize)>)> {
    let bad = || Err(Error::invalid(format!("{}{rank} is not a simple type", family.letter())));
    let chain = |n: usize| (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
    let out = match family {
        Family::A if rank >= 1 => (vec![2; rank], chain(rank)),
        Family::B if rank >= 2 => {
            let mut len = vec![4; rank];
            len[rank - 1] = 2;
            (len, chain(rank))
        }
        Family::C if rank >= 2 => {
            let mut len = vec![2; rank];
            len[rank - 1] = 4;
            (len, chain(rank))
        }
        Family::D if rank >= 4 => {
            let mut edges = chain(rank - 1);
            edges.push((rank - 3, rank - 1));
            (vec![2; rank], edges)
        }
        Family::E if (6..=8).contains(&rank) => {
            let mut edges = vec![(0, 2), (1, 3), (2, 3)];
            edges.extend((3..rank - 1).map(|i| (i, i + 1)));
            (vec![2; rank], edges)
        }
        Family::F if rank == 4 => (vec![4, 4, 2, 2], chain(4)),
        Family::G if rank == 2 => (vec![2, 6], chain(2)),
        _ => return bad(),
    };
    Ok(out)
}

/// The Cartan matrix of a simple type in the documented convention.
pub fn cartan_matrix(family: Family, rank: usize) -> Result<Vec<Vec<i64>>> {
    let (len2, edges) = diagram(family, rank)?;
    let mut gram = vec![vec![0i64; rank]; rank];
    for a in 0..rank {
        gram[a][a] = len2[a];
    }
    for &(a, b) in &edges {
        let ip = -len2[a].max(len2[b]) / 2;
        gram[a][b] = ip;
        gram[b][a] = ip;
    }
    Ok((0..rank)
        .map(|a| (0..rank).map(|b| 2 * gram[a][b] / len2[a]).collect())
        .collect())
}

/// A weight in the basis of fundamental weights.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// `m * ω_a`.
    pub fn fundamental_multiple(rank: usize, a: usize, m: i64) -> Self {
        let mut w = vec![0; rank];
        w[a] = m;
        Weight(w)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&l| l >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&l| l == 0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Comma-separated coefficients, e.g. `"1,0,2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Weight(Vec::new()));
        }
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::invalid(format!("bad weight coefficient {p:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}

/// Family, rank and Cartan matrix, with derived root data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    family: Family,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
    positive_roots: Vec<Vec<i64>>,
    positive_coroots: Vec<Vec<i64>>,
}

impl CartanData {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(family, rank)?;
        Ok(Self::from_matrix(family, cartan))
    }

    fn from_matrix(family: Family, cartan: Vec<Vec<i64>>) -> Self {
        let rank = cartan.len();
        let symmetrizer = symmetrizer(&cartan);
        let transposed: Vec<Vec<i64>> = (0..rank).map(|a| (0..rank).map(|b| cartan[b][a]).collect()).collect();
        let roots = positive_roots(&cartan);
        let coroots = positive_roots(&transposed);
        Self {
            family,
            rank,
            cartan,
            symmetrizer,
            positive_roots: roots,
            positive_coroots: coroots,
        }
    }

    /// The same root datum with the matrix transposed (the other literature convention).
    pub fn transposed(&self) -> Self {
        let t = (0..self.rank)
            .map(|a| (0..self.rank).map(|b| self.cartan[b][a]).collect())
            .collect();
        Self::from_matrix(self.family, t)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family.letter(), self.rank)
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn entry(&self, a: usize, b: usize) -> i64 {
        self.cartan[a][b]
    }

    /// Positive integers `d_a`, with gcd 1, such that `d_a C[a][b]` is symmetric.
    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn is_simply_laced(&self) -> bool {
        self.cartan.iter().flatten().all(|&c| c >= -1)
    }

    pub fn is_type_a(&self) -> bool {
        self.family == Family::A
    }

    /// Largest `|C[a][b]|` off the diagonal.
    pub fn max_abs_offdiag(&self) -> i64 {
        let mut m = 0;
        for a in 0..self.rank {
            for b in 0..self.rank {
                if a != b {
                    m = m.max(self.cartan[a][b].abs());
                }
            }
        }
        m
    }

    /// Ratio of the longest squared root length to that of node `a` (1, 2 or 3).
    pub fn tier(&self, a: usize) -> usize {
        // (α_a, α_a) is proportional to d_a.
        let max = *self.symmetrizer.iter().max().unwrap();
        (max / self.symmetrizer[a]) as usize
    }

    /// `B^{(a,b)}_{i,j} = sign(C[a][b]) min(|C[a][b]| j, |C[b][a]| i)` for string lengths `i, j >= 1`.
    pub fn b_entry(&self, a: usize, b: usize, i: i64, j: i64) -> i64 {
        let cab = self.cartan[a][b];
        let cba = self.cartan[b][a];
        cab.signum() * (cab.abs() * j).min(cba.abs() * i)
    }

    /// Positive roots in the basis of simple roots.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Positive coroots in the basis of simple coroots.
    pub fn positive_coroots(&self) -> &[Vec<i64>] {
        &self.positive_coroots
    }

    /// Simple root `α_b` in the basis of fundamental weights (column `b` of the matrix).
    pub fn simple_root_weight(&self, b: usize) -> Vec<i64> {
        (0..self.rank).map(|a| self.cartan[a][b]).collect()
    }

    /// Exact inverse of the Cartan matrix.
    pub fn inverse(&self) -> Vec<Vec<Ratio<i64>>> {
        let n = self.rank;
        let mut m: Vec<Vec<Ratio<i64>>> = (0..n)
            .map(|a| {
                let mut row: Vec<Ratio<i64>> = self.cartan[a].iter().map(|&c| Ratio::from_integer(c)).collect();
                row.extend((0..n).map(|b| if a == b { Ratio::one() } else { Ratio::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero()).expect("Cartan matrices are invertible");
            m.swap(col, piv);
            let p = m[col][col];
            for x in m[col].iter_mut() {
                *x /= p;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col];
                    let pivot_row = m[col].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot_row) {
                        *x -= f * y;
                    }
                }
            }
        }
        m.into_iter().map(|row| row[n..].to_vec()).collect()
    }

    /// Solve `C x = rhs` exactly over the rationals.
    pub fn solve(&self, rhs: &[i64]) -> Vec<Ratio<i64>> {
        let inv = self.inverse();
        inv.iter()
            .map(|row| row.iter().zip(rhs).map(|(c, &r)| *c * r).sum())
            .collect()
    }

    /// Dimension of the irreducible module with dominant highest weight `lambda`.
    pub fn weyl_dim(&self, lambda: &Weight) -> Result<BigUint> {
        self.check_weight(lambda)?;
        if !lambda.is_dominant() {
            return Err(Error::invalid(format!("{lambda} is not dominant")));
        }
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for cr in &self.positive_coroots {
            let a: i64 = cr.iter().zip(&lambda.0).map(|(c, l)| c * (l + 1)).sum();
            let b: i64 = cr.iter().sum();
            num *= a as u64;
            den *= b as u64;
        }
        let (q, r) = num.div_rem(&den);
        debug_assert!(r.is_zero());
        Ok(q)
    }

    pub fn check_weight(&self, w: &Weight) -> Result<()> {
        if w.0.len() != self.rank {
            return Err(Error::invalid(format!(
                "weight {w} has {} entries, {} expects {}",
                w.0.len(),
                self.name(),
                self.rank
            )));
        }
        Ok(())
    }
}

impl fmt::Display for CartanData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for CartanData {
    type Err = Error;

    /// Names such as `A2`, `D4`, `g2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::invalid(format!("unknown algebra {s:?}"))),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::invalid(format!("bad rank in algebra name {s:?}")))?;
        CartanData::new(family, rank)
    }
}

fn symmetrizer(c: &[Vec<i64>]) -> Vec<i64> {
    // Propagate d_b = d_a C[a][b] / C[b][a] along the (connected) diagram with rationals.
    let n = c.len();
    let mut d: Vec<Option<Ratio<i64>>> = vec![None; n];
    d[0] = Some(Ratio::one());
    let mut queue = VecDeque::from([0usize]);
    while let Some(a) = queue.pop_front() {
        for b in 0..n {
            if a != b && c[a][b] != 0 && d[b].is_none() {
                d[b] = Some(d[a].unwrap() * Ratio::new(c[a][b], c[b][a]));
                queue.push_back(b);
            }
        }
    }
    let d: Vec<Ratio<i64>> = d.into_iter().map(|x| x.expect("connected diagram")).collect();
    let l = d.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = d.iter().map(|x| (*x * l).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| x / g).collect()
}

/// Positive roots (simple-root coordinates) of the root system with matrix `c`,
/// where `<β, α_i^∨> = sum_j β_j c[i][j]`.
fn positive_roots(c: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = c.len();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| beta[j] * c[i][j]).sum();
            if pairing == 0 {
                continue;
            }
            let mut r = beta.clone();
            r[i] -= pairing;
            if r.iter().all(|&x| x >= 0) && r.iter().any(|&x| x > 0) && seen.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    roots
}
