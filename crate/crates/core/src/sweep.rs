//! Families of inputs: every colored partition of bounded load with every
//! reachable dominant weight, or a seeded random sample of that set.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fermionic::KrCounts;
use crate::liealg::{CartanData, Weight};

/// One `(λ, n)` pair.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SweepCase {
    pub lambda: Weight,
    pub n: KrCounts,
}

impl SweepCase {
    /// Stable key used for ordering and deduplication.
    pub fn key(&self) -> String {
        format!("lambda={} n={}", self.lambda, self.n)
    }
}

impl PartialOrd for KrCounts {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KrCounts {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rows().cmp(other.rows())
    }
}

/// Every `n` with `sum_{α,j} j n_j^(α) <= load`, including the empty one.
pub fn colored_partitions(rank: usize, load: i64) -> Vec<KrCounts> {
    // Slots (α, j) with j <= load; distribute weight over them.
    let slots: Vec<(usize, usize)> = (0..rank)
        .flat_map(|a| (1..=load.max(0) as usize).map(move |j| (a, j)))
        .collect();
    let mut out = Vec::new();
    let mut counts = vec![0i64; slots.len()];
    fn rec(
        slots: &[(usize, usize)],
        idx: usize,
        rest: i64,
        counts: &mut Vec<i64>,
        rank: usize,
        out: &mut Vec<KrCounts>,
    ) {
        if idx == slots.len() {
            let mut n = KrCounts::empty(rank);
            for (&(a, j), &c) in slots.iter().zip(counts.iter()) {
                if c > 0 {
                    n.add(a, j, c);
                }
            }
            out.push(n);
            return;
        }
        let j = slots[idx].1 as i64;
        for c in 0..=rest / j {
            counts[idx] = c;
            rec(slots, idx + 1, rest - c * j, counts, rank, out);
        }
        counts[idx] = 0;
    }
    rec(&slots, 0, load.max(0), &mut counts, rank, &mut out);
    out.sort();
    out
}

/// Dominant `λ = sum_j j n_j - C m` with `m` a non-negative integer vector.
pub fn reachable_lambdas(cartan: &CartanData, n: &KrCounts) -> Vec<Weight> {
    let r = cartan.rank();
    let mu: Vec<i64> = (0..r).map(|a| n.weighted_total(a)).collect();
    // λ >= 0 forces m <= C^{-1} μ componentwise (C^{-1} is entrywise positive).
    let bound: Vec<i64> = cartan.solve(&mu).iter().map(|x| x.floor().to_integer()).collect();
    let mut out = Vec::new();
    let mut m = vec![0i64; r];
    loop {
        let lambda: Vec<i64> = (0..r)
            .map(|a| mu[a] - (0..r).map(|b| cartan.entry(a, b) * m[b]).sum::<i64>())
            .collect();
        if lambda.iter().all(|&l| l >= 0) {
            out.push(Weight(lambda));
        }
        // Next m in the box.
        let mut i = 0;
        loop {
            if i == r {
                out.sort();
                return out;
            }
            if m[i] < bound[i] {
                m[i] += 1;
                break;
            }
            m[i] = 0;
            i += 1;
        }
    }
}

/// All cases with load at most `load`, ordered by `n` then `λ`.
pub fn exhaustive(cartan: &CartanData, load: i64) -> Vec<SweepCase> {
    colored_partitions(cartan.rank(), load)
        .into_iter()
        .flat_map(|n| {
            reachable_lambdas(cartan, &n)
                .into_iter()
                .map(move |lambda| SweepCase { lambda, n: n.clone() })
        })
        .collect()
}

/// `count` distinct cases drawn with a seeded generator (all of them when fewer exist).
///
/// A case is drawn by choosing a total load in `1..=load`, splitting it into
/// random `(α, j)` pieces, then choosing one reachable `λ` uniformly.
pub fn sampled(cartan: &CartanData, load: i64, count: usize, seed: u64) -> Vec<SweepCase> {
    let universe = exhaustive(cartan, load);
    if universe.len() <= count {
        return universe;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = cartan.rank();
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < count * 200 {
        attempts += 1;
        let total = rng.gen_range(1..=load.max(1));
        let mut n = KrCounts::empty(r);
        let mut rest = total;
        while rest > 0 {
            let j = rng.gen_range(1..=rest);
            let a = rng.gen_range(0..r);
            n.add(a, j as usize, 1);
            rest -= j;
        }
        let lambdas = reachable_lambdas(cartan, &n);
        let Some(lambda) = lambdas.choose(&mut rng).cloned() else { continue };
        let case = SweepCase { lambda, n };
        if seen.insert(case.clone()) {
            out.push(case);
        }
    }
    // Top up deterministically from the universe if the sampler stalls.
    for case in universe {
        if out.len() >= count {
            break;
        }
        if seen.insert(case.clone()) {
            out.push(case);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(s: &str) -> CartanData {
        s.parse().unwrap()
    }

    #[test]
    fn partition_counts() {
        // Partitions of 0..=4 for one color: 1 + 1 + 2 + 3 + 5.
        assert_eq!(colored_partitions(1, 4).len(), 12);
        // Two colors, load <= 2: {}, 1a, 1b, 2a, 2b, 1a1a, 1a1b, 1b1b.
        assert_eq!(colored_partitions(2, 2).len(), 8);
    }

    #[test]
    fn reachable_weights() {
        let n = KrCounts::parse(1, "1:1=4").unwrap();
        assert_eq!(reachable_lambdas(&cd("A1"), &n), vec![Weight(vec![0]), Weight(vec![2]), Weight(vec![4])]);
        let n = KrCounts::parse(2, "1:1=3").unwrap();
        let l = reachable_lambdas(&cd("A2"), &n);
        assert_eq!(l, vec![Weight(vec![0, 0]), Weight(vec![1, 1]), Weight(vec![3, 0])]);
        assert_eq!(reachable_lambdas(&cd("A1"), &KrCounts::empty(1)), vec![Weight(vec![0])]);
    }

    #[test]
    fn sampling_is_deterministic_and_distinct() {
        let c = cd("B2");
        let a = sampled(&c, 6, 200, 7);
        let b = sampled(&c, 6, 200, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 200);
        let set: BTreeSet<_> = a.iter().collect();
        assert_eq!(set.len(), 200);
        assert!(a.iter().all(|case| case.n.load() <= 6));
        assert_ne!(a, sampled(&c, 6, 200, 8));
    }
}
