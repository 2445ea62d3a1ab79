//! Brute-force characters: Freudenthal's multiplicity formula, tensor
//! products by convolution, and decomposition by peeling off highest weights.
//!
//! Weights are integer vectors in the fundamental-weight basis. With
//! `(α_i, α_j) = d_i C[i][j]` every inner product Freudenthal needs is an
//! integer:
//!
//! ```text
//! (λ+ρ, λ+ρ) - (μ+ρ, μ+ρ) = sum_i a_i d_i (λ + μ + 2ρ)_i     where λ - μ = sum_i a_i α_i
//! (ν, α) = sum_i c_i d_i ν_i                                   where α = sum_i c_i α_i
//! ```

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fermionic::KrCounts;
use crate::liealg::{CartanData, Weight};

/// Cost limits for character computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    /// Largest number of distinct weights any intermediate character may carry.
    pub max_support: usize,
    pub max_rank: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_support: 200_000,
            max_rank: 4,
        }
    }
}

/// Weight multiplicities of a finite-dimensional module.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Character {
    mults: BTreeMap<Vec<i64>, BigUint>,
}

impl Character {
    pub fn trivial(rank: usize) -> Self {
        let mut mults = BTreeMap::new();
        mults.insert(vec![0; rank], BigUint::from(1u32));
        Self { mults }
    }

    pub fn mult(&self, w: &[i64]) -> BigUint {
        self.mults.get(w).cloned().unwrap_or_default()
    }

    pub fn support_len(&self) -> usize {
        self.mults.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &BigUint)> {
        self.mults.iter()
    }

    /// Total dimension.
    pub fn mass(&self) -> BigUint {
        self.mults.values().sum()
    }

    /// Character of the tensor product.
    pub fn convolve(&self, other: &Character, limits: &OracleLimits) -> Result<Character> {
        let mut mults: BTreeMap<Vec<i64>, BigUint> = BTreeMap::new();
        for (a, ma) in &self.mults {
            for (b, mb) in &other.mults {
                let w: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *mults.entry(w).or_default() += ma * mb;
            }
            if mults.len() > limits.max_support {
                return Err(Error::CostGuard(format!(
                    "product character exceeds {} weights",
                    limits.max_support
                )));
            }
        }
        Ok(Character { mults })
    }

    /// Whether multiplicities are invariant under every simple reflection.
    pub fn is_weyl_symmetric(&self, cartan: &CartanData) -> bool {
        self.mults.iter().all(|(w, m)| {
            (0..cartan.rank()).all(|i| {
                let col = cartan.simple_root_weight(i);
                let s: Vec<i64> = w.iter().zip(&col).map(|(x, c)| x - w[i] * c).collect();
                &self.mult(&s) == m
            })
        })
    }
}

fn guard_rank(cartan: &CartanData, limits: &OracleLimits) -> Result<()> {
    if cartan.rank() > limits.max_rank {
        return Err(Error::CostGuard(format!(
            "{} exceeds the oracle rank limit {}",
            cartan.name(),
            limits.max_rank
        )));
    }
    Ok(())
}

/// Character of the irreducible module `V(λ)` by Freudenthal's recursion.
pub fn irr_character(cartan: &CartanData, lambda: &Weight, limits: &OracleLimits) -> Result<Character> {
    guard_rank(cartan, limits)?;
    cartan.check_weight(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::invalid(format!("{lambda} is not dominant")));
    }
    let r = cartan.rank();
    let d = cartan.symmetrizer();
    let cols: Vec<Vec<i64>> = (0..r).map(|i| cartan.simple_root_weight(i)).collect();
    // Positive roots with their fundamental-weight coordinates.
    let roots: Vec<(Vec<i64>, Vec<i64>)> = cartan
        .positive_roots()
        .iter()
        .map(|c| {
            let w = (0..r).map(|a| (0..r).map(|i| c[i] * cols[i][a]).sum()).collect();
            (c.clone(), w)
        })
        .collect();
    let pair = |nu: &[i64], c: &[i64]| -> i64 { (0..r).map(|i| c[i] * d[i] * nu[i]).sum() };

    let mut mults: HashMap<Vec<i64>, BigInt> = HashMap::new();
    mults.insert(lambda.0.clone(), BigInt::from(1));
    // Current level: weights at depth `level` with their root offsets.
    let mut frontier: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
    frontier.insert(lambda.0.clone(), vec![0; r]);
    while !frontier.is_empty() {
        let mut candidates: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
        for (w, a) in &frontier {
            for i in 0..r {
                let mu: Vec<i64> = w.iter().zip(&cols[i]).map(|(x, c)| x - c).collect();
                candidates.entry(mu).or_insert_with(|| {
                    let mut off = a.clone();
                    off[i] += 1;
                    off
                });
            }
        }
        let mut next = BTreeMap::new();
        for (mu, a) in candidates {
            let nu: Vec<i64> = (0..r).map(|i| lambda.0[i] + mu[i] + 2).collect();
            let denom = pair(&nu, &a);
            if denom <= 0 {
                continue;
            }
            let mut sum = BigInt::zero();
            for (c, rw) in &roots {
                let mut shifted: Vec<i64> = mu.clone();
                loop {
                    for (s, x) in shifted.iter_mut().zip(rw) {
                        *s += x;
                    }
                    let Some(m) = mults.get(&shifted) else { break };
                    sum += m * pair(&shifted, c);
                }
            }
            let total: BigInt = sum * 2;
            if total.is_zero() {
                continue;
            }
            let m = &total / denom;
            debug_assert!((&total % denom).is_zero());
            if m.is_positive() {
                mults.insert(mu.clone(), m);
                next.insert(mu, a);
            }
        }
        if mults.len() > limits.max_support {
            return Err(Error::CostGuard(format!(
                "character of {lambda} exceeds {} weights",
                limits.max_support
            )));
        }
        frontier = next;
    }
    Ok(Character {
        mults: mults
            .into_iter()
            .map(|(w, m)| (w, m.to_biguint().expect("multiplicities are positive")))
            .collect(),
    })
}

/// Character of a tensor product of irreducibles.
pub fn tensor_character(
    cartan: &CartanData,
    factors: &[Weight],
    limits: &OracleLimits,
    cache: &mut HashMap<Weight, Character>,
) -> Result<Character> {
    let mut acc = Character::trivial(cartan.rank());
    for f in factors {
        if !cache.contains_key(f) {
            let ch = irr_character(cartan, f, limits)?;
            cache.insert(f.clone(), ch);
        }
        acc = acc.convolve(&cache[f], limits)?;
    }
    Ok(acc)
}

/// Multiplicity of every irreducible constituent of `⊗ V(factor)`.
pub fn tensor_decompose(
    cartan: &CartanData,
    factors: &[Weight],
    limits: &OracleLimits,
) -> Result<BTreeMap<Weight, BigUint>> {
    guard_rank(cartan, limits)?;
    for f in factors {
        cartan.check_weight(f)?;
        if !f.is_dominant() {
            return Err(Error::invalid(format!("{f} is not dominant")));
        }
    }
    let mut cache = HashMap::new();
    let product = tensor_character(cartan, factors, limits, &mut cache)?;
    let inv = cartan.inverse();
    let height = |w: &[i64]| -> Ratio<i64> {
        inv.iter()
            .map(|row| row.iter().zip(w).map(|(c, x)| *c * *x).sum::<Ratio<i64>>())
            .sum()
    };
    let mut rest: BTreeMap<Vec<i64>, BigInt> = product.mults.into_iter().map(|(w, m)| (w, m.into())).collect();
    let mut out = BTreeMap::new();
    loop {
        let top = rest
            .iter()
            .filter(|(w, m)| m.is_positive() && w.iter().all(|&x| x >= 0))
            .map(|(w, _)| w)
            .max_by(|a, b| height(a).cmp(&height(b)).then_with(|| a.cmp(b)))
            .cloned();
        let Some(top) = top else { break };
        let mult = rest[&top].clone();
        let lambda = Weight(top);
        if !cache.contains_key(&lambda) {
            let ch = irr_character(cartan, &lambda, limits)?;
            cache.insert(lambda.clone(), ch);
        }
        for (w, m) in cache[&lambda].iter() {
            let e = rest.entry(w.clone()).or_default();
            *e -= &mult * BigInt::from(m.clone());
        }
        rest.retain(|_, m| !m.is_zero());
        out.insert(lambda, mult.to_biguint().expect("positive"));
    }
    if rest.values().any(|m| !m.is_zero()) {
        return Err(Error::invalid("peeling left a non-zero remainder"));
    }
    Ok(out)
}

fn require_type_a(cartan: &CartanData) -> Result<()> {
    if !cartan.is_type_a() {
        return Err(Error::Unsupported(format!(
            "KR restrictions are irreducible only in type A, not {}",
            cartan.name()
        )));
    }
    Ok(())
}

/// The irreducible factors `V(j ω_α)` of a type-A KR tensor product.
pub fn kr_factors_type_a(cartan: &CartanData, n: &KrCounts) -> Result<Vec<Weight>> {
    require_type_a(cartan)?;
    Ok(n.modules()
        .into_iter()
        .map(|(a, j)| Weight::fundamental_multiple(cartan.rank(), a, j as i64))
        .collect())
}

/// Full decomposition of `⊗ W(α, j)^{n_j^(α)}` in type A.
pub fn kr_tensor_decomposition_type_a(
    cartan: &CartanData,
    n: &KrCounts,
    limits: &OracleLimits,
) -> Result<BTreeMap<Weight, BigUint>> {
    let factors = kr_factors_type_a(cartan, n)?;
    tensor_decompose(cartan, &factors, limits)
}

/// Multiplicity of `V(λ)` in `⊗ W(α, j)^{n_j^(α)}` in type A.
pub fn kr_tensor_multiplicity_type_a(
    cartan: &CartanData,
    n: &KrCounts,
    lambda: &Weight,
    limits: &OracleLimits,
) -> Result<BigUint> {
    let dec = kr_tensor_decomposition_type_a(cartan, n, limits)?;
    Ok(dec.get(lambda).cloned().unwrap_or_default())
}

/// `prod dim V(j ω_α)^{n_j^(α)}`.
pub fn kr_product_dimension(cartan: &CartanData, n: &KrCounts) -> Result<BigUint> {
    let mut d = BigUint::from(1u32);
    for (a, j) in n.modules() {
        d *= cartan.weyl_dim(&Weight::fundamental_multiple(cartan.rank(), a, j as i64))?;
    }
    Ok(d)
}

/// Smallest `u64` view of a multiplicity, for reporting.
pub fn small(m: &BigUint) -> Option<u64> {
    m.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(s: &str) -> CartanData {
        s.parse().unwrap()
    }

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    fn lim() -> OracleLimits {
        OracleLimits::default()
    }

    #[test]
    fn small_characters() {
        let ch = irr_character(&cd("A1"), &w(&[2]), &lim()).unwrap();
        let got: Vec<(Vec<i64>, u32)> = ch.iter().map(|(k, v)| (k.clone(), v.try_into().unwrap())).collect();
        assert_eq!(got, vec![(vec![-2], 1), (vec![0], 1), (vec![2], 1)]);

        let adj = irr_character(&cd("A2"), &w(&[1, 1]), &lim()).unwrap();
        assert_eq!(adj.support_len(), 7);
        assert_eq!(adj.mult(&[0, 0]), 2u32.into());
        assert_eq!(adj.mass(), 8u32.into());

        let fund = irr_character(&cd("A2"), &w(&[1, 0]), &lim()).unwrap();
        assert_eq!(fund.support_len(), 3);
        assert!(fund.iter().all(|(_, m)| *m == 1u32.into()));
    }

    #[test]
    fn masses_match_weyl_dimension() {
        for (alg, lam) in [("G2", vec![1, 0]), ("G2", vec![0, 1]), ("B2", vec![1, 1]), ("C3", vec![0, 1, 0]), ("A3", vec![1, 0, 2]), ("F4", vec![0, 0, 0, 1]), ("D4", vec![0, 1, 0, 0])] {
            let c = cd(alg);
            let ch = irr_character(&c, &Weight(lam.clone()), &lim()).unwrap();
            assert_eq!(ch.mass(), c.weyl_dim(&Weight(lam.clone())).unwrap(), "{alg} {lam:?}");
            assert!(ch.is_weyl_symmetric(&c), "{alg} {lam:?}");
        }
    }

    #[test]
    fn decompositions() {
        let d = tensor_decompose(&cd("A1"), &[w(&[1]), w(&[1])], &lim()).unwrap();
        assert_eq!(d, BTreeMap::from([(w(&[0]), 1u32.into()), (w(&[2]), 1u32.into())]));
        let d = tensor_decompose(&cd("A1"), &vec![w(&[1]); 4], &lim()).unwrap();
        assert_eq!(
            d,
            BTreeMap::from([(w(&[0]), 2u32.into()), (w(&[2]), 3u32.into()), (w(&[4]), 1u32.into())])
        );
        let d = tensor_decompose(&cd("A2"), &[w(&[1, 0]), w(&[0, 1])], &lim()).unwrap();
        assert_eq!(d, BTreeMap::from([(w(&[0, 0]), 1u32.into()), (w(&[1, 1]), 1u32.into())]));
    }

    #[test]
    fn kr_examples() {
        let a1 = cd("A1");
        let n = KrCounts::parse(1, "1:1=4").unwrap();
        assert_eq!(kr_tensor_multiplicity_type_a(&a1, &n, &w(&[0]), &lim()).unwrap(), 2u32.into());
        let a2 = cd("A2");
        let n = KrCounts::parse(2, "1:1=3").unwrap();
        assert_eq!(kr_tensor_multiplicity_type_a(&a2, &n, &w(&[0, 0]), &lim()).unwrap(), 1u32.into());
        let n = KrCounts::parse(1, "1:2=1").unwrap();
        assert_eq!(kr_tensor_multiplicity_type_a(&a1, &n, &w(&[2]), &lim()).unwrap(), 1u32.into());
        assert!(kr_tensor_multiplicity_type_a(&cd("B2"), &KrCounts::empty(2), &w(&[0, 0]), &lim()).is_err());
    }

    #[test]
    fn guards() {
        assert!(matches!(irr_character(&cd("A5"), &w(&[1, 0, 0, 0, 0]), &lim()), Err(Error::CostGuard(_))));
        let tight = OracleLimits { max_support: 5, max_rank: 4 };
        assert!(matches!(irr_character(&cd("A2"), &w(&[2, 2]), &tight), Err(Error::CostGuard(_))));
        let wide = OracleLimits { max_support: 200_000, max_rank: 8 };
        assert_eq!(irr_character(&cd("E6"), &w(&[1, 0, 0, 0, 0, 0]), &wide).unwrap().mass(), 27u32.into());
    }
}
