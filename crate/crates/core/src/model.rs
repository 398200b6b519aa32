//! Domain types and exact reference counters.
//!
//! A partition of a vector `x` of positive integers is a sign vector
//! `σ ∈ {−1,+1}ⁿ`; its size is the signed sum `⟨x,σ⟩`. The counters here
//! are the exact ground truth the spectral and modular routes are checked
//! against: exhaustive enumeration, pseudo-polynomial dynamic programming
//! over subset sums, and dynamic programming over residue classes.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default cap on `n` for the exhaustive enumeration oracle.
pub const DEFAULT_ORACLE_LIMIT: usize = 30;
/// Default cap on the instance total for the size-spectrum DP table.
pub const DEFAULT_DP_BOUND: u64 = 1_000_000;

/// A vector of positive integers to partition.
///
/// Elements may exceed 64 bits (reduction-produced instances routinely do),
/// so they are stored as big integers. Zero elements are rejected at
/// construction; the total is computed once and cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    numbers: Vec<BigUint>,
    total: BigUint,
}

impl PartitionInstance {
    pub fn new(numbers: Vec<BigUint>) -> Result<Self> {
        if numbers.is_empty() {
            return Err(Error::EmptyInstance);
        }
        for (i, x) in numbers.iter().enumerate() {
            if x.is_zero() {
                return Err(Error::ZeroElement { index: i });
            }
        }
        let total = numbers.iter().sum();
        Ok(Self { numbers, total })
    }

    pub fn from_u64s(numbers: &[u64]) -> Result<Self> {
        Self::new(numbers.iter().map(|&x| BigUint::from(x)).collect())
    }

    pub fn numbers(&self) -> &[BigUint] {
        &self.numbers
    }

    pub fn n(&self) -> usize {
        self.numbers.len()
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// Total as a machine word, when it fits.
    pub fn total_u64(&self) -> Option<u64> {
        self.total.to_u64()
    }

    /// All elements as machine words, when they fit.
    pub fn small_numbers(&self) -> Option<Vec<u64>> {
        self.numbers.iter().map(|x| x.to_u64()).collect()
    }

    pub fn total_is_odd(&self) -> bool {
        self.total.bit(0)
    }

    /// Elementwise multiple `c·x`; the zero-partition count is invariant.
    pub fn scaled(&self, c: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::ZeroElement { index: 0 });
        }
        Self::new(self.numbers.iter().map(|x| x * c).collect())
    }

    pub fn doubled_at(&self, m: usize) -> Result<Self> {
        self.check_index(m)?;
        let mut v = self.numbers.clone();
        v[m] = &v[m] * 2u32;
        Self::new(v)
    }

    pub fn appended_copy(&self, m: usize) -> Result<Self> {
        self.check_index(m)?;
        let mut v = self.numbers.clone();
        v.push(v[m].clone());
        Self::new(v)
    }

    fn check_index(&self, m: usize) -> Result<()> {
        if m >= self.n() {
            return Err(Error::IndexOutOfRange {
                index: m,
                n: self.n(),
            });
        }
        Ok(())
    }
}

/// A sign vector for a specific instance length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    signs: Vec<i8>,
}

impl Partition {
    pub fn new(signs: Vec<i8>) -> Option<Self> {
        if signs.iter().all(|&s| s == 1 || s == -1) {
            Some(Self { signs })
        } else {
            None
        }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// The signed sum `⟨x,σ⟩`.
    pub fn size(&self, inst: &PartitionInstance) -> Option<BigInt> {
        if self.signs.len() != inst.n() {
            return None;
        }
        let mut acc = BigInt::zero();
        for (s, x) in self.signs.iter().zip(inst.numbers()) {
            let x = BigInt::from(x.clone());
            if *s > 0 {
                acc += x;
            } else {
                acc -= x;
            }
        }
        Some(acc)
    }
}

/// Exact counts `c_u` of partitions of each size `u ∈ [−total, total]`.
///
/// Stored as subset-sum counts: a partition with positive part summing to
/// `S` has size `2S − total`, so `c_u = subset_counts[(u + total) / 2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeSpectrum {
    total: u64,
    subset_counts: Vec<BigUint>,
}

impl SizeSpectrum {
    pub fn total(&self) -> u64 {
        self.total
    }

    /// `c_u`, zero outside `[−total, total]` and at parity mismatches.
    pub fn count(&self, u: i64) -> BigUint {
        let total = self.total as i64;
        if u.abs() > total || (u + total) % 2 != 0 {
            return BigUint::zero();
        }
        self.subset_counts[((u + total) / 2) as usize].clone()
    }

    pub fn zero_count(&self) -> BigUint {
        self.count(0)
    }

    /// `Σ_u c_u`, always `2ⁿ`.
    pub fn mass(&self) -> BigUint {
        self.subset_counts.iter().sum()
    }

    /// Iterate `(u, c_u)` over sizes with nonzero parity-compatible slots.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigUint)> + '_ {
        let total = self.total as i64;
        self.subset_counts
            .iter()
            .enumerate()
            .map(move |(s, c)| (2 * s as i64 - total, c))
    }

    /// `Σ_σ ⟨x,σ⟩²` over all partitions.
    pub fn second_moment(&self) -> BigUint {
        let mut acc = BigUint::zero();
        for (u, c) in self.iter() {
            let u2 = BigUint::from(u.unsigned_abs()).pow(2);
            acc += u2 * c;
        }
        acc
    }

    /// `Σ_v v²·c_{Nv}`: the second moment of sizes divisible by `N`, in
    /// units of `N²`.
    pub fn second_moment_divisible(&self, modulus: u64) -> BigUint {
        let mut acc = BigUint::zero();
        for (u, c) in self.iter() {
            if u.rem_euclid(modulus as i64) == 0 {
                let v = (u / modulus as i64).unsigned_abs();
                acc += BigUint::from(v).pow(2) * c;
            }
        }
        acc
    }

    pub fn to_map(&self) -> BTreeMap<i64, BigUint> {
        self.iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(u, c)| (u, c.clone()))
            .collect()
    }
}

/// Counts of partitions by size modulo `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSpectrum {
    modulus: u64,
    counts: Vec<BigUint>,
}

impl ResidueSpectrum {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, j: u64) -> &BigUint {
        &self.counts[(j % self.modulus) as usize]
    }

    pub fn mass(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

/// Exhaustive enumeration of all `2ⁿ` sign vectors, with the default guard.
pub fn count_zero_oracle(inst: &PartitionInstance) -> Result<BigUint> {
    count_zero_oracle_limit(inst, DEFAULT_ORACLE_LIMIT)
}

/// Exhaustive enumeration with an explicit guard on `n`.
pub fn count_zero_oracle_limit(inst: &PartitionInstance, limit: usize) -> Result<BigUint> {
    if inst.n() > limit {
        return Err(Error::OracleLimit {
            n: inst.n(),
            limit,
        });
    }
    Ok(count_signed_zero(inst.numbers()))
}

/// Zero-partition count of an arbitrary slice by enumeration.
/// The empty slice has one (empty) partition of size zero.
pub(crate) fn count_signed_zero(numbers: &[BigUint]) -> BigUint {
    if numbers.is_empty() {
        return BigUint::one();
    }
    // Partitions come in ±σ pairs, so fix the first sign and double.
    if let Some(small) = numbers
        .iter()
        .map(|x| x.to_u64())
        .collect::<Option<Vec<u64>>>()
    {
        let first = small[0] as i128;
        let hits = enumerate_i128(&small[1..], first);
        return BigUint::from(hits) * 2u32;
    }
    let first = BigInt::from(numbers[0].clone());
    let hits = enumerate_big(&numbers[1..], first);
    hits * 2u32
}

fn enumerate_i128(rest: &[u64], partial: i128) -> u64 {
    match rest.split_first() {
        None => (partial == 0) as u64,
        Some((&x, tail)) => {
            enumerate_i128(tail, partial + x as i128) + enumerate_i128(tail, partial - x as i128)
        }
    }
}

fn enumerate_big(rest: &[BigUint], partial: BigInt) -> BigUint {
    match rest.split_first() {
        None => {
            if partial.is_zero() {
                BigUint::one()
            } else {
                BigUint::zero()
            }
        }
        Some((x, tail)) => {
            let x = BigInt::from(x.clone());
            enumerate_big(tail, &partial + &x) + enumerate_big(tail, &partial - &x)
        }
    }
}

/// Exact `c_u` for all sizes, by subset-sum dynamic programming.
pub fn size_spectrum(inst: &PartitionInstance) -> Result<SizeSpectrum> {
    size_spectrum_bounded(inst, DEFAULT_DP_BOUND)
}

pub fn size_spectrum_bounded(inst: &PartitionInstance, bound: u64) -> Result<SizeSpectrum> {
    let total = match inst.total_u64() {
        Some(t) if t <= bound => t,
        _ => {
            return Err(Error::DpBound {
                total: inst.total_u64().unwrap_or(u64::MAX),
                bound,
            })
        }
    };
    let numbers = inst
        .small_numbers()
        .expect("total fits u64, so every element does");
    let mut counts = vec![BigUint::zero(); total as usize + 1];
    counts[0] = BigUint::one();
    for &x in &numbers {
        let x = x as usize;
        for s in (x..counts.len()).rev() {
            let add = counts[s - x].clone();
            counts[s] += add;
        }
    }
    Ok(SizeSpectrum {
        total,
        subset_counts: counts,
    })
}

/// `c₀` via the size-spectrum DP.
pub fn count_zero_dp(inst: &PartitionInstance) -> Result<BigUint> {
    Ok(size_spectrum(inst)?.zero_count())
}

/// Exact residue-class counts via DP over `ℤ/Nℤ`, `O(n·N)` table updates.
///
/// Works for elements of any magnitude: only residues `xₖ mod N` enter the
/// table. For `N > total` the class `j = 0` holds exactly the zero count.
pub fn residue_spectrum_dp(inst: &PartitionInstance, modulus: u64) -> Result<ResidueSpectrum> {
    if modulus == 0 {
        return Err(Error::BadModulus);
    }
    let n = modulus as usize;
    let residues: Vec<u64> = inst.numbers().iter().map(|x| (x % modulus).to_u64().unwrap()).collect();
    let mut counts = vec![BigUint::zero(); n];
    counts[0] = BigUint::one();
    for &r in &residues {
        let r = r as usize;
        let mut next = vec![BigUint::zero(); n];
        for (j, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            next[(j + r) % n] += c;
            next[(j + n - r) % n] += c;
        }
        counts = next;
    }
    Ok(ResidueSpectrum { modulus, counts })
}

/// Verdict record for the double-vs-append count identity.
///
/// `appended = doubled + 2·removed` follows from `cos 2x = 2cos²x − 1`;
/// the alternative form `zero = doubled + appended` is also evaluated and
/// reported, since it fails on concrete instances (e.g. `[1,1]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    /// Z: zero count of the instance itself.
    pub zero: BigUint,
    /// D: zero count after doubling element `m`.
    pub doubled: BigUint,
    /// A: zero count after appending a copy of element `m`.
    pub appended: BigUint,
    /// R: zero count after removing element `m` (empty vector counts 1).
    pub removed: BigUint,
    /// Whether A = D + 2R.
    pub corrected_holds: bool,
    /// Whether Z = D + A.
    pub naive_holds: bool,
}

/// Evaluate both identities by exact enumeration.
pub fn identity_double_append(inst: &PartitionInstance, m: usize) -> Result<IdentityReport> {
    inst.check_index(m)?;
    let zero = count_zero_oracle(inst)?;
    let doubled = count_zero_oracle(&inst.doubled_at(m)?)?;
    let appended = count_zero_oracle(&inst.appended_copy(m)?)?;
    let removed: Vec<BigUint> = inst
        .numbers()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != m)
        .map(|(_, x)| x.clone())
        .collect();
    let removed = count_signed_zero(&removed);
    let corrected_holds = appended == &doubled + BigUint::from(2u32) * &removed;
    let naive_holds = zero == &doubled + &appended;
    Ok(IdentityReport {
        zero,
        doubled,
        appended,
        removed,
        corrected_holds,
        naive_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(xs: &[u64]) -> PartitionInstance {
        PartitionInstance::from_u64s(xs).unwrap()
    }

    fn count(xs: &[u64]) -> u64 {
        count_zero_oracle(&inst(xs)).unwrap().to_u64().unwrap()
    }

    #[test]
    fn rejects_zero_elements_and_empty() {
        assert!(matches!(
            PartitionInstance::from_u64s(&[1, 0, 2]),
            Err(Error::ZeroElement { index: 1 })
        ));
        assert!(matches!(
            PartitionInstance::from_u64s(&[]),
            Err(Error::EmptyInstance)
        ));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(count(&[1]), 0);
        assert_eq!(count(&[1, 1]), 2);
        assert_eq!(count(&[1, 2, 3]), 2);
        assert_eq!(count(&[1, 1, 1, 1]), 6);
    }

    #[test]
    fn oracle_guard() {
        let i = inst(&[1, 2, 3, 4]);
        assert!(matches!(
            count_zero_oracle_limit(&i, 3),
            Err(Error::OracleLimit { n: 4, limit: 3 })
        ));
    }

    #[test]
    fn oracle_big_path_matches_small_path() {
        // Same values through both representations.
        let small = inst(&[3, 5, 8, 2, 2]);
        let shifted = PartitionInstance::new(
            small
                .numbers()
                .iter()
                .map(|x| x << 70u32)
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(
            count_zero_oracle(&small).unwrap(),
            count_zero_oracle(&shifted).unwrap()
        );
    }

    #[test]
    fn spectrum_examples() {
        let s = size_spectrum(&inst(&[1, 2, 3])).unwrap();
        let m = s.to_map();
        let one = BigUint::one();
        let two = BigUint::from(2u32);
        assert_eq!(m[&6], one);
        assert_eq!(m[&-6], one);
        assert_eq!(m[&4], one);
        assert_eq!(m[&2], one);
        assert_eq!(m[&0], two);
        assert_eq!(m.len(), 7);

        let s1 = size_spectrum(&inst(&[1])).unwrap();
        assert_eq!(s1.to_map().len(), 2);
        let s2 = size_spectrum(&inst(&[1, 1])).unwrap();
        assert_eq!(s2.count(0), two);
        assert_eq!(s2.count(2), one);
    }

    #[test]
    fn spectrum_bound_guard() {
        assert!(matches!(
            size_spectrum_bounded(&inst(&[500, 600]), 1000),
            Err(Error::DpBound { total: 1100, .. })
        ));
    }

    #[test]
    fn dp_examples() {
        assert_eq!(count_zero_dp(&inst(&[1, 2, 3])).unwrap(), BigUint::from(2u32));
        assert_eq!(count_zero_dp(&inst(&[5])).unwrap(), BigUint::zero());
        assert_eq!(count_zero_dp(&inst(&[3, 3])).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn residue_examples() {
        let i = inst(&[1, 2, 3]);
        let r3 = residue_spectrum_dp(&i, 3).unwrap();
        assert_eq!(r3.count(0), &BigUint::from(4u32));
        let r1 = residue_spectrum_dp(&i, 1).unwrap();
        assert_eq!(r1.count(0), &BigUint::from(8u32));
        let r2 = residue_spectrum_dp(&i, 2).unwrap();
        assert_eq!(r2.count(0), &BigUint::from(8u32));
        assert_eq!(r2.count(1), &BigUint::zero());
        let r7 = residue_spectrum_dp(&i, 7).unwrap();
        assert_eq!(r7.count(0), &BigUint::from(2u32));
    }

    #[test]
    fn residue_handles_huge_elements() {
        let big = PartitionInstance::new(vec![
            BigUint::from(7u32) << 200u32,
            BigUint::from(7u32) << 200u32,
        ])
        .unwrap();
        let r = residue_spectrum_dp(&big, 5).unwrap();
        assert_eq!(r.mass(), BigUint::from(4u32));
        // ±(x−x)=0 gives two zero partitions; ±2x lands in some class.
        assert!(r.count(0) >= &BigUint::from(2u32));
    }

    #[test]
    fn identity_examples() {
        let r = identity_double_append(&inst(&[2, 1, 1]), 0).unwrap();
        assert_eq!(r.appended, BigUint::from(4u32));
        assert_eq!(r.doubled, BigUint::zero());
        assert_eq!(r.removed, BigUint::from(2u32));
        assert!(r.corrected_holds);
        assert!(!r.naive_holds);

        let r = identity_double_append(&inst(&[1, 1]), 0).unwrap();
        assert_eq!(r.removed, BigUint::zero());
        assert!(r.corrected_holds);
        assert!(!r.naive_holds);

        let r = identity_double_append(&inst(&[1, 1, 2]), 2).unwrap();
        assert_eq!(r.appended, BigUint::from(4u32));
        assert!(r.corrected_holds);
    }

    #[test]
    fn identity_single_element_uses_empty_convention() {
        // Removing the only element leaves the empty vector, R = 1.
        let r = identity_double_append(&inst(&[3]), 0).unwrap();
        assert_eq!(r.removed, BigUint::one());
        assert_eq!(r.appended, BigUint::from(2u32));
        assert!(r.corrected_holds);
    }

    #[test]
    fn identity_index_out_of_range() {
        assert!(identity_double_append(&inst(&[1, 2]), 2).is_err());
    }

    #[test]
    fn counters_agree_on_small_instances() {
        for xs in [
            vec![1u64, 2, 3],
            vec![4, 4, 4, 4],
            vec![7, 3, 1, 5, 2],
            vec![9],
            vec![2, 2, 2, 6],
        ] {
            let i = inst(&xs);
            let oracle = count_zero_oracle(&i).unwrap();
            let dp = count_zero_dp(&i).unwrap();
            let total = i.total_u64().unwrap();
            let res = residue_spectrum_dp(&i, total + 1).unwrap();
            assert_eq!(oracle, dp);
            assert_eq!(&oracle, res.count(0));
        }
    }

    #[test]
    fn scaling_invariance() {
        let i = inst(&[1, 2, 3, 4]);
        let base = count_zero_oracle(&i).unwrap();
        for c in [2, 3, 5] {
            assert_eq!(count_zero_oracle(&i.scaled(c).unwrap()).unwrap(), base);
        }
    }

    #[test]
    fn parity_forces_zero() {
        for xs in [vec![1u64], vec![1, 2], vec![3, 5, 9]] {
            let i = inst(&xs);
            if i.total_is_odd() {
                assert_eq!(count_zero_oracle(&i).unwrap(), BigUint::zero());
            }
        }
    }
}
