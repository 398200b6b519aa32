//! Exact counting through the big-integer digit encoding
//! `M = ∏(1 + 2^{2n·xₖ})`.
//!
//! Expanding the product gives `M = Σ_{σ∈{0,1}ⁿ} 2^{2n⟨x,σ⟩}`: the binary
//! digits of `M`, read in blocks of `2n` bits, are exactly the subset-sum
//! spectrum of the instance. Coefficients never exceed `2ⁿ`, so blocks
//! never interfere, and the zero-partition count sits in the `n` bits at
//! offset `s = n·Σxₖ`. No transcendental evaluation is involved anywhere.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::PartitionInstance;

/// Default cap on the bit-length of the encoded product.
pub const DEFAULT_BIT_CAP: u128 = 100_000_000;

/// The product `M` with its block geometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedProduct {
    value: BigUint,
    n: usize,
    /// Bit offset of the zero-count block: `n·Σxₖ`.
    bit_offset: u64,
    /// Bits per coefficient block: `2n`.
    block_bits: u64,
    total: u64,
}

impl EncodedProduct {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn bit_offset(&self) -> u64 {
        self.bit_offset
    }

    pub fn block_bits(&self) -> u64 {
        self.block_bits
    }

    /// The coefficient block at subset-sum target `T`.
    pub fn block(&self, target: u64) -> BigUint {
        let mask = (BigUint::one() << self.block_bits) - 1u32;
        (&self.value >> (self.block_bits * target)) & mask
    }

    /// The `n`-bit read at the `s`-offset: the zero-partition count.
    pub fn zero_count(&self) -> BigUint {
        let mask = (BigUint::one() << self.n) - 1u32;
        (&self.value >> self.bit_offset) & mask
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

fn checked_geometry(inst: &PartitionInstance, bit_cap: u128) -> Result<(Vec<u64>, u64)> {
    let numbers = inst.small_numbers().ok_or_else(|| Error::ElementTooLarge {
        value: inst
            .numbers()
            .iter()
            .max()
            .map(|x| x.to_string())
            .unwrap_or_default(),
    })?;
    let total = inst.total_u64().ok_or_else(|| Error::ElementTooLarge {
        value: inst.total().to_string(),
    })?;
    let bits = 2u128 * inst.n() as u128 * total as u128 + inst.n() as u128;
    if bits > bit_cap {
        return Err(Error::ProductTooLarge { bits, cap: bit_cap });
    }
    Ok((numbers, total))
}

/// Build `M = ∏(1 + 2^{2n·xₖ})` by a balanced product tree.
pub fn build_encoded_product(inst: &PartitionInstance) -> Result<EncodedProduct> {
    build_encoded_product_capped(inst, DEFAULT_BIT_CAP)
}

pub fn build_encoded_product_capped(
    inst: &PartitionInstance,
    bit_cap: u128,
) -> Result<EncodedProduct> {
    let (mut numbers, total) = checked_geometry(inst, bit_cap)?;
    let n = inst.n();
    numbers.sort_unstable();
    let mut layer: Vec<BigUint> = numbers
        .iter()
        .map(|&x| (BigUint::one() << (2 * n as u64 * x)) + 1u32)
        .collect();
    while layer.len() > 1 {
        layer = layer
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => a * b,
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    let product = EncodedProduct {
        value: layer.pop().unwrap(),
        n,
        bit_offset: n as u64 * total,
        block_bits: 2 * n as u64,
        total,
    };
    debug_assert!(n > 12 || product.value == sum_form(inst));
    Ok(product)
}

/// The expanded sum `Σ_{σ∈{0,1}ⁿ} 2^{2n⟨x,σ⟩}`; small instances only.
fn sum_form(inst: &PartitionInstance) -> BigUint {
    let n = inst.n();
    let numbers = inst.small_numbers().unwrap();
    let mut acc = BigUint::zero();
    for mask in 0u64..(1 << n) {
        let subset_sum: u64 = numbers
            .iter()
            .enumerate()
            .filter(|&(k, _)| mask >> k & 1 == 1)
            .map(|(_, &x)| x)
            .sum();
        acc += BigUint::one() << (2 * n as u64 * subset_sum);
    }
    acc
}

/// `⌊M/2ˢ⌋ mod 2ⁿ`: the zero-partition count read out of the digits.
pub fn count_zero_modular(inst: &PartitionInstance) -> Result<BigUint> {
    Ok(build_encoded_product(inst)?.zero_count())
}

/// The full subset-sum spectrum read out of the blocks of `M`: for each
/// target `T`, the number of subsets of `x` summing to `T`. Zero blocks
/// are omitted.
pub fn subset_sum_spectrum(inst: &PartitionInstance) -> Result<BTreeMap<u64, BigUint>> {
    let product = build_encoded_product(inst)?;
    let mut map = BTreeMap::new();
    for target in 0..=product.total() {
        let block = product.block(target);
        if !block.is_zero() {
            map.insert(target, block);
        }
    }
    Ok(map)
}

/// Same digit encoding carried out in an arbitrary base `B ≥ 2`:
/// `⌊∏(1 + B^{2n·xₖ}) / B^{n·Σx}⌋ mod Bⁿ`. The count is radix-independent
/// because coefficients stay below `2ⁿ ≤ B^{2n}`.
pub fn count_zero_modular_base(inst: &PartitionInstance, base: u32) -> Result<BigUint> {
    assert!(base >= 2);
    let (numbers, total) = checked_geometry(inst, DEFAULT_BIT_CAP)?;
    let n = inst.n() as u64;
    let base = BigUint::from(base);
    let mut product = BigUint::one();
    for &x in &numbers {
        product *= base.pow((2 * n * x) as u32) + 1u32;
    }
    let shifted = product / base.pow((n * total) as u32);
    Ok(shifted % base.pow(n as u32))
}

/// An exact dyadic rational `numerator / 2^log2_denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicRational {
    pub numerator: BigUint,
    pub log2_denominator: u64,
}

impl DyadicRational {
    /// Strip common factors of two.
    pub fn normalized(mut self) -> Self {
        while self.log2_denominator > 0 && !self.numerator.bit(0) && !self.numerator.is_zero() {
            self.numerator >>= 1u32;
            self.log2_denominator -= 1;
        }
        self
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator.to_f64().unwrap_or(f64::INFINITY)
            / (self.log2_denominator as f64).exp2()
    }
}

/// `∏(2^{xₖ} + 2^{−xₖ}) = Σ_σ 2^{⟨x,σ⟩}` as an exact dyadic rational:
/// `∏(1 + 2^{2xₖ}) / 2^{Σxₖ}`.
pub fn hyperbolic_expectation(inst: &PartitionInstance) -> Result<DyadicRational> {
    let numbers = inst.small_numbers().ok_or_else(|| Error::ElementTooLarge {
        value: inst.total().to_string(),
    })?;
    let total = inst.total_u64().unwrap();
    let mut numerator = BigUint::one();
    for &x in &numbers {
        numerator *= (BigUint::one() << (2 * x)) + 1u32;
    }
    Ok(DyadicRational {
        numerator,
        log2_denominator: total,
    }
    .normalized())
}

/// Spectrum-side evaluation of the same quantity: `Σ_u c_u·2^u`.
pub fn hyperbolic_expectation_from_spectrum(inst: &PartitionInstance) -> Result<DyadicRational> {
    let spectrum = crate::model::size_spectrum(inst)?;
    let total = spectrum.total();
    let mut numerator = BigUint::zero();
    for (u, c) in spectrum.iter() {
        // 2^u with common denominator 2^total.
        numerator += c << (u + total as i64) as u64;
    }
    Ok(DyadicRational {
        numerator,
        log2_denominator: total,
    }
    .normalized())
}
