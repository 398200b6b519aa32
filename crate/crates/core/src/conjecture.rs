//! Empirical search for counterexamples to the extremal-count conjecture:
//! no vector of length `n` has more zero partitions than the all-ones
//! vector (even `n`), or ones-plus-a-single-two (odd `n`).
//!
//! Vectors are enumerated sorted and gcd-normalized; both reductions
//! preserve the zero count. A candidate counterexample found by the DP
//! counter is re-verified by the enumeration oracle before being reported.

use num_bigint::BigUint;
use num_integer::gcd;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{self, PartitionInstance};
use crate::spectral;

/// Default cap on the number of instances an exhaustive scan may visit.
pub const DEFAULT_SCAN_BUDGET: u64 = 10_000_000;

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k.min(n.saturating_sub(k)) {
        acc = acc * (n - i) / (i + 1);
    }
    if k > n {
        BigUint::zero()
    } else {
        acc
    }
}

/// The conjectured maximum zero count for length `n`: `C(n, n/2)` for even
/// `n`; for odd `n` the zero count of `(1,…,1,2)`, which is
/// `2·C(n−1, (n−3)/2)` for `n ≥ 3` and `0` for `n = 1`.
pub fn conjectured_bound(n: usize) -> BigUint {
    let n = n as u64;
    if n % 2 == 0 {
        binomial(n, n / 2)
    } else if n == 1 {
        BigUint::zero()
    } else {
        binomial(n - 1, (n - 3) / 2) * 2u32
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub numbers: Vec<u64>,
    pub zero_count: BigUint,
    pub bound: BigUint,
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub n_range: (usize, usize),
    pub element_bound: u64,
    pub instances_checked: u64,
    pub max_ratio: f64,
    pub witness: Option<Vec<u64>>,
    pub counterexamples: Vec<Counterexample>,
    /// Set when the exhaustive scan stopped at its budget.
    pub partial: bool,
}

struct Scanner {
    checked: u64,
    max_ratio: f64,
    witness: Option<Vec<u64>>,
    counterexamples: Vec<Counterexample>,
}

impl Scanner {
    fn new() -> Self {
        Self {
            checked: 0,
            max_ratio: 0.0,
            witness: None,
            counterexamples: Vec::new(),
        }
    }

    fn visit(&mut self, numbers: &[u64]) -> Result<()> {
        let inst = PartitionInstance::from_u64s(numbers)?;
        let count = model::count_zero_dp(&inst)?;
        self.checked += 1;
        // Cross-check the quadrature path on a subsample.
        if self.checked % 20 == 0 && inst.n() <= spectral::QUADRATURE_N_LIMIT {
            let q = spectral::count_zero_quadrature(&inst, 1)?;
            debug_assert_eq!(Some(q.rounded), count.to_u64(), "{numbers:?}");
        }
        let bound = conjectured_bound(inst.n());
        let ratio = if bound.is_zero() {
            if count.is_zero() {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            count.to_f64().unwrap() / bound.to_f64().unwrap()
        };
        if ratio > self.max_ratio || self.witness.is_none() {
            self.max_ratio = ratio;
            self.witness = Some(numbers.to_vec());
        }
        if count > bound {
            // Headline result: re-verify with the independent oracle.
            let confirmed = model::count_zero_oracle(&inst)?;
            if confirmed > bound {
                self.counterexamples.push(Counterexample {
                    numbers: numbers.to_vec(),
                    zero_count: confirmed,
                    bound,
                });
            }
        }
        Ok(())
    }
}

fn enumerate_sorted(
    scanner: &mut Scanner,
    prefix: &mut Vec<u64>,
    remaining: usize,
    element_bound: u64,
    budget: u64,
) -> Result<bool> {
    if remaining == 0 {
        let g = prefix.iter().fold(0u64, |acc, &x| gcd(acc, x));
        if g == 1 {
            if scanner.checked >= budget {
                return Ok(false);
            }
            scanner.visit(prefix)?;
        }
        return Ok(true);
    }
    let lo = prefix.last().copied().unwrap_or(1);
    for x in lo..=element_bound {
        prefix.push(x);
        let keep_going = enumerate_sorted(scanner, prefix, remaining - 1, element_bound, budget)?;
        prefix.pop();
        if !keep_going {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check every sorted, gcd-normalized vector with lengths in `n_range`
/// and elements in `[1, element_bound]`.
pub fn scan_exhaustive(n_range: (usize, usize), element_bound: u64) -> Result<ScanReport> {
    scan_exhaustive_budgeted(n_range, element_bound, DEFAULT_SCAN_BUDGET)
}

pub fn scan_exhaustive_budgeted(
    n_range: (usize, usize),
    element_bound: u64,
    budget: u64,
) -> Result<ScanReport> {
    let (lo, hi) = n_range;
    if lo == 0 || hi < lo || element_bound == 0 {
        return Err(Error::BadScanRange(format!(
            "n range {lo}..={hi}, element bound {element_bound}"
        )));
    }
    let mut scanner = Scanner::new();
    let mut complete = true;
    for n in lo..=hi {
        let mut prefix = Vec::with_capacity(n);
        if !enumerate_sorted(&mut scanner, &mut prefix, n, element_bound, budget)? {
            complete = false;
            break;
        }
    }
    Ok(ScanReport {
        n_range,
        element_bound,
        instances_checked: scanner.checked,
        max_ratio: scanner.max_ratio,
        witness: scanner.witness,
        counterexamples: scanner.counterexamples,
        partial: !complete,
    })
}

/// Same checks on pseudorandomly sampled vectors; fully determined by the
/// seed.
pub fn scan_random(
    n: usize,
    element_bound: u64,
    samples: u64,
    seed: u64,
) -> Result<ScanReport> {
    if n == 0 || element_bound == 0 {
        return Err(Error::BadScanRange(format!(
            "n {n}, element bound {element_bound}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scanner = Scanner::new();
    for _ in 0..samples {
        let mut numbers: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=element_bound)).collect();
        numbers.sort_unstable();
        scanner.visit(&numbers)?;
    }
    Ok(ScanReport {
        n_range: (n, n),
        element_bound,
        instances_checked: scanner.checked,
        max_ratio: scanner.max_ratio,
        witness: scanner.witness,
        counterexamples: scanner.counterexamples,
        partial: false,
    })
}
