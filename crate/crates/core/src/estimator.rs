//! Multi-radix residue sieving of reduction families.
//!
//! Each family member is sieved against a prime set with the exact residue
//! DP (never the float filter: certificates must be rounding-free). A
//! residue class 0 that is empty, or a nonzero class that holds all `2ⁿ`
//! partitions, certifies that no zero partition exists; the minimum class-0
//! count across the grid is an upper bound on the zero-partition count.
//! The probability quantities are heuristics and are never used for
//! certification.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{self, PartitionInstance};
use crate::reduction::{self, CnfFormula, ReductionVariant};

/// Default prime set: all primes up to 97.
pub const DEFAULT_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97,
];

/// Default radix set for reduction families.
pub const DEFAULT_RADICES: [u32; 4] = [6, 7, 10, 16];

/// One `(instance, prime)` grid cell: the full exact residue spectrum.
#[derive(Debug, Clone)]
pub struct SieveCell {
    pub instance_index: usize,
    pub prime: u64,
    pub counts: Vec<BigUint>,
}

/// A proof that the instance has no zero partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Residue class 0 modulo `prime` is empty.
    ZeroClassEmpty { instance_index: usize, prime: u64 },
    /// A nonzero residue class holds all `2ⁿ` partitions.
    FullNonzeroClass {
        instance_index: usize,
        prime: u64,
        remainder: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceReport {
    pub product_form: f64,
    pub exponential_bound: f64,
    pub exponent_mode: ExponentMode,
    pub reductions: u64,
}

#[derive(Debug, Clone)]
pub struct SieveReport {
    pub cells: Vec<SieveCell>,
    pub certificates: Vec<Certificate>,
    /// `min` over cells of the class-0 count: an upper bound on the
    /// zero-partition count of every family member.
    pub upper_bound: BigUint,
    /// Heuristic only, labeled as such; never feeds certification.
    pub heuristic_confidence: Option<ConfidenceReport>,
}

/// Sieve a family of instances against a prime set.
pub fn sieve(family: &[PartitionInstance], primes: &[u64]) -> Result<SieveReport> {
    if primes.is_empty() || primes.iter().any(|&p| p < 2) {
        return Err(Error::BadPrimes);
    }
    let mut cells = Vec::with_capacity(family.len() * primes.len());
    let mut certificates = Vec::new();
    let mut upper_bound: Option<BigUint> = None;
    for (instance_index, inst) in family.iter().enumerate() {
        for &prime in primes {
            let spectrum = model::residue_spectrum_dp(inst, prime)?;
            let zero_class = spectrum.count(0).clone();
            if zero_class.is_zero() {
                certificates.push(Certificate::ZeroClassEmpty {
                    instance_index,
                    prime,
                });
            }
            let full = BigUint::from(1u32) << inst.n();
            for j in 1..prime {
                if spectrum.count(j) == &full {
                    certificates.push(Certificate::FullNonzeroClass {
                        instance_index,
                        prime,
                        remainder: j,
                    });
                }
            }
            upper_bound = Some(match upper_bound {
                Some(b) => b.min(zero_class.clone()),
                None => zero_class.clone(),
            });
            cells.push(SieveCell {
                instance_index,
                prime,
                counts: spectrum.counts().to_vec(),
            });
        }
    }
    let heuristic_confidence = family.first().map(|inst| {
        heuristic_confidence(primes, family.len() as u64, inst.n(), ExponentMode::Full)
    });
    Ok(SieveReport {
        cells,
        certificates,
        upper_bound: upper_bound.unwrap_or_default(),
        heuristic_confidence,
    })
}

/// Heuristic probability that some partition size is divisible by `p`:
/// `1 − (1 − 1/p)^{2ⁿ}`, with the exponent handled in log space.
pub fn divisibility_probability(prime: u64, n: usize) -> f64 {
    assert!(prime >= 2 && n >= 1);
    let log_base = (-1.0 / prime as f64).ln_1p();
    -f64::exp_m1((n as f64).exp2() * log_base)
}

/// Which exponent the confidence formulas raise `(1 − 1/p)` to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentMode {
    /// All partitions: `2ⁿ`.
    Full,
    /// The conjectured extremal zero count: `C(n, ⌊n/2⌋)`.
    Conjecture,
}

fn log2_binomial_central(n: usize) -> f64 {
    let k = n / 2;
    let mut acc = 0.0f64;
    for i in 0..k {
        acc += ((n - i) as f64).log2() - ((i + 1) as f64).log2();
    }
    acc
}

/// `∏_p [1 − (1 − 1/p)^E]^K` and its exponential bound
/// `exp(−K·Σ_p (1 − 1/p)^E)`; the bound always dominates the product.
pub fn heuristic_confidence(
    primes: &[u64],
    reductions: u64,
    n: usize,
    exponent_mode: ExponentMode,
) -> ConfidenceReport {
    let log2_exponent = match exponent_mode {
        ExponentMode::Full => n as f64,
        ExponentMode::Conjecture => log2_binomial_central(n),
    };
    let exponent = log2_exponent.exp2();
    let mut log_product = 0.0f64;
    let mut miss_sum = 0.0f64;
    for &p in primes {
        let log_base = (-1.0 / p as f64).ln_1p();
        // (1 − 1/p)^E in log space.
        let miss = (exponent * log_base).exp();
        miss_sum += miss;
        log_product += (-miss).ln_1p();
    }
    ConfidenceReport {
        product_form: (reductions as f64 * log_product).exp(),
        exponential_bound: (-(reductions as f64) * miss_sum).exp(),
        exponent_mode,
        reductions,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    UnsatCertified,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct EstimateReport {
    pub verdict: Verdict,
    /// Upper bound on #SAT: the sieve's zero-partition bound halved.
    pub sat_upper_bound: BigUint,
    pub sieve: SieveReport,
    pub radices: Vec<u32>,
}

/// Reduce one formula over several radices, sieve the family, and
/// translate the partition bound back to a #SAT bound.
pub fn estimate_sharp_sat(
    formula: &CnfFormula,
    radices: &[u32],
    primes: &[u64],
    variant: ReductionVariant,
) -> Result<EstimateReport> {
    if variant != ReductionVariant::Parsimonious {
        return Err(Error::NeedParsimonious);
    }
    let family = reduction::multi_radix_family(formula, radices, variant)?;
    let instances: Vec<PartitionInstance> =
        family.iter().map(|m| m.partition.clone()).collect();
    let sieve_report = sieve(&instances, primes)?;
    let verdict = if sieve_report.certificates.is_empty() {
        Verdict::Unknown
    } else {
        Verdict::UnsatCertified
    };
    let sat_upper_bound = &sieve_report.upper_bound / 2u32;
    Ok(EstimateReport {
        verdict,
        sat_upper_bound,
        sieve: sieve_report,
        radices: radices.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::parse_dimacs;

    fn inst(xs: &[u64]) -> PartitionInstance {
        PartitionInstance::from_u64s(xs).unwrap()
    }

    #[test]
    fn parity_certificate() {
        // Total 5 is odd, so every size is odd: class 0 mod 2 is empty.
        let report = sieve(&[inst(&[1, 2, 2])], &[2]).unwrap();
        assert!(report.certificates.contains(&Certificate::ZeroClassEmpty {
            instance_index: 0,
            prime: 2
        }));
        // The complementary full class at j = 1 certifies as well.
        assert!(report.certificates.contains(&Certificate::FullNonzeroClass {
            instance_index: 0,
            prime: 2,
            remainder: 1
        }));
        assert!(report.upper_bound.is_zero());
    }

    #[test]
    fn bound_without_certificate() {
        let report = sieve(&[inst(&[1, 2, 3])], &[2, 3, 5]).unwrap();
        assert!(report.certificates.is_empty());
        assert_eq!(report.upper_bound, BigUint::from(2u32));
    }

    #[test]
    fn soundness_on_partitionable_instances() {
        for xs in [vec![1u64, 1], vec![1, 2, 3], vec![4, 4, 4, 4]] {
            let report = sieve(&[inst(&xs)], &DEFAULT_PRIMES).unwrap();
            assert!(report.certificates.is_empty(), "{xs:?}");
            let true_count = model::count_zero_oracle(&inst(&xs)).unwrap();
            assert!(report.upper_bound >= true_count);
        }
    }

    #[test]
    fn adding_primes_never_raises_bound() {
        let family = [inst(&[1, 2, 3, 7])];
        let few = sieve(&family, &[2, 3]).unwrap();
        let more = sieve(&family, &[2, 3, 5, 7, 11]).unwrap();
        assert!(more.upper_bound <= few.upper_bound);
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(matches!(sieve(&[inst(&[1])], &[]), Err(Error::BadPrimes)));
        assert!(matches!(sieve(&[inst(&[1])], &[1]), Err(Error::BadPrimes)));
    }

    #[test]
    fn probability_examples() {
        assert!((divisibility_probability(2, 2) - 0.9375).abs() < 1e-12);
        assert!(divisibility_probability(1_000_003, 2) < 1e-4);
        assert!((divisibility_probability(2, 60) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn confidence_examples() {
        let r = heuristic_confidence(&[2], 1, 2, ExponentMode::Full);
        assert!((r.product_form - 0.9375).abs() < 1e-12);
        assert!(r.exponential_bound >= r.product_form);

        for n in [2usize, 4, 8, 12] {
            for k in [1u64, 3, 10] {
                let r = heuristic_confidence(&DEFAULT_PRIMES, k, n, ExponentMode::Full);
                assert!(r.product_form <= 1.0);
                assert!(r.exponential_bound >= r.product_form, "n={n} K={k}");
            }
        }

        // The conjectured exponent C(4,2) = 6 < 2⁴ makes each miss factor
        // (1 − 1/p)^E larger, so both quantities shrink: the sieve is more
        // likely to reveal a certificate under the conjecture.
        let full = heuristic_confidence(&[2, 3], 1, 4, ExponentMode::Full);
        let conj = heuristic_confidence(&[2, 3], 1, 4, ExponentMode::Conjecture);
        assert!(conj.product_form < full.product_form);
        assert!(conj.exponential_bound < full.exponential_bound);
    }

    #[test]
    fn unsat_formula_bound_is_zero() {
        // Small primes alias nonzero sizes into class 0; a prime above the
        // family total isolates the true zero count.
        let f = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap();
        let report = estimate_sharp_sat(
            &f,
            &[6, 7],
            &[2, 3, 5, 541],
            ReductionVariant::Parsimonious,
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::UnsatCertified);
        assert!(report.sat_upper_bound.is_zero());
    }

    #[test]
    fn satisfiable_formula_is_never_certified() {
        let f = parse_dimacs("p cnf 3 1\n1 2 3 0\n").unwrap();
        let report =
            estimate_sharp_sat(&f, &[6, 10], &[2, 3, 5, 7], ReductionVariant::Parsimonious)
                .unwrap();
        assert_eq!(report.verdict, Verdict::Unknown);
        assert!(report.sat_upper_bound >= BigUint::from(7u32));
    }

    #[test]
    fn classic_variant_refused() {
        let f = parse_dimacs("p cnf 1 1\n1 0\n").unwrap();
        assert!(matches!(
            estimate_sharp_sat(&f, &[6], &[2], ReductionVariant::Classic),
            Err(Error::NeedParsimonious)
        ));
    }
}
