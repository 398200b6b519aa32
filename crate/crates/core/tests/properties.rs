//! Randomized structural invariants of the counting machinery.

use num_bigint::BigUint;
use num_traits::Zero;
use proptest::collection::vec;
use proptest::prelude::*;

use partcount_core::model;
use partcount_core::modular;
use partcount_core::spectral;
use partcount_core::PartitionInstance;

fn small_instance() -> impl Strategy<Value = PartitionInstance> {
    vec(1u64..=25, 1..=10).prop_map(|numbers| PartitionInstance::from_u64s(&numbers).unwrap())
}

proptest! {
    /// The size spectrum is symmetric (negating every sign negates the
    /// size) and exhausts all 2^n sign vectors.
    #[test]
    fn spectrum_symmetry_and_mass(inst in small_instance()) {
        let spectrum = model::size_spectrum(&inst).unwrap();
        prop_assert_eq!(spectrum.mass(), BigUint::from(2u32).pow(inst.n() as u32));
        for (u, count) in spectrum.iter() {
            prop_assert_eq!(count, &spectrum.count(-u));
        }
    }

    /// Scaling every element by a common factor fixes the zero count.
    #[test]
    fn zero_count_scaling_invariance(inst in small_instance(), c in 1u64..=6) {
        let scaled = inst.scaled(c).unwrap();
        prop_assert_eq!(
            model::count_zero_dp(&inst).unwrap(),
            model::count_zero_dp(&scaled).unwrap()
        );
    }

    /// An odd total admits no zero partition.
    #[test]
    fn odd_total_has_no_zero_partition(inst in small_instance()) {
        if inst.total_is_odd() {
            prop_assert!(model::count_zero_dp(&inst).unwrap().is_zero());
        }
    }

    /// Residue spectra preserve total mass and refine consistently: the
    /// class sums modulo d of a spectrum modulo d*m match the spectrum
    /// modulo d.
    #[test]
    fn residue_spectrum_mass_and_refinement(
        inst in small_instance(),
        d in 2u64..=5,
        m in 2u64..=4,
    ) {
        let coarse = model::residue_spectrum_dp(&inst, d).unwrap();
        let fine = model::residue_spectrum_dp(&inst, d * m).unwrap();
        prop_assert_eq!(coarse.mass(), BigUint::from(2u32).pow(inst.n() as u32));
        for j in 0..d {
            let folded: BigUint = (0..m).map(|k| fine.count(j + k * d)).sum();
            prop_assert_eq!(&folded, coarse.count(j));
        }
    }

    /// The quadrature count is exact (zero residual) at exact node counts.
    #[test]
    fn quadrature_matches_dp(inst in small_instance()) {
        let quad = spectral::count_zero_quadrature(&inst, 1).unwrap();
        prop_assert!(quad.reliable());
        prop_assert_eq!(
            BigUint::from(quad.rounded),
            model::count_zero_dp(&inst).unwrap()
        );
    }

    /// The big-integer digit blocks reproduce the subset-sum spectrum.
    #[test]
    fn encoded_blocks_match_spectrum(inst in small_instance()) {
        let blocks = modular::subset_sum_spectrum(&inst).unwrap();
        let spectrum = model::size_spectrum(&inst).unwrap();
        let total = spectrum.total() as i64;
        // Subset sums s correspond to sizes 2s - total.
        for (s, count) in blocks {
            prop_assert_eq!(&count, &spectrum.count(2 * s as i64 - total));
        }
    }
}
