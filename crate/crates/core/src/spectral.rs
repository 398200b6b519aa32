//! Spectral evaluation of the characteristic function `ψ(t) = ∏cos(2πxₖt)`
//! and the counting formulas built on it.
//!
//! Because the instance elements are integers, `ψ` is a trigonometric
//! polynomial of degree `total`, so an `N`-point trapezoid sum over one
//! period is algebraically exact as soon as `N ≥ total + 1`: only the
//! zero-frequency alias survives. All quadrature here relies on that, which
//! makes the float paths checkable against the exact counters to within
//! rounding noise.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{self, PartitionInstance};

/// Float-reliability guard: the `2ⁿ` prefactor amplifies rounding.
pub const QUADRATURE_N_LIMIT: usize = 40;

/// Compensated (Kahan) accumulator. Addition order is fixed by the caller,
/// so sums are bit-deterministic.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Cosine and sine of `2π·num/den`, with the four axis points returned
/// exactly so that downstream zero tests are rational, not floating.
fn cos_sin_of_turn(num: u64, den: u64) -> (f64, f64) {
    debug_assert!(num < den);
    if num == 0 {
        (1.0, 0.0)
    } else if 2 * num == den {
        (-1.0, 0.0)
    } else if 4 * num == den {
        (0.0, 1.0)
    } else if 4 * num == 3 * den {
        (0.0, -1.0)
    } else {
        let theta = 2.0 * std::f64::consts::PI * (num as f64 / den as f64);
        (theta.cos(), theta.sin())
    }
}

/// Fractional turns `(xₖ·num mod den) / den` for every element. The
/// reduction is exact integer arithmetic, so elements of any bit-length
/// keep full phase accuracy.
fn reduced_turns(inst: &PartitionInstance, num: u64, den: u64) -> Vec<u64> {
    inst.numbers()
        .iter()
        .map(|x| {
            let r = (x % den).to_u64().expect("residue below den");
            ((r as u128 * num as u128) % den as u128) as u64
        })
        .collect()
}

/// One evaluation of `ψ` with its working precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiEvaluation {
    pub value: f64,
    /// Evaluation point as a fraction of the period, `t = num/den`.
    pub t_num: u64,
    pub t_den: u64,
    pub precision_bits: u32,
}

/// `ψ(t) = ∏cos(2πxₖt)` at rational `t = num/den ∈ [0,1)`, multiplying
/// sequentially in fixed point: every intermediate product is truncated to
/// `precision_bits` fractional bits. The accumulated truncation error is at
/// most `n·2^{1−precision_bits}`.
pub fn psi_eval(
    inst: &PartitionInstance,
    t_num: u64,
    t_den: u64,
    precision_bits: u32,
) -> Result<PsiEvaluation> {
    if precision_bits < 16 {
        return Err(Error::PrecisionTooLow {
            bits: precision_bits,
        });
    }
    assert!(t_den > 0 && t_num < t_den, "t must lie in [0,1)");
    let scale = (precision_bits.min(62) as f64).exp2();
    let mut value = 1.0f64;
    for &turn in &reduced_turns(inst, t_num, t_den) {
        let (c, _) = cos_sin_of_turn(turn, t_den);
        value = (value * c * scale).trunc() / scale;
    }
    Ok(PsiEvaluation {
        value,
        t_num,
        t_den,
        precision_bits,
    })
}

/// `ψ` at a complex argument, full float precision. Smoke-test route for
/// the hyperbolic identities; elements are converted to `f64`.
pub fn psi_eval_complex(inst: &PartitionInstance, t: Complex64) -> Complex64 {
    inst.numbers()
        .iter()
        .map(|x| {
            let x = x.to_f64().unwrap_or(f64::INFINITY);
            (Complex64::new(2.0 * std::f64::consts::PI * x, 0.0) * t).cos()
        })
        .product()
}

/// Result of the trapezoid count `2ⁿ·(1/N)·Σ ψ(m/N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub raw: f64,
    pub rounded: u64,
    pub node_count: u64,
    pub residual: f64,
}

impl QuadratureResult {
    /// Residuals at or above 0.25 mean the rounded value cannot be trusted;
    /// callers should fall back to an exact counter.
    pub fn reliable(&self) -> bool {
        self.residual < 0.25
    }
}

fn quadrature_guard(inst: &PartitionInstance) -> Result<u64> {
    if inst.n() > QUADRATURE_N_LIMIT {
        return Err(Error::QuadratureGuard {
            n: inst.n(),
            limit: QUADRATURE_N_LIMIT,
        });
    }
    inst.total_u64().ok_or(Error::ElementTooLarge {
        value: inst.total().to_string(),
    })
}

/// Zero-partition count by exact-node trapezoid quadrature, with
/// `N = oversample·(total+1)` nodes and compensated summation in fixed
/// ascending order.
pub fn count_zero_quadrature(inst: &PartitionInstance, oversample: u64) -> Result<QuadratureResult> {
    let total = quadrature_guard(inst)?;
    let nodes = oversample.max(1) * (total + 1);
    Ok(trapezoid_count(inst, nodes))
}

/// The bare trapezoid sum with an arbitrary node count. For `N ≤ total`
/// the value is the aliased sum `Σ_u c_{uN}` rather than the zero count.
pub fn trapezoid_count(inst: &PartitionInstance, nodes: u64) -> QuadratureResult {
    let mut acc = KahanSum::new();
    for m in 1..=nodes {
        let mut psi = 1.0f64;
        for &turn in &reduced_turns(inst, m % nodes, nodes) {
            psi *= cos_sin_of_turn(turn, nodes).0;
        }
        acc.add(psi);
    }
    let raw = (inst.n() as f64).exp2() * acc.value() / nodes as f64;
    let rounded = raw.round().max(0.0) as u64;
    QuadratureResult {
        raw,
        rounded,
        node_count: nodes,
        residual: (raw - raw.round()).abs(),
    }
}

/// Roots-of-unity filter `(2ⁿ/N)·Σₘ e^{2πijm/N}·ψ(m/N)`, evaluated
/// literally in complex arithmetic.
///
/// The phase `+j` selects sizes `≡ −j (mod N)`; since the size spectrum is
/// symmetric under `σ → −σ`, the residue counts satisfy
/// `counts[j] = counts[N−j]` on every instance, so the nearest integer
/// always agrees with the residue-DP count at `j` as well. Returns the real
/// part and its residual against the nearest integer.
pub fn residue_count_spectral(
    inst: &PartitionInstance,
    modulus: u64,
    j: u64,
) -> Result<(f64, f64)> {
    quadrature_guard(inst)?;
    if modulus == 0 || j >= modulus {
        return Err(Error::BadModulus);
    }
    let mut re = KahanSum::new();
    for m in 1..=modulus {
        let mut psi = 1.0f64;
        for &turn in &reduced_turns(inst, m % modulus, modulus) {
            psi *= cos_sin_of_turn(turn, modulus).0;
        }
        let (pc, _ps) = cos_sin_of_turn((j * m) % modulus, modulus);
        // Imaginary parts cancel by symmetry; only the real part is summed.
        re.add(pc * psi);
    }
    let value = (inst.n() as f64).exp2() * re.value() / modulus as f64;
    Ok((value, (value - value.round()).abs()))
}

/// `Σxₖ²`, the variance of the sizes of all partitions.
pub fn variance_total(inst: &PartitionInstance) -> BigUint {
    inst.numbers().iter().map(|x| x * x).sum()
}

/// Both computation paths of the variance: the direct sum of squares and
/// the spectrum side `2⁻ⁿ·Σ_σ⟨x,σ⟩²`. They must agree exactly.
pub fn variance_total_verified(inst: &PartitionInstance) -> Result<(BigUint, BigUint)> {
    let direct = variance_total(inst);
    let moment = model::size_spectrum(inst)?.second_moment();
    let spectral = moment >> inst.n();
    Ok((direct, spectral))
}

/// Second moment of the sizes divisible by `N`, in units of `N²`: equals
/// `Σ_v v²·c_{Nv}` exactly after rounding.
///
/// Evaluated through the analytically differentiated product: with
/// `P = ∏cos`, the second derivative of `2ⁿψ` at the roots of unity
/// aliases to `−4π²·N²·Σ_v v²·c_{Nv}`, so the pinned normalization is
/// `−2ⁿ/(4π²N³)·Σₘ ψ''(m/N)`.
pub fn variance_divisible(inst: &PartitionInstance, modulus: u64) -> Result<f64> {
    quadrature_guard(inst)?;
    if modulus == 0 {
        return Err(Error::BadModulus);
    }
    let xs: Vec<f64> = inst
        .numbers()
        .iter()
        .map(|x| x.to_f64().ok_or(Error::ElementTooLarge {
            value: x.to_string(),
        }))
        .collect::<Result<_>>()?;
    let mut acc = KahanSum::new();
    for m in 1..=modulus {
        let turns = reduced_turns(inst, m % modulus, modulus);
        let trig: Vec<(f64, f64)> = turns
            .iter()
            .map(|&t| cos_sin_of_turn(t, modulus))
            .collect();
        acc.add(neg_second_derivative_over_4pi2(&xs, &trig));
    }
    let m3 = (modulus as f64).powi(3);
    Ok((inst.n() as f64).exp2() * acc.value() / m3)
}

/// `−ψ''(t)/(4π²) = Σ_ℓ xₗ²·P − Σ_{ℓ≠ℓ'} xₗxₗ'·sₗsₗ'·∏_{k∉{ℓ,ℓ'}}cₖ`.
/// Exact zero cosines (axis points) are handled by case rather than
/// division.
fn neg_second_derivative_over_4pi2(xs: &[f64], trig: &[(f64, f64)]) -> f64 {
    let zeros: Vec<usize> = trig
        .iter()
        .enumerate()
        .filter(|(_, (c, _))| *c == 0.0)
        .map(|(i, _)| i)
        .collect();
    let prod_nonzero: f64 = trig
        .iter()
        .filter(|(c, _)| *c != 0.0)
        .map(|(c, _)| c)
        .product();
    let full_product = if zeros.is_empty() { prod_nonzero } else { 0.0 };
    let sum_sq: f64 = xs.iter().map(|x| x * x).sum();
    let diagonal = sum_sq * full_product;

    let cross = match zeros.len() {
        0 => {
            let ratios: Vec<f64> = xs
                .iter()
                .zip(trig)
                .map(|(x, (c, s))| x * s / c)
                .collect();
            let sum: f64 = ratios.iter().sum();
            let sum2: f64 = ratios.iter().map(|r| r * r).sum();
            prod_nonzero * (sum * sum - sum2)
        }
        1 => {
            let z = zeros[0];
            let others: f64 = xs
                .iter()
                .zip(trig)
                .enumerate()
                .filter(|&(i, _)| i != z)
                .map(|(_, (x, (c, s)))| x * s / c)
                .sum();
            2.0 * xs[z] * trig[z].1 * prod_nonzero * others
        }
        2 => {
            let (a, b) = (zeros[0], zeros[1]);
            2.0 * xs[a] * trig[a].1 * xs[b] * trig[b].1 * prod_nonzero
        }
        _ => 0.0,
    };
    diagonal - cross
}

/// Integral-path correlation sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    pub raw: f64,
    pub rounded: i64,
    pub residual: f64,
}

impl CorrelationResult {
    pub fn reliable(&self) -> bool {
        self.residual < 0.25
    }
}

/// `Σ_{σ:⟨x,σ⟩=0} σᵢσⱼ`, computed as
/// `−2ⁿ·∫₀¹ sin(2πxᵢt)·sin(2πxⱼt)·∏_{k≠i,j}cos(2πxₖt) dt`
/// by exact-node trapezoid (the integrand is a trig polynomial of degree
/// at most `total`).
pub fn sign_correlation(inst: &PartitionInstance, i: usize, j: usize) -> Result<CorrelationResult> {
    let total = quadrature_guard(inst)?;
    if i == j || i >= inst.n() || j >= inst.n() {
        return Err(Error::InvalidPair {
            i,
            j,
            n: inst.n(),
        });
    }
    let nodes = total + 1;
    let mut acc = KahanSum::new();
    for m in 1..=nodes {
        let turns = reduced_turns(inst, m % nodes, nodes);
        let mut term = 1.0f64;
        for (k, &turn) in turns.iter().enumerate() {
            let (c, s) = cos_sin_of_turn(turn, nodes);
            term *= if k == i || k == j { s } else { c };
        }
        acc.add(term);
    }
    let raw = -(inst.n() as f64).exp2() * acc.value() / nodes as f64;
    Ok(CorrelationResult {
        raw,
        rounded: raw.round() as i64,
        residual: (raw - raw.round()).abs(),
    })
}

/// The replicated-instance limit constant `1/√(8π·Σxₖ²)`.
pub fn gaussian_limit_constant(inst: &PartitionInstance) -> f64 {
    let sum_sq = variance_total(inst).to_f64().unwrap_or(f64::INFINITY);
    1.0 / (8.0 * std::f64::consts::PI * sum_sq).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationReport {
    pub copies: u64,
    pub integral_value: f64,
    pub limit_constant: f64,
    pub abs_error: f64,
}

/// Numerically evaluates the replicated-instance integral
/// `∫ ∏ₖ cosᴺ(2πxₖt/√N) dt` over the central peak and compares it to the
/// Gaussian limit constant.
///
/// The integrand is periodic: it repeats a unit peak at every
/// `t = √N·m/(2g)` with `g = gcd(x)`. The limit constant is the
/// contribution of the single peak at the origin, so the integration
/// window is cut at the midpoint `√N/(4g)` before the first repeat; the
/// Gaussian tail beyond it is negligible for the `N` used here.
pub fn replication_convergence(inst: &PartitionInstance, copies: u64) -> Result<ReplicationReport> {
    let copies = copies.max(1);
    let xs: Vec<f64> = inst
        .numbers()
        .iter()
        .map(|x| x.to_f64().ok_or(Error::ElementTooLarge {
            value: x.to_string(),
        }))
        .collect::<Result<_>>()?;
    let g = inst
        .numbers()
        .iter()
        .fold(BigUint::zero(), |acc, x| num_integer::gcd(acc, x.clone()))
        .to_f64()
        .unwrap();
    let sqrt_n = (copies as f64).sqrt();
    let upper = sqrt_n / (4.0 * g);
    let steps = 1usize << 16;
    let h = upper / steps as f64;
    let integrand = |t: f64| -> f64 {
        xs.iter()
            .map(|x| {
                (2.0 * std::f64::consts::PI * x * t / sqrt_n)
                    .cos()
                    .powi(copies as i32)
            })
            .product()
    };
    // Composite Simpson rule.
    let mut acc = KahanSum::new();
    acc.add(integrand(0.0) + integrand(upper));
    for k in 1..steps {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc.add(w * integrand(k as f64 * h));
    }
    let integral_value = acc.value() * h / 3.0;
    let limit_constant = gaussian_limit_constant(inst);
    Ok(ReplicationReport {
        copies,
        integral_value,
        limit_constant,
        abs_error: (integral_value - limit_constant).abs(),
    })
}

/// The analytic trapezoid error bound `4πM/(rᴺ−1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBoundReport {
    pub magnitude_bound: f64,
    pub annulus_radius: f64,
    pub node_count: u64,
    pub bound: f64,
}

pub fn trapezoid_error_bound(
    magnitude_bound: f64,
    annulus_radius: f64,
    node_count: u64,
) -> Result<ErrorBoundReport> {
    if !(magnitude_bound > 0.0) || !(annulus_radius > 1.0) || node_count == 0 {
        return Err(Error::BadScanRange(format!(
            "need M > 0, r > 1, N >= 1; got M = {magnitude_bound}, r = {annulus_radius}, N = {node_count}"
        )));
    }
    let bound = 4.0 * std::f64::consts::PI * magnitude_bound
        / (annulus_radius.powi(node_count as i32) - 1.0);
    Ok(ErrorBoundReport {
        magnitude_bound,
        annulus_radius,
        node_count,
        bound,
    })
}

/// Verdict of the zero-vs-infinite improper integral dichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineIntegralClass {
    /// `∫₀^∞ ∏cos(xₖt) dt = ∞`: a zero partition exists.
    Infinite,
    /// The integral is zero: no zero partition.
    Zero,
}

/// The dichotomy is an iff with zero-count positivity, so it is decided
/// semantically from an exact count, never by improper integration.
pub fn classify_line_integral(inst: &PartitionInstance) -> Result<LineIntegralClass> {
    let count = match model::count_zero_dp(inst) {
        Ok(c) => c,
        Err(_) => model::count_zero_oracle(inst)?,
    };
    Ok(if count.is_zero() {
        LineIntegralClass::Zero
    } else {
        LineIntegralClass::Infinite
    })
}
