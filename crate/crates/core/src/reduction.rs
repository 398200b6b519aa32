//! #SAT → #SUBSET-SUM → #PART reduction chain.
//!
//! The subset-sum construction is columnwise: one digit column per
//! variable and per clause, all digits at most 4. Any subset whose sum
//! matches the target must match it column by column without carries in
//! every radix `b ≥ 6` (a column sum plus incoming carry never exceeds 7,
//! so a digit can only equal its target digit carry-free). The stored
//! digit vectors are therefore the canonical form and can be reinterpreted
//! in any admissible radix, yielding partition instances with identical
//! zero-partition counts.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::error::{Error as CoreError, Result as CoreResult};
use crate::model::{self, PartitionInstance};

/// A 3CNF clause: 1 to 3 distinct literals, no variable twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    literals: Vec<i32>,
}

impl Clause {
    pub fn literals(&self) -> &[i32] {
        &self.literals
    }

    pub fn is_satisfied(&self, assignment: u64) -> bool {
        self.literals.iter().any(|&lit| {
            let v = (assignment >> (lit.unsigned_abs() - 1)) & 1 == 1;
            (lit > 0) == v
        })
    }

    fn true_literal_count(&self, assignment: u64) -> usize {
        self.literals
            .iter()
            .filter(|&&lit| {
                let v = (assignment >> (lit.unsigned_abs() - 1)) & 1 == 1;
                (lit > 0) == v
            })
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing 'p cnf <vars> <clauses>' header")]
    MissingHeader,
    #[error("line {line}: malformed header '{text}'")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: unexpected token '{token}'")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {literal} out of range for {num_vars} variables")]
    LiteralOutOfRange {
        line: usize,
        literal: i32,
        num_vars: usize,
    },
    #[error("line {line}: clause has more than 3 distinct literals")]
    OversizeClause { line: usize },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("line {line}: clause contains a literal and its negation")]
    Tautology { line: usize },
    #[error("unterminated clause at end of input")]
    Unterminated,
}

/// Parse DIMACS CNF text. Comments (`c …`) are skipped, duplicate literals
/// within a clause are collapsed, tautological clauses are rejected (their
/// digit column would overflow).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, ParseError> {
    let mut num_vars: Option<usize> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut clause_line = 0usize;

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw_line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, c] => v
                    .parse::<usize>()
                    .ok()
                    .zip(c.parse::<usize>().ok()),
                _ => None,
            };
            match parsed {
                Some((v, _)) => num_vars = Some(v),
                None => {
                    return Err(ParseError::MalformedHeader {
                        line,
                        text: trimmed.to_string(),
                    })
                }
            }
            continue;
        }
        let num_vars = num_vars.ok_or(ParseError::MissingHeader)?;
        for token in trimmed.split_whitespace() {
            let literal: i32 = token.parse().map_err(|_| ParseError::BadToken {
                line,
                token: token.to_string(),
            })?;
            if literal == 0 {
                clauses.push(finish_clause(
                    std::mem::take(&mut current),
                    clause_line.max(line),
                )?);
                clause_line = 0;
                continue;
            }
            if literal.unsigned_abs() as usize > num_vars {
                return Err(ParseError::LiteralOutOfRange {
                    line,
                    literal,
                    num_vars,
                });
            }
            if current.is_empty() {
                clause_line = line;
            }
            current.push(literal);
        }
    }
    if num_vars.is_none() {
        return Err(ParseError::MissingHeader);
    }
    if !current.is_empty() {
        return Err(ParseError::Unterminated);
    }
    Ok(CnfFormula {
        num_vars: num_vars.unwrap(),
        clauses,
    })
}

fn finish_clause(mut literals: Vec<i32>, line: usize) -> Result<Clause, ParseError> {
    literals.sort_unstable();
    literals.dedup();
    if literals.is_empty() {
        return Err(ParseError::EmptyClause { line });
    }
    for w in literals.windows(2) {
        if w[0] == -w[1] {
            return Err(ParseError::Tautology { line });
        }
    }
    if literals.len() > 3 {
        return Err(ParseError::OversizeClause { line });
    }
    Ok(Clause { literals })
}

/// Which slack construction the clause columns use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReductionVariant {
    /// Clause target digit 3 with two unit slacks. Subsets overcount
    /// assignments by `2^{#clauses with exactly two true literals}`.
    Classic,
    /// Clause target digit 4 with slacks 1 and 2. Subsets biject with
    /// satisfying assignments.
    #[default]
    Parsimonious,
}

/// A subset-sum instance with its canonical digit vectors retained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumInstance {
    numbers: Vec<BigUint>,
    target: BigUint,
    radix: u32,
    digit_vectors: Vec<Vec<u8>>,
    target_digits: Vec<u8>,
    variant: ReductionVariant,
}

impl SubsetSumInstance {
    pub fn numbers(&self) -> &[BigUint] {
        &self.numbers
    }

    pub fn target(&self) -> &BigUint {
        &self.target
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn digit_vectors(&self) -> &[Vec<u8>] {
        &self.digit_vectors
    }

    pub fn target_digits(&self) -> &[u8] {
        &self.target_digits
    }

    pub fn variant(&self) -> ReductionVariant {
        self.variant
    }

    /// Reinterpret the stored digit vectors in another admissible radix.
    pub fn reradix(&self, radix: u32) -> CoreResult<Self> {
        if radix < 6 {
            return Err(CoreError::RadixTooSmall { radix });
        }
        Ok(Self {
            numbers: self
                .digit_vectors
                .iter()
                .map(|d| digits_to_value(d, radix))
                .collect(),
            target: digits_to_value(&self.target_digits, radix),
            radix,
            digit_vectors: self.digit_vectors.clone(),
            target_digits: self.target_digits.clone(),
            variant: self.variant,
        })
    }
}

/// Little-endian digit vector evaluated in the given radix.
fn digits_to_value(digits: &[u8], radix: u32) -> BigUint {
    let mut acc = BigUint::zero();
    for &d in digits.iter().rev() {
        acc = acc * radix + d;
    }
    acc
}

/// Build the subset-sum instance for a formula. Element order is fixed:
/// `y₁..y_l, z₁..z_l, g₁..g_k, h₁..h_k`.
pub fn sat_to_subset_sum(
    formula: &CnfFormula,
    radix: u32,
    variant: ReductionVariant,
) -> CoreResult<SubsetSumInstance> {
    if radix < 6 {
        return Err(CoreError::RadixTooSmall { radix });
    }
    let l = formula.num_vars();
    let k = formula.clauses().len();
    let width = l + k;
    // Column layout, little-endian: clause m (1-based) at position k − m,
    // variable i (1-based) at position k + l − i.
    let clause_pos = |m: usize| k - m;
    let var_pos = |i: usize| k + l - i;

    let mut digit_vectors: Vec<Vec<u8>> = Vec::with_capacity(2 * l + 2 * k);
    for i in 1..=l {
        for positive in [true, false] {
            let mut digits = vec![0u8; width];
            digits[var_pos(i)] = 1;
            for (m, clause) in formula.clauses().iter().enumerate() {
                let wanted = if positive { i as i32 } else { -(i as i32) };
                if clause.literals().contains(&wanted) {
                    digits[clause_pos(m + 1)] += 1;
                }
            }
            digit_vectors.push(digits);
        }
    }
    // Interleaved y/z above; reorder to y₁..y_l then z₁..z_l.
    let (ys, zs): (Vec<_>, Vec<_>) = digit_vectors
        .chunks(2)
        .map(|pair| (pair[0].clone(), pair[1].clone()))
        .unzip();
    let mut digit_vectors: Vec<Vec<u8>> = ys.into_iter().chain(zs).collect();

    let (g_digit, h_digit, clause_target) = match variant {
        ReductionVariant::Classic => (1u8, 1u8, 3u8),
        ReductionVariant::Parsimonious => (1u8, 2u8, 4u8),
    };
    for digit in [g_digit, h_digit] {
        for m in 1..=k {
            let mut digits = vec![0u8; width];
            digits[clause_pos(m)] = digit;
            digit_vectors.push(digits);
        }
    }

    let mut target_digits = vec![0u8; width];
    for i in 1..=l {
        target_digits[var_pos(i)] = 1;
    }
    for m in 1..=k {
        target_digits[clause_pos(m)] = clause_target;
    }

    // Structural digit safety: digits ≤ 4 and column sums within the
    // carry-free window for radix ≥ 6.
    let column_cap = match variant {
        ReductionVariant::Classic => 5u32,
        ReductionVariant::Parsimonious => 6u32,
    };
    for pos in 0..width {
        let col: u32 = digit_vectors.iter().map(|d| d[pos] as u32).sum();
        debug_assert!(col <= column_cap, "column {pos} sum {col}");
    }
    debug_assert!(digit_vectors.iter().flatten().all(|&d| d <= 4));

    Ok(SubsetSumInstance {
        numbers: digit_vectors
            .iter()
            .map(|d| digits_to_value(d, radix))
            .collect(),
        target: digits_to_value(&target_digits, radix),
        radix,
        digit_vectors,
        target_digits,
        variant,
    })
}

/// The partition instance `S ∪ {2s−t, s+t}` with the anchors appended
/// last, and the count relation `zero_partitions = 2·subset_count`.
pub fn subset_sum_to_partition(ss: &SubsetSumInstance) -> CoreResult<PartitionInstance> {
    let sum: BigUint = ss.numbers().iter().sum();
    let target = ss.target();
    // Both anchors must stay positive: 0 < t < 2s.
    if target.is_zero() || target >= &(&sum * 2u32) {
        return Err(CoreError::InvalidTarget {
            target: target.to_string(),
            sum: sum.to_string(),
        });
    }
    let mut numbers = ss.numbers().to_vec();
    numbers.push(&sum * 2u32 - target);
    numbers.push(&sum + target);
    PartitionInstance::new(numbers)
}

#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub radix: u32,
    pub subset_sum: SubsetSumInstance,
    pub partition: PartitionInstance,
}

/// One formula reduced under several radices: identical digit vectors,
/// different numbers, the same zero-partition count.
pub fn multi_radix_family(
    formula: &CnfFormula,
    radices: &[u32],
    variant: ReductionVariant,
) -> CoreResult<Vec<FamilyMember>> {
    let base = sat_to_subset_sum(formula, 6, variant)?;
    radices
        .iter()
        .map(|&radix| {
            let subset_sum = base.reradix(radix)?;
            let partition = subset_sum_to_partition(&subset_sum)?;
            Ok(FamilyMember {
                radix,
                subset_sum,
                partition,
            })
        })
        .collect()
}

/// Outcome of counting a formula through the full pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineCount {
    pub variant: ReductionVariant,
    pub zero_partitions: BigUint,
    /// `zero_partitions / 2`: the subset-sum solution count.
    pub subset_count: BigUint,
    /// Exact #SAT; only the parsimonious variant preserves it. Under the
    /// classic variant `subset_count` equals the assignment count weighted
    /// by `2^{#clauses with exactly two true literals}`, so no #SAT value
    /// is reported.
    pub sat_count: Option<BigUint>,
}

/// Reduce, count zero partitions exactly, and translate back.
pub fn count_sat_via_pipeline(
    formula: &CnfFormula,
    radix: u32,
    variant: ReductionVariant,
) -> CoreResult<PipelineCount> {
    let ss = sat_to_subset_sum(formula, radix, variant)?;
    let partition = subset_sum_to_partition(&ss)?;
    let zero_partitions = model::count_zero_oracle(&partition)?;
    let subset_count = &zero_partitions / 2u32;
    let sat_count = match variant {
        ReductionVariant::Parsimonious => Some(subset_count.clone()),
        ReductionVariant::Classic => None,
    };
    Ok(PipelineCount {
        variant,
        zero_partitions,
        subset_count,
        sat_count,
    })
}

/// Truth-table #SAT; the independent oracle for pipeline checks.
pub fn truth_table_sat_count(formula: &CnfFormula) -> BigUint {
    let l = formula.num_vars();
    assert!(l <= 24, "truth table limited to small formulas");
    let mut count = BigUint::zero();
    for assignment in 0u64..(1 << l) {
        if formula.clauses().iter().all(|c| c.is_satisfied(assignment)) {
            count += BigUint::one();
        }
    }
    count
}

/// `Σ over satisfying assignments of 2^{#clauses with exactly two true
/// literals}`: the multiplicity the classic-variant subset count carries.
pub fn truth_table_weighted_count(formula: &CnfFormula) -> BigUint {
    let l = formula.num_vars();
    assert!(l <= 24);
    let mut count = BigUint::zero();
    for assignment in 0u64..(1 << l) {
        if formula.clauses().iter().all(|c| c.is_satisfied(assignment)) {
            let doubles = formula
                .clauses()
                .iter()
                .filter(|c| c.true_literal_count(assignment) == 2)
                .count();
            count += BigUint::one() << doubles;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn cnf(text: &str) -> CnfFormula {
        parse_dimacs(text).unwrap()
    }

    #[test]
    fn parse_basic() {
        let f = cnf("p cnf 3 1\n1 2 3 0\n");
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.clauses().len(), 1);
        assert_eq!(f.clauses()[0].literals(), &[1, 2, 3]);

        let f = cnf("p cnf 1 2\n1 0\n-1 0\n");
        assert_eq!(f.clauses().len(), 2);
    }

    #[test]
    fn parse_collapses_duplicates() {
        let f = cnf("p cnf 2 1\n1 1 0\n");
        assert_eq!(f.clauses()[0].literals(), &[1]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 5 0\n").unwrap_err(),
            ParseError::LiteralOutOfRange {
                line: 2,
                literal: 5,
                num_vars: 2
            }
        );
        assert_eq!(
            parse_dimacs("p wrong\n1 0\n").unwrap_err(),
            ParseError::MalformedHeader {
                line: 1,
                text: "p wrong".into()
            }
        );
        assert_eq!(
            parse_dimacs("p cnf 4 1\n1 2 3 4 0\n").unwrap_err(),
            ParseError::OversizeClause { line: 2 }
        );
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 -1 0\n").unwrap_err(),
            ParseError::Tautology { line: 2 }
        );
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 2\n").unwrap_err(),
            ParseError::Unterminated
        );
        assert_eq!(parse_dimacs("1 0\n").unwrap_err(), ParseError::MissingHeader);
    }

    fn brute_force_subset_count(ss: &SubsetSumInstance) -> u64 {
        let n = ss.numbers().len();
        assert!(n <= 24);
        let mut hits = 0u64;
        for mask in 0u64..(1 << n) {
            let sum: BigUint = ss
                .numbers()
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x.clone())
                .sum();
            if &sum == ss.target() {
                hits += 1;
            }
        }
        hits
    }

    #[test]
    fn one_clause_counts() {
        let f = cnf("p cnf 3 1\n1 2 3 0\n");
        let pars = sat_to_subset_sum(&f, 10, ReductionVariant::Parsimonious).unwrap();
        assert_eq!(pars.numbers().len(), 8);
        assert_eq!(brute_force_subset_count(&pars), 7);

        let classic = sat_to_subset_sum(&f, 10, ReductionVariant::Classic).unwrap();
        assert_eq!(brute_force_subset_count(&classic), 10);
    }

    #[test]
    fn unsat_formula_has_no_subsets() {
        let f = cnf("p cnf 1 2\n1 0\n-1 0\n");
        for variant in [ReductionVariant::Classic, ReductionVariant::Parsimonious] {
            let ss = sat_to_subset_sum(&f, 6, variant).unwrap();
            assert_eq!(brute_force_subset_count(&ss), 0);
        }
    }

    #[test]
    fn radix_guard() {
        let f = cnf("p cnf 1 1\n1 0\n");
        assert!(matches!(
            sat_to_subset_sum(&f, 5, ReductionVariant::Parsimonious),
            Err(CoreError::RadixTooSmall { radix: 5 })
        ));
    }

    fn manual_subset_sum(numbers: &[u64], target: u64) -> SubsetSumInstance {
        // Digit vectors in base 10 purely for the doubling-relation tests.
        SubsetSumInstance {
            numbers: numbers.iter().map(|&x| BigUint::from(x)).collect(),
            target: BigUint::from(target),
            radix: 10,
            digit_vectors: vec![],
            target_digits: vec![],
            variant: ReductionVariant::Parsimonious,
        }
    }

    #[test]
    fn partition_anchor_examples() {
        let ss = manual_subset_sum(&[1, 2, 3], 3);
        let p = subset_sum_to_partition(&ss).unwrap();
        let expected: Vec<u64> = vec![1, 2, 3, 9, 9];
        assert_eq!(
            p.numbers().iter().map(|x| x.to_u64().unwrap()).collect::<Vec<_>>(),
            expected
        );
        assert_eq!(
            model::count_zero_oracle(&p).unwrap(),
            BigUint::from(4u32)
        );

        let ss = manual_subset_sum(&[1], 1);
        let p = subset_sum_to_partition(&ss).unwrap();
        assert_eq!(model::count_zero_oracle(&p).unwrap(), BigUint::from(2u32));

        let ss = manual_subset_sum(&[2], 1);
        let p = subset_sum_to_partition(&ss).unwrap();
        assert_eq!(model::count_zero_oracle(&p).unwrap(), BigUint::zero());
    }

    #[test]
    fn invalid_targets_rejected() {
        // t = 2s would zero out an anchor.
        let ss = manual_subset_sum(&[1, 2], 6);
        assert!(subset_sum_to_partition(&ss).is_err());
        let ss = manual_subset_sum(&[1, 2], 7);
        assert!(subset_sum_to_partition(&ss).is_err());
    }

    #[test]
    fn family_counts_agree_across_radices() {
        let f = cnf("p cnf 3 1\n1 2 3 0\n");
        let family =
            multi_radix_family(&f, &[6, 7, 10], ReductionVariant::Parsimonious).unwrap();
        assert_eq!(family.len(), 3);
        for member in &family {
            assert_eq!(
                model::count_zero_oracle(&member.partition).unwrap(),
                BigUint::from(14u32),
                "radix {}",
                member.radix
            );
        }
    }

    #[test]
    fn pipeline_examples() {
        let f = cnf("p cnf 3 1\n1 2 3 0\n");
        let r = count_sat_via_pipeline(&f, 10, ReductionVariant::Parsimonious).unwrap();
        assert_eq!(r.sat_count, Some(BigUint::from(7u32)));

        let unsat = cnf("p cnf 1 2\n1 0\n-1 0\n");
        let r = count_sat_via_pipeline(&unsat, 6, ReductionVariant::Parsimonious).unwrap();
        assert_eq!(r.sat_count, Some(BigUint::zero()));

        let single = cnf("p cnf 1 1\n1 0\n");
        let r = count_sat_via_pipeline(&single, 6, ReductionVariant::Parsimonious).unwrap();
        assert_eq!(r.sat_count, Some(BigUint::one()));
    }

    #[test]
    fn classic_variant_weighted_count() {
        let f = cnf("p cnf 3 2\n1 2 3 0\n-1 2 0\n");
        let r = count_sat_via_pipeline(&f, 10, ReductionVariant::Classic).unwrap();
        assert_eq!(r.sat_count, None);
        assert_eq!(r.subset_count, truth_table_weighted_count(&f));
    }

    #[test]
    fn free_variables_double_the_count() {
        // Variable 2 appears in no clause: both slots remain free.
        let f = cnf("p cnf 2 1\n1 0\n");
        let r = count_sat_via_pipeline(&f, 6, ReductionVariant::Parsimonious).unwrap();
        assert_eq!(r.sat_count, Some(BigUint::from(2u32)));
        assert_eq!(truth_table_sat_count(&f), BigUint::from(2u32));
    }
}
