//! Inter-annotator reliability.
//!
//! The annotation design is one-way random effects: each item is rated by k
//! annotators drawn from a larger pool, and we assess the reliability of the
//! k-rater average. The matching estimator is ICC(1,k):
//!
//! ```text
//! ICC(1,k) = (MSB - MSW) / MSB
//! ```
//!
//! with MSB the between-item mean square (df n-1) and MSW the within-item
//! mean square (df n(k-1)).

use thiserror::Error;

use crate::corpus::RatingSummary;

#[derive(Debug, Error)]
pub enum AgreementError {
    #[error("rating matrix needs at least 2 items, got {items}")]
    TooFewItems { items: usize },
    #[error("rating matrix needs at least 2 ratings per item, got {raters}")]
    TooFewRaters { raters: usize },
    #[error("rating matrix must be rectangular: item {item} has {got} ratings, expected {expected}")]
    Ragged { item: usize, got: usize, expected: usize },
    #[error("no between-item variance; ICC(1,k) is undefined")]
    Degenerate,
}

/// A rectangular n x k table of ratings: n items, each rated by k raters.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingMatrix {
    items: Vec<Vec<f64>>,
    raters: usize,
}

impl RatingMatrix {
    pub fn new(items: Vec<Vec<f64>>) -> Result<RatingMatrix, AgreementError> {
        if items.len() < 2 {
            return Err(AgreementError::TooFewItems { items: items.len() });
        }
        let raters = items[0].len();
        if raters < 2 {
            return Err(AgreementError::TooFewRaters { raters });
        }
        for (i, row) in items.iter().enumerate() {
            if row.len() != raters {
                return Err(AgreementError::Ragged { item: i, got: row.len(), expected: raters });
            }
        }
        Ok(RatingMatrix { items, raters })
    }

    pub fn items(&self) -> &[Vec<f64>] {
        &self.items
    }

    pub fn raters(&self) -> usize {
        self.raters
    }
}

/// One-way random-effects, average-measure intraclass correlation.
///
/// At most 1; exactly 1 when raters agree perfectly on every item while
/// items differ. Negative values are reported as computed, not clamped.
/// Errors when there is no between-item variance (MSB = 0).
pub fn icc1k(matrix: &RatingMatrix) -> Result<f64, AgreementError> {
    let n = matrix.items.len() as f64;
    let k = matrix.raters as f64;

    let grand: f64 = matrix.items.iter().flatten().sum::<f64>() / (n * k);
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for row in &matrix.items {
        let mean = row.iter().sum::<f64>() / k;
        ssb += k * (mean - grand) * (mean - grand);
        for &x in row {
            ssw += (x - mean) * (x - mean);
        }
    }
    let msb = ssb / (n - 1.0);
    let msw = ssw / (n * (k - 1.0));
    if msb <= 0.0 {
        return Err(AgreementError::Degenerate);
    }
    Ok((msb - msw) / msb)
}

/// One row of the disagreement-binned reliability table.
///
/// `icc1k` is absent when the bin holds fewer than two items or its
/// between-item variance vanishes. `coverage` is the fraction of all
/// records falling in the bin; bins nest, so coverage is non-decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityRow {
    pub label: String,
    pub max_disagreement: u8,
    pub icc1k: Option<f64>,
    pub coverage: f64,
}

/// Default nested disagreement bins: {0}, 0-2, 0-4, 0-6, 0-8.
pub const DEFAULT_BINS: [u8; 5] = [0, 2, 4, 6, 8];

/// Compute per-bin ICC(1,k) and coverage over nested disagreement bins.
/// Each record pairs its summary with the raw rating triple. Bin `t` holds
/// the records with disagreement <= t.
pub fn reliability_table(
    records: &[(RatingSummary, [u8; 3])],
    bins: &[u8],
) -> Vec<ReliabilityRow> {
    let total = records.len();
    bins.iter()
        .map(|&threshold| {
            let subset: Vec<Vec<f64>> = records
                .iter()
                .filter(|(summary, _)| summary.disagreement <= threshold)
                .map(|(_, triple)| triple.iter().map(|&r| f64::from(r)).collect())
                .collect();
            let coverage = if total == 0 { 0.0 } else { subset.len() as f64 / total as f64 };
            let icc = RatingMatrix::new(subset).ok().and_then(|m| icc1k(&m).ok());
            ReliabilityRow {
                label: if threshold == 0 { "0".to_string() } else { format!("0-{threshold}") },
                max_disagreement: threshold,
                icc1k: icc,
                coverage,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{summarize, AnnotationTriple, RatingLabel};

    fn matrix(rows: &[&[f64]]) -> RatingMatrix {
        RatingMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    /// Independent two-loop variance-decomposition oracle.
    fn icc1k_oracle(rows: &[Vec<f64>]) -> Option<f64> {
        let n = rows.len();
        let k = rows[0].len();
        let all: Vec<f64> = rows.iter().flatten().copied().collect();
        let grand = all.iter().sum::<f64>() / all.len() as f64;
        let row_means: Vec<f64> = rows.iter().map(|r| r.iter().sum::<f64>() / k as f64).collect();
        let mut ssb = 0.0;
        for m in &row_means {
            ssb += k as f64 * (m - grand).powi(2);
        }
        let mut ssw = 0.0;
        for (row, m) in rows.iter().zip(&row_means) {
            for x in row {
                ssw += (x - m).powi(2);
            }
        }
        let msb = ssb / (n as f64 - 1.0);
        let msw = ssw / (n as f64 * (k as f64 - 1.0));
        if msb <= 0.0 {
            None
        } else {
            Some((msb - msw) / msb)
        }
    }

    #[test]
    fn icc_perfect_agreement_on_distinct_items() {
        let m = matrix(&[&[1.0, 1.0, 1.0], &[5.0, 5.0, 5.0]]);
        assert_eq!(icc1k(&m).unwrap(), 1.0);
    }

    #[test]
    fn icc_three_by_three_sums_of_squares() {
        // SSB = 8, MSB = 4, SSW = 4, MSW = 2/3, (4 - 2/3)/4 = 5/6
        let m = matrix(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 3.0], &[2.0, 2.0, 2.0]]);
        let got = icc1k(&m).unwrap();
        assert!((got - 5.0 / 6.0).abs() < 1e-12);
        assert!((got - 0.8333).abs() < 1e-4);
    }

    #[test]
    fn icc_degenerate_when_items_identical() {
        let m = matrix(&[&[2.0, 3.0], &[2.0, 3.0], &[2.0, 3.0]]);
        assert!(matches!(icc1k(&m), Err(AgreementError::Degenerate)));
    }

    #[test]
    fn icc_matrix_shape_validation() {
        assert!(matches!(
            RatingMatrix::new(vec![vec![1.0, 2.0]]),
            Err(AgreementError::TooFewItems { .. })
        ));
        assert!(matches!(
            RatingMatrix::new(vec![vec![1.0], vec![2.0]]),
            Err(AgreementError::TooFewRaters { .. })
        ));
        assert!(matches!(
            RatingMatrix::new(vec![vec![1.0, 2.0], vec![2.0]]),
            Err(AgreementError::Ragged { item: 1, .. })
        ));
    }

    fn lcg(state: &mut u64) -> f64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*state >> 33) % 1000) as f64 / 100.0
    }

    #[test]
    fn icc_equals_oracle_and_is_affine_invariant() {
        let mut state = 42u64;
        for trial in 0..200 {
            let n = 2 + (trial % 5);
            let k = 2 + (trial % 4);
            let rows: Vec<Vec<f64>> =
                (0..n).map(|_| (0..k).map(|_| lcg(&mut state)).collect()).collect();
            let Ok(m) = RatingMatrix::new(rows.clone()) else { continue };
            match (icc1k(&m), icc1k_oracle(&rows)) {
                (Ok(got), Some(want)) => {
                    assert!((got - want).abs() < 1e-10, "trial {trial}");
                    assert!(got <= 1.0 + 1e-12);
                    // relative tolerance: near-degenerate matrices make the
                    // ratio arbitrarily large and amplify rounding
                    let tol = 1e-10 * got.abs().max(1.0);

                    // shift by +7 and scale by 3: both mean squares scale identically
                    let transformed: Vec<Vec<f64>> = rows
                        .iter()
                        .map(|r| r.iter().map(|x| 3.0 * x + 7.0).collect())
                        .collect();
                    let t = icc1k(&RatingMatrix::new(transformed).unwrap()).unwrap();
                    assert!((got - t).abs() < tol, "affine invariance, trial {trial}");

                    // permuting ratings within an item leaves MSW and MSB unchanged
                    let mut permuted = rows.clone();
                    for row in &mut permuted {
                        row.reverse();
                    }
                    let p = icc1k(&RatingMatrix::new(permuted).unwrap()).unwrap();
                    assert!((got - p).abs() < tol, "permutation invariance, trial {trial}");
                }
                (Err(_), None) => {}
                other => panic!("trial {trial}: implementation/oracle disagree: {other:?}"),
            }
        }
    }

    fn record(a: u8, b: u8, c: u8) -> (RatingSummary, [u8; 3]) {
        let triple = AnnotationTriple::new(
            "r",
            [RatingLabel::Rating(a), RatingLabel::Rating(b), RatingLabel::Rating(c)],
        )
        .unwrap();
        (summarize(&triple).unwrap(), [a, b, c])
    }

    #[test]
    fn reliability_table_zero_disagreement_bin() {
        let records = vec![record(1, 1, 1), record(5, 5, 5), record(3, 3, 3)];
        let rows = reliability_table(&records, &DEFAULT_BINS);
        assert_eq!(rows[0].label, "0");
        assert_eq!(rows[0].icc1k, Some(1.0));
        assert_eq!(rows[0].coverage, 1.0);
    }

    #[test]
    fn reliability_table_nested_coverage_and_subset_oracle() {
        // deterministic synthetic pool of 50 rating triples
        let mut state = 7u64;
        let mut next = |hi: u8| -> u8 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            1 + ((state >> 33) % u64::from(hi)) as u8
        };
        let records: Vec<_> = (0..50).map(|_| record(next(5), next(5), next(5))).collect();

        let rows = reliability_table(&records, &DEFAULT_BINS);
        assert_eq!(rows.len(), 5);
        for pair in rows.windows(2) {
            assert!(pair[0].coverage <= pair[1].coverage, "nested bins grow");
        }
        assert_eq!(rows[4].coverage, 1.0);

        for row in &rows {
            let subset: Vec<Vec<f64>> = records
                .iter()
                .filter(|(s, _)| s.disagreement <= row.max_disagreement)
                .map(|(_, t)| t.iter().map(|&r| f64::from(r)).collect())
                .collect();
            let want = if subset.len() < 2 { None } else { icc1k_oracle(&subset) };
            match (row.icc1k, want) {
                (Some(got), Some(w)) => assert!((got - w).abs() < 1e-10, "bin {}", row.label),
                (None, None) => {}
                other => panic!("bin {}: {:?}", row.label, other),
            }
        }
    }

    #[test]
    fn reliability_table_sparse_bins_absent() {
        let records = vec![record(1, 5, 1)]; // disagreement 8 only
        let rows = reliability_table(&records, &DEFAULT_BINS);
        assert_eq!(rows[0].icc1k, None);
        assert_eq!(rows[0].coverage, 0.0);
        assert_eq!(rows[4].icc1k, None); // single record is still < 2 items
        assert_eq!(rows[4].coverage, 1.0);
    }
}
