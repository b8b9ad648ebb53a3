//! Statistical analysis: correlations, min-max normalised OLS with
//! significance stars, one-way ANOVA over SyMCoM categories, and
//! prediction-error analysis.

pub mod dist;

use std::collections::HashMap;

use thiserror::Error;

use crate::corpus::{PosTag, RatingSummary, TaggedSentence, ALL_POS};
use crate::metrics::{symcom_pos, MetricRow, MetricsError};

pub use dist::{f_cdf, inc_beta, ln_gamma, t_cdf, t_two_sided_p};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("series length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {needed} observations, got {n}")]
    TooFewObservations { n: usize, needed: usize },
    #[error("zero variance in {what}")]
    ZeroVariance { what: String },
    #[error("column {what} is constant; min-max normalization is undefined")]
    ConstantColumn { what: String },
    #[error("design matrix is rank deficient at column {column}")]
    RankDeficient { column: String },
    #[error("one-way ANOVA needs at least 2 groups, got {got}")]
    FewGroups { got: usize },
    #[error("ANOVA group {index} is empty")]
    EmptyGroup { index: usize },
    #[error("zero within-group variance; F is undefined")]
    ZeroWithinVariance,
    #[error("{what} did not converge")]
    NoConvergence { what: String },
    #[error("invalid argument: {what}")]
    BadArgument { what: String },
    #[error("id {id:?} has no matching row")]
    AlignmentMismatch { id: String },
}

// ---------------------------------------------------------------------------
// correlation
// ---------------------------------------------------------------------------

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewObservations { n: x.len(), needed: 2 });
    }
    let (mx, my) = (mean(x), mean(y));
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in x.iter().zip(y) {
        cov += (a - mx) * (b - my);
        vx += (a - mx) * (a - mx);
        vy += (b - my) * (b - my);
    }
    if vx == 0.0 {
        return Err(StatsError::ZeroVariance { what: "x".to_string() });
    }
    if vy == 0.0 {
        return Err(StatsError::ZeroVariance { what: "y".to_string() });
    }
    Ok((cov / (vx * vy).sqrt()).clamp(-1.0, 1.0))
}

/// Average ranks (1-based); tied values share the mean of their ranks.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).expect("no NaN in ranked series"));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 share their mean
        let shared = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = shared;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation: Pearson over average-ranked series.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch { left: x.len(), right: y.len() });
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

// ---------------------------------------------------------------------------
// normalization and OLS
// ---------------------------------------------------------------------------

/// Min-max normalise a column to [0, 1]. Errors on a constant column.
pub fn minmax_normalize(column: &[f64]) -> Result<Vec<f64>, StatsError> {
    let min = column.iter().copied().fold(f64::INFINITY, f64::min);
    let max = column.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if column.is_empty() || !(max > min) {
        return Err(StatsError::ConstantColumn { what: format!("(min={min}, max={max})") });
    }
    Ok(column.iter().map(|x| (x - min) / (max - min)).collect())
}

/// Significance stars, strongest threshold wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stars {
    None,
    One,
    Two,
    Three,
}

impl Stars {
    /// `***` for p < 0.005, `**` for p < 0.05, `*` for p < 0.1.
    pub fn from_p(p: f64) -> Stars {
        if p < 0.005 {
            Stars::Three
        } else if p < 0.05 {
            Stars::Two
        } else if p < 0.1 {
            Stars::One
        } else {
            Stars::None
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stars::None => "",
            Stars::One => "*",
            Stars::Two => "**",
            Stars::Three => "***",
        }
    }
}

/// One fitted regression term with its inference statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionTerm {
    pub name: String,
    pub coefficient: f64,
    pub std_error: f64,
    pub t_stat: f64,
    pub p_value: f64,
    pub stars: Stars,
}

/// Intercept-augmented least squares fit.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionReport {
    pub intercept: RegressionTerm,
    pub terms: Vec<RegressionTerm>,
    pub r_squared: f64,
    pub n: usize,
    pub residual_df: usize,
}

impl RegressionReport {
    /// Fitted value for one feature row (same column order as the fit).
    pub fn predict(&self, row: &[f64]) -> f64 {
        let mut y = self.intercept.coefficient;
        for (term, x) in self.terms.iter().zip(row) {
            y += term.coefficient * x;
        }
        y
    }
}

/// Least squares of `y` on an intercept plus the feature columns, solved by
/// Householder QR (never the normal equations). Standard errors come from
/// the residual variance and the inverse Gram diagonal; p-values are
/// two-sided Student-t with n - p - 1 degrees of freedom.
pub fn ols_fit(
    names: &[String],
    rows: &[Vec<f64>],
    y: &[f64],
) -> Result<RegressionReport, StatsError> {
    let n = rows.len();
    let p = names.len();
    if n != y.len() {
        return Err(StatsError::LengthMismatch { left: n, right: y.len() });
    }
    if n < p + 2 {
        return Err(StatsError::TooFewObservations { n, needed: p + 2 });
    }
    for row in rows {
        if row.len() != p {
            return Err(StatsError::LengthMismatch { left: row.len(), right: p });
        }
    }
    let m = p + 1; // intercept column first

    // design matrix, column-major
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(m);
    cols.push(vec![1.0; n]);
    for j in 0..p {
        cols.push(rows.iter().map(|r| r[j]).collect());
    }
    let col_name = |j: usize| -> String {
        if j == 0 {
            "intercept".to_string()
        } else {
            names[j - 1].clone()
        }
    };
    let scale: f64 = cols
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(1.0, f64::max);

    // Householder QR, reflections applied to the columns and to y.
    let mut qty = y.to_vec();
    let mut r = vec![vec![0.0; m]; m];
    for k in 0..m {
        let norm: f64 = cols[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-10 * scale {
            return Err(StatsError::RankDeficient { column: col_name(k) });
        }
        let alpha = if cols[k][k] >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = cols[k][k..].to_vec();
        v[0] -= alpha;
        let beta: f64 = v.iter().map(|x| x * x).sum();
        if beta > 0.0 {
            for col in cols.iter_mut().skip(k) {
                let dot: f64 = v.iter().zip(&col[k..]).map(|(a, b)| a * b).sum();
                let factor = 2.0 * dot / beta;
                for (vi, ci) in v.iter().zip(col[k..].iter_mut()) {
                    *ci -= factor * vi;
                }
            }
            let dot: f64 = v.iter().zip(&qty[k..]).map(|(a, b)| a * b).sum();
            let factor = 2.0 * dot / beta;
            for (vi, qi) in v.iter().zip(qty[k..].iter_mut()) {
                *qi -= factor * vi;
            }
        }
        for j in k..m {
            r[k][j] = cols[j][k];
        }
    }

    // back substitution: R beta = (Q^T y)[..m]
    let mut beta = vec![0.0; m];
    for k in (0..m).rev() {
        let mut acc = qty[k];
        for j in k + 1..m {
            acc -= r[k][j] * beta[j];
        }
        beta[k] = acc / r[k][k];
    }

    let sse: f64 = qty[m..].iter().map(|v| v * v).sum();
    let df = n - m;
    let sigma2 = sse / df as f64;

    // (X'X)^{-1} = R^{-1} R^{-T}; we need its diagonal, i.e. squared row
    // norms of R^{-1}.
    let mut rinv = vec![vec![0.0; m]; m];
    for j in (0..m).rev() {
        rinv[j][j] = 1.0 / r[j][j];
        for i in (0..j).rev() {
            let mut acc = 0.0;
            for k in i + 1..=j {
                acc += r[i][k] * rinv[k][j];
            }
            rinv[i][j] = -acc / r[i][i];
        }
    }
    let gram_diag: Vec<f64> =
        (0..m).map(|i| rinv[i].iter().map(|v| v * v).sum()).collect();

    let ybar = mean(y);
    let sst: f64 = y.iter().map(|v| (v - ybar) * (v - ybar)).sum();
    let r_squared = if sst > 0.0 { (1.0 - sse / sst).clamp(0.0, 1.0) } else { 0.0 };

    let mut terms = Vec::with_capacity(m);
    for k in 0..m {
        let std_error = (sigma2 * gram_diag[k]).sqrt();
        let (t_stat, p_value) = if std_error > 0.0 {
            let t = beta[k] / std_error;
            (t, t_two_sided_p(t, df)?)
        } else if beta[k] == 0.0 {
            (0.0, 1.0)
        } else {
            // perfect fit: zero residual variance
            (f64::INFINITY * beta[k].signum(), 0.0)
        };
        terms.push(RegressionTerm {
            name: col_name(k),
            coefficient: beta[k],
            std_error,
            t_stat,
            p_value,
            stars: Stars::from_p(p_value),
        });
    }
    let intercept = terms.remove(0);
    Ok(RegressionReport { intercept, terms, r_squared, n, residual_df: df })
}

// ---------------------------------------------------------------------------
// ANOVA
// ---------------------------------------------------------------------------

/// One-way ANOVA on pre-grouped values: F = MSB/MSW with (g-1, n-g)
/// degrees of freedom and p = 1 - F_cdf(F).
pub fn anova_oneway_groups(groups: &[Vec<f64>]) -> Result<(f64, f64), StatsError> {
    let g = groups.len();
    if g < 2 {
        return Err(StatsError::FewGroups { got: g });
    }
    if let Some(index) = groups.iter().position(|gr| gr.is_empty()) {
        return Err(StatsError::EmptyGroup { index });
    }
    let n: usize = groups.iter().map(Vec::len).sum();
    if n <= g {
        return Err(StatsError::TooFewObservations { n, needed: g + 1 });
    }
    let grand: f64 = groups.iter().flatten().sum::<f64>() / n as f64;
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for group in groups {
        let gm = mean(group);
        ssb += group.len() as f64 * (gm - grand) * (gm - grand);
        for x in group {
            ssw += (x - gm) * (x - gm);
        }
    }
    let msw = ssw / (n - g) as f64;
    if msw <= 0.0 {
        return Err(StatsError::ZeroWithinVariance);
    }
    let f = (ssb / (g - 1) as f64) / msw;
    let p = 1.0 - f_cdf(f, g - 1, n - g)?;
    Ok((f, p))
}

/// One-way ANOVA over a value series and a parallel category series.
/// Groups form in order of first appearance.
pub fn anova_oneway(values: &[f64], labels: &[&str]) -> Result<(f64, f64), StatsError> {
    if values.len() != labels.len() {
        return Err(StatsError::LengthMismatch { left: values.len(), right: labels.len() });
    }
    let mut order: Vec<&str> = Vec::new();
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for (v, l) in values.iter().zip(labels) {
        match order.iter().position(|o| o == l) {
            Some(i) => groups[i].push(*v),
            None => {
                order.push(l);
                groups.push(vec![*v]);
            }
        }
    }
    anova_oneway_groups(&groups)
}

// ---------------------------------------------------------------------------
// SyMCoM categories
// ---------------------------------------------------------------------------

/// Categorical view of a per-PoS SyMCoM score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymcomCategory {
    /// The PoS group is supplied by one language only (|score| = 1).
    Monolingual,
    /// Both languages contribute tokens with this tag.
    Mixed,
    /// No language-bearing token carries this tag.
    Absent,
}

impl SymcomCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            SymcomCategory::Monolingual => "monolingual",
            SymcomCategory::Mixed => "mixed",
            SymcomCategory::Absent => "absent",
        }
    }

    /// Categorise an optional SyMCoM score.
    pub fn from_score(score: Option<f64>) -> SymcomCategory {
        match score {
            None => SymcomCategory::Absent,
            Some(s) if s.abs() == 1.0 => SymcomCategory::Monolingual,
            Some(_) => SymcomCategory::Mixed,
        }
    }
}

/// Categorise the SyMCoM score of one PoS group in a sentence.
pub fn symcom_category(
    sentence: &TaggedSentence,
    pos: PosTag,
) -> Result<SymcomCategory, MetricsError> {
    Ok(SymcomCategory::from_score(symcom_pos(sentence, pos)?))
}

// ---------------------------------------------------------------------------
// correlation matrix over metric rows
// ---------------------------------------------------------------------------

/// Feature columns of a [`MetricRow`] used in correlation and regression
/// analysis, in report order.
pub const FEATURE_NAMES: [&str; 6] =
    ["length", "cmi", "switch_points", "burstiness", "symcom_sentence", "external_score"];

/// Value of one named feature, absent where the row has no value.
pub fn feature_value(row: &MetricRow, feature: &str) -> Option<f64> {
    match feature {
        "length" => Some(row.length as f64),
        "cmi" => Some(row.cmi),
        "switch_points" => Some(row.switch_points as f64),
        "burstiness" => row.burstiness,
        "symcom_sentence" => row.symcom_sentence,
        "external_score" => row.external_score,
        _ => None,
    }
}

/// Pearson and Spearman coefficients for one (feature, target) pair over
/// pairwise-complete samples; absent when fewer than two complete pairs
/// exist or a side has zero variance.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationCell {
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
    pub n: usize,
}

/// Correlations of every metric feature against average rating and
/// disagreement.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub targets: [&'static str; 2],
    /// One entry per feature name, cells ordered like `targets`.
    pub rows: Vec<(String, [CorrelationCell; 2])>,
}

fn correlation_cell(pairs: &[(f64, f64)]) -> CorrelationCell {
    let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    CorrelationCell {
        pearson: pearson(&x, &y).ok(),
        spearman: spearman(&x, &y).ok(),
        n: pairs.len(),
    }
}

/// Correlate metric features with rating targets. Rows align with summaries
/// by sample id; every summary id must have a metric row.
pub fn correlation_matrix(
    rows: &[MetricRow],
    summaries: &[(String, RatingSummary)],
) -> Result<CorrelationReport, StatsError> {
    let by_id: HashMap<&str, &MetricRow> =
        rows.iter().map(|r| (r.sample_id.as_str(), r)).collect();
    let mut aligned = Vec::with_capacity(summaries.len());
    for (id, summary) in summaries {
        let row = by_id
            .get(id.as_str())
            .ok_or_else(|| StatsError::AlignmentMismatch { id: id.clone() })?;
        aligned.push((*row, summary));
    }

    let mut out = Vec::new();
    for feature in FEATURE_NAMES {
        let mut cells = Vec::with_capacity(2);
        for target in 0..2 {
            let pairs: Vec<(f64, f64)> = aligned
                .iter()
                .filter_map(|(row, summary)| {
                    feature_value(row, feature).map(|v| {
                        let t = if target == 0 {
                            summary.average
                        } else {
                            f64::from(summary.disagreement)
                        };
                        (v, t)
                    })
                })
                .collect();
            cells.push(correlation_cell(&pairs));
        }
        let cells: [CorrelationCell; 2] =
            [cells[0].clone(), cells[1].clone()];
        out.push((feature.to_string(), cells));
    }
    Ok(CorrelationReport { targets: ["average_rating", "disagreement"], rows: out })
}

// ---------------------------------------------------------------------------
// prediction-error analysis
// ---------------------------------------------------------------------------

/// Fixed-width histogram; bin `i` covers `[origin + i*width, origin + (i+1)*width)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub origin: f64,
    pub width: f64,
    pub counts: Vec<u64>,
}

/// Bin a series at the given width. The origin snaps to a multiple of the
/// width so bin boundaries are stable across inputs.
pub fn histogram(series: &[f64], width: f64) -> Result<Histogram, StatsError> {
    if series.is_empty() {
        return Err(StatsError::TooFewObservations { n: 0, needed: 1 });
    }
    if !(width > 0.0) {
        return Err(StatsError::BadArgument { what: format!("bin width {width}") });
    }
    let min = series.iter().copied().fold(f64::INFINITY, f64::min);
    let max = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let origin = (min / width).floor() * width;
    let bins = ((max - origin) / width).floor() as usize + 1;
    let mut counts = vec![0u64; bins];
    for &x in series {
        let mut idx = ((x - origin) / width).floor() as usize;
        if idx >= bins {
            idx = bins - 1; // max landing exactly on the upper edge
        }
        counts[idx] += 1;
    }
    Ok(Histogram { origin, width, counts })
}

/// Error summary over one truth-rating bin.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingBinSummary {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub mean_error: f64,
    pub mean_abs_error: f64,
}

/// ANOVA of prediction error by SyMCoM category for one PoS tag.
#[derive(Debug, Clone, PartialEq)]
pub struct PosAnova {
    pub pos: PosTag,
    pub f_stat: f64,
    pub p_value: f64,
    pub stars: Stars,
    /// monolingual / mixed / absent group sizes
    pub group_sizes: [usize; 3],
}

/// Prediction-error report: error histogram, per-rating-bin summaries,
/// error-vs-metric correlations, and per-PoS ANOVA of error by SyMCoM
/// category.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub n: usize,
    pub histogram: Histogram,
    pub rating_bins: Vec<RatingBinSummary>,
    pub metric_correlations: Vec<(String, CorrelationCell)>,
    /// One entry per PoS tag; `None` where ANOVA is degenerate.
    pub symcom_anova: Vec<(PosTag, Option<PosAnova>)>,
}

/// Analyse prediction errors (`error = truth - prediction`, so negative
/// means over-prediction) against metric rows aligned by sample id.
pub fn error_analysis(
    records: &[(String, f64, f64)],
    rows: &[MetricRow],
    bin_width: f64,
) -> Result<ErrorReport, StatsError> {
    if records.is_empty() {
        return Err(StatsError::TooFewObservations { n: 0, needed: 1 });
    }
    let by_id: HashMap<&str, &MetricRow> =
        rows.iter().map(|r| (r.sample_id.as_str(), r)).collect();
    let mut aligned: Vec<(&MetricRow, f64, f64)> = Vec::with_capacity(records.len());
    for (id, prediction, truth) in records {
        let row = by_id
            .get(id.as_str())
            .ok_or_else(|| StatsError::AlignmentMismatch { id: id.clone() })?;
        aligned.push((*row, *prediction, *truth));
    }
    let errors: Vec<f64> = aligned.iter().map(|(_, p, t)| t - p).collect();

    let hist = histogram(&errors, bin_width)?;

    // truth bins [1,2) [2,3) [3,4) [4,5]
    let mut rating_bins = Vec::new();
    for lo in 1..5 {
        let lo_f = lo as f64;
        let hi_f = lo_f + 1.0;
        let in_bin: Vec<f64> = aligned
            .iter()
            .zip(&errors)
            .filter(|((_, _, truth), _)| {
                *truth >= lo_f && (*truth < hi_f || (lo == 4 && *truth <= hi_f))
            })
            .map(|(_, e)| *e)
            .collect();
        if in_bin.is_empty() {
            continue;
        }
        rating_bins.push(RatingBinSummary {
            lo: lo_f,
            hi: hi_f,
            n: in_bin.len(),
            mean_error: mean(&in_bin),
            mean_abs_error: in_bin.iter().map(|e| e.abs()).sum::<f64>() / in_bin.len() as f64,
        });
    }

    let mut metric_correlations = Vec::new();
    for feature in FEATURE_NAMES {
        let pairs: Vec<(f64, f64)> = aligned
            .iter()
            .zip(&errors)
            .filter_map(|((row, _, _), e)| feature_value(row, feature).map(|v| (v, *e)))
            .collect();
        metric_correlations.push((feature.to_string(), correlation_cell(&pairs)));
    }

    let mut symcom_anova = Vec::new();
    for pos in ALL_POS {
        let mut groups: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for ((row, _, _), e) in aligned.iter().zip(&errors) {
            let category =
                SymcomCategory::from_score(row.symcom_by_pos.get(&pos).copied());
            let slot = match category {
                SymcomCategory::Monolingual => 0,
                SymcomCategory::Mixed => 1,
                SymcomCategory::Absent => 2,
            };
            groups[slot].push(*e);
        }
        let group_sizes = [groups[0].len(), groups[1].len(), groups[2].len()];
        let present: Vec<Vec<f64>> =
            groups.iter().filter(|g| !g.is_empty()).cloned().collect();
        let anova = anova_oneway_groups(&present).ok().map(|(f_stat, p_value)| PosAnova {
            pos,
            f_stat,
            p_value,
            stars: Stars::from_p(p_value),
            group_sizes,
        });
        symcom_anova.push((pos, anova));
    }

    Ok(ErrorReport {
        n: records.len(),
        histogram: hist,
        rating_bins,
        metric_correlations,
        symcom_anova,
    })
}
