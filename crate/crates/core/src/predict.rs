//! Feed-forward acceptability predictor over metric features, plus the
//! random and human baselines and RMSE/MAE evaluation.
//!
//! The model is a single hidden layer with rectifier activation and a
//! scalar linear output, trained on mean squared error with Adam and early
//! stopping on dev RMSE. Features are min-max normalised with statistics
//! frozen from the training split. Training is single-threaded and fully
//! deterministic for a fixed seed.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::AnnotationTriple;
use crate::metrics::MetricRow;
use crate::stream_seed;

#[derive(Debug, Error)]
pub enum PredictError {
    #[error("empty dataset")]
    EmptyDataset,
    #[error("series length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("feature width mismatch: model expects {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("feature schema mismatch: model expects {expected:?}, got {got:?}")]
    SchemaMismatch { expected: Vec<String>, got: Vec<String> },
    #[error("training diverged at epoch {epoch} (loss {loss})")]
    Diverged { epoch: usize, loss: f64 },
    #[error("sample {sample_id:?} carries an exclusion flag")]
    ExclusionPresent { sample_id: String },
    #[error("invalid configuration: {what}")]
    BadConfig { what: String },
    #[error("{path}:{line}: {message}")]
    ParseModel { path: String, line: usize, message: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

// ---------------------------------------------------------------------------
// features
// ---------------------------------------------------------------------------

/// Predictor feature columns derived from a [`MetricRow`], in order.
/// Absent burstiness is imputed as 0 with a companion presence indicator;
/// absent sentence-level SyMCoM is imputed as 0.
pub const BASE_FEATURE_NAMES: [&str; 6] =
    ["length", "cmi", "switch_points", "burstiness", "burstiness_present", "symcom_sentence"];

pub fn predictor_feature_names(with_external: bool) -> Vec<String> {
    let mut names: Vec<String> = BASE_FEATURE_NAMES.iter().map(|s| s.to_string()).collect();
    if with_external {
        names.push("external_score".to_string());
    }
    names
}

/// Raw (pre-normalisation) feature vector for one metric row.
pub fn predictor_features(row: &MetricRow, with_external: bool) -> Vec<f64> {
    let mut x = vec![
        row.length as f64,
        row.cmi,
        row.switch_points as f64,
        row.burstiness.unwrap_or(0.0),
        if row.burstiness.is_some() { 1.0 } else { 0.0 },
        row.symcom_sentence.unwrap_or(0.0),
    ];
    if with_external {
        x.push(row.external_score.unwrap_or(0.0));
    }
    x
}

/// A feature matrix with aligned ids and targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub ids: Vec<String>,
    pub feature_names: Vec<String>,
    pub features: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

impl Dataset {
    /// Assemble a dataset from metric rows and a target per sample id.
    /// Rows without a target are skipped.
    pub fn from_rows(
        rows: &[MetricRow],
        targets: &HashMap<String, f64>,
        with_external: bool,
    ) -> Result<Dataset, PredictError> {
        let mut ids = Vec::new();
        let mut features = Vec::new();
        let mut ys = Vec::new();
        for row in rows {
            if let Some(&y) = targets.get(&row.sample_id) {
                ids.push(row.sample_id.clone());
                features.push(predictor_features(row, with_external));
                ys.push(y);
            }
        }
        if ids.is_empty() {
            return Err(PredictError::EmptyDataset);
        }
        Ok(Dataset {
            ids,
            feature_names: predictor_feature_names(with_external),
            features,
            targets: ys,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Per-column min-max statistics frozen from the training split.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalizer {
    mins: Vec<f64>,
    maxs: Vec<f64>,
}

impl Normalizer {
    pub fn fit(rows: &[Vec<f64>]) -> Result<Normalizer, PredictError> {
        let Some(first) = rows.first() else {
            return Err(PredictError::EmptyDataset);
        };
        let width = first.len();
        let mut mins = vec![f64::INFINITY; width];
        let mut maxs = vec![f64::NEG_INFINITY; width];
        for row in rows {
            if row.len() != width {
                return Err(PredictError::WidthMismatch { expected: width, got: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        Ok(Normalizer { mins, maxs })
    }

    pub fn width(&self) -> usize {
        self.mins.len()
    }

    /// Map a raw row to [0, 1] per column. Columns that were constant in
    /// the training split map to 0.
    pub fn apply(&self, row: &[f64]) -> Result<Vec<f64>, PredictError> {
        if row.len() != self.width() {
            return Err(PredictError::WidthMismatch { expected: self.width(), got: row.len() });
        }
        Ok(row
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let range = self.maxs[j] - self.mins[j];
                if range > 0.0 {
                    (v - self.mins[j]) / range
                } else {
                    0.0
                }
            })
            .collect())
    }

    pub fn stats(&self) -> (&[f64], &[f64]) {
        (&self.mins, &self.maxs)
    }

    pub fn from_stats(mins: Vec<f64>, maxs: Vec<f64>) -> Result<Normalizer, PredictError> {
        if mins.len() != maxs.len() {
            return Err(PredictError::LengthMismatch { left: mins.len(), right: maxs.len() });
        }
        Ok(Normalizer { mins, maxs })
    }
}

// ---------------------------------------------------------------------------
// model
// ---------------------------------------------------------------------------

/// Single-hidden-layer feed-forward regressor:
/// `y = w2 . relu(W1 x + b1) + b2`, parameters stored flat as
/// `[W1 row-major | b1 | w2 | b2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorModel {
    feature_names: Vec<String>,
    normalizer: Normalizer,
    input: usize,
    hidden: usize,
    params: Vec<f64>,
}

impl PredictorModel {
    pub fn from_parts(
        feature_names: Vec<String>,
        normalizer: Normalizer,
        hidden: usize,
        params: Vec<f64>,
    ) -> Result<PredictorModel, PredictError> {
        let input = feature_names.len();
        if normalizer.width() != input {
            return Err(PredictError::WidthMismatch {
                expected: input,
                got: normalizer.width(),
            });
        }
        let expected = Self::param_count(input, hidden);
        if params.len() != expected {
            return Err(PredictError::BadConfig {
                what: format!("expected {expected} parameters, got {}", params.len()),
            });
        }
        Ok(PredictorModel { feature_names, normalizer, input, hidden, params })
    }

    pub fn param_count(input: usize, hidden: usize) -> usize {
        hidden * input + hidden + hidden + 1
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn normalizer(&self) -> &Normalizer {
        &self.normalizer
    }

    pub fn input_width(&self) -> usize {
        self.input
    }

    pub fn hidden_width(&self) -> usize {
        self.hidden
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Forward pass on an already-normalised feature vector.
    pub fn forward(&self, x: &[f64]) -> Result<f64, PredictError> {
        if x.len() != self.input {
            return Err(PredictError::WidthMismatch { expected: self.input, got: x.len() });
        }
        Ok(forward_flat(&self.params, self.input, self.hidden, x))
    }

    /// Normalise a raw feature vector with the frozen statistics, then
    /// run the forward pass.
    pub fn predict_raw(&self, raw: &[f64]) -> Result<f64, PredictError> {
        let x = self.normalizer.apply(raw)?;
        self.forward(&x)
    }
}

fn forward_flat(params: &[f64], d: usize, h: usize, x: &[f64]) -> f64 {
    let (w1, rest) = params.split_at(h * d);
    let (b1, rest) = rest.split_at(h);
    let (w2, b2) = rest.split_at(h);
    let mut y = b2[0];
    for i in 0..h {
        let mut z = b1[i];
        for (j, &xj) in x.iter().enumerate() {
            z += w1[i * d + j] * xj;
        }
        if z > 0.0 {
            y += w2[i] * z;
        }
    }
    y
}

/// MSE over a batch and its gradient with respect to every parameter.
fn loss_and_grad(
    params: &[f64],
    d: usize,
    h: usize,
    xs: &[Vec<f64>],
    ys: &[f64],
) -> (f64, Vec<f64>) {
    let n = xs.len() as f64;
    let (w1, rest) = params.split_at(h * d);
    let (b1, rest) = rest.split_at(h);
    let (w2, b2) = rest.split_at(h);
    let mut grad = vec![0.0; params.len()];
    let (gw1, grest) = grad.split_at_mut(h * d);
    let (gb1, grest) = grest.split_at_mut(h);
    let (gw2, gb2) = grest.split_at_mut(h);

    let mut loss = 0.0;
    let mut z = vec![0.0; h];
    for (x, &y) in xs.iter().zip(ys) {
        let mut out = b2[0];
        for i in 0..h {
            let mut zi = b1[i];
            for (j, &xj) in x.iter().enumerate() {
                zi += w1[i * d + j] * xj;
            }
            z[i] = zi;
            if zi > 0.0 {
                out += w2[i] * zi;
            }
        }
        let err = out - y;
        loss += err * err;
        let gy = 2.0 * err / n;
        gb2[0] += gy;
        for i in 0..h {
            if z[i] > 0.0 {
                gw2[i] += gy * z[i];
                let gz = gy * w2[i];
                gb1[i] += gz;
                for (j, &xj) in x.iter().enumerate() {
                    gw1[i * d + j] += gz * xj;
                }
            }
        }
    }
    (loss / n, grad)
}

/// Training configuration. Defaults: hidden width 32, learning rate 1e-3,
/// up to 500 epochs with patience 10, mini-batches of 32.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub hidden: usize,
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub patience: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> TrainConfig {
        TrainConfig {
            hidden: 32,
            learning_rate: 1e-3,
            max_epochs: 500,
            patience: 10,
            batch_size: 32,
            seed: 0,
        }
    }
}

/// One epoch of the training trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_mse: f64,
    pub dev_rmse: f64,
}

/// A trained model with its loss history and the epoch of the returned
/// (best-dev) checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub model: PredictorModel,
    pub history: Vec<EpochStats>,
    pub best_epoch: usize,
    pub best_dev_rmse: f64,
}

fn rmse_of(params: &[f64], d: usize, h: usize, xs: &[Vec<f64>], ys: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, &y) in xs.iter().zip(ys) {
        let e = forward_flat(params, d, h, x) - y;
        acc += e * e;
    }
    (acc / xs.len() as f64).sqrt()
}

/// Train a predictor on raw-feature datasets. Normalisation statistics are
/// fitted on the training split and frozen; Adam (beta1 0.9, beta2 0.999,
/// eps 1e-8) minimises MSE with early stopping on dev RMSE; the best-dev
/// checkpoint is returned. Bit-identical across runs for a fixed config.
pub fn train(
    train_set: &Dataset,
    dev_set: &Dataset,
    config: &TrainConfig,
) -> Result<TrainReport, PredictError> {
    if train_set.is_empty() || dev_set.is_empty() {
        return Err(PredictError::EmptyDataset);
    }
    if train_set.feature_names != dev_set.feature_names {
        return Err(PredictError::SchemaMismatch {
            expected: train_set.feature_names.clone(),
            got: dev_set.feature_names.clone(),
        });
    }
    if config.hidden == 0 || config.batch_size == 0 || config.max_epochs == 0 {
        return Err(PredictError::BadConfig {
            what: "hidden, batch_size, and max_epochs must be positive".to_string(),
        });
    }
    let d = train_set.feature_names.len();
    let h = config.hidden;

    let normalizer = Normalizer::fit(&train_set.features)?;
    let xs: Vec<Vec<f64>> = train_set
        .features
        .iter()
        .map(|r| normalizer.apply(r))
        .collect::<Result<_, _>>()?;
    let dev_xs: Vec<Vec<f64>> = dev_set
        .features
        .iter()
        .map(|r| normalizer.apply(r))
        .collect::<Result<_, _>>()?;

    // Glorot-uniform init, biases zero.
    let mut init_rng = ChaCha8Rng::seed_from_u64(stream_seed(config.seed, "init"));
    let mut params = vec![0.0; PredictorModel::param_count(d, h)];
    let limit1 = (6.0 / (d + h) as f64).sqrt();
    for p in params.iter_mut().take(h * d) {
        *p = init_rng.random_range(-limit1..limit1);
    }
    let limit2 = (6.0 / (h + 1) as f64).sqrt();
    for p in params.iter_mut().skip(h * d + h).take(h) {
        *p = init_rng.random_range(-limit2..limit2);
    }

    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(stream_seed(config.seed, "shuffle"));
    let mut adam_m = vec![0.0; params.len()];
    let mut adam_v = vec![0.0; params.len()];
    let mut adam_t = 0u64;
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    let mut history = Vec::new();
    let mut best_params = params.clone();
    let mut best_dev = f64::INFINITY;
    let mut best_epoch = 0;
    let mut stale = 0usize;
    let mut indices: Vec<usize> = (0..xs.len()).collect();

    for epoch in 1..=config.max_epochs {
        indices.shuffle(&mut shuffle_rng);
        let mut epoch_loss = 0.0;
        let mut batches = 0usize;
        for chunk in indices.chunks(config.batch_size) {
            let bx: Vec<Vec<f64>> = chunk.iter().map(|&i| xs[i].clone()).collect();
            let by: Vec<f64> = chunk.iter().map(|&i| train_set.targets[i]).collect();
            let (loss, grad) = loss_and_grad(&params, d, h, &bx, &by);
            if !loss.is_finite() {
                return Err(PredictError::Diverged { epoch, loss });
            }
            epoch_loss += loss;
            batches += 1;
            adam_t += 1;
            let bc1 = 1.0 - BETA1.powi(adam_t as i32);
            let bc2 = 1.0 - BETA2.powi(adam_t as i32);
            for k in 0..params.len() {
                adam_m[k] = BETA1 * adam_m[k] + (1.0 - BETA1) * grad[k];
                adam_v[k] = BETA2 * adam_v[k] + (1.0 - BETA2) * grad[k] * grad[k];
                let m_hat = adam_m[k] / bc1;
                let v_hat = adam_v[k] / bc2;
                params[k] -= config.learning_rate * m_hat / (v_hat.sqrt() + EPS);
            }
        }
        let train_mse = epoch_loss / batches as f64;
        let dev_rmse = rmse_of(&params, d, h, &dev_xs, &dev_set.targets);
        if !dev_rmse.is_finite() {
            return Err(PredictError::Diverged { epoch, loss: dev_rmse });
        }
        history.push(EpochStats { epoch, train_mse, dev_rmse });
        if dev_rmse < best_dev {
            best_dev = dev_rmse;
            best_params.copy_from_slice(&params);
            best_epoch = epoch;
            stale = 0;
        } else {
            stale += 1;
            if stale >= config.patience {
                break;
            }
        }
    }

    let model = PredictorModel::from_parts(
        train_set.feature_names.clone(),
        normalizer,
        h,
        best_params,
    )?;
    Ok(TrainReport { model, history, best_epoch, best_dev_rmse: best_dev })
}

/// Compare the analytic MSE gradient against central finite differences
/// (h = 1e-5) for every parameter; returns the largest relative
/// discrepancy. `xs` are normalised feature vectors.
pub fn gradient_check(model: &PredictorModel, xs: &[Vec<f64>], ys: &[f64]) -> f64 {
    const H: f64 = 1e-5;
    let d = model.input;
    let h = model.hidden;
    let (_, analytic) = loss_and_grad(&model.params, d, h, xs, ys);
    let mut params = model.params.clone();
    let mut worst: f64 = 0.0;
    for k in 0..params.len() {
        let saved = params[k];
        params[k] = saved + H;
        let (up, _) = loss_and_grad(&params, d, h, xs, ys);
        params[k] = saved - H;
        let (down, _) = loss_and_grad(&params, d, h, xs, ys);
        params[k] = saved;
        let numeric = (up - down) / (2.0 * H);
        let denom = analytic[k].abs().max(numeric.abs()).max(1e-8);
        worst = worst.max((analytic[k] - numeric).abs() / denom);
    }
    worst
}

// ---------------------------------------------------------------------------
// evaluation and baselines
// ---------------------------------------------------------------------------

/// RMSE and MAE over one prediction set. MAE never exceeds RMSE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub rmse: f64,
    pub mae: f64,
    pub n: usize,
}

/// Standard RMSE/MAE against truths; predictions are used as-is, never
/// clamped to the rating scale.
pub fn evaluate(predictions: &[f64], truths: &[f64]) -> Result<EvalResult, PredictError> {
    if predictions.len() != truths.len() {
        return Err(PredictError::LengthMismatch {
            left: predictions.len(),
            right: truths.len(),
        });
    }
    if predictions.is_empty() {
        return Err(PredictError::EmptyDataset);
    }
    let n = predictions.len() as f64;
    let mut sq = 0.0;
    let mut abs = 0.0;
    for (p, t) in predictions.iter().zip(truths) {
        let e = p - t;
        sq += e * e;
        abs += e.abs();
    }
    let result = EvalResult { rmse: (sq / n).sqrt(), mae: abs / n, n: predictions.len() };
    debug_assert!(result.mae <= result.rmse + 1e-12);
    Ok(result)
}

/// Baseline that predicts i.i.d. uniform draws on [1, 5].
pub fn random_baseline(targets: &[f64], seed: u64) -> Result<EvalResult, PredictError> {
    if targets.is_empty() {
        return Err(PredictError::EmptyDataset);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, "random-baseline"));
    let predictions: Vec<f64> =
        targets.iter().map(|_| rng.random_range(1.0..=5.0)).collect();
    evaluate(&predictions, targets)
}

/// Inter-annotator baseline: RMSE/MAE between each of the three annotator
/// pairs, averaged over the pairs. All triples must be rating-only.
pub fn human_baseline(triples: &[AnnotationTriple]) -> Result<EvalResult, PredictError> {
    if triples.is_empty() {
        return Err(PredictError::EmptyDataset);
    }
    let mut columns: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for triple in triples {
        let ratings = triple.ratings().ok_or_else(|| PredictError::ExclusionPresent {
            sample_id: triple.sample_id().to_string(),
        })?;
        for (column, &r) in columns.iter_mut().zip(ratings.iter()) {
            column.push(f64::from(r));
        }
    }
    let mut rmse = 0.0;
    let mut mae = 0.0;
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let pair = evaluate(&columns[a], &columns[b])?;
        rmse += pair.rmse;
        mae += pair.mae;
    }
    Ok(EvalResult { rmse: rmse / 3.0, mae: mae / 3.0, n: triples.len() })
}

/// Apply a trained model unchanged (frozen normalisation, no re-fit) to a
/// foreign dataset with the same feature schema, and evaluate.
pub fn transfer_evaluate(
    model: &PredictorModel,
    foreign: &Dataset,
) -> Result<EvalResult, PredictError> {
    if foreign.is_empty() {
        return Err(PredictError::EmptyDataset);
    }
    if foreign.feature_names != model.feature_names {
        return Err(PredictError::SchemaMismatch {
            expected: model.feature_names.clone(),
            got: foreign.feature_names.clone(),
        });
    }
    let predictions: Vec<f64> = foreign
        .features
        .iter()
        .map(|row| model.predict_raw(row))
        .collect::<Result<_, _>>()?;
    evaluate(&predictions, &foreign.targets)
}

// ---------------------------------------------------------------------------
// model file format
// ---------------------------------------------------------------------------

const MODEL_MAGIC: &str = "cmlab-model v1";

fn fmt_floats(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(" ")
}

/// Save a model as decimal text: versioned header, dimensions, feature
/// names, normalisation statistics, then row-major parameters.
pub fn save_model(path: impl AsRef<Path>, model: &PredictorModel) -> Result<(), PredictError> {
    let path = path.as_ref();
    let io = |e: std::io::Error| PredictError::Io { path: path.display().to_string(), source: e };
    let mut file = std::fs::File::create(path).map_err(io)?;
    let (mins, maxs) = model.normalizer.stats();
    let d = model.input;
    let h = model.hidden;
    let mut text = String::new();
    text.push_str(MODEL_MAGIC);
    text.push('\n');
    text.push_str(&format!("features {}\n", model.feature_names.join(" ")));
    text.push_str(&format!("hidden {h}\n"));
    text.push_str(&format!("norm_min {}\n", fmt_floats(mins)));
    text.push_str(&format!("norm_max {}\n", fmt_floats(maxs)));
    text.push_str(&format!("w1 {}\n", fmt_floats(&model.params[..h * d])));
    text.push_str(&format!("b1 {}\n", fmt_floats(&model.params[h * d..h * d + h])));
    text.push_str(&format!("w2 {}\n", fmt_floats(&model.params[h * d + h..h * d + 2 * h])));
    text.push_str(&format!("b2 {}\n", fmt_floats(&model.params[h * d + 2 * h..])));
    file.write_all(text.as_bytes()).map_err(io)
}

/// Load a model written by [`save_model`].
pub fn load_model(path: impl AsRef<Path>) -> Result<PredictorModel, PredictError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let content = std::fs::read_to_string(path)
        .map_err(|e| PredictError::Io { path: display.clone(), source: e })?;
    let mut lines = content.lines().enumerate();
    let mut expect = |key: &str| -> Result<(usize, String), PredictError> {
        let (idx, line) = lines.next().ok_or_else(|| PredictError::ParseModel {
            path: display.clone(),
            line: 0,
            message: format!("missing {key} line"),
        })?;
        if key.is_empty() {
            return Ok((idx + 1, line.to_string()));
        }
        let rest = line.strip_prefix(key).and_then(|r| r.strip_prefix(' ')).ok_or_else(|| {
            PredictError::ParseModel {
                path: display.clone(),
                line: idx + 1,
                message: format!("expected {key:?} line, got {line:?}"),
            }
        })?;
        Ok((idx + 1, rest.to_string()))
    };

    let (line_no, magic) = expect("")?;
    if magic != MODEL_MAGIC {
        return Err(PredictError::ParseModel {
            path: display,
            line: line_no,
            message: format!("unsupported header {magic:?}"),
        });
    }
    let (_, names) = expect("features")?;
    let feature_names: Vec<String> = names.split_whitespace().map(str::to_string).collect();
    let (line_no, hidden) = expect("hidden")?;
    let hidden: usize = hidden.trim().parse().map_err(|_| PredictError::ParseModel {
        path: display.clone(),
        line: line_no,
        message: format!("bad hidden width {hidden:?}"),
    })?;
    let parse_floats = |(line_no, text): (usize, String)| -> Result<Vec<f64>, PredictError> {
        text.split_whitespace()
            .map(|v| {
                v.parse::<f64>().map_err(|_| PredictError::ParseModel {
                    path: display.clone(),
                    line: line_no,
                    message: format!("bad number {v:?}"),
                })
            })
            .collect()
    };
    let mins = parse_floats(expect("norm_min")?)?;
    let maxs = parse_floats(expect("norm_max")?)?;
    let mut params = parse_floats(expect("w1")?)?;
    params.extend(parse_floats(expect("b1")?)?);
    params.extend(parse_floats(expect("w2")?)?);
    params.extend(parse_floats(expect("b2")?)?);

    PredictorModel::from_parts(
        feature_names,
        Normalizer::from_stats(mins, maxs)?,
        hidden,
        params,
    )
}
