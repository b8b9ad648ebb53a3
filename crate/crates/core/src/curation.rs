//! Corpus curation: negative-sample perturbations, code-mixed n-gram
//! extraction, disagreement pruning, and stratified splitting.
//!
//! Every randomised operation seeds a dedicated ChaCha stream derived from
//! the global seed and the sample id (see [`crate::stream_seed`]), so
//! results do not depend on corpus order or parallelism.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{
    script_lid, CorpusError, LanguageTag, Perturbation, RatingSummary, TaggedSentence, Token,
};
use crate::stream_seed;

/// A perturbation request: what to apply and the seed that makes it
/// reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PerturbSpec {
    pub kind: PerturbKind,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbKind {
    /// Swap `pairs` random position pairs.
    Swap { pairs: usize },
    /// Delete `count` random tokens.
    Delete { count: usize },
    /// Round-trip translate the longest single-language span.
    BackTranslate,
}

/// Abstract translation capability, injected so corpora can be perturbed
/// against a live endpoint, an offline dictionary, or a test stub. An
/// implementation must be deterministic for a fixed input.
pub trait TranslatorPort {
    fn translate(
        &self,
        text: &str,
        from: LanguageTag,
        to: LanguageTag,
    ) -> Result<String, TranslateError>;
}

#[derive(Debug, Error)]
#[error("translator failed on {text:?}: {reason}")]
pub struct TranslateError {
    pub text: String,
    pub reason: String,
}

/// Translator that returns its input unchanged.
pub struct IdentityTranslator;

impl TranslatorPort for IdentityTranslator {
    fn translate(
        &self,
        text: &str,
        _from: LanguageTag,
        _to: LanguageTag,
    ) -> Result<String, TranslateError> {
        Ok(text.to_string())
    }
}

/// Offline word-map translator backed by a bidirectional dictionary.
/// Words without an entry pass through unchanged, which keeps round trips
/// total; intended for tests and air-gapped runs, not translation quality.
pub struct DictTranslator {
    forward: HashMap<String, String>,
    backward: HashMap<String, String>,
}

impl DictTranslator {
    pub fn new(pairs: impl IntoIterator<Item = (String, String)>) -> DictTranslator {
        let mut forward = HashMap::new();
        let mut backward = HashMap::new();
        for (a, b) in pairs {
            forward.insert(a.clone(), b.clone());
            backward.insert(b, a);
        }
        DictTranslator { forward, backward }
    }

    /// Load a two-column tab-separated word map.
    pub fn from_tsv(path: impl AsRef<Path>) -> Result<DictTranslator, CurationError> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path).map_err(|e| CurationError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let mut pairs = Vec::new();
        for (idx, line) in content.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let (Some(a), Some(b)) = (fields.next(), fields.next()) else {
                return Err(CurationError::BadDictLine {
                    path: path.display().to_string(),
                    line: idx + 1,
                });
            };
            pairs.push((a.trim().to_string(), b.trim().to_string()));
        }
        Ok(DictTranslator::new(pairs))
    }

    fn map_words(&self, text: &str, table: &HashMap<String, String>) -> String {
        text.split_whitespace()
            .map(|w| table.get(w).map_or(w, String::as_str))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl TranslatorPort for DictTranslator {
    fn translate(
        &self,
        text: &str,
        from: LanguageTag,
        _to: LanguageTag,
    ) -> Result<String, TranslateError> {
        // The dictionary is keyed LangA -> LangB in `forward`.
        let table = match from {
            LanguageTag::LangA => &self.forward,
            _ => &self.backward,
        };
        Ok(self.map_words(text, table))
    }
}

#[derive(Debug, Error)]
pub enum CurationError {
    #[error("sentence {id:?} too short to swap: {len} token(s)")]
    TooShort { id: String, len: usize },
    #[error("swap needs at least one pair")]
    ZeroPairs,
    #[error("sentence {id:?}: cannot delete {count} of {len} tokens")]
    BadDeleteCount { id: String, count: usize, len: usize },
    #[error("sentence {id:?} has no language-bearing tokens")]
    NoLanguageTokens { id: String },
    #[error("sentence {id:?}: back-translation of span produced no tokens")]
    EmptyTranslation { id: String },
    #[error("n-gram size {n} outside 2..=4")]
    BadNgramSize { n: usize },
    #[error("split ratios {ratios:?} must be non-negative and sum to 1")]
    BadRatios { ratios: (f64, f64, f64) },
    #[error("bin edges must be non-empty and strictly increasing")]
    BadBinEdges,
    #[error("duplicate sample id {id:?} in split input")]
    DuplicateId { id: String },
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("{path}:{line}: expected two tab-separated fields")]
    BadDictLine { path: String, line: usize },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn sample_rng(sentence: &TaggedSentence, seed: u64, op: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, &format!("{op}:{}", sentence.id())))
}

/// Swap `pairs` random pairs of token positions. The output is a
/// permutation of the input tokens in which at most `2 * pairs` positions
/// changed; the original sentence is untouched.
pub fn perturb_swap(
    sentence: &TaggedSentence,
    pairs: usize,
    seed: u64,
) -> Result<TaggedSentence, CurationError> {
    if pairs == 0 {
        return Err(CurationError::ZeroPairs);
    }
    let len = sentence.len();
    if len < 2 {
        return Err(CurationError::TooShort { id: sentence.id().to_string(), len });
    }
    let mut rng = sample_rng(sentence, seed, "swap");
    let mut tokens = sentence.tokens().to_vec();
    for _ in 0..pairs {
        let i = rng.random_range(0..len);
        let mut j = rng.random_range(0..len - 1);
        if j >= i {
            j += 1;
        }
        tokens.swap(i, j);
    }
    Ok(sentence.with_perturbed_tokens(tokens, Perturbation::Swap)?)
}

/// Delete `count` random tokens (1 <= count < length), preserving the
/// order of the remainder.
pub fn perturb_delete(
    sentence: &TaggedSentence,
    count: usize,
    seed: u64,
) -> Result<TaggedSentence, CurationError> {
    let len = sentence.len();
    if count == 0 || count >= len {
        return Err(CurationError::BadDeleteCount {
            id: sentence.id().to_string(),
            count,
            len,
        });
    }
    let mut rng = sample_rng(sentence, seed, "delete");
    let mut indices: Vec<usize> = (0..len).collect();
    indices.shuffle(&mut rng);
    let mut drop: Vec<usize> = indices.into_iter().take(count).collect();
    drop.sort_unstable();
    let tokens = sentence
        .tokens()
        .iter()
        .enumerate()
        .filter(|(i, _)| drop.binary_search(i).is_err())
        .map(|(_, t)| t.clone())
        .collect();
    Ok(sentence.with_perturbed_tokens(tokens, Perturbation::Delete)?)
}

/// Longest contiguous run of tokens sharing one non-Neutral language, as
/// inclusive `(start, end)` token indices plus the language. Unlike span
/// extraction for burstiness, Neutral tokens break runs here: the replaced
/// text must be contiguous in the surface sentence. Ties go to the
/// earliest start.
pub fn longest_mono_span(
    sentence: &TaggedSentence,
) -> Result<(usize, usize, LanguageTag), CurationError> {
    let mut best: Option<(usize, usize, LanguageTag)> = None;
    let mut run_start = 0usize;
    let mut run_lang: Option<LanguageTag> = None;
    let tokens = sentence.tokens();
    for (i, token) in tokens.iter().enumerate() {
        let lid = token.lid();
        if Some(lid) == run_lang {
            continue;
        }
        // close previous run
        if let Some(lang) = run_lang {
            let len = i - run_start;
            if best.map_or(true, |(s, e, _)| len > e - s + 1) {
                best = Some((run_start, i - 1, lang));
            }
        }
        run_lang = if lid == LanguageTag::Neutral { None } else { Some(lid) };
        run_start = i;
    }
    if let Some(lang) = run_lang {
        let len = tokens.len() - run_start;
        if best.map_or(true, |(s, e, _)| len > e - s + 1) {
            best = Some((run_start, tokens.len() - 1, lang));
        }
    }
    best.ok_or_else(|| CurationError::NoLanguageTokens { id: sentence.id().to_string() })
}

/// Replace the longest single-language span by its round-trip translation.
/// The returned text is whitespace-tokenized; new tokens get their language
/// from [`script_lid`] and no PoS tag.
pub fn perturb_backtranslate(
    sentence: &TaggedSentence,
    translator: &dyn TranslatorPort,
) -> Result<TaggedSentence, CurationError> {
    let (start, end, lang) = longest_mono_span(sentence)?;
    let other = lang.other().expect("span language is never Neutral");
    let span_text = sentence.tokens()[start..=end]
        .iter()
        .map(Token::surface)
        .collect::<Vec<_>>()
        .join(" ");
    let forward = translator.translate(&span_text, lang, other)?;
    let back = translator.translate(&forward, other, lang)?;

    let mut tokens: Vec<Token> = sentence.tokens()[..start].to_vec();
    let mut replaced = 0usize;
    for word in back.split_whitespace() {
        tokens.push(Token::new(word, script_lid(word), None)?);
        replaced += 1;
    }
    if replaced == 0 {
        return Err(CurationError::EmptyTranslation { id: sentence.id().to_string() });
    }
    tokens.extend_from_slice(&sentence.tokens()[end + 1..]);
    Ok(sentence.with_perturbed_tokens(tokens, Perturbation::BackTranslate)?)
}

/// Apply one perturbation described by a [`PerturbSpec`].
pub fn apply_perturbation(
    sentence: &TaggedSentence,
    spec: &PerturbSpec,
    translator: Option<&dyn TranslatorPort>,
) -> Result<TaggedSentence, CurationError> {
    match spec.kind {
        PerturbKind::Swap { pairs } => perturb_swap(sentence, pairs, spec.seed),
        PerturbKind::Delete { count } => perturb_delete(sentence, count, spec.seed),
        PerturbKind::BackTranslate => {
            let translator = translator.unwrap_or(&IdentityTranslator);
            perturb_backtranslate(sentence, translator)
        }
    }
}

/// Extract code-mixed n-grams (n in 2..=4): surface n-grams containing at
/// least one LangA and one LangB token, with corpus frequencies, sorted by
/// descending frequency then lexicographically.
pub fn extract_mixed_ngrams(
    corpus: &[TaggedSentence],
    n: usize,
) -> Result<Vec<(Vec<String>, usize)>, CurationError> {
    if !(2..=4).contains(&n) {
        return Err(CurationError::BadNgramSize { n });
    }
    let mut counts: HashMap<Vec<String>, usize> = HashMap::new();
    for sentence in corpus {
        for window in sentence.tokens().windows(n) {
            let has_a = window.iter().any(|t| t.lid() == LanguageTag::LangA);
            let has_b = window.iter().any(|t| t.lid() == LanguageTag::LangB);
            if has_a && has_b {
                let gram: Vec<String> =
                    window.iter().map(|t| t.surface().to_string()).collect();
                *counts.entry(gram).or_insert(0) += 1;
            }
        }
    }
    let mut out: Vec<(Vec<String>, usize)> = counts.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// Retain exactly the samples whose disagreement does not exceed the
/// threshold (4 by default: "more than 4" is removed, 4 itself kept).
pub fn prune_by_disagreement(
    records: &[(String, RatingSummary)],
    threshold: u8,
) -> Vec<String> {
    records
        .iter()
        .filter(|(_, summary)| summary.disagreement <= threshold)
        .map(|(id, _)| id.clone())
        .collect()
}

/// Default disagreement threshold used for pruning.
pub const DEFAULT_DISAGREEMENT_THRESHOLD: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
        }
    }

    pub fn from_str(s: &str) -> Option<Split> {
        match s {
            "train" => Some(Split::Train),
            "dev" => Some(Split::Dev),
            "test" => Some(Split::Test),
            _ => None,
        }
    }
}

/// A full partition of sample ids into train/dev/test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitAssignment {
    map: BTreeMap<String, Split>,
}

impl SplitAssignment {
    pub fn get(&self, id: &str) -> Option<Split> {
        self.map.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Split)> {
        self.map.iter().map(|(id, split)| (id.as_str(), *split))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Sample counts as (train, dev, test).
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for split in self.map.values() {
            match split {
                Split::Train => c.0 += 1,
                Split::Dev => c.1 += 1,
                Split::Test => c.2 += 1,
            }
        }
        c
    }
}

/// Default split proportions.
pub const DEFAULT_SPLIT_RATIOS: (f64, f64, f64) = (0.7, 0.1, 0.2);

/// Default rating-bin edges for stratification: half-unit bins over the
/// 1..=5 rating scale.
pub const DEFAULT_BIN_EDGES: [f64; 8] = [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5];

/// Largest-remainder apportionment of `n` into three parts.
fn apportion(n: usize, ratios: (f64, f64, f64)) -> [usize; 3] {
    let quotas = [n as f64 * ratios.0, n as f64 * ratios.1, n as f64 * ratios.2];
    let mut parts = [quotas[0] as usize, quotas[1] as usize, quotas[2] as usize];
    let assigned: usize = parts.iter().sum();
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| {
        let fa = quotas[a] - parts[a] as f64;
        let fb = quotas[b] - parts[b] as f64;
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    for k in 0..(n - assigned) {
        parts[order[k % 3]] += 1;
    }
    parts
}

/// Deterministic stratified split into train/dev/test.
///
/// Records are binned by average rating on `bin_edges`, each bin is
/// apportioned by the ratios (largest remainder), and per-bin quotas are
/// then nudged so the global split sizes hit the exact largest-remainder
/// targets — global sizes stay within one sample of the requested
/// proportions while per-bin rating distributions track the global one.
/// Bins with fewer than 3 samples cannot reach every split and are only
/// warned about. The assignment depends on the seed and the id set, not on
/// record order.
pub fn stratified_split(
    records: &[(String, RatingSummary)],
    ratios: (f64, f64, f64),
    bin_edges: &[f64],
    seed: u64,
) -> Result<SplitAssignment, CurationError> {
    let sum = ratios.0 + ratios.1 + ratios.2;
    if !(ratios.0 >= 0.0 && ratios.1 >= 0.0 && ratios.2 >= 0.0 && (sum - 1.0).abs() < 1e-9) {
        return Err(CurationError::BadRatios { ratios });
    }
    if bin_edges.is_empty() || bin_edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CurationError::BadBinEdges);
    }
    if records.is_empty() {
        return Ok(SplitAssignment { map: BTreeMap::new() });
    }

    let bin_of = |avg: f64| -> usize {
        bin_edges.partition_point(|e| *e <= avg).saturating_sub(1)
    };

    let mut bins: Vec<Vec<&str>> = vec![Vec::new(); bin_edges.len()];
    let mut seen = BTreeMap::new();
    for (id, summary) in records {
        if seen.insert(id.as_str(), ()).is_some() {
            return Err(CurationError::DuplicateId { id: id.clone() });
        }
        bins[bin_of(summary.average)].push(id);
    }
    for (i, bin) in bins.iter().enumerate() {
        if !bin.is_empty() && bin.len() < 3 {
            log::warn!(
                "rating bin {i} has only {} sample(s); it cannot appear in every split",
                bin.len()
            );
        }
    }

    let n = records.len();
    let target = apportion(n, ratios);
    let mut quotas: Vec<[usize; 3]> = bins.iter().map(|b| apportion(b.len(), ratios)).collect();

    // Nudge per-bin quotas until column sums equal the global targets.
    loop {
        let mut col = [0usize; 3];
        for q in &quotas {
            for s in 0..3 {
                col[s] += q[s];
            }
        }
        let Some(deficit) = (0..3).find(|&s| col[s] < target[s]) else { break };
        let surplus = (0..3).find(|&s| col[s] > target[s]).expect("sums match n");
        // donate from the bin most over-proportioned in the surplus split
        let ratio_s = [ratios.0, ratios.1, ratios.2][surplus];
        let donor = (0..bins.len())
            .filter(|&b| quotas[b][surplus] > 0)
            .max_by(|&a, &b| {
                let fa = quotas[a][surplus] as f64 / bins[a].len().max(1) as f64 - ratio_s;
                let fb = quotas[b][surplus] as f64 / bins[b].len().max(1) as f64 - ratio_s;
                fa.partial_cmp(&fb).unwrap().then(b.cmp(&a))
            })
            .expect("a surplus split has a donor bin");
        quotas[donor][surplus] -= 1;
        quotas[donor][deficit] += 1;
    }

    let mut map = BTreeMap::new();
    for (b, bin) in bins.iter().enumerate() {
        // canonical order, then a seeded shuffle: independent of input order
        let mut ids: Vec<&str> = bin.clone();
        ids.sort_unstable();
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, &format!("split-bin-{b}")));
        ids.shuffle(&mut rng);
        let [q_train, q_dev, _] = quotas[b];
        for (i, id) in ids.iter().enumerate() {
            let split = if i < q_train {
                Split::Train
            } else if i < q_train + q_dev {
                Split::Dev
            } else {
                Split::Test
            };
            map.insert(id.to_string(), split);
        }
    }
    Ok(SplitAssignment { map })
}
