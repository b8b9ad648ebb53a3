//! Code-mixing metrics over tagged sentences.
//!
//! All metrics are pure functions of the token-wise language IDs (and PoS
//! tags, for SyMCoM). Neutral tokens are transparent to CMI, switch points,
//! spans, and burstiness: they neither break nor extend language spans.
//!
//! Sign convention: LangA counts positively in SyMCoM, so a PoS group
//! supplied entirely by LangA scores +1 and one supplied by LangB scores -1.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::corpus::{LanguageTag, PosTag, TaggedSentence, ALL_POS};

/// Errors from metric computation and metric-table I/O.
#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("sentence {id:?}: language token {surface:?} lacks a PoS tag")]
    MissingPos { id: String, surface: String },
    #[error("segmenter failed on {surface:?}: {reason}")]
    Segmenter { surface: String, reason: String },
    #[error("external score for unknown sample id {id:?}")]
    UnknownScoreId { id: String },
    #[error("no words to segment")]
    EmptyCorpus,
    #[error("{path}:{line}: {message}")]
    ParseLine { path: String, line: usize, message: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn language_sequence(sentence: &TaggedSentence) -> impl Iterator<Item = LanguageTag> + '_ {
    sentence
        .tokens()
        .iter()
        .map(|t| t.lid())
        .filter(|l| *l != LanguageTag::Neutral)
}

/// Code-Mixing Index in [0, 100].
///
/// `100 * (1 - max{w_i} / (n - u))` where `n` is the token count, `u` the
/// count of Neutral tokens and `w_i` the per-language counts; 0 when the
/// sentence has no language-bearing tokens.
pub fn cmi(sentence: &TaggedSentence) -> f64 {
    let mut lang_a = 0usize;
    let mut lang_b = 0usize;
    for lid in language_sequence(sentence) {
        match lid {
            LanguageTag::LangA => lang_a += 1,
            LanguageTag::LangB => lang_b += 1,
            LanguageTag::Neutral => unreachable!(),
        }
    }
    let bearing = lang_a + lang_b;
    if bearing == 0 {
        return 0.0;
    }
    100.0 * (1.0 - lang_a.max(lang_b) as f64 / bearing as f64)
}

/// Number of positions where adjacent language-bearing tokens differ in
/// language. Neutral tokens are skipped, so a switch "through" punctuation
/// still counts once.
pub fn switch_points(sentence: &TaggedSentence) -> usize {
    let mut count = 0;
    let mut prev: Option<LanguageTag> = None;
    for lid in language_sequence(sentence) {
        if let Some(p) = prev {
            if p != lid {
                count += 1;
            }
        }
        prev = Some(lid);
    }
    count
}

/// Lengths of maximal same-language runs over the Neutral-filtered token
/// sequence, in order of appearance.
pub fn language_spans(sentence: &TaggedSentence) -> Vec<usize> {
    let mut spans = Vec::new();
    let mut prev: Option<LanguageTag> = None;
    for lid in language_sequence(sentence) {
        if prev == Some(lid) {
            *spans.last_mut().expect("span open") += 1;
        } else {
            spans.push(1);
        }
        prev = Some(lid);
    }
    spans
}

/// Burstiness of language switching: `(sigma - m) / (sigma + m)` over the
/// span lengths, where `sigma` is the sample (n-1 denominator) standard
/// deviation and `m` the mean. `None` when the sentence has fewer than two
/// spans; exactly -1 for perfectly periodic switching (all spans equal).
pub fn burstiness(sentence: &TaggedSentence) -> Option<f64> {
    burstiness_of_spans(&language_spans(sentence))
}

pub(crate) fn burstiness_of_spans(spans: &[usize]) -> Option<f64> {
    if spans.len() < 2 {
        return None;
    }
    let n = spans.len() as f64;
    let mean = spans.iter().sum::<usize>() as f64 / n;
    let ss: f64 = spans.iter().map(|&s| (s as f64 - mean).powi(2)).sum();
    let sigma = (ss / (n - 1.0)).sqrt();
    Some((sigma - mean) / (sigma + mean))
}

fn check_pos_tagged(sentence: &TaggedSentence) -> Result<(), MetricsError> {
    for token in sentence.tokens() {
        if token.lid() != LanguageTag::Neutral && token.pos().is_none() {
            return Err(MetricsError::MissingPos {
                id: sentence.id().to_string(),
                surface: token.surface().to_string(),
            });
        }
    }
    Ok(())
}

/// True when at least one language-bearing token carries a PoS tag. Used to
/// distinguish wholly untagged corpora (SyMCoM skipped) from partially
/// tagged ones (an error).
pub fn has_pos_tags(sentence: &TaggedSentence) -> bool {
    sentence
        .tokens()
        .iter()
        .any(|t| t.lid() != LanguageTag::Neutral && t.pos().is_some())
}

/// SyMCoM score of one PoS group:
/// `(count_LangA - count_LangB) / (count_LangA + count_LangB)` counting only
/// language-bearing tokens with that tag. `None` if the group is empty.
pub fn symcom_pos(sentence: &TaggedSentence, pos: PosTag) -> Result<Option<f64>, MetricsError> {
    check_pos_tagged(sentence)?;
    let mut lang_a = 0usize;
    let mut lang_b = 0usize;
    for token in sentence.tokens() {
        if token.pos() != Some(pos) {
            continue;
        }
        match token.lid() {
            LanguageTag::LangA => lang_a += 1,
            LanguageTag::LangB => lang_b += 1,
            LanguageTag::Neutral => {}
        }
    }
    let total = lang_a + lang_b;
    if total == 0 {
        return Ok(None);
    }
    Ok(Some((lang_a as f64 - lang_b as f64) / total as f64))
}

/// Sentence-level SyMCoM: the token-count-weighted mean of `|SyMCoM_pos|`
/// over the PoS groups present, in [0, 1]. `None` if the sentence has no
/// language-bearing tokens.
pub fn symcom_sentence(sentence: &TaggedSentence) -> Result<Option<f64>, MetricsError> {
    check_pos_tagged(sentence)?;
    let mut counts: BTreeMap<PosTag, (usize, usize)> = BTreeMap::new();
    for token in sentence.tokens() {
        let slot = match token.lid() {
            LanguageTag::LangA => 0,
            LanguageTag::LangB => 1,
            LanguageTag::Neutral => continue,
        };
        let pos = token.pos().expect("checked above");
        let entry = counts.entry(pos).or_insert((0, 0));
        if slot == 0 {
            entry.0 += 1;
        } else {
            entry.1 += 1;
        }
    }
    let total: usize = counts.values().map(|(a, b)| a + b).sum();
    if total == 0 {
        return Ok(None);
    }
    let mut acc = 0.0;
    for (a, b) in counts.values() {
        let group = a + b;
        let score = (*a as f64 - *b as f64) / group as f64;
        acc += group as f64 / total as f64 * score.abs();
    }
    Ok(Some(acc))
}

/// Corpus-level tokenizer fertility: total subword pieces emitted by the
/// segmenter divided by total words. The segmenter maps one surface to its
/// subword count; a failure is propagated with the offending surface.
pub fn fertility<F>(sentences: &[TaggedSentence], mut segmenter: F) -> Result<f64, MetricsError>
where
    F: FnMut(&str) -> Result<usize, String>,
{
    let mut words = 0usize;
    let mut pieces = 0usize;
    for sentence in sentences {
        for token in sentence.tokens() {
            let count = segmenter(token.surface()).map_err(|reason| MetricsError::Segmenter {
                surface: token.surface().to_string(),
                reason,
            })?;
            words += 1;
            pieces += count;
        }
    }
    if words == 0 {
        return Err(MetricsError::EmptyCorpus);
    }
    Ok(pieces as f64 / words as f64)
}

/// One sentence's metric values, the feature row every analysis consumes.
///
/// `burstiness` is absent when the sentence has fewer than two language
/// spans; a `symcom_by_pos` entry is absent when no language-bearing token
/// carries that tag; `external_score` is a pass-through column (e.g. a
/// perplexity supplied by an external model), never computed here.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub sample_id: String,
    pub length: usize,
    pub cmi: f64,
    pub switch_points: usize,
    pub burstiness: Option<f64>,
    pub symcom_sentence: Option<f64>,
    pub symcom_by_pos: BTreeMap<PosTag, f64>,
    pub external_score: Option<f64>,
}

/// Compute one [`MetricRow`] per sentence, in input order.
///
/// SyMCoM fields are filled only for sentences whose language-bearing
/// tokens are PoS-tagged; wholly untagged sentences get absent SyMCoM
/// fields, and partially tagged ones are an error. Every key of
/// `external_scores` must name a sentence in the corpus.
pub fn metric_rows(
    corpus: &[TaggedSentence],
    external_scores: Option<&HashMap<String, f64>>,
) -> Result<Vec<MetricRow>, MetricsError> {
    if let Some(scores) = external_scores {
        for id in scores.keys() {
            if !corpus.iter().any(|s| s.id() == id) {
                return Err(MetricsError::UnknownScoreId { id: id.clone() });
            }
        }
    }
    let mut rows = Vec::with_capacity(corpus.len());
    for sentence in corpus {
        let tagged = has_pos_tags(sentence);
        let mut symcom_by_pos = BTreeMap::new();
        let mut symcom_sent = None;
        if tagged {
            for pos in ALL_POS {
                if let Some(score) = symcom_pos(sentence, pos)? {
                    symcom_by_pos.insert(pos, score);
                }
            }
            symcom_sent = symcom_sentence(sentence)?;
        }
        rows.push(MetricRow {
            sample_id: sentence.id().to_string(),
            length: sentence.len(),
            cmi: cmi(sentence),
            switch_points: switch_points(sentence),
            burstiness: burstiness(sentence),
            symcom_sentence: symcom_sent,
            symcom_by_pos,
            external_score: external_scores.and_then(|m| m.get(sentence.id()).copied()),
        });
    }
    Ok(rows)
}

fn io_err(path: &Path, source: std::io::Error) -> MetricsError {
    MetricsError::Io { path: path.display().to_string(), source }
}

/// Fixed metric-table column order.
pub fn metric_csv_header() -> Vec<String> {
    let mut header = vec![
        "id".to_string(),
        "length".to_string(),
        "cmi".to_string(),
        "switch_points".to_string(),
        "burstiness".to_string(),
        "symcom_sentence".to_string(),
    ];
    for pos in ALL_POS {
        header.push(format!("symcom_{pos}"));
    }
    header.push("external_score".to_string());
    header
}

fn opt_field(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Write metric rows as CSV in the fixed column order. CMI is reported to
/// two decimal places; other reals keep full precision; absent values
/// serialize as empty fields.
pub fn write_metric_rows(path: impl AsRef<Path>, rows: &[MetricRow]) -> Result<(), MetricsError> {
    let path = path.as_ref();
    let mut file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = String::new();
    out.push_str(&metric_csv_header().join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&csv_escape(&row.sample_id));
        out.push_str(&format!(",{},{:.2},{}", row.length, row.cmi, row.switch_points));
        out.push(',');
        out.push_str(&opt_field(row.burstiness));
        out.push(',');
        out.push_str(&opt_field(row.symcom_sentence));
        for pos in ALL_POS {
            out.push(',');
            out.push_str(&opt_field(row.symcom_by_pos.get(&pos).copied()));
        }
        out.push(',');
        out.push_str(&opt_field(row.external_score));
        out.push('\n');
    }
    file.write_all(out.as_bytes()).map_err(|e| io_err(path, e))
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Read a metric-row CSV produced by [`write_metric_rows`].
pub fn read_metric_rows(path: impl AsRef<Path>) -> Result<Vec<MetricRow>, MetricsError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| io_err(path, std::io::Error::other(e.to_string())))?;
    let expected = metric_csv_header();
    {
        let headers = reader
            .headers()
            .map_err(|e| io_err(path, std::io::Error::other(e.to_string())))?;
        let got: Vec<&str> = headers.iter().collect();
        if got != expected.iter().map(String::as_str).collect::<Vec<_>>() {
            return Err(MetricsError::ParseLine {
                path: display,
                line: 1,
                message: format!("unexpected header {got:?}"),
            });
        }
    }
    let parse_opt = |field: &str, line: usize| -> Result<Option<f64>, MetricsError> {
        if field.is_empty() {
            Ok(None)
        } else {
            field.parse::<f64>().map(Some).map_err(|_| MetricsError::ParseLine {
                path: display.clone(),
                line,
                message: format!("bad number {field:?}"),
            })
        }
    };
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 2;
        let record = record.map_err(|e| MetricsError::ParseLine {
            path: display.clone(),
            line,
            message: e.to_string(),
        })?;
        let bad = |message: String| MetricsError::ParseLine {
            path: display.clone(),
            line,
            message,
        };
        let mut symcom_by_pos = BTreeMap::new();
        for (k, pos) in ALL_POS.iter().enumerate() {
            if let Some(v) = parse_opt(&record[6 + k], line)? {
                symcom_by_pos.insert(*pos, v);
            }
        }
        rows.push(MetricRow {
            sample_id: record[0].to_string(),
            length: record[1].parse().map_err(|_| bad(format!("bad length {:?}", &record[1])))?,
            cmi: record[2].parse().map_err(|_| bad(format!("bad cmi {:?}", &record[2])))?,
            switch_points: record[3]
                .parse()
                .map_err(|_| bad(format!("bad switch_points {:?}", &record[3])))?,
            burstiness: parse_opt(&record[4], line)?,
            symcom_sentence: parse_opt(&record[5], line)?,
            symcom_by_pos,
            external_score: parse_opt(&record[6 + ALL_POS.len()], line)?,
        });
    }
    Ok(rows)
}

/// Read an external score file: CSV with header `id,score`.
pub fn read_scores(path: impl AsRef<Path>) -> Result<HashMap<String, f64>, MetricsError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| io_err(path, std::io::Error::other(e.to_string())))?;
    let mut scores = HashMap::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 2;
        let record = record.map_err(|e| MetricsError::ParseLine {
            path: display.clone(),
            line,
            message: e.to_string(),
        })?;
        let score: f64 = record[1].parse().map_err(|_| MetricsError::ParseLine {
            path: display.clone(),
            line,
            message: format!("bad score {:?}", &record[1]),
        })?;
        scores.insert(record[0].to_string(), score);
    }
    Ok(scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ScriptForm, Source, Token};

    pub(crate) fn lid_sentence(lids: &[LanguageTag]) -> TaggedSentence {
        let tokens = lids
            .iter()
            .enumerate()
            .map(|(i, l)| Token::new(format!("w{i}"), *l, None).unwrap())
            .collect();
        TaggedSentence::new("t", tokens, Source::Synthetic, ScriptForm::Romanised, None).unwrap()
    }

    pub(crate) fn tagged_sentence(spec: &[(LanguageTag, PosTag)]) -> TaggedSentence {
        let tokens = spec
            .iter()
            .enumerate()
            .map(|(i, (l, p))| Token::new(format!("w{i}"), *l, Some(*p)).unwrap())
            .collect();
        TaggedSentence::new("t", tokens, Source::Synthetic, ScriptForm::Romanised, None).unwrap()
    }

    use LanguageTag::{LangA as A, LangB as B, Neutral as N};

    #[test]
    fn cmi_reference_sentences() {
        // 100 * (1 - 4/6)
        assert!((cmi(&lid_sentence(&[A, B, A, B, A, A])) - 100.0 / 3.0).abs() < 1e-12);
        // 100 * (1 - 4/5)
        assert!((cmi(&lid_sentence(&[B, B, A, B, B])) - 20.0).abs() < 1e-12);
        // 100 * (1 - 3/5)
        assert!((cmi(&lid_sentence(&[A, B, B, B, A])) - 40.0).abs() < 1e-12);
        // all-neutral sentence: n == u
        assert_eq!(cmi(&lid_sentence(&[N, N])), 0.0);
    }

    #[test]
    fn switch_point_reference_sentences() {
        assert_eq!(switch_points(&lid_sentence(&[A, B, A, B, A, A])), 4);
        assert_eq!(switch_points(&lid_sentence(&[A, B, B, B, A])), 2);
        assert_eq!(switch_points(&lid_sentence(&[A, A, A])), 0);
        // Neutral tokens do not hide a switch.
        assert_eq!(switch_points(&lid_sentence(&[A, N, B])), 1);
        assert_eq!(switch_points(&lid_sentence(&[A, N, A])), 0);
    }

    #[test]
    fn spans_run_length_with_neutral_transparency() {
        assert_eq!(language_spans(&lid_sentence(&[A, B, A, B, A, A])), vec![1, 1, 1, 1, 2]);
        assert_eq!(language_spans(&lid_sentence(&[A, N, A, B])), vec![2, 1]);
        assert_eq!(language_spans(&lid_sentence(&[B, B, B])), vec![3]);
        assert_eq!(language_spans(&lid_sentence(&[N, N])), Vec::<usize>::new());
    }

    #[test]
    fn burstiness_reference_values() {
        // spans [1,1,1,1,2]: sample std sqrt(0.2), mean 1.2
        let expected = (0.2f64.sqrt() - 1.2) / (0.2f64.sqrt() + 1.2);
        let got = burstiness(&lid_sentence(&[A, B, A, B, A, A])).unwrap();
        assert!((got - expected).abs() < 1e-12);
        assert!((got - -0.4570).abs() < 1e-4);

        // spans [2,1,2]: sample std 1/sqrt(3), mean 5/3
        let sigma = (1.0f64 / 3.0).sqrt();
        let expected = (sigma - 5.0 / 3.0) / (sigma + 5.0 / 3.0);
        let got = burstiness(&lid_sentence(&[B, B, A, B, B])).unwrap();
        assert!((got - expected).abs() < 1e-12);
        assert!((got - -0.4854).abs() < 1e-4);

        // spans [1,3,1]: sample std sqrt(4/3), mean 5/3
        let sigma = (4.0f64 / 3.0).sqrt();
        let expected = (sigma - 5.0 / 3.0) / (sigma + 5.0 / 3.0);
        let got = burstiness(&lid_sentence(&[A, B, B, B, A])).unwrap();
        assert!((got - expected).abs() < 1e-12);
        assert!((got - -0.1815).abs() < 1e-4);

        // periodic switching: all spans equal, sigma = 0
        assert_eq!(burstiness_of_spans(&[2, 2, 2]), Some(-1.0));
        // fewer than two spans: undefined
        assert_eq!(burstiness(&lid_sentence(&[A, A, A])), None);
        assert_eq!(burstiness(&lid_sentence(&[N])), None);
    }

    #[test]
    fn symcom_pos_reference_values() {
        use PosTag::{NOUN, VERB};
        // one LangA VERB, no LangB VERB
        let s = tagged_sentence(&[(A, VERB), (B, NOUN)]);
        assert_eq!(symcom_pos(&s, VERB).unwrap(), Some(1.0));
        // 1 LangA NOUN vs 2 LangB NOUNs
        let s = tagged_sentence(&[(A, NOUN), (B, NOUN), (B, NOUN)]);
        let got = symcom_pos(&s, NOUN).unwrap().unwrap();
        assert!((got - (-1.0 / 3.0)).abs() < 1e-12);
        // balanced group
        let s = tagged_sentence(&[(A, NOUN), (B, NOUN)]);
        assert_eq!(symcom_pos(&s, NOUN).unwrap(), Some(0.0));
        // absent group
        assert_eq!(symcom_pos(&s, VERB).unwrap(), None);
    }

    #[test]
    fn symcom_pos_requires_complete_tagging() {
        let tokens = vec![
            Token::new("a", A, Some(PosTag::NOUN)).unwrap(),
            Token::new("b", B, None).unwrap(),
        ];
        let s = TaggedSentence::new("p", tokens, Source::Social, ScriptForm::Romanised, None)
            .unwrap();
        assert!(matches!(
            symcom_pos(&s, PosTag::NOUN),
            Err(MetricsError::MissingPos { .. })
        ));
        // Untagged Neutral tokens are fine.
        let tokens = vec![
            Token::new("a", A, Some(PosTag::NOUN)).unwrap(),
            Token::new("!", N, None).unwrap(),
        ];
        let s = TaggedSentence::new("p", tokens, Source::Social, ScriptForm::Romanised, None)
            .unwrap();
        assert_eq!(symcom_pos(&s, PosTag::NOUN).unwrap(), Some(1.0));
    }

    #[test]
    fn symcom_sentence_weighted_aggregation() {
        use PosTag::{ADP, NOUN, VERB};
        // every group monolingual
        let s = tagged_sentence(&[(A, NOUN), (A, NOUN), (B, VERB), (A, ADP)]);
        assert_eq!(symcom_sentence(&s).unwrap(), Some(1.0));
        // NOUN balanced (weight 2), VERB monolingual (weight 1): (2*0 + 1*1)/3
        let s = tagged_sentence(&[(A, NOUN), (B, NOUN), (A, VERB)]);
        let got = symcom_sentence(&s).unwrap().unwrap();
        assert!((got - 1.0 / 3.0).abs() < 1e-12);
        // single language-bearing token
        let s = tagged_sentence(&[(B, NOUN)]);
        assert_eq!(symcom_sentence(&s).unwrap(), Some(1.0));
        // no language-bearing tokens at all
        let tokens = vec![Token::new("!", N, Some(PosTag::PUNCT)).unwrap()];
        let s = TaggedSentence::new("n", tokens, Source::Social, ScriptForm::Romanised, None)
            .unwrap();
        assert_eq!(symcom_sentence(&s).unwrap(), None);
    }

    #[test]
    fn fertility_ratios() {
        let sents = vec![lid_sentence(&[A, B]), lid_sentence(&[B, A])];
        assert_eq!(fertility(&sents, |_| Ok(1)).unwrap(), 1.0);
        assert_eq!(fertility(&sents, |_| Ok(2)).unwrap(), 2.0);
        // counts (1,2) and (3,2): 8 pieces over 4 words
        let mut counts = vec![1usize, 2, 3, 2].into_iter();
        assert_eq!(fertility(&sents, |_| Ok(counts.next().unwrap())).unwrap(), 2.0);
        // failure carries the surface
        let err = fertility(&sents, |s| {
            if s == "w1" {
                Err("boom".to_string())
            } else {
                Ok(1)
            }
        })
        .unwrap_err();
        assert!(matches!(err, MetricsError::Segmenter { ref surface, .. } if surface == "w1"));
    }

    #[test]
    fn metric_rows_assembles_and_validates_scores() {
        assert!(metric_rows(&[], None).unwrap().is_empty());

        let corpus = vec![lid_sentence(&[A, B, A, B, A, A])];
        let rows = metric_rows(&corpus, None).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].cmi - 100.0 / 3.0).abs() < 1e-9);
        assert_eq!(rows[0].switch_points, 4);
        assert!((rows[0].burstiness.unwrap() - -0.4570).abs() < 1e-4);
        // untagged corpus: SyMCoM absent rather than an error
        assert_eq!(rows[0].symcom_sentence, None);
        assert!(rows[0].symcom_by_pos.is_empty());
        assert_eq!(rows[0].external_score, None);

        let mut scores = HashMap::new();
        scores.insert("t".to_string(), 12.5);
        let rows = metric_rows(&corpus, Some(&scores)).unwrap();
        assert_eq!(rows[0].external_score, Some(12.5));

        scores.insert("nope".to_string(), 1.0);
        assert!(matches!(
            metric_rows(&corpus, Some(&scores)),
            Err(MetricsError::UnknownScoreId { .. })
        ));
    }

    #[test]
    fn metric_csv_roundtrip() {
        let corpus = vec![
            tagged_sentence(&[(A, PosTag::NOUN), (B, PosTag::NOUN), (A, PosTag::VERB)]),
            lid_sentence(&[A, A]),
        ];
        let mut rows = metric_rows(&corpus, None).unwrap();
        rows[1].sample_id = "comma,id".to_string();
        rows[1].external_score = Some(3.25);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("metrics.csv");
        write_metric_rows(&path, &rows).unwrap();
        let loaded = read_metric_rows(&path).unwrap();
        assert_eq!(loaded.len(), 2);
        assert_eq!(loaded[1].sample_id, "comma,id");
        assert_eq!(loaded[1].external_score, Some(3.25));
        assert_eq!(loaded[0].symcom_by_pos, rows[0].symcom_by_pos);
        // cmi is reported at two decimals
        assert!((loaded[0].cmi - (rows[0].cmi * 100.0).round() / 100.0).abs() < 1e-12);
        assert_eq!(loaded[0].burstiness, rows[0].burstiness);
    }

    // ---- brute-force oracles, written directly from the definitions ----

    fn oracle_counts(lids: &[LanguageTag]) -> (usize, usize, usize) {
        let a = lids.iter().filter(|l| **l == A).count();
        let b = lids.iter().filter(|l| **l == B).count();
        let u = lids.iter().filter(|l| **l == N).count();
        (a, b, u)
    }

    fn oracle_cmi(lids: &[LanguageTag]) -> f64 {
        let (a, b, u) = oracle_counts(lids);
        let n = lids.len();
        if n == u {
            0.0
        } else {
            100.0 * (1.0 - (a.max(b) as f64) / ((n - u) as f64))
        }
    }

    fn oracle_filtered(lids: &[LanguageTag]) -> Vec<LanguageTag> {
        lids.iter().copied().filter(|l| *l != N).collect()
    }

    fn oracle_switch_points(lids: &[LanguageTag]) -> usize {
        let f = oracle_filtered(lids);
        (1..f.len()).filter(|&i| f[i] != f[i - 1]).count()
    }

    fn oracle_spans(lids: &[LanguageTag]) -> Vec<usize> {
        let f = oracle_filtered(lids);
        let mut spans = Vec::new();
        let mut i = 0;
        while i < f.len() {
            let mut j = i;
            while j < f.len() && f[j] == f[i] {
                j += 1;
            }
            spans.push(j - i);
            i = j;
        }
        spans
    }

    fn oracle_burstiness(lids: &[LanguageTag]) -> Option<f64> {
        let spans = oracle_spans(lids);
        if spans.len() < 2 {
            return None;
        }
        let n = spans.len() as f64;
        let mean = spans.iter().map(|&s| s as f64).sum::<f64>() / n;
        let var = spans.iter().map(|&s| (s as f64 - mean) * (s as f64 - mean)).sum::<f64>()
            / (n - 1.0);
        let sigma = var.sqrt();
        Some((sigma - mean) / (sigma + mean))
    }

    fn all_sequences(len: usize) -> Vec<Vec<LanguageTag>> {
        let tags = [A, B, N];
        let mut out: Vec<Vec<LanguageTag>> = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|seq| {
                    tags.iter().map(move |t| {
                        let mut s = seq.clone();
                        s.push(*t);
                        s
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn brute_force_equivalence_up_to_length_8() {
        for len in 1..=8 {
            for lids in all_sequences(len) {
                let s = lid_sentence(&lids);
                assert_eq!(cmi(&s), oracle_cmi(&lids), "cmi on {lids:?}");
                assert_eq!(switch_points(&s), oracle_switch_points(&lids), "sp on {lids:?}");
                let spans = language_spans(&s);
                assert_eq!(spans, oracle_spans(&lids), "spans on {lids:?}");
                match (burstiness(&s), oracle_burstiness(&lids)) {
                    (None, None) => {}
                    (Some(x), Some(y)) => {
                        assert!((x - y).abs() < 1e-12, "burstiness on {lids:?}")
                    }
                    (got, want) => panic!("burstiness on {lids:?}: {got:?} vs {want:?}"),
                }
                // structural invariants
                let bearing = lids.iter().filter(|l| **l != N).count();
                assert_eq!(spans.iter().sum::<usize>(), bearing);
                if !spans.is_empty() {
                    assert_eq!(spans.len(), switch_points(&s) + 1);
                }
                assert!(switch_points(&s) <= bearing.saturating_sub(1));
                let c = cmi(&s);
                assert!((0.0..=100.0).contains(&c));
                let mono = lids.iter().all(|l| *l != A) || lids.iter().all(|l| *l != B);
                assert_eq!(c == 0.0, mono, "cmi zero iff monolingual on {lids:?}");
            }
        }
    }
}

#[cfg(test)]
mod prop_tests {
    use super::tests::{lid_sentence, tagged_sentence};
    use super::*;
    use proptest::prelude::*;

    fn lid_strategy() -> impl Strategy<Value = LanguageTag> {
        prop_oneof![
            Just(LanguageTag::LangA),
            Just(LanguageTag::LangB),
            Just(LanguageTag::Neutral)
        ]
    }

    fn pos_strategy() -> impl Strategy<Value = PosTag> {
        prop::sample::select(ALL_POS.to_vec())
    }

    proptest! {
        #[test]
        fn burstiness_is_negative_one_iff_equal_spans(
            lids in prop::collection::vec(lid_strategy(), 1..20)
        ) {
            let s = lid_sentence(&lids);
            let spans = language_spans(&s);
            if let Some(b) = burstiness(&s) {
                prop_assert!((-1.0..=1.0).contains(&b));
                let all_equal = spans.windows(2).all(|w| w[0] == w[1]);
                prop_assert_eq!(b == -1.0, all_equal);
            } else {
                prop_assert!(spans.len() < 2);
            }
        }

        #[test]
        fn symcom_pos_antisymmetric_under_language_swap(
            spec in prop::collection::vec(
                (prop_oneof![Just(LanguageTag::LangA), Just(LanguageTag::LangB)], pos_strategy()),
                1..12,
            ),
            pos in pos_strategy(),
        ) {
            let swapped: Vec<_> = spec
                .iter()
                .map(|(l, p)| (l.other().unwrap(), *p))
                .collect();
            let orig = symcom_pos(&tagged_sentence(&spec), pos).unwrap();
            let flip = symcom_pos(&tagged_sentence(&swapped), pos).unwrap();
            match (orig, flip) {
                (None, None) => {}
                (Some(x), Some(y)) => prop_assert!((x + y).abs() < 1e-12),
                other => prop_assert!(false, "presence mismatch {:?}", other),
            }
            if let Some(x) = orig {
                let count_a = spec.iter().filter(|(l, p)| *l == LanguageTag::LangA && *p == pos).count();
                let count_b = spec.iter().filter(|(l, p)| *l == LanguageTag::LangB && *p == pos).count();
                prop_assert_eq!(x.abs() == 1.0, count_a == 0 || count_b == 0);
            }
        }

        #[test]
        fn symcom_sentence_invariant_under_token_permutation(
            spec in prop::collection::vec(
                (prop_oneof![Just(LanguageTag::LangA), Just(LanguageTag::LangB)], pos_strategy()),
                1..12,
            ),
            seed in 0u64..1000,
        ) {
            let base = symcom_sentence(&tagged_sentence(&spec)).unwrap();
            let mut shuffled = spec.clone();
            // cheap deterministic shuffle
            let mut state = seed.wrapping_add(1);
            for i in (1..shuffled.len()).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                shuffled.swap(i, j);
            }
            let perm = symcom_sentence(&tagged_sentence(&shuffled)).unwrap();
            match (base, perm) {
                (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-12),
                (None, None) => {}
                other => prop_assert!(false, "presence mismatch {:?}", other),
            }
        }
    }
}
