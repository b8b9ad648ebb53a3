//! Data model for tagged code-mixed sentences and human annotations.
//!
//! A corpus is a list of [`TaggedSentence`]s, each an ordered list of
//! [`Token`]s carrying a language tag and an optional PoS tag. Annotations
//! arrive as triples of labels per sample: either a 1–5 rating or an
//! exclusion flag. All types are immutable after construction and safe to
//! share across threads.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Per-token language identity.
///
/// `LangA` and `LangB` are the two languages of the pair (for the shipped
/// script helper: Hindi and English). `Neutral` covers language-independent
/// tokens: punctuation, numerals, URLs, hashtags, user mentions, emoji.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LanguageTag {
    LangA,
    LangB,
    Neutral,
}

impl LanguageTag {
    /// The opposite language of the pair; `Neutral` has no opposite.
    pub fn other(self) -> Option<LanguageTag> {
        match self {
            LanguageTag::LangA => Some(LanguageTag::LangB),
            LanguageTag::LangB => Some(LanguageTag::LangA),
            LanguageTag::Neutral => None,
        }
    }

    pub fn as_wire(self) -> &'static str {
        match self {
            LanguageTag::LangA => "l1",
            LanguageTag::LangB => "l2",
            LanguageTag::Neutral => "neutral",
        }
    }

    pub fn from_wire(s: &str) -> Option<LanguageTag> {
        match s {
            "l1" => Some(LanguageTag::LangA),
            "l2" => Some(LanguageTag::LangB),
            "neutral" => Some(LanguageTag::Neutral),
            _ => None,
        }
    }
}

/// Universal-Dependencies PoS tag set (closed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[allow(clippy::upper_case_acronyms)]
pub enum PosTag {
    ADJ,
    ADP,
    ADV,
    AUX,
    CCONJ,
    DET,
    INTJ,
    NOUN,
    NUM,
    PART,
    PRON,
    PROPN,
    PUNCT,
    SCONJ,
    SYM,
    VERB,
    X,
}

/// All tags in the fixed order used for report columns.
pub const ALL_POS: [PosTag; 17] = [
    PosTag::ADJ,
    PosTag::ADP,
    PosTag::ADV,
    PosTag::AUX,
    PosTag::CCONJ,
    PosTag::DET,
    PosTag::INTJ,
    PosTag::NOUN,
    PosTag::NUM,
    PosTag::PART,
    PosTag::PRON,
    PosTag::PROPN,
    PosTag::PUNCT,
    PosTag::SCONJ,
    PosTag::SYM,
    PosTag::VERB,
    PosTag::X,
];

impl PosTag {
    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::ADJ => "ADJ",
            PosTag::ADP => "ADP",
            PosTag::ADV => "ADV",
            PosTag::AUX => "AUX",
            PosTag::CCONJ => "CCONJ",
            PosTag::DET => "DET",
            PosTag::INTJ => "INTJ",
            PosTag::NOUN => "NOUN",
            PosTag::NUM => "NUM",
            PosTag::PART => "PART",
            PosTag::PRON => "PRON",
            PosTag::PROPN => "PROPN",
            PosTag::PUNCT => "PUNCT",
            PosTag::SCONJ => "SCONJ",
            PosTag::SYM => "SYM",
            PosTag::VERB => "VERB",
            PosTag::X => "X",
        }
    }

    /// Exact parse of a tag label. `PPRON` (seen in some tagger output) is
    /// accepted as an alias of `PROPN`; anything else unknown yields `None`.
    pub fn from_label(label: &str) -> Option<PosTag> {
        ALL_POS
            .iter()
            .copied()
            .find(|p| p.as_str() == label)
            .or(if label == "PPRON" { Some(PosTag::PROPN) } else { None })
    }

    /// Total parse used on ingest: unknown labels map to `X` with a warning
    /// so third-party tagger output never aborts a run.
    pub fn from_label_lossy(label: &str) -> PosTag {
        match Self::from_label(label) {
            Some(p) => {
                if label == "PPRON" {
                    log::warn!("PoS tag PPRON ingested as alias of PROPN");
                }
                p
            }
            None => {
                log::warn!("unknown PoS tag {label:?} mapped to X");
                PosTag::X
            }
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a sentence came from: synthetically generated or collected from an
/// online social network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Synthetic,
    Social,
}

impl Source {
    pub fn as_wire(self) -> &'static str {
        match self {
            Source::Synthetic => "gcm",
            Source::Social => "osn",
        }
    }

    pub fn from_wire(s: &str) -> Option<Source> {
        match s {
            "gcm" => Some(Source::Synthetic),
            "osn" => Some(Source::Social),
            _ => None,
        }
    }
}

/// Whether LangA text is romanised (Latin script) or in its native script.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScriptForm {
    Romanised,
    Normalised,
}

impl ScriptForm {
    pub fn as_wire(self) -> &'static str {
        match self {
            ScriptForm::Romanised => "roman",
            ScriptForm::Normalised => "norm",
        }
    }

    pub fn from_wire(s: &str) -> Option<ScriptForm> {
        match s {
            "roman" => Some(ScriptForm::Romanised),
            "norm" => Some(ScriptForm::Normalised),
            _ => None,
        }
    }
}

/// Perturbation applied to a sentence, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Perturbation {
    Swap,
    Delete,
    BackTranslate,
}

impl Perturbation {
    pub fn as_wire(self) -> &'static str {
        match self {
            Perturbation::Swap => "swap",
            Perturbation::Delete => "delete",
            Perturbation::BackTranslate => "backtranslate",
        }
    }

    pub fn from_wire(s: &str) -> Option<Perturbation> {
        match s {
            "swap" => Some(Perturbation::Swap),
            "delete" => Some(Perturbation::Delete),
            "backtranslate" => Some(Perturbation::BackTranslate),
            _ => None,
        }
    }
}

/// One surface token with its language tag and optional PoS tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    surface: String,
    lid: LanguageTag,
    pos: Option<PosTag>,
}

impl Token {
    /// Build a token. The surface must be non-empty and whitespace-free.
    pub fn new(
        surface: impl Into<String>,
        lid: LanguageTag,
        pos: Option<PosTag>,
    ) -> Result<Token, CorpusError> {
        let surface = surface.into();
        if surface.is_empty() || surface.chars().any(char::is_whitespace) {
            return Err(CorpusError::InvalidSurface { surface });
        }
        Ok(Token { surface, lid, pos })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn lid(&self) -> LanguageTag {
        self.lid
    }

    pub fn pos(&self) -> Option<PosTag> {
        self.pos
    }
}

/// A tokenized, language-tagged sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    id: String,
    tokens: Vec<Token>,
    source: Source,
    script_form: ScriptForm,
    perturbation: Option<Perturbation>,
}

impl TaggedSentence {
    pub fn new(
        id: impl Into<String>,
        tokens: Vec<Token>,
        source: Source,
        script_form: ScriptForm,
        perturbation: Option<Perturbation>,
    ) -> Result<TaggedSentence, CorpusError> {
        let id = id.into();
        if tokens.is_empty() {
            return Err(CorpusError::EmptySentence { id });
        }
        Ok(TaggedSentence { id, tokens, source, script_form, perturbation })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn script_form(&self) -> ScriptForm {
        self.script_form
    }

    pub fn perturbation(&self) -> Option<Perturbation> {
        self.perturbation
    }

    /// Surface text, tokens joined by single spaces.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&t.surface);
        }
        out
    }

    /// Copy of this sentence with new tokens and a perturbation flag set.
    /// The id and provenance fields are preserved.
    pub(crate) fn with_perturbed_tokens(
        &self,
        tokens: Vec<Token>,
        perturbation: Perturbation,
    ) -> Result<TaggedSentence, CorpusError> {
        TaggedSentence::new(
            self.id.clone(),
            tokens,
            self.source,
            self.script_form,
            Some(perturbation),
        )
    }
}

/// Reason a sample was excluded by an annotator instead of rated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exclusion {
    Abusive,
    Monolingual,
    OtherLanguage,
}

impl Exclusion {
    pub fn as_wire(self) -> &'static str {
        match self {
            Exclusion::Abusive => "ABUSIVE",
            Exclusion::Monolingual => "MONO",
            Exclusion::OtherLanguage => "OTHERLANG",
        }
    }

    pub fn from_wire(s: &str) -> Option<Exclusion> {
        match s {
            "ABUSIVE" => Some(Exclusion::Abusive),
            "MONO" => Some(Exclusion::Monolingual),
            "OTHERLANG" => Some(Exclusion::OtherLanguage),
            _ => None,
        }
    }
}

/// One annotator's label: a 1–5 rating or an exclusion flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatingLabel {
    Rating(u8),
    Exclusion(Exclusion),
}

/// The three labels collected for one sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationTriple {
    sample_id: String,
    labels: [RatingLabel; 3],
}

impl AnnotationTriple {
    pub fn new(
        sample_id: impl Into<String>,
        labels: [RatingLabel; 3],
    ) -> Result<AnnotationTriple, CorpusError> {
        let sample_id = sample_id.into();
        for label in &labels {
            if let RatingLabel::Rating(r) = label {
                if !(1..=5).contains(r) {
                    return Err(CorpusError::RatingOutOfRange {
                        sample_id,
                        rating: i64::from(*r),
                    });
                }
            }
        }
        Ok(AnnotationTriple { sample_id, labels })
    }

    pub fn sample_id(&self) -> &str {
        &self.sample_id
    }

    pub fn labels(&self) -> &[RatingLabel; 3] {
        &self.labels
    }

    /// The three ratings, or `None` if any label is an exclusion flag.
    pub fn ratings(&self) -> Option<[u8; 3]> {
        let mut out = [0u8; 3];
        for (slot, label) in out.iter_mut().zip(self.labels.iter()) {
            match label {
                RatingLabel::Rating(r) => *slot = *r,
                RatingLabel::Exclusion(_) => return None,
            }
        }
        Some(out)
    }

    /// True if any of the three labels is an exclusion flag. Such samples
    /// are dropped from rating-based processing.
    pub fn has_exclusion(&self) -> bool {
        self.ratings().is_none()
    }
}

/// A rating triple condensed to its mean and its disagreement score
/// (sum of absolute pairwise differences, always even, in 0..=8).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatingSummary {
    pub average: f64,
    pub disagreement: u8,
}

/// Condense a rating-only triple to average rating and disagreement.
///
/// Disagreement is the sum of absolute differences over all annotator
/// pairs, e.g. (2,3,4) gives |2-3| + |2-4| + |3-4| = 4. Triples containing
/// an exclusion flag are rejected; callers filter those out first.
pub fn summarize(triple: &AnnotationTriple) -> Result<RatingSummary, CorpusError> {
    let ratings = triple.ratings().ok_or_else(|| CorpusError::ExclusionPresent {
        sample_id: triple.sample_id.clone(),
    })?;
    let [a, b, c] = ratings.map(i16::from);
    let disagreement = ((a - b).abs() + (a - c).abs() + (b - c).abs()) as u8;
    let average = f64::from(a + b + c) / 3.0;
    Ok(RatingSummary { average, disagreement })
}

/// Script-based language ID for whitespace-free token surfaces.
///
/// Devanagari codepoints (U+0900–U+097F) win over Latin letters when both
/// occur; tokens with neither script are `Neutral`. Only meaningful for
/// normalised text where LangA is written in Devanagari.
pub fn script_lid(surface: &str) -> LanguageTag {
    let mut saw_latin = false;
    for c in surface.chars() {
        let cp = c as u32;
        if (0x0900..=0x097F).contains(&cp) {
            return LanguageTag::LangA;
        }
        if c.is_ascii_alphabetic() {
            saw_latin = true;
        }
    }
    if saw_latin {
        LanguageTag::LangB
    } else {
        LanguageTag::Neutral
    }
}

/// Errors from corpus construction and I/O.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("token surface must be non-empty and whitespace-free, got {surface:?}")]
    InvalidSurface { surface: String },
    #[error("sentence {id:?} has no tokens")]
    EmptySentence { id: String },
    #[error("duplicate sample id {id:?}")]
    DuplicateId { id: String },
    #[error("{path}: file contains no records")]
    EmptyFile { path: String },
    #[error("{path}:{line}: {message}")]
    ParseLine { path: String, line: usize, message: String },
    #[error("sample {sample_id:?}: rating {rating} outside 1..=5")]
    RatingOutOfRange { sample_id: String, rating: i64 },
    #[error("sample {sample_id:?} carries an exclusion flag; filter before summarizing")]
    ExclusionPresent { sample_id: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CorpusError {
    fn io(path: &Path, source: std::io::Error) -> CorpusError {
        CorpusError::Io { path: path.display().to_string(), source }
    }
}

#[derive(Serialize, Deserialize)]
struct TokenRecord {
    surface: String,
    lid: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pos: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct SentenceRecord {
    id: String,
    text: String,
    tokens: Vec<TokenRecord>,
    source: String,
    script: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    perturbation: Option<String>,
}

fn sentence_from_record(
    record: SentenceRecord,
    path: &str,
    line: usize,
) -> Result<TaggedSentence, CorpusError> {
    let parse = |message: String| CorpusError::ParseLine { path: path.to_string(), line, message };
    let source = Source::from_wire(&record.source)
        .ok_or_else(|| parse(format!("unknown source {:?}", record.source)))?;
    let script = ScriptForm::from_wire(&record.script)
        .ok_or_else(|| parse(format!("unknown script {:?}", record.script)))?;
    let perturbation = match record.perturbation.as_deref() {
        None => None,
        Some(p) => Some(
            Perturbation::from_wire(p)
                .ok_or_else(|| parse(format!("unknown perturbation {p:?}")))?,
        ),
    };
    let mut tokens = Vec::with_capacity(record.tokens.len());
    for t in record.tokens {
        let lid = LanguageTag::from_wire(&t.lid)
            .ok_or_else(|| parse(format!("unknown lid {:?}", t.lid)))?;
        let pos = t.pos.as_deref().map(PosTag::from_label_lossy);
        tokens.push(Token::new(t.surface, lid, pos).map_err(|e| parse(e.to_string()))?);
    }
    TaggedSentence::new(record.id, tokens, source, script, perturbation)
        .map_err(|e| parse(e.to_string()))
}

fn sentence_to_record(s: &TaggedSentence) -> SentenceRecord {
    SentenceRecord {
        id: s.id.clone(),
        text: s.text(),
        tokens: s
            .tokens
            .iter()
            .map(|t| TokenRecord {
                surface: t.surface.clone(),
                lid: t.lid.as_wire().to_string(),
                pos: t.pos.map(|p| p.as_str().to_string()),
            })
            .collect(),
        source: s.source.as_wire().to_string(),
        script: s.script_form.as_wire().to_string(),
        perturbation: s.perturbation.map(|p| p.as_wire().to_string()),
    }
}

/// Load a JSONL corpus: one sentence record per line. Blank lines are
/// skipped; malformed lines are reported with their line number, and ids
/// must be unique within the file.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<TaggedSentence>, CorpusError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| CorpusError::io(path, e))?;
    let reader = BufReader::new(file);
    let display = path.display().to_string();

    let mut sentences = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| CorpusError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let record: SentenceRecord =
            serde_json::from_str(&line).map_err(|e| CorpusError::ParseLine {
                path: display.clone(),
                line: lineno,
                message: e.to_string(),
            })?;
        let sentence = sentence_from_record(record, &display, lineno)?;
        if !seen.insert(sentence.id.clone()) {
            return Err(CorpusError::DuplicateId { id: sentence.id });
        }
        sentences.push(sentence);
    }
    if sentences.is_empty() {
        return Err(CorpusError::EmptyFile { path: display });
    }
    Ok(sentences)
}

/// Write a corpus as JSONL, the inverse of [`load_corpus`].
pub fn save_corpus(
    path: impl AsRef<Path>,
    sentences: &[TaggedSentence],
) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let mut file = std::fs::File::create(path).map_err(|e| CorpusError::io(path, e))?;
    for s in sentences {
        let json = serde_json::to_string(&sentence_to_record(s)).expect("record serializes");
        writeln!(file, "{json}").map_err(|e| CorpusError::io(path, e))?;
    }
    Ok(())
}

/// Load annotation triples from CSV with header `sample_id,r1,r2,r3`.
/// Each label is an integer 1–5 or one of `ABUSIVE`, `MONO`, `OTHERLANG`.
pub fn load_annotations(path: impl AsRef<Path>) -> Result<Vec<AnnotationTriple>, CorpusError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => {
                CorpusError::io(path, std::io::Error::other(e.to_string()))
            }
            _ => CorpusError::ParseLine { path: display.clone(), line: 1, message: e.to_string() },
        })?;

    let mut triples = Vec::new();
    let mut seen = HashSet::new();
    for (idx, row) in reader.records().enumerate() {
        let lineno = idx + 2; // header is line 1
        let row = row.map_err(|e| CorpusError::ParseLine {
            path: display.clone(),
            line: lineno,
            message: e.to_string(),
        })?;
        if row.len() != 4 {
            return Err(CorpusError::ParseLine {
                path: display.clone(),
                line: lineno,
                message: format!("expected 4 fields, got {}", row.len()),
            });
        }
        let sample_id = row[0].to_string();
        let mut labels = [RatingLabel::Rating(1); 3];
        for (i, slot) in labels.iter_mut().enumerate() {
            let field = row[i + 1].trim();
            *slot = if let Some(exclusion) = Exclusion::from_wire(field) {
                RatingLabel::Exclusion(exclusion)
            } else {
                let value: i64 = field.parse().map_err(|_| CorpusError::ParseLine {
                    path: display.clone(),
                    line: lineno,
                    message: format!("label {field:?} is neither a rating nor an exclusion"),
                })?;
                if !(1..=5).contains(&value) {
                    return Err(CorpusError::RatingOutOfRange { sample_id, rating: value });
                }
                RatingLabel::Rating(value as u8)
            };
        }
        if !seen.insert(sample_id.clone()) {
            return Err(CorpusError::DuplicateId { id: sample_id });
        }
        triples.push(AnnotationTriple { sample_id, labels });
    }
    if triples.is_empty() {
        return Err(CorpusError::EmptyFile { path: display });
    }
    Ok(triples)
}

/// Write annotation triples as CSV, the inverse of [`load_annotations`].
pub fn save_annotations(
    path: impl AsRef<Path>,
    triples: &[AnnotationTriple],
) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CorpusError::io(path, std::io::Error::other(e.to_string())))?;
    writer
        .write_record(["sample_id", "r1", "r2", "r3"])
        .map_err(|e| CorpusError::io(path, std::io::Error::other(e.to_string())))?;
    for t in triples {
        let mut record = vec![t.sample_id.clone()];
        for label in &t.labels {
            record.push(match label {
                RatingLabel::Rating(r) => r.to_string(),
                RatingLabel::Exclusion(e) => e.as_wire().to_string(),
            });
        }
        writer
            .write_record(&record)
            .map_err(|e| CorpusError::io(path, std::io::Error::other(e.to_string())))?;
    }
    writer
        .flush()
        .map_err(|e| CorpusError::io(path, e))?;
    Ok(())
}
