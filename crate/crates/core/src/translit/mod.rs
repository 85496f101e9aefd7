//! Syllable-pair transliteration model.
//!
//! Training counts how often each source syllable is aligned with each
//! target syllable in a positionally aligned parallel corpus. The
//! conditional probability of a target given a source is the relative
//! frequency
//!
//! ```text
//! P(t | s) = C(s, t) / C(s)
//! ```
//!
//! and decoding picks the most probable target for every syllable
//! independently, scoring the word by the product of the chosen
//! probabilities.

mod graphemes;
mod io;

use std::collections::BTreeMap;

use log::warn;
use thiserror::Error;

use crate::syllabifier::SyllabifiedWord;
use crate::text::nfc;

pub use graphemes::GraphemeMap;
pub use io::{load_model, read_corpus, save_model, MODEL_HEADER, MODEL_VERSION};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("training corpus has no usable pairs")]
    EmptyCorpus,
    #[error("pair {index}: {source_len} source syllables but {target_len} target syllables")]
    Alignment {
        index: usize,
        source_len: usize,
        target_len: usize,
    },
    #[error("invalid parallel pair: {0}")]
    InvalidPair(String),
    #[error("syllable {syllable:?}: no model entry and no fallback for {unit:?}")]
    UntransliterableSyllable { syllable: String, unit: String },
    #[error("model format version {found:?} is not supported (expected v{expected})")]
    Version { found: String, expected: u32 },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A source name and its transliteration, both split into aligned syllables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParallelPair {
    source: Vec<String>,
    target: Vec<String>,
}

impl ParallelPair {
    /// Lowercases the source side and NFC-normalizes the target side.
    /// Lengths may differ here; [`train`] decides what to do with that.
    pub fn new<S, T>(source: &[S], target: &[T]) -> Result<Self, ModelError>
    where
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let check = |side: &str, sylls: Vec<String>| -> Result<Vec<String>, ModelError> {
            if sylls.is_empty() {
                return Err(ModelError::InvalidPair(format!("{side} side is empty")));
            }
            if let Some(bad) = sylls
                .iter()
                .find(|s| s.is_empty() || s.chars().any(char::is_whitespace))
            {
                return Err(ModelError::InvalidPair(format!(
                    "{side} syllable {bad:?} is empty or contains whitespace"
                )));
            }
            Ok(sylls)
        };
        Ok(Self {
            source: check(
                "source",
                source.iter().map(|s| s.as_ref().to_lowercase()).collect(),
            )?,
            target: check("target", target.iter().map(|t| nfc(t.as_ref())).collect())?,
        })
    }

    /// Parses `mo hit<TAB>ਮੋ ਹਿਤ`.
    pub fn parse(line: &str) -> Result<Self, ModelError> {
        let (src, tgt) = line.split_once('\t').ok_or_else(|| {
            ModelError::InvalidPair("expected `source syllables<TAB>target syllables`".into())
        })?;
        let src: Vec<&str> = src.split_whitespace().collect();
        let tgt: Vec<&str> = tgt.split_whitespace().collect();
        Self::new(&src, &tgt)
    }

    pub fn source(&self) -> &[String] {
        &self.source
    }

    pub fn target(&self) -> &[String] {
        &self.target
    }

    pub fn is_aligned(&self) -> bool {
        self.source.len() == self.target.len()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TrainMode {
    /// A length mismatch aborts training.
    #[default]
    Strict,
    /// Mismatched pairs are skipped and counted.
    Lenient,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrainSummary {
    pub pairs_used: usize,
    /// Indices of pairs skipped in lenient mode.
    pub skipped: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Smoothing {
    /// Pure relative frequency.
    #[default]
    None,
    /// `(C(s,t) + 1) / (C(s) + |T|)` over the model's target vocabulary.
    AddOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeOptions {
    /// Score contributed by each syllable rendered through the grapheme map.
    pub fallback_floor: f64,
    pub smoothing: Smoothing,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        Self {
            fallback_floor: 1e-6,
            smoothing: Smoothing::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyllableChoice {
    pub source: String,
    pub target: String,
    pub probability: f64,
    pub used_fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransliterationCandidate {
    pub target_syllables: Vec<String>,
    pub score: f64,
    pub per_syllable: Vec<SyllableChoice>,
}

impl TransliterationCandidate {
    pub fn text(&self) -> String {
        self.target_syllables.concat()
    }

    pub fn fallback_count(&self) -> usize {
        self.per_syllable.iter().filter(|c| c.used_fallback).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransliterationModel {
    joint: BTreeMap<String, BTreeMap<String, u64>>,
    source_counts: BTreeMap<String, u64>,
    fallback: GraphemeMap,
}

impl Default for TransliterationModel {
    fn default() -> Self {
        Self::new(GraphemeMap::gurmukhi())
    }
}

impl TransliterationModel {
    pub fn new(fallback: GraphemeMap) -> Self {
        Self {
            joint: BTreeMap::new(),
            source_counts: BTreeMap::new(),
            fallback,
        }
    }

    pub fn version(&self) -> u32 {
        MODEL_VERSION
    }

    /// Adds `count` observations of `source` aligned with `target`.
    pub fn add_count(&mut self, source: &str, target: &str, count: u64) {
        *self
            .joint
            .entry(source.to_string())
            .or_default()
            .entry(target.to_string())
            .or_default() += count;
        *self.source_counts.entry(source.to_string()).or_default() += count;
    }

    /// Counts every aligned position of a pair. The pair must be aligned.
    pub fn observe(&mut self, pair: &ParallelPair) {
        debug_assert!(pair.is_aligned());
        for (s, t) in pair.source.iter().zip(&pair.target) {
            self.add_count(s, t, 1);
        }
    }

    pub fn joint_count(&self, source: &str, target: &str) -> u64 {
        self.joint
            .get(source)
            .and_then(|m| m.get(target))
            .copied()
            .unwrap_or(0)
    }

    pub fn source_count(&self, source: &str) -> u64 {
        self.source_counts.get(source).copied().unwrap_or(0)
    }

    pub fn sources(&self) -> impl Iterator<Item = &str> {
        self.source_counts.keys().map(String::as_str)
    }

    /// Observed targets of `source` with their joint counts, target order.
    pub fn targets_of(&self, source: &str) -> impl Iterator<Item = (&str, u64)> {
        self.joint
            .get(source)
            .into_iter()
            .flat_map(|m| m.iter().map(|(t, &c)| (t.as_str(), c)))
    }

    /// Every `(source, target, count)` triple in sorted order.
    pub fn joint_counts(&self) -> impl Iterator<Item = (&str, &str, u64)> {
        self.joint
            .iter()
            .flat_map(|(s, m)| m.iter().map(move |(t, &c)| (s.as_str(), t.as_str(), c)))
    }

    pub fn target_vocabulary_size(&self) -> usize {
        let mut seen: Vec<&str> = self
            .joint
            .values()
            .flat_map(|m| m.keys().map(String::as_str))
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn fallback(&self) -> &GraphemeMap {
        &self.fallback
    }

    pub fn set_fallback(&mut self, fallback: GraphemeMap) {
        self.fallback = fallback;
    }

    /// Relative frequency `C(s,t) / C(s)`; zero for unseen sources or pairs.
    pub fn prob(&self, source: &str, target: &str) -> f64 {
        match self.source_count(source) {
            0 => 0.0,
            n => self.joint_count(source, target) as f64 / n as f64,
        }
    }

    pub fn prob_with(&self, source: &str, target: &str, smoothing: Smoothing) -> f64 {
        match smoothing {
            Smoothing::None => self.prob(source, target),
            Smoothing::AddOne => {
                let vocab = self.target_vocabulary_size() as u64;
                let denom = self.source_count(source) + vocab;
                if denom == 0 {
                    return 0.0;
                }
                (self.joint_count(source, target) + 1) as f64 / denom as f64
            }
        }
    }

    /// Top `k` targets by probability; ties go to the smaller target string.
    pub fn candidates(&self, source: &str, k: usize) -> Vec<(String, f64)> {
        let mut ranked: Vec<(&str, u64)> = self.targets_of(source).collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        ranked
            .into_iter()
            .take(k)
            .map(|(t, _)| (t.to_string(), self.prob(source, t)))
            .collect()
    }

    pub fn decode(
        &self,
        word: &SyllabifiedWord,
        options: &DecodeOptions,
    ) -> Result<TransliterationCandidate, ModelError> {
        let mut per_syllable = Vec::with_capacity(word.syllables().len());
        for syllable in word.syllables() {
            let source = syllable.text();
            let choice = match self.candidates(source, 1).into_iter().next() {
                Some((target, p)) => {
                    let probability = match options.smoothing {
                        Smoothing::None => p,
                        s => self.prob_with(source, &target, s),
                    };
                    SyllableChoice {
                        source: source.to_string(),
                        target,
                        probability,
                        used_fallback: false,
                    }
                }
                None => {
                    let target = self.fallback.render(source).map_err(|unit| {
                        ModelError::UntransliterableSyllable {
                            syllable: source.to_string(),
                            unit,
                        }
                    })?;
                    SyllableChoice {
                        source: source.to_string(),
                        target,
                        probability: options.fallback_floor,
                        used_fallback: true,
                    }
                }
            };
            per_syllable.push(choice);
        }
        Ok(TransliterationCandidate {
            target_syllables: per_syllable.iter().map(|c| c.target.clone()).collect(),
            score: per_syllable.iter().map(|c| c.probability).product(),
            per_syllable,
        })
    }
}

/// Trains a model with the built-in Gurmukhi fallback table.
pub fn train(pairs: &[ParallelPair], mode: TrainMode) -> Result<TransliterationModel, ModelError> {
    train_with(pairs, mode, GraphemeMap::gurmukhi()).map(|(m, _)| m)
}

pub fn train_with(
    pairs: &[ParallelPair],
    mode: TrainMode,
    fallback: GraphemeMap,
) -> Result<(TransliterationModel, TrainSummary), ModelError> {
    let mut model = TransliterationModel::new(fallback);
    let mut summary = TrainSummary::default();
    for (index, pair) in pairs.iter().enumerate() {
        if !pair.is_aligned() {
            match mode {
                TrainMode::Strict => {
                    return Err(ModelError::Alignment {
                        index,
                        source_len: pair.source.len(),
                        target_len: pair.target.len(),
                    })
                }
                TrainMode::Lenient => {
                    warn!(
                        "skipping pair {index}: {} source vs {} target syllables",
                        pair.source.len(),
                        pair.target.len()
                    );
                    summary.skipped.push(index);
                    continue;
                }
            }
        }
        model.observe(pair);
        summary.pairs_used += 1;
    }
    if summary.pairs_used == 0 {
        return Err(ModelError::EmptyCorpus);
    }
    Ok((model, summary))
}

pub fn prob(model: &TransliterationModel, source: &str, target: &str) -> f64 {
    model.prob(source, target)
}

pub fn candidates(model: &TransliterationModel, source: &str, k: usize) -> Vec<(String, f64)> {
    model.candidates(source, k)
}

pub fn decode(
    model: &TransliterationModel,
    word: &SyllabifiedWord,
) -> Result<TransliterationCandidate, ModelError> {
    model.decode(word, &DecodeOptions::default())
}


#[cfg(test)]
mod tests {
    use super::fixtures::dileep_corpus;
    use super::*;
    use crate::syllabifier::SyllabificationRules;

    fn word(texts: &[&str]) -> SyllabifiedWord {
        SyllabifiedWord::from_syllables(texts.concat(), texts, &SyllabificationRules::default())
            .unwrap()
    }

    fn pair(s: &[&str], t: &[&str]) -> ParallelPair {
        ParallelPair::new(s, t).unwrap()
    }

    #[test]
    fn dileep_fixture_counts() {
        // independent tally of the fixture corpus
        let corpus = dileep_corpus();
        let di = corpus.iter().filter(|p| p.source()[0] == "di").count();
        let di_di = corpus
            .iter()
            .filter(|p| p.source()[0] == "di" && p.target()[0] == "दि")
            .count();
        let leep = corpus
            .iter()
            .filter(|p| p.source().get(1).is_some_and(|s| s == "leep"))
            .count();
        let leep_leep = corpus
            .iter()
            .filter(|p| p.source()[1] == "leep" && p.target()[1] == "लीप")
            .count();
        assert_eq!((di_di, di, leep_leep, leep), (99, 104, 11, 19));

        let m = train(&corpus, TrainMode::Strict).unwrap();
        assert_eq!(m.joint_count("di", "दि"), 99);
        assert_eq!(m.source_count("di"), 104);
        assert!((m.prob("di", "दि") - 0.9519231).abs() < 1e-7);
        assert!((m.prob("leep", "लीप") - 0.5789474).abs() < 1e-7);
    }

    #[test]
    fn dileep_decode_score() {
        let m = train(&dileep_corpus(), TrainMode::Strict).unwrap();
        let cand = decode(&m, &word(&["di", "leep"])).unwrap();
        assert_eq!(cand.text(), "दिलीप");
        assert!((cand.score - 0.551113404).abs() < 1e-6);
        assert_eq!(cand.fallback_count(), 0);
    }

    #[test]
    fn singleton_corpus() {
        let m = train(&[pair(&["mo", "hit"], &["ਮੋ", "ਹਿਤ"])], TrainMode::Strict).unwrap();
        assert_eq!(m.prob("mo", "ਮੋ"), 1.0);
        assert_eq!(m.prob("hit", "ਹਿਤ"), 1.0);
        let cand = decode(&m, &word(&["mo", "hit"])).unwrap();
        assert_eq!(cand.text(), "ਮੋਹਿਤ");
        assert_eq!(cand.score, 1.0);
    }

    #[test]
    fn toy_corpus_hand_counts() {
        // `ra` is ambiguous: ਰਾ twice, ਰ once
        let corpus = [
            pair(&["ra", "ju"], &["ਰਾ", "ਜੂ"]),
            pair(&["ra", "ma"], &["ਰਾ", "ਮਾ"]),
            pair(&["ra", "vi"], &["ਰ", "ਵੀ"]),
        ];
        let m = train(&corpus, TrainMode::Strict).unwrap();
        assert_eq!(m.prob("ra", "ਰਾ"), 2.0 / 3.0);
        assert_eq!(m.prob("ra", "ਰ"), 1.0 / 3.0);
        assert_eq!(m.prob("vi", "ਵੀ"), 1.0);
        assert_eq!(m.prob("ra", "ਵੀ"), 0.0);
        assert_eq!(m.prob("zz", "ਰ"), 0.0);
    }

    #[test]
    fn candidate_ranking() {
        let m = train(&dileep_corpus(), TrainMode::Strict).unwrap();
        let top = m.candidates("di", 1);
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].0, "दि");
        assert!((top[0].1 - 0.9519231).abs() < 1e-7);
        assert_eq!(m.candidates("di", 10).len(), 2);
        assert!(m.candidates("xyz", 3).is_empty());

        let tie = train(
            &[pair(&["ka"], &["ਕਾ"]), pair(&["ka"], &["ਕ"])],
            TrainMode::Strict,
        )
        .unwrap();
        // U+0A15 < U+0A15 U+0A3E
        assert_eq!(
            tie.candidates("ka", 2),
            [("ਕ".to_string(), 0.5), ("ਕਾ".to_string(), 0.5)]
        );
    }

    #[test]
    fn training_errors() {
        assert!(matches!(
            train(&[], TrainMode::Strict),
            Err(ModelError::EmptyCorpus)
        ));
        let bad = [
            pair(&["mo", "hit"], &["ਮੋ", "ਹਿਤ"]),
            pair(&["mo", "hit"], &["ਮੋਹਿਤ"]),
        ];
        assert!(matches!(
            train(&bad, TrainMode::Strict),
            Err(ModelError::Alignment {
                index: 1,
                source_len: 2,
                target_len: 1
            })
        ));
        let (m, summary) = train_with(&bad, TrainMode::Lenient, GraphemeMap::new()).unwrap();
        assert_eq!(summary.skipped, [1]);
        assert_eq!(summary.pairs_used, 1);
        assert_eq!(m.source_count("mo"), 1);
        assert!(matches!(
            train(&bad[1..], TrainMode::Lenient),
            Err(ModelError::EmptyCorpus)
        ));
    }

    #[test]
    fn pair_validation() {
        assert!(ParallelPair::new::<&str, &str>(&[], &["x"]).is_err());
        assert!(ParallelPair::new(&["a b"], &["x"]).is_err());
        let p = ParallelPair::parse("Mo Hit\tਮੋ ਹਿਤ").unwrap();
        assert_eq!(p.source(), ["mo", "hit"]);
        assert!(ParallelPair::parse("mo hit").is_err());
    }

    #[test]
    fn fallback_decoding() {
        let m = train(&[pair(&["mo"], &["ਮੋ"])], TrainMode::Strict).unwrap();
        let cand = decode(&m, &word(&["mo", "hit"])).unwrap();
        assert_eq!(cand.text(), "ਮੋਹਿਤ");
        assert_eq!(cand.score, 1e-6);
        assert!(cand.per_syllable[1].used_fallback);
        assert!(!cand.per_syllable[0].used_fallback);

        let opts = DecodeOptions {
            fallback_floor: 0.25,
            ..DecodeOptions::default()
        };
        assert_eq!(m.decode(&word(&["hit"]), &opts).unwrap().score, 0.25);

        let (bare, _) = train_with(
            &[pair(&["mo"], &["ਮੋ"])],
            TrainMode::Strict,
            [("h", "ਹ")].into_iter().collect(),
        )
        .unwrap();
        match decode(&bare, &word(&["hit"])) {
            Err(ModelError::UntransliterableSyllable { syllable, unit }) => {
                assert_eq!((syllable.as_str(), unit.as_str()), ("hit", "i"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn add_one_smoothing() {
        let m = train(&dileep_corpus(), TrainMode::Strict).unwrap();
        // target vocabulary: दि दी लीप लेप नेश पक
        assert_eq!(m.target_vocabulary_size(), 6);
        assert_eq!(m.prob_with("di", "दि", Smoothing::AddOne), 100.0 / 110.0);
        let total: f64 = ["दि", "दी", "लीप", "लेप", "नेश", "पक"]
            .iter()
            .map(|t| m.prob_with("leep", t, Smoothing::AddOne))
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
        let opts = DecodeOptions {
            smoothing: Smoothing::AddOne,
            ..DecodeOptions::default()
        };
        let cand = m.decode(&word(&["di", "leep"]), &opts).unwrap();
        assert_eq!(cand.text(), "दिलीप");
        assert_eq!(cand.score, (100.0 / 110.0) * (12.0 / 25.0));
    }

    #[test]
    fn target_is_nfc_normalized() {
        let p = pair(&["sha"], &["\u{0A36}"]);
        assert_eq!(p.target()[0], "\u{0A38}\u{0A3C}");
    }
}
