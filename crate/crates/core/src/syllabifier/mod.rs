//! Rule-based syllable extraction for Latin-script names.
//!
//! A word is first cut into grapheme units (whole units such as `tion`,
//! geminate consonants, consonant digraphs, single letters), the units
//! that carry a vowel nucleus are marked, and syllable boundaries are then
//! placed between nuclei:
//!
//! * a single intervocalic consonant unit starts the next syllable,
//! * a longer run gives its last unit to the next syllable and the rest to
//!   the previous one,
//! * leading consonants form the first onset, trailing ones the last coda,
//! * whole units are always syllables of their own.
//!
//! ```
//! use netranslit::syllabifier::{syllabify, SyllabificationRules};
//!
//! let rules = SyllabificationRules::default();
//! let word = syllabify("Haryana", &rules).unwrap();
//! assert_eq!(word.texts(), ["har", "ya", "na"]);
//! ```

mod rules;

use std::fmt;

use thiserror::Error;

pub use rules::{RulesError, SyllabificationRules};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyllabifyError {
    #[error("word contains no letters")]
    EmptyWord,
    #[error("unsupported script: {0:?} is not an ASCII letter")]
    UnsupportedScript(char),
}

/// One syllable and its vowel/consonant structure, e.g. `sil` / `CVC`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syllable {
    text: String,
    pattern: String,
}

impl Syllable {
    /// Builds a syllable from its text, deriving the pattern standalone.
    pub fn from_text(text: &str, rules: &SyllabificationRules) -> Result<Self, SyllabifyError> {
        let clean = clean_word(text)?;
        let pattern = syllable_pattern(&clean, rules)?;
        Ok(Self {
            text: clean,
            pattern,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn pattern(&self) -> &str {
        &self.pattern
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SyllabifiedWord {
    original: String,
    syllables: Vec<Syllable>,
}

impl SyllabifiedWord {
    /// Wraps an already-segmented word, e.g. one read from a training corpus.
    pub fn from_syllables<S: AsRef<str>>(
        original: impl Into<String>,
        texts: &[S],
        rules: &SyllabificationRules,
    ) -> Result<Self, SyllabifyError> {
        let syllables = texts
            .iter()
            .map(|t| Syllable::from_text(t.as_ref(), rules))
            .collect::<Result<Vec<_>, _>>()?;
        if syllables.is_empty() {
            return Err(SyllabifyError::EmptyWord);
        }
        Ok(Self {
            original: original.into(),
            syllables,
        })
    }

    pub fn original(&self) -> &str {
        &self.original
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn texts(&self) -> Vec<&str> {
        self.syllables.iter().map(Syllable::text).collect()
    }

    pub fn patterns(&self) -> Vec<&str> {
        self.syllables.iter().map(Syllable::pattern).collect()
    }

    /// Syllables separated by single spaces, the training-corpus form.
    pub fn to_spaced(&self) -> String {
        self.texts().join(" ")
    }
}

impl fmt::Display for SyllabifiedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.texts().join("/"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum UnitClass {
    Consonant,
    Vowel,
    /// Word-final `y` (or `ty`, `ny`...) after a consonant.
    FinalY,
    Whole,
}

impl UnitClass {
    fn is_nucleus(self) -> bool {
        matches!(self, UnitClass::Vowel | UnitClass::FinalY)
    }
}

/// Lowercases, drops non-letters, and rejects letters outside ASCII.
fn clean_word(word: &str) -> Result<String, SyllabifyError> {
    let mut out = String::with_capacity(word.len());
    for c in word.chars() {
        if c.is_ascii_alphabetic() {
            out.push(c.to_ascii_lowercase());
        } else if c.is_alphabetic() {
            return Err(SyllabifyError::UnsupportedScript(c));
        }
    }
    if out.is_empty() {
        return Err(SyllabifyError::EmptyWord);
    }
    Ok(out)
}

/// Left-to-right longest-match tokenization of a lowercase word.
///
/// At each position the first of these that matches wins: a whole unit,
/// a geminate consonant pair, a consonant digraph, a single letter. A
/// multi-letter candidate is passed over when a whole unit starts inside
/// it, so `mention` segments as `m e n tion`.
pub fn segment_units(
    word: &str,
    rules: &SyllabificationRules,
) -> Result<Vec<String>, SyllabifyError> {
    if word.is_empty() {
        return Err(SyllabifyError::EmptyWord);
    }
    if let Some(c) = word.chars().find(|c| !c.is_ascii_lowercase()) {
        return Err(SyllabifyError::UnsupportedScript(c));
    }
    let bytes = word.as_bytes();
    let whole_at = |pos: usize| rules.whole_units().find(|w| word[pos..].starts_with(*w));
    // a multi-letter unit may not swallow the start of a later whole unit
    let clear = |pos: usize, len: usize| (pos + 1..pos + len).all(|p| whole_at(p).is_none());
    let mut units = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let rest = &word[i..];
        let len = match whole_at(i) {
            Some(w) if clear(i, w.len()) => w.len(),
            _ if rest.len() >= 2
                && bytes[i] == bytes[i + 1]
                && rules.is_consonant(bytes[i] as char)
                && clear(i, 2) =>
            {
                2
            }
            _ if rest.len() >= 2 && rules.is_digraph(&rest[..2]) && clear(i, 2) => 2,
            _ => 1,
        };
        units.push(rest[..len].to_string());
        i += len;
    }
    Ok(units)
}

fn classify(units: &[String], rules: &SyllabificationRules) -> Vec<UnitClass> {
    let n = units.len();
    units
        .iter()
        .enumerate()
        .map(|(idx, unit)| {
            if rules.is_whole_unit(unit) {
                return UnitClass::Whole;
            }
            if unit.len() == 1 && rules.is_vowel(unit.as_bytes()[0] as char) {
                return UnitClass::Vowel;
            }
            if idx + 1 == n && rules.final_y_is_nucleus() && unit.ends_with('y') {
                let before = if unit.len() >= 2 {
                    unit.as_bytes().get(unit.len() - 2).map(|&b| b as char)
                } else if idx > 0 {
                    units[idx - 1].chars().last()
                } else {
                    None
                };
                if before.is_some_and(|c| rules.is_consonant(c)) {
                    return UnitClass::FinalY;
                }
            }
            UnitClass::Consonant
        })
        .collect()
}

/// Marks the units that carry a syllable nucleus.
///
/// Vowels, a word-final `y`-unit after a consonant (when enabled), and
/// whole units are nuclei. Both halves of a configured diphthong are marked;
/// they still form a single syllable.
pub fn mark_nuclei(units: &[String], rules: &SyllabificationRules) -> Vec<bool> {
    classify(units, rules)
        .into_iter()
        .map(|c| c != UnitClass::Consonant)
        .collect()
}

/// Nucleus spans `[start, end)` within `range`, merging configured diphthongs.
fn nucleus_spans(
    units: &[String],
    classes: &[UnitClass],
    range: std::ops::Range<usize>,
    rules: &SyllabificationRules,
) -> Vec<(usize, usize)> {
    let mut spans: Vec<(usize, usize)> = Vec::new();
    for idx in range {
        if !classes[idx].is_nucleus() {
            continue;
        }
        if let Some(last) = spans.last_mut() {
            let joinable = last.1 == idx
                && last.1 - last.0 == 1
                && classes[last.0] == UnitClass::Vowel
                && classes[idx] == UnitClass::Vowel
                && rules.is_diphthong(&units[last.0], &units[idx]);
            if joinable {
                last.1 = idx + 1;
                continue;
            }
        }
        spans.push((idx, idx + 1));
    }
    spans
}

#[derive(Debug, Clone, Copy)]
struct Span {
    start: usize,
    end: usize,
    whole: bool,
}

fn place_boundaries(
    units: &[String],
    classes: &[UnitClass],
    rules: &SyllabificationRules,
) -> Vec<Span> {
    let mut out: Vec<Span> = Vec::new();
    let mut region_start = 0;
    for idx in 0..=units.len() {
        let at_end = idx == units.len();
        if at_end || classes[idx] == UnitClass::Whole {
            syllabify_region(units, classes, region_start..idx, rules, &mut out);
            if !at_end {
                out.push(Span {
                    start: idx,
                    end: idx + 1,
                    whole: true,
                });
            }
            region_start = idx + 1;
        }
    }
    out
}

fn syllabify_region(
    units: &[String],
    classes: &[UnitClass],
    range: std::ops::Range<usize>,
    rules: &SyllabificationRules,
    out: &mut Vec<Span>,
) {
    if range.is_empty() {
        return;
    }
    let nuclei = nucleus_spans(units, classes, range.clone(), rules);
    if nuclei.is_empty() {
        // no nucleus: consonants join the previous ordinary syllable
        match out.last_mut() {
            Some(prev) if !prev.whole => prev.end = range.end,
            _ => out.push(Span {
                start: range.start,
                end: range.end,
                whole: false,
            }),
        }
        return;
    }
    let mut start = range.start;
    for pair in nuclei.windows(2) {
        let (prev_end, next_start) = (pair[0].1, pair[1].0);
        let cut = if next_start == prev_end {
            next_start
        } else {
            next_start - 1
        };
        out.push(Span {
            start,
            end: cut,
            whole: false,
        });
        start = cut;
    }
    out.push(Span {
        start,
        end: range.end,
        whole: false,
    });
}

fn unit_pattern(unit: &str, class: UnitClass, rules: &SyllabificationRules, out: &mut String) {
    match class {
        UnitClass::Whole => out.extend(
            unit.chars()
                .map(|c| if rules.is_vowel(c) { 'V' } else { 'C' }),
        ),
        c if c.is_nucleus() => out.push('V'),
        _ => out.push('C'),
    }
}

/// Segments `word` into syllables.
///
/// Input is case-insensitive; characters that are not letters (hyphens,
/// apostrophes, digits) are dropped. The original string is kept verbatim.
pub fn syllabify(
    word: &str,
    rules: &SyllabificationRules,
) -> Result<SyllabifiedWord, SyllabifyError> {
    let clean = clean_word(word)?;
    let units = segment_units(&clean, rules)?;
    let classes = classify(&units, rules);
    let syllables = place_boundaries(&units, &classes, rules)
        .into_iter()
        .map(|span| {
            let mut text = String::new();
            let mut pattern = String::new();
            for idx in span.start..span.end {
                text.push_str(&units[idx]);
                unit_pattern(&units[idx], classes[idx], rules, &mut pattern);
            }
            Syllable { text, pattern }
        })
        .collect();
    Ok(SyllabifiedWord {
        original: word.to_string(),
        syllables,
    })
}

/// V/C pattern of a syllable read on its own: one symbol per unit, with
/// digraphs and geminates counting as a single `C` and whole units spelled
/// out letter by letter.
pub fn syllable_pattern(
    syllable_text: &str,
    rules: &SyllabificationRules,
) -> Result<String, SyllabifyError> {
    let units = segment_units(syllable_text, rules)?;
    let classes = classify(&units, rules);
    let mut pattern = String::new();
    for (unit, class) in units.iter().zip(classes) {
        unit_pattern(unit, class, rules, &mut pattern);
    }
    Ok(pattern)
}
