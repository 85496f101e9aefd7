//! Letter classes and multi-letter units that drive syllable segmentation.
//!
//! Rules can be built in code or read from a small `key = value` text file:
//!
//! ```text
//! # default rule set
//! vowels = a, e, i, o, u
//! consonant_digraphs = sh, gh, ty, ny, ch, th, ph, kh, bh, dh
//! whole_units = tion, sion, ment
//! diphthongs =
//! final_y_is_nucleus = true
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RulesError {
    #[error("cannot read rules file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("rules line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid rule set: {0}")]
    Invalid(String),
}

/// Configurable letter classes for the syllabifier.
///
/// All entries are lowercase ASCII letters. Consonants are every letter
/// of `a..=z` that is not listed in `vowels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyllabificationRules {
    vowels: BTreeSet<char>,
    consonant_digraphs: BTreeSet<String>,
    whole_units: BTreeSet<String>,
    diphthongs: BTreeSet<String>,
    final_y_is_nucleus: bool,
}

impl Default for SyllabificationRules {
    fn default() -> Self {
        Self::new(
            ['a', 'e', 'i', 'o', 'u'],
            ["sh", "gh", "ty", "ny", "ch", "th", "ph", "kh", "bh", "dh"],
            ["tion", "sion", "ment"],
            std::iter::empty::<&str>(),
            true,
        )
        .expect("built-in rule set is valid")
    }
}

impl SyllabificationRules {
    pub fn new<V, D, W, P, S1, S2, S3>(
        vowels: V,
        consonant_digraphs: D,
        whole_units: W,
        diphthongs: P,
        final_y_is_nucleus: bool,
    ) -> Result<Self, RulesError>
    where
        V: IntoIterator<Item = char>,
        D: IntoIterator<Item = S1>,
        W: IntoIterator<Item = S2>,
        P: IntoIterator<Item = S3>,
        S1: Into<String>,
        S2: Into<String>,
        S3: Into<String>,
    {
        let rules = Self {
            vowels: vowels.into_iter().collect(),
            consonant_digraphs: consonant_digraphs.into_iter().map(Into::into).collect(),
            whole_units: whole_units.into_iter().map(Into::into).collect(),
            diphthongs: diphthongs.into_iter().map(Into::into).collect(),
            final_y_is_nucleus,
        };
        rules.validate()?;
        Ok(rules)
    }

    /// Reads a rules file. Keys missing from the file keep their default value.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, RulesError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| RulesError::Io {
            path: path.display().to_string(),
            source,
        })?;
        text.parse()
    }

    fn validate(&self) -> Result<(), RulesError> {
        let lower = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_lowercase());
        if self.vowels.is_empty() {
            return Err(RulesError::Invalid("vowel set is empty".into()));
        }
        if let Some(v) = self.vowels.iter().find(|c| !c.is_ascii_lowercase()) {
            return Err(RulesError::Invalid(format!(
                "vowel {v:?} is not a lowercase letter"
            )));
        }
        for d in &self.consonant_digraphs {
            if !lower(d) || d.len() != 2 {
                return Err(RulesError::Invalid(format!(
                    "consonant digraph {d:?} must be exactly two lowercase letters"
                )));
            }
        }
        for w in &self.whole_units {
            if !lower(w) || w.len() < 3 {
                return Err(RulesError::Invalid(format!(
                    "whole unit {w:?} must be at least three lowercase letters"
                )));
            }
        }
        for a in &self.whole_units {
            for b in &self.whole_units {
                if a != b && b.starts_with(a.as_str()) {
                    return Err(RulesError::Invalid(format!(
                        "whole unit {a:?} is a prefix of {b:?}"
                    )));
                }
            }
        }
        for d in &self.diphthongs {
            if !lower(d) || d.len() != 2 || !d.chars().all(|c| self.vowels.contains(&c)) {
                return Err(RulesError::Invalid(format!(
                    "diphthong {d:?} must be a pair of configured vowels"
                )));
            }
        }
        Ok(())
    }

    pub fn is_vowel(&self, c: char) -> bool {
        self.vowels.contains(&c)
    }

    pub fn is_consonant(&self, c: char) -> bool {
        c.is_ascii_lowercase() && !self.is_vowel(c)
    }

    pub fn vowels(&self) -> impl Iterator<Item = char> + '_ {
        self.vowels.iter().copied()
    }

    pub fn consonant_digraphs(&self) -> impl Iterator<Item = &str> {
        self.consonant_digraphs.iter().map(String::as_str)
    }

    pub fn whole_units(&self) -> impl Iterator<Item = &str> {
        self.whole_units.iter().map(String::as_str)
    }

    pub fn diphthongs(&self) -> impl Iterator<Item = &str> {
        self.diphthongs.iter().map(String::as_str)
    }

    pub fn final_y_is_nucleus(&self) -> bool {
        self.final_y_is_nucleus
    }

    pub fn is_digraph(&self, unit: &str) -> bool {
        self.consonant_digraphs.contains(unit)
    }

    pub fn is_whole_unit(&self, unit: &str) -> bool {
        self.whole_units.contains(unit)
    }

    pub fn is_diphthong(&self, first: &str, second: &str) -> bool {
        first.len() == 1
            && second.len() == 1
            && self.diphthongs.contains(&format!("{first}{second}"))
    }

    pub fn with_diphthongs<I, S>(mut self, diphthongs: I) -> Result<Self, RulesError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.diphthongs = diphthongs.into_iter().map(Into::into).collect();
        self.validate()?;
        Ok(self)
    }

    pub fn with_final_y_is_nucleus(mut self, on: bool) -> Self {
        self.final_y_is_nucleus = on;
        self
    }
}

fn split_set(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

impl std::str::FromStr for SyllabificationRules {
    type Err = RulesError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut rules = SyllabificationRules::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(RulesError::Syntax {
                    line: line_no,
                    message: format!("expected `key = value`, found {line:?}"),
                });
            };
            let value = value.trim();
            match key.trim() {
                "vowels" => {
                    let mut set = BTreeSet::new();
                    for v in split_set(value) {
                        let mut chars = v.chars();
                        match (chars.next(), chars.next()) {
                            (Some(c), None) => {
                                set.insert(c);
                            }
                            _ => {
                                return Err(RulesError::Syntax {
                                    line: line_no,
                                    message: format!("vowel {v:?} is not a single letter"),
                                })
                            }
                        }
                    }
                    rules.vowels = set;
                }
                "consonant_digraphs" => {
                    rules.consonant_digraphs = split_set(value).into_iter().collect()
                }
                "whole_units" => rules.whole_units = split_set(value).into_iter().collect(),
                "diphthongs" => rules.diphthongs = split_set(value).into_iter().collect(),
                "final_y_is_nucleus" => {
                    rules.final_y_is_nucleus = match value {
                        "true" | "yes" | "1" => true,
                        "false" | "no" | "0" => false,
                        other => {
                            return Err(RulesError::Syntax {
                                line: line_no,
                                message: format!("expected a boolean, found {other:?}"),
                            })
                        }
                    }
                }
                other => {
                    return Err(RulesError::Syntax {
                        line: line_no,
                        message: format!("unknown key {other:?}"),
                    })
                }
            }
        }
        rules.validate()?;
        Ok(rules)
    }
}

impl fmt::Display for SyllabificationRules {
    /// Writes the rule set in the same `key = value` form `from_str` reads.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(", ");
        writeln!(
            f,
            "vowels = {}",
            join(&mut self.vowels.iter().map(|c| c.to_string()))
        )?;
        writeln!(
            f,
            "consonant_digraphs = {}",
            join(&mut self.consonant_digraphs.iter().cloned())
        )?;
        writeln!(
            f,
            "whole_units = {}",
            join(&mut self.whole_units.iter().cloned())
        )?;
        writeln!(
            f,
            "diphthongs = {}",
            join(&mut self.diphthongs.iter().cloned())
        )?;
        writeln!(f, "final_y_is_nucleus = {}", self.final_y_is_nucleus)
    }
}
