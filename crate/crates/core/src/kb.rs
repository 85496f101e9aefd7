//! Bilingual knowledge base for LOCATION and ORGANIZATION entities.
//!
//! The file is UTF-8, one `source<TAB>target` pair per line, with `#`
//! comments. The first comment line is kept as the version line. Entries
//! hold whole phrases in target word order; lookup never composes a
//! translation from parts.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use thiserror::Error;

use crate::text::{nfc, normalize_key};

#[derive(Debug, Error)]
pub enum KbError {
    #[error("cannot read knowledge base {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("knowledge base line {line}: {message}")]
    Format { line: usize, message: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    entries: BTreeMap<String, String>,
    path: Option<PathBuf>,
    version: Option<String>,
    duplicate_warnings: usize,
}

/// One parsed data line.
enum KbLine {
    Blank,
    Comment(String),
    Entry { key: String, target: String },
}

fn parse_line(raw: &str, line: usize) -> Result<KbLine, KbError> {
    let raw = raw.strip_suffix('\r').unwrap_or(raw);
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Ok(KbLine::Blank);
    }
    if let Some(comment) = trimmed.strip_prefix('#') {
        return Ok(KbLine::Comment(comment.trim().to_string()));
    }
    let Some((source, target)) = raw.split_once('\t') else {
        return Err(KbError::Format {
            line,
            message: "expected `source<TAB>target`".into(),
        });
    };
    let key = normalize_key(source);
    let target = nfc(target.trim());
    if key.is_empty() {
        return Err(KbError::Format {
            line,
            message: "empty source phrase".into(),
        });
    }
    if target.is_empty() {
        return Err(KbError::Format {
            line,
            message: format!("empty target for {key:?}"),
        });
    }
    Ok(KbLine::Entry { key, target })
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses knowledge-base text. Duplicate keys keep the last entry.
    pub fn parse(text: &str) -> Result<Self, KbError> {
        let mut kb = KnowledgeBase::new();
        for (idx, raw) in text.lines().enumerate() {
            match parse_line(raw, idx + 1)? {
                KbLine::Blank => {}
                KbLine::Comment(c) => {
                    if kb.version.is_none() {
                        kb.version = Some(c);
                    }
                }
                KbLine::Entry { key, target } => {
                    if kb.entries.insert(key.clone(), target).is_some() {
                        warn!(
                            "knowledge base line {}: duplicate entry {key:?}, keeping the last",
                            idx + 1
                        );
                        kb.duplicate_warnings += 1;
                    }
                }
            }
        }
        Ok(kb)
    }

    pub fn insert(&mut self, source: &str, target: &str) -> Option<String> {
        let key = normalize_key(source);
        let target = nfc(target.trim());
        assert!(
            !key.is_empty() && !target.is_empty(),
            "empty knowledge base entry"
        );
        self.entries.insert(key, target)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn version(&self) -> Option<&str> {
        self.version.as_deref()
    }

    /// Number of duplicate keys seen while loading.
    pub fn duplicate_warnings(&self) -> usize {
        self.duplicate_warnings
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Whole-phrase lookup, case- and whitespace-insensitive.
    pub fn lookup(&self, phrase: &str) -> Option<&str> {
        self.entries.get(&normalize_key(phrase)).map(String::as_str)
    }
}

pub fn load_kb(path: impl AsRef<Path>) -> Result<KnowledgeBase, KbError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| KbError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut kb = KnowledgeBase::parse(&text)?;
    kb.path = Some(path.to_path_buf());
    Ok(kb)
}

/// Translation of a preprocessed entity, or `None` to fall back to
/// transliteration.
pub fn translate<'kb>(entity_text: &str, kb: &'kb KnowledgeBase) -> Option<&'kb str> {
    kb.lookup(entity_text)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicateKey {
    pub key: String,
    pub first_line: usize,
    pub line: usize,
}

/// Result of checking a knowledge-base file without stopping at the first
/// problem.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KbReport {
    pub entries: usize,
    pub duplicates: Vec<DuplicateKey>,
    pub errors: Vec<(usize, String)>,
}

impl KbReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

pub fn validate_kb_text(text: &str) -> KbReport {
    let mut report = KbReport::default();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        match parse_line(raw, line) {
            Ok(KbLine::Entry { key, .. }) => {
                if let Some(&first_line) = seen.get(&key) {
                    report.duplicates.push(DuplicateKey {
                        key,
                        first_line,
                        line,
                    });
                } else {
                    seen.insert(key, line);
                }
            }
            Ok(_) => {}
            Err(KbError::Format { line, message }) => report.errors.push((line, message)),
            Err(e) => report.errors.push((line, e.to_string())),
        }
    }
    report.entries = seen.len();
    report
}

pub fn validate_kb(path: impl AsRef<Path>) -> Result<KbReport, KbError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| KbError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(validate_kb_text(&text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn seed() -> KnowledgeBase {
        KnowledgeBase::parse(
            "# seed v1\n\
             delhi\tਦਿੱਲੀ\n\
             Indian Institute of Technology\tਭਾਰਤੀ ਤਕਨੀਕੀ ਸੰਸਥਾਨ\n\
             \n\
             sign of technology\tਤਕਨੀਕੀ ਚਿਹਨ\n",
        )
        .unwrap()
    }

    #[test]
    fn load_from_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "delhi\tਦਿੱਲੀ").unwrap();
        let kb = load_kb(f.path()).unwrap();
        assert_eq!(kb.len(), 1);
        assert_eq!(kb.lookup("delhi"), Some("ਦਿੱਲੀ"));
        assert_eq!(kb.path(), Some(f.path()));
    }

    #[test]
    fn empty_file() {
        let f = tempfile::NamedTempFile::new().unwrap();
        let kb = load_kb(f.path()).unwrap();
        assert!(kb.is_empty());
        assert_eq!(kb.version(), None);
    }

    #[test]
    fn duplicates_last_wins() {
        let kb = KnowledgeBase::parse("delhi\tA\nDelhi \tB\n").unwrap();
        assert_eq!(kb.len(), 1);
        assert_eq!(kb.duplicate_warnings(), 1);
        assert_eq!(kb.lookup("delhi"), Some("B"));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            load_kb("/nonexistent/kb.tsv"),
            Err(KbError::Io { .. })
        ));
        assert!(matches!(
            KnowledgeBase::parse("# c\ndelhi\tx\ndelhi only\n"),
            Err(KbError::Format { line: 3, .. })
        ));
        assert!(matches!(
            KnowledgeBase::parse("delhi\t  \n"),
            Err(KbError::Format { line: 1, .. })
        ));
    }

    #[test]
    fn translate_hits_and_misses() {
        let kb = seed();
        assert_eq!(kb.version(), Some("seed v1"));
        assert_eq!(
            translate("Indian Institute of Technology", &kb),
            Some("ਭਾਰਤੀ ਤਕਨੀਕੀ ਸੰਸਥਾਨ")
        );
        assert_eq!(translate("DELHI", &kb), Some("ਦਿੱਲੀ"));
        assert_eq!(
            translate("  indian   institute of  technology", &kb),
            Some("ਭਾਰਤੀ ਤਕਨੀਕੀ ਸੰਸਥਾਨ")
        );
        assert_eq!(translate("Atlantis", &kb), None);
        // whole phrase only
        assert_eq!(translate("Delhi University", &kb), None);
        assert_eq!(translate("Sign Of Technology", &kb), Some("ਤਕਨੀਕੀ ਚਿਹਨ"));
    }

    #[test]
    fn validation_collects_everything() {
        let report = validate_kb_text("a\tx\nbad line\nA\ty\nb\tz\n\tq\n");
        assert_eq!(report.entries, 2);
        assert_eq!(
            report.duplicates,
            [DuplicateKey {
                key: "a".into(),
                first_line: 1,
                line: 3
            }]
        );
        assert_eq!(
            report.errors.iter().map(|e| e.0).collect::<Vec<_>>(),
            [2, 5]
        );
        assert!(!report.is_valid());
    }
}
