//! Model and corpus files.
//!
//! Model file layout (UTF-8, sorted, fields separated by tabs):
//!
//! ```text
//! netranslit-model v1
//! J <source> <target> <count>
//! F <unit> <grapheme>
//! ```

use std::fs;
use std::path::Path;

use super::{GraphemeMap, ModelError, ParallelPair, TransliterationModel};

pub const MODEL_VERSION: u32 = 1;
pub const MODEL_HEADER: &str = "netranslit-model v1";
const HEADER_PREFIX: &str = "netranslit-model v";

fn io_err(path: &Path, source: std::io::Error) -> ModelError {
    ModelError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn format_err(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Format {
        line,
        message: message.into(),
    }
}

impl TransliterationModel {
    pub fn to_text(&self) -> String {
        let mut out = String::from(MODEL_HEADER);
        out.push('\n');
        for (s, t, c) in self.joint_counts() {
            out.push_str(&format!("J\t{s}\t{t}\t{c}\n"));
        }
        for (unit, grapheme) in self.fallback.iter() {
            out.push_str(&format!("F\t{unit}\t{grapheme}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ModelError> {
        let mut lines = text.lines().enumerate();
        let header = match lines.next() {
            Some((_, h)) => h.strip_suffix('\r').unwrap_or(h),
            None => return Err(format_err(1, "empty model file")),
        };
        if header != MODEL_HEADER {
            return Err(match header.strip_prefix(HEADER_PREFIX) {
                Some(found) => ModelError::Version {
                    found: format!("v{found}"),
                    expected: MODEL_VERSION,
                },
                None => format_err(1, format!("expected header {MODEL_HEADER:?}")),
            });
        }
        let mut model = TransliterationModel::new(GraphemeMap::new());
        for (idx, raw) in lines {
            let line_no = idx + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match fields.as_slice() {
                ["J", src, tgt, count] => {
                    if src.is_empty() || tgt.is_empty() {
                        return Err(format_err(line_no, "empty syllable in joint count"));
                    }
                    let count: u64 = count
                        .parse()
                        .map_err(|_| format_err(line_no, format!("bad count {count:?}")))?;
                    if model.joint_count(src, tgt) > 0 {
                        return Err(format_err(
                            line_no,
                            format!("duplicate pair ({src}, {tgt})"),
                        ));
                    }
                    model.add_count(src, tgt, count);
                }
                ["F", unit, grapheme] => {
                    if unit.is_empty() {
                        return Err(format_err(line_no, "empty fallback unit"));
                    }
                    if model.fallback.get(unit).is_some() {
                        return Err(format_err(
                            line_no,
                            format!("duplicate fallback unit {unit:?}"),
                        ));
                    }
                    model.fallback.insert(unit, grapheme);
                }
                _ => return Err(format_err(line_no, format!("unrecognized record {line:?}"))),
            }
        }
        Ok(model)
    }
}

pub fn save_model(model: &TransliterationModel, path: impl AsRef<Path>) -> Result<(), ModelError> {
    let path = path.as_ref();
    fs::write(path, model.to_text()).map_err(|e| io_err(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TransliterationModel, ModelError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    TransliterationModel::from_text(&text)
}

/// Reads a syllabified training corpus (`mo hit<TAB>ਮੋ ਹਿਤ` per line,
/// `#` comments and blank lines ignored).
pub fn read_corpus(text: &str) -> Result<Vec<ParallelPair>, ModelError> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let pair = ParallelPair::parse(line).map_err(|e| format_err(idx + 1, e.to_string()))?;
        pairs.push(pair);
    }
    Ok(pairs)
}

impl GraphemeMap {
    /// Reads a `unit<TAB>grapheme` table.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut map = GraphemeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (unit, grapheme) = line
                .split_once('\t')
                .ok_or_else(|| format_err(idx + 1, "expected `unit<TAB>grapheme`"))?;
            if unit.is_empty() {
                return Err(format_err(idx + 1, "empty unit"));
            }
            map.insert(unit, grapheme);
        }
        Ok(map)
    }
}
