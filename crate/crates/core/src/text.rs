use unicode_normalization::UnicodeNormalization;

/// Canonical composition, applied to every target-script string we ingest.
pub fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Lowercase with internal whitespace collapsed to single spaces.
pub fn normalize_key(s: &str) -> String {
    s.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}
