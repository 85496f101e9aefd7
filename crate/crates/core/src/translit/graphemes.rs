use std::collections::BTreeMap;

use crate::text::nfc;

/// Letter and digraph to target-grapheme table used for syllables that
/// never occurred in training.
///
/// Keys are lowercase Latin units. A key prefixed with `^` is the form used
/// at the start of a syllable (independent vowels); unprefixed vowel keys
/// are the dependent signs written after a consonant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphemeMap {
    entries: BTreeMap<String, String>,
    longest: usize,
}

const GURMUKHI: &[(&str, &str)] = &[
    ("b", "ਬ"),
    ("bh", "ਭ"),
    ("c", "ਕ"),
    ("ch", "ਚ"),
    ("chh", "ਛ"),
    ("d", "ਦ"),
    ("dh", "ਧ"),
    ("f", "ਫ਼"),
    ("g", "ਗ"),
    ("gh", "ਘ"),
    ("h", "ਹ"),
    ("j", "ਜ"),
    ("jh", "ਝ"),
    ("k", "ਕ"),
    ("kh", "ਖ"),
    ("l", "ਲ"),
    ("m", "ਮ"),
    ("n", "ਨ"),
    ("p", "ਪ"),
    ("ph", "ਫ"),
    ("q", "ਕ"),
    ("r", "ਰ"),
    ("s", "ਸ"),
    ("sh", "ਸ਼"),
    ("t", "ਤ"),
    ("th", "ਥ"),
    ("v", "ਵ"),
    ("w", "ਵ"),
    ("x", "ਕਸ"),
    ("y", "ਯ"),
    ("z", "ਜ਼"),
    ("a", ""),
    ("aa", "ਾ"),
    ("i", "ਿ"),
    ("ee", "ੀ"),
    ("u", "ੁ"),
    ("oo", "ੂ"),
    ("e", "ੇ"),
    ("ai", "ੈ"),
    ("o", "ੋ"),
    ("au", "ੌ"),
    ("^a", "ਅ"),
    ("^aa", "ਆ"),
    ("^i", "ਇ"),
    ("^ee", "ਈ"),
    ("^u", "ਉ"),
    ("^oo", "ਊ"),
    ("^e", "ਏ"),
    ("^ai", "ਐ"),
    ("^o", "ਓ"),
    ("^au", "ਔ"),
];

impl GraphemeMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Built-in English to Gurmukhi table.
    pub fn gurmukhi() -> Self {
        GURMUKHI.iter().copied().collect()
    }

    pub fn insert(&mut self, unit: &str, grapheme: &str) {
        let key_len = unit.trim_start_matches('^').len();
        self.longest = self.longest.max(key_len);
        self.entries.insert(unit.to_string(), nfc(grapheme));
    }

    pub fn get(&self, unit: &str) -> Option<&str> {
        self.entries.get(unit).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Greedy longest-match rendering of one syllable.
    ///
    /// On failure returns the first character no key covers.
    pub fn render(&self, syllable: &str) -> Result<String, String> {
        let mut out = String::new();
        let mut pos = 0;
        while pos < syllable.len() {
            let rest = &syllable[pos..];
            let mut matched = None;
            let max = self.longest.min(rest.len());
            for len in (1..=max).rev() {
                let Some(unit) = rest.get(..len) else {
                    continue;
                };
                let initial = if pos == 0 {
                    self.get(&format!("^{unit}"))
                } else {
                    None
                };
                if let Some(g) = initial.or_else(|| self.get(unit)) {
                    matched = Some((len, g));
                    break;
                }
            }
            match matched {
                Some((len, g)) => {
                    out.push_str(g);
                    pos += len;
                }
                None => {
                    let c = rest.chars().next().expect("non-empty remainder");
                    return Err(c.to_string());
                }
            }
        }
        Ok(out)
    }
}

impl<'a> FromIterator<(&'a str, &'a str)> for GraphemeMap {
    fn from_iter<I: IntoIterator<Item = (&'a str, &'a str)>>(iter: I) -> Self {
        let mut map = GraphemeMap::new();
        for (k, v) in iter {
            map.insert(k, v);
        }
        map
    }
}
