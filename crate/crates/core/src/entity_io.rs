//! Slash-tagged named-entity input: parsing, cleanup, and routing.
//!
//! Input follows the 4-class NER output convention, one sentence per line:
//!
//! ```text
//! Priyanka/PERSON is going to Delhi University/ORGANIZATION
//! ```
//!
//! Two ways of marking a multi-word entity are understood. A run of tokens
//! that all carry the same tag (`Delhi/ORGANIZATION University/ORGANIZATION`)
//! is one entity. In the default [`ParseMode::Grouped`] mode, a tagged token
//! also absorbs the capitalized untagged tokens right before it, with
//! lowercase connectors such as `of` allowed between them
//! (`Indian Institute of Technology/ORGANIZATION`).
//!
//! A `/O` suffix marks an explicitly untagged token and is dropped.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EntityError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: unknown entity tag {tag:?}")]
    UnknownTag {
        line: usize,
        column: usize,
        tag: String,
    },
    #[error("entity #{position} is empty after cleanup")]
    EmptyEntity { position: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityTag {
    Person,
    Location,
    Organization,
    Miscellaneous,
}

impl EntityTag {
    pub const ALL: [EntityTag; 4] = [
        EntityTag::Person,
        EntityTag::Location,
        EntityTag::Organization,
        EntityTag::Miscellaneous,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityTag::Person => "PERSON",
            EntityTag::Location => "LOCATION",
            EntityTag::Organization => "ORGANIZATION",
            EntityTag::Miscellaneous => "MISCELLANEOUS",
        }
    }
}

impl fmt::Display for EntityTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTag(pub String);

impl fmt::Display for UnknownTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown entity tag {:?}", self.0)
    }
}

impl std::error::Error for UnknownTag {}

impl FromStr for EntityTag {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "PERSON" => Ok(EntityTag::Person),
            "LOCATION" => Ok(EntityTag::Location),
            "ORGANIZATION" => Ok(EntityTag::Organization),
            // the 4-class NER models spell this one `MISC`
            "MISCELLANEOUS" | "MISC" => Ok(EntityTag::Miscellaneous),
            other => Err(UnknownTag(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Translate,
    Transliterate,
}

/// LOCATION and ORGANIZATION go to the knowledge base, everything else is
/// transliterated.
pub fn route(tag: EntityTag) -> Route {
    match tag {
        EntityTag::Location | EntityTag::Organization => Route::Translate,
        EntityTag::Person | EntityTag::Miscellaneous => Route::Transliterate,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedEntity {
    pub text: String,
    pub tag: EntityTag,
    /// Ordinal of the entity within its document.
    pub position: usize,
}

impl TaggedEntity {
    pub fn new(text: impl Into<String>, tag: EntityTag, position: usize) -> Self {
        Self {
            text: text.into(),
            tag,
            position,
        }
    }

    pub fn route(&self) -> Route {
        route(self.tag)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ParseMode {
    /// Same-tag runs plus capitalized untagged tokens before a tag.
    #[default]
    Grouped,
    /// Only tokens that carry their own tag belong to an entity.
    Strict,
}

/// A piece of a parsed line: verbatim text or a reference to an entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Text(String),
    Entity(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedDocument {
    lines: Vec<Vec<Segment>>,
    entities: Vec<TaggedEntity>,
    trailing_newline: bool,
}

impl TaggedDocument {
    pub fn entities(&self) -> &[TaggedEntity] {
        &self.entities
    }

    pub fn into_entities(self) -> Vec<TaggedEntity> {
        self.entities
    }

    pub fn lines(&self) -> &[Vec<Segment>] {
        &self.lines
    }

    /// Rebuilds the document with each entity replaced by `replace(entity)`.
    pub fn render_with<F>(&self, mut replace: F) -> String
    where
        F: FnMut(&TaggedEntity) -> String,
    {
        let mut out = String::new();
        for (i, line) in self.lines.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            for seg in line {
                match seg {
                    Segment::Text(t) => out.push_str(t),
                    Segment::Entity(idx) => out.push_str(&replace(&self.entities[*idx])),
                }
            }
        }
        if self.trailing_newline {
            out.push('\n');
        }
        out
    }
}

const CONNECTORS: &[&str] = &[
    "of", "the", "and", "for", "de", "da", "di", "du", "del", "la", "le", "van", "von", "&",
];

const TRAILING_PUNCT: &[char] = &['.', ',', ';', ':', '!', '?', ')', '"', '\'', ']'];

#[derive(Debug, Clone)]
enum TokenKind {
    Plain,
    /// `word/O`: explicitly outside any entity; `slash` is the byte offset of `/`.
    Outside {
        slash: usize,
    },
    Tagged {
        tag: EntityTag,
        slash: usize,
        tag_end: usize,
    },
}

#[derive(Debug, Clone)]
struct Token {
    start: usize,
    end: usize,
    kind: TokenKind,
}

fn column(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

fn lex_line(line: &str, line_no: usize) -> Result<Vec<Token>, EntityError> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in line
        .char_indices()
        .chain(std::iter::once((line.len(), ' ')))
    {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                tokens.push(classify_token(line, s, i, line_no)?);
                start = None;
            }
            _ => {}
        }
    }
    Ok(tokens)
}

fn classify_token(
    line: &str,
    start: usize,
    end: usize,
    line_no: usize,
) -> Result<Token, EntityError> {
    let tok = &line[start..end];
    let plain = Token {
        start,
        end,
        kind: TokenKind::Plain,
    };
    let Some(rel) = tok.rfind('/') else {
        return Ok(plain);
    };
    let slash = start + rel;
    let (word, suffix) = (&tok[..rel], &tok[rel + 1..]);
    if suffix.is_empty() {
        if word.is_empty() {
            return Ok(plain);
        }
        return Err(EntityError::Parse {
            line: line_no,
            column: column(line, slash),
            message: format!("empty tag after {tok:?}"),
        });
    }
    if !suffix.starts_with(|c: char| c.is_ascii_uppercase()) {
        // `and/or`, `1/2`: ordinary text
        return Ok(plain);
    }
    let tag_len = suffix
        .find(|c: char| !(c.is_ascii_uppercase() || c == '_'))
        .unwrap_or(suffix.len());
    let (tag, rest) = suffix.split_at(tag_len);
    if !rest.chars().all(|c| TRAILING_PUNCT.contains(&c)) {
        return Err(EntityError::Parse {
            line: line_no,
            column: column(line, slash + 1),
            message: format!("malformed tag suffix {suffix:?}"),
        });
    }
    if word.is_empty() {
        return Err(EntityError::Parse {
            line: line_no,
            column: column(line, start),
            message: format!("tag {tag:?} has no entity text"),
        });
    }
    if tag == "O" {
        return Ok(Token {
            start,
            end,
            kind: TokenKind::Outside { slash },
        });
    }
    let tag = tag
        .parse::<EntityTag>()
        .map_err(|e| EntityError::UnknownTag {
            line: line_no,
            column: column(line, slash + 1),
            tag: e.0,
        })?;
    Ok(Token {
        start,
        end,
        kind: TokenKind::Tagged {
            tag,
            slash,
            tag_end: slash + 1 + tag_len,
        },
    })
}

fn is_name_word(tok: &str) -> bool {
    tok.starts_with(|c: char| c.is_uppercase())
        && tok
            .chars()
            .all(|c| c.is_alphabetic() || matches!(c, '.' | '\'' | '-'))
}

/// An entity span on one line, in byte offsets.
struct Span {
    start: usize,
    end: usize,
    tag: EntityTag,
    words: Vec<String>,
}

fn group_line(line: &str, tokens: &[Token], mode: ParseMode) -> Vec<Span> {
    let mut spans: Vec<Span> = Vec::new();
    // index of the last token consumed by an entity
    let mut consumed_upto: Option<usize> = None;
    for (i, tok) in tokens.iter().enumerate() {
        let TokenKind::Tagged {
            tag,
            slash,
            tag_end,
        } = tok.kind
        else {
            continue;
        };
        let word = line[tok.start..slash].to_string();
        let continues_run = i > 0
            && consumed_upto == Some(i - 1)
            && matches!(tokens[i - 1].kind, TokenKind::Tagged { tag: t, tag_end: e, .. }
                if t == tag && e == tokens[i - 1].end);
        if continues_run {
            let span = spans.last_mut().expect("run has an open span");
            span.end = tag_end;
            span.words.push(word);
        } else {
            let mut first = i;
            if mode == ParseMode::Grouped {
                let floor = consumed_upto.map_or(0, |c| c + 1);
                while first > floor {
                    let prev = &tokens[first - 1];
                    let text = &line[prev.start..prev.end];
                    let ok = matches!(prev.kind, TokenKind::Plain)
                        && (is_name_word(text) || CONNECTORS.contains(&text));
                    if !ok {
                        break;
                    }
                    first -= 1;
                }
                // a group starts with a name word, never a connector
                while first < i && !is_name_word(&line[tokens[first].start..tokens[first].end]) {
                    first += 1;
                }
            }
            let mut words: Vec<String> = tokens[first..i]
                .iter()
                .map(|t| line[t.start..t.end].to_string())
                .collect();
            words.push(word);
            spans.push(Span {
                start: tokens[first].start,
                end: tag_end,
                tag,
                words,
            });
        }
        consumed_upto = Some(i);
    }
    spans
}

fn push_text(segments: &mut Vec<Segment>, text: &str) {
    if text.is_empty() {
        return;
    }
    if let Some(Segment::Text(prev)) = segments.last_mut() {
        prev.push_str(text);
    } else {
        segments.push(Segment::Text(text.to_string()));
    }
}

/// Appends `line[from..to]` with any `/O` markers removed.
fn push_verbatim(
    segments: &mut Vec<Segment>,
    line: &str,
    tokens: &[Token],
    from: usize,
    to: usize,
) {
    let mut cursor = from;
    for tok in tokens {
        if let TokenKind::Outside { slash } = tok.kind {
            if tok.start >= from && tok.end <= to {
                push_text(segments, &line[cursor..slash]);
                cursor = tok.end;
            }
        }
    }
    push_text(segments, &line[cursor..to]);
}

/// Parses a whole document, keeping the non-entity text for reassembly.
pub fn parse_document(input: &str, mode: ParseMode) -> Result<TaggedDocument, EntityError> {
    let mut lines = Vec::new();
    let mut entities = Vec::new();
    let trailing_newline = input.ends_with('\n');
    let body = input.strip_suffix('\n').unwrap_or(input);
    if input.is_empty() {
        return Ok(TaggedDocument {
            lines,
            entities,
            trailing_newline: false,
        });
    }
    for (idx, raw) in body.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let tokens = lex_line(line, idx + 1)?;
        let spans = group_line(line, &tokens, mode);
        let mut segments = Vec::new();
        let mut cursor = 0;
        for span in spans {
            push_verbatim(&mut segments, line, &tokens, cursor, span.start);
            segments.push(Segment::Entity(entities.len()));
            entities.push(TaggedEntity {
                text: span.words.join(" "),
                tag: span.tag,
                position: entities.len(),
            });
            cursor = span.end;
        }
        push_verbatim(&mut segments, line, &tokens, cursor, line.len());
        lines.push(segments);
    }
    Ok(TaggedDocument {
        lines,
        entities,
        trailing_newline,
    })
}

/// Entities of a slash-tagged document, in document order.
pub fn parse_tagged(input: &str) -> Result<Vec<TaggedEntity>, EntityError> {
    parse_tagged_with(input, ParseMode::default())
}

pub fn parse_tagged_with(input: &str, mode: ParseMode) -> Result<Vec<TaggedEntity>, EntityError> {
    parse_document(input, mode).map(TaggedDocument::into_entities)
}

/// Writes entities back in slash-tag form, one per line, every token tagged.
pub fn render(entities: &[TaggedEntity]) -> String {
    let mut out = String::new();
    for e in entities {
        let line = e
            .text
            .split_whitespace()
            .map(|w| format!("{w}/{}", e.tag))
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Strips tag markers, punctuation, and digits; collapses whitespace.
pub fn preprocess(entity: &TaggedEntity) -> Result<TaggedEntity, EntityError> {
    let mut without_tags = String::with_capacity(entity.text.len());
    let mut chars = entity.text.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '/' && chars.peek().is_some_and(|n| n.is_ascii_uppercase()) {
            while chars
                .peek()
                .is_some_and(|n| n.is_ascii_uppercase() || *n == '_')
            {
                chars.next();
            }
            without_tags.push(' ');
            continue;
        }
        without_tags.push(c);
    }
    let kept: String = without_tags
        .chars()
        .filter(|c| c.is_alphabetic() || c.is_whitespace())
        .collect();
    let text = kept.split_whitespace().collect::<Vec<_>>().join(" ");
    if text.is_empty() {
        return Err(EntityError::EmptyEntity {
            position: entity.position,
        });
    }
    Ok(TaggedEntity {
        text,
        tag: entity.tag,
        position: entity.position,
    })
}
