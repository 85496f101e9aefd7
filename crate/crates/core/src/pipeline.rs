//! End-to-end flow: parse tagged text, clean each entity, route it, then
//! translate through the knowledge base or syllabify and decode.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::entity_io::{self, EntityError, EntityTag, ParseMode, Route, TaggedEntity};
use crate::evaluator::{EvalError, Rounding};
use crate::kb::{self, KbError, KnowledgeBase};
use crate::syllabifier::{syllabify, RulesError, SyllabificationRules, SyllabifyError};
use crate::text::nfc;
use crate::translit::{
    self, DecodeOptions, ModelError, Smoothing, TrainMode, TransliterationModel,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Rules(#[from] RulesError),
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Parse(#[from] EntityError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("entity #{position} {text:?}: {source}")]
    Entity {
        position: usize,
        text: String,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl PipelineError {
    /// Process exit status: 1 usage, 2 data or format, 3 internal.
    pub fn exit_code(&self) -> u8 {
        match self {
            PipelineError::Config(_) => 1,
            PipelineError::Internal(_) => 3,
            _ => 2,
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        PipelineError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// `None` uses the built-in rule set.
    pub rules_path: Option<PathBuf>,
    pub model_path: PathBuf,
    pub kb_path: PathBuf,
    pub training_mode: TrainMode,
    pub fallback_floor: f64,
    pub smoothing: Smoothing,
    pub parse_mode: ParseMode,
    pub rounding: Rounding,
}

impl PipelineConfig {
    pub fn new(model_path: impl Into<PathBuf>, kb_path: impl Into<PathBuf>) -> Self {
        Self {
            rules_path: None,
            model_path: model_path.into(),
            kb_path: kb_path.into(),
            training_mode: TrainMode::Strict,
            fallback_floor: DecodeOptions::default().fallback_floor,
            smoothing: Smoothing::None,
            parse_mode: ParseMode::Grouped,
            rounding: Rounding::HalfUp,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if !(self.fallback_floor > 0.0 && self.fallback_floor < 1.0) {
            return Err(PipelineError::Config(format!(
                "fallback floor {} is outside (0, 1)",
                self.fallback_floor
            )));
        }
        let files = [
            Some(&self.model_path),
            Some(&self.kb_path),
            self.rules_path.as_ref(),
        ];
        for path in files.into_iter().flatten() {
            if !path.is_file() {
                return Err(PipelineError::io(
                    path,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
                ));
            }
        }
        Ok(())
    }
}

/// How an entity's output was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Knowledge-base hit.
    Translated,
    /// PERSON or MISCELLANEOUS, transliterated directly.
    Transliterated,
    /// LOCATION or ORGANIZATION missing from the knowledge base.
    Fallback,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Translated => "translated",
            Provenance::Transliterated => "transliterated",
            Provenance::Fallback => "fallback",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntityOutcome {
    pub position: usize,
    pub tag: EntityTag,
    pub route: Route,
    /// Entity text after cleanup.
    pub source: String,
    pub output: String,
    pub provenance: Provenance,
    /// Decoding score; `None` for knowledge-base hits.
    pub score: Option<f64>,
    /// Syllables rendered through the grapheme fallback table.
    pub unseen_syllables: usize,
}

impl EntityOutcome {
    /// One tab-separated provenance record.
    pub fn to_record(&self) -> String {
        let score = self
            .score
            .map_or_else(|| "-".to_string(), |s| format!("{s:.9}"));
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.position,
            self.tag,
            self.provenance,
            self.source,
            self.output,
            score,
            self.unseen_syllables
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub text: String,
    pub entities: Vec<EntityOutcome>,
}

impl PipelineOutput {
    pub fn provenance_report(&self) -> String {
        self.entities.iter().map(|e| e.to_record() + "\n").collect()
    }
}

#[derive(Debug, Clone)]
pub struct Pipeline {
    rules: SyllabificationRules,
    model: TransliterationModel,
    kb: KnowledgeBase,
    decode: DecodeOptions,
    parse_mode: ParseMode,
    keep_tags: bool,
}

impl Pipeline {
    pub fn new(
        rules: SyllabificationRules,
        model: TransliterationModel,
        kb: KnowledgeBase,
    ) -> Self {
        Self {
            rules,
            model,
            kb,
            decode: DecodeOptions::default(),
            parse_mode: ParseMode::Grouped,
            keep_tags: false,
        }
    }

    pub fn from_config(config: &PipelineConfig) -> Result<Self, PipelineError> {
        config.validate()?;
        let rules = match &config.rules_path {
            Some(p) => SyllabificationRules::from_file(p)?,
            None => SyllabificationRules::default(),
        };
        let model = translit::load_model(&config.model_path)?;
        let kb = kb::load_kb(&config.kb_path)?;
        Ok(Self::new(rules, model, kb)
            .with_decode_options(DecodeOptions {
                fallback_floor: config.fallback_floor,
                smoothing: config.smoothing,
            })
            .with_parse_mode(config.parse_mode))
    }

    pub fn with_decode_options(mut self, options: DecodeOptions) -> Self {
        self.decode = options;
        self
    }

    pub fn with_parse_mode(mut self, mode: ParseMode) -> Self {
        self.parse_mode = mode;
        self
    }

    /// Writes `output/TAG` instead of the bare output.
    pub fn with_keep_tags(mut self, keep: bool) -> Self {
        self.keep_tags = keep;
        self
    }

    pub fn rules(&self) -> &SyllabificationRules {
        &self.rules
    }

    pub fn model(&self) -> &TransliterationModel {
        &self.model
    }

    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    /// Transliterates each word of `text` and joins the results with spaces.
    /// Returns the output, the product of word scores, and the number of
    /// syllables that needed the fallback table.
    pub fn transliterate_text(&self, text: &str) -> Result<(String, f64, usize), PipelineError> {
        let mut words = Vec::new();
        let mut score = 1.0;
        let mut unseen = 0;
        for word in text.split_whitespace() {
            let sylls = syllabify(word, &self.rules).map_err(|e| entity_err(0, word, e))?;
            let cand = self
                .model
                .decode(&sylls, &self.decode)
                .map_err(|e| entity_err(0, word, e))?;
            score *= cand.score;
            unseen += cand.fallback_count();
            words.push(cand.text());
        }
        Ok((words.join(" "), score, unseen))
    }

    fn process_entity(&self, entity: &TaggedEntity) -> Result<EntityOutcome, PipelineError> {
        let clean = entity_io::preprocess(entity)
            .map_err(|e| entity_err(entity.position, &entity.text, e))?;
        let route = clean.route();
        if route == Route::Translate {
            if let Some(target) = kb::translate(&clean.text, &self.kb) {
                return Ok(EntityOutcome {
                    position: entity.position,
                    tag: entity.tag,
                    route,
                    source: clean.text,
                    output: target.to_string(),
                    provenance: Provenance::Translated,
                    score: None,
                    unseen_syllables: 0,
                });
            }
        }
        let (output, score, unseen) =
            self.transliterate_text(&clean.text).map_err(|e| match e {
                PipelineError::Entity { source, .. } => PipelineError::Entity {
                    position: entity.position,
                    text: entity.text.clone(),
                    source,
                },
                other => other,
            })?;
        Ok(EntityOutcome {
            position: entity.position,
            tag: entity.tag,
            route,
            source: clean.text,
            output: nfc(&output),
            provenance: match route {
                Route::Translate => Provenance::Fallback,
                Route::Transliterate => Provenance::Transliterated,
            },
            score: Some(score),
            unseen_syllables: unseen,
        })
    }

    /// Runs a whole slash-tagged document. Entities are processed in
    /// parallel; output order and text are deterministic.
    pub fn run(&self, document: &str) -> Result<PipelineOutput, PipelineError> {
        let doc = entity_io::parse_document(document, self.parse_mode)?;
        let outcomes: Vec<EntityOutcome> = doc
            .entities()
            .par_iter()
            .map(|e| self.process_entity(e))
            .collect::<Result<_, _>>()?;

        let positions: BTreeSet<usize> = outcomes.iter().map(|o| o.position).collect();
        if outcomes.len() != doc.entities().len() || positions.len() != outcomes.len() {
            return Err(PipelineError::Internal(format!(
                "{} entities parsed but {} distinct outcomes",
                doc.entities().len(),
                positions.len()
            )));
        }

        let text = doc.render_with(|e| {
            let o = &outcomes[e.position];
            if self.keep_tags {
                format!("{}/{}", o.output, o.tag)
            } else {
                o.output.clone()
            }
        });
        Ok(PipelineOutput {
            text,
            entities: outcomes,
        })
    }
}

fn entity_err<E>(position: usize, text: &str, e: E) -> PipelineError
where
    E: std::error::Error + Send + Sync + 'static,
{
    PipelineError::Entity {
        position,
        text: text.to_string(),
        source: Box::new(e),
    }
}

pub fn run_pipeline(
    document: &str,
    config: &PipelineConfig,
) -> Result<PipelineOutput, PipelineError> {
    Pipeline::from_config(config)?.run(document)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrepReject {
    pub line: usize,
    pub content: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrepOutput {
    /// Syllabified corpus lines, each `src syllables<TAB>tgt syllables`.
    pub lines: Vec<String>,
    pub rejects: Vec<PrepReject>,
}

impl PrepOutput {
    pub fn corpus_text(&self) -> String {
        self.lines.iter().map(|l| format!("{l}\n")).collect()
    }

    pub fn rejects_text(&self) -> String {
        self.rejects
            .iter()
            .map(|r| format!("{}\t{}\t{}\n", r.line, r.reason, r.content))
            .collect()
    }
}

fn prep_line(line: &str, rules: &SyllabificationRules) -> Result<String, String> {
    let (name, target) = line
        .split_once('\t')
        .ok_or_else(|| "missing tab between name and target syllables".to_string())?;
    let mut source = Vec::new();
    for word in name.split_whitespace() {
        let sylls = syllabify(word, rules).map_err(|e: SyllabifyError| format!("{word:?}: {e}"))?;
        source.extend(sylls.texts().into_iter().map(str::to_string));
    }
    if source.is_empty() {
        return Err("empty name".into());
    }
    let target: Vec<String> = target.split_whitespace().map(nfc).collect();
    if source.len() != target.len() {
        return Err(format!(
            "source has {} syllables ({}) but target has {}",
            source.len(),
            source.join(" "),
            target.len()
        ));
    }
    Ok(format!("{}\t{}", source.join(" "), target.join(" ")))
}

/// Syllabifies the source side of a raw `name<TAB>target syllables` corpus.
pub fn prep_corpus_text(raw: &str, rules: &SyllabificationRules) -> PrepOutput {
    let mut out = PrepOutput::default();
    for (idx, raw_line) in raw.lines().enumerate() {
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        match prep_line(line, rules) {
            Ok(l) => out.lines.push(l),
            Err(reason) => out.rejects.push(PrepReject {
                line: idx + 1,
                content: line.to_string(),
                reason,
            }),
        }
    }
    out
}

/// File form of [`prep_corpus_text`]; writes the corpus and the rejects file.
pub fn prep_corpus(
    input: &Path,
    rules: &SyllabificationRules,
    output: &Path,
    rejects: &Path,
) -> Result<PrepOutput, PipelineError> {
    let raw = fs::read_to_string(input).map_err(|e| PipelineError::io(input, e))?;
    let out = prep_corpus_text(&raw, rules);
    fs::write(output, out.corpus_text()).map_err(|e| PipelineError::io(output, e))?;
    fs::write(rejects, out.rejects_text()).map_err(|e| PipelineError::io(rejects, e))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::translit::{train, ParallelPair};

    fn pipeline() -> Pipeline {
        let pairs: Vec<ParallelPair> = [
            ("mo hit", "ਮੋ ਹਿਤ"),
            ("ku nal", "ਕੁ ਨਾਲ"),
            ("har ya na", "ਹ ਰਿ ਆਣਾ"),
        ]
        .iter()
        .map(|(s, t)| ParallelPair::parse(&format!("{s}\t{t}")).unwrap())
        .collect();
        let model = train(&pairs, TrainMode::Strict).unwrap();
        let kb = KnowledgeBase::parse("delhi\tਦਿੱਲੀ\nsign of technology\tਤਕਨੀਕੀ ਚਿਹਨ\n").unwrap();
        Pipeline::new(SyllabificationRules::default(), model, kb)
    }

    #[test]
    fn worked_sentence() {
        let out = pipeline()
            .run("Mohit/PERSON is going to Haryana/LOCATION with Kunal/PERSON\n")
            .unwrap();
        assert_eq!(out.text, "ਮੋਹਿਤ is going to ਹਰਿਆਣਾ with ਕੁਨਾਲ\n");
        let prov: Vec<_> = out.entities.iter().map(|e| e.provenance).collect();
        assert_eq!(
            prov,
            [
                Provenance::Transliterated,
                Provenance::Fallback,
                Provenance::Transliterated
            ]
        );
        assert_eq!(out.entities[0].score, Some(1.0));
    }

    #[test]
    fn kb_hits_keep_target_order() {
        let out = pipeline()
            .run("the Sign Of Technology/ORGANIZATION in Delhi/LOCATION")
            .unwrap();
        assert_eq!(out.text, "the ਤਕਨੀਕੀ ਚਿਹਨ in ਦਿੱਲੀ");
        assert!(out
            .entities
            .iter()
            .all(|e| e.provenance == Provenance::Translated));
        assert!(!out.text.contains("ਦਾ"));
    }

    #[test]
    fn no_entities_is_identity() {
        let doc = "nothing to see here.\n\n  spaced   out\n";
        assert_eq!(pipeline().run(doc).unwrap().text, doc);
    }

    #[test]
    fn keep_tags_and_records() {
        let out = pipeline().with_keep_tags(true).run("Mohit/PERSON").unwrap();
        assert_eq!(out.text, "ਮੋਹਿਤ/PERSON");
        assert_eq!(
            out.provenance_report(),
            "0\tPERSON\ttransliterated\tMohit\tਮੋਹਿਤ\t1.000000000\t0\n"
        );
    }

    #[test]
    fn errors_carry_entity_position() {
        let err = pipeline().run("Mohit/PERSON and Zoë/PERSON").unwrap_err();
        assert!(
            matches!(err, PipelineError::Entity { position: 1, .. }),
            "{err}"
        );
        assert_eq!(err.exit_code(), 2);
        let err = pipeline().run("x 42/PERSON").unwrap_err();
        assert!(
            matches!(err, PipelineError::Entity { position: 0, .. }),
            "{err}"
        );
        let err = pipeline().run("x Mina/PLACE").unwrap_err();
        assert!(matches!(err, PipelineError::Parse(_)));
    }

    #[test]
    fn config_validation() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = PipelineConfig::new(dir.path().join("m.txt"), dir.path().join("kb.tsv"));
        assert!(matches!(cfg.validate(), Err(PipelineError::Io { .. })));
        cfg.fallback_floor = 1.0;
        let err = cfg.validate().unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn prep_examples() {
        let rules = SyllabificationRules::default();
        let out = prep_corpus_text("Mohit\tਮੋ ਹਿਤ\nMohit\tਮੋ\n# note\nnotab\n", &rules);
        assert_eq!(out.lines, ["mo hit\tਮੋ ਹਿਤ"]);
        assert_eq!(out.rejects.len(), 2);
        assert_eq!(out.rejects[0].line, 2);
        assert!(out.rejects[0].reason.contains("2 syllables"));
        assert_eq!(out.rejects[1].line, 4);
        let empty = prep_corpus_text("", &rules);
        assert!(empty.lines.is_empty() && empty.rejects.is_empty());
    }

    #[test]
    fn prep_files() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("raw.tsv");
        fs::write(&input, "Kunal\tਕੁ ਨਾਲ\nKunal\tਕੁਨਾਲ\n").unwrap();
        let (out, rej) = (dir.path().join("c.tsv"), dir.path().join("r.tsv"));
        prep_corpus(&input, &SyllabificationRules::default(), &out, &rej).unwrap();
        assert_eq!(fs::read_to_string(&out).unwrap(), "ku nal\tਕੁ ਨਾਲ\n");
        assert!(fs::read_to_string(&rej).unwrap().starts_with("2\t"));
        assert!(matches!(
            prep_corpus(
                &dir.path().join("missing"),
                &SyllabificationRules::default(),
                &out,
                &rej
            ),
            Err(PipelineError::Io { .. })
        ));
    }
}
