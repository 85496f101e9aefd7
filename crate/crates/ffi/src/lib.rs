//! C ABI for netranslit.
//!
//! Every fallible function returns an [`NtStatus`]; results are written
//! through out-pointers. On failure `nt_last_error_message` describes the
//! error for the calling thread. Strings returned by the library must be
//! released with `nt_string_free`, handles with their matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use netranslit::evaluator;
use netranslit::kb::{load_kb, KbError, KnowledgeBase};
use netranslit::pipeline::{Pipeline, PipelineConfig, PipelineError};
use netranslit::syllabifier::{syllabify, RulesError, SyllabificationRules};
use netranslit::translit::{load_model, ModelError, TransliterationModel};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Format = 4,
    Version = 5,
    NotFound = 6,
    Parse = 7,
    Untransliterable = 8,
    InvalidArgument = 9,
    Internal = 10,
    Panic = 11,
}

/// Syllabification rules.
pub struct NtRules(SyllabificationRules);

/// A trained transliteration model.
pub struct NtModel(TransliterationModel);

/// A translation knowledge base.
pub struct NtKb(KnowledgeBase);

/// Rules, model, and knowledge base bundled for whole documents.
pub struct NtPipeline(Pipeline);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let mut bytes = message.into().into_bytes();
    bytes.retain(|b| *b != 0);
    let msg = CString::new(bytes).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(NtStatus, String);

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let status = match &e {
            PipelineError::Config(_) | PipelineError::Eval(_) => NtStatus::InvalidArgument,
            PipelineError::Rules(r) => return Failure::from_rules(r, e.to_string()),
            PipelineError::Kb(k) => return Failure::from_kb(k, e.to_string()),
            PipelineError::Model(m) => return Failure::from_model(m, e.to_string()),
            PipelineError::Parse(_) => NtStatus::Parse,
            PipelineError::Entity { .. } => NtStatus::Untransliterable,
            PipelineError::Io { .. } => NtStatus::Io,
            PipelineError::Internal(_) => NtStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

impl Failure {
    fn from_rules(e: &RulesError, msg: String) -> Self {
        match e {
            RulesError::Io { .. } => Failure(NtStatus::Io, msg),
            _ => Failure(NtStatus::Format, msg),
        }
    }

    fn from_kb(e: &KbError, msg: String) -> Self {
        match e {
            KbError::Io { .. } => Failure(NtStatus::Io, msg),
            KbError::Format { .. } => Failure(NtStatus::Format, msg),
        }
    }

    fn from_model(e: &ModelError, msg: String) -> Self {
        let status = match e {
            ModelError::Io { .. } => NtStatus::Io,
            ModelError::Version { .. } => NtStatus::Version,
            ModelError::UntransliterableSyllable { .. } => NtStatus::Untransliterable,
            ModelError::Format { .. } => NtStatus::Format,
            _ => NtStatus::InvalidArgument,
        };
        Failure(status, msg)
    }
}

impl From<RulesError> for Failure {
    fn from(e: RulesError) -> Self {
        let msg = e.to_string();
        Failure::from_rules(&e, msg)
    }
}

impl From<KbError> for Failure {
    fn from(e: KbError) -> Self {
        let msg = e.to_string();
        Failure::from_kb(&e, msg)
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let msg = e.to_string();
        Failure::from_model(&e, msg)
    }
}

/// Runs `f`, recording any error or panic for `nt_last_error_message`.
fn guard<F>(f: F) -> NtStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NtStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside netranslit");
            NtStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(NtStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(NtStatus::InvalidUtf8, format!("{what}: {e}")))
}

/// # Safety
/// `p` must be null or point to a live handle of type `T`.
unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `out` must be null or valid for a write of `T`.
unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// # Safety
/// `out` must be null or valid for a pointer write.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s)
        .map_err(|_| Failure(NtStatus::Internal, "result contains a NUL byte".into()))?;
    put(out, c.into_raw())
}

unsafe fn put_box<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(value)))
}

unsafe fn free_box<T>(p: *mut T) {
    if !p.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(p))));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next netranslit call on the same thread.
#[no_mangle]
pub extern "C" fn nt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn nt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Default syllabification rules. Never null.
#[no_mangle]
pub extern "C" fn nt_rules_default() -> *mut NtRules {
    Box::into_raw(Box::new(NtRules(SyllabificationRules::default())))
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn nt_rules_load(path: *const c_char, out: *mut *mut NtRules) -> NtStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let rules = SyllabificationRules::from_file(path)?;
        put_box(out, NtRules(rules))
    })
}

/// # Safety
/// `rules` must be null or a handle from `nt_rules_default`/`nt_rules_load`.
#[no_mangle]
pub unsafe extern "C" fn nt_rules_free(rules: *mut NtRules) {
    free_box(rules)
}

/// Writes the syllables of `word` separated by single spaces.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for `nt_string_free`.
#[no_mangle]
pub unsafe extern "C" fn nt_syllabify(
    rules: *const NtRules,
    word: *const c_char,
    out: *mut *mut c_char,
) -> NtStatus {
    guard(|| {
        let rules = handle(rules, "rules")?;
        let word = str_arg(word, "word")?;
        let s = syllabify(word, &rules.0)
            .map_err(|e| Failure(NtStatus::InvalidArgument, e.to_string()))?;
        put_string(out, s.to_spaced())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn nt_model_load(path: *const c_char, out: *mut *mut NtModel) -> NtStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let model = load_model(path)?;
        put_box(out, NtModel(model))
    })
}

/// # Safety
/// `model` must be null or a handle from `nt_model_load`.
#[no_mangle]
pub unsafe extern "C" fn nt_model_free(model: *mut NtModel) {
    free_box(model)
}

/// P(target | source) from the model's counts; 0 for unseen pairs.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nt_model_prob(
    model: *const NtModel,
    source: *const c_char,
    target: *const c_char,
    out: *mut f64,
) -> NtStatus {
    guard(|| {
        let model = handle(model, "model")?;
        let source = str_arg(source, "source")?;
        let target = str_arg(target, "target")?;
        put(out, model.0.prob(source, target))
    })
}

/// Syllabifies and decodes one word. `out_score` may be null.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for `nt_string_free`.
#[no_mangle]
pub unsafe extern "C" fn nt_model_transliterate(
    model: *const NtModel,
    rules: *const NtRules,
    word: *const c_char,
    out: *mut *mut c_char,
    out_score: *mut f64,
) -> NtStatus {
    guard(|| {
        let model = handle(model, "model")?;
        let rules = handle(rules, "rules")?;
        let word = str_arg(word, "word")?;
        let sylls = syllabify(word, &rules.0)
            .map_err(|e| Failure(NtStatus::InvalidArgument, e.to_string()))?;
        let best = netranslit::decode(&model.0, &sylls)?;
        if !out_score.is_null() {
            out_score.write(best.score);
        }
        put_string(out, best.text())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn nt_kb_load(path: *const c_char, out: *mut *mut NtKb) -> NtStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let kb = load_kb(path)?;
        put_box(out, NtKb(kb))
    })
}

/// # Safety
/// `kb` must be null or a handle from `nt_kb_load`.
#[no_mangle]
pub unsafe extern "C" fn nt_kb_free(kb: *mut NtKb) {
    free_box(kb)
}

/// Number of entries in the knowledge base, or 0 for a null handle.
///
/// # Safety
/// `kb` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nt_kb_len(kb: *const NtKb) -> usize {
    kb.as_ref().map_or(0, |k| k.0.len())
}

/// Looks up a phrase; returns `NotFound` on a miss.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for `nt_string_free`.
#[no_mangle]
pub unsafe extern "C" fn nt_kb_translate(
    kb: *const NtKb,
    text: *const c_char,
    out: *mut *mut c_char,
) -> NtStatus {
    guard(|| {
        let kb = handle(kb, "kb")?;
        let text = str_arg(text, "text")?;
        match kb.0.lookup(text) {
            Some(t) => put_string(out, t.to_owned()),
            None => Err(Failure(
                NtStatus::NotFound,
                format!("{text:?} is not in the knowledge base"),
            )),
        }
    })
}

/// Loads a pipeline from files. `rules_path` may be null for the defaults.
///
/// # Safety
/// Path arguments must be null or NUL-terminated strings; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn nt_pipeline_open(
    model_path: *const c_char,
    kb_path: *const c_char,
    rules_path: *const c_char,
    out: *mut *mut NtPipeline,
) -> NtStatus {
    guard(|| {
        let mut config = PipelineConfig::new(
            str_arg(model_path, "model path")?,
            str_arg(kb_path, "kb path")?,
        );
        if !rules_path.is_null() {
            config.rules_path = Some(str_arg(rules_path, "rules path")?.into());
        }
        let pipeline = Pipeline::from_config(&config)?;
        put_box(out, NtPipeline(pipeline))
    })
}

/// # Safety
/// `pipeline` must be null or a handle from `nt_pipeline_open`.
#[no_mangle]
pub unsafe extern "C" fn nt_pipeline_free(pipeline: *mut NtPipeline) {
    free_box(pipeline)
}

/// Replaces every tagged entity in a slash-tagged document.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for `nt_string_free`.
#[no_mangle]
pub unsafe extern "C" fn nt_pipeline_run(
    pipeline: *const NtPipeline,
    document: *const c_char,
    out: *mut *mut c_char,
) -> NtStatus {
    guard(|| {
        let pipeline = handle(pipeline, "pipeline")?;
        let document = str_arg(document, "document")?;
        let result = pipeline.0.run(document)?;
        put_string(out, result.text)
    })
}

/// Percentage of correct items.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn nt_accuracy(correct: u64, total: u64, out: *mut f64) -> NtStatus {
    guard(|| {
        let acc = evaluator::accuracy(correct, total)
            .map_err(|e| Failure(NtStatus::InvalidArgument, e.to_string()))?;
        put(out, acc)
    })
}

/// Harmonic mean of two percentages; 0 when both are 0.
#[no_mangle]
pub extern "C" fn nt_f_measure(precision_pct: f64, recall_pct: f64) -> f64 {
    evaluator::f_measure(precision_pct, recall_pct)
}
