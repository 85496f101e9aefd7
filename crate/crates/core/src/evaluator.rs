//! Output-quality metrics over system output and gold references.
//!
//! The formulas are deliberately the simple count ratios used for name
//! transliteration reports, not the usual information-retrieval ones:
//!
//! * accuracy = 100 · correct / total
//! * precision = 100 · correct / total words (same ratio as accuracy)
//! * recall = 100 · correct / items that have a gold reference
//! * F = 2PR / (P + R), on percentages
//!
//! An empty gold line means "no reference available" and an empty system
//! line means the system produced nothing. With a reference for every item
//! precision and recall coincide with accuracy.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::entity_io::{route, EntityTag, Route};
use crate::text::nfc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero: {0} is 0")]
    DivisionByZero(&'static str),
    #[error("count {correct} exceeds total {total}")]
    CountExceedsTotal { correct: u64, total: u64 },
    #[error("shape mismatch: {system} system items, {gold} gold items, {tags} tags")]
    Shape {
        system: usize,
        gold: usize,
        tags: usize,
    },
}

fn ratio_pct(num: u64, den: u64, what: &'static str) -> Result<f64, EvalError> {
    if den == 0 {
        return Err(EvalError::DivisionByZero(what));
    }
    if num > den {
        return Err(EvalError::CountExceedsTotal {
            correct: num,
            total: den,
        });
    }
    Ok(100.0 * num as f64 / den as f64)
}

pub fn accuracy(correct: u64, total: u64) -> Result<f64, EvalError> {
    ratio_pct(correct, total, "total")
}

pub fn precision(correct: u64, total_words: u64) -> Result<f64, EvalError> {
    ratio_pct(correct, total_words, "total words")
}

pub fn recall(system_correct: u64, reference_correct: u64) -> Result<f64, EvalError> {
    ratio_pct(system_correct, reference_correct, "reference correct")
}

/// Harmonic mean of two percentages; 0 when both are 0.
pub fn f_measure(precision_pct: f64, recall_pct: f64) -> f64 {
    let sum = precision_pct + recall_pct;
    if sum == 0.0 {
        0.0
    } else {
        2.0 * precision_pct * recall_pct / sum
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Rounding {
    #[default]
    HalfUp,
    HalfEven,
}

impl std::str::FromStr for Rounding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "half-up" => Ok(Rounding::HalfUp),
            "half-even" => Ok(Rounding::HalfEven),
            other => Err(format!("unknown rounding mode {other:?}")),
        }
    }
}

/// Rounds to two decimals. Values within 1e-9 of a half are treated as
/// exact halves so that binary representation error does not decide ties.
pub fn round2(value: f64, mode: Rounding) -> f64 {
    let scaled = value * 100.0;
    let floor = scaled.floor();
    let frac = scaled - floor;
    let rounded = if (frac - 0.5).abs() < 1e-9 {
        match mode {
            Rounding::HalfUp => floor + 1.0,
            Rounding::HalfEven if floor % 2.0 == 0.0 => floor,
            Rounding::HalfEven => floor + 1.0,
        }
    } else {
        scaled.round()
    };
    rounded / 100.0
}

/// Counts and metrics for one slice of the data.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub total: u64,
    pub correct: u64,
    pub with_reference: u64,
    pub accuracy_pct: f64,
    pub precision_pct: f64,
    pub recall_pct: f64,
    pub f_measure_pct: f64,
}

impl Metrics {
    fn from_counts(total: u64, correct: u64, with_reference: u64) -> Self {
        let acc = accuracy(correct, total).unwrap_or(0.0);
        let p = precision(correct, total).unwrap_or(0.0);
        let r = recall(correct, with_reference).unwrap_or(0.0);
        Self {
            total,
            correct,
            with_reference,
            accuracy_pct: acc,
            precision_pct: p,
            recall_pct: r,
            f_measure_pct: f_measure(p, r),
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    total: u64,
    correct: u64,
    with_reference: u64,
}

impl Tally {
    fn add(&mut self, correct: bool, has_reference: bool) {
        self.total += 1;
        self.correct += u64::from(correct);
        self.with_reference += u64::from(has_reference);
    }

    fn metrics(&self) -> Metrics {
        Metrics::from_counts(self.total, self.correct, self.with_reference)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub overall: Metrics,
    pub per_tag: BTreeMap<EntityTag, Metrics>,
    /// LOCATION and ORGANIZATION items, when tags were given.
    pub translation: Option<Metrics>,
    /// PERSON and MISCELLANEOUS items, when tags were given.
    pub transliteration: Option<Metrics>,
    /// Mean of the translation and transliteration accuracies.
    pub average_accuracy_pct: Option<f64>,
}

impl EvalReport {
    pub fn total(&self) -> u64 {
        self.overall.total
    }

    pub fn correct(&self) -> u64 {
        self.overall.correct
    }

    pub fn accuracy_pct(&self) -> f64 {
        self.overall.accuracy_pct
    }

    pub fn precision_pct(&self) -> f64 {
        self.overall.precision_pct
    }

    pub fn recall_pct(&self) -> f64 {
        self.overall.recall_pct
    }

    pub fn f_measure_pct(&self) -> f64 {
        self.overall.f_measure_pct
    }

    /// Human-readable accuracy and precision/recall tables.
    pub fn to_table(&self, mode: Rounding) -> String {
        let r = |v: f64| format!("{:.2}", round2(v, mode));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<28} {:>8} {:>8} {:>12}",
            "TEST SET", "TOTAL", "CORRECT", "ACCURACY(%)"
        );
        let mut acc_row = |name: &str, m: &Metrics| {
            let _ = writeln!(
                out,
                "{:<28} {:>8} {:>8} {:>12}",
                name,
                m.total,
                m.correct,
                r(m.accuracy_pct)
            );
        };
        if let Some(m) = &self.transliteration {
            acc_row("TRANSLITERATION (PER, MISC)", m);
        }
        if let Some(m) = &self.translation {
            acc_row("TRANSLATION (LOC, ORG)", m);
        }
        acc_row("ALL", &self.overall);
        if let Some(avg) = self.average_accuracy_pct {
            let _ = writeln!(out, "average accuracy: {}", r(avg));
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<28} {:>12} {:>10} {:>13}",
            "NAME ENTITIES", "PRECISION(%)", "RECALL(%)", "F-MEASURE(%)"
        );
        let mut prf_row = |name: &str, m: &Metrics| {
            let _ = writeln!(
                out,
                "{:<28} {:>12} {:>10} {:>13}",
                name,
                r(m.precision_pct),
                r(m.recall_pct),
                r(m.f_measure_pct)
            );
        };
        for (tag, m) in &self.per_tag {
            prf_row(&format!("{tag} ({})", m.total), m);
        }
        if let Some(m) = &self.transliteration {
            prf_row(&format!("PERSON/MISC ({})", m.total), m);
        }
        if let Some(m) = &self.translation {
            prf_row(&format!("LOCATION/ORG ({})", m.total), m);
        }
        prf_row(&format!("ALL ({})", self.overall.total), &self.overall);
        out
    }

    /// Machine-readable `key=value` lines.
    pub fn to_key_values(&self, mode: Rounding) -> String {
        let mut out = String::new();
        let mut emit = |prefix: &str, m: &Metrics| {
            let _ = writeln!(out, "{prefix}total={}", m.total);
            let _ = writeln!(out, "{prefix}correct={}", m.correct);
            let _ = writeln!(out, "{prefix}accuracy={:.2}", round2(m.accuracy_pct, mode));
            let _ = writeln!(
                out,
                "{prefix}precision={:.2}",
                round2(m.precision_pct, mode)
            );
            let _ = writeln!(out, "{prefix}recall={:.2}", round2(m.recall_pct, mode));
            let _ = writeln!(
                out,
                "{prefix}f_measure={:.2}",
                round2(m.f_measure_pct, mode)
            );
        };
        emit("", &self.overall);
        if let Some(m) = &self.transliteration {
            emit("transliteration.", m);
        }
        if let Some(m) = &self.translation {
            emit("translation.", m);
        }
        for (tag, m) in &self.per_tag {
            emit(&format!("{}.", tag.as_str().to_lowercase()), m);
        }
        if let Some(avg) = self.average_accuracy_pct {
            let _ = writeln!(out, "average_accuracy={:.2}", round2(avg, mode));
        }
        out
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table(Rounding::default()))
    }
}

/// Scores system output against gold references by exact NFC match.
pub fn evaluate<S, G>(
    system: &[S],
    gold: &[G],
    tags: Option<&[EntityTag]>,
) -> Result<EvalReport, EvalError>
where
    S: AsRef<str>,
    G: AsRef<str>,
{
    if system.len() != gold.len() || tags.is_some_and(|t| t.len() != gold.len()) {
        return Err(EvalError::Shape {
            system: system.len(),
            gold: gold.len(),
            tags: tags.map_or(gold.len(), <[EntityTag]>::len),
        });
    }
    let mut overall = Tally::default();
    let mut per_tag: BTreeMap<EntityTag, Tally> = BTreeMap::new();
    let mut translation = Tally::default();
    let mut transliteration = Tally::default();
    for (i, (sys, gold)) in system.iter().zip(gold).enumerate() {
        let gold = nfc(gold.as_ref().trim());
        let sys = nfc(sys.as_ref().trim());
        let has_reference = !gold.is_empty();
        let correct = has_reference && sys == gold;
        overall.add(correct, has_reference);
        if let Some(tags) = tags {
            let tag = tags[i];
            per_tag.entry(tag).or_default().add(correct, has_reference);
            match route(tag) {
                Route::Translate => translation.add(correct, has_reference),
                Route::Transliterate => transliteration.add(correct, has_reference),
            }
        }
    }
    let group = |t: &Tally| (tags.is_some() && t.total > 0).then(|| t.metrics());
    let translation = group(&translation);
    let transliteration = group(&transliteration);
    let average_accuracy_pct = match (&translation, &transliteration) {
        (Some(a), Some(b)) => Some((a.accuracy_pct + b.accuracy_pct) / 2.0),
        _ => None,
    };
    Ok(EvalReport {
        overall: overall.metrics(),
        per_tag: per_tag.into_iter().map(|(t, v)| (t, v.metrics())).collect(),
        translation,
        transliteration,
        average_accuracy_pct,
    })
}
