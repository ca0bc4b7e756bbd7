//! JSON report documents for the command-line interface.
//!
//! Scalars and matrices are serialized as exact literal strings, fractional
//! values as `{"num": …, "den": …}`, never as floating point. Identical
//! inputs and flags produce byte-identical documents apart from the
//! `version` field.

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

use crate::field::Rational;
use crate::matrix::ExactMatrix;
use crate::minrank::{MrMethod, RankReport};
use crate::partial::{PartialMatrix, Pattern};
use crate::patterns::{
    bipartite_graph, is_triangular, maximal_triangular_subpatterns, minimal_cycles,
    recognize_cycle_pattern, DEFAULT_NODE_BUDGET,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Listing cap for enumerated subpatterns in `analyze` output.
const SUBPATTERN_LIST_CAP: usize = 32;

#[derive(Serialize, Clone, Debug)]
pub struct RationalJson {
    pub num: Value,
    pub den: Value,
}

impl RationalJson {
    pub fn from_rational(r: &Rational) -> RationalJson {
        let to_value = |b: &num_bigint::BigInt| -> Value {
            match b.to_i64() {
                Some(v) => Value::from(v),
                None => Value::from(b.to_string()),
            }
        };
        RationalJson {
            num: to_value(r.numer()),
            den: to_value(r.denom()),
        }
    }
}

fn matrix_rows(m: &ExactMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn pattern_positions(p: &Pattern) -> Vec<(usize, usize)> {
    p.iter().collect()
}

#[derive(Serialize, Clone, Debug)]
pub struct InputInfo {
    pub file: String,
    pub field: String,
    pub rows: usize,
    pub cols: usize,
    pub knowns: usize,
}

impl InputInfo {
    pub fn new(file: &str, a: &PartialMatrix) -> InputInfo {
        InputInfo {
            file: file.to_string(),
            field: a.spec().to_string(),
            rows: a.rows(),
            cols: a.cols(),
            knowns: a.pattern().len(),
        }
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct Classification {
    /// triangular | cycle | zero-cycle | general
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle_n: Option<usize>,
    pub bipartite_chordal: bool,
    pub chordality_exhaustive: bool,
    /// Chordless cycles of length ≥ 6, each as vertex names r<i>/c<j>.
    pub minimal_cycles: Vec<Vec<String>>,
    pub maximal_triangular_count: usize,
    pub maximal_triangular_exhaustive: bool,
    /// Listed only up to a cap; positions are 1-based (row, col) pairs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximal_triangular: Option<Vec<Vec<(usize, usize)>>>,
}

pub fn classify(a: &PartialMatrix) -> Classification {
    let kind = if is_triangular(a.pattern()) {
        "triangular"
    } else if recognize_cycle_pattern(a.pattern()).is_some() {
        if a.values().any(|(_, v)| v.is_zero()) {
            "zero-cycle"
        } else {
            "cycle"
        }
    } else {
        "general"
    };
    let cycle_n = recognize_cycle_pattern(a.pattern()).map(|f| f.n);
    let graph = bipartite_graph(a.pattern());
    let cycles = minimal_cycles(&graph, 6, DEFAULT_NODE_BUDGET);
    let subpatterns = maximal_triangular_subpatterns(a.pattern(), DEFAULT_NODE_BUDGET);
    let mut listed = subpatterns.patterns.clone();
    listed.sort();
    Classification {
        kind: kind.to_string(),
        cycle_n,
        bipartite_chordal: cycles.cycles.is_empty(),
        chordality_exhaustive: cycles.exhaustive,
        minimal_cycles: cycles
            .cycles
            .iter()
            .map(|c| c.iter().map(|v| v.to_string()).collect())
            .collect(),
        maximal_triangular_count: listed.len(),
        maximal_triangular_exhaustive: subpatterns.exhaustive,
        maximal_triangular: (listed.len() <= SUBPATTERN_LIST_CAP)
            .then(|| listed.iter().map(pattern_positions).collect()),
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct TmrJson {
    pub value: usize,
    pub exact: bool,
}

#[derive(Serialize, Clone, Debug)]
pub struct MrJson {
    pub value: usize,
    pub method: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct Ranks {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tmr: Option<TmrJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mr: Option<MrJson>,
    pub mr_b: BTreeMap<usize, usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub mr_b_skipped: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fmr: Option<RationalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fmr_lower: Option<RationalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fmr_upper: Option<RationalJson>,
}

#[derive(Serialize, Clone, Debug)]
pub struct WitnessJson {
    pub label: String,
    pub rank: usize,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Serialize, Clone, Debug, Default)]
pub struct CertificatesJson {
    pub witnesses: Vec<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tmr_witness: Option<Vec<(usize, usize)>>,
}

#[derive(Serialize, Clone, Debug)]
pub struct ReportDocument {
    pub schema: u32,
    pub version: String,
    pub input: InputInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranks: Option<Ranks>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificates: Option<CertificatesJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ReportDocument {
    pub fn new(file: &str, a: &PartialMatrix) -> ReportDocument {
        ReportDocument {
            schema: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION").to_string(),
            input: InputInfo::new(file, a),
            classification: None,
            ranks: None,
            certificates: None,
            notes: Vec::new(),
        }
    }

    pub fn with_ranks(mut self, report: &RankReport) -> ReportDocument {
        let method = |m: MrMethod| -> String {
            match m {
                MrMethod::BruteForce => "brute-force".into(),
                MrMethod::TriangularFormula => "triangular-formula".into(),
                MrMethod::CycleInvariant => "cycle-invariant".into(),
                MrMethod::ZeroCycle => "zero-cycle".into(),
            }
        };
        self.ranks = Some(Ranks {
            tmr: report.tmr.map(|value| TmrJson {
                value,
                exact: report.tmr_exhaustive,
            }),
            mr: report.mr.as_ref().map(|m| MrJson {
                value: m.value,
                method: method(m.method),
            }),
            mr_b: report.mr_b.clone(),
            mr_b_skipped: report.mr_b_skipped.clone(),
            fmr: report.fmr_exact.as_ref().map(RationalJson::from_rational),
            fmr_lower: report
                .fmr_bounds
                .as_ref()
                .map(|(lo, _)| RationalJson::from_rational(lo)),
            fmr_upper: report
                .fmr_bounds
                .as_ref()
                .map(|(_, hi)| RationalJson::from_rational(hi)),
        });
        self.certificates = Some(CertificatesJson {
            witnesses: report
                .witnesses
                .iter()
                .map(|w| WitnessJson {
                    label: w.label.clone(),
                    rank: w.claimed_rank,
                    matrix: matrix_rows(&w.completion),
                })
                .collect(),
            tmr_witness: report.tmr_witness.as_ref().map(pattern_positions),
        });
        self.notes.extend(report.notes.iter().cloned());
        self
    }

    pub fn with_classification(mut self, a: &PartialMatrix) -> ReportDocument {
        self.classification = Some(classify(a));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Sidecar document written next to constructed completions.
#[derive(Serialize, Clone, Debug)]
pub struct CompletionSidecar {
    pub schema: u32,
    pub version: String,
    pub rank: usize,
}

impl CompletionSidecar {
    pub fn new(rank: usize) -> CompletionSidecar {
        CompletionSidecar {
            schema: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION").to_string(),
            rank,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sidecar serializes")
    }
}
