//! End-to-end summary table: explicit automata, detector bounds and optimizer
//! values side by side, with a pass flag per row.

use std::fmt::Write as _;

use serde::Serialize;

use crate::alphabet::enumerate_words;
use crate::automata::{build_aplus, build_construction5, build_kcycles, Language, NamedAutomaton};
use crate::bounds;
use crate::detector::{analyze, ConstructionKind, DEFAULT_K_MAX};
use crate::error::Result;
use crate::optimizer::{solve_problem1, solve_problem2, solve_problem3};

pub const MARGIN_TOL: f64 = 1e-9;
pub const CLOSED_FORM_TOL: f64 = 1e-12;
/// Accepted range for the Problem 2 optimum.
pub const PROBLEM2_RANGE: (f64, f64) = (0.6892, 0.6896);

#[derive(Clone, Copy, Debug)]
pub struct ReproduceOptions {
    pub dim: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions {
            dim: 6,
            restarts: 200,
            seed: 7,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub language: String,
    pub construction: String,
    /// `None` when the language has no QFA at all.
    pub bound: Option<f64>,
    pub detected_bound: f64,
    pub margin: Option<f64>,
    pub optimizer: Option<f64>,
    pub pass: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Reproduction {
    pub rows: Vec<Row>,
    pub seed: u64,
    pub restarts: usize,
}

impl Reproduction {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data always serializes")
    }

    pub fn table(&self) -> String {
        let cell = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.7}"));
        let mut out = format!(
            "{:<14} {:<20} {:>10} {:>10} {:>10} {:>10}  status\n",
            "language", "construction", "bound", "detected", "margin", "optimizer"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<14} {:<20} {:>10} {:>10.7} {:>10} {:>10}  {}",
                r.language,
                r.construction,
                r.bound.map_or_else(|| "none".to_string(), |v| format!("{v:.7}")),
                r.detected_bound,
                cell(r.margin),
                cell(r.optimizer),
                if r.pass { "PASS".to_string() } else { format!("FAIL: {}", r.failures.join("; ")) }
            );
        }
        out
    }
}

struct RowBuilder {
    row: Row,
}

impl RowBuilder {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.row.failures.push(what());
        }
    }

    fn finish(mut self) -> Row {
        self.row.pass = self.row.failures.is_empty();
        self.row
    }
}

fn margin(auto: &NamedAutomaton, max_len: usize) -> Result<f64> {
    let words = enumerate_words(auto.qfa.alphabet.len(), max_len);
    auto.qfa.recognition_margin(&auto.oracle, &words)
}

fn detector_row(language: Language, label: &str, kind: ConstructionKind, bound: Option<f64>) -> Result<RowBuilder> {
    let k_max = match language {
        Language::L1(k) => k.max(DEFAULT_K_MAX),
        _ => DEFAULT_K_MAX,
    };
    let dfa = language.dfa();
    let report = analyze(&dfa, k_max)?;
    let mut b = RowBuilder {
        row: Row {
            language: label.to_string(),
            construction: kind.to_string(),
            bound,
            detected_bound: report.bound,
            margin: None,
            optimizer: None,
            pass: false,
            failures: Vec::new(),
        },
    };
    b.check(report.of_kind(kind).next().is_some(), || format!("no {kind} witness"));
    b.check(report.witnesses.iter().all(|w| w.replay(&report.minimal)), || {
        "a witness does not replay".into()
    });
    match bound {
        Some(p) => b.check((report.bound - p).abs() <= MARGIN_TOL, || {
            format!("detected bound {} != {p}", report.bound)
        }),
        None => b.check(!report.qfa_recognizable, || "expected qfa_recognizable = false".into()),
    }
    Ok(b)
}

/// Builds every automaton, runs margins, detectors and optimizers.
pub fn reproduce(opts: &ReproduceOptions) -> Result<Reproduction> {
    let mut rows = Vec::new();

    let p1 = solve_problem1()?;
    let mut b = detector_row(Language::APlus, "a+", ConstructionKind::OneCycle, Some(bounds::one_cycle()))?;
    let m = margin(&build_aplus(), 6)?;
    b.row.margin = Some(m);
    b.row.optimizer = Some(p1.p);
    b.check((m - bounds::one_cycle()).abs() <= MARGIN_TOL, || format!("margin {m}"));
    b.check((p1.p - bounds::one_cycle()).abs() <= CLOSED_FORM_TOL, || format!("optimizer {}", p1.p));
    rows.push(b.finish());

    let p2 = solve_problem2(opts.dim, opts.restarts, opts.seed)?;
    let mut b = detector_row(
        Language::AStarBStar,
        "a*b*",
        ConstructionKind::TwoCyclesRow,
        Some(bounds::TWO_CYCLES_ROW),
    )?;
    b.row.optimizer = Some(p2.p);
    let (lo, hi) = PROBLEM2_RANGE;
    b.check((lo..=hi).contains(&p2.p), || format!("optimizer {:.10} outside [{lo}, {hi}]", p2.p));
    b.check(p2.residual <= 1e-8, || format!("residual {:e}", p2.residual));
    rows.push(b.finish());

    for k in 2..=4 {
        let p = bounds::parallel_cycles(k);
        let mut b = detector_row(Language::L1(k), &format!("L1(k={k})"), ConstructionKind::ParallelCycles(k), Some(p))?;
        let m = margin(&build_kcycles(k)?, 4)?;
        b.row.margin = Some(m);
        b.check((m - p).abs() <= MARGIN_TOL, || format!("margin {m}"));
        rows.push(b.finish());
    }

    let p3 = solve_problem3()?;
    let p = bounds::incomparable_pair();
    let mut b = detector_row(Language::EpsAPlusB, "e+a+b(a|b)*", ConstructionKind::IncomparablePair, Some(p))?;
    let m = margin(&build_construction5(), 6)?;
    b.row.margin = Some(m);
    b.row.optimizer = Some(p3.p);
    b.check((m - p).abs() <= MARGIN_TOL, || format!("margin {m}"));
    b.check((p3.p - p).abs() <= CLOSED_FORM_TOL, || format!("optimizer {}", p3.p));
    rows.push(b.finish());

    rows.push(detector_row(Language::EndsInA, "(a|b)*a", ConstructionKind::ReturnCycle, None)?.finish());

    Ok(Reproduction {
        rows,
        seed: opts.seed,
        restarts: opts.restarts,
    })
}
