//! Helpers shared by the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use asp_lambda::asp::{AspLiteral, AspProgram, AspRule, Interpretation};
use asp_lambda::oracle::{enumerate_formulas, order_rows, EnumBudget};
use asp_lambda::{parse_term, Term};

pub fn p(s: &str) -> Term {
    parse_term(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Depth budget for the function side of each order row. Rows whose
/// function needs two abstractors plus a program get one more level.
pub const FUNCTION_DEPTH: [usize; 6] = [5, 6, 6, 5, 6, 6];
pub const ARGUMENT_DEPTH: usize = 5;

/// Enumerated functions and arguments for every order row.
pub fn row_pools() -> Vec<(Vec<Term>, Vec<Term>)> {
    order_rows()
        .into_iter()
        .zip(FUNCTION_DEPTH)
        .map(|((ft, gt), d)| {
            let fs = enumerate_formulas(&EnumBudget::new(ft, d));
            let gs = enumerate_formulas(&EnumBudget::new(gt, ARGUMENT_DEPTH));
            (fs, gs)
        })
        .collect()
}

/// Answer sets straight from the definitions, over every subset of the
/// literals: a consistent `S` qualifies when it is a minimal model of the
/// program with `not` evaluated against `S` itself.
pub fn answer_sets_by_subsets(p: &AspProgram) -> Vec<Interpretation> {
    let mut lits: Vec<AspLiteral> = p
        .rules
        .iter()
        .flat_map(|r| r.head.iter().chain(&r.pos).chain(&r.naf).cloned())
        .collect();
    lits.sort();
    lits.dedup();
    let n = lits.len();
    assert!(n <= 16, "too many literals for the subset oracle");
    let set = |mask: u32| -> Interpretation {
        (0..n).filter(|k| mask >> k & 1 == 1).map(|k| lits[k].clone()).collect()
    };
    let model_of = |s: &Interpretation, guess: &Interpretation| {
        p.rules.iter().all(|r: &AspRule| {
            if r.naf.iter().any(|l| guess.contains(l)) {
                return true;
            }
            let body = r.pos.iter().all(|l| s.contains(l));
            !body || r.head.iter().any(|l| s.contains(l))
        })
    };
    let mut out = Vec::new();
    for mask in 0..(1u32 << n) {
        let s = set(mask);
        if s.iter().any(|l| s.contains(&l.complement())) {
            continue;
        }
        if !model_of(&s, &s) {
            continue;
        }
        let smaller = (0..mask).any(|m| m & mask == m && m != mask && model_of(&set(m), &s));
        if !smaller {
            out.push(s);
        }
    }
    out.sort();
    out
}
