//! Inverse λ: given `H` and `G`, find `F` with `F @ G = H` ([`inverse_l`])
//! or `G @ F = H` ([`inverse_r`]).
//!
//! Each algorithm tries its four cases in order and returns the first
//! candidate that survives re-application. Candidates inside a case are
//! enumerated deterministically.

mod align;
mod matching;
mod replace;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::reduction::apply;
use crate::term::{alpha_eq, fresh_name, Path, Symbol, Term};
use crate::typecheck::{infer_type, is_beta_normal, is_formula};
use align::{align, generalize};
use matching::collect_matches;

pub use replace::replace;

/// Which case produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum InverseCase {
    L1,
    L2,
    L3,
    L4,
    R1,
    R2,
    R3,
    R4,
}

impl fmt::Display for InverseCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// `f` is `None` exactly when the algorithm returns null.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseResult {
    pub f: Option<Term>,
    pub case_used: Option<InverseCase>,
    pub verified: bool,
}

impl InverseResult {
    fn null() -> InverseResult {
        InverseResult {
            f: None,
            case_used: None,
            verified: false,
        }
    }

    fn found(f: Term, case: InverseCase) -> InverseResult {
        InverseResult {
            f: Some(f),
            case_used: Some(case),
            verified: true,
        }
    }

    pub fn is_null(&self) -> bool {
        self.f.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Role {
    H,
    G,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The inputs were not formulas in β-normal form. Distinct from a null
/// result, which means no inverse was found.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InverseError {
    #[error("{role} is not a formula: {reason}")]
    NotFormula { role: Role, reason: String },
    #[error("{role} is not in beta-normal form")]
    NotNormal { role: Role },
}

fn precheck(t: &Term, role: Role) -> Result<(), InverseError> {
    let reason = if let Some(v) = t.free_vars().into_iter().next() {
        Some(format!("free variable {v}"))
    } else if !t.is_lambda_i() {
        Some("an abstractor binds nothing".to_string())
    } else {
        infer_type(t).err().map(|e| e.to_string())
    };
    if let Some(reason) = reason {
        return Err(InverseError::NotFormula { role, reason });
    }
    if !is_beta_normal(t) {
        return Err(InverseError::NotNormal { role });
    }
    Ok(())
}

fn valid_shape(f: &Term) -> bool {
    is_formula(f) && is_beta_normal(f)
}

fn reproduces(fun: &Term, arg: &Term, h: &Term) -> bool {
    apply(fun, arg).map(|r| alpha_eq(&r, h)).unwrap_or(false)
}

/// Index sets to try: everything first, then smaller sets. Beyond a few
/// occurrences only the full set and the singletons are tried.
fn subsets(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return Vec::new();
    }
    if n > 10 {
        let mut out = vec![(0..n).collect::<Vec<_>>()];
        out.extend((0..n).map(|i| vec![i]));
        return out;
    }
    let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
    masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    masks
        .into_iter()
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

fn avoid_set(terms: &[&Term]) -> BTreeSet<Symbol> {
    terms.iter().flat_map(|t| t.names()).collect()
}

/// `F` with `F @ G` β-equal (up to α) to `H`, or null.
pub fn inverse_l(h: &Term, g: &Term) -> Result<InverseResult, InverseError> {
    precheck(h, Role::H)?;
    precheck(g, Role::G)?;
    Ok(search_l(h, g))
}

fn search_l(h: &Term, g: &Term) -> InverseResult {
    let ok = |f: &Term| valid_shape(f) && reproduces(f, g, h);
    let avoid = avoid_set(&[h, g]);

    if g.is_identity() {
        let v = fresh_name("v", &avoid);
        let f = Term::abs(v.clone(), Term::app(Term::Var(v), h.clone()));
        if ok(&f) {
            return InverseResult::found(f, InverseCase::L1);
        }
    }

    let occ = collect_matches(h, g, &[]);
    if !occ.is_empty() {
        let v = fresh_name("v", &avoid);
        for set in subsets(occ.len()) {
            let repls: Vec<(Path, Term)> = set.iter().map(|&i| (occ[i].path.clone(), Term::Var(v.clone()))).collect();
            let f = Term::abs(v.clone(), replace::replace_paths(h, &repls));
            if ok(&f) {
                return InverseResult::found(f, InverseCase::L2);
            }
        }
    }

    let (gvars, gbody) = g.strip_binders();
    if !gvars.is_empty() && !g.is_identity() {
        let w = fresh_name("w", &avoid);
        for s in (1..=gvars.len()).rev() {
            let pat = Term::abs_many(gvars[s..].iter().cloned(), gbody.clone());
            let vars = &gvars[..s];
            let occ = collect_matches(h, &pat, vars);
            let occ: Vec<_> = occ
                .into_iter()
                .filter(|o| vars.iter().all(|v| o.bindings.contains_key(v)))
                .collect();
            for set in subsets(occ.len()) {
                let repls: Vec<(Path, Term)> = set
                    .iter()
                    .map(|&i| {
                        let args = vars.iter().map(|v| occ[i].bindings[v].clone());
                        (occ[i].path.clone(), Term::apps(Term::Var(w.clone()), args))
                    })
                    .collect();
                let f = Term::abs(w.clone(), replace::replace_paths(h, &repls));
                if ok(&f) {
                    return InverseResult::found(f, InverseCase::L3);
                }
            }
        }
    }

    if let Term::Abs { binder: gw, body: k, .. } = g {
        let (hvars, _) = h.strip_binders();
        for i in (0..=hvars.len()).rev() {
            let mut j = h;
            for _ in 0..i {
                if let Term::Abs { body, .. } = j {
                    j = body;
                }
            }
            for alignment in align(k, j, gw) {
                let Some(site) = alignment.first() else { continue };
                let mut local = avoid.clone();
                local.extend(site.host.names());
                let zs = fresh_names("z", site.args.len(), &mut local);
                let w = fresh_name("w", &local);
                for body in generalize(&site.host, &site.args, &zs, true, 256) {
                    let p = Term::abs_many(zs.iter().cloned(), body);
                    let inner = Term::abs_many(hvars[..i].iter().cloned(), Term::app(Term::Var(w.clone()), p));
                    let f = Term::abs(w.clone(), inner);
                    if ok(&f) {
                        return InverseResult::found(f, InverseCase::L4);
                    }
                }
            }
        }
    }

    InverseResult::null()
}

/// `base` alone when one name is needed, else `base1`, `base2`, ...
fn fresh_names(base: &str, n: usize, avoid: &mut BTreeSet<Symbol>) -> Vec<Symbol> {
    let stem = if n == 1 { base.to_string() } else { format!("{base}1") };
    (0..n)
        .map(|_| {
            let s = fresh_name(&stem, avoid);
            avoid.insert(s.clone());
            s
        })
        .collect()
}

/// `F` with `G @ F` β-equal (up to α) to `H`, or null.
pub fn inverse_r(h: &Term, g: &Term) -> Result<InverseResult, InverseError> {
    precheck(h, Role::H)?;
    precheck(g, Role::G)?;
    Ok(search_r(h, g))
}

fn search_r(h: &Term, g: &Term) -> InverseResult {
    let ok = |f: &Term| valid_shape(f) && reproduces(g, f, h);
    let Term::Abs { binder: w, body: k, .. } = g else {
        return InverseResult::null();
    };

    if let Term::App(head, j) = k.as_ref() {
        if matches!(head.as_ref(), Term::Var(v) if v == w) && !j.has_free_var(w) {
            let r = search_l(h, j);
            if let Some(f) = r.f {
                if ok(&f) {
                    return InverseResult::found(f, InverseCase::R1);
                }
            }
        }
    }

    let alignments = align(k, h, w);

    for a in &alignments {
        let Some(first) = a.first() else { continue };
        if a.iter().all(|s| s.args.is_empty() && alpha_eq(&s.host, &first.host)) {
            let f = first.host.clone();
            if ok(&f) {
                return InverseResult::found(f, InverseCase::R2);
            }
        }
    }

    let avoid = avoid_set(&[h, g]);
    for higher_order in [false, true] {
        for a in &alignments {
            let Some(site) = a.first() else { continue };
            if site.args.is_empty() {
                continue;
            }
            if higher_order && !site.args.iter().any(|x| matches!(x, Term::Abs { .. })) {
                continue;
            }
            let mut local = avoid.clone();
            local.extend(site.host.names());
            let base = if higher_order { "w" } else { "v" };
            let zs = fresh_names(base, site.args.len(), &mut local);
            for body in generalize(&site.host, &site.args, &zs, higher_order, 256) {
                let f = Term::abs_many(zs.iter().cloned(), body);
                if ok(&f) {
                    let case = if higher_order { InverseCase::R4 } else { InverseCase::R3 };
                    return InverseResult::found(f, case);
                }
            }
        }
    }

    InverseResult::null()
}
