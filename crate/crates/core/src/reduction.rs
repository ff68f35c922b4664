//! Capture-avoiding substitution and β-reduction.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::term::{fresh_name, Symbol, Term};
use crate::typecheck::{infer_type, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// `body[x := n]`, renaming binders of `body` that would capture a free
/// variable of `n`.
pub fn substitute(body: &Term, x: &Symbol, n: &Term) -> Term {
    let fv = n.free_vars();
    subst(body, x, n, &fv)
}

fn subst(t: &Term, x: &Symbol, n: &Term, fv_n: &BTreeSet<Symbol>) -> Term {
    match t {
        Term::Var(y) if y == x => n.clone(),
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::Abs { binder, ty, body } => {
            if binder == x || !body.has_free_var(x) {
                return t.clone();
            }
            if fv_n.contains(binder) {
                let mut avoid = fv_n.clone();
                avoid.extend(body.names());
                avoid.insert(x.clone());
                let fresh = fresh_name(binder.as_str(), &avoid);
                let renamed = subst(body, binder, &Term::Var(fresh.clone()), &BTreeSet::from([fresh.clone()]));
                return Term::abs_typed(fresh, ty.clone(), subst(&renamed, x, n, fv_n));
            }
            Term::abs_typed(binder.clone(), ty.clone(), subst(body, x, n, fv_n))
        }
        _ => {
            if !t.has_free_var(x) {
                return t.clone();
            }
            t.map_children(|c| subst(c, x, n, fv_n))
        }
    }
}

fn contract(redex_fun: &Term, arg: &Term) -> Option<Term> {
    match redex_fun {
        Term::Abs { binder, body, .. } => Some(substitute(body, binder, arg)),
        _ => None,
    }
}

fn whnf(t: &Term) -> Term {
    match t {
        Term::App(f, a) => {
            let f = whnf(f);
            match contract(&f, a) {
                Some(r) => whnf(&r),
                None => Term::app(f, (**a).clone()),
            }
        }
        _ => t.clone(),
    }
}

/// β-normal form by leftmost-outermost reduction. Does not check types;
/// an untypable term may not terminate.
pub fn normalize_unchecked(t: &Term) -> Term {
    let t = whnf(t);
    match &t {
        Term::Var(_) | Term::Const(_) => t,
        Term::Abs { binder, ty, body } => {
            Term::abs_typed(binder.clone(), ty.clone(), normalize_unchecked(body))
        }
        _ => t.map_children(normalize_unchecked),
    }
}

/// β-normal form by innermost reduction: arguments are normalized before
/// they are substituted.
pub fn normalize_innermost(t: &Term) -> Term {
    let t = t.map_children(normalize_innermost);
    match &t {
        Term::App(f, a) => match contract(f, a) {
            Some(r) => normalize_innermost(&r),
            None => t,
        },
        _ => t,
    }
}

/// One leftmost-outermost β-step, or `None` when `t` is normal.
pub fn step(t: &Term) -> Option<Term> {
    if let Term::App(f, a) = t {
        if let Some(r) = contract(f, a) {
            return Some(r);
        }
    }
    for (i, c) in t.children() {
        if let Some(c2) = step(c) {
            let mut done = false;
            return Some(t.map_children_indexed(|j, child| {
                if j == i && !done {
                    done = true;
                    c2.clone()
                } else {
                    child.clone()
                }
            }));
        }
    }
    None
}

/// Type checks `t`, then returns its β-normal form.
pub fn normalize(t: &Term) -> Result<Term, ReduceError> {
    infer_type(t)?;
    Ok(normalize_unchecked(t))
}

/// `normalize(f @ g)`. The application is typed as a whole, so
/// unannotated binders on either side are solved jointly.
pub fn apply(f: &Term, g: &Term) -> Result<Term, ReduceError> {
    normalize(&Term::app(f.clone(), g.clone()))
}
