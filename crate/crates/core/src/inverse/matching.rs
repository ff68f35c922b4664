//! First-order matching of a pattern (a term with designated variables)
//! against sub-terms of a host.
//!
//! A pattern variable standing directly as a list element may absorb a run
//! of one or more elements; shorter runs are tried first.

use std::collections::BTreeMap;

use crate::term::{alpha_eq, AlphaEnv, Path, Symbol, Term};

pub(crate) type Bindings = BTreeMap<Symbol, Term>;

const MAX_SOLUTIONS: usize = 16;

#[derive(Debug, Clone)]
pub(crate) struct Occurrence {
    pub path: Path,
    pub bindings: Bindings,
}

/// All ways `pat` matches `t` (capped).
pub(crate) fn match_all(pat: &Term, vars: &[Symbol], t: &Term) -> Vec<Bindings> {
    let mut env = AlphaEnv::default();
    m(pat, t, vars, &mut env, Bindings::new())
}

fn pattern_var<'a>(p: &'a Term, vars: &[Symbol], env: &AlphaEnv) -> Option<&'a Symbol> {
    match p {
        Term::Var(x) if vars.contains(x) && !env.left.contains(x) => Some(x),
        _ => None,
    }
}

fn bind(x: &Symbol, t: &Term, env: &AlphaEnv, mut b: Bindings) -> Option<Bindings> {
    if t.free_vars().iter().any(|v| env.right.contains(v)) {
        return None;
    }
    match b.get(x) {
        Some(prev) => alpha_eq(prev, t).then_some(b),
        None => {
            b.insert(x.clone(), t.clone());
            Some(b)
        }
    }
}

fn seq(ps: &[&Term], ts: &[&Term], vars: &[Symbol], env: &mut AlphaEnv, b: Bindings) -> Vec<Bindings> {
    if ps.len() != ts.len() {
        return Vec::new();
    }
    let mut sols = vec![b];
    for (p, t) in ps.iter().zip(ts) {
        let mut next = Vec::new();
        for s in sols {
            next.extend(m(p, t, vars, env, s));
            if next.len() >= MAX_SOLUTIONS {
                break;
            }
        }
        sols = next;
        if sols.is_empty() {
            break;
        }
    }
    sols
}

fn m(p: &Term, t: &Term, vars: &[Symbol], env: &mut AlphaEnv, b: Bindings) -> Vec<Bindings> {
    if let Some(x) = pattern_var(p, vars, env) {
        return bind(x, t, env, b).into_iter().collect();
    }
    match (p, t) {
        (Term::Var(x), Term::Var(y)) if env.vars_match(x, y) => vec![b],
        (Term::Const(x), Term::Const(y)) if x == y => vec![b],
        (Term::Abs { binder: x, body: bp, .. }, Term::Abs { binder: y, body: bt, .. }) => {
            env.push(x.clone(), y.clone());
            let r = m(bp, bt, vars, env, b);
            env.pop();
            r
        }
        (Term::App(f1, a1), Term::App(f2, a2)) => seq(&[f1, a1], &[f2, a2], vars, env, b),
        (Term::Func(s1, x1), Term::Func(s2, x2)) | (Term::Atom(s1, x1), Term::Atom(s2, x2))
            if s1 == s2 =>
        {
            let ps: Vec<&Term> = x1.iter().collect();
            let ts: Vec<&Term> = x2.iter().collect();
            seq(&ps, &ts, vars, env, b)
        }
        (Term::CNeg(x), Term::CNeg(y)) | (Term::Naf(x), Term::Naf(y)) => m(x, y, vars, env, b),
        (Term::Rule { head: h1, body: b1 }, Term::Rule { head: h2, body: b2 })
            if h1.is_some() == h2.is_some() && b1.is_some() == b2.is_some() =>
        {
            let ps: Vec<&Term> = h1.iter().chain(b1.iter()).map(|x| x.as_ref()).collect();
            let ts: Vec<&Term> = h2.iter().chain(b2.iter()).map(|x| x.as_ref()).collect();
            seq(&ps, &ts, vars, env, b)
        }
        _ => match (p.as_list(), t.as_list()) {
            (Some((k1, ps)), Some((k2, ts))) if k1 == k2 => {
                let mut out = Vec::new();
                list(k1, ps, ts, vars, env, b, &mut out);
                out
            }
            _ => Vec::new(),
        },
    }
}

fn list(
    kind: crate::term::ListKind,
    ps: &[Term],
    ts: &[Term],
    vars: &[Symbol],
    env: &mut AlphaEnv,
    b: Bindings,
    out: &mut Vec<Bindings>,
) {
    if out.len() >= MAX_SOLUTIONS {
        return;
    }
    let Some((p0, rest)) = ps.split_first() else {
        if ts.is_empty() {
            out.push(b);
        }
        return;
    };
    if ts.len() < ps.len() {
        return;
    }
    if let Some(x) = pattern_var(p0, vars, env) {
        for len in 1..=(ts.len() - rest.len()) {
            let run = Term::list(kind, ts[..len].iter().cloned());
            if let Some(b2) = bind(x, &run, env, b.clone()) {
                list(kind, rest, &ts[len..], vars, env, b2, out);
            }
        }
        return;
    }
    for b2 in m(p0, &ts[0], vars, env, b) {
        list(kind, rest, &ts[1..], vars, env, b2, out);
    }
}

/// Leftmost-outermost, pairwise disjoint occurrences of `pat` in `h`. A
/// matching node is not searched further. Within a list, shorter runs are
/// preferred over longer ones.
pub(crate) fn collect_matches(h: &Term, pat: &Term, vars: &[Symbol]) -> Vec<Occurrence> {
    let mut out = Vec::new();
    walk(h, &Path::root(), pat, vars, &mut out);
    out
}

fn walk(t: &Term, path: &Path, pat: &Term, vars: &[Symbol], out: &mut Vec<Occurrence>) {
    if let Some(b) = match_all(pat, vars, t).into_iter().next() {
        out.push(Occurrence {
            path: path.clone(),
            bindings: b,
        });
        return;
    }
    if let Some((kind, items)) = t.as_list() {
        let n = items.len();
        let mut i = 0;
        'outer: while i < n {
            for len in 2..(n - i + 1).min(n) {
                let run = Term::list(kind, items[i..i + len].iter().cloned());
                if let Some(b) = match_all(pat, vars, &run).into_iter().next() {
                    out.push(Occurrence {
                        path: path.slice(i, len),
                        bindings: b,
                    });
                    i += len;
                    continue 'outer;
                }
            }
            walk(&items[i], &path.child(i), pat, vars, out);
            i += 1;
        }
        return;
    }
    for (i, c) in t.children() {
        walk(c, &path.child(i), pat, vars, out);
    }
}
