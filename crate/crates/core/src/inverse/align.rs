//! Aligning a template that mentions a hole variable `w` against a host, and
//! abstracting sub-terms out of a host.

use std::collections::BTreeSet;

use super::matching::collect_matches;
use crate::reduction::substitute;
use crate::term::{fresh_name, AlphaEnv, ListKind, Path, Symbol, Term};

const MAX_ALIGNMENTS: usize = 64;

/// A spot where the template has `w @ a1 @ ... @ an` and the host has `host`.
/// The arguments are renamed into the host's variable names.
#[derive(Debug, Clone)]
pub(crate) struct Site {
    pub host: Term,
    pub args: Vec<Term>,
}

pub(crate) type Alignment = Vec<Site>;

/// Every way of reading `host` as `template` with each application of `w`
/// standing for some sub-term of `host`. Outside those applications the two
/// must agree up to renaming of bound variables.
pub(crate) fn align(template: &Term, host: &Term, w: &Symbol) -> Vec<Alignment> {
    let mut env = AlphaEnv::default();
    al(template, host, w, &mut env)
}

fn w_spine<'a>(t: &'a Term, w: &Symbol, env: &AlphaEnv) -> Option<Vec<&'a Term>> {
    let (head, args) = t.app_spine();
    match head {
        Term::Var(x) if x == w && !env.left.contains(w) => Some(args),
        _ => None,
    }
}

fn mentions_w(t: &Term, w: &Symbol, env: &AlphaEnv) -> bool {
    !env.left.contains(w) && t.has_free_var(w)
}

/// Renames template-bound variables in `t` to their host counterparts.
fn translate(t: &Term, env: &AlphaEnv) -> Term {
    let mut pairs: Vec<(Symbol, Symbol)> = Vec::new();
    for (l, r) in env.left.iter().zip(&env.right) {
        pairs.retain(|(x, _)| x != l);
        pairs.push((l.clone(), r.clone()));
    }
    pairs.retain(|(l, r)| l != r && t.has_free_var(l));
    if pairs.is_empty() {
        return t.clone();
    }
    let mut avoid: BTreeSet<Symbol> = t.names();
    avoid.extend(env.left.iter().cloned());
    avoid.extend(env.right.iter().cloned());
    let mut out = t.clone();
    let mut temps = Vec::new();
    for (l, _) in &pairs {
        let tmp = fresh_name("tmp", &avoid);
        avoid.insert(tmp.clone());
        out = substitute(&out, l, &Term::Var(tmp.clone()));
        temps.push(tmp);
    }
    for (tmp, (_, r)) in temps.iter().zip(&pairs) {
        out = substitute(&out, tmp, &Term::Var(r.clone()));
    }
    out
}

fn product(parts: Vec<Vec<Alignment>>) -> Vec<Alignment> {
    let mut acc: Vec<Alignment> = vec![Vec::new()];
    for alts in parts {
        let mut next = Vec::new();
        'fill: for a in &acc {
            for b in &alts {
                let mut c = a.clone();
                c.extend(b.iter().cloned());
                next.push(c);
                if next.len() >= MAX_ALIGNMENTS {
                    break 'fill;
                }
            }
        }
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    acc
}

fn al(k: &Term, j: &Term, w: &Symbol, env: &mut AlphaEnv) -> Vec<Alignment> {
    if let Some(args) = w_spine(k, w, env) {
        if args.iter().any(|a| mentions_w(a, w, env)) {
            return Vec::new();
        }
        return vec![vec![Site {
            host: j.clone(),
            args: args.into_iter().map(|a| translate(a, env)).collect(),
        }]];
    }
    if !mentions_w(k, w, env) {
        return if env.alpha_eq(k, j) { vec![Vec::new()] } else { Vec::new() };
    }
    match (k, j) {
        (Term::Abs { binder: x, body: bk, .. }, Term::Abs { binder: y, body: bj, .. }) => {
            env.push(x.clone(), y.clone());
            let r = al(bk, bj, w, env);
            env.pop();
            r
        }
        (Term::App(f1, a1), Term::App(f2, a2)) => {
            let parts = vec![al(f1, f2, w, env), al(a1, a2, w, env)];
            product(parts)
        }
        (Term::Func(s1, x1), Term::Func(s2, x2)) | (Term::Atom(s1, x1), Term::Atom(s2, x2))
            if s1 == s2 && x1.len() == x2.len() =>
        {
            let parts = x1.iter().zip(x2).map(|(a, b)| al(a, b, w, env)).collect();
            product(parts)
        }
        (Term::CNeg(x), Term::CNeg(y)) | (Term::Naf(x), Term::Naf(y)) => al(x, y, w, env),
        (Term::Rule { head: h1, body: b1 }, Term::Rule { head: h2, body: b2 })
            if h1.is_some() == h2.is_some() && b1.is_some() == b2.is_some() =>
        {
            let mut parts = Vec::new();
            if let (Some(a), Some(b)) = (h1, h2) {
                parts.push(al(a, b, w, env));
            }
            if let (Some(a), Some(b)) = (b1, b2) {
                parts.push(al(a, b, w, env));
            }
            product(parts)
        }
        _ => match (k.as_list(), j.as_list()) {
            (Some((k1, ks)), Some((k2, js))) if k1 == k2 => {
                let mut out = Vec::new();
                list(k1, ks, js, w, env, Vec::new(), &mut out);
                out
            }
            _ => Vec::new(),
        },
    }
}

fn list(
    kind: ListKind,
    ks: &[Term],
    js: &[Term],
    w: &Symbol,
    env: &mut AlphaEnv,
    acc: Alignment,
    out: &mut Vec<Alignment>,
) {
    if out.len() >= MAX_ALIGNMENTS {
        return;
    }
    let Some((k0, rest)) = ks.split_first() else {
        if js.is_empty() {
            out.push(acc);
        }
        return;
    };
    if js.len() < ks.len() {
        return;
    }
    if w_spine(k0, w, env).is_some() {
        for len in 1..=(js.len() - rest.len()) {
            let run = Term::list(kind, js[..len].iter().cloned());
            for a in al(k0, &run, w, env) {
                let mut next = acc.clone();
                next.extend(a);
                list(kind, rest, &js[len..], w, env, next, out);
            }
        }
        return;
    }
    for a in al(k0, &js[0], w, env) {
        let mut next = acc.clone();
        next.extend(a);
        list(kind, rest, &js[1..], w, env, next, out);
    }
}

/// One place in a host where an argument can be abstracted out, and what
/// replaces it for each argument that fits there.
struct Spot {
    path: Path,
    options: Vec<(usize, Term)>,
}

fn spots(host: &Term, args: &[Term], zs: &[Symbol], higher_order: bool) -> Vec<Spot> {
    let mut found: Vec<Spot> = Vec::new();
    for (p, arg) in args.iter().enumerate() {
        let mut hits: Vec<(Path, Term)> = collect_matches(host, arg, &[])
            .into_iter()
            .map(|o| (o.path, Term::Var(zs[p].clone())))
            .collect();
        if higher_order {
            if let Term::Abs { .. } = arg {
                let (vars, body) = arg.strip_binders();
                if !matches!(body, Term::Var(x) if vars.contains(x)) {
                    for o in collect_matches(host, body, &vars) {
                        if hits.iter().any(|(q, _)| *q == o.path) {
                            continue;
                        }
                        let Some(actuals) = vars.iter().map(|v| o.bindings.get(v).cloned()).collect::<Option<Vec<_>>>() else {
                            continue;
                        };
                        hits.push((o.path, Term::apps(Term::Var(zs[p].clone()), actuals)));
                    }
                }
            }
        }
        for (path, repl) in hits {
            match found.iter_mut().find(|s| s.path == path) {
                Some(s) => s.options.push((p, repl)),
                None => found.push(Spot {
                    path,
                    options: vec![(p, repl)],
                }),
            }
        }
    }
    found.sort_by(|a, b| a.path.cmp(&b.path));
    found
}

fn overlaps(a: &Path, b: &Path) -> bool {
    use crate::term::Step;
    let n = a.0.len().min(b.0.len());
    for i in 0..n {
        match (a.0[i], b.0[i]) {
            (x, y) if x == y => continue,
            (Step::Child(c), Step::Slice { start, len }) | (Step::Slice { start, len }, Step::Child(c)) => {
                return c >= start && c < start + len;
            }
            (Step::Slice { start: s1, len: l1 }, Step::Slice { start: s2, len: l2 }) => {
                return s1 < s2 + l2 && s2 < s1 + l1;
            }
            _ => return false,
        }
    }
    true
}

/// Bodies `B` such that `(λz1..zn.B) @ a1 @ ... @ an` reduces back to
/// `host`: chosen occurrences of each `ai` become `zi` (with higher-order
/// arguments, instances of their bodies become applications of `zi`).
/// Every `zi` is used. Fuller abstractions come first.
pub(crate) fn generalize(
    host: &Term,
    args: &[Term],
    zs: &[Symbol],
    higher_order: bool,
    cap: usize,
) -> Vec<Term> {
    let spots = spots(host, args, zs, higher_order);
    let mut out = Vec::new();
    let mut chosen: Vec<(Path, Term, usize)> = Vec::new();
    choose(&spots, 0, &mut chosen, args.len(), host, cap, &mut out);
    out
}

fn choose(
    spots: &[Spot],
    i: usize,
    chosen: &mut Vec<(Path, Term, usize)>,
    n_args: usize,
    host: &Term,
    cap: usize,
    out: &mut Vec<Term>,
) {
    if out.len() >= cap {
        return;
    }
    if i == spots.len() {
        if (0..n_args).all(|p| chosen.iter().any(|(_, _, q)| *q == p)) {
            let repls: Vec<(Path, Term)> = chosen.iter().map(|(p, t, _)| (p.clone(), t.clone())).collect();
            out.push(super::replace::replace_paths(host, &repls));
        }
        return;
    }
    let spot = &spots[i];
    if !chosen.iter().any(|(p, _, _)| overlaps(p, &spot.path)) {
        for (p, repl) in &spot.options {
            chosen.push((spot.path.clone(), repl.clone(), *p));
            choose(spots, i + 1, chosen, n_args, host, cap, out);
            chosen.pop();
        }
    }
    choose(spots, i + 1, chosen, n_args, host, cap, out);
}
