//! Abstract syntax of the typed ASP lambda calculus.
//!
//! Disjunction, conjunction and programs are stored as flat lists. The smart
//! constructors [`Term::or`], [`Term::conj`] and [`Term::program`] keep them
//! flat (a conjunction never directly contains a conjunction) and collapse
//! single-element lists to the element itself, so `((a, b), c)` and
//! `(a, (b, c))` are the same term. A contiguous run of list elements is a
//! sub-term of its own, addressed by [`Step::Slice`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::types::Type;

/// Interned-ish identifier; cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(s: &str) -> Symbol {
        Symbol(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// ASP variables are written with a leading uppercase letter.
    pub fn is_asp_variable(&self) -> bool {
        self.0.chars().next().is_some_and(|c| c.is_ascii_uppercase())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ListKind {
    Or,
    Conj,
    Program,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// λ-bound variable.
    Var(Symbol),
    /// Constant of type `e`. ASP variables such as `X` are constants here.
    Const(Symbol),
    Abs {
        binder: Symbol,
        ty: Option<Type>,
        body: Box<Term>,
    },
    App(Box<Term>, Box<Term>),
    /// ASP function term `f(t1, ..., tn)`, type `e`.
    Func(Symbol, Vec<Term>),
    /// Atom `p(t1, ..., tn)`, type `a`. Zero arguments is a propositional atom.
    Atom(Symbol, Vec<Term>),
    /// Classical negation `-`.
    CNeg(Box<Term>),
    /// Default negation `not`.
    Naf(Box<Term>),
    Or(Vec<Term>),
    Conj(Vec<Term>),
    Rule {
        head: Option<Box<Term>>,
        body: Option<Box<Term>>,
    },
    Program(Vec<Term>),
}

/// One step from a node to one of its sub-term occurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    /// Child by index. Rules use 0 for the head and 1 for the body.
    Child(usize),
    /// Contiguous run of at least two (but not all) elements of a list node.
    Slice { start: usize, len: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<Step>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Path {
        let mut p = self.clone();
        p.0.push(Step::Child(i));
        p
    }

    pub fn slice(&self, start: usize, len: usize) -> Path {
        let mut p = self.clone();
        p.0.push(Step::Slice { start, len });
        p
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, step) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            match step {
                Step::Child(c) => write!(f, "{c}")?,
                Step::Slice { start, len } => write!(f, "{start}+{len}")?,
            }
        }
        Ok(())
    }
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Symbol::new(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(Symbol::new(name))
    }

    pub fn atom(pred: &str, args: Vec<Term>) -> Term {
        Term::Atom(Symbol::new(pred), args)
    }

    pub fn func(sym: &str, args: Vec<Term>) -> Term {
        Term::Func(Symbol::new(sym), args)
    }

    pub fn abs(binder: impl Into<Symbol>, body: Term) -> Term {
        Term::Abs {
            binder: binder.into(),
            ty: None,
            body: Box::new(body),
        }
    }

    pub fn abs_typed(binder: impl Into<Symbol>, ty: Option<Type>, body: Term) -> Term {
        Term::Abs {
            binder: binder.into(),
            ty,
            body: Box::new(body),
        }
    }

    /// `λx1. ... λxn. body`
    pub fn abs_many(binders: impl IntoIterator<Item = Symbol>, body: Term) -> Term {
        let binders: Vec<Symbol> = binders.into_iter().collect();
        binders
            .into_iter()
            .rev()
            .fold(body, |acc, b| Term::abs(b, acc))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    /// `head @ a1 @ ... @ an`
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn cneg(t: Term) -> Term {
        Term::CNeg(Box::new(t))
    }

    pub fn naf(t: Term) -> Term {
        Term::Naf(Box::new(t))
    }

    pub fn rule(head: Option<Term>, body: Option<Term>) -> Term {
        Term::Rule {
            head: head.map(Box::new),
            body: body.map(Box::new),
        }
    }

    pub fn or(items: impl IntoIterator<Item = Term>) -> Term {
        Term::list(ListKind::Or, items)
    }

    pub fn conj(items: impl IntoIterator<Item = Term>) -> Term {
        Term::list(ListKind::Conj, items)
    }

    pub fn program(items: impl IntoIterator<Item = Term>) -> Term {
        Term::list(ListKind::Program, items)
    }

    /// Flattening list constructor. Panics on an empty list.
    pub fn list(kind: ListKind, items: impl IntoIterator<Item = Term>) -> Term {
        let mut flat = Vec::new();
        for item in items {
            match item.as_list() {
                Some((k, inner)) if k == kind => flat.extend(inner.iter().cloned()),
                _ => flat.push(item),
            }
        }
        assert!(!flat.is_empty(), "empty {kind:?} list");
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        match kind {
            ListKind::Or => Term::Or(flat),
            ListKind::Conj => Term::Conj(flat),
            ListKind::Program => Term::Program(flat),
        }
    }

    pub fn as_list(&self) -> Option<(ListKind, &[Term])> {
        match self {
            Term::Or(v) => Some((ListKind::Or, v)),
            Term::Conj(v) => Some((ListKind::Conj, v)),
            Term::Program(v) => Some((ListKind::Program, v)),
            _ => None,
        }
    }

    /// Children with their [`Step::Child`] index.
    pub fn children(&self) -> Vec<(usize, &Term)> {
        match self {
            Term::Var(_) | Term::Const(_) => Vec::new(),
            Term::Abs { body, .. } => vec![(0, body)],
            Term::App(f, a) => vec![(0, f), (1, a)],
            Term::Func(_, args) | Term::Atom(_, args) => args.iter().enumerate().collect(),
            Term::CNeg(x) | Term::Naf(x) => vec![(0, x)],
            Term::Or(v) | Term::Conj(v) | Term::Program(v) => v.iter().enumerate().collect(),
            Term::Rule { head, body } => {
                let mut out = Vec::new();
                if let Some(h) = head {
                    out.push((0, h.as_ref()));
                }
                if let Some(b) = body {
                    out.push((1, b.as_ref()));
                }
                out
            }
        }
    }

    pub fn child(&self, index: usize) -> Option<&Term> {
        self.children()
            .into_iter()
            .find(|(i, _)| *i == index)
            .map(|(_, t)| t)
    }

    /// Rebuilds the node with each child transformed by `f`. List nodes are
    /// re-flattened.
    pub fn map_children(&self, mut f: impl FnMut(&Term) -> Term) -> Term {
        self.map_children_indexed(|_, c| f(c))
    }

    /// [`Term::map_children`] with the child index passed along.
    pub fn map_children_indexed(&self, mut f: impl FnMut(usize, &Term) -> Term) -> Term {
        let mut each = |args: &[Term]| -> Vec<Term> {
            args.iter().enumerate().map(|(i, a)| f(i, a)).collect()
        };
        match self {
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::Abs { binder, ty, body } => {
                let body = each(std::slice::from_ref(body.as_ref())).remove(0);
                Term::abs_typed(binder.clone(), ty.clone(), body)
            }
            Term::App(a, b) => {
                let mut v = each(&[(**a).clone(), (**b).clone()]);
                let b2 = v.pop().unwrap();
                Term::app(v.pop().unwrap(), b2)
            }
            Term::Func(s, args) => Term::Func(s.clone(), each(args)),
            Term::Atom(s, args) => Term::Atom(s.clone(), each(args)),
            Term::CNeg(x) => Term::cneg(each(std::slice::from_ref(x.as_ref())).remove(0)),
            Term::Naf(x) => Term::naf(each(std::slice::from_ref(x.as_ref())).remove(0)),
            Term::Or(v) => Term::or(each(v)),
            Term::Conj(v) => Term::conj(each(v)),
            Term::Program(v) => Term::program(each(v)),
            Term::Rule { head, body } => {
                drop(each);
                let h = head.as_deref().map(|h| f(0, h));
                let b = body.as_deref().map(|b| f(1, b));
                Term::rule(h, b)
            }
        }
    }

    /// Resolves a path to the sub-term it addresses.
    pub fn resolve(&self, path: &Path) -> Option<Term> {
        let mut cur = self.clone();
        for step in &path.0 {
            cur = match *step {
                Step::Child(i) => cur.child(i)?.clone(),
                Step::Slice { start, len } => {
                    let (kind, items) = cur.as_list()?;
                    if len < 2 || len >= items.len() || start + len > items.len() {
                        return None;
                    }
                    Term::list(kind, items[start..start + len].iter().cloned())
                }
            };
        }
        Some(cur)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|(_, c)| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(|(_, c)| c.depth())
            .max()
            .unwrap_or(0)
    }

    /// λ-variables not bound by an enclosing abstraction.
    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    pub fn has_free_var(&self, x: &Symbol) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Abs { binder, body, .. } => binder != x && body.has_free_var(x),
            _ => self.children().iter().any(|(_, c)| c.has_free_var(x)),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every abstractor binds at least one occurrence of its variable.
    pub fn is_lambda_i(&self) -> bool {
        match self {
            Term::Abs { binder, body, .. } => body.has_free_var(binder) && body.is_lambda_i(),
            _ => self.children().iter().all(|(_, c)| c.is_lambda_i()),
        }
    }

    /// Every identifier used anywhere, bound or not.
    pub fn names(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(s) | Term::Const(s) => {
                out.insert(s.clone());
            }
            Term::Abs { binder, body, .. } => {
                out.insert(binder.clone());
                body.collect_names(out);
            }
            Term::Func(s, args) | Term::Atom(s, args) => {
                out.insert(s.clone());
                for a in args {
                    a.collect_names(out);
                }
            }
            _ => {
                for (_, c) in self.children() {
                    c.collect_names(out);
                }
            }
        }
    }

    /// Leading abstractors and the body under them.
    pub fn strip_binders(&self) -> (Vec<Symbol>, &Term) {
        let mut binders = Vec::new();
        let mut cur = self;
        while let Term::Abs { binder, body, .. } = cur {
            binders.push(binder.clone());
            cur = body;
        }
        (binders, cur)
    }

    /// `h @ a1 @ ... @ an` as `(h, [a1..an])`.
    pub fn app_spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// True iff `self` is `λv.v`.
    pub fn is_identity(&self) -> bool {
        matches!(self, Term::Abs { binder, body, .. } if matches!(body.as_ref(), Term::Var(v) if v == binder))
    }

    pub fn is_lambda_term(&self) -> bool {
        matches!(self, Term::Var(_) | Term::Const(_))
    }
}

fn collect_free(t: &Term, bound: &mut Vec<Symbol>, out: &mut BTreeSet<Symbol>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Term::Abs { binder, body, .. } => {
            bound.push(binder.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        _ => {
            for (_, c) in t.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

/// Binder stacks for comparing terms up to renaming of λ-bound variables.
#[derive(Debug, Default, Clone)]
pub(crate) struct AlphaEnv {
    pub(crate) left: Vec<Symbol>,
    pub(crate) right: Vec<Symbol>,
}

impl AlphaEnv {
    pub(crate) fn push(&mut self, l: Symbol, r: Symbol) {
        self.left.push(l);
        self.right.push(r);
    }

    pub(crate) fn pop(&mut self) {
        self.left.pop();
        self.right.pop();
    }

    pub(crate) fn vars_match(&self, x: &Symbol, y: &Symbol) -> bool {
        let ix = self.left.iter().rposition(|s| s == x);
        let iy = self.right.iter().rposition(|s| s == y);
        match (ix, iy) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        }
    }

    pub(crate) fn alpha_eq(&mut self, a: &Term, b: &Term) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => self.vars_match(x, y),
            (Term::Const(x), Term::Const(y)) => x == y,
            (
                Term::Abs {
                    binder: x,
                    ty: tx,
                    body: bx,
                },
                Term::Abs {
                    binder: y,
                    ty: ty_,
                    body: by,
                },
            ) => {
                if let (Some(p), Some(q)) = (tx, ty_) {
                    if p != q {
                        return false;
                    }
                }
                self.push(x.clone(), y.clone());
                let r = self.alpha_eq(bx, by);
                self.pop();
                r
            }
            (Term::App(f1, a1), Term::App(f2, a2)) => self.alpha_eq(f1, f2) && self.alpha_eq(a1, a2),
            (Term::Func(s1, x1), Term::Func(s2, x2)) | (Term::Atom(s1, x1), Term::Atom(s2, x2)) => {
                s1 == s2 && self.all_eq(x1, x2)
            }
            (Term::CNeg(x), Term::CNeg(y)) | (Term::Naf(x), Term::Naf(y)) => self.alpha_eq(x, y),
            (Term::Or(x), Term::Or(y))
            | (Term::Conj(x), Term::Conj(y))
            | (Term::Program(x), Term::Program(y)) => self.all_eq(x, y),
            (Term::Rule { head: h1, body: b1 }, Term::Rule { head: h2, body: b2 }) => {
                self.opt_eq(h1.as_deref(), h2.as_deref()) && self.opt_eq(b1.as_deref(), b2.as_deref())
            }
            _ => false,
        }
    }

    fn all_eq(&mut self, x: &[Term], y: &[Term]) -> bool {
        x.len() == y.len() && x.iter().zip(y).all(|(a, b)| self.alpha_eq(a, b))
    }

    fn opt_eq(&mut self, x: Option<&Term>, y: Option<&Term>) -> bool {
        match (x, y) {
            (None, None) => true,
            (Some(a), Some(b)) => self.alpha_eq(a, b),
            _ => false,
        }
    }
}

/// Equality up to consistent renaming of λ-bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    AlphaEnv::default().alpha_eq(a, b)
}

/// All sub-term occurrences in leftmost-outermost order, the root first.
///
/// For list nodes, runs of consecutive elements are occurrences too; at each
/// position the longer runs come first, followed by the element itself.
pub fn subterm_occurrences(f: &Term) -> Vec<(Path, Term)> {
    let mut out = Vec::new();
    visit_occurrences(f, &Path::root(), &mut |p, t| {
        out.push((p.clone(), t.clone()));
        true
    });
    out
}

/// Walks occurrences in the order of [`subterm_occurrences`] without
/// materializing them all. Stops as soon as `f` returns `false`.
pub(crate) fn visit_occurrences(
    t: &Term,
    path: &Path,
    f: &mut dyn FnMut(&Path, &Term) -> bool,
) -> bool {
    if !f(path, t) {
        return false;
    }
    if let Some((kind, items)) = t.as_list() {
        let n = items.len();
        for i in 0..n {
            for len in (2..=n - i).rev() {
                if len == n {
                    continue;
                }
                let slice = Term::list(kind, items[i..i + len].iter().cloned());
                if !f(&path.slice(i, len), &slice) {
                    return false;
                }
            }
            if !visit_occurrences(&items[i], &path.child(i), f) {
                return false;
            }
        }
        return true;
    }
    for (i, c) in t.children() {
        if !visit_occurrences(c, &path.child(i), f) {
            return false;
        }
    }
    true
}

/// `p` occurs in `q`.
pub fn occurs(p: &Term, q: &Term) -> bool {
    let mut found = false;
    visit_occurrences(q, &Path::root(), &mut |_, t| {
        if alpha_eq(p, t) {
            found = true;
            return false;
        }
        true
    });
    found
}

/// Picks a name based on `base` (trailing digits replaced by a counter)
/// that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Symbol>) -> Symbol {
    let sym = Symbol::new(base);
    if !avoid.contains(&sym) {
        return sym;
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { base } else { stem };
    (1..)
        .map(|i| Symbol::new(&format!("{stem}{i}")))
        .find(|s| !avoid.contains(s))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bird_tweety() -> Term {
        Term::atom("bird", vec![Term::constant("tweety")])
    }

    #[test]
    fn list_constructors_flatten() {
        let a = Term::atom("a", vec![]);
        let b = Term::atom("b", vec![]);
        let c = Term::atom("c", vec![]);
        let left = Term::conj([Term::conj([a.clone(), b.clone()]), c.clone()]);
        let right = Term::conj([a.clone(), Term::conj([b.clone(), c.clone()])]);
        assert_eq!(left, right);
        assert_eq!(Term::program([a.clone()]), a);
    }

    #[test]
    fn occurrences_of_a_two_node_term() {
        let occ = subterm_occurrences(&bird_tweety());
        assert_eq!(occ.len(), 2);
        assert_eq!(occ[0], (Path::root(), bird_tweety()));
        assert_eq!(occ[1], (Path::root().child(0), Term::constant("tweety")));
    }

    #[test]
    fn occurrence_clauses() {
        let eats = Term::atom("eats", vec![Term::constant("tweety"), Term::var("u")]);
        assert!(occurs(&Term::constant("tweety"), &eats));
        assert!(occurs(&bird_tweety(), &bird_tweety()));
        let fly_b = Term::atom("fly", vec![Term::constant("b")]);
        let bird_a = Term::atom("bird", vec![Term::constant("a")]);
        assert!(!occurs(&fly_b, &bird_a));
    }

    #[test]
    fn slices_are_occurrences() {
        let items: Vec<Term> = ["p", "q", "r"].iter().map(|s| Term::atom(s, vec![])).collect();
        let whole = Term::conj(items.clone());
        let pq = Term::conj(items[..2].to_vec());
        let qr = Term::conj(items[1..].to_vec());
        assert!(occurs(&pq, &whole));
        assert!(occurs(&qr, &whole));
        let pr = Term::conj([items[0].clone(), items[2].clone()]);
        assert!(!occurs(&pr, &whole));
    }

    #[test]
    fn paths_resolve_to_their_occurrence() {
        let items: Vec<Term> = ["p", "q", "r"].iter().map(|s| Term::atom(s, vec![])).collect();
        let t = Term::abs("u", Term::rule(Some(Term::var("u")), Some(Term::conj(items))));
        for (p, sub) in subterm_occurrences(&t) {
            assert_eq!(t.resolve(&p), Some(sub));
        }
    }

    #[test]
    fn free_variables() {
        let id = Term::abs("v", Term::var("v"));
        assert!(id.free_vars().is_empty());
        let r = Term::rule(Some(Term::var("v")), Some(Term::var("u")));
        assert_eq!(
            r.free_vars().into_iter().collect::<Vec<_>>(),
            vec![Symbol::new("u"), Symbol::new("v")]
        );
        let x = Term::constant("X");
        let fly = Term::atom("fly", vec![x]);
        let t = Term::abs("u", Term::rule(Some(fly), Some(Term::var("u"))));
        assert!(t.free_vars().is_empty());
    }

    #[test]
    fn closed_and_lambda_i() {
        let id = Term::abs("v", Term::var("v"));
        assert!(id.is_closed() && id.is_lambda_i());
        let vacuous = Term::abs("v", bird_tweety());
        assert!(vacuous.is_closed() && !vacuous.is_lambda_i());
    }

    #[test]
    fn alpha_equivalence() {
        assert!(alpha_eq(&Term::abs("v", Term::var("v")), &Term::abs("x", Term::var("x"))));
        let r = |a: &str, b: &str| Term::rule(Some(Term::var(a)), Some(Term::var(b)));
        let t1 = Term::abs("v", Term::abs("u", r("v", "u")));
        let t2 = Term::abs("a", Term::abs("b", r("a", "b")));
        let t3 = Term::abs("v", Term::abs("u", r("u", "v")));
        assert!(alpha_eq(&t1, &t2));
        assert!(!alpha_eq(&t1, &t3));
        // Shadowing: λx.λx.x is λa.λb.b, not λa.λb.a.
        let s1 = Term::abs("x", Term::abs("x", Term::var("x")));
        let s2 = Term::abs("a", Term::abs("b", Term::var("a")));
        assert!(!alpha_eq(&s1, &s2));
    }

    #[test]
    fn fresh_names_use_numeric_suffixes() {
        let avoid: BTreeSet<Symbol> = ["v", "v1"].iter().map(|s| Symbol::new(s)).collect();
        assert_eq!(fresh_name("v", &avoid).as_str(), "v2");
        assert_eq!(fresh_name("w", &avoid).as_str(), "w");
        assert_eq!(fresh_name("v1", &avoid).as_str(), "v2");
    }
}
