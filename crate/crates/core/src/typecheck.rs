//! Type inference for ASP typed terms.
//!
//! Inference generates two kinds of constraints: equalities (from
//! application and abstraction) solved by unification, and coercions
//! `x ⊑ y` (from the connectives, rule sides and argument positions) solved
//! over the seven-element coercion order. A coercion between an arrow and
//! anything else degenerates to equality. Whatever base-type variables remain
//! after propagation are fixed one at a time, in creation order, to a
//! preferred member of their admissible set:
//!
//! 1. the unique maximal element, if there is one;
//! 2. otherwise `t`, when nothing constrains the variable at all;
//! 3. otherwise the meet of the maximal elements, when admissible;
//! 4. otherwise the first maximal element.
//!
//! with backtracking when a choice empties another variable's set.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::term::{Path, Symbol, Term};
use crate::types::{BaseType, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct TypeError {
    pub path: Path,
    pub message: String,
    pub expected: Option<Type>,
    pub found: Option<Type>,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type error at {}: {}", self.path, self.message)
    }
}

/// A term together with the type of every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedTerm {
    pub term: Term,
    pub ty: Type,
    pub child_types: BTreeMap<Path, Type>,
}

impl TypedTerm {
    pub fn type_at(&self, path: &Path) -> Option<&Type> {
        self.child_types.get(path)
    }
}

#[derive(Debug, Clone)]
enum ITy {
    Var(usize),
    Base(BaseType),
    Arrow(Box<ITy>, Box<ITy>),
}

impl ITy {
    fn from_type(t: &Type) -> ITy {
        match t {
            Type::Base(b) => ITy::Base(*b),
            Type::Arrow(a, b) => ITy::Arrow(Box::new(ITy::from_type(a)), Box::new(ITy::from_type(b))),
        }
    }
}

struct Coercion {
    sub: ITy,
    sup: ITy,
    path: Path,
    what: &'static str,
}

const FULL: u8 = 0x7f;

fn bit(b: BaseType) -> u8 {
    1 << (b as u8)
}

fn members(mask: u8) -> impl Iterator<Item = BaseType> {
    BaseType::ALL.into_iter().filter(move |b| mask & bit(*b) != 0)
}

/// Candidates of an admissible set, preferred one first.
fn preference(mask: u8) -> Vec<BaseType> {
    let maximal: Vec<BaseType> = members(mask)
        .filter(|b| !members(mask).any(|c| c != *b && b.coerces_to(c)))
        .collect();
    let preferred = if maximal.len() == 1 {
        maximal[0]
    } else if mask == FULL {
        BaseType::T
    } else {
        let meet = maximal[1..]
            .iter()
            .try_fold(maximal[0], |acc, m| acc.meet(*m));
        match meet {
            Some(m) if mask & bit(m) != 0 => m,
            _ => maximal[0],
        }
    };
    let mut out = vec![preferred];
    out.extend(members(mask).filter(|b| *b != preferred));
    out
}

struct Infer {
    subst: Vec<Option<ITy>>,
    coercions: Vec<Coercion>,
    nodes: Option<Vec<(Path, ITy)>>,
    free: HashMap<Symbol, ITy>,
}

type TResult<T> = Result<T, TypeError>;

fn err<T>(path: &Path, message: String, expected: Option<Type>, found: Option<Type>) -> TResult<T> {
    Err(TypeError {
        path: path.clone(),
        message,
        expected,
        found,
    })
}

impl Infer {
    fn new(record: bool) -> Infer {
        Infer {
            subst: Vec::new(),
            coercions: Vec::new(),
            nodes: record.then(Vec::new),
            free: HashMap::new(),
        }
    }

    fn fresh(&mut self) -> ITy {
        self.subst.push(None);
        ITy::Var(self.subst.len() - 1)
    }

    fn shallow(&self, t: &ITy) -> ITy {
        let mut cur = t.clone();
        while let ITy::Var(v) = cur {
            match &self.subst[v] {
                Some(next) => cur = next.clone(),
                None => return cur,
            }
        }
        cur
    }

    /// Fully resolved type; unresolved variables are reported as `t`.
    fn zonk(&self, t: &ITy) -> Type {
        match self.shallow(t) {
            ITy::Var(_) => Type::Base(BaseType::T),
            ITy::Base(b) => Type::Base(b),
            ITy::Arrow(a, b) => Type::arrow(self.zonk(&a), self.zonk(&b)),
        }
    }

    fn occurs_in(&self, v: usize, t: &ITy) -> bool {
        match self.shallow(t) {
            ITy::Var(w) => v == w,
            ITy::Base(_) => false,
            ITy::Arrow(a, b) => self.occurs_in(v, &a) || self.occurs_in(v, &b),
        }
    }

    fn unify(&mut self, a: &ITy, b: &ITy, path: &Path) -> TResult<()> {
        let (a, b) = (self.shallow(a), self.shallow(b));
        match (&a, &b) {
            (ITy::Var(x), ITy::Var(y)) if x == y => Ok(()),
            (ITy::Var(x), other) | (other, ITy::Var(x)) => {
                if self.occurs_in(*x, other) {
                    return err(path, "infinite type".into(), None, None);
                }
                self.subst[*x] = Some(other.clone());
                Ok(())
            }
            (ITy::Base(x), ITy::Base(y)) if x == y => Ok(()),
            (ITy::Arrow(a1, b1), ITy::Arrow(a2, b2)) => {
                self.unify(a1, a2, path)?;
                self.unify(b1, b2, path)
            }
            _ => err(
                path,
                format!("type mismatch: {} vs {}", self.zonk(&a), self.zonk(&b)),
                Some(self.zonk(&b)),
                Some(self.zonk(&a)),
            ),
        }
    }

    fn coerce(&mut self, sub: &ITy, sup: &ITy, path: &Path, what: &'static str) -> TResult<()> {
        let (s, p) = (self.shallow(sub), self.shallow(sup));
        match (&s, &p) {
            (ITy::Base(x), ITy::Base(y)) => {
                if x.coerces_to(*y) {
                    Ok(())
                } else {
                    err(
                        path,
                        format!("{what} has type {x}, which does not coerce to {y}"),
                        Some(Type::Base(*y)),
                        Some(Type::Base(*x)),
                    )
                }
            }
            (ITy::Arrow(..), ITy::Base(y)) => err(
                path,
                format!("{what} has function type {}, expected {y}", self.zonk(&s)),
                Some(Type::Base(*y)),
                Some(self.zonk(&s)),
            ),
            (ITy::Base(x), ITy::Arrow(..)) => err(
                path,
                format!("{what} has type {x}, expected function type {}", self.zonk(&p)),
                Some(self.zonk(&p)),
                Some(Type::Base(*x)),
            ),
            (ITy::Arrow(..), _) | (_, ITy::Arrow(..)) => self.unify(&s, &p, path),
            _ => {
                self.coercions.push(Coercion {
                    sub: s,
                    sup: p,
                    path: path.clone(),
                    what,
                });
                Ok(())
            }
        }
    }

    fn node(&mut self, t: &Term, env: &mut Vec<(Symbol, ITy)>, path: &Path) -> TResult<ITy> {
        use BaseType::*;
        let ty = match t {
            Term::Var(x) => match env.iter().rev().find(|(n, _)| n == x) {
                Some((_, ty)) => ty.clone(),
                None => match self.free.get(x) {
                    Some(ty) => ty.clone(),
                    None => {
                        let ty = self.fresh();
                        self.free.insert(x.clone(), ty.clone());
                        ty
                    }
                },
            },
            Term::Const(_) => ITy::Base(E),
            Term::Abs { binder, ty, body } => {
                let arg = match ty {
                    Some(ty) => ITy::from_type(ty),
                    None => self.fresh(),
                };
                env.push((binder.clone(), arg.clone()));
                let body_ty = self.node(body, env, &path.child(0));
                env.pop();
                let result = self.fresh();
                self.coerce(&body_ty?, &result, path, "abstraction body")?;
                ITy::Arrow(Box::new(arg), Box::new(result))
            }
            Term::App(f, a) => {
                let fty = self.node(f, env, &path.child(0))?;
                let aty = self.node(a, env, &path.child(1))?;
                let (input, output) = (self.fresh(), self.fresh());
                let want = ITy::Arrow(Box::new(input.clone()), Box::new(output.clone()));
                self.unify(&fty, &want, path)?;
                self.coerce(&aty, &input, path, "argument")?;
                output
            }
            Term::Func(_, args) | Term::Atom(_, args) => {
                for (i, a) in args.iter().enumerate() {
                    let aty = self.node(a, env, &path.child(i))?;
                    self.coerce(&aty, &ITy::Base(E), path, "argument")?;
                }
                ITy::Base(if matches!(t, Term::Func(..)) { E } else { A })
            }
            Term::CNeg(x) => {
                let xty = self.node(x, env, &path.child(0))?;
                self.coerce(&xty, &ITy::Base(A), path, "operand of classical negation")?;
                ITy::Base(L)
            }
            Term::Naf(x) => {
                let xty = self.node(x, env, &path.child(0))?;
                self.coerce(&xty, &ITy::Base(L), path, "operand of 'not'")?;
                ITy::Base(G)
            }
            Term::Or(items) => {
                for (i, x) in items.iter().enumerate() {
                    let xty = self.node(x, env, &path.child(i))?;
                    self.coerce(&xty, &ITy::Base(H), path, "disjunct")?;
                }
                ITy::Base(H)
            }
            Term::Conj(items) => {
                for (i, x) in items.iter().enumerate() {
                    let xty = self.node(x, env, &path.child(i))?;
                    self.coerce(&xty, &ITy::Base(D), path, "conjunct")?;
                }
                ITy::Base(D)
            }
            Term::Rule { head, body } => {
                if head.is_none() && body.is_none() {
                    return err(path, "rule with neither head nor body".into(), None, None);
                }
                if let Some(h) = head {
                    let hty = self.node(h, env, &path.child(0))?;
                    self.coerce(&hty, &ITy::Base(H), path, "rule head")?;
                }
                if let Some(b) = body {
                    let bty = self.node(b, env, &path.child(1))?;
                    self.coerce(&bty, &ITy::Base(D), path, "rule body")?;
                }
                ITy::Base(T)
            }
            Term::Program(items) => {
                for (i, x) in items.iter().enumerate() {
                    let xty = self.node(x, env, &path.child(i))?;
                    self.coerce(&xty, &ITy::Base(T), path, "program element")?;
                }
                ITy::Base(T)
            }
        };
        if let Some(nodes) = &mut self.nodes {
            nodes.push((path.clone(), ty.clone()));
        }
        Ok(ty)
    }

    /// Settles coercions involving arrows and checks fully known ones.
    fn settle(&mut self) -> TResult<()> {
        loop {
            let pending = std::mem::take(&mut self.coercions);
            let before = pending.len();
            for c in pending {
                self.coerce(&c.sub, &c.sup, &c.path, c.what)?;
            }
            if self.coercions.len() == before {
                return Ok(());
            }
        }
    }

    fn solve(&mut self) -> TResult<()> {
        self.settle()?;
        let open: Vec<usize> = (0..self.subst.len())
            .filter(|v| self.subst[*v].is_none())
            .collect();
        let mut index = HashMap::new();
        for (i, v) in open.iter().enumerate() {
            index.insert(*v, i);
        }
        // Each side is either an open variable (by index) or a fixed base.
        let edges: Vec<(Result<usize, BaseType>, Result<usize, BaseType>)> = self
            .coercions
            .iter()
            .map(|c| {
                let side = |t: &ITy| match self.shallow(t) {
                    ITy::Var(v) => Ok(index[&v]),
                    ITy::Base(b) => Err(b),
                    ITy::Arrow(..) => unreachable!("arrows settled"),
                };
                (side(&c.sub), side(&c.sup))
            })
            .collect();
        let mut domains = vec![FULL; open.len()];
        if let Err(i) = propagate(&mut domains, &edges) {
            let c = &self.coercions[i];
            return err(
                &c.path,
                format!("no base type fits the {}", c.what),
                None,
                None,
            );
        }
        if !assign(0, &mut domains, &edges) {
            return err(&Path::root(), "no consistent base-type assignment".into(), None, None);
        }
        for (i, v) in open.iter().enumerate() {
            let b = members(domains[i]).next().expect("assigned");
            self.subst[*v] = Some(ITy::Base(b));
        }
        Ok(())
    }
}

/// Arc consistency over the coercion edges. On failure returns the edge
/// that emptied a domain.
fn propagate(
    domains: &mut [u8],
    edges: &[(Result<usize, BaseType>, Result<usize, BaseType>)],
) -> Result<(), usize> {
    let dom = |d: &[u8], s: &Result<usize, BaseType>| match s {
        Ok(i) => d[*i],
        Err(b) => bit(*b),
    };
    loop {
        let mut changed = false;
        for (k, (lo, hi)) in edges.iter().enumerate() {
            let (dl, dh) = (dom(domains, lo), dom(domains, hi));
            let nl = members(dl)
                .filter(|b| members(dh).any(|c| b.coerces_to(c)))
                .fold(0, |m, b| m | bit(b));
            let nh = members(dh)
                .filter(|c| members(nl).any(|b| b.coerces_to(*c)))
                .fold(0, |m, b| m | bit(b));
            if nl == 0 || nh == 0 {
                return Err(k);
            }
            if let Ok(i) = lo {
                if domains[*i] != nl {
                    domains[*i] = nl;
                    changed = true;
                }
            }
            if let Ok(i) = hi {
                if domains[*i] != nh {
                    domains[*i] = nh;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

fn assign(
    from: usize,
    domains: &mut Vec<u8>,
    edges: &[(Result<usize, BaseType>, Result<usize, BaseType>)],
) -> bool {
    let Some(v) = (from..domains.len()).find(|i| domains[*i].count_ones() > 1) else {
        return true;
    };
    for choice in preference(domains[v]) {
        let mut trial = domains.clone();
        trial[v] = bit(choice);
        if propagate(&mut trial, edges).is_ok() && assign(v + 1, &mut trial, edges) {
            *domains = trial;
            return true;
        }
    }
    false
}

fn run(t: &Term, target: Option<&Type>, record: bool) -> TResult<(Infer, ITy)> {
    let mut inf = Infer::new(record);
    let root = inf.node(t, &mut Vec::new(), &Path::root())?;
    if let Some(target) = target {
        inf.unify(&root, &ITy::from_type(target), &Path::root())?;
    }
    inf.solve()?;
    Ok((inf, root))
}

fn typed(t: &Term, inf: Infer, root: ITy) -> TypedTerm {
    let child_types = inf
        .nodes
        .as_ref()
        .map(|nodes| nodes.iter().map(|(p, ty)| (p.clone(), inf.zonk(ty))).collect())
        .unwrap_or_default();
    TypedTerm {
        term: t.clone(),
        ty: inf.zonk(&root),
        child_types,
    }
}

/// Infers the type of `t`, solving unannotated binders.
pub fn infer(t: &Term) -> Result<TypedTerm, TypeError> {
    let (inf, root) = run(t, None, true)?;
    Ok(typed(t, inf, root))
}

/// Type of `t` without the per-node table.
pub fn infer_type(t: &Term) -> Result<Type, TypeError> {
    let (inf, root) = run(t, None, false)?;
    Ok(inf.zonk(&root))
}

/// Checks that `t` can be given type `ty`.
pub fn check(t: &Term, ty: &Type) -> Result<TypedTerm, TypeError> {
    let (inf, root) = run(t, Some(ty), true)?;
    Ok(typed(t, inf, root))
}

/// Cheaper boolean form of [`check`].
pub fn admits(t: &Term, ty: &Type) -> bool {
    run(t, Some(ty), false).is_ok()
}

/// Well typed, closed, and every abstractor binds something.
pub fn is_formula(t: &Term) -> bool {
    t.is_closed() && t.is_lambda_i() && infer_type(t).is_ok()
}

/// No application has an abstraction in function position.
pub fn is_beta_normal(t: &Term) -> bool {
    match t {
        Term::App(f, _) if matches!(f.as_ref(), Term::Abs { .. }) => false,
        _ => t.children().iter().all(|(_, c)| is_beta_normal(c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, parse_type};

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn infer_src(s: &str) -> Result<Type, TypeError> {
        infer(&parse_term(s).unwrap()).map(|t| t.ty)
    }

    #[test]
    fn positive_examples() {
        assert_eq!(infer_src("\\w.\\v.(w <- v@X.)").unwrap(), ty("(h -> ((e -> d) -> t))"));
        assert_eq!(infer_src("\\x.\\y.(<- h(x), not -y.)").unwrap(), ty("(e -> (a -> t))"));
        assert_eq!(infer_src("\\v.(v or -v <- .)").unwrap(), ty("(a -> t)"));
        assert_eq!(
            infer_src("\\w.\\u.(w@\\v.position(v,u))").unwrap(),
            ty("(((e -> l) -> t) -> (e -> t))")
        );
    }

    #[test]
    fn negative_examples_blame_the_connective() {
        let t = parse_term("\\y.\\x.(y or not x@X)").unwrap();
        let e = infer(&t).unwrap_err();
        assert!(matches!(t.resolve(&e.path), Some(Term::Or(_))), "{e}");
        let t = parse_term("\\v.\\w.(-w <- - not v@X.)").unwrap();
        let e = infer(&t).unwrap_err();
        assert!(matches!(t.resolve(&e.path), Some(Term::CNeg(ref x)) if matches!(**x, Term::Naf(_))), "{e}");
    }

    #[test]
    fn annotated_negative_examples() {
        assert!(infer_src("\\y:l.\\x:(e -> l).(y or not x@X)").is_err());
        assert!(infer_src("\\v:(e -> l).\\w:a.(-w <- - not v@X.)").is_err());
    }

    #[test]
    fn base_terms() {
        assert_eq!(infer_src("john").unwrap(), ty("e"));
        assert_eq!(infer_src("bird(tweety)").unwrap(), ty("a"));
        assert_eq!(infer_src("bird(tweety).").unwrap(), ty("t"));
        assert_eq!(infer_src("p <- not q. q <- not p.").unwrap(), ty("t"));
        assert!(infer_src("p(a) or not q").is_err());
        assert!(infer_src("-(p, q)").is_err());
    }

    #[test]
    fn check_against_target() {
        let id = parse_term("\\x.x").unwrap();
        assert!(admits(&id, &ty("(e -> e)")));
        assert!(admits(&id, &ty("((e -> t) -> (e -> t))")));
        assert!(!admits(&id, &ty("(t -> e)")));
        let f = parse_term("\\x.fly(x)").unwrap();
        assert!(admits(&f, &ty("(e -> a)")));
        assert!(admits(&f, &ty("(e -> h)")));
        assert!(!admits(&f, &ty("(e -> t)")));
    }

    #[test]
    fn application_is_typed_jointly() {
        let t = parse_term("(\\v.\\x.(x@X <- v@X, not -x@X.))@(\\x.bird(x))").unwrap();
        assert_eq!(infer(&t).unwrap().ty, ty("((e -> a) -> t)"));
    }

    #[test]
    fn node_types_are_recorded() {
        let t = parse_term("\\v.(v or -v <- .)").unwrap();
        let typed = infer(&t).unwrap();
        assert_eq!(typed.type_at(&Path::root()), Some(&ty("(a -> t)")));
        let or = Path::root().child(0).child(0);
        assert_eq!(typed.type_at(&or), Some(&ty("h")));
    }

    #[test]
    fn formulas_and_normal_forms() {
        assert!(is_formula(&parse_term("\\v.v").unwrap()));
        assert!(!is_formula(&parse_term("\\v.bird(tweety)").unwrap()));
        let redex = parse_term("(\\v.v)@john").unwrap();
        assert!(!is_beta_normal(&redex));
        assert!(is_beta_normal(&parse_term("john").unwrap()));
        assert!(is_beta_normal(&parse_term("\\v.(v@bird(tweety))").unwrap()));
    }

    #[test]
    fn preference_rule() {
        use BaseType::*;
        assert_eq!(preference(FULL)[0], T);
        let below_h = bit(A) | bit(L) | bit(H);
        assert_eq!(preference(below_h)[0], H);
        let above_a = bit(A) | bit(L) | bit(G) | bit(D) | bit(H);
        assert_eq!(preference(above_a)[0], L);
    }
}
