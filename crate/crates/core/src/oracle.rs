//! Brute-force inverses: enumerate every small formula of a given type and
//! keep those that re-apply correctly. Used as ground truth in tests.

use std::collections::HashMap;
use std::rc::Rc;

use crate::reduction::apply;
use crate::term::{alpha_eq, Symbol, Term};
use crate::typecheck::admits;
use crate::types::{BaseType, Type};

/// Predicates with arities and constants available to the enumerator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub preds: Vec<(Symbol, usize)>,
    pub consts: Vec<Symbol>,
}

impl Signature {
    pub fn empty() -> Signature {
        Signature {
            preds: Vec::new(),
            consts: Vec::new(),
        }
    }

    /// `p/1`, `q/1`, `a`, `b`.
    pub fn small() -> Signature {
        Signature {
            preds: vec![(Symbol::new("p"), 1), (Symbol::new("q"), 1)],
            consts: vec![Symbol::new("a"), Symbol::new("b")],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumBudget {
    /// Bound on [`Term::depth`].
    pub max_depth: usize,
    pub max_abstractors: usize,
    pub signature: Signature,
    pub target: Type,
}

impl EnumBudget {
    pub fn new(target: Type, max_depth: usize) -> EnumBudget {
        EnumBudget {
            max_depth,
            max_abstractors: usize::MAX,
            signature: Signature::small(),
            target,
        }
    }
}

/// Type pairs `(F, G)` of the completeness matrix: `F @ G` has type `t`,
/// `G` has order at most one and the result order at most two. For the
/// right inverse the roles swap: the function has the first type.
pub fn order_rows() -> Vec<(Type, Type)> {
    use BaseType::*;
    let b = Type::base;
    let arr = Type::arrow;
    vec![
        (arr(b(E), b(T)), b(E)),
        (arr(b(A), arr(b(E), b(T))), b(A)),
        (arr(b(D), arr(arr(b(G), b(T)), b(T))), b(D)),
        (arr(arr(b(H), b(T)), b(T)), arr(b(H), b(T))),
        (arr(arr(b(L), b(T)), arr(b(E), b(T))), arr(b(L), b(T))),
        (arr(arr(b(G), b(T)), arr(arr(b(E), b(T)), b(T))), arr(b(G), b(T))),
    ]
}

type Key = (Type, Vec<Type>, usize);

struct Gen<'a> {
    sig: &'a Signature,
    memo: HashMap<Key, Rc<Vec<Term>>>,
}

fn binder(i: usize) -> Symbol {
    Symbol::new(&format!("v{i}"))
}

/// `ty` with its first `k` inputs consumed.
fn drop_inputs(ty: &Type, k: usize) -> &Type {
    let mut cur = ty;
    for _ in 0..k {
        match cur {
            Type::Arrow(_, b) => cur = b,
            Type::Base(_) => unreachable!("not enough inputs"),
        }
    }
    cur
}

fn pairs(xs: &[Term], ys: &[Term], keep: impl Fn(&Term) -> bool, build: impl Fn(Term, Term) -> Term) -> Vec<Term> {
    let mut out = Vec::new();
    for x in xs.iter().filter(|x| keep(x)) {
        for y in ys.iter().filter(|y| keep(y)) {
            out.push(build(x.clone(), y.clone()));
        }
    }
    out
}

impl Gen<'_> {
    /// β-normal terms of (a type coercible to) `ty` in context `ctx`, depth
    /// at most `d`. Context variables are named by position.
    fn terms(&mut self, ty: &Type, ctx: &[Type], d: usize) -> Rc<Vec<Term>> {
        if d == 0 {
            return Rc::new(Vec::new());
        }
        let key = (ty.clone(), ctx.to_vec(), d);
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let mut out = Vec::new();
        match ty {
            Type::Arrow(a, b) => {
                let x = binder(ctx.len());
                let mut inner = ctx.to_vec();
                inner.push((**a).clone());
                for body in self.terms(b, &inner, d - 1).iter() {
                    if body.has_free_var(&x) {
                        out.push(Term::abs(x.clone(), body.clone()));
                    }
                }
            }
            Type::Base(b) => {
                for c in BaseType::ALL {
                    if c.coerces_to(*b) {
                        out.extend(self.constructed(c, ctx, d));
                    }
                }
            }
        }
        out.extend(self.neutral(ty, ctx, d));
        let r = Rc::new(out);
        self.memo.insert(key, r.clone());
        r
    }

    /// Terms whose outermost node has exactly type `c`.
    fn constructed(&mut self, c: BaseType, ctx: &[Type], d: usize) -> Vec<Term> {
        use BaseType::*;
        let sub = |g: &mut Self, b: BaseType| g.terms(&Type::Base(b), ctx, d - 1);
        match c {
            E => self.sig.consts.iter().map(|s| Term::Const(s.clone())).collect(),
            A => {
                let mut out = Vec::new();
                for (p, n) in self.sig.preds.clone() {
                    if n == 0 {
                        out.push(Term::Atom(p, Vec::new()));
                        continue;
                    }
                    if d < 2 {
                        continue;
                    }
                    let args = sub(self, E);
                    let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
                    for _ in 0..n {
                        tuples = tuples
                            .into_iter()
                            .flat_map(|t| {
                                args.iter().map(move |a| {
                                    let mut t = t.clone();
                                    t.push(a.clone());
                                    t
                                })
                            })
                            .collect();
                    }
                    out.extend(tuples.into_iter().map(|t| Term::Atom(p.clone(), t)));
                }
                out
            }
            _ if d < 2 => Vec::new(),
            L => sub(self, A).iter().map(|x| Term::cneg(x.clone())).collect(),
            G => sub(self, L).iter().map(|x| Term::naf(x.clone())).collect(),
            D => {
                let xs = sub(self, D);
                pairs(&xs, &xs, |x| !matches!(x, Term::Conj(_)), |x, y| Term::Conj(vec![x, y]))
            }
            H => {
                let xs = sub(self, H);
                pairs(&xs, &xs, |x| !matches!(x, Term::Or(_)), |x, y| Term::Or(vec![x, y]))
            }
            T => {
                let heads = sub(self, H);
                let bodies = sub(self, D);
                let mut out: Vec<Term> = heads.iter().map(|h| Term::rule(Some(h.clone()), None)).collect();
                out.extend(bodies.iter().map(|b| Term::rule(None, Some(b.clone()))));
                out.extend(pairs(&heads, &bodies, |_| true, |h, b| Term::rule(Some(h), Some(b))));
                let ts = sub(self, T);
                out.extend(pairs(&ts, &ts, |x| !matches!(x, Term::Program(_)), |x, y| Term::Program(vec![x, y])));
                out
            }
        }
    }

    /// `x @ a1 @ ... @ ak` with `x` from the context.
    fn neutral(&mut self, ty: &Type, ctx: &[Type], d: usize) -> Vec<Term> {
        let mut out = Vec::new();
        for (i, xty) in ctx.iter().enumerate() {
            let (inputs, result) = xty.uncurry();
            let inputs: Vec<Type> = inputs.into_iter().cloned().collect();
            for k in 0..=inputs.len() {
                if k + 1 > d {
                    break;
                }
                let fits = match ty {
                    Type::Base(b) => k == inputs.len() && result.coerces_to(*b),
                    Type::Arrow(..) => drop_inputs(xty, k) == ty,
                };
                if !fits {
                    continue;
                }
                let mut spines = vec![Term::Var(binder(i))];
                for (j, input) in inputs[..k].iter().enumerate() {
                    let args = self.terms(input, ctx, d - (k - j));
                    spines = spines
                        .into_iter()
                        .flat_map(|s| args.iter().map(move |a| Term::app(s.clone(), a.clone())))
                        .collect();
                }
                out.extend(spines);
            }
        }
        out
    }
}

fn abstractors(t: &Term) -> usize {
    let own = usize::from(matches!(t, Term::Abs { .. }));
    own + t.children().iter().map(|(_, c)| abstractors(c)).sum::<usize>()
}

/// Every β-normal formula of the target type within the budget, smallest
/// first and then by printed form.
pub fn enumerate_formulas(b: &EnumBudget) -> Vec<Term> {
    let mut gen = Gen {
        sig: &b.signature,
        memo: HashMap::new(),
    };
    let all = gen.terms(&b.target, &[], b.max_depth);
    let mut keyed: Vec<(usize, String, Term)> = all
        .iter()
        .filter(|t| abstractors(t) <= b.max_abstractors && admits(t, &b.target))
        .map(|t| (t.size(), t.to_string(), t.clone()))
        .collect();
    keyed.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
    keyed.dedup_by(|x, y| x.1 == y.1);
    keyed.into_iter().map(|(_, _, t)| t).collect()
}

fn reproduces(fun: &Term, arg: &Term, h: &Term) -> bool {
    apply(fun, arg).map(|r| alpha_eq(&r, h)).unwrap_or(false)
}

/// Enumerated `F` with `F @ g` equal to `h`.
pub fn oracle_inverse_l(h: &Term, g: &Term, b: &EnumBudget) -> Vec<Term> {
    enumerate_formulas(b)
        .into_iter()
        .filter(|f| reproduces(f, g, h))
        .collect()
}

/// Enumerated `F` with `g @ F` equal to `h`.
pub fn oracle_inverse_r(h: &Term, g: &Term, b: &EnumBudget) -> Vec<Term> {
    enumerate_formulas(b)
        .into_iter()
        .filter(|f| reproduces(g, f, h))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, parse_type};
    use crate::typecheck::{is_beta_normal, is_formula};

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn constants_of_type_e() {
        let mut b = EnumBudget::new(ty("e"), 1);
        b.signature = Signature {
            preds: Vec::new(),
            consts: vec![Symbol::new("tweety")],
        };
        assert_eq!(enumerate_formulas(&b), vec![parse_term("tweety").unwrap()]);
    }

    #[test]
    fn smallest_fact_rule() {
        let mut b = EnumBudget::new(ty("(a -> t)"), 4);
        b.signature = Signature::empty();
        let fs = enumerate_formulas(&b);
        assert_eq!(fs[0].to_string(), "\\v0.(<- v0.)");
        assert!(fs.iter().any(|f| alpha_eq(f, &parse_term("\\v.(v.)").unwrap())));
    }

    #[test]
    fn hand_counted() {
        // Depth 2 over {p/1, a, b} at type a: p(a), p(b).
        let mut b = EnumBudget::new(ty("a"), 2);
        b.signature.preds.truncate(1);
        assert_eq!(enumerate_formulas(&b).len(), 2);
        // Inferred type l at depth 3: atoms infer to a, so only -p(a), -p(b).
        b.target = ty("l");
        b.max_depth = 3;
        let printed: Vec<String> = enumerate_formulas(&b).iter().map(|t| t.to_string()).collect();
        assert_eq!(printed, vec!["-p(a)", "-p(b)"]);
        // (e -> a) at depth 3: \v0.p(v0).
        b.target = ty("(e -> a)");
        assert_eq!(enumerate_formulas(&b).len(), 1);
    }

    #[test]
    fn everything_is_a_normal_formula() {
        for (f, g) in order_rows() {
            for t in [f, g] {
                for x in enumerate_formulas(&EnumBudget::new(t.clone(), 4)) {
                    assert!(is_formula(&x) && is_beta_normal(&x), "{x}");
                    assert!(x.depth() <= 4);
                }
            }
        }
    }

    #[test]
    fn abstractor_bound() {
        let mut b = EnumBudget::new(ty("(((e -> t) -> t) -> t)"), 6);
        b.signature = Signature::small();
        let all = enumerate_formulas(&b);
        b.max_abstractors = 1;
        let few = enumerate_formulas(&b);
        assert!(few.len() < all.len());
        assert!(few.iter().all(|t| abstractors(t) <= 1));
    }

    #[test]
    fn finds_worked_inverses() {
        let h = parse_term("bird(tweety).").unwrap();
        let g = parse_term("\\x.x").unwrap();
        let mut b = EnumBudget::new(ty("((t -> t) -> t)"), 5);
        b.signature = Signature {
            preds: vec![(Symbol::new("bird"), 1)],
            consts: vec![Symbol::new("tweety")],
        };
        let fs = oracle_inverse_l(&h, &g, &b);
        assert!(fs.iter().any(|f| alpha_eq(f, &parse_term("\\v.v@(bird(tweety).)").unwrap())));
        b.target = ty("e");
        assert!(oracle_inverse_l(&h, &g, &b).is_empty());
    }
}
