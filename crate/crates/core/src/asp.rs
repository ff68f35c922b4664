//! Answer-set semantics for the programs that type-`t` formulas normalize
//! to: grounding, satisfaction, the reduct, and brute-force answer sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::term::{Symbol, Term};
use crate::typecheck::{infer_type, is_beta_normal};
use crate::types::{BaseType, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AspError {
    #[error("not an ASP program: {0}")]
    NotAProgram(String),
    #[error("rule is not ground: {0}")]
    NotGround(String),
    #[error("Herbrand universe has {size} terms, more than the bound {bound}")]
    UniverseTooLarge { size: usize, bound: usize },
    #[error("{count} ground literals, more than the brute-force bound {bound}")]
    TooManyLiterals { count: usize, bound: usize },
}

/// `p(t1..tn)` or `-p(t1..tn)`. Arguments are constants, ASP variables or
/// function terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AspLiteral {
    pub pred: Symbol,
    pub args: Vec<Term>,
    pub positive: bool,
}

impl AspLiteral {
    pub fn new(positive: bool, pred: &str, args: Vec<Term>) -> AspLiteral {
        AspLiteral {
            pred: Symbol::new(pred),
            args,
            positive,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(ground_term)
    }

    pub fn complement(&self) -> AspLiteral {
        AspLiteral {
            positive: !self.positive,
            ..self.clone()
        }
    }
}

fn ground_term(t: &Term) -> bool {
    match t {
        Term::Const(s) => !s.is_asp_variable(),
        Term::Func(_, args) => args.iter().all(ground_term),
        _ => false,
    }
}

impl fmt::Display for AspLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("-")?;
        }
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            let args: Vec<String> = self.args.iter().map(|a| a.to_string()).collect();
            write!(f, "({})", args.join(","))?;
        }
        Ok(())
    }
}

/// `h1 or ... or hk <- b1, ..., bm, not n1, ..., not nj.`
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AspRule {
    pub head: Vec<AspLiteral>,
    pub pos: Vec<AspLiteral>,
    pub naf: Vec<AspLiteral>,
}

impl AspRule {
    pub fn is_ground(&self) -> bool {
        self.literals().all(AspLiteral::is_ground)
    }

    pub fn literals(&self) -> impl Iterator<Item = &AspLiteral> {
        self.head.iter().chain(&self.pos).chain(&self.naf)
    }
}

impl fmt::Display for AspRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ls: &[AspLiteral], sep: &str, prefix: &str| {
            ls.iter().map(|l| format!("{prefix}{l}")).collect::<Vec<_>>().join(sep)
        };
        let head = join(&self.head, " or ", "");
        let mut body: Vec<String> = self.pos.iter().map(|l| l.to_string()).collect();
        body.extend(self.naf.iter().map(|l| format!("not {l}")));
        match (head.is_empty(), body.is_empty()) {
            (false, true) => write!(f, "{head}."),
            (true, _) => write!(f, "<- {}.", body.join(", ")),
            (false, false) => write!(f, "{head} <- {}.", body.join(", ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AspProgram {
    pub rules: Vec<AspRule>,
}

impl fmt::Display for AspProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rules: Vec<String> = self.rules.iter().map(|r| r.to_string()).collect();
        f.write_str(&rules.join("\n"))
    }
}

pub type Interpretation = BTreeSet<AspLiteral>;

/// Renders `{l1, l2}` with literals in sorted order.
pub fn show_interpretation(i: &Interpretation) -> String {
    let ls: Vec<String> = i.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", ls.join(", "))
}

fn literal(t: &Term) -> Result<AspLiteral, AspError> {
    match t {
        Term::Atom(p, args) => Ok(AspLiteral {
            pred: p.clone(),
            args: args.clone(),
            positive: true,
        }),
        Term::CNeg(x) => literal(x).and_then(|l| {
            if l.positive {
                Ok(l.complement())
            } else {
                Err(AspError::NotAProgram(format!("double negation in {t}")))
            }
        }),
        Term::Abs { .. } => Err(AspError::NotAProgram(format!("abstraction remains: {t}"))),
        Term::App(..) => Err(AspError::NotAProgram(format!("application remains: {t}"))),
        _ => Err(AspError::NotAProgram(format!("not a literal: {t}"))),
    }
}

fn rule_of(t: &Term) -> Result<AspRule, AspError> {
    let Term::Rule { head, body } = t else {
        return Err(AspError::NotAProgram(format!("not a rule: {t}")));
    };
    let mut rule = AspRule::default();
    if let Some(h) = head {
        match h.as_ref() {
            Term::Or(items) => {
                for x in items {
                    rule.head.push(literal(x)?);
                }
            }
            x => rule.head.push(literal(x)?),
        }
    }
    if let Some(b) = body {
        let items = match b.as_ref() {
            Term::Conj(items) => items.as_slice(),
            x => std::slice::from_ref(x),
        };
        for x in items {
            match x {
                Term::Naf(l) => rule.naf.push(literal(l)?),
                l => rule.pos.push(literal(l)?),
            }
        }
    }
    Ok(rule)
}

/// Reads a closed, β-normal formula of type `t` as a program.
pub fn program_of(t: &Term) -> Result<AspProgram, AspError> {
    match infer_type(t) {
        Ok(Type::Base(BaseType::T)) => {}
        Ok(ty) => return Err(AspError::NotAProgram(format!("type is {ty}, not t"))),
        Err(e) => return Err(AspError::NotAProgram(e.to_string())),
    }
    if !is_beta_normal(t) {
        return Err(AspError::NotAProgram("not in beta-normal form".into()));
    }
    let items = match t {
        Term::Program(items) => items.as_slice(),
        x => std::slice::from_ref(x),
    };
    let rules = items.iter().map(rule_of).collect::<Result<_, _>>()?;
    Ok(AspProgram { rules })
}

#[derive(Debug, Clone, Copy)]
pub struct GroundConfig {
    /// Nesting depth of function terms in the Herbrand universe.
    pub function_depth: usize,
    pub max_universe: usize,
}

impl Default for GroundConfig {
    fn default() -> Self {
        GroundConfig {
            function_depth: 0,
            max_universe: 1000,
        }
    }
}

fn collect_symbols(t: &Term, consts: &mut BTreeSet<Symbol>, funcs: &mut BTreeSet<(Symbol, usize)>, vars: &mut Vec<Symbol>) {
    match t {
        Term::Const(s) if s.is_asp_variable() => {
            if !vars.contains(s) {
                vars.push(s.clone());
            }
        }
        Term::Const(s) => {
            consts.insert(s.clone());
        }
        Term::Func(f, args) => {
            funcs.insert((f.clone(), args.len()));
            for a in args {
                collect_symbols(a, consts, funcs, vars);
            }
        }
        _ => {}
    }
}

fn cartesian(pool: &[Term], n: usize) -> Vec<Vec<Term>> {
    let mut acc = vec![Vec::new()];
    for _ in 0..n {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                pool.iter().map(move |t| {
                    let mut v = prefix.clone();
                    v.push(t.clone());
                    v
                })
            })
            .collect();
    }
    acc
}

fn instantiate(t: &Term, sigma: &BTreeMap<Symbol, Term>) -> Term {
    match t {
        Term::Const(s) => sigma.get(s).cloned().unwrap_or_else(|| t.clone()),
        Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(|a| instantiate(a, sigma)).collect()),
        _ => t.clone(),
    }
}

fn instantiate_lits(ls: &[AspLiteral], sigma: &BTreeMap<Symbol, Term>) -> Vec<AspLiteral> {
    ls.iter()
        .map(|l| AspLiteral {
            args: l.args.iter().map(|a| instantiate(a, sigma)).collect(),
            ..l.clone()
        })
        .collect()
}

/// Replaces every rule by all its instances over the Herbrand universe.
/// Instances are deduplicated; the first occurrence keeps its position.
pub fn ground(p: &AspProgram, cfg: GroundConfig) -> Result<AspProgram, AspError> {
    let mut consts = BTreeSet::new();
    let mut funcs = BTreeSet::new();
    let mut rule_vars = Vec::new();
    for r in &p.rules {
        let mut vars = Vec::new();
        for l in r.literals() {
            for a in &l.args {
                collect_symbols(a, &mut consts, &mut funcs, &mut vars);
            }
        }
        rule_vars.push(vars);
    }
    let mut universe: Vec<Term> = consts.into_iter().map(Term::Const).collect();
    for _ in 0..cfg.function_depth {
        let mut next: BTreeSet<Term> = universe.iter().cloned().collect();
        for (f, n) in &funcs {
            for args in cartesian(&universe, *n) {
                next.insert(Term::Func(f.clone(), args));
                if next.len() > cfg.max_universe {
                    return Err(AspError::UniverseTooLarge {
                        size: next.len(),
                        bound: cfg.max_universe,
                    });
                }
            }
        }
        universe = next.into_iter().collect();
    }
    if universe.len() > cfg.max_universe {
        return Err(AspError::UniverseTooLarge {
            size: universe.len(),
            bound: cfg.max_universe,
        });
    }
    let mut seen = BTreeSet::new();
    let mut rules = Vec::new();
    for (r, vars) in p.rules.iter().zip(&rule_vars) {
        for tuple in cartesian(&universe, vars.len()) {
            let sigma: BTreeMap<Symbol, Term> = vars.iter().cloned().zip(tuple).collect();
            let inst = AspRule {
                head: instantiate_lits(&r.head, &sigma),
                pos: instantiate_lits(&r.pos, &sigma),
                naf: instantiate_lits(&r.naf, &sigma),
            };
            if seen.insert(inst.clone()) {
                rules.push(inst);
            }
        }
    }
    Ok(AspProgram { rules })
}

fn require_ground(r: &AspRule) -> Result<(), AspError> {
    if r.is_ground() {
        Ok(())
    } else {
        Err(AspError::NotGround(r.to_string()))
    }
}

/// If the body holds in `i`, some head literal is in `i`.
pub fn satisfies(i: &Interpretation, r: &AspRule) -> Result<bool, AspError> {
    require_ground(r)?;
    Ok(holds(i, r))
}

fn holds(i: &Interpretation, r: &AspRule) -> bool {
    let body = r.pos.iter().all(|l| i.contains(l)) && !r.naf.iter().any(|l| i.contains(l));
    !body || r.head.iter().any(|l| i.contains(l))
}

/// Drops rules whose `not` part meets `s`, then strips `not` from the rest.
pub fn reduct(p: &AspProgram, s: &Interpretation) -> Result<AspProgram, AspError> {
    let mut rules = Vec::new();
    for r in &p.rules {
        require_ground(r)?;
        if r.naf.iter().any(|l| s.contains(l)) {
            continue;
        }
        rules.push(AspRule {
            head: r.head.clone(),
            pos: r.pos.clone(),
            naf: Vec::new(),
        });
    }
    Ok(AspProgram { rules })
}

pub const MAX_LITERALS: usize = 20;

/// Every ground literal mentioned by a ground program, sorted.
pub fn literal_universe(p: &AspProgram) -> Vec<AspLiteral> {
    let set: BTreeSet<AspLiteral> = p.rules.iter().flat_map(|r| r.literals().cloned()).collect();
    set.into_iter().collect()
}

fn consistent(s: &Interpretation) -> bool {
    s.iter().all(|l| l.positive || !s.contains(&l.complement()))
}

fn subset(lits: &[AspLiteral], mask: u32) -> Interpretation {
    lits.iter()
        .enumerate()
        .filter(|(k, _)| mask & (1 << k) != 0)
        .map(|(_, l)| l.clone())
        .collect()
}

/// Answer sets by exhaustive search, sorted. The program is grounded first
/// with the default configuration.
pub fn answer_sets(p: &AspProgram) -> Result<Vec<Interpretation>, AspError> {
    let g = ground(p, GroundConfig::default())?;
    let lits = literal_universe(&g);
    if lits.len() > MAX_LITERALS {
        return Err(AspError::TooManyLiterals {
            count: lits.len(),
            bound: MAX_LITERALS,
        });
    }
    let mut out = Vec::new();
    for mask in 0..(1u32 << lits.len()) {
        let s = subset(&lits, mask);
        if !consistent(&s) {
            continue;
        }
        let red = reduct(&g, &s)?;
        if !red.rules.iter().all(|r| holds(&s, r)) {
            continue;
        }
        // Proper subsets of s are the proper sub-masks of mask.
        let mut sub = mask;
        let mut minimal = true;
        while sub != 0 {
            sub = (sub - 1) & mask;
            let t = subset(&lits, sub);
            if red.rules.iter().all(|r| holds(&t, r)) {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}
