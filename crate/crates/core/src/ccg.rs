//! Learning word meanings over CCG derivations.
//!
//! A derivation tree is given with categories and a sentence meaning; some
//! leaves have known meanings. Walking down from the root, an unknown
//! function child is recovered with [`inverse_l`] and an unknown argument
//! child with [`inverse_r`]. Which child is the function follows from the
//! slash directions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::inverse::{inverse_l, inverse_r, InverseCase, InverseError};
use crate::reduction::{apply, ReduceError};
use crate::syntax::{parse_term, SyntaxError};
use crate::term::{alpha_eq, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dir {
    /// `/`: the argument is on the right.
    Forward,
    /// `\`: the argument is on the left.
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Category {
    Atomic(String),
    Slash {
        dir: Dir,
        result: Box<Category>,
        arg: Box<Category>,
    },
}

impl Category {
    pub fn slash(dir: Dir, result: Category, arg: Category) -> Category {
        Category::Slash {
            dir,
            result: Box::new(result),
            arg: Box::new(arg),
        }
    }

    /// Parses `S`, `NP`, `(S\NP)/NP`, ... Slashes associate to the left.
    pub fn parse(text: &str) -> Result<Category, CcgError> {
        let toks: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let cat = cat_expr(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(CcgError::Category(text.to_string()));
        }
        Ok(cat)
    }
}

fn cat_expr(toks: &[char], pos: &mut usize) -> Result<Category, CcgError> {
    let mut left = cat_primary(toks, pos)?;
    while let Some(&c) = toks.get(*pos) {
        let dir = match c {
            '/' => Dir::Forward,
            '\\' => Dir::Backward,
            _ => break,
        };
        *pos += 1;
        let right = cat_primary(toks, pos)?;
        left = Category::slash(dir, left, right);
    }
    Ok(left)
}

fn cat_primary(toks: &[char], pos: &mut usize) -> Result<Category, CcgError> {
    let bad = || CcgError::Category(toks.iter().collect());
    match toks.get(*pos) {
        Some('(') => {
            *pos += 1;
            let c = cat_expr(toks, pos)?;
            if toks.get(*pos) != Some(&')') {
                return Err(bad());
            }
            *pos += 1;
            Ok(c)
        }
        Some(c) if c.is_ascii_alphabetic() => {
            let start = *pos;
            while toks.get(*pos).is_some_and(|c| c.is_ascii_alphanumeric()) {
                *pos += 1;
            }
            Ok(Category::Atomic(toks[start..*pos].iter().collect()))
        }
        _ => Err(bad()),
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Category::Atomic(s) => f.write_str(s),
            Category::Slash { dir, result, arg } => {
                let side = |c: &Category| match c {
                    Category::Atomic(_) => c.to_string(),
                    _ => format!("({c})"),
                };
                let s = if *dir == Dir::Forward { "/" } else { "\\" };
                write!(f, "{}{s}{}", side(result), side(arg))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub word: String,
    pub category: Category,
    pub meaning: Option<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseNode {
    pub category: Category,
    pub meaning: Option<Term>,
    pub children: Vec<ParseNode>,
    /// Word indices `[start, end)`.
    pub span: (usize, usize),
    /// Leaf text, empty for inner nodes.
    pub words: String,
}

impl ParseNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Operator {
    Apply,
    InverseL,
    InverseR,
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operator::Apply => "apply",
            Operator::InverseL => "Inverse_L",
            Operator::InverseR => "Inverse_R",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub span: (usize, usize),
    pub op: Operator,
    pub case: Option<InverseCase>,
    pub inputs: Vec<Term>,
    pub output: Term,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationResult {
    pub learned: Vec<LexEntry>,
    pub trace: Vec<TraceEntry>,
    /// The tree with every meaning filled in.
    pub tree: ParseNode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CcgError {
    #[error("bad category {0:?}")]
    Category(String),
    #[error("bad tree: {0}")]
    Tree(String),
    #[error("bad meaning for {what}: {source}")]
    Meaning { what: String, source: SyntaxError },
    #[error("categories at words {}..{} do not combine by application", .span.0, .span.1)]
    NoCombination { span: (usize, usize) },
    #[error("both children of words {}..{} have unknown meanings", .span.0, .span.1)]
    TwoUnknown { span: (usize, usize) },
    #[error("sentence meaning is unknown")]
    NoRootMeaning,
    #[error("{op} returned null at words {}..{}", .span.0, .span.1)]
    NullInverse { span: (usize, usize), op: Operator },
    #[error(transparent)]
    Inverse(#[from] InverseError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("recombining the leaves gives {got}, not {want}")]
    Rederivation { got: Term, want: Term },
}

/// `apply(fun, arg)`.
pub fn combine(fun: &Term, arg: &Term) -> Result<Term, ReduceError> {
    apply(fun, arg)
}

/// Index of the function child, if the children combine into `parent`.
fn function_child(parent: &Category, left: &Category, right: &Category) -> Option<usize> {
    if let Category::Slash { dir: Dir::Forward, result, arg } = left {
        if **result == *parent && **arg == *right {
            return Some(0);
        }
    }
    if let Category::Slash { dir: Dir::Backward, result, arg } = right {
        if **result == *parent && **arg == *left {
            return Some(1);
        }
    }
    None
}

/// Parses `[CAT word ...]` leaves and `[CAT left right]` inner nodes.
pub fn parse_tree(text: &str) -> Result<ParseNode, CcgError> {
    let toks = tree_tokens(text);
    let mut pos = 0;
    let mut next_word = 0;
    let node = tree_node(&toks, &mut pos, &mut next_word)?;
    if pos != toks.len() {
        return Err(CcgError::Tree(format!("trailing input after token {pos}")));
    }
    Ok(node)
}

fn tree_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        if c == '[' || c == ']' || c.is_whitespace() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !c.is_whitespace() {
                out.push(c.to_string());
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn tree_node(toks: &[String], pos: &mut usize, next_word: &mut usize) -> Result<ParseNode, CcgError> {
    let expect = |pos: &usize, s: &str| -> Result<(), CcgError> {
        if toks.get(*pos).map(String::as_str) == Some(s) {
            Ok(())
        } else {
            Err(CcgError::Tree(format!("expected {s:?} at token {pos}")))
        }
    };
    expect(pos, "[")?;
    *pos += 1;
    let cat_text = toks
        .get(*pos)
        .filter(|t| *t != "[" && *t != "]")
        .ok_or_else(|| CcgError::Tree(format!("missing category at token {pos}")))?;
    let category = Category::parse(cat_text)?;
    *pos += 1;
    let start = *next_word;
    if toks.get(*pos).map(String::as_str) == Some("[") {
        let left = tree_node(toks, pos, next_word)?;
        let right = tree_node(toks, pos, next_word)?;
        expect(pos, "]")?;
        *pos += 1;
        return Ok(ParseNode {
            category,
            meaning: None,
            children: vec![left, right],
            span: (start, *next_word),
            words: String::new(),
        });
    }
    let mut words = Vec::new();
    while let Some(t) = toks.get(*pos).filter(|t| *t != "[" && *t != "]") {
        words.push(t.clone());
        *pos += 1;
    }
    if words.is_empty() {
        return Err(CcgError::Tree(format!("leaf without words at token {pos}")));
    }
    expect(pos, "]")?;
    *pos += 1;
    *next_word += words.len();
    Ok(ParseNode {
        category,
        meaning: None,
        children: Vec::new(),
        span: (start, *next_word),
        words: words.join(" "),
    })
}

fn key(words: &str) -> String {
    words.to_lowercase()
}

fn fill_leaves(node: &mut ParseNode, lexicon: &[LexEntry]) {
    if node.is_leaf() {
        let k = key(&node.words);
        if let Some(e) = lexicon.iter().find(|e| key(&e.word) == k) {
            node.meaning = e.meaning.clone();
        }
    }
    for c in &mut node.children {
        fill_leaves(c, lexicon);
    }
}

/// Fills inner meanings whose children are both known.
fn upward(node: &mut ParseNode, trace: &mut Vec<TraceEntry>) -> Result<(), CcgError> {
    if node.is_leaf() {
        return Ok(());
    }
    for c in &mut node.children {
        upward(c, trace)?;
    }
    let fi = function_child(&node.category, &node.children[0].category, &node.children[1].category)
        .ok_or(CcgError::NoCombination { span: node.span })?;
    let (Some(fun), Some(arg)) = (&node.children[fi].meaning, &node.children[1 - fi].meaning) else {
        return Ok(());
    };
    let out = combine(fun, arg)?;
    trace.push(TraceEntry {
        span: node.span,
        op: Operator::Apply,
        case: None,
        inputs: vec![fun.clone(), arg.clone()],
        output: out.clone(),
    });
    if node.meaning.is_none() {
        node.meaning = Some(out);
    }
    Ok(())
}

fn downward(node: &mut ParseNode, trace: &mut Vec<TraceEntry>) -> Result<(), CcgError> {
    if node.is_leaf() {
        return Ok(());
    }
    let h = node.meaning.clone().ok_or(CcgError::NoRootMeaning)?;
    let fi = function_child(&node.category, &node.children[0].category, &node.children[1].category)
        .ok_or(CcgError::NoCombination { span: node.span })?;
    let ai = 1 - fi;
    let known = (node.children[fi].meaning.clone(), node.children[ai].meaning.clone());
    match known {
        (None, None) => return Err(CcgError::TwoUnknown { span: node.span }),
        (None, Some(g)) => {
            let r = inverse_l(&h, &g)?;
            let f = r.f.ok_or(CcgError::NullInverse {
                span: node.span,
                op: Operator::InverseL,
            })?;
            trace.push(TraceEntry {
                span: node.span,
                op: Operator::InverseL,
                case: r.case_used,
                inputs: vec![h, g],
                output: f.clone(),
            });
            node.children[fi].meaning = Some(f);
        }
        (Some(g), None) => {
            let r = inverse_r(&h, &g)?;
            let f = r.f.ok_or(CcgError::NullInverse {
                span: node.span,
                op: Operator::InverseR,
            })?;
            trace.push(TraceEntry {
                span: node.span,
                op: Operator::InverseR,
                case: r.case_used,
                inputs: vec![h, g],
                output: f.clone(),
            });
            node.children[ai].meaning = Some(f);
        }
        (Some(_), Some(_)) => {}
    }
    for c in &mut node.children {
        if !c.is_leaf() && !subtree_known(c) {
            downward(c, trace)?;
        }
    }
    Ok(())
}

/// Every leaf below `node` has a meaning.
fn subtree_known(node: &ParseNode) -> bool {
    if node.is_leaf() {
        node.meaning.is_some()
    } else {
        node.children.iter().all(subtree_known)
    }
}

fn collect_learned(node: &ParseNode, was_known: &dyn Fn(&ParseNode) -> bool, out: &mut Vec<LexEntry>) {
    if node.is_leaf() {
        if !was_known(node) {
            out.push(LexEntry {
                word: key(&node.words),
                category: node.category.clone(),
                meaning: node.meaning.clone(),
            });
        }
        return;
    }
    for c in &node.children {
        collect_learned(c, was_known, out);
    }
}

/// Meaning of `node` recomputed from its leaves alone.
pub fn rederive(node: &ParseNode) -> Result<Option<Term>, CcgError> {
    if node.is_leaf() {
        return Ok(node.meaning.clone());
    }
    let fi = function_child(&node.category, &node.children[0].category, &node.children[1].category)
        .ok_or(CcgError::NoCombination { span: node.span })?;
    let fun = rederive(&node.children[fi])?;
    let arg = rederive(&node.children[1 - fi])?;
    match (fun, arg) {
        (Some(f), Some(a)) => Ok(Some(combine(&f, &a)?)),
        _ => Ok(None),
    }
}

/// Learns the meanings of leaves missing from `lexicon`. The tree's root
/// must carry the sentence meaning.
pub fn infer_missing(tree: &ParseNode, lexicon: &[LexEntry]) -> Result<DerivationResult, CcgError> {
    let want = tree.meaning.clone().ok_or(CcgError::NoRootMeaning)?;
    let mut t = tree.clone();
    fill_leaves(&mut t, lexicon);
    let seeded = t.clone();
    let mut trace = Vec::new();
    upward(&mut t, &mut trace)?;
    if !subtree_known(&t) {
        downward(&mut t, &mut trace)?;
    }
    trace.sort_by_key(|e| (e.span.0, std::cmp::Reverse(e.span.1)));
    let got = rederive(&t)?.expect("all leaves known");
    if !alpha_eq(&got, &want) {
        return Err(CcgError::Rederivation { got, want });
    }
    let mut known_spans = Vec::new();
    leaf_spans_with_meaning(&seeded, &mut known_spans);
    let mut learned = Vec::new();
    collect_learned(&t, &|n| known_spans.contains(&n.span), &mut learned);
    Ok(DerivationResult {
        learned,
        trace,
        tree: t,
    })
}

fn leaf_spans_with_meaning(node: &ParseNode, out: &mut Vec<(usize, usize)>) {
    if node.is_leaf() && node.meaning.is_some() {
        out.push(node.span);
    }
    for c in &node.children {
        leaf_spans_with_meaning(c, out);
    }
}

/// A lexicon entry as written in a derivation-spec document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexSpec {
    pub category: String,
    pub meaning: String,
}

/// One sentence to learn from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationSpec {
    pub words: Vec<String>,
    pub tree: String,
    pub meaning: String,
    #[serde(default)]
    pub lexicon: BTreeMap<String, LexSpec>,
}

fn meaning(what: &str, text: &str) -> Result<Term, CcgError> {
    parse_term(text).map_err(|source| CcgError::Meaning {
        what: what.to_string(),
        source,
    })
}

impl DerivationSpec {
    /// The tree with the sentence meaning at its root, and the lexicon.
    pub fn load(&self) -> Result<(ParseNode, Vec<LexEntry>), CcgError> {
        let mut tree = parse_tree(&self.tree)?;
        let mut leaves = Vec::new();
        leaf_words(&tree, &mut leaves);
        let flat: Vec<String> = leaves.iter().flat_map(|w| w.split(' ')).map(key).collect();
        let given: Vec<String> = self.words.iter().map(|w| key(w)).collect();
        if flat != given {
            return Err(CcgError::Tree(format!("leaves {flat:?} do not match words {given:?}")));
        }
        tree.meaning = Some(meaning("the sentence", &self.meaning)?);
        let mut lexicon = Vec::new();
        for (word, e) in &self.lexicon {
            lexicon.push(LexEntry {
                word: key(word),
                category: Category::parse(&e.category)?,
                meaning: Some(meaning(word, &e.meaning)?),
            });
        }
        Ok((tree, lexicon))
    }

    pub fn run(&self) -> Result<DerivationResult, CcgError> {
        let (tree, lexicon) = self.load()?;
        infer_missing(&tree, &lexicon)
    }
}

fn leaf_words(node: &ParseNode, out: &mut Vec<String>) {
    if node.is_leaf() {
        out.push(node.words.clone());
    }
    for c in &node.children {
        leaf_words(c, out);
    }
}

/// Learned entries in the lexicon document shape.
pub fn learned_map(r: &DerivationResult) -> BTreeMap<String, LexSpec> {
    r.learned
        .iter()
        .map(|e| {
            let m = e.meaning.as_ref().map(|m| m.to_string()).unwrap_or_default();
            (
                e.word.clone(),
                LexSpec {
                    category: e.category.to_string(),
                    meaning: m,
                },
            )
        })
        .collect()
}
