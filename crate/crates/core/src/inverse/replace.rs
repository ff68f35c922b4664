//! The `:` operator and path-directed replacement.

use crate::term::{alpha_eq, Path, Step, Term};

/// `h(A1..An : B1..Bn)`: scans `h` leftmost-outermost and replaces every
/// occurrence of some `Ai` by `Bi`. Replaced occurrences are not searched
/// again, so the result is well defined even when a `Bi` contains an `Aj`.
/// Runs of list elements count as occurrences.
///
/// Panics if the two lists differ in length.
pub fn replace(h: &Term, as_: &[Term], bs: &[Term]) -> Term {
    assert_eq!(as_.len(), bs.len(), "replace: lists of different length");
    rep(h, as_, bs)
}

fn lookup<'a>(t: &Term, as_: &[Term], bs: &'a [Term]) -> Option<&'a Term> {
    as_.iter().position(|a| alpha_eq(a, t)).map(|i| &bs[i])
}

fn rep(t: &Term, as_: &[Term], bs: &[Term]) -> Term {
    if let Some(b) = lookup(t, as_, bs) {
        return b.clone();
    }
    if let Some((kind, items)) = t.as_list() {
        let n = items.len();
        let mut out = Vec::with_capacity(n);
        let mut i = 0;
        'outer: while i < n {
            for len in 2..=(n - i) {
                if len == n {
                    break;
                }
                let slice = Term::list(kind, items[i..i + len].iter().cloned());
                if let Some(b) = lookup(&slice, as_, bs) {
                    out.push(b.clone());
                    i += len;
                    continue 'outer;
                }
            }
            out.push(rep(&items[i], as_, bs));
            i += 1;
        }
        return Term::list(kind, out);
    }
    t.map_children(|c| rep(c, as_, bs))
}

/// Replaces the sub-terms at the given (pairwise disjoint) paths.
pub(crate) fn replace_paths(t: &Term, repls: &[(Path, Term)]) -> Term {
    let refs: Vec<(&[Step], &Term)> = repls.iter().map(|(p, r)| (p.0.as_slice(), r)).collect();
    replace_at(t, &refs)
}

fn replace_at(t: &Term, repls: &[(&[Step], &Term)]) -> Term {
    if repls.is_empty() {
        return t.clone();
    }
    if let Some((_, r)) = repls.iter().find(|(p, _)| p.is_empty()) {
        return (*r).clone();
    }
    let tails = |i: usize| -> Vec<(&[Step], &Term)> {
        repls
            .iter()
            .filter(|(p, _)| p[0] == Step::Child(i))
            .map(|(p, r)| (&p[1..], *r))
            .collect()
    };
    if let Some((kind, items)) = t.as_list() {
        let mut out = Vec::with_capacity(items.len());
        let mut i = 0;
        while i < items.len() {
            let slice = repls.iter().find_map(|(p, r)| match p[0] {
                Step::Slice { start, len } if start == i && p.len() == 1 => Some((len, *r)),
                _ => None,
            });
            if let Some((len, r)) = slice {
                out.push(r.clone());
                i += len;
            } else {
                out.push(replace_at(&items[i], &tails(i)));
                i += 1;
            }
        }
        return Term::list(kind, out);
    }
    t.map_children_indexed(|i, c| replace_at(c, &tails(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn replaces_every_occurrence() {
        let h = p("\\u.(fly(X) <- u, not -fly(X).)");
        let out = replace(&h, &[p("fly(X)")], &[Term::var("v")]);
        assert_eq!(out, Term::abs("u", p("\\v.\\u.(v <- u, not -v.)").strip_binders().1.clone()));
    }

    #[test]
    fn identity_replacement() {
        let h = p("\\u.(fly(X) <- u, not -fly(X).)");
        assert_eq!(replace(&h, &[p("fly(X)")], &[p("fly(X)")]), h);
        assert_eq!(replace(&h, &[p("swim(X)")], &[p("fly(X)")]), h);
    }

    #[test]
    fn simultaneous_lists() {
        let h = p("\\u.(bird(tweety), animal(tweety), penguin(rocky), animal(rocky), eats(tweety,u))");
        let j1 = p("(bird(tweety), animal(tweety))");
        let j2 = p("(penguin(rocky), animal(rocky))");
        let b1 = Term::apps(Term::var("x"), [p("bird(tweety)"), p("tweety")]);
        let b2 = Term::apps(Term::var("x"), [p("penguin(rocky)"), p("rocky")]);
        let out = replace(&h, &[j1, j2], &[b1, b2]);
        let f = Term::abs("x", out);
        let expected = p("\\x.\\u.(x@bird(tweety)@tweety, x@penguin(rocky)@rocky, eats(tweety,u))");
        assert!(alpha_eq(&f, &expected));
    }

    #[test]
    fn replacement_at_paths() {
        let h = p("(p, q, r)");
        let out = replace_paths(&h, &[(Path::root().slice(0, 2), Term::var("v"))]);
        assert_eq!(out, Term::conj([Term::var("v"), Term::atom("r", vec![])]));
        let out = replace_paths(&h, &[(Path::root().child(2), Term::var("v"))]);
        assert_eq!(out, Term::conj([Term::atom("p", vec![]), Term::atom("q", vec![]), Term::var("v")]));
    }
}
