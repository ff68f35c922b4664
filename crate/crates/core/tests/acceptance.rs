//! Acceptance run: one pass/fail line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use asp_lambda::asp::{answer_sets, program_of, reduct, AspLiteral, AspProgram, AspRule, Interpretation};
use asp_lambda::ccg::DerivationSpec;
use asp_lambda::typecheck::infer;
use asp_lambda::{alpha_eq, apply, inverse_l, inverse_r, parse_type, InverseCase, Term};
use common::{answer_sets_by_subsets, fixtures, p, row_pools};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Pools = Vec<(Vec<Term>, Vec<Term>)>;

fn golden() -> String {
    let cases: [(&str, &str, &str, &str, InverseCase); 5] = [
        ("l", "bird(tweety).", "\\x.x", "\\v.v@(bird(tweety).)", InverseCase::L1),
        (
            "l",
            "\\u.(fly(X) <- u, not -fly(X).)",
            "fly(X)",
            "\\v.\\u.(v <- u, not -v.)",
            InverseCase::L2,
        ),
        (
            "l",
            "\\u.(bird(tweety), animal(tweety), penguin(rocky), animal(rocky), eats(tweety,u))",
            "\\v.\\w.(v, animal(w))",
            "\\x.\\u.(x@bird(tweety)@tweety, x@penguin(rocky)@rocky, eats(tweety,u))",
            InverseCase::L3,
        ),
        (
            "r",
            "love(mia,jon) <- love(jon,mia).",
            "\\w.(w@mia@jon <- w@jon@mia.)",
            "\\v1.\\v2.love(v1,v2)",
            InverseCase::R3,
        ),
        (
            "r",
            "\\v.(stay_at(room5) <- not goto_from(v,room5).)",
            "\\w.\\v.(w@(\\u.goto_from(v,u)))",
            "\\w.(stay_at(room5) <- not w@room5.)",
            InverseCase::R4,
        ),
    ];
    let mut slowest = Duration::ZERO;
    for (side, h, g, want, case) in cases {
        let (h, g) = (p(h), p(g));
        let start = Instant::now();
        let r = if side == "l" { inverse_l(&h, &g) } else { inverse_r(&h, &g) }.unwrap();
        let took = start.elapsed();
        slowest = slowest.max(took);
        let f = r.f.unwrap_or_else(|| panic!("null inverse for {h}"));
        assert!(alpha_eq(&f, &p(want)), "got {f}, want {want}");
        assert_eq!(r.case_used, Some(case));
        assert!(took < Duration::from_secs(1), "{h} took {took:?}");
    }
    format!("5 examples, cases L1 L2 L3 R3 R4, slowest {slowest:?}")
}

fn use_case() -> String {
    let want = [
        ("most_birds_fly", "most", "\\v.\\x.(x@X <- v@X, not -x@X.)"),
        ("penguins_are_birds", "are", "\\v.\\x.(x@X <- v@X.)"),
        ("penguins_do_not_fly", "do not", "\\u.\\x.(-x@X <- u@X.)"),
    ];
    for (file, word, meaning) in want {
        let text = std::fs::read_to_string(fixtures().join(format!("derive/{file}.json"))).unwrap();
        let spec: DerivationSpec = serde_json::from_str(&text).unwrap();
        let seed: Vec<&String> = spec.lexicon.keys().collect();
        assert!(seed.iter().all(|w| ["birds", "fly", "penguins"].contains(&w.as_str())));
        let r = spec.run().unwrap();
        assert_eq!(r.learned.len(), 1, "{file}");
        assert_eq!(r.learned[0].word, word);
        let got = r.learned[0].meaning.as_ref().unwrap();
        assert!(alpha_eq(got, &p(meaning)), "{word}: got {got}");
        let root = asp_lambda::ccg::rederive(&r.tree).unwrap().unwrap();
        assert!(alpha_eq(&root, &p(&spec.meaning)), "{file} re-derives to {root}");
        assert_eq!(r.trace.len(), 2);
    }
    "learned most, are, do not; all three sentences re-derive".into()
}

fn soundness(pools: &Pools) -> String {
    const PAIRS: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let rows: Vec<usize> = (0..pools.len())
        .filter(|&i| !pools[i].0.is_empty() && !pools[i].1.is_empty())
        .collect();
    let mut report = Vec::new();
    for side in ["l", "r"] {
        let mut done = 0;
        let mut skipped = 0;
        while done < PAIRS {
            let row = *rows.choose(&mut rng).unwrap();
            let (fs, gs) = &pools[row];
            let fun = &fs[rng.gen_range(0..fs.len())];
            let arg = &gs[rng.gen_range(0..gs.len())];
            let Ok(h) = apply(fun, arg) else {
                skipped += 1;
                continue;
            };
            done += 1;
            if side == "l" {
                let f = inverse_l(&h, arg).unwrap().f;
                let f = f.unwrap_or_else(|| panic!("Inverse_L null: F={fun} G={arg} H={h}"));
                assert!(alpha_eq(&apply(&f, arg).unwrap(), &h), "bad F {f} for H={h}");
            } else {
                let f = inverse_r(&h, fun).unwrap().f;
                let f = f.unwrap_or_else(|| panic!("Inverse_R null: G={fun} F={arg} H={h}"));
                assert!(alpha_eq(&apply(fun, &f).unwrap(), &h), "bad F {f} for H={h}");
            }
        }
        report.push(format!("{side}: {done} pairs ({skipped} ill-typed draws skipped)"));
    }
    report.join(", ")
}

fn completeness(pools: &Pools) -> String {
    const H_DEPTH: usize = 5;
    let mut lines = Vec::new();
    let mut empty_rows = Vec::new();
    for (row, (fs, gs)) in pools.iter().enumerate() {
        let mut pairs = 0;
        for fun in fs {
            for arg in gs {
                let Ok(h) = apply(fun, arg) else { continue };
                if h.depth() > H_DEPTH {
                    continue;
                }
                pairs += 1;
                // `fun` is in the oracle set for (h, arg) on the left, and
                // `arg` is in it for (h, fun) on the right.
                assert!(inverse_l(&h, arg).unwrap().f.is_some(), "Inverse_L miss: H={h} G={arg}");
                assert!(inverse_r(&h, fun).unwrap().f.is_some(), "Inverse_R miss: H={h} G={fun}");
            }
        }
        if pairs == 0 {
            empty_rows.push(row);
        }
        lines.push(format!("row {} {pairs}", row + 1));
    }
    // Rows with no pair at the nominal depth get a deeper sweep.
    for &row in &empty_rows {
        let (fs, gs) = &pools[row];
        let mut pairs = 0;
        for fun in fs {
            for arg in gs {
                let Ok(h) = apply(fun, arg) else { continue };
                pairs += 1;
                assert!(inverse_l(&h, arg).unwrap().f.is_some(), "Inverse_L miss: H={h} G={arg}");
                assert!(inverse_r(&h, fun).unwrap().f.is_some(), "Inverse_R miss: H={h} G={fun}");
            }
        }
        lines.push(format!("row {} unbounded H {pairs}", row + 1));
    }
    format!("pairs per row, zero misses on both sides: {}", lines.join(", "))
}

fn type_checker() -> String {
    let positive = [
        ("\\w.\\v.(w <- v@X.)", "(h -> ((e -> d) -> t))"),
        ("\\x.\\y.(<- h(x), not -y.)", "(e -> (a -> t))"),
        ("\\v.(v or -v <- .)", "(a -> t)"),
        ("\\w.\\u.(w@\\v.position(v,u))", "(((e -> l) -> t) -> (e -> t))"),
    ];
    for (src, ty) in positive {
        assert_eq!(infer(&p(src)).unwrap().ty, parse_type(ty).unwrap(), "{src}");
    }
    let t = p("\\y.\\x.(y or not x@X)");
    let e = infer(&t).unwrap_err();
    assert!(matches!(t.resolve(&e.path), Some(Term::Or(_))), "{e}");
    let t = p("\\v.\\w.(-w <- - not v@X.)");
    let e = infer(&t).unwrap_err();
    assert!(matches!(t.resolve(&e.path), Some(Term::CNeg(_))), "{e}");
    "4 positive types exact, negatives blamed at the or node and the - node".into()
}

fn random_ground_program(rng: &mut ChaCha8Rng) -> (AspProgram, Interpretation) {
    let atoms: Vec<AspLiteral> = ["p", "q", "r", "s"]
        .iter()
        .flat_map(|x| [AspLiteral::new(true, x, vec![]), AspLiteral::new(false, x, vec![])])
        .collect();
    let pick = |rng: &mut ChaCha8Rng, max: usize| -> Vec<AspLiteral> {
        let n = rng.gen_range(0..=max);
        (0..n).map(|_| atoms.choose(rng).unwrap().clone()).collect()
    };
    let rules = (0..rng.gen_range(0..6))
        .map(|_| AspRule {
            head: pick(rng, 2),
            pos: pick(rng, 2),
            naf: pick(rng, 2),
        })
        .collect();
    let s = pick(rng, 4).into_iter().collect();
    (AspProgram { rules }, s)
}

fn asp_kernel() -> String {
    let even = program_of(&p("p <- not q. q <- not p.")).unwrap();
    let expect: Vec<Interpretation> = vec![
        [AspLiteral::new(true, "p", vec![])].into_iter().collect(),
        [AspLiteral::new(true, "q", vec![])].into_iter().collect(),
    ];
    assert_eq!(answer_sets(&even).unwrap(), expect);
    assert_eq!(answer_sets_by_subsets(&even), expect);
    let birds = program_of(&p("bird(tweety). fly(X) <- bird(X), not -fly(X).")).unwrap();
    let sets = answer_sets(&birds).unwrap();
    let want: Interpretation = [
        AspLiteral::new(true, "bird", vec![p("tweety")]),
        AspLiteral::new(true, "fly", vec![p("tweety")]),
    ]
    .into_iter()
    .collect();
    assert_eq!(sets, vec![want]);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let (prog, s) = random_ground_program(&mut rng);
        // Step (i): drop rules with some `not l` where l is in S.
        // Step (ii): drop the `not` literals of the rules that remain.
        let direct: Vec<AspRule> = prog
            .rules
            .iter()
            .filter(|r| r.naf.iter().all(|l| !s.contains(l)))
            .map(|r| AspRule {
                naf: Vec::new(),
                ..r.clone()
            })
            .collect();
        assert_eq!(reduct(&prog, &s).unwrap().rules, direct);
    }
    "both programs exact, matches subset oracle, 1000 random reducts agree".into()
}

fn complexity() -> String {
    let g = p("\\x.fly(x)");
    let family = |n: usize| -> Term {
        let rules: Vec<String> = (0..n)
            .map(|i| format!("fly(c{i}) <- bird(c{i}), not -fly(c{i})."))
            .collect();
        p(&rules.join(" "))
    };
    let sizes = [2, 4, 8, 16, 32];
    let mut points = Vec::new();
    for n in sizes {
        let h = family(n);
        let mut runs: Vec<Duration> = (0..5)
            .map(|_| {
                let start = Instant::now();
                assert!(inverse_l(&h, &g).unwrap().f.is_some());
                start.elapsed()
            })
            .collect();
        runs.sort();
        points.push((h.size() as f64, runs[2].as_secs_f64()));
    }
    let (first, last) = (points[1], points[points.len() - 1]);
    let exponent = (last.1 / first.1).ln() / (last.0 / first.0).ln();
    let medians: Vec<String> = points.iter().map(|(s, t)| format!("{s}:{:.2}ms", t * 1e3)).collect();
    assert!(exponent < 4.0, "growth exponent {exponent:.2}");
    format!("median by size {}, growth exponent {exponent:.2}", medians.join(" "))
}

fn main() {
    let mut pools: Option<Pools> = None;
    let mut failed = 0;
    let mut run = |n: usize, name: &str, f: &mut dyn FnMut() -> String| {
        let start = Instant::now();
        match catch_unwind(AssertUnwindSafe(f)) {
            Ok(detail) => println!("criterion {n} ({name}): PASS in {:.1?}: {detail}", start.elapsed()),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {n} ({name}): FAIL: {msg}");
            }
        }
    };
    run(1, "golden examples", &mut golden);
    run(2, "lexicon use case", &mut use_case);
    run(3, "soundness", &mut || soundness(pools.get_or_insert_with(row_pools)));
    run(4, "completeness against the oracle", &mut || completeness(pools.get_or_insert_with(row_pools)));
    run(5, "type checker", &mut type_checker);
    run(6, "ASP kernel", &mut asp_kernel);
    run(7, "complexity sanity", &mut complexity);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
