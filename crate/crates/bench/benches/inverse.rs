use asp_lambda::asp::{answer_sets, program_of};
use asp_lambda::{apply, inverse_l, inverse_r, parse_term, Term};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn p(s: &str) -> Term {
    parse_term(s).unwrap()
}

// n default rules over distinct constants; G occurs once per rule.
fn default_family(n: usize) -> Term {
    let rules: Vec<String> = (0..n)
        .map(|i| format!("fly(c{i}) <- bird(c{i}), not -fly(c{i})."))
        .collect();
    p(&rules.join(" "))
}

fn examples(c: &mut Criterion) {
    let cases = [
        ("l1", "bird(tweety).", r"\z.z", true),
        ("l2", "fly(tweety) <- bird(tweety).", "tweety", true),
        ("l3", "fly(X) <- bird(X), not -fly(X).", r"\x.fly(x)", true),
        ("r3", "fly(X) <- bird(X), not -fly(X).", r"\x.(x@X <- bird(X), not -x@X.)", false),
    ];
    let mut group = c.benchmark_group("examples");
    for (name, h, g, left) in cases {
        let (h, g) = (p(h), p(g));
        group.bench_function(name, |b| {
            b.iter(|| {
                if left {
                    inverse_l(black_box(&h), black_box(&g)).unwrap()
                } else {
                    inverse_r(black_box(&h), black_box(&g)).unwrap()
                }
            })
        });
    }
    group.finish();
}

fn scaling(c: &mut Criterion) {
    let g = p(r"\x.fly(x)");
    let mut group = c.benchmark_group("inverse_l_by_rules");
    for n in [2, 4, 8, 16, 32] {
        let h = default_family(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| inverse_l(black_box(h), black_box(&g)).unwrap())
        });
    }
    group.finish();
}

fn reduction(c: &mut Criterion) {
    let f = p(r"\w.(w@X <- bird(X), not -w@X.)");
    let g = p(r"\x.fly(x)");
    c.bench_function("apply", |b| b.iter(|| apply(black_box(&f), black_box(&g)).unwrap()));
    let prog = program_of(&p("p <- not q. q <- not p. r <- p. r <- q.")).unwrap();
    c.bench_function("answer_sets", |b| b.iter(|| answer_sets(black_box(&prog)).unwrap()));
}

criterion_group!(benches, examples, scaling, reduction);
criterion_main!(benches);
