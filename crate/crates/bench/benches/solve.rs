use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use extroot::isolate::isolate_integer_poly;
use extroot::sqrtsum::compare;
use extroot::{solve, IntPolyUni, Mode, SolveOptions, SqrtSumInstance, SystemSpec};

const SYSTEMS: &[(&str, &str, &[&str])] = &[
    ("sqrt6", "Y - X1*X2", &["X1^2 - 2", "X2^2 - 3"]),
    ("double_fiber", "(Y - X1)^2*(Y + 1)", &["X1^2 - 2"]),
    ("multiple_grid", "(Y - X2*X3)^2*(Y - 1)", &["(X1 - 1)^2", "X2^2 - 2", "X3^2 + 1"]),
    ("vanishing_lc", "(X1 - X2)*Y^2 + Y + 1", &["X1^2 - 2", "X2^2 - 2"]),
];

fn bench_solve(c: &mut Criterion) {
    for (name, f, axes) in SYSTEMS {
        let spec = SystemSpec::parse(f, axes).unwrap();
        for (tag, mode) in [("adaptive", Mode::Adaptive), ("max", Mode::MaxPrecision)] {
            let opts = SolveOptions {
                mode,
                threads: Some(1),
                ..Default::default()
            };
            c.bench_function(&format!("solve/{name}/{tag}"), |b| b.iter(|| solve(black_box(&spec), &opts).unwrap()));
        }
    }
}

fn bench_isolate(c: &mut Criterion) {
    let w = (1..=16).fold(IntPolyUni::from_i64(&[1], "X"), |acc, i| acc.mul(&IntPolyUni::from_i64(&[-i, 1], "X")));
    c.bench_function("isolate/wilkinson16", |b| b.iter(|| isolate_integer_poly(black_box(&w)).unwrap()));
}

fn bench_sqrtsum(c: &mut Criterion) {
    let cases = [
        ("less", SqrtSumInstance::from_u64(&[2, 3], &[1, 5])),
        ("equal", SqrtSumInstance::from_u64(&[8, 18], &[50])),
        ("n6", SqrtSumInstance::from_u64(&[10, 17, 99, 1000, 4321, 60000], &[11, 16, 101, 999, 4322, 59999])),
    ];
    for (name, inst) in &cases {
        c.bench_function(&format!("sqrtsum/{name}"), |b| b.iter(|| compare(black_box(inst)).unwrap()));
    }
}

criterion_group!(benches, bench_solve, bench_isolate, bench_sqrtsum);
criterion_main!(benches);
