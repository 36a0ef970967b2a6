use criterion::{black_box, criterion_group, criterion_main, Criterion};

use voganlab::kl::{KlEngine, Permutation};
use voganlab::report::{analyze, AnalysisOptions};
use voganlab::verify::verify_variety;
use voganlab::{build_variety, Family, GradedDims, OrbitTable};

fn orbits(c: &mut Criterion) {
    let dims = GradedDims::single(0.into(), &[1, 2, 2, 1]).unwrap();
    c.bench_function("orbit_table (1,2,2,1)", |b| {
        b.iter(|| OrbitTable::new(build_variety(black_box(&dims), Family::Gl).unwrap()).unwrap())
    });
}

fn kl(c: &mut Criterion) {
    c.bench_function("kl column w0 in S_6, cold", |b| {
        b.iter(|| {
            let engine = KlEngine::new();
            engine.kl_poly(&Permutation::identity(6), black_box(&Permutation::longest(6))).unwrap()
        })
    });
}

fn pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("analyze");
    g.sample_size(10);
    for n in [2, 3] {
        let dims = GradedDims::two_eigenvalue(n).unwrap();
        g.bench_function(format!("two-eig {n}"), |b| {
            b.iter(|| analyze(&dims, Family::Gl, AnalysisOptions::default(), &KlEngine::new()).unwrap())
        });
    }
    let st = GradedDims::steinberg(5).unwrap();
    g.bench_function("steinberg 5", |b| {
        b.iter(|| analyze(&st, Family::Gl, AnalysisOptions::default(), &KlEngine::new()).unwrap())
    });
    let dims = GradedDims::single(0.into(), &[1, 2, 2, 1]).unwrap();
    g.bench_function("verify (1,2,2,1)", |b| b.iter(|| verify_variety(&dims, &KlEngine::new(), 0).unwrap()));
    g.finish();
}

criterion_group!(benches, orbits, kl, pipeline);
criterion_main!(benches);
