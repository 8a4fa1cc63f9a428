use criterion::{criterion_group, criterion_main, Criterion};
use cyclodiff::groebner::{eliminate_with, probe_g0_zero, Aggregate, ElimMethod, ElimOptions};
use cyclodiff::polysys::gen_ghat_system;
use cyclodiff::Limits;

fn groebner(c: &mut Criterion) {
    let mut g = c.benchmark_group("m6");
    g.sample_size(10);
    for theta in [0, 1] {
        let sys = gen_ghat_system(6, theta).unwrap();
        for (name, method) in [("block", ElimMethod::Block), ("minpoly", ElimMethod::Minpoly)] {
            let opts = ElimOptions {
                method,
                ..ElimOptions::default()
            };
            g.bench_function(format!("{name}_theta{theta}"), |b| {
                b.iter(|| eliminate_with(&sys, Aggregate::MeanGhat, &opts).unwrap().squarefree)
            });
        }
        g.bench_function(format!("probe_zero_theta{theta}"), |b| {
            b.iter(|| probe_g0_zero(&sys, &Limits::default()).unwrap().0)
        });
    }
    g.finish();
}

criterion_group!(benches, groebner);
criterion_main!(benches);
