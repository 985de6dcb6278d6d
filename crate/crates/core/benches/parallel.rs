//! Sequential vs rayon execution of the data-parallel kernels.
//!
//! Build with `--no-default-features` to see the fallback: both variants then
//! run sequentially.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ideal_lab::ideals::Ideal;
use ideal_lab::macdonald::macdonald_lhs;
use ideal_lab::survey::{run_survey, Check, SurveyOptions};
use ideal_lab::{build_root_system, enumerate_weyl, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn survey(c: &mut Criterion) {
    let mut g = c.benchmark_group("survey");
    g.sample_size(10);
    for (name, checks) in [("F4/thm1", vec![Check::Thm1]), ("B4/thm2+free", vec![Check::Thm2, Check::Free])] {
        let (letter, rank) = if name.starts_with('F') { ('F', 4) } else { ('B', 4) };
        let rs = build_root_system(letter, rank).unwrap();
        let weyl = enumerate_weyl(&rs, None).unwrap();
        for (mode, exec) in MODES {
            let opts = SurveyOptions { checks: checks.clone(), exec, reproducible: true, ..Default::default() };
            g.bench_with_input(BenchmarkId::new(name, mode), &opts, |b, opts| {
                b.iter(|| black_box(run_survey(&rs, Some(&weyl), opts).unwrap()))
            });
        }
    }
    g.finish();
}

fn macdonald(c: &mut Criterion) {
    let mut g = c.benchmark_group("macdonald_lhs");
    g.sample_size(10);
    for (letter, rank) in [('B', 4), ('F', 4)] {
        let rs = build_root_system(letter, rank).unwrap();
        let weyl = enumerate_weyl(&rs, None).unwrap();
        let r = Ideal::theta(&rs).complement();
        for (mode, exec) in MODES {
            g.bench_function(BenchmarkId::new(format!("{letter}{rank}/theta"), mode), |b| {
                b.iter(|| black_box(macdonald_lhs(&rs, &weyl, r, exec).unwrap()))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, survey, macdonald);
criterion_main!(benches);
