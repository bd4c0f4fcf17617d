use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fjpop::fjkkt::{classify_points, PopProblem, SystemVariant};
use fjpop::par::ExecMode;
use fjpop::poly::parse_polynomial;
use fjpop::relax::{augment_problem, build_moment_sdp};
use fjpop::sdp::{run_hierarchy, solve_moment, HierarchyOptions, SolverOptions};

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn ball() -> PopProblem {
    let names = vec!["x1".to_string(), "x2".to_string()];
    let p = |t: &str| parse_polynomial(t, &names).unwrap();
    PopProblem::new(names.clone(), p("x1"), vec![p("1 - x1^2 - x2^2")], vec![], None).unwrap()
}

fn single_solve(c: &mut Criterion) {
    let pop = augment_problem(&ball(), SystemVariant::Fj, true).unwrap();
    let sdp = build_moment_sdp(&pop, 2).unwrap();
    let mut group = c.benchmark_group("moment_solve_ball_k2");
    group.sample_size(10);
    for (name, mode) in MODES {
        let opts = SolverOptions { mode, ..SolverOptions::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| solve_moment(&sdp, opts).unwrap())
        });
    }
    group.finish();
}

fn hierarchy(c: &mut Criterion) {
    let pop = ball();
    let mut group = c.benchmark_group("hierarchy_ball_k1_to_3");
    group.sample_size(10);
    for (name, mode) in MODES {
        let opts = HierarchyOptions {
            k_max: 3,
            mode,
            solver: SolverOptions { mode, ..SolverOptions::default() },
            ..HierarchyOptions::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| run_hierarchy(&pop, opts).unwrap())
        });
    }
    group.finish();
}

fn classification(c: &mut Criterion) {
    let pop = ball();
    let points: Vec<Vec<f64>> = (0..2000)
        .map(|i| {
            let t = i as f64 * 0.0031;
            vec![t.cos(), t.sin()]
        })
        .collect();
    let mut group = c.benchmark_group("classify_2000_boundary_points");
    for (name, mode) in MODES {
        group.bench_function(name, |b| b.iter(|| classify_points(&pop, &points, 1e-7, mode)));
    }
    group.finish();
}

criterion_group!(benches, single_solve, hierarchy, classification);
criterion_main!(benches);
