mod common;

use fjpop::certify::{certificate_from_solution, verify_certificate};
use fjpop::fjkkt::SystemVariant;
use fjpop::par::ExecMode;
use fjpop::poly::rational_to_f64;
use fjpop::relax::{augment_problem, build_moment_sdp, build_sos_sdp};
use fjpop::sdp::{export_sdpa, parse_sdpa, run_hierarchy, solve_core, solve_moment, solve_sos, HierarchyOptions, SolverOptions};

use common::{desk_problems, problem};

#[test]
fn desk_certificates_verify() {
    let opts = SolverOptions::default();
    for desk in desk_problems() {
        let sos = build_sos_sdp(&desk.pop, desk.order).unwrap();
        let sol = solve_sos(&sos, &opts).unwrap();
        let cert = certificate_from_solution(&sos, &sol).unwrap();
        let report = verify_certificate(&cert, 1e-6).unwrap();
        assert!(report.passed, "{}: {report:?}", desk.name);
        assert!((rational_to_f64(&cert.xi) - desk.minimum).abs() < 1e-6, "{}", desk.name);
    }
}

#[test]
fn fritz_john_certificate_on_the_ball() {
    let ball = problem(&["x1", "x2"], "x1", &["1 - x1^2 - x2^2"], &[]);
    let pop = augment_problem(&ball, SystemVariant::Fj, true).unwrap();
    let sos = build_sos_sdp(&pop, 2).unwrap();
    let sol = solve_sos(&sos, &SolverOptions::default()).unwrap();
    let cert = certificate_from_solution(&sos, &sol).unwrap();
    let report = verify_certificate(&cert, 1e-6).unwrap();
    assert!(report.passed, "{report:?}");
    assert!((rational_to_f64(&cert.xi) + 1.0).abs() < 1e-5);
}

#[test]
fn sdpa_text_round_trips_and_solves() {
    let opts = SolverOptions::default();
    for desk in desk_problems() {
        let sdp = build_moment_sdp(&desk.pop, desk.order).unwrap();
        let exported = export_sdpa(&sdp);
        let text = exported.to_text();
        let parsed = parse_sdpa(&text).unwrap();
        assert_eq!(parsed.to_text(), text, "{}", desk.name);
        let direct = solve_moment(&sdp, &opts).unwrap().primal_objective;
        let via = -solve_core(&parsed.to_core(), &opts).unwrap().dual_objective + exported.objective_offset;
        assert!((direct - via).abs() < 1e-6, "{}: {direct} vs {via}", desk.name);
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let pop = problem(&["x1", "x2"], "x1*x2", &["1 - x1^2", "1 - x2^2"], &[]);
    let run = |mode| {
        let opts = HierarchyOptions {
            k_max: 3,
            mode,
            solver: SolverOptions { mode, ..SolverOptions::default() },
            ..HierarchyOptions::default()
        };
        run_hierarchy(&pop, &opts).unwrap()
    };
    let seq = run(ExecMode::Sequential);
    let par = run(ExecMode::Parallel);
    assert_eq!(seq.rows.len(), par.rows.len());
    for (a, b) in seq.rows.iter().zip(&par.rows) {
        assert_eq!(a.k, b.k);
        let (x, y) = (a.rho_k.unwrap(), b.rho_k.unwrap());
        assert!((x - y).abs() < 1e-8, "k={}: {x} vs {y}", a.k);
    }
    assert_eq!(seq.stagnation_order, par.stagnation_order);
}
