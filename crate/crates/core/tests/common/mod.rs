#![allow(dead_code)]

use fjpop::fjkkt::PopProblem;
use fjpop::poly::{parse_polynomial, Polynomial};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

pub fn poly(text: &str, vars: &[&str]) -> Polynomial {
    parse_polynomial(text, &names(vars)).unwrap()
}

pub fn problem(vars: &[&str], f: &str, g: &[&str], h: &[&str]) -> PopProblem {
    let p = |t: &&str| poly(t, vars);
    PopProblem::new(names(vars), p(&f), g.iter().map(p).collect(), h.iter().map(p).collect(), None).unwrap()
}

/// A small problem with known minimum.
pub struct Desk {
    pub name: &'static str,
    pub pop: PopProblem,
    pub minimum: f64,
    /// Order at which the plain relaxation is exact.
    pub order: u32,
}

pub fn desk_problems() -> Vec<Desk> {
    vec![
        Desk { name: "interval", pop: problem(&["x"], "x^2 - x", &["1 - x^2"], &[]), minimum: -0.25, order: 1 },
        Desk { name: "linear", pop: problem(&["x"], "1 + x", &["1 - x^2"], &[]), minimum: 0.0, order: 1 },
        Desk { name: "ball", pop: problem(&["x1", "x2"], "x1", &["1 - x1^2 - x2^2"], &[]), minimum: -1.0, order: 1 },
        Desk {
            name: "box",
            pop: problem(&["x1", "x2"], "x1*x2", &["1 - x1^2", "1 - x2^2"], &[]),
            minimum: -1.0,
            order: 2,
        },
        Desk {
            name: "circle",
            pop: problem(&["x1", "x2"], "x1 + x2", &[], &["x1^2 + x2^2 - 1"]),
            minimum: -std::f64::consts::SQRT_2,
            order: 1,
        },
    ]
}

/// `count` feasible points of `pop`, by rejection from `[-1.5, 1.5]^n` with
/// equalities handled for the unit circle.
pub fn feasible_points(pop: &PopProblem, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = pop.nvars();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u: Vec<f64> = if pop.h.is_empty() {
            (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect()
        } else {
            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            vec![t.cos(), t.sin()]
        };
        if pop.is_feasible(&u, 1e-12).unwrap() {
            out.push(u);
        }
    }
    out
}
