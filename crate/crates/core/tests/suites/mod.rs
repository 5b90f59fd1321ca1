//! Property suites shared by the core tests and the acceptance run. Each
//! suite runs a fixed number of cases from a deterministic seed and returns
//! the first failure as text.

use chrono::{TimeZone, Utc};
use gdm_core::consensus::compute_iqr;
use gdm_core::fuzzy::TrapezoidMf;
use gdm_core::pipeline::Engine;
use gdm_core::preference::{raw_preference, Assessment};
use gdm_core::session::{Participant, Phase, Session, SessionConfig};
use gdm_core::Execution;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRng, TestRunner};

use crate::common::{self, alternatives, features, FEATURES};

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng)
}

fn sorted4() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-100.0..100.0f64).prop_map(|mut p| {
        p.sort_by(f64::total_cmp);
        p
    })
}

fn mf_with_degenerate_edges() -> impl Strategy<Value = [f64; 4]> {
    (sorted4(), 0u8..4).prop_map(|(mut p, collapse)| {
        match collapse {
            1 => p[1] = p[0],
            2 => p[3] = p[2],
            3 => p[2] = p[1],
            _ => {}
        }
        p
    })
}

pub fn trapezoid(cases: u32) -> Result<(), String> {
    let strategy = (mf_with_degenerate_edges(), 0.0..1.0f64, 0.001..50.0f64);
    runner(cases)
        .run(&strategy, |(p, t, outside)| {
            let [a, b, c, d] = p;
            let mf = TrapezoidMf::new(a, b, c, d).unwrap();

            prop_assert_eq!(mf.membership(a - outside), 0.0);
            prop_assert_eq!(mf.membership(d + outside), 0.0);
            for x in [a, b, c, d, a + t * (d - a)] {
                let m = mf.membership(x);
                prop_assert!((0.0..=1.0).contains(&m), "{m}");
            }
            prop_assert_eq!(mf.membership(b + t * (c - b)), 1.0);

            // linear on each edge: the midpoint value is the mean of the endpoints
            if b - a > 1e-6 {
                let (x0, x1) = (a + 0.5 * t * (b - a), a + t * (b - a));
                let mid = mf.membership(0.5 * (x0 + x1));
                prop_assert!((mid - 0.5 * (mf.membership(x0) + mf.membership(x1))).abs() < 1e-9);
                prop_assert!((mf.membership(a + t * (b - a)) - t).abs() < 1e-9);
            }
            if d - c > 1e-6 {
                prop_assert!((mf.membership(c + t * (d - c)) - (1.0 - t)).abs() < 1e-9);
            }

            // continuous at every breakpoint that is not a vertical edge
            let eps = 1e-9;
            if b > a {
                prop_assert!(mf.membership(a + eps) < 1e-6);
                prop_assert!((mf.membership(b - eps) - 1.0).abs() < 1e-6);
            }
            if d > c {
                prop_assert!((mf.membership(c + eps) - 1.0).abs() < 1e-6);
                prop_assert!(mf.membership(d - eps) < 1e-6);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn binary(n: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..=1, n)
}

fn ternary(n: usize) -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(-1i8..=1, n)
}

pub fn bilinearity(cases: u32) -> Result<(), String> {
    let strategy =
        (1usize..12).prop_flat_map(|n| (binary(n), binary(n), ternary(n), ternary(n), binary(n)));
    runner(cases)
        .run(&strategy, |(f, g, z, w, mask)| {
            // F = F1 + F2 and Z = Z1 + Z2 with disjoint supports keep every
            // vector inside its domain
            let f1: Vec<u8> = f.iter().zip(&mask).map(|(&x, &m)| x * m).collect();
            let f2: Vec<u8> = f.iter().zip(&mask).map(|(&x, &m)| x * (1 - m)).collect();
            let z1: Vec<i8> = z.iter().zip(&mask).map(|(&x, &m)| x * m as i8).collect();
            let z2: Vec<i8> = z
                .iter()
                .zip(&mask)
                .map(|(&x, &m)| x * (1 - m) as i8)
                .collect();

            let r = |f: &[u8], z: &[i8]| raw_preference(f, z).unwrap();
            prop_assert_eq!(r(&f, &z), r(&f1, &z) + r(&f2, &z));
            prop_assert_eq!(r(&f, &z), r(&f, &z1) + r(&f, &z2));
            prop_assert_eq!(
                r(&f, &z),
                r(&f1, &z1) + r(&f1, &z2) + r(&f2, &z1) + r(&f2, &z2)
            );

            // additivity in Z for general integer vectors
            let sum: Vec<i8> = z.iter().zip(&w).map(|(a, b)| a + b).collect();
            prop_assert_eq!(r(&f, &sum), r(&f, &z) + r(&f, &w));
            let by_hand: i32 = z
                .iter()
                .enumerate()
                .map(|(k, &zk)| (i32::from(f[k]) + i32::from(g[k])) * i32::from(zk))
                .sum();
            prop_assert_eq!(r(&g, &z) + r(&f, &z), by_hand);

            let zeros = vec![0u8; f.len()];
            prop_assert_eq!(r(&zeros, &z), 0);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn iqr_equivariance(cases: u32) -> Result<(), String> {
    let strategy = (
        prop::collection::vec(0.0..10.0f64, 2..40),
        -100.0..100.0f64,
        0.01..100.0f64,
    );
    runner(cases)
        .run(&strategy, |(scores, shift, k)| {
            let base = compute_iqr(&scores).unwrap();
            let shifted: Vec<f64> = scores.iter().map(|s| s + shift).collect();
            let scaled: Vec<f64> = scores.iter().map(|s| s * k).collect();
            let t = compute_iqr(&shifted).unwrap();
            let s = compute_iqr(&scaled).unwrap();
            let tol = 1e-9 * (1.0 + shift.abs() + k * 10.0);
            prop_assert!(base.iqr >= 0.0 && base.q1 <= base.q3);
            prop_assert!((t.iqr - base.iqr).abs() < tol, "{} vs {}", t.iqr, base.iqr);
            prop_assert!(
                (s.iqr - k * base.iqr).abs() < tol,
                "{} vs {}",
                s.iqr,
                k * base.iqr
            );
            prop_assert!((t.q1 - (base.q1 + shift)).abs() < tol);
            prop_assert!((s.q3 - k * base.q3).abs() < tol);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

#[derive(Debug, Clone)]
enum Op {
    Join(usize),
    Assess(usize, Vec<i8>),
    Say(usize, usize, usize),
    Advance,
    Reopen,
    Jump(usize),
    Rank,
    Feedback(usize, f64, f64),
    Consensus,
}

const CROWD: [&str; 5] = ["partp1", "partp2", "partp3", "partp4", ""];
const LINES: [&str; 4] = [
    "Great food, I love it!",
    "The food is awful.",
    "",
    "It is far away.",
];

fn op() -> impl Strategy<Value = Op> {
    let who = 0..CROWD.len();
    prop_oneof![
        4 => who.clone().prop_map(Op::Join),
        6 => (who.clone(), prop::collection::vec(-1i8..=1, 5)).prop_map(|(p, v)| Op::Assess(p, v)),
        1 => (who.clone(), prop::collection::vec(-2i8..=2, 4..=6)).prop_map(|(p, v)| Op::Assess(p, v)),
        3 => (who.clone(), 0..5usize, 0..LINES.len()).prop_map(|(p, a, t)| Op::Say(p, a, t)),
        2 => Just(Op::Advance),
        1 => Just(Op::Reopen),
        1 => (0..Phase::ALL.len()).prop_map(Op::Jump),
        2 => Just(Op::Rank),
        3 => (who, -1.0..11.0f64, 0.0..10.0f64).prop_map(|(p, a, c)| Op::Feedback(p, a, c)),
        1 => Just(Op::Consensus),
    ]
}

fn apply(session: &mut Session, op: &Op, engine: &Engine) -> bool {
    let alt = |i: usize| common::ALTERNATIVES.get(i).copied().unwrap_or("alter9");
    let result = match op {
        Op::Join(p) => session.add_participant(Participant::new(CROWD[*p])),
        Op::Assess(p, values) => session.submit_assessment(Assessment {
            participant: CROWD[*p].to_string(),
            values: FEATURES
                .iter()
                .zip(values)
                .map(|(f, &v)| (f.to_string(), v))
                .collect(),
        }),
        Op::Say(p, a, t) => session.post_message(
            CROWD[*p],
            alt(*a),
            LINES[*t],
            Utc.with_ymd_and_hms(2025, 3, 14, 19, 0, 0).unwrap(),
        ),
        Op::Advance => match session.phase.next() {
            Some(next) => session.transition(next, engine),
            None => return false,
        },
        Op::Reopen => session.transition(Phase::Discussion, engine),
        Op::Jump(i) => session.transition(Phase::ALL[*i], engine),
        Op::Rank => session.compute_ranking(engine).map(|_| ()),
        Op::Feedback(p, a, c) => session
            .submit_feedback(CROWD[*p], *a, *c, engine)
            .map(|_| ()),
        Op::Consensus => session.consensus_report(engine).map(|_| ()),
    };
    result.is_ok()
}

pub fn phase_machine(cases: u32) -> Result<(), String> {
    let engine = Engine::shipped().with_execution(Execution::Sequential);
    let strategy = prop::collection::vec(op(), 1..80);
    runner(cases)
        .run(&strategy, |ops| {
            let config = SessionConfig {
                features: features(),
                alternatives: alternatives(),
                participants: vec![],
                affect: None,
                consensus_thresholds: None,
            };
            let mut session = Session::new("fuzz", config, Default::default()).unwrap();
            for op in &ops {
                let before = session.clone();
                if apply(&mut session, op, &engine) {
                    prop_assert!(
                        session.validate().is_ok(),
                        "{op:?}: {:?}",
                        session.validate()
                    );
                } else {
                    prop_assert_eq!(&session, &before, "rejected {:?} changed the session", op);
                }
                if session.phase == Phase::Closed {
                    prop_assert!(session.consensus.is_some());
                }
                if matches!(session.phase, Phase::Feedback | Phase::Closed) {
                    prop_assert!(session.ranking.is_some());
                }
            }
            let again = Session::from_json(&session.to_json()).unwrap();
            prop_assert_eq!(again, session);
            Ok(())
        })
        .map_err(|e| e.to_string())
}
