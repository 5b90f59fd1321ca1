//! Calibration of membership-function parameters.
//!
//! Both rule bases are fixed; only the trapezoid breakpoints are tuned.
//! Each parameter family is a chain of breakpoints where every value is
//! drawn from a range that depends on the ones before it, which keeps the
//! ordering, universe and coverage constraints satisfied by construction.
//! Sentiment terms are shoulders: the next term reaches 1 before the previous
//! one starts to fall. Voting and confidence terms may instead meet at a
//! single point, where the output steps up instead of dipping.
//!
//! The search is a random sweep over a quantized grid of the unit-cube
//! encoding followed by shrinking local perturbations around the best
//! candidates. Candidates are ranked by squared error against the target
//! points; those close to the targets also pay for any drop on a coarse
//! grid, and the best few are then screened on the full grid.
//! Everything runs through [`Execution`], so the sweep is parallel when the
//! `parallel` feature is on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::consensus::{
    feedback_rules, AGREEMENT, AGREEMENT_TERMS, CONFIDENCE, CONFIDENCE_TERMS, FEEDBACK,
    FEEDBACK_TERMS,
};
use crate::decision::{
    default_rules, SENTIMENT, SENTIMENT_TERMS, TOTAL, TOTAL_TERMS, VOTING, VOTING_TERMS,
};
use crate::exec::Execution;
use crate::fuzzy::{LinguisticVariable, RuleBase, Term, TrapezoidMf};

/// `(input_1, input_2, expected output)`
pub type TargetPoint = (f64, f64, f64);

/// `(input_1, input_2, produced, target)`
pub type Fit = (f64, f64, f64, f64);

/// Collective voting/sentiment pairs of the restaurant example and the total
/// preferences they should produce.
pub const PREFERENCE_TARGETS: [TargetPoint; 4] = [
    (54.0, 0.21, 5.0),
    (62.0, 0.67, 5.99),
    (54.0, 0.41, 5.0),
    (62.0, 0.54, 5.36),
];

/// Agreement/confidence pairs and their reported feedback values.
pub const FEEDBACK_TARGETS: [TargetPoint; 5] = [
    (9.0, 9.0, 8.14),
    (10.0, 10.0, 8.14),
    (7.0, 8.0, 7.95),
    (7.0, 9.0, 7.95),
    (7.0, 4.0, 6.4),
];

#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub samples: usize,
    pub refine_rounds: usize,
    pub keep: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            samples: 60_000,
            refine_rounds: 8,
            keep: 32,
            seed: 7,
            exec: Execution::Parallel,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Calibration {
    pub rule_base: RuleBase,
    pub error: f64,
    pub fit: Vec<Fit>,
}

/// Walks a unit-cube vector, mapping each coordinate into a range that can
/// depend on earlier draws, snapped to a grid step.
struct Decoder<'a> {
    u: &'a [f64],
    next: usize,
}

impl Decoder<'_> {
    fn take(&mut self, lo: f64, hi: f64, step: f64) -> f64 {
        let u = self.u[self.next];
        self.next += 1;
        if hi <= lo {
            return lo;
        }
        let v = round(lo + u * (hi - lo), step);
        round(v.clamp(lo, hi), step)
    }
}

fn mf(p: [f64; 4]) -> Option<TrapezoidMf> {
    TrapezoidMf::new(p[0], p[1], p[2], p[3]).ok()
}

fn variable(
    name: &str,
    universe: (f64, f64),
    labels: &[&str],
    mfs: &[[f64; 4]],
) -> Option<LinguisticVariable> {
    let terms = labels
        .iter()
        .zip(mfs)
        .map(|(l, p)| Some(Term::new(*l, mf(*p)?)))
        .collect::<Option<Vec<_>>>()?;
    LinguisticVariable::new(name, universe, terms).ok()
}

fn round(x: f64, step: f64) -> f64 {
    let per_unit = (1.0 / step).round();
    (x * per_unit).round() / per_unit
}

/// Unit-cube dimension of the preference family.
pub const PREFERENCE_DIM: usize = 10;

/// Preference FIS from a unit-cube vector. Voting terms are mirrored about
/// 50, sentiment terms about 0 and output terms about 5, so neutral inputs
/// (50, 0) always infer exactly the midpoint. Adjacent voting terms cross
/// over a band of half-width `o`; a third of the cube decodes to `o = 0`,
/// where neighbours meet at a single point.
pub fn preference_from_unit(u: &[f64]) -> Option<RuleBase> {
    let mut d = Decoder { u, next: 0 };
    // voting: medium plateau ends at 50 + bm, high plateau at 50 + bh
    let o = d.take(-4.0, 8.0, 0.5).max(0.0);
    let bm = d.take(12.5 + o, 40.0, 0.5);
    let bh = d.take(bm + 2.0 * o + 1.0, 49.5 - o, 0.5);
    // sentiment, positive half
    let q0 = d.take(0.42, 0.85, 0.01);
    let q1 = d.take(q0 + 0.01, 0.9, 0.01);
    let e0 = d.take(q1, 0.9, 0.01);
    let e1 = d.take(e0 + 0.01, 0.99, 0.01);
    // output
    let spacing = d.take(1.5, 3.0, 0.05);
    let half_plateau = d.take(0.0, 1.0, 0.05);
    let half_support = d.take(half_plateau + 0.2, 2.0 * spacing, 0.05);

    let (m_in, m_out) = (50.0 + bm - o, 50.0 + bm + o);
    let (h_in, h_out) = (50.0 + bh - o, 50.0 + bh + o);
    let m = |x: f64| round(100.0 - x, 0.5);
    let voting = variable(
        VOTING,
        (0.0, 100.0),
        &VOTING_TERMS,
        &[
            [0.0, 0.0, m(h_out), m(h_in)],
            [m(h_out), m(h_in), m(m_out), m(m_in)],
            [m(m_out), m(m_in), m_in, m_out],
            [m_in, m_out, h_in, h_out],
            [h_in, h_out, 100.0, 100.0],
        ],
    )?;
    let n = |x: f64| round(-x, 0.01);
    let sentiment = variable(
        SENTIMENT,
        (-1.0, 1.0),
        &SENTIMENT_TERMS,
        &[
            [-1.0, -1.0, n(q1), n(q0)],
            [n(e1), n(e0), e0, e1],
            [q0, q1, 1.0, 1.0],
        ],
    )?;
    let output_mfs: Vec<[f64; 4]> = (-2..=2)
        .map(|k| {
            let c = 5.0 + k as f64 * spacing;
            let clip = |x: f64| round(x.clamp(0.0, 10.0), 0.05);
            match k {
                -2 => [0.0, 0.0, clip(c + half_plateau), clip(c + half_support)],
                2 => [clip(c - half_support), clip(c - half_plateau), 10.0, 10.0],
                _ => [
                    clip(c - half_support),
                    clip(c - half_plateau),
                    clip(c + half_plateau),
                    clip(c + half_support),
                ],
            }
        })
        .collect();
    let total = variable(TOTAL, (0.0, 10.0), &TOTAL_TERMS, &output_mfs)?;
    RuleBase::new(
        "preference",
        vec![voting, sentiment],
        total,
        default_rules(),
    )
    .ok()
}

/// Unit-cube dimension of the feedback family.
pub const FEEDBACK_DIM: usize = 20;

/// Feedback FIS from a unit-cube vector. The "sure" confidence term and the
/// "agree" agreement term are fully active from 8 and 9 upwards with no other
/// term alive there, which makes (9, 9) and (10, 10), and (7, 8) and (7, 9),
/// infer identical values. Neutral and sure confidence cross over a band of
/// half-width `oc` around `k`, which decodes to a single point for part of
/// the cube.
pub fn feedback_from_unit(u: &[f64]) -> Option<RuleBase> {
    let mut d = Decoder { u, next: 0 };
    // agreement: disagree (0,0,a0,a1), neutral (c0,c1,c2,c3), agree (g0,g1,10,10)
    let a1 = d.take(5.0, 9.0, 0.05);
    let a0 = d.take(1.0, a1 - 0.05, 0.05);
    let c1 = d.take(0.5, a0, 0.05);
    let c0 = d.take(0.0, c1, 0.05);
    let g0 = d.take(c1, 8.9, 0.05);
    let g1 = d.take(g0 + 0.05, 9.0, 0.05);
    let c2 = d.take(g1, 8.95, 0.05);
    let c3 = d.take(c2 + 0.05, 9.0, 0.05);
    // confidence: unsure (0,0,u0,u1), neutral (n0,n1,k-oc,k+oc), sure (k-oc,k+oc,10,10)
    let u0 = d.take(0.5, 3.5, 0.05);
    let u1 = d.take(u0 + 0.05, 3.95, 0.05);
    let n1 = d.take(0.05, 4.0, 0.05);
    let n0 = d.take(0.0, n1.min(u1 - 0.05), 0.05);
    let oc = d.take(-1.0, 1.5, 0.05).max(0.0);
    let k = d.take(4.0 + oc, 8.0 - oc, 0.05);
    // output: weak (0,0,w0,w1), moderate (m_lo,p,p,m_hi) symmetric, strong (t0,t1,10,10)
    let t0 = d.take(3.0, 8.0, 0.05);
    let t1 = d.take(t0 + 0.05, 9.95, 0.05);
    let w1 = d.take(1.0, t0, 0.05);
    let w0 = d.take(0.0, w1 - 0.05, 0.05);
    // moderate starts inside weak's falling edge and ends past t0
    let m_lo = d.take(w0, w1 - 0.05, 0.05);
    let p = d.take(0.5 * (m_lo + t0) + 0.05, 0.5 * (10.0 + m_lo), 0.05);
    let m_hi = round(2.0 * p - m_lo, 0.05);

    let agreement = variable(
        AGREEMENT,
        (0.0, 10.0),
        &AGREEMENT_TERMS,
        &[[0.0, 0.0, a0, a1], [c0, c1, c2, c3], [g0, g1, 10.0, 10.0]],
    )?;
    let (s0, s1) = (round(k - oc, 0.05), round(k + oc, 0.05));
    let confidence = variable(
        CONFIDENCE,
        (0.0, 10.0),
        &CONFIDENCE_TERMS,
        &[[0.0, 0.0, u0, u1], [n0, n1, s0, s1], [s0, s1, 10.0, 10.0]],
    )?;
    let feedback = variable(
        FEEDBACK,
        (0.0, 10.0),
        &FEEDBACK_TERMS,
        &[[0.0, 0.0, w0, w1], [m_lo, p, p, m_hi], [t0, t1, 10.0, 10.0]],
    )?;
    RuleBase::new(
        "feedback",
        vec![agreement, confidence],
        feedback,
        feedback_rules(),
    )
    .ok()
}

/// Sum of squared errors against the targets, or `None` if any point fails.
pub fn target_error(rb: &RuleBase, targets: &[TargetPoint]) -> Option<(f64, Vec<Fit>)> {
    let mut fit = Vec::with_capacity(targets.len());
    let mut err = 0.0;
    for &(x, y, want) in targets {
        let got = rb.infer_crisp(&[x, y]).ok()?;
        err += (got - want).powi(2);
        fit.push((x, y, got, want));
    }
    Some((err, fit))
}

/// Outputs on `grid_0 x grid_1`, row-major in `grid_0`.
fn grid_values(
    rb: &RuleBase,
    grid_0: &[f64],
    grid_1: &[f64],
    exec: Execution,
) -> Option<Vec<Vec<f64>>> {
    exec.map(grid_0, |&x| {
        grid_1
            .iter()
            .map(|&y| rb.infer_crisp(&[x, y]).ok())
            .collect()
    })
    .into_iter()
    .collect()
}

/// Largest decrease between neighbouring grid points along `axis` (0 or 1),
/// with where it happens: `(drop, input_1, input_2)`.
pub fn max_drop(
    rb: &RuleBase,
    axis: usize,
    grid_0: &[f64],
    grid_1: &[f64],
    exec: Execution,
) -> Option<(f64, f64, f64)> {
    let values = grid_values(rb, grid_0, grid_1, exec)?;
    Some(drop_in(&values, axis, grid_0, grid_1))
}

fn drop_in(values: &[Vec<f64>], axis: usize, grid_0: &[f64], grid_1: &[f64]) -> (f64, f64, f64) {
    let mut worst = (0.0, f64::NAN, f64::NAN);
    for i in 0..grid_0.len() {
        for j in 0..grid_1.len() {
            let prev = match axis {
                0 if i > 0 => values[i - 1][j],
                1 if j > 0 => values[i][j - 1],
                _ => continue,
            };
            if prev - values[i][j] > worst.0 {
                worst = (prev - values[i][j], grid_0[i], grid_1[j]);
            }
        }
    }
    worst
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

struct Family<'a> {
    dim: usize,
    build: fn(&[f64]) -> Option<RuleBase>,
    targets: &'a [TargetPoint],
    // extra acceptance test on the fitted values; returns a penalty
    penalty: fn(&RuleBase, &[Fit]) -> f64,
    monotone_axes: &'a [usize],
    // candidates this close to the targets pay for drops on the coarse grid
    near: f64,
    coarse: (Vec<f64>, Vec<f64>),
    full: (Vec<f64>, Vec<f64>),
    monotone_slack: f64,
}

impl Family<'_> {
    fn worst_drop(&self, rb: &RuleBase, (g0, g1): &(Vec<f64>, Vec<f64>), exec: Execution) -> f64 {
        match grid_values(rb, g0, g1, exec) {
            Some(values) => self
                .monotone_axes
                .iter()
                .map(|&axis| drop_in(&values, axis, g0, g1).0)
                .fold(0.0, f64::max),
            None => f64::INFINITY,
        }
    }
}

fn evaluate(family: &Family<'_>, u: &[f64]) -> Option<(f64, RuleBase, Vec<Fit>)> {
    let rb = (family.build)(u)?;
    let (err, fit) = target_error(&rb, family.targets)?;
    let mut score = err + (family.penalty)(&rb, &fit);
    if score < family.near {
        score += 100.0 * family.worst_drop(&rb, &family.coarse, Execution::Sequential);
    } else {
        score += 1.0;
    }
    Some((score, rb, fit))
}

fn search(family: &Family<'_>, cfg: &SearchConfig) -> Option<Calibration> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let candidates: Vec<Vec<f64>> = (0..cfg.samples)
        .map(|_| (0..family.dim).map(|_| rng.random::<f64>()).collect())
        .collect();
    let mut pool: Vec<(f64, Vec<f64>)> = cfg
        .exec
        .map(&candidates, |u| {
            evaluate(family, u).map(|(e, _, _)| (e, u.clone()))
        })
        .into_iter()
        .flatten()
        .collect();
    pool.sort_by(|a, b| a.0.total_cmp(&b.0));
    pool.truncate(cfg.keep);

    let mut scale = 0.1;
    for _ in 0..cfg.refine_rounds {
        let per_parent = (cfg.samples / cfg.keep.max(1) / 4).max(1);
        let children: Vec<Vec<f64>> = pool
            .iter()
            .flat_map(|(_, parent)| {
                (0..per_parent)
                    .map(|_| {
                        parent
                            .iter()
                            .map(|&p| (p + rng.random_range(-scale..=scale)).clamp(0.0, 1.0))
                            .collect::<Vec<f64>>()
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let scored = cfg.exec.map(&children, |u| {
            evaluate(family, u).map(|(e, _, _)| (e, u.clone()))
        });
        pool.extend(scored.into_iter().flatten());
        pool.sort_by(|a, b| a.0.total_cmp(&b.0));
        pool.dedup_by(|a, b| a.1 == b.1);
        pool.truncate(cfg.keep);
        scale *= 0.6;
    }

    pool.into_iter().find_map(|(_, u)| {
        let (_, rule_base, fit) = evaluate(family, &u)?;
        let error = fit.iter().map(|f| (f.2 - f.3).powi(2)).sum();
        let monotone =
            family.worst_drop(&rule_base, &family.full, cfg.exec) <= family.monotone_slack;
        monotone.then_some(Calibration {
            rule_base,
            error,
            fit,
        })
    })
}

fn preference_penalty(_: &RuleBase, fit: &[Fit]) -> f64 {
    // fit order: alter1, alter2, alter3, alter4
    let t: Vec<f64> = fit.iter().map(|f| f.2).collect();
    let margin = 0.05;
    let mut p = 0.0;
    if t[1] < t[3] + margin {
        p += 10.0;
    }
    if t[3] < t[0].max(t[2]) + margin {
        p += 10.0;
    }
    p
}

fn feedback_penalty(rb: &RuleBase, _: &[Fit]) -> f64 {
    match rb.infer_crisp(&[0.0, 10.0]) {
        Ok(v) if v < 4.0 => 0.0,
        _ => 10.0,
    }
}

pub fn calibrate_preference(cfg: &SearchConfig) -> Option<Calibration> {
    let family = Family {
        dim: PREFERENCE_DIM,
        build: preference_from_unit,
        targets: &PREFERENCE_TARGETS,
        penalty: preference_penalty,
        monotone_axes: &[0, 1],
        near: 0.01,
        coarse: (linspace(0.0, 100.0, 21), linspace(-1.0, 1.0, 21)),
        full: (linspace(0.0, 100.0, 101), linspace(-1.0, 1.0, 201)),
        monotone_slack: 1e-9,
    };
    search(&family, cfg)
}

pub fn calibrate_feedback(cfg: &SearchConfig) -> Option<Calibration> {
    let family = Family {
        dim: FEEDBACK_DIM,
        build: feedback_from_unit,
        targets: &FEEDBACK_TARGETS,
        penalty: feedback_penalty,
        monotone_axes: &[0],
        near: 0.01,
        coarse: (linspace(0.0, 10.0, 21), linspace(0.0, 10.0, 21)),
        full: (linspace(0.0, 10.0, 101), linspace(0.0, 10.0, 101)),
        monotone_slack: 1e-9,
    };
    search(&family, cfg)
}
