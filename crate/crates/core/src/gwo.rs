//! Grey wolf optimizer with two coefficient schedules.
//!
//! The pack's three best solutions (alpha, beta, delta) guide every other
//! wolf. Each move combines three leader-relative steps
//! `X_L - A .* |C .* X_L - X|` averaged and clamped to the search box. The
//! `Classic` schedule draws `A = 2a*r1 - a` with `a` decaying linearly from
//! 2 to 0; the `Levy` schedule replaces `A` with a signed heavy-tailed step
//! `sign * levy_draw * r1` whose scale shrinks with `a`, clamped to
//! `[-a_max, a_max]`, trading some exploitation for bursts of exploration.

use crate::error::{Error, Result};
use crate::exec;
use crate::levy::{levy_pdf, levy_sample, LevyParams};
use crate::rng::{purpose, RngStream};

/// Per-dimension search box.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidParameter(format!(
                "bounds must be non-empty and of equal length ({} vs {})",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidParameter(format!(
                    "bounds[{i}] invalid: [{lo}, {hi}]"
                )));
            }
        }
        Ok(Bounds { lower, upper })
    }

    /// Same `[lo, hi]` box in every dimension.
    pub fn symmetric(dimension: usize, lo: f64, hi: f64) -> Result<Self> {
        Bounds::new(vec![lo; dimension], vec![hi; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| v >= lo && v <= hi)
    }

    pub fn clamp_in_place(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }

    fn sample(&self, rng: &mut RngStream) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| rng.next_range(*lo, *hi))
            .collect()
    }
}

/// One search agent: position `X(t)` and its fitness.
#[derive(Debug, Clone)]
pub struct Wolf {
    pub position: Vec<f64>,
    pub fitness: f64,
}

/// The population plus the alpha/beta/delta leader hierarchy. Leaders hold
/// the best positions seen so far, so `alpha.fitness` is monotone
/// non-increasing over iterations.
#[derive(Debug, Clone)]
pub struct Pack {
    pub wolves: Vec<Wolf>,
    pub alpha: Wolf,
    pub beta: Wolf,
    pub delta: Wolf,
    pub iteration: usize,
    pub max_iterations: usize,
}

impl Pack {
    /// Canonical leader scan: each wolf displaces alpha/beta/delta if it
    /// improves on them, shifting the others down. Strict comparison keeps
    /// the first-seen minimum on ties, so the scan order (wolf index order)
    /// fully determines the outcome.
    fn absorb(&mut self, position: &[f64], fitness: f64) {
        if fitness < self.alpha.fitness {
            self.delta = self.beta.clone();
            self.beta = self.alpha.clone();
            self.alpha = Wolf { position: position.to_vec(), fitness };
        } else if fitness < self.beta.fitness {
            self.delta = self.beta.clone();
            self.beta = Wolf { position: position.to_vec(), fitness };
        } else if fitness < self.delta.fitness {
            self.delta = Wolf { position: position.to_vec(), fitness };
        }
    }

    pub fn leaders(&self) -> [&Wolf; 3] {
        [&self.alpha, &self.beta, &self.delta]
    }
}

/// Coefficient schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Classic,
    Levy,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Classic => "classic",
            Variant::Levy => "levy",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" => Ok(Variant::Classic),
            "levy" => Ok(Variant::Levy),
            other => Err(Error::InvalidParameter(format!("unknown variant '{other}'"))),
        }
    }
}

/// How the Levy schedule realizes `A` from the Lévy law. `RandomStep` draws
/// a signed heavy-tailed magnitude; `PdfOfPosition` evaluates the density at
/// the wolf's own coordinates, which collapses `A` toward zero for wolves far
/// from `mu` and freezes the pack. The latter exists for comparison only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LevyAMode {
    #[default]
    RandomStep,
    PdfOfPosition,
}

/// Control parameter `a` plus the per-dimension `A` and `C` vectors used by
/// one leader-relative step.
#[derive(Debug, Clone)]
pub struct Coefficients {
    pub a: f64,
    pub a_coeff: Vec<f64>,
    pub c_coeff: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    pub variant: Variant,
    pub pack_size: usize,
    pub max_iterations: usize,
    pub bounds: Bounds,
    pub levy: LevyParams,
    pub seed: u64,
    /// Magnitude clamp for the Levy schedule's `A` components.
    pub a_max: f64,
    /// Positions assigned to the first wolves instead of uniform samples.
    pub pinned: Vec<Vec<f64>>,
    /// Test hook: when set, every uniform draw in the coefficient schedule
    /// returns this value.
    pub uniform_override: Option<f64>,
    pub levy_a_mode: LevyAMode,
}

impl OptimizerConfig {
    pub fn new(
        variant: Variant,
        pack_size: usize,
        max_iterations: usize,
        bounds: Bounds,
        seed: u64,
    ) -> Result<Self> {
        let cfg = OptimizerConfig {
            variant,
            pack_size,
            max_iterations,
            bounds,
            levy: LevyParams { mu: 0.0, gamma: 0.5 },
            seed,
            a_max: 3.0,
            pinned: Vec::new(),
            uniform_override: None,
            levy_a_mode: LevyAMode::RandomStep,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pack_size < 4 {
            return Err(Error::InvalidParameter(format!(
                "pack_size must be at least 4 (three leaders plus a follower), got {}",
                self.pack_size
            )));
        }
        if self.max_iterations < 1 {
            return Err(Error::InvalidParameter("max_iterations must be at least 1".into()));
        }
        self.levy.validate()?;
        if !(self.a_max > 0.0) {
            return Err(Error::InvalidParameter(format!("a_max must be positive, got {}", self.a_max)));
        }
        if self.pinned.len() > self.pack_size {
            return Err(Error::InvalidParameter(format!(
                "{} pinned positions exceed pack size {}",
                self.pinned.len(),
                self.pack_size
            )));
        }
        for (i, p) in self.pinned.iter().enumerate() {
            if !self.bounds.contains(p) {
                return Err(Error::InvalidParameter(format!(
                    "pinned position {i} is outside the bounds box"
                )));
            }
        }
        Ok(())
    }
}

/// Where an evaluation sits in the run: `iteration` 0 is initialization,
/// iteration `t+1` re-evaluates the moves of loop step `t`. Objectives that
/// carry internal randomness key it off this context so parallel scheduling
/// cannot change results.
#[derive(Debug, Clone, Copy)]
pub struct EvalContext {
    pub iteration: usize,
    pub wolf: usize,
}

/// Minimization objective. Plain closures ignore the context.
pub trait Objective: Sync {
    fn evaluate(&self, x: &[f64], ctx: EvalContext) -> f64;
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn evaluate(&self, x: &[f64], _ctx: EvalContext) -> f64 {
        self(x)
    }
}

/// Result of a full optimization run. `trace[t]` is the best fitness seen up
/// to and including iteration `t`; `trace[0]` is the post-initialization
/// best, so the vector has `max_iterations + 1` entries.
#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    pub trace: Vec<f64>,
}

/// Sample the initial pack, evaluate it and set the leaders.
pub fn init_pack<O: Objective + ?Sized>(objective: &O, config: &OptimizerConfig) -> Result<Pack> {
    config.validate()?;
    let dim = config.bounds.dimension();
    let positions: Vec<Vec<f64>> = (0..config.pack_size)
        .map(|i| {
            if i < config.pinned.len() {
                config.pinned[i].clone()
            } else {
                let mut rng = RngStream::from_key(&[config.seed, purpose::PACK_INIT, i as u64]);
                config.bounds.sample(&mut rng)
            }
        })
        .collect();

    let fitnesses = exec::par_try_map(config.pack_size, |i| {
        let f = objective.evaluate(&positions[i], EvalContext { iteration: 0, wolf: i });
        if f.is_finite() {
            Ok(f)
        } else {
            Err(Error::NonFiniteObjective { iteration: 0, position: positions[i].clone() })
        }
    })?;

    let wolves: Vec<Wolf> = positions
        .into_iter()
        .zip(&fitnesses)
        .map(|(position, &fitness)| Wolf { position, fitness })
        .collect();

    let sentinel = Wolf { position: vec![f64::NAN; dim], fitness: f64::INFINITY };
    let mut pack = Pack {
        alpha: sentinel.clone(),
        beta: sentinel.clone(),
        delta: sentinel,
        wolves,
        iteration: 0,
        max_iterations: config.max_iterations,
    };
    for i in 0..pack.wolves.len() {
        let (position, fitness) = (pack.wolves[i].position.clone(), pack.wolves[i].fitness);
        pack.absorb(&position, fitness);
    }
    Ok(pack)
}

fn draw_uniform(rng: &mut RngStream, config: &OptimizerConfig) -> f64 {
    match config.uniform_override {
        Some(v) => {
            rng.next_u64(); // keep stream consumption identical to the real path
            v
        }
        None => rng.next_f64(),
    }
}

/// Coefficients for one wolf/leader pair at `iteration`. The control
/// parameter decays as `a = 2 * (1 - iteration / max_iterations)`.
pub fn coefficients(
    config: &OptimizerConfig,
    iteration: usize,
    wolf: &Wolf,
    rng: &mut RngStream,
) -> Coefficients {
    let t = iteration as f64;
    let total = config.max_iterations as f64;
    let a = (2.0 * (1.0 - t / total)).max(0.0);
    let dim = wolf.position.len();
    let mut a_coeff = Vec::with_capacity(dim);
    let mut c_coeff = Vec::with_capacity(dim);

    for j in 0..dim {
        let a_j = match (config.variant, config.levy_a_mode) {
            (Variant::Classic, _) => {
                let r1 = draw_uniform(rng, config);
                2.0 * a * r1 - a
            }
            (Variant::Levy, LevyAMode::RandomStep) => {
                let gamma_eff = config.levy.gamma * a / 2.0;
                if gamma_eff > 0.0 {
                    let scaled = LevyParams { mu: config.levy.mu, gamma: gamma_eff };
                    let step = levy_sample(&scaled, rng).expect("scaled levy params are valid");
                    let sign = if draw_uniform(rng, config) < 0.5 { -1.0 } else { 1.0 };
                    let r1 = draw_uniform(rng, config);
                    (sign * step * r1).clamp(-config.a_max, config.a_max)
                } else {
                    0.0
                }
            }
            (Variant::Levy, LevyAMode::PdfOfPosition) => {
                // Literal reading of "A = L(S) * r1": density at the wolf's
                // own coordinate. Far from mu the density underflows to zero.
                let r1 = draw_uniform(rng, config);
                let density = levy_pdf(wolf.position[j], &config.levy).unwrap_or(0.0);
                (density * r1).clamp(-config.a_max, config.a_max)
            }
        };
        let r2 = draw_uniform(rng, config);
        a_coeff.push(a_j);
        c_coeff.push(2.0 * r2);
    }
    Coefficients { a, a_coeff, c_coeff }
}

/// Leader-averaged encircling move for one wolf, clamped to the box:
/// for each leader `L`, `X_L' = X_L - A_L .* |C_L .* X_L - X|`; the result is
/// the mean of the three `X_L'`.
pub fn step_wolf(wolf: &Wolf, pack: &Pack, coeffs: &[Coefficients; 3], bounds: &Bounds) -> Vec<f64> {
    let dim = wolf.position.len();
    let leaders = pack.leaders();
    let mut next = vec![0.0; dim];
    for (leader, c) in leaders.iter().zip(coeffs) {
        for j in 0..dim {
            let dist = (c.c_coeff[j] * leader.position[j] - wolf.position[j]).abs();
            next[j] += leader.position[j] - c.a_coeff[j] * dist;
        }
    }
    for v in next.iter_mut() {
        *v /= 3.0;
    }
    bounds.clamp_in_place(&mut next);
    next
}

/// Run the full optimization loop.
pub fn optimize<O: Objective + ?Sized>(
    objective: &O,
    config: &OptimizerConfig,
) -> Result<OptimizeOutcome> {
    let mut pack = init_pack(objective, config)?;
    let mut trace = Vec::with_capacity(config.max_iterations + 1);
    trace.push(pack.alpha.fitness);

    for t in 0..config.max_iterations {
        let stepped: Vec<Vec<f64>> = exec::par_map(pack.wolves.len(), |i| {
            let wolf = &pack.wolves[i];
            let coeffs: [Coefficients; 3] = std::array::from_fn(|leader| {
                let mut rng = RngStream::from_key(&[
                    config.seed,
                    purpose::COEFFICIENTS,
                    t as u64,
                    i as u64,
                    leader as u64,
                ]);
                coefficients(config, t, wolf, &mut rng)
            });
            step_wolf(wolf, &pack, &coeffs, &config.bounds)
        });

        let fitnesses = exec::par_try_map(stepped.len(), |i| {
            let f = objective.evaluate(&stepped[i], EvalContext { iteration: t + 1, wolf: i });
            if f.is_finite() {
                Ok(f)
            } else {
                Err(Error::NonFiniteObjective { iteration: t + 1, position: stepped[i].clone() })
            }
        })?;

        for (i, (position, fitness)) in stepped.into_iter().zip(fitnesses).enumerate() {
            pack.wolves[i] = Wolf { position, fitness };
        }
        for i in 0..pack.wolves.len() {
            let (position, fitness) = (pack.wolves[i].position.clone(), pack.wolves[i].fitness);
            pack.absorb(&position, fitness);
        }
        pack.iteration = t + 1;
        trace.push(pack.alpha.fitness);
    }

    Ok(OptimizeOutcome {
        best_position: pack.alpha.position,
        best_fitness: pack.alpha.fitness,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchfns::f1;

    fn base_config(dim: usize, pack: usize, iters: usize, seed: u64) -> OptimizerConfig {
        OptimizerConfig::new(
            Variant::Classic,
            pack,
            iters,
            Bounds::symmetric(dim, -1.0, 1.0).unwrap(),
            seed,
        )
        .unwrap()
    }

    #[test]
    fn bounds_reject_inverted_and_mismatched() {
        assert!(Bounds::new(vec![0.0], vec![0.0]).is_err());
        assert!(Bounds::new(vec![1.0], vec![-1.0]).is_err());
        assert!(Bounds::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(Bounds::new(vec![], vec![]).is_err());
    }

    #[test]
    fn config_requires_minimum_pack() {
        let bounds = Bounds::symmetric(2, -1.0, 1.0).unwrap();
        assert!(OptimizerConfig::new(Variant::Classic, 3, 10, bounds, 1).is_err());
    }

    #[test]
    fn init_positions_inside_bounds() {
        let cfg = base_config(2, 4, 10, 3);
        let pack = init_pack(&(f1 as fn(&[f64]) -> f64), &cfg).unwrap();
        assert_eq!(pack.wolves.len(), 4);
        for w in &pack.wolves {
            assert!(cfg.bounds.contains(&w.position), "{:?}", w.position);
        }
        assert_eq!(pack.iteration, 0);
    }

    #[test]
    fn init_same_seed_identical() {
        let cfg = base_config(5, 8, 10, 77);
        let a = init_pack(&(f1 as fn(&[f64]) -> f64), &cfg).unwrap();
        let b = init_pack(&(f1 as fn(&[f64]) -> f64), &cfg).unwrap();
        for (x, y) in a.wolves.iter().zip(&b.wolves) {
            assert_eq!(x.position, y.position);
            assert_eq!(x.fitness.to_bits(), y.fitness.to_bits());
        }
    }

    #[test]
    fn init_pinned_position_and_direct_fitness() {
        let mut cfg = base_config(2, 4, 10, 3);
        cfg.pinned = vec![vec![0.3, -0.2]];
        let pack = init_pack(&(f1 as fn(&[f64]) -> f64), &cfg).unwrap();
        assert_eq!(pack.wolves[0].position, vec![0.3, -0.2]);
        assert!((pack.wolves[0].fitness - 0.13).abs() < 1e-15);
    }

    #[test]
    fn init_rejects_non_finite_objective() {
        let cfg = base_config(2, 4, 10, 3);
        let bad = |_x: &[f64]| f64::NAN;
        match init_pack(&bad, &cfg) {
            Err(Error::NonFiniteObjective { iteration, position }) => {
                assert_eq!(iteration, 0);
                assert_eq!(position.len(), 2);
            }
            other => panic!("expected NonFiniteObjective, got {other:?}"),
        }
    }

    #[test]
    fn leaders_are_the_three_best_after_init() {
        let mut cfg = base_config(4, 12, 30, 5);
        cfg.bounds = Bounds::symmetric(4, -10.0, 10.0).unwrap();
        let objective = f1 as fn(&[f64]) -> f64;
        let pack = init_pack(&objective, &cfg).unwrap();
        assert!(pack.alpha.fitness <= pack.beta.fitness);
        assert!(pack.beta.fitness <= pack.delta.fitness);
        let mut sorted: Vec<f64> = pack.wolves.iter().map(|w| w.fitness).collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(pack.alpha.fitness, sorted[0]);
        assert_eq!(pack.beta.fitness, sorted[1]);
        assert_eq!(pack.delta.fitness, sorted[2]);
    }

    #[test]
    fn leader_scan_keeps_hierarchy_over_updates() {
        // feed a hostile sequence through the scan; the leaders must stay
        // ordered, and delta must never exceed any non-leader fitness
        let sentinel = Wolf { position: vec![f64::NAN], fitness: f64::INFINITY };
        let mut pack = Pack {
            wolves: vec![],
            alpha: sentinel.clone(),
            beta: sentinel.clone(),
            delta: sentinel,
            iteration: 0,
            max_iterations: 1,
        };
        let sequence = [5.0, 4.0, 3.0, 2.0, 1.0, 6.0, 0.5, 3.5, 0.1, 0.1];
        for (i, &f) in sequence.iter().enumerate() {
            pack.absorb(&[i as f64], f);
            assert!(pack.alpha.fitness <= pack.beta.fitness);
            assert!(pack.beta.fitness <= pack.delta.fitness);
        }
        assert_eq!(pack.alpha.fitness, 0.1);
        assert_eq!(pack.beta.fitness, 0.1);
        assert_eq!(pack.delta.fitness, 0.5);
        // first-seen 0.1 wins alpha under the strict comparison
        assert_eq!(pack.alpha.position, vec![8.0]);
    }

    #[test]
    fn coefficients_schedule_endpoints() {
        let cfg = base_config(3, 4, 100, 1);
        let wolf = Wolf { position: vec![0.0; 3], fitness: 0.0 };
        let mut rng = RngStream::from_key(&[1]);
        let c0 = coefficients(&cfg, 0, &wolf, &mut rng);
        assert_eq!(c0.a, 2.0);
        let c_end = coefficients(&cfg, 100, &wolf, &mut rng);
        assert_eq!(c_end.a, 0.0);
        assert!(c_end.a_coeff.iter().all(|&a| a == 0.0));
        for c in c0.c_coeff.iter().chain(&c_end.c_coeff) {
            assert!((0.0..=2.0).contains(c));
        }
        assert!(c0.a_coeff.iter().all(|&a| (-2.0..=2.0).contains(&a)));
    }

    #[test]
    fn levy_coefficients_respect_magnitude_clamp() {
        let mut cfg = base_config(6, 4, 50, 9);
        cfg.variant = Variant::Levy;
        cfg.a_max = 1.5;
        let wolf = Wolf { position: vec![0.0; 6], fitness: 0.0 };
        for t in [0, 10, 25, 49] {
            let mut rng = RngStream::from_key(&[9, t as u64]);
            let c = coefficients(&cfg, t, &wolf, &mut rng);
            assert!(c.a_coeff.iter().all(|a| a.abs() <= 1.5), "{:?}", c.a_coeff);
        }
    }

    #[test]
    fn levy_pdf_mode_freezes_far_from_mu() {
        // comparison hook: density at remote positions underflows, so A ~ 0
        let mut cfg = base_config(4, 4, 50, 9);
        cfg.variant = Variant::Levy;
        cfg.levy_a_mode = LevyAMode::PdfOfPosition;
        let far = Wolf { position: vec![1e6; 4], fitness: 0.0 };
        let mut rng = RngStream::from_key(&[10]);
        let c = coefficients(&cfg, 0, &far, &mut rng);
        assert!(c.a_coeff.iter().all(|a| a.abs() < 1e-6), "{:?}", c.a_coeff);
    }

    #[test]
    fn step_matches_hand_computed_example() {
        // 1-d: leaders at 0, wolf at 2, A = 1, C = 1 -> each X' = -2
        let bounds = Bounds::symmetric(1, -10.0, 10.0).unwrap();
        let leader = Wolf { position: vec![0.0], fitness: 0.0 };
        let pack = Pack {
            wolves: vec![],
            alpha: leader.clone(),
            beta: leader.clone(),
            delta: leader,
            iteration: 0,
            max_iterations: 1,
        };
        let wolf = Wolf { position: vec![2.0], fitness: 4.0 };
        let c = Coefficients { a: 2.0, a_coeff: vec![1.0], c_coeff: vec![1.0] };
        let next = step_wolf(&wolf, &pack, &[c.clone(), c.clone(), c], &bounds);
        assert_eq!(next, vec![-2.0]);
    }

    #[test]
    fn step_with_zero_a_is_leader_mean() {
        let bounds = Bounds::symmetric(1, -10.0, 10.0).unwrap();
        let mk = |p: f64| Wolf { position: vec![p], fitness: 0.0 };
        let pack = Pack {
            wolves: vec![],
            alpha: mk(1.0),
            beta: mk(2.0),
            delta: mk(6.0),
            iteration: 0,
            max_iterations: 1,
        };
        let wolf = mk(5.0);
        let c = Coefficients { a: 0.0, a_coeff: vec![0.0], c_coeff: vec![1.3] };
        let next = step_wolf(&wolf, &pack, &[c.clone(), c.clone(), c], &bounds);
        assert!((next[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn step_result_stays_in_bounds() {
        let bounds = Bounds::symmetric(2, -0.5, 0.5).unwrap();
        let mk = |p: f64| Wolf { position: vec![p; 2], fitness: 0.0 };
        let pack = Pack {
            wolves: vec![],
            alpha: mk(0.5),
            beta: mk(-0.5),
            delta: mk(0.0),
            iteration: 0,
            max_iterations: 1,
        };
        let wolf = mk(0.4);
        let c = Coefficients { a: 2.0, a_coeff: vec![-2.0, 2.0], c_coeff: vec![2.0, 0.0] };
        let next = step_wolf(&wolf, &pack, &[c.clone(), c.clone(), c], &bounds);
        assert!(bounds.contains(&next), "{next:?}");
    }

    #[test]
    fn optimize_trace_monotone_and_shapes() {
        let mut cfg = base_config(5, 10, 40, 21);
        cfg.bounds = Bounds::symmetric(5, -100.0, 100.0).unwrap();
        let out = optimize(&(f1 as fn(&[f64]) -> f64), &cfg).unwrap();
        assert_eq!(out.trace.len(), 41);
        for w in out.trace.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert_eq!(out.best_fitness, *out.trace.last().unwrap());
    }

    #[test]
    fn optimize_bit_identical_across_runs() {
        let mut cfg = base_config(8, 12, 60, 4242);
        cfg.bounds = Bounds::symmetric(8, -30.0, 30.0).unwrap();
        let a = optimize(&(f1 as fn(&[f64]) -> f64), &cfg).unwrap();
        let b = optimize(&(f1 as fn(&[f64]) -> f64), &cfg).unwrap();
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a.trace), bits(&b.trace));
        assert_eq!(bits(&a.best_position), bits(&b.best_position));
    }

    #[test]
    fn optimize_degenerate_narrow_box() {
        let bounds = Bounds::new(vec![5.0], vec![5.0 + 1e-9]).unwrap();
        let cfg = OptimizerConfig::new(Variant::Classic, 4, 5, bounds.clone(), 8).unwrap();
        let out = optimize(&(f1 as fn(&[f64]) -> f64), &cfg).unwrap();
        assert!(bounds.contains(&out.best_position));
    }

    #[test]
    fn classic_converges_on_small_sphere() {
        // d=2, T=200, n=20: every seed ends below 1e-3
        for seed in 0..10u64 {
            let cfg = OptimizerConfig::new(
                Variant::Classic,
                20,
                200,
                Bounds::symmetric(2, -100.0, 100.0).unwrap(),
                seed,
            )
            .unwrap();
            let out = optimize(&(f1 as fn(&[f64]) -> f64), &cfg).unwrap();
            assert!(out.best_fitness < 1e-3, "seed {seed}: {}", out.best_fitness);
        }
    }

    #[test]
    fn forced_half_uniform_draws_are_reproducible() {
        // with r1 = r2 = 0.5: classic A = 0, C = 1, so the trajectory is a
        // pure contraction onto the leader mean
        let mut cfg = base_config(3, 5, 12, 3);
        cfg.uniform_override = Some(0.5);
        let a = optimize(&(f1 as fn(&[f64]) -> f64), &cfg).unwrap();
        let b = optimize(&(f1 as fn(&[f64]) -> f64), &cfg).unwrap();
        assert_eq!(a.best_position, b.best_position);
        assert_eq!(
            a.trace.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            b.trace.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn levy_schedule_has_heavier_tails_than_classic() {
        // sample kurtosis of |A| at t=0 with gamma = 1; the clamp is lifted
        // to 10 so the tail shape is visible rather than piling up at a_max
        let n = 100_000;
        let dim = 1;
        let wolf = Wolf { position: vec![0.0; dim], fitness: 0.0 };

        let mut classic_cfg = base_config(dim, 4, 100, 5150);
        classic_cfg.variant = Variant::Classic;
        let mut levy_cfg = classic_cfg.clone();
        levy_cfg.variant = Variant::Levy;
        levy_cfg.levy = LevyParams { mu: 0.0, gamma: 1.0 };
        levy_cfg.a_max = 10.0;

        let kurtosis = |cfg: &OptimizerConfig, salt: u64| -> f64 {
            let mut draws = Vec::with_capacity(n);
            for k in 0..n {
                let mut rng = RngStream::from_key(&[salt, k as u64]);
                let c = coefficients(cfg, 0, &wolf, &mut rng);
                draws.push(c.a_coeff[0].abs());
            }
            let m = draws.iter().sum::<f64>() / n as f64;
            let var = draws.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n as f64;
            let m4 = draws.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n as f64;
            m4 / (var * var)
        };

        let k_classic = kurtosis(&classic_cfg, 1);
        let k_levy = kurtosis(&levy_cfg, 2);
        assert!(
            k_levy > k_classic,
            "levy kurtosis {k_levy} should exceed classic {k_classic}"
        );
    }
}
