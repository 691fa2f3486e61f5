//! The adaptive loop: exploration/exploitation switching, evaluation, refit.

use serde::{Deserialize, Serialize};

use crate::classify::{Class, ClassRule};
use crate::dataset::Dataset;
use crate::design::{mc_pool, tplhd, MonteCarloPool, RngStream};
use crate::error::{Error, Result};
use crate::kriging::{KrigingModel, NuggetPolicy};
use crate::mipt::select_mipt;
use crate::problems::Problem;
use crate::swarm::SwarmConfig;
use crate::voronoi::{clearance, exploit, Decision};

const SWITCH_STREAM: u64 = 1;
const POOL_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Initial,
    MiptForced,
    MiptRandom,
    ExploitCandidate,
    ExploitSubstitute,
    MiptFallback,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Initial => "initial",
            StepKind::MiptForced => "mipt-forced",
            StepKind::MiptRandom => "mipt-random",
            StepKind::ExploitCandidate => "exploit-candidate",
            StepKind::ExploitSubstitute => "exploit-substitute",
            StepKind::MiptFallback => "mipt-fallback",
        }
    }

    pub fn is_exploit(self) -> bool {
        matches!(self, StepKind::ExploitCandidate | StepKind::ExploitSubstitute)
    }
}

impl std::fmt::Display for StepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of the step log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 0 for the initial design, then 1, 2, ... per adaptive step.
    pub iteration: usize,
    pub kind: StepKind,
    pub point: Vec<f64>,
    pub physical: Vec<f64>,
    pub value: f64,
    pub r_after: f64,
    /// Distance to the nearest earlier sample.
    pub clearance: f64,
    /// Spacing threshold in force on exploitation steps.
    pub spacing: Option<f64>,
    /// Nugget of the model refitted after this step.
    pub nugget: f64,
}

/// Random switching with a geometrically decaying exploration rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplorationSchedule {
    r0: f64,
    alpha: f64,
    rate: f64,
    random_steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Explore,
    Exploit,
}

impl ExplorationSchedule {
    pub fn new(r0: f64, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r0) {
            return Err(Error::contract(format!("initial exploration rate {r0} outside [0, 1]")));
        }
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(Error::contract(format!("decrease factor {alpha} must exceed 1")));
        }
        Ok(ExplorationSchedule {
            r0,
            alpha,
            rate: r0,
            random_steps: 0,
        })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn random_steps(&self) -> usize {
        self.random_steps
    }

    /// Draws `u ~ U[0,1)`; explores (and decays the rate) iff `u < r`.
    pub fn decide(&mut self, rng: &mut RngStream) -> Branch {
        let u = rng.uniform();
        if u < self.rate {
            self.random_steps += 1;
            self.rate = self.r0 / self.alpha.powi(self.random_steps as i32);
            Branch::Explore
        } else {
            Branch::Exploit
        }
    }
}

/// Monte-Carlo pool size per iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoolSize {
    /// `factor · n · m`, growing with the dataset.
    PerSample(usize),
    Fixed(usize),
}

impl PoolSize {
    pub fn size(&self, dim: usize, samples: usize) -> usize {
        match *self {
            PoolSize::PerSample(f) => (f * dim * samples).max(1),
            PoolSize::Fixed(n) => n.max(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MivorConfig {
    pub r0: f64,
    pub alpha: f64,
    /// Total sample budget `N`.
    pub budget: usize,
    /// Initial TPLHD size `N0`.
    pub initial: usize,
    pub pool: PoolSize,
    pub swarm: SwarmConfig,
    pub nugget: NuggetPolicy,
    pub seed: u64,
}

impl Default for MivorConfig {
    fn default() -> Self {
        MivorConfig {
            r0: 0.4,
            alpha: 1.1,
            budget: 35,
            initial: 5,
            pool: PoolSize::PerSample(100),
            swarm: SwarmConfig::default(),
            nugget: NuggetPolicy::default(),
            seed: 0,
        }
    }
}

impl MivorConfig {
    pub fn validate(&self) -> Result<()> {
        ExplorationSchedule::new(self.r0, self.alpha)?;
        if self.initial < 2 {
            return Err(Error::contract("initial design needs at least 2 points"));
        }
        if self.budget < self.initial {
            return Err(Error::contract(format!(
                "budget {} below initial design size {}",
                self.budget, self.initial
            )));
        }
        self.swarm.validate()
    }
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Swarm seed for the fit following adaptive iteration `iteration`.
pub fn swarm_seed(seed: u64, iteration: usize) -> u64 {
    mix(seed ^ mix(iteration as u64))
}

/// Evolving state of one adaptive run.
#[derive(Debug)]
pub struct MivorState {
    model: KrigingModel,
    schedule: ExplorationSchedule,
    switch_rng: RngStream,
    pool_rng: RngStream,
    log: Vec<StepRecord>,
    iteration: usize,
}

impl MivorState {
    /// Evaluates the initial TPLHD design and fits the first model.
    pub fn initialize(problem: &mut Problem, rule: ClassRule, cfg: &MivorConfig) -> Result<Self> {
        cfg.validate()?;
        let n = problem.dim();
        let mut data = Dataset::empty(n, rule);
        let mut log = Vec::with_capacity(cfg.budget);
        for u in tplhd(cfg.initial, n) {
            let x = problem.domain().denormalize(&u)?;
            let y = problem.evaluate(&x).map_err(|e| e.at_iteration(0))?;
            let clearance = clearance(&u, data.points());
            data.push(u.clone(), y)?;
            log.push(StepRecord {
                iteration: 0,
                kind: StepKind::Initial,
                point: u,
                physical: x,
                value: y,
                r_after: cfg.r0,
                clearance,
                spacing: None,
                nugget: f64::NAN,
            });
        }
        let model = KrigingModel::fit(data, &cfg.swarm.with_seed(swarm_seed(cfg.seed, 0)), &cfg.nugget)
            .map_err(|e| e.at_iteration(0))?;
        for rec in &mut log {
            rec.nugget = model.nugget();
        }
        Ok(MivorState {
            model,
            schedule: ExplorationSchedule::new(cfg.r0, cfg.alpha)?,
            switch_rng: RngStream::new(cfg.seed, SWITCH_STREAM),
            pool_rng: RngStream::new(cfg.seed, POOL_STREAM),
            log,
            iteration: 0,
        })
    }

    pub fn model(&self) -> &KrigingModel {
        &self.model
    }

    pub fn dataset(&self) -> &Dataset {
        self.model.data()
    }

    pub fn rate(&self) -> f64 {
        self.schedule.rate()
    }

    pub fn schedule(&self) -> &ExplorationSchedule {
        &self.schedule
    }

    pub fn log(&self) -> &[StepRecord] {
        &self.log
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Draws this iteration's pool and performs one adaptive step.
    pub fn step(&mut self, problem: &mut Problem, cfg: &MivorConfig) -> Result<StepKind> {
        let n = problem.dim();
        let size = cfg.pool.size(n, self.dataset().len());
        let mut pool_rng = self.pool_rng.clone();
        let pool = mc_pool(size, n, &mut pool_rng)?;
        let kind = self.step_with_pool(&pool, problem, cfg)?;
        self.pool_rng = pool_rng;
        Ok(kind)
    }

    /// One adaptive step against a given pool. On error the state is left untouched.
    pub fn step_with_pool(
        &mut self,
        pool: &MonteCarloPool,
        problem: &mut Problem,
        cfg: &MivorConfig,
    ) -> Result<StepKind> {
        let iteration = self.iteration + 1;
        self.try_step(pool, problem, cfg, iteration)
            .map_err(|e| e.at_iteration(iteration))
    }

    fn try_step(
        &mut self,
        pool: &MonteCarloPool,
        problem: &mut Problem,
        cfg: &MivorConfig,
        iteration: usize,
    ) -> Result<StepKind> {
        let data = self.model.data();
        let samples = data.points();
        let mut schedule = self.schedule.clone();
        let mut switch_rng = self.switch_rng.clone();

        let mut spacing = None;
        let (kind, point) = if data.count(Class::Minor) == 0 {
            (StepKind::MiptForced, select_mipt(pool, samples)?)
        } else {
            match schedule.decide(&mut switch_rng) {
                Branch::Explore => (StepKind::MiptRandom, select_mipt(pool, samples)?),
                Branch::Exploit => {
                    let outcome = exploit(&self.model, pool)?;
                    spacing = Some(outcome.spacing);
                    match outcome.decision {
                        Decision::Candidate(p) => (StepKind::ExploitCandidate, p),
                        Decision::Substitute(p) => (StepKind::ExploitSubstitute, p),
                        Decision::Fallback => (StepKind::MiptFallback, select_mipt(pool, samples)?),
                    }
                }
            }
        };

        let physical = problem.domain().denormalize(&point)?;
        let value = problem.evaluate(&physical)?;
        let gap = clearance(&point, samples);
        let mut next = data.clone();
        next.push(point.clone(), value)?;
        let model = KrigingModel::fit(
            next,
            &cfg.swarm.with_seed(swarm_seed(cfg.seed, iteration)),
            &cfg.nugget,
        )?;

        self.log.push(StepRecord {
            iteration,
            kind,
            point,
            physical,
            value,
            r_after: schedule.rate(),
            clearance: gap,
            spacing,
            nugget: model.nugget(),
        });
        self.model = model;
        self.schedule = schedule;
        self.switch_rng = switch_rng;
        self.iteration = iteration;
        Ok(kind)
    }
}

/// Runs the loop until the budget is spent.
pub fn run(problem: &mut Problem, rule: ClassRule, cfg: &MivorConfig) -> Result<MivorState> {
    run_with(problem, rule, cfg, |_| {})
}

/// Like [`run`], calling `observer` after the initial fit and after every step.
pub fn run_with<F>(
    problem: &mut Problem,
    rule: ClassRule,
    cfg: &MivorConfig,
    mut observer: F,
) -> Result<MivorState>
where
    F: FnMut(&MivorState),
{
    let mut state = MivorState::initialize(problem, rule, cfg)?;
    observer(&state);
    while state.dataset().len() < cfg.budget {
        state.step(problem, cfg)?;
        observer(&state);
    }
    Ok(state)
}
