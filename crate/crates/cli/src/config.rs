//! Experiment configuration: a TOML file with `[problem]`, `[sampling]`,
//! `[swarm]` and `[experiment]` tables, plus command-line overrides.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use mivor_core::problems::{DropWaveDenominator, DropWaveReading, ExternalCommand};
use mivor_core::{Benchmark, ClassRule, MivorConfig, NuggetPolicy, ParameterDomain, PoolSize, Problem, SwarmConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    /// Built-in benchmark name, or a free label for an external command.
    pub name: String,
    /// Class limit `L`: values at or above it are minor-class.
    #[serde(default)]
    pub limit: f64,
    /// Domain override; required for external commands.
    pub lower: Option<Vec<f64>>,
    pub upper: Option<Vec<f64>>,
    /// Drop-Wave denominator override.
    pub denominator: Option<DropWaveDenominator>,
    /// External black box speaking the line protocol.
    pub command: Option<ExternalCommand>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingSection {
    pub initial: usize,
    pub budget: usize,
    pub r0: f64,
    pub alpha: f64,
    /// Pool size per iteration is `pool_factor · n · m` unless `pool_size` is set.
    pub pool_factor: usize,
    pub pool_size: Option<usize>,
    pub nugget: NuggetPolicy,
}

impl Default for SamplingSection {
    fn default() -> Self {
        let d = MivorConfig::default();
        SamplingSection {
            initial: d.initial,
            budget: d.budget,
            r0: d.r0,
            alpha: d.alpha,
            pool_factor: 100,
            pool_size: None,
            nugget: d.nugget,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub replications: usize,
    pub seed: u64,
    /// Dataset sizes at which accuracy is measured; defaults to every 5
    /// samples plus the initial and final sizes.
    pub checkpoints: Option<Vec<usize>>,
    /// Reference points per input dimension.
    pub reference_density: usize,
    /// Cached reference written by `mivor reference`.
    pub reference: Option<PathBuf>,
    /// Worker threads for replications; defaults to the machine's parallelism.
    pub workers: Option<usize>,
    pub out: PathBuf,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            replications: 1,
            seed: 0,
            checkpoints: None,
            reference_density: 5000,
            reference: None,
            workers: None,
            out: PathBuf::from("mivor-out"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSection,
    #[serde(default)]
    pub sampling: SamplingSection,
    #[serde(default)]
    pub swarm: SwarmConfig,
    #[serde(default)]
    pub experiment: ExperimentSection,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub replications: Option<usize>,
    pub problem: Option<String>,
    pub limit: Option<f64>,
}

impl ExperimentConfig {
    pub fn for_problem(name: &str) -> Self {
        ExperimentConfig {
            problem: ProblemSection {
                name: name.to_string(),
                limit: 0.0,
                lower: None,
                upper: None,
                denominator: None,
                command: None,
            },
            sampling: SamplingSection::default(),
            swarm: SwarmConfig::default(),
            experiment: ExperimentSection::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).context("invalid experiment configuration")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    /// File (if any) plus overrides; a bare `--problem` is enough to start.
    pub fn resolve(path: Option<&Path>, ov: &Overrides) -> Result<Self> {
        let mut cfg = match (path, &ov.problem) {
            (Some(p), _) => Self::load(p)?,
            (None, Some(name)) => Self::for_problem(name),
            (None, None) => bail!("either --config or --problem is required"),
        };
        cfg.apply(ov);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, ov: &Overrides) {
        if let Some(s) = ov.seed {
            self.experiment.seed = s;
        }
        if let Some(o) = &ov.out {
            self.experiment.out = o.clone();
        }
        if let Some(r) = ov.replications {
            self.experiment.replications = r;
        }
        if let Some(p) = &ov.problem {
            self.problem.name = p.clone();
        }
        if let Some(l) = ov.limit {
            self.problem.limit = l;
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).context("serializing configuration")
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.experiment.replications >= 1, "replications must be at least 1");
        ensure!(self.experiment.reference_density >= 1, "reference density must be positive");
        ensure!(self.problem.limit.is_finite(), "class limit must be finite");
        if let Some(w) = self.experiment.workers {
            ensure!(w >= 1, "workers must be at least 1");
        }
        self.mivor(0).validate().context("invalid sampling settings")?;
        self.domain()?;
        for &c in &self.checkpoints() {
            ensure!(
                (self.sampling.initial..=self.sampling.budget).contains(&c),
                "checkpoint {c} outside [{}, {}]",
                self.sampling.initial,
                self.sampling.budget
            );
        }
        Ok(())
    }

    pub fn rule(&self) -> ClassRule {
        ClassRule::new(self.problem.limit)
    }

    /// Controller settings for the replication with the given seed.
    pub fn mivor(&self, seed: u64) -> MivorConfig {
        let s = &self.sampling;
        MivorConfig {
            r0: s.r0,
            alpha: s.alpha,
            budget: s.budget,
            initial: s.initial,
            pool: match s.pool_size {
                Some(n) => PoolSize::Fixed(n),
                None => PoolSize::PerSample(s.pool_factor),
            },
            swarm: self.swarm.clone(),
            nugget: s.nugget,
            seed,
        }
    }

    pub fn checkpoints(&self) -> Vec<usize> {
        let (n0, n) = (self.sampling.initial, self.sampling.budget);
        let mut c = match &self.experiment.checkpoints {
            Some(c) => c.clone(),
            None => {
                let mut c = vec![n0];
                c.extend((n0..=n).filter(|m| m % 5 == 0));
                c.push(n);
                c
            }
        };
        c.sort_unstable();
        c.dedup();
        c
    }

    fn benchmark(&self) -> Option<Benchmark> {
        let b = Benchmark::from_name(&self.problem.name)?;
        Some(match b {
            Benchmark::DropWave(mut r) => {
                if let (Some(lo), Some(hi)) = (&self.problem.lower, &self.problem.upper) {
                    if lo.len() == 2 && hi.len() == 2 {
                        r.lower = [lo[0], lo[1]];
                        r.upper = [hi[0], hi[1]];
                    }
                }
                if let Some(d) = self.problem.denominator {
                    r.denominator = d;
                }
                Benchmark::DropWave(r)
            }
            other => other,
        })
    }

    /// Drop-Wave reading in force, for output metadata.
    pub fn dropwave_reading(&self) -> Option<DropWaveReading> {
        match self.benchmark()? {
            Benchmark::DropWave(r) => Some(r),
            _ => None,
        }
    }

    pub fn domain(&self) -> Result<ParameterDomain> {
        if self.problem.command.is_some() {
            let (Some(lo), Some(hi)) = (&self.problem.lower, &self.problem.upper) else {
                bail!("external problems need `lower` and `upper`");
            };
            return Ok(ParameterDomain::new(lo.clone(), hi.clone())?);
        }
        let b = self
            .benchmark()
            .with_context(|| format!("unknown built-in problem {:?}", self.problem.name))?;
        if let (Some(lo), Some(hi)) = (&self.problem.lower, &self.problem.upper) {
            let d = ParameterDomain::new(lo.clone(), hi.clone())?;
            ensure!(d.dim() == b.domain().dim(), "domain override has the wrong dimension");
            return Ok(d);
        }
        Ok(b.domain())
    }

    /// A fresh problem instance; external commands get their own child process.
    pub fn problem(&self) -> Result<Problem> {
        let domain = self.domain()?;
        if let Some(cmd) = &self.problem.command {
            return Ok(Problem::external(self.problem.name.clone(), domain, cmd)?);
        }
        let b = self.benchmark().expect("validated built-in");
        Ok(Problem::benchmark_on(b, domain))
    }
}
