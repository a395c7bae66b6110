use serde::Deserialize;

use npshare_core::harness::adversaries::{Constant, LeakReader, LengthOnly, MixtureSampler, PlantedBias};
use npshare_core::harness::{Distinguisher, Execution, Learner, DEFAULT_DELTA};
use npshare_core::prg::Expander;
use npshare_core::scheme::SchemeParams;
use npshare_core::structures::{AccessStructure, PartySet};
use npshare_core::we::Backend;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub structure: AccessStructure,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default = "default_lambda")]
    pub lambda: usize,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub expander: Expander,
    pub epsilon: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub delta: Option<f64>,
    pub execution: Option<Execution>,
    pub sampler: Option<SamplerConfig>,
    pub adversary: Option<AdversaryConfig>,
    pub target: Option<Target>,
    /// Party position the hybrid experiment's list distinguisher inspects.
    pub position: Option<usize>,
}

fn default_lambda() -> usize {
    128
}

fn default_k() -> usize {
    8
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerConfig {
    pub unqualified: Vec<usize>,
    pub qualified: Vec<usize>,
    pub p_unqualified: f64,
    #[serde(default = "default_secret_len")]
    pub secret_len: usize,
}

fn default_secret_len() -> usize {
    4
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AdversaryConfig {
    LeakReader,
    LengthOnly,
    Constant { value: bool },
    Planted { p0: f64, p1: f64 },
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    #[default]
    Identity,
    FirstBit,
}

impl Target {
    pub fn apply(self, s: &[u8]) -> Vec<u8> {
        match self {
            Target::Identity => s.to_vec(),
            Target::FirstBit => vec![s.first().map_or(0, |b| b >> 7)],
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| format!("invalid config: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        self.structure.validate().map_err(|e| format!("invalid structure: {e}"))?;
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps <= 1.0) {
                return Err(format!("epsilon {eps} outside (0, 1]"));
            }
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d < 1.0) {
                return Err(format!("delta {d} outside (0, 1)"));
            }
        }
        if let Some(s) = &self.sampler {
            if !(0.0..=1.0).contains(&s.p_unqualified) || s.secret_len == 0 {
                return Err("sampler needs p_unqualified in [0, 1] and secret_len >= 1".into());
            }
            self.parties(&s.qualified)?;
            self.parties(&s.unqualified)?;
        }
        if let Some(AdversaryConfig::Planted { p0, p1 }) = self.adversary {
            if !(0.0..=1.0).contains(&p0) || !(0.0..=1.0).contains(&p1) {
                return Err("planted probabilities must lie in [0, 1]".into());
            }
        }
        Ok(())
    }

    pub fn params(&self) -> SchemeParams {
        SchemeParams {
            seed_bits: self.k,
            expander: self.expander,
            lambda: self.lambda,
            backend: self.backend,
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta.unwrap_or(DEFAULT_DELTA)
    }

    pub fn parties(&self, members: &[usize]) -> Result<PartySet, String> {
        PartySet::new(self.structure.n(), members.iter().copied()).map_err(|e| e.to_string())
    }

    pub fn sampler(&self) -> Result<MixtureSampler, String> {
        let s = self.sampler.as_ref().ok_or("experiment needs a \"sampler\" section")?;
        Ok(MixtureSampler {
            unqualified: self.parties(&s.unqualified)?,
            qualified: self.parties(&s.qualified)?,
            p_unqualified: s.p_unqualified,
            secret_len: s.secret_len,
        })
    }

    pub fn distinguisher(&self) -> Box<dyn Distinguisher> {
        match self.adversary.clone().unwrap_or(AdversaryConfig::LeakReader) {
            AdversaryConfig::LeakReader => Box::new(LeakReader),
            AdversaryConfig::LengthOnly => Box::new(LengthOnly),
            AdversaryConfig::Constant { value } => Box::new(Constant(value)),
            AdversaryConfig::Planted { p0, p1 } => Box::new(PlantedBias { p0, p1 }),
        }
    }

    pub fn learner(&self) -> Result<Box<dyn Learner>, String> {
        match self.adversary.clone().unwrap_or(AdversaryConfig::LeakReader) {
            AdversaryConfig::LeakReader => Ok(Box::new(LeakReader)),
            AdversaryConfig::Constant { value } => Ok(Box::new(Constant(value))),
            other => Err(format!("adversary {other:?} cannot act as a learner")),
        }
    }
}
