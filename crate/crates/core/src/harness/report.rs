use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const DEFAULT_DELTA: f64 = 0.05;

/// Hoeffding radius `sqrt(ln(2/δ) / (2 · trials))`.
pub fn hoeffding_radius(trials: usize, delta: f64) -> f64 {
    if trials == 0 {
        return f64::INFINITY;
    }
    ((2.0 / delta).ln() / (2.0 * trials as f64)).sqrt()
}

/// Estimates over all trials, ignoring whether `X` was qualified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Unconditioned {
    pub count0: usize,
    pub count1: usize,
    pub advantage: f64,
    /// Trials whose `X` was unqualified.
    pub unqualified: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameReport {
    pub experiment: String,
    pub trials: usize,
    pub count0: usize,
    pub count1: usize,
    pub advantage: f64,
    pub radius: f64,
    pub delta: f64,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unconditioned: Option<Unconditioned>,
}

impl GameReport {
    pub fn new(experiment: impl Into<String>, trials: usize, count0: usize, count1: usize, delta: f64, master_seed: u64) -> Self {
        Self {
            experiment: experiment.into(),
            trials,
            count0,
            count1,
            advantage: count0.abs_diff(count1) as f64 / trials as f64,
            radius: hoeffding_radius(trials, delta),
            delta,
            master_seed,
            unconditioned: None,
        }
    }

    pub fn with_unconditioned(mut self, count0: usize, count1: usize, unqualified: usize) -> Self {
        self.unconditioned = Some(Unconditioned {
            count0,
            count1,
            advantage: count0.abs_diff(count1) as f64 / self.trials as f64,
            unqualified,
        });
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Plain-text summary table.
    pub fn table(&self) -> String {
        let mut rows = vec![
            ("experiment", self.experiment.clone()),
            ("trials", self.trials.to_string()),
            ("count0", self.count0.to_string()),
            ("count1", self.count1.to_string()),
            ("advantage", format!("{:.4}", self.advantage)),
            ("radius", format!("{:.4} (delta {})", self.radius, self.delta)),
            ("master seed", format!("{:#018x}", self.master_seed)),
        ];
        if let Some(u) = &self.unconditioned {
            rows.push(("unconditioned", format!("{} / {} -> {:.4}", u.count0, u.count1, u.advantage)));
            rows.push(("unqualified X", u.unqualified.to_string()));
        }
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            writeln!(out, "{k:<width$}  {v}").unwrap();
        }
        out
    }
}
