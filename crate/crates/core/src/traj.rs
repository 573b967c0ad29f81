//! Shared data model: trajectories, environment configuration, and the
//! geometric future-index sampler used by every estimator.

use serde::{Deserialize, Serialize};

use crate::rng::Stream;
use crate::{Error, Result};
use rand::Rng;

/// How observations are rendered into text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderMode {
    Fixed,
    Paraphrase,
}

/// Environment family plus its size parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EnvKind {
    Gridworld {
        grid_size: i32,
        num_boxes: usize,
        #[serde(default = "default_true")]
        allow_box_moving: bool,
        /// Named fixed layout; `None` means fully random placement.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        preset: Option<String>,
    },
    Hanoi { num_rods: usize, num_disks: usize },
}

fn default_true() -> bool {
    true
}

/// Full environment configuration carried by every trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvConfig {
    #[serde(flatten)]
    pub kind: EnvKind,
    pub gamma: f64,
    pub render_mode: RenderMode,
    pub horizon: usize,
}

impl EnvConfig {
    pub fn gridworld(grid_size: i32, num_boxes: usize) -> Self {
        EnvConfig {
            kind: EnvKind::Gridworld {
                grid_size,
                num_boxes,
                allow_box_moving: true,
                preset: None,
            },
            gamma: 0.9,
            render_mode: RenderMode::Fixed,
            horizon: 40,
        }
    }

    pub fn hanoi(num_rods: usize, num_disks: usize) -> Self {
        EnvConfig {
            kind: EnvKind::Hanoi { num_rods, num_disks },
            gamma: 0.9,
            render_mode: RenderMode::Fixed,
            horizon: 40,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_render_mode(mut self, mode: RenderMode) -> Self {
        self.render_mode = mode;
        self
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_preset(mut self, name: &str) -> Self {
        if let EnvKind::Gridworld { ref mut preset, .. } = self.kind {
            *preset = Some(name.to_string());
        }
        self
    }

    pub fn with_box_moving(mut self, allow: bool) -> Self {
        if let EnvKind::Gridworld {
            ref mut allow_box_moving,
            ..
        } = self.kind
        {
            *allow_box_moving = allow;
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::Config(format!(
                "gamma must lie in (0,1), got {}",
                self.gamma
            )));
        }
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        match self.kind {
            EnvKind::Gridworld {
                grid_size,
                num_boxes,
                ..
            } => {
                if grid_size < 2 {
                    return Err(Error::Config(format!(
                        "grid_size must be >= 2, got {grid_size}"
                    )));
                }
                let cells = (grid_size as usize) * (grid_size as usize);
                if num_boxes + 2 >= cells {
                    return Err(Error::Config(format!(
                        "num_boxes {num_boxes} leaves no room for agent and goal on a \
                         {grid_size}x{grid_size} grid"
                    )));
                }
            }
            EnvKind::Hanoi {
                num_rods,
                num_disks,
            } => {
                if num_rods < 3 {
                    return Err(Error::Config(format!(
                        "num_rods must be >= 3, got {num_rods}"
                    )));
                }
                if num_disks < 1 {
                    return Err(Error::Config("num_disks must be >= 1".into()));
                }
            }
        }
        Ok(())
    }
}

/// One observation/action step of a trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub obs: String,
    pub action: String,
    /// Canonical latent-state key; absent for externally sourced logs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latent: Option<String>,
    pub valid: bool,
    pub reward: f64,
}

/// A full episode, including the observation after the final action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub env: EnvConfig,
    pub policy: String,
    pub seed: u64,
    pub goal: String,
    pub steps: Vec<Step>,
    pub terminal_obs: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminal_latent: Option<String>,
}

impl Trajectory {
    /// Observation text at position `idx` in `0..=len`, where `len` maps to
    /// the terminal observation.
    pub fn obs_at(&self, idx: usize) -> &str {
        if idx < self.steps.len() {
            &self.steps[idx].obs
        } else {
            &self.terminal_obs
        }
    }

    /// Latent key at position `idx` in `0..=len` (terminal included).
    pub fn latent_at(&self, idx: usize) -> Option<&str> {
        if idx < self.steps.len() {
            self.steps[idx].latent.as_deref()
        } else {
            self.terminal_latent.as_deref()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.env.validate()?;
        if self.steps.is_empty() {
            return Err(Error::Validation("trajectory has no steps".into()));
        }
        if self.steps.len() > self.env.horizon {
            return Err(Error::Validation(format!(
                "trajectory length {} exceeds horizon {}",
                self.steps.len(),
                self.env.horizon
            )));
        }
        let rewarded: Vec<usize> = self
            .steps
            .iter()
            .enumerate()
            .filter(|(_, s)| s.reward > 0.0)
            .map(|(i, _)| i)
            .collect();
        if rewarded.len() > 1 {
            return Err(Error::Validation(
                "more than one step carries positive reward".into(),
            ));
        }
        if let Some(&i) = rewarded.first() {
            if i + 1 != self.steps.len() {
                return Err(Error::Validation(
                    "positive reward is not on the final step".into(),
                ));
            }
        }
        for (i, step) in self.steps.iter().enumerate() {
            if step.obs.is_empty() || step.action.is_empty() {
                return Err(Error::Validation(format!(
                    "step {i} has an empty observation or action"
                )));
            }
        }
        if self.terminal_obs.is_empty() {
            return Err(Error::Validation("terminal observation is empty".into()));
        }
        Ok(())
    }
}

/// A (state, action, future-state) tuple drawn from a trajectory corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct FutureSample {
    pub traj_index: usize,
    pub t: usize,
    pub tau: usize,
    pub s_text: String,
    pub a_text: String,
    pub s_star_text: String,
}

/// Draw the lookahead `tau >= 1` with `P(tau=k) = (1-gamma) gamma^(k-1)`,
/// clamped so `t + tau <= traj_len`. The clamp models episode ends as
/// absorbing and keeps the sample count fixed; every estimator shares it.
pub fn sample_future_index(
    traj_len: usize,
    t: usize,
    gamma: f64,
    rng: &mut Stream,
) -> Result<usize> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Config(format!(
            "gamma must lie in (0,1), got {gamma}"
        )));
    }
    if t >= traj_len {
        return Err(Error::Config(format!(
            "step index {t} out of range for trajectory of length {traj_len}"
        )));
    }
    let tau = unclamped_geometric(gamma, rng);
    Ok(tau.min(traj_len - t))
}

/// Unclamped geometric draw on {1, 2, ...} with success probability 1-gamma.
pub fn unclamped_geometric(gamma: f64, rng: &mut Stream) -> usize {
    let u: f64 = rng.gen();
    if u <= 0.0 {
        return 1;
    }
    // P(tau > k) = gamma^k, so tau = ceil(ln(1-u) / ln(gamma)).
    let k = ((1.0 - u).ln() / gamma.ln()).ceil();
    if k < 1.0 {
        1
    } else if k > 1e9 {
        1_000_000_000
    } else {
        k as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn clamp_forces_last_step_to_tau_one() {
        let mut rng = stream(1, "tau", 0);
        for _ in 0..100 {
            assert_eq!(sample_future_index(10, 9, 0.9, &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn tiny_gamma_degenerates_to_tau_one() {
        let mut rng = stream(2, "tau", 0);
        for _ in 0..1000 {
            assert_eq!(sample_future_index(50, 0, 1e-9, &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn unclamped_mean_matches_geometric_closed_form() {
        // E[tau] = 1/(1-gamma) = 10 for gamma = 0.9.
        let mut rng = stream(3, "tau", 0);
        let n = 1_000_000usize;
        let mut sum = 0u64;
        for _ in 0..n {
            sum += unclamped_geometric(0.9, &mut rng) as u64;
        }
        let mean = sum as f64 / n as f64;
        assert!(
            (mean - 10.0).abs() < 0.05,
            "empirical mean {mean} is off the 1/(1-gamma) target"
        );
    }

    #[test]
    fn clamped_tau_stays_in_bounds() {
        let mut rng = stream(4, "tau", 0);
        for t in 0..20 {
            for _ in 0..500 {
                let tau = sample_future_index(20, t, 0.95, &mut rng).unwrap();
                assert!(tau >= 1 && t + tau <= 20);
            }
        }
    }

    #[test]
    fn invalid_arguments_are_rejected() {
        let mut rng = stream(5, "tau", 0);
        assert!(sample_future_index(10, 0, 1.0, &mut rng).is_err());
        assert!(sample_future_index(10, 0, 0.0, &mut rng).is_err());
        assert!(sample_future_index(10, 10, 0.9, &mut rng).is_err());
    }

    #[test]
    fn reward_must_sit_on_final_step() {
        let cfg = EnvConfig::gridworld(4, 0);
        let step = |r: f64| Step {
            obs: "o".into(),
            action: "a".into(),
            latent: None,
            valid: true,
            reward: r,
        };
        let mut traj = Trajectory {
            env: cfg,
            policy: "p".into(),
            seed: 0,
            goal: "g".into(),
            steps: vec![step(1.0), step(0.0)],
            terminal_obs: "o".into(),
            terminal_latent: None,
        };
        assert!(traj.validate().is_err());
        traj.steps = vec![step(0.0), step(1.0)];
        assert!(traj.validate().is_ok());
    }
}
