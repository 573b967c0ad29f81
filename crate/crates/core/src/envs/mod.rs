//! The two text games: box-pushing gridworld and Tower of Hanoi.
//!
//! Environments are stateless rule objects; every function here is pure.
//! Invalid actions are modeled (they return the state unchanged with
//! `valid = false`), never raised as errors.

mod gridworld;
mod hanoi;
mod paraphrase;

pub use gridworld::{GridPreset, GridState};
pub use hanoi::HanoiState;
pub use paraphrase::{parse_paraphrase, render_paraphrase};

use serde::{Deserialize, Serialize};

use crate::rng::Stream;
use crate::traj::{EnvConfig, EnvKind};
use crate::{Error, Result};

/// Movement direction on the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    Left,
    Up,
    Right,
    Down,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::Left, Dir::Up, Dir::Right, Dir::Down];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Dir::Left => (-1, 0),
            Dir::Up => (0, 1),
            Dir::Right => (1, 0),
            Dir::Down => (0, -1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Dir::Left => "Left",
            Dir::Up => "Up",
            Dir::Right => "Right",
            Dir::Down => "Down",
        }
    }

    fn from_word(word: &str) -> Option<Dir> {
        match word.to_ascii_lowercase().as_str() {
            "left" => Some(Dir::Left),
            "up" => Some(Dir::Up),
            "right" => Some(Dir::Right),
            "down" => Some(Dir::Down),
            _ => None,
        }
    }
}

/// A parsed action in either game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActionSpec {
    MoveAgent(Dir),
    /// Box ids are 1-based, matching the observation text.
    MoveBox { box_id: usize, dir: Dir },
    /// Rod indices are 0-based; rendered as letters A, B, C, ...
    MoveTop { from: usize, to: usize },
}

/// Rod label for a 0-based rod index.
pub fn rod_label(idx: usize) -> char {
    (b'A' + idx as u8) as char
}

impl ActionSpec {
    /// Canonical action text, exactly as the game prompts specify it.
    pub fn to_text(self) -> String {
        match self {
            ActionSpec::MoveAgent(d) => format!("Move {}", d.name()),
            ActionSpec::MoveBox { box_id, dir } => {
                format!("Move the Box {} {}", box_id, dir.name())
            }
            ActionSpec::MoveTop { from, to } => format!(
                "Move the top disk from rod {} to rod {}",
                rod_label(from),
                rod_label(to)
            ),
        }
    }
}

/// Canonical structured state for either game, goal included.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LatentState {
    Grid(GridState),
    Hanoi(HanoiState),
}

impl LatentState {
    pub fn as_grid(&self) -> &GridState {
        match self {
            LatentState::Grid(s) => s,
            LatentState::Hanoi(_) => panic!("expected a gridworld state"),
        }
    }

    pub fn as_hanoi(&self) -> &HanoiState {
        match self {
            LatentState::Hanoi(s) => s,
            LatentState::Grid(_) => panic!("expected a Hanoi state"),
        }
    }

    /// True when the board matches the goal configuration.
    pub fn at_goal(&self) -> bool {
        match self {
            LatentState::Grid(s) => s.agent == s.goal,
            LatentState::Hanoi(s) => s.rods == s.goal,
        }
    }
}

/// Apply an action under the configured rules. Returns the successor state
/// and whether the move legally changed the board.
pub fn step(cfg: &EnvConfig, state: &LatentState, action: &ActionSpec) -> (LatentState, bool) {
    match (state, &cfg.kind) {
        (LatentState::Grid(s), EnvKind::Gridworld {
            allow_box_moving, ..
        }) => {
            if let ActionSpec::MoveBox { .. } = action {
                if !allow_box_moving {
                    return (state.clone(), false);
                }
            }
            let (next, valid) = gridworld::grid_step(s, action);
            (LatentState::Grid(next), valid)
        }
        (LatentState::Hanoi(s), EnvKind::Hanoi { .. }) => {
            let (next, valid) = hanoi::hanoi_step(s, action);
            (LatentState::Hanoi(next), valid)
        }
        // An action from the wrong game never changes the board.
        _ => (state.clone(), false),
    }
}

/// Sample an initial state (with goal) per the configured init modes.
pub fn sample_initial(cfg: &EnvConfig, rng: &mut Stream) -> Result<LatentState> {
    cfg.validate()?;
    match &cfg.kind {
        EnvKind::Gridworld {
            grid_size,
            num_boxes,
            preset,
            ..
        } => {
            let state = match preset.as_deref() {
                Some(name) => {
                    let preset = GridPreset::by_name(name)?;
                    preset.check(*grid_size, *num_boxes)?;
                    preset.sample(rng)?
                }
                None => gridworld::sample_random(*grid_size, *num_boxes, rng)?,
            };
            Ok(LatentState::Grid(state))
        }
        EnvKind::Hanoi {
            num_rods,
            num_disks,
        } => Ok(LatentState::Hanoi(hanoi::sample_random(
            *num_rods, *num_disks, rng,
        )?)),
    }
}

/// Deterministic canonical observation text for the board (goal excluded).
/// Injective over latent states for a fixed configuration; doubles as the
/// latent-state key.
pub fn render_fixed(state: &LatentState) -> String {
    match state {
        LatentState::Grid(s) => s.render(),
        LatentState::Hanoi(s) => s.render(),
    }
}

/// Parse a canonical fixed render back into a board. The goal is not part
/// of the canonical text, so the returned state carries an empty goal; use
/// it only for keying and analysis.
pub fn parse_fixed(cfg: &EnvConfig, text: &str) -> Result<LatentState> {
    match &cfg.kind {
        EnvKind::Gridworld { grid_size, .. } => {
            Ok(LatentState::Grid(GridState::parse(*grid_size, text)?))
        }
        EnvKind::Hanoi {
            num_rods,
            num_disks,
        } => Ok(LatentState::Hanoi(HanoiState::parse(
            *num_rods, *num_disks, text,
        )?)),
    }
}

/// Goal text shown to agents and stored in the trajectory header.
pub fn goal_text(state: &LatentState) -> String {
    match state {
        LatentState::Grid(s) => format!("({}, {})", s.goal.0, s.goal.1),
        LatentState::Hanoi(s) => hanoi::render_rods(&s.goal),
    }
}

/// The per-step observation block presented to an agent, following the
/// game prompt templates (step number and, for Hanoi, the goal).
pub fn observation_prompt(state: &LatentState, step_idx: usize) -> String {
    match state {
        LatentState::Grid(s) => format!(
            "Step {} Observation: {}",
            step_idx,
            s.render()
        ),
        LatentState::Hanoi(s) => format!(
            "Step {}:\n\nCurrent configuration: {}\n\nGoal configuration: {}",
            step_idx,
            s.render(),
            hanoi::render_rods(&s.goal)
        ),
    }
}

/// Every syntactically well-formed action for the configuration, in
/// lexicographic order of the canonical action text.
pub fn all_actions(cfg: &EnvConfig) -> Vec<ActionSpec> {
    let mut acts = Vec::new();
    match cfg.kind {
        EnvKind::Gridworld { num_boxes, .. } => {
            for d in Dir::ALL {
                acts.push(ActionSpec::MoveAgent(d));
            }
            for box_id in 1..=num_boxes {
                for d in Dir::ALL {
                    acts.push(ActionSpec::MoveBox { box_id, dir: d });
                }
            }
        }
        EnvKind::Hanoi { num_rods, .. } => {
            for from in 0..num_rods {
                for to in 0..num_rods {
                    if from != to {
                        acts.push(ActionSpec::MoveTop { from, to });
                    }
                }
            }
        }
    }
    acts.sort_by_key(|a| a.to_text());
    acts
}

/// Subset of [`all_actions`] that is valid in `state`, same ordering.
pub fn valid_actions(cfg: &EnvConfig, state: &LatentState) -> Vec<ActionSpec> {
    all_actions(cfg)
        .into_iter()
        .filter(|a| step(cfg, state, a).1)
        .collect()
}

/// Extract the last well-formed action phrase from free-form text.
/// Case-insensitive and whitespace-tolerant; model outputs put reasoning
/// before the action line, so the last match wins.
pub fn parse_action(cfg: &EnvConfig, text: &str) -> Option<ActionSpec> {
    match cfg.kind {
        EnvKind::Gridworld { num_boxes, .. } => parse_grid_action(text, num_boxes),
        EnvKind::Hanoi { num_rods, .. } => parse_hanoi_action(text, num_rods),
    }
}

fn parse_grid_action(text: &str, num_boxes: usize) -> Option<ActionSpec> {
    let tokens = tokenize_words(text);
    let mut found = None;
    for i in 0..tokens.len() {
        if !tokens[i].eq_ignore_ascii_case("move") {
            continue;
        }
        // "move [the] box <id> <dir>"
        let mut j = i + 1;
        if j < tokens.len() && tokens[j].eq_ignore_ascii_case("the") {
            j += 1;
        }
        if j + 2 < tokens.len() && tokens[j].eq_ignore_ascii_case("box") {
            if let (Ok(box_id), Some(dir)) = (
                tokens[j + 1].parse::<usize>(),
                Dir::from_word(&tokens[j + 2]),
            ) {
                if box_id >= 1 && box_id <= num_boxes {
                    found = Some(ActionSpec::MoveBox { box_id, dir });
                }
                continue;
            }
        }
        // "move <dir>"
        if i + 1 < tokens.len() {
            if let Some(dir) = Dir::from_word(&tokens[i + 1]) {
                found = Some(ActionSpec::MoveAgent(dir));
            }
        }
    }
    found
}

fn parse_hanoi_action(text: &str, num_rods: usize) -> Option<ActionSpec> {
    // "move the top disk from rod X to rod Y"
    let tokens = tokenize_words(text);
    let mut found = None;
    for i in 0..tokens.len() {
        if !tokens[i].eq_ignore_ascii_case("from") {
            continue;
        }
        let rest = &tokens[i..];
        if rest.len() >= 5
            && rest[1].eq_ignore_ascii_case("rod")
            && rest[3].eq_ignore_ascii_case("to")
            && rest[4].eq_ignore_ascii_case("rod")
            && rest.len() >= 6
        {
            if let (Some(from), Some(to)) = (rod_index(&rest[2]), rod_index(&rest[5])) {
                if from < num_rods && to < num_rods && from != to {
                    found = Some(ActionSpec::MoveTop { from, to });
                }
            }
        }
    }
    found
}

fn rod_index(word: &str) -> Option<usize> {
    let mut chars = word.chars();
    let c = chars.next()?;
    if chars.next().is_some() {
        return None;
    }
    let c = c.to_ascii_uppercase();
    if c.is_ascii_uppercase() {
        Some((c as u8 - b'A') as usize)
    } else {
        None
    }
}

fn tokenize_words(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| w.to_string())
        .collect()
}

/// Merge key for Hanoi rod-permutation symmetry: the lexicographically
/// smallest canonical render over all relabelings of the rods.
pub fn hanoi_symmetry_key(state: &HanoiState) -> String {
    hanoi::symmetry_key(state)
}

/// Companion's check that a latent key round-trips the canonicalizer.
pub fn latent_round_trips(cfg: &EnvConfig, key: &str) -> bool {
    match parse_fixed(cfg, key) {
        Ok(state) => render_fixed(&state) == key,
        Err(_) => false,
    }
}

#[allow(unused_imports)]
pub(crate) use hanoi::render_rods;

#[cfg(test)]
mod tests;
