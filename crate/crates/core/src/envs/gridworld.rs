//! Box-pushing gridworld. Origin (0,0) is the bottom-left corner; the first
//! coordinate grows rightward, the second upward. The agent moves itself one
//! cell at a time or moves an adjacent box one cell; moves out of bounds or
//! into an occupied cell are invalid and change nothing.

use serde::{Deserialize, Serialize};

use super::{ActionSpec, Dir};
use crate::rng::Stream;
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridState {
    pub agent: (i32, i32),
    /// Box positions indexed by id - 1; ids are assigned at initialization
    /// in lexicographic (x, y) order and stay fixed as boxes move.
    pub boxes: Vec<(i32, i32)>,
    pub grid_size: i32,
    pub goal: (i32, i32),
}

impl GridState {
    pub fn in_bounds(&self, cell: (i32, i32)) -> bool {
        cell.0 >= 0 && cell.0 < self.grid_size && cell.1 >= 0 && cell.1 < self.grid_size
    }

    pub fn box_at(&self, cell: (i32, i32)) -> Option<usize> {
        self.boxes.iter().position(|&b| b == cell)
    }

    pub fn occupied(&self, cell: (i32, i32)) -> bool {
        self.agent == cell || self.box_at(cell).is_some()
    }

    pub fn check_invariants(&self) -> Result<()> {
        if !self.in_bounds(self.agent) {
            return Err(Error::Validation("agent out of bounds".into()));
        }
        for &b in &self.boxes {
            if !self.in_bounds(b) {
                return Err(Error::Validation("box out of bounds".into()));
            }
            if b == self.agent {
                return Err(Error::Validation("box overlaps agent".into()));
            }
        }
        let mut cells = self.boxes.clone();
        cells.sort_unstable();
        cells.dedup();
        if cells.len() != self.boxes.len() {
            return Err(Error::Validation("boxes overlap".into()));
        }
        Ok(())
    }

    /// Canonical observation text, e.g.
    /// `Agent location: (2, 3), Boxes location: (1, 1), (3, 2)`.
    pub fn render(&self) -> String {
        let agent = format!("Agent location: ({}, {})", self.agent.0, self.agent.1);
        if self.boxes.is_empty() {
            agent
        } else {
            let boxes = self
                .boxes
                .iter()
                .map(|(x, y)| format!("({x}, {y})"))
                .collect::<Vec<_>>()
                .join(", ");
            format!("{agent}, Boxes location: {boxes}")
        }
    }

    /// Parse a canonical render. The goal is not encoded in the text, so the
    /// returned state has a placeholder goal equal to the agent cell.
    pub fn parse(grid_size: i32, text: &str) -> Result<GridState> {
        let pairs = extract_pairs(text);
        let Some((&agent, boxes)) = pairs.split_first() else {
            return Err(Error::Validation(format!(
                "no coordinates in gridworld render: {text}"
            )));
        };
        let state = GridState {
            agent,
            boxes: boxes.to_vec(),
            grid_size,
            goal: agent,
        };
        state.check_invariants()?;
        Ok(state)
    }
}

/// All "(x, y)" pairs in order of appearance.
pub(super) fn extract_pairs(text: &str) -> Vec<(i32, i32)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'(' {
            if let Some(end) = text[i..].find(')') {
                let inner = &text[i + 1..i + end];
                let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
                if parts.len() == 2 {
                    if let (Ok(x), Ok(y)) = (parts[0].parse(), parts[1].parse()) {
                        out.push((x, y));
                    }
                }
                i += end + 1;
                continue;
            }
        }
        i += 1;
    }
    out
}

/// Apply a gridworld action. Box movability is enforced by the caller, which
/// owns the configuration; here every well-formed move is judged on geometry
/// alone.
pub fn grid_step(s: &GridState, a: &ActionSpec) -> (GridState, bool) {
    match *a {
        ActionSpec::MoveAgent(dir) => {
            let (dx, dy) = dir.delta();
            let target = (s.agent.0 + dx, s.agent.1 + dy);
            if !s.in_bounds(target) || s.box_at(target).is_some() {
                return (s.clone(), false);
            }
            let mut next = s.clone();
            next.agent = target;
            (next, true)
        }
        ActionSpec::MoveBox { box_id, dir } => {
            if box_id == 0 || box_id > s.boxes.len() {
                return (s.clone(), false);
            }
            let cell = s.boxes[box_id - 1];
            let adjacent = (cell.0 - s.agent.0).abs() + (cell.1 - s.agent.1).abs() == 1;
            if !adjacent {
                return (s.clone(), false);
            }
            let (dx, dy) = dir.delta();
            let target = (cell.0 + dx, cell.1 + dy);
            if !s.in_bounds(target) || s.occupied(target) {
                return (s.clone(), false);
            }
            let mut next = s.clone();
            next.boxes[box_id - 1] = target;
            (next, true)
        }
        ActionSpec::MoveTop { .. } => (s.clone(), false),
    }
}

/// Uniform random placement of agent, boxes, and goal on distinct cells.
/// Box ids follow lexicographic (x, y) order of the initial layout.
pub fn sample_random(grid_size: i32, num_boxes: usize, rng: &mut Stream) -> Result<GridState> {
    let mut cells: Vec<(i32, i32)> = (0..grid_size)
        .flat_map(|x| (0..grid_size).map(move |y| (x, y)))
        .collect();
    if cells.len() < num_boxes + 2 {
        return Err(Error::Config("no free cell left for the goal".into()));
    }
    cells.shuffle(rng);
    let agent = cells[0];
    let mut boxes: Vec<(i32, i32)> = cells[1..1 + num_boxes].to_vec();
    boxes.sort_unstable();
    let goal = cells[1 + num_boxes];
    let state = GridState {
        agent,
        boxes,
        grid_size,
        goal,
    };
    state.check_invariants()?;
    Ok(state)
}

/// A named fixed layout for the scenario analyses. The goal is always drawn
/// uniformly from unoccupied cells; the agent position is fixed or random
/// per layout.
#[derive(Clone, Debug)]
pub struct GridPreset {
    pub name: &'static str,
    pub grid_size: i32,
    /// `None` places the agent uniformly on a free cell.
    pub agent: Option<(i32, i32)>,
    pub boxes: &'static [(i32, i32)],
    /// Whether the layout is meant to be played with movable boxes.
    pub movable_boxes: bool,
}

/// Agent walled into a two-cell pocket by boxes it cannot move.
const SCENARIO1: GridPreset = GridPreset {
    name: "scenario1",
    grid_size: 5,
    agent: Some((0, 4)),
    boxes: &[(0, 2), (1, 3), (1, 4), (4, 0)],
    movable_boxes: false,
};

/// Open five-cell corridor along the left edge, boxes immovable.
const SCENARIO2: GridPreset = GridPreset {
    name: "scenario2",
    grid_size: 5,
    agent: Some((0, 4)),
    boxes: &[(1, 0), (1, 1), (1, 2), (1, 3), (1, 4)],
    movable_boxes: false,
};

/// Same pocket as scenario1, but the boxes can be pushed aside.
const SCENARIO3: GridPreset = GridPreset {
    name: "scenario3",
    grid_size: 5,
    agent: Some((0, 4)),
    boxes: &[(0, 2), (1, 3), (1, 4), (4, 0)],
    movable_boxes: true,
};

/// Small fixed obstacle course with a random agent start; immovable boxes
/// keep the latent space to the 13 agent positions.
const TABLE1: GridPreset = GridPreset {
    name: "table1",
    grid_size: 4,
    agent: None,
    boxes: &[(1, 1), (2, 2), (3, 0)],
    movable_boxes: false,
};

const PRESETS: &[&GridPreset] = &[&SCENARIO1, &SCENARIO2, &SCENARIO3, &TABLE1];

impl GridPreset {
    pub fn by_name(name: &str) -> Result<&'static GridPreset> {
        PRESETS
            .iter()
            .find(|p| p.name == name)
            .copied()
            .ok_or_else(|| {
                let known: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
                Error::Config(format!(
                    "unknown gridworld preset '{name}' (known: {})",
                    known.join(", ")
                ))
            })
    }

    pub fn names() -> Vec<&'static str> {
        PRESETS.iter().map(|p| p.name).collect()
    }

    /// Validate that an [`crate::traj::EnvConfig`] matches this layout.
    pub fn check(&self, grid_size: i32, num_boxes: usize) -> Result<()> {
        if grid_size != self.grid_size || num_boxes != self.boxes.len() {
            return Err(Error::Config(format!(
                "preset '{}' requires grid_size {} and {} boxes, config has {} and {}",
                self.name,
                self.grid_size,
                self.boxes.len(),
                grid_size,
                num_boxes
            )));
        }
        Ok(())
    }

    pub fn sample(&self, rng: &mut Stream) -> Result<GridState> {
        let mut free: Vec<(i32, i32)> = (0..self.grid_size)
            .flat_map(|x| (0..self.grid_size).map(move |y| (x, y)))
            .filter(|c| !self.boxes.contains(c))
            .collect();
        let agent = match self.agent {
            Some(cell) => cell,
            None => *free
                .as_slice()
                .choose(rng)
                .ok_or_else(|| Error::Config("preset leaves no free cell".into()))?,
        };
        free.retain(|&c| c != agent);
        if free.is_empty() {
            return Err(Error::Config("no free cell left for the goal".into()));
        }
        let goal = free[rng.gen_range(0..free.len())];
        let mut boxes = self.boxes.to_vec();
        boxes.sort_unstable();
        let state = GridState {
            agent,
            boxes,
            grid_size: self.grid_size,
            goal,
        };
        state.check_invariants()?;
        Ok(state)
    }
}
