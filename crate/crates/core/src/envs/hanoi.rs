//! Tower of Hanoi. Disk ids double as sizes (0 = smallest); every stack
//! must stay strictly decreasing from bottom to top. A move takes the top
//! disk of one rod onto another rod whose top disk is larger (or which is
//! empty); anything else is invalid and changes nothing.

use serde::{Deserialize, Serialize};

use super::{rod_label, ActionSpec};
use crate::rng::Stream;
use crate::{Error, Result};
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HanoiState {
    /// One stack per rod, bottom first.
    pub rods: Vec<Vec<u8>>,
    pub goal: Vec<Vec<u8>>,
}

impl HanoiState {
    pub fn num_disks(&self) -> usize {
        self.rods.iter().map(Vec::len).sum()
    }

    pub fn check_invariants(&self) -> Result<()> {
        let mut seen = vec![false; self.num_disks()];
        for rod in &self.rods {
            for pair in rod.windows(2) {
                if pair[0] <= pair[1] {
                    return Err(Error::Validation(
                        "larger disks must sit below smaller disks".into(),
                    ));
                }
            }
            for &disk in rod {
                let idx = disk as usize;
                if idx >= seen.len() || seen[idx] {
                    return Err(Error::Validation("disk ids must be unique".into()));
                }
                seen[idx] = true;
            }
        }
        Ok(())
    }

    /// Canonical observation text, e.g.
    /// `A: |bottom, [1, 0], top|, B: |bottom, [], top|, C: |bottom, [2], top|`.
    pub fn render(&self) -> String {
        render_rods(&self.rods)
    }

    /// Parse a canonical render back into rod stacks (placeholder goal).
    pub fn parse(num_rods: usize, num_disks: usize, text: &str) -> Result<HanoiState> {
        let mut rods: Vec<Vec<u8>> = Vec::with_capacity(num_rods);
        let mut rest = text;
        for idx in 0..num_rods {
            let marker = format!("{}: |bottom, [", rod_label(idx));
            let start = rest.find(&marker).ok_or_else(|| {
                Error::Validation(format!("rod {} missing in render: {text}", rod_label(idx)))
            })?;
            let body = &rest[start + marker.len()..];
            let end = body.find(']').ok_or_else(|| {
                Error::Validation(format!("unterminated disk list in render: {text}"))
            })?;
            let disks = body[..end]
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<u8>()
                        .map_err(|_| Error::Validation(format!("bad disk id '{s}' in {text}")))
                })
                .collect::<Result<Vec<u8>>>()?;
            rods.push(disks);
            rest = &body[end..];
        }
        let state = HanoiState {
            rods,
            goal: vec![Vec::new(); num_rods],
        };
        if state.num_disks() != num_disks {
            return Err(Error::Validation(format!(
                "render lists {} disks, expected {num_disks}",
                state.num_disks()
            )));
        }
        state.check_invariants()?;
        Ok(state)
    }
}

pub(super) fn render_rods(rods: &[Vec<u8>]) -> String {
    rods.iter()
        .enumerate()
        .map(|(i, rod)| {
            let disks = rod
                .iter()
                .map(u8::to_string)
                .collect::<Vec<_>>()
                .join(", ");
            format!("{}: |bottom, [{}], top|", rod_label(i), disks)
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Apply a Hanoi move: valid iff the source rod is non-empty and its top
/// disk is smaller than the destination's top disk (or the destination is
/// empty).
pub fn hanoi_step(s: &HanoiState, a: &ActionSpec) -> (HanoiState, bool) {
    let ActionSpec::MoveTop { from, to } = *a else {
        return (s.clone(), false);
    };
    if from == to || from >= s.rods.len() || to >= s.rods.len() {
        return (s.clone(), false);
    }
    let Some(&disk) = s.rods[from].last() else {
        return (s.clone(), false);
    };
    if let Some(&dest_top) = s.rods[to].last() {
        if disk >= dest_top {
            return (s.clone(), false);
        }
    }
    let mut next = s.clone();
    next.rods[from].pop();
    next.rods[to].push(disk);
    (next, true)
}

/// Assign each disk to a uniform random rod; the stack order on a rod is
/// forced by disk size, so this is uniform over all legal configurations
/// (3^4 = 81 for four disks on three rods). Initial and goal always differ.
pub fn sample_random(num_rods: usize, num_disks: usize, rng: &mut Stream) -> Result<HanoiState> {
    let init = random_rods(num_rods, num_disks, rng);
    let goal = loop {
        let g = random_rods(num_rods, num_disks, rng);
        if g != init {
            break g;
        }
    };
    let state = HanoiState { rods: init, goal };
    state.check_invariants()?;
    Ok(state)
}

fn random_rods(num_rods: usize, num_disks: usize, rng: &mut Stream) -> Vec<Vec<u8>> {
    let mut rods = vec![Vec::new(); num_rods];
    // Place from largest to smallest so every stack stays sorted.
    for disk in (0..num_disks as u8).rev() {
        rods[rng.gen_range(0..num_rods)].push(disk);
    }
    rods
}

/// Enumerate every legal configuration (rod assignment per disk).
pub fn enumerate_states(num_rods: usize, num_disks: usize) -> Vec<Vec<Vec<u8>>> {
    let total = num_rods.pow(num_disks as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut rods = vec![Vec::new(); num_rods];
        let mut c = code;
        // Digit k of the code picks the rod of disk k; push largest first.
        let mut assignment = vec![0usize; num_disks];
        for slot in assignment.iter_mut() {
            *slot = c % num_rods;
            c /= num_rods;
        }
        for disk in (0..num_disks as u8).rev() {
            rods[assignment[disk as usize]].push(disk);
        }
        out.push(rods);
    }
    out
}

/// Lexicographically smallest render over all rod relabelings; relabeling
/// commutes with the step rule, so this merges symmetric configurations.
pub fn symmetry_key(state: &HanoiState) -> String {
    let n = state.rods.len();
    let mut best: Option<String> = None;
    for perm in permutations(n) {
        let rods: Vec<Vec<u8>> = perm.iter().map(|&i| state.rods[i].clone()).collect();
        let key = render_rods(&rods);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    best.unwrap_or_default()
}

pub(super) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for sub in permutations(n - 1) {
        for pos in 0..=sub.len() {
            let mut perm = sub.clone();
            perm.insert(pos, n - 1);
            out.push(perm);
        }
    }
    out
}
