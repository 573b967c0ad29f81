//! JSONL persistence for trajectory corpora: one JSON object per line,
//! UTF-8, blank lines tolerated, unknown fields ignored on read.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::traj::Trajectory;
use crate::{Error, Result};

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write one trajectory per line. An empty list produces an empty file.
pub fn write_trajectories(path: &Path, trajs: &[Trajectory]) -> Result<()> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    for traj in trajs {
        serde_json::to_writer(&mut out, traj)
            .map_err(|e| io_err(path, std::io::Error::other(e)))?;
        out.write_all(b"\n").map_err(|e| io_err(path, e))?;
    }
    out.flush().map_err(|e| io_err(path, e))
}

/// Inverse of [`write_trajectories`]. Every parsed trajectory is validated;
/// errors name the offending 1-based line.
pub fn read_trajectories(path: &Path) -> Result<Vec<Trajectory>> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut trajs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let traj: Trajectory = serde_json::from_str(&line).map_err(|e| Error::Jsonl {
            line: idx + 1,
            msg: e.to_string(),
        })?;
        traj.validate().map_err(|e| Error::Jsonl {
            line: idx + 1,
            msg: e.to_string(),
        })?;
        trajs.push(traj);
    }
    Ok(trajs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traj::{EnvConfig, Step, Trajectory};
    use std::io::Write as _;

    fn sample_traj(seed: u64) -> Trajectory {
        Trajectory {
            env: EnvConfig::hanoi(3, 2),
            policy: "random_all".into(),
            seed,
            goal: "A: |bottom, [], top|, B: |bottom, [1, 0], top|, C: |bottom, [], top|".into(),
            steps: vec![
                Step {
                    obs: "A: |bottom, [1, 0], top|, B: |bottom, [], top|, C: |bottom, [], top|"
                        .into(),
                    action: "Move the top disk from rod A to rod B".into(),
                    latent: Some("A:[1,0] B:[] C:[]".into()),
                    valid: true,
                    reward: 0.0,
                },
                Step {
                    obs: "A: |bottom, [1], top|, B: |bottom, [0], top|, C: |bottom, [], top|"
                        .into(),
                    action: "Move the top disk from rod C to rod A".into(),
                    latent: Some("A:[1] B:[0] C:[]".into()),
                    valid: false,
                    reward: 0.0,
                },
            ],
            terminal_obs: "A: |bottom, [1], top|, B: |bottom, [0], top|, C: |bottom, [], top|"
                .into(),
            terminal_latent: Some("A:[1] B:[0] C:[]".into()),
        }
    }

    #[test]
    fn empty_list_round_trips_through_an_empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.jsonl");
        write_trajectories(&path, &[]).unwrap();
        assert_eq!(std::fs::read(&path).unwrap().len(), 0);
        assert!(read_trajectories(&path).unwrap().is_empty());
    }

    #[test]
    fn write_then_read_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.jsonl");
        let trajs = vec![sample_traj(1), sample_traj(2), sample_traj(3)];
        write_trajectories(&path, &trajs).unwrap();
        assert_eq!(read_trajectories(&path).unwrap(), trajs);
    }

    #[test]
    fn serialize_parse_serialize_is_a_fixpoint() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.jsonl");
        let b = dir.path().join("b.jsonl");
        let trajs: Vec<Trajectory> = (0..50).map(sample_traj).collect();
        write_trajectories(&a, &trajs).unwrap();
        write_trajectories(&b, &read_trajectories(&a).unwrap()).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }

    #[test]
    fn missing_field_names_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");
        let good = serde_json::to_string(&sample_traj(0)).unwrap();
        let bad = good.replace("\"action\":", "\"not_action\":");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "{good}").unwrap();
        writeln!(f, "{bad}").unwrap();
        let err = read_trajectories(&path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("line 2:"), "unexpected error: {msg}");
        assert!(msg.contains("action"), "unexpected error: {msg}");
    }

    #[test]
    fn trailing_blank_lines_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("blank.jsonl");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "{}", serde_json::to_string(&sample_traj(0)).unwrap()).unwrap();
        writeln!(f).unwrap();
        writeln!(f).unwrap();
        drop(f);
        assert_eq!(read_trajectories(&path).unwrap().len(), 1);
    }

    #[test]
    fn unknown_fields_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("extra.jsonl");
        let mut json: serde_json::Value =
            serde_json::to_value(sample_traj(0)).unwrap();
        json["someday"] = serde_json::json!("maybe");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "{json}").unwrap();
        drop(f);
        assert_eq!(read_trajectories(&path).unwrap().len(), 1);
    }
}
