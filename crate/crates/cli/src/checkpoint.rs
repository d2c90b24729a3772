//! Resumable search state, written atomically.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use nearfact::search::Cursor;
use nearfact::SearchTask;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub task: SearchTask,
    pub profile_index: usize,
    pub involution_rank: u64,
    pub pair_rank: u64,
}

impl Checkpoint {
    pub fn new(task: &SearchTask, cursor: Cursor) -> Self {
        let mut task = task.clone();
        task.checkpoint = None;
        Checkpoint {
            task,
            profile_index: cursor.profile_index,
            involution_rank: cursor.involution_rank,
            pair_rank: cursor.pair_rank,
        }
    }

    pub fn cursor(&self) -> Cursor {
        Cursor {
            profile_index: self.profile_index,
            involution_rank: self.involution_rank,
            pair_rank: self.pair_rank,
        }
    }

    /// The stored task, set to resume at the stored position.
    pub fn resumed_task(&self) -> SearchTask {
        self.task.clone().with_checkpoint(Some(self.cursor()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing checkpoint {}", path.display()))
    }

    /// Writes to a sibling temporary file, then renames it over `path`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = std::path::PathBuf::from(tmp);
        fs::write(&tmp, serde_json::to_vec_pretty(self)?).with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, path).with_context(|| format!("renaming onto {}", path.display()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nearfact::{GroupSpec, Strategy};

    #[test]
    fn save_load() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("cp.json");
        let g: GroupSpec = "Z2xZ5xZ5".parse().unwrap();
        let t = SearchTask::new(&g, 7, 7, 1, Strategy::OrbitReduced).unwrap();
        let c = Checkpoint::new(&t, Cursor { profile_index: 1, involution_rank: 2, pair_rank: 30 });
        c.save(&p).unwrap();
        let back = Checkpoint::load(&p).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.resumed_task().checkpoint.unwrap().pair_rank, 30);
        let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
        for k in ["task", "profile_index", "involution_rank", "pair_rank"] {
            assert!(v.get(k).is_some());
        }
        assert!(!dir.path().join("cp.json.tmp").exists());
    }
}
