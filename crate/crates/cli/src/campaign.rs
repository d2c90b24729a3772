//! Batch runs over many groups and splits, with CSV and text reports.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use nearfact::{search_with, GroupSpec, SearchOptions, SearchTask, Strategy};
use serde::{Deserialize, Serialize};

use crate::catalog::{CatalogRecord, CatalogWriter};
use crate::checkpoint::Checkpoint;

pub const DEFAULT_BUDGET_SECS: u64 = 600;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    /// Orders whose abelian groups are all included.
    pub orders: Vec<u64>,
    /// Inclusive order range, added to `orders`.
    pub min_order: Option<u64>,
    pub max_order: Option<u64>,
    /// Extra groups by name, e.g. `Z9xZ2xZ8`.
    pub groups: Vec<String>,
    /// Explicit `[r, s]` splits; empty means every nontrivial split with `r <= s`.
    pub splits: Vec<[u64; 2]>,
    pub lambda: u64,
    pub strategy: Strategy,
    /// Overrides the per-task default (`lambda == 1`).
    pub assume_symmetric: Option<bool>,
    pub skip_cyclic: bool,
    /// Evaluate filters but never enumerate.
    pub filters_only: bool,
    pub time_budget_secs: u64,
    pub workers: Option<usize>,
    pub catalog: Option<PathBuf>,
    pub checkpoint_dir: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            orders: Vec::new(),
            min_order: None,
            max_order: None,
            groups: Vec::new(),
            splits: Vec::new(),
            lambda: 1,
            strategy: Strategy::OrbitReduced,
            assume_symmetric: None,
            skip_cyclic: true,
            filters_only: false,
            time_budget_secs: DEFAULT_BUDGET_SECS,
            workers: None,
            catalog: None,
            checkpoint_dir: None,
            csv: None,
        }
    }
}

impl CampaignConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn groups(&self) -> Result<Vec<GroupSpec>> {
        let mut orders: BTreeSet<u64> = self.orders.iter().copied().collect();
        match (self.min_order, self.max_order) {
            (Some(lo), Some(hi)) => orders.extend(lo.max(2)..=hi),
            (None, None) => {}
            _ => bail!("min_order and max_order must be given together"),
        }
        let mut out = Vec::new();
        for n in orders {
            out.extend(GroupSpec::all_of_order(n)?);
        }
        for name in &self.groups {
            out.push(name.parse()?);
        }
        if self.skip_cyclic {
            out.retain(|g| !g.is_cyclic());
        }
        Ok(out)
    }

    pub fn tasks(&self) -> Result<(Vec<SearchTask>, Vec<String>)> {
        let mut tasks = Vec::new();
        let mut notes = Vec::new();
        for g in self.groups()? {
            let total = self.lambda * (g.order() as u64 - 1);
            let splits: Vec<(u64, u64)> = if self.splits.is_empty() {
                (2..total)
                    .filter(|r| total.is_multiple_of(*r) && r * r <= total && total / r > 1)
                    .map(|r| (r, total / r))
                    .collect()
            } else {
                self.splits.iter().map(|&[r, s]| (r, s)).filter(|&(r, s)| r * s == total).collect()
            };
            for (r, s) in splits {
                let task = match SearchTask::new(&g, r, s, self.lambda, self.strategy) {
                    Ok(t) => t,
                    Err(_) if self.strategy == Strategy::Coset2x2 => {
                        notes.push(format!("{} ({r},{s}): coset-2x2 does not apply, using orbit-reduced", g.literal()));
                        SearchTask::new(&g, r, s, self.lambda, Strategy::OrbitReduced)?
                    }
                    Err(e) => return Err(e.into()),
                };
                tasks.push(match self.assume_symmetric {
                    Some(b) => task.with_symmetric(b),
                    None => task,
                });
            }
        }
        Ok((tasks, notes))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    RuledOut,
    /// Exhaustive search, nothing found.
    NoneFound,
    Found,
    /// Budget exhausted; a checkpoint was written if configured.
    Incomplete,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::RuledOut => "ruled-out",
            Status::NoneFound => "none-found",
            Status::Found => "found",
            Status::Incomplete => "incomplete",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignRow {
    pub group: String,
    pub canonical: String,
    pub r: u64,
    pub s: u64,
    pub lambda: u64,
    pub strategy: Strategy,
    pub status: Status,
    /// First criterion, in the fixed order, that fired.
    pub criterion: String,
    /// Every criterion that fired, `;`-separated.
    pub ruled_by: String,
    pub details: String,
    pub candidates: u64,
    pub found: usize,
    pub elapsed_ms: u64,
    pub checkpoint: String,
}

#[derive(Debug, Clone, Default)]
pub struct CampaignReport {
    pub rows: Vec<CampaignRow>,
    pub notes: Vec<String>,
    pub catalog_records: usize,
    pub wall_time: Duration,
}

impl CampaignReport {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn text_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<22} {:>4} {:>4} {:>3} {:<12} {:<20} {:>10} {:>5} {:>9}",
            "group", "r", "s", "lam", "status", "criterion", "candidates", "found", "ms"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<22} {:>4} {:>4} {:>3} {:<12} {:<20} {:>10} {:>5} {:>9}",
                r.group,
                r.r,
                r.s,
                r.lambda,
                r.status.to_string(),
                r.criterion,
                r.candidates,
                r.found,
                r.elapsed_ms
            );
        }
        let count = |s: Status| self.rows.iter().filter(|r| r.status == s).count();
        let _ = writeln!(
            out,
            "{} tasks: {} ruled out, {} searched empty, {} with finds, {} incomplete; {:.2}s",
            self.rows.len(),
            count(Status::RuledOut),
            count(Status::NoneFound),
            count(Status::Found),
            count(Status::Incomplete),
            self.wall_time.as_secs_f64()
        );
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

fn checkpoint_path(dir: &Path, task: &SearchTask) -> PathBuf {
    let name: String = task
        .label()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    dir.join(format!("{name}.json"))
}

pub fn run(cfg: &CampaignConfig) -> Result<CampaignReport> {
    let start = Instant::now();
    let (tasks, mut notes) = cfg.tasks()?;
    if let Some(dir) = &cfg.checkpoint_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let writer = cfg.catalog.as_deref().map(CatalogWriter::spawn).transpose()?;
    let opts = SearchOptions {
        workers: cfg.workers,
        time_budget: Some(Duration::from_secs(cfg.time_budget_secs)),
        ..Default::default()
    };
    let mut rows = Vec::with_capacity(tasks.len());
    for task in tasks {
        let cp_path = cfg.checkpoint_dir.as_deref().map(|d| checkpoint_path(d, &task));
        let mut run_task = task.clone();
        if let Some(p) = cp_path.as_deref().filter(|p| p.exists()) {
            let cp = Checkpoint::load(p)?;
            if cp.task == task {
                run_task = cp.resumed_task();
                notes.push(format!("{}: resumed from {}", task.label(), p.display()));
            }
        }
        let fired: Vec<_> = nearfact::evaluate_all(&task.group, task.r, task.s, task.lambda)
            .into_iter()
            .filter(|v| v.is_ruled_out())
            .collect();
        let mut row = CampaignRow {
            group: task.group.literal(),
            canonical: task.group.canonical(),
            r: task.r,
            s: task.s,
            lambda: task.lambda,
            strategy: task.strategy,
            status: Status::RuledOut,
            criterion: fired.first().map(|v| v.criterion.to_string()).unwrap_or_default(),
            ruled_by: fired.iter().map(|v| v.criterion.to_string()).collect::<Vec<_>>().join(";"),
            details: fired.first().map(|v| v.details.clone()).unwrap_or_default(),
            candidates: 0,
            found: 0,
            elapsed_ms: 0,
            checkpoint: String::new(),
        };
        if fired.is_empty() && cfg.filters_only {
            row.status = Status::Incomplete;
            row.details = "filters only".into();
            rows.push(row);
            continue;
        }
        let t = Instant::now();
        let rep = search_with(&run_task, &opts)?;
        row.elapsed_ms = t.elapsed().as_millis() as u64;
        row.candidates = rep.candidates_tested;
        row.found = rep.found.len();
        notes.extend(rep.notes.iter().map(|n| format!("{}: {n}", task.label())));
        if rep.ruled_out_by.is_none() {
            row.status = if !rep.found.is_empty() {
                Status::Found
            } else if rep.exhaustive {
                Status::NoneFound
            } else {
                Status::Incomplete
            };
            row.details = format!("{} candidates, tags {:?}", rep.candidates_tested, rep.tags);
        }
        if let Some(w) = &writer {
            for nf in &rep.found {
                w.send(CatalogRecord::new(nf, task.strategy, row.elapsed_ms))?;
            }
        }
        if let Some(p) = &cp_path {
            match rep.checkpoint {
                Some(c) if !rep.exhaustive => {
                    Checkpoint::new(&task, c).save(p)?;
                    row.checkpoint = p.display().to_string();
                }
                _ if p.exists() => std::fs::remove_file(p)?,
                _ => {}
            }
        }
        rows.push(row);
    }
    let catalog_records = writer.map(CatalogWriter::finish).transpose()?.unwrap_or(0);
    let report = CampaignReport { rows, notes, catalog_records, wall_time: start.elapsed() };
    if let Some(p) = &cfg.csv {
        report.write_csv(p)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_config_and_tasks() {
        let cfg: CampaignConfig = toml::from_str(
            r#"
            orders = [144]
            splits = [[11, 13]]
            time_budget_secs = 5
            "#,
        )
        .unwrap();
        assert!(cfg.skip_cyclic);
        let (tasks, _) = cfg.tasks().unwrap();
        assert_eq!(tasks.len(), 9);
        let rep = run(&cfg).unwrap();
        assert!(rep.rows.iter().all(|r| r.status == Status::RuledOut && r.candidates == 0));
    }

    #[test]
    fn incomplete_tasks_leave_checkpoints() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = CampaignConfig {
            groups: vec!["Z2xZ5xZ5".into()],
            time_budget_secs: 0,
            checkpoint_dir: Some(dir.path().into()),
            ..Default::default()
        };
        let rep = run(&cfg).unwrap();
        let row = rep.rows.iter().find(|r| r.status == Status::Incomplete).unwrap();
        assert!(Path::new(&row.checkpoint).exists());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<CampaignConfig>("budget = 3").is_err());
    }
}
