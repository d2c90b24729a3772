use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{evaluate_all, first_ruled_out, CriterionId, CriterionVerdict};
use crate::error::{Error, Result};
use crate::mate::{compute_mate_sparse, MateTag, NearFactorization};
use crate::subset::GroupSubset;

use super::coset::CosetEnumerator;
use super::enumerate::{CandidateStream, Reduction, SymmetricEnumerator, TranslatedEnumerator};
use super::equivalence::EquivalenceAction;
use super::task::{Cursor, SearchTask, Strategy};

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    /// Candidates per parallel batch.
    pub chunk_size: usize,
    /// Stop with a checkpoint once this much time has passed.
    pub time_budget: Option<Duration>,
    /// Stop with a checkpoint after this many candidates.
    pub max_candidates: Option<u64>,
    /// Skip the enumeration when a criterion rules the task out.
    pub apply_filters: bool,
    /// Stop after the first batch that produced a near-factorization.
    pub stop_at_first: bool,
    /// Group the finds into equivalence classes.
    pub classify: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            workers: None,
            chunk_size: 1024,
            time_budget: None,
            max_candidates: None,
            apply_filters: true,
            stop_at_first: false,
            classify: false,
        }
    }
}

/// Mate-solver outcomes over all tested candidates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagCounts {
    pub found: u64,
    pub singular: u64,
    pub non_binary: u64,
    pub wrong_weight: u64,
}

impl TagCounts {
    fn add(&mut self, tag: MateTag) {
        match tag {
            MateTag::Found => self.found += 1,
            MateTag::Singular => self.singular += 1,
            MateTag::NonBinary => self.non_binary += 1,
            MateTag::WrongWeight => self.wrong_weight += 1,
        }
    }

    fn merge(&mut self, o: &TagCounts) {
        self.found += o.found;
        self.singular += o.singular;
        self.non_binary += o.non_binary;
        self.wrong_weight += o.wrong_weight;
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub task: SearchTask,
    pub filter_verdicts: Vec<CriterionVerdict>,
    /// The criterion that made the enumeration unnecessary.
    pub ruled_out_by: Option<CriterionId>,
    pub candidates_tested: u64,
    pub tags: TagCounts,
    /// Verified near-factorizations, `|A| = task.r`.
    pub found: Vec<NearFactorization>,
    /// Number of equivalence classes among `found`, when requested.
    pub classes: Option<usize>,
    pub exhaustive: bool,
    pub wall_time: Duration,
    /// Where to resume when `exhaustive` is false and no filter applied.
    pub checkpoint: Option<Cursor>,
    pub notes: Vec<String>,
}

impl SearchReport {
    /// No near-factorization exists, by a filter or a completed enumeration.
    pub fn settled_empty(&self) -> bool {
        self.found.is_empty() && (self.ruled_out_by.is_some() || self.exhaustive)
    }
}

fn stream_for(task: &SearchTask, notes: &mut Vec<String>) -> Result<(Box<dyn CandidateStream>, bool)> {
    let k = task.enumerated_size() as usize;
    let flipped = task.r > task.s;
    if task.strategy == Strategy::Coset2x2 {
        let e = CosetEnumerator::new(&task.group, task.r, task.s)?;
        let enumerates_r = e.enumerates_r_side();
        notes.push(format!(
            "coset-2x2: {} inequivalent distributions, candidates per case {:?}",
            e.distributions().len(),
            e.case_sizes()
        ));
        return Ok((Box::new(e), !enumerates_r));
    }
    if task.assume_symmetric {
        if task.lambda > 1 {
            notes.push("symmetric candidates only with lambda > 1: may be incomplete".into());
        }
        let reduction = match task.strategy {
            Strategy::OrbitReduced => Reduction::FULL,
            _ => Reduction::NONE,
        };
        return Ok((Box::new(SymmetricEnumerator::new(&task.group, k, reduction)?), flipped));
    }
    if task.strategy == Strategy::OrbitReduced {
        notes.push("orbit reduction needs symmetric candidates; enumerating translates only".into());
    }
    Ok((Box::new(TranslatedEnumerator::new(&task.group, k)?), flipped))
}

fn evaluate(task: &SearchTask, batch: &[GroupSubset], flipped: bool) -> Result<(TagCounts, Vec<NearFactorization>)> {
    let results: Vec<Result<(MateTag, Option<NearFactorization>)>> = batch
        .par_iter()
        .map(|x| {
            let res = compute_mate_sparse(&task.group, x, task.lambda)?;
            let nf = match res.mate {
                Some(y) if flipped => Some(NearFactorization::new(&task.group, y, x.clone(), task.lambda)?),
                Some(y) => Some(NearFactorization::new(&task.group, x.clone(), y, task.lambda)?),
                None => None,
            };
            Ok((res.tag, nf))
        })
        .collect();
    let mut tags = TagCounts::default();
    let mut found = Vec::new();
    for r in results {
        let (tag, nf) = r?;
        tags.add(tag);
        found.extend(nf);
    }
    Ok((tags, found))
}

/// [`search_with`] under default options.
pub fn search(task: &SearchTask) -> Result<SearchReport> {
    search_with(task, &SearchOptions::default())
}

/// Runs the filters, then (unless ruled out) streams candidates for the
/// smaller side through the sparse mate solver.
pub fn search_with(task: &SearchTask, opts: &SearchOptions) -> Result<SearchReport> {
    task.validate()?;
    match opts.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
            pool.install(|| run(task, opts))
        }
        None => run(task, opts),
    }
}

fn run(task: &SearchTask, opts: &SearchOptions) -> Result<SearchReport> {
    let start = Instant::now();
    let filter_verdicts = evaluate_all(&task.group, task.r, task.s, task.lambda);
    let mut report = SearchReport {
        task: task.clone(),
        ruled_out_by: None,
        filter_verdicts,
        candidates_tested: 0,
        tags: TagCounts::default(),
        found: Vec::new(),
        classes: None,
        exhaustive: false,
        wall_time: Duration::ZERO,
        checkpoint: None,
        notes: Vec::new(),
    };
    if opts.apply_filters {
        if let Some(v) = first_ruled_out(&report.filter_verdicts) {
            report.ruled_out_by = Some(v.criterion);
            report.wall_time = start.elapsed();
            return Ok(report);
        }
    }

    let (mut stream, flipped) = stream_for(task, &mut report.notes)?;
    if let Some(c) = task.checkpoint {
        stream.seek_to(c);
    }
    let chunk = opts.chunk_size.max(1);
    loop {
        let before = stream.cursor();
        let limit = match opts.max_candidates {
            Some(m) => (m.saturating_sub(report.candidates_tested) as usize).min(chunk),
            None => chunk,
        };
        let out_of_time = opts.time_budget.is_some_and(|b| start.elapsed() >= b);
        let stop = limit == 0 || out_of_time || (opts.stop_at_first && !report.found.is_empty());
        let batch: Vec<GroupSubset> = if stop {
            stream.next_candidate().into_iter().collect()
        } else {
            std::iter::from_fn(|| stream.next_candidate()).take(limit).collect()
        };
        if batch.is_empty() {
            report.exhaustive = true;
            break;
        }
        if stop {
            report.checkpoint = Some(before);
            break;
        }
        let (tags, found) = evaluate(task, &batch, flipped)?;
        report.candidates_tested += batch.len() as u64;
        report.tags.merge(&tags);
        report.found.extend(found);
    }
    if opts.classify {
        let action = EquivalenceAction::new(&task.group);
        if !action.complete {
            report.notes.push("Aut(G) too large: classes use scalar automorphisms only".into());
        }
        report.classes = Some(action.deduplicate(&report.found).len());
    }
    report.wall_time = start.elapsed();
    Ok(report)
}

/// The cell-count search for `Z_t x (Z_2)^2`.
pub fn coset_structured_search(task: &SearchTask) -> Result<SearchReport> {
    if task.strategy != Strategy::Coset2x2 {
        return Err(Error::param(format!("coset_structured_search needs strategy coset-2x2, got {}", task.strategy)));
    }
    search(task)
}
