//! Dense versus sparse mate computation on one input.

use std::time::{Duration, Instant};

use anyhow::Result;
use nearfact::{compute_mate_dense, compute_mate_sparse, GroupSpec, GroupSubset, MateResult};
use serde::Serialize;

pub const DEFAULT_GROUP: &str = "Z199";
pub const DEFAULT_SET: &str = "0,1,2,3,4,195,196,197,198";

#[derive(Debug, Clone, Serialize)]
pub struct BenchResult {
    pub group: String,
    pub set: String,
    pub lambda: u64,
    pub dense_ms: f64,
    pub sparse_ms: f64,
    /// `dense_ms / sparse_ms`.
    pub ratio: f64,
    pub identical: bool,
    pub tag: String,
}

fn best_of<T>(runs: usize, mut f: impl FnMut() -> Result<T>) -> Result<(Duration, T)> {
    let mut best: Option<(Duration, T)> = None;
    for _ in 0..runs.max(1) {
        let t = Instant::now();
        let v = f()?;
        let d = t.elapsed();
        if best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d, v));
        }
    }
    Ok(best.expect("at least one run"))
}

/// Times each route, keeping the fastest of `runs` attempts.
pub fn run(group: &GroupSpec, a: &GroupSubset, lambda: u64, runs: usize) -> Result<BenchResult> {
    let (dt, dense): (Duration, MateResult) = best_of(runs, || Ok(compute_mate_dense(group, a, lambda)?))?;
    let (st, sparse): (Duration, MateResult) = best_of(runs, || Ok(compute_mate_sparse(group, a, lambda)?))?;
    let ms = |d: Duration| d.as_secs_f64() * 1e3;
    Ok(BenchResult {
        group: group.literal(),
        set: a.to_string(),
        lambda,
        dense_ms: ms(dt),
        sparse_ms: ms(st),
        ratio: ms(dt) / ms(st).max(1e-9),
        identical: dense.same_outcome(&sparse),
        tag: format!("{:?}", sparse.tag),
    })
}
