//! Cell-count analysis for `G = Z_t x (Z_2)^2`, `t` odd.
//!
//! `G` splits into four cells `G_c = Z_t x {c}`, `c` in `(Z_2)^2`. Writing
//! `a_c = |A ∩ G_c|` and `b_c = |B ∩ G_c|`, counting the sums landing in
//! each cell gives four bilinear equations, plus the two size equations.
//! Their solutions bound how a symmetric near-factorization can be spread
//! over the cells; each cell holds exactly one involution.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::Combinations;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::subset::GroupSubset;

use super::enumerate::{CandidateStream, OddUnits};
use super::task::Cursor;

/// Cells in the order `(0,0), (0,1), (1,0), (1,1)`; cell `c` sums with
/// cell `d` into cell `c ^ d`.
pub const CELLS: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

/// Which side's set holds the involution of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellInvolution {
    A,
    B,
    Neither,
    /// Both counts odd: the involution would have to lie in both sets.
    Conflict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CosetDistribution {
    /// `a[c] = |A ∩ G_c|`, with `|A| = r = 1 mod 4`.
    pub a: [u64; 4],
    /// `b[c] = |B ∩ G_c|`, with `|B| = s = 3 mod 4`.
    pub b: [u64; 4],
}

impl CosetDistribution {
    pub fn involution(&self, c: usize) -> CellInvolution {
        match (self.a[c] % 2, self.b[c] % 2) {
            (1, 1) => CellInvolution::Conflict,
            (1, 0) => CellInvolution::A,
            (0, 1) => CellInvolution::B,
            _ => CellInvolution::Neither,
        }
    }

    /// The cell whose `a`-count differs from the other three, if any.
    pub fn exceptional_cell(&self) -> Option<usize> {
        (0..4).find(|&c| {
            let others: Vec<u64> = (0..4).filter(|&d| d != c).map(|d| self.a[d]).collect();
            others.iter().all(|&v| v == others[0]) && others[0] != self.a[c]
        })
    }

    fn permuted(&self, perm: &[usize; 4]) -> Self {
        let mut out = *self;
        for (c, &p) in perm.iter().enumerate() {
            out.a[p] = self.a[c];
            out.b[p] = self.b[c];
        }
        out
    }

    /// Cell sums: `counts[c] = sum over d ^ e = c of a[d] * b[e]`.
    pub fn cell_sums(&self) -> [u64; 4] {
        let mut counts = [0u64; 4];
        for d in 0..4 {
            for e in 0..4 {
                counts[d ^ e] += self.a[d] * self.b[e];
            }
        }
        counts
    }
}

impl fmt::Display for CosetDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={:?} b={:?}", self.a, self.b)
    }
}

/// Odd `t` with `G = Z_t x (Z_2)^2` (odd part cyclic).
fn odd_part(group: &GroupSpec) -> Result<u64> {
    let two = group.p_exponents(2);
    let mut primes: Vec<u64> = group.primary().iter().filter(|c| c.prime != 2).map(|c| c.prime).collect();
    let k = primes.len();
    primes.sort_unstable();
    primes.dedup();
    if two != [1, 1] || primes.len() != k {
        return Err(Error::param(format!(
            "{} is not of the form Z_t x (Z2)^2 with t odd",
            group.literal()
        )));
    }
    Ok(group.odd_order())
}

fn compositions(total: u64, cap: u64) -> Vec<[u64; 4]> {
    let mut out = Vec::new();
    for x0 in 0..=total.min(cap) {
        for x1 in 0..=(total - x0).min(cap) {
            for x2 in 0..=(total - x0 - x1).min(cap) {
                let x3 = total - x0 - x1 - x2;
                if x3 <= cap {
                    out.push([x0, x1, x2, x3]);
                }
            }
        }
    }
    out
}

/// All solutions of the cell equations for an `(r, s)` split, with the
/// sides ordered so that `r = 1 mod 4` (the inputs are swapped if needed).
/// Returns the distributions and whether a swap happened.
pub fn admissible_coset_distributions(group: &GroupSpec, r: u64, s: u64) -> Result<(Vec<CosetDistribution>, bool)> {
    let t = odd_part(group)?;
    let n = group.order() as u64;
    if r * s != n - 1 {
        return Err(Error::param(format!("r*s = {} != n-1 = {}", r * s, n - 1)));
    }
    let swapped = r % 4 != 1;
    let (r, s) = if swapped { (s, r) } else { (r, s) };
    let targets = [t - 1, t, t, t];
    let bs = compositions(s, t);
    let mut out = Vec::new();
    for a in compositions(r, t) {
        for &b in &bs {
            let d = CosetDistribution { a, b };
            if d.cell_sums() == targets {
                out.push(d);
            }
        }
    }
    out.sort_by_key(|x| std::cmp::Reverse((x.a, x.b)));
    Ok((out, swapped))
}

/// Linear automorphisms of `(Z_2)^2` as permutations of the cell indices.
pub fn gl22_cell_permutations() -> Vec<[usize; 4]> {
    let nonzero = [1usize, 2, 3];
    let mut out = Vec::new();
    for &x in &nonzero {
        for &y in &nonzero {
            if x == y {
                continue;
            }
            // basis images: (0,1) -> x, (1,0) -> y
            out.push([0, x, y, x ^ y]);
        }
    }
    out
}

/// Keeps the first distribution of each `GL(2,2)` orbit.
pub fn reduce_by_gl22(dists: &[CosetDistribution]) -> Vec<CosetDistribution> {
    let perms = gl22_cell_permutations();
    let mut kept: Vec<CosetDistribution> = Vec::new();
    for d in dists {
        if !kept.iter().any(|k| perms.iter().any(|p| k.permuted(p) == *d)) {
            kept.push(*d);
        }
    }
    kept
}

#[derive(Debug, Clone)]
struct CellPlan {
    /// Sorted index lists, one per allowed choice for this cell.
    choices: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
struct CasePlan {
    distribution: CosetDistribution,
    cells: Vec<CellPlan>,
    total: u64,
}

/// Candidates for the smaller side, distribution by distribution.
#[derive(Debug, Clone)]
pub struct CosetEnumerator {
    group: GroupSpec,
    cases: Vec<CasePlan>,
    /// The enumerated side is the `r = 1 mod 4` side of the distributions.
    enumerates_a: bool,
    swapped: bool,
    cursor: Cursor,
}

/// Limit on the choices stored for one cell.
const MAX_CELL_CHOICES: usize = 1 << 22;

impl CosetEnumerator {
    pub fn new(group: &GroupSpec, r: u64, s: u64) -> Result<Self> {
        let (all, swapped) = admissible_coset_distributions(group, r, s)?;
        let dists = reduce_by_gl22(&all);
        let (a_size, b_size) = if swapped { (s, r) } else { (r, s) };
        let enumerates_a = a_size < b_size;

        let units = OddUnits::new(group);
        let cell_of = |x: usize| -> usize {
            let pc = group.primary_coords(x);
            let bits: Vec<u64> = group
                .primary()
                .iter()
                .zip(pc)
                .filter(|(c, _)| c.prime == 2)
                .map(|(_, v)| v)
                .collect();
            (bits[0] * 2 + bits[1]) as usize
        };
        let mut cell_involution = [0usize; 4];
        for x in group.involution_indices() {
            cell_involution[cell_of(x)] = x;
        }
        let mut cell_pairs: [Vec<(usize, usize)>; 4] = Default::default();
        for p in group.symmetric_pairs() {
            cell_pairs[cell_of(p.0)].push(p);
        }
        for pairs in cell_pairs.iter_mut() {
            units.order_pairs(pairs);
        }

        let mut cases = Vec::new();
        for d in dists {
            let counts = if enumerates_a { d.a } else { d.b };
            let feasible = (0..4).all(|c| d.involution(c) != CellInvolution::Conflict);
            let mut cells = Vec::with_capacity(4);
            let mut normalized = false;
            let mut total: u64 = if feasible { 1 } else { 0 };
            for c in 0..4 {
                let with_inv = counts[c] % 2 == 1;
                let k = ((counts[c] - with_inv as u64) / 2) as usize;
                let pairs = &cell_pairs[c];
                let mut choices = Vec::new();
                if feasible && k <= pairs.len() {
                    for combo in Combinations::new(pairs.len(), k) {
                        if k > 0 && !normalized && !units.pair_is_representative(pairs[combo[0]].0) {
                            continue;
                        }
                        let mut set: Vec<usize> = combo.iter().flat_map(|&i| [pairs[i].0, pairs[i].1]).collect();
                        if with_inv {
                            set.push(cell_involution[c]);
                        }
                        set.sort_unstable();
                        choices.push(set);
                        if choices.len() > MAX_CELL_CHOICES {
                            return Err(Error::param("too many choices in one cell"));
                        }
                    }
                }
                if k > 0 {
                    normalized = true;
                }
                total = total.saturating_mul(choices.len() as u64);
                cells.push(CellPlan { choices });
            }
            cases.push(CasePlan {
                distribution: d,
                cells,
                total,
            });
        }
        Ok(CosetEnumerator {
            group: group.clone(),
            cases,
            enumerates_a,
            swapped,
            cursor: Cursor::default(),
        })
    }

    /// The `GL(2,2)`-inequivalent distributions being searched.
    pub fn distributions(&self) -> Vec<CosetDistribution> {
        self.cases.iter().map(|c| c.distribution).collect()
    }

    /// Candidates per distribution.
    pub fn case_sizes(&self) -> Vec<u64> {
        self.cases.iter().map(|c| c.total).collect()
    }

    pub fn len(&self) -> u64 {
        self.cases.iter().map(|c| c.total).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether the enumerated sets have size `r` of the original task.
    pub fn enumerates_r_side(&self) -> bool {
        self.enumerates_a != self.swapped
    }

    pub fn seek(&mut self, cursor: Cursor) {
        self.cursor = cursor;
    }

    fn settle(&mut self) -> bool {
        while let Some(case) = self.cases.get(self.cursor.profile_index) {
            if self.cursor.involution_rank == 0 && self.cursor.pair_rank < case.total {
                return true;
            }
            self.cursor = Cursor {
                profile_index: self.cursor.profile_index + 1,
                ..Cursor::default()
            };
        }
        false
    }
}

impl CandidateStream for CosetEnumerator {
    fn seek_to(&mut self, cursor: Cursor) {
        self.seek(cursor);
    }

    fn cursor(&self) -> Cursor {
        let mut probe = self.clone();
        if probe.settle() {
            probe.cursor
        } else {
            Cursor {
                profile_index: self.cases.len(),
                ..Cursor::default()
            }
        }
    }

    fn next_candidate(&mut self) -> Option<GroupSubset> {
        if !self.settle() {
            return None;
        }
        let case = &self.cases[self.cursor.profile_index];
        // mixed radix, cell 0 most significant
        let mut rest = self.cursor.pair_rank;
        let mut picks = [0usize; 4];
        for c in (0..4).rev() {
            let m = case.cells[c].choices.len() as u64;
            picks[c] = (rest % m) as usize;
            rest /= m;
        }
        let set = GroupSubset::from_indices_unchecked(
            &self.group,
            (0..4).flat_map(|c| case.cells[c].choices[picks[c]].iter().copied()),
        );
        self.cursor.pair_rank += 1;
        Some(set)
    }
}

impl Iterator for CosetEnumerator {
    type Item = GroupSubset;
    fn next(&mut self) -> Option<GroupSubset> {
        self.next_candidate()
    }
}
