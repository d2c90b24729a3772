//! Strong circular external difference families.
//!
//! Differences are taken as `y - x` for `y` in the first argument and `x` in
//! the second.

use serde::Serialize;

use crate::combinatorics::Combinations;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::mate::{compute_mate_sparse, verify};
use crate::subset::GroupSubset;

/// `D(B, A)` as a histogram over element indices.
pub fn difference_multiset(b: &GroupSubset, a: &GroupSubset) -> Vec<u64> {
    let g = b.group();
    let mut hist = vec![0u64; g.order()];
    for y in b.indices() {
        for x in a.indices() {
            hist[g.sub_idx(y, x)] += 1;
        }
    }
    hist
}

fn is_lambda_copy(hist: &[u64], lambda: u64) -> bool {
    hist[0] == 0 && hist[1..].iter().all(|&c| c == lambda)
}

#[derive(Debug, Clone)]
pub struct DifferenceFamily {
    pub group: GroupSpec,
    pub sets: Vec<GroupSubset>,
    pub ell: usize,
    pub lambda: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// Fewer than two sets.
    TooFewSets,
    Size { set: usize, len: usize },
    Overlap { first: usize, second: usize },
    /// `ell^2 != lambda (n - 1)`.
    Counting,
    /// `D(A_{j+1}, A_j)` is not `lambda (G \ {0})`.
    Difference { j: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct ScedfCheck {
    pub violations: Vec<Violation>,
    /// `(j, D(A_{j+1}, A_j))` for each consecutive pair.
    pub histograms: Vec<(usize, Vec<u64>)>,
}

impl ScedfCheck {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

impl DifferenceFamily {
    /// The common size is taken from the first set.
    pub fn new(group: &GroupSpec, sets: Vec<GroupSubset>, lambda: u64) -> Self {
        let ell = sets.first().map_or(0, GroupSubset::len);
        DifferenceFamily { group: group.clone(), sets, ell, lambda }
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn check(&self) -> ScedfCheck {
        let mut violations = Vec::new();
        let m = self.sets.len();
        if m < 2 {
            violations.push(Violation::TooFewSets);
        }
        for (i, s) in self.sets.iter().enumerate() {
            if s.len() != self.ell {
                violations.push(Violation::Size { set: i, len: s.len() });
            }
            for (j, t) in self.sets.iter().enumerate().skip(i + 1) {
                if !s.is_disjoint(t) {
                    violations.push(Violation::Overlap { first: i, second: j });
                }
            }
        }
        let n = self.group.order() as u64;
        if (self.ell as u64).pow(2) != self.lambda * (n - 1) {
            violations.push(Violation::Counting);
        }
        let mut histograms = Vec::with_capacity(m);
        for j in 0..m {
            let h = difference_multiset(&self.sets[(j + 1) % m], &self.sets[j]);
            if !is_lambda_copy(&h, self.lambda) {
                violations.push(Violation::Difference { j });
            }
            histograms.push((j, h));
        }
        ScedfCheck { violations, histograms }
    }
}

pub fn is_scedf(family: &DifferenceFamily) -> bool {
    family.check().holds()
}

/// For consecutive sets with `D(A1, A2) = lambda (G \ {0})`, the set after
/// `A2` must also be a mate of `-A2`. Returns whether that mate is `A1`, so
/// that no third set disjoint from `A1` can follow.
pub fn circular_extension_is_blocked(
    group: &GroupSpec,
    a1: &GroupSubset,
    a2: &GroupSubset,
    lambda: u64,
) -> Result<bool> {
    let neg = a2.negated();
    if !verify(group, a1, &neg, lambda) {
        return Err(Error::param("D(A1, A2) is not lambda copies of the nonzero elements"));
    }
    let forced = compute_mate_sparse(group, &neg, lambda)?;
    Ok(forced.mate.as_ref() == Some(a1))
}

/// Residues and nonresidues mod a prime `q = 1 (mod 4)`, as a family in `Z_q`
/// with `lambda = (q - 1) / 4`.
pub fn quadratic_residue_family(q: u64) -> Result<DifferenceFamily> {
    if q % 4 != 1 || !crate::group::is_prime(q) {
        return Err(Error::param(format!("{q} is not a prime congruent to 1 mod 4")));
    }
    let g = GroupSpec::cyclic(q)?;
    let residues: std::collections::BTreeSet<usize> = (1..q).map(|x| ((x * x) % q) as usize).collect();
    let non: Vec<usize> = (1..q as usize).filter(|x| !residues.contains(x)).collect();
    let sets = vec![GroupSubset::from_indices(&g, residues)?, GroupSubset::from_indices(&g, non)?];
    Ok(DifferenceFamily::new(&g, sets, (q - 1) / 4))
}

/// Outcome of an exhaustive search for families with `m` sets.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ScedfSearch {
    /// `(group, ell, lambda)` parameter sets that were searched.
    pub parameters: Vec<(String, usize, u64)>,
    pub families: Vec<Vec<Vec<usize>>>,
    /// Consecutive pairs found, each checked with [`circular_extension_is_blocked`].
    pub pairs_checked: u64,
    /// Pairs whose extension was not blocked. Always zero unless mates fail to be unique.
    pub unblocked: u64,
}

/// All `(n, m, ell; lambda)` families in `group`, by extending valid
/// consecutive pairs one set at a time.
pub fn search_scedf(group: &GroupSpec, m: usize) -> Result<ScedfSearch> {
    let n = group.order();
    let mut out = ScedfSearch::default();
    if m < 2 {
        return Ok(out);
    }
    for ell in 1..=n / m {
        let sq = (ell * ell) as u64;
        if !sq.is_multiple_of(n as u64 - 1) {
            continue;
        }
        let lambda = sq / (n as u64 - 1);
        out.parameters.push((group.literal(), ell, lambda));
        let subsets: Vec<GroupSubset> = Combinations::new(n, ell)
            .map(|c| GroupSubset::from_indices(group, c))
            .collect::<Result<_>>()?;
        let mut chain = Vec::with_capacity(m);
        for first in 0..subsets.len() {
            chain.push(first);
            extend(group, &subsets, lambda, m, &mut chain, &mut out)?;
            chain.pop();
        }
    }
    Ok(out)
}

fn extend(
    group: &GroupSpec,
    subsets: &[GroupSubset],
    lambda: u64,
    m: usize,
    chain: &mut Vec<usize>,
    out: &mut ScedfSearch,
) -> Result<()> {
    let last = &subsets[*chain.last().expect("nonempty chain")];
    for (i, next) in subsets.iter().enumerate() {
        if chain.iter().any(|&c| !subsets[c].is_disjoint(next)) {
            continue;
        }
        if !is_lambda_copy(&difference_multiset(next, last), lambda) {
            continue;
        }
        // D(next, last) has the required form, so D(last, next) does as well.
        out.pairs_checked += 1;
        if !circular_extension_is_blocked(group, last, next, lambda)? {
            out.unblocked += 1;
        }
        chain.push(i);
        if chain.len() == m {
            let closes = is_lambda_copy(&difference_multiset(&subsets[chain[0]], next), lambda);
            if closes {
                out.families.push(chain.iter().map(|&c| subsets[c].to_vec()).collect());
            }
        } else {
            extend(group, subsets, lambda, m, chain, out)?;
        }
        chain.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    #[test]
    fn differences_in_z7() {
        let g = z(7);
        let b = GroupSubset::parse(&g, "1,2,3").unwrap();
        let a = GroupSubset::parse(&g, "0,3").unwrap();
        assert_eq!(difference_multiset(&b, &a), vec![1, 1, 1, 1, 0, 1, 1]);
        assert_eq!(difference_multiset(&a, &a)[0], 2);
        assert!(difference_multiset(&GroupSubset::empty(&g), &a).iter().all(|&c| c == 0));
    }

    #[test]
    fn residue_families() {
        for q in [5, 13, 17] {
            let f = quadratic_residue_family(q).unwrap();
            assert_eq!(f.lambda, (q - 1) / 4);
            assert!(is_scedf(&f), "q = {q}");
        }
        assert!(quadratic_residue_family(7).is_err());
    }

    #[test]
    fn overlap_is_flagged() {
        let g = z(5);
        let sets = vec![GroupSubset::parse(&g, "1,4").unwrap(), GroupSubset::parse(&g, "1,2").unwrap()];
        let c = DifferenceFamily::new(&g, sets, 1).check();
        assert!(c.violations.contains(&Violation::Overlap { first: 0, second: 1 }));
    }

    #[test]
    fn blocked_examples() {
        let g = z(5);
        let a1 = GroupSubset::parse(&g, "1,4").unwrap();
        let a2 = GroupSubset::parse(&g, "2,3").unwrap();
        assert!(circular_extension_is_blocked(&g, &a1, &a2, 1).unwrap());
        assert!(circular_extension_is_blocked(&g, &a1, &a1, 1).is_err());
        let f = quadratic_residue_family(13).unwrap();
        let g13 = z(13);
        assert!(circular_extension_is_blocked(&g13, &f.sets[0], &f.sets[1], 3).unwrap());
    }

    #[test]
    fn no_three_set_family_in_z10() {
        let res = search_scedf(&z(10), 3).unwrap();
        assert_eq!(res.parameters, vec![("Z10".to_string(), 3, 1)]);
        assert!(res.families.is_empty());
        assert_eq!(res.unblocked, 0);
    }
}
