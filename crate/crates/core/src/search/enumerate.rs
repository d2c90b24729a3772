//! Candidate streams with resumable cursors.

use num_integer::Integer;

use crate::combinatorics::{binomial, next_combination, rank, unrank, Combinations};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::orbit::{OrbitCatalog, OrbitContext};
use crate::subset::GroupSubset;

use super::task::{Cursor, InvolutionProfile};

/// A deterministic stream of candidate sets that can report and resume
/// from its position.
pub trait CandidateStream: Send {
    /// Position of the next candidate.
    fn cursor(&self) -> Cursor;
    fn next_candidate(&mut self) -> Option<GroupSubset>;
    /// Moves to `cursor`, as produced by [`CandidateStream::cursor`].
    fn seek_to(&mut self, cursor: Cursor);
}

fn to_u64(v: u128, what: &str) -> Result<u64> {
    u64::try_from(v).map_err(|_| Error::param(format!("{what} count {v} does not fit in 64 bits")))
}

fn checked_binomial(n: usize, k: usize, what: &str) -> Result<u64> {
    let b = binomial(n, k).ok_or_else(|| Error::param(format!("C({n},{k}) overflows")))?;
    to_u64(b, what)
}

/// Scalar automorphisms `g -> c*g` that act as a unit on the odd part and
/// as the identity on the 2-part.
#[derive(Debug, Clone)]
pub struct OddUnits {
    group: GroupSpec,
    multipliers: Vec<u64>,
    projection: Vec<usize>,
    orbit_min: Vec<usize>,
}

impl OddUnits {
    pub fn new(group: &GroupSpec) -> Self {
        let two = group
            .primary()
            .iter()
            .filter(|c| c.prime == 2)
            .map(|c| c.order)
            .max()
            .unwrap_or(1);
        let odd = group
            .primary()
            .iter()
            .filter(|c| c.prime != 2)
            .fold(1u64, |acc, c| acc.lcm(&c.order));
        let modulus = two * odd;
        // c = u mod odd, c = v mod two
        let crt = |u: u64, v: u64| -> u64 {
            (0..two)
                .map(|k| u + k * odd)
                .find(|c| c % two == v % two)
                .expect("coprime moduli")
                % modulus
        };
        let multipliers: Vec<u64> = (1..=odd)
            .filter(|u| u.gcd(&odd) == 1)
            .map(|u| crt(u % odd, 1))
            .collect();
        let p = crt(1 % odd, 0);
        let n = group.order();
        let projection: Vec<usize> = (0..n).map(|g| group.scale_idx(p, g)).collect();
        let mut orbit_min = vec![usize::MAX; n];
        for g in 0..n {
            if projection[g] != g || orbit_min[g] != usize::MAX {
                continue;
            }
            let orbit: Vec<usize> = multipliers.iter().map(|&c| group.scale_idx(c, g)).collect();
            let m = *orbit.iter().min().expect("unit 1 present");
            for h in orbit {
                orbit_min[h] = m;
            }
        }
        OddUnits {
            group: group.clone(),
            multipliers,
            projection,
            orbit_min,
        }
    }

    /// Multipliers `c`, one per unit of the odd exponent.
    pub fn multipliers(&self) -> &[u64] {
        &self.multipliers
    }

    /// The automorphisms as index permutations.
    pub fn permutations(&self) -> Vec<Vec<usize>> {
        self.multipliers
            .iter()
            .map(|&c| (0..self.group.order()).map(|g| self.group.scale_idx(c, g)).collect())
            .collect()
    }

    pub fn odd_projection(&self, x: usize) -> usize {
        self.projection[x]
    }

    pub fn odd_order(&self, x: usize) -> u64 {
        self.group.element_order(self.projection[x])
    }

    /// The pair `{x, -x}` is a representative iff its odd projection is
    /// the least index in its unit orbit, up to sign.
    pub fn pair_is_representative(&self, x: usize) -> bool {
        let h = self.projection[x];
        let m = self.orbit_min[h];
        h == m || self.group.neg_idx(h) == m
    }

    /// Orders pairs so that within each odd order the representatives come
    /// first, higher odd orders first. A symmetric set can always be moved
    /// by a unit so that its first pair in this order is a representative.
    pub fn order_pairs(&self, pairs: &mut [(usize, usize)]) {
        pairs.sort_by_key(|&(x, _)| {
            (
                std::cmp::Reverse(self.odd_order(x)),
                !self.pair_is_representative(x),
                x,
            )
        });
    }
}

#[derive(Debug, Clone)]
enum InvolutionChoices {
    /// Every `k`-subset of `pool`, by lexicographic rank.
    All { pool: Vec<usize>, k: usize, count: u64 },
    /// Explicit sorted index lists.
    Listed(Vec<Vec<usize>>),
}

impl InvolutionChoices {
    fn len(&self) -> u64 {
        match self {
            InvolutionChoices::All { count, .. } => *count,
            InvolutionChoices::Listed(v) => v.len() as u64,
        }
    }

    fn get(&self, r: u64) -> Vec<usize> {
        match self {
            InvolutionChoices::All { pool, k, .. } => unrank(pool.len(), *k, r as u128)
                .expect("rank in range")
                .into_iter()
                .map(|i| pool[i])
                .collect(),
            InvolutionChoices::Listed(v) => v[r as usize].clone(),
        }
    }
}

#[derive(Debug, Clone)]
struct ProfilePlan {
    profile: InvolutionProfile,
    involutions: InvolutionChoices,
    pairs: Vec<(usize, usize)>,
    /// When present, the first chosen pair position must be `true`.
    first_allowed: Option<Vec<bool>>,
}

/// Which symmetries to quotient out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Reduction {
    /// One involution subset per orbit of the 2-part automorphisms.
    pub involution_orbits: bool,
    /// First symmetric pair normalized by units on the odd part.
    pub unit_pairs: bool,
}

impl Reduction {
    pub const NONE: Reduction = Reduction {
        involution_orbits: false,
        unit_pairs: false,
    };
    pub const FULL: Reduction = Reduction {
        involution_orbits: true,
        unit_pairs: true,
    };
}

/// Symmetric `r`-subsets, profile by profile.
#[derive(Debug, Clone)]
pub struct SymmetricEnumerator {
    group: GroupSpec,
    plans: Vec<ProfilePlan>,
    cursor: Cursor,
    combo: Option<Vec<usize>>,
    inv_cache: Option<(Cursor, Vec<usize>)>,
}

impl SymmetricEnumerator {
    /// All profiles of symmetric `r`-sets.
    pub fn new(group: &GroupSpec, r: usize, reduction: Reduction) -> Result<Self> {
        let profiles = InvolutionProfile::all(group, r);
        let catalog_ctx = if reduction.involution_orbits {
            OrbitContext::for_group(group)
        } else {
            None
        };
        let mut catalogs = Vec::with_capacity(profiles.len());
        for p in &profiles {
            catalogs.push(match catalog_ctx {
                Some(ctx) => Some(OrbitCatalog::new(ctx, p.i1)?),
                None => None,
            });
        }
        Self::build(group, profiles.into_iter().zip(catalogs).collect(), reduction.unit_pairs)
    }

    /// One profile, optionally restricted to catalog representatives.
    pub fn for_profile(
        group: &GroupSpec,
        profile: InvolutionProfile,
        catalog: Option<&OrbitCatalog>,
    ) -> Result<Self> {
        let t1 = group.involution_count();
        let t2 = (group.order() - t1) / 2;
        if profile.i1 > t1 || profile.i2 > t2 {
            return Self::build(group, Vec::new(), false);
        }
        if let Some(c) = catalog {
            if c.i1 != profile.i1 {
                return Err(Error::param(format!(
                    "catalog is for i1 = {}, profile has i1 = {}",
                    c.i1, profile.i1
                )));
            }
        }
        Self::build(group, vec![(profile, catalog.cloned())], false)
    }

    fn build(
        group: &GroupSpec,
        profiles: Vec<(InvolutionProfile, Option<OrbitCatalog>)>,
        unit_pairs: bool,
    ) -> Result<Self> {
        let inv = group.involution_indices();
        let mut pairs = group.symmetric_pairs();
        let mut first_allowed = None;
        if unit_pairs {
            let units = OddUnits::new(group);
            units.order_pairs(&mut pairs);
            let ok: Vec<bool> = pairs.iter().map(|&(x, _)| units.pair_is_representative(x)).collect();
            if ok.iter().any(|b| !b) {
                first_allowed = Some(ok);
            }
        }
        let mut plans = Vec::with_capacity(profiles.len());
        for (profile, catalog) in profiles {
            checked_binomial(pairs.len(), profile.i2, "pair subset")?;
            let involutions = match catalog {
                Some(c) => {
                    let mut reps = c.representatives_in(group)?;
                    reps.sort();
                    InvolutionChoices::Listed(reps)
                }
                None => InvolutionChoices::All {
                    count: checked_binomial(inv.len(), profile.i1, "involution subset")?,
                    pool: inv.clone(),
                    k: profile.i1,
                },
            };
            plans.push(ProfilePlan {
                profile,
                involutions,
                pairs: pairs.clone(),
                first_allowed: first_allowed.clone(),
            });
        }
        Ok(SymmetricEnumerator {
            group: group.clone(),
            plans,
            cursor: Cursor::default(),
            combo: None,
            inv_cache: None,
        })
    }

    pub fn profiles(&self) -> Vec<InvolutionProfile> {
        self.plans.iter().map(|p| p.profile).collect()
    }

    /// Moves to `cursor`; the next candidate is the first one at or after it.
    pub fn seek(&mut self, cursor: Cursor) {
        self.cursor = cursor;
        self.combo = None;
    }

    /// Number of candidates without any first-pair restriction.
    pub fn unrestricted_len(&self) -> u128 {
        self.plans
            .iter()
            .map(|p| p.involutions.len() as u128 * binomial(p.pairs.len(), p.profile.i2).unwrap_or(0))
            .sum()
    }

    fn next_involution_set(&mut self) {
        self.cursor.involution_rank += 1;
        self.cursor.pair_rank = 0;
        self.combo = None;
    }

    /// Normalizes the cursor to the next valid candidate position.
    fn settle(&mut self) -> bool {
        loop {
            let Some(plan) = self.plans.get(self.cursor.profile_index) else {
                return false;
            };
            if self.cursor.involution_rank >= plan.involutions.len() {
                self.cursor = Cursor {
                    profile_index: self.cursor.profile_index + 1,
                    ..Cursor::default()
                };
                self.combo = None;
                continue;
            }
            let t2 = plan.pairs.len();
            let k = plan.profile.i2;
            if self.combo.is_none() {
                match unrank(t2, k, self.cursor.pair_rank as u128) {
                    Some(c) => self.combo = Some(c),
                    None => {
                        self.next_involution_set();
                        continue;
                    }
                }
            }
            let combo = self.combo.as_mut().expect("set above");
            if let (Some(ok), Some(&first)) = (&plan.first_allowed, combo.first()) {
                if !ok[first] {
                    match (first + 1..=t2 - k).find(|&p| ok[p]) {
                        Some(p) => {
                            for (i, c) in combo.iter_mut().enumerate() {
                                *c = p + i;
                            }
                            self.cursor.pair_rank = rank(t2, combo) as u64;
                        }
                        None => {
                            self.next_involution_set();
                            continue;
                        }
                    }
                }
            }
            return true;
        }
    }
}

impl CandidateStream for SymmetricEnumerator {
    fn seek_to(&mut self, cursor: Cursor) {
        self.seek(cursor);
    }

    fn cursor(&self) -> Cursor {
        let mut probe = self.clone();
        probe.inv_cache = None;
        if probe.settle() {
            probe.cursor
        } else {
            Cursor {
                profile_index: self.plans.len(),
                ..Cursor::default()
            }
        }
    }

    fn next_candidate(&mut self) -> Option<GroupSubset> {
        if !self.settle() {
            return None;
        }
        let key = Cursor {
            pair_rank: 0,
            ..self.cursor
        };
        let plan = &self.plans[self.cursor.profile_index];
        let involutions = match &self.inv_cache {
            Some((k, v)) if *k == key => v.clone(),
            _ => {
                let v = plan.involutions.get(self.cursor.involution_rank);
                self.inv_cache = Some((key, v.clone()));
                v
            }
        };
        let combo = self.combo.as_mut().expect("settled");
        let mut set = GroupSubset::from_indices_unchecked(&self.group, involutions);
        for &c in combo.iter() {
            let (x, y) = plan.pairs[c];
            set.insert(x);
            set.insert(y);
        }
        if next_combination(combo, plan.pairs.len()) {
            self.cursor.pair_rank += 1;
        } else {
            self.next_involution_set();
        }
        Some(set)
    }
}

impl Iterator for SymmetricEnumerator {
    type Item = GroupSubset;
    fn next(&mut self) -> Option<GroupSubset> {
        self.next_candidate()
    }
}

/// Stream over the symmetric `r`-subsets matching `profile`, restricted to
/// one involution subset per orbit when `catalog` is given.
pub fn enumerate_symmetric_subsets(
    group: &GroupSpec,
    r: usize,
    profile: InvolutionProfile,
    catalog: Option<&OrbitCatalog>,
) -> Result<SymmetricEnumerator> {
    if profile.i1 + 2 * profile.i2 != r {
        return SymmetricEnumerator::build(group, Vec::new(), false);
    }
    SymmetricEnumerator::for_profile(group, profile, catalog)
}

/// `sum over profiles of C(t1, i1) * C(t2, i2)`.
pub fn symmetric_subset_count(group: &GroupSpec, r: usize) -> u128 {
    let t1 = group.involution_count();
    let t2 = (group.order() - t1) / 2;
    InvolutionProfile::all(group, r)
        .iter()
        .map(|p| binomial(t1, p.i1).unwrap_or(0) * binomial(t2, p.i2).unwrap_or(0))
        .sum()
}

/// All `r`-subsets containing 0. Every near-factorization has a translate
/// `(A - a, B + a)` of this shape.
#[derive(Debug, Clone)]
pub struct TranslatedEnumerator {
    group: GroupSpec,
    k: usize,
    inner: Combinations,
    rank: u64,
    total: u64,
}

impl TranslatedEnumerator {
    pub fn new(group: &GroupSpec, r: usize) -> Result<Self> {
        if r == 0 || r > group.order() {
            return Err(Error::param(format!("no {r}-subsets of a group of order {}", group.order())));
        }
        let n = group.order() - 1;
        let total = checked_binomial(n, r - 1, "subset")?;
        Ok(TranslatedEnumerator {
            group: group.clone(),
            k: r - 1,
            inner: Combinations::new(n, r - 1),
            rank: 0,
            total,
        })
    }

    pub fn seek(&mut self, cursor: Cursor) {
        let n = self.group.order() - 1;
        if cursor.profile_index > 0 || cursor.involution_rank > 0 || cursor.pair_rank >= self.total {
            self.rank = self.total;
            self.inner = Combinations::from_rank(n, self.k, u128::MAX);
        } else {
            self.rank = cursor.pair_rank;
            self.inner = Combinations::from_rank(n, self.k, cursor.pair_rank as u128);
        }
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }
}

impl CandidateStream for TranslatedEnumerator {
    fn seek_to(&mut self, cursor: Cursor) {
        self.seek(cursor);
    }

    fn cursor(&self) -> Cursor {
        if self.rank >= self.total {
            Cursor {
                profile_index: 1,
                ..Cursor::default()
            }
        } else {
            Cursor {
                pair_rank: self.rank,
                ..Cursor::default()
            }
        }
    }

    fn next_candidate(&mut self) -> Option<GroupSubset> {
        let c = self.inner.next()?;
        self.rank += 1;
        let mut set = GroupSubset::from_indices_unchecked(&self.group, c.into_iter().map(|i| i + 1));
        set.insert(0);
        Some(set)
    }
}

impl Iterator for TranslatedEnumerator {
    type Item = GroupSubset;
    fn next(&mut self) -> Option<GroupSubset> {
        self.next_candidate()
    }
}
