//! Equivalence of near-factorizations: `(A, B) ~ (phi(A) + g, phi(B) - g)`
//! for automorphisms `phi` and translations `g`, together with `(A, B) ~ (B, A)`.

use crate::error::Result;
use crate::group::GroupSpec;
use crate::mate::NearFactorization;
use crate::subset::GroupSubset;

/// Automorphisms used for equivalence checks.
#[derive(Debug, Clone)]
pub struct EquivalenceAction {
    group: GroupSpec,
    automorphisms: Vec<Vec<usize>>,
    /// `false` when `Aut(G)` was too large and only scalar units are used.
    pub complete: bool,
}

/// `|Aut(G)|` above which only scalar automorphisms are used.
pub const AUTOMORPHISM_LIMIT: usize = 50_000;

impl EquivalenceAction {
    pub fn new(group: &GroupSpec) -> Self {
        match group.automorphisms(AUTOMORPHISM_LIMIT) {
            Ok(automorphisms) => EquivalenceAction {
                group: group.clone(),
                automorphisms,
                complete: true,
            },
            Err(_) => EquivalenceAction {
                group: group.clone(),
                automorphisms: scalar_automorphisms(group),
                complete: false,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.automorphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.automorphisms.is_empty()
    }

    fn normalized(&self, x: &[usize], y: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let g = &self.group;
        let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
        for &a in x {
            let shift = g.neg_idx(a);
            let mut xs: Vec<usize> = x.iter().map(|&v| g.add_idx(v, shift)).collect();
            let mut ys: Vec<usize> = y.iter().map(|&v| g.sub_idx(v, shift)).collect();
            xs.sort_unstable();
            ys.sort_unstable();
            let cand = (xs, ys);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        best.unwrap_or_default()
    }

    /// Least image of `(A, B)` under the action, as sorted index lists.
    pub fn canonical_form(&self, nf: &NearFactorization) -> (Vec<usize>, Vec<usize>) {
        let a = nf.a.to_vec();
        let b = nf.b.to_vec();
        let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
        for phi in &self.automorphisms {
            let pa: Vec<usize> = a.iter().map(|&v| phi[v]).collect();
            let pb: Vec<usize> = b.iter().map(|&v| phi[v]).collect();
            for cand in [self.normalized(&pa, &pb), self.normalized(&pb, &pa)] {
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        best.unwrap_or_default()
    }

    pub fn equivalent(&self, x: &NearFactorization, y: &NearFactorization) -> bool {
        x.group == y.group && x.lambda == y.lambda && self.canonical_form(x) == self.canonical_form(y)
    }

    /// One representative per class, in order of first appearance.
    pub fn deduplicate(&self, found: &[NearFactorization]) -> Vec<NearFactorization> {
        let mut seen = std::collections::HashSet::new();
        found
            .iter()
            .filter(|nf| seen.insert(self.canonical_form(nf)))
            .cloned()
            .collect()
    }

    /// Canonical form as a near-factorization.
    pub fn canonical(&self, nf: &NearFactorization) -> Result<NearFactorization> {
        let (a, b) = self.canonical_form(nf);
        let g = &self.group;
        NearFactorization::new(
            g,
            GroupSubset::from_indices(g, a)?,
            GroupSubset::from_indices(g, b)?,
            nf.lambda,
        )
    }
}

/// `g -> c*g` for every `c` coprime to the exponent of `G`.
pub fn scalar_automorphisms(group: &GroupSpec) -> Vec<Vec<usize>> {
    let exp = group
        .factors()
        .iter()
        .fold(1u64, |acc, &n| num_integer::Integer::lcm(&acc, &n));
    (1..=exp)
        .filter(|&c| num_integer::Integer::gcd(&c, &exp) == 1)
        .map(|c| (0..group.order()).map(|g| group.scale_idx(c, g)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z7_classes() {
        let g: GroupSpec = "Z7".parse().unwrap();
        let nf = |a: &str, b: &str| {
            NearFactorization::new(
                &g,
                GroupSubset::parse(&g, a).unwrap(),
                GroupSubset::parse(&g, b).unwrap(),
                1,
            )
            .unwrap()
        };
        let act = EquivalenceAction::new(&g);
        assert_eq!(act.len(), 6);
        let x = nf("0,3", "1,2,3");
        // translate by 1
        let y = nf("1,4", "0,1,2");
        // multiply by 2
        let z = nf("0,6", "2,4,6");
        assert!(act.equivalent(&x, &y));
        assert!(act.equivalent(&x, &z));
        assert!(act.equivalent(&x, &x.swapped()));
        assert_eq!(act.deduplicate(&[x.clone(), y, z]).len(), 1);
    }

    #[test]
    fn scalar_fallback_contains_negation() {
        let g: GroupSpec = "Z4xZ6".parse().unwrap();
        let s = scalar_automorphisms(&g);
        assert_eq!(s.len(), 4);
        assert!(s.iter().any(|p| (0..g.order()).all(|x| p[x] == g.neg_idx(x))));
    }
}
