//! Orbits of involution subsets under automorphisms of the 2-part.
//!
//! For `G = H x P` with `|H|` odd, every automorphism of the 2-part `P`
//! extends to `G` by acting trivially on `H`, and every involution of `G`
//! lies in `P`. A search over symmetric sets may therefore fix the
//! involution part of `A` to one representative per orbit. The 2-parts
//! handled here are `(Z_2)^k` (acted on by `GL(k, 2)`), `Z_2 x Z_4` and
//! `Z_2 x Z_8`; orbits are computed from the explicitly enumerated
//! automorphism group.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitContext {
    /// `GL(k, 2)` acting on `(Z_2)^k`.
    Gl(usize),
    Z2xZ4,
    Z2xZ8,
}

impl OrbitContext {
    /// The 2-group acted on, in primary form.
    pub fn two_group(self) -> GroupSpec {
        let factors = match self {
            OrbitContext::Gl(k) => vec![2; k],
            OrbitContext::Z2xZ4 => vec![2, 4],
            OrbitContext::Z2xZ8 => vec![2, 8],
        };
        GroupSpec::new(factors).expect("valid 2-group")
    }

    /// The context matching the 2-part of `group`, if any.
    pub fn for_group(group: &GroupSpec) -> Option<Self> {
        match group.p_exponents(2).as_slice() {
            [] => None,
            e if e.iter().all(|&x| x == 1) && e.len() <= 4 => Some(OrbitContext::Gl(e.len())),
            [1, 2] => Some(OrbitContext::Z2xZ4),
            [1, 3] => Some(OrbitContext::Z2xZ8),
            _ => None,
        }
    }
}

impl fmt::Display for OrbitContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitContext::Gl(k) => write!(f, "GL({k},2)"),
            OrbitContext::Z2xZ4 => f.write_str("Aut(Z2xZ4)"),
            OrbitContext::Z2xZ8 => f.write_str("Aut(Z2xZ8)"),
        }
    }
}

/// One representative per orbit of `i1`-subsets of involutions.
#[derive(Debug, Clone)]
pub struct OrbitCatalog {
    pub context: OrbitContext,
    pub i1: usize,
    /// Sorted index lists in the 2-group of `context`, ascending.
    pub representatives: Vec<Vec<usize>>,
    pub orbit_sizes: Vec<usize>,
    automorphisms: Vec<Vec<usize>>,
}

impl OrbitCatalog {
    pub fn new(context: OrbitContext, i1: usize) -> Result<Self> {
        if let OrbitContext::Gl(k) = context {
            if !(1..=4).contains(&k) {
                return Err(Error::param(format!("GL(k,2) catalogs need 1 <= k <= 4, got {k}")));
            }
        }
        let p = context.two_group();
        let autos = p.automorphisms(100_000)?;
        let inv = p.involution_indices();
        if i1 > inv.len() {
            return Err(Error::param(format!(
                "cannot choose {i1} of {} involutions",
                inv.len()
            )));
        }
        let mut seen: HashSet<u64> = HashSet::new();
        let mut representatives = Vec::new();
        let mut orbit_sizes = Vec::new();
        for combo in crate::combinatorics::Combinations::new(inv.len(), i1) {
            let mask = combo.iter().fold(0u64, |m, &c| m | 1 << inv[c]);
            if seen.contains(&mask) {
                continue;
            }
            let mut size = 0;
            for phi in &autos {
                let image = combo.iter().fold(0u64, |m, &c| m | 1 << phi[inv[c]]);
                if seen.insert(image) {
                    size += 1;
                }
            }
            representatives.push(combo.iter().map(|&c| inv[c]).collect());
            orbit_sizes.push(size);
        }
        Ok(OrbitCatalog {
            context,
            i1,
            representatives,
            orbit_sizes,
            automorphisms: autos,
        })
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Automorphisms of the 2-group, as index permutations.
    pub fn automorphisms(&self) -> &[Vec<usize>] {
        &self.automorphisms
    }

    /// Representatives moved into `group`, whose 2-part must match the
    /// context. Each is a sorted index list.
    pub fn representatives_in(&self, group: &GroupSpec) -> Result<Vec<Vec<usize>>> {
        let embed = two_part_embedding(group, self.context)?;
        Ok(self
            .representatives
            .iter()
            .map(|rep| {
                let mut v: Vec<usize> = rep.iter().map(|&x| embed[x]).collect();
                v.sort_unstable();
                v
            })
            .collect())
    }

    /// The action on `group`: each 2-part automorphism extended by the
    /// identity on the odd part.
    pub fn lifted_automorphisms(&self, group: &GroupSpec) -> Result<Vec<Vec<usize>>> {
        let two = self.context.two_group();
        let slots = two_part_slots(group, self.context)?;
        Ok(self
            .automorphisms
            .iter()
            .map(|phi| {
                (0..group.order())
                    .map(|g| {
                        let mut pc = group.primary_coords(g);
                        let x: Vec<u64> = slots.iter().map(|&s| pc[s]).collect();
                        let xi = two.from_primary_coords(&x);
                        let y = two.primary_coords(phi[xi]);
                        for (&s, v) in slots.iter().zip(y) {
                            pc[s] = v;
                        }
                        group.from_primary_coords(&pc)
                    })
                    .collect()
            })
            .collect())
    }
}

/// Positions of the 2-primary components of `group` inside its primary
/// coordinate vector, in the order of the context's 2-group factors.
fn two_part_slots(group: &GroupSpec, context: OrbitContext) -> Result<Vec<usize>> {
    if OrbitContext::for_group(group) != Some(context) {
        return Err(Error::param(format!(
            "{} does not have the 2-part acted on by {context}",
            group.literal()
        )));
    }
    Ok(group
        .primary()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.prime == 2)
        .map(|(i, _)| i)
        .collect())
}

/// `embed[x]` is the image in `group` of element `x` of the context 2-group.
pub fn two_part_embedding(group: &GroupSpec, context: OrbitContext) -> Result<Vec<usize>> {
    let two = context.two_group();
    let slots = two_part_slots(group, context)?;
    let width = group.primary().len();
    Ok((0..two.order())
        .map(|x| {
            let mut pc = vec![0u64; width];
            for (&s, v) in slots.iter().zip(two.primary_coords(x)) {
                pc[s] = v;
            }
            group.from_primary_coords(&pc)
        })
        .collect())
}

/// Orbits of `i1`-subsets of `(Z_2)^k` under `GL(k, 2)`.
pub fn gl_orbit_catalog(k: usize, i1: usize) -> Result<OrbitCatalog> {
    OrbitCatalog::new(OrbitContext::Gl(k), i1)
}

/// Orbits of single involutions of `Z_2 x Z_4` or `Z_2 x Z_8`.
pub fn mixed_aut_orbits(context: OrbitContext) -> Result<OrbitCatalog> {
    match context {
        OrbitContext::Gl(_) => Err(Error::param("mixed_aut_orbits takes Z2xZ4 or Z2xZ8")),
        _ => OrbitCatalog::new(context, 1),
    }
}
