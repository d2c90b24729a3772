//! Finite abelian groups written additively as ordered products of cyclic
//! groups `Z_{n_1} x ... x Z_{n_k}`.
//!
//! Elements are addressed by a mixed-radix index in `[0, n)` with the last
//! factor varying fastest, so index 0 is always the identity. All quotient
//! computations work per factor and do not require the factor list to be in
//! invariant-factor or primary form.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::GroupSubset;

/// Largest group order accepted. Subsets are bitsets over the element index,
/// and the walk matrix has `n` rows.
pub const MAX_ORDER: u64 = 1 << 24;

/// A cyclic component `Z_{p^e}` of the primary decomposition, remembering
/// which user factor it was split out of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimaryComponent {
    pub prime: u64,
    pub exponent: u32,
    pub order: u64,
    pub factor: usize,
}

#[derive(Debug)]
struct Inner {
    factors: Vec<u64>,
    strides: Vec<usize>,
    order: usize,
    primary: Vec<PrimaryComponent>,
    /// CRT idempotent of each primary component inside its factor.
    idempotents: Vec<u64>,
}

/// A finite abelian group given by its cyclic factor orders.
///
/// Cloning is cheap; the data is shared.
#[derive(Clone)]
pub struct GroupSpec {
    inner: Arc<Inner>,
}

/// An element as a coordinate tuple, `coords[i]` in `[0, n_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

/// Mixed-radix index of an element. Index 0 is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementIndex(pub usize);

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

impl GroupSpec {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::param("a group needs at least one cyclic factor"));
        }
        let mut order: u64 = 1;
        for &n in &factors {
            if n < 2 {
                return Err(Error::param(format!("cyclic factor Z{n} must have order >= 2")));
            }
            order = order
                .checked_mul(n)
                .filter(|&o| o <= MAX_ORDER)
                .ok_or_else(|| Error::param(format!("group order exceeds {MAX_ORDER}")))?;
        }
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1] as usize;
        }

        let mut primary = Vec::new();
        for (i, &n) in factors.iter().enumerate() {
            for (p, e) in factorize(n) {
                primary.push(PrimaryComponent {
                    prime: p,
                    exponent: e,
                    order: p.pow(e),
                    factor: i,
                });
            }
        }
        primary.sort_by_key(|c| (c.order, c.factor));
        let idempotents = primary
            .iter()
            .map(|c| {
                let n = factors[c.factor];
                let rest = n / c.order;
                let inv = mod_inverse(rest % c.order, c.order).unwrap_or(0);
                (rest * inv) % n
            })
            .collect();

        Ok(GroupSpec {
            inner: Arc::new(Inner {
                factors,
                strides,
                order: order as usize,
                primary,
                idempotents,
            }),
        })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.inner.factors
    }

    pub fn rank(&self) -> usize {
        self.inner.factors.len()
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    /// Primary components, sorted ascending by order.
    pub fn primary(&self) -> &[PrimaryComponent] {
        &self.inner.primary
    }

    /// The literal this group was built from, e.g. `Z23xZ2xZ2`.
    pub fn literal(&self) -> String {
        join_literal(self.factors().iter().copied())
    }

    /// Display form from the sorted primary decomposition, e.g. `Z2xZ2xZ23`.
    pub fn canonical(&self) -> String {
        join_literal(self.primary().iter().map(|c| c.order))
    }

    /// Sorted primary orders; equal for isomorphic groups.
    pub fn isomorphism_type(&self) -> Vec<u64> {
        self.primary().iter().map(|c| c.order).collect()
    }

    pub fn is_isomorphic(&self, other: &GroupSpec) -> bool {
        self.isomorphism_type() == other.isomorphism_type()
    }

    /// The canonical primary-form group isomorphic to this one.
    pub fn primary_form(&self) -> GroupSpec {
        GroupSpec::new(self.isomorphism_type()).expect("primary orders are valid factors")
    }

    /// Cyclic iff every prime owns at most one primary component.
    pub fn is_cyclic(&self) -> bool {
        let mut primes: Vec<u64> = self.primary().iter().map(|c| c.prime).collect();
        primes.sort_unstable();
        primes.windows(2).all(|w| w[0] != w[1])
    }

    /// Exponents `e` of the `p`-primary components, ascending.
    pub fn p_exponents(&self, p: u64) -> Vec<u32> {
        let mut e: Vec<u32> = self
            .primary()
            .iter()
            .filter(|c| c.prime == p)
            .map(|c| c.exponent)
            .collect();
        e.sort_unstable();
        e
    }

    /// Order of the odd part.
    pub fn odd_order(&self) -> u64 {
        self.primary()
            .iter()
            .filter(|c| c.prime != 2)
            .map(|c| c.order)
            .product()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(vec![0; self.rank()])
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if g.coords.len() != self.rank() {
            return Err(Error::InvalidElement(format!(
                "{g} has {} coordinates, {} expects {}",
                g.coords.len(),
                self.literal(),
                self.rank()
            )));
        }
        for (c, n) in g.coords.iter().zip(self.factors()) {
            if c >= n {
                return Err(Error::InvalidElement(format!(
                    "coordinate {c} of {g} is out of range for Z{n}"
                )));
            }
        }
        Ok(())
    }

    pub fn encode(&self, g: &GroupElement) -> Result<ElementIndex> {
        self.check(g)?;
        Ok(ElementIndex(
            g.coords
                .iter()
                .zip(&self.inner.strides)
                .map(|(&c, &s)| c as usize * s)
                .sum(),
        ))
    }

    pub fn decode(&self, idx: ElementIndex) -> GroupElement {
        GroupElement::new(
            (0..self.rank()).map(|i| self.coord(idx.0, i)).collect(),
        )
    }

    #[inline]
    pub fn coord(&self, idx: usize, i: usize) -> u64 {
        ((idx / self.inner.strides[i]) % self.inner.factors[i] as usize) as u64
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(GroupElement::new(
            g.coords
                .iter()
                .zip(&h.coords)
                .zip(self.factors())
                .map(|((a, b), n)| (a + b) % n)
                .collect(),
        ))
    }

    pub fn neg(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(GroupElement::new(
            g.coords
                .iter()
                .zip(self.factors())
                .map(|(a, n)| (n - a) % n)
                .collect(),
        ))
    }

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        let inner = &*self.inner;
        let mut out = 0;
        for (&s, &n) in inner.strides.iter().zip(&inner.factors) {
            let n = n as usize;
            let x = (a / s) % n + (b / s) % n;
            out += if x >= n { x - n } else { x } * s;
        }
        out
    }

    #[inline]
    pub fn neg_idx(&self, a: usize) -> usize {
        let inner = &*self.inner;
        let mut out = 0;
        for (&s, &n) in inner.strides.iter().zip(&inner.factors) {
            let n = n as usize;
            out += ((n - (a / s) % n) % n) * s;
        }
        out
    }

    /// `a - b`.
    #[inline]
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    /// `k * a`.
    pub fn scale_idx(&self, k: u64, a: usize) -> usize {
        let inner = &*self.inner;
        let mut out = 0;
        for (&s, &n) in inner.strides.iter().zip(&inner.factors) {
            let c = ((a / s) as u64) % n;
            out += (((c as u128 * k as u128) % n as u128) as usize) * s;
        }
        out
    }

    /// Additive order of the element.
    pub fn element_order(&self, a: usize) -> u64 {
        (0..self.rank())
            .map(|i| {
                let n = self.factors()[i];
                n / self.coord(a, i).gcd(&n)
            })
            .fold(1, |acc, o| acc.lcm(&o))
    }

    pub fn is_involution_idx(&self, a: usize) -> bool {
        a == self.neg_idx(a)
    }

    /// Indices of all `x` with `x = -x`, the identity included, ascending.
    pub fn involution_indices(&self) -> Vec<usize> {
        (0..self.order()).filter(|&a| self.is_involution_idx(a)).collect()
    }

    pub fn involutions(&self) -> GroupSubset {
        GroupSubset::from_indices_unchecked(self, self.involution_indices())
    }

    /// `t_1 = prod gcd(n_i, 2)`.
    pub fn involution_count(&self) -> usize {
        self.factors().iter().map(|n| n.gcd(&2) as usize).product()
    }

    /// Unordered pairs `{x, -x}` with `x != -x`, as `(x, -x)` with `x < -x`,
    /// ordered by the smaller index.
    pub fn symmetric_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.order())
            .filter_map(|a| {
                let b = self.neg_idx(a);
                (a < b).then_some((a, b))
            })
            .collect()
    }

    /// Order of the largest exponent-`d` quotient, `prod gcd(n_i, d)`.
    pub fn quotient_order_exponent_d(&self, d: u64) -> Result<u64> {
        if ![2, 3, 4, 6].contains(&d) {
            return Err(Error::param(format!(
                "exponent quotients are supported for d in {{2,3,4,6}}, got {d}"
            )));
        }
        Ok(self.factors().iter().map(|n| n.gcd(&d)).product())
    }

    /// Largest `m` such that `(Z_p)^m` is a quotient: the number of factors
    /// divisible by `p`.
    pub fn elementary_p_quotient_rank(&self, p: u64) -> u32 {
        self.factors().iter().filter(|&&n| n % p == 0).count() as u32
    }

    /// Primary coordinates of an element, one residue per entry of
    /// [`GroupSpec::primary`].
    pub fn primary_coords(&self, a: usize) -> Vec<u64> {
        self.primary()
            .iter()
            .map(|c| self.coord(a, c.factor) % c.order)
            .collect()
    }

    /// Inverse of [`GroupSpec::primary_coords`].
    pub fn from_primary_coords(&self, coords: &[u64]) -> usize {
        let mut digits = vec![0u64; self.rank()];
        for ((c, &e), &x) in self.primary().iter().zip(&self.inner.idempotents).zip(coords) {
            let n = self.factors()[c.factor];
            digits[c.factor] = ((digits[c.factor] as u128 + e as u128 * x as u128) % n as u128) as u64;
        }
        digits
            .iter()
            .zip(&self.inner.strides)
            .map(|(&d, &s)| d as usize * s)
            .sum()
    }

    /// Map from indices of the primary-form group (see [`GroupSpec::primary_form`])
    /// to indices of this group. The map is a group isomorphism.
    pub fn primary_iso(&self) -> Vec<usize> {
        let pf = self.primary_form();
        (0..pf.order())
            .map(|i| {
                let coords: Vec<u64> = (0..pf.rank()).map(|j| pf.coord(i, j)).collect();
                self.from_primary_coords(&coords)
            })
            .collect()
    }

    /// Generators `e_i` (unit vectors of the factor list).
    pub fn generators(&self) -> Vec<usize> {
        self.inner.strides.clone()
    }

    /// All automorphisms as index permutations, by backtracking over the
    /// images of the factor generators. Fails once more than `limit`
    /// automorphisms are found.
    pub fn automorphisms(&self, limit: usize) -> Result<Vec<Vec<usize>>> {
        let gens = self.generators();
        let candidates: Vec<Vec<usize>> = self
            .factors()
            .iter()
            .map(|&n| {
                (0..self.order())
                    .filter(|&h| self.element_order(h) == n)
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(gens.len());
        self.extend_automorphism(&candidates, &mut images, &mut out, limit)?;
        Ok(out)
    }

    fn extend_automorphism(
        &self,
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> Result<()> {
        let level = images.len();
        if level == candidates.len() {
            if out.len() >= limit {
                return Err(Error::param(format!(
                    "Aut({}) has more than {limit} elements",
                    self.literal()
                )));
            }
            out.push(self.hom_table(images));
            return Ok(());
        }
        let partial = self.partial_image(images, level);
        let n = self.factors()[level];
        let mut seen = vec![false; self.order()];
        for &h in &candidates[level] {
            // injective on the larger sub-product iff all x + k*h are distinct
            seen.iter_mut().for_each(|s| *s = false);
            let mut ok = true;
            let mut kh = 0;
            'outer: for _ in 0..n {
                for &x in &partial {
                    let y = self.add_idx(x, kh);
                    if seen[y] {
                        ok = false;
                        break 'outer;
                    }
                    seen[y] = true;
                }
                kh = self.add_idx(kh, h);
            }
            if ok {
                images.push(h);
                self.extend_automorphism(candidates, images, out, limit)?;
                images.pop();
            }
        }
        Ok(())
    }

    fn partial_image(&self, images: &[usize], level: usize) -> Vec<usize> {
        let mut elems = vec![0usize];
        for (i, &h) in images.iter().enumerate().take(level) {
            let n = self.factors()[i];
            let mut next = Vec::with_capacity(elems.len() * n as usize);
            let mut kh = 0;
            for _ in 0..n {
                next.extend(elems.iter().map(|&x| self.add_idx(x, kh)));
                kh = self.add_idx(kh, h);
            }
            elems = next;
        }
        elems
    }

    /// Table of the homomorphism sending generator `i` to `images[i]`.
    pub fn hom_table(&self, images: &[usize]) -> Vec<usize> {
        (0..self.order())
            .map(|a| {
                images
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (i, &h)| self.add_idx(acc, self.scale_idx(self.coord(a, i), h)))
            })
            .collect()
    }

    /// Every abelian group of order `n`, one per isomorphism type, in
    /// primary form. Types come from one partition of each prime exponent.
    pub fn all_of_order(n: u64) -> Result<Vec<GroupSpec>> {
        if n < 2 {
            return Err(Error::param("group order must be at least 2"));
        }
        let mut shapes: Vec<Vec<u64>> = vec![Vec::new()];
        for (p, e) in factorize(n) {
            let mut next = Vec::new();
            for part in partitions(e) {
                for s in &shapes {
                    let mut s = s.clone();
                    s.extend(part.iter().map(|&k| p.pow(k)));
                    next.push(s);
                }
            }
            shapes = next;
        }
        let mut groups: Vec<GroupSpec> = shapes
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                GroupSpec::new(s)
            })
            .collect::<Result<_>>()?;
        groups.sort_by_key(|g| (g.rank(), g.factors().to_vec()));
        Ok(groups)
    }
}

/// Partitions of `e` into positive parts, each in ascending order.
fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            let mut p = cur.clone();
            p.reverse();
            out.push(p);
            return;
        }
        for k in (1..=rem.min(max)).rev() {
            cur.push(k);
            go(rem - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(e, e, &mut Vec::new(), &mut out);
    out
}

fn join_literal(orders: impl Iterator<Item = u64>) -> String {
    orders
        .map(|n| format!("Z{n}"))
        .collect::<Vec<_>>()
        .join("x")
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses `Z7`, `Z3xZ3`, `z23xz2xz2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::parse(s, "empty group literal"));
        }
        let mut factors = Vec::new();
        for token in s.split(['x', 'X']) {
            let t = token.trim();
            let digits = t
                .strip_prefix('Z')
                .or_else(|| t.strip_prefix('z'))
                .ok_or_else(|| Error::parse(t, "expected a factor like Z7"))?;
            let n: u64 = digits
                .parse()
                .map_err(|_| Error::parse(t, "factor order is not a positive integer"))?;
            if n < 2 {
                return Err(Error::parse(t, "factor order must be at least 2"));
            }
            factors.push(n);
        }
        GroupSpec::new(factors)
    }
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.factors() == other.factors()
    }
}

impl Eq for GroupSpec {}

impl std::hash::Hash for GroupSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.factors().hash(state)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({})", self.literal())
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.literal())
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
