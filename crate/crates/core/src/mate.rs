//! Mates of a set `A`: the unique `B` with `A + B = lambda (G \ {0})`.
//!
//! Two routes compute the same thing. The dense route inverts the walk
//! matrix `X = M(A)` exactly and reads `B` off `Y = (lambda/r) J - lambda X^{-1}`.
//! The sparse route only needs the first column of `Y`, so it solves
//! `X z = lambda (0, 1, ..., 1)^T` and sets `B = {-g : z_g = 1}`, working
//! modulo word-sized primes with an exact rational fallback.
//!
//! Both routes finish with a direct multiset check, so `Found` is never
//! reported for a pair that does not verify.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::linalg::{fraction_free_inverse, solve_sparse, DenseMatrix, Solution};
use crate::scalar::{ExactRing, Fp, MODULI};
use crate::subset::GroupSubset;

/// The 0-1 matrix `M(H)` with `M_{ij} = 1` iff `g_j - g_i` is in `H`,
/// stored as sorted column lists per row.
#[derive(Clone, Debug)]
pub struct WalkMatrix {
    group: GroupSpec,
    source: GroupSubset,
    rows: Vec<Vec<usize>>,
}

impl WalkMatrix {
    pub fn new(group: &GroupSpec, h: &GroupSubset) -> Self {
        let elems = h.to_vec();
        let rows = (0..group.order())
            .map(|i| {
                let mut r: Vec<usize> = elems.iter().map(|&x| group.add_idx(i, x)).collect();
                r.sort_unstable();
                r
            })
            .collect();
        WalkMatrix {
            group: group.clone(),
            source: h.clone(),
            rows,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn source(&self) -> &GroupSubset {
        &self.source
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].binary_search(&j).is_ok()
    }

    /// `X * (1, ..., 1)^T`.
    pub fn row_sums(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn column_sums(&self) -> Vec<usize> {
        let mut c = vec![0; self.size()];
        for r in &self.rows {
            for &j in r {
                c[j] += 1;
            }
        }
        c
    }

    pub fn to_dense<T: ExactRing>(&self) -> DenseMatrix<T> {
        let n = self.size();
        let mut m = DenseMatrix::zeros(n, n);
        for (i, r) in self.rows.iter().enumerate() {
            for &j in r {
                m[(i, j)] = T::one();
            }
        }
        m
    }
}

pub fn build_walk_matrix(group: &GroupSpec, h: &GroupSubset) -> WalkMatrix {
    WalkMatrix::new(group, h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MateAlgorithm {
    Dense,
    Sparse,
}

impl fmt::Display for MateAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MateAlgorithm::Dense => "dense",
            MateAlgorithm::Sparse => "sparse",
        })
    }
}

impl std::str::FromStr for MateAlgorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dense" => Ok(MateAlgorithm::Dense),
            "sparse" => Ok(MateAlgorithm::Sparse),
            _ => Err(Error::parse(s, "expected `dense` or `sparse`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MateTag {
    Found,
    /// `X` is not invertible (inconsistent or underdetermined system).
    Singular,
    /// The solution has an entry outside `{0, 1}`.
    NonBinary,
    /// 0-1 solution of the wrong weight.
    WrongWeight,
}

#[derive(Debug, Clone)]
pub struct MateResult {
    pub tag: MateTag,
    pub mate: Option<GroupSubset>,
    pub solver: MateAlgorithm,
    /// Moduli tried by the sparse route.
    pub primes_tried: usize,
    /// The sparse route fell back to rational elimination.
    pub exact_fallback: bool,
}

impl MateResult {
    fn new(tag: MateTag, mate: Option<GroupSubset>, solver: MateAlgorithm) -> Self {
        MateResult {
            tag,
            mate,
            solver,
            primes_tried: 0,
            exact_fallback: false,
        }
    }

    pub fn is_found(&self) -> bool {
        self.tag == MateTag::Found
    }

    /// Same tag and same mate, whichever route produced them.
    pub fn same_outcome(&self, other: &MateResult) -> bool {
        self.tag == other.tag && self.mate == other.mate
    }
}

/// An index-`lambda` near-factorization `(A, B)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearFactorization {
    pub group: GroupSpec,
    pub a: GroupSubset,
    pub b: GroupSubset,
    pub lambda: u64,
}

impl NearFactorization {
    /// Checked constructor.
    pub fn new(group: &GroupSpec, a: GroupSubset, b: GroupSubset, lambda: u64) -> Result<Self> {
        if !verify(group, &a, &b, lambda) {
            return Err(Error::param(format!(
                "{a} + {b} is not {lambda}(G \\ {{0}}) in {}",
                group.literal()
            )));
        }
        Ok(NearFactorization {
            group: group.clone(),
            a,
            b,
            lambda,
        })
    }

    pub fn swapped(&self) -> Self {
        NearFactorization {
            group: self.group.clone(),
            a: self.b.clone(),
            b: self.a.clone(),
            lambda: self.lambda,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.a.len() == 1 || self.b.len() == 1
    }
}

/// True iff the multiset `{a + b}` hits every nonzero element exactly
/// `lambda` times and never hits 0.
pub fn verify(group: &GroupSpec, a: &GroupSubset, b: &GroupSubset, lambda: u64) -> bool {
    let n = group.order();
    if lambda == 0 || (a.len() as u64) * (b.len() as u64) != lambda * (n as u64 - 1) {
        return false;
    }
    let bs = b.to_vec();
    let mut counts = vec![0u64; n];
    for x in a.indices() {
        for &y in &bs {
            let z = group.add_idx(x, y);
            if z == 0 || counts[z] == lambda {
                return false;
            }
            counts[z] += 1;
        }
    }
    counts[1..].iter().all(|&c| c == lambda)
}

/// True iff `M(A) M(B) = lambda (J - I)` as integer matrices, checked row by
/// row from the walk matrices.
pub fn matrix_product_check(group: &GroupSpec, a: &GroupSubset, b: &GroupSubset, lambda: u64) -> bool {
    let n = group.order();
    let ma = WalkMatrix::new(group, a);
    let mb = WalkMatrix::new(group, b);
    let mut row = vec![0u64; n];
    for i in 0..n {
        row.iter_mut().for_each(|x| *x = 0);
        for &k in ma.row(i) {
            for &j in mb.row(k) {
                row[j] += 1;
            }
        }
        for (j, &v) in row.iter().enumerate() {
            let want = if i == j { 0 } else { lambda };
            if v != want {
                return false;
            }
        }
    }
    true
}

struct MateParams {
    s: usize,
}

fn check_params(group: &GroupSpec, a: &GroupSubset, lambda: u64) -> Result<MateParams> {
    let r = a.len() as u64;
    if r == 0 {
        return Err(Error::param("A must be nonempty"));
    }
    if lambda == 0 {
        return Err(Error::param("lambda must be positive"));
    }
    if a.group() != group {
        return Err(Error::param(format!(
            "set belongs to {}, not {}",
            a.group().literal(),
            group.literal()
        )));
    }
    let total = lambda * (group.order() as u64 - 1);
    if !total.is_multiple_of(r) {
        return Err(Error::param(format!(
            "|A| = {r} does not divide lambda(n-1) = {total}"
        )));
    }
    Ok(MateParams {
        s: (total / r) as usize,
    })
}

/// `X^{-1}` over the rationals, or `None` if `X = M(A)` is singular.
pub fn dense_inverse(group: &GroupSpec, a: &GroupSubset) -> Option<DenseMatrix<BigRational>> {
    let x: DenseMatrix<BigInt> = WalkMatrix::new(group, a).to_dense();
    let (adj, d) = fraction_free_inverse(&x)?;
    Some(adj.map(|v| BigRational::new(v.clone(), d.clone())))
}

/// Mate via an explicit exact inverse of `X = M(A)`.
pub fn compute_mate_dense(group: &GroupSpec, a: &GroupSubset, lambda: u64) -> Result<MateResult> {
    let MateParams { s } = check_params(group, a, lambda)?;
    let n = group.order();
    let r = BigInt::from(a.len());
    let lam = BigInt::from(lambda);

    let x: DenseMatrix<BigInt> = WalkMatrix::new(group, a).to_dense();
    let Some((adj, d)) = fraction_free_inverse(&x) else {
        return Ok(MateResult::new(MateTag::Singular, None, MateAlgorithm::Dense));
    };
    // X^{-1} = adj / d, so Y_ij = (lambda d - r lambda adj_ij) / (r d)
    let one = &r * &d;
    let base = &lam * &d;
    let scaled = &r * &lam;
    let mut b = GroupSubset::empty(group);
    for i in 0..n {
        for j in 0..n {
            let num = &base - &scaled * &adj[(i, j)];
            if num == one {
                if i == 0 {
                    b.insert(j);
                }
            } else if !num.is_zero() {
                return Ok(MateResult::new(MateTag::NonBinary, None, MateAlgorithm::Dense));
            }
        }
    }
    if b.len() != s {
        return Ok(MateResult::new(MateTag::WrongWeight, None, MateAlgorithm::Dense));
    }
    if !verify(group, a, &b, lambda) {
        return Err(Error::Internal(format!(
            "dense route produced a 0-1 matrix Y but {a} + {b} does not verify"
        )));
    }
    Ok(MateResult::new(MateTag::Found, Some(b), MateAlgorithm::Dense))
}

/// Solution of `X z = lambda (0,1,...,1)^T` reduced to a 0-1 test.
enum Reduced {
    NotUnique,
    NonBinary,
    Binary(Vec<bool>),
}

fn modular_solve<const P: u64>(x: &WalkMatrix, lambda: u64) -> Reduced {
    let n = x.size();
    let one = Fp::<P>::new(1);
    let rows: Vec<Vec<(usize, Fp<P>)>> = (0..n)
        .map(|i| x.row(i).iter().map(|&j| (j, one)).collect())
        .collect();
    let lam = Fp::<P>::new(lambda);
    let rhs: Vec<Fp<P>> = (0..n).map(|i| if i == 0 { Fp::new(0) } else { lam }).collect();
    match solve_sparse(n, &rows, &rhs) {
        Solution::Unique(z) => {
            if z.iter().all(|v| v.value() <= 1) {
                Reduced::Binary(z.iter().map(|v| v.value() == 1).collect())
            } else {
                Reduced::NonBinary
            }
        }
        _ => Reduced::NotUnique,
    }
}

fn rational_solve(x: &WalkMatrix, lambda: u64) -> Reduced {
    let n = x.size();
    let rows: Vec<Vec<(usize, BigRational)>> = (0..n)
        .map(|i| x.row(i).iter().map(|&j| (j, BigRational::one())).collect())
        .collect();
    let lam = BigRational::from_i64(lambda as i64);
    let rhs: Vec<BigRational> = (0..n)
        .map(|i| if i == 0 { BigRational::zero() } else { lam.clone() })
        .collect();
    match solve_sparse(n, &rows, &rhs) {
        Solution::Unique(z) => {
            if z.iter().all(|v| v.is_zero() || v.is_one()) {
                Reduced::Binary(z.iter().map(|v| v.is_one()).collect())
            } else {
                Reduced::NonBinary
            }
        }
        _ => Reduced::NotUnique,
    }
}

type ModularSolver = fn(&WalkMatrix, u64) -> Reduced;

const MODULAR_SOLVERS: [ModularSolver; 4] = [
    modular_solve::<{ MODULI[0] }>,
    modular_solve::<{ MODULI[1] }>,
    modular_solve::<{ MODULI[2] }>,
    modular_solve::<{ MODULI[3] }>,
];

/// Mate via one sparse linear solve.
///
/// The system is solved modulo the primes in [`MODULI`]; a unique modular
/// solution decides the outcome because any 0-1 candidate is confirmed by
/// exact verification. If every prime reports a singular system, rational
/// elimination decides whether `X` is truly singular.
pub fn compute_mate_sparse(group: &GroupSpec, a: &GroupSubset, lambda: u64) -> Result<MateResult> {
    let MateParams { s } = check_params(group, a, lambda)?;
    let x = WalkMatrix::new(group, a);

    let mut primes_tried = 0;
    let mut outcome = Reduced::NotUnique;
    for solve in MODULAR_SOLVERS {
        primes_tried += 1;
        outcome = solve(&x, lambda);
        if !matches!(outcome, Reduced::NotUnique) {
            break;
        }
    }
    let exact_fallback = matches!(outcome, Reduced::NotUnique);
    if exact_fallback {
        outcome = rational_solve(&x, lambda);
    }

    let finish = |tag, mate| MateResult {
        tag,
        mate,
        solver: MateAlgorithm::Sparse,
        primes_tried,
        exact_fallback,
    };
    let z = match outcome {
        Reduced::NotUnique => return Ok(finish(MateTag::Singular, None)),
        Reduced::NonBinary => return Ok(finish(MateTag::NonBinary, None)),
        Reduced::Binary(z) => z,
    };
    if z.iter().filter(|&&v| v).count() != s {
        return Ok(finish(MateTag::WrongWeight, None));
    }
    let b = GroupSubset::from_indices(
        group,
        z.iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(|(g, _)| group.neg_idx(g)),
    )?;
    if verify(group, a, &b, lambda) {
        return Ok(finish(MateTag::Found, Some(b)));
    }
    if exact_fallback {
        return Err(Error::Internal(format!(
            "exact 0-1 solution gave {b}, which is not a mate of {a}"
        )));
    }
    // A unique modular solution that is 0-1 but fails verification means the
    // rational solution is not 0-1: it would otherwise reduce to this vector.
    Ok(finish(MateTag::NonBinary, None))
}

pub fn compute_mate(
    group: &GroupSpec,
    a: &GroupSubset,
    lambda: u64,
    algorithm: MateAlgorithm,
) -> Result<MateResult> {
    match algorithm {
        MateAlgorithm::Dense => compute_mate_dense(group, a, lambda),
        MateAlgorithm::Sparse => compute_mate_sparse(group, a, lambda),
    }
}
