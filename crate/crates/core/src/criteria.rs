//! Nonexistence criteria for `(r, s)`-near-factorizations (`lambda = 1`).
//!
//! Each criterion is a pure predicate over `(G, r, s)`. A `RuledOut`
//! verdict means no near-factorization with these parameters exists in
//! `G`; `Inconclusive` means the criterion says nothing. Trivial splits
//! (`min(r, s) = 1`) always exist and are never ruled out.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::group::{factorize, is_prime, GroupSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CriterionId {
    SmallA,
    ThreePPlusOne,
    ExponentQuotient,
    SpecialForm,
    QuotientCongruence,
    Pecher,
}

impl CriterionId {
    pub const ALL: [CriterionId; 6] = [
        CriterionId::SmallA,
        CriterionId::ThreePPlusOne,
        CriterionId::ExponentQuotient,
        CriterionId::SpecialForm,
        CriterionId::QuotientCongruence,
        CriterionId::Pecher,
    ];
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    RuledOut,
    Inconclusive,
}

/// Data backing a verdict, enough to recompute it by hand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    None,
    /// `min(r, s)`.
    SmallSide { min: u64 },
    /// `n = 3p + 1`.
    ThreePPlusOne { p: u64 },
    /// `|G / dG|` for every `d`, and the `d` used.
    Quotient { orders: Vec<(u64, u64)>, d: u64, order: u64 },
    /// One of the listed shapes, e.g. `(Z3)^m x (Z2)^n`.
    Shape(String),
    /// `(Z_p)^m` is a quotient and the congruence fails for `side`.
    Congruence { p: u64, m: u32, side: u64 },
    /// `side mod 8` is 3 or 5 and the 2-part allows `Z_2m x Z_4n`.
    Pecher { side: u64, residue: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub criterion: CriterionId,
    pub outcome: Outcome,
    pub details: String,
    pub witness: Witness,
}

impl CriterionVerdict {
    fn inconclusive(criterion: CriterionId, details: impl Into<String>) -> Self {
        CriterionVerdict {
            criterion,
            outcome: Outcome::Inconclusive,
            details: details.into(),
            witness: Witness::None,
        }
    }

    fn ruled_out(criterion: CriterionId, details: String, witness: Witness) -> Self {
        CriterionVerdict {
            criterion,
            outcome: Outcome::RuledOut,
            details,
            witness,
        }
    }

    pub fn is_ruled_out(&self) -> bool {
        self.outcome == Outcome::RuledOut
    }
}

impl fmt::Display for CriterionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = match self.outcome {
            Outcome::RuledOut => "ruled-out",
            Outcome::Inconclusive => "inconclusive",
        };
        write!(f, "{:<18} {:<12} {}", self.criterion.to_string(), o, self.details)
    }
}

fn trivial(r: u64, s: u64) -> bool {
    r.min(s) <= 1
}

/// Noncyclic groups have no near-factorization with `min(r, s) <= 4`.
pub fn small_a_criterion(g: &GroupSpec, r: u64, s: u64) -> CriterionVerdict {
    let id = CriterionId::SmallA;
    if g.is_cyclic() {
        return CriterionVerdict::inconclusive(id, "group is cyclic");
    }
    if trivial(r, s) {
        return CriterionVerdict::inconclusive(id, "trivial split");
    }
    let min = r.min(s);
    if min <= 4 {
        CriterionVerdict::ruled_out(
            id,
            format!("min(r,s) = {min} <= 4 in a noncyclic group"),
            Witness::SmallSide { min },
        )
    } else {
        CriterionVerdict::inconclusive(id, format!("min(r,s) = {min} > 4"))
    }
}

/// Noncyclic groups of order `3p + 1`, `p` prime, have only trivial
/// near-factorizations.
pub fn three_p_plus_one(g: &GroupSpec, r: u64, s: u64) -> CriterionVerdict {
    let id = CriterionId::ThreePPlusOne;
    let n = g.order() as u64;
    if g.is_cyclic() {
        return CriterionVerdict::inconclusive(id, "group is cyclic");
    }
    if trivial(r, s) {
        return CriterionVerdict::inconclusive(id, "trivial split");
    }
    if n >= 4 && (n - 1).is_multiple_of(3) && is_prime((n - 1) / 3) {
        let p = (n - 1) / 3;
        CriterionVerdict::ruled_out(id, format!("n = 3*{p} + 1 with {p} prime"), Witness::ThreePPlusOne { p })
    } else {
        CriterionVerdict::inconclusive(id, format!("n = {n} is not 3p + 1 for a prime p"))
    }
}

/// `min(r, s) >= |H| - 1` for every quotient `H = G / dG`, `d` in
/// `{2, 3, 4, 6}`. The bound is stated for `|A|`; applying it to `|B|`
/// as well uses `(A, B) -> (B, A)`.
pub fn exponent_quotient_bound(g: &GroupSpec, r: u64, s: u64) -> CriterionVerdict {
    let id = CriterionId::ExponentQuotient;
    let orders: Vec<(u64, u64)> = [2, 3, 4, 6]
        .iter()
        .map(|&d| (d, g.quotient_order_exponent_d(d).expect("supported d")))
        .collect();
    if trivial(r, s) {
        return CriterionVerdict::inconclusive(id, "trivial split");
    }
    let min = r.min(s);
    let table = orders
        .iter()
        .map(|(d, h)| format!("|G/{d}G|={h}"))
        .collect::<Vec<_>>()
        .join(" ");
    let best = orders.iter().copied().max_by_key(|&(d, h)| (h, d)).expect("nonempty");
    if min + 1 < best.1 {
        CriterionVerdict::ruled_out(
            id,
            format!(
                "min(r,s) = {min} < |H| - 1 = {} for d = {}, bound applied to both sides ({table})",
                best.1 - 1,
                best.0
            ),
            Witness::Quotient { orders, d: best.0, order: best.1 },
        )
    } else {
        CriterionVerdict {
            witness: Witness::Quotient { orders, d: best.0, order: best.1 },
            ..CriterionVerdict::inconclusive(id, format!("min(r,s) = {min} >= |H| - 1 for all d ({table})"))
        }
    }
}

/// The group shapes with no nontrivial near-factorization:
/// `(Z2)^n, (Z3)^n, (Z4)^n, (Z3)^m x (Z2)^n, (Z2)^n x (Z4)^m`.
pub fn special_form(g: &GroupSpec) -> CriterionVerdict {
    let id = CriterionId::SpecialForm;
    let mut orders: Vec<u64> = g.primary().iter().map(|c| c.order).collect();
    orders.sort_unstable();
    orders.dedup();
    let shape = match orders.as_slice() {
        [2] => Some("(Z2)^n"),
        [3] => Some("(Z3)^n"),
        [4] => Some("(Z4)^n"),
        [2, 3] => Some("(Z3)^m x (Z2)^n"),
        [2, 4] => Some("(Z2)^n x (Z4)^m"),
        _ => None,
    };
    match shape {
        Some(shape) => CriterionVerdict::ruled_out(
            id,
            format!("{} has the form {shape}", g.canonical()),
            Witness::Shape(shape.to_string()),
        ),
        None => CriterionVerdict::inconclusive(id, format!("{} has none of the listed forms", g.canonical())),
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// For every elementary quotient `(Z_p)^m`: `r^(p-1) = s^(p-1) = 1 mod p^m`
/// for odd `p`, and `r = -s = +-1 mod 2^m` for `p = 2`.
pub fn quotient_congruence(g: &GroupSpec, r: u64, s: u64) -> CriterionVerdict {
    let id = CriterionId::QuotientCongruence;
    if trivial(r, s) {
        return CriterionVerdict::inconclusive(id, "trivial split");
    }
    let mut checked = Vec::new();
    for (p, _) in factorize(g.order() as u64) {
        let m = g.elementary_p_quotient_rank(p);
        if m == 0 {
            continue;
        }
        let Some(q) = p.checked_pow(m) else { continue };
        checked.push(format!("(Z{p})^{m}"));
        if p == 2 {
            let rr = r % q;
            let ok = (rr == 1 % q || rr == q - 1) && (r + s).is_multiple_of(q);
            if !ok {
                return CriterionVerdict::ruled_out(
                    id,
                    format!("(Z2)^{m} is a quotient but r = {r}, s = {s} fail r = -s = +-1 mod {q}"),
                    Witness::Congruence { p, m, side: r },
                );
            }
        } else {
            for side in [r, s] {
                if pow_mod(side, p - 1, q) != 1 % q {
                    return CriterionVerdict::ruled_out(
                        id,
                        format!("(Z{p})^{m} is a quotient but {side}^{} != 1 mod {q}", p - 1),
                        Witness::Congruence { p, m, side },
                    );
                }
            }
        }
    }
    if checked.is_empty() {
        CriterionVerdict::inconclusive(id, "no elementary abelian quotient")
    } else {
        CriterionVerdict::inconclusive(id, format!("congruences hold for {}", checked.join(", ")))
    }
}

/// `G = Z_2m x Z_4n x G'` has no near-factorization with a side `= +-3 mod 8`.
/// The structural condition holds iff the 2-part has at least two cyclic
/// components and the largest has order at least 4.
pub fn pecher_criterion(g: &GroupSpec, r: u64, s: u64) -> CriterionVerdict {
    let id = CriterionId::Pecher;
    let e = g.p_exponents(2);
    if e.len() < 2 || e.iter().max().copied().unwrap_or(0) < 2 {
        return CriterionVerdict::inconclusive(id, "2-part is not Z_2m x Z_4n x G'");
    }
    if trivial(r, s) {
        return CriterionVerdict::inconclusive(id, "trivial split");
    }
    for side in [r, s] {
        let residue = side % 8;
        if residue == 3 || residue == 5 {
            return CriterionVerdict::ruled_out(
                id,
                format!("{side} = {residue} mod 8 and G = Z_2m x Z_4n x G'"),
                Witness::Pecher { side, residue },
            );
        }
    }
    CriterionVerdict::inconclusive(id, format!("r mod 8 = {}, s mod 8 = {}", r % 8, s % 8))
}

/// Runs every criterion, in [`CriterionId::ALL`] order. Inputs with
/// `lambda > 1` or a trivial split get all-inconclusive verdicts.
pub fn evaluate_all(g: &GroupSpec, r: u64, s: u64, lambda: u64) -> Vec<CriterionVerdict> {
    if lambda != 1 {
        return CriterionId::ALL
            .iter()
            .map(|&id| CriterionVerdict::inconclusive(id, format!("not applicable for lambda = {lambda}")))
            .collect();
    }
    if trivial(r, s) {
        return CriterionId::ALL
            .iter()
            .map(|&id| CriterionVerdict::inconclusive(id, "trivial split"))
            .collect();
    }
    CriterionId::ALL
        .iter()
        .map(|&id| match id {
            CriterionId::SmallA => small_a_criterion(g, r, s),
            CriterionId::ThreePPlusOne => three_p_plus_one(g, r, s),
            CriterionId::ExponentQuotient => exponent_quotient_bound(g, r, s),
            CriterionId::SpecialForm => special_form(g),
            CriterionId::QuotientCongruence => quotient_congruence(g, r, s),
            CriterionId::Pecher => pecher_criterion(g, r, s),
        })
        .collect()
}

/// The first verdict that rules the task out, if any.
pub fn first_ruled_out(verdicts: &[CriterionVerdict]) -> Option<&CriterionVerdict> {
    verdicts.iter().find(|v| v.is_ruled_out())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn quotient_order(v: &CriterionVerdict, d: u64) -> u64 {
        match &v.witness {
            Witness::Quotient { orders, .. } => orders.iter().find(|o| o.0 == d).unwrap().1,
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn small_a() {
        assert!(small_a_criterion(&g("Z5xZ2xZ2"), 3, 19).is_ruled_out());
        assert!(!small_a_criterion(&g("Z5xZ2xZ2"), 1, 19).is_ruled_out());
        assert!(!small_a_criterion(&g("Z12xZ12"), 11, 13).is_ruled_out());
        assert!(!small_a_criterion(&g("Z16"), 3, 5).is_ruled_out());
    }

    #[test]
    fn three_p_plus_one_examples() {
        // 3*19 + 1 = 58 has no noncyclic group; 3*5 + 1 = 16 does
        assert!(three_p_plus_one(&g("Z4xZ4"), 3, 5).is_ruled_out());
        assert!(!three_p_plus_one(&g("Z16"), 3, 5).is_ruled_out());
        assert!(!three_p_plus_one(&g("Z3xZ3"), 2, 4).is_ruled_out());
    }

    #[test]
    fn exponent_quotient_examples() {
        let v = exponent_quotient_bound(&g("Z3xZ3xZ2xZ2xZ2xZ2"), 11, 13);
        assert!(v.is_ruled_out());
        assert_eq!(quotient_order(&v, 6), 144);
        let v = exponent_quotient_bound(&g("Z9xZ2xZ2xZ4"), 11, 13);
        assert!(v.is_ruled_out());
        assert_eq!(quotient_order(&v, 6), 24);
        let v = exponent_quotient_bound(&g("Z7"), 2, 3);
        assert!(!v.is_ruled_out());
        assert_eq!(quotient_order(&v, 2), 1);
    }

    #[test]
    fn special_forms() {
        assert!(special_form(&g("Z3xZ3")).is_ruled_out());
        assert!(special_form(&g("Z2xZ2xZ2xZ4")).is_ruled_out());
        assert!(special_form(&g("Z6xZ2")).is_ruled_out());
        assert!(!special_form(&g("Z9")).is_ruled_out());
        assert!(!special_form(&g("Z4xZ8")).is_ruled_out());
        assert!(!special_form(&g("Z3xZ4")).is_ruled_out());
    }

    #[test]
    fn congruences() {
        let v = quotient_congruence(&g("Z5xZ5"), 4, 6);
        assert!(v.is_ruled_out());
        assert_eq!(v.witness, Witness::Congruence { p: 5, m: 2, side: 4 });
        assert!(!quotient_congruence(&g("Z3xZ2xZ2"), 11, 1).is_ruled_out());
        assert!(!quotient_congruence(&g("Z7"), 2, 3).is_ruled_out());
        // p = 2, m = 2: 7 = -1 and -9 = -1 mod 4
        assert!(!quotient_congruence(&g("Z2xZ32"), 7, 9).is_ruled_out());
        let v = quotient_congruence(&g("Z6xZ6"), 5, 7);
        assert_eq!(v.witness, Witness::Congruence { p: 3, m: 2, side: 5 });
    }

    #[test]
    fn pecher_examples() {
        assert!(pecher_criterion(&g("Z9xZ2xZ8"), 11, 13).is_ruled_out());
        assert!(pecher_criterion(&g("Z9xZ4xZ4"), 11, 13).is_ruled_out());
        assert!(!pecher_criterion(&g("Z9xZ2xZ2xZ2xZ2"), 11, 13).is_ruled_out());
        assert!(!pecher_criterion(&g("Z9xZ2xZ8"), 7, 9).is_ruled_out());
    }

    #[test]
    fn evaluate_all_cases() {
        let v = evaluate_all(&g("Z23xZ2xZ2"), 13, 7, 1);
        assert!(v.iter().all(|v| !v.is_ruled_out()), "{v:#?}");
        assert!(evaluate_all(&g("Z199"), 9, 22, 1).iter().all(|v| !v.is_ruled_out()));
        assert!(evaluate_all(&g("Z3xZ3"), 4, 4, 2).iter().all(|v| !v.is_ruled_out()));
        assert_eq!(evaluate_all(&g("Z7"), 2, 3, 1).len(), 6);
    }

    #[test]
    fn pow_mod_small() {
        assert_eq!(pow_mod(4, 4, 25), 6);
        assert_eq!(pow_mod(2, 10, 1), 0);
    }
}
