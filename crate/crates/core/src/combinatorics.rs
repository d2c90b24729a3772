//! Lexicographic k-subsets of `0..n` with ranking and unranking.

/// `C(n, k)`, or `None` on `u128` overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Lexicographic rank of a strictly increasing `combo` among the
/// `combo.len()`-subsets of `0..n`.
pub fn rank(n: usize, combo: &[usize]) -> u128 {
    let k = combo.len();
    let mut r: u128 = 0;
    let mut prev = 0;
    for (i, &c) in combo.iter().enumerate() {
        for v in prev..c {
            r += binomial(n - v - 1, k - i - 1).expect("rank overflow");
        }
        prev = c + 1;
    }
    r
}

/// Inverse of [`rank`]. Returns `None` when `r >= C(n, k)`.
pub fn unrank(n: usize, k: usize, mut r: u128) -> Option<Vec<usize>> {
    if r >= binomial(n, k)? {
        return None;
    }
    let mut out = Vec::with_capacity(k);
    let mut v = 0;
    for i in 0..k {
        loop {
            let block = binomial(n - v - 1, k - i - 1)?;
            if r < block {
                break;
            }
            r -= block;
            v += 1;
        }
        out.push(v);
        v += 1;
    }
    Some(out)
}

/// Advances `combo` to its lexicographic successor within `0..n`.
/// Returns `false` (leaving `combo` unspecified) when it was the last one.
pub fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Iterator over the k-subsets of `0..n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }

    /// Starts at the combination of the given rank.
    pub fn from_rank(n: usize, k: usize, r: u128) -> Self {
        Combinations {
            n,
            current: unrank(n, k, r),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let mut succ = cur.clone();
        if next_combination(&mut succ, self.n) {
            self.current = Some(succ);
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(4, 5), Some(0));
        assert_eq!(binomial(0, 0), Some(1));
        assert_eq!(binomial(66, 33), Some(7_219_428_434_016_265_740));
        assert!(binomial(400, 200).is_none());
    }

    #[test]
    fn iteration_order() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    proptest! {
        #[test]
        fn rank_roundtrip(n in 0usize..14, k in 0usize..8, seed in any::<u64>()) {
            let total = binomial(n, k).unwrap();
            prop_assume!(total > 0);
            let r = seed as u128 % total;
            let c = unrank(n, k, r).unwrap();
            prop_assert_eq!(rank(n, &c), r);
            prop_assert_eq!(Combinations::from_rank(n, k, r).count() as u128, total - r);
        }
    }
}
