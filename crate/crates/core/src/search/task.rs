use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Every candidate of every profile.
    Plain,
    /// Involution subsets up to automorphisms of the 2-part, first
    /// symmetric pair up to units acting on the odd part.
    OrbitReduced,
    /// Cell-count analysis for `Z_t x (Z_2)^2`.
    Coset2x2,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Plain => "plain",
            Strategy::OrbitReduced => "orbit-reduced",
            Strategy::Coset2x2 => "coset-2x2",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plain" => Ok(Strategy::Plain),
            "orbit-reduced" | "orbit" => Ok(Strategy::OrbitReduced),
            "coset-2x2" | "coset" => Ok(Strategy::Coset2x2),
            other => Err(Error::parse(other, "expected plain, orbit-reduced or coset-2x2")),
        }
    }
}

/// Position of the next candidate in an enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cursor {
    pub profile_index: usize,
    pub involution_rank: u64,
    pub pair_rank: u64,
}

/// A search for `(r, s, lambda)`-near-factorizations of `group`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTask {
    pub group: GroupSpec,
    pub r: u64,
    pub s: u64,
    pub lambda: u64,
    pub strategy: Strategy,
    pub assume_symmetric: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<Cursor>,
}

impl SearchTask {
    /// `assume_symmetric` defaults to `lambda == 1`.
    pub fn new(group: &GroupSpec, r: u64, s: u64, lambda: u64, strategy: Strategy) -> Result<Self> {
        let task = SearchTask {
            group: group.clone(),
            r,
            s,
            lambda,
            strategy,
            assume_symmetric: lambda == 1,
            checkpoint: None,
        };
        task.validate()?;
        Ok(task)
    }

    pub fn with_symmetric(mut self, assume_symmetric: bool) -> Self {
        self.assume_symmetric = assume_symmetric;
        self
    }

    pub fn with_checkpoint(mut self, cursor: Option<Cursor>) -> Self {
        self.checkpoint = cursor;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.group.order() as u64;
        if self.r == 0 || self.s == 0 || self.lambda == 0 {
            return Err(Error::param("r, s and lambda must be positive"));
        }
        if self.r.checked_mul(self.s) != Some(self.lambda * (n - 1)) {
            return Err(Error::param(format!(
                "r*s = {}*{} != lambda*(n-1) = {}*{}",
                self.r,
                self.s,
                self.lambda,
                n - 1
            )));
        }
        if self.strategy == Strategy::Coset2x2 {
            let e = self.group.p_exponents(2);
            let odd: Vec<_> = self.group.primary().iter().filter(|c| c.prime != 2).collect();
            let mut primes: Vec<u64> = odd.iter().map(|c| c.prime).collect();
            primes.sort_unstable();
            primes.dedup();
            if e != [1, 1] || primes.len() != odd.len() || self.lambda != 1 {
                return Err(Error::param(format!(
                    "coset-2x2 needs Z_t x (Z2)^2 with t odd and lambda = 1, got {} with lambda = {}",
                    self.group.literal(),
                    self.lambda
                )));
            }
        }
        Ok(())
    }

    /// Size of the side that gets enumerated.
    pub fn enumerated_size(&self) -> u64 {
        self.r.min(self.s)
    }

    /// The task with the two sides exchanged.
    pub fn transposed(&self) -> Self {
        SearchTask {
            r: self.s,
            s: self.r,
            ..self.clone()
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.r.min(self.s) == 1
    }

    /// Short name such as `Z7 (2,3) lambda=1 plain`.
    pub fn label(&self) -> String {
        format!(
            "{} ({},{}) lambda={} {}",
            self.group.literal(),
            self.r,
            self.s,
            self.lambda,
            self.strategy
        )
    }
}

/// Number of involutions and symmetric pairs in a symmetric set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvolutionProfile {
    pub i1: usize,
    pub i2: usize,
}

impl InvolutionProfile {
    /// All profiles of a symmetric `r`-set of `group`, by increasing `i1`.
    pub fn all(group: &GroupSpec, r: usize) -> Vec<InvolutionProfile> {
        let t1 = group.involution_count();
        let t2 = (group.order() - t1) / 2;
        (0..=t1.min(r))
            .filter(|i1| (r - i1).is_multiple_of(2) && (r - i1) / 2 <= t2)
            .map(|i1| InvolutionProfile { i1, i2: (r - i1) / 2 })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles() {
        let g: GroupSpec = "Z5xZ2xZ2".parse().unwrap();
        let p = InvolutionProfile::all(&g, 3);
        assert_eq!(
            p,
            vec![InvolutionProfile { i1: 1, i2: 1 }, InvolutionProfile { i1: 3, i2: 0 }]
        );
        let z7: GroupSpec = "Z7".parse().unwrap();
        assert_eq!(InvolutionProfile::all(&z7, 2), vec![InvolutionProfile { i1: 0, i2: 1 }]);
        assert!(InvolutionProfile::all(&z7, 8).is_empty());
    }

    #[test]
    fn task_validation() {
        let g: GroupSpec = "Z23xZ2xZ2".parse().unwrap();
        assert!(SearchTask::new(&g, 13, 7, 1, Strategy::Coset2x2).is_ok());
        assert!(SearchTask::new(&g, 13, 8, 1, Strategy::Plain).is_err());
        let z7: GroupSpec = "Z7".parse().unwrap();
        assert!(SearchTask::new(&z7, 2, 3, 1, Strategy::Coset2x2).is_err());
        let t = SearchTask::new(&z7, 2, 3, 1, Strategy::Plain).unwrap();
        assert!(t.assume_symmetric);
        assert_eq!(t.transposed().r, 3);
        let g9: GroupSpec = "Z3xZ3".parse().unwrap();
        assert!(!SearchTask::new(&g9, 4, 4, 2, Strategy::Plain).unwrap().assume_symmetric);
        assert_eq!("Orbit-Reduced".parse::<Strategy>().unwrap(), Strategy::OrbitReduced);
    }
}
