//! Known index-2 near-factorizations of noncyclic groups of odd order.

use anyhow::{Context, Result};
use nearfact::{verify, GroupSpec, GroupSubset, NearFactorization};
use serde::Serialize;

pub struct Row {
    pub group: &'static str,
    pub r: u64,
    pub s: u64,
    pub a: &'static str,
    pub b: &'static str,
}

pub const LAMBDA: u64 = 2;

pub const ROWS: [Row; 9] = [
    Row {
        group: "Z3xZ3",
        r: 4,
        s: 4,
        a: "(0,1),(1,0),(0,2),(2,0)",
        b: "(1,1),(1,2),(2,1),(2,2)",
    },
    Row {
        group: "Z5xZ5",
        r: 4,
        s: 12,
        a: "(0,1),(1,0),(0,4),(4,0)",
        b: "(1,1),(1,2),(1,3),(1,4),(2,1),(2,4),(3,1),(3,4),(4,1),(4,2),(4,3),(4,4)",
    },
    Row {
        group: "Z3xZ9",
        r: 4,
        s: 13,
        a: "(0,1),(1,1),(0,8),(2,8)",
        b: "(0,0),(0,2),(0,7),(1,3),(1,5),(1,6),(1,7),(1,8),(2,1),(2,2),(2,3),(2,4),(2,6)",
    },
    Row {
        group: "Z5xZ3xZ3",
        r: 4,
        s: 22,
        a: "(1,0,1),(1,1,0),(4,0,2),(4,2,0)",
        b: "(0,1,1),(0,1,2),(0,2,1),(0,2,2),(1,0,0),(1,0,2),(1,2,0),(1,2,2),(2,0,1),(2,1,0),(2,1,1),\
            (2,1,2),(2,2,1),(3,0,2),(3,1,2),(3,2,0),(3,2,1),(3,2,2),(4,0,0),(4,0,1),(4,1,0),(4,1,1)",
    },
    Row {
        group: "Z7xZ7",
        r: 4,
        s: 24,
        a: "(0,1),(1,0),(0,6),(6,0)",
        b: "(1,1),(1,2),(1,3),(1,4),(1,5),(1,6),(2,1),(2,6),(3,1),(3,3),(3,4),(3,6),(4,1),(4,3),(4,4),\
            (4,6),(5,1),(5,6),(6,1),(6,2),(6,3),(6,4),(6,5),(6,6)",
    },
    Row {
        group: "Z7xZ3xZ3",
        r: 4,
        s: 31,
        a: "(1,0,1),(1,1,0),(6,0,2),(6,2,0)",
        b: "(0,0,0),(0,0,1),(0,0,2),(0,1,0),(0,2,0),(1,1,1),(1,1,2),(1,2,1),(1,2,2),(2,0,0),(2,0,2),\
            (2,2,0),(2,2,2),(3,0,1),(3,1,0),(3,1,1),(3,1,2),(3,2,1),(4,0,2),(4,1,2),(4,2,0),(4,2,1),\
            (4,2,2),(5,0,0),(5,0,1),(5,1,0),(5,1,1),(6,1,1),(6,1,2),(6,2,1),(6,2,2)",
    },
    Row {
        group: "Z5xZ5xZ3",
        r: 4,
        s: 37,
        a: "(0,1,1),(1,0,1),(0,4,2),(4,0,2)",
        b: "(0,0,0),(0,1,2),(0,2,2),(0,3,1),(0,4,1),(1,0,2),(1,1,0),(1,1,1),(1,2,0),(1,2,2),(1,3,0),\
            (1,3,2),(1,4,1),(1,4,2),(2,0,2),(2,1,0),(2,1,2),(2,2,1),(2,3,0),(2,4,0),(2,4,1),(3,0,1),\
            (3,1,0),(3,1,2),(3,2,0),(3,3,2),(3,4,0),(3,4,1),(4,0,1),(4,1,1),(4,1,2),(4,2,0),(4,2,1),\
            (4,3,0),(4,3,1),(4,4,0),(4,4,2)",
    },
    Row {
        group: "Z9xZ9",
        r: 4,
        s: 40,
        a: "(0,1),(1,0),(0,8),(8,0)",
        b: "(1,1),(1,2),(1,3),(1,4),(1,5),(1,6),(1,7),(1,8),(2,1),(2,8),(3,1),(3,3),(3,4),(3,5),(3,6),\
            (3,8),(4,1),(4,3),(4,6),(4,8),(5,1),(5,3),(5,6),(5,8),(6,1),(6,3),(6,4),(6,5),(6,6),(6,8),\
            (7,1),(7,8),(8,1),(8,2),(8,3),(8,4),(8,5),(8,6),(8,7),(8,8)",
    },
    Row {
        group: "Z3xZ27",
        r: 4,
        s: 40,
        a: "(0,1),(1,1),(0,26),(2,26)",
        b: "(0,4),(0,6),(0,7),(0,8),(0,9),(0,11),(0,16),(0,18),(0,19),(0,20),(0,21),(0,23),(1,0),(1,2),\
            (1,3),(1,4),(1,5),(1,7),(1,12),(1,14),(1,15),(1,16),(1,17),(1,19),(1,24),(1,26),(2,0),(2,1),\
            (2,3),(2,8),(2,10),(2,11),(2,12),(2,13),(2,15),(2,20),(2,22),(2,23),(2,24),(2,25)",
    },
];

impl Row {
    pub fn parse(&self) -> Result<(GroupSpec, GroupSubset, GroupSubset)> {
        let g: GroupSpec = self.group.parse()?;
        let a = GroupSubset::parse(&g, self.a).with_context(|| format!("{} A", self.group))?;
        let b = GroupSubset::parse(&g, self.b).with_context(|| format!("{} B", self.group))?;
        Ok((g, a, b))
    }

    pub fn near_factorization(&self) -> Result<NearFactorization> {
        let (g, a, b) = self.parse()?;
        Ok(NearFactorization::new(&g, a, b, LAMBDA)?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RowCheck {
    pub group: String,
    pub r: u64,
    pub s: u64,
    pub sizes_match: bool,
    pub verified: bool,
}

impl RowCheck {
    pub fn ok(&self) -> bool {
        self.sizes_match && self.verified
    }
}

pub fn check_all() -> Result<Vec<RowCheck>> {
    ROWS.iter()
        .map(|row| {
            let (g, a, b) = row.parse()?;
            Ok(RowCheck {
                group: row.group.to_string(),
                r: row.r,
                s: row.s,
                sizes_match: a.len() as u64 == row.r && b.len() as u64 == row.s,
                verified: verify(&g, &a, &b, LAMBDA),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_rows_verify() {
        let checks = check_all().unwrap();
        assert_eq!(checks.len(), 9);
        for c in checks {
            assert!(c.ok(), "{c:?}");
        }
    }
}
