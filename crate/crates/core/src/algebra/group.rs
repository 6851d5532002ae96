use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group must have at least one element")]
    Empty,
    #[error("Cayley table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table entry ({row}, {col}) = {value} is not an element index")]
    BadEntry { row: usize, col: usize, value: usize },
    #[error("expected {expected} element names, got {got}")]
    BadNames { expected: usize, got: usize },
    #[error("duplicate element name {0:?}")]
    DuplicateName(String),
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("no identity element{}", .candidate.map(|c| format!(" (element {c} is not a two-sided identity)")).unwrap_or_default())]
    NoIdentity { candidate: Option<usize> },
    #[error("element {element} has no inverse")]
    NoInverse { element: usize },
}

/// A finite group given by its Cayley table. Elements are `0..order`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    names: Vec<String>,
}

impl GroupTable {
    /// Validates a Cayley table. `table[a][b]` is the product `a * b`. If
    /// `identity` is `None` it is located; if given it is checked.
    pub fn from_table(
        table: Vec<Vec<usize>>,
        identity: Option<usize>,
        names: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::NotSquare { row, len: r.len(), expected: n });
            }
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::BadEntry { row, col, value });
            }
        }
        let names = match names {
            Some(names) => {
                if names.len() != n {
                    return Err(GroupError::BadNames { expected: n, got: names.len() });
                }
                for (k, name) in names.iter().enumerate() {
                    if names[..k].contains(name) {
                        return Err(GroupError::DuplicateName(name.clone()));
                    }
                }
                names
            }
            None => (0..n).map(|k| k.to_string()).collect(),
        };
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let mul = |a: usize, b: usize| flat[a * n + b];
        for a in 0..n {
            for b in 0..n {
                let ab = mul(a, b);
                for c in 0..n {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let is_identity = |e: usize| (0..n).all(|x| mul(e, x) == x && mul(x, e) == x);
        let identity = match identity {
            Some(e) if e < n && is_identity(e) => e,
            Some(e) => return Err(GroupError::NoIdentity { candidate: Some(e) }),
            None => (0..n)
                .find(|&e| is_identity(e))
                .ok_or(GroupError::NoIdentity { candidate: None })?,
        };
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or(GroupError::NoInverse { element: a })?;
            inverses.push(inv);
        }
        Ok(GroupTable { order: n, table: flat, identity, inverses, names })
    }

    /// The cyclic group `C_n` with elements `e, a, a^2, ...`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "a".to_string(),
                k => format!("a^{k}"),
            })
            .collect();
        Self::from_table(table, Some(0), Some(names))
    }

    /// The symmetric group on three letters, elements written as cycles.
    pub fn symmetric3() -> Self {
        // permutations of {0,1,2} as images of (0,1,2)
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let names = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        // (a * b)(x) = a(b(x))
        let table = (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| index([0, 1, 2].map(|x| perms[a][perms[b][x]])))
                    .collect()
            })
            .collect();
        Self::from_table(table, Some(0), Some(names.map(String::from).to_vec()))
            .expect("S3 table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The Cayley table as rows.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for x in 0..self.order {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order)
                .map(|g| self.mul(self.mul(g, x), self.inv(g)))
                .collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                class_of[y] = classes.len();
            }
            classes.push(class);
        }
        classes
    }
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable")
            .field("order", &self.order)
            .field("names", &self.names)
            .finish()
    }
}
