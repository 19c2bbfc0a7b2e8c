//! Table-backed finite groups. Elements are row indices of the Cayley table.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::GroupError;

/// On-disk form: `{"table": [[...], ...]}` with `table[a][b] = a·b`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiniteTable {
    pub table: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "FiniteTable", into = "FiniteTable")]
pub struct FiniteGroup {
    order: usize,
    // Row-major `order × order` products.
    table: Arc<Vec<u32>>,
    identity: u32,
    inverses: Arc<Vec<u32>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && (Arc::ptr_eq(&self.table, &other.table) || self.table == other.table)
    }
}

impl Eq for FiniteGroup {}

impl TryFrom<FiniteTable> for FiniteGroup {
    type Error = GroupError;

    fn try_from(raw: FiniteTable) -> Result<Self, GroupError> {
        FiniteGroup::from_table(raw.table)
    }
}

impl From<FiniteGroup> for FiniteTable {
    fn from(g: FiniteGroup) -> FiniteTable {
        FiniteTable { table: g.table.chunks(g.order).map(|row| row.to_vec()).collect() }
    }
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(rows: Vec<Vec<u32>>) -> Result<Self, GroupError> {
        let n = rows.len();
        let bad = |msg: String| Err(GroupError::InvalidTable(msg));
        if n == 0 {
            return bad("empty table".into());
        }
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return bad(format!("row {i} has length {} instead of {n}", rows[i].len()));
        }
        let table: Vec<u32> = rows.into_iter().flatten().collect();
        if table.iter().any(|&x| x as usize >= n) {
            return bad("entry outside 0..order".into());
        }
        let at = |a: usize, b: usize| table[a * n + b] as usize;
        let Some(identity) = (0..n).find(|&e| (0..n).all(|a| at(e, a) == a && at(a, e) == a)) else {
            return bad("no two-sided identity".into());
        };
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| at(a, b) == identity && at(b, a) == identity) {
                Some(b) => inverses.push(b as u32),
                None => return bad(format!("element {a} has no inverse")),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return bad(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})"));
                    }
                }
            }
        }
        Ok(FiniteGroup { order: n, table: Arc::new(table), identity: identity as u32, inverses: Arc::new(inverses) })
    }

    /// `ℤ/m` with element `i` the residue `i`.
    pub fn cyclic(m: usize) -> Result<Self, GroupError> {
        if m == 0 {
            return Err(GroupError::InvalidTable("cyclic group of order 0".into()));
        }
        let table = (0..m * m).map(|k| ((k / m + k % m) % m) as u32).collect();
        let inverses = (0..m).map(|a| ((m - a) % m) as u32).collect();
        Ok(FiniteGroup { order: m, table: Arc::new(table), identity: 0, inverses: Arc::new(inverses) })
    }

    pub fn trivial() -> Self {
        FiniteGroup::cyclic(1).expect("order 1")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn contains(&self, a: u32) -> bool {
        (a as usize) < self.order
    }

    pub fn multiply(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_arithmetic() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(z4.multiply(3, 2), 1);
        assert_eq!(z4.inverse(1), 3);
        assert_eq!(z4.identity(), 0);
    }

    #[test]
    fn validates_tables() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]]).is_ok());
        // Not associative: a Latin square with identity 0 that is not a group.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table(loop5), Err(GroupError::InvalidTable(_))));
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 2]]).is_err());
    }

    #[test]
    fn table_round_trip_matches_cyclic() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let json = serde_json::to_string(&z3).unwrap();
        assert_eq!(json, r#"{"table":[[0,1,2],[1,2,0],[2,0,1]]}"#);
        let back: FiniteGroup = serde_json::from_str(&json).unwrap();
        assert_eq!(back, z3);
    }
}
