//! Concrete groups with a uniform element type.
//!
//! A [`Group`] is an immutable description (finite table, `ℤ`, direct
//! product, free product, or the finitary permutation group over `ℤ^d`).
//! [`Element`] values only make sense relative to the group that produced
//! them; every operation checks membership and reports a
//! [`GroupError::WrongGroup`] when handed a foreign element.
//!
//! Group descriptions serialize as
//! `{"kind":"finite","table":[[...]]}`, `{"kind":"integers"}`,
//! `{"kind":"product","factors":[...]}`,
//! `{"kind":"free_product","left":...,"right":...}` and
//! `{"kind":"finitary","rank":d}`.

mod finitary;
mod finite;
mod free_product;
mod subset;

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use finitary::{ball, word_length, FinitaryElement, Point};
pub use finite::{FiniteGroup, FiniteTable};
pub use free_product::{product_case, reduce_pairs, reduce_word, FreeProductWord, ProductCase, Syllable};
pub use subset::FiniteSubset;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("element {element} does not belong to {group}")]
    WrongGroup { element: String, group: String },
    #[error("integer overflow in group operation")]
    Overflow,
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("malformed element: {0}")]
    Malformed(String),
    #[error("{0} is infinite")]
    NotFinite(String),
    #[error("subsets belong to different groups: {0} vs {1}")]
    OwnerMismatch(String, String),
}

/// A group handle. Cheap to clone; finite tables are shared.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Group {
    Finite(FiniteGroup),
    Integers,
    Product { factors: Vec<Group> },
    FreeProduct { left: Box<Group>, right: Box<Group> },
    Finitary { rank: usize },
}

/// An element of some [`Group`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Int(i64),
    Fin(u32),
    Tuple(Vec<Element>),
    Word(FreeProductWord),
    Finitary(FinitaryElement),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(k) => write!(f, "{k}"),
            Element::Fin(i) => write!(f, "#{i}"),
            Element::Tuple(xs) => {
                f.write_str("(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            Element::Word(w) => write!(f, "[{w}]"),
            Element::Finitary(e) => write!(f, "{e}"),
        }
    }
}

impl Group {
    pub fn integers() -> Self {
        Group::Integers
    }

    pub fn cyclic(m: usize) -> Result<Self, GroupError> {
        Ok(Group::Finite(FiniteGroup::cyclic(m)?))
    }

    pub fn trivial() -> Self {
        Group::Finite(FiniteGroup::trivial())
    }

    pub fn product(factors: Vec<Group>) -> Self {
        Group::Product { factors }
    }

    pub fn free_product(left: Group, right: Group) -> Self {
        Group::FreeProduct { left: Box::new(left), right: Box::new(right) }
    }

    pub fn finitary(rank: usize) -> Self {
        Group::Finitary { rank }
    }

    /// Short human-readable name used in messages.
    pub fn name(&self) -> String {
        match self {
            Group::Finite(g) => format!("finite group of order {}", g.order()),
            Group::Integers => "Z".into(),
            Group::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(|g| g.name()).collect();
                format!("({})", parts.join(" x "))
            }
            Group::FreeProduct { left, right } => format!("({} * {})", left.name(), right.name()),
            Group::Finitary { rank } => format!("finitary permutations of Z^{rank}"),
        }
    }

    fn wrong(&self, e: &Element) -> GroupError {
        GroupError::WrongGroup { element: e.to_string(), group: self.name() }
    }

    pub fn identity(&self) -> Element {
        match self {
            Group::Finite(g) => Element::Fin(g.identity()),
            Group::Integers => Element::Int(0),
            Group::Product { factors } => Element::Tuple(factors.iter().map(Group::identity).collect()),
            Group::FreeProduct { left, right } => Element::Word(FreeProductWord::identity(left, right)),
            Group::Finitary { rank } => Element::Finitary(FinitaryElement::identity(*rank)),
        }
    }

    pub fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (Group::Finite(g), Element::Fin(i)) => g.contains(*i),
            (Group::Integers, Element::Int(_)) => true,
            (Group::Product { factors }, Element::Tuple(xs)) => {
                factors.len() == xs.len() && factors.iter().zip(xs).all(|(g, x)| g.contains(x))
            }
            (Group::FreeProduct { left, right }, Element::Word(w)) => w.is_normal(left, right),
            (Group::Finitary { rank }, Element::Finitary(x)) => x.rank() == *rank,
            _ => false,
        }
    }

    pub fn check(&self, e: &Element) -> Result<(), GroupError> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(self.wrong(e))
        }
    }

    pub fn is_identity(&self, e: &Element) -> bool {
        *e == self.identity()
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        self.check(a)?;
        self.check(b)?;
        self.multiply_unchecked(a, b)
    }

    fn multiply_unchecked(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        Ok(match (self, a, b) {
            (Group::Finite(g), Element::Fin(x), Element::Fin(y)) => Element::Fin(g.multiply(*x, *y)),
            (Group::Integers, Element::Int(x), Element::Int(y)) => {
                Element::Int(x.checked_add(*y).ok_or(GroupError::Overflow)?)
            }
            (Group::Product { factors }, Element::Tuple(xs), Element::Tuple(ys)) => Element::Tuple(
                factors
                    .iter()
                    .zip(xs.iter().zip(ys))
                    .map(|(g, (x, y))| g.multiply_unchecked(x, y))
                    .collect::<Result<_, _>>()?,
            ),
            (Group::FreeProduct { left, right }, Element::Word(u), Element::Word(v)) => {
                Element::Word(free_product::multiply(left, right, u, v)?)
            }
            (Group::Finitary { .. }, Element::Finitary(x), Element::Finitary(y)) => Element::Finitary(x.multiply(y)?),
            _ => return Err(self.wrong(a)),
        })
    }

    pub fn inverse(&self, a: &Element) -> Result<Element, GroupError> {
        self.check(a)?;
        Ok(match (self, a) {
            (Group::Finite(g), Element::Fin(x)) => Element::Fin(g.inverse(*x)),
            (Group::Integers, Element::Int(x)) => Element::Int(x.checked_neg().ok_or(GroupError::Overflow)?),
            (Group::Product { factors }, Element::Tuple(xs)) => {
                Element::Tuple(factors.iter().zip(xs).map(|(g, x)| g.inverse(x)).collect::<Result<_, _>>()?)
            }
            (Group::FreeProduct { left, right }, Element::Word(u)) => Element::Word(free_product::inverse(left, right, u)?),
            (Group::Finitary { .. }, Element::Finitary(x)) => Element::Finitary(x.inverse()?),
            _ => return Err(self.wrong(a)),
        })
    }

    /// Order of a finite group (finite tables and products of them).
    pub fn order(&self) -> Option<usize> {
        match self {
            Group::Finite(g) => Some(g.order()),
            Group::Product { factors } => factors.iter().try_fold(1usize, |acc, g| acc.checked_mul(g.order()?)),
            _ => None,
        }
    }

    /// All elements of a finite group, in index order (row-major for products).
    pub fn elements(&self) -> Result<Vec<Element>, GroupError> {
        match self {
            Group::Finite(g) => Ok((0..g.order() as u32).map(Element::Fin).collect()),
            Group::Product { factors } => {
                let mut out = vec![Vec::new()];
                for g in factors {
                    let xs = g.elements()?;
                    out = out
                        .into_iter()
                        .flat_map(|prefix| {
                            xs.iter().map(move |x| {
                                let mut t = prefix.clone();
                                t.push(x.clone());
                                t
                            })
                        })
                        .collect();
                }
                Ok(out.into_iter().map(Element::Tuple).collect())
            }
            _ => Err(GroupError::NotFinite(self.name())),
        }
    }

    /// Position of `e` in [`elements`](Self::elements).
    pub fn index_of(&self, e: &Element) -> Result<usize, GroupError> {
        self.check(e)?;
        match (self, e) {
            (Group::Finite(_), Element::Fin(i)) => Ok(*i as usize),
            (Group::Product { factors }, Element::Tuple(xs)) => {
                let mut idx = 0usize;
                for (g, x) in factors.iter().zip(xs) {
                    idx = idx * g.order().ok_or_else(|| GroupError::NotFinite(g.name()))? + g.index_of(x)?;
                }
                Ok(idx)
            }
            _ => Err(GroupError::NotFinite(self.name())),
        }
    }

    /// Canonical JSON value of an element.
    ///
    /// Integers are decimal strings, finite-group elements are table indices,
    /// tuples are arrays, free-product words are lists of tagged syllables
    /// `{"left":g}` / `{"right":h}` in normal form, finitary elements are
    /// `{"shift":[..],"perm":[[p,q],..]}`.
    pub fn element_to_json(&self, e: &Element) -> Result<Value, GroupError> {
        self.check(e)?;
        Ok(match (self, e) {
            (Group::Finite(_), Element::Fin(i)) => json!(i),
            (Group::Integers, Element::Int(k)) => json!(k.to_string()),
            (Group::Product { factors }, Element::Tuple(xs)) => Value::Array(
                factors.iter().zip(xs).map(|(g, x)| g.element_to_json(x)).collect::<Result<_, _>>()?,
            ),
            (Group::FreeProduct { left, right }, Element::Word(w)) => {
                let mut out = Vec::with_capacity(2 * w.pair_count());
                for (g, h) in w.pairs() {
                    out.push(json!({ "left": left.element_to_json(g)? }));
                    out.push(json!({ "right": right.element_to_json(h)? }));
                }
                Value::Array(out)
            }
            (Group::Finitary { .. }, Element::Finitary(x)) => json!({
                "shift": x.shift(),
                "perm": x.moves().iter().map(|(p, q)| json!([p, q])).collect::<Vec<_>>(),
            }),
            _ => return Err(self.wrong(e)),
        })
    }

    /// Parses an element. Free-product words may be given unreduced.
    pub fn element_from_json(&self, v: &Value) -> Result<Element, GroupError> {
        let malformed = || GroupError::Malformed(format!("{v} is not an element of {}", self.name()));
        let e = match self {
            Group::Finite(_) => Element::Fin(v.as_u64().and_then(|i| u32::try_from(i).ok()).ok_or_else(malformed)?),
            Group::Integers => match v {
                Value::String(s) => Element::Int(s.trim().parse().map_err(|_| malformed())?),
                Value::Number(n) => Element::Int(n.as_i64().ok_or_else(malformed)?),
                _ => return Err(malformed()),
            },
            Group::Product { factors } => {
                let xs = v.as_array().filter(|xs| xs.len() == factors.len()).ok_or_else(malformed)?;
                Element::Tuple(factors.iter().zip(xs).map(|(g, x)| g.element_from_json(x)).collect::<Result<_, _>>()?)
            }
            Group::FreeProduct { left, right } => {
                let items = v.as_array().ok_or_else(malformed)?;
                let mut raw = Vec::with_capacity(items.len());
                for item in items {
                    let obj = item.as_object().filter(|o| o.len() == 1).ok_or_else(malformed)?;
                    if let Some(g) = obj.get("left") {
                        raw.push(Syllable::Left(left.element_from_json(g)?));
                    } else if let Some(h) = obj.get("right") {
                        raw.push(Syllable::Right(right.element_from_json(h)?));
                    } else {
                        return Err(malformed());
                    }
                }
                Element::Word(reduce_word(left, right, &raw)?)
            }
            Group::Finitary { rank } => {
                let obj = v.as_object().ok_or_else(malformed)?;
                let point = |p: &Value| -> Result<Point, GroupError> {
                    let xs = p.as_array().filter(|xs| xs.len() == *rank).ok_or_else(malformed)?;
                    xs.iter().map(|x| x.as_i64().ok_or_else(malformed)).collect()
                };
                let shift = point(obj.get("shift").ok_or_else(malformed)?)?;
                let mut perm = Vec::new();
                for pair in obj.get("perm").and_then(Value::as_array).ok_or_else(malformed)? {
                    let pq = pair.as_array().filter(|xs| xs.len() == 2).ok_or_else(malformed)?;
                    perm.push((point(&pq[0])?, point(&pq[1])?));
                }
                Element::Finitary(FinitaryElement::new(shift, perm)?)
            }
        };
        self.check(&e)?;
        Ok(e)
    }

    /// Compact JSON text of an element; used as the key in certificates.
    pub fn element_key(&self, e: &Element) -> Result<String, GroupError> {
        Ok(self.element_to_json(e)?.to_string())
    }

    pub fn element_from_key(&self, key: &str) -> Result<Element, GroupError> {
        let v: Value = serde_json::from_str(key).map_err(|_| GroupError::Malformed(key.to_string()))?;
        self.element_from_json(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn integer_handle() {
        let z = Group::integers();
        assert_eq!(z.multiply(&Element::Int(3), &Element::Int(-5)).unwrap(), Element::Int(-2));
        assert_eq!(z.inverse(&Element::Int(7)).unwrap(), Element::Int(-7));
        assert_eq!(z.multiply(&Element::Int(i64::MAX), &Element::Int(1)), Err(GroupError::Overflow));
    }

    #[test]
    fn table_handle() {
        let z4 = Group::cyclic(4).unwrap();
        assert_eq!(z4.multiply(&Element::Fin(3), &Element::Fin(2)).unwrap(), Element::Fin(1));
    }

    #[test]
    fn mixing_handles_is_a_domain_error() {
        let z = Group::integers();
        let err = z.multiply(&Element::Int(1), &Element::Fin(0)).unwrap_err();
        assert!(matches!(err, GroupError::WrongGroup { .. }));
        assert!(Group::cyclic(3).unwrap().inverse(&Element::Fin(3)).is_err());
    }

    #[test]
    fn free_product_multiplication_reduces() {
        let fp = Group::free_product(Group::cyclic(2).unwrap(), Group::cyclic(3).unwrap());
        let ab = fp.element_from_json(&json!([{"left": 1}, {"right": 1}])).unwrap();
        let b2 = fp.element_from_json(&json!([{"right": 2}])).unwrap();
        let prod = fp.multiply(&ab, &b2).unwrap();
        assert_eq!(fp.element_to_json(&prod).unwrap(), json!([{"left": 1}, {"right": 0}]));
    }

    #[test]
    fn descriptions_round_trip() {
        let g = Group::product(vec![
            Group::integers(),
            Group::free_product(Group::cyclic(2).unwrap(), Group::trivial()),
            Group::finitary(2),
        ]);
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.starts_with(r#"{"kind":"product","factors":[{"kind":"integers"}"#));
        let back: Group = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"kind":"finite","table":[[0,1],[0,1]]}"#;
        assert!(serde_json::from_str::<Group>(bad).is_err());
    }

    #[test]
    fn element_keys() {
        let g = Group::product(vec![Group::integers(), Group::cyclic(2).unwrap()]);
        let e = Element::Tuple(vec![Element::Int(-3), Element::Fin(1)]);
        let key = g.element_key(&e).unwrap();
        assert_eq!(key, r#"["-3",1]"#);
        assert_eq!(g.element_from_key(&key).unwrap(), e);
        let q = Group::finitary(1);
        let x = Element::Finitary(FinitaryElement::new(vec![1], [(vec![0], vec![1]), (vec![1], vec![0])]).unwrap());
        assert_eq!(q.element_key(&x).unwrap(), r#"{"perm":[[[0],[1]],[[1],[0]]],"shift":[1]}"#);
        assert_eq!(q.element_from_key(&q.element_key(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn product_enumeration_is_row_major() {
        let g = Group::product(vec![Group::cyclic(2).unwrap(), Group::cyclic(3).unwrap()]);
        let els = g.elements().unwrap();
        assert_eq!(els.len(), 6);
        for (i, e) in els.iter().enumerate() {
            assert_eq!(g.index_of(e).unwrap(), i);
        }
        assert_eq!(els[4], Element::Tuple(vec![Element::Fin(1), Element::Fin(1)]));
        assert!(Group::integers().elements().is_err());
    }

    fn z_x_z3() -> Group {
        Group::product(vec![Group::integers(), Group::cyclic(3).unwrap()])
    }

    fn z_x_z3_elem() -> impl Strategy<Value = Element> {
        (-50i64..50, 0u32..3).prop_map(|(k, i)| Element::Tuple(vec![Element::Int(k), Element::Fin(i)]))
    }

    proptest! {
        #[test]
        fn product_group_axioms(a in z_x_z3_elem(), b in z_x_z3_elem(), c in z_x_z3_elem()) {
            let g = z_x_z3();
            let ab_c = g.multiply(&g.multiply(&a, &b).unwrap(), &c).unwrap();
            let a_bc = g.multiply(&a, &g.multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert!(g.is_identity(&g.multiply(&g.inverse(&a).unwrap(), &a).unwrap()));
            prop_assert_eq!(g.multiply(&g.identity(), &a).unwrap(), a.clone());
            // Equality agrees with serialization equality.
            prop_assert_eq!(a == b, g.element_key(&a).unwrap() == g.element_key(&b).unwrap());
        }

        #[test]
        fn finite_table_axioms(a in 0u32..6, b in 0u32..6, c in 0u32..6) {
            // S₃ as a product-free table: the dihedral group of order 6.
            let g = dihedral6();
            let [a, b, c] = [a, b, c].map(Element::Fin);
            let ab_c = g.multiply(&g.multiply(&a, &b).unwrap(), &c).unwrap();
            let a_bc = g.multiply(&a, &g.multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert!(g.is_identity(&g.multiply(&a, &g.inverse(&a).unwrap()).unwrap()));
        }
    }

    fn dihedral6() -> Group {
        // Elements r^i s^j encoded as i + 3j.
        let mul = |x: usize, y: usize| {
            let (i1, j1) = (x % 3, x / 3);
            let (i2, j2) = (y % 3, y / 3);
            let i = if j1 == 0 { (i1 + i2) % 3 } else { (i1 + 3 - i2) % 3 };
            (i + 3 * ((j1 + j2) % 2)) as u32
        };
        let table = (0..6).map(|x| (0..6).map(|y| mul(x, y)).collect()).collect();
        Group::Finite(FiniteGroup::from_table(table).unwrap())
    }
}
