//! Normal forms in a free product `G*H`.
//!
//! Every element has a unique shortest decomposition `g₁h₁…g_kh_k` with
//! `g_i ∈ G`, `h_i ∈ H`, where no syllable is the identity except possibly
//! `g₁` or `h_k`. The identity is `1·1` (k = 1).

use std::fmt;

use super::{Element, Group, GroupError};

/// One letter of a raw word, tagged with its factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Syllable {
    Left(Element),
    Right(Element),
}

impl Syllable {
    fn is_left(&self) -> bool {
        matches!(self, Syllable::Left(_))
    }

    fn value(&self) -> &Element {
        match self {
            Syllable::Left(e) | Syllable::Right(e) => e,
        }
    }
}

/// A word in normal form, stored as its `(g_i, h_i)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeProductWord {
    pairs: Vec<(Element, Element)>,
}

impl FreeProductWord {
    pub fn identity(left: &Group, right: &Group) -> Self {
        FreeProductWord { pairs: vec![(left.identity(), right.identity())] }
    }

    /// Number of syllable pairs `k`.
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(Element, Element)] {
        &self.pairs
    }

    /// The first G-syllable `g₁` (possibly the identity).
    pub fn first_left(&self) -> &Element {
        &self.pairs[0].0
    }

    /// The last H-syllable `h_k` (possibly the identity).
    pub fn last_right(&self) -> &Element {
        &self.pairs[self.pairs.len() - 1].1
    }

    /// The alternating syllable sequence `g₁, h₁, …, g_k, h_k`.
    pub fn syllables(&self) -> Vec<Syllable> {
        self.pairs
            .iter()
            .flat_map(|(g, h)| [Syllable::Left(g.clone()), Syllable::Right(h.clone())])
            .collect()
    }

    /// Checks the normal-form invariant against the factor groups.
    pub fn is_normal(&self, left: &Group, right: &Group) -> bool {
        let k = self.pairs.len();
        if k == 0 {
            return false;
        }
        self.pairs.iter().enumerate().all(|(i, (g, h))| {
            left.contains(g)
                && right.contains(h)
                && (i == 0 || !left.is_identity(g))
                && (i == k - 1 || !right.is_identity(h))
        })
    }
}

impl fmt::Display for FreeProductWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (g, h)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            write!(f, "{g}·{h}")?;
        }
        Ok(())
    }
}

/// Reduces a raw syllable sequence to its normal form.
///
/// Adjacent syllables from the same factor are multiplied, identity syllables
/// dropped, and the result padded with identity syllables so it starts with a
/// G-syllable and ends with an H-syllable.
pub fn reduce_word(left: &Group, right: &Group, raw: &[Syllable]) -> Result<FreeProductWord, GroupError> {
    let mut stack: Vec<Syllable> = Vec::with_capacity(raw.len());
    for s in raw {
        let factor = if s.is_left() { left } else { right };
        factor.check(s.value())?;
        if factor.is_identity(s.value()) {
            continue;
        }
        match stack.last_mut() {
            Some(top) if top.is_left() == s.is_left() => {
                let product = factor.multiply(top.value(), s.value())?;
                if factor.is_identity(&product) {
                    stack.pop();
                } else {
                    *top = if s.is_left() { Syllable::Left(product) } else { Syllable::Right(product) };
                }
            }
            _ => stack.push(s.clone()),
        }
    }

    let mut pairs = Vec::with_capacity(stack.len() / 2 + 1);
    let mut iter = stack.into_iter().peekable();
    if matches!(iter.peek(), Some(Syllable::Right(_))) {
        // Starts with an H-syllable: g₁ = 1.
        let Some(Syllable::Right(h)) = iter.next() else { unreachable!() };
        pairs.push((left.identity(), h));
    }
    while let Some(s) = iter.next() {
        let Syllable::Left(g) = s else { unreachable!("stack alternates") };
        let h = match iter.next() {
            Some(Syllable::Right(h)) => h,
            None => right.identity(),
            Some(Syllable::Left(_)) => unreachable!("stack alternates"),
        };
        pairs.push((g, h));
    }
    if pairs.is_empty() {
        return Ok(FreeProductWord::identity(left, right));
    }
    Ok(FreeProductWord { pairs })
}

/// Convenience for alternating input `g₁,h₁,g₂,h₂,…` given as pairs.
pub fn reduce_pairs(left: &Group, right: &Group, pairs: &[(Element, Element)]) -> Result<FreeProductWord, GroupError> {
    let raw: Vec<Syllable> = pairs
        .iter()
        .flat_map(|(g, h)| [Syllable::Left(g.clone()), Syllable::Right(h.clone())])
        .collect();
    reduce_word(left, right, &raw)
}

pub(super) fn multiply(left: &Group, right: &Group, u: &FreeProductWord, v: &FreeProductWord) -> Result<FreeProductWord, GroupError> {
    let mut raw = u.syllables();
    raw.extend(v.syllables());
    reduce_word(left, right, &raw)
}

pub(super) fn inverse(left: &Group, right: &Group, u: &FreeProductWord) -> Result<FreeProductWord, GroupError> {
    let mut raw = Vec::with_capacity(2 * u.pairs.len());
    for (g, h) in u.pairs.iter().rev() {
        raw.push(Syllable::Right(right.inverse(h)?));
        raw.push(Syllable::Left(left.inverse(g)?));
    }
    reduce_word(left, right, &raw)
}

/// How the normal forms of `g` and `g′` interact in the product `gg′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductCase {
    /// `h_k ≠ 1` and `g′₁ ≠ 1`: the product is the concatenation.
    Concatenation,
    /// `h_k = 1` and `g′₁ = 1`: the two identities drop out.
    IdentityCollapse,
    /// Exactly one of `h_k`, `g′₁` is trivial: cancellation and merging may happen.
    Cancellation,
}

pub fn product_case(left: &Group, right: &Group, u: &FreeProductWord, v: &FreeProductWord) -> ProductCase {
    match (right.is_identity(u.last_right()), left.is_identity(v.first_left())) {
        (false, false) => ProductCase::Concatenation,
        (true, true) => ProductCase::IdentityCollapse,
        _ => ProductCase::Cancellation,
    }
}
