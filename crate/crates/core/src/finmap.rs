//! Dense self-maps of a finite set.
//!
//! A [`FiniteMap`] on `n` points is the image table of a map
//! `{0..n-1} -> {0..n-1}`. Maps act on the right: the product `ef` means
//! "first `e`, then `f`", so `a·(ef) = (a·e)·f`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("carrier mismatch: {left} points vs {right} points")]
    CarrierMismatch { left: usize, right: usize },
    #[error("image {image} of point {point} is outside the carrier of {n} points")]
    ImageOutOfRange { point: usize, image: u32, n: usize },
    #[error("carrier of {0} points exceeds the u32 index range")]
    TooLarge(usize),
}

/// An element of `Map(A)` for `A = {0..n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct FiniteMap {
    images: Vec<u32>,
}

impl TryFrom<Vec<u32>> for FiniteMap {
    type Error = MapError;

    fn try_from(images: Vec<u32>) -> Result<Self, MapError> {
        FiniteMap::from_images(images)
    }
}

impl From<FiniteMap> for Vec<u32> {
    fn from(map: FiniteMap) -> Vec<u32> {
        map.images
    }
}

impl fmt::Debug for FiniteMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteMap{:?}", self.images)
    }
}

fn check_size(n: usize) -> Result<(), MapError> {
    if n > u32::MAX as usize {
        return Err(MapError::TooLarge(n));
    }
    Ok(())
}

impl FiniteMap {
    pub fn from_images(images: Vec<u32>) -> Result<Self, MapError> {
        let n = images.len();
        check_size(n)?;
        if let Some((point, &image)) = images.iter().enumerate().find(|(_, &i)| i as usize >= n) {
            return Err(MapError::ImageOutOfRange { point, image, n });
        }
        Ok(FiniteMap { images })
    }

    /// Builds the map `a ↦ image(a)`.
    pub fn from_fn(n: usize, mut image: impl FnMut(usize) -> usize) -> Result<Self, MapError> {
        check_size(n)?;
        let mut images = Vec::with_capacity(n);
        for a in 0..n {
            let b = image(a);
            if b >= n {
                return Err(MapError::ImageOutOfRange { point: a, image: b as u32, n });
            }
            images.push(b as u32);
        }
        Ok(FiniteMap { images })
    }

    pub fn identity(n: usize) -> Self {
        FiniteMap { images: (0..n as u32).collect() }
    }

    pub fn constant(n: usize, value: u32) -> Result<Self, MapError> {
        FiniteMap::from_images(vec![value; n])
    }

    /// The transposition of `i` and `j`, every other point fixed.
    pub fn swap(n: usize, i: usize, j: usize) -> Result<Self, MapError> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        if i >= n || j >= n {
            let bad = i.max(j);
            return Err(MapError::ImageOutOfRange { point: bad, image: bad as u32, n });
        }
        images.swap(i, j);
        Ok(FiniteMap { images })
    }

    /// Rotation `a ↦ a + shift (mod n)`.
    pub fn rotation(n: usize, shift: i64) -> Self {
        if n == 0 {
            return FiniteMap { images: Vec::new() };
        }
        let s = shift.rem_euclid(n as i64) as usize;
        FiniteMap { images: (0..n).map(|a| ((a + s) % n) as u32).collect() }
    }

    /// The involution exchanging `a` and `a + n/2`. Requires even `n`.
    pub fn half_swap(n: usize) -> Option<Self> {
        if n % 2 != 0 {
            return None;
        }
        let h = n / 2;
        Some(FiniteMap { images: (0..n).map(|a| ((a + h) % n) as u32).collect() })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.images[a] as usize
    }

    fn same_carrier(&self, other: &FiniteMap) -> Result<(), MapError> {
        if self.len() != other.len() {
            return Err(MapError::CarrierMismatch { left: self.len(), right: other.len() });
        }
        Ok(())
    }

    /// The product `self·other`: first `self`, then `other`.
    pub fn compose(&self, other: &FiniteMap) -> Result<FiniteMap, MapError> {
        self.same_carrier(other)?;
        let images = self.images.iter().map(|&a| other.images[a as usize]).collect();
        Ok(FiniteMap { images })
    }

    /// Counts the points where `self` and `other` disagree.
    pub fn similarity_defect(&self, other: &FiniteMap) -> Result<Defect, MapError> {
        self.same_carrier(other)?;
        let disagreements = self.images.iter().zip(&other.images).filter(|(x, y)| x != y).count();
        Ok(Defect::new(disagreements, self.len()))
    }

    /// Disagreement count against the identity map.
    pub fn identity_defect(&self) -> Defect {
        Defect::new(self.len() - self.fixpoint_count(), self.len())
    }

    pub fn fixpoint_set(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(a, &b)| a == b as usize)
            .map(|(a, _)| a)
            .collect()
    }

    pub fn fixpoint_count(&self) -> usize {
        self.images.iter().enumerate().filter(|&(a, &b)| a == b as usize).count()
    }

    pub fn is_identity(&self) -> bool {
        self.fixpoint_count() == self.len()
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.len()];
        for &b in &self.images {
            if std::mem::replace(&mut seen[b as usize], true) {
                return false;
            }
        }
        true
    }

    /// The inverse permutation, or `None` if the map is not a bijection.
    pub fn inverse(&self) -> Option<FiniteMap> {
        let mut inv = vec![u32::MAX; self.len()];
        for (a, &b) in self.images.iter().enumerate() {
            if inv[b as usize] != u32::MAX {
                return None;
            }
            inv[b as usize] = a as u32;
        }
        Some(FiniteMap { images: inv })
    }

    /// The same map acting on two copies `[0,n)` and `[n,2n)` of the carrier.
    pub fn double(&self) -> FiniteMap {
        let n = self.len() as u32;
        let mut images = Vec::with_capacity(2 * self.len());
        images.extend_from_slice(&self.images);
        images.extend(self.images.iter().map(|&b| b + n));
        FiniteMap { images }
    }
}

/// Number of points where two maps on an `n`-point carrier differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Defect {
    pub disagreements: usize,
    pub n: usize,
}

impl Defect {
    pub fn new(disagreements: usize, n: usize) -> Self {
        debug_assert!(disagreements <= n);
        Defect { disagreements, n }
    }

    pub fn zero(n: usize) -> Self {
        Defect { disagreements: 0, n }
    }

    /// `disagreements / n`, reduced. An empty carrier has fraction 0.
    pub fn fraction(&self) -> Rational {
        if self.n == 0 {
            return Rational::from_integer(0);
        }
        Rational::new(self.disagreements as i64, self.n as i64)
    }

    /// ε-similar: at most `ε·n` disagreements.
    pub fn is_similar(&self, eps: Rational) -> bool {
        (self.disagreements as i128) * (*eps.denom() as i128) <= (*eps.numer() as i128) * (self.n as i128)
    }

    /// `(1-ε)`-different: not `(1-ε)`-similar, i.e. more than `(1-ε)·n` disagreements.
    pub fn is_different(&self, eps: Rational) -> bool {
        let (p, q) = (*eps.numer() as i128, *eps.denom() as i128);
        (self.disagreements as i128) * q > (q - p) * (self.n as i128)
    }

    pub fn agreements(&self) -> usize {
        self.n - self.disagreements
    }

    /// Parses the unreduced `d/n` text form.
    pub fn parse(text: &str) -> Option<Defect> {
        let (d, n) = text.split_once('/')?;
        let d: usize = d.parse().ok()?;
        let n: usize = n.parse().ok()?;
        (d <= n).then_some(Defect { disagreements: d, n })
    }
}

impl PartialOrd for Defect {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Defect {
    /// Orders by fraction, then by raw counts so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.disagreements as u128 * other.n.max(1) as u128;
        let rhs = other.disagreements as u128 * self.n.max(1) as u128;
        lhs.cmp(&rhs)
            .then(self.n.cmp(&other.n))
            .then(self.disagreements.cmp(&other.disagreements))
    }
}

impl fmt::Display for Defect {
    /// Unreduced `disagreements/n`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.disagreements, self.n)
    }
}

impl Serialize for Defect {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Defect {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Defect::parse(&text).ok_or_else(|| serde::de::Error::custom(format!("bad defect `{text}`")))
    }
}
