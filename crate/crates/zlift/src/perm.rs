//! Permutations on `{0, .., d-1}`, used to track the order of billiard
//! paths at a fiber.

use crate::error::{Error, Result};

/// A permutation stored as its image table: `i` maps to `images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(d: usize) -> Perm {
        Perm { images: (0..d).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            if i >= d || seen[i] {
                return Err(Error::InvalidParams("not a bijection".into()));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` after `other`: `(self . other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len());
        Perm { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Perm { images }
    }

    /// If this permutation is `i -> i + t (mod d)`, returns `t`.
    pub fn cyclic_shift(&self) -> Option<usize> {
        let d = self.len();
        if d == 0 {
            return None;
        }
        let t = self.images[0];
        for (i, &x) in self.images.iter().enumerate() {
            if x != (i + t) % d {
                return None;
            }
        }
        Some(t)
    }
}
