use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest ground set a [`SubsetMask`] can address.
pub const MAX_POINTS: usize = 128;

/// A subset of a finite ground set `{0, .., n-1}` stored as a bit set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetMask(pub u128);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// The whole ground set on `n` points.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_POINTS);
        if n == MAX_POINTS {
            SubsetMask(u128::MAX)
        } else {
            SubsetMask((1u128 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(x: usize) -> Self {
        SubsetMask(1u128 << x)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Self {
        points
            .into_iter()
            .fold(SubsetMask::EMPTY, |acc, x| acc | SubsetMask::singleton(x))
    }

    #[inline]
    pub fn bits(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn contains(self, x: usize) -> bool {
        (self.0 >> x) & 1 == 1
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// True when only the low `n` bits may be set.
    #[inline]
    pub fn fits(self, n: usize) -> bool {
        self.is_subset_of(SubsetMask::full(n))
    }

    /// Complement relative to the ground set on `n` points.
    #[inline]
    pub fn complement(self, n: usize) -> Self {
        SubsetMask(!self.0 & SubsetMask::full(n).0)
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        self.0 |= 1u128 << x;
    }

    /// Lowest element, if any.
    #[inline]
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Iterates the members in increasing order.
    #[inline]
    pub fn iter(self) -> Points {
        Points(self.0)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl std::ops::BitOr for SubsetMask {
    type Output = SubsetMask;
    #[inline]
    fn bitor(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | rhs.0)
    }
}

impl std::ops::BitOrAssign for SubsetMask {
    #[inline]
    fn bitor_assign(&mut self, rhs: SubsetMask) {
        self.0 |= rhs.0;
    }
}

impl std::ops::BitAnd for SubsetMask {
    type Output = SubsetMask;
    #[inline]
    fn bitand(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & rhs.0)
    }
}

impl std::ops::BitAndAssign for SubsetMask {
    #[inline]
    fn bitand_assign(&mut self, rhs: SubsetMask) {
        self.0 &= rhs.0;
    }
}

/// Iterator over the members of a [`SubsetMask`].
#[derive(Clone)]
pub struct Points(u128);

impl Iterator for Points {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Points {}
