//! Dense bit-vector subsets of a group.
//!
//! Two serialized forms exist:
//!
//! * a JSON array of coordinate vectors, ascending by element index;
//! * a hex string encoding the integer `sum of 2^i` over member indices `i`,
//!   written with exactly `ceil(n / 4)` lowercase digits, most significant first.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::kernel::Bits;

#[derive(Clone, PartialEq, Eq)]
pub struct GroupSubset {
    group: Group,
    bits: Vec<u64>,
    size: usize,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl GroupSubset {
    pub fn empty(group: &Group) -> Self {
        GroupSubset {
            group: group.clone(),
            bits: vec![0; words_for(group.order())],
            size: 0,
        }
    }

    pub fn full(group: &Group) -> Self {
        let n = group.order();
        let mut bits = vec![u64::MAX; words_for(n)];
        if n % 64 != 0 {
            *bits.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
        }
        GroupSubset {
            group: group.clone(),
            bits,
            size: n,
        }
    }

    pub fn singleton(group: &Group, index: usize) -> Result<Self> {
        Self::from_indices(group, [index])
    }

    pub fn from_indices(group: &Group, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(group);
        for i in indices {
            if i >= group.order() {
                return Err(Error::InvalidElement(format!(
                    "index {i} out of range for order {}",
                    group.order()
                )));
            }
            s.insert(i);
        }
        Ok(s)
    }

    pub fn from_coords(group: &Group, coords: &[Vec<u64>]) -> Result<Self> {
        let indices = coords
            .iter()
            .map(|c| group.encode(c))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(group, indices)
    }

    /// Builds a subset of a group of order at most 64 from a bit mask.
    pub fn from_mask(group: &Group, mask: u64) -> Result<Self> {
        let n = group.order();
        if n > 64 || (n < 64 && mask >> n != 0) {
            return Err(Error::InvalidElement(format!(
                "mask {mask:#x} does not fit a group of order {n}"
            )));
        }
        Ok(GroupSubset {
            group: group.clone(),
            bits: vec![mask],
            size: mask.count_ones() as usize,
        })
    }

    /// The single-word mask, for groups of order at most 64.
    pub fn mask(&self) -> Option<u64> {
        (self.group.order() <= 64).then(|| self.bits[0])
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.group.order() && self.bits[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn insert(&mut self, index: usize) -> bool {
        let w = &mut self.bits[index / 64];
        let bit = 1u64 << (index % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        self.size += fresh as usize;
        fresh
    }

    /// Member indices, ascending.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| Bits(word).map(move |b| w * 64 + b))
    }

    pub fn elements(&self) -> Vec<Element> {
        self.iter()
            .map(|i| self.group.element_at(i).expect("member index in range"))
            .collect()
    }

    pub fn is_full(&self) -> bool {
        self.size == self.group.order()
    }


    pub(crate) fn from_words(group: &Group, bits: Vec<u64>) -> Self {
        let size = bits.iter().map(|w| w.count_ones() as usize).sum();
        GroupSubset {
            group: group.clone(),
            bits,
            size,
        }
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::SpecMismatch(format!(
                "subsets of {} and {}",
                self.group, other.group
            )));
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect();
        Ok(Self::from_words(&self.group, bits))
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        Ok(Self::from_words(&self.group, bits))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.group == other.group && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// `A + g` for the element with index `g`.
    pub fn translated(&self, g: usize) -> Self {
        if let (Some(k), Some(m)) = (self.group.mask_kernel(), self.mask()) {
            return Self::from_words(&self.group, vec![k.translate(m, g)]);
        }
        let mut out = Self::empty(&self.group);
        for i in self.iter() {
            out.insert(self.group.add_index(i, g));
        }
        out
    }

    /// `{-a : a in A}`.
    pub fn negated(&self) -> Self {
        let mut out = Self::empty(&self.group);
        for i in self.iter() {
            out.insert(self.group.neg_index(i));
        }
        out
    }

    /// Coordinate vectors of the members, ascending by index.
    pub fn to_coords(&self) -> Vec<Vec<u64>> {
        self.iter()
            .map(|i| self.group.decode(i).expect("member index in range"))
            .collect()
    }

    pub fn to_hex(&self) -> String {
        let digits = self.group.order().div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (self.bits[d * 4 / 64] >> (d * 4 % 64)) & 0xf;
                char::from_digit(nibble as u32, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(group: &Group, hex: &str) -> Result<Self> {
        let n = group.order();
        let digits = n.div_ceil(4);
        if hex.len() != digits {
            return Err(Error::Parse {
                position: 0,
                message: format!("expected {digits} hex digits for order {n}, got {}", hex.len()),
            });
        }
        let mut bits = vec![0u64; words_for(n)];
        for (pos, ch) in hex.chars().enumerate() {
            let nibble = ch.to_digit(16).ok_or_else(|| Error::Parse {
                position: pos,
                message: format!("invalid hex digit {ch:?}"),
            })? as u64;
            let d = digits - 1 - pos;
            if d * 4 + 4 > n && nibble >> (n - d * 4) != 0 {
                return Err(Error::Parse {
                    position: pos,
                    message: format!("bits beyond order {n} are set"),
                });
            }
            bits[d * 4 / 64] |= nibble << (d * 4 % 64);
        }
        Ok(Self::from_words(group, bits))
    }
}

impl fmt::Debug for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSubset<{}>", self.group)?;
        f.debug_set().entries(self.to_coords()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_membership() {
        let g = Group::parse("2,4").unwrap();
        let mut a = GroupSubset::empty(&g);
        assert!(a.insert(3));
        assert!(!a.insert(3));
        assert_eq!(a.len(), 1);
        assert!(a.contains(3) && !a.contains(2) && !a.contains(100));
        assert_eq!(GroupSubset::full(&g).len(), 8);
        assert!(GroupSubset::from_indices(&g, [8]).is_err());
    }

    #[test]
    fn hex_layout() {
        let g = Group::cyclic(10).unwrap();
        let a = GroupSubset::from_indices(&g, [0, 4, 9]).unwrap();
        // 2^0 + 2^4 + 2^9 = 0x211
        assert_eq!(a.to_hex(), "211");
        assert!(GroupSubset::from_hex(&g, "611").is_err());
        assert!(GroupSubset::from_hex(&g, "11").is_err());
        assert!(GroupSubset::from_hex(&g, "2g1").is_err());
    }

    #[test]
    fn coords_layout() {
        let g = Group::parse("2,4").unwrap();
        let a = GroupSubset::from_coords(&g, &[vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(a.to_coords(), vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(serde_json::to_string(&a.to_coords()).unwrap(), "[[0,1],[1,1]]");
    }

    fn group_and_members() -> impl Strategy<Value = (Vec<u64>, Vec<usize>)> {
        prop_oneof![
            Just(vec![7u64]),
            Just(vec![2, 4]),
            Just(vec![3, 3, 9]),
            Just(vec![2, 2, 2, 2]),
            Just(vec![100]),
            Just(vec![2, 70]),
        ]
        .prop_flat_map(|t| {
            let n: u64 = t.iter().product();
            (Just(t), proptest::collection::vec(0..n as usize, 0..40))
        })
    }

    proptest! {
        #[test]
        fn serialized_forms_round_trip((t, members) in group_and_members()) {
            let g = Group::parse(&t.iter().map(u64::to_string).collect::<Vec<_>>().join(",")).unwrap();
            let a = GroupSubset::from_indices(&g, members).unwrap();
            prop_assert_eq!(&GroupSubset::from_hex(&g, &a.to_hex()).unwrap(), &a);
            let json = serde_json::to_string(&a.to_coords()).unwrap();
            let coords: Vec<Vec<u64>> = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(&GroupSubset::from_coords(&g, &coords).unwrap(), &a);
        }

        #[test]
        fn translation_agrees_across_paths((t, members) in group_and_members(), g in 0usize..64) {
            let g_ty = t.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
            let group = Group::parse(&g_ty).unwrap();
            let g = g % group.order();
            let a = GroupSubset::from_indices(&group, members).unwrap();
            let expected: Vec<usize> = {
                let mut v: Vec<usize> = a.iter().map(|i| group.add_index(i, g)).collect();
                v.sort_unstable();
                v
            };
            prop_assert_eq!(a.translated(g).iter().collect::<Vec<_>>(), expected);
        }
    }
}
