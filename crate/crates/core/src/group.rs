//! Finite abelian groups in invariant-factor form and their element arithmetic.
//!
//! A group of type `(n_1, ..., n_r)` with `n_1 | n_2 | ... | n_r` is stored as
//! `Z_{n_1} x ... x Z_{n_r}`. Elements are addressed by a dense index in
//! `0..n` using a mixed-radix encoding where the first coordinate is the least
//! significant digit.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, partitions};
use crate::error::{Error, Result};
use crate::kernel::MaskKernel;

/// Canonical invariant-factor description of a finite abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct GroupType {
    factors: Vec<u64>,
}

/// Returns the invariant-factor type of the product of cyclic groups `Z_f`.
pub fn normalize_type(factors: &[u64]) -> Result<GroupType> {
    if factors.is_empty() {
        return Err(Error::InvalidOrder(1));
    }
    let mut powers: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut order: u64 = 1;
    for &f in factors {
        if f <= 1 {
            return Err(Error::InvalidFactor(f));
        }
        order = order.checked_mul(f).ok_or(Error::InvalidOrder(u64::MAX))?;
        for (p, e) in factorize(f) {
            powers.entry(p).or_default().push(p.pow(e));
        }
    }
    let rank = powers.values().map(Vec::len).max().unwrap_or(0);
    // n_r collects the largest power of each prime, n_{r-1} the next largest, ...
    let mut out = vec![1u64; rank];
    for list in powers.values_mut() {
        list.sort_unstable_by(|a, b| b.cmp(a));
        for (slot, q) in list.iter().enumerate() {
            out[rank - 1 - slot] *= q;
        }
    }
    debug_assert_eq!(out.iter().product::<u64>(), order);
    Ok(GroupType { factors: out })
}

impl GroupType {
    /// Builds a type from an arbitrary list of cyclic factors.
    pub fn new(factors: &[u64]) -> Result<Self> {
        normalize_type(factors)
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidOrder(n));
        }
        normalize_type(&[n])
    }

    /// `Z_2^r`.
    pub fn elementary_2(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidOrder(1));
        }
        normalize_type(&vec![2; r])
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn exponent(&self) -> u64 {
        *self.factors.last().expect("rank >= 1")
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    /// True for `Z_2^r`, r >= 1.
    pub fn is_elementary_2(&self) -> bool {
        self.exponent() == 2
    }

    /// Invariant factors of the Sylow `p`-subgroup (empty when `p` does not divide the order).
    pub fn sylow_factors(&self, p: u64) -> Vec<u64> {
        self.factors
            .iter()
            .map(|&f| {
                let mut q = 1;
                let mut f = f;
                while f % p == 0 {
                    f /= p;
                    q *= p;
                }
                q
            })
            .filter(|&q| q > 1)
            .collect()
    }
}

impl TryFrom<Vec<u64>> for GroupType {
    type Error = Error;

    fn try_from(value: Vec<u64>) -> Result<Self> {
        normalize_type(&value)
    }
}

impl From<GroupType> for Vec<u64> {
    fn from(value: GroupType) -> Self {
        value.factors
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses `"n"` (cyclic) or `"a,b,c"` (product, normalized).
impl FromStr for GroupType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        let mut position = 0;
        for part in s.split(',') {
            let trimmed = part.trim();
            let offset = position + part.find(trimmed).unwrap_or(0);
            let value: u64 = trimmed.parse().map_err(|_| Error::Parse {
                position: offset,
                message: format!("expected a positive integer, found {trimmed:?}"),
            })?;
            factors.push(value);
            position += part.len() + 1;
        }
        if let [n] = factors[..] {
            return GroupType::cyclic(n);
        }
        normalize_type(&factors)
    }
}

/// Every abelian group type of order `n`, sorted by rank and then factors.
pub fn abelian_types(n: u64) -> Result<Vec<GroupType>> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let mut combos: Vec<Vec<u64>> = vec![Vec::new()];
    for (p, e) in factorize(n) {
        let mut next = Vec::new();
        for combo in &combos {
            for part in partitions(e) {
                let mut c = combo.clone();
                c.extend(part.iter().map(|&k| p.pow(k)));
                next.push(c);
            }
        }
        combos = next;
    }
    let mut out: Vec<GroupType> = combos
        .iter()
        .map(|c| normalize_type(c))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| a.factors.cmp(&b.factors)));
    Ok(out)
}

/// Every abelian group type with order in `lo..=hi`.
pub fn abelian_types_in(lo: u64, hi: u64) -> Result<Vec<GroupType>> {
    let mut out = Vec::new();
    for n in lo.max(2)..=hi {
        out.extend(abelian_types(n)?);
    }
    Ok(out)
}

/// Largest order for which dense subsets are materialized.
pub const MAX_DENSE_ORDER: u64 = 1 << 24;

/// Element of a group: coordinates plus the dense index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    index: usize,
    coords: Vec<u64>,
}

impl Element {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

#[derive(Debug)]
struct GroupInner {
    ty: GroupType,
    order: usize,
    strides: Vec<usize>,
    kernel: Option<MaskKernel>,
}

/// A group ready for element arithmetic. Cheap to clone.
#[derive(Debug, Clone)]
pub struct Group(Arc<GroupInner>);

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.ty == other.0.ty
    }
}

impl Eq for Group {}

impl Group {
    pub fn new(ty: GroupType) -> Result<Self> {
        let n = ty.order();
        if n > MAX_DENSE_ORDER {
            return Err(Error::InvalidOrder(n));
        }
        let mut strides = Vec::with_capacity(ty.rank());
        let mut acc = 1usize;
        for &f in ty.invariant_factors() {
            strides.push(acc);
            acc *= f as usize;
        }
        let kernel = (n <= 64).then(|| MaskKernel::new(ty.invariant_factors()));
        Ok(Group(Arc::new(GroupInner {
            ty,
            order: n as usize,
            strides,
            kernel,
        })))
    }

    /// Parses a group literal such as `"12"` or `"2,2,4"`.
    pub fn parse(s: &str) -> Result<Self> {
        Group::new(s.parse()?)
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Group::new(GroupType::cyclic(n)?)
    }

    pub fn group_type(&self) -> &GroupType {
        &self.0.ty
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn rank(&self) -> usize {
        self.0.ty.rank()
    }

    pub(crate) fn factors(&self) -> &[u64] {
        self.0.ty.invariant_factors()
    }

    /// Bit-mask kernel, present when the order is at most 64.
    pub fn mask_kernel(&self) -> Option<&MaskKernel> {
        self.0.kernel.as_ref()
    }

    pub fn encode(&self, coords: &[u64]) -> Result<usize> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidElement(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        let mut index = 0usize;
        for ((&c, &m), &s) in coords.iter().zip(self.factors()).zip(&self.0.strides) {
            if c >= m {
                return Err(Error::InvalidElement(format!(
                    "coordinate {c} out of range for Z_{m}"
                )));
            }
            index += c as usize * s;
        }
        Ok(index)
    }

    pub fn decode(&self, index: usize) -> Result<Vec<u64>> {
        if index >= self.order() {
            return Err(Error::InvalidElement(format!(
                "index {index} out of range for order {}",
                self.order()
            )));
        }
        Ok(self.digits(index).collect())
    }

    fn digits(&self, index: usize) -> impl Iterator<Item = u64> + '_ {
        self.factors()
            .iter()
            .zip(&self.0.strides)
            .map(move |(&m, &s)| ((index / s) % m as usize) as u64)
    }

    pub fn element(&self, coords: &[u64]) -> Result<Element> {
        let index = self.encode(coords)?;
        Ok(Element {
            index,
            coords: coords.to_vec(),
        })
    }

    pub fn element_at(&self, index: usize) -> Result<Element> {
        let coords = self.decode(index)?;
        Ok(Element { index, coords })
    }

    pub fn zero(&self) -> Element {
        Element {
            index: 0,
            coords: vec![0; self.rank()],
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order()).map(|i| Element {
            index: i,
            coords: self.digits(i).collect(),
        })
    }

    fn check(&self, a: &Element) -> Result<()> {
        if self.encode(&a.coords)? != a.index {
            return Err(Error::InvalidElement(format!("{a:?} is not an element of {}", self.0.ty)));
        }
        Ok(())
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        let coords: Vec<u64> = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(self.factors())
            .map(|((&x, &y), &m)| (x + y) % m)
            .collect();
        self.element(&coords)
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        let coords: Vec<u64> = a
            .coords
            .iter()
            .zip(self.factors())
            .map(|(&x, &m)| (m - x) % m)
            .collect();
        self.element(&coords)
    }

    /// Index of the sum of the elements with indices `i` and `j`.
    pub fn add_index(&self, i: usize, j: usize) -> usize {
        let mut out = 0;
        for (&m, &s) in self.factors().iter().zip(&self.0.strides) {
            let m = m as usize;
            out += (((i / s) % m + (j / s) % m) % m) * s;
        }
        out
    }

    pub fn neg_index(&self, i: usize) -> usize {
        let mut out = 0;
        for (&m, &s) in self.factors().iter().zip(&self.0.strides) {
            let m = m as usize;
            out += ((m - (i / s) % m) % m) * s;
        }
        out
    }

    /// Index of `k * g` where `g` has index `i`.
    pub fn scale_index(&self, i: usize, k: u64) -> usize {
        let mut out = 0;
        for (&m, &s) in self.factors().iter().zip(&self.0.strides) {
            let digit = ((i / s) as u64) % m;
            out += ((digit * (k % m)) % m) as usize * s;
        }
        out
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.ty.fmt(f)
    }
}
