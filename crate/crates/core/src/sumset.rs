//! h-fold sumsets, `[0,s]`-sumsets and subset sums.
//!
//! Groups of order at most 64 go through the single-word [`MaskKernel`];
//! larger groups use an element-wise fallback over the same definitions.
//!
//! [`MaskKernel`]: crate::kernel::MaskKernel

use crate::error::{Error, Result};
use crate::subset::GroupSubset;

/// Pairwise sumset `A + B`.
pub fn sumset(a: &GroupSubset, b: &GroupSubset) -> Result<GroupSubset> {
    if a.group() != b.group() {
        return Err(Error::SpecMismatch(format!(
            "sumset of subsets of {} and {}",
            a.group(),
            b.group()
        )));
    }
    Ok(sumset_unchecked(a, b))
}

fn sumset_unchecked(a: &GroupSubset, b: &GroupSubset) -> GroupSubset {
    let group = a.group();
    if let (Some(k), Some(x), Some(y)) = (group.mask_kernel(), a.mask(), b.mask()) {
        return GroupSubset::from_words(group, vec![k.sumset(x, y)]);
    }
    let mut acc = GroupSubset::empty(group);
    for g in a.iter() {
        for i in b.iter() {
            acc.insert(group.add_index(i, g));
        }
        if acc.is_full() {
            break;
        }
    }
    acc
}

/// `hA`: all sums of `h` not necessarily distinct elements of `A`.
pub fn hfold_sumset(a: &GroupSubset, h: u32) -> Result<GroupSubset> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if h == 0 {
        return Err(Error::InvalidH(h));
    }
    let mut cur = a.clone();
    for _ in 1..h {
        if cur.is_full() {
            break;
        }
        cur = sumset_unchecked(a, &cur);
    }
    Ok(cur)
}

/// `[0,s]A`, the union of `hA` for `h = 0..=s` with `0A = {0}`.
pub fn interval_sumset(a: &GroupSubset, s: u32) -> Result<GroupSubset> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let zero = GroupSubset::singleton(a.group(), 0)?;
    let mut acc = zero.clone();
    let mut cur = zero;
    for _ in 0..s {
        if acc.is_full() {
            break;
        }
        cur = sumset_unchecked(a, &cur);
        acc = acc.union(&cur)?;
    }
    Ok(acc)
}

/// `ΣA`, the sums over all subsets of `A` (the empty subset contributes 0).
pub fn subset_sums(a: &GroupSubset) -> GroupSubset {
    let group = a.group();
    if let (Some(k), Some(x)) = (group.mask_kernel(), a.mask()) {
        return GroupSubset::from_words(group, vec![k.subset_sums(x)]);
    }
    let mut acc = GroupSubset::singleton(group, 0).expect("0 is an element");
    for g in a.iter() {
        let shifted = acc.translated(g);
        acc = acc.union(&shifted).expect("same group");
        if acc.is_full() {
            break;
        }
    }
    acc
}

/// True when `S` is the whole group.
pub fn is_complete(s: &GroupSubset) -> bool {
    s.is_full()
}
