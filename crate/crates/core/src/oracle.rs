//! Exhaustive subset enumeration.
//!
//! Every critical number is `1 + max |A|` over the sets `A` in the relevant
//! class whose expansion misses part of the group (or 1 if there are none).
//! The search walks subset sizes from the top down and stops at the first
//! size that contains a qualifying incomplete set.
//!
//! Within one size the `C(m, k)` combinations are split into contiguous
//! colex-rank ranges that run in parallel. The reported extremal set is always
//! the one of least rank, so results do not depend on the worker count.
//!
//! Nothing here consults the closed forms.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::formula::CriticalKind;
use crate::group::{Group, GroupType};
use crate::kernel::{Bits, MaskKernel};
use crate::subset::GroupSubset;

/// Default order cap for sweeps over many groups.
pub const SWEEP_MAX_ORDER: u64 = 16;
/// Default order cap for a single query.
pub const SINGLE_QUERY_MAX_ORDER: u64 = 20;
/// Nothing above this fits the single-word kernel.
pub const HARD_MAX_ORDER: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub workers: usize,
    pub max_order: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            max_order: SINGLE_QUERY_MAX_ORDER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleQuery {
    pub group: GroupType,
    pub kind: CriticalKind,
    pub restrict_generating: bool,
    pub exclude_zero: bool,
}

impl OracleQuery {
    /// A query whose class flags follow from `kind`.
    pub fn new(group: GroupType, kind: CriticalKind) -> Result<Self> {
        let kind = kind.validate()?;
        Ok(OracleQuery {
            group,
            restrict_generating: kind.is_generating_restricted(),
            exclude_zero: kind.excludes_zero(),
            kind,
        })
    }
}

/// A brute-force answer and the least-rank extremal set behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOutcome {
    pub value: u64,
    /// Largest qualifying incomplete set, if any exists.
    pub extremal: Option<GroupSubset>,
}

pub struct Oracle {
    config: OracleConfig,
    pool: ThreadPool,
}

impl std::fmt::Debug for Oracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Oracle").field("config", &self.config).finish()
    }
}

fn next_combination(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x.wrapping_add(c);
    (((r ^ x) >> 2) / c) | r
}

/// The `k`-subset of `0..m` with the given colex rank, as a mask.
fn unrank_colex(mut rank: u64, k: usize, m: usize) -> u64 {
    let mut mask = 0u64;
    let mut hi = m;
    for i in (1..=k).rev() {
        let mut c = i - 1;
        while c + 1 < hi && binomial((c + 1) as u64, i as u64) <= rank {
            c += 1;
        }
        rank -= binomial(c as u64, i as u64);
        mask |= 1 << c;
        hi = c;
    }
    mask
}

const MIN_CHUNK: u64 = 1 << 11;

impl Oracle {
    pub fn new(config: OracleConfig) -> Result<Self> {
        if config.max_order > HARD_MAX_ORDER {
            return Err(Error::BudgetExceeded {
                order: config.max_order,
                cap: HARD_MAX_ORDER,
            });
        }
        let pool = ThreadPoolBuilder::new()
            .num_threads(config.workers.max(1))
            .build()
            .map_err(|e| Error::ConditionViolated(format!("thread pool: {e}")))?;
        Ok(Oracle { config, pool })
    }

    pub fn config(&self) -> OracleConfig {
        self.config
    }

    fn group_within_budget(&self, ty: &GroupType) -> Result<Group> {
        if ty.order() > self.config.max_order {
            return Err(Error::BudgetExceeded {
                order: ty.order(),
                cap: self.config.max_order,
            });
        }
        Group::new(ty.clone())
    }

    /// Least-rank `k`-subset of the `m`-element pool satisfying `hit`.
    fn first_hit<F>(&self, m: usize, k: usize, hit: &F) -> Option<u64>
    where
        F: Fn(u64) -> bool + Sync,
    {
        if k == 0 {
            return hit(0).then_some(0);
        }
        let total = binomial(m as u64, k as u64);
        let chunks = (total / MIN_CHUNK).clamp(1, 64 * self.config.workers.max(1) as u64);
        let chunk_len = total.div_ceil(chunks);
        let best = AtomicU64::new(u64::MAX);
        let found = self.pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .filter_map(|ci| {
                    let start = ci * chunk_len;
                    let end = (start + chunk_len).min(total);
                    if start >= end || start >= best.load(Ordering::Relaxed) {
                        return None;
                    }
                    let mut mask = unrank_colex(start, k, m);
                    for rank in start..end {
                        if rank & 0xff == 0 && rank > best.load(Ordering::Relaxed) {
                            return None;
                        }
                        if hit(mask) {
                            best.fetch_min(rank, Ordering::Relaxed);
                            return Some((rank, mask));
                        }
                        if rank + 1 < end {
                            mask = next_combination(mask);
                        }
                    }
                    None
                })
                .min_by_key(|&(rank, _)| rank)
        });
        found.map(|(_, mask)| mask)
    }

    /// Largest qualifying incomplete set, scanning sizes `top..=min_size` downward.
    fn search<F>(&self, group: &Group, exclude_zero: bool, min_size: usize, hit: F) -> Option<GroupSubset>
    where
        F: Fn(u64) -> bool + Sync,
    {
        let n = group.order();
        let shift = exclude_zero as u32;
        let m = n - shift as usize;
        let lifted = |pool_mask: u64| hit(pool_mask << shift);
        (min_size..=m).rev().find_map(|k| {
            self.first_hit(m, k, &lifted)
                .map(|pool_mask| GroupSubset::from_mask(group, pool_mask << shift).expect("fits"))
        })
    }

    fn incomplete_predicate(kernel: &MaskKernel, kind: CriticalKind) -> impl Fn(u64) -> bool + Sync + '_ {
        let full = kernel.full();
        move |a: u64| match kind {
            CriticalKind::ChiH(h) | CriticalKind::ChiHatH(h) => kernel.hfold(a, h) != full,
            CriticalKind::ChiInterval(s) | CriticalKind::ChiHatInterval(s) => kernel.interval(a, s) != full,
            CriticalKind::Cr | CriticalKind::CrStar => kernel.subset_sums(a) != full,
        }
    }

    pub fn brute_critical_detailed(&self, q: &OracleQuery) -> Result<OracleOutcome> {
        let kind = q.kind.validate()?;
        let group = self.group_within_budget(&q.group)?;
        let kernel = group.mask_kernel().expect("order <= 64");
        let full = kernel.full();
        let incomplete = Self::incomplete_predicate(kernel, kind);
        let restrict = q.restrict_generating;
        let hit = |a: u64| (!restrict || kernel.closure(a) == full) && incomplete(a);
        // sumsets are only defined for nonempty sets; subset sums accept the empty set
        let min_size = match kind {
            CriticalKind::Cr | CriticalKind::CrStar => 0,
            _ => 1,
        };
        let extremal = self.search(&group, q.exclude_zero, min_size, hit);

        if let (Some(a), false) = (&extremal, restrict) {
            // incompleteness is inherited by subsets; spot-check the one-element removals
            let mask = a.mask().expect("order <= 64");
            for x in Bits(mask) {
                let smaller = mask & !(1 << x);
                if (smaller != 0 || min_size == 0) && !incomplete(smaller) {
                    return Err(Error::ConstructionInvariantViolated(format!(
                        "{}: removing index {x} from an incomplete set made it complete",
                        q.group
                    )));
                }
            }
        }
        Ok(OracleOutcome {
            value: extremal.as_ref().map_or(1, |a| a.len() as u64 + 1),
            extremal,
        })
    }

    pub fn brute_critical(&self, q: &OracleQuery) -> Result<u64> {
        Ok(self.brute_critical_detailed(q)?.value)
    }

    /// Same answer as [`Oracle::brute_critical`] for unrestricted `chi_h` and
    /// `chi_interval` queries, searching only sets that contain 0: since
    /// `|h(A - a)| = |hA|` and `[0,s]B = sB` when `0` is in `B`, every
    /// incomplete set has a translate of the same size containing 0.
    pub fn brute_critical_translation_reduced(&self, q: &OracleQuery) -> Result<u64> {
        let kind = q.kind.validate()?;
        if q.restrict_generating || q.exclude_zero || !matches!(kind, CriticalKind::ChiH(_) | CriticalKind::ChiInterval(_)) {
            return Err(Error::ConditionViolated(format!(
                "translation reduction applies to unrestricted chi_h / chi_interval only, not {kind}"
            )));
        }
        let group = self.group_within_budget(&q.group)?;
        let kernel = group.mask_kernel().expect("order <= 64");
        let incomplete = Self::incomplete_predicate(kernel, kind);
        // pool = nonzero elements; every candidate gets 0 added back
        let m = group.order() - 1;
        let lifted = |pool_mask: u64| incomplete(pool_mask << 1 | 1);
        let best = (0..=m).rev().find_map(|k| self.first_hit(m, k, &lifted).map(|_| k + 1));
        Ok(best.map_or(1, |size| size as u64 + 1))
    }

    pub fn brute_cr(&self, ty: &GroupType) -> Result<u64> {
        self.brute_critical(&OracleQuery::new(ty.clone(), CriticalKind::Cr)?)
    }

    pub fn brute_cr_star(&self, ty: &GroupType) -> Result<u64> {
        self.brute_critical(&OracleQuery::new(ty.clone(), CriticalKind::CrStar)?)
    }

    /// Largest `A` in `Z_n` with `A` and `A + A` disjoint, by backtracking.
    pub fn brute_max_sumfree(&self, n: u64) -> Result<u64> {
        let group = self.group_within_budget(&GroupType::cyclic(n)?)?;
        let kernel = group.mask_kernel().expect("order <= 64");
        let n = group.order();

        fn extend(kernel: &MaskKernel, n: usize, next: usize, set: u64, best: &mut u32) {
            let size = set.count_ones();
            *best = (*best).max(size);
            for x in next..n {
                if size + (n - x) as u32 <= *best {
                    return;
                }
                let candidate = set | 1 << x;
                if kernel.sumset(candidate, candidate) & candidate == 0 {
                    extend(kernel, n, x + 1, candidate, best);
                }
            }
        }

        let mut best = 0;
        extend(kernel, n, 0, 0, &mut best);
        Ok(best as u64)
    }

    /// All subgroups, smallest first; each is found by adjoining one element
    /// at a time to a subgroup already found.
    pub fn enumerate_subgroups(&self, ty: &GroupType) -> Result<Vec<GroupSubset>> {
        let group = self.group_within_budget(ty)?;
        let kernel = group.mask_kernel().expect("order <= 64");
        let mut seen: BTreeSet<u64> = BTreeSet::from([1u64]);
        let mut frontier = vec![1u64];
        while let Some(h) = frontier.pop() {
            for g in Bits(!h & kernel.full()) {
                let k = kernel.closure(h | 1 << g);
                if seen.insert(k) {
                    frontier.push(k);
                }
            }
        }
        let mut out: Vec<u64> = seen.into_iter().collect();
        out.sort_by_key(|&m| (m.count_ones(), m));
        out.into_iter()
            .map(|m| GroupSubset::from_mask(&group, m))
            .collect()
    }
}
