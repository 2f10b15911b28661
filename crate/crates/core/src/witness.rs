//! Explicit extremal sets.
//!
//! [`witness_chi_hat_h`] builds a generating set of size `v(n, h)` whose
//! `h`-fold sumset is not the whole group, by induction on the order:
//!
//! 1. if some proper divisor `d0 < n` attains `v(n, h)`, build a witness in a
//!    quotient of order `d0` and take its full preimage;
//! 2. otherwise, for `n = p` prime, take the interval `{1, ..., floor((p-2)/h) + 1}`;
//! 3. otherwise every invariant factor satisfies `n_i = 1 (mod h)`; take the
//!    union of the blocks `Z_{n_1} x ... x Z_{n_{i-1}} x {1, ..., (n_i - 1)/h} x {0}^{r-i}`,
//!    whose sumsets never contain 0.
//!
//! [`witness_prop_bound`] and [`prop_bound_search`] build lower-bound sets for
//! `chi^(G, [0,s])` as preimages of `{0} u B_1 u ... u B_t` where `B_i` is the
//! interval `{1, ..., c_i}` placed on the `i`-th coordinate of a quotient.
//!
//! Every constructor checks its own output before returning it.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::arith::{ceil_div, divisors, is_prime};
use crate::error::{Error, Result};
use crate::formula::max_incomplete;
use crate::group::{Group, GroupType};
use crate::quotient::QuotientSpec;
use crate::subgroup::is_generating;
use crate::subset::GroupSubset;
use crate::sumset::{hfold_sumset, interval_sumset, is_complete};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessMode {
    Hfold(u32),
    Interval(u32),
}

/// An extremal set together with the results of checking it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WitnessWire", into = "WitnessWire")]
pub struct WitnessCertificate {
    pub group: GroupType,
    pub mode: WitnessMode,
    pub set: GroupSubset,
    pub claimed_size: u64,
    pub generates: bool,
    pub incomplete: bool,
    /// Construction steps, outermost first, e.g. `["quotient:2", "prime"]`.
    pub route: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct WitnessWire {
    group: GroupType,
    mode: WitnessMode,
    claimed_size: u64,
    generates: bool,
    incomplete: bool,
    route: Vec<String>,
    elements: Vec<Vec<u64>>,
    hex: String,
}

impl From<WitnessCertificate> for WitnessWire {
    fn from(c: WitnessCertificate) -> Self {
        WitnessWire {
            elements: c.set.to_coords(),
            hex: c.set.to_hex(),
            group: c.group,
            mode: c.mode,
            claimed_size: c.claimed_size,
            generates: c.generates,
            incomplete: c.incomplete,
            route: c.route,
        }
    }
}

impl TryFrom<WitnessWire> for WitnessCertificate {
    type Error = Error;

    fn try_from(w: WitnessWire) -> Result<Self> {
        let group = Group::new(w.group.clone())?;
        let set = decode_set(&group, &w.elements, &w.hex)?;
        let cert = WitnessCertificate {
            group: w.group,
            mode: w.mode,
            set,
            claimed_size: w.claimed_size,
            generates: w.generates,
            incomplete: w.incomplete,
            route: w.route,
        };
        cert.recheck()?;
        Ok(cert)
    }
}

fn decode_set(group: &Group, elements: &[Vec<u64>], hex: &str) -> Result<GroupSubset> {
    let set = GroupSubset::from_coords(group, elements)?;
    if GroupSubset::from_hex(group, hex)? != set {
        return Err(Error::ConditionViolated(
            "element list and hex form describe different sets".into(),
        ));
    }
    Ok(set)
}

impl WitnessCertificate {
    fn checked(group: &Group, mode: WitnessMode, set: GroupSubset, route: Vec<String>) -> Result<Self> {
        let generates = is_generating(&set);
        let incomplete = !is_complete(&match mode {
            WitnessMode::Hfold(h) => hfold_sumset(&set, h)?,
            WitnessMode::Interval(s) => interval_sumset(&set, s)?,
        });
        Ok(WitnessCertificate {
            group: group.group_type().clone(),
            mode,
            claimed_size: set.len() as u64,
            set,
            generates,
            incomplete,
            route,
        })
    }

    /// Recomputes every flag and the size; errors if any recorded value differs.
    pub fn recheck(&self) -> Result<()> {
        let group = Group::new(self.group.clone())?;
        let fresh = Self::checked(&group, self.mode, self.set.clone(), self.route.clone())?;
        if fresh != *self {
            return Err(Error::ConditionViolated(format!(
                "recorded checks (size {}, generates {}, incomplete {}) differ from recomputed (size {}, generates {}, incomplete {})",
                self.claimed_size, self.generates, self.incomplete,
                fresh.claimed_size, fresh.generates, fresh.incomplete
            )));
        }
        Ok(())
    }
}

fn h_incomplete_generating(group: &Group, h: u32, route: &mut Vec<String>) -> Result<GroupSubset> {
    let n = group.order() as u64;
    let best = max_incomplete(n, h)?;

    if let Some(&d0) = best.maximizers.iter().find(|&&d| d < n) {
        let q = QuotientSpec::greedy(group, d0)?;
        route.push(format!("quotient:{d0}"));
        let b = h_incomplete_generating(q.quotient(), h, route)?;
        return q.lift_preimage(&b);
    }

    if is_prime(n) {
        route.push("prime".into());
        let top = (n as usize - 2) / h as usize + 1;
        return GroupSubset::from_indices(group, 1..=top);
    }

    route.push("coordinates".into());
    let factors = group.group_type().invariant_factors().to_vec();
    for &m in &factors {
        if (m - 1) % h as u64 != 0 {
            return Err(Error::ConstructionInvariantViolated(format!(
                "{group}: invariant factor {m} is not 1 mod {h} although only d = n attains v({n}, {h})"
            )));
        }
    }
    let mut expected = 0u64;
    let mut prefix = 1u64;
    for &m in &factors {
        expected += prefix * (m - 1) / h as u64;
        prefix *= m;
    }
    if expected != (n - 1) / h as u64 {
        return Err(Error::ConstructionInvariantViolated(format!(
            "{group}: block sizes sum to {expected}, not (n-1)/h"
        )));
    }
    let mut set = GroupSubset::empty(group);
    for index in 0..group.order() {
        let coords = group.decode(index)?;
        // the block is determined by the last nonzero coordinate
        if let Some(i) = coords.iter().rposition(|&c| c != 0) {
            if coords[i] <= (factors[i] - 1) / h as u64 {
                set.insert(index);
            }
        }
    }
    if set.len() as u64 != expected {
        return Err(Error::ConstructionInvariantViolated(format!(
            "{group}: built {} elements, blocks promise {expected}",
            set.len()
        )));
    }
    Ok(set)
}

/// A generating set of size `v(n, h)` whose `h`-fold sumset is not the group.
pub fn witness_chi_hat_h(ty: &GroupType, h: u32) -> Result<WitnessCertificate> {
    if h == 0 {
        return Err(Error::InvalidH(h));
    }
    let group = Group::new(ty.clone())?;
    let mut route = Vec::new();
    let set = h_incomplete_generating(&group, h, &mut route)?;
    let cert = WitnessCertificate::checked(&group, WitnessMode::Hfold(h), set, route)?;
    let target = max_incomplete(ty.order(), h)?.value;
    if cert.claimed_size != target || !cert.generates || !cert.incomplete {
        return Err(Error::ConstructionInvariantViolated(format!(
            "{ty}, h = {h}: size {} (want {target}), generates {}, incomplete {}",
            cert.claimed_size, cert.generates, cert.incomplete
        )));
    }
    Ok(cert)
}

/// A set of size `v(n, s)` with `[0,s]A` not the group: the `s`-fold witness
/// translated so that it contains 0, which makes `[0,s]A = sA`.
pub fn witness_chi_interval(ty: &GroupType, s: u32) -> Result<WitnessCertificate> {
    let base = witness_chi_hat_h(ty, s)?;
    let group = Group::new(ty.clone())?;
    let a0 = base.set.iter().next().ok_or(Error::EmptySet)?;
    let shifted = base.set.translated(group.neg_index(a0));
    let mut route = base.route;
    route.push(format!("translate:-{a0}"));
    let cert = WitnessCertificate::checked(&group, WitnessMode::Interval(s), shifted, route)?;
    if cert.claimed_size != base.claimed_size || !cert.incomplete {
        return Err(Error::ConstructionInvariantViolated(format!(
            "{ty}, s = {s}: translated witness is not [0,s]-incomplete"
        )));
    }
    Ok(cert)
}

/// A lower bound for `chi^(G, [0,s])` realized by an explicit set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BoundWire", into = "BoundWire")]
pub struct BoundCertificate {
    pub group: GroupType,
    pub s: u32,
    /// Type `(d_1, ..., d_t)` of the quotient; empty for the trivial bound.
    pub quotient_type: Vec<u64>,
    pub c_vector: Vec<u64>,
    pub bound: u64,
    /// `None` only for the trivial bound 1.
    pub witness: Option<GroupSubset>,
    pub generates: bool,
    pub incomplete: bool,
}

#[derive(Serialize, Deserialize)]
struct BoundWire {
    group: GroupType,
    s: u32,
    quotient_type: Vec<u64>,
    c_vector: Vec<u64>,
    bound: u64,
    generates: bool,
    incomplete: bool,
    elements: Option<Vec<Vec<u64>>>,
    hex: Option<String>,
}

impl From<BoundCertificate> for BoundWire {
    fn from(c: BoundCertificate) -> Self {
        BoundWire {
            elements: c.witness.as_ref().map(GroupSubset::to_coords),
            hex: c.witness.as_ref().map(GroupSubset::to_hex),
            group: c.group,
            s: c.s,
            quotient_type: c.quotient_type,
            c_vector: c.c_vector,
            bound: c.bound,
            generates: c.generates,
            incomplete: c.incomplete,
        }
    }
}

impl TryFrom<BoundWire> for BoundCertificate {
    type Error = Error;

    fn try_from(w: BoundWire) -> Result<Self> {
        let witness = match (&w.elements, &w.hex) {
            (Some(e), Some(h)) => Some(decode_set(&Group::new(w.group.clone())?, e, h)?),
            (None, None) => None,
            _ => {
                return Err(Error::ConditionViolated(
                    "bound witness needs both elements and hex".into(),
                ))
            }
        };
        let cert = BoundCertificate {
            group: w.group,
            s: w.s,
            quotient_type: w.quotient_type,
            c_vector: w.c_vector,
            bound: w.bound,
            witness,
            generates: w.generates,
            incomplete: w.incomplete,
        };
        cert.recheck()?;
        Ok(cert)
    }
}

impl BoundCertificate {
    fn trivial(ty: &GroupType, s: u32) -> Self {
        BoundCertificate {
            group: ty.clone(),
            s,
            quotient_type: Vec::new(),
            c_vector: Vec::new(),
            bound: 1,
            witness: None,
            generates: false,
            incomplete: false,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.witness.is_none()
    }

    /// Rebuilds the certificate from its parameters and compares.
    pub fn recheck(&self) -> Result<()> {
        let fresh = if self.quotient_type.is_empty() {
            Self::trivial(&self.group, self.s)
        } else {
            witness_prop_bound(&self.group, &self.quotient_type, &self.c_vector, self.s)?
        };
        if fresh != *self {
            return Err(Error::ConditionViolated(
                "bound certificate differs from its reconstruction".into(),
            ));
        }
        Ok(())
    }
}

/// Checks that `(d_1, ..., d_t)` is a quotient type of `ty`: a divisibility
/// chain of factors >= 2 with `t <= r` and `d_i | n_{r-t+i}`.
pub fn quotient_type_feasible(ty: &GroupType, quotient_type: &[u64]) -> bool {
    let n = ty.invariant_factors();
    let (r, t) = (n.len(), quotient_type.len());
    t >= 1
        && t <= r
        && quotient_type.iter().all(|&d| d >= 2)
        && quotient_type.windows(2).all(|w| w[1] % w[0] == 0)
        && quotient_type
            .iter()
            .enumerate()
            .all(|(i, &d)| n[r - t + i] % d == 0)
}

fn prop_condition(quotient_type: &[u64], c: &[u64]) -> u64 {
    quotient_type
        .iter()
        .zip(c)
        .map(|(&d, &ci)| ceil_div(d - 1, ci))
        .sum()
}

/// The lower-bound set for one quotient type and one choice of `c_i`.
pub fn witness_prop_bound(
    ty: &GroupType,
    quotient_type: &[u64],
    c_vector: &[u64],
    s: u32,
) -> Result<BoundCertificate> {
    if s == 0 {
        return Err(Error::InvalidS(s));
    }
    if !quotient_type_feasible(ty, quotient_type) {
        return Err(Error::QuotientUnavailable(format!(
            "{ty} has no quotient of type {quotient_type:?}"
        )));
    }
    if c_vector.len() != quotient_type.len() {
        return Err(Error::ConditionViolated(format!(
            "c has {} entries for a quotient of rank {}",
            c_vector.len(),
            quotient_type.len()
        )));
    }
    if let Some((d, c)) = quotient_type
        .iter()
        .zip(c_vector)
        .find(|(&d, &c)| c < 1 || c > d - 1)
    {
        return Err(Error::ConditionViolated(format!("c = {c} not in 1..={}", d - 1)));
    }
    let reach = prop_condition(quotient_type, c_vector);
    if reach < s as u64 + 1 {
        return Err(Error::ConditionViolated(format!(
            "sum of ceil((d_i - 1)/c_i) is {reach}, below s + 1 = {}",
            s + 1
        )));
    }

    let group = Group::new(ty.clone())?;
    let (r, t) = (group.rank(), quotient_type.len());
    let mut e = vec![1u64; r];
    e[r - t..].copy_from_slice(quotient_type);
    let q = QuotientSpec::from_divisor_vector(&group, &e)?;

    let k = q.quotient();
    let mut b = GroupSubset::singleton(k, 0)?;
    for (i, &ci) in c_vector.iter().enumerate() {
        for x in 1..=ci {
            let mut coords = vec![0u64; t];
            coords[i] = x;
            b.insert(k.encode(&coords)?);
        }
    }
    let set = q.lift_preimage(&b)?;

    let n = ty.order();
    let d = q.index_d();
    let size = (1 + c_vector.iter().sum::<u64>()) * (n / d);
    let generates = is_generating(&set);
    let incomplete = !is_complete(&interval_sumset(&set, s)?);
    if set.len() as u64 != size || !generates || !incomplete {
        return Err(Error::ConstructionInvariantViolated(format!(
            "{ty}, quotient {quotient_type:?}, c = {c_vector:?}, s = {s}: size {} (want {size}), generates {generates}, incomplete {incomplete}",
            set.len()
        )));
    }
    Ok(BoundCertificate {
        group: ty.clone(),
        s,
        quotient_type: quotient_type.to_vec(),
        c_vector: c_vector.to_vec(),
        bound: size + 1,
        witness: Some(set),
        generates,
        incomplete,
    })
}

/// Every quotient type of `ty`, ordered by rank and then lexicographically.
pub fn feasible_quotient_types(ty: &GroupType) -> Vec<Vec<u64>> {
    fn extend(slots: &[u64], prev: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let Some((&n, rest)) = slots.split_first() else {
            out.push(cur.clone());
            return;
        };
        for d in divisors(n).expect("n >= 2") {
            if d >= 2 && d % prev == 0 {
                cur.push(d);
                extend(rest, d, cur, out);
                cur.pop();
            }
        }
    }
    let n = ty.invariant_factors();
    let mut out = Vec::new();
    for t in 1..=n.len() {
        extend(&n[n.len() - t..], 1, &mut Vec::new(), &mut out);
    }
    out
}

/// Ranks candidates: larger bound first, then smaller index `d`, then
/// lexicographically smaller quotient type and `c`.
fn better(a: (u64, u64, &[u64], &[u64]), b: (u64, u64, &[u64], &[u64])) -> bool {
    b.0.cmp(&a.0)
        .then(a.1.cmp(&b.1))
        .then(a.2.cmp(b.2))
        .then(a.3.cmp(b.3))
        == Ordering::Less
}

/// Steps `c` to its lexicographic successor with `1 <= c_i <= d_i - 1`.
fn next_lex(c: &mut [u64], quotient_type: &[u64]) -> bool {
    for i in (0..c.len()).rev() {
        if c[i] < quotient_type[i] - 1 {
            c[i] += 1;
            c[i + 1..].iter_mut().for_each(|x| *x = 1);
            return true;
        }
    }
    false
}

/// The best lower bound obtainable from any quotient and any admissible `c`.
pub fn prop_bound_search(ty: &GroupType, s: u32) -> Result<BoundCertificate> {
    if s == 0 {
        return Err(Error::InvalidS(s));
    }
    let n = ty.order();
    let mut best: Option<(u64, u64, Vec<u64>, Vec<u64>)> = None;
    for qt in feasible_quotient_types(ty) {
        let d: u64 = qt.iter().product();
        let mut c = vec![1u64; qt.len()];
        loop {
            if prop_condition(&qt, &c) > s as u64 {
                let bound = (1 + c.iter().sum::<u64>()) * (n / d) + 1;
                let take = match &best {
                    None => true,
                    Some((bb, bd, bq, bc)) => better((bound, d, &qt, &c), (*bb, *bd, bq, bc)),
                };
                if take {
                    best = Some((bound, d, qt.clone(), c.clone()));
                }
            }
            if !next_lex(&mut c, &qt) {
                break;
            }
        }
    }
    match best {
        Some((_, _, qt, c)) => witness_prop_bound(ty, &qt, &c, s),
        None => Ok(BoundCertificate::trivial(ty, s)),
    }
}
