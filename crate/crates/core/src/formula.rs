//! Closed forms for the critical numbers, as exact integer functions.
//!
//! The central quantity is the largest size of an `h`-incomplete subset of a
//! group of order `n`,
//!
//! ```text
//! v(n, h) = max over d | n of f_d(n, h),    f_d(n, h) = (floor((d - 2) / h) + 1) * n / d,
//! ```
//!
//! where `f_d(n, h)` is the size of the preimage of the interval
//! `{1, ..., floor((d-2)/h) + 1}` under a map onto a cyclic quotient of order `d`.
//! Floor division rounds toward negative infinity, so `f_1(n, h) = 0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, factorize, floor_div, is_prime, isqrt, smallest_prime_factor};
use crate::error::{Error, Result};
use crate::group::GroupType;

/// Which critical number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "tag", content = "param")]
pub enum CriticalKind {
    ChiH(u32),
    ChiInterval(u32),
    ChiHatH(u32),
    ChiHatInterval(u32),
    Cr,
    CrStar,
}

impl CriticalKind {
    /// Rejects `h = 0` and `s = 0`.
    pub fn validate(self) -> Result<Self> {
        match self {
            CriticalKind::ChiH(0) | CriticalKind::ChiHatH(0) => Err(Error::InvalidH(0)),
            CriticalKind::ChiInterval(0) | CriticalKind::ChiHatInterval(0) => Err(Error::InvalidS(0)),
            k => Ok(k),
        }
    }

    /// Restricted to generating sets.
    pub fn is_generating_restricted(self) -> bool {
        matches!(self, CriticalKind::ChiHatH(_) | CriticalKind::ChiHatInterval(_))
    }

    pub fn excludes_zero(self) -> bool {
        self == CriticalKind::CrStar
    }

    pub fn name(self) -> &'static str {
        match self {
            CriticalKind::ChiH(_) => "chi_h",
            CriticalKind::ChiInterval(_) => "chi_interval",
            CriticalKind::ChiHatH(_) => "chi_hat_h",
            CriticalKind::ChiHatInterval(_) => "chi_hat_interval",
            CriticalKind::Cr => "cr",
            CriticalKind::CrStar => "cr_star",
        }
    }

    pub fn parameter(self) -> Option<u32> {
        match self {
            CriticalKind::ChiH(p)
            | CriticalKind::ChiInterval(p)
            | CriticalKind::ChiHatH(p)
            | CriticalKind::ChiHatInterval(p) => Some(p),
            CriticalKind::Cr | CriticalKind::CrStar => None,
        }
    }

    /// Builds a kind from its name and optional parameter.
    pub fn from_parts(name: &str, param: Option<u32>) -> Result<Self> {
        let need = |p: Option<u32>| {
            p.ok_or_else(|| Error::Parse {
                position: 0,
                message: format!("{name} needs a parameter"),
            })
        };
        let kind = match name {
            "chi_h" => CriticalKind::ChiH(need(param)?),
            "chi_interval" => CriticalKind::ChiInterval(need(param)?),
            "chi_hat_h" => CriticalKind::ChiHatH(need(param)?),
            "chi_hat_interval" => CriticalKind::ChiHatInterval(need(param)?),
            "cr" => CriticalKind::Cr,
            "cr_star" => CriticalKind::CrStar,
            other => {
                return Err(Error::Parse {
                    position: 0,
                    message: format!("unknown quantity {other:?}"),
                })
            }
        };
        kind.validate()
    }
}

impl fmt::Display for CriticalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parameter() {
            Some(p) => write!(f, "{}({p})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// Parses `chi_h(2)`, `chi_hat_interval(3)`, `cr`, `cr_star`.
impl FromStr for CriticalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('(') {
            Some((name, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| Error::Parse {
                    position: s.len(),
                    message: "missing ')'".into(),
                })?;
                let p = inner.trim().parse().map_err(|_| Error::Parse {
                    position: name.len() + 1,
                    message: format!("bad parameter {inner:?}"),
                })?;
                CriticalKind::from_parts(name, Some(p))
            }
            None => CriticalKind::from_parts(s, None),
        }
    }
}

fn check_h(h: u32) -> Result<()> {
    if h == 0 {
        return Err(Error::InvalidH(h));
    }
    Ok(())
}

/// `f_d(n, h) = (floor((d - 2) / h) + 1) * n / d` for a divisor `d` of `n`.
pub fn lifted_interval_size(n: u64, d: u64, h: u32) -> Result<u64> {
    check_h(h)?;
    if d == 0 || n == 0 || n % d != 0 {
        return Err(Error::InvalidDivisor { divisor: d, order: n });
    }
    let blocks = floor_div(d as i64 - 2, h as i64) + 1;
    Ok(blocks as u64 * (n / d))
}

/// `v(n, h)` together with every divisor attaining it (ascending).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxIncomplete {
    pub value: u64,
    pub maximizers: Vec<u64>,
}

/// `v(n, h) = max { f_d(n, h) : d | n }`: the largest size of a subset whose
/// `h`-fold sumset misses part of the group.
pub fn max_incomplete(n: u64, h: u32) -> Result<MaxIncomplete> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    check_h(h)?;
    let mut best = MaxIncomplete {
        value: 0,
        maximizers: Vec::new(),
    };
    for d in divisors(n)? {
        let f = lifted_interval_size(n, d, h)?;
        if f > best.value {
            best.value = f;
            best.maximizers.clear();
        }
        if f == best.value {
            best.maximizers.push(d);
        }
    }
    Ok(best)
}

pub fn max_incomplete_size(n: u64, h: u32) -> Result<u64> {
    Ok(max_incomplete(n, h)?.value)
}

/// `chi(G, h) = v(n, h) + 1`.
pub fn chi_h(n: u64, h: u32) -> Result<u64> {
    Ok(max_incomplete_size(n, h)? + 1)
}

/// `chi(G, [0,s]) = chi(G, s) = v(n, s) + 1`.
pub fn chi_interval(n: u64, s: u32) -> Result<u64> {
    if s == 0 {
        return Err(Error::InvalidS(s));
    }
    chi_h(n, s)
}

/// `chi^(G, h)`; equal to `chi(G, h)` for every group.
pub fn chi_hat_h(n: u64, h: u32) -> Result<u64> {
    chi_h(n, h)
}

/// Which branch of the subset-sum critical number formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrBranch {
    /// Cyclic of prime order, or of order `pq` with `3 <= p <= q <= p + floor(2 sqrt(p-2)) + 1`.
    SquareRoot,
    /// `n/p + p - 2` with `p` the smallest prime divisor.
    SmallestPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrPair {
    pub cr_star: u64,
    pub cr: u64,
    pub branch: CrBranch,
}

/// `(cr*(G), cr(G))` for `|G| >= 10`.
pub fn cr_pair(ty: &GroupType) -> Result<CrPair> {
    let n = ty.order();
    if n < 10 {
        return Err(Error::OutsideTheoremDomain(format!(
            "subset-sum critical numbers are given in closed form only for order >= 10, got {n}"
        )));
    }
    let p = smallest_prime_factor(n).expect("n >= 10");
    let q = n / p;
    let square_root_case = ty.is_cyclic()
        && (is_prime(n) || (p >= 3 && is_prime(q) && q <= p + isqrt(4 * (p - 2)) + 1));
    let (cr_star, branch) = if square_root_case {
        (isqrt(4 * (n - 2)), CrBranch::SquareRoot)
    } else {
        (n / p + p - 2, CrBranch::SmallestPrime)
    };
    Ok(CrPair {
        cr_star,
        cr: cr_star + 1,
        branch,
    })
}

/// Whether a group of this type has a subgroup of order `m` that is not an
/// elementary abelian 2-group.
///
/// If `m` has an odd prime factor, any subgroup of order `m` contains an
/// element of odd order. If `m = 2^k`, such a subgroup exists iff `k >= 2`,
/// `2^k` divides the order of the Sylow 2-subgroup and that subgroup has
/// exponent at least 4.
pub fn has_non_elementary_subgroup(ty: &GroupType, m: u64) -> bool {
    let n = ty.order();
    if m < 2 || n % m != 0 {
        return false;
    }
    let factors = factorize(m);
    if factors.iter().any(|&(p, _)| p != 2) {
        return true;
    }
    let k = factors[0].1;
    let sylow2 = ty.sylow_factors(2);
    let sylow_order: u64 = sylow2.iter().product();
    let sylow_exp = sylow2.last().copied().unwrap_or(1);
    k >= 2 && sylow_order % m == 0 && sylow_exp >= 4
}

/// Result of the `[0,3]` closed form before any domain guard.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval3Value {
    pub value: u64,
    /// The least qualifying subgroup order, if any.
    pub subgroup_order: Option<u64>,
}

/// The `[0,3]` closed form with only the class check, no small-order guard.
pub fn chi_hat_interval3_raw(ty: &GroupType) -> Result<Interval3Value> {
    if ty.is_elementary_2() {
        return Err(Error::WrongGroupClass(format!(
            "{ty} is an elementary abelian 2-group"
        )));
    }
    let n = ty.order();
    let m = divisors(n)?
        .into_iter()
        .find(|&m| m % 3 == 2 && has_non_elementary_subgroup(ty, m));
    let value = match m {
        Some(m) => (m + 1) * (n / m) / 3 + 1,
        None => n / 3 + 1,
    };
    Ok(Interval3Value {
        value,
        subgroup_order: m,
    })
}

/// Least order `m` below which the `[0,3]` closed form is not applied.
pub const INTERVAL3_MIN_ORDER: u64 = 5;

/// `chi^(G, [0,3])` for groups that are not elementary abelian 2-groups, order >= 5.
pub fn chi_hat_interval3(ty: &GroupType) -> Result<u64> {
    let raw = chi_hat_interval3_raw(ty)?;
    if ty.order() < INTERVAL3_MIN_ORDER {
        return Err(Error::OutsideValidatedDomain(format!(
            "the [0,3] closed form disagrees with exhaustive search below order {INTERVAL3_MIN_ORDER} (got order {})",
            ty.order()
        )));
    }
    Ok(raw.value)
}

/// `chi^(Z_n, [0,s])`: 1 when `n <= s + 1`, else `max { f_d(n, s) : d | n, d >= s + 2 } + 1`.
pub fn chi_hat_cyclic(n: u64, s: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidOrder(n));
    }
    if s == 0 {
        return Err(Error::InvalidS(s));
    }
    if n <= s as u64 + 1 {
        return Ok(1);
    }
    let mut best = 0;
    for d in divisors(n)?.into_iter().filter(|&d| d >= s as u64 + 2) {
        best = best.max(lifted_interval_size(n, d, s)?);
    }
    Ok(best + 1)
}

/// `chi^(Z_2^r, [0,s])` for `s >= 2`.
pub fn chi_hat_2group(r: u32, s: u32) -> Result<u64> {
    if s < 2 {
        return Err(Error::OutsideTheoremDomain(format!(
            "the elementary 2-group closed form needs s >= 2, got {s}"
        )));
    }
    if r == 0 {
        return Err(Error::InvalidOrder(1));
    }
    if r <= s {
        return Ok(1);
    }
    Ok((s as u64 + 2) * (1u64 << (r - s - 1)) + 1)
}

/// Maximum size of a sum-free subset of `Z_n`, piecewise in the smallest
/// prime divisor congruent to 2 mod 3.
pub fn sumfree_bound(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let p = factorize(n).into_iter().map(|(p, _)| p).find(|p| p % 3 == 2);
    Ok(match p {
        Some(p) => (p + 1) * (n / p) / 3,
        None => n / 3,
    })
}

/// A closed-form value and where it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaValue {
    pub value: u64,
    pub branch: String,
}

/// Dispatches to the closed form for `kind` on `ty`.
///
/// For `chi_hat_interval` only the cases with a known closed form are
/// answered, tried in this order: cyclic, elementary 2-groups with s >= 2,
/// s = 1, s = 2, s = 3. Anything else is `OutsideTheoremDomain`. Cyclic
/// groups come first because the `s = 2` value `floor(n/2) + 1` is wrong
/// for `Z_3`, where every generating set is already complete.
pub fn evaluate(ty: &GroupType, kind: CriticalKind) -> Result<FormulaValue> {
    let kind = kind.validate()?;
    let n = ty.order();
    let v_branch = |h: u32| -> Result<FormulaValue> {
        let m = max_incomplete(n, h)?;
        Ok(FormulaValue {
            value: m.value + 1,
            branch: format!("d={}", m.maximizers[0]),
        })
    };
    match kind {
        CriticalKind::ChiH(h) | CriticalKind::ChiHatH(h) | CriticalKind::ChiInterval(h) => v_branch(h),
        CriticalKind::Cr | CriticalKind::CrStar => {
            let pair = cr_pair(ty)?;
            let value = if kind == CriticalKind::Cr { pair.cr } else { pair.cr_star };
            let branch = match pair.branch {
                CrBranch::SquareRoot => "floor(2*sqrt(n-2))",
                CrBranch::SmallestPrime => "n/p+p-2",
            };
            Ok(FormulaValue {
                value,
                branch: branch.into(),
            })
        }
        CriticalKind::ChiHatInterval(s) => {
            let fv = |value, branch: &str| FormulaValue {
                value,
                branch: branch.to_string(),
            };
            if ty.is_cyclic() {
                Ok(fv(chi_hat_cyclic(n, s)?, "cyclic"))
            } else if ty.is_elementary_2() && s >= 2 {
                Ok(fv(chi_hat_2group(ty.rank() as u32, s)?, "elementary_2"))
            } else if s == 1 {
                Ok(fv(n, "s=1"))
            } else if s == 2 && !ty.is_elementary_2() {
                Ok(fv(n / 2 + 1, "s=2"))
            } else if s == 3 {
                let raw = chi_hat_interval3_raw(ty)?;
                chi_hat_interval3(ty)?;
                let branch = match raw.subgroup_order {
                    Some(m) => format!("s=3,m={m}"),
                    None => "s=3,floor".into(),
                };
                Ok(FormulaValue {
                    value: raw.value,
                    branch,
                })
            } else {
                Err(Error::OutsideTheoremDomain(format!(
                    "no closed form for chi_hat_interval({s}) on {ty}"
                )))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> GroupType {
        s.parse().unwrap()
    }

    #[test]
    fn lifted_interval_examples() {
        assert_eq!(lifted_interval_size(10, 10, 2).unwrap(), 5);
        assert_eq!(lifted_interval_size(10, 5, 3).unwrap(), 4);
        for n in 2..50 {
            for h in 1..8 {
                assert_eq!(lifted_interval_size(n, 1, h).unwrap(), 0);
            }
        }
        assert_eq!(
            lifted_interval_size(10, 3, 2),
            Err(Error::InvalidDivisor { divisor: 3, order: 10 })
        );
        assert_eq!(lifted_interval_size(10, 5, 0), Err(Error::InvalidH(0)));
    }

    #[test]
    fn max_incomplete_examples() {
        assert_eq!(max_incomplete_size(10, 2).unwrap(), 5);
        assert_eq!(max_incomplete_size(7, 2).unwrap(), 3);
        for n in 2..200 {
            assert_eq!(max_incomplete_size(n, 1).unwrap(), n - 1);
            assert_eq!(max_incomplete_size(n, 2).unwrap(), n / 2);
        }
        let m = max_incomplete(8, 2).unwrap();
        assert_eq!((m.value, m.maximizers), (4, vec![2, 4, 8]));
        assert_eq!(max_incomplete(8, 3).unwrap().maximizers, vec![2]);
        assert_eq!(max_incomplete_size(1, 2), Err(Error::InvalidOrder(1)));
    }

    #[test]
    fn critical_number_examples() {
        assert_eq!(chi_h(10, 2).unwrap(), 6);
        assert_eq!(chi_interval(10, 2).unwrap(), 6);
        assert_eq!(chi_h(8, 2).unwrap(), 5);
        assert_eq!(chi_hat_h(7, 2).unwrap(), 4);
        assert_eq!(chi_hat_h(8, 3).unwrap(), 5);
        assert_eq!(chi_hat_h(13, 1).unwrap(), 13);
        assert_eq!(chi_interval(10, 0), Err(Error::InvalidS(0)));
    }

    #[test]
    fn cr_examples() {
        let p = cr_pair(&ty("11")).unwrap();
        assert_eq!((p.cr_star, p.cr, p.branch), (6, 7, CrBranch::SquareRoot));
        let p = cr_pair(&ty("15")).unwrap();
        assert_eq!((p.cr_star, p.cr, p.branch), (7, 8, CrBranch::SquareRoot));
        // on the square-root branch for n = pq both forms agree
        assert_eq!(15 / 3 + 3 - 1, 7);
        let p = cr_pair(&ty("2,2,2,2")).unwrap();
        assert_eq!((p.cr_star, p.cr, p.branch), (8, 9, CrBranch::SmallestPrime));
        assert_eq!(cr_pair(&ty("10")).unwrap().cr_star, 5);
        // non-cyclic groups never take the square-root branch
        assert_eq!(cr_pair(&ty("5,5")).unwrap().branch, CrBranch::SmallestPrime);
        assert_eq!(cr_pair(&ty("25")).unwrap().branch, CrBranch::SquareRoot);
        assert!(matches!(cr_pair(&ty("9")), Err(Error::OutsideTheoremDomain(_))));
    }

    #[test]
    fn square_root_branch_matches_smallest_prime_form_for_pq() {
        for n in 10..5000u64 {
            let t = GroupType::cyclic(n).unwrap();
            let pair = cr_pair(&t).unwrap();
            let p = smallest_prime_factor(n).unwrap();
            if pair.branch == CrBranch::SquareRoot && !is_prime(n) {
                assert_eq!(pair.cr_star, n / p + p - 1, "n = {n}");
            }
        }
    }

    #[test]
    fn interval3_examples() {
        assert_eq!(chi_hat_interval3(&ty("5")).unwrap(), 3);
        assert_eq!(chi_hat_interval3(&ty("9")).unwrap(), 4);
        let v = chi_hat_interval3_raw(&ty("2,4")).unwrap();
        assert_eq!((v.value, v.subgroup_order), (4, Some(8)));
        assert!(matches!(chi_hat_interval3(&ty("2,2")), Err(Error::WrongGroupClass(_))));
        assert!(matches!(chi_hat_interval3(&ty("4")), Err(Error::OutsideValidatedDomain(_))));
        assert_eq!(chi_hat_interval3_raw(&ty("3")).unwrap().value, 2);
        assert_eq!(chi_hat_interval3_raw(&ty("4")).unwrap().value, 2);
    }

    #[test]
    fn non_elementary_subgroup_criterion() {
        assert!(has_non_elementary_subgroup(&ty("2,4"), 8));
        assert!(has_non_elementary_subgroup(&ty("2,4"), 4));
        assert!(!has_non_elementary_subgroup(&ty("2,4"), 2));
        assert!(!has_non_elementary_subgroup(&ty("2,2,6"), 8));
        assert!(has_non_elementary_subgroup(&ty("2,2,6"), 6));
        assert!(!has_non_elementary_subgroup(&ty("2,2,6"), 5));
    }

    #[test]
    fn cyclic_and_2group_examples() {
        assert_eq!(chi_hat_cyclic(4, 3).unwrap(), 1);
        assert_eq!(chi_hat_cyclic(10, 3).unwrap(), 5);
        assert_eq!(chi_hat_cyclic(5, 3).unwrap(), 3);
        assert_eq!(chi_hat_2group(4, 2).unwrap(), 9);
        assert_eq!(chi_hat_2group(2, 3).unwrap(), 1);
        assert_eq!(chi_hat_2group(3, 2).unwrap(), 5);
        assert!(matches!(chi_hat_2group(3, 1), Err(Error::OutsideTheoremDomain(_))));
    }

    #[test]
    fn sumfree_examples_and_identity() {
        assert_eq!(sumfree_bound(10).unwrap(), 5);
        assert_eq!(sumfree_bound(9).unwrap(), 3);
        assert_eq!(sumfree_bound(2).unwrap(), 1);
        for n in 2..=10_000 {
            assert_eq!(sumfree_bound(n).unwrap(), max_incomplete_size(n, 3).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn structural_invariants() {
        for n in 2..=300u64 {
            for h in 1..=8 {
                assert!(max_incomplete_size(n, h).unwrap() > (n - 2) / h as u64);
            }
        }
        for n in 2..=200u64 {
            for s in 1..=6 {
                assert!(chi_hat_cyclic(n, s).unwrap() <= chi_interval(n, s).unwrap());
            }
            if n >= 5 {
                let t = GroupType::cyclic(n).unwrap();
                assert_eq!(chi_hat_interval3(&t).unwrap(), chi_hat_cyclic(n, 3).unwrap(), "n = {n}");
            }
        }
    }

    #[test]
    fn easy_cases_agree_with_cyclic_form_except_z3() {
        for n in 3..=200u64 {
            assert_eq!(chi_hat_cyclic(n, 1).unwrap(), n);
            let expected = if n == 3 { 1 } else { n / 2 + 1 };
            assert_eq!(chi_hat_cyclic(n, 2).unwrap(), expected, "n = {n}");
        }
    }

    #[test]
    fn dispatch_branches() {
        let branch = |t: &str, s| evaluate(&ty(t), CriticalKind::ChiHatInterval(s)).map(|v| (v.value, v.branch));
        assert_eq!(branch("3", 2).unwrap(), (1, "cyclic".into()));
        assert_eq!(branch("2,2,2,2", 2).unwrap(), (9, "elementary_2".into()));
        assert_eq!(branch("2,2", 1).unwrap(), (4, "s=1".into()));
        assert_eq!(branch("3,3", 2).unwrap(), (5, "s=2".into()));
        assert_eq!(branch("2,4", 3).unwrap(), (4, "s=3,m=8".into()));
        assert_eq!(branch("3,3", 3).unwrap(), (4, "s=3,floor".into()));
        assert!(matches!(branch("2,4", 5), Err(Error::OutsideTheoremDomain(_))));
        assert_eq!(evaluate(&ty("10"), CriticalKind::ChiH(2)).unwrap().branch, "d=2");
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("chi_h(2)".parse::<CriticalKind>().unwrap(), CriticalKind::ChiH(2));
        assert_eq!("cr_star".parse::<CriticalKind>().unwrap(), CriticalKind::CrStar);
        assert_eq!("chi_hat_h(0)".parse::<CriticalKind>(), Err(Error::InvalidH(0)));
        assert!("chi_h".parse::<CriticalKind>().is_err());
        assert!("bogus".parse::<CriticalKind>().is_err());
        let k = CriticalKind::ChiHatInterval(3);
        assert_eq!(k.to_string().parse::<CriticalKind>().unwrap(), k);
        assert_eq!(serde_json::to_string(&k).unwrap(), r#"{"tag":"chi_hat_interval","param":3}"#);
    }
}
