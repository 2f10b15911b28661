//! Parsing of group selections and parameter ranges.

use anyhow::{bail, Context, Result};
use critnum::{abelian_types, GroupType};

/// `"7"`, `"2..12"` (inclusive) or `"1,3,5"`.
pub fn parse_range(flag: &str, text: &str) -> Result<Vec<u64>> {
    let bad = |pos: usize, what: &str| {
        anyhow::anyhow!("--{flag} {text:?}: {what} at position {pos}")
    };
    let number = |s: &str, offset: usize| -> Result<u64> {
        s.trim().parse::<u64>().map_err(|_| bad(offset, "expected a non-negative integer"))
    };
    if let Some((lo, hi)) = text.split_once("..") {
        let lo_v = number(lo, 0)?;
        let hi_v = number(hi, lo.len() + 2)?;
        if lo_v > hi_v {
            return Err(bad(0, "empty range"));
        }
        return Ok((lo_v..=hi_v).collect());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        out.push(number(part, offset)?);
        offset += part.len() + 1;
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn parse_params(flag: &str, text: &str) -> Result<Vec<u32>> {
    parse_range(flag, text)?
        .into_iter()
        .map(|v| u32::try_from(v).with_context(|| format!("--{flag} value {v} is too large")))
        .collect()
}

/// Groups named explicitly, then every type of every order in `orders`,
/// sorted by order (then by rank and factors) with duplicates removed.
pub fn collect_groups(groups: &[String], orders: &[u64]) -> Result<Vec<GroupType>> {
    let mut out = Vec::new();
    for g in groups {
        let ty: GroupType = g.parse().with_context(|| format!("--group {g:?}"))?;
        out.push(ty);
    }
    for &n in orders {
        out.extend(abelian_types(n).with_context(|| format!("order {n}"))?);
    }
    if out.is_empty() {
        bail!("no groups selected: pass --group, --order or --max-order");
    }
    // abelian_types already orders types within one order; keep that order
    let mut keyed: Vec<(u64, usize, Vec<u64>, GroupType)> = out
        .into_iter()
        .map(|t| (t.order(), t.rank(), t.invariant_factors().to_vec(), t))
        .collect();
    keyed.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
    keyed.dedup_by(|a, b| a.2 == b.2);
    Ok(keyed.into_iter().map(|k| k.3).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("h", "1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_range("h", "3").unwrap(), vec![3]);
        assert_eq!(parse_range("h", "5,1,3,1").unwrap(), vec![1, 3, 5]);
        let e = parse_range("order", "2..x").unwrap_err().to_string();
        assert!(e.contains("position 3"), "{e}");
        assert!(parse_range("order", "5..2").is_err());
    }

    #[test]
    fn group_collection_is_sorted_and_deduplicated() {
        let g = collect_groups(&["4,2".into(), "8".into()], &[4]).unwrap();
        let names: Vec<String> = g.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["4", "2,2", "8", "2,4"]);
        assert!(collect_groups(&["0".into()], &[]).is_err());
    }
}
