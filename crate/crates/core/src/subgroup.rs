use crate::subset::GroupSubset;

/// `<A>`: closure of `A u {0}` under addition and negation.
pub fn subgroup_generated(a: &GroupSubset) -> GroupSubset {
    let group = a.group();
    if let (Some(k), Some(x)) = (group.mask_kernel(), a.mask()) {
        return GroupSubset::from_words(group, vec![k.closure(x)]);
    }
    let gens: Vec<usize> = a.union(&a.negated()).expect("same group").iter().collect();
    let mut acc = GroupSubset::singleton(group, 0).expect("0 is an element");
    let mut frontier: Vec<usize> = vec![0];
    while let Some(x) = frontier.pop() {
        for &g in &gens {
            let y = group.add_index(x, g);
            if acc.insert(y) {
                frontier.push(y);
            }
        }
    }
    acc
}

/// True when `<A>` is the whole group.
pub fn is_generating(a: &GroupSubset) -> bool {
    subgroup_generated(a).is_full()
}
