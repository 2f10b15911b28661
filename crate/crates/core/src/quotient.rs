//! Quotients by coordinate-wise reduction.
//!
//! A divisor vector `(e_1, ..., e_r)` with `e_i | n_i` defines the
//! homomorphism `(x_1, ..., x_r) -> (x_i mod e_i)` onto `prod Z_{e_i}`; its
//! kernel is the subgroup `H` of index `prod e_i`. Coordinates with `e_i = 1`
//! are dropped from the quotient.

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupType};
use crate::subset::GroupSubset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSpec {
    parent: Group,
    quotient: Group,
    divisor_vector: Vec<u64>,
    // parent coordinate feeding each quotient coordinate
    slots: Vec<usize>,
    index_d: u64,
}

impl QuotientSpec {
    /// Quotient of index `d`, with the divisor vector built greedily from the
    /// largest invariant factor down: `e_i = gcd(n_i, remaining d)`.
    pub fn greedy(parent: &Group, d: u64) -> Result<Self> {
        let n = parent.order() as u64;
        if d <= 1 || n % d != 0 {
            return Err(Error::InvalidIndex { index: d, order: n });
        }
        let mut rest = d;
        let mut e = vec![1u64; parent.rank()];
        for (slot, &f) in parent.factors().iter().enumerate().rev() {
            e[slot] = gcd(f, rest);
            rest /= e[slot];
        }
        if rest != 1 {
            return Err(Error::ConstructionInvariantViolated(format!(
                "greedy divisor vector for index {d} in {parent} left {rest} unabsorbed"
            )));
        }
        Self::from_divisor_vector(parent, &e)
    }

    /// Quotient defined by an explicit divisor vector. The entries other than 1
    /// must form a divisibility chain so that they are the quotient's type.
    pub fn from_divisor_vector(parent: &Group, e: &[u64]) -> Result<Self> {
        if e.len() != parent.rank() {
            return Err(Error::SpecMismatch(format!(
                "divisor vector of length {} for rank {}",
                e.len(),
                parent.rank()
            )));
        }
        for (&ei, &ni) in e.iter().zip(parent.factors()) {
            if ei == 0 || ni % ei != 0 {
                return Err(Error::InvalidDivisor { divisor: ei, order: ni });
            }
        }
        let slots: Vec<usize> = (0..e.len()).filter(|&i| e[i] > 1).collect();
        let factors: Vec<u64> = slots.iter().map(|&i| e[i]).collect();
        let index_d: u64 = factors.iter().product();
        if factors.is_empty() {
            return Err(Error::InvalidIndex {
                index: 1,
                order: parent.order() as u64,
            });
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::QuotientUnavailable(format!(
                "divisor vector {e:?} is not a divisibility chain"
            )));
        }
        let ty = GroupType::new(&factors)?;
        debug_assert_eq!(ty.invariant_factors(), &factors[..]);
        Ok(QuotientSpec {
            parent: parent.clone(),
            quotient: Group::new(ty)?,
            divisor_vector: e.to_vec(),
            slots,
            index_d,
        })
    }

    pub fn parent(&self) -> &Group {
        &self.parent
    }

    pub fn quotient(&self) -> &Group {
        &self.quotient
    }

    pub fn divisor_vector(&self) -> &[u64] {
        &self.divisor_vector
    }

    pub fn index_d(&self) -> u64 {
        self.index_d
    }

    fn project_coords(&self, coords: &[u64]) -> Vec<u64> {
        self.slots
            .iter()
            .map(|&i| coords[i] % self.divisor_vector[i])
            .collect()
    }

    /// The canonical map `G -> G/H`.
    pub fn project(&self, a: &Element) -> Result<Element> {
        let index = self.parent.encode(a.coords()).map_err(|_| {
            Error::SpecMismatch(format!("{a:?} is not an element of {}", self.parent))
        })?;
        if index != a.index() {
            return Err(Error::SpecMismatch(format!("{a:?} is not an element of {}", self.parent)));
        }
        self.quotient.element(&self.project_coords(a.coords()))
    }

    pub fn project_index(&self, index: usize) -> usize {
        let coords = self.parent.decode(index).expect("index in range");
        self.quotient
            .encode(&self.project_coords(&coords))
            .expect("projection lands in the quotient")
    }

    /// `pi^{-1}(B)`.
    pub fn lift_preimage(&self, b: &GroupSubset) -> Result<GroupSubset> {
        if b.group() != &self.quotient {
            return Err(Error::SpecMismatch(format!(
                "subset of {} lifted through a quotient onto {}",
                b.group(),
                self.quotient
            )));
        }
        GroupSubset::from_indices(
            &self.parent,
            (0..self.parent.order()).filter(|&i| b.contains(self.project_index(i))),
        )
    }
}
