//! Single-word set kernel for groups of order at most 64.
//!
//! A subset is a `u64` whose bit `i` marks the element with index `i`.
//! Translating a set by `g` is a composition of per-coordinate block
//! rotations: for coordinate `i` with stride `s` and modulus `m`, adding `k`
//! moves every bit whose digit is below `m - k` up by `k * s` and every other
//! bit down by `(m - k) * s`.

/// Iterator over the set bit positions of a mask, ascending.
#[derive(Debug, Clone, Copy)]
pub struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

#[derive(Debug, Clone, Copy)]
struct Rotation {
    low: u64,
    up: u32,
    high: u64,
    down: u32,
}

#[derive(Debug, Clone)]
pub struct MaskKernel {
    order: usize,
    full: u64,
    rotations: Vec<Rotation>,
    // rotations[start[g]..start[g + 1]] translate by element g
    start: Vec<usize>,
    neg: Vec<u8>,
}

impl MaskKernel {
    /// `factors` must describe a group of order at most 64.
    pub fn new(factors: &[u64]) -> Self {
        let order: usize = factors.iter().product::<u64>() as usize;
        assert!(order <= 64, "mask kernel needs order <= 64, got {order}");
        let full = if order == 64 { u64::MAX } else { (1u64 << order) - 1 };

        let mut strides = Vec::with_capacity(factors.len());
        let mut acc = 1usize;
        for &f in factors {
            strides.push(acc);
            acc *= f as usize;
        }
        let digit = |idx: usize, c: usize| (idx / strides[c]) % factors[c] as usize;

        // per_coord[c][k] rotates coordinate c by k
        let mut per_coord: Vec<Vec<Rotation>> = Vec::with_capacity(factors.len());
        for (c, &m) in factors.iter().enumerate() {
            let m = m as usize;
            let s = strides[c];
            let mut rots = Vec::with_capacity(m);
            for k in 0..m {
                let mut low = 0u64;
                let mut high = 0u64;
                for idx in 0..order {
                    if digit(idx, c) < m - k {
                        low |= 1 << idx;
                    } else {
                        high |= 1 << idx;
                    }
                }
                rots.push(Rotation {
                    low,
                    up: (k * s) as u32,
                    high,
                    down: ((m - k) * s) as u32,
                });
            }
            per_coord.push(rots);
        }

        let mut rotations = Vec::new();
        let mut start = Vec::with_capacity(order + 1);
        let mut neg = Vec::with_capacity(order);
        for g in 0..order {
            start.push(rotations.len());
            let mut n = 0;
            for (c, &m) in factors.iter().enumerate() {
                let m = m as usize;
                let k = digit(g, c);
                if k != 0 {
                    rotations.push(per_coord[c][k]);
                }
                n += ((m - k) % m) * strides[c];
            }
            neg.push(n as u8);
        }
        start.push(rotations.len());

        MaskKernel {
            order,
            full,
            rotations,
            start,
            neg,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Mask of the whole group.
    #[inline]
    pub fn full(&self) -> u64 {
        self.full
    }

    /// `x + g`.
    #[inline]
    pub fn translate(&self, mut x: u64, g: usize) -> u64 {
        for r in &self.rotations[self.start[g]..self.start[g + 1]] {
            x = ((x & r.low) << r.up) | ((x & r.high) >> r.down);
        }
        x
    }

    /// `-x`.
    pub fn negate(&self, x: u64) -> u64 {
        Bits(x).fold(0, |acc, i| acc | 1 << self.neg[i])
    }

    /// Pairwise sumset `a + b`.
    #[inline]
    pub fn sumset(&self, a: u64, b: u64) -> u64 {
        let mut acc = 0;
        for g in Bits(a) {
            acc |= self.translate(b, g);
            if acc == self.full {
                break;
            }
        }
        acc
    }

    /// `hA` by iterated pairwise folds; `h >= 1`.
    #[inline]
    pub fn hfold(&self, a: u64, h: u32) -> u64 {
        let mut cur = a;
        for _ in 1..h {
            if cur == self.full {
                break;
            }
            cur = self.sumset(a, cur);
        }
        cur
    }

    /// `[0,s]A = {0} u A u 2A u ... u sA`.
    #[inline]
    pub fn interval(&self, a: u64, s: u32) -> u64 {
        let mut cur = 1u64;
        let mut acc = 1u64;
        for _ in 0..s {
            cur = self.sumset(a, cur);
            acc |= cur;
            if acc == self.full {
                break;
            }
        }
        acc
    }

    /// Subset sums, folding each element once: `S <- S u (S + a)`.
    #[inline]
    pub fn subset_sums(&self, a: u64) -> u64 {
        let mut acc = 1u64;
        for g in Bits(a) {
            acc |= self.translate(acc, g);
            if acc == self.full {
                break;
            }
        }
        acc
    }

    /// Subgroup generated by `a` (breadth-first saturation with explicit negatives).
    #[inline]
    pub fn closure(&self, a: u64) -> u64 {
        let gens = a | self.negate(a);
        let mut acc = 1u64;
        loop {
            let mut next = acc;
            for g in Bits(gens) {
                next |= self.translate(next, g);
            }
            if next == acc {
                return acc;
            }
            acc = next;
        }
    }
}
