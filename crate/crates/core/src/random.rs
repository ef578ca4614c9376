//! Seeded parameter grids. Small rationals have numerator in `[-9, 9]` and
//! denominator in `[1, 9]`, so denominators are nontrivial while
//! intermediate integers stay small.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{is_nonpositive_integer, rat, Rational};
use crate::multiseq::{IndexBox, MultiSequenceTable};
use crate::nested::NestedSumSpec;

pub const BOUND: i64 = 9;

#[derive(Debug, Clone)]
pub struct Grid {
    rng: ChaCha8Rng,
}

impl Grid {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// Uniform in `lo..=hi`.
    pub fn between(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    pub fn small_rational(&mut self) -> Rational {
        let num = self.rng.random_range(-BOUND..=BOUND);
        let den = self.rng.random_range(1..=BOUND);
        rat(num, den)
    }

    /// A shift parameter, never a nonpositive integer; negative
    /// non-integers such as `-3/2` are in range.
    pub fn shift_param(&mut self) -> Rational {
        loop {
            let t = self.small_rational();
            if !is_nonpositive_integer(&t) {
                return t;
            }
        }
    }

    pub fn rationals(&mut self, len: usize) -> Vec<Rational> {
        (0..len).map(|_| self.small_rational()).collect()
    }

    pub fn table(&mut self, shape: &IndexBox) -> MultiSequenceTable {
        let values = (0..shape.cell_count()).map(|_| self.small_rational()).collect();
        MultiSequenceTable::new(shape.clone(), values).expect("cell count matches")
    }

    /// A spec with exactly `r` slots and depth `p`.
    pub fn spec(&mut self, r: usize, p: usize) -> NestedSumSpec {
        let xblocks = (0..r).map(|_| self.rationals(p)).collect();
        let tparams = (1..p).map(|_| self.shift_param()).collect();
        NestedSumSpec::new(xblocks, tparams).expect("grid specs satisfy the constraints")
    }

    /// A spec whose blocks over a random slot subset sum to `(c, ..., c)`
    /// componentwise, returned with the 0-based subset and `c`.
    pub fn shift_case(&mut self, max_r: usize, max_p: usize) -> (NestedSumSpec, Vec<usize>, Rational) {
        let r = self.between(1, max_r);
        let p = self.between(1, max_p);
        let mut xblocks: Vec<Vec<Rational>> = (0..r).map(|_| self.rationals(p)).collect();
        let mut subset: Vec<usize> = (0..r).filter(|_| self.below(2) == 1).collect();
        if subset.is_empty() {
            subset.push(self.below(r));
        }
        let c = self.small_rational();
        let (&last, rest) = subset.split_last().expect("nonempty");
        for j in 0..p {
            let others: Rational = rest.iter().map(|&i| &xblocks[i][j]).sum();
            xblocks[last][j] = &c - others;
        }
        let tparams = (1..p).map(|_| self.shift_param()).collect();
        let spec = NestedSumSpec::new(xblocks, tparams).expect("grid specs satisfy the constraints");
        (spec, subset, c)
    }

    /// A spec with `r` uniform in `1..=max_r` and `p` uniform in `1..=max_p`.
    pub fn spec_up_to(&mut self, max_r: usize, max_p: usize) -> NestedSumSpec {
        let r = self.between(1, max_r);
        let p = self.between(1, max_p);
        self.spec(r, p)
    }
}
