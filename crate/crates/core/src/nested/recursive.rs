use num_traits::Zero;

use super::NestedSumSpec;
use crate::error::{Error, Result};
use crate::exact::{int, pow, Rational};
use crate::multiseq::IndexBox;

/// Values of a nested sum on a box, filled level by level with the
/// depth-reduction recurrence
///
/// ```text
/// c(n) = ( sum_k x_k1 n_k c(n - e_k) + c'(n) ) / (|n| + t_1)
/// ```
///
/// where `c'` is the sum of the reduced spec. The depth-1 level is the
/// monomial `prod_i x_i^n_i`. Every level is written once and then read only.
#[derive(Debug, Clone)]
pub struct RecursiveTable {
    region: IndexBox,
    /// `levels[l]` holds the values of `spec` reduced `l` times.
    levels: Vec<Vec<Rational>>,
}

impl RecursiveTable {
    /// Fills every level on the box `[0, upper]`.
    pub fn build(spec: &NestedSumSpec, upper: &[usize]) -> Result<Self> {
        spec.check_arity(upper)?;
        let region = IndexBox::up_to(upper);
        let mut specs = vec![spec.clone()];
        while specs.last().expect("nonempty").p() > 1 {
            let next = specs.last().expect("nonempty").reduce_depth()?;
            specs.push(next);
        }

        let points: Vec<Vec<usize>> = region.points().collect();
        let deepest = specs.last().expect("nonempty");
        let base: Vec<Rational> = points
            .iter()
            .map(|n| {
                deepest
                    .xblocks()
                    .iter()
                    .zip(n)
                    .map(|(b, &e)| pow(&b[0], e))
                    .product()
            })
            .collect();

        let mut levels = vec![base];
        for level_spec in specs.iter().rev().skip(1) {
            let below = levels.last().expect("nonempty");
            let t = &level_spec.tparams()[0];
            let lead: Vec<&Rational> = level_spec.xblocks().iter().map(|b| &b[0]).collect();
            let mut current: Vec<Rational> = Vec::with_capacity(points.len());
            for (offset, n) in points.iter().enumerate() {
                let mut acc = below[offset].clone();
                let mut lower = n.clone();
                for (k, &nk) in n.iter().enumerate() {
                    if nk == 0 || lead[k].is_zero() {
                        continue;
                    }
                    lower[k] -= 1;
                    // row-major order puts n - e_k before n
                    let prev = &current[region.offset(&lower).expect("inside box")];
                    acc += lead[k] * int(nk as i64) * prev;
                    lower[k] += 1;
                }
                let scale = int(n.iter().sum::<usize>() as i64) + t;
                if scale.is_zero() {
                    return Err(Error::Internal(format!("zero denominator in {level_spec} at {n:?}")));
                }
                current.push(acc / scale);
            }
            levels.push(current);
        }
        levels.reverse();
        Ok(Self { region, levels })
    }

    pub fn get(&self, n: &[usize]) -> Option<&Rational> {
        self.region.offset(n).map(|o| &self.levels[0][o])
    }

    /// Value of the nested sum reduced `level` times.
    pub fn get_level(&self, level: usize, n: &[usize]) -> Option<&Rational> {
        let o = self.region.offset(n)?;
        self.levels.get(level).map(|l| &l[o])
    }

    pub fn region(&self) -> &IndexBox {
        &self.region
    }

    /// Number of stored `(level, index)` entries.
    pub fn memo_entries(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }
}

/// Evaluates the nested sum at `n` with the depth-reduction recurrence.
pub fn c_recursive(spec: &NestedSumSpec, n: &[usize]) -> Result<Rational> {
    let table = RecursiveTable::build(spec, n)?;
    Ok(table.get(n).expect("n is the box corner").clone())
}
