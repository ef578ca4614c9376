//! Multi-sequences `a: N^r -> Q` and the operator calculus on them.
//!
//! A sequence is a [`SequenceRule`]: a total, deterministic evaluation
//! function with a write-once memo. The difference operator `delta` shifts
//! one coordinate up, so rules (not finite tables) are the working
//! representation; [`MultiSequenceTable`] is only a materialized window.
//!
//! Axes are 0-based throughout the library.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exact::{binomial, format_rational, from_biguint, pow, Rational};

/// A box `[0, e_1) x ... x [0, e_r)` of index vectors, every extent `>= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexBox {
    extents: Vec<usize>,
}

impl IndexBox {
    pub fn new(extents: Vec<usize>) -> Result<Self> {
        if extents.is_empty() || extents.contains(&0) {
            return Err(Error::InvalidSpec(format!(
                "box extents must be nonempty and >= 1, got {extents:?}"
            )));
        }
        Ok(Self { extents })
    }

    /// The box `[0, max]^r`.
    pub fn cube(arity: usize, max: usize) -> Self {
        Self {
            extents: vec![max + 1; arity.max(1)],
        }
    }

    /// The box of all indices componentwise `<= upper`.
    pub fn up_to(upper: &[usize]) -> Self {
        Self {
            extents: upper.iter().map(|u| u + 1).collect(),
        }
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn arity(&self) -> usize {
        self.extents.len()
    }

    pub fn cell_count(&self) -> u128 {
        self.extents
            .iter()
            .try_fold(1u128, |acc, &e| acc.checked_mul(e as u128))
            .unwrap_or(u128::MAX)
    }

    /// Row-major (lexicographic) enumeration.
    pub fn points(&self) -> BoxPoints<'_> {
        BoxPoints {
            extents: &self.extents,
            current: Some(vec![0; self.extents.len()]),
        }
    }

    pub fn contains(&self, n: &[usize]) -> bool {
        n.len() == self.extents.len() && n.iter().zip(&self.extents).all(|(a, e)| a < e)
    }

    /// Row-major offset of `n`, if inside.
    pub fn offset(&self, n: &[usize]) -> Option<usize> {
        if !self.contains(n) {
            return None;
        }
        Some(
            n.iter()
                .zip(&self.extents)
                .fold(0usize, |acc, (i, e)| acc * e + i),
        )
    }
}

pub struct BoxPoints<'a> {
    extents: &'a [usize],
    current: Option<Vec<usize>>,
}

impl Iterator for BoxPoints<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        for axis in (0..next.len()).rev() {
            next[axis] += 1;
            if next[axis] < self.extents[axis] {
                self.current = Some(next);
                break;
            }
            next[axis] = 0;
        }
        Some(out)
    }
}

type EvalFn = dyn Fn(&[usize]) -> Rational + Send + Sync;

struct RuleInner {
    arity: usize,
    eval: Box<EvalFn>,
    memo: RwLock<HashMap<Vec<usize>, Rational>>,
}

/// A multi-sequence given by an evaluation rule. Cloning shares the rule and
/// its memo.
#[derive(Clone)]
pub struct SequenceRule {
    inner: Arc<RuleInner>,
}

impl fmt::Debug for SequenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SequenceRule")
            .field("arity", &self.inner.arity)
            .field("memo_len", &self.memo_len())
            .finish()
    }
}

impl SequenceRule {
    /// Wraps a total, deterministic function on `N^arity`.
    pub fn new<F>(arity: usize, eval: F) -> Self
    where
        F: Fn(&[usize]) -> Rational + Send + Sync + 'static,
    {
        assert!(arity >= 1, "sequence arity must be positive");
        Self {
            inner: Arc::new(RuleInner {
                arity,
                eval: Box::new(eval),
                memo: RwLock::new(HashMap::new()),
            }),
        }
    }

    pub fn constant(arity: usize, value: Rational) -> Self {
        Self::new(arity, move |_| value.clone())
    }

    pub fn zero(arity: usize) -> Self {
        Self::constant(arity, Rational::zero())
    }

    /// `n -> prod_i ratios_i^{n_i}`.
    pub fn geometric(ratios: Vec<Rational>) -> Self {
        let arity = ratios.len();
        Self::new(arity, move |n| {
            ratios
                .iter()
                .zip(n)
                .map(|(x, &e)| pow(x, e))
                .product()
        })
    }

    /// The table's values inside its box, zero outside.
    pub fn from_table(table: MultiSequenceTable) -> Self {
        let arity = table.arity();
        Self::new(arity, move |n| {
            table.get(n).cloned().unwrap_or_else(Rational::zero)
        })
    }

    /// `sum_j c_j a_j` over rules of equal arity.
    pub fn linear_combination(terms: &[(Rational, SequenceRule)]) -> Result<Self> {
        let arity = terms
            .first()
            .map(|(_, a)| a.arity())
            .ok_or_else(|| Error::InvalidSpec("empty linear combination".into()))?;
        if let Some((_, bad)) = terms.iter().find(|(_, a)| a.arity() != arity) {
            return Err(Error::ArityMismatch {
                expected: arity,
                got: bad.arity(),
            });
        }
        let terms = terms.to_vec();
        Ok(Self::new(arity, move |n| {
            terms.iter().map(|(c, a)| c * a.eval(n)).sum()
        }))
    }

    pub fn arity(&self) -> usize {
        self.inner.arity
    }

    /// Evaluates at `n`. Panics if `n.len()` differs from the arity.
    pub fn eval(&self, n: &[usize]) -> Rational {
        assert_eq!(n.len(), self.inner.arity, "index arity mismatch");
        if let Some(v) = self.inner.memo.read().expect("memo poisoned").get(n) {
            return v.clone();
        }
        // the lock is not held here, so rules may evaluate other rules
        let value = (self.inner.eval)(n);
        self.inner
            .memo
            .write()
            .expect("memo poisoned")
            .entry(n.to_vec())
            .or_insert(value)
            .clone()
    }

    pub fn memo_len(&self) -> usize {
        self.inner.memo.read().expect("memo poisoned").len()
    }
}

/// `(delta_axis a)(n) = a(n) - a(n + e_axis)`.
pub fn delta(a: &SequenceRule, axis: usize) -> Result<SequenceRule> {
    let arity = a.arity();
    if axis >= arity {
        return Err(Error::AxisOutOfRange { axis, arity });
    }
    let a = a.clone();
    Ok(SequenceRule::new(arity, move |n| {
        let mut up = n.to_vec();
        up[axis] += 1;
        a.eval(n) - a.eval(&up)
    }))
}

/// `sum_{i <= k} (-1)^{|i|} prod_j C(k_j, i_j) a(base + i)`.
fn alternating_binomial_sum(a: &SequenceRule, k: &[usize], base: &[usize]) -> Rational {
    let mut total = Rational::zero();
    let mut shifted = base.to_vec();
    for i in IndexBox::up_to(k).points() {
        let mut weight = num_bigint::BigUint::from(1u32);
        for (kj, ij) in k.iter().zip(&i) {
            weight *= binomial(*kj, *ij);
        }
        for (s, (b, ij)) in shifted.iter_mut().zip(base.iter().zip(&i)) {
            *s = b + ij;
        }
        let term = from_biguint(weight) * a.eval(&shifted);
        if i.iter().sum::<usize>() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// `(delta_1^{k_1} ... delta_r^{k_r} a)(n)` by the explicit alternating
/// binomial sum over `a(n + i)`, `0 <= i <= k`.
pub fn iterated_delta(a: &SequenceRule, k: &[usize], n: &[usize]) -> Result<Rational> {
    for len in [k.len(), n.len()] {
        if len != a.arity() {
            return Err(Error::ArityMismatch {
                expected: a.arity(),
                got: len,
            });
        }
    }
    Ok(alternating_binomial_sum(a, k, n))
}

/// The inversion operator: `(nabla a)(n) = (delta_1^{n_1} ... delta_r^{n_r} a)(0)`,
/// evaluated as `sum_{i <= n} (-1)^{|i|} prod_j C(n_j, i_j) a(i)`.
pub fn nabla(a: &SequenceRule) -> SequenceRule {
    let arity = a.arity();
    let zero = vec![0; arity];
    let a = a.clone();
    SequenceRule::new(arity, move |n| alternating_binomial_sum(&a, n, &zero))
}

/// A dense window of a multi-sequence in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSequenceTable {
    shape: IndexBox,
    values: Vec<Rational>,
}

impl MultiSequenceTable {
    pub fn new(shape: IndexBox, values: Vec<Rational>) -> Result<Self> {
        if shape.cell_count() != values.len() as u128 {
            return Err(Error::InvalidSpec(format!(
                "table of shape {:?} needs {} values, got {}",
                shape.extents(),
                shape.cell_count(),
                values.len()
            )));
        }
        Ok(Self { shape, values })
    }

    pub fn shape(&self) -> &IndexBox {
        &self.shape
    }

    pub fn arity(&self) -> usize {
        self.shape.arity()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, n: &[usize]) -> Option<&Rational> {
        self.shape.offset(n).map(|o| &self.values[o])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &Rational)> {
        self.shape.points().zip(&self.values)
    }

    /// Header `n1,...,nr,value`, then one row per cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (1..=self.arity()).map(|i| format!("n{i}")).collect();
        out.push_str(&header.join(","));
        out.push_str(",value\n");
        for (n, v) in self.iter() {
            for i in &n {
                out.push_str(&i.to_string());
                out.push(',');
            }
            out.push_str(&format_rational(v));
            out.push('\n');
        }
        out
    }

    /// `{"shape": [...], "values": ["p/q", ...]}`, values row-major.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "shape": self.shape.extents(),
            "values": self.values.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}

/// Evaluates `a` over `shape`, refusing boxes with more than `guard` cells.
pub fn materialize(a: &SequenceRule, shape: &IndexBox, guard: u128) -> Result<MultiSequenceTable> {
    if shape.arity() != a.arity() {
        return Err(Error::ArityMismatch {
            expected: a.arity(),
            got: shape.arity(),
        });
    }
    let cells = shape.cell_count();
    if cells > guard {
        return Err(Error::GuardExceeded {
            what: "table cells",
            count: cells,
            limit: guard,
        });
    }
    let values = shape.points().map(|n| a.eval(&n)).collect();
    MultiSequenceTable::new(shape.clone(), values)
}
