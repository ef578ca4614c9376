//! Truncated multivariate power series over the rationals and the operator
//! algebra used on exponential generating functions.
//!
//! Coefficients are stored in the ordinary monomial basis: the exponential
//! generating function of `a` has coefficient `a(e) / prod e_i!` at `X^e`.
//! A series knows its degree bound `D`; every stored monomial has total
//! degree `<= D` and everything above `D` is unknown, not zero. Derivatives
//! lower the bound by one.

pub mod identities;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exact::{factorial, format_rational, from_biguint, int, pow, Rational};
use crate::multiseq::{iterated_delta, SequenceRule};

/// Exponent vector, ordered graded-lexicographically: lower total degree
/// first, then `X_1` before `X_2` and so on (`X_1^2 < X_1 X_2 < X_2^2`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponents(pub Vec<usize>);

impl Exponents {
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Every exponent vector in `nvars` variables of total degree `<= max_degree`,
/// in graded-lex order.
pub fn monomials_up_to(nvars: usize, max_degree: usize) -> Vec<Exponents> {
    fn fill(prefix: &mut Vec<usize>, left: usize, slots: usize, out: &mut Vec<Exponents>) {
        if slots == 1 {
            prefix.push(left);
            out.push(Exponents(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in (0..=left).rev() {
            prefix.push(first);
            fill(prefix, left - first, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in 0..=max_degree {
        fill(&mut Vec::with_capacity(nvars), d, nvars, &mut out);
    }
    out
}

fn factorial_weight(e: &[usize]) -> Rational {
    e.iter()
        .map(|&k| from_biguint(factorial(k)))
        .product::<Rational>()
        .recip()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    nvars: usize,
    degree_bound: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl TruncatedSeries {
    pub fn zero(nvars: usize, degree_bound: usize) -> Self {
        assert!(nvars >= 1, "series need at least one variable");
        Self {
            nvars,
            degree_bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, degree_bound: usize, c: Rational) -> Self {
        Self::monomial(nvars, degree_bound, vec![0; nvars], c)
    }

    pub fn one(nvars: usize, degree_bound: usize) -> Self {
        Self::constant(nvars, degree_bound, Rational::one())
    }

    /// `coeff * X^exponents`, or zero if the degree exceeds the bound.
    pub fn monomial(nvars: usize, degree_bound: usize, exponents: Vec<usize>, coeff: Rational) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent arity");
        let mut s = Self::zero(nvars, degree_bound);
        s.add_term(Exponents(exponents), coeff);
        s
    }

    /// `X_var` (0-based).
    pub fn variable(nvars: usize, degree_bound: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        Self::monomial(nvars, degree_bound, e, Rational::one())
    }

    /// The linear form `sum_i coeffs_i X_i`.
    pub fn linear(coeffs: &[Rational], degree_bound: usize) -> Self {
        let mut s = Self::zero(coeffs.len(), degree_bound);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; coeffs.len()];
            e[i] = 1;
            s.add_term(Exponents(e), c.clone());
        }
        s
    }

    /// `exp(c_1 X_1 + ... + c_m X_m)` truncated at degree `D`.
    pub fn exp_linear(c: &[Rational], degree_bound: usize) -> Self {
        let mut s = Self::zero(c.len(), degree_bound);
        for e in monomials_up_to(c.len(), degree_bound) {
            let coeff: Rational = c.iter().zip(&e.0).map(|(ci, &k)| pow(ci, k)).product();
            let coeff = coeff * factorial_weight(&e.0);
            s.add_term(e, coeff);
        }
        s
    }

    /// The exponential generating function `sum a(n) X^n / n!` up to degree `D`.
    pub fn from_sequence(a: &SequenceRule, degree_bound: usize) -> Self {
        let mut s = Self::zero(a.arity(), degree_bound);
        for e in monomials_up_to(a.arity(), degree_bound) {
            let coeff = a.eval(&e.0) * factorial_weight(&e.0);
            s.add_term(e, coeff);
        }
        s
    }

    /// The two-block series in `X_1..X_r, Y_1..Y_r` with coefficient
    /// `(D_1^k_1 ... D_r^k_r a)(n) / (n! k!)` at `X^n Y^k`.
    pub fn f_from_sequence(a: &SequenceRule, degree_bound: usize) -> Self {
        let r = a.arity();
        let mut s = Self::zero(2 * r, degree_bound);
        for e in monomials_up_to(2 * r, degree_bound) {
            let (n, k) = e.0.split_at(r);
            let value = iterated_delta(a, k, n).expect("arity matches by construction");
            let coeff = value * factorial_weight(&e.0);
            s.add_term(e, coeff);
        }
        s
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if e.degree() > self.degree_bound || c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn coeff(&self, exponents: &[usize]) -> Rational {
        self.terms
            .get(&Exponents(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drops terms above `degree_bound`; never raises the bound.
    pub fn truncate(&self, degree_bound: usize) -> Self {
        let bound = degree_bound.min(self.degree_bound);
        Self {
            nvars: self.nvars,
            degree_bound: bound,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() <= bound)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Same nvars and equal coefficients up to the smaller of the two bounds.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.nvars != other.nvars {
            return false;
        }
        let bound = self.degree_bound.min(other.degree_bound);
        self.truncate(bound).terms == other.truncate(bound).terms
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.degree_bound != other.degree_bound {
            return Err(Error::SeriesMismatch(format!(
                "({} vars, degree {}) vs ({} vars, degree {})",
                self.nvars, self.degree_bound, other.nvars, other.degree_bound
            )));
        }
        Ok(())
    }

    fn check_var(&self, var: usize) -> Result<()> {
        if var >= self.nvars {
            return Err(Error::AxisOutOfRange {
                axis: var,
                arity: self.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.nvars, self.degree_bound);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.nvars, self.degree_bound);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                if ea.degree() + eb.degree() > self.degree_bound {
                    // terms are graded, so later eb are no smaller
                    break;
                }
                let e = ea.0.iter().zip(&eb.0).map(|(a, b)| a + b).collect();
                out.add_term(Exponents(e), ca * cb);
            }
        }
        Ok(out)
    }

    /// Partial derivative in `X_var`; the bound drops to `D - 1`.
    pub fn deriv(&self, var: usize) -> Result<Self> {
        self.check_var(var)?;
        if self.degree_bound == 0 {
            return Err(Error::DegreeExhausted);
        }
        let mut out = Self::zero(self.nvars, self.degree_bound - 1);
        for (e, c) in &self.terms {
            let k = e.0[var];
            if k == 0 {
                continue;
            }
            let mut lower = e.0.clone();
            lower[var] -= 1;
            out.add_term(Exponents(lower), c * int(k as i64));
        }
        Ok(out)
    }

    /// `X_var * f`, truncated at the same bound.
    pub fn mul_var(&self, var: usize) -> Result<Self> {
        self.check_var(var)?;
        let mut out = Self::zero(self.nvars, self.degree_bound);
        for (e, c) in &self.terms {
            let mut up = e.0.clone();
            up[var] += 1;
            out.add_term(Exponents(up), c.clone());
        }
        Ok(out)
    }

    /// `xi_x f = sum_i X_i d/dX_i f - sum_i x_i X_i f`. The Euler part keeps
    /// degrees, so the result is exact up to the same bound `D`.
    pub fn xi_apply(&self, x: &[Rational]) -> Result<Self> {
        if x.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: x.len(),
            });
        }
        let mut out = Self::zero(self.nvars, self.degree_bound);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * int(e.degree() as i64));
            for (i, xi) in x.iter().enumerate() {
                let mut up = e.0.clone();
                up[i] += 1;
                out.add_term(Exponents(up), -(c * xi));
            }
        }
        Ok(out)
    }

    /// `f(l_1, ..., l_m)` for linear forms `l_i` (series with only
    /// degree-one terms) in a common set of `m'` variables; the result keeps
    /// the bound `D` of `f`.
    pub fn subst_linear(&self, images: &[TruncatedSeries]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let target = images[0].nvars;
        for (i, img) in images.iter().enumerate() {
            if img.nvars != target {
                return Err(Error::SeriesMismatch(format!(
                    "image {i} has {} variables, expected {target}",
                    img.nvars
                )));
            }
            if img.terms.keys().any(|e| e.degree() != 1) {
                return Err(Error::NonLinearImage(i));
            }
        }
        let d = self.degree_bound;
        // powers[i][k] = l_i^k, truncated at d
        let mut powers: Vec<Vec<Self>> = Vec::with_capacity(images.len());
        for img in images {
            let form = Self {
                nvars: target,
                degree_bound: d,
                terms: img.terms.clone(),
            };
            let mut row = vec![Self::one(target, d)];
            for k in 1..=d {
                let next = row[k - 1].mul(&form)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Self::zero(target, d);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, d, c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&powers[i][k])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// The series inversion `f(-X) exp(X_1 + ... + X_m)`.
    pub fn nabla_series(&self) -> Self {
        let mut reflected = Self::zero(self.nvars, self.degree_bound);
        for (e, c) in &self.terms {
            let v = if e.degree() % 2 == 0 { c.clone() } else { -c };
            reflected.add_term(e.clone(), v);
        }
        let ones = vec![Rational::one(); self.nvars];
        reflected
            .mul(&Self::exp_linear(&ones, self.degree_bound))
            .expect("same shape")
    }

    /// `{nvars, degree_bound, terms: [{exponents, coeff}]}` in graded-lex order.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "nvars": self.nvars,
            "degree_bound": self.degree_bound,
            "terms": self.terms.iter().map(|(e, c)| json!({
                "exponents": e.0,
                "coeff": format_rational(c),
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::multiseq::{nabla, IndexBox};
    use crate::random::Grid;
    use proptest::prelude::*;

    fn x1(d: usize) -> TruncatedSeries {
        TruncatedSeries::variable(1, d, 0)
    }

    fn poly1(coeffs: &[Rational], d: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(1, d);
        for (k, c) in coeffs.iter().enumerate() {
            s.add_term(Exponents(vec![k]), c.clone());
        }
        s
    }

    #[test]
    fn graded_lex_order() {
        let ms = monomials_up_to(2, 2);
        let raw: Vec<Vec<usize>> = ms.iter().map(|e| e.0.clone()).collect();
        assert_eq!(raw, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(monomials_up_to(4, 6).len(), 210);
    }

    #[test]
    fn from_sequence_examples() {
        let ones = SequenceRule::constant(1, int(1));
        assert_eq!(
            TruncatedSeries::from_sequence(&ones, 2),
            poly1(&[int(1), int(1), rat(1, 2)], 2)
        );
        let x = rat(-2, 3);
        let geo = SequenceRule::geometric(vec![x.clone()]);
        assert_eq!(
            TruncatedSeries::from_sequence(&geo, 5),
            TruncatedSeries::exp_linear(&[x], 5)
        );
        let delta0 = SequenceRule::new(2, |n| if n == [0, 0] { int(1) } else { int(0) });
        assert_eq!(TruncatedSeries::from_sequence(&delta0, 4), TruncatedSeries::one(2, 4));
    }

    #[test]
    fn ring_examples() {
        let mut grid = Grid::new(4);
        let a = SequenceRule::from_table(grid.table(&IndexBox::cube(2, 4)));
        let f = TruncatedSeries::from_sequence(&a, 4);
        assert_eq!(f.mul(&TruncatedSeries::one(2, 4)).unwrap(), f);
        let p = poly1(&[int(1), int(1)], 2);
        let m = poly1(&[int(1), int(-1)], 2);
        assert_eq!(p.mul(&m).unwrap(), poly1(&[int(1), int(0), int(-1)], 2));
        let (u, v) = (vec![rat(1, 2), rat(-3, 4)], vec![rat(5, 3), int(2)]);
        let sum: Vec<Rational> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        assert_eq!(
            TruncatedSeries::exp_linear(&u, 6).mul(&TruncatedSeries::exp_linear(&v, 6)).unwrap(),
            TruncatedSeries::exp_linear(&sum, 6)
        );
        assert!(matches!(
            p.add(&TruncatedSeries::one(1, 3)),
            Err(Error::SeriesMismatch(_))
        ));
        assert!(p.mul(&TruncatedSeries::one(2, 2)).is_err());
    }

    #[test]
    fn derivative_examples() {
        let sq = poly1(&[int(0), int(0), int(1)], 3);
        assert_eq!(sq.deriv(0).unwrap(), poly1(&[int(0), int(2)], 2));
        assert!(TruncatedSeries::constant(1, 3, int(7)).deriv(0).unwrap().is_zero());
        let x = rat(3, 5);
        let e = TruncatedSeries::exp_linear(&[x.clone()], 6);
        assert_eq!(e.deriv(0).unwrap(), TruncatedSeries::exp_linear(&[x.clone()], 5).scale(&x));
        assert!(matches!(sq.deriv(1), Err(Error::AxisOutOfRange { .. })));
        assert_eq!(TruncatedSeries::one(1, 0).deriv(0), Err(Error::DegreeExhausted));
    }

    #[test]
    fn mul_var_examples() {
        assert_eq!(TruncatedSeries::one(1, 3).mul_var(0).unwrap(), x1(3));
        let top = TruncatedSeries::monomial(1, 3, vec![3], int(1));
        assert!(top.mul_var(0).unwrap().is_zero());
        let mut grid = Grid::new(21);
        let a = SequenceRule::from_table(grid.table(&IndexBox::cube(1, 6)));
        let f = TruncatedSeries::from_sequence(&a, 6);
        let lhs = f.mul_var(0).unwrap().deriv(0).unwrap();
        let rhs = f.deriv(0).unwrap().mul_var(0).unwrap();
        assert!(lhs.sub(&rhs).unwrap().agrees_with(&f));
    }

    #[test]
    fn exp_linear_examples() {
        assert_eq!(TruncatedSeries::exp_linear(&[int(0), int(0)], 4), TruncatedSeries::one(2, 4));
        assert_eq!(TruncatedSeries::exp_linear(&[int(1)], 2), poly1(&[int(1), int(1), rat(1, 2)], 2));
        assert_eq!(
            TruncatedSeries::exp_linear(&[int(1), int(1)], 5),
            TruncatedSeries::from_sequence(&SequenceRule::constant(2, int(1)), 5)
        );
    }

    #[test]
    fn nabla_series_examples() {
        let ones = vec![int(1); 2];
        assert_eq!(TruncatedSeries::one(2, 6).nabla_series(), TruncatedSeries::exp_linear(&ones, 6));
        let x = vec![rat(2, 7), rat(-5, 2)];
        let dual: Vec<Rational> = x.iter().map(|v| int(1) - v).collect();
        assert_eq!(
            TruncatedSeries::exp_linear(&x, 6).nabla_series(),
            TruncatedSeries::exp_linear(&dual, 6)
        );
    }

    #[test]
    fn xi_examples() {
        let x = rat(-4, 3);
        assert!(TruncatedSeries::exp_linear(&[x.clone()], 6).xi_apply(&[x]).unwrap().is_zero());
        for k in 0..5 {
            let m = TruncatedSeries::monomial(1, 6, vec![k], int(1));
            assert_eq!(m.xi_apply(&[int(0)]).unwrap(), m.scale(&int(k as i64)));
        }
        assert!(x1(2).xi_apply(&[int(1), int(2)]).is_err());
    }

    #[test]
    fn substitution_examples() {
        let f = poly1(&[int(1), int(1), rat(1, 2)], 2);
        assert_eq!(f.subst_linear(&[x1(2)]).unwrap(), f);
        assert_eq!(
            f.subst_linear(&[x1(2).neg()]).unwrap(),
            poly1(&[int(1), int(-1), rat(1, 2)], 2)
        );
        let sq = poly1(&[int(0), int(0), int(1)], 2);
        let diff = TruncatedSeries::linear(&[int(1), int(-1)], 2);
        let got = sq.subst_linear(&[diff]).unwrap();
        assert_eq!(got.coeff(&[2, 0]), int(1));
        assert_eq!(got.coeff(&[1, 1]), int(-2));
        assert_eq!(got.coeff(&[0, 2]), int(1));
        assert_eq!(got.terms().count(), 3);

        let affine = TruncatedSeries::one(1, 2).add(&x1(2)).unwrap();
        assert_eq!(sq.subst_linear(&[affine]), Err(Error::NonLinearImage(0)));
        let quadratic = TruncatedSeries::monomial(1, 2, vec![2], int(1));
        assert_eq!(sq.subst_linear(&[quadratic]), Err(Error::NonLinearImage(0)));
    }

    #[test]
    fn difference_series_slices() {
        let mut grid = Grid::new(33);
        let a = SequenceRule::from_table(grid.table(&IndexBox::cube(2, 6)));
        let big = TruncatedSeries::f_from_sequence(&a, 5);
        let zero2 = TruncatedSeries::zero(2, 5);
        let (x0, x1v) = (TruncatedSeries::variable(2, 5, 0), TruncatedSeries::variable(2, 5, 1));
        let y_slice = big.subst_linear(&[x0.clone(), x1v.clone(), zero2.clone(), zero2.clone()]).unwrap();
        assert_eq!(y_slice, TruncatedSeries::from_sequence(&a, 5));
        let x_slice = big.subst_linear(&[zero2.clone(), zero2, x0, x1v]).unwrap();
        assert_eq!(x_slice, TruncatedSeries::from_sequence(&nabla(&a), 5));

        let ones = SequenceRule::constant(1, int(1));
        let f = TruncatedSeries::f_from_sequence(&ones, 6);
        assert_eq!(f, TruncatedSeries::exp_linear(&[int(1), int(0)], 6));
    }

    #[test]
    fn json_dump() {
        let s = poly1(&[int(1), int(0), rat(-1, 2)], 2);
        assert_eq!(
            s.to_json().to_string(),
            r#"{"degree_bound":2,"nvars":1,"terms":[{"coeff":"1","exponents":[0]},{"coeff":"-1/2","exponents":[2]}]}"#
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn nabla_series_is_an_involution(seed in any::<u64>(), r in 1usize..=2) {
            let mut grid = Grid::new(seed);
            let a = SequenceRule::from_table(grid.table(&IndexBox::cube(r, 6)));
            let f = TruncatedSeries::from_sequence(&a, 6);
            prop_assert_eq!(f.nabla_series().nabla_series(), f);
        }

        #[test]
        fn xi_matches_operator_composition(seed in any::<u64>(), r in 1usize..=2) {
            let mut grid = Grid::new(seed);
            let a = SequenceRule::from_table(grid.table(&IndexBox::cube(r, 5)));
            let f = TruncatedSeries::from_sequence(&a, 5);
            let x = grid.rationals(r);
            let mut composed = TruncatedSeries::zero(r, 4);
            for i in 0..r {
                composed = composed.add(&f.deriv(i).unwrap().mul_var(i).unwrap()).unwrap();
                composed = composed.sub(&f.mul_var(i).unwrap().scale(&x[i]).truncate(4)).unwrap();
            }
            prop_assert!(f.xi_apply(&x).unwrap().agrees_with(&composed));
        }

        #[test]
        fn product_is_commutative_and_distributive(seed in any::<u64>()) {
            let mut grid = Grid::new(seed);
            let mk = |g: &mut Grid| TruncatedSeries::from_sequence(
                &SequenceRule::from_table(g.table(&IndexBox::cube(2, 5))), 5);
            let (f, g, h) = (mk(&mut grid), mk(&mut grid), mk(&mut grid));
            prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
            prop_assert_eq!(
                f.mul(&g.add(&h).unwrap()).unwrap(),
                f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
            );
        }
    }
}
