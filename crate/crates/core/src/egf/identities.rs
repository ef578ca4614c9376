//! Coefficientwise checks of the operator identities on truncated series.
//! Each check compares every coefficient up to the common degree bound and
//! records one comparison per monomial (zeros included).

use num_traits::One;

use super::{monomials_up_to, TruncatedSeries};
use crate::error::{Error, Result};
use crate::exact::{int, Rational};
use crate::multiseq::{nabla, IndexBox, SequenceRule};
use crate::nested::{c_rule, NestedSumSpec};
use crate::random::Grid;
use crate::report::{Identity, Report};

/// Records every coefficient of `lhs` and `rhs` up to the smaller bound.
pub fn compare_series(
    identity: Identity,
    label: &str,
    lhs: &TruncatedSeries,
    rhs: &TruncatedSeries,
) -> Result<Report> {
    if lhs.nvars() != rhs.nvars() {
        return Err(Error::SeriesMismatch(format!(
            "{} vs {} variables",
            lhs.nvars(),
            rhs.nvars()
        )));
    }
    let bound = lhs.degree_bound().min(rhs.degree_bound());
    let mut report = Report::new();
    for e in monomials_up_to(lhs.nvars(), bound) {
        report.record(identity, label, e.0.clone(), &lhs.coeff(&e.0), &rhs.coeff(&e.0));
    }
    Ok(report)
}

fn swap_blocks(f: &TruncatedSeries, r: usize) -> Result<TruncatedSeries> {
    let d = f.degree_bound();
    let images: Vec<TruncatedSeries> = (0..2 * r)
        .map(|i| TruncatedSeries::variable(2 * r, d, (i + r) % (2 * r)))
        .collect();
    f.subst_linear(&images)
}

/// `F_a(X, Y) = f_a(X - Y) exp(Y_1 + ... + Y_r)`.
pub fn check_difference_series_closed_form(a: &SequenceRule, d: usize, label: &str) -> Result<Report> {
    let r = a.arity();
    let big = TruncatedSeries::f_from_sequence(a, d);
    let images: Vec<TruncatedSeries> = (0..r)
        .map(|i| {
            let mut coeffs = vec![Rational::from_integer(0.into()); 2 * r];
            coeffs[i] = int(1);
            coeffs[r + i] = int(-1);
            TruncatedSeries::linear(&coeffs, d)
        })
        .collect();
    let shifted = TruncatedSeries::from_sequence(a, d).subst_linear(&images)?;
    let y_exp: Vec<Rational> = (0..2 * r).map(|i| if i < r { int(0) } else { int(1) }).collect();
    let rhs = shifted.mul(&TruncatedSeries::exp_linear(&y_exp, d))?;
    compare_series(Identity::DifferenceSeriesClosedForm, label, &big, &rhs)
}

/// `F_{nabla a}(X, Y) = F_a(Y, X)`.
pub fn check_difference_series_swap(a: &SequenceRule, d: usize, label: &str) -> Result<Report> {
    let lhs = TruncatedSeries::f_from_sequence(&nabla(a), d);
    let rhs = swap_blocks(&TruncatedSeries::f_from_sequence(a, d), a.arity())?;
    compare_series(Identity::DifferenceSeriesSwap, label, &lhs, &rhs)
}

/// `(d/dX_i + d/dY_i - 1) F_a = 0` for every `i`, to degree `D - 1`.
pub fn check_difference_series_annihilator(a: &SequenceRule, d: usize, label: &str) -> Result<Report> {
    let r = a.arity();
    let big = TruncatedSeries::f_from_sequence(a, d);
    let mut report = Report::new();
    for i in 0..r {
        let applied = big
            .deriv(i)?
            .add(&big.deriv(r + i)?)?
            .sub(&big.truncate(d - 1))?;
        let zero = TruncatedSeries::zero(2 * r, d - 1);
        report.merge(compare_series(
            Identity::DifferenceSeriesAnnihilator,
            &format!("{label} i={}", i + 1),
            &applied,
            &zero,
        )?);
    }
    Ok(report)
}

/// `f_{nabla a} = f_a(-X) exp(X_1 + ... + X_r)`: the series form of the
/// inversion agrees with the sequence form.
pub fn check_series_inversion(a: &SequenceRule, d: usize, label: &str) -> Result<Report> {
    let lhs = TruncatedSeries::from_sequence(&nabla(a), d);
    let rhs = TruncatedSeries::from_sequence(a, d).nabla_series();
    compare_series(Identity::SeriesInversion, label, &lhs, &rhs)
}

/// `nabla(X_i f) = -X_i nabla f` and `nabla(d_i f) = (1 - d_i) nabla f`.
pub fn check_inversion_of_operators(f: &TruncatedSeries, label: &str) -> Result<Report> {
    let inv = f.nabla_series();
    let mut report = Report::new();
    for i in 0..f.nvars() {
        let tag = format!("{label} i={}", i + 1);
        let lhs = f.mul_var(i)?.nabla_series();
        let rhs = inv.mul_var(i)?.neg();
        report.merge(compare_series(Identity::InversionOfMultiplication, &tag, &lhs, &rhs)?);

        let lhs = f.deriv(i)?.nabla_series();
        let rhs = inv.truncate(f.degree_bound() - 1).sub(&inv.deriv(i)?)?;
        report.merge(compare_series(Identity::InversionOfDerivative, &tag, &lhs, &rhs)?);
    }
    Ok(report)
}

/// `nabla(xi_x f) = xi_{1-x}(nabla f)`.
pub fn check_xi_conjugation(f: &TruncatedSeries, x: &[Rational], label: &str) -> Result<Report> {
    let dual: Vec<Rational> = x.iter().map(|v| Rational::one() - v).collect();
    let lhs = f.xi_apply(x)?.nabla_series();
    let rhs = f.nabla_series().xi_apply(&dual)?;
    compare_series(Identity::XiConjugation, label, &lhs, &rhs)
}

/// `[A, xi_x + t] = A` with `A = sum_{i in subset} d_i - c`, `c = sum_{i in subset} x_i`,
/// applied to every monomial of degree `<= D - 1` in a series ring of bound `D`.
pub fn check_commutator(
    x: &[Rational],
    subset: &[usize],
    t: &Rational,
    d: usize,
    label: &str,
) -> Result<Report> {
    let nvars = x.len();
    let c: Rational = subset.iter().map(|&i| &x[i]).sum();
    let shift_op = |f: &TruncatedSeries| -> Result<TruncatedSeries> {
        let mut out = f.truncate(f.degree_bound() - 1).scale(&-c.clone());
        for &i in subset {
            out = out.add(&f.deriv(i)?)?;
        }
        Ok(out)
    };
    let xi_op = |f: &TruncatedSeries| -> Result<TruncatedSeries> {
        f.xi_apply(x)?.add(&f.scale(t))
    };
    let mut report = Report::new();
    for e in monomials_up_to(nvars, d - 1) {
        let f = TruncatedSeries::monomial(nvars, d, e.0.clone(), Rational::one());
        let lhs = shift_op(&xi_op(&f)?)?.sub(&xi_op(&shift_op(&f)?)?)?;
        let rhs = shift_op(&f)?;
        report.merge(compare_series(
            Identity::Commutator,
            &format!("{label} X^{:?}", e.0),
            &lhs,
            &rhs,
        )?);
    }
    Ok(report)
}

fn c_series(spec: &NestedSumSpec, d: usize) -> TruncatedSeries {
    TruncatedSeries::from_sequence(&c_rule(spec), d)
}

/// `nabla f[x | t] = f[1-x | t]` on generating functions.
pub fn check_series_duality(spec: &NestedSumSpec, d: usize) -> Result<Report> {
    let lhs = c_series(spec, d).nabla_series();
    let rhs = c_series(&spec.one_minus(), d);
    compare_series(Identity::SeriesDuality, &spec.to_string(), &lhs, &rhs)
}

fn first_components(spec: &NestedSumSpec) -> Vec<Rational> {
    spec.xblocks().iter().map(|b| b[0].clone()).collect()
}

/// `(xi_{x_.1} + t_1) f[x | t] = f[-x | t_2..]` for depth `>= 2`.
pub fn check_depth_reduction_series(spec: &NestedSumSpec, d: usize) -> Result<Report> {
    let reduced = spec.reduce_depth()?;
    let f = c_series(spec, d);
    let lhs = f.xi_apply(&first_components(spec))?.add(&f.scale(&spec.tparams()[0]))?;
    compare_series(Identity::DepthReductionSeries, &spec.to_string(), &lhs, &c_series(&reduced, d))
}

/// Applying `(xi_{x_.j} + t_j)` for `j = 1, ..., p-1` to `f[x | t]` leaves
/// `exp(x_1p X_1 + ... + x_rp X_r)`.
pub fn check_telescoped_reduction(spec: &NestedSumSpec, d: usize) -> Result<Report> {
    let mut f = c_series(spec, d);
    let mut level = spec.clone();
    while level.p() > 1 {
        f = f.xi_apply(&first_components(&level))?.add(&f.scale(&level.tparams()[0]))?;
        level = level.reduce_depth()?;
    }
    let rhs = TruncatedSeries::exp_linear(&first_components(&level), d);
    compare_series(Identity::TelescopedReduction, &spec.to_string(), &f, &rhs)
}

/// Runs every series identity on `count` seeded inputs with `r <= max_r`
/// variables at degree bound `d`.
pub fn egf_suite(seed: u64, count: usize, max_r: usize, d: usize) -> Result<Report> {
    if d == 0 {
        return Err(Error::DegreeExhausted);
    }
    let mut grid = Grid::new(seed);
    let mut report = Report::new();
    for case in 0..count {
        let r = grid.between(1, max_r);
        let label = format!("seed={seed} case={case} r={r}");
        let table = grid.table(&IndexBox::cube(r, d));
        let a = SequenceRule::from_table(table);
        report.merge(check_difference_series_closed_form(&a, d, &label)?);
        report.merge(check_difference_series_swap(&a, d, &label)?);
        report.merge(check_difference_series_annihilator(&a, d, &label)?);
        report.merge(check_series_inversion(&a, d, &label)?);

        let f = TruncatedSeries::from_sequence(&a, d);
        report.merge(check_inversion_of_operators(&f, &label)?);
        let x = grid.rationals(r);
        report.merge(check_xi_conjugation(&f, &x, &label)?);

        let subset: Vec<usize> = (0..r).filter(|_| grid.below(2) == 1).collect();
        let subset = if subset.is_empty() { vec![grid.below(r)] } else { subset };
        let t = grid.shift_param();
        report.merge(check_commutator(&x, &subset, &t, d, &format!("{label} S={subset:?}"))?);

        let p = grid.between(1, 3);
        let spec = grid.spec(r, p);
        report.merge(check_series_duality(&spec, d)?);
        if p >= 2 {
            report.merge(check_depth_reduction_series(&spec, d)?);
        }
        report.merge(check_telescoped_reduction(&spec, d)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn closed_form_and_swap_on_a_geometric_sequence() {
        let a = SequenceRule::geometric(vec![rat(2, 3), rat(-1, 4)]);
        assert!(check_difference_series_closed_form(&a, 5, "geo").unwrap().all_equal());
        assert!(check_difference_series_swap(&a, 5, "geo").unwrap().all_equal());
        assert!(check_difference_series_annihilator(&a, 5, "geo").unwrap().all_equal());
    }

    #[test]
    fn a_wrong_series_is_reported() {
        let a = SequenceRule::constant(1, int(1));
        let f = TruncatedSeries::from_sequence(&a, 3);
        let r = compare_series(Identity::SeriesInversion, "neg", &f, &f.neg()).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.failures().count(), 4);
    }

    #[test]
    fn commutator_with_a_single_slot() {
        let x = vec![rat(3, 4), rat(-2, 3)];
        let r = check_commutator(&x, &[1], &rat(5, 2), 6, "single").unwrap();
        assert!(r.all_equal());
        // 21 monomials of degree <= 5 in two variables, 21 coefficients each
        assert_eq!(r.len(), 21 * 21);
    }

    #[test]
    fn spec_level_series_identities() {
        let spec = NestedSumSpec::new(
            vec![vec![rat(1, 2), rat(-2, 3), int(3)], vec![int(0), rat(5, 7), rat(1, 9)]],
            vec![rat(-3, 2), int(2)],
        )
        .unwrap();
        assert!(check_series_duality(&spec, 5).unwrap().all_equal());
        assert!(check_depth_reduction_series(&spec, 5).unwrap().all_equal());
        assert!(check_telescoped_reduction(&spec, 5).unwrap().all_equal());
        let flat = NestedSumSpec::new(vec![vec![rat(1, 3)]], vec![]).unwrap();
        assert!(check_depth_reduction_series(&flat, 4).is_err());
        assert!(check_telescoped_reduction(&flat, 4).unwrap().all_equal());
    }

    #[test]
    fn small_suite_is_deterministic() {
        let a = egf_suite(5, 2, 2, 4).unwrap();
        let b = egf_suite(5, 2, 2, 4).unwrap();
        assert!(a.all_equal());
        assert_eq!(a.to_json(), b.to_json());
    }
}
