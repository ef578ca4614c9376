//! Sweeps that check nested-sum identities point by point. Mismatches are
//! report entries, not errors; errors mean the sweep could not run.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{c_direct_guarded, c_rule, kt_value, two_index_value, NestedSumSpec, RecursiveTable};
use crate::error::{Error, Result};
use crate::exact::{format_rational, int, Rational};
use crate::multiseq::{iterated_delta, nabla, IndexBox};
use crate::report::{Comparison, Identity, Report};

fn corner(region: &IndexBox) -> Vec<usize> {
    region.extents().iter().map(|e| e - 1).collect()
}

fn check_box(spec: &NestedSumSpec, region: &IndexBox) -> Result<()> {
    if region.arity() != spec.r() {
        return Err(Error::ArityMismatch {
            expected: spec.r(),
            got: region.arity(),
        });
    }
    Ok(())
}

fn collect(identity: Identity, entries: Vec<Comparison>) -> Report {
    let mut report = Report::new();
    for e in entries {
        report.push(identity, e);
    }
    report
}

/// Checks `nabla c[x | t](n) = c[1-x | t](n)` at every `n` in the box.
pub fn verify_duality(spec: &NestedSumSpec, region: &IndexBox, guard: u128) -> Result<Report> {
    check_box(spec, region)?;
    let top = corner(region);
    spec.check_guard(&top, guard)?;
    let dual = spec.one_minus();
    let lhs_rule = nabla(&c_rule(spec));
    let label = spec.to_string();
    let points: Vec<Vec<usize>> = region.points().collect();
    let entries = points
        .into_par_iter()
        .map(|n| {
            let lhs = lhs_rule.eval(&n);
            let rhs = c_direct_guarded(&dual, &n, guard)?;
            Ok(Comparison::new(Identity::CDuality, label.clone(), n, &lhs, &rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(collect(Identity::CDuality, entries))
}

/// Checks `(D^k c[x | t])(n) = c[x; 1-x | t](n, k)` for `n` in `nbox`,
/// `k` in `kbox`. The left side is the alternating binomial sum over values
/// of `c`; the right side enumerates the doubled spec.
pub fn verify_difference_formula(
    spec: &NestedSumSpec,
    nbox: &IndexBox,
    kbox: &IndexBox,
    guard: u128,
) -> Result<Report> {
    check_box(spec, nbox)?;
    check_box(spec, kbox)?;
    let (ntop, ktop) = (corner(nbox), corner(kbox));
    let far: Vec<usize> = ntop.iter().zip(&ktop).map(|(a, b)| a + b).collect();
    spec.check_guard(&far, guard)?;
    let doubled = spec.with_complements();
    doubled.check_guard(&[ntop.as_slice(), ktop.as_slice()].concat(), guard)?;

    let rule = c_rule(spec);
    let label = spec.to_string();
    let pairs: Vec<(Vec<usize>, Vec<usize>)> = nbox
        .points()
        .flat_map(|n| kbox.points().map(move |k| (n.clone(), k)))
        .collect();
    let entries = pairs
        .into_par_iter()
        .map(|(n, k)| {
            let lhs = iterated_delta(&rule, &k, &n)?;
            let joint = [n, k].concat();
            let rhs = c_direct_guarded(&doubled, &joint, guard)?;
            Ok(Comparison::new(Identity::DifferenceFormula, label.clone(), joint, &lhs, &rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(collect(Identity::DifferenceFormula, entries))
}

/// Checks `sum_{i in subset} a(n + e_i) = c a(n)` for `a = c[x | t]`.
/// Slots are 0-based. The blocks indexed by `subset` must sum to `(c, ..., c)`.
pub fn verify_shift_identity(
    spec: &NestedSumSpec,
    subset: &[usize],
    c: &Rational,
    region: &IndexBox,
    guard: u128,
) -> Result<Report> {
    check_box(spec, region)?;
    if subset.is_empty() {
        return Err(Error::ShiftHypothesis("empty slot subset".into()));
    }
    let distinct: BTreeSet<usize> = subset.iter().copied().collect();
    if distinct.len() != subset.len() {
        return Err(Error::ShiftHypothesis(format!("repeated slot in {subset:?}")));
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= spec.r()) {
        return Err(Error::ShiftHypothesis(format!(
            "slot {bad} out of range for {} slots",
            spec.r()
        )));
    }
    for j in 0..spec.p() {
        let sum: Rational = subset.iter().map(|&i| &spec.xblocks()[i][j]).sum();
        if &sum != c {
            return Err(Error::ShiftHypothesis(format!(
                "component {} of the subset sum is {}, expected {}",
                j + 1,
                format_rational(&sum),
                format_rational(c)
            )));
        }
    }
    let mut top = corner(region);
    top.iter_mut().for_each(|v| *v += 1);
    spec.check_guard(&top, guard)?;

    let rule = c_rule(spec);
    let label = format!("{spec} S={subset:?} c={}", format_rational(c));
    let points: Vec<Vec<usize>> = region.points().collect();
    let entries = points
        .into_par_iter()
        .map(|n| {
            let mut lhs = Rational::from_integer(0.into());
            let mut up = n.clone();
            for &i in subset {
                up[i] += 1;
                lhs += rule.eval(&up);
                up[i] -= 1;
            }
            let rhs = c * rule.eval(&n);
            Comparison::new(Identity::Shift, label.clone(), n, &lhs, &rhs)
        })
        .collect();
    Ok(collect(Identity::Shift, entries))
}

/// Checks the recursive evaluator against chain enumeration on the box and,
/// for depth `>= 2`, the recurrence itself on enumerated values:
/// `(|n| + t_1) c(n) - sum_k x_k1 n_k c(n - e_k) = c'(n)`.
pub fn verify_recurrence(spec: &NestedSumSpec, region: &IndexBox, guard: u128) -> Result<Report> {
    check_box(spec, region)?;
    let top = corner(region);
    spec.check_guard(&top, guard)?;
    let table = RecursiveTable::build(spec, &top)?;
    let label = spec.to_string();
    let points: Vec<Vec<usize>> = region.points().collect();
    let direct = c_rule(spec);
    let reduced = spec.reduce_depth().ok();

    let mut report = Report::new();
    let oracle: Vec<Comparison> = points
        .par_iter()
        .map(|n| {
            let recursive = table.get(n).expect("inside box");
            Comparison::new(Identity::RecursiveOracle, label.clone(), n.clone(), recursive, &direct.eval(n))
        })
        .collect();
    for e in oracle {
        report.push(Identity::RecursiveOracle, e);
    }

    if let Some(reduced) = reduced {
        let t1 = &spec.tparams()[0];
        let entries: Vec<Result<Comparison>> = points
            .par_iter()
            .map(|n| {
                let mut lhs = (int(n.iter().sum::<usize>() as i64) + t1) * direct.eval(n);
                let mut lower = n.clone();
                for (k, &nk) in n.iter().enumerate() {
                    if nk > 0 {
                        lower[k] -= 1;
                        lhs -= &spec.xblocks()[k][0] * int(nk as i64) * direct.eval(&lower);
                        lower[k] += 1;
                    }
                }
                let rhs = c_direct_guarded(&reduced, n, guard)?;
                Ok(Comparison::new(Identity::Recurrence, label.clone(), n.clone(), &lhs, &rhs))
            })
            .collect();
        for e in entries {
            report.push(Identity::Recurrence, e?);
        }
    }
    Ok(report)
}

/// `kt_value(x, n) = c[x | 1, ..., 1](n)` for `n <= nmax`.
pub fn verify_kt_reduction(x: &[Rational], nmax: usize) -> Result<Report> {
    let spec = NestedSumSpec::kt(x.to_vec())?;
    let label = spec.to_string();
    let mut report = Report::new();
    for n in 0..=nmax {
        let lhs = kt_value(x, n);
        let rhs = c_direct_guarded(&spec, &[n], u128::MAX)?;
        report.record(Identity::KtReduction, label.clone(), vec![n], &lhs, &rhs);
    }
    Ok(report)
}

/// `two_index_value(x, y, n, k) = c[x; y | 1, ..., 1](n, k)` for `n <= nmax`, `k <= kmax`.
pub fn verify_two_index_reduction(
    x: &[Rational],
    y: &[Rational],
    nmax: usize,
    kmax: usize,
) -> Result<Report> {
    let p = x.len();
    let spec = NestedSumSpec::new(vec![x.to_vec(), y.to_vec()], vec![int(1); p.saturating_sub(1)])?;
    let label = spec.to_string();
    let mut report = Report::new();
    for n in 0..=nmax {
        for k in 0..=kmax {
            let lhs = two_index_value(x, y, n, k);
            let rhs = c_direct_guarded(&spec, &[n, k], u128::MAX)?;
            report.record(Identity::TwoIndexReduction, label.clone(), vec![n, k], &lhs, &rhs);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::nested::c_direct;
    use crate::random::Grid;
    use crate::DEFAULT_GUARD;
    use num_traits::One;

    fn cube(r: usize, max: usize) -> IndexBox {
        IndexBox::cube(r, max)
    }

    #[test]
    fn duality_closed_form_at_one() {
        let (x1, x2, t) = (rat(1, 2), rat(1, 3), int(2));
        let s = NestedSumSpec::new(vec![vec![x1.clone(), x2.clone()]], vec![t.clone()]).unwrap();
        let report = verify_duality(&s, &cube(1, 4), DEFAULT_GUARD).unwrap();
        assert_eq!(report.len(), 5);
        assert!(report.all_equal());
        let closed = ((int(1) - &x1) + &t * (int(1) - &x2)) / (&t * (int(1) + &t));
        let at_one = &report.comparisons()[1];
        assert_eq!(at_one.lhs, format_rational(&closed));
        assert_eq!(at_one.lhs, "11/36");
        assert_eq!(at_one.rhs, "11/36");
    }

    #[test]
    fn depth_one_duality_is_binomial_theorem() {
        let s = NestedSumSpec::new(vec![vec![rat(2, 7)], vec![rat(-5, 3)]], vec![]).unwrap();
        let report = verify_duality(&s, &cube(2, 3), DEFAULT_GUARD).unwrap();
        assert!(report.all_equal());
        let expected = crate::exact::pow(&rat(5, 7), 3) * crate::exact::pow(&rat(8, 3), 3);
        let last = report.comparisons().last().unwrap();
        assert_eq!(last.rhs, format_rational(&expected));
    }

    #[test]
    fn self_dual_spec() {
        let half = rat(1, 2);
        let s = NestedSumSpec::new(vec![vec![half.clone(); 3]; 2], vec![rat(5, 4), rat(-1, 3)]).unwrap();
        assert_eq!(s.one_minus(), s);
        let report = verify_duality(&s, &cube(2, 2), DEFAULT_GUARD).unwrap();
        assert!(report.all_equal());
        let rule = c_rule(&s);
        for c in report.comparisons() {
            assert_eq!(c.lhs, format_rational(&rule.eval(&c.index)));
        }
    }

    #[test]
    fn difference_formula_slices() {
        let mut grid = Grid::new(5);
        let s = grid.spec(2, 2);
        let report = verify_difference_formula(&s, &cube(2, 2), &cube(2, 1), DEFAULT_GUARD).unwrap();
        assert!(report.all_equal());
        let dual = s.one_minus();
        for c in report.comparisons() {
            let (n, k) = c.index.split_at(2);
            if k.iter().all(|&v| v == 0) {
                assert_eq!(c.rhs, format_rational(&c_direct(&s, n).unwrap()));
            }
            if n.iter().all(|&v| v == 0) {
                assert_eq!(c.rhs, format_rational(&c_direct(&dual, k).unwrap()));
            }
        }
    }

    #[test]
    fn difference_formula_zero_one_example() {
        let s = NestedSumSpec::new(vec![vec![int(0), int(1)]], vec![int(1)]).unwrap();
        let rule = c_rule(&s);
        let lhs = rule.eval(&[1]) - rule.eval(&[2]);
        let rhs = c_direct(&s.with_complements(), &[1, 1]).unwrap();
        assert_eq!(lhs, rhs);
        let report = verify_difference_formula(
            &s,
            &IndexBox::new(vec![2]).unwrap(),
            &IndexBox::new(vec![2]).unwrap(),
            DEFAULT_GUARD,
        )
        .unwrap();
        assert!(report.all_equal());
    }

    #[test]
    fn shift_identity_cases() {
        let x = rat(1, 3);
        let s = NestedSumSpec::new(vec![vec![x.clone()], vec![int(1) - &x]], vec![]).unwrap();
        let report = verify_shift_identity(&s, &[0, 1], &int(1), &cube(2, 3), DEFAULT_GUARD).unwrap();
        assert!(report.all_equal());
        let at_11 = report.comparisons().iter().find(|c| c.index == [1, 1]).unwrap();
        assert_eq!(at_11.lhs, "2/9");

        let c = rat(-4, 5);
        let s = NestedSumSpec::new(vec![vec![c.clone(), c.clone()]], vec![rat(3, 2)]).unwrap();
        assert!(verify_shift_identity(&s, &[0], &c, &cube(1, 4), DEFAULT_GUARD)
            .unwrap()
            .all_equal());

        let mut grid = Grid::new(17);
        let base = grid.spec(2, 2);
        let doubled = base.with_complements();
        for i in 0..2 {
            let r = verify_shift_identity(&doubled, &[i, 2 + i], &Rational::one(), &cube(4, 1), DEFAULT_GUARD)
                .unwrap();
            assert!(r.all_equal());
        }
    }

    #[test]
    fn shift_hypothesis_is_checked() {
        let s = NestedSumSpec::new(vec![vec![int(1), int(2)], vec![int(0), int(0)]], vec![int(1)]).unwrap();
        for subset in [&[][..], &[0, 0], &[2], &[0, 1]] {
            assert!(matches!(
                verify_shift_identity(&s, subset, &int(1), &cube(2, 1), DEFAULT_GUARD),
                Err(Error::ShiftHypothesis(_))
            ));
        }
    }

    #[test]
    fn recurrence_report() {
        let mut grid = Grid::new(8);
        let s = grid.spec(2, 3);
        let report = verify_recurrence(&s, &cube(2, 3), DEFAULT_GUARD).unwrap();
        assert_eq!(report.len(), 2 * 16);
        assert!(report.all_equal());
        let flat = grid.spec(3, 1);
        assert_eq!(verify_recurrence(&flat, &cube(3, 1), DEFAULT_GUARD).unwrap().len(), 8);
    }

    #[test]
    fn sweeps_respect_the_guard() {
        let mut grid = Grid::new(9);
        let s = grid.spec(1, 3);
        assert!(matches!(
            verify_duality(&s, &cube(1, 40), 100),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(matches!(verify_duality(&s, &cube(2, 1), 100), Err(Error::ArityMismatch { .. })));
    }
}
