//! Generalized nested sums `c[x_1; ...; x_r | t_1, ..., t_{p-1}](n_1, ..., n_r)`.
//!
//! Each slot `i` sums over a weakly decreasing chain
//! `n_i = n_i1 >= ... >= n_ip >= 0` with gaps `nu_ij`. The summand is
//!
//! ```text
//!   prod_i multinomial(n_i; nu_i1..nu_ip) prod_j x_ij^nu_ij
//!   ---------------------------------------------------------------------
//!   prod_{j<p} gen_binomial(S_j + t_j - 1, G_j) (S_j + t_j)
//! ```
//!
//! with `S_j = sum_i n_ij` and `G_j = sum_i nu_ij`. With one slot and all
//! `t_j = 1` this is the single-index parametric sum [`kt_value`]; with two
//! slots and all `t_j = 1` it is [`two_index_value`].
//!
//! [`c_direct`] enumerates chains; [`c_recursive`] runs the depth-reduction
//! recurrence over a memo table and is the fast path.

mod recursive;
mod verify;

use std::fmt;

use num_traits::{One, Zero};

use crate::chains::{chain_count, enumerate_chains, gaps};
use crate::error::{Error, Result};
use crate::exact::{
    binomial, format_rational_list, from_biguint, gen_binomial, int, is_nonpositive_integer,
    multinomial, parse_rational_list, pow, Rational,
};
use crate::multiseq::SequenceRule;

pub use recursive::{c_recursive, RecursiveTable};
pub use verify::{
    verify_difference_formula, verify_duality, verify_kt_reduction, verify_recurrence,
    verify_shift_identity, verify_two_index_reduction,
};

/// Parameters of a nested sum: `r` blocks of `p` rationals plus `p - 1`
/// shift parameters, none of which is a nonpositive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NestedSumSpec {
    xblocks: Vec<Vec<Rational>>,
    tparams: Vec<Rational>,
}

impl NestedSumSpec {
    pub fn new(xblocks: Vec<Vec<Rational>>, tparams: Vec<Rational>) -> Result<Self> {
        let p = match xblocks.first() {
            Some(b) if !b.is_empty() => b.len(),
            _ => return Err(Error::InvalidSpec("need at least one nonempty x block".into())),
        };
        if let Some(bad) = xblocks.iter().find(|b| b.len() != p) {
            return Err(Error::InvalidSpec(format!(
                "all x blocks must have length {p}, found length {}",
                bad.len()
            )));
        }
        if tparams.len() != p - 1 {
            return Err(Error::InvalidSpec(format!(
                "depth {p} needs {} t parameters, got {}",
                p - 1,
                tparams.len()
            )));
        }
        if let Some(t) = tparams.iter().find(|t| is_nonpositive_integer(t)) {
            return Err(Error::InvalidSpec(format!(
                "t parameter {t} is a nonpositive integer"
            )));
        }
        Ok(Self { xblocks, tparams })
    }

    /// One slot, all `t_j = 1`.
    pub fn kt(x: Vec<Rational>) -> Result<Self> {
        let p = x.len();
        Self::new(vec![x], vec![int(1); p.saturating_sub(1)])
    }

    /// Parses the CLI syntax: blocks separated by `;`, entries by `,`,
    /// e.g. `x = "1/2,1/3;0,1"`, `t = "2"`.
    pub fn parse(x: &str, t: &str) -> Result<Self> {
        let xblocks = x
            .split(';')
            .map(parse_rational_list)
            .collect::<Result<Vec<_>>>()?;
        Self::new(xblocks, parse_rational_list(t)?)
    }

    /// Number of index slots.
    pub fn r(&self) -> usize {
        self.xblocks.len()
    }

    /// Depth.
    pub fn p(&self) -> usize {
        self.xblocks[0].len()
    }

    pub fn xblocks(&self) -> &[Vec<Rational>] {
        &self.xblocks
    }

    pub fn tparams(&self) -> &[Rational] {
        &self.tparams
    }

    /// Drops the first component of every block and the first shift parameter.
    pub fn reduce_depth(&self) -> Result<Self> {
        if self.p() < 2 {
            return Err(Error::DepthTooSmall);
        }
        Ok(Self {
            xblocks: self.xblocks.iter().map(|b| b[1..].to_vec()).collect(),
            tparams: self.tparams[1..].to_vec(),
        })
    }

    /// Replaces every `x_ij` by `1 - x_ij`.
    pub fn one_minus(&self) -> Self {
        Self {
            xblocks: self
                .xblocks
                .iter()
                .map(|b| b.iter().map(|x| Rational::one() - x).collect())
                .collect(),
            tparams: self.tparams.clone(),
        }
    }

    /// The `2r`-slot spec `x_1; ...; x_r; 1-x_1; ...; 1-x_r` with the same `t`.
    pub fn with_complements(&self) -> Self {
        let mut xblocks = self.xblocks.clone();
        xblocks.extend(self.one_minus().xblocks);
        Self {
            xblocks,
            tparams: self.tparams.clone(),
        }
    }

    /// Number of summands [`c_direct`] visits at `n`.
    pub fn summand_count(&self, n: &[usize]) -> u128 {
        n.iter()
            .try_fold(1u128, |acc, &ni| acc.checked_mul(chain_count(ni, self.p())))
            .unwrap_or(u128::MAX)
    }

    fn check_arity(&self, n: &[usize]) -> Result<()> {
        if n.len() != self.r() {
            return Err(Error::ArityMismatch {
                expected: self.r(),
                got: n.len(),
            });
        }
        Ok(())
    }

    fn check_guard(&self, n: &[usize], guard: u128) -> Result<()> {
        let count = self.summand_count(n);
        if count > guard {
            return Err(Error::GuardExceeded {
                what: "summand count (use the recursive evaluator)",
                count,
                limit: guard,
            });
        }
        Ok(())
    }
}

impl fmt::Display for NestedSumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.xblocks.iter().map(|b| format_rational_list(b)).collect();
        write!(f, "x=[{}] t=[{}]", blocks.join(";"), format_rational_list(&self.tparams))
    }
}

/// One slot's chain with its slot-local weight
/// `multinomial(n_i; nu) prod_j x_ij^nu_j`.
struct WeightedChain {
    chain: Vec<usize>,
    gaps: Vec<usize>,
    weight: Rational,
}

fn weighted_chains(n: usize, x: &[Rational]) -> Result<Vec<WeightedChain>> {
    enumerate_chains(n, x.len(), u128::MAX)?
        .map(|chain| {
            let nu = gaps(&chain);
            let mut weight = from_biguint(multinomial(n, &nu)?);
            for (xj, &e) in x.iter().zip(&nu) {
                weight *= pow(xj, e);
            }
            Ok(WeightedChain {
                chain,
                gaps: nu,
                weight,
            })
        })
        .collect()
}

/// Evaluates the nested sum by enumerating every chain family, with the
/// default summand guard.
pub fn c_direct(spec: &NestedSumSpec, n: &[usize]) -> Result<Rational> {
    c_direct_guarded(spec, n, crate::DEFAULT_GUARD)
}

pub fn c_direct_guarded(spec: &NestedSumSpec, n: &[usize], guard: u128) -> Result<Rational> {
    spec.check_arity(n)?;
    spec.check_guard(n, guard)?;
    let p = spec.p();
    let slots: Vec<Vec<WeightedChain>> = n
        .iter()
        .zip(spec.xblocks())
        .map(|(&ni, x)| weighted_chains(ni, x))
        .collect::<Result<_>>()?;

    let mut total = Rational::zero();
    let mut pick = vec![0usize; slots.len()];
    loop {
        let family: Vec<&WeightedChain> = pick.iter().zip(&slots).map(|(&c, s)| &s[c]).collect();
        let numerator: Rational = family.iter().map(|w| &w.weight).product();
        if !numerator.is_zero() {
            let mut denominator = Rational::one();
            for (j, t) in spec.tparams().iter().enumerate().take(p - 1) {
                let level: usize = family.iter().map(|w| w.chain[j]).sum();
                let gap: usize = family.iter().map(|w| w.gaps[j]).sum();
                let shifted = int(level as i64) + t;
                denominator *= gen_binomial(&(&shifted - Rational::one()), gap) * shifted;
            }
            if denominator.is_zero() {
                return Err(Error::Internal(format!("zero denominator in {spec} at {n:?}")));
            }
            total += numerator / denominator;
        }
        // odometer over the chain families
        let Some(slot) = (0..pick.len()).rev().find(|&i| pick[i] + 1 < slots[i].len()) else {
            break;
        };
        pick[slot] += 1;
        pick[slot + 1..].iter_mut().for_each(|c| *c = 0);
    }
    Ok(total)
}

/// The sequence `n -> c_direct(spec, n)` as a memoized rule. The rule does
/// not apply the summand guard; callers bound the region they evaluate.
pub fn c_rule(spec: &NestedSumSpec) -> SequenceRule {
    let spec = spec.clone();
    SequenceRule::new(spec.r(), move |n| {
        c_direct_guarded(&spec, n, u128::MAX).expect("spec invariants exclude poles")
    })
}

/// The single-index sum
/// `sum_chains x_1^(n_1-n_2) ... x_{p-1}^(n_{p-1}-n_p) x_p^n_p / ((n_1+1)...(n_{p-1}+1))`.
///
/// Panics on an empty parameter vector.
pub fn kt_value(x: &[Rational], n: usize) -> Rational {
    assert!(!x.is_empty(), "parameter vector must be nonempty");
    let p = x.len();
    let mut total = Rational::zero();
    for chain in enumerate_chains(n, p, u128::MAX).expect("p >= 1") {
        let nu = gaps(&chain);
        let mut term: Rational = x.iter().zip(&nu).map(|(xj, &e)| pow(xj, e)).product();
        for &m in &chain[..p - 1] {
            term /= int(m as i64 + 1);
        }
        total += term;
    }
    total
}

/// The two-index sum with coefficient
/// `P = C(n+k,n)^-1 prod_{j<p} C(nu_j + kappa_j, nu_j) C(n_p + k_p, n_p)`
/// and denominator `prod_{j<p} (n_j + k_j + 1)`.
///
/// Panics unless `x` and `y` are nonempty and of equal length.
pub fn two_index_value(x: &[Rational], y: &[Rational], n: usize, k: usize) -> Rational {
    assert!(!x.is_empty() && x.len() == y.len(), "x and y must have equal nonzero length");
    let p = x.len();
    let outer = from_biguint(binomial(n + k, n));
    let ys: Vec<(Vec<usize>, Vec<usize>)> = enumerate_chains(k, p, u128::MAX)
        .expect("p >= 1")
        .map(|c| {
            let g = gaps(&c);
            (c, g)
        })
        .collect();
    let mut total = Rational::zero();
    for nc in enumerate_chains(n, p, u128::MAX).expect("p >= 1") {
        let nu = gaps(&nc);
        let xmono: Rational = x.iter().zip(&nu).map(|(v, &e)| pow(v, e)).product();
        for (kc, kappa) in &ys {
            let ymono: Rational = y.iter().zip(kappa).map(|(v, &e)| pow(v, e)).product();
            let mut coeff = Rational::one();
            for j in 0..p {
                // the last factor is C(n_p + k_p, n_p); nu_p = n_p, kappa_p = k_p
                coeff *= from_biguint(binomial(nu[j] + kappa[j], nu[j]));
            }
            let mut term = coeff * &xmono * ymono / &outer;
            for j in 0..p - 1 {
                term /= int((nc[j] + kc[j] + 1) as i64);
            }
            total += term;
        }
    }
    total
}
