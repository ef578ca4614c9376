//! Multiple harmonic sums
//!
//! ```text
//! s_mu(n) = sum_{n = n_1 >= ... >= n_p >= 0} 1 / ((n_1+1)^mu_1 ... (n_p+1)^mu_p)
//! ```
//!
//! and the dual index `mu*` with `sum_k (-1)^k C(n,k) s_mu(k) = s_mu*(n)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::chains::enumerate_chains;
use crate::error::{Error, Result};
use crate::exact::{int, pow, Rational};
use crate::multiseq::{nabla, SequenceRule};
use crate::nested::kt_value;
use crate::report::{Identity, Report};

/// A nonempty tuple of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::ParseMultiIndex(format!("{parts:?}"), "empty"));
        }
        if parts.contains(&0) {
            return Err(Error::ParseMultiIndex(format!("{parts:?}"), "parts must be positive"));
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// Proper partial sums `mu_1, mu_1 + mu_2, ..., mu_1 + ... + mu_{p-1}`.
    fn cut_points(&self) -> BTreeSet<usize> {
        self.0[..self.0.len() - 1]
            .iter()
            .scan(0, |acc, &m| {
                *acc += m;
                Some(*acc)
            })
            .collect()
    }

    fn from_cut_points(weight: usize, cuts: &BTreeSet<usize>) -> Self {
        let mut parts = Vec::with_capacity(cuts.len() + 1);
        let mut prev = 0;
        for &c in cuts.iter().chain(std::iter::once(&weight)) {
            parts.push(c - prev);
            prev = c;
        }
        Self(parts)
    }

    /// All multi-indices of the given weight, in lexicographic order.
    pub fn compositions(weight: usize) -> Vec<Self> {
        if weight == 0 {
            return Vec::new();
        }
        let inner = weight - 1;
        let mut all: Vec<Self> = (0u64..1 << inner)
            .map(|mask| {
                let cuts = (1..weight).filter(|c| mask >> (c - 1) & 1 == 1).collect();
                Self::from_cut_points(weight, &cuts)
            })
            .collect();
        all.sort();
        all
    }

    /// All multi-indices of weight `1..=max_weight`, by weight then lexicographically.
    pub fn up_to_weight(max_weight: usize) -> Vec<Self> {
        (1..=max_weight).flat_map(Self::compositions).collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::ParseMultiIndex(s.to_string(), "expected parentheses"))?;
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::ParseMultiIndex(s.to_string(), "parts must be positive integers"))?;
        Self::new(parts).map_err(|_| Error::ParseMultiIndex(s.to_string(), "parts must be positive"))
    }
}

/// `s_mu(n)` by direct enumeration of weakly decreasing chains.
pub fn mhs_value(mu: &MultiIndex, n: usize) -> Result<Rational> {
    mhs_value_guarded(mu, n, crate::DEFAULT_GUARD)
}

pub fn mhs_value_guarded(mu: &MultiIndex, n: usize, guard: u128) -> Result<Rational> {
    let mut total = Rational::zero();
    for chain in enumerate_chains(n, mu.depth(), guard)? {
        let denom: Rational = chain
            .iter()
            .zip(mu.parts())
            .map(|(&m, &e)| pow(&int(m as i64 + 1), e))
            .product();
        total += denom.recip();
    }
    Ok(total)
}

/// `n -> s_mu(n)` as a sequence rule (no summand guard).
pub fn mhs_rule(mu: &MultiIndex) -> SequenceRule {
    let mu = mu.clone();
    SequenceRule::new(1, move |n| {
        mhs_value_guarded(&mu, n[0], u128::MAX).expect("depth is positive")
    })
}

/// The dual index: complement the proper partial sums of `mu` inside
/// `{1, ..., w-1}` and read the complement back as a composition of `w`.
pub fn dual_index(mu: &MultiIndex) -> MultiIndex {
    let w = mu.weight();
    let cuts = mu.cut_points();
    let complement = (1..w).filter(|c| !cuts.contains(c)).collect();
    MultiIndex::from_cut_points(w, &complement)
}

/// `sum_{k <= n} (-1)^k C(n,k) s_mu(k)`, the inversion of `s_mu` at `n`.
pub fn duality_lhs(mu: &MultiIndex, n: usize) -> Rational {
    nabla(&mhs_rule(mu)).eval(&[n])
}

fn unit_run(zeros: usize) -> impl Iterator<Item = Rational> {
    std::iter::repeat_n(Rational::zero(), zeros).chain(std::iter::once(Rational::one()))
}

/// `(0^{mu_1-1}, 1, ..., 0^{mu_p-1}, 1, 0)`, length `w + 1`.
pub fn embed_type1(mu: &MultiIndex) -> Vec<Rational> {
    let mut v: Vec<Rational> = mu.parts().iter().flat_map(|&m| unit_run(m - 1)).collect();
    v.push(Rational::zero());
    v
}

/// `(0^{mu_1-1}, 1, ..., 0^{mu_{p-1}-1}, 1, 0^{mu_p}, 1)`, length `w + 1`.
pub fn embed_type2(mu: &MultiIndex) -> Vec<Rational> {
    let parts = mu.parts();
    let (last, head) = parts.split_last().expect("nonempty");
    head.iter()
        .flat_map(|&m| unit_run(m - 1))
        .chain(unit_run(*last))
        .collect()
}

/// Checks the duality for `mu` at `n = 0..=nmax`.
pub fn verify_mhs_duality(mu: &MultiIndex, nmax: usize) -> Result<Report> {
    let dual = dual_index(mu);
    let label = format!("mu={mu} mu*={dual}");
    let lhs_rule = nabla(&mhs_rule(mu));
    let mut report = Report::new();
    for n in 0..=nmax {
        let rhs = mhs_value(&dual, n)?;
        report.record(Identity::MhsDuality, label.clone(), vec![n], &lhs_rule.eval(&[n]), &rhs);
    }
    Ok(report)
}

/// Checks both 0/1 embeddings against `s_mu` at `n = 0..=nmax`.
pub fn verify_embeddings(mu: &MultiIndex, nmax: usize) -> Result<Report> {
    let mut report = Report::new();
    for (name, x) in [("e1", embed_type1(mu)), ("e2", embed_type2(mu))] {
        let label = format!("mu={mu} {name}");
        for n in 0..=nmax {
            let s = mhs_value(mu, n)?;
            report.record(Identity::MhsEmbedding, label.clone(), vec![n], &kt_value(&x, n), &s);
        }
    }
    Ok(report)
}
