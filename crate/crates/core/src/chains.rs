//! Weakly decreasing chains `n = m_1 >= m_2 >= ... >= m_p >= 0`, the
//! summation domain shared by every nested sum in this crate.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::binomial;

/// Number of chains of length `p` starting at `n`: `C(n + p - 1, p - 1)`.
pub fn chain_count(n: usize, p: usize) -> u128 {
    if p == 0 {
        return 0;
    }
    binomial(n + p - 1, p - 1).to_u128().unwrap_or(u128::MAX)
}

/// Iterates the chains in lexicographically descending order, starting
/// at `(n, n, ..., n)` and ending at `(n, 0, ..., 0)`.
#[derive(Debug, Clone)]
pub struct Chains {
    current: Option<Vec<usize>>,
}

impl Iterator for Chains {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        // successor: lower the last movable entry and flatten the tail to it
        let mut next = out.clone();
        if let Some(j) = (1..next.len()).rev().find(|&j| next[j] > 0) {
            next[j] -= 1;
            let v = next[j];
            next[j + 1..].iter_mut().for_each(|m| *m = v);
            self.current = Some(next);
        }
        Some(out)
    }
}

/// All chains of length `p >= 1` starting at `n`, refusing when their number
/// exceeds `guard`.
pub fn enumerate_chains(n: usize, p: usize, guard: u128) -> Result<Chains> {
    if p == 0 {
        return Err(Error::InvalidSpec("chain length must be positive".into()));
    }
    let count = chain_count(n, p);
    if count > guard {
        return Err(Error::GuardExceeded {
            what: "chain count",
            count,
            limit: guard,
        });
    }
    Ok(Chains {
        current: Some(vec![n; p]),
    })
}

/// Consecutive gaps `nu_j = m_j - m_{j+1}`, with `nu_p = m_p`. They sum to `m_1`.
pub fn gaps(chain: &[usize]) -> Vec<usize> {
    let mut nu: Vec<usize> = chain.windows(2).map(|w| w[0] - w[1]).collect();
    if let Some(&last) = chain.last() {
        nu.push(last);
    }
    nu
}
