//! Timing of chain enumeration against the depth-reduction recurrence.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::Result;
use crate::exact::int;
use crate::nested::{c_direct_guarded, NestedSumSpec, RecursiveTable};
use crate::random::Grid;

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub r: usize,
    pub p: usize,
    pub n: usize,
    /// Summands visited by the direct evaluation.
    pub summands: u128,
    /// `(level, index)` entries filled by the recurrence.
    pub memo_entries: usize,
    pub direct_us: f64,
    pub recursive_us: f64,
    pub speedup: f64,
    pub equal: bool,
}

fn best_of<T>(reps: usize, mut f: impl FnMut() -> Result<T>) -> Result<(T, Duration)> {
    let mut best = Duration::MAX;
    let mut out = None;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let v = f()?;
        best = best.min(start.elapsed());
        out = Some(v);
    }
    Ok((out.expect("at least one repetition"), best))
}

/// One slot, depth `p`, all `t_j = 1`, seeded random `x`; one row per `n`
/// in `ladder`, each timing the best of `reps` runs.
pub fn bench_ladder(seed: u64, p: usize, ladder: &[usize], reps: usize, guard: u128) -> Result<Vec<BenchRow>> {
    let mut grid = Grid::new(seed);
    let spec = NestedSumSpec::new(vec![grid.rationals(p)], vec![int(1); p.saturating_sub(1)])?;
    ladder
        .iter()
        .map(|&n| {
            let idx = [n];
            let (direct, direct_time) = best_of(reps, || c_direct_guarded(&spec, &idx, guard))?;
            let (table, recursive_time) = best_of(reps, || RecursiveTable::build(&spec, &idx))?;
            let recursive = table.get(&idx).expect("corner of the table");
            let (d, r) = (direct_time.as_secs_f64() * 1e6, recursive_time.as_secs_f64() * 1e6);
            Ok(BenchRow {
                r: 1,
                p,
                n,
                summands: spec.summand_count(&idx),
                memo_entries: table.memo_entries(),
                direct_us: d,
                recursive_us: r,
                speedup: d / r.max(f64::MIN_POSITIVE),
                equal: &direct == recursive,
            })
        })
        .collect()
}

pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("r,p,n,summands,memo_entries,direct_us,recursive_us,speedup,equal\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.1},{:.1},{:.1},{}",
            row.r, row.p, row.n, row.summands, row.memo_entries, row.direct_us, row.recursive_us, row.speedup, row.equal
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_rows_agree() {
        let rows = bench_ladder(1, 3, &[0, 3, 8], 1, u128::MAX).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.equal));
        assert_eq!(rows[2].summands, 45);
        assert_eq!(rows[2].memo_entries, 27);
        let csv = rows_to_csv(&rows);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("r,p,n,summands"));
    }
}
