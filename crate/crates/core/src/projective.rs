//! Enumeration of 𝐏ⁿ⁻¹(𝐅_p) by index.
//!
//! Points are normalized so that the first nonzero coordinate is 1 and are
//! numbered group by group: first every point whose leading 1 sits in
//! position 0, then position 1, and so on. Inside a group the free trailing
//! coordinates are read as base-p digits, least significant last. Any index
//! range can therefore be scanned independently.

use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default cap on the number of points a scan may visit.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Number of points of 𝐏^{n−1}(𝐅_p), i.e. (pⁿ − 1)/(p − 1).
pub fn point_count(p: u64, n: usize) -> u128 {
    let p = p as u128;
    (0..n).fold(0u128, |acc, _| acc.saturating_mul(p).saturating_add(1))
}

pub fn check_budget(p: u64, n: usize, budget: u128) -> Result<u128> {
    let needed = point_count(p, n);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(needed)
}

/// The normalized representative with the given index.
pub fn point_at(p: u64, n: usize, mut index: u128) -> Vec<u32> {
    let p128 = p as u128;
    let mut v = vec![0u32; n];
    for lead in 0..n {
        let free = n - 1 - lead;
        let group = p128.pow(free as u32);
        if index < group {
            v[lead] = 1;
            for slot in (lead + 1..n).rev() {
                v[slot] = (index % p128) as u32;
                index /= p128;
            }
            return v;
        }
        index -= group;
    }
    panic!("point index out of range");
}

/// Splits `0..total` into contiguous ranges of roughly equal size.
pub fn partition(total: u128, parts: usize) -> Vec<Range<u128>> {
    let parts = parts.max(1) as u128;
    let step = total.div_ceil(parts).max(1);
    let mut out = Vec::new();
    let mut start = 0;
    while start < total {
        let end = (start + step).min(total);
        out.push(start..end);
        start = end;
    }
    out
}

/// Runs `scan` on independent index ranges in parallel and concatenates the
/// results in index order.
pub fn scan_partitioned<T, S>(total: u128, scan: S) -> Vec<T>
where
    T: Send,
    S: Fn(Range<u128>) -> Vec<T> + Sync,
{
    let chunks = partition(total, 4 * rayon::current_num_threads());
    chunks.into_par_iter().map(&scan).collect::<Vec<_>>().into_iter().flatten().collect()
}
