//! Binomial coefficients and the lexicographic ranking of fixed-size subsets of `1..=n`.
//!
//! Rows of the online incidence matrices are indexed by subsets; the rank of a sorted tuple
//! among all tuples of the same size (in lexicographic order) is the row index.

use crate::error::{Error, Result};

/// `C(n, k)`, saturating at `usize::MAX`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Rank of the sorted subset `subset` among all `size`-subsets of `1..=n`.
pub fn rank_subset(subset: &[usize], n: usize, size: usize) -> Result<usize> {
    if subset.len() != size {
        return Err(Error::domain(format!(
            "subset {:?} has {} elements, expected {}",
            subset,
            subset.len(),
            size
        )));
    }
    let mut rank = 0;
    let mut prev = 0;
    for (pos, &x) in subset.iter().enumerate() {
        if x <= prev || x > n {
            return Err(Error::domain(format!(
                "subset {:?} is not a strictly increasing list of labels in 1..={}",
                subset, n
            )));
        }
        let remaining = size - pos - 1;
        for skipped in prev + 1..x {
            rank += binomial(n - skipped, remaining);
        }
        prev = x;
    }
    Ok(rank)
}

/// Inverse of [`rank_subset`].
pub fn unrank_subset(mut rank: usize, n: usize, size: usize) -> Result<Vec<usize>> {
    let total = binomial(n, size);
    if rank >= total {
        return Err(Error::domain(format!(
            "rank {} out of range for {}-subsets of 1..={} ({} subsets)",
            rank, size, n, total
        )));
    }
    let mut out = Vec::with_capacity(size);
    let mut x = 1;
    for pos in 0..size {
        let remaining = size - pos - 1;
        loop {
            let block = binomial(n - x, remaining);
            if rank < block {
                break;
            }
            rank -= block;
            x += 1;
        }
        out.push(x);
        x += 1;
    }
    Ok(out)
}

/// Calls `f` with every `size`-subset of `pool` (pool order preserved), in lexicographic order
/// when `pool` is sorted.
pub fn for_each_subset<F: FnMut(&[usize])>(pool: &[usize], size: usize, mut f: F) {
    let n = pool.len();
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    let mut buf: Vec<usize> = idx.iter().map(|&i| pool[i]).collect();
    loop {
        f(&buf);
        // advance the rightmost index that can still move
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..size {
            buf[j] = pool[idx[j]];
        }
    }
}
