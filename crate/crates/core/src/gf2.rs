//! Linear algebra over GF(2) on bit strings.

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Reduced row echelon form. Returns the nonzero rows and their pivot
/// columns (counted from the left).
fn rref(rows: &[Bits], n: usize) -> (Vec<u64>, Vec<usize>) {
    let mut m: Vec<u64> = rows.iter().map(|r| r.value()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let mask = 1u64 << (n - 1 - col);
        let Some(p) = (r..m.len()).find(|&i| m[i] & mask != 0) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i] & mask != 0 {
                m[i] ^= m[r];
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Bits]) -> usize {
    let n = rows.iter().map(|r| r.width()).max().unwrap_or(0);
    rref(rows, n).1.len()
}

/// The nonzero `h` of width `n` orthogonal to all `samples`, which must be
/// `n - 1` independent rows.
pub fn solve_mod2(samples: &[Bits], n: usize) -> Result<Bits> {
    let needed = n.saturating_sub(1);
    let (rows, pivots) = rref(samples, n);
    if pivots.len() != needed || samples.len() != needed {
        return Err(Error::Rank { rank: pivots.len(), needed });
    }
    let free = (0..n).find(|c| !pivots.contains(c)).expect("one free column");
    let free_mask = 1u64 << (n - 1 - free);
    let mut h = free_mask;
    for (row, &p) in rows.iter().zip(&pivots) {
        if row & free_mask != 0 {
            h |= 1 << (n - 1 - p);
        }
    }
    Ok(Bits::new(h, n))
}
