use num_bigint::BigUint;

use super::{CountMethod, CountResult};
use crate::error::{Error, Result};
use crate::lattice::Parameters;

/// Largest `n * t` for the scan over every matrix.
pub const BRUTE_FULL_CELLS: usize = 20;
/// Limits of the scan with the first row fixed to all ones.
pub const BRUTE_ROW_T: usize = 8;
pub const BRUTE_ROW_N: usize = 5;

/// Extends `rows` by every `t`-bit row orthogonal to all of them.
fn extend(rows: &mut Vec<u32>, n: usize, t: usize) -> u64 {
    if rows.len() == n {
        return 1;
    }
    let half = t as u32 / 2;
    let mut total = 0;
    for r in 0u32..(1 << t) {
        if rows.iter().all(|&q| (q ^ r).count_ones() == half) {
            rows.push(r);
            total += extend(rows, n, t);
            rows.pop();
        }
    }
    total
}

/// Counts `n x t` matrices over `{-1, 1}` with pairwise orthogonal rows by
/// direct enumeration, one `t`-bit mask per row (set bit = `-1`). Two rows
/// are orthogonal exactly when they differ in `t/2` places.
pub fn brute_force_count(params: &Parameters) -> Result<CountResult> {
    let (n, t) = (params.n, params.t);
    let count = if n * t <= BRUTE_FULL_CELLS {
        if t % 2 == 1 {
            0
        } else {
            extend(&mut Vec::with_capacity(n), n, t)
        }
    } else if t <= BRUTE_ROW_T && n <= BRUTE_ROW_N {
        // Negating columns maps solutions to solutions, so fix row 1 = all ones.
        if t % 2 == 1 {
            0
        } else {
            extend(&mut vec![0], n, t) << t
        }
    } else {
        return Err(Error::CapExceeded {
            what: "n * t (brute force)",
            limit: BRUTE_FULL_CELLS as u64,
            got: (n * t) as u64,
        });
    };
    Ok(CountResult::from_matrix_count(*params, BigUint::from(count), CountMethod::BruteForce))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(n: usize, t: usize) -> u64 {
        let r = brute_force_count(&Parameters::new(n, t).unwrap()).unwrap();
        u64::try_from(&r.matrix_count).unwrap()
    }

    #[test]
    fn oracle_values() {
        assert_eq!(n(2, 2), 8);
        assert_eq!(n(3, 4), 384);
        assert_eq!(n(4, 4), 768);
        assert_eq!(n(2, 3), 0);
    }

    #[test]
    fn naive_scan_agrees_for_two_by_two() {
        // every 2x2 sign matrix, checked entry by entry
        let mut hits = 0;
        for m in 0u32..16 {
            let e = |k: u32| if m >> k & 1 == 1 { -1 } else { 1 };
            if e(0) * e(2) + e(1) * e(3) == 0 {
                hits += 1;
            }
        }
        assert_eq!(hits, n(2, 2));
    }

    #[test]
    fn row_variant_matches_full_scan_where_both_apply() {
        let full = n(4, 4);
        let rows = extend(&mut vec![0], 4, 4) << 4;
        assert_eq!(full, rows);
    }

    #[test]
    fn beyond_caps() {
        assert!(brute_force_count(&Parameters::new(6, 8).unwrap()).is_err());
    }
}
