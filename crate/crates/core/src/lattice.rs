//! Pair indexing, sign vectors, walk increments and the points the walk and
//! its characteristic function live on.
//!
//! Coordinates of every `d = n(n-1)/2` dimensional object are indexed by the
//! unordered pairs `{i, j}` with `1 <= i < j <= n`, flattened in lexicographic
//! order: `{1,2}, {1,3}, ..., {1,n}, {2,3}, ..., {n-1,n}`. Everything in this
//! crate goes through [`PairIndex`] or [`pair_flat`] for that mapping.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest row count the pair index supports (sign vectors are `u32` masks).
pub const MAX_INDEX_N: usize = 32;

/// Largest row count for which the increment set may be enumerated.
pub const MAX_ENUM_N: usize = 24;

/// Number of unordered pairs of `n` rows.
#[inline]
pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Flat index of the pair `{i, j}` (1-based, `i < j`), without validation.
#[inline]
pub const fn pair_flat(n: usize, i: usize, j: usize) -> usize {
    (i - 1) * (2 * n - i) / 2 + (j - i - 1)
}

/// Row count `n`, column (step) count `t`, and the derived dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Parameters {
    pub n: usize,
    pub t: usize,
}

impl Parameters {
    pub fn new(n: usize, t: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameters(format!("n = {n} must be at least 2")));
        }
        if n > MAX_INDEX_N {
            return Err(Error::CapExceeded {
                what: "n",
                limit: MAX_INDEX_N as u64,
                got: n as u64,
            });
        }
        Ok(Self { n, t })
    }

    /// `d = C(n, 2)`, the dimension of the walk.
    #[inline]
    pub fn d(&self) -> usize {
        pair_count(self.n)
    }

    pub fn with_t(&self, t: usize) -> Self {
        Self { n: self.n, t }
    }
}

/// An unordered pair `{i, j}` of rows together with its flat coordinate index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairIndex {
    pub i: usize,
    pub j: usize,
    pub flat: usize,
}

impl PairIndex {
    pub fn new(n: usize, i: usize, j: usize) -> Result<Self> {
        if !(1 <= i && i < j && j <= n) || n > MAX_INDEX_N {
            return Err(Error::InvalidParameters(format!(
                "pair ({i}, {j}) is not a valid pair of rows for n = {n}"
            )));
        }
        Ok(Self {
            i,
            j,
            flat: pair_flat(n, i, j),
        })
    }

    pub fn from_flat(n: usize, flat: usize) -> Result<Self> {
        if n > MAX_INDEX_N || flat >= pair_count(n) {
            return Err(Error::InvalidParameters(format!(
                "flat index {flat} out of range for n = {n}"
            )));
        }
        let mut rest = flat;
        let mut i = 1;
        while rest >= n - i {
            rest -= n - i;
            i += 1;
        }
        Ok(Self {
            i,
            j: i + 1 + rest,
            flat,
        })
    }
}

/// All pairs of `n` rows in flat order.
pub fn pairs(n: usize) -> impl Iterator<Item = PairIndex> {
    (1..n).flat_map(move |i| {
        (i + 1..=n).map(move |j| PairIndex {
            i,
            j,
            flat: pair_flat(n, i, j),
        })
    })
}

/// An element of `{-1, 1}^n`, stored as a bit mask: bit `k` set means
/// `y_{k+1} = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignVector {
    bits: u32,
    n: usize,
}

impl SignVector {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        if !(2..=MAX_INDEX_N).contains(&n) {
            return Err(Error::InvalidParameters(format!("sign vector dimension {n}")));
        }
        if n < 32 && bits >> n != 0 {
            return Err(Error::InvalidParameters(format!(
                "bits {bits:#x} set above dimension {n}"
            )));
        }
        Ok(Self { bits, n })
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let mut bits = 0u32;
        for (k, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => bits |= 1 << k,
                _ => return Err(Error::BadInput(format!("entry {s} is not +1 or -1"))),
            }
        }
        Self::new(signs.len(), bits)
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    /// The entry `y_k` for 1-based `k`.
    #[inline]
    pub fn get(&self, k: usize) -> i8 {
        if self.bits >> (k - 1) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn negate(&self) -> Self {
        let mask = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        Self {
            bits: !self.bits & mask,
            n: self.n,
        }
    }

    pub fn signs(&self) -> Vec<i8> {
        (1..=self.n).map(|k| self.get(k)).collect()
    }
}

/// One step of the walk: the vector of pairwise products `y_i y_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IncrementVector {
    pub coords: Vec<i8>,
}

impl IncrementVector {
    /// Every triple `i < j < k` satisfies `c_ij * c_jk * c_ik = +1`.
    pub fn is_triangle_consistent(&self, n: usize) -> bool {
        if self.coords.len() != pair_count(n) {
            return false;
        }
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let p = self.coords[pair_flat(n, i, j)]
                        * self.coords[pair_flat(n, j, k)]
                        * self.coords[pair_flat(n, i, k)];
                    if p != 1 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The increment `Z(y)`; coordinate `{i, j}` is `y_i * y_j`.
pub fn z_map(y: &SignVector) -> IncrementVector {
    let n = y.dim();
    let mut coords = Vec::with_capacity(pair_count(n));
    for i in 1..n {
        for j in i + 1..=n {
            coords.push(y.get(i) * y.get(j));
        }
    }
    IncrementVector { coords }
}

/// Canonical sign vectors (`y_1 = +1`), one per element of the increment set.
pub fn canonical_sign_vectors(n: usize) -> impl Iterator<Item = SignVector> {
    let count = 1u64 << (n - 1);
    (0..count).map(move |mask| SignVector {
        bits: (mask as u32) << 1,
        n,
    })
}

fn check_enum_cap(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("n = {n} must be at least 2")));
    }
    if n > MAX_ENUM_N {
        return Err(Error::CapExceeded {
            what: "n",
            limit: MAX_ENUM_N as u64,
            got: n as u64,
        });
    }
    Ok(())
}

/// Lazily enumerates the `2^(n-1)` distinct increments.
pub fn increments(n: usize) -> Result<impl Iterator<Item = IncrementVector>> {
    check_enum_cap(n)?;
    Ok(canonical_sign_vectors(n).map(|y| z_map(&y)))
}

/// The increment set `M`, in canonical order (`y_1 = +1`, remaining bits counting up).
pub fn enumerate_increments(n: usize) -> Result<Vec<IncrementVector>> {
    Ok(increments(n)?.collect())
}

/// Dense row-major table of the canonical increments, shared by the
/// evaluation and counting kernels.
#[derive(Debug, Clone)]
pub struct IncrementTable {
    n: usize,
    d: usize,
    data: Vec<i8>,
}

impl IncrementTable {
    pub fn new(n: usize) -> Result<Self> {
        check_enum_cap(n)?;
        let d = pair_count(n);
        let mut data = Vec::with_capacity(d << (n - 1));
        for y in canonical_sign_vectors(n) {
            data.extend(z_map(&y).coords);
        }
        Ok(Self { n, d, data })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn len(&self) -> usize {
        1 << (self.n - 1)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn row(&self, idx: usize) -> &[i8] {
        &self.data[idx * self.d..(idx + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.data.chunks_exact(self.d)
    }
}

/// A point of `Z^d` reached by the walk.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
}

impl LatticePoint {
    pub fn origin(d: usize) -> Self {
        Self { coords: vec![0; d] }
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// After `t` steps every coordinate lies in `[-t, t]` with the parity of `t`.
    pub fn reachable_after(&self, t: usize) -> bool {
        let t = t as i64;
        self.coords
            .iter()
            .all(|&c| c.abs() <= t && (c - t).rem_euclid(2) == 0)
    }
}

/// A point of the torus `[-pi, pi]^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(bad) = coords.iter().find(|c| !c.is_finite() || c.abs() > PI) {
            return Err(Error::BadInput(format!(
                "torus coordinate {bad} is outside [-pi, pi]"
            )));
        }
        Ok(Self { coords })
    }

    pub fn zeros(d: usize) -> Self {
        Self { coords: vec![0.0; d] }
    }

    /// Reduces every coordinate modulo `2 pi` into `[-pi, pi)`.
    pub fn wrapped(coords: Vec<f64>) -> Self {
        Self {
            coords: coords.into_iter().map(wrap_angle).collect(),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn get(&self, pair: PairIndex) -> f64 {
        self.coords[pair.flat]
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn neg(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// Reduces an angle into `[-pi, pi)`.
#[inline]
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let r = (x + PI).rem_euclid(two_pi) - PI;
    if r >= PI {
        r - two_pi
    } else {
        r
    }
}
