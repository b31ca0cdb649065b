//! Sparse path-count convolution over packed lattice keys.
//!
//! A position `x in Z^d` is packed into a `u128`, coordinate `c` occupying
//! bits `[c*w, (c+1)*w)` and stored as `x_c + offset`. Taking a step is then
//! a single signed addition of a precomputed delta. Fields never borrow into
//! each other because `|x_c| <= steps <= offset`.

use std::ops::AddAssign;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::lattice::{IncrementTable, LatticePoint};

/// Path counts: `u128` when they provably fit, `BigUint` otherwise.
pub(crate) trait Mass: Clone + Zero + One + for<'a> AddAssign<&'a Self> {
    fn mul_ref(&self, other: &Self) -> Self;
    fn to_big(&self) -> BigUint;
}

impl Mass for u128 {
    #[inline]
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Mass for BigUint {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct KeyCodec {
    d: usize,
    width: u32,
    offset: i64,
    deltas: Vec<i128>,
}

impl KeyCodec {
    /// Codec able to hold every position reachable in `max_steps` steps.
    pub(crate) fn new(table: &IncrementTable, max_steps: usize) -> Result<Self> {
        let d = table.d();
        let span = 2 * max_steps as u64 + 1;
        let width = (64 - span.leading_zeros()).max(1);
        if d as u32 * width > 126 {
            return Err(Error::CapExceeded {
                what: "packed key bits",
                limit: 126,
                got: u64::from(d as u32 * width),
            });
        }
        let deltas = table
            .rows()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(c, &m)| i128::from(m) << (c as u32 * width))
                    .sum()
            })
            .collect();
        Ok(Self {
            d,
            width,
            offset: max_steps as i64,
            deltas,
        })
    }

    pub(crate) fn origin(&self) -> u128 {
        (0..self.d).fold(0u128, |k, c| k | (self.offset as u128) << (c as u32 * self.width))
    }

    /// Key of `-x` given the key of `x`.
    #[inline]
    pub(crate) fn negate(&self, key: u128) -> u128 {
        2 * self.origin() - key
    }

    pub(crate) fn decode(&self, key: u128) -> LatticePoint {
        let mask = (1u128 << self.width) - 1;
        LatticePoint {
            coords: (0..self.d)
                .map(|c| ((key >> (c as u32 * self.width)) & mask) as i64 - self.offset)
                .collect(),
        }
    }
}

/// Runs `steps` convolution steps starting from unit mass at the origin.
pub(crate) fn propagate<M: Mass>(
    codec: &KeyCodec,
    steps: usize,
    budget: usize,
) -> Result<FxHashMap<u128, M>> {
    let mut cur: FxHashMap<u128, M> = FxHashMap::default();
    cur.insert(codec.origin(), M::one());
    for _ in 0..steps {
        let mut next: FxHashMap<u128, M> =
            FxHashMap::with_capacity_and_hasher(cur.len() * 4, Default::default());
        for (&key, mass) in &cur {
            for &delta in &codec.deltas {
                let to = (key as i128 + delta) as u128;
                next.entry(to).or_insert_with(M::zero).add_assign(mass);
            }
            if next.len() > budget {
                return Err(Error::MemoryBudgetExceeded {
                    states: next.len(),
                    budget,
                });
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// Number of canonical-increment paths of length `steps` that end at the origin,
/// found by meeting in the middle: `sum_x D_a(x) D_b(-x)`.
pub(crate) fn origin_paths<M: Mass>(table: &IncrementTable, steps: usize, budget: usize) -> Result<BigUint> {
    let a = steps.div_ceil(2);
    let b = steps / 2;
    let codec = KeyCodec::new(table, a)?;
    let first: FxHashMap<u128, M> = propagate(&codec, a, budget)?;
    let second: FxHashMap<u128, M> = if a == b {
        first.clone()
    } else {
        propagate(&codec, b, budget)?
    };
    let mut total = M::zero();
    for (&key, mass) in &second {
        if let Some(m) = first.get(&codec.negate(key)) {
            total += &m.mul_ref(mass);
        }
    }
    Ok(total.to_big())
}
