//! Seeded, batch-parallel Monte Carlo plumbing.
//!
//! Sample `i` always comes from batch `i / BATCH`, and batch `b` draws from
//! the ChaCha stream `b` of the run seed, so results do not depend on how
//! batches are scheduled across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub(crate) const BATCH: u64 = 10_000;

pub(crate) fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

/// Runs `f(rng, len)` on every batch of `samples` and folds the partial
/// results in batch order.
pub(crate) fn run_batches<A, F>(samples: u64, seed: u64, f: F) -> A
where
    A: Send + Default + std::ops::AddAssign,
    F: Fn(&mut ChaCha8Rng, u64) -> A + Sync,
{
    let batches = samples.div_ceil(BATCH);
    let parts: Vec<A> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let len = BATCH.min(samples - b * BATCH);
            f(&mut batch_rng(seed, b), len)
        })
        .collect();
    let mut total = A::default();
    for p in parts {
        total += p;
    }
    total
}

/// Compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::ops::AddAssign for Neumaier {
    fn add_assign(&mut self, other: Self) {
        self.add(other.sum);
        self.add(other.comp);
    }
}

/// First and second moments of a stream of complex samples.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct ComplexMoments {
    pub count: u64,
    pub re: Neumaier,
    pub im: Neumaier,
    pub re2: Neumaier,
    pub im2: Neumaier,
}

impl ComplexMoments {
    #[inline]
    pub(crate) fn push(&mut self, re: f64, im: f64) {
        self.count += 1;
        self.re.add(re);
        self.im.add(im);
        self.re2.add(re * re);
        self.im2.add(im * im);
    }

    /// Mean and standard error of the mean, for the real and imaginary parts.
    pub(crate) fn summary(&self) -> (f64, f64, f64, f64) {
        let n = self.count as f64;
        let mr = self.re.value() / n;
        let mi = self.im.value() / n;
        let var = |s2: f64, m: f64| ((s2 / n - m * m) * n / (n - 1.0).max(1.0)).max(0.0);
        (
            mr,
            mi,
            (var(self.re2.value(), mr) / n).sqrt(),
            (var(self.im2.value(), mi) / n).sqrt(),
        )
    }
}

impl std::ops::AddAssign for ComplexMoments {
    fn add_assign(&mut self, o: Self) {
        self.count += o.count;
        self.re += o.re;
        self.im += o.im;
        self.re2 += o.re2;
        self.im2 += o.im2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = Neumaier::default();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn batches_are_reproducible_and_cover_every_sample() {
        let f = |rng: &mut ChaCha8Rng, len: u64| {
            let mut m = ComplexMoments::default();
            for _ in 0..len {
                m.push(rng.random::<f64>(), 0.0);
            }
            m
        };
        let a = run_batches(25_001, 7, f);
        let b = run_batches(25_001, 7, f);
        assert_eq!(a.count, 25_001);
        assert_eq!(a, b);
        let (mean, _, se, _) = a.summary();
        assert!((mean - 0.5).abs() < 4.0 * se);
    }
}
