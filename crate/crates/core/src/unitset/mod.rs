//! The set `Lambda` of torus points where `|psi| = 1`.
//!
//! Every candidate lives on the quarter-phase grid `Lambda_0` (coordinates in
//! `{0, pi/2, pi, -pi/2}`). A grid point is stored as two bit planes over the
//! flat pair index: `digit = low + 2 * high`, with digit `k` meaning `k * pi/2`
//! (so digit 3 is `-pi/2`). The planes are exactly the unique split into a
//! `{0, pi}` part (`high`) and a `{0, pi/2}` part (`low`).
//!
//! Because every coordinate is a multiple of `pi/2`, `lambda . Z(y)` is an
//! exact multiple of `pi/2`, and its class mod 4 is
//! `popcount(low) + 2 popcount(high) + 2 popcount(low & neg(y))`, where
//! `neg(y)` marks the coordinates with `y_i y_j = -1`. Membership and the value
//! of `psi` on the grid are therefore decided in exact integer arithmetic.

mod graph;
mod region;

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::Serialize;

pub use graph::{compose_triangles, even_graphs, triangle_decompose, PairGraph, MAX_GRAPH_N};
pub use region::{locate, residual_region_decomposition, PieceKind, RegionDecomposition, RegionPiece};

use crate::error::{Error, Result};
use crate::lattice::{canonical_sign_vectors, pair_count, pair_flat, Parameters, TorusPoint};

/// Largest `n` for which quarter-phase points fit the bit-plane encoding.
pub const MAX_LAMBDA_N: usize = 8;

/// Largest `n` for which the full `4^d` grid is scanned.
pub const MAX_SCAN_N: usize = 5;

/// Largest `n` for which `Lambda` is walked point by point.
pub const MAX_WALK_N: usize = 6;

/// Largest `|Lambda|` returned as a materialized, sorted vector.
pub const MAX_COLLECT: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParityClass {
    InLambda1,
    InLambda2Even,
    InLambda2Odd,
    Composite,
}

impl ParityClass {
    pub fn tag(&self) -> &'static str {
        match self {
            ParityClass::InLambda1 => "IN_LAMBDA1",
            ParityClass::InLambda2Even => "IN_LAMBDA2_EVEN",
            ParityClass::InLambda2Odd => "IN_LAMBDA2_ODD",
            ParityClass::Composite => "COMPOSITE",
        }
    }
}

/// A fourth root of unity `i^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum UnitRoot {
    One,
    I,
    MinusOne,
    MinusI,
}

impl UnitRoot {
    pub fn from_quarter(k: u32) -> Self {
        match k % 4 {
            0 => UnitRoot::One,
            1 => UnitRoot::I,
            2 => UnitRoot::MinusOne,
            _ => UnitRoot::MinusI,
        }
    }

    pub fn quarter(&self) -> u32 {
        match self {
            UnitRoot::One => 0,
            UnitRoot::I => 1,
            UnitRoot::MinusOne => 2,
            UnitRoot::MinusI => 3,
        }
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let (re, im) = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][self.quarter() as usize];
        num_complex::Complex64::new(re, im)
    }
}

impl fmt::Display for UnitRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+1", "+i", "-1", "-i"][self.quarter() as usize])
    }
}

/// A point of `Lambda_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuarterPhasePoint {
    n: u8,
    low: u64,
    high: u64,
}

fn check_lambda_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("n = {n} must be at least 2")));
    }
    if n > MAX_LAMBDA_N {
        return Err(Error::CapExceeded {
            what: "n",
            limit: MAX_LAMBDA_N as u64,
            got: n as u64,
        });
    }
    Ok(())
}

impl QuarterPhasePoint {
    pub fn from_planes(n: usize, low: u64, high: u64) -> Result<Self> {
        check_lambda_n(n)?;
        let d = pair_count(n);
        if (low | high) >> d != 0 {
            return Err(Error::BadInput(format!("plane bits beyond {d} coordinates")));
        }
        Ok(Self { n: n as u8, low, high })
    }

    pub fn from_digits(n: usize, digits: &[u8]) -> Result<Self> {
        check_lambda_n(n)?;
        if digits.len() != pair_count(n) {
            return Err(Error::DimensionMismatch {
                expected: pair_count(n),
                got: digits.len(),
            });
        }
        let (mut low, mut high) = (0u64, 0u64);
        for (c, &g) in digits.iter().enumerate() {
            if g > 3 {
                return Err(Error::BadInput(format!("digit {g} is not in 0..4")));
            }
            low |= u64::from(g & 1) << c;
            high |= u64::from(g >> 1) << c;
        }
        Ok(Self { n: n as u8, low, high })
    }

    /// The point `lambda^{a,b,c}`: `pi/2` on the three edges of the triangle.
    pub fn triangle(n: usize, a: usize, b: usize, c: usize) -> Result<Self> {
        let g = PairGraph::triangle(n, a, b, c)?;
        Self::from_planes(n, g.mask(), 0)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn d(&self) -> usize {
        pair_count(self.n())
    }

    #[inline]
    pub fn low(&self) -> u64 {
        self.low
    }

    #[inline]
    pub fn high(&self) -> u64 {
        self.high
    }

    #[inline]
    pub fn digit(&self, c: usize) -> u8 {
        ((self.low >> c & 1) + 2 * (self.high >> c & 1)) as u8
    }

    pub fn digits(&self) -> Vec<u8> {
        (0..self.d()).map(|c| self.digit(c)).collect()
    }

    pub fn digit_string(&self) -> String {
        (0..self.d()).map(|c| char::from(b'0' + self.digit(c))).collect()
    }

    /// Digits read as a base-4 number, most significant first; orders points
    /// lexicographically by digit string.
    pub fn sort_key(&self) -> u64 {
        (0..self.d()).fold(0u64, |k, c| k * 4 + u64::from(self.digit(c)))
    }

    /// Coordinate values in `[-pi, pi]`.
    pub fn to_torus(&self) -> TorusPoint {
        TorusPoint::wrapped(
            (0..self.d())
                .map(|c| match self.digit(c) {
                    3 => -FRAC_PI_2,
                    g => f64::from(g) * FRAC_PI_2,
                })
                .collect(),
        )
    }

    /// `{0, pi}` component.
    pub fn lambda1_part(&self) -> Self {
        Self { low: 0, ..*self }
    }

    /// `{0, pi/2}` component.
    pub fn lambda2_part(&self) -> Self {
        Self { high: 0, ..*self }
    }

    /// Graph of the `{0, pi/2}` component.
    pub fn graph(&self) -> PairGraph {
        PairGraph::from_mask(self.n(), self.low).expect("n within graph cap")
    }

    /// Coordinatewise sum modulo `2 pi`.
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let carry = self.low & other.low;
        Self {
            n: self.n,
            low: self.low ^ other.low,
            high: self.high ^ other.high ^ carry,
        }
    }

    pub fn classify(&self) -> ParityClass {
        if self.low == 0 {
            ParityClass::InLambda1
        } else if self.high == 0 {
            if self.graph().is_even_degree() {
                ParityClass::InLambda2Even
            } else {
                ParityClass::InLambda2Odd
            }
        } else {
            ParityClass::Composite
        }
    }

    /// Membership in `Lambda_1 + Lambda_2^even`.
    pub fn in_constructed_lambda(&self) -> bool {
        self.graph().is_even_degree()
    }
}

pub fn classify(point: &QuarterPhasePoint) -> ParityClass {
    point.classify()
}

/// Masks of the coordinates where `Z(y) = -1`, one per canonical `y`.
pub fn negative_masks(n: usize) -> Vec<u64> {
    canonical_sign_vectors(n)
        .map(|y| {
            let mut mask = 0u64;
            for i in 1..n {
                for j in i + 1..=n {
                    if y.get(i) != y.get(j) {
                        mask |= 1 << pair_flat(n, i, j);
                    }
                }
            }
            mask
        })
        .collect()
}

/// Exact evaluation of `psi` on `Lambda_0`: how many increments put
/// `lambda . m` in each class `k * pi/2 (mod 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuarterEval {
    pub counts: [u64; 4],
}

impl QuarterEval {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `Some(i^k)` when every increment lands in the same class, i.e. `|psi| = 1`.
    pub fn unit_root(&self) -> Option<UnitRoot> {
        let total = self.total();
        self.counts
            .iter()
            .position(|&c| c == total)
            .map(|k| UnitRoot::from_quarter(k as u32))
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let t = self.total() as f64;
        num_complex::Complex64::new(
            (self.counts[0] as f64 - self.counts[2] as f64) / t,
            (self.counts[1] as f64 - self.counts[3] as f64) / t,
        )
    }
}

/// Exact evaluator for quarter-phase points of a fixed `n`.
#[derive(Debug, Clone)]
pub struct QuarterPsi {
    n: usize,
    neg: Vec<u64>,
}

impl QuarterPsi {
    pub fn new(n: usize) -> Result<Self> {
        check_lambda_n(n)?;
        Ok(Self {
            n,
            neg: negative_masks(n),
        })
    }

    #[inline]
    fn base(low: u64, high: u64) -> u32 {
        low.count_ones() + 2 * high.count_ones()
    }

    pub fn eval(&self, p: &QuarterPhasePoint) -> QuarterEval {
        debug_assert_eq!(p.n(), self.n);
        let base = Self::base(p.low, p.high);
        let mut counts = [0u64; 4];
        for &m in &self.neg {
            counts[((base + 2 * (p.low & m).count_ones()) % 4) as usize] += 1;
        }
        QuarterEval { counts }
    }

    /// `|psi| == 1` at any point whose `{0, pi/2}` plane is `low`; the
    /// `{0, pi}` plane only shifts every phase by the same amount.
    pub fn is_unit(&self, low: u64) -> bool {
        let first = (low & self.neg[0]).count_ones() & 1;
        self.neg[1..]
            .iter()
            .all(|&m| (low & m).count_ones() & 1 == first)
    }
}

/// `|Lambda| = 2^{2d - n + 1}`.
pub fn lambda_cardinality(n: usize) -> u64 {
    let d = pair_count(n);
    1u64 << (2 * d + 1 - n)
}

/// Lazily walks `Lambda_1 + Lambda_2^even`.
pub fn lambda_iter(params: &Parameters) -> Result<impl Iterator<Item = QuarterPhasePoint>> {
    let n = params.n;
    check_lambda_n(n)?;
    let d = pair_count(n);
    let evens: Vec<u64> = even_graphs(n)?.collect();
    Ok((0u64..(1u64 << d)).flat_map(move |high| {
        let evens = evens.clone();
        evens.into_iter().map(move |low| QuarterPhasePoint {
            n: n as u8,
            low,
            high,
        })
    }))
}

/// `Lambda`, built as `Lambda_1 + Lambda_2^even`, sorted by digit string.
pub fn enumerate_lambda(params: &Parameters) -> Result<Vec<QuarterPhasePoint>> {
    check_lambda_n(params.n)?;
    let size = lambda_cardinality(params.n);
    if size > MAX_COLLECT {
        return Err(Error::CapExceeded {
            what: "|Lambda|",
            limit: MAX_COLLECT,
            got: size,
        });
    }
    let mut pts: Vec<QuarterPhasePoint> = lambda_iter(params)?.collect();
    pts.sort_by_key(QuarterPhasePoint::sort_key);
    Ok(pts)
}

/// `Lambda_2^even`, from the degree criterion.
pub fn lambda2_even(params: &Parameters) -> Result<Vec<QuarterPhasePoint>> {
    check_lambda_n(params.n)?;
    let mut pts: Vec<QuarterPhasePoint> = even_graphs(params.n)?
        .map(|low| QuarterPhasePoint {
            n: params.n as u8,
            low,
            high: 0,
        })
        .collect();
    pts.sort_by_key(QuarterPhasePoint::sort_key);
    Ok(pts)
}

/// `Lambda ∩ Lambda_2`, from the exact unit-modulus test over all `2^d` points.
pub fn lambda2_star(params: &Parameters) -> Result<Vec<QuarterPhasePoint>> {
    let n = params.n;
    check_lambda_n(n)?;
    if n > MAX_WALK_N + 1 {
        return Err(Error::CapExceeded {
            what: "n (Lambda_2 scan)",
            limit: (MAX_WALK_N + 1) as u64,
            got: n as u64,
        });
    }
    let q = QuarterPsi::new(n)?;
    let mut pts: Vec<QuarterPhasePoint> = (0u64..(1u64 << pair_count(n)))
        .filter(|&low| q.is_unit(low))
        .map(|low| QuarterPhasePoint {
            n: n as u8,
            low,
            high: 0,
        })
        .collect();
    pts.sort_by_key(QuarterPhasePoint::sort_key);
    Ok(pts)
}

/// Scans every point of `Lambda_0` and keeps those with `|psi| = 1`.
pub fn scan_unit_points(params: &Parameters) -> Result<Vec<QuarterPhasePoint>> {
    let n = params.n;
    check_lambda_n(n)?;
    if n > MAX_SCAN_N {
        return Err(Error::CapExceeded {
            what: "n (Lambda_0 scan)",
            limit: MAX_SCAN_N as u64,
            got: n as u64,
        });
    }
    let d = pair_count(n);
    let q = QuarterPsi::new(n)?;
    let mut pts = Vec::new();
    for low in 0u64..(1u64 << d) {
        if !q.is_unit(low) {
            continue;
        }
        for high in 0u64..(1u64 << d) {
            let p = QuarterPhasePoint {
                n: n as u8,
                low,
                high,
            };
            if q.eval(&p).unit_root().is_some() {
                pts.push(p);
            }
        }
    }
    pts.sort_by_key(QuarterPhasePoint::sort_key);
    Ok(pts)
}

/// Multiplicities of the values of `psi` over `Lambda`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct UnitHistogram {
    pub plus_one: u64,
    pub plus_i: u64,
    pub minus_one: u64,
    pub minus_i: u64,
    /// Points of the constructed set where `|psi| != 1`; zero when the
    /// characterization is right.
    pub not_unit: u64,
}

impl UnitHistogram {
    pub fn total(&self) -> u64 {
        self.plus_one + self.plus_i + self.minus_one + self.minus_i + self.not_unit
    }
}

/// Evaluates `psi` exactly at every point of `Lambda` and tallies the values.
pub fn psi_on_lambda_multiset(params: &Parameters) -> Result<UnitHistogram> {
    let n = params.n;
    check_lambda_n(n)?;
    if n > MAX_WALK_N {
        return Err(Error::CapExceeded {
            what: "n (Lambda walk)",
            limit: MAX_WALK_N as u64,
            got: n as u64,
        });
    }
    let q = QuarterPsi::new(n)?;
    let mut h = UnitHistogram::default();
    for p in lambda_iter(params)? {
        match q.eval(&p).unit_root() {
            Some(UnitRoot::One) => h.plus_one += 1,
            Some(UnitRoot::I) => h.plus_i += 1,
            Some(UnitRoot::MinusOne) => h.minus_one += 1,
            Some(UnitRoot::MinusI) => h.minus_i += 1,
            None => h.not_unit += 1,
        }
    }
    Ok(h)
}

/// One line per point of `Lambda`: digit string, class tag, value of `psi`.
pub fn lambda_dump(params: &Parameters) -> Result<Vec<String>> {
    let q = QuarterPsi::new(params.n)?;
    enumerate_lambda(params)?
        .into_iter()
        .map(|p| {
            let root = q
                .eval(&p)
                .unit_root()
                .ok_or_else(|| Error::BadInput(format!("{} is not unit", p.digit_string())))?;
            Ok(format!("{} {} {}", p.digit_string(), p.classify().tag(), root))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfn::CharFn;
    use crate::lattice::SignVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(n: usize) -> Parameters {
        Parameters::new(n, 0).unwrap()
    }

    #[test]
    fn classify_examples() {
        let zero = QuarterPhasePoint::from_digits(3, &[0, 0, 0]).unwrap();
        assert_eq!(zero.classify(), ParityClass::InLambda1);
        assert!(zero.graph().is_even_degree());
        let tri = QuarterPhasePoint::from_digits(3, &[1, 1, 1]).unwrap();
        assert_eq!(tri.classify(), ParityClass::InLambda2Even);
        let edge = QuarterPhasePoint::from_digits(3, &[1, 0, 0]).unwrap();
        assert_eq!(edge.classify(), ParityClass::InLambda2Odd);
        let pi = QuarterPhasePoint::from_digits(3, &[2, 0, 2]).unwrap();
        assert_eq!(pi.classify(), ParityClass::InLambda1);
        let mixed = QuarterPhasePoint::from_digits(3, &[3, 0, 0]).unwrap();
        assert_eq!(mixed.classify(), ParityClass::Composite);
    }

    #[test]
    fn digits_split_uniquely_into_planes() {
        for code in 0u32..64 {
            let digits: Vec<u8> = (0..3).map(|c| (code >> (2 * c) & 3) as u8).collect();
            let x = QuarterPhasePoint::from_digits(3, &digits).unwrap();
            let back = x.lambda1_part().add(&x.lambda2_part());
            assert_eq!(back, x);
            assert!(x.lambda1_part().digits().iter().all(|&g| g == 0 || g == 2));
            assert!(x.lambda2_part().digits().iter().all(|&g| g <= 1));
            assert_eq!(x.digits(), digits);
        }
    }

    #[test]
    fn bad_digits_rejected() {
        assert!(QuarterPhasePoint::from_digits(3, &[0, 4, 0]).is_err());
        assert!(QuarterPhasePoint::from_digits(3, &[0, 0]).is_err());
        assert!(QuarterPhasePoint::from_digits(9, &[0; 36]).is_err());
    }

    #[test]
    fn lambda_sizes_small() {
        assert_eq!(enumerate_lambda(&p(3)).unwrap().len(), 16);
        assert_eq!(enumerate_lambda(&p(4)).unwrap().len(), 512);
        assert_eq!(lambda2_even(&p(3)).unwrap().len(), 2);
    }

    #[test]
    fn enumerated_points_are_unit_in_floating_point() {
        for n in 3..=4 {
            let cf = CharFn::new(n).unwrap();
            for pt in enumerate_lambda(&p(n)).unwrap() {
                let v = cf.eval(pt.to_torus().as_slice());
                assert!((v.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_eval_matches_floating_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in 3..=5 {
            let cf = CharFn::new(n).unwrap();
            let q = QuarterPsi::new(n).unwrap();
            let d = pair_count(n);
            for _ in 0..500 {
                let low = rng.random::<u64>() & ((1 << d) - 1);
                let high = rng.random::<u64>() & ((1 << d) - 1);
                let pt = QuarterPhasePoint::from_planes(n, low, high).unwrap();
                let exact = q.eval(&pt).to_complex();
                let float = cf.eval(pt.to_torus().as_slice());
                assert!((exact - float).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn lambda2_star_equals_lambda2_even() {
        for n in 3..=6 {
            assert_eq!(lambda2_star(&p(n)).unwrap(), lambda2_even(&p(n)).unwrap());
        }
    }

    #[test]
    fn histogram_small() {
        let h = psi_on_lambda_multiset(&p(3)).unwrap();
        assert_eq!((h.plus_one, h.plus_i, h.minus_one, h.minus_i, h.not_unit), (4, 4, 4, 4, 0));
        let h = psi_on_lambda_multiset(&p(4)).unwrap();
        assert_eq!((h.plus_one, h.plus_i, h.minus_one, h.minus_i), (128, 128, 128, 128));
        let q = QuarterPsi::new(3).unwrap();
        let zero = QuarterPhasePoint::from_planes(3, 0, 0).unwrap();
        assert_eq!(q.eval(&zero).unit_root(), Some(UnitRoot::One));
    }

    #[test]
    fn triangle_points_give_minus_quarter_turn_for_every_y() {
        for n in 3..=6 {
            let d = pair_count(n);
            for a in 1..=n {
                for b in a + 1..=n {
                    for c in b + 1..=n {
                        let tri = QuarterPhasePoint::triangle(n, a, b, c).unwrap();
                        for bits in 0u32..(1 << n) {
                            let z = crate::lattice::z_map(&SignVector::new(n, bits).unwrap());
                            let quarters: i64 = (0..d)
                                .map(|k| i64::from(tri.digit(k)) * i64::from(z.coords[k]))
                                .sum();
                            assert_eq!(quarters.rem_euclid(4), 3);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lambda_closed_under_addition() {
        let pts = enumerate_lambda(&p(4)).unwrap();
        let set: std::collections::HashSet<_> = pts.iter().copied().collect();
        for a in &pts {
            for b in &pts {
                assert!(set.contains(&a.add(b)));
            }
        }
        let q = QuarterPsi::new(5).unwrap();
        let pts = enumerate_lambda(&p(5)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..100_000 {
            let a = pts[rng.random_range(0..pts.len())];
            let b = pts[rng.random_range(0..pts.len())];
            assert!(q.eval(&a.add(&b)).unit_root().is_some());
        }
    }

    #[test]
    fn psi_is_multiplicative_on_lambda() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for n in 3..=5 {
            let cf = CharFn::new(n).unwrap();
            let pts = enumerate_lambda(&p(n)).unwrap();
            for _ in 0..300 {
                let l = pts[rng.random_range(0..pts.len())].to_torus();
                let g: Vec<f64> = (0..cf.d()).map(|_| rng.random_range(-3.0..3.0)).collect();
                let sum: Vec<f64> = l.as_slice().iter().zip(&g).map(|(a, b)| a + b).collect();
                let lhs = cf.eval(&sum);
                let rhs = cf.eval(l.as_slice()) * cf.eval(&g);
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dump_is_sorted_and_tagged() {
        let lines = lambda_dump(&p(3)).unwrap();
        assert_eq!(lines.len(), 16);
        assert_eq!(lines[0], "000 IN_LAMBDA1 +1");
        assert!(lines.contains(&"111 IN_LAMBDA2_EVEN -i".to_string()));
        let mut sorted = lines.clone();
        sorted.sort();
        assert_eq!(lines, sorted);
    }

    #[test]
    fn caps() {
        assert!(matches!(scan_unit_points(&p(6)), Err(Error::CapExceeded { .. })));
        assert!(matches!(enumerate_lambda(&p(6)), Err(Error::CapExceeded { .. })));
        assert!(matches!(psi_on_lambda_multiset(&p(7)), Err(Error::CapExceeded { .. })));
    }
}
