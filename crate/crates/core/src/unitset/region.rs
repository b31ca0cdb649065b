//! Partition of the torus into the `4^d` quarter-phase boxes `B_{pi/4}(lambda)`.
//!
//! Boxes are half-open, `[-pi/4, pi/4)` in every coordinate around their
//! center, so each point of `[-pi, pi]^d` lies in exactly one of them. Boxes
//! centered on `Lambda` are split into the primary box `B_delta(lambda)` and
//! the punctured remainder; the rest are kept whole. The punctured and whole
//! boxes together make up the residual region `R_delta`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::Serialize;

use super::{check_lambda_n, lambda_cardinality, QuarterPhasePoint, MAX_SCAN_N};
use crate::error::{Error, Result};
use crate::lattice::{pair_count, wrap_angle, Parameters};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PieceKind {
    /// Inside `B_delta(lambda)` for some `lambda` in `Lambda`.
    Primary,
    /// In `B_{pi/4}(lambda) \ B_delta(lambda)`, `lambda` in `Lambda`.
    Punctured,
    /// In `B_{pi/4}(lambda)`, `lambda` not in `Lambda`.
    Full,
}

impl PieceKind {
    pub fn is_residual(&self) -> bool {
        !matches!(self, PieceKind::Primary)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionPiece {
    pub center: QuarterPhasePoint,
    /// `Punctured` or `Full`.
    pub kind: PieceKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionDecomposition {
    pub n: usize,
    pub delta: f64,
    pub punctured: u64,
    pub full: u64,
}

impl RegionDecomposition {
    pub fn total(&self) -> u64 {
        self.punctured + self.full
    }

    /// Every residual piece, ordered by center digit string.
    pub fn pieces(&self) -> Result<Vec<RegionPiece>> {
        if self.n > MAX_SCAN_N {
            return Err(Error::CapExceeded {
                what: "n (box listing)",
                limit: MAX_SCAN_N as u64,
                got: self.n as u64,
            });
        }
        let d = pair_count(self.n);
        let mut out = Vec::with_capacity(1 << (2 * d));
        for low in 0u64..(1 << d) {
            for high in 0u64..(1 << d) {
                let center = QuarterPhasePoint::from_planes(self.n, low, high)?;
                let kind = if center.in_constructed_lambda() {
                    PieceKind::Punctured
                } else {
                    PieceKind::Full
                };
                out.push(RegionPiece { center, kind });
            }
        }
        out.sort_by_key(|p| p.center.sort_key());
        Ok(out)
    }

    pub fn locate(&self, gamma: &[f64]) -> Result<Located> {
        locate(self.n, self.delta, gamma)
    }
}

/// Box counts of the residual decomposition for `0 < delta < pi/4`.
pub fn residual_region_decomposition(params: &Parameters, delta: f64) -> Result<RegionDecomposition> {
    check_lambda_n(params.n)?;
    if !(delta > 0.0 && delta < FRAC_PI_4) {
        return Err(Error::InvalidDelta(delta));
    }
    let d = pair_count(params.n);
    let punctured = lambda_cardinality(params.n);
    Ok(RegionDecomposition {
        n: params.n,
        delta,
        punctured,
        full: (1u64 << (2 * d)) - punctured,
    })
}

/// Where a torus point falls: its box center, the piece, and the offset
/// `mu = gamma - center` (wrapped).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Located {
    pub center: QuarterPhasePoint,
    pub kind: PieceKind,
    pub offset: Vec<f64>,
}

#[inline]
pub(crate) fn quarter_digit(x: f64) -> u8 {
    ((x + FRAC_PI_4) / FRAC_PI_2).floor().rem_euclid(4.0) as u8
}

/// Finds the box containing `gamma` and classifies the point.
pub fn locate(n: usize, delta: f64, gamma: &[f64]) -> Result<Located> {
    check_lambda_n(n)?;
    let d = pair_count(n);
    if gamma.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: gamma.len(),
        });
    }
    let mut low = 0u64;
    let mut high = 0u64;
    let mut offset = Vec::with_capacity(d);
    let mut max_abs = 0.0f64;
    for (c, &x) in gamma.iter().enumerate() {
        let g = quarter_digit(x);
        low |= u64::from(g & 1) << c;
        high |= u64::from(g >> 1) << c;
        let mu = wrap_angle(x - f64::from(g) * FRAC_PI_2);
        max_abs = max_abs.max(mu.abs());
        offset.push(mu);
    }
    let center = QuarterPhasePoint::from_planes(n, low, high)?;
    let kind = if !center.in_constructed_lambda() {
        PieceKind::Full
    } else if max_abs <= delta {
        PieceKind::Primary
    } else {
        PieceKind::Punctured
    };
    Ok(Located { center, kind, offset })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn in_box(gamma: &[f64], center: &QuarterPhasePoint) -> bool {
        let c = center.to_torus();
        gamma
            .iter()
            .zip(c.as_slice())
            .all(|(&g, &c)| (-FRAC_PI_4..FRAC_PI_4).contains(&wrap_angle(g - c)))
    }

    #[test]
    fn box_counts_n3() {
        let p = Parameters::new(3, 0).unwrap();
        let r = residual_region_decomposition(&p, 0.3).unwrap();
        assert_eq!((r.total(), r.punctured, r.full), (64, 16, 48));
        let pieces = r.pieces().unwrap();
        assert_eq!(pieces.len(), 64);
        assert_eq!(pieces.iter().filter(|p| p.kind == PieceKind::Punctured).count(), 16);
    }

    #[test]
    fn delta_is_validated() {
        let p = Parameters::new(3, 0).unwrap();
        assert!(residual_region_decomposition(&p, 0.0).is_err());
        assert!(residual_region_decomposition(&p, FRAC_PI_4).is_err());
    }

    #[test]
    fn every_point_lies_in_exactly_one_box() {
        let p = Parameters::new(3, 0).unwrap();
        let r = residual_region_decomposition(&p, 0.3).unwrap();
        let pieces = r.pieces().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100_000 {
            let g: Vec<f64> = (0..3).map(|_| rng.random_range(-PI..=PI)).collect();
            let hits: Vec<_> = pieces.iter().filter(|pc| in_box(&g, &pc.center)).collect();
            assert_eq!(hits.len(), 1);
            let loc = r.locate(&g).unwrap();
            assert_eq!(loc.center, hits[0].center);
            match loc.kind {
                PieceKind::Primary => {
                    assert_eq!(hits[0].kind, PieceKind::Punctured);
                    assert!(loc.offset.iter().all(|m| m.abs() <= 0.3));
                }
                k => assert_eq!(k, hits[0].kind),
            }
        }
    }

    #[test]
    fn boundary_points_are_half_open() {
        assert_eq!(quarter_digit(FRAC_PI_4), 1);
        assert_eq!(quarter_digit(-FRAC_PI_4), 0);
        assert_eq!(quarter_digit(PI), 2);
        assert_eq!(quarter_digit(-PI), 2);
        assert_eq!(quarter_digit(-FRAC_PI_2), 3);
    }
}
