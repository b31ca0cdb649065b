use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::One;

use super::{CountMethod, CountResult};
use crate::error::{Error, Result};
use crate::lattice::Parameters;

/// Which `n = 2` return formula to use.
///
/// Two rows make a one-dimensional simple walk, which returns to `0` after
/// `4s` steps with probability `2^{-4s} C(4s, 2s)`. The alternative
/// `2^{-4s} C(4s, 2)` agrees with it only at `4s = 4` and is kept for
/// comparison.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum N2Reading {
    #[default]
    CentralBinomial,
    PairBinomial,
}

fn factorial(k: usize) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Number of canonical-increment paths of length `t = 4s` returning to the origin.
fn origin_paths(n: usize, t: usize, reading: N2Reading) -> BigUint {
    let s = t / 4;
    match (n, reading) {
        (2, N2Reading::CentralBinomial) => binomial(BigUint::from(t), BigUint::from(2 * s)),
        (2, N2Reading::PairBinomial) => binomial(BigUint::from(t), BigUint::from(2u32)),
        _ => factorial(t) / factorial(s).pow(4),
    }
}

/// Closed-form count for `n = 2` or `n = 3` at `t` divisible by 4.
pub fn count_closed_form(params: &Parameters) -> Result<CountResult> {
    count_closed_form_with(params, N2Reading::default())
}

pub fn count_closed_form_with(params: &Parameters, reading: N2Reading) -> Result<CountResult> {
    let (n, t) = (params.n, params.t);
    if n != 2 && n != 3 {
        return Err(Error::UnsupportedN(n));
    }
    if t % 4 != 0 {
        return Err(Error::UnsupportedT(t));
    }
    let paths = origin_paths(n, t, reading);
    let method = if n == 2 {
        CountMethod::ClosedFormN2
    } else {
        CountMethod::ClosedFormN3
    };
    Ok(CountResult::from_origin_paths(*params, paths, method))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(n: usize, t: usize, r: N2Reading) -> CountResult {
        count_closed_form_with(&Parameters::new(n, t).unwrap(), r).unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(count(2, 4, N2Reading::CentralBinomial).matrix_count, BigUint::from(96u32));
        assert_eq!(count(3, 4, N2Reading::CentralBinomial).matrix_count, BigUint::from(384u32));
        let p = count(3, 8, N2Reading::CentralBinomial).return_prob;
        assert_eq!(p, num_rational::BigRational::new(2520.into(), 65536.into()));
    }

    #[test]
    fn readings_agree_only_at_four() {
        let a = count(2, 4, N2Reading::CentralBinomial);
        let b = count(2, 4, N2Reading::PairBinomial);
        assert_eq!(a.matrix_count, b.matrix_count);
        for t in [8, 12, 16] {
            let a = count(2, t, N2Reading::CentralBinomial);
            let b = count(2, t, N2Reading::PairBinomial);
            assert_ne!(a.matrix_count, b.matrix_count);
        }
        let p = count(2, 8, N2Reading::PairBinomial).return_prob;
        assert_eq!(p, num_rational::BigRational::new(28.into(), 256.into()));
    }

    #[test]
    fn unsupported_inputs() {
        let p = Parameters::new(4, 8).unwrap();
        assert_eq!(count_closed_form(&p).unwrap_err(), Error::UnsupportedN(4));
        let p = Parameters::new(3, 6).unwrap();
        assert_eq!(count_closed_form(&p).unwrap_err(), Error::UnsupportedT(6));
    }
}
