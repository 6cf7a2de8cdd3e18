use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, Rational};
use crate::settops::decompose;

/// Distance of `j` from its class limit: `0` for `j ≤ n`, `1/(m+1)` for
/// `j = m·n + k` with `m ≥ 1`. Always `< 1`.
pub fn point_radius(n: u64, j: u64) -> Rational {
    let (m, _) = decompose(n, j);
    if m == 0 {
        Rational::zero()
    } else {
        Rational::new(1.into(), (m + 1).into())
    }
}

/// A metric inducing `𝒯ₙ`: each class is a copy of `{0} ∪ {1/(m+1)}` on the
/// line, and distinct classes sit at distance at least 1 from each other.
pub fn metric_d(n: u64, x: u64, y: u64) -> Result<Rational> {
    if n == 0 || x == 0 || y == 0 {
        return Err(Error::domain("modulus and points must be at least 1"));
    }
    let (rx, ry) = (point_radius(n, x), point_radius(n, y));
    if decompose(n, x).1 == decompose(n, y).1 {
        Ok((rx - ry).abs())
    } else {
        Ok(rx + ry + int(1))
    }
}
