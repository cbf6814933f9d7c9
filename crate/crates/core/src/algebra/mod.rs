//! Exact and certified scalars, and sparse graded multivariate series.

pub mod ball;
mod monomial;
mod poly;
mod scalar;
mod series;

pub use ball::{Ball, Dyadic, Mag, SignQuery, DEFAULT_PRECISION, MAX_PRECISION};
pub use monomial::ExponentVec;
pub use poly::HomogPoly;
pub use scalar::{Backend, Scalar};
pub use series::{TruncSeries, Valuation};

pub(crate) use scalar::log2_big;

use crate::error::{Error, Result};

/// Runs `f` at increasing precision, doubling on [`Error::PrecisionExhausted`]
/// until `cap` bits have been tried.
pub fn with_precision_doubling<T>(
    start: u32,
    cap: u32,
    mut f: impl FnMut(u32) -> Result<T>,
) -> Result<T> {
    let mut bits = start.max(2);
    loop {
        match f(bits) {
            Err(Error::PrecisionExhausted { .. }) if bits < cap => {
                bits = (bits * 2).min(cap);
            }
            Err(Error::PrecisionExhausted { .. }) => {
                return Err(Error::PrecisionExhausted { bits });
            }
            other => return other,
        }
    }
}
