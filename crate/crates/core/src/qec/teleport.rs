//! Classical decode rule of the teleportation step.

use crate::error::{precondition, Result};

/// Decodes the logical bit from the modulo-`2g` outcome `a`, the doubled
/// total angular momentum `2 j_T` of the tableau and the code shift `s`.
///
/// Returns `(logical_bit, apply_x)`. The bit is 0 iff
/// `σ = (a + j_T - s) mod 2g` lies within `(g-1)/2` of zero (cyclically).
pub fn teleport_decode(a: i64, j_t_doubled: i64, s: i64, g: i64) -> Result<(u8, bool)> {
    if g <= 0 || g % 2 == 0 {
        return Err(precondition(format!("teleportation decode needs odd g, got {g}")));
    }
    let twice = 2 * a + j_t_doubled - 2 * s;
    if twice % 2 != 0 {
        return Err(precondition("a + j_T - s must be an integer"));
    }
    let sigma = (twice / 2).rem_euclid(2 * g);
    let half = (g - 1) / 2;
    let zero = sigma <= half || sigma >= 2 * g - half;
    let bit = u8::from(!zero);
    Ok((bit, bit == 1))
}
