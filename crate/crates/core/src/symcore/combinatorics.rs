//! Exact combinatorics over arbitrary-precision integers, plus the
//! floating-point binomial helpers used by the scalable modules.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

/// Which residue class of the summation index `k` a parity sum keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity class of `k`.
    pub fn of(k: u64) -> Self {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `true` when `k` belongs to this class.
    pub fn contains(self, k: u64) -> bool {
        Parity::of(k) == self
    }

    /// +1 for even, -1 for odd.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// Exact binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` as an `f64`.
///
/// Exact integer arithmetic is used for `n < 64`; above that the value is
/// obtained from log-gamma, which keeps the relative error near 1e-12.
pub fn binom_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n < 64 {
        return binom_u128(n, k) as f64;
    }
    ln_binom(n, k).exp()
}

/// Natural log of `C(n, k)`; `-inf` when `k > n`.
pub fn ln_binom(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if n < 64 {
        return (binom_u128(n, k) as f64).ln();
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

fn binom_u128(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is always an integer at this step.
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Ratio `C(n - t, w - a) / C(n, w)` evaluated as a product of `O(t)` factors,
/// so it stays accurate for large `n` where the binomials themselves overflow.
///
/// Returns zero when the numerator vanishes (`w < a` or `w - a > n - t`).
pub fn binom_ratio(n: u64, t: u64, w: u64, a: u64) -> f64 {
    if t > n || w > n || a > t || w < a || w - a > n - t {
        return 0.0;
    }
    let b = t - a;
    // C(n-t, w-a)/C(n,w) = [w!/(w-a)!] [(n-w)!/(n-w-b)!] / [n!/(n-t)!]
    let mut r = 1.0f64;
    for i in 0..a {
        r *= (w - i) as f64;
    }
    for i in 0..b {
        r *= (n - w - i) as f64;
    }
    for i in 0..t {
        r /= (n - i) as f64;
    }
    r
}

/// Stirling number of the second kind `S(s, j)`.
pub fn stirling2(s: u64, j: u64) -> BigUint {
    if j > s {
        return BigUint::zero();
    }
    // row[k] holds S(m, k) while m climbs to s.
    let mut row = vec![BigUint::zero(); (j + 1) as usize];
    row[0] = BigUint::one();
    for m in 1..=s {
        let upper = m.min(j) as usize;
        for k in (1..=upper).rev() {
            let prev = std::mem::take(&mut row[k]);
            row[k] = prev * BigUint::from(k as u64) + &row[k - 1];
        }
        row[0] = BigUint::zero();
    }
    row[j as usize].clone()
}

/// Falling factorial `k (k-1) ... (k-j+1)`; equals 1 for `j = 0`.
pub fn falling_factorial(k: u64, j: u64) -> BigUint {
    if j > k {
        return BigUint::zero();
    }
    (0..j).fold(BigUint::one(), |acc, i| acc * (k - i))
}

/// Exact `Σ_{k ≡ parity} C(n, k) k^s`.
pub fn binom_parity_sum(n: u64, s: u32, parity: Parity) -> BigRational {
    let mut acc = BigInt::zero();
    for k in (0..=n).filter(|&k| parity.contains(k)) {
        acc += BigInt::from(binom(n, k)) * BigInt::from(k).pow(s);
    }
    BigRational::from_integer(acc)
}

/// Closed form of `2^{-n+1} Σ_{k ≡ parity} C(n, k) k^s e^{iky}`.
///
/// Expanding `k^s` in falling factorials reduces each term to a derivative of
/// `(1 ± e^{iy})^n`, giving a Stirling-weighted sum of `cos/sin` powers of `y/2`.
pub fn binom_exp_sum(n: u64, s: u64, y: f64, parity: Parity) -> Complex64 {
    let (sn, cs) = (y / 2.0).sin_cos();
    let minus_i = Complex64::new(0.0, -1.0);
    let mut acc = Complex64::zero();
    for j in 0..=s.min(n) {
        let weight = stirling2(s, j).to_f64().unwrap_or(f64::INFINITY)
            * falling_factorial(n, j).to_f64().unwrap_or(f64::INFINITY)
            * 0.5f64.powi(j as i32);
        if weight == 0.0 {
            continue;
        }
        let m = (n - j) as i32;
        let alt = if j % 2 == 0 { 1.0 } else { -1.0 } * parity.sign();
        let bracket = Complex64::from(cs.powi(m)) + minus_i.powi(m) * (alt * sn.powi(m));
        acc += Complex64::from_polar(weight, (n + j) as f64 * y / 2.0) * bracket;
    }
    acc
}

/// Direct evaluation of the same sum, used as the oracle for [`binom_exp_sum`].
pub fn binom_exp_sum_direct(n: u64, s: u64, y: f64, parity: Parity) -> Complex64 {
    let scale = 0.5f64.powi(n as i32 - 1);
    (0..=n)
        .filter(|&k| parity.contains(k))
        .map(|k| {
            let mag = binom_f64(n, k) * (k as f64).powi(s as i32) * scale;
            Complex64::from_polar(mag, k as f64 * y)
        })
        .sum()
}
