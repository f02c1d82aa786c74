//! Choice of `(s, t, n)` for the measure-aware cut argument.
//!
//! The two conditions, with `φ(D, s) = s/(4D) − 2`:
//!
//! ```text
//! (φ(D,s) + 1) · (t / (2s + t))^r > 1          (surviving mass beats expansion)
//! (r − 1)(4(r + 1)t + 1) < n − s/2             (pieces are small enough)
//! ```
//!
//! Both are decided in exact rational arithmetic; `D` is converted from its
//! binary floating-point value without rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutParameters {
    pub s: u64,
    pub t: u64,
    pub n: u64,
    pub delta: u64,
    #[serde(rename = "D")]
    pub d: f64,
    pub r: u32,
    pub phi: f64,
}

fn exact(d: f64) -> Result<BigRational> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "D must be a positive finite number, got {d}"
        )));
    }
    BigRational::from_float(d)
        .ok_or_else(|| Error::InvalidParameter(format!("cannot represent D = {d}")))
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `(φ(D,s) + 1)(t/(2s+t))^r > 1`, exactly.
pub fn satisfies_mass_condition(d: f64, r: u32, s: u64, t: u64) -> Result<bool> {
    let d = exact(d)?;
    Ok(vv_exact(&d, r, s, t))
}

fn vv_exact(d: &BigRational, r: u32, s: u64, t: u64) -> bool {
    let four = int(4);
    let phi_plus_one = int(s) / (four * d) - BigRational::one();
    if !phi_plus_one.is_positive() {
        return false;
    }
    let ratio = int(t) / int(2 * s + t);
    phi_plus_one * num_traits::pow(ratio, r as usize) > BigRational::one()
}

/// `(r−1)(4(r+1)t+1) < n − s/2`, i.e. `2(r−1)(4(r+1)t+1) < 2n − s`.
pub fn satisfies_size_condition(r: u32, s: u64, t: u64, n: u64) -> bool {
    let lhs = 2 * (r as u128 - 1) * (4 * (r as u128 + 1) * t as u128 + 1);
    (2 * n as u128) > lhs + s as u128
}

/// Smallest admissible parameters in the order `s`, then `t`, then `n`:
/// `s` is the least integer above `8D`, `t` the least satisfying the
/// surviving-mass condition, `n` the least satisfying the size condition and
/// `2n > s`.
pub fn parameter_search(d: f64, r: u32) -> Result<CutParameters> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "minor order r must be >= 2, got {r}"
        )));
    }
    let dq = exact(d)?;
    let eight_d = int(8) * &dq;
    let mut s = eight_d
        .floor()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::InvalidParameter(format!("8D = {} is out of range", 8.0 * d)))?
        + 1;
    // φ(D, s) > 0 whenever s > 8D; the loop is a guard for that boundary.
    while !(int(s) / (int(4) * &dq) - int(2)).is_positive() {
        s += 1;
    }
    debug_assert!(int(s) > eight_d);

    // (t/(2s+t))^r increases with t, so gallop then bisect.
    let mut hi = 1u64;
    while !vv_exact(&dq, r, s, hi) {
        hi = hi.checked_mul(2).ok_or_else(|| {
            Error::InvalidParameter("surviving-mass condition needs t beyond u64".into())
        })?;
    }
    let mut lo = hi / 2; // fails (or is zero)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if vv_exact(&dq, r, s, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t = hi;

    let bound = 2 * (r as u64 - 1) * (4 * (r as u64 + 1) * t + 1) + s;
    let n = bound / 2 + 1;
    debug_assert!(
        satisfies_size_condition(r, s, t, n) && !satisfies_size_condition(r, s, t, n - 1)
    );
    debug_assert!(2 * n > s);

    let phi = s as f64 / (4.0 * d) - 2.0;
    let out = CutParameters {
        s,
        t,
        n,
        delta: t + 2 * s,
        d,
        r,
        phi,
    };
    if !(vv_exact(&dq, r, s, t) && satisfies_size_condition(r, s, t, n) && 2 * n > s) {
        return Err(Error::Precondition(
            "parameter search produced an inadmissible triple".into(),
        ));
    }
    Ok(out)
}
