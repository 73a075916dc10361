//! The p-adic gamma function `Gamma_p` on nonnegative integers and on
//! rationals inside `Z_p`, to precision `p^M`.
//!
//! `Gamma_p(n) = (-1)^n * prod_{0<j<n, p∤j} j` and `Gamma_p(0) = 1`; rational
//! arguments are evaluated at the least positive integer congruent mod `p^M`,
//! which is correct to precision `M` because `Gamma_p` is 1-Lipschitz.
//!
//! Evaluation is by the defining product, which is O(p^M) per distinct
//! argument and is the scaling bottleneck of the crate. A shared
//! prefix-product cache keyed by `(p, M)` makes the total cost of all
//! requests at one precision a single O(p^M) walk: each new argument only
//! extends the product from the nearest cached point below it.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::padic::{frac_floor, rational_to_padic, PadicNum, Rational};

/// Cached prefix products `n -> prod_{0<j<n, p∤j} j mod p^M` (no sign).
static PREFIX_CACHE: OnceLock<Mutex<HashMap<(u64, u32), BTreeMap<u64, u64>>>> = OnceLock::new();

fn prefix_product(n: u64, p: u64, precision: u32) -> u64 {
    let modulus = p
        .checked_pow(precision)
        .filter(|&m| m < (1 << 63))
        .expect("defining-product evaluation needs p^M to fit a machine word");
    let cache = PREFIX_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("gamma cache poisoned");
    let map = guard
        .entry((p, precision))
        .or_insert_with(|| BTreeMap::from([(1u64, 1u64)]));
    let (&start, &acc) = map.range(..=n).next_back().expect("seeded at n = 1");
    if start == n {
        return acc;
    }
    let mut prod = acc as u128;
    let m = modulus as u128;
    for j in start..n {
        if j % p != 0 {
            prod = prod * j as u128 % m;
        }
    }
    let prod = prod as u64;
    map.insert(n, prod);
    prod
}

/// `Gamma_p(n)` for an integer `n >= 0`, exactly mod `p^M`.
pub fn gamma_int(n: u64, p: u64, precision: u32) -> PadicNum {
    if n == 0 {
        return PadicNum::one(p, precision);
    }
    let prod = prefix_product(n, p, precision);
    let signed = if n % 2 == 0 {
        PadicNum::new(prod.into(), p, precision)
    } else {
        PadicNum::new(prod.into(), p, precision).neg()
    };
    debug_assert!(signed.is_unit(), "Gamma_p takes values in Z_p^x");
    signed
}

/// `Gamma_p(x)` for `x` in `Q` with denominator prime to p, exactly mod
/// `p^M`: evaluates `gamma_int` at the least positive integer congruent to
/// `x` mod `p^M`.
pub fn gamma_rational(x: &Rational, p: u64, precision: u32) -> Result<PadicNum> {
    let residue = rational_to_padic(x, p, precision)?;
    let n = residue
        .residue()
        .to_u64()
        .ok_or_else(|| Error::OutOfRange(format!("gamma argument {x} too large")))?;
    let n = if n == 0 {
        p.checked_pow(precision)
            .expect("p^M fits u64 at desk scale")
    } else {
        n
    };
    Ok(gamma_int(n, p, precision))
}

/// `Gamma_p(<x>)` of the fractional part of `x`; the shape every character
/// sum below requests.
pub fn gamma_frac(x: &Rational, p: u64, precision: u32) -> Result<PadicNum> {
    let (frac, _) = frac_floor(x);
    gamma_rational(&frac, p, precision)
}
