//! Fixed-precision arithmetic in `Z_p` and in the unramified extension
//! `Z_q` mod `p^M`, exact rational floor/fractional helpers, and the
//! Teichmuller character.
//!
//! Residues are arbitrary-precision integers; nothing here assumes the
//! modulus fits a machine word, although at desk scale it always does.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec};

/// Exact rational scalar; parameters `a_k`, `b_k`, `a/(q-1)` and friends.
pub type Rational = num_rational::BigRational;

pub(crate) fn pm(p: u64, precision: u32) -> BigUint {
    BigUint::from(p).pow(precision)
}

/// Splits `x` into `(fractional part, floor)` with `x = floor + frac` and
/// `0 <= frac < 1`.
pub fn frac_floor(x: &Rational) -> (Rational, BigInt) {
    let floor = x.floor().to_integer();
    let frac = x - Rational::from_integer(floor.clone());
    (frac, floor)
}

/// A residue mod `p^M` representing an element of `Z_p` to precision `M`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PadicNum {
    p: u64,
    precision: u32,
    residue: BigUint,
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.residue, self.p, self.precision)
    }
}

impl PadicNum {
    pub fn new(residue: BigUint, p: u64, precision: u32) -> Self {
        assert!(precision >= 1, "precision must be >= 1");
        PadicNum {
            p,
            precision,
            residue: residue % pm(p, precision),
        }
    }

    pub fn from_bigint(n: &BigInt, p: u64, precision: u32) -> Self {
        let m = BigInt::from(pm(p, precision));
        let r = n.mod_floor(&m);
        PadicNum::new(r.to_biguint().expect("mod_floor is nonnegative"), p, precision)
    }

    pub fn from_i64(n: i64, p: u64, precision: u32) -> Self {
        Self::from_bigint(&BigInt::from(n), p, precision)
    }

    pub fn zero(p: u64, precision: u32) -> Self {
        PadicNum::new(BigUint::zero(), p, precision)
    }

    pub fn one(p: u64, precision: u32) -> Self {
        PadicNum::new(BigUint::one(), p, precision)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// True when the residue is prime to p.
    pub fn is_unit(&self) -> bool {
        !(&self.residue % self.p).is_zero()
    }

    fn check_compat(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mismatched primes");
        assert_eq!(self.precision, other.precision, "mismatched precisions");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compat(other);
        PadicNum::new(&self.residue + &other.residue, self.p, self.precision)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compat(other);
        let m = pm(self.p, self.precision);
        PadicNum::new(&m + &self.residue - &other.residue, self.p, self.precision)
    }

    pub fn neg(&self) -> Self {
        let m = pm(self.p, self.precision);
        PadicNum::new(&m - &self.residue, self.p, self.precision)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compat(other);
        PadicNum::new(&self.residue * &other.residue, self.p, self.precision)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = PadicNum::one(self.p, self.precision);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse mod `p^M`; errors when `p` divides the residue.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let m = BigInt::from(pm(self.p, self.precision));
        let a = BigInt::from(self.residue.clone());
        let eg = a.extended_gcd(&m);
        debug_assert!(eg.gcd.is_one());
        let inv = eg.x.mod_floor(&m);
        Ok(PadicNum::new(
            inv.to_biguint().expect("mod_floor is nonnegative"),
            self.p,
            self.precision,
        ))
    }

    /// Drops precision to `precision <= M`.
    pub fn reduce_to(&self, precision: u32) -> Self {
        assert!(precision <= self.precision);
        PadicNum::new(self.residue.clone(), self.p, precision)
    }

    /// The unique representative in `(-p^M/2, p^M/2)`.
    pub fn symmetric_lift(&self) -> BigInt {
        let m = BigInt::from(pm(self.p, self.precision));
        let r = BigInt::from(self.residue.clone());
        if &r * 2 < m {
            r
        } else {
            r - m
        }
    }

    /// Exact division by `p^k`; `None` when `p^k` does not divide the
    /// residue. The result has `k` fewer digits of precision.
    pub fn div_exact_pk(&self, k: u32) -> Option<Self> {
        if k == 0 {
            return Some(self.clone());
        }
        assert!(k < self.precision, "cannot shed all precision");
        let pk = pm(self.p, k);
        let (q, rem) = self.residue.div_rem(&pk);
        if rem.is_zero() {
            Some(PadicNum::new(q, self.p, self.precision - k))
        } else {
            None
        }
    }
}

/// Maps a rational with denominator prime to p to its residue mod `p^M`.
pub fn rational_to_padic(x: &Rational, p: u64, precision: u32) -> Result<PadicNum> {
    let den = x.denom();
    if (den % BigInt::from(p)).is_zero() {
        return Err(Error::NotPAdicInteger(x.to_string(), p));
    }
    let den_inv = PadicNum::from_bigint(den, p, precision)
        .inverse()
        .expect("denominator prime to p is a unit");
    Ok(PadicNum::from_bigint(x.numer(), p, precision).mul(&den_inv))
}

/// Multiplicative inverse mod `p^M` (module-level alias of
/// [`PadicNum::inverse`]).
pub fn padic_inverse(x: &PadicNum) -> Result<PadicNum> {
    x.inverse()
}

/// An element of `Z_q` mod `p^M`: coefficients over the verbatim lift of the
/// field modulus, constant term first.
#[derive(Clone, Debug)]
pub struct UnramNum {
    field: FieldSpec,
    precision: u32,
    coeffs: Vec<BigUint>,
}

impl PartialEq for UnramNum {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.precision == other.precision
            && self.coeffs == other.coeffs
    }
}
impl Eq for UnramNum {}

impl fmt::Display for UnramNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(
            f,
            "[{}] (mod {}^{})",
            parts.join(", "),
            self.field.p(),
            self.precision
        )
    }
}

impl UnramNum {
    pub fn zero(field: &FieldSpec, precision: u32) -> Self {
        UnramNum {
            field: field.clone(),
            precision,
            coeffs: vec![BigUint::zero(); field.r()],
        }
    }

    pub fn one(field: &FieldSpec, precision: u32) -> Self {
        let mut z = Self::zero(field, precision);
        z.coeffs[0] = BigUint::one();
        z
    }

    /// Embeds a scalar into the constant coefficient.
    pub fn from_padic(field: &FieldSpec, x: &PadicNum) -> Self {
        assert_eq!(field.p(), x.p());
        let mut z = Self::zero(field, x.precision());
        z.coeffs[0] = x.residue().clone();
        z
    }

    /// The canonical lift of a field element: coefficients copied verbatim.
    pub fn lift(field: &FieldSpec, x: &FieldElem, precision: u32) -> Self {
        UnramNum {
            field: field.clone(),
            precision,
            coeffs: x.coeffs().iter().map(|&c| BigUint::from(c)).collect(),
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Coefficient `i` as a scalar residue.
    pub fn coeff(&self, i: usize) -> PadicNum {
        PadicNum::new(self.coeffs[i].clone(), self.field.p(), self.precision)
    }

    /// Reduction mod p back to the residue field.
    pub fn reduce_mod_p(&self) -> FieldElem {
        let p = BigUint::from(self.field.p());
        let coeffs: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c % &p;
                r.iter_u64_digits().next().unwrap_or(0)
            })
            .collect();
        self.field.elem(&coeffs)
    }

    /// True when all non-constant coefficients vanish, i.e. the value lies
    /// in `Z_p`.
    pub fn is_scalar(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The constant coefficient as a scalar (the value itself when
    /// [`is_scalar`](Self::is_scalar) holds).
    pub fn constant_part(&self) -> PadicNum {
        self.coeff(0)
    }

    fn check_compat(&self, other: &Self) {
        assert!(self.field == other.field, "mismatched fields");
        assert_eq!(self.precision, other.precision, "mismatched precisions");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compat(other);
        let m = pm(self.field.p(), self.precision);
        UnramNum {
            field: self.field.clone(),
            precision: self.precision,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| (a + b) % &m)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compat(other);
        let m = pm(self.field.p(), self.precision);
        UnramNum {
            field: self.field.clone(),
            precision: self.precision,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| (a + &m - b) % &m)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compat(other);
        let m = pm(self.field.p(), self.precision);
        let r = self.field.r();
        let mut prod = vec![BigUint::zero(); 2 * r];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] = (&prod[i + j] + a * b) % &m;
            }
        }
        // y^r = -(m_0 + ... + m_{r-1} y^{r-1}) with the modulus lifted verbatim
        let modulus = self.field.modulus();
        for k in (r..2 * r).rev() {
            if prod[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut prod[k]);
            for (j, &mj) in modulus.iter().take(r).enumerate() {
                if mj == 0 {
                    continue;
                }
                let sub = (&c * mj) % &m;
                prod[k - r + j] = (&prod[k - r + j] + &m - sub) % &m;
            }
        }
        prod.truncate(r);
        UnramNum {
            field: self.field.clone(),
            precision: self.precision,
            coeffs: prod,
        }
    }

    pub fn scalar_mul(&self, s: &PadicNum) -> Self {
        assert_eq!(self.field.p(), s.p());
        assert_eq!(self.precision, s.precision());
        let m = pm(self.field.p(), self.precision);
        UnramNum {
            field: self.field.clone(),
            precision: self.precision,
            coeffs: self.coeffs.iter().map(|c| (c * s.residue()) % &m).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field, self.precision);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn reduce_to(&self, precision: u32) -> Self {
        assert!(precision <= self.precision);
        let m = pm(self.field.p(), precision);
        UnramNum {
            field: self.field.clone(),
            precision,
            coeffs: self.coeffs.iter().map(|c| c % &m).collect(),
        }
    }

    /// Exact coefficientwise division by `p^k`, shedding `k` digits of
    /// precision; `None` unless `p^k` divides every coefficient.
    pub fn div_exact_pk(&self, k: u32) -> Option<Self> {
        if k == 0 {
            return Some(self.clone());
        }
        assert!(k < self.precision, "cannot shed all precision");
        let pk = pm(self.field.p(), k);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, rem) = c.div_rem(&pk);
            if !rem.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(UnramNum {
            field: self.field.clone(),
            precision: self.precision - k,
            coeffs,
        })
    }
}

/// The Teichmuller lift: the unique `(q-1)`-th root of unity in `Z_q`
/// congruent to `x` mod p, computed as the fixed point of `y -> y^q`
/// (each iteration gains at least one digit, so `M` iterations suffice).
pub fn teichmuller(field: &FieldSpec, x: &FieldElem, precision: u32) -> Result<UnramNum> {
    if x.is_zero() {
        return Err(Error::ZeroArgument("teichmuller(0)"));
    }
    let mut y = UnramNum::lift(field, x, precision);
    for _ in 0..precision {
        y = y.pow(field.q());
    }
    Ok(y)
}

/// `omega-bar^a(t)`: the inverse Teichmuller character at `t`, raised to
/// the a-th power; equivalently `teichmuller(t)^(-a mod q-1)`.
pub fn omega_power(field: &FieldSpec, a: i64, t: &FieldElem, precision: u32) -> Result<UnramNum> {
    if t.is_zero() {
        return Err(Error::ZeroArgument("omega_power(_, 0)"));
    }
    let qm1 = (field.q() - 1) as i64;
    let e = (-a).rem_euclid(qm1) as u64;
    Ok(teichmuller(field, t, precision)?.pow(e))
}

/// Converts a possibly negative `BigInt` floor value to i64 (floor values
/// in this crate are tiny).
pub(crate) fn bigint_to_i64(n: &BigInt) -> i64 {
    let (sign, digits) = n.to_u64_digits();
    let mag = digits.first().copied().unwrap_or(0);
    assert!(digits.len() <= 1 && mag <= i64::MAX as u64, "floor out of i64 range");
    match sign {
        Sign::Minus => -(mag as i64),
        _ => mag as i64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn frac_floor_examples() {
        let (f, fl) = frac_floor(&rat(-1, 3));
        assert_eq!((f, fl), (rat(2, 3), BigInt::from(-1)));
        let (f, fl) = frac_floor(&rat(5, 3));
        assert_eq!((f, fl), (rat(2, 3), BigInt::from(1)));
        let (f, fl) = frac_floor(&rat(0, 1));
        assert_eq!((f, fl), (rat(0, 1), BigInt::from(0)));
    }

    #[test]
    fn inverse_examples() {
        // 4 * 94 = 376 = 3*125 + 1
        let x = PadicNum::from_i64(4, 5, 3);
        assert_eq!(x.inverse().unwrap().residue().to_u64().unwrap(), 94);
        let one = PadicNum::one(5, 3);
        assert_eq!(one.inverse().unwrap(), one);
        let five = PadicNum::from_i64(5, 5, 3);
        assert_eq!(five.inverse().unwrap_err(), Error::NotAUnit);
    }

    #[test]
    fn teichmuller_examples() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        let w1 = teichmuller(&f5, &f5.one(), 3).unwrap();
        assert_eq!(w1, UnramNum::one(&f5, 3));
        // omega(2) mod 125 = 57: the fixed point of y -> y^5 starting at 2
        let w2 = teichmuller(&f5, &f5.embed(2), 3).unwrap();
        assert_eq!(w2.coeff(0).residue().to_u64().unwrap(), 57);
        // omega(-1) = -1 for any odd p
        let wm1 = teichmuller(&f5, &f5.embed(-1), 3).unwrap();
        assert_eq!(wm1.coeff(0).residue().to_u64().unwrap(), 124);
    }

    #[test]
    fn teichmuller_zero_rejected() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        assert!(matches!(
            teichmuller(&f5, &f5.zero(), 3),
            Err(Error::ZeroArgument(_))
        ));
    }

    #[test]
    fn omega_power_examples() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        let one = UnramNum::one(&f5, 4);
        assert_eq!(omega_power(&f5, 0, &f5.embed(3), 4).unwrap(), one);
        assert_eq!(omega_power(&f5, 7, &f5.one(), 4).unwrap(), one);
        // a = 2, t = -1: (-1)^2 = 1
        assert_eq!(omega_power(&f5, 2, &f5.embed(-1), 4).unwrap(), one);
    }

    #[test]
    fn teichmuller_is_multiplicative_and_injective_mod_p() {
        for (p, r) in [(5u64, 1u64), (7, 1), (3, 2), (5, 2)] {
            let f = FieldSpec::new(p, r).unwrap();
            let m = 4;
            let lifts: Vec<(FieldElem, UnramNum)> = f
                .units()
                .map(|u| {
                    let w = teichmuller(&f, &u, m).unwrap();
                    (u, w)
                })
                .collect();
            for (a, wa) in &lifts {
                // reduces back to its argument
                assert_eq!(&wa.reduce_mod_p(), a);
                // (q-1)-th root of unity
                assert_eq!(wa.pow(f.q() - 1), UnramNum::one(&f, m));
                for (b, wb) in &lifts {
                    let wab = teichmuller(&f, &f.mul(a, b), m).unwrap();
                    assert_eq!(wa.mul(wb), wab, "omega(ab) != omega(a)omega(b)");
                }
            }
            // pairwise distinct mod p
            let mut seen = std::collections::HashSet::new();
            for (_, w) in &lifts {
                assert!(seen.insert(w.reduce_mod_p().coeffs().to_vec()));
            }
        }
    }

    #[test]
    fn teichmuller_precision_monotone() {
        let f = FieldSpec::new(3, 2).unwrap();
        for u in f.units() {
            let hi = teichmuller(&f, &u, 7).unwrap();
            let lo = teichmuller(&f, &u, 4).unwrap();
            assert_eq!(hi.reduce_to(4), lo);
        }
    }

    #[test]
    fn unram_ring_identities() {
        let f = FieldSpec::new(3, 2).unwrap();
        let m = 5;
        let y = UnramNum::lift(&f, &f.elem(&[0, 1]), m);
        // y^2 = -1 under the modulus y^2 + 1
        let y2 = y.mul(&y);
        let minus_one = UnramNum::one(&f, m).scalar_mul(&PadicNum::from_i64(-1, 3, m));
        assert_eq!(y2, minus_one);
    }

    #[test]
    fn rational_to_padic_examples() {
        // 1/2 mod 5^3: 2 * 63 = 126 = 125 + 1
        let x = rational_to_padic(&rat(1, 2), 5, 3).unwrap();
        assert_eq!(x.residue().to_u64().unwrap(), 63);
        assert!(matches!(
            rational_to_padic(&rat(1, 5), 5, 3),
            Err(Error::NotPAdicInteger(..))
        ));
    }

    #[test]
    fn symmetric_lift_window() {
        let x = PadicNum::from_i64(-3, 5, 3);
        assert_eq!(x.symmetric_lift(), BigInt::from(-3));
        let y = PadicNum::from_i64(17, 5, 3);
        assert_eq!(y.symmetric_lift(), BigInt::from(17));
    }
}
