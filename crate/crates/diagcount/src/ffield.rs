//! Arithmetic in the finite field `F_q`, `q = p^r` with `p` an odd prime.
//!
//! A [`FieldSpec`] fixes a concrete model of `F_q`: the lexicographically
//! least monic irreducible modulus over `F_p`, precomputed add/mul tables,
//! a fixed multiplicative generator (the least element of order `q - 1`),
//! and a full discrete-log table. All characters and Teichmuller lifts in
//! the rest of the crate route through this fixed generator, so results
//! are reproducible across runs.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Element of `F_q`, stored as a coefficient vector of length `r` over
/// `F_p`, constant term first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElem {
    coeffs: Vec<u64>,
}

impl FieldElem {
    /// Coefficient vector, constant term first, entries in `[0, p)`.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "y")?,
                1 => write!(f, "{c}y")?,
                _ if c == 1 => write!(f, "y^{i}")?,
                _ => write!(f, "{c}y^{i}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

struct Inner {
    p: u64,
    r: usize,
    q: u64,
    /// Monic modulus, length `r + 1`, constant term first.
    modulus: Vec<u64>,
    generator: FieldElem,
    /// `q * q` multiplication table on element indices.
    mul: Vec<u32>,
    /// `q * q` addition table on element indices.
    add: Vec<u32>,
    /// Index of `g^k` for `k` in `[0, q-1)`.
    gen_pow: Vec<u32>,
    /// dlog by element index; `u32::MAX` marks zero.
    dlog: Vec<u32>,
    /// Trace by element index (value in `[0, p)`).
    trace: Vec<u64>,
}

/// A fully materialized model of `F_q`. Cheap to clone (shared tables);
/// immutable after construction, so safe for concurrent reads.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec(q = {}^{})", self.0.p, self.0.r)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.r == other.0.r
    }
}
impl Eq for FieldSpec {}

impl FieldSpec {
    /// Builds `F_{p^r}`: finds the lexicographically least monic irreducible
    /// modulus (constant term compared first), the least generator in
    /// element-enumeration order, and all lookup tables.
    pub fn new(p: u64, r: u64) -> Result<Self> {
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(Error::NonOddPrime(p));
        }
        if r < 1 {
            return Err(Error::BadDegree(r));
        }
        let r = r as usize;
        let q = p.checked_pow(r as u32).expect("q = p^r overflows u64");

        let modulus = least_irreducible(p, r);
        let mut inner = Inner {
            p,
            r,
            q,
            modulus,
            generator: FieldElem {
                coeffs: vec![0; r],
            },
            mul: Vec::new(),
            add: Vec::new(),
            gen_pow: Vec::new(),
            dlog: Vec::new(),
            trace: Vec::new(),
        };
        inner.build_tables();
        inner.find_generator();
        Ok(FieldSpec(Arc::new(inner)))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn r(&self) -> usize {
        self.0.r
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    /// Monic modulus polynomial, constant term first, length `r + 1`.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// The fixed generator of `F_q^x` (least element of order `q - 1` in
    /// enumeration order).
    pub fn generator(&self) -> &FieldElem {
        &self.0.generator
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            coeffs: vec![0; self.0.r],
        }
    }

    pub fn one(&self) -> FieldElem {
        self.embed(1)
    }

    /// Embeds an integer into the prime subfield (constant coefficient).
    pub fn embed(&self, n: i64) -> FieldElem {
        let p = self.0.p as i64;
        let mut coeffs = vec![0; self.0.r];
        coeffs[0] = n.rem_euclid(p) as u64;
        FieldElem { coeffs }
    }

    /// Builds an element from a coefficient vector (constant term first);
    /// entries are reduced mod p, missing high coefficients default to 0.
    pub fn elem(&self, coeffs: &[u64]) -> FieldElem {
        assert!(coeffs.len() <= self.0.r, "coefficient vector longer than r");
        let mut c = vec![0; self.0.r];
        for (dst, &src) in c.iter_mut().zip(coeffs) {
            *dst = src % self.0.p;
        }
        FieldElem { coeffs: c }
    }

    /// Enumeration index: coefficient vectors ordered lexicographically
    /// with the constant term most significant.
    pub(crate) fn index_of(&self, x: &FieldElem) -> usize {
        let mut idx = 0usize;
        for &c in &x.coeffs {
            idx = idx * self.0.p as usize + c as usize;
        }
        idx
    }

    pub(crate) fn elem_at(&self, mut idx: usize) -> FieldElem {
        let p = self.0.p as usize;
        let mut coeffs = vec![0u64; self.0.r];
        for i in (0..self.0.r).rev() {
            coeffs[i] = (idx % p) as u64;
            idx /= p;
        }
        FieldElem { coeffs }
    }

    /// All `q` elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.0.q as usize).map(move |i| self.elem_at(i))
    }

    /// The `q - 1` units as generator powers `g^0, g^1, ..., g^{q-2}`;
    /// the fixed order used by lambda sweeps.
    pub fn units(&self) -> impl Iterator<Item = FieldElem> + '_ {
        self.0.gen_pow.iter().map(move |&i| self.elem_at(i as usize))
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.elem_at(self.add_idx(self.index_of(a), self.index_of(b)))
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        let p = self.0.p;
        FieldElem {
            coeffs: a.coeffs.iter().map(|&c| (p - c) % p).collect(),
        }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.elem_at(self.mul_idx(self.index_of(a), self.index_of(b)))
    }

    /// `a^e` with `e >= 0` (0^0 = 1).
    pub fn pow(&self, a: &FieldElem, e: u64) -> FieldElem {
        self.elem_at(self.pow_idx(self.index_of(a), e))
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        let k = self.dlog(a)?;
        let qm1 = self.0.q - 1;
        Ok(self.elem_at(self.0.gen_pow[((qm1 - k) % qm1) as usize] as usize))
    }

    pub(crate) fn add_idx(&self, a: usize, b: usize) -> usize {
        self.0.add[a * self.0.q as usize + b] as usize
    }

    pub(crate) fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.0.mul[a * self.0.q as usize + b] as usize
    }

    pub(crate) fn pow_idx(&self, a: usize, mut e: u64) -> usize {
        let mut base = a;
        let mut acc = self.index_of(&self.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_idx(acc, base);
            }
            base = self.mul_idx(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn gen_pow_idx(&self, k: u64) -> usize {
        self.0.gen_pow[(k % (self.0.q - 1)) as usize] as usize
    }

    /// `tr(x) = x + x^p + ... + x^{p^{r-1}}`, a value in the prime subfield.
    pub fn trace(&self, x: &FieldElem) -> u64 {
        self.0.trace[self.index_of(x)]
    }

    pub(crate) fn trace_idx(&self, idx: usize) -> u64 {
        self.0.trace[idx]
    }

    /// Discrete log with respect to the fixed generator, in `[0, q-2]`.
    /// Errors on zero, matching the convention that characters vanish at 0.
    pub fn dlog(&self, x: &FieldElem) -> Result<u64> {
        let d = self.0.dlog[self.index_of(x)];
        if d == u32::MAX {
            Err(Error::ZeroArgument("dlog(0)"))
        } else {
            Ok(d as u64)
        }
    }

    pub(crate) fn dlog_idx(&self, idx: usize) -> Option<u64> {
        match self.0.dlog[idx] {
            u32::MAX => None,
            d => Some(d as u64),
        }
    }
}

impl Inner {
    fn build_tables(&mut self) {
        let q = self.q as usize;
        let p = self.p;
        let r = self.r;

        // raw polynomial arithmetic on index-decoded vectors
        let decode = |mut idx: usize| {
            let mut c = vec![0u64; r];
            for i in (0..r).rev() {
                c[i] = (idx as u64) % p;
                idx /= p as usize;
            }
            c
        };
        let encode = |c: &[u64]| {
            let mut idx = 0usize;
            for &v in c {
                idx = idx * p as usize + v as usize;
            }
            idx as u32
        };

        self.add = vec![0; q * q];
        self.mul = vec![0; q * q];
        for a in 0..q {
            let ca = decode(a);
            for b in 0..q {
                let cb = decode(b);
                let sum: Vec<u64> = ca.iter().zip(&cb).map(|(&x, &y)| (x + y) % p).collect();
                self.add[a * q + b] = encode(&sum);
                let prod = polymul_mod(&ca, &cb, &self.modulus, p);
                self.mul[a * q + b] = encode(&prod);
            }
        }

        // trace via Frobenius powers
        let one_idx = {
            let mut one = vec![0u64; r];
            one[0] = 1;
            encode(&one) as usize
        };
        let pow = |base: usize, mut e: u64, mul: &[u32]| {
            let mut b = base;
            let mut res = one_idx;
            while e > 0 {
                if e & 1 == 1 {
                    res = mul[res * q + b] as usize;
                }
                b = mul[b * q + b] as usize;
                e >>= 1;
            }
            res
        };
        self.trace = vec![0; q];
        for a in 0..q {
            let mut acc = 0usize; // index of the additive accumulator
            let mut frob = a;
            for _ in 0..r {
                acc = self.add[acc * q + frob] as usize;
                frob = pow(frob, p, &self.mul);
            }
            let c = decode(acc);
            debug_assert!(c[1..].iter().all(|&v| v == 0), "trace left the prime field");
            self.trace[a] = c[0];
        }
    }

    fn find_generator(&mut self) {
        let q = self.q as usize;
        let qm1 = self.q - 1;
        let prime_factors = factorize(qm1);
        let one_idx = {
            let mut one = vec![0u64; self.r];
            one[0] = 1;
            let mut idx = 0usize;
            for &v in &one {
                idx = idx * self.p as usize + v as usize;
            }
            idx
        };
        let pow = |base: usize, mut e: u64, mul: &[u32]| {
            let mut b = base;
            let mut res = one_idx;
            while e > 0 {
                if e & 1 == 1 {
                    res = mul[res * q + b] as usize;
                }
                b = mul[b * q + b] as usize;
                e >>= 1;
            }
            res
        };
        let gen_idx = (1..q)
            .find(|&cand| {
                prime_factors
                    .iter()
                    .all(|&(l, _)| pow(cand, qm1 / l, &self.mul) != one_idx)
                    && pow(cand, qm1, &self.mul) == one_idx
            })
            .expect("F_q^x is cyclic, a generator exists");

        self.gen_pow = Vec::with_capacity(qm1 as usize);
        self.dlog = vec![u32::MAX; q];
        let mut cur = one_idx;
        for k in 0..qm1 {
            self.gen_pow.push(cur as u32);
            debug_assert_eq!(self.dlog[cur], u32::MAX, "generator order < q-1");
            self.dlog[cur] = k as u32;
            cur = self.mul[cur * q + gen_idx] as usize;
        }
        debug_assert_eq!(cur, one_idx);

        let mut coeffs = vec![0u64; self.r];
        let mut idx = gen_idx;
        for i in (0..self.r).rev() {
            coeffs[i] = (idx as u64) % self.p;
            idx /= self.p as usize;
        }
        self.generator = FieldElem { coeffs };
    }
}

/// Schoolbook polynomial multiplication followed by reduction by the monic
/// modulus (constant term first).
fn polymul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let r = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // reduce: y^r = -(m_0 + m_1 y + ... + m_{r-1} y^{r-1})
    for k in (r..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (j, &mj) in modulus.iter().take(r).enumerate() {
            let sub = (c * mj) % p;
            prod[k - r + j] = (prod[k - r + j] + p * p - sub) % p;
        }
    }
    prod.truncate(r.max(1));
    prod
}

/// Lexicographically least monic irreducible polynomial of degree `r`
/// over `F_p`, comparing the constant term first. Degree 1 returns `y`.
fn least_irreducible(p: u64, r: usize) -> Vec<u64> {
    if r == 1 {
        return vec![0, 1];
    }
    let total = p.pow(r as u32);
    for idx in 0..total {
        let mut c = vec![0u64; r + 1];
        c[r] = 1;
        let mut k = idx;
        for i in (0..r).rev() {
            c[i] = k % p;
            k /= p;
        }
        if is_irreducible(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

/// Rabin irreducibility test for a monic polynomial of degree `r >= 2`:
/// `y^{p^r} = y (mod m)` and `gcd(y^{p^{r/l}} - y, m) = 1` for every prime
/// `l | r`.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let r = m.len() - 1;
    if m[0] == 0 {
        return false; // divisible by y
    }
    let x = vec![0u64, 1];
    let frob_power = |k: u32| -> Vec<u64> {
        // y^(p^k) mod m by k successive p-th powers
        let mut cur = x.clone();
        for _ in 0..k {
            cur = polypow_mod(&cur, p, m, p);
        }
        cur
    };
    for (l, _) in factorize(r as u64) {
        let d = frob_power((r as u64 / l) as u32);
        let diff = polysub(&d, &x, p);
        match poly_gcd_is_one(&diff, m, p) {
            // diff = 0 mod m: every root already lies in the subfield
            None | Some(false) => return false,
            Some(true) => {}
        }
    }
    let top = frob_power(r as u32);
    polysub(&top, &x, p).iter().all(|&c| c == 0)
}

fn polysub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect()
}

fn polypow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut b = base.to_vec();
    let mut res = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            res = polymul_mod(&res, &b, m, p);
        }
        b = polymul_mod(&b, &b, m, p);
        e >>= 1;
    }
    res
}

/// Returns Some(true) when gcd(a, m) is constant, Some(false) otherwise;
/// None when a vanishes mod m (gcd = m itself).
fn poly_gcd_is_one(a: &[u64], m: &[u64], p: u64) -> Option<bool> {
    fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
        v
    }
    fn is_zero(v: &[u64]) -> bool {
        v.iter().all(|&c| c == 0)
    }
    fn rem(mut num: Vec<u64>, den: &[u64], p: u64) -> Vec<u64> {
        let inv_lead = mod_inverse(*den.last().unwrap(), p);
        while num.len() >= den.len() && !is_zero(&num) {
            let shift = num.len() - den.len();
            let factor = (*num.last().unwrap() * inv_lead) % p;
            for (i, &di) in den.iter().enumerate() {
                num[shift + i] = (num[shift + i] + p * p - (factor * di) % p) % p;
            }
            num = trim(num);
        }
        num
    }
    let mut a = trim(a.to_vec());
    let mut b = trim(m.to_vec());
    if is_zero(&a) {
        return None;
    }
    while !is_zero(&b) {
        let r = rem(a, &b, p);
        a = b;
        b = trim(r);
    }
    Some(a.len() == 1)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime and a != 0 mod p
    let mut res = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            res = res * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    res
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Trial-division factorization, `n >= 1`.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
