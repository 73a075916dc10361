//! Character sums over `F_q` in two representations: a complex-embedding
//! oracle (the additive character theta, the multiplicative characters
//! `T^m`, Gauss sums, and the deformation sums `A` and `B`), and pi-adic
//! Gauss sums via the Gross-Koblitz formula with integer bookkeeping of the
//! pi-exponent.
//!
//! The complex side uses doubles with explicit tolerances and serves only
//! as a cross-check; the exact path through `Z_p` is authoritative. The
//! two embeddings are never compared numerically against each other.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec};
use crate::padic::{frac_floor, PadicNum, Rational};
use crate::pgamma::gamma_frac;

/// Complex double-precision value; character sums keep these finite.
pub type ComplexVal = Complex64;

/// Tolerance for a single character sum of at most q unit-modulus terms.
pub const TOL_SINGLE: f64 = 1e-9;
/// Absolute-plus-relative tolerance for bulk sums of up to `q^{n+1}` terms.
pub const TOL_BULK: f64 = 1e-6;

/// A Gauss sum `g(omega-bar^a)` in the pi-adic representation of
/// Gross-Koblitz: `-pi^{pi_exponent} * unit` with `pi^{p-1} = -p`.
/// Mixed exponents are only ever compared, never added; conversion to a
/// `Z_p` value is possible exactly when `p - 1` divides the exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct PiAdicGauss {
    /// `(p-1) * sum_i <a p^i / (q-1)>`, always a nonnegative integer equal
    /// to the base-p digit sum of `a`.
    pub pi_exponent: u64,
    /// `prod_i Gamma_p(<a p^i / (q-1)>)` with the leading minus sign of the
    /// Gross-Koblitz formula folded in; a unit mod `p^M`.
    pub unit: PadicNum,
}

impl PiAdicGauss {
    /// Collapses `pi^{(p-1)k}` to `(-p)^k` when the exponent allows it.
    pub fn to_padic(&self) -> Option<PadicNum> {
        let p = self.unit.p();
        let (k, rem) = self.pi_exponent.div_rem(&(p - 1));
        if rem != 0 {
            return None;
        }
        let minus_p = PadicNum::from_i64(-(p as i64), p, self.unit.precision());
        Some(minus_p.pow(k).mul(&self.unit))
    }
}

/// The surface `x_1^d + ... + x_n^d = lambda d x_1^{h_1} ... x_n^{h_n}`
/// over a fixed `F_q`. Construction enforces the partition shape
/// (`h_i >= 1`, `sum h_i = d`, `n >= 2`) and `gcd(d, h_1, ..., h_n) = 1`;
/// `lambda = 0` is allowed and degenerates to the diagonal.
#[derive(Clone, Debug)]
pub struct SurfaceSpec {
    field: FieldSpec,
    d: u64,
    h: Vec<u64>,
    lambda: FieldElem,
}

impl SurfaceSpec {
    pub fn new(field: FieldSpec, d: u64, h: Vec<u64>, lambda: FieldElem) -> Result<Self> {
        if d < 2 {
            return Err(Error::BadPartition(format!("d = {d} must be >= 2")));
        }
        if h.len() < 2 {
            return Err(Error::BadPartition(format!(
                "n = {} variables, need at least 2",
                h.len()
            )));
        }
        if h.iter().any(|&hi| hi < 1) {
            return Err(Error::BadPartition("every h_i must be >= 1".into()));
        }
        if h.iter().sum::<u64>() != d {
            return Err(Error::BadPartition(format!(
                "sum(h) = {} != d = {d}",
                h.iter().sum::<u64>()
            )));
        }
        let g = h.iter().fold(d, |acc, &hi| acc.gcd(&hi));
        if g != 1 {
            return Err(Error::HypothesisViolated("gcd(d,h_1,...,h_n)=1".into()));
        }
        Ok(SurfaceSpec {
            field,
            d,
            h,
            lambda,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn h(&self) -> &[u64] {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn lambda(&self) -> &FieldElem {
        &self.lambda
    }

    /// `lambda * d` as a field element, the deformation coefficient.
    pub(crate) fn lambda_d(&self) -> FieldElem {
        self.field.mul(&self.lambda, &self.field.embed(self.d as i64))
    }

    /// True when `p` divides `d * h_1 * ... * h_n`.
    pub fn p_divides_dh(&self) -> bool {
        let p = self.field.p();
        self.d % p == 0 || self.h.iter().any(|&hi| hi % p == 0)
    }
}

/// `theta(alpha) = zeta_p^{tr(alpha)}`, the canonical additive character.
pub fn theta(field: &FieldSpec, alpha: &FieldElem) -> ComplexVal {
    theta_of_trace(field.p(), field.trace(alpha))
}

fn theta_of_trace(p: u64, tr: u64) -> ComplexVal {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * tr as f64 / p as f64)
}

/// Theta by element index, tabulated once per sum.
fn theta_table(field: &FieldSpec) -> Vec<ComplexVal> {
    (0..field.q() as usize)
        .map(|i| theta_of_trace(field.p(), field.trace_idx(i)))
        .collect()
}

/// `T^m(x)` for the fixed generator character `T(g^k) = e^{2 pi i k/(q-1)}`,
/// with every character (the trivial one included) vanishing at 0.
pub fn multiplicative_char(field: &FieldSpec, m: i64, x: &FieldElem) -> ComplexVal {
    match field.dlog(x) {
        Err(_) => Complex64::zero(),
        Ok(k) => unit_root(field.q() - 1, m * k as i64),
    }
}

/// `e^{2 pi i num / den}` with the angle reduced exactly first.
fn unit_root(den: u64, num: i64) -> ComplexVal {
    let k = num.rem_euclid(den as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k / den as f64)
}

/// The Gauss sum `g(T^m) = sum_x T^m(x) theta(x)`. For `m = 0 (mod q-1)`
/// this is exactly -1 (returned without summation); otherwise the direct
/// `(q-1)`-term sum, of modulus `sqrt(q)`.
pub fn gauss_sum_complex(field: &FieldSpec, m: i64) -> ComplexVal {
    let qm1 = field.q() - 1;
    if m.rem_euclid(qm1 as i64) == 0 {
        return Complex64::new(-1.0, 0.0);
    }
    let thetas = theta_table(field);
    let mut acc = Complex64::zero();
    for k in 0..qm1 {
        let x_idx = field.gen_pow_idx(k);
        acc += unit_root(qm1, m * k as i64) * thetas[x_idx];
    }
    debug_assert!(acc.re.is_finite() && acc.im.is_finite());
    acc
}

/// `g(omega-bar^a)` via Gross-Koblitz: exponent `(p-1) sum_i <a p^i/(q-1)>`
/// (an integer, equal to the base-p digit sum of `a`) and unit
/// `-prod_i Gamma_p(<a p^i/(q-1)>)`.
pub fn gauss_sum_padic(field: &FieldSpec, a: u64, precision: u32) -> Result<PiAdicGauss> {
    let q = field.q();
    let p = field.p();
    if a > q - 2 {
        return Err(Error::OutOfRange(format!(
            "character index a = {a} outside [0, {}]",
            q - 2
        )));
    }
    let qm1 = Rational::from_integer((q - 1).into());
    let mut frac_sum = Rational::zero();
    let mut unit = PadicNum::one(p, precision);
    for i in 0..field.r() as u32 {
        let arg = Rational::from_integer((a * p.pow(i)).into()) / &qm1;
        let (frac, _) = frac_floor(&arg);
        frac_sum += &frac;
        unit = unit.mul(&gamma_frac(&arg, p, precision)?);
    }
    let scaled = frac_sum * Rational::from_integer((p - 1).into());
    assert!(
        scaled.is_integer(),
        "(p-1) * sum of fractional parts must be an integer"
    );
    let pi_exponent = crate::padic::bigint_to_i64(&scaled.to_integer()) as u64;
    Ok(PiAdicGauss {
        pi_exponent,
        unit: unit.neg(),
    })
}

/// Evaluation mode for the deformed character sum `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AMode {
    /// Exhaustive `O(q^{n+1})` sum over `z` and all unit coordinates,
    /// accumulated in ascending `z`, then lexicographic `x`.
    Brute,
    /// The Gauss-sum expansion, a single character sum of length `q - 1`;
    /// valid only under `gcd(d, q-1) = 1`.
    Gauss,
}

/// `A = sum_{z, x_i in F_q^x} theta(z f(x))` for
/// `f = x_1^d + ... + x_n^d - lambda d x_1^{h_1} ... x_n^{h_n}`.
pub fn compute_a(spec: &SurfaceSpec, mode: AMode) -> Result<ComplexVal> {
    if spec.lambda().is_zero() {
        return Err(Error::HypothesisViolated("lambda != 0".into()));
    }
    if spec.p_divides_dh() {
        return Err(Error::HypothesisViolated(
            "p does not divide d*h_1*...*h_n".into(),
        ));
    }
    match mode {
        AMode::Brute => Ok(brute_theta_sum(spec, true)),
        AMode::Gauss => {
            if (spec.field().q() - 1).gcd(&spec.d()) != 1 {
                return Err(Error::HypothesisViolated("gcd(d,q-1)=1".into()));
            }
            Ok(gauss_mode_a(spec))
        }
    }
}

/// `B = sum_{z, x_i in F_q^x} theta(z f_1(x))` for the undeformed diagonal
/// `f_1 = x_1^d + ... + x_n^d`; equals `(-1)^n (q-1)` under
/// `gcd(d, q-1) = 1`.
pub fn compute_b(spec: &SurfaceSpec) -> Result<ComplexVal> {
    if (spec.field().q() - 1).gcd(&spec.d()) != 1 {
        return Err(Error::HypothesisViolated("gcd(d,q-1)=1".into()));
    }
    Ok(brute_theta_sum(spec, false))
}

/// Shared brute-force kernel; `deformed` selects `f` vs `f_1`. The values
/// `f(x)` are tabulated once over all unit tuples in lexicographic order,
/// then the outer accumulation runs over ascending `z`.
fn brute_theta_sum(spec: &SurfaceSpec, deformed: bool) -> ComplexVal {
    let field = spec.field();
    let q = field.q() as usize;
    let n = spec.n();

    let pow_d: Vec<usize> = (0..q).map(|i| field.pow_idx(i, spec.d())).collect();
    let pow_h: Vec<Vec<usize>> = spec
        .h()
        .iter()
        .map(|&hi| (0..q).map(|i| field.pow_idx(i, hi)).collect())
        .collect();
    let neg_idx: Vec<usize> = (0..q)
        .map(|i| field.index_of(&field.neg(&field.elem_at(i))))
        .collect();
    let one_idx = field.index_of(&field.one());
    let lam_d_idx = field.index_of(&spec.lambda_d());

    let total = (q - 1).pow(n as u32);
    let mut fvals: Vec<usize> = Vec::with_capacity(total);
    let mut xs = vec![1usize; n];
    'enumerate: loop {
        let mut sum = 0usize; // index of the zero element
        let mut mon = one_idx;
        for (i, &x) in xs.iter().enumerate() {
            sum = field.add_idx(sum, pow_d[x]);
            mon = field.mul_idx(mon, pow_h[i][x]);
        }
        let f = if deformed {
            sum = field.add_idx(sum, neg_idx[field.mul_idx(lam_d_idx, mon)]);
            sum
        } else {
            sum
        };
        fvals.push(f);
        // odometer on the last coordinate keeps lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                break 'enumerate;
            }
            i -= 1;
            xs[i] += 1;
            if xs[i] < q {
                break;
            }
            xs[i] = 1;
        }
    }
    debug_assert_eq!(fvals.len(), total);

    let thetas = theta_table(field);
    let mut acc = Complex64::zero();
    for z in 1..q {
        for &f in &fvals {
            acc += thetas[field.mul_idx(z, f)];
        }
    }
    debug_assert!(acc.re.is_finite() && acc.im.is_finite());
    acc
}

/// `A = sum_a g(T^{-a h_1}) ... g(T^{-a h_n}) g(T^{a d}) T^{-a d}(-lambda d)`.
fn gauss_mode_a(spec: &SurfaceSpec) -> ComplexVal {
    let field = spec.field();
    let qm1 = field.q() - 1;
    let g: Vec<ComplexVal> = (0..qm1)
        .map(|m| gauss_sum_complex(field, m as i64))
        .collect();
    let minus_lambda_d = field.neg(&spec.lambda_d());
    let k0 = field
        .dlog(&minus_lambda_d)
        .expect("lambda != 0 and p does not divide d");
    let mut acc = Complex64::zero();
    for a in 0..qm1 {
        let mut term = Complex64::new(1.0, 0.0);
        for &hi in spec.h() {
            term *= g[((qm1 - (a * hi) % qm1) % qm1) as usize];
        }
        term *= g[((a * spec.d()) % qm1) as usize];
        // T^{-ad}(-lambda d)
        term *= unit_root(qm1, -((a * spec.d()) as i64) * k0 as i64);
        acc += term;
    }
    debug_assert!(acc.re.is_finite() && acc.im.is_finite());
    acc
}

/// Checks the expansion of theta through Gauss sums,
/// `theta(alpha) = (1/(q-1)) sum_m g(T^{-m}) T^m(alpha)`, at a nonzero
/// `alpha`. At `alpha = 0` the right side is 0 under the `chi(0) = 0`
/// convention while `theta(0) = 1`, so zero is rejected rather than
/// reported as a mismatch.
pub fn check_theta_expansion(field: &FieldSpec, alpha: &FieldElem) -> Result<bool> {
    if alpha.is_zero() {
        return Err(Error::ZeroArgument("theta expansion at alpha = 0"));
    }
    let qm1 = field.q() - 1;
    let lhs = theta(field, alpha);
    let mut rhs = Complex64::zero();
    for m in 0..qm1 as i64 {
        rhs += gauss_sum_complex(field, -m) * multiplicative_char(field, m, alpha);
    }
    rhs /= qm1 as f64;
    Ok((lhs - rhs).norm() <= TOL_SINGLE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::omega_power;

    fn f(p: u64, r: u64) -> FieldSpec {
        FieldSpec::new(p, r).unwrap()
    }

    fn surface(field: &FieldSpec, d: u64, h: &[u64], lambda: i64) -> SurfaceSpec {
        SurfaceSpec::new(field.clone(), d, h.to_vec(), field.embed(lambda)).unwrap()
    }

    #[test]
    fn theta_at_zero_and_one() {
        let f5 = f(5, 1);
        assert_eq!(theta(&f5, &f5.zero()), Complex64::new(1.0, 0.0));
        let t1 = theta(&f5, &f5.one());
        let expect = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0);
        assert!((t1 - expect).norm() < 1e-12);
    }

    #[test]
    fn theta_sums_to_zero_over_field() {
        for (p, r) in [(5u64, 1u64), (3, 2), (7, 1)] {
            let fq = f(p, r);
            let total: Complex64 = fq.elements().map(|a| theta(&fq, &a)).sum();
            assert!(total.norm() < TOL_SINGLE, "sum theta != 0 over F_{}", fq.q());
        }
    }

    #[test]
    fn theta_is_additive_to_multiplicative() {
        let f9 = f(3, 2);
        for a in f9.elements() {
            for b in f9.elements() {
                let lhs = theta(&f9, &f9.add(&a, &b));
                let rhs = theta(&f9, &a) * theta(&f9, &b);
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn character_orthogonality() {
        for (p, r) in [(5u64, 1u64), (7, 1), (3, 2)] {
            let fq = f(p, r);
            for m in 0..(fq.q() - 1) as i64 {
                let total: Complex64 = fq
                    .elements()
                    .map(|x| multiplicative_char(&fq, m, &x))
                    .sum();
                let expect = if m == 0 { (fq.q() - 1) as f64 } else { 0.0 };
                assert!(
                    (total - Complex64::new(expect, 0.0)).norm() < TOL_SINGLE,
                    "orthogonality fails for m = {m}, q = {}",
                    fq.q()
                );
            }
        }
    }

    #[test]
    fn gauss_sum_trivial_character_is_exactly_minus_one() {
        let f7 = f(7, 1);
        assert_eq!(gauss_sum_complex(&f7, 0), Complex64::new(-1.0, 0.0));
        assert_eq!(gauss_sum_complex(&f7, 6), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn quadratic_gauss_sum_q5_is_real_sqrt5() {
        // chi(-1) = 1 here, so g is real with g^2 = 5
        let f5 = f(5, 1);
        let g = gauss_sum_complex(&f5, 2);
        assert!(g.im.abs() < TOL_SINGLE);
        assert!((g.re * g.re - 5.0).abs() < TOL_SINGLE);
    }

    #[test]
    fn gauss_sum_modulus_is_q() {
        for (p, r) in [(5u64, 1u64), (3, 2), (13, 1)] {
            let fq = f(p, r);
            for m in 1..(fq.q() - 1) as i64 {
                let g = gauss_sum_complex(&fq, m);
                assert!(
                    (g.norm_sqr() - fq.q() as f64).abs() < TOL_SINGLE,
                    "|g|^2 != q for m = {m}, q = {}",
                    fq.q()
                );
            }
        }
    }

    #[test]
    fn padic_gauss_examples() {
        let f5 = f(5, 1);
        let g0 = gauss_sum_padic(&f5, 0, 4).unwrap();
        assert_eq!(g0.pi_exponent, 0);
        assert_eq!(g0.unit, PadicNum::from_i64(-1, 5, 4));

        // q = 9, a = 4 = (1,1) base 3: exponent = digit sum = 2
        let f9 = f(3, 2);
        let g4 = gauss_sum_padic(&f9, 4, 4).unwrap();
        assert_eq!(g4.pi_exponent, 2);

        assert!(matches!(
            gauss_sum_padic(&f5, 4, 4),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn pi_exponent_is_base_p_digit_sum() {
        for (p, r) in [(5u64, 1u64), (3, 2), (5, 2), (7, 1)] {
            let fq = f(p, r);
            for a in 0..=fq.q() - 2 {
                let g = gauss_sum_padic(&fq, a, 3).unwrap();
                let mut ds = 0;
                let mut v = a;
                while v > 0 {
                    ds += v % p;
                    v /= p;
                }
                assert_eq!(g.pi_exponent, ds, "a = {a}, q = {}", fq.q());
            }
        }
    }

    #[test]
    fn reflection_pairing_of_exponents() {
        // digit sums of a and q-1-a add to r(p-1)
        for (p, r) in [(5u64, 1u64), (3, 2), (5, 2)] {
            let fq = f(p, r);
            let q = fq.q();
            for a in 1..=q - 2 {
                let ga = gauss_sum_padic(&fq, a, 3).unwrap();
                let gb = gauss_sum_padic(&fq, q - 1 - a, 3).unwrap();
                assert_eq!(ga.pi_exponent + gb.pi_exponent, fq.r() as u64 * (p - 1));
            }
        }
    }

    #[test]
    fn gauss_product_identity_mod_pm() {
        // g(wbar^a) g(wbar^{-a}) = wbar^a(-1) * q, via Gross-Koblitz
        let m = 4;
        for (p, r) in [(5u64, 1u64), (7, 1), (3, 2)] {
            let fq = f(p, r);
            let q = fq.q();
            for a in 1..=q - 2 {
                let ga = gauss_sum_padic(&fq, a, m).unwrap();
                let gb = gauss_sum_padic(&fq, q - 1 - a, m).unwrap();
                let total_exp = ga.pi_exponent + gb.pi_exponent;
                assert_eq!(total_exp % (p - 1), 0);
                // minus signs of the two Gauss sums cancel
                let prod = PiAdicGauss {
                    pi_exponent: total_exp,
                    unit: ga.unit.mul(&gb.unit),
                }
                .to_padic()
                .unwrap();
                let sign = omega_power(&fq, a as i64, &fq.embed(-1), m).unwrap();
                let expect = sign
                    .constant_part()
                    .mul(&PadicNum::from_i64(q as i64, p, m));
                assert_eq!(prod, expect, "a = {a}, q = {q}");
            }
        }
    }

    #[test]
    fn compute_a_hand_example() {
        // q=5, n=2, d=2, h=(1,1), lambda=1: f = (x-y)^2;
        // 4 diagonal pairs give theta(0) summed over z (16 total), the 12
        // off-diagonal pairs give -1 each
        let f5 = f(5, 1);
        let s = surface(&f5, 2, &[1, 1], 1);
        let a = compute_a(&s, AMode::Brute).unwrap();
        assert!((a - Complex64::new(4.0, 0.0)).norm() < TOL_BULK);
    }

    #[test]
    fn compute_a_modes_agree_on_dwork_cubic() {
        let f5 = f(5, 1);
        let s = surface(&f5, 3, &[1, 1, 1], 1);
        let brute = compute_a(&s, AMode::Brute).unwrap();
        let gauss = compute_a(&s, AMode::Gauss).unwrap();
        assert!((brute - Complex64::new(16.0, 0.0)).norm() < TOL_BULK);
        assert!((brute - gauss).norm() < TOL_BULK * (1.0 + brute.norm()));
    }

    #[test]
    fn compute_a_rejects_zero_lambda_and_gauss_gcd() {
        let f5 = f(5, 1);
        let s0 = SurfaceSpec::new(f5.clone(), 3, vec![1, 1, 1], f5.zero()).unwrap();
        assert_eq!(
            compute_a(&s0, AMode::Brute).unwrap_err(),
            Error::HypothesisViolated("lambda != 0".into())
        );
        // d = 2, q = 5: gcd(2,4) = 2, so gauss mode refuses
        let s = surface(&f5, 2, &[1, 1], 1);
        assert!(matches!(
            compute_a(&s, AMode::Gauss),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn compute_b_closed_form() {
        // B = (-1)^n (q-1) under gcd(d, q-1) = 1
        let f5 = f(5, 1);
        let b = compute_b(&surface(&f5, 3, &[1, 2], 1)).unwrap();
        assert!((b - Complex64::new(4.0, 0.0)).norm() < TOL_BULK);

        let f7 = f(7, 1);
        let b = compute_b(&surface(&f7, 5, &[1, 1, 3], 1)).unwrap();
        assert!((b - Complex64::new(-6.0, 0.0)).norm() < TOL_BULK);

        // gcd(4, 4) != 1
        let s = surface(&f5, 4, &[1, 1, 2], 1);
        assert!(matches!(compute_b(&s), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn theta_expansion_on_units() {
        for (p, r) in [(5u64, 1u64), (3, 2)] {
            let fq = f(p, r);
            for alpha in fq.units() {
                assert!(check_theta_expansion(&fq, &alpha).unwrap());
            }
            assert!(matches!(
                check_theta_expansion(&fq, &fq.zero()),
                Err(Error::ZeroArgument(_))
            ));
        }
    }

    #[test]
    fn surface_spec_validation() {
        let f5 = f(5, 1);
        assert!(matches!(
            SurfaceSpec::new(f5.clone(), 4, vec![1, 1], f5.one()),
            Err(Error::BadPartition(_))
        ));
        assert!(matches!(
            SurfaceSpec::new(f5.clone(), 4, vec![2, 2], f5.one()),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            SurfaceSpec::new(f5.clone(), 2, vec![2], f5.one()),
            Err(Error::BadPartition(_))
        ));
    }
}
