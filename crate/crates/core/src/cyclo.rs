//! Exact arithmetic in cyclotomic fields `Q(w_m)`.
//!
//! An element is the reduced residue of a rational polynomial modulo the
//! m-th cyclotomic polynomial, so it is stored as exactly `phi(m)` rational
//! coefficients. Elements of different orders are combined by embedding both
//! into the field of the least common multiple order; the strict
//! `checked_*` variants refuse to do that and report [`Error::OrderMismatch`].

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The m-th cyclotomic polynomial together with the table of reduced powers
/// of its root.
#[derive(Debug)]
pub struct CyclotomicContext {
    order: u64,
    /// Coefficients of `Phi_m`, ascending; monic of degree `phi(m)`.
    poly: Vec<BigInt>,
    poly_q: Vec<BigRational>,
    /// `powers[j]` is the reduced residue of `x^j`, for `0 <= j < m`.
    powers: Vec<Vec<BigRational>>,
}

impl CyclotomicContext {
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Degree of `Phi_m`, i.e. Euler's totient of `m`.
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// Ascending integer coefficients of `Phi_m`.
    pub fn poly(&self) -> &[BigInt] {
        &self.poly
    }

    fn build(order: u64) -> Self {
        let mut poly = vec![BigInt::zero(); order as usize + 1];
        poly[0] = -BigInt::one();
        poly[order as usize] = BigInt::one();
        for d in proper_divisors(order) {
            poly = div_exact_monic(&poly, context(d).poly());
        }
        let degree = poly.len() - 1;
        let poly_q: Vec<BigRational> = poly.iter().cloned().map(BigRational::from_integer).collect();
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![BigRational::zero(); degree];
        cur[0] = BigRational::one();
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by x and fold the overflow coefficient back
            let top = cur.pop().unwrap_or_else(BigRational::zero);
            cur.insert(0, BigRational::zero());
            if !top.is_zero() {
                for (c, p) in cur.iter_mut().zip(&poly_q) {
                    *c -= &top * p;
                }
            }
        }
        CyclotomicContext { order, poly, poly_q, powers }
    }

    /// Reduces an arbitrary-length coefficient vector modulo `Phi_m`.
    fn reduce(&self, mut coeffs: Vec<BigRational>) -> Vec<BigRational> {
        let deg = self.degree();
        while coeffs.len() > deg {
            let top = coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = coeffs.len() - deg;
            for (i, p) in self.poly_q[..deg].iter().enumerate() {
                if !p.is_zero() {
                    coeffs[shift + i] -= &top * p;
                }
            }
        }
        coeffs.resize(deg, BigRational::zero());
        coeffs
    }
}

fn proper_divisors(n: u64) -> Vec<u64> {
    (1..n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Exact quotient of `num` by a monic divisor (ascending coefficients).
fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "cyclotomic division left a remainder");
    quot
}

fn cache() -> &'static RwLock<HashMap<u64, Arc<CyclotomicContext>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<CyclotomicContext>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Returns the (cached) context for order `m`.
///
/// Contexts are built on demand from the divisor recursion
/// `Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d` and never evicted.
pub fn context(m: u64) -> Arc<CyclotomicContext> {
    assert!(m >= 1, "cyclotomic order must be positive");
    if let Some(ctx) = cache().read().unwrap().get(&m) {
        return Arc::clone(ctx);
    }
    // Built outside the lock: construction recursively requests the divisors.
    let built = Arc::new(CyclotomicContext::build(m));
    let mut table = cache().write().unwrap();
    Arc::clone(table.entry(m).or_insert(built))
}

/// Alias of [`context`] named after the polynomial it carries.
pub fn cyclo_poly(m: u64) -> Arc<CyclotomicContext> {
    context(m)
}

/// Element of `Q(w_m)` in reduced residue form.
#[derive(Clone)]
pub struct CycloNum {
    ctx: Arc<CyclotomicContext>,
    coeffs: Vec<BigRational>,
}

impl CycloNum {
    fn from_reduced(ctx: Arc<CyclotomicContext>, coeffs: Vec<BigRational>) -> Self {
        debug_assert_eq!(coeffs.len(), ctx.degree());
        CycloNum { ctx, coeffs }
    }

    /// Builds `sum coeffs[i] * w_m^i`, reducing modulo `Phi_m`.
    pub fn from_coeffs(m: u64, coeffs: Vec<BigRational>) -> Self {
        let ctx = context(m);
        let coeffs = ctx.reduce(coeffs);
        CycloNum { ctx, coeffs }
    }

    pub fn from_rational(q: BigRational) -> Self {
        CycloNum::from_reduced(context(1), vec![q])
    }

    pub fn from_int(n: i64) -> Self {
        CycloNum::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        CycloNum::from_int(0)
    }

    pub fn one() -> Self {
        CycloNum::from_int(1)
    }

    /// The primitive root `w_m`, i.e. the residue of the indeterminate.
    pub fn omega(m: u64) -> Self {
        CycloNum::omega_pow(m, 1)
    }

    /// `w_m^e` for any integer `e`.
    pub fn omega_pow(m: u64, e: i64) -> Self {
        let ctx = context(m);
        let j = e.rem_euclid(m as i64) as usize;
        let coeffs = ctx.powers[j].clone();
        CycloNum::from_reduced(ctx, coeffs)
    }

    pub fn order(&self) -> u64 {
        self.ctx.order
    }

    pub fn context(&self) -> &Arc<CyclotomicContext> {
        &self.ctx
    }

    /// Reduced coefficients, ascending powers of `w_m`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// The rational value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Image under `w_m -> w_{m'}^{m'/m}`; requires `m | m'`.
    pub fn embed(&self, target: u64) -> Result<CycloNum> {
        let m = self.order();
        if target == 0 || !target.is_multiple_of(m) {
            return Err(Error::OrderMismatch { from: m, to: target });
        }
        if target == m {
            return Ok(self.clone());
        }
        let step = (target / m) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Ok(CycloNum::from_coeffs(target, poly))
    }

    fn lift_pair(a: &CycloNum, b: &CycloNum) -> (CycloNum, CycloNum) {
        if a.order() == b.order() {
            return (a.clone(), b.clone());
        }
        let l = a.order().lcm(&b.order());
        (a.embed(l).unwrap(), b.embed(l).unwrap())
    }

    fn same_order(&self, other: &CycloNum) -> Result<()> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(Error::OrderMismatch { from: other.order(), to: self.order() })
        }
    }

    fn add_same(&self, other: &CycloNum) -> CycloNum {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CycloNum::from_reduced(Arc::clone(&self.ctx), coeffs)
    }

    fn sub_same(&self, other: &CycloNum) -> CycloNum {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        CycloNum::from_reduced(Arc::clone(&self.ctx), coeffs)
    }

    fn mul_same(&self, other: &CycloNum) -> CycloNum {
        if let Some(q) = other.as_rational() {
            return self.scale(&q);
        }
        if let Some(q) = self.as_rational() {
            return other.scale(&q);
        }
        let n = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let coeffs = self.ctx.reduce(prod);
        CycloNum::from_reduced(Arc::clone(&self.ctx), coeffs)
    }

    /// Multiplication by a rational scalar.
    pub fn scale(&self, q: &BigRational) -> CycloNum {
        let coeffs = self.coeffs.iter().map(|c| c * q).collect();
        CycloNum::from_reduced(Arc::clone(&self.ctx), coeffs)
    }

    pub fn checked_add(&self, other: &CycloNum) -> Result<CycloNum> {
        self.same_order(other)?;
        Ok(self.add_same(other))
    }

    pub fn checked_sub(&self, other: &CycloNum) -> Result<CycloNum> {
        self.same_order(other)?;
        Ok(self.sub_same(other))
    }

    pub fn checked_mul(&self, other: &CycloNum) -> Result<CycloNum> {
        self.same_order(other)?;
        Ok(self.mul_same(other))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Phi_m`.
    pub fn inv(&self) -> Result<CycloNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            let coeffs = std::iter::once(q.recip())
                .chain(std::iter::repeat_n(BigRational::zero(), self.coeffs.len() - 1))
                .collect();
            return Ok(CycloNum::from_reduced(Arc::clone(&self.ctx), coeffs));
        }
        let s = qpoly::inverse_mod(&self.coeffs, &self.ctx.poly_q);
        Ok(CycloNum::from_reduced(Arc::clone(&self.ctx), self.ctx.reduce(s)))
    }

    pub fn checked_div(&self, other: &CycloNum) -> Result<CycloNum> {
        Ok(self * &other.inv()?)
    }

    /// Integer power; negative exponents go through [`CycloNum::inv`].
    pub fn pow(&self, e: i64) -> Result<CycloNum> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = CycloNum::one().embed(self.order()).unwrap();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_same(&sq);
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.mul_same(&sq);
            }
        }
        Ok(acc)
    }

    /// `j` in `[0, m)` with `self = w_m^j` for the element's own order `m`.
    pub fn log_root_of_unity(&self) -> Option<u64> {
        self.ctx.powers.iter().position(|p| p == &self.coeffs).map(|j| j as u64)
    }

    /// Membership in the cyclic group generated by `w_m` for an arbitrary `m`;
    /// both sides are compared inside `Q(w_lcm)`.
    pub fn log_in(&self, m: u64) -> Option<u64> {
        let l = self.order().lcm(&m);
        let lifted = self.embed(l).ok()?;
        let step = (l / m) as usize;
        let ctx = lifted.context();
        (0..m as usize).find(|j| ctx.powers[j * step] == lifted.coeffs).map(|j| j as u64)
    }

    /// Deterministic `n`-th root for constants the oracle can recognise:
    /// a rational `n`-th power times a root of unity of the field.
    ///
    /// For `self = q * w^j` the root is `q^(1/n) * w_{nm}^j` with the least
    /// such `j`; when `j = 0` the order is unchanged.
    pub fn const_root(&self, n: u64) -> Result<CycloNum> {
        assert!(n >= 1, "root index must be positive");
        if n == 1 || self.is_zero() {
            return Ok(self.clone());
        }
        // Q(w_m) = Q(w_2m) for odd m, and the latter lists every root of unity.
        let m = if self.order().is_multiple_of(2) { self.order() } else { 2 * self.order() };
        let lifted = self.embed(m).unwrap();
        for j in 0..m as i64 {
            let unrotated = lifted.mul_same(&CycloNum::omega_pow(m, -j));
            let Some(q) = unrotated.as_rational() else { continue };
            let Some(r) = rational_nth_root(&q, n) else { continue };
            return if j == 0 {
                Ok(CycloNum::from_rational(r).embed(self.order()).unwrap())
            } else {
                Ok(CycloNum::omega_pow(n * m, j).scale(&r))
            };
        }
        Err(Error::RootNotInField { n, value: self.to_string() })
    }

    /// Renders the element with `symbol` standing for `w_m`.
    pub fn format_with(&self, symbol: &str) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match k {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&mag.to_string());
                        out.push('*');
                    }
                    out.push_str(symbol);
                    if k > 1 {
                        out.push_str(&format!("^{k}"));
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Number of nonzero coefficients in the reduced residue.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

/// Exact rational `n`-th root, if one exists.
pub fn rational_nth_root(q: &BigRational, n: u64) -> Option<BigRational> {
    if q.is_zero() {
        return Some(q.clone());
    }
    let n32 = u32::try_from(n).ok()?;
    if q.is_negative() {
        if n.is_multiple_of(2) {
            return None;
        }
        return rational_nth_root(&-q, n).map(|r| -r);
    }
    let num = q.numer().nth_root(n32);
    let den = q.denom().nth_root(n32);
    if num.pow(n32) == *q.numer() && den.pow(n32) == *q.denom() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order() == other.order() {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = CycloNum::lift_pair(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNum {}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with("w"))
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum[{}]({})", self.order(), self)
    }
}

impl From<i64> for CycloNum {
    fn from(n: i64) -> Self {
        CycloNum::from_int(n)
    }
}

impl From<BigRational> for CycloNum {
    fn from(q: BigRational) -> Self {
        CycloNum::from_rational(q)
    }
}

macro_rules! lifting_binop {
    ($trait:ident, $method:ident, $same:ident) => {
        impl $trait<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                if self.order() == rhs.order() {
                    self.$same(rhs)
                } else {
                    let (a, b) = CycloNum::lift_pair(self, rhs);
                    a.$same(&b)
                }
            }
        }
        impl $trait<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: CycloNum) -> CycloNum {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                (&self).$method(rhs)
            }
        }
    };
}

lifting_binop!(Add, add, add_same);
lifting_binop!(Sub, sub, sub_same);
lifting_binop!(Mul, mul, mul_same);

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        CycloNum::from_reduced(Arc::clone(&self.ctx), coeffs)
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

/// Dense polynomial helpers over `Q` (ascending coefficients).
mod qpoly {
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn trim(p: &mut Vec<BigRational>) {
        while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }

    fn is_zero(p: &[BigRational]) -> bool {
        p.iter().all(Zero::is_zero)
    }

    fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut rem = a.to_vec();
        trim(&mut rem);
        let db = b.len() - 1;
        let lead = b[db].clone();
        if rem.len() < b.len() {
            return (vec![BigRational::zero()], rem);
        }
        let mut quot = vec![BigRational::zero(); rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + db] / &lead;
            if c.is_zero() {
                continue;
            }
            for (i, bi) in b.iter().enumerate() {
                rem[k + i] -= &c * bi;
            }
            quot[k] = c;
        }
        rem.truncate(db.max(1));
        trim(&mut rem);
        (quot, rem)
    }

    fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            out[i] -= y;
        }
        trim(&mut out);
        out
    }

    /// `s` with `s * a = 1 (mod modulus)`; the caller guarantees coprimality.
    pub(super) fn inverse_mod(a: &[BigRational], modulus: &[BigRational]) -> Vec<BigRational> {
        let (mut r0, mut r1) = (modulus.to_vec(), a.to_vec());
        trim(&mut r1);
        let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
        while !is_zero(&r1) {
            let (q, r) = divrem(&r0, &r1);
            let s2 = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant gcd
        let g = r0[0].clone();
        s0.iter().map(|c| c / &g).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclo_poly(1).poly(), ints(&[-1, 1]).as_slice());
        assert_eq!(cyclo_poly(4).poly(), ints(&[1, 0, 1]).as_slice());
        assert_eq!(cyclo_poly(6).poly(), ints(&[1, -1, 1]).as_slice());
        assert_eq!(cyclo_poly(12).poly(), ints(&[1, 0, -1, 0, 1]).as_slice());
    }

    #[test]
    fn degree_is_totient() {
        let totient = |n: u64| (1..=n).filter(|k| k.gcd(&n) == 1).count();
        for m in 1..=40 {
            assert_eq!(cyclo_poly(m).degree(), totient(m), "m = {m}");
        }
    }

    #[test]
    fn omega_basics() {
        let w4 = CycloNum::omega(4);
        assert!(w4.pow(4).unwrap().is_one());
        assert_eq!(w4.pow(2).unwrap(), CycloNum::from_int(-1));
        let w6 = CycloNum::omega(6);
        assert_eq!(w6.pow(3).unwrap(), CycloNum::from_int(-1));
    }

    #[test]
    fn primitivity() {
        for m in [1u64, 2, 3, 4, 5, 6, 8, 9, 12, 16, 27] {
            let w = CycloNum::omega(m);
            assert!(w.pow(m as i64).unwrap().is_one());
            for j in 1..m as i64 {
                assert!(!w.pow(j).unwrap().is_one(), "m = {m}, j = {j}");
            }
        }
    }

    #[test]
    fn inverse_examples() {
        assert!(CycloNum::one().inv().unwrap().is_one());
        let a = &CycloNum::one() + &CycloNum::omega(4);
        let expected = (&CycloNum::one() - &CycloNum::omega(4)).scale(&q(1, 2));
        assert_eq!(a.inv().unwrap(), expected);
        let minus_one = CycloNum::omega(2);
        assert_eq!(minus_one.inv().unwrap(), CycloNum::from_int(-1));
        assert_eq!(CycloNum::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn embedding_examples() {
        let minus_one = CycloNum::omega(2);
        let emb = minus_one.embed(4).unwrap();
        assert_eq!(emb.order(), 4);
        assert_eq!(emb.coeffs(), CycloNum::omega_pow(4, 2).coeffs());
        let w3 = CycloNum::omega(3).embed(6).unwrap();
        assert_eq!(w3.coeffs(), CycloNum::omega_pow(6, 2).coeffs());
        let half = CycloNum::from_rational(q(1, 2));
        assert_eq!(half.embed(12).unwrap().as_rational(), Some(q(1, 2)));
        assert!(matches!(CycloNum::omega(4).embed(6), Err(Error::OrderMismatch { .. })));
    }

    #[test]
    fn strict_ops_reject_mixed_orders() {
        let a = CycloNum::omega(4);
        let b = CycloNum::omega(3);
        assert!(matches!(a.checked_add(&b), Err(Error::OrderMismatch { .. })));
        assert!(a.checked_mul(&CycloNum::omega(4)).is_ok());
    }

    #[test]
    fn log_examples() {
        assert_eq!(CycloNum::one().log_root_of_unity(), Some(0));
        assert_eq!(CycloNum::from_int(-1).embed(4).unwrap().log_root_of_unity(), Some(2));
        let a = &CycloNum::one() + &CycloNum::omega(4);
        assert_eq!(a.log_root_of_unity(), None);
        assert_eq!(CycloNum::omega(4).log_in(2), None);
        assert_eq!(CycloNum::omega(2).log_in(4), Some(2));
        assert_eq!(CycloNum::omega(9).log_in(3), None);
        assert_eq!(CycloNum::omega(3).log_in(3), Some(1));
    }

    #[test]
    fn const_root_examples() {
        let one = CycloNum::one().embed(4).unwrap();
        let r = one.const_root(3).unwrap();
        assert!(r.is_one());
        assert_eq!(r.order(), 4);

        let minus_one = CycloNum::omega(2);
        let r = minus_one.const_root(2).unwrap();
        assert_eq!(r.order(), 4);
        assert_eq!(r.coeffs(), CycloNum::omega(4).coeffs());

        let a = &CycloNum::one() + &CycloNum::omega(4);
        assert!(matches!(a.const_root(2), Err(Error::RootNotInField { .. })));

        let four = CycloNum::from_int(4);
        assert_eq!(four.const_root(2).unwrap(), CycloNum::from_int(2));
        let r = CycloNum::from_int(-8).const_root(3).unwrap();
        assert_eq!(r, CycloNum::from_int(-2));
    }

    #[test]
    fn rational_minus_one_square_root() {
        // -1 stored at order 1 still reaches w_4
        let r = CycloNum::from_int(-1).const_root(2).unwrap();
        assert_eq!(r.pow(2).unwrap(), CycloNum::from_int(-1));
    }

    #[test]
    fn display_descending_powers() {
        let a = CycloNum::from_coeffs(5, vec![q(-1, 3), q(0, 1), q(1, 2)]);
        assert_eq!(a.to_string(), "1/2*w^2 - 1/3");
        assert_eq!(CycloNum::zero().to_string(), "0");
        assert_eq!((-CycloNum::omega(4)).to_string(), "-w");
    }
}
