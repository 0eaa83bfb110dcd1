//! Constructive root extraction.
//!
//! [`unit_root`] solves `g^n = f` for `f = 1 + (higher terms)` one level at a
//! time: at each exponent `gamma`, in ascending order, the coefficient of
//! `gamma` in `g^n` is `n * b_gamma` plus a quantity determined by the
//! already-known coefficients, so `b_gamma = (a_gamma - that quantity) / n`.
//! The quantity is read off a running table of the powers `g^k`, never
//! written in closed form.
//!
//! [`general_root`] and [`tower_pth_root`] split an element into
//! `constant * monomial * unit` and root each factor.

use std::ops::Bound;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::exponents::{ExponentVec, RingSig};
use crate::series::{Precision, Series};

fn binomials(n: usize) -> Vec<Vec<BigRational>> {
    let mut rows = vec![vec![BigRational::from_integer(BigInt::from(1))]];
    for k in 1..=n {
        let prev = &rows[k - 1];
        let row = (0..=k)
            .map(|j| {
                let left = if j > 0 { prev[j - 1].clone() } else { BigRational::from_integer(0.into()) };
                let right = prev.get(j).cloned().unwrap_or_else(|| BigRational::from_integer(0.into()));
                left + right
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// Least key strictly above `after` in either table.
fn next_level(a: &Series, b: &Series, after: &ExponentVec) -> Option<ExponentVec> {
    let range = (Bound::Excluded(after), Bound::Unbounded);
    let x = a.terms().range::<ExponentVec, _>(range).next().map(|(e, _)| e);
    let y = b.terms().range::<ExponentVec, _>(range).next().map(|(e, _)| e);
    match (x, y) {
        (Some(x), Some(y)) => Some(x.min(y).clone()),
        (x, y) => x.or(y).cloned(),
    }
}

fn require_commuting_support(sig: &RingSig, f: &Series) -> Result<()> {
    if !sig.is_twisted() {
        return Ok(());
    }
    let support: Vec<&ExponentVec> = f.terms().keys().collect();
    for (i, a) in support.iter().enumerate() {
        for b in &support[i + 1..] {
            if !sig.commutes(a, b) {
                return Err(Error::TwistObstruction);
            }
        }
    }
    Ok(())
}

/// The `n`-th root with constant term 1 of a series `1 + d`, `v(d) > 0`.
pub fn unit_root(f: &Series, n: u64) -> Result<Series> {
    assert!(n >= 1, "root index must be positive");
    let sig = f.sig();
    let zero = sig.zero_exp();
    match f.leading() {
        None => return Err(Error::ZeroValuation),
        Some((e, c)) if e.is_zero() && c.is_one() => {}
        Some(_) => return Err(Error::NotAOneUnit),
    }
    require_commuting_support(sig, f)?;
    if n == 1 || (f.is_exact() && f.len() == 1) {
        return Ok(f.clone());
    }
    let limit = f.prec().min(Precision::Below(sig.default_cutoff()));
    let n_inv = BigRational::new(1.into(), BigInt::from(n));
    let binom = binomials(n as usize);
    let one = Series::one(sig).truncate(limit);
    // powers[k] = g^k for the part of g fixed so far
    let mut powers: Vec<Series> = vec![one; n as usize + 1];
    let mut last = zero;
    loop {
        let known = limit.min(powers[n as usize].prec());
        let Some(level) = next_level(f, &powers[n as usize], &last) else {
            return Ok(powers[1].clone().truncate(known));
        };
        if !known.admits(sig.weight(&level)) {
            return Ok(powers[1].clone().truncate(known));
        }
        let residual = &f.coeff(&level) - &powers[n as usize].coeff(&level);
        let b = residual.scale(&n_inv);
        if !b.is_zero() {
            let t = Series::monomial(sig, b, level.clone()).truncate(limit);
            let mut t_pows = vec![Series::one(sig), t.clone()];
            for j in 2..=n as usize {
                let next = t_pows[j - 1].mul(&t)?.truncate(limit);
                t_pows.push(next);
            }
            let mut updated = Vec::with_capacity(powers.len());
            for k in 0..=n as usize {
                let mut acc = powers[k].clone();
                for j in 1..=k {
                    let coef = CycloNum::from_rational(binom[k][j].clone());
                    let term = powers[k - j].mul(&t_pows[j])?.scalar_mul(&coef);
                    acc = acc.add(&term)?;
                }
                updated.push(acc.truncate(limit));
            }
            powers = updated;
        }
        last = level;
    }
}

/// `(c', a/n)` with `(c' X^(a/n))^n = c X^a`.
pub fn monomial_root(sig: &Arc<RingSig>, c: &CycloNum, a: &ExponentVec, n: u64) -> Result<(CycloNum, ExponentVec)> {
    let beta = sig.divide_checked(a, n)?;
    // (X^b)^n = prod_{k=1}^{n-1} phase(k b, b) X^{n b}
    let twist: i64 = (1..n as i64).map(|k| sig.phase_exp(&sig.exp_scale(&beta, k), &beta)).sum();
    let target = c * sig.omega_pow(-twist);
    let root = target.const_root(n)?;
    Ok((root, beta))
}

/// `n`-th root of an arbitrary nonzero series: constant, monomial and unit
/// part are rooted separately and recombined.
pub fn general_root(f: &Series, n: u64) -> Result<Series> {
    let sig = f.sig();
    let dec = f.decompose()?;
    let (c, beta) = monomial_root(sig, &dec.coeff, &dec.exponent, n)?;
    if dec.tail.terms().keys().any(|e| !sig.commutes(&beta, e)) {
        return Err(Error::TwistObstruction);
    }
    let unit = Series::one(sig).add(&dec.tail)?;
    let g = unit_root(&unit, n)?;
    Series::monomial(sig, c, beta).mul(&g)
}

/// `p`-th root in the commutative tower `k((x_1^{1/p^m}, ..., x_r^{1/p^m}))`,
/// landing in the level `m + 1`.
///
/// The outermost variable present is split off,
/// `a = b0 * x_r^{k/p^m} * (1 + b1 x_r^{1/p^m} + ...)`, and `b0` (a series in
/// the inner variables) is rooted recursively down to a constant.
pub fn tower_pth_root(a: &Series) -> Result<Series> {
    let sig = a.sig();
    if sig.is_twisted() {
        return Err(Error::LatticeViolation("tower roots live in commutative signatures".into()));
    }
    if a.terms().keys().any(|e| (0..sig.rank()).any(|i| e.scaled()[2 * i + 1] != 0)) {
        return Err(Error::LatticeViolation("tower elements use the x-variables only".into()));
    }
    if a.is_empty() {
        return Err(Error::ZeroValuation);
    }
    tower_root_at(a, sig.rank())
}

fn tower_root_at(a: &Series, level: usize) -> Result<Series> {
    let sig = a.sig();
    let p = sig.p();
    if level == 0 {
        let (e, c) = a.leading().ok_or(Error::ZeroValuation)?;
        debug_assert!(e.is_zero());
        let root = c.const_root(p)?;
        return Ok(Series::constant(sig, root).truncate(a.prec()));
    }
    let k = 2 * (level - 1);
    let low = a.terms().keys().map(|e| e.scaled()[k]).min().ok_or(Error::ZeroValuation)?;
    if a.terms().keys().all(|e| e.scaled()[k] == 0) {
        return tower_root_at(a, level - 1);
    }
    let mut v = vec![0i64; sig.coords()];
    v[k] = low;
    let shift = sig.exp_from(&v, sig.denom_cap())?;
    // b0: the coefficient of x_level^low, a series in the inner variables
    let b0_terms = a.terms().iter().filter(|(e, _)| e.scaled()[k] == low).map(|(e, c)| (e.sub(&shift), c.clone()));
    let b0_prec = a.prec().shift(-sig.weight(&shift));
    let b0 = Series::from_terms(sig, b0_terms, b0_prec)?;
    let lead = b0.mul(&Series::monomial(sig, CycloNum::one(), shift.clone()))?;
    let unit = lead.inv()?.mul(a)?;
    let root_b0 = tower_root_at(&b0, level - 1)?;
    let half = sig.divide_checked(&shift, p)?;
    let root_unit = unit_root(&unit, p)?;
    root_b0.mul(&Series::monomial(sig, CycloNum::one(), half))?.mul(&root_unit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> CycloNum {
        CycloNum::from_rational(BigRational::new(n.into(), d.into()))
    }

    fn comm(r: usize, cap: u32) -> Arc<RingSig> {
        Arc::new(RingSig::commutative(2, &vec![1; r], cap).unwrap())
    }

    fn one_plus_x(sig: &Arc<RingSig>) -> Series {
        Series::one(sig).add(&Series::var(sig, 0)).unwrap()
    }

    #[test]
    fn root_of_one_is_one() {
        let sig = comm(1, 0);
        for n in [2, 3, 5] {
            assert!(unit_root(&Series::one(&sig), n).unwrap().eq_to_prec(&Series::one(&sig)));
        }
    }

    #[test]
    fn square_root_of_one_plus_x() {
        let sig = Arc::new(RingSig::commutative(2, &[1], 0).unwrap().with_window(5).unwrap());
        let g = unit_root(&one_plus_x(&sig), 2).unwrap();
        let e = |k| sig.int_exp(&[k, 0]).unwrap();
        assert_eq!(g.coeff(&e(0)), q(1, 1));
        assert_eq!(g.coeff(&e(1)), q(1, 2));
        assert_eq!(g.coeff(&e(2)), q(-1, 8));
        assert_eq!(g.coeff(&e(3)), q(1, 16));
        assert_eq!(g.coeff(&e(4)), q(-5, 128));
        assert!(g.pow(2).unwrap().eq_to_prec(&one_plus_x(&sig)));
    }

    #[test]
    fn first_coefficient_is_a1_over_n() {
        let sig = comm(1, 0);
        let a1 = q(7, 3);
        let f = Series::one(&sig).add(&Series::var(&sig, 0).scalar_mul(&a1)).unwrap();
        for n in [2u64, 3, 5] {
            let g = unit_root(&f, n).unwrap();
            let expected = a1.scale(&BigRational::new(1.into(), BigInt::from(n)));
            assert_eq!(g.coeff(&sig.unit_exp(0)), expected);
        }
    }

    #[test]
    fn unit_root_rejects_non_units() {
        let sig = comm(1, 0);
        let two = Series::constant(&sig, 2.into());
        assert_eq!(unit_root(&two, 2).unwrap_err(), Error::NotAOneUnit);
        assert_eq!(unit_root(&Series::var(&sig, 0), 2).unwrap_err(), Error::NotAOneUnit);
        let twisted = Arc::new(RingSig::twisted(2, &[2]).unwrap());
        let f = Series::one(&twisted).add(&Series::var(&twisted, 0)).unwrap().add(&Series::var(&twisted, 1)).unwrap();
        assert_eq!(unit_root(&f, 2).unwrap_err(), Error::TwistObstruction);
    }

    #[test]
    fn unit_root_in_twisted_commuting_support() {
        // x1^2 is central when n = 2, so 1 + x1^2 generates a commutative subring
        let sig = Arc::new(RingSig::twisted(2, &[2]).unwrap().with_window(8).unwrap());
        let f = Series::one(&sig).add(&Series::var(&sig, 1).pow(2).unwrap()).unwrap();
        let g = unit_root(&f, 2).unwrap();
        assert!(g.pow(2).unwrap().eq_to_prec(&f));
    }

    #[test]
    fn monomial_root_examples() {
        let sig = Arc::new(RingSig::twisted(2, &[2]).unwrap());
        let (c, e) = monomial_root(&sig, &CycloNum::one(), &sig.int_exp(&[2, 0]).unwrap(), 2).unwrap();
        assert!(c.is_one());
        assert_eq!(e, sig.int_exp(&[1, 0]).unwrap());

        let (c, e) = monomial_root(&sig, &CycloNum::from_int(-1), &sig.zero_exp(), 2).unwrap();
        assert_eq!(c.order(), 4);
        assert_eq!(c, CycloNum::omega(4));
        assert!(e.is_zero());

        let com = comm(1, 2);
        let half = com.exp_from(&[1, 0], 1).unwrap();
        let (c, e) = monomial_root(&com, &CycloNum::one(), &half, 2).unwrap();
        assert!(c.is_one());
        assert_eq!(e, com.exp_from(&[1, 0], 2).unwrap());
    }

    #[test]
    fn monomial_root_accounts_for_self_phase() {
        // (x1 y1)^2 = w^{-1} x1^2 y1^2 in n = 4, so the root of x1^2 y1^2
        // needs a compensating constant
        let sig = Arc::new(RingSig::twisted(2, &[4]).unwrap());
        let target = sig.int_exp(&[2, 2]).unwrap();
        let (c, e) = monomial_root(&sig, &CycloNum::one(), &target, 2).unwrap();
        let m = Series::monomial(&sig, c, e);
        assert_eq!(m.pow(2).unwrap(), Series::monomial(&sig, CycloNum::one(), target));
    }

    #[test]
    fn general_root_examples() {
        let sig = comm(1, 0);
        let f = Series::var(&sig, 0).pow(2).unwrap().scalar_mul(&4.into());
        let r = general_root(&f, 2).unwrap();
        assert_eq!(r, Series::var(&sig, 0).scalar_mul(&2.into()));

        let g = Series::var(&sig, 0).pow(2).unwrap().mul(&one_plus_x(&sig)).unwrap();
        let cube = g.pow(3).unwrap();
        assert!(general_root(&cube, 3).unwrap().eq_to_prec(&g));

        let tw = Arc::new(RingSig::twisted(2, &[2]).unwrap());
        assert_eq!(general_root(&Series::var(&tw, 0), 2).unwrap_err(), Error::ExponentNotDivisible { n: 2 });
    }

    #[test]
    fn tower_examples() {
        let sig = comm(1, 2);
        let a = Series::monomial(&sig, CycloNum::one(), sig.exp_from(&[1, 0], 1).unwrap());
        let r = tower_pth_root(&a).unwrap();
        assert_eq!(r, Series::monomial(&sig, CycloNum::one(), sig.exp_from(&[1, 0], 2).unwrap()));

        let r = tower_pth_root(&one_plus_x(&sig)).unwrap();
        assert!(r.eq_to_prec(&unit_root(&one_plus_x(&sig), 2).unwrap()));

        let sig2 = Arc::new(RingSig::commutative(2, &[1, 1], 1).unwrap().with_window(6).unwrap());
        let x2 = Series::var(&sig2, 2);
        let a = x2.mul(&one_plus_x(&sig2)).unwrap();
        let r = tower_pth_root(&a).unwrap();
        let half_x2 = Series::monomial(&sig2, CycloNum::one(), sig2.exp_from(&[0, 0, 1, 0], 1).unwrap());
        let expected = half_x2.mul(&unit_root(&one_plus_x(&sig2), 2).unwrap()).unwrap();
        assert!(r.eq_to_prec(&expected));
        assert!(r.pow(2).unwrap().eq_to_prec(&a));
    }

    #[test]
    fn tower_needs_headroom() {
        let sig = comm(1, 1);
        let a = Series::monomial(&sig, CycloNum::one(), sig.exp_from(&[1, 0], 1).unwrap());
        assert_eq!(tower_pth_root(&a).unwrap_err(), Error::DenominatorCapExceeded { cap: 1 });
        let c = Series::constant(&sig, &CycloNum::one() + &CycloNum::omega(4));
        assert!(matches!(tower_pth_root(&c), Err(Error::RootNotInField { .. })));
    }
}
