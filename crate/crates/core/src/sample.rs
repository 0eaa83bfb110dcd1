//! Seeded generators for coefficients and series, shared by the report,
//! the command line tool and the test suites.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclo::CycloNum;
use crate::exponents::{ExponentVec, RingSig};
use crate::series::{Precision, Series};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    let num = *[-5i64, -4, -3, -2, -1, 1, 2, 3, 4, 5].choose(rng).unwrap();
    let den: i64 = rng.gen_range(1..=3);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Nonzero element of `Q(w_m)`: one or two terms `q * w_m^j`.
pub fn coeff<R: Rng>(rng: &mut R, m: u64) -> CycloNum {
    loop {
        let mut c = CycloNum::zero();
        for _ in 0..rng.gen_range(1..=2) {
            let j = rng.gen_range(0..m as i64);
            c = &c + &CycloNum::omega_pow(m, j).scale(&small_rational(rng));
        }
        if !c.is_zero() {
            return c;
        }
    }
}

/// `q^n * w_m^j`, always admitting an `n`-th root in `Q(w_{nm})`.
pub fn rootable_coeff<R: Rng>(rng: &mut R, m: u64, n: u64) -> CycloNum {
    let q = small_rational(rng);
    let j = rng.gen_range(0..m as i64);
    CycloNum::omega_pow(m, j).scale(&num_traits::pow(q, n as usize))
}

fn int_exp<R: Rng>(rng: &mut R, sig: &RingSig, range: i64, step: i64) -> ExponentVec {
    let nums: Vec<i64> = (0..sig.coords()).map(|_| step * rng.gen_range(-range..=range)).collect();
    sig.int_exp(&nums).expect("sample range must fit the window")
}

/// Exact nonzero series with `1..=max_terms` terms, integer exponents in
/// `[-range, range]` on every coordinate.
pub fn series<R: Rng>(rng: &mut R, sig: &Arc<RingSig>, max_terms: usize, range: i64) -> Series {
    loop {
        let n = rng.gen_range(1..=max_terms);
        let terms: Vec<_> = (0..n).map(|_| (int_exp(rng, sig, range, 1), coeff(rng, sig.m()))).collect();
        let s = Series::from_terms(sig, terms, Precision::Exact).unwrap();
        if !s.is_empty() {
            return s;
        }
    }
}

/// `1 + (up to max_terms - 1 terms of positive valuation)`.
pub fn unit_series<R: Rng>(rng: &mut R, sig: &Arc<RingSig>, max_terms: usize, range: i64) -> Series {
    let mut terms = vec![(sig.zero_exp(), CycloNum::one())];
    let extra = rng.gen_range(0..max_terms.max(1));
    while terms.len() <= extra {
        let e = int_exp(rng, sig, range, 1);
        if e.is_positive() {
            terms.push((e, coeff(rng, sig.m())));
        }
    }
    Series::from_terms(sig, terms, Precision::Exact).unwrap()
}

/// Element of the commutative tower over the x-variables.
///
/// The outermost variable's lowest level holds `lead_terms` terms, the first
/// of which is lex-leading and carries a coefficient with an oracle `p`-th
/// root; up to `max_terms` further terms sit at higher levels.
pub fn tower_element<R: Rng>(
    rng: &mut R,
    sig: &Arc<RingSig>,
    lead_terms: usize,
    max_terms: usize,
    range: i64,
) -> Series {
    let r = sig.rank();
    let level = sig.denom_cap().saturating_sub(1);
    let step = sig.p().pow(sig.denom_cap() - level) as i64;
    let x = |nums: &[i64]| {
        let mut v = vec![0; sig.coords()];
        for (i, n) in nums.iter().enumerate() {
            v[2 * i] = *n;
        }
        sig.exp_from(&v, sig.denom_cap()).unwrap()
    };
    let lead: Vec<i64> = (0..r).map(|_| step * rng.gen_range(-range..=range)).collect();
    let mut terms = vec![(x(&lead), rootable_coeff(rng, 1, sig.p()))];
    for _ in 1..lead_terms.max(1) {
        let mut e = lead.clone();
        if r > 1 {
            e[0] += step * rng.gen_range(1..=range.max(1));
        }
        terms.push((x(&e), coeff(rng, sig.m())));
    }
    for _ in 0..rng.gen_range(0..=max_terms) {
        let mut e: Vec<i64> = (0..r).map(|_| step * rng.gen_range(-range..=range)).collect();
        e[r - 1] = lead[r - 1] + step * rng.gen_range(1..=range.max(1));
        terms.push((x(&e), coeff(rng, sig.m())));
    }
    Series::from_terms(sig, terms, Precision::Exact).unwrap()
}
