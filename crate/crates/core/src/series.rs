//! Truncated twisted Laurent series.
//!
//! A [`Series`] is a finite table of normal-ordered monomials `X^a` with
//! cyclotomic coefficients plus a [`Precision`]: every term that is *not*
//! stored has weight at least the cutoff. Weights are the big-radix weights
//! of [`RingSig::weight`], so inside the window the cutoff is a lexicographic
//! cutoff. Products that would produce a term outside the window lower the
//! precision to that term's weight instead of storing it, so a stored
//! coefficient is always the true coefficient.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::exponents::{ExponentVec, RingSig};

/// Truncation descriptor: `Below(w)` means all omitted terms have weight `>= w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Precision {
    Below(i128),
    Exact,
}

impl Precision {
    pub fn shift(self, by: i128) -> Precision {
        match self {
            Precision::Below(w) => Precision::Below(w + by),
            Precision::Exact => Precision::Exact,
        }
    }

    /// Whether a term of weight `w` is inside the known region.
    pub fn admits(self, w: i128) -> bool {
        match self {
            Precision::Below(cut) => w < cut,
            Precision::Exact => true,
        }
    }

    pub fn cutoff(self) -> Option<i128> {
        match self {
            Precision::Below(w) => Some(w),
            Precision::Exact => None,
        }
    }
}

#[derive(Clone)]
pub struct Series {
    sig: Arc<RingSig>,
    terms: BTreeMap<ExponentVec, CycloNum>,
    prec: Precision,
}

/// `f = c * X^alpha * (1 + d)` with `alpha = v(f)` and `v(d) > 0`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub coeff: CycloNum,
    pub exponent: ExponentVec,
    pub tail: Series,
}

impl Series {
    pub fn zero(sig: &Arc<RingSig>) -> Series {
        Series { sig: Arc::clone(sig), terms: BTreeMap::new(), prec: Precision::Exact }
    }

    pub fn one(sig: &Arc<RingSig>) -> Series {
        Series::constant(sig, CycloNum::one())
    }

    pub fn constant(sig: &Arc<RingSig>, c: CycloNum) -> Series {
        Series::monomial(sig, c, sig.zero_exp())
    }

    /// `c * X^e`; `e` must already satisfy the window.
    pub fn monomial(sig: &Arc<RingSig>, c: CycloNum, e: ExponentVec) -> Series {
        debug_assert!(sig.in_window(&e));
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Series { sig: Arc::clone(sig), terms, prec: Precision::Exact }
    }

    /// The generator for coordinate `k` (`x1, y1, x2, ...`).
    pub fn var(sig: &Arc<RingSig>, k: usize) -> Series {
        Series::monomial(sig, CycloNum::one(), sig.unit_exp(k))
    }

    /// Collects terms (merging duplicates, dropping zeros and anything the
    /// precision does not admit).
    pub fn from_terms(
        sig: &Arc<RingSig>,
        terms: impl IntoIterator<Item = (ExponentVec, CycloNum)>,
        prec: Precision,
    ) -> Result<Series> {
        let mut acc: BTreeMap<ExponentVec, CycloNum> = BTreeMap::new();
        for (e, c) in terms {
            sig.check_window(&e)?;
            if !prec.admits(sig.weight(&e)) {
                continue;
            }
            match acc.get_mut(&e) {
                Some(slot) => *slot = &*slot + &c,
                None => {
                    acc.insert(e, c);
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Series { sig: Arc::clone(sig), terms: acc, prec })
    }

    pub fn sig(&self) -> &Arc<RingSig> {
        &self.sig
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVec, CycloNum> {
        &self.terms
    }

    pub fn prec(&self) -> Precision {
        self.prec
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// No known terms (the exact zero, or something vanishing to precision).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The exact zero element.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.prec == Precision::Exact
    }

    pub fn is_exact(&self) -> bool {
        self.prec == Precision::Exact
    }

    pub fn coeff(&self, e: &ExponentVec) -> CycloNum {
        self.terms.get(e).cloned().unwrap_or_else(CycloNum::zero)
    }

    /// Leading (lexicographically least) term.
    pub fn leading(&self) -> Option<(&ExponentVec, &CycloNum)> {
        self.terms.iter().next()
    }

    /// Single stored term and exact: `c * X^e`.
    pub fn as_monomial(&self) -> Option<(&CycloNum, &ExponentVec)> {
        if self.is_exact() && self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (c, e))
        } else {
            None
        }
    }

    /// The constant value, when the series is an exact constant.
    pub fn as_constant(&self) -> Option<CycloNum> {
        if self.is_zero() {
            return Some(CycloNum::zero());
        }
        self.as_monomial().filter(|(_, e)| e.is_zero()).map(|(c, _)| c.clone())
    }

    /// Drops every term the given precision does not admit.
    pub fn truncate(mut self, prec: Precision) -> Series {
        let prec = self.prec.min(prec);
        if let Some(cut) = prec.cutoff() {
            let sig = Arc::clone(&self.sig);
            self.terms.retain(|e, _| sig.weight(e) < cut);
        }
        self.prec = prec;
        self
    }

    fn check_sig(&self, other: &Series) -> Result<()> {
        if Arc::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    fn low_weight(&self) -> Option<i128> {
        self.terms.keys().next().map(|e| self.sig.weight(e))
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_sig(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.get_mut(e) {
                Some(slot) => *slot = &*slot + c,
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        let out = Series { sig: Arc::clone(&self.sig), terms, prec: self.prec };
        Ok(out.truncate(other.prec))
    }

    pub fn neg(&self) -> Series {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        Series { sig: Arc::clone(&self.sig), terms, prec: self.prec }
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: &CycloNum) -> Series {
        if c.is_zero() {
            return Series::zero(&self.sig);
        }
        let terms = self.terms.iter().map(|(e, a)| (e.clone(), c * a)).collect();
        Series { sig: Arc::clone(&self.sig), terms, prec: self.prec }
    }

    /// Twisted convolution `c_g = sum_{a+b=g} phase(a,b) f_a g_b`.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_sig(other)?;
        let sig = &self.sig;
        if self.is_zero() || other.is_zero() {
            return Ok(Series::zero(sig));
        }
        let (lf, lg) = (self.low_weight(), other.low_weight());
        let low_f = lf.or(self.prec.cutoff()).expect("non-exact empty series");
        let low_g = lg.or(other.prec.cutoff()).expect("non-exact empty series");
        let mut prec = self.prec.shift(low_g).min(other.prec.shift(low_f));
        let both_exact = self.is_exact() && other.is_exact();

        let mut acc: HashMap<ExponentVec, CycloNum> = HashMap::new();
        let g_terms: Vec<(i128, &ExponentVec, &CycloNum)> =
            other.terms.iter().map(|(e, c)| (sig.weight(e), e, c)).collect();
        for (a, ca) in &self.terms {
            let wa = sig.weight(a);
            if !prec.admits(wa + low_g) {
                break;
            }
            for &(wb, b, cb) in &g_terms {
                let w = wa + wb;
                if !prec.admits(w) {
                    break;
                }
                let gamma = a.add(b);
                if !sig.in_window(&gamma) {
                    if both_exact {
                        // an exact product that cannot be stored
                        return Err(Error::WindowExceeded { window: sig.window() });
                    }
                    prec = prec.min(Precision::Below(w));
                    break;
                }
                let mut c = ca * cb;
                let e = sig.phase_exp(a, b);
                if e != 0 {
                    c = &c * sig.omega_pow(e);
                }
                match acc.get_mut(&gamma) {
                    Some(slot) => *slot = &*slot + &c,
                    None => {
                        acc.insert(gamma, c);
                    }
                }
            }
        }
        let terms: BTreeMap<ExponentVec, CycloNum> =
            acc.into_iter().filter(|(e, c)| !c.is_zero() && prec.admits(sig.weight(e))).collect();
        Ok(Series { sig: Arc::clone(sig), terms, prec })
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Series> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = Series::one(&self.sig);
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Lexicographic minimum of the support.
    pub fn val(&self) -> Result<ExponentVec> {
        self.leading().map(|(e, _)| e.clone()).ok_or(Error::ZeroValuation)
    }

    /// `(c X^a)^{-1} = c^{-1} phase(-a,a)^{-1} X^{-a}`.
    pub fn monomial_inverse(sig: &Arc<RingSig>, c: &CycloNum, a: &ExponentVec) -> Result<Series> {
        let neg = a.neg();
        let twist = sig.omega_pow(-sig.phase_exp(&neg, a));
        Ok(Series::monomial(sig, &c.inv()? * twist, neg))
    }

    pub fn decompose(&self) -> Result<Decomposition> {
        let (alpha, c) = self.leading().ok_or(Error::ZeroValuation)?;
        let lead_inv = Series::monomial_inverse(&self.sig, c, alpha)?;
        let unit = lead_inv.mul(self)?;
        let tail = unit.sub(&Series::one(&self.sig))?;
        Ok(Decomposition { coeff: c.clone(), exponent: alpha.clone(), tail })
    }

    /// Inverse via the geometric series of the `1 + d` factor.
    pub fn inv(&self) -> Result<Series> {
        if self.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let Decomposition { coeff, exponent, tail } = self.decompose()?;
        let lead_inv = Series::monomial_inverse(&self.sig, &coeff, &exponent)?;
        let unit_inv = geometric_inverse(&tail)?;
        unit_inv.mul(&lead_inv)
    }

    /// Coefficientwise equality below the smaller of the two cutoffs.
    pub fn eq_to_prec(&self, other: &Series) -> bool {
        if self.check_sig(other).is_err() {
            return false;
        }
        let prec = self.prec.min(other.prec);
        let known = |s: &Series| -> Vec<(ExponentVec, CycloNum)> {
            s.terms
                .iter()
                .filter(|(e, _)| prec.admits(self.sig.weight(e)))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect()
        };
        known(self) == known(other)
    }

    /// Commutes with every generator `x_i^{+-1}`, `y_i^{+-1}` (to precision).
    pub fn is_central(&self) -> Result<bool> {
        if !self.sig.is_twisted() {
            return Ok(true);
        }
        for k in 0..self.sig.coords() {
            for gen in [self.sig.unit_exp(k), self.sig.unit_exp(k).neg()] {
                let g = Series::monomial(&self.sig, CycloNum::one(), gen);
                if !g.mul(self)?.eq_to_prec(&self.mul(&g)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Canonical text: ascending exponents, `coeff*monomial`.
    pub fn format(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in &self.terms {
            let (neg, body) = self.coeff_text(c);
            let mono = self.sig.format_monomial(e);
            let term = match (body.as_str(), mono.as_str()) {
                (_, "1") => body.clone(),
                ("1", _) => mono,
                _ => format!("{body}*{mono}"),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }

    /// Sign and magnitude text of a coefficient; `w` is `w_m` of the ring,
    /// `w<k>` a primitive `k`-th root for coefficients outside `Q(w_m)`.
    fn coeff_text(&self, c: &CycloNum) -> (bool, String) {
        if let Some(q) = c.as_rational() {
            return (q.is_negative(), q.abs().to_string());
        }
        let m = self.sig.m();
        let text = match c.embed(m) {
            Ok(lifted) if m.is_multiple_of(c.order()) => lifted.format_with("w"),
            _ => c.format_with(&format!("w{}", c.order())),
        };
        let single = match c.embed(m) {
            Ok(lifted) if m.is_multiple_of(c.order()) => lifted.term_count() == 1,
            _ => c.term_count() == 1,
        };
        if single {
            match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            }
        } else {
            (false, format!("({text})"))
        }
    }
}

/// `(1 + d)^{-1} = sum_k (-d)^k`, to the smaller of `d`'s precision and
/// the ring's default cutoff.
pub(crate) fn geometric_inverse(d: &Series) -> Result<Series> {
    let sig = d.sig();
    if d.is_zero() {
        return Ok(Series::one(sig));
    }
    let limit = d.prec().min(Precision::Below(sig.default_cutoff()));
    let step = d.neg().truncate(limit);
    if let Some(e) = step.terms.keys().next() {
        debug_assert!(e.is_positive());
    }
    let mut sum = Series::one(sig).truncate(limit);
    let mut power = Series::one(sig);
    loop {
        power = power.mul(&step)?.truncate(limit);
        sum = sum.add(&power)?;
        if power.is_empty() {
            return Ok(sum);
        }
    }
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.prec == other.prec && self.terms == other.terms
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series({}; {:?})", self.format(), self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn sig_2() -> Arc<RingSig> {
        Arc::new(RingSig::twisted(2, &[2]).unwrap())
    }

    fn comm() -> Arc<RingSig> {
        Arc::new(RingSig::commutative(2, &[1], 0).unwrap())
    }

    fn x(sig: &Arc<RingSig>) -> Series {
        Series::var(sig, 0)
    }

    fn y(sig: &Arc<RingSig>) -> Series {
        Series::var(sig, 1)
    }

    fn c(sig: &Arc<RingSig>, n: i64) -> Series {
        Series::constant(sig, CycloNum::from_int(n))
    }

    #[test]
    fn additive_examples() {
        let sig = sig_2();
        let f = x(&sig).add(&y(&sig)).unwrap();
        assert_eq!(f.add(&Series::zero(&sig)).unwrap(), f);
        assert!(x(&sig).add(&x(&sig).neg()).unwrap().is_zero());
        let two_f = f.scalar_mul(&CycloNum::from_int(2));
        let expected = x(&sig).scalar_mul(&2.into()).add(&y(&sig).scalar_mul(&2.into())).unwrap();
        assert_eq!(two_f, expected);
    }

    #[test]
    fn twisted_square() {
        let sig = sig_2();
        let f = x(&sig).add(&y(&sig)).unwrap();
        let sq = f.mul(&f).unwrap();
        let expected = x(&sig).pow(2).unwrap().add(&y(&sig).pow(2).unwrap()).unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn defining_relation() {
        let sig = Arc::new(RingSig::twisted(3, &[3]).unwrap());
        let xy = x(&sig).mul(&y(&sig)).unwrap();
        let yx = y(&sig).mul(&x(&sig)).unwrap();
        assert_eq!(xy, yx.scalar_mul(sig.omega_index(0)));
    }

    #[test]
    fn commutative_product() {
        let sig = comm();
        let a = c(&sig, 1).add(&x(&sig)).unwrap();
        let b = c(&sig, 1).sub(&x(&sig)).unwrap();
        let expected = c(&sig, 1).sub(&x(&sig).pow(2).unwrap()).unwrap();
        assert_eq!(a.mul(&b).unwrap(), expected);
    }

    #[test]
    fn valuation_examples() {
        let sig = sig_2();
        let one_x = c(&sig, 1).add(&x(&sig)).unwrap();
        assert_eq!(one_x.val().unwrap(), sig.zero_exp());
        let f = x(&sig).pow(2).unwrap().add(&y(&sig)).unwrap();
        assert_eq!(f.val().unwrap(), sig.int_exp(&[2, 0]).unwrap());
        assert_eq!(x(&sig).mul(&y(&sig)).unwrap().val().unwrap(), sig.int_exp(&[1, 1]).unwrap());
        assert_eq!(Series::zero(&sig).val(), Err(Error::ZeroValuation));
    }

    #[test]
    fn decompose_examples() {
        let sig = sig_2();
        let d = Series::one(&sig).decompose().unwrap();
        assert!(d.coeff.is_one() && d.exponent.is_zero() && d.tail.is_zero());

        // 3x^2(1+y) = 3x^2 + 3x^2 y
        let f = c(&sig, 3).mul(&x(&sig).pow(2).unwrap()).unwrap().mul(&c(&sig, 1).add(&y(&sig)).unwrap()).unwrap();
        let d = f.decompose().unwrap();
        assert_eq!(d.coeff, CycloNum::from_int(3));
        assert_eq!(d.exponent, sig.int_exp(&[2, 0]).unwrap());
        let back = Series::monomial(&sig, d.coeff.clone(), d.exponent.clone())
            .mul(&Series::one(&sig).add(&d.tail).unwrap())
            .unwrap();
        assert_eq!(back, f);
        assert!(d.tail.val().unwrap().is_positive());

        let w = Series::constant(&sig, CycloNum::omega(2));
        let g = w.mul(&c(&sig, 1).add(&x(&sig)).unwrap()).unwrap();
        let d = g.decompose().unwrap();
        assert_eq!(d.coeff, CycloNum::omega(2));
        assert_eq!(d.tail, x(&sig));
    }

    #[test]
    fn geometric_inverse_of_one_minus_x() {
        let sig = Arc::new(RingSig::twisted(2, &[2]).unwrap().with_window(8).unwrap());
        let f = c(&sig, 1).sub(&x(&sig)).unwrap();
        let g = f.inv().unwrap();
        // 1 + x + ... + x^8, then x^9 leaves the window
        assert_eq!(g.len(), 9);
        assert!(g.terms().values().all(CycloNum::is_one));
        assert_eq!(g.prec(), Precision::Below(9));
        assert!(f.mul(&g).unwrap().eq_to_prec(&Series::one(&sig)));
        assert!(g.mul(&f).unwrap().eq_to_prec(&Series::one(&sig)));
    }

    #[test]
    fn inverse_of_monomials_and_commutator() {
        let sig = sig_2();
        let xi = x(&sig).inv().unwrap();
        assert!(xi.is_exact());
        assert_eq!(xi.val().unwrap(), sig.int_exp(&[-1, 0]).unwrap());
        let comm = x(&sig).mul(&y(&sig)).unwrap().mul(&xi).unwrap().mul(&y(&sig).inv().unwrap()).unwrap();
        assert_eq!(comm, Series::constant(&sig, CycloNum::from_int(-1)));
    }

    #[test]
    fn inverse_across_levels() {
        // 1 - x^{-1} y: every power x^{-k} y^k sits on a new level of y
        let sig = Arc::new(RingSig::twisted(2, &[2]).unwrap().with_window(6).unwrap());
        let t = Series::monomial(&sig, CycloNum::one(), sig.int_exp(&[-1, 1]).unwrap());
        let f = c(&sig, 1).sub(&t).unwrap();
        let g = f.inv().unwrap();
        // x^{-k} y^k for k = 0..4 lie below the default cutoff y^4
        assert_eq!(g.len(), 5);
        assert!(f.mul(&g).unwrap().eq_to_prec(&Series::one(&sig)));
        assert!(g.mul(&f).unwrap().eq_to_prec(&Series::one(&sig)));
    }

    #[test]
    fn eq_to_prec_examples() {
        let sig = comm();
        let f = c(&sig, 1).add(&x(&sig)).unwrap();
        assert!(f.eq_to_prec(&f));
        let g = f.add(&x(&sig).pow(5).unwrap()).unwrap().truncate(Precision::Below(5));
        assert!(f.eq_to_prec(&g));
        assert!(!x(&sig).eq_to_prec(&y(&sig)));
    }

    #[test]
    fn centrality() {
        let sig = Arc::new(RingSig::twisted(3, &[3]).unwrap());
        assert!(x(&sig).pow(3).unwrap().is_central().unwrap());
        assert!(!x(&sig).is_central().unwrap());
        assert!(Series::one(&sig).is_central().unwrap());
    }

    #[test]
    fn leading_product_outside_window_is_an_error() {
        let sig = Arc::new(RingSig::twisted(2, &[2]).unwrap().with_window(3).unwrap());
        let a = Series::monomial(&sig, CycloNum::one(), sig.int_exp(&[-3, 0]).unwrap());
        assert_eq!(a.mul(&a), Err(Error::WindowExceeded { window: 3 }));
    }

    #[test]
    fn formatting() {
        let sig = sig_2();
        assert_eq!(Series::zero(&sig).format(), "0");
        assert_eq!(x(&sig).add(&c(&sig, 1)).unwrap().format(), "1 + x1");
        let half = CycloNum::from_rational(BigRational::new(1.into(), 2.into()));
        let f = Series::monomial(&sig, half.clone(), sig.int_exp(&[1, 0]).unwrap()).sub(&y(&sig)).unwrap();
        assert_eq!(f.format(), "1/2*x1 - y1");
        let sig4 = Arc::new(RingSig::twisted(2, &[4]).unwrap());
        let g = Series::constant(&sig4, &CycloNum::omega(4) + &CycloNum::one())
            .sub(&Series::monomial(&sig4, CycloNum::omega(4), sig4.unit_exp(0)))
            .unwrap();
        assert_eq!(g.format(), "(w + 1) - w*x1");
        let h = Series::constant(&sig, CycloNum::omega(8));
        assert_eq!(h.format(), "w8");
    }
}
