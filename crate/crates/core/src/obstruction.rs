//! Commutator and Kummer-class witnesses.
//!
//! In `Delta = k((x1, y1, ..., xr, yr))` every commutator `f g f^-1 g^-1` has
//! valuation zero and leading coefficient a power of `w_m`; a unit whose
//! leading coefficient is a primitive `p^2`-th root of unity is therefore never
//! such a commutator when `m = p`. For the commutative field
//! `k((x^q, y^q))`, `q = p^n`, the class of an element modulo `q`-th powers is
//! read off its leading exponent, with the unit part certified as a `q`-th
//! power by an explicit witness.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use serde::Serialize;

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::exponents::RingSig;
use crate::roots::unit_root;
use crate::sample;
use crate::series::Series;

/// `f g f^-1 g^-1`.
pub fn commutator(f: &Series, g: &Series) -> Result<Series> {
    f.mul(g)?.mul(&f.inv()?)?.mul(&g.inv()?)
}

/// Whether `f` lies in `<w_m> (1 + M)`: valuation zero and a root of unity of
/// order dividing `m` as leading coefficient.
pub fn in_omega_one_plus_m(f: &Series) -> Result<bool> {
    let (e, c) = f.leading().ok_or(Error::ZeroValuation)?;
    Ok(e.is_zero() && c.log_in(f.sig().m()).is_some())
}

/// Outcome of inspecting one commutator.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorCheck {
    pub commutator: Series,
    pub valuation_zero: bool,
    /// `j` with leading coefficient `w_m^j`.
    pub log: Option<u64>,
    /// The commutator equals its leading coefficient to known precision.
    pub constant: bool,
}

impl CommutatorCheck {
    pub fn holds(&self) -> bool {
        self.valuation_zero && self.log.is_some()
    }
}

pub fn commutator_class_check(f: &Series, g: &Series) -> Result<CommutatorCheck> {
    let c = commutator(f, g)?;
    let (e, lead) = c.leading().ok_or(Error::ZeroValuation)?;
    let valuation_zero = e.is_zero();
    let log = lead.log_in(c.sig().m());
    let constant = c.len() == 1 && valuation_zero;
    Ok(CommutatorCheck { commutator: c, valuation_zero, log, constant })
}

/// What became of the unit part of an element in the Kummer map.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitDisposition {
    /// The unit part is a `q`-th power; `witness^q` was checked against it.
    Trivial {
        witness: Series,
    },
    OracleFailed {
        reason: String,
    },
}

/// Image of an element of `k((x^q, y^q))^*` in `(Z/q)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct KummerClass {
    pub modulus: u64,
    pub class: (u64, u64),
    /// Full exponent quotient `(r, s)` of the leading monomial.
    pub quotient: (i64, i64),
    pub disposition: UnitDisposition,
}

impl KummerClass {
    pub fn is_trivial(&self) -> bool {
        self.class == (0, 0) && matches!(self.disposition, UnitDisposition::Trivial { .. })
    }
}

/// Class of `a` modulo `p^n`-th powers in the field generated by
/// `x1^(p^n), y1^(p^n)` inside a commutative signature.
pub fn kummer_class(a: &Series, n: u32) -> Result<KummerClass> {
    let sig = a.sig();
    if sig.is_twisted() {
        return Err(Error::NotInCenter);
    }
    let p = sig.p();
    let q = p.pow(n);
    let qi = q as i64;
    for e in a.terms().keys() {
        let ints = sig.coords_int(e).ok_or(Error::NotInCenter)?;
        if ints[2..].iter().any(|&v| v != 0) || ints[..2].iter().any(|v| v % qi != 0) {
            return Err(Error::NotInCenter);
        }
    }
    let dec = a.decompose()?;
    let lead = sig.coords_int(&dec.exponent).ok_or(Error::NotInCenter)?;
    let (r, s) = (lead[0] / qi, lead[1] / qi);
    let class = (r.rem_euclid(qi) as u64, s.rem_euclid(qi) as u64);
    let unit = Series::one(sig).add(&dec.tail)?;
    let disposition = match unit_witness(&dec.coeff, &unit, p, n) {
        Ok(witness) => {
            let target = unit.scalar_mul(&dec.coeff);
            let back = witness.pow(q as i64)?;
            if !back.eq_to_prec(&target) {
                UnitDisposition::OracleFailed { reason: "witness does not reproduce the unit".into() }
            } else if target.terms().keys().any(|e| !back.prec().admits(sig.weight(e))) {
                UnitDisposition::OracleFailed { reason: "precision too low to verify the witness".into() }
            } else {
                UnitDisposition::Trivial { witness }
            }
        }
        Err(e) => UnitDisposition::OracleFailed { reason: e.to_string() },
    };
    Ok(KummerClass { modulus: q, class, quotient: (r, s), disposition })
}

fn unit_witness(c: &CycloNum, unit: &Series, p: u64, n: u32) -> Result<Series> {
    let mut c = c.clone();
    let mut u = unit.clone();
    for _ in 0..n {
        c = c.const_root(p)?;
        u = unit_root(&u, p)?;
    }
    Ok(u.scalar_mul(&c))
}

/// One titled block of the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub name: String,
    pub passed: bool,
    pub lines: Vec<String>,
}

/// Deterministic summary of the commutator and Kummer witnesses for a prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub p: u64,
    pub r: usize,
    pub seed: u64,
    pub samples: usize,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(|s| s.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "obstruction report p={} r={} seed={} samples={}", self.p, self.r, self.seed, self.samples)?;
        for s in &self.sections {
            writeln!(f, "[{}] {}", if s.passed { "ok" } else { "FAIL" }, s.name)?;
            for line in &s.lines {
                writeln!(f, "  {line}")?;
            }
        }
        write!(f, "result: {}", if self.passed() { "pass" } else { "fail" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportConfig {
    pub p: u64,
    /// Number of generator pairs, and the Kummer exponent `n` in `q = p^n`.
    pub r: usize,
    pub seed: u64,
    pub samples: usize,
}

impl ReportConfig {
    pub fn new(p: u64, seed: u64) -> Self {
        ReportConfig { p, r: 1, seed, samples: 8 }
    }
}

pub fn obstruction_report(cfg: &ReportConfig) -> Result<Report> {
    let mut rng = sample::rng(cfg.seed);
    let twisted = Arc::new(RingSig::twisted(cfg.p, &vec![cfg.p; cfg.r])?.with_window(6)?.with_precision(2)?);
    let sections = vec![
        commutator_battery(&twisted, cfg.samples, &mut rng)?,
        root_of_unity_section(&twisted)?,
        kummer_section(cfg, &mut rng)?,
    ];
    Ok(Report { p: cfg.p, r: cfg.r, seed: cfg.seed, samples: cfg.samples, sections })
}

/// Commutator battery and root-of-unity membership in a given twisted ring.
pub fn commutator_report(sig: &Arc<RingSig>, seed: u64, samples: usize) -> Result<Report> {
    if !sig.is_twisted() {
        return Err(Error::InvalidSignature("commutator checks need a twisted signature".into()));
    }
    let mut rng = sample::rng(seed);
    let sections = vec![commutator_battery(sig, samples, &mut rng)?, root_of_unity_section(sig)?];
    Ok(Report { p: sig.p(), r: sig.rank(), seed, samples, sections })
}

/// Kummer generators, reduction to the trivial class, and additivity.
pub fn kummer_report(cfg: &ReportConfig) -> Result<Report> {
    let mut rng = sample::rng(cfg.seed);
    let sections = vec![kummer_section(cfg, &mut rng)?];
    Ok(Report { p: cfg.p, r: cfg.r, seed: cfg.seed, samples: cfg.samples, sections })
}

fn commutator_battery(sig: &Arc<RingSig>, samples: usize, rng: &mut sample::SampleRng) -> Result<Section> {
    let mut lines = Vec::new();
    let mut passed = true;
    for i in 0..sig.rank() {
        let (x, y) = (Series::var(sig, 2 * i), Series::var(sig, 2 * i + 1));
        let c = commutator_class_check(&x, &y)?;
        let ok = c.holds() && c.constant && c.commutator.as_constant() == Some(sig.omega_index(i).clone());
        passed &= ok;
        lines.push(format!("[x{0}, y{0}] = {1}", i + 1, c.commutator.format()));
    }
    let mut logs = Vec::new();
    for _ in 0..samples {
        let f = sample::series(rng, sig, 3, 1);
        let g = sample::series(rng, sig, 3, 1);
        let c = commutator_class_check(&f, &g)?;
        passed &= c.holds();
        logs.push(c.log.map_or("-".to_string(), |l| l.to_string()));
    }
    lines.push(format!("random pairs: {samples}, leading logs: {}", logs.join(" ")));
    Ok(Section { name: "commutators lie in <w_m>(1+M)".into(), passed, lines })
}

fn root_of_unity_section(sig: &Arc<RingSig>) -> Result<Section> {
    let p = sig.p();
    let deep = Series::constant(sig, CycloNum::omega(p * p));
    let shallow = Series::constant(sig, CycloNum::omega(p));
    let deep_in = in_omega_one_plus_m(&deep)?;
    let shallow_in = in_omega_one_plus_m(&shallow)?;
    Ok(Section {
        name: format!("w_{} outside <w_m>(1+M)", p * p),
        passed: !deep_in && shallow_in,
        lines: vec![
            format!("m = {}", sig.m()),
            format!("w{} in <w_m>(1+M): {deep_in}", p * p),
            format!("w{p} in <w_m>(1+M): {shallow_in}"),
        ],
    })
}

fn kummer_section(cfg: &ReportConfig, rng: &mut sample::SampleRng) -> Result<Section> {
    let n = cfg.r as u32;
    let q = cfg.p.pow(n) as i64;
    let sig = Arc::new(RingSig::commutative(cfg.p, &[1], 0)?.with_window(8 * q)?.with_precision(3 * q as u32)?);
    let mut lines = Vec::new();
    let mut passed = true;
    for (k, label) in [(0usize, "x1"), (1, "y1")] {
        let mut e = vec![0; sig.coords()];
        e[k] = q;
        let a = Series::monomial(&sig, CycloNum::one(), sig.int_exp(&e)?);
        let kc = kummer_class(&a, n)?;
        let expected = if k == 0 { (1, 0) } else { (0, 1) };
        passed &= kc.class == expected;
        lines.push(format!("class({label}^{q}) = ({}, {})", kc.class.0, kc.class.1));
    }
    let mut trivial = 0;
    for _ in 0..cfg.samples {
        let a = kummer_sample(&sig, q, rng);
        let kc = kummer_class(&a, n)?;
        let (r, s) = kc.quotient;
        let reducer = Series::monomial(&sig, CycloNum::one(), sig.int_exp(&[-r * q, -s * q])?);
        let reduced = a.mul(&reducer)?;
        let rc = kummer_class(&reduced, n)?;
        if rc.is_trivial() {
            trivial += 1;
        } else {
            passed = false;
        }
        lines.push(format!("class = ({}, {})", kc.class.0, kc.class.1));
    }
    lines.push(format!("reduced samples with verified witnesses: {trivial}/{}", cfg.samples));
    let mut additive = 0;
    for _ in 0..cfg.samples {
        let a = kummer_sample(&sig, q, rng);
        let b = kummer_sample(&sig, q, rng);
        let (ka, kb) = (kummer_class(&a, n)?, kummer_class(&b, n)?);
        let kab = kummer_class(&a.mul(&b)?, n)?;
        let qu = q as u64;
        if kab.class == ((ka.class.0 + kb.class.0) % qu, (ka.class.1 + kb.class.1) % qu) {
            additive += 1;
        } else {
            passed = false;
        }
    }
    lines.push(format!("class(ab) = class(a) + class(b): {additive}/{}", cfg.samples));
    Ok(Section { name: format!("Kummer classes, q = {q}"), passed, lines })
}

/// Element of `k((x^q, y^q))` whose unit part is a `q`-th power in the
/// coefficient field.
pub fn kummer_sample(sig: &Arc<RingSig>, q: i64, rng: &mut sample::SampleRng) -> Series {
    use rand::Rng;
    let lead = sig.int_exp(&[q * rng.gen_range(-2..=2), q * rng.gen_range(-2..=2)]).unwrap();
    let c = sample::rootable_coeff(rng, 1, q as u64);
    let mut a = Series::monomial(sig, c, lead.clone());
    for _ in 0..rng.gen_range(0..=2) {
        let bump = sig.int_exp(&[q * rng.gen_range(-1..=1), q * rng.gen_range(1..=2)]).unwrap();
        let term = Series::monomial(sig, sample::coeff(rng, sig.m()), lead.add(&bump));
        a = a.add(&term).unwrap();
    }
    a
}

/// One-line rendering of a class for logs.
pub fn describe(kc: &KummerClass) -> String {
    let mut s = format!("({}, {}) mod {}", kc.class.0, kc.class.1, kc.modulus);
    match &kc.disposition {
        UnitDisposition::Trivial { witness } => {
            let _ = write!(s, ", unit part = ({})^{}", witness.format(), kc.modulus);
        }
        UnitDisposition::OracleFailed { reason } => {
            let _ = write!(s, ", unit part unresolved: {reason}");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tw(p: u64, idx: &[u64]) -> Arc<RingSig> {
        Arc::new(RingSig::twisted(p, idx).unwrap().with_window(6).unwrap())
    }

    #[test]
    fn generator_commutator_is_root_of_unity() {
        let sig = tw(3, &[3]);
        let c = commutator(&Series::var(&sig, 0), &Series::var(&sig, 1)).unwrap();
        assert_eq!(c.as_constant(), Some(CycloNum::omega(3)));
    }

    #[test]
    fn deep_root_of_unity_is_excluded() {
        for p in [2u64, 3] {
            let sig = tw(p, &[p, p]);
            let deep = Series::constant(&sig, CycloNum::omega(p * p));
            let shallow = Series::constant(&sig, CycloNum::omega(p));
            assert!(!in_omega_one_plus_m(&deep).unwrap());
            assert!(in_omega_one_plus_m(&shallow).unwrap());
        }
        let sig = tw(2, &[2]);
        assert!(!in_omega_one_plus_m(&Series::var(&sig, 0)).unwrap());
    }

    #[test]
    fn random_commutators_hold() {
        let sig = tw(2, &[2, 3]);
        let mut rng = sample::rng(11);
        for _ in 0..5 {
            let f = sample::series(&mut rng, &sig, 3, 1);
            let g = sample::series(&mut rng, &sig, 3, 1);
            assert!(commutator_class_check(&f, &g).unwrap().holds());
        }
    }

    #[test]
    fn kummer_generators() {
        let sig = Arc::new(RingSig::commutative(2, &[1], 0).unwrap());
        let x4 = Series::monomial(&sig, CycloNum::one(), sig.int_exp(&[4, 0]).unwrap());
        let kc = kummer_class(&x4, 2).unwrap();
        assert_eq!(kc.class, (1, 0));
        assert!(matches!(kc.disposition, UnitDisposition::Trivial { .. }));
        let x = Series::var(&sig, 0);
        assert_eq!(kummer_class(&x, 2).unwrap_err(), Error::NotInCenter);
    }

    #[test]
    fn kummer_class_of_mixed_monomial() {
        let sig =
            Arc::new(RingSig::commutative(2, &[1], 0).unwrap().with_window(16).unwrap().with_precision(6).unwrap());
        let unit =
            Series::one(&sig).add(&Series::monomial(&sig, CycloNum::one(), sig.int_exp(&[0, 4]).unwrap())).unwrap();
        let a = Series::monomial(&sig, CycloNum::one(), sig.int_exp(&[8, 4]).unwrap()).mul(&unit).unwrap();
        let kc = kummer_class(&a, 2).unwrap();
        assert_eq!(kc.class, (2, 1));
        assert!(matches!(kc.disposition, UnitDisposition::Trivial { .. }), "{}", describe(&kc));
    }

    #[test]
    fn low_precision_witness_is_not_trusted() {
        let sig =
            Arc::new(RingSig::commutative(2, &[1], 0).unwrap().with_window(16).unwrap().with_precision(2).unwrap());
        let unit =
            Series::one(&sig).add(&Series::monomial(&sig, CycloNum::one(), sig.int_exp(&[0, 4]).unwrap())).unwrap();
        let kc = kummer_class(&unit, 2).unwrap();
        assert!(matches!(kc.disposition, UnitDisposition::OracleFailed { .. }));
    }

    #[test]
    fn commutator_edge_cases() {
        let sig = tw(2, &[2, 3]);
        let f = Series::one(&sig).add(&Series::var(&sig, 0)).unwrap();
        assert!(commutator(&f, &f).unwrap().eq_to_prec(&Series::one(&sig)));
        assert!(
            commutator(&Series::var(&sig, 0), &Series::var(&sig, 2)).unwrap().as_constant() == Some(CycloNum::one())
        );
        let g = Series::one(&sig).add(&Series::var(&sig, 1)).unwrap();
        assert!(commutator_class_check(&f, &g).unwrap().holds());
    }

    #[test]
    fn kummer_of_power_is_trivial() {
        let sig =
            Arc::new(RingSig::commutative(2, &[1], 0).unwrap().with_window(16).unwrap().with_precision(17).unwrap());
        let u = Series::one(&sig).add(&Series::monomial(&sig, 2.into(), sig.int_exp(&[0, 4]).unwrap())).unwrap();
        let a = u.pow(4).unwrap().scalar_mul(&16.into());
        let kc = kummer_class(&a, 2).unwrap();
        assert!(kc.is_trivial(), "{}", describe(&kc));
    }

    #[test]
    fn report_is_deterministic_and_passes() {
        let cfg = ReportConfig { p: 2, r: 1, seed: 5, samples: 3 };
        let a = obstruction_report(&cfg).unwrap();
        let b = obstruction_report(&cfg).unwrap();
        assert_eq!(a.to_string(), b.to_string());
        assert!(a.passed(), "{a}");
    }
}
