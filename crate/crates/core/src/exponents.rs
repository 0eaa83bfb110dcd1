//! Ring signatures, the exponent lattice and the twisting cocycle.
//!
//! Coordinates are ordered `x1, y1, ..., xr, yr`. Exponents are stored as
//! integers scaled by the signature's fixed denominator `p^M`, so every
//! exponent of one signature shares a representation and comparisons are
//! plain integer comparisons. The lexicographic order treats the *last*
//! coordinate as most significant, matching `k((x1))((y1))...((yr))`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};

/// Plain configuration from which a [`RingSig`] is validated and derived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigConfig {
    pub p: u64,
    /// `n_1, ..., n_r`. In commutative signatures they only fix the
    /// coefficient order `m` (and may be 1).
    pub indices: Vec<u64>,
    pub twisted: bool,
    /// `M`: fractional exponents have denominator dividing `p^M`.
    pub denom_cap: u32,
    /// `N`: default truncation, in powers of the outermost variable.
    pub precision: u32,
    /// `B`: every coordinate satisfies `|e| <= B`.
    pub window: i64,
}

impl Default for SigConfig {
    fn default() -> Self {
        SigConfig { p: 2, indices: vec![2], twisted: true, denom_cap: 0, precision: 4, window: 16 }
    }
}

/// A validated ring presentation: the division ring `Delta_2r(Q(w_m); n_1..n_r)`
/// when twisted, or a commutative iterated Laurent series field otherwise.
#[derive(Clone)]
pub struct RingSig {
    config: SigConfig,
    m: u64,
    scale: i64,
    radix: i128,
    omega_powers: Arc<Vec<CycloNum>>,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl RingSig {
    pub fn new(config: SigConfig) -> Result<RingSig> {
        let bad = |msg: String| Err(Error::InvalidSignature(msg));
        if !is_prime(config.p) {
            return bad(format!("{} is not prime", config.p));
        }
        if config.indices.is_empty() {
            return bad("at least one variable pair is required".into());
        }
        let floor = if config.twisted { 2 } else { 1 };
        if let Some(n) = config.indices.iter().find(|&&n| n < floor) {
            return bad(format!("index {n} is below {floor}"));
        }
        if config.twisted && config.denom_cap != 0 {
            return bad("twisted rings use integer exponents only (denominator cap must be 0)".into());
        }
        if config.window < 1 || config.precision < 1 {
            return bad("window and precision must be positive".into());
        }
        let m = config.indices.iter().fold(1u64, |acc, n| acc.lcm(n));
        let scale = (config.p as i64).checked_pow(config.denom_cap).filter(|s| s.checked_mul(config.window).is_some());
        let Some(scale) = scale else {
            return bad("denominator cap too large".into());
        };
        let span = scale as i128 * config.window as i128;
        let radix = 2 * span + 1;
        let coords = 2 * config.indices.len() as u32;
        // room for weights of sums of a few in-window exponents
        let fits = radix.checked_pow(coords).and_then(|r| r.checked_mul(8 * (config.precision as i128 + 4))).is_some();
        if !fits {
            return bad("window and rank too large for the weight encoding".into());
        }
        let omega_powers = Arc::new((0..m as i64).map(|e| CycloNum::omega_pow(m, e)).collect());
        Ok(RingSig { config, m, scale, radix, omega_powers })
    }

    /// `Delta_2r(Q(w_m); indices)` with default window and precision.
    pub fn twisted(p: u64, indices: &[u64]) -> Result<RingSig> {
        RingSig::new(SigConfig { p, indices: indices.to_vec(), twisted: true, ..Default::default() })
    }

    /// Commutative iterated Laurent series in `r` variable pairs with
    /// coefficient order `lcm(indices)`.
    pub fn commutative(p: u64, indices: &[u64], denom_cap: u32) -> Result<RingSig> {
        RingSig::new(SigConfig { p, indices: indices.to_vec(), twisted: false, denom_cap, ..Default::default() })
    }

    pub fn with_window(&self, window: i64) -> Result<RingSig> {
        RingSig::new(SigConfig { window, ..self.config.clone() })
    }

    pub fn with_precision(&self, precision: u32) -> Result<RingSig> {
        RingSig::new(SigConfig { precision, ..self.config.clone() })
    }

    pub fn config(&self) -> &SigConfig {
        &self.config
    }

    pub fn p(&self) -> u64 {
        self.config.p
    }

    /// Number of variable pairs.
    pub fn rank(&self) -> usize {
        self.config.indices.len()
    }

    pub fn coords(&self) -> usize {
        2 * self.rank()
    }

    pub fn indices(&self) -> &[u64] {
        &self.config.indices
    }

    /// `lcm(n_1, ..., n_r)`; `w` in expressions denotes `w_m`.
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn is_twisted(&self) -> bool {
        self.config.twisted
    }

    pub fn denom_cap(&self) -> u32 {
        self.config.denom_cap
    }

    pub fn window(&self) -> i64 {
        self.config.window
    }

    pub fn precision(&self) -> u32 {
        self.config.precision
    }

    /// `p^M`, the fixed denominator of stored exponents.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// `w_m^e`.
    pub fn omega_pow(&self, e: i64) -> &CycloNum {
        &self.omega_powers[e.rem_euclid(self.m as i64) as usize]
    }

    /// `w_{n_i}`, i.e. `w_m^(m / n_i)` (0-based pair index).
    pub fn omega_index(&self, i: usize) -> &CycloNum {
        self.omega_pow((self.m / self.config.indices[i]) as i64)
    }

    pub fn zero_exp(&self) -> ExponentVec {
        ExponentVec::zero(self.coords())
    }

    /// Exponent from integer coordinates.
    pub fn int_exp(&self, coords: &[i64]) -> Result<ExponentVec> {
        self.exp_from(coords, 0)
    }

    /// Exponent with coordinates `nums[k] / p^denom_log`.
    pub fn exp_from(&self, nums: &[i64], denom_log: u32) -> Result<ExponentVec> {
        if nums.len() != self.coords() {
            return Err(Error::InvalidSignature(format!(
                "expected {} exponent coordinates, got {}",
                self.coords(),
                nums.len()
            )));
        }
        if denom_log > self.config.denom_cap {
            return Err(self.lattice_error());
        }
        let factor = (self.config.p as i64).pow(self.config.denom_cap - denom_log);
        let scaled = nums
            .iter()
            .map(|n| n.checked_mul(factor).ok_or(Error::WindowExceeded { window: self.window() }))
            .collect::<Result<Vec<_>>>()?;
        let e = ExponentVec { scaled: scaled.into() };
        self.check_window(&e)?;
        Ok(e)
    }

    /// Exponent from rational coordinates.
    pub fn exp_from_rationals(&self, values: &[BigRational]) -> Result<ExponentVec> {
        let scale = BigRational::from_integer(self.scale.into());
        let mut nums = Vec::with_capacity(values.len());
        for v in values {
            let s = v * &scale;
            if !s.is_integer() {
                return Err(self.lattice_error());
            }
            let n = i64::try_from(s.to_integer()).map_err(|_| Error::WindowExceeded { window: self.window() })?;
            nums.push(n);
        }
        self.exp_from(&nums, self.config.denom_cap)
    }

    fn lattice_error(&self) -> Error {
        if self.is_twisted() {
            Error::LatticeViolation("twisted rings admit integer exponents only".into())
        } else {
            Error::DenominatorCapExceeded { cap: self.config.denom_cap }
        }
    }

    /// Unit vector along coordinate `k`.
    pub fn unit_exp(&self, k: usize) -> ExponentVec {
        let mut scaled = vec![0; self.coords()];
        scaled[k] = self.scale;
        ExponentVec { scaled: scaled.into() }
    }

    pub fn in_window(&self, e: &ExponentVec) -> bool {
        let bound = self.scale * self.config.window;
        e.scaled.iter().all(|c| c.abs() <= bound)
    }

    pub fn check_window(&self, e: &ExponentVec) -> Result<()> {
        if self.in_window(e) {
            Ok(())
        } else {
            Err(Error::WindowExceeded { window: self.window() })
        }
    }

    pub fn lex_cmp(&self, a: &ExponentVec, b: &ExponentVec) -> Ordering {
        a.cmp(b)
    }

    pub fn exp_add(&self, a: &ExponentVec, b: &ExponentVec) -> Result<ExponentVec> {
        let e = a.add(b);
        self.check_window(&e)?;
        Ok(e)
    }

    pub fn exp_sub(&self, a: &ExponentVec, b: &ExponentVec) -> Result<ExponentVec> {
        let e = a.sub(b);
        self.check_window(&e)?;
        Ok(e)
    }

    pub fn exp_neg(&self, a: &ExponentVec) -> ExponentVec {
        a.neg()
    }

    /// `a / n` when it lies on the lattice (`p^M` denominators at most;
    /// integer exponents in twisted rings).
    pub fn divide(&self, a: &ExponentVec, n: u64) -> Option<ExponentVec> {
        let n = i64::try_from(n).ok()?;
        if n == 0 || a.scaled.iter().any(|c| c % n != 0) {
            return None;
        }
        Some(ExponentVec { scaled: a.scaled.iter().map(|c| c / n).collect() })
    }

    /// Like [`RingSig::divide`] but explains a failure: a quotient whose
    /// denominators are powers of `p` beyond the cap is
    /// [`Error::DenominatorCapExceeded`]; anything else is
    /// [`Error::ExponentNotDivisible`].
    pub fn divide_checked(&self, a: &ExponentVec, n: u64) -> Result<ExponentVec> {
        if let Some(e) = self.divide(a, n) {
            return Ok(e);
        }
        if self.is_twisted() {
            return Err(Error::ExponentNotDivisible { n });
        }
        let p = self.config.p as i64;
        let p_power_only = a.scaled.iter().all(|&c| {
            let mut den = (n as i64) / (n as i64).gcd(&c);
            while den % p == 0 {
                den /= p;
            }
            den == 1
        });
        if p_power_only {
            Err(Error::DenominatorCapExceeded { cap: self.config.denom_cap })
        } else {
            Err(Error::ExponentNotDivisible { n })
        }
    }

    /// `k * a` (no window check).
    pub fn exp_scale(&self, a: &ExponentVec, k: i64) -> ExponentVec {
        ExponentVec { scaled: a.scaled.iter().map(|c| c * k).collect() }
    }

    /// Least `d` such that every coordinate of `a` has denominator dividing `p^d`.
    pub fn denom_log(&self, a: &ExponentVec) -> u32 {
        let p = self.config.p as i64;
        let mut d = self.config.denom_cap;
        let mut unit = 1i64;
        while d > 0 && a.scaled.iter().all(|c| c % (unit * p) == 0) {
            unit *= p;
            d -= 1;
        }
        d
    }

    /// Coordinate `k` as a reduced rational.
    pub fn coord(&self, a: &ExponentVec, k: usize) -> BigRational {
        BigRational::new(a.scaled[k].into(), self.scale.into())
    }

    pub fn coords_rational(&self, a: &ExponentVec) -> Vec<BigRational> {
        (0..a.len()).map(|k| self.coord(a, k)).collect()
    }

    /// Integer coordinates (twisted rings, or any lattice point with denominator 1).
    pub fn coords_int(&self, a: &ExponentVec) -> Option<Vec<i64>> {
        a.scaled.iter().map(|c| if c % self.scale == 0 { Some(c / self.scale) } else { None }).collect()
    }

    /// Big-radix weight: within the window the weight order coincides with
    /// the lexicographic order, and the map is additive everywhere.
    pub fn weight(&self, a: &ExponentVec) -> i128 {
        a.scaled.iter().rev().fold(0i128, |acc, &c| acc * self.radix + c as i128)
    }

    /// Weight of one power of the outermost variable.
    pub fn level_weight(&self) -> i128 {
        self.radix.pow(self.coords() as u32 - 1) * self.scale as i128
    }

    /// Default relative truncation: `N` powers of the outermost variable.
    pub fn default_cutoff(&self) -> i128 {
        self.level_weight() * self.config.precision as i128
    }

    /// Exponent `e` of the cocycle `X^a X^b = w_m^e X^(a+b)`, reduced mod `m`.
    ///
    /// Moving `x_i^c` (from `b`) left past `y_i^d` (from `a`) uses
    /// `y_i x_i = w_{n_i}^{-1} x_i y_i`, giving `e = -sum_i (m/n_i) d_i c_i`.
    pub fn phase_exp(&self, a: &ExponentVec, b: &ExponentVec) -> i64 {
        if !self.is_twisted() {
            return 0;
        }
        let m = self.m as i64;
        let mut e = 0i64;
        for (i, n) in self.config.indices.iter().enumerate() {
            let d = a.scaled[2 * i + 1] % m;
            let c = b.scaled[2 * i] % m;
            e = (e - (m / *n as i64) * ((d * c) % m)) % m;
        }
        e.rem_euclid(m)
    }

    pub fn phase(&self, a: &ExponentVec, b: &ExponentVec) -> Result<CycloNum> {
        if self.is_twisted() && (self.coords_int(a).is_none() || self.coords_int(b).is_none()) {
            return Err(Error::LatticeViolation("fractional exponent in a twisted ring".into()));
        }
        Ok(self.omega_pow(self.phase_exp(a, b)).clone())
    }

    /// Whether `X^a` and `X^b` commute.
    pub fn commutes(&self, a: &ExponentVec, b: &ExponentVec) -> bool {
        self.phase_exp(a, b) == self.phase_exp(b, a)
    }

    /// `X^a` is central iff `n_i` divides both exponents of every pair.
    pub fn is_central_monomial(&self, a: &ExponentVec) -> bool {
        if !self.is_twisted() {
            return true;
        }
        self.config.indices.iter().enumerate().all(|(i, &n)| {
            let n = n as i64;
            a.scaled[2 * i] % n == 0 && a.scaled[2 * i + 1] % n == 0
        })
    }

    pub fn var_name(&self, k: usize) -> String {
        format!("{}{}", if k.is_multiple_of(2) { 'x' } else { 'y' }, k / 2 + 1)
    }

    /// `x1^a*y1^b*...`; `1` for the zero exponent.
    /// The exponent of weight `w` whose inner coordinates lie in the window.
    pub fn exp_at_weight(&self, mut w: i128) -> ExponentVec {
        let half = self.radix / 2;
        let mut scaled = Vec::with_capacity(self.coords());
        for _ in 1..self.coords() {
            let d = (w + half).rem_euclid(self.radix) - half;
            scaled.push(d as i64);
            w = (w - d) / self.radix;
        }
        scaled.push(w as i64);
        ExponentVec { scaled: scaled.into() }
    }

    pub fn format_monomial(&self, a: &ExponentVec) -> String {
        let mut parts = Vec::new();
        for k in 0..a.len() {
            let c = self.coord(a, k);
            if c.is_zero() {
                continue;
            }
            let name = self.var_name(k);
            if c.is_one() {
                parts.push(name);
            } else if c.is_integer() {
                parts.push(format!("{name}^{c}"));
            } else {
                parts.push(format!("{name}^({c})"));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// `(c1,c2,...)` with reduced rational coordinates.
    pub fn format_tuple(&self, a: &ExponentVec) -> String {
        let parts: Vec<String> = self.coords_rational(a).iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

impl PartialEq for RingSig {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config
    }
}

impl Eq for RingSig {}

impl fmt::Debug for RingSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingSig").field("config", &self.config).field("m", &self.m).finish()
    }
}

impl fmt::Display for RingSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.config.indices.iter().map(u64::to_string).collect();
        write!(
            f,
            "{}(p={}; {}) m={} M={} N={} B={}",
            if self.is_twisted() { "twisted" } else { "commutative" },
            self.config.p,
            idx.join(","),
            self.m,
            self.config.denom_cap,
            self.config.precision,
            self.config.window
        )
    }
}

/// A point of the exponent lattice, stored scaled by the owning signature's `p^M`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentVec {
    scaled: Box<[i64]>,
}

impl ExponentVec {
    pub fn zero(coords: usize) -> Self {
        ExponentVec { scaled: vec![0; coords].into() }
    }

    pub fn len(&self) -> usize {
        self.scaled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scaled.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.scaled.iter().all(|&c| c == 0)
    }

    /// Strictly greater than zero in the lexicographic order.
    pub fn is_positive(&self) -> bool {
        self.scaled.iter().rev().find(|&&c| c != 0).is_some_and(|&c| c > 0)
    }

    pub fn scaled(&self) -> &[i64] {
        &self.scaled
    }

    pub fn add(&self, other: &ExponentVec) -> ExponentVec {
        ExponentVec { scaled: self.scaled.iter().zip(other.scaled.iter()).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &ExponentVec) -> ExponentVec {
        ExponentVec { scaled: self.scaled.iter().zip(other.scaled.iter()).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> ExponentVec {
        ExponentVec { scaled: self.scaled.iter().map(|c| -c).collect() }
    }
}

impl Ord for ExponentVec {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.len(), other.len());
        for (a, b) in self.scaled.iter().rev().zip(other.scaled.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for ExponentVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.scaled)
    }
}
