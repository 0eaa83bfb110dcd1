use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::ops::Range;
use std::sync::Arc;

use num_traits::{One, ToPrimitive};
use serde_json::json;
use twistlaurent::obstruction::{commutator, describe, in_omega_one_plus_m, kummer_class, KummerClass};
use twistlaurent::roots::{general_root, tower_pth_root};
use twistlaurent::sample::{self, SampleRng};
use twistlaurent::{CycloNum, Error, ExponentVec, Precision, RingSig, Series};

use crate::error::CliError;
use crate::parse::{parse_statement, BinOp, Expr, ExprKind, Statement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Series(Series),
    Exponent(ExponentVec),
    Bool(bool),
    Kummer(KummerClass),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Series(_) => "series",
            Value::Exponent(_) => "exponent",
            Value::Bool(_) => "boolean",
            Value::Kummer(_) => "kummer class",
        }
    }

    pub fn text(&self, sig: &RingSig) -> String {
        match self {
            Value::Series(s) => match s.prec() {
                Precision::Exact => s.format(),
                Precision::Below(w) => format!("{} + O({})", s.format(), sig.format_monomial(&sig.exp_at_weight(w))),
            },
            Value::Exponent(e) => sig.format_tuple(e),
            Value::Bool(b) => b.to_string(),
            Value::Kummer(k) => describe(k),
        }
    }

    pub fn json(&self, sig: &RingSig) -> serde_json::Value {
        match self {
            Value::Series(s) => json!({ "type": "series", "value": s.format(), "exact": s.is_exact() }),
            Value::Exponent(e) => json!({ "type": "exponent", "value": sig.format_tuple(e) }),
            Value::Bool(b) => json!({ "type": "boolean", "value": b }),
            Value::Kummer(k) => json!({
                "type": "kummer",
                "modulus": k.modulus,
                "class": [k.class.0, k.class.1],
                "value": describe(k),
            }),
        }
    }
}

/// Interpreter state: the ring, named values and the sampling stream.
pub struct Session {
    sig: Arc<RingSig>,
    bindings: BTreeMap<String, Value>,
    seed: u64,
    rng: SampleRng,
    format: OutputFormat,
}

impl Session {
    pub fn new(sig: Arc<RingSig>, seed: u64, format: OutputFormat) -> Self {
        Session { sig, bindings: BTreeMap::new(), seed, rng: sample::rng(seed), format }
    }

    pub fn sig(&self) -> &Arc<RingSig> {
        &self.sig
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn binding(&self, name: &str) -> Option<&Value> {
        self.bindings.get(name)
    }

    /// Switches rings; bindings from the old ring are dropped.
    pub fn reconfigure(&mut self, sig: Arc<RingSig>) {
        self.sig = sig;
        self.bindings.clear();
        self.rng = sample::rng(self.seed);
    }

    pub fn render(&self, v: &Value) -> String {
        match self.format {
            OutputFormat::Text => v.text(&self.sig),
            OutputFormat::Json => v.json(&self.sig).to_string(),
        }
    }

    /// Evaluates a single expression.
    pub fn eval_str(&mut self, src: &str) -> Result<Value, CliError> {
        let e = crate::parse::parse(src, self.sig.rank())?;
        self.eval(&e, src)
    }

    /// Runs one statement and returns its printed output, if any.
    pub fn run_line(&mut self, line: &str) -> Result<Option<String>, CliError> {
        let Some(stmt) = parse_statement(line, self.sig.rank())? else {
            return Ok(None);
        };
        match stmt {
            Statement::Let(name, e) => {
                let v = self.eval(&e, line)?;
                let out = match self.format {
                    OutputFormat::Text => format!("{name} = {}", v.text(&self.sig)),
                    OutputFormat::Json => {
                        let mut j = v.json(&self.sig);
                        j["name"] = json!(name);
                        j.to_string()
                    }
                };
                self.bindings.insert(name, v);
                Ok(Some(out))
            }
            Statement::Expr(e) => {
                let v = self.eval(&e, line)?;
                Ok(Some(self.render(&v)))
            }
        }
    }

    /// Runs a newline-separated script, stopping at the first error, which
    /// is returned with its 1-based line number.
    pub fn run_script<W: Write>(&mut self, script: &str, out: &mut W) -> Result<(), (usize, CliError)> {
        for (i, line) in script.lines().enumerate() {
            match self.run_line(line) {
                Ok(Some(text)) => writeln!(out, "{text}").map_err(|e| (i + 1, e.into()))?,
                Ok(None) => {}
                Err(e) => return Err((i + 1, e)),
            }
        }
        Ok(())
    }

    /// Line-by-line interactive loop; errors are reported and skipped.
    pub fn repl<R: BufRead, W: Write, E: Write>(&mut self, input: R, out: &mut W, err: &mut E) -> std::io::Result<()> {
        for line in input.lines() {
            let line = line?;
            match self.run_line(&line) {
                Ok(Some(text)) => writeln!(out, "{text}")?,
                Ok(None) => {}
                Err(e) => writeln!(err, "error: {e}")?,
            }
            out.flush()?;
        }
        Ok(())
    }

    fn eval(&mut self, e: &Expr, src: &str) -> Result<Value, CliError> {
        let kernel =
            |err: Error| CliError::Kernel { expr: src.get(e.span.clone()).unwrap_or(src).to_string(), source: err };
        let sig = Arc::clone(&self.sig);
        match &e.kind {
            ExprKind::Int(n) => {
                let c = CycloNum::from_rational(num_rational::BigRational::from_integer(n.clone()));
                Ok(Value::Series(Series::constant(&sig, c)))
            }
            ExprKind::Omega(order) => {
                let c = match order {
                    None => sig.omega_pow(1).clone(),
                    Some(0) => return Err(CliError::Type("w0 is not a root of unity".into())),
                    Some(k) => CycloNum::omega(*k),
                };
                Ok(Value::Series(Series::constant(&sig, c)))
            }
            ExprKind::Var(k) => Ok(Value::Series(Series::var(&sig, *k))),
            ExprKind::Name(n) => self.bindings.get(n).cloned().ok_or_else(|| CliError::UnknownIdentifier(n.clone())),
            ExprKind::Neg(a) => Ok(Value::Series(self.series(a, src)?.neg())),
            ExprKind::Bin(op, a, b) => {
                let a = self.series(a, src)?;
                let b = self.series(b, src)?;
                let r = match op {
                    BinOp::Add => a.add(&b),
                    BinOp::Sub => a.sub(&b),
                    BinOp::Mul => a.mul(&b),
                    BinOp::Div => b.inv().and_then(|bi| a.mul(&bi)),
                };
                r.map(Value::Series).map_err(kernel)
            }
            ExprKind::Pow(a, q) => {
                let base = self.series(a, src)?;
                let num = q.numer().to_i64().ok_or_else(|| CliError::Type("exponent too large".into()))?;
                let den = q.denom().to_u64().ok_or_else(|| CliError::Type("exponent too large".into()))?;
                let r = if q.denom().is_one() {
                    base.pow(num)
                } else if sig.is_twisted() {
                    Err(Error::LatticeViolation("twisted rings admit integer exponents only".into()))
                } else {
                    general_root(&base, den).and_then(|g| g.pow(num))
                };
                r.map(Value::Series).map_err(kernel)
            }
            ExprKind::Call(name, args) => self.call(name, args, src, &e.span),
        }
    }

    fn series(&mut self, e: &Expr, src: &str) -> Result<Series, CliError> {
        match self.eval(e, src)? {
            Value::Series(s) => Ok(s),
            other => Err(CliError::Type(format!(
                "expected a series, found a {} in `{}`",
                other.kind(),
                src.get(e.span.clone()).unwrap_or(src)
            ))),
        }
    }

    fn small_int(&mut self, e: &Expr, src: &str) -> Result<u64, CliError> {
        let s = self.series(e, src)?;
        s.as_constant()
            .filter(|_| s.is_exact())
            .and_then(|c| c.as_rational())
            .filter(|q| q.is_integer())
            .and_then(|q| q.to_integer().to_u64())
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::Type("expected a positive integer".into()))
    }

    fn call(&mut self, name: &str, args: &[Expr], src: &str, span: &Range<usize>) -> Result<Value, CliError> {
        let k = |err: Error| CliError::Kernel { expr: src.get(span.clone()).unwrap_or(src).to_string(), source: err };
        let v = match name {
            "inv" => Value::Series(self.series(&args[0], src)?.inv().map_err(k)?),
            "root" => {
                let f = self.series(&args[0], src)?;
                let n = self.small_int(&args[1], src)?;
                Value::Series(general_root(&f, n).map_err(k)?)
            }
            "towerroot" => Value::Series(tower_pth_root(&self.series(&args[0], src)?).map_err(k)?),
            "val" => Value::Exponent(self.series(&args[0], src)?.val().map_err(k)?),
            "lead" => {
                let f = self.series(&args[0], src)?;
                let (e, c) = f.leading().ok_or(Error::ZeroValuation).map_err(k)?;
                Value::Series(Series::monomial(&self.sig, c.clone(), e.clone()))
            }
            "comm" => {
                let f = self.series(&args[0], src)?;
                let g = self.series(&args[1], src)?;
                Value::Series(commutator(&f, &g).map_err(k)?)
            }
            "inH1M" => Value::Bool(in_omega_one_plus_m(&self.series(&args[0], src)?).map_err(k)?),
            "kummer" => {
                let f = self.series(&args[0], src)?;
                let n = match args.get(1) {
                    Some(a) => self.small_int(a, src)?,
                    None => 1,
                };
                let n = u32::try_from(n).map_err(|_| CliError::Type("Kummer exponent too large".into()))?;
                Value::Kummer(kummer_class(&f, n).map_err(k)?)
            }
            "central" => Value::Bool(self.series(&args[0], src)?.is_central().map_err(k)?),
            "rand" => {
                let range = self.sig.window().min(2);
                Value::Series(sample::series(&mut self.rng, &self.sig, 4, range))
            }
            _ => return Err(CliError::UnknownIdentifier(name.to_string())),
        };
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session(sig: RingSig) -> Session {
        Session::new(Arc::new(sig), 1, OutputFormat::Text)
    }

    fn text(s: &mut Session, src: &str) -> String {
        let v = s.eval_str(src).unwrap();
        v.text(s.sig())
    }

    #[test]
    fn relation_and_commutator() {
        let mut s = session(RingSig::twisted(3, &[3]).unwrap());
        assert_eq!(text(&mut s, "x1*y1 - w*y1*x1"), "0");
        assert_eq!(text(&mut s, "comm(x1, y1)"), "w");
        assert_eq!(text(&mut s, "val(x1^2 + y1)"), "(2,0)");
        assert_eq!(text(&mut s, "inH1M(w)"), "true");
        assert_eq!(text(&mut s, "inH1M(w9)"), "false");
        assert_eq!(text(&mut s, "central(x1^3)"), "true");
        assert_eq!(text(&mut s, "lead(2*y1 + 3*x1)"), "3*x1");
    }

    #[test]
    fn fractional_powers() {
        let mut s = session(RingSig::twisted(2, &[2]).unwrap());
        let err = s.eval_str("x1^(1/2)").unwrap_err();
        assert!(matches!(err, CliError::Kernel { source: Error::LatticeViolation(_), .. }), "{err}");
        assert_eq!(err.code(), 14);

        let mut s = session(RingSig::commutative(2, &[1], 2).unwrap());
        assert_eq!(text(&mut s, "x1^(1/4)*y1^(-1/2)"), "x1^(1/4)*y1^(-1/2)");
        assert_eq!(text(&mut s, "towerroot(x1^(1/2))"), "x1^(1/4)");
    }

    #[test]
    fn bindings_and_reconfigure() {
        let mut s = session(RingSig::twisted(2, &[2]).unwrap());
        assert_eq!(s.run_line("let f = 1 + x1").unwrap().unwrap(), "f = 1 + x1");
        assert_eq!(text(&mut s, "f*f"), "1 + 2*x1 + x1^2");
        s.reconfigure(Arc::new(RingSig::twisted(3, &[3]).unwrap()));
        assert_eq!(s.eval_str("f").unwrap_err(), CliError::UnknownIdentifier("f".into()));
    }

    #[test]
    fn truncated_series_show_their_cutoff() {
        let sig = RingSig::commutative(2, &[1], 0).unwrap().with_precision(3).unwrap();
        let mut s = session(sig);
        assert_eq!(text(&mut s, "root(1 + y1, 2)"), "1 + 1/2*y1 - 1/8*y1^2 + O(y1^3)");
        assert_eq!(text(&mut s, "1 + y1"), "1 + y1");
    }

    #[test]
    fn error_codes() {
        let mut s = session(RingSig::twisted(2, &[2]).unwrap());
        assert_eq!(s.eval_str("1 +").unwrap_err().code(), 3);
        assert_eq!(s.eval_str("g").unwrap_err().code(), 4);
        assert_eq!(s.eval_str("inv()").unwrap_err().code(), 5);
        assert_eq!(s.eval_str("val(x1) + 1").unwrap_err().code(), 6);
        assert_eq!(s.eval_str("inv(0)").unwrap_err().code(), 11);
        assert_eq!(s.eval_str("val(0)").unwrap_err().code(), 16);
        let e = s.eval_str("1 + inv(x1 - x1)").unwrap_err();
        assert_eq!(e.to_string(), "in `inv(x1 - x1)`: division by zero");
    }

    #[test]
    fn script_stops_at_first_error() {
        let mut s = session(RingSig::twisted(2, &[2]).unwrap());
        let mut out = Vec::new();
        let err = s.run_script("# header\nlet a = x1\na^2\nb\na", &mut out).unwrap_err();
        assert_eq!(err.0, 4);
        assert_eq!(String::from_utf8(out).unwrap(), "a = x1\nx1^2\n");
    }

    #[test]
    fn json_output() {
        let mut s = Session::new(Arc::new(RingSig::twisted(2, &[2]).unwrap()), 0, OutputFormat::Json);
        assert_eq!(s.run_line("1 + x1").unwrap().unwrap(), r#"{"exact":true,"type":"series","value":"1 + x1"}"#);
    }
}
