use std::io::{self, Write};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use twistlaurent::obstruction::{commutator_report, kummer_report, obstruction_report, Report, ReportConfig};
use twistlaurent::{RingSig, SigConfig};

use crate::error::CliError;
use crate::session::{OutputFormat, Session};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// Commutator battery, root-of-unity obstruction and Kummer generators.
    Obstruction,
    /// Kummer classes of sampled elements.
    Kummer,
    /// Commutator battery in the configured ring.
    Commutators,
}

/// Exact arithmetic in twisted iterated Laurent series rings.
///
/// Without `--script` or `--check`, statements are read from standard input.
#[derive(Debug, Clone, Parser)]
#[command(name = "twistlaurent", version)]
pub struct Cli {
    /// Prime p
    #[arg(long, env = "TWISTLAURENT_PRIME")]
    pub prime: Option<u64>,
    /// Relation orders n1,...,nr
    #[arg(long, env = "TWISTLAURENT_INDICES", value_delimiter = ',', conflicts_with = "uniform")]
    pub indices: Option<Vec<u64>>,
    /// Shorthand `p^e` for e pairs of order p
    #[arg(long, env = "TWISTLAURENT_UNIFORM")]
    pub uniform: Option<String>,
    /// Truncation depth, in powers of the outermost variable
    #[arg(long, env = "TWISTLAURENT_PRECISION")]
    pub precision: Option<u32>,
    /// Bound on every exponent coordinate
    #[arg(long, env = "TWISTLAURENT_WINDOW")]
    pub window: Option<i64>,
    /// Fractional exponents have denominators dividing p^cap (commutative rings)
    #[arg(long, env = "TWISTLAURENT_DENOM_CAP")]
    pub denom_cap: Option<u32>,
    /// Use the commutative ring on the same variables
    #[arg(long, env = "TWISTLAURENT_COMMUTATIVE")]
    pub commutative: bool,
    #[arg(long, env = "TWISTLAURENT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Samples per randomized check
    #[arg(long, env = "TWISTLAURENT_SAMPLES", default_value_t = 8)]
    pub samples: usize,
    #[arg(long, env = "TWISTLAURENT_SCRIPT")]
    pub script: Option<PathBuf>,
    #[arg(long, env = "TWISTLAURENT_CHECK", value_enum)]
    pub check: Option<Check>,
    #[arg(long, env = "TWISTLAURENT_FORMAT", value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

fn parse_uniform(s: &str) -> Result<(u64, usize), String> {
    let (p, e) = s.split_once('^').ok_or_else(|| format!("expected p^e, got '{s}'"))?;
    let p = p.trim().parse().map_err(|_| format!("bad prime in '{s}'"))?;
    let e = e.trim().parse().map_err(|_| format!("bad exponent in '{s}'"))?;
    Ok((p, e))
}

impl Cli {
    pub fn signature(&self) -> Result<RingSig, CliError> {
        let defaults = SigConfig::default();
        let (p, indices) = match (&self.uniform, &self.indices) {
            (Some(u), _) => {
                let (p, e) = parse_uniform(u).map_err(CliError::Type)?;
                (self.prime.unwrap_or(p), vec![p; e])
            }
            (None, Some(idx)) => (self.prime.unwrap_or(defaults.p), idx.clone()),
            (None, None) => {
                let p = self.prime.unwrap_or(defaults.p);
                (p, vec![if self.commutative { 1 } else { p }])
            }
        };
        let config = SigConfig {
            p,
            indices,
            twisted: !self.commutative,
            denom_cap: self.denom_cap.unwrap_or(defaults.denom_cap),
            precision: self.precision.unwrap_or(defaults.precision),
            window: self.window.unwrap_or(defaults.window),
        };
        RingSig::new(config).map_err(|e| CliError::Kernel { expr: "configuration".into(), source: e })
    }

    fn report(&self, check: Check, sig: &Arc<RingSig>) -> Result<Report, CliError> {
        let cfg = ReportConfig { p: sig.p(), r: sig.rank(), seed: self.seed, samples: self.samples };
        let r = match check {
            Check::Obstruction => obstruction_report(&cfg),
            Check::Kummer => kummer_report(&cfg),
            Check::Commutators => commutator_report(sig, self.seed, self.samples),
        };
        r.map_err(|e| CliError::Kernel { expr: format!("--check {check:?}").to_lowercase(), source: e })
    }

    /// Runs the requested mode and returns the process exit status.
    pub fn run<R: io::BufRead, W: Write, E: Write>(&self, input: R, out: &mut W, err: &mut E) -> i32 {
        match self.execute(input, out, err) {
            Ok(()) => 0,
            Err((_, CliError::CheckFailed)) => 1,
            Err((Some(line), e)) => {
                let _ = writeln!(err, "error: line {line}: {e}");
                e.code()
            }
            Err((None, e)) => {
                let _ = writeln!(err, "error: {e}");
                e.code()
            }
        }
    }

    fn execute<R: io::BufRead, W: Write, E: Write>(
        &self,
        input: R,
        out: &mut W,
        err: &mut E,
    ) -> Result<(), (Option<usize>, CliError)> {
        let at_start = |e: CliError| (None, e);
        let sig = Arc::new(self.signature().map_err(at_start)?);
        if let Some(check) = self.check {
            let report = self.report(check, &sig).map_err(at_start)?;
            let text = match self.format {
                OutputFormat::Text => report.to_string(),
                OutputFormat::Json => report.to_json(),
            };
            writeln!(out, "{text}").map_err(|e| (None, e.into()))?;
            return if report.passed() { Ok(()) } else { Err((None, CliError::CheckFailed)) };
        }
        let mut session = Session::new(sig, self.seed, self.format);
        match &self.script {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| (None, CliError::Io(format!("{}: {e}", path.display()))))?;
                session.run_script(&text, out).map_err(|(line, e)| (Some(line), e))
            }
            None => session.repl(input, out, err).map_err(|e| (None, e.into())),
        }
    }
}
