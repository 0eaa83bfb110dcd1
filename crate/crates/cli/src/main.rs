use std::io;
use std::process::ExitCode;

use clap::Parser;
use twistlaurent_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdin = io::stdin();
    let code = cli.run(stdin.lock(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}
