use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = tate_uhf::cli::run(std::env::args_os());
    if !outcome.stdout.is_empty() {
        let _ = writeln!(std::io::stdout(), "{}", outcome.stdout);
    }
    if !outcome.stderr.is_empty() {
        let _ = writeln!(std::io::stderr(), "{}", outcome.stderr);
    }
    ExitCode::from(outcome.code)
}
