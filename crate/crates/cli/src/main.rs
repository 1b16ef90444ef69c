use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = nilpotent_cli::run(std::env::args_os(), &mut io::stdin().lock());
    let written = io::stdout()
        .lock()
        .write_all(out.stdout.as_bytes())
        .and_then(|_| io::stderr().lock().write_all(out.stderr.as_bytes()));
    if written.is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(out.code)
}
