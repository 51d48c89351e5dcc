use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = vawt_cli::run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let _ = stdout.write_all(outcome.stdout.as_bytes());
    let _ = stderr.write_all(outcome.stderr.as_bytes());
    if stdout.flush().is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.code as u8)
}
