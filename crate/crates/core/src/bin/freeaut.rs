use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = freeaut::cli::run(std::env::args_os());
    print!("{}", result.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", result.stderr);
    ExitCode::from(result.exit_code as u8)
}
