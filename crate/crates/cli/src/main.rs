use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(e) = rsharp_cli::init_threads() {
        eprintln!("error[InvalidEnvironment]: {e}");
        return ExitCode::from(rsharp_cli::EXIT_USAGE as u8);
    }
    let out = rsharp_cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
