use std::process::ExitCode;

fn main() -> ExitCode {
    let code = ccsv_cli::run(std::env::args_os().skip(1));
    ExitCode::from(u8::try_from(code).unwrap_or(2))
}
