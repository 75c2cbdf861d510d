use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(fiedler_cli::run(std::env::args_os()))
}
