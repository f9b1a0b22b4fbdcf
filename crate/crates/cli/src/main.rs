use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qzec_cli::run(std::env::args_os()))
}
