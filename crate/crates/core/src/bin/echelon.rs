use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(echelon_core::io::cli::main_with(std::env::args_os()))
}
