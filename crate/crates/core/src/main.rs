use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(dirac_sphere::cli::run(std::env::args_os()))
}
