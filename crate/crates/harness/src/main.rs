use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(sata_harness::cli::main(std::env::args_os()))
}
