use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(switchgrade::cli::run().min(255) as u8)
}
