use std::process::ExitCode;

fn main() -> ExitCode {
    let code = monkey_zipf_cli::run(std::env::args().collect());
    ExitCode::from(code as u8)
}
