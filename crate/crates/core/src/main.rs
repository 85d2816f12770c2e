use std::process::ExitCode;

fn main() -> ExitCode {
    sclab::cli::main()
}
