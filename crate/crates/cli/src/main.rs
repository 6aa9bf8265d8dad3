use std::process::ExitCode;

fn main() -> ExitCode {
    kapitza::run::main_with_args(std::env::args_os())
}
