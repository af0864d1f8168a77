mod args;
mod commands;
mod config;

use std::process::ExitCode;

use tla_core::Error;

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    if err.is_input_error() {
        ExitCode::from(2)
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TLA_LOG", "info"))
        .format_timestamp(None)
        .format_target(false)
        .init();

    let parsed = match config::parse(std::env::args_os().collect()) {
        Ok(Ok(p)) => p,
        Ok(Err(e)) => return fail(&e),
        Err(e) => e.exit(),
    };
    match commands::run(&parsed) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
