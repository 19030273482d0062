use clap::Parser;

use padb_net::cli::{init_threads_from_env, run, Cli};

/// Die silently on a closed pipe, like other line-oriented unix tools.
fn reset_sigpipe() {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() {
    reset_sigpipe();
    env_logger::init();
    if let Err(e) = init_threads_from_env() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
