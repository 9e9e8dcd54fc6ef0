use std::process::ExitCode;

fn main() -> ExitCode {
    // die quietly when stdout is closed early, e.g. piped into `head`
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    aps_cli::main_impl()
}
