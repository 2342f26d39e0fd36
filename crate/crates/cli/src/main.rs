fn main() {
    let threads = std::env::var(cergm_cli::THREADS_ENV).ok();
    std::process::exit(cergm_cli::run(std::env::args_os(), threads.as_deref()));
}
