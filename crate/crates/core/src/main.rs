fn main() -> std::process::ExitCode {
    mcverify::cli::run(std::env::args_os())
}
