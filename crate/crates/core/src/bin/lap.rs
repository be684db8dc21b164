fn main() -> std::process::ExitCode {
    lap::cli::main()
}
