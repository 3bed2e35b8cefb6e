fn main() -> std::process::ExitCode {
    gr1kit::cli::main()
}
