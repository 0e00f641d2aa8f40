fn main() -> std::process::ExitCode {
    lexsimp::cli::main()
}
