fn main() {
    std::process::exit(roomtrack::cli::main())
}
