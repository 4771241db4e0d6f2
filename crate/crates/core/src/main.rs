fn main() {
    std::process::exit(trimdist::cli::main())
}
