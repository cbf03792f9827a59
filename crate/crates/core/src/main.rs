fn main() {
    std::process::exit(torus_orbits::cli::run());
}
