fn main() {
    std::process::exit(mic_kepler::cli::run(std::env::args_os()));
}
