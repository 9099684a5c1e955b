fn main() {
    std::process::exit(ofdm_ber::cli::main_with_stdio());
}
