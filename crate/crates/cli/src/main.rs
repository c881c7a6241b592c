fn main() {
    std::process::exit(phasecorr_cli::main_with_args(std::env::args_os()));
}
