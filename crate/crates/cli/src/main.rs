fn main() {
    std::process::exit(gevrey_ns_cli::run_cli(std::env::args_os()));
}
