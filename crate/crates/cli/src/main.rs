fn main() {
    std::process::exit(symdecomp::run(std::env::args_os()));
}
