fn main() {
    std::process::exit(grz_tool::run(std::env::args_os()));
}
