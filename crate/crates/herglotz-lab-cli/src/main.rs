fn main() {
    eprintln!("herglotz-lab: no subcommand given");
    std::process::exit(2);
}
