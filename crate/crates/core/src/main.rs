use quadric_monads::cli::run_args;

fn main() {
    let out = run_args(std::env::args_os());
    if out.code == 0 {
        print!("{}", out.output);
    } else {
        eprint!("{}", out.output);
    }
    std::process::exit(out.code);
}
