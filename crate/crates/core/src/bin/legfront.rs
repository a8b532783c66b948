use std::io::Read;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mut stdin = String::new();
    // Only batch mode reads stdin; avoid blocking otherwise.
    if args.iter().any(|a| a == "--batch") {
        let _ = std::io::stdin().read_to_string(&mut stdin);
    }
    let (code, out) = legfront::cli::run(&args, &stdin);
    print!("{out}");
    std::process::exit(code);
}
