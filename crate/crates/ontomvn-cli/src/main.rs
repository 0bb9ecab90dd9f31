use ontomvn_cli::{parse_invocation, run, EXIT_OK};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match parse_invocation(args) {
        Ok(invocation) => std::process::exit(run(&invocation)),
        Err(err) => {
            if err.code == EXIT_OK {
                println!("{}", err.message);
            } else {
                eprintln!("{}", err.message);
            }
            std::process::exit(err.code);
        }
    }
}
