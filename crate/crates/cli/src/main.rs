use std::io::Write;

fn main() {
    let res = qlock_cli::run(std::env::args_os());
    std::io::stdout().write_all(res.stdout.as_bytes()).ok();
    std::io::stderr().write_all(res.stderr.as_bytes()).ok();
    std::process::exit(res.exit_code);
}
