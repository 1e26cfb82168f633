use witch::cli::{run, Io};

fn main() {
    let (mut stdin, mut stdout, mut stderr) = (std::io::stdin(), std::io::stdout(), std::io::stderr());
    let code = run(std::env::args_os(), &mut Io { stdin: &mut stdin, stdout: &mut stdout, stderr: &mut stderr });
    std::process::exit(code);
}
