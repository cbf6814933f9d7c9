//! Parsing a system file and running a command on it in-process.

use locint::cli::{parse_system, run, strip_timing, Command, RunOptions};

const TEXT: &str = "\
# x1' = x1 x2, x2' = -x2 + x1 x2
system
vars 2
lambda 0 -1
f1 = 1 x1^1 x2^1
f2 = 1   x1^1 x2^1
options backend=auto N=4 precision=256
";

fn main() -> locint::Result<()> {
    let sys = parse_system(TEXT)?;
    print!("{}", sys.serialize());
    let out = run(Command::Integral, Some(TEXT), &RunOptions::default())?;
    print!("{}", strip_timing(&out.text));
    Ok(())
}
