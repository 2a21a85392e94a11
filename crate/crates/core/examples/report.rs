//! Building a job programmatically and printing the structured report the
//! `k0var` binary would print with `--json`.

use k0var::cli::{run, Command, FieldArg, JobSpec};

fn main() {
    let job = JobSpec::new(Command::Verify)
        .with_field(FieldArg::Finite { p: 5, m: 1 })
        .with_ambient(3)
        .with_poly("x0*x1 - x2^2 + x3^2");
    let report = run(&job);
    println!("{}", report.to_json_string());
    println!("exit code {}", report.exit_code);

    let selftest = run(&JobSpec::new(Command::Selftest));
    print!("{}", selftest.to_text());
}
