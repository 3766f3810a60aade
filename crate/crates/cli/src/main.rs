use std::process::ExitCode;

fn main() -> ExitCode {
    let report = bispec_cli::run(std::env::args_os());
    if report.command == "help" {
        print!("{}", report.results["text"].as_str().unwrap_or_default());
    } else {
        println!("{}", report.to_json());
        eprint!("{}", report.summary());
    }
    ExitCode::from(report.exit_code.clamp(0, 255) as u8)
}
