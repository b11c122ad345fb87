use std::process::ExitCode;

fn main() -> ExitCode {
    let tolerance = std::env::var(seqreg::config::TOLERANCE_VAR).ok();
    let code = seqreg::main_with(
        std::env::args_os(),
        tolerance.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
