//! Command-line frontend for `nomcorr`.

pub mod args;
pub mod commands;
pub mod input;
pub mod render;

use std::io::Write;

pub use args::{Cli, Command};
pub use commands::Streams;
pub use input::ParseError;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<()> {
    let s = Streams { out, err };
    match &cli.command {
        Command::Chi2(a) => commands::chi2(a, s),
        Command::Code(a) => commands::code(a, s),
        Command::Corr(a) => commands::corr(a, s),
        Command::Model(a) => commands::model(a, s),
        Command::FixTies(a) => commands::fix_ties(a, s),
    }
}

/// Numerical failures of the core library map to 3, everything else to 2.
pub fn exit_code(error: &anyhow::Error) -> i32 {
    error
        .chain()
        .find_map(|e| e.downcast_ref::<nomcorr::Error>())
        .map_or(EXIT_DATA, |e| {
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_DATA
            }
        })
}
