//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "resonator",
    version,
    about = "Subwavelength spectra and eigenmodes of layered high-contrast ball resonators"
)]
pub struct Cli {
    #[command(flatten)]
    pub overrides: Overrides,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.  Anything given here wins over the
/// config file.
#[derive(Args, Debug, Clone, Default)]
pub struct Overrides {
    /// JSON configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory (default "out").
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Contrast shorthand: unit resonator material against rho = kappa = 1/delta.
    #[arg(long, global = true, value_name = "DELTA")]
    pub delta: Option<f64>,

    /// Layer count for a generated geometry (equidistant unless --scale is given).
    #[arg(long, global = true, value_name = "N")]
    pub layers: Option<usize>,

    /// Ratio of consecutive radii for the geometric-progression geometry.
    #[arg(long, global = true, value_name = "S")]
    pub scale: Option<f64>,

    /// Outermost radius for the geometric-progression geometry (default: layer count).
    #[arg(long, global = true, value_name = "R1")]
    pub r1: Option<f64>,

    /// Upper edge of the real-frequency search window.
    #[arg(long = "omega-max", global = true, value_name = "W")]
    pub omega_max: Option<f64>,

    /// Number of samples in the determinant scan.
    #[arg(long, global = true, value_name = "POINTS")]
    pub grid: Option<usize>,

    /// Absolute convergence tolerance of the root polish.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol: Option<f64>,

    /// Which outputs to write.
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatArg {
    Csv,
    Json,
    Svg,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the subwavelength spectrum of the configured geometry.
    Freqs,
    /// Reproduce the four-layer characteristic-vs-asymptotic comparison table.
    Table1,
    /// Extract, normalize and sample the eigenmodes of the configured geometry.
    Modes,
    /// Evaluate the closed-form two-term frequencies (N <= 4, or capacity/volume).
    Asymptotic,
    /// Run the cross-module invariant suite and report machine-readable results.
    Selftest,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_line_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn global_flags_parse_after_the_subcommand() {
        let cli = Cli::try_parse_from([
            "resonator", "freqs", "--layers", "3", "--delta", "1e-4", "--format", "csv",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Freqs));
        assert_eq!(cli.overrides.layers, Some(3));
        assert_eq!(cli.overrides.format, Some(FormatArg::Csv));
    }
}
