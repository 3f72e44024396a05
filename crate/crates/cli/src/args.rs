use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "dfspec",
    version,
    about = "Ro-vibrational spectra and expectation values of diatomic molecules in the shifted Deng-Fan potential"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form energies E(n, l).
    Energies(TableArgs),
    /// Energies with <r^-2>, <V>, <T> and <p^2>.
    Expect(TableArgs),
    /// Compare computed values with the reference fixtures.
    Validate(ValidateArgs),
    /// Solve the radial equation numerically and compare with the closed form.
    Oracle(OracleArgs),
    /// Check the quantization rule (and optionally Hellmann-Feynman) numerically.
    VerifyRule(RuleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMode {
    Exact,
    Approx,
    Both,
}

#[derive(Debug, Args)]
pub struct MoleculeArgs {
    /// Molecule names, or `all`.
    #[arg(long, num_args = 1.., default_value = "all")]
    pub molecule: Vec<String>,

    /// Extra molecules from a CSV file (name,De_eV,re_angstrom,a_per_angstrom,mu_amu).
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub molecules: MoleculeArgs,

    /// Vibrational numbers: `A..B` (inclusive), `A,B,...` or several values.
    #[arg(long, num_args = 1.., default_value = "0..3")]
    pub n: Vec<String>,

    /// Rotational numbers, same syntax as `--n`.
    #[arg(long, num_args = 1.., default_value = "0..5")]
    pub l: Vec<String>,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub molecules: MoleculeArgs,

    /// Fixture directory (default: $DFSPEC_FIXTURES, then the bundled set).
    #[arg(long, value_name = "DIR")]
    pub fixtures: Option<PathBuf>,

    /// Absolute tolerance on E in eV.
    #[arg(long, value_parser = positive_f64, default_value_t = 1e-6)]
    pub tol_energy: f64,

    /// Absolute tolerance on <V> in eV.
    #[arg(long, value_parser = positive_f64, default_value_t = 1e-6)]
    pub tol_potential: f64,

    /// Absolute tolerance on <T> in eV.
    #[arg(long, value_parser = positive_f64, default_value_t = 1e-6)]
    pub tol_kinetic: f64,

    /// Relative tolerance on <r^-2>.
    #[arg(long, value_parser = positive_f64, default_value_t = 1e-6)]
    pub tol_r2: f64,

    /// Relative tolerance on the tabulated <p^2> scale.
    #[arg(long, value_parser = positive_f64, default_value_t = 2e-3)]
    pub tol_p2: f64,

    /// Output as `pretty` (default) or `json`.
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,

    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub molecules: MoleculeArgs,

    #[arg(long, num_args = 1.., default_value = "0..3")]
    pub n: Vec<String>,

    #[arg(long, num_args = 1.., default_value = "0")]
    pub l: Vec<String>,

    /// Centrifugal term used by the solver.
    #[arg(long, value_enum, default_value_t = OracleMode::Both)]
    pub mode: OracleMode,

    /// Interior grid points (default 40000; 1000 for --box-test).
    #[arg(long)]
    pub grid_count: Option<usize>,

    /// Inner grid edge in Å (default 1e-4; 1.0 for --box-test).
    #[arg(long)]
    pub rmin: Option<f64>,

    /// Outer grid edge in Å (default r_e + 40/a; rmin + 2 for --box-test).
    #[arg(long)]
    pub rmax: Option<f64>,

    /// Write each wavefunction as `r_angstrom,psi` CSV into this directory.
    #[arg(long, value_name = "DIR")]
    pub dump_dir: Option<PathBuf>,

    /// Run the particle-in-a-box self-test instead (kappa = 0.5 eV Å^2).
    #[arg(long)]
    pub box_test: bool,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RuleArgs {
    #[command(flatten)]
    pub molecules: MoleculeArgs,

    #[arg(long, num_args = 1.., default_value = "0..3")]
    pub n: Vec<String>,

    #[arg(long, num_args = 1.., default_value = "0..5")]
    pub l: Vec<String>,

    /// Also run the Hellmann-Feynman finite-difference check.
    #[arg(long)]
    pub hft: bool,

    /// Largest acceptable |residual| of the quantization rule.
    #[arg(long, value_parser = positive_f64, default_value_t = 1e-6)]
    pub tol_rule: f64,

    /// Largest acceptable Hellmann-Feynman relative residual.
    #[arg(long, value_parser = positive_f64, default_value_t = 1e-6)]
    pub tol_hft: f64,

    #[command(flatten)]
    pub output: OutputArgs,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}
