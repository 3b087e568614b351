//! Command-line surface over the boundary-geometry kernel:
//! chart conversion, curve and limit-set classification, verification
//! suites, the Cartan triple invariant, and R-circle plot data.

mod cmd;
mod config;

use anyhow::Result;
use clap::{Parser, Subcommand};

use config::CommonOpts;

#[derive(Parser)]
#[command(
    name = "chgeom",
    version,
    about = "geometry of the complex hyperbolic boundary: chains, R-circles, limit sets"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Convert boundary points between the ball, siegel, and heisenberg charts
    Convert {
        /// Chart of the input rows
        #[arg(long)]
        from: String,
        /// Chart of the output rows
        #[arg(long)]
        to: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Classify a closed boundary curve as chain, rcircle, or neither
    ClassifyCurve {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Sample a group's limit set and classify it
    Limitset {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run numerical verification suites (or `all`)
    Verify {
        /// Suite name
        suite: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Cartan angular invariant of three heisenberg rows
    Cartan {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Emit sampled points of an R-circle
    Rcircle {
        /// Direction of the infinite R-circle, radians
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        /// Base point of the infinite R-circle as zeta_re,zeta_im,v
        #[arg(long)]
        base: Option<String>,
        /// Emit the standard finite R-circle instead
        #[arg(long)]
        finite: bool,
        /// Half-width of the line parameter interval (infinite case)
        #[arg(long, default_value_t = 5.0)]
        range: f64,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Convert { from, to, opts } => cmd::convert(&from, &to, &opts.resolve()?),
        Cmd::ClassifyCurve { opts } => cmd::classify_curve_cmd(&opts.resolve()?),
        Cmd::Limitset { opts } => cmd::limitset(&opts.resolve()?),
        Cmd::Verify { suite, opts } => cmd::verify(&suite, &opts.resolve()?),
        Cmd::Cartan { opts } => cmd::cartan(&opts.resolve()?),
        Cmd::Rcircle {
            theta,
            base,
            finite,
            range,
            opts,
        } => cmd::rcircle(
            &cmd::RcircleArgs {
                theta,
                base,
                finite,
                range,
            },
            &opts.resolve()?,
        ),
    }
}
