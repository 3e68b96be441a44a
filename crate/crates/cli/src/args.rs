use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use phasewalk_core::schedule::OuterRounding;
use phasewalk_core::spectrum::DEFAULT_DENSE_CAP;
use phasewalk_core::{read_edge_list, Family, Graph, ScheduleOptions};

#[derive(Parser, Debug)]
#[command(name = "phasewalk", version, about = "Alternating phase-walk search on periodic graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Spectrum, period and eigenvalue subdivision of a graph.
    Analyze(GraphOpts),
    /// Synthesize the phase-walk schedule as JSON.
    Schedule(ScheduleCmd),
    /// Simulate a schedule and write the trajectory.
    Run(RunCmd),
    /// Sweep the two-level model over the overlap with the first kept eigenspace.
    #[command(name = "sweep-d2")]
    SweepD2(SweepCmd),
    /// Run the acceptance criteria.
    Verify(VerifyCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Rounding {
    HalfDown,
    HalfUp,
}

#[derive(Args, Debug)]
pub struct GraphOpts {
    /// Graph family and parameters: complete N | johnson2 N | rook N1 N2 |
    /// hypercube M | square | completesquare N.
    #[arg(value_name = "FAMILY ARGS", conflicts_with_all = ["family", "edges"])]
    pub positional: Vec<String>,

    /// Same as the positional family arguments.
    #[arg(long, num_args = 1.., value_name = "NAME ARGS", conflicts_with = "edges")]
    pub family: Option<Vec<String>>,

    /// Whitespace-separated edge list, one `u v` pair per line.
    #[arg(long, value_name = "PATH")]
    pub edges: Option<PathBuf>,

    #[arg(long, default_value_t = 0, value_name = "K")]
    pub marked: usize,

    /// Largest graph handled by dense eigendecomposition.
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP, value_parser = at_least::<1>, value_name = "N")]
    pub cap: usize,

    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct ScheduleFlags {
    /// Realize the level-1 power exactly (default: on when the depth is 2).
    #[arg(long, value_enum, value_name = "on|off")]
    pub exact_u1: Option<Switch>,

    #[arg(long, value_enum, default_value = "half-down")]
    pub outer_rounding: Rounding,

    /// Omit the complete-square finishing phases.
    #[arg(long)]
    pub no_finisher: bool,
}

impl ScheduleFlags {
    pub fn options(&self) -> ScheduleOptions {
        ScheduleOptions {
            exact_u1: self.exact_u1.map(|s| s == Switch::On),
            outer_rounding: self.outer_rounding.into(),
            finisher: !self.no_finisher,
        }
    }
}

#[derive(Args, Debug)]
pub struct ScheduleCmd {
    #[command(flatten)]
    pub graph: GraphOpts,
    #[command(flatten)]
    pub flags: ScheduleFlags,
}

#[derive(Args, Debug)]
pub struct RunCmd {
    #[command(flatten)]
    pub graph: GraphOpts,
    #[command(flatten)]
    pub flags: ScheduleFlags,

    /// Record every S-th query (default: 1 up to 10^4 queries, then at most 10^4 samples).
    #[arg(long, value_parser = at_least::<1>, value_name = "S")]
    pub stride: Option<usize>,

    /// Simulate on the full vertex space instead of the reduced model.
    #[arg(long)]
    pub dense: bool,

    /// Load a schedule JSON instead of synthesizing one.
    #[arg(long, value_name = "PATH")]
    pub schedule: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepCmd {
    #[arg(long, default_value_t = 4096, value_parser = at_least::<4>)]
    pub n: usize,

    #[arg(long, default_value_t = 200, value_parser = at_least::<2>)]
    pub grid: usize,

    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyCmd {
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    pub only: Vec<u8>,

    #[arg(long, value_enum, default_value = "half-down")]
    pub outer_rounding: Rounding,

    /// Write the JSON report here.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl From<Rounding> for OuterRounding {
    fn from(r: Rounding) -> Self {
        match r {
            Rounding::HalfDown => OuterRounding::HalfDown,
            Rounding::HalfUp => OuterRounding::HalfUp,
        }
    }
}

fn at_least<const MIN: usize>(raw: &str) -> Result<usize, String> {
    let v: usize = raw.parse().map_err(|e| format!("{e}"))?;
    if v < MIN {
        return Err(format!("must be at least {MIN}"));
    }
    Ok(v)
}

fn parse_num(args: &[String], i: usize, name: &str) -> anyhow::Result<usize> {
    let raw = args.get(i).with_context(|| format!("{name} is missing"))?;
    let v: usize = raw.parse().with_context(|| format!("{name} must be a positive integer, got {raw:?}"))?;
    if v == 0 {
        bail!("{name} must be positive");
    }
    Ok(v)
}

/// Parses `NAME ARGS...` into a family without materializing the graph.
pub fn parse_family(args: &[String]) -> anyhow::Result<Family> {
    let Some(name) = args.first() else {
        bail!("no graph given: pass a family (e.g. `johnson2 258`) or --edges PATH");
    };
    let expect = |n: usize| -> anyhow::Result<()> {
        if args.len() != n + 1 {
            bail!("family {name} takes {n} parameter(s), got {}", args.len() - 1);
        }
        Ok(())
    };
    let family = match name.to_ascii_lowercase().as_str() {
        "complete" => {
            expect(1)?;
            Family::Complete { n: parse_num(args, 1, "n")? }
        }
        "johnson2" => {
            expect(1)?;
            let n = parse_num(args, 1, "n")?;
            if n < 2 {
                bail!("johnson2 needs n >= 2");
            }
            Family::Johnson2 { n }
        }
        "rook" => {
            expect(2)?;
            Family::Rook { n1: parse_num(args, 1, "n1")?, n2: parse_num(args, 2, "n2")? }
        }
        "hypercube" => {
            expect(1)?;
            let m = parse_num(args, 1, "m")?;
            if m > 26 {
                bail!("hypercube dimension {m} is too large");
            }
            Family::Hypercube { m: m as u32 }
        }
        "square" => {
            expect(0)?;
            Family::Square
        }
        "completesquare" => {
            expect(1)?;
            Family::CartesianProduct {
                left: Box::new(Family::Complete { n: parse_num(args, 1, "n")? }),
                right: Box::new(Family::Square),
            }
        }
        other => bail!("unknown family {other:?}; expected complete, johnson2, rook, hypercube, square or completesquare"),
    };
    Ok(family)
}

/// A named family, handled through closed forms, or an explicit graph.
pub enum Input {
    Family(Family),
    Graph(Graph),
}

impl Input {
    pub fn family(&self) -> &Family {
        match self {
            Input::Family(f) => f,
            Input::Graph(g) => g.family(),
        }
    }
}

impl GraphOpts {
    pub fn input(&self) -> anyhow::Result<Input> {
        Ok(if let Some(path) = &self.edges {
            Input::Graph(read_edge_list(path)?)
        } else if let Some(f) = &self.family {
            Input::Family(parse_family(f)?)
        } else {
            Input::Family(parse_family(&self.positional)?)
        })
    }
}
