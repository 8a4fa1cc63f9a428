use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "cyclodiff", version, about = "Cyclotomic difference sets, Gauss sums and their polynomial systems")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for every randomized choice (seeded pair selection).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for scans and multi-theta runs; 0 picks the core count.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Limit overrides, `key=value,...`, applied after CYCLODIFF_LIMITS.
    #[arg(long, global = true)]
    pub limits: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Finite field construction.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Gauss, Jacobi and class sums.
    Sums(SumsArgs),
    /// Difference-set checks and scans.
    #[command(subcommand)]
    Ds(DsCmd),
    /// Polynomial systems and their solutions.
    #[command(subcommand)]
    Sys(SysCmd),
    /// Groebner basis runs against the stored tables.
    #[command(subcommand)]
    Gb(GbCmd),
}

#[derive(Subcommand, Debug)]
pub enum FieldCmd {
    Info {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SumKindArg {
    Gauss,
    Jacobi,
    Class,
}

#[derive(Args, Debug)]
pub struct SumsArgs {
    #[arg(value_enum)]
    pub kind: SumKindArg,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub m: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub s: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<i64>,
    /// Also print a certified complex enclosure.
    #[arg(long)]
    pub numeric: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Plain,
    Modified,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum DsCmd {
    Check {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        modified: bool,
        /// Comma-separated subset of direct,charsum,jacobi,gauss.
        #[arg(long, default_value = "direct,charsum,jacobi,gauss")]
        methods: String,
    },
    Scan(ScanArgs),
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, conflicts_with_all = ["m_min", "m_max"])]
    pub m: Option<u64>,
    #[arg(long, requires = "m_max")]
    pub m_min: Option<u64>,
    #[arg(long, requires = "m_min")]
    pub m_max: Option<u64>,
    #[arg(long, conflicts_with = "even")]
    pub odd: bool,
    #[arg(long)]
    pub even: bool,
    #[arg(long)]
    pub q_max: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    pub modified_mode: ModeArg,
    #[arg(long, default_value = "direct")]
    pub methods: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    G,
    Ghat,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyModeArg {
    Exact,
    Scaled,
    Numeric,
}

#[derive(Subcommand, Debug)]
pub enum SysCmd {
    /// Writes a system in the text exchange format.
    Gen {
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum)]
        level: LevelArg,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<i64>,
        #[arg(long)]
        planar: bool,
    },
    /// Reads a system file and writes it back out.
    Parse {
        #[arg(long)]
        system: PathBuf,
    },
    Verify {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, value_enum)]
        mode: VerifyModeArg,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    Explicit {
        #[arg(long)]
        m: u64,
    },
    FromField {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        modified: bool,
    },
    /// Maps a ghat-level solution to the g-level, or back.
    Bridge {
        #[arg(long)]
        m: u64,
        #[arg(long, allow_hyphen_values = true)]
        theta: i64,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Planar difference-set probe for `q = m^2 + m + 1`.
    Planar {
        #[arg(long)]
        m: u64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Block,
    Minpoly,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Normal,
    Sugar,
    Seeded,
}

#[derive(Args, Debug, Clone)]
pub struct EngineArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Block)]
    pub method: MethodArg,
    /// Pair selection; `seeded` draws ties from `--seed`.
    #[arg(long, value_enum, default_value_t = StrategyArg::Normal)]
    pub strategy: StrategyArg,
}

#[derive(Subcommand, Debug)]
pub enum GbCmd {
    Solve {
        #[arg(long)]
        m: u64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        theta: i64,
        #[arg(long, value_enum, default_value_t = LevelArg::Ghat)]
        level: LevelArg,
        #[command(flatten)]
        engine: EngineArgs,
    },
    Table {
        #[arg(long)]
        m: u64,
        /// Only check the stored fixtures, without running eliminations.
        #[arg(long)]
        fixtures_only: bool,
        #[command(flatten)]
        engine: EngineArgs,
    },
    ProbeZero {
        #[arg(long)]
        m: u64,
        #[arg(long, allow_hyphen_values = true)]
        theta: i64,
    },
}
