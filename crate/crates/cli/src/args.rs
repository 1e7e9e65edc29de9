use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use patpos::system::{AlphabetTree, Kind, PatternSystem};
use patpos::word::Word;
use patpos::{Error, Result};

#[derive(Parser)]
#[command(name = "patpos")]
#[command(about = "Pattern posets: intervals, Möbius values, embedding fibrations and verification sweeps")]
#[command(version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Build the interval [sigma, pi] of a pattern poset
    Interval {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Möbius value of [sigma, pi], optionally with one of its decompositions
    Mobius {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        pair: PairArgs,
        /// Also evaluate eq1, eq2, eq3 or eq4
        #[arg(long)]
        equation: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List embeddings of sigma in pi
    Embeddings {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        pair: PairArgs,
        /// Only normal embeddings
        #[arg(long, conflicts_with = "representative")]
        normal: bool,
        /// Only representative embeddings
        #[arg(long)]
        representative: bool,
        /// Normality policy: standard or literal
        #[arg(long, default_value = "standard")]
        policy: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build an embedding total space and check its projection onto the interval
    Fibration {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        pair: PairArgs,
        /// A, A*, R or R*
        #[arg(long, default_value = "A")]
        variant: String,
        /// Adjoin a bottom and top to the exported space
        #[arg(long)]
        hatted: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Look for a zero split of [sigma, pi]
    Zerosplit {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        pair: PairArgs,
        /// plain, rep or strong
        #[arg(long, default_value = "plain")]
        mode: String,
        /// Also run the disconnection and equivalence checks
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check recursive atom orderings
    Rao(RaoArgs),
    /// Consecutive permutation formulas
    Consec {
        #[command(subcommand)]
        action: ConsecAction,
    },
    /// Run a theorem over every interval up to a size bound
    Verify {
        #[command(flatten)]
        system: SystemArgs,
        /// bjorner, eq1..eq4, walker, zerosplit, satcond2, consecutive, structure, oracles or lower-ideal
        #[arg(long)]
        theorem: String,
        /// Largest top element length
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write a poset or total space to a file
    Export(ExportArgs),
}

#[derive(Subcommand)]
pub enum ConsecAction {
    /// Möbius value from the closed formula, checked against recursion
    Mobius {
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        pi: Option<String>,
        /// Check formula and lemmas on every interval up to --max-n instead
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exterior, interior and bifixes of a permutation
    Bifix {
        #[arg(long)]
        pi: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
pub struct RaoArgs {
    /// A built-in fixture: disconnected-rank-four, shelling-source or shelling-target
    #[arg(long, conflicts_with = "input")]
    pub fixture: Option<String>,
    /// A poset in JSON form
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Element labels in the order to check; without it an ordering is searched for
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<String>>,
    /// Pattern system for the representative-embedding ordering check
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub pi: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct ExportArgs {
    #[arg(long, conflicts_with = "poset")]
    pub fixture: Option<String>,
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub pi: Option<String>,
    /// Export the total space of this variant instead of the interval
    #[arg(long)]
    pub variant: Option<String>,
    #[arg(long)]
    pub hatted: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Clone)]
pub struct SystemArgs {
    /// subword, generalized-subword, composition, classical, consecutive, vincular or dyck
    #[arg(long)]
    pub poset: Option<String>,
    /// Comma-separated letters
    #[arg(long, value_delimiter = ',')]
    pub alphabet: Option<Vec<u32>>,
    /// Alphabet {1..n}; for composition, the largest letter
    #[arg(long)]
    pub alphabet_size: Option<u32>,
    /// Vincular gap mask, one 0/1 per gap
    #[arg(long)]
    pub mask: Option<String>,
    /// Alphabet tree as child:parent pairs, an empty parent meaning the root
    #[arg(long)]
    pub tree: Option<String>,
}

#[derive(Args)]
pub struct PairArgs {
    #[arg(long)]
    pub sigma: String,
    #[arg(long)]
    pub pi: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write to a file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn flag_error(flag: &str, msg: impl std::fmt::Display) -> Error {
    Error::Input(format!("--{flag}: {msg}"))
}

/// Attributes a library error to the flag that supplied the value.
pub fn flag(name: &str, e: Error) -> Error {
    match e {
        Error::Input(msg) => flag_error(name, msg),
        other => flag_error(name, other),
    }
}

impl SystemArgs {
    pub fn build(&self) -> Result<PatternSystem> {
        let name = self
            .poset
            .as_deref()
            .ok_or_else(|| flag_error("poset", format!("required; one of {}", Kind::NAMES.join(", "))))?;
        let kind = Kind::parse(name).map_err(|e| flag("poset", e))?;
        let alphabet = || -> Result<Vec<u32>> {
            match (&self.alphabet, self.alphabet_size) {
                (Some(a), _) => Ok(a.clone()),
                (None, Some(n)) => Ok((1..=n).collect()),
                (None, None) => Err(flag_error("alphabet", "this poset needs --alphabet or --alphabet-size")),
            }
        };
        let sys = match kind {
            Kind::Subword => PatternSystem::subword(&alphabet()?),
            Kind::Composition => {
                let max = self
                    .alphabet_size
                    .or_else(|| self.alphabet.as_ref().and_then(|a| a.iter().copied().max()))
                    .ok_or_else(|| flag_error("alphabet-size", "composition needs the largest letter"))?;
                PatternSystem::composition(max)
            }
            Kind::GeneralizedSubword => {
                let text = self.tree.as_deref().ok_or_else(|| flag_error("tree", "generalized subword needs a tree"))?;
                PatternSystem::generalized_subword(parse_tree(text)?)
            }
            Kind::Classical => Ok(PatternSystem::classical()),
            Kind::Consecutive => Ok(PatternSystem::consecutive()),
            Kind::Vincular => {
                let mask = self.mask.as_deref().ok_or_else(|| flag_error("mask", "vincular needs a gap mask"))?;
                let mask = mask
                    .split(',')
                    .flat_map(|p| p.trim().chars())
                    .map(|c| match c {
                        '1' => Ok(true),
                        '0' => Ok(false),
                        other => Err(flag_error("mask", format!("expected 0 or 1, got {other:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                PatternSystem::vincular(&alphabet()?, mask)
            }
            Kind::Dyck => Ok(PatternSystem::dyck()),
        };
        sys.map_err(|e| flag("poset", e))
    }
}

fn parse_tree(text: &str) -> Result<AlphabetTree> {
    let mut parent = BTreeMap::new();
    for pair in text.split(',').filter(|s| !s.trim().is_empty()) {
        let (child, par) = pair
            .split_once(':')
            .ok_or_else(|| flag_error("tree", format!("expected child:parent, got {pair:?}")))?;
        let child: u32 = child.trim().parse().map_err(|_| flag_error("tree", format!("bad letter {child:?}")))?;
        let par = match par.trim() {
            "" => None,
            p => Some(p.parse::<u32>().map_err(|_| flag_error("tree", format!("bad letter {p:?}")))?),
        };
        parent.insert(child, par);
    }
    AlphabetTree::explicit(parent).map_err(|e| flag("tree", e))
}

pub fn element(sys: &PatternSystem, name: &str, text: &str) -> Result<Word> {
    sys.parse_element(text).map_err(|e| flag(name, e))
}

pub fn required<'a>(flag: &str, value: &'a Option<String>) -> Result<&'a str> {
    value.as_deref().ok_or_else(|| flag_error(flag, "required here"))
}
