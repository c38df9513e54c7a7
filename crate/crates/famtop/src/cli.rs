//! Command-line front end: parse definition files, run constructions and
//! verification pipelines, emit deterministic reports.
//!
//! Definition file format (line-oriented, UTF-8, `#` comments):
//!
//! ```text
//! space Y
//! points a b c
//! open -
//! open a
//! open a b c
//!
//! topology tau0 size 5
//! open -
//! open 3
//! open 0 1 2 3 4
//!
//! chain c1 over Y
//! level 1
//! member m0 = { 1 3 }
//! member m1 = { 2 3 }
//! tau 1 tau0
//! ```
//!
//! Space opens list point labels (`open -` is the empty set). Chain members
//! list previous-level carrier ids: at level 1 these are the opens of the
//! base space in canonical (bit-value) order, at level n+1 the level-n
//! carrier elements in canonical order. `tau <level> <name>` attaches a
//! named topology (declared with `topology <name> size <k>`, opens as
//! carrier ids) to a chain level; alternatively `tau open { <ids> }` lines
//! right after a level's members build that level's topology inline.

use std::collections::BTreeMap;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::family_open::LevelChain;
use crate::finite_space::{
    enumerate_continuous_maps, enumerate_probe_catalog, sierpinski, FiniteSpace, PointMap,
};
use crate::guards::Guards;
use crate::topology_algebra::{inclusion_poset, scott_topology, SetFamilyTopology};
use crate::tower::{containment, induced_next_topology, ComprehensionIndex, FamilyRule};
use crate::verification::{
    check_jointly_characterization, check_splitting_characterization, greatest_splitting_bruteforce,
    is_a_jointly_continuous, is_a_splitting, ProbeContext, SplittingReport, WitnessKind,
};

// ---------------------------------------------------------------------------
// definition files

#[derive(Debug, Default)]
pub struct Definitions {
    pub spaces: BTreeMap<String, Arc<FiniteSpace>>,
    pub topologies: BTreeMap<String, SetFamilyTopology>,
    pub chains: BTreeMap<String, LevelChain>,
}

impl Definitions {
    pub fn space(&self, name: &str) -> Result<&Arc<FiniteSpace>> {
        self.spaces
            .get(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn chain(&self, name: &str) -> Result<&LevelChain> {
        self.chains
            .get(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }
}

fn perr(line: usize, reason: impl Into<String>) -> Error {
    Error::ParseError {
        line,
        reason: reason.into(),
    }
}

enum Block {
    Space {
        line: usize,
        name: String,
        points: Vec<String>,
        opens: Vec<(usize, Vec<String>)>,
    },
    Topology {
        line: usize,
        name: String,
        size: usize,
        opens: Vec<(usize, Vec<String>)>,
    },
    Chain {
        line: usize,
        name: String,
        over: String,
        levels: Vec<Vec<(usize, Vec<String>)>>, // per level: member lines
        taus: Vec<(usize, usize, String)>,      // (line, level, topology name)
        inline_taus: Vec<(usize, usize, Vec<String>)>, // (line, level, one open)
    },
}

/// Parse a definitions file into named entities. Cross references between
/// entities resolve order-independently within one file.
pub fn parse_definitions(text: &str) -> Result<Definitions> {
    let mut blocks: Vec<Block> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "space" => {
                if toks.len() != 2 {
                    return Err(perr(lineno, "expected: space <name>"));
                }
                blocks.push(Block::Space {
                    line: lineno,
                    name: toks[1].to_string(),
                    points: Vec::new(),
                    opens: Vec::new(),
                });
            }
            "topology" => {
                if toks.len() != 4 || toks[2] != "size" {
                    return Err(perr(lineno, "expected: topology <name> size <k>"));
                }
                let size = toks[3]
                    .parse()
                    .map_err(|_| perr(lineno, "size must be a number"))?;
                blocks.push(Block::Topology {
                    line: lineno,
                    name: toks[1].to_string(),
                    size,
                    opens: Vec::new(),
                });
            }
            "chain" => {
                if toks.len() != 4 || toks[2] != "over" {
                    return Err(perr(lineno, "expected: chain <name> over <space>"));
                }
                blocks.push(Block::Chain {
                    line: lineno,
                    name: toks[1].to_string(),
                    over: toks[3].to_string(),
                    levels: Vec::new(),
                    taus: Vec::new(),
                    inline_taus: Vec::new(),
                });
            }
            "points" => match blocks.last_mut() {
                Some(Block::Space { points, .. }) if points.is_empty() => {
                    *points = toks[1..].iter().map(|s| s.to_string()).collect();
                }
                Some(Block::Space { .. }) => {
                    return Err(perr(lineno, "duplicate points line"));
                }
                _ => return Err(perr(lineno, "points outside a space block")),
            },
            "open" => {
                let items: Vec<String> = if toks[1..] == ["-"] {
                    Vec::new()
                } else {
                    toks[1..].iter().map(|s| s.to_string()).collect()
                };
                match blocks.last_mut() {
                    Some(Block::Space { opens, .. }) | Some(Block::Topology { opens, .. }) => {
                        opens.push((lineno, items));
                    }
                    _ => return Err(perr(lineno, "open outside a space or topology block")),
                }
            }
            "level" => match blocks.last_mut() {
                Some(Block::Chain { levels, .. }) => {
                    let n: usize = toks
                        .get(1)
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| perr(lineno, "expected: level <n>"))?;
                    if n != levels.len() + 1 {
                        return Err(perr(
                            lineno,
                            format!("levels must be declared in order; expected level {}", levels.len() + 1),
                        ));
                    }
                    levels.push(Vec::new());
                }
                _ => return Err(perr(lineno, "level outside a chain block")),
            },
            "member" => match blocks.last_mut() {
                Some(Block::Chain { levels, .. }) => {
                    let Some(current) = levels.last_mut() else {
                        return Err(perr(lineno, "member before any level line"));
                    };
                    // member <id> = { i j k }
                    let body = toks[1..].join(" ");
                    let Some(eq) = body.find('=') else {
                        return Err(perr(lineno, "expected: member <id> = { <ids> }"));
                    };
                    let rhs = body[eq + 1..].trim();
                    if !(rhs.starts_with('{') && rhs.ends_with('}')) {
                        return Err(perr(lineno, "member set must be written { <ids> }"));
                    }
                    let ids: Vec<String> = rhs[1..rhs.len() - 1]
                        .split_whitespace()
                        .map(|s| s.to_string())
                        .collect();
                    current.push((lineno, ids));
                }
                _ => return Err(perr(lineno, "member outside a chain block")),
            },
            "tau" => match blocks.last_mut() {
                Some(Block::Chain {
                    taus,
                    inline_taus,
                    levels,
                    ..
                }) => {
                    if toks.get(1) == Some(&"open") {
                        // inline form for the current level: tau open { <ids> }
                        if levels.is_empty() {
                            return Err(perr(lineno, "tau open before any level line"));
                        }
                        let body = toks[2..].join(" ");
                        let rhs = body.trim();
                        if !(rhs.starts_with('{') && rhs.ends_with('}')) {
                            return Err(perr(lineno, "expected: tau open { <ids> }"));
                        }
                        let ids: Vec<String> = rhs[1..rhs.len() - 1]
                            .split_whitespace()
                            .map(|s| s.to_string())
                            .collect();
                        inline_taus.push((lineno, levels.len(), ids));
                    } else {
                        if toks.len() != 3 {
                            return Err(perr(lineno, "expected: tau <level> <topology name>"));
                        }
                        let n: usize = toks[1]
                            .parse()
                            .map_err(|_| perr(lineno, "tau level must be a number"))?;
                        taus.push((lineno, n, toks[2].to_string()));
                    }
                }
                _ => return Err(perr(lineno, "tau outside a chain block")),
            },
            other => return Err(perr(lineno, format!("unknown directive `{other}`"))),
        }
    }

    let mut defs = Definitions::default();

    // spaces first, then topologies, then chains (which reference both)
    for b in &blocks {
        if let Block::Space {
            line,
            name,
            points,
            opens,
        } = b
        {
            if defs.spaces.contains_key(name) {
                return Err(Error::DuplicateName(name.clone()));
            }
            let n = points.len();
            let mut family = Vec::new();
            for (lineno, labels) in opens {
                let mut s = BitSet::empty(n);
                for l in labels {
                    let idx = points
                        .iter()
                        .position(|p| p == l)
                        .ok_or_else(|| perr(*lineno, format!("unknown point `{l}`")))?;
                    s.insert(idx);
                }
                family.push(s);
            }
            let refs: Vec<&str> = points.iter().map(|s| s.as_str()).collect();
            let space = crate::finite_space::validate_topology(&refs, &family)
                .map_err(|e| perr(*line, e.to_string()))?;
            defs.spaces.insert(name.clone(), Arc::new(space));
        }
    }
    for b in &blocks {
        if let Block::Topology {
            line,
            name,
            size,
            opens,
        } = b
        {
            if defs.topologies.contains_key(name) || defs.spaces.contains_key(name) {
                return Err(Error::DuplicateName(name.clone()));
            }
            let mut family = Vec::new();
            for (lineno, ids) in opens {
                let mut s = BitSet::empty(*size);
                for id in ids {
                    let idx: usize = id
                        .parse()
                        .map_err(|_| perr(*lineno, format!("bad carrier id `{id}`")))?;
                    if idx >= *size {
                        return Err(perr(*lineno, format!("carrier id {idx} out of range")));
                    }
                    s.insert(idx);
                }
                family.push(s);
            }
            let t = SetFamilyTopology::new(*size, family)
                .map_err(|e| perr(*line, e.to_string()))?;
            defs.topologies.insert(name.clone(), t);
        }
    }
    for b in &blocks {
        if let Block::Chain {
            line,
            name,
            over,
            levels,
            taus,
            inline_taus,
        } = b
        {
            if defs.chains.contains_key(name) {
                return Err(Error::DuplicateName(name.clone()));
            }
            let base = defs
                .spaces
                .get(over)
                .ok_or_else(|| Error::DanglingReference(over.clone()))?;
            let mut chain = LevelChain::new(base.clone());
            for members in levels {
                let prev_len = chain
                    .carrier_len(chain.depth())
                    .expect("current top carrier");
                let mut family = Vec::new();
                for (lineno, ids) in members {
                    let mut s = BitSet::empty(prev_len);
                    for id in ids {
                        let idx: usize = id
                            .parse()
                            .map_err(|_| perr(*lineno, format!("bad id `{id}`")))?;
                        if idx >= prev_len {
                            return Err(perr(
                                *lineno,
                                format!("id {idx} out of range for carrier of size {prev_len}"),
                            ));
                        }
                        s.insert(idx);
                    }
                    family.push(s);
                }
                chain.push_level(family).map_err(|e| perr(*line, e.to_string()))?;
            }
            for (lineno, n, tname) in taus {
                let t = defs
                    .topologies
                    .get(tname)
                    .ok_or_else(|| Error::DanglingReference(tname.clone()))?;
                let expected = chain
                    .carrier_len(*n)
                    .map_err(|e| perr(*lineno, e.to_string()))?;
                if t.carrier_size() != expected {
                    return Err(perr(
                        *lineno,
                        format!(
                            "topology `{tname}` has carrier size {} but level {n} needs {expected}",
                            t.carrier_size()
                        ),
                    ));
                }
                chain
                    .set_tau(*n, t.clone())
                    .map_err(|e| perr(*lineno, e.to_string()))?;
            }
            // inline taus: the `tau open { ... }` lines of one level together
            // form that level's topology
            let mut by_level: BTreeMap<usize, (usize, Vec<BitSet>)> = BTreeMap::new();
            for (lineno, n, ids) in inline_taus {
                let size = chain
                    .carrier_len(*n)
                    .map_err(|e| perr(*lineno, e.to_string()))?;
                let mut s = BitSet::empty(size);
                for id in ids {
                    let idx: usize = id
                        .parse()
                        .map_err(|_| perr(*lineno, format!("bad carrier id `{id}`")))?;
                    if idx >= size {
                        return Err(perr(*lineno, format!("carrier id {idx} out of range")));
                    }
                    s.insert(idx);
                }
                by_level.entry(*n).or_insert((*lineno, Vec::new())).1.push(s);
            }
            for (n, (lineno, opens)) in by_level {
                let size = chain.carrier_len(n).expect("checked above");
                let t = SetFamilyTopology::new(size, opens)
                    .map_err(|e| perr(lineno, e.to_string()))?;
                chain.set_tau(n, t).map_err(|e| perr(lineno, e.to_string()))?;
            }
            defs.chains.insert(name.clone(), chain);
        }
    }
    Ok(defs)
}

/// Print entities back in the definitions format (the parse/print round trip
/// is exercised in tests).
pub fn print_space(name: &str, space: &FiniteSpace) -> String {
    let mut out = format!("space {name}\npoints {}\n", space.labels().join(" "));
    for o in space.opens() {
        if o.is_empty() {
            out.push_str("open -\n");
        } else {
            let labels: Vec<&str> = o.iter().map(|i| space.labels()[i].as_str()).collect();
            out.push_str(&format!("open {}\n", labels.join(" ")));
        }
    }
    out
}

pub fn print_topology(name: &str, t: &SetFamilyTopology) -> String {
    let mut out = format!("topology {name} size {}\n", t.carrier_size());
    for o in t.opens() {
        if o.is_empty() {
            out.push_str("open -\n");
        } else {
            let ids: Vec<String> = o.iter().map(|i| i.to_string()).collect();
            out.push_str(&format!("open {}\n", ids.join(" ")));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// report rendering

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

fn render_point_set(space: &FiniteSpace, s: &BitSet) -> String {
    if s.is_empty() {
        "{}".to_string()
    } else {
        let labels: Vec<&str> = s.iter().map(|i| space.labels()[i].as_str()).collect();
        format!("{{{}}}", labels.join(","))
    }
}

/// A readable label for a continuous map: characteristic-style when the
/// codomain is Sierpinski, the full table otherwise.
fn map_label(f: &PointMap) -> String {
    if f.target.as_ref() == &sierpinski() {
        let one = BitSet::singleton(2, 1);
        format!("X{}", render_point_set(&f.source, &f.preimage(&one)))
    } else {
        let parts: Vec<String> = f
            .source
            .labels()
            .iter()
            .zip(&f.table)
            .map(|(p, &t)| format!("{p}->{}", f.target.labels()[t]))
            .collect();
        format!("({})", parts.join(" "))
    }
}

struct Report {
    format: Format,
    lines: Vec<String>,
}

impl Report {
    fn new(format: Format, command: &str) -> Self {
        let mut r = Report {
            format,
            lines: Vec::new(),
        };
        r.kv("command", command);
        r
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        match self.format {
            Format::Machine => self.lines.push(format!("{key}={value}")),
            Format::Human => self.lines.push(format!("{key}: {value}")),
        }
    }

    fn topology_on_maps(&mut self, t: &SetFamilyTopology, maps: &[PointMap]) {
        match self.format {
            Format::Machine => {
                for (i, f) in maps.iter().enumerate() {
                    self.lines.push(format!("map={i}:{}", map_label(f)));
                }
                for o in t.opens() {
                    let ids: Vec<String> = o.iter().map(|i| i.to_string()).collect();
                    self.lines.push(format!("open={}", ids.join(",")));
                }
            }
            Format::Human => {
                for o in t.opens() {
                    let names: Vec<String> = o.iter().map(|i| map_label(&maps[i])).collect();
                    self.lines.push(format!("open {{{}}}", names.join(", ")));
                }
            }
        }
    }

    fn topology_on_sets(&mut self, t: &SetFamilyTopology, carrier_names: &[String]) {
        for o in t.opens() {
            match self.format {
                Format::Machine => {
                    let ids: Vec<String> = o.iter().map(|i| i.to_string()).collect();
                    self.lines.push(format!("open={}", ids.join(",")));
                }
                Format::Human => {
                    let names: Vec<String> =
                        o.iter().map(|i| carrier_names[i].clone()).collect();
                    self.lines.push(format!("open {{{}}}", names.join(", ")));
                }
            }
        }
    }

    fn splitting(&mut self, rep: &SplittingReport) {
        self.kv("verdict", rep.verdict);
        self.kv("checked", rep.checked_count);
        if let Some(w) = &rep.witness {
            self.kv("witness_probe", w.probe_index);
            self.kv(
                "witness_kind",
                match w.kind {
                    WitnessKind::CurryFails => "curry-fails",
                    WitnessKind::UncurryFails => "uncurry-fails",
                },
            );
            let table: Vec<String> = w.table.iter().map(|t| t.to_string()).collect();
            self.kv("witness_table", table.join(","));
            self.kv("witness_open", format!("{:?}", w.open));
        }
    }

    fn finish(self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

// ---------------------------------------------------------------------------
// commands

#[derive(Debug, Parser)]
#[command(name = "famtop", version, about = "family-open topologies on finite function spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub format: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    /// Override the point-count guard.
    #[arg(long, global = true)]
    pub max_points: Option<usize>,
    /// Override the candidate-enumeration guard.
    #[arg(long, global = true)]
    pub max_candidates: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a definitions file and re-validate every space.
    SpaceCheck { file: std::path::PathBuf },
    /// Scott topology on the inclusion order of the opens of a space.
    Scott {
        file: std::path::PathBuf,
        #[arg(long)]
        space: String,
    },
    /// Isbell topology on C(Y,Z).
    Isbell {
        file: std::path::PathBuf,
        #[arg(long)]
        space: String,
        /// Codomain space name (default: the Sierpinski space).
        #[arg(long)]
        z: Option<String>,
    },
    /// Family-open topology of a chain level.
    FamilyOpen {
        file: std::path::PathBuf,
        #[arg(long)]
        chain: String,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        z: Option<String>,
        /// Use the Scott topology on the carrier instead of a stored tau.
        #[arg(long)]
        scott_tau: bool,
    },
    /// Induce tau_{n+1} from tau_n and report the containment of the
    /// function-space topologies.
    Tower {
        file: std::path::PathBuf,
        #[arg(long)]
        chain: String,
        /// The level n carrying the starting topology.
        #[arg(long)]
        level: usize,
        #[arg(long)]
        z: Option<String>,
    },
    /// Splitting verdict of a chain-level topology over a probe catalog.
    VerifySplitting {
        file: std::path::PathBuf,
        #[arg(long)]
        chain: String,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        z: Option<String>,
        #[arg(long, default_value = "2")]
        catalog_points: usize,
        #[arg(long)]
        scott_tau: bool,
    },
    /// Joint-continuity verdict of a chain-level topology.
    VerifyJointly {
        file: std::path::PathBuf,
        #[arg(long)]
        chain: String,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        z: Option<String>,
        #[arg(long, default_value = "2")]
        catalog_points: usize,
        #[arg(long)]
        scott_tau: bool,
    },
    /// Run both characterization equivalences for a chain level.
    Characterize {
        file: std::path::PathBuf,
        #[arg(long)]
        chain: String,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        z: Option<String>,
        #[arg(long, default_value = "2")]
        catalog_points: usize,
        #[arg(long)]
        scott_tau: bool,
    },
    /// Brute-force the greatest splitting topology on C(Y,Z).
    GreatestSplitting {
        file: std::path::PathBuf,
        #[arg(long)]
        space: String,
        #[arg(long)]
        z: Option<String>,
        #[arg(long, default_value = "2")]
        catalog_points: usize,
    },
    /// Search for a stabilization depth of the induced tower.
    Stabilize {
        file: std::path::PathBuf,
        #[arg(long)]
        chain: String,
        #[arg(long)]
        z: Option<String>,
        #[arg(long, default_value = "tau-itself")]
        rule: String,
        #[arg(long, default_value = "4")]
        depth: usize,
    },
}

fn read_defs(path: &std::path::Path) -> Result<Definitions> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::ParseError {
        line: 0,
        reason: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_definitions(&text)
}

fn read_defs_checked(path: &std::path::Path, guards: &Guards) -> Result<Definitions> {
    let defs = read_defs(path)?;
    for space in defs.spaces.values() {
        guards.check_points(space.point_count())?;
    }
    Ok(defs)
}

fn resolve_z(defs: &Definitions, z: &Option<String>) -> Result<Arc<FiniteSpace>> {
    match z {
        Some(name) => Ok(defs.space(name)?.clone()),
        None => Ok(Arc::new(sierpinski())),
    }
}

fn carrier_names(chain: &LevelChain, n: usize) -> Vec<String> {
    if n == 0 {
        chain
            .base()
            .opens()
            .iter()
            .map(|o| render_point_set(chain.base(), o))
            .collect()
    } else {
        chain
            .carrier(n)
            .map(|c| c.iter().map(|s| format!("{s:?}")).collect())
            .unwrap_or_default()
    }
}

fn with_tau(chain: &LevelChain, n: usize, scott_tau: bool) -> Result<LevelChain> {
    let mut c = chain.clone();
    if scott_tau {
        let fam: Vec<BitSet> = if n == 0 {
            chain.base().opens().to_vec()
        } else {
            chain.carrier(n)?.to_vec()
        };
        let (p, _) = inclusion_poset(&fam);
        c.set_tau(n, scott_topology(&p))?;
    }
    Ok(c)
}

/// Execute one command. Returns the report text and the exit status.
pub fn run(cli: &Cli) -> Result<(String, i32)> {
    let mut guards = Guards::from_env();
    if let Some(mp) = cli.max_points {
        guards.max_points = mp;
    }
    if let Some(mc) = cli.max_candidates {
        guards.max_candidates = mc;
    }
    let fmt = cli.format;
    match &cli.command {
        Command::SpaceCheck { file } => {
            let defs = read_defs(file)?;
            let mut r = Report::new(fmt, "space-check");
            for (name, s) in &defs.spaces {
                r.kv("space", name);
                r.kv("points", s.point_count());
                r.kv("opens", s.open_count());
            }
            r.kv("chains", defs.chains.len());
            r.kv("topologies", defs.topologies.len());
            Ok((r.finish(), 0))
        }
        Command::Scott { file, space } => {
            let defs = read_defs_checked(file, &guards)?;
            let y = defs.space(space)?;
            let (p, fam) = inclusion_poset(y.opens());
            let tau = scott_topology(&p);
            let names: Vec<String> = fam.iter().map(|o| render_point_set(y, o)).collect();
            let mut r = Report::new(fmt, "scott");
            r.kv("space", space);
            r.topology_on_sets(&tau, &names);
            Ok((r.finish(), 0))
        }
        Command::Isbell { file, space, z } => {
            let defs = read_defs_checked(file, &guards)?;
            let y = defs.space(space)?;
            let z = resolve_z(&defs, z)?;
            let t = crate::function_space::isbell_topology(y, &z, &guards)?;
            let mut r = Report::new(fmt, "isbell");
            r.kv("space", space);
            r.kv("maps", t.maps.len());
            r.topology_on_maps(&t.topology, &t.maps);
            Ok((r.finish(), 0))
        }
        Command::FamilyOpen {
            file,
            chain,
            level,
            z,
            scott_tau,
        } => {
            let defs = read_defs_checked(file, &guards)?;
            let z = resolve_z(&defs, z)?;
            let chain = with_tau(defs.chain(chain)?, *level, *scott_tau)?;
            let cyz = enumerate_continuous_maps(chain.base(), &z, &guards)?;
            let t = chain.family_open_topology(*level, &cyz, &guards)?;
            let mut r = Report::new(fmt, "family-open");
            r.kv("level", level);
            r.kv("maps", cyz.len());
            r.topology_on_maps(&t, &cyz);
            Ok((r.finish(), 0))
        }
        Command::Tower {
            file,
            chain,
            level,
            z,
        } => {
            let defs = read_defs_checked(file, &guards)?;
            let z = resolve_z(&defs, z)?;
            let mut chain = defs.chain(chain)?.clone();
            let n = *level;
            let tau_next = induced_next_topology(&chain, n, ComprehensionIndex::ByOpen, &guards)?;
            chain.set_tau(n + 1, tau_next.clone())?;
            let cyz = enumerate_continuous_maps(chain.base(), &z, &guards)?;
            let t_n = chain.family_open_topology(n, &cyz, &guards)?;
            let t_next = chain.family_open_topology(n + 1, &cyz, &guards)?;
            let rep = containment(&t_next, &t_n);
            let mut r = Report::new(fmt, "tower");
            r.kv("level", n);
            r.kv("induced_tau_opens", tau_next.opens().len());
            r.topology_on_sets(&tau_next, &carrier_names(&chain, n + 1));
            r.kv("contained", rep.contained);
            if let Some(w) = rep.witness {
                r.kv("witness_open", format!("{w:?}"));
            }
            Ok((r.finish(), if rep.contained { 0 } else { 1 }))
        }
        Command::VerifySplitting {
            file,
            chain,
            level,
            z,
            catalog_points,
            scott_tau,
        } => {
            let defs = read_defs_checked(file, &guards)?;
            let z = resolve_z(&defs, z)?;
            let chain = with_tau(defs.chain(chain)?, *level, *scott_tau)?;
            let catalog = enumerate_probe_catalog(*catalog_points, &guards)?;
            let ctx = ProbeContext::new(chain.base(), &z, &catalog, &guards)?;
            let t = chain.family_open_topology(*level, &ctx.cyz, &guards)?;
            let rep = is_a_splitting(&t, &ctx);
            let mut r = Report::new(fmt, "verify-splitting");
            r.kv("catalog", &catalog.description);
            r.splitting(&rep);
            Ok((r.finish(), if rep.verdict { 0 } else { 1 }))
        }
        Command::VerifyJointly {
            file,
            chain,
            level,
            z,
            catalog_points,
            scott_tau,
        } => {
            let defs = read_defs_checked(file, &guards)?;
            let z = resolve_z(&defs, z)?;
            let chain = with_tau(defs.chain(chain)?, *level, *scott_tau)?;
            let catalog = enumerate_probe_catalog(*catalog_points, &guards)?;
            let ctx = ProbeContext::new(chain.base(), &z, &catalog, &guards)?;
            let t = chain.family_open_topology(*level, &ctx.cyz, &guards)?;
            let rep = is_a_jointly_continuous(&t, &ctx);
            let mut r = Report::new(fmt, "verify-jointly");
            r.kv("catalog", &catalog.description);
            r.splitting(&rep);
            Ok((r.finish(), if rep.verdict { 0 } else { 1 }))
        }
        Command::Characterize {
            file,
            chain,
            level,
            z,
            catalog_points,
            scott_tau,
        } => {
            let defs = read_defs_checked(file, &guards)?;
            let z = resolve_z(&defs, z)?;
            let chain = with_tau(defs.chain(chain)?, *level, *scott_tau)?;
            let catalog = enumerate_probe_catalog(*catalog_points, &guards)?;
            let ctx = ProbeContext::new(chain.base(), &z, &catalog, &guards)?;
            let sp = check_splitting_characterization(&chain, *level, &ctx, &guards)?;
            let jc = check_jointly_characterization(&chain, *level, &ctx, &guards)?;
            let mut r = Report::new(fmt, "characterize");
            r.kv("splitting_direct", sp.direct.verdict);
            r.kv("splitting_first_variable", sp.first_variable_side);
            r.kv("splitting_agree", sp.agree);
            r.kv("jointly_direct", jc.direct.verdict);
            r.kv("jointly_first_variable", jc.first_variable_side);
            r.kv("jointly_agree", jc.agree);
            let ok = sp.agree && jc.agree;
            Ok((r.finish(), if ok { 0 } else { 1 }))
        }
        Command::GreatestSplitting {
            file,
            space,
            z,
            catalog_points,
        } => {
            let defs = read_defs_checked(file, &guards)?;
            let y = defs.space(space)?;
            let z = resolve_z(&defs, z)?;
            let catalog = enumerate_probe_catalog(*catalog_points, &guards)?;
            let ctx = ProbeContext::new(y, &z, &catalog, &guards)?;
            let rep = greatest_splitting_bruteforce(&ctx, &guards)?;
            let mut r = Report::new(fmt, "greatest-splitting");
            r.kv("candidates", rep.total_count);
            r.kv("splitting", rep.splitting_count);
            r.kv("join_is_greatest", rep.join_is_greatest);
            r.topology_on_maps(&rep.join, &ctx.cyz);
            Ok((r.finish(), if rep.join_is_greatest { 0 } else { 1 }))
        }
        Command::Stabilize {
            file,
            chain,
            z,
            rule,
            depth,
        } => {
            let defs = read_defs_checked(file, &guards)?;
            let z = resolve_z(&defs, z)?;
            let mut chain = defs.chain(chain)?.clone();
            let rule = FamilyRule::parse(rule).ok_or_else(|| Error::ParseError {
                line: 0,
                reason: format!("unknown rule `{rule}` (power-set, scott-opens, tau-itself)"),
            })?;
            let cyz = enumerate_continuous_maps(chain.base(), &z, &guards)?;
            let found =
                crate::tower::stabilization_search(&mut chain, &cyz, rule, *depth, &guards)?;
            let mut r = Report::new(fmt, "stabilize");
            r.kv("max_depth", depth);
            match found {
                Some(n) => r.kv("depth", n),
                None => r.kv("depth", "none"),
            }
            Ok((r.finish(), 0))
        }
    }
}

/// Map an error to the documented exit status.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::SizeGuardExceeded { .. } => 3,
        _ => 2,
    }
}
