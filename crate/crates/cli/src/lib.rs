//! Command-line front end for `biextra-core`: argument model, dispatch and
//! the serializable reports each verb emits.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use biextra_core::algebra::{Plane, Sign};
use biextra_core::aut::{out_structure, OutReport};
use biextra_core::compose::{
    build_isomorphism, compose_all, dent_space_isometry_check, recompose, IsomorphismCertificate,
};
use biextra_core::dentspace::{DentRecord, DentSpace};
use biextra_core::extraspecial::centralizer_rt;
use biextra_core::groupmodel::{parse_expression, verify_axioms_with, AxiomReport, Flavor, Group, ParseError};
use biextra_core::suite::{verify_suite, SuiteReport};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

/// Default largest rank a verb will construct.
pub const DEFAULT_LIMIT: usize = 6;
/// Largest rank accepted for `--limit`.
pub const MAX_LIMIT: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "biextra", version, about = "Biextraspecial groups B+(m) and B-(m)")]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest rank a command may construct.
    #[arg(long, global = true, default_value_t = DEFAULT_LIMIT)]
    pub limit: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a group and check its defining properties.
    Construct { expr: String },
    /// List the dents with kind, q-value and coordinates.
    Dents { expr: String },
    /// Gram matrix of the commutator form and q on the dent basis.
    Gram { expr: String },
    /// Rank and type of a group.
    Type { expr: String },
    /// Compose groups and check that the dent spaces add orthogonally.
    Compose {
        #[arg(required = true, num_args = 1..)]
        exprs: Vec<String>,
    },
    /// Split into rank-2 pieces and certify the recomposition.
    Decompose { expr: String },
    /// Certified isomorphism between two groups of the same type.
    Isom { source: String, target: String },
    /// The extraspecial centralizer of t.
    Rt { expr: String },
    /// Structure of the outer automorphism group.
    Out { expr: String },
    /// Run the full invariant suite for both types.
    Verify {
        #[arg(long)]
        rank: usize,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{message} at position {position}\n  {input}\n  {caret:>width$}", caret = "^", width = position + 1)]
    Parse { input: String, position: usize, message: String },
    #[error("rank {rank} exceeds the limit {limit}")]
    TooLarge { rank: usize, limit: usize },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }

    fn parse(input: &str, e: ParseError) -> Self {
        CliError::Parse { input: input.to_string(), position: e.position, message: e.message }
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructReport {
    pub group: String,
    pub flavors: Vec<Flavor>,
    pub rank: usize,
    pub order: u64,
    pub q_order: u64,
    pub axioms: AxiomReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramReport {
    pub group: String,
    pub rank: usize,
    pub gram: Vec<Vec<u8>>,
    /// `q` on the basis dents.
    pub q: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeReport {
    pub rank: usize,
    #[serde(rename = "type")]
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComposeReport {
    pub inputs: Vec<String>,
    pub composite: String,
    pub flavors: Vec<Flavor>,
    pub rank: usize,
    #[serde(rename = "type")]
    pub sign: Sign,
    /// `provenance[i][j]` is the slot of factor `j` of input `i`.
    pub provenance: Vec<Vec<usize>>,
    pub orthogonal_sum: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceReport {
    pub plane: Plane,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub group: String,
    pub pieces: Vec<PieceReport>,
    pub certificate: IsomorphismCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RtReport {
    pub group: String,
    pub order: usize,
    pub center_order: usize,
    #[serde(rename = "type")]
    pub sign: Sign,
    pub order_histogram: BTreeMap<u32, usize>,
    pub psi_isometry: bool,
}

/// The report of one invocation; serializes to the verb's JSON schema.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Report {
    Construct(ConstructReport),
    Dents(Vec<DentRecord>),
    Gram(GramReport),
    Type(TypeReport),
    Compose(ComposeReport),
    Decompose(DecomposeReport),
    Isom(IsomorphismCertificate),
    Rt(RtReport),
    Out(OutReport),
    Verify(SuiteReport),
}

impl Report {
    /// Did every check the report carries pass?
    pub fn passed(&self) -> bool {
        match self {
            Report::Construct(r) => r.axioms.passed(),
            Report::Compose(r) => r.orthogonal_sum,
            Report::Decompose(r) => r.certificate.verified,
            Report::Isom(r) => r.verified,
            Report::Rt(r) => r.psi_isometry,
            Report::Verify(r) => r.passed(),
            Report::Dents(_) | Report::Gram(_) | Report::Type(_) | Report::Out(_) => true,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match self {
            Report::Construct(r) => {
                let status = if r.axioms.passed() { "pass" } else { "FAIL" };
                let _ = writeln!(s, "group={} rank={} order={} q_order={}", r.group, r.rank, r.order, r.q_order);
                for c in &r.axioms.checks {
                    let mark = if c.passed { "pass" } else { "FAIL" };
                    let _ = write!(s, "  {:<46} {mark}", c.name);
                    if let Some(w) = &c.witness {
                        let _ = write!(s, " ({w})");
                    }
                    s.push('\n');
                }
                let _ = write!(s, "axioms={status}");
            }
            Report::Dents(records) => {
                let _ = writeln!(s, "{:>5}  {:<11}  q  coordinates  representative", "index", "kind");
                for r in records {
                    let coords: String = r.coordinates.iter().map(|c| char::from(b'0' + c)).collect();
                    let rep: Vec<String> =
                        r.representative.iter().map(|t| format!("({},{},{})", t[0], t[1], t[2])).collect();
                    let kind = serde_json::to_value(r.kind).expect("kind").as_str().unwrap_or_default().to_string();
                    let _ = writeln!(s, "{:>5}  {:<11}  {}  {:<11}  {}", r.index, kind, r.q, coords, rep.join(""));
                }
                let _ = write!(s, "{} dents", records.len());
            }
            Report::Gram(r) => {
                let _ = writeln!(s, "group={} rank={}", r.group, r.rank);
                for row in &r.gram {
                    let line: Vec<String> = row.iter().map(u8::to_string).collect();
                    let _ = writeln!(s, "{}", line.join(" "));
                }
                let q: Vec<String> = r.q.iter().map(u8::to_string).collect();
                let _ = write!(s, "q = {}", q.join(" "));
            }
            Report::Type(r) => {
                let _ = write!(s, "rank={} type={}", r.rank, r.sign);
            }
            Report::Compose(r) => {
                let _ = write!(
                    s,
                    "composite={} rank={} type={} orthogonal_sum={}",
                    r.composite,
                    r.rank,
                    r.sign,
                    yes_no(r.orthogonal_sum)
                );
            }
            Report::Decompose(r) => {
                let _ = writeln!(s, "group={}", r.group);
                for (i, p) in r.pieces.iter().enumerate() {
                    let _ = writeln!(s, "  piece {i}: e={:#b} f={:#b} type={}", p.plane.e, p.plane.f, p.sign);
                }
                let _ = write!(
                    s,
                    "recomposed={} checked_pairs={} verified={}",
                    r.certificate.source,
                    r.certificate.checked_pairs,
                    yes_no(r.certificate.verified)
                );
            }
            Report::Isom(r) => {
                let _ = write!(
                    s,
                    "{} -> {} checked_pairs={} verified={}",
                    r.source,
                    r.target,
                    r.checked_pairs,
                    yes_no(r.verified)
                );
            }
            Report::Rt(r) => {
                let hist: Vec<String> = r.order_histogram.iter().map(|(o, n)| format!("{o}:{n}")).collect();
                let _ = write!(
                    s,
                    "order={} center={} type={} orders={{{}}} psi_isometry={}",
                    r.order,
                    r.center_order,
                    r.sign,
                    hist.join(","),
                    yes_no(r.psi_isometry)
                );
            }
            Report::Out(r) => {
                let _ = write!(s, "{r}");
            }
            Report::Verify(r) => {
                let _ = write!(s, "{r}");
            }
        }
        s
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Parse an expression and build the composite, refusing ranks above
/// `limit` before anything is constructed.
pub fn build(expr: &str, limit: usize) -> Result<Group, CliError> {
    let descriptors = parse_expression(expr).map_err(|e| CliError::parse(expr, e))?;
    let rank: usize = descriptors.iter().map(|d| d.rank()).sum();
    if rank > limit {
        return Err(CliError::TooLarge { rank, limit });
    }
    let groups: Vec<Group> = descriptors.iter().map(Group::construct).collect();
    if groups.len() == 1 {
        return Ok(groups.into_iter().next().expect("one group"));
    }
    let refs: Vec<&Group> = groups.iter().collect();
    Ok(compose_all(&refs).map_err(failed)?.group)
}

fn dent_space(g: &Group) -> Result<DentSpace, CliError> {
    DentSpace::new(g).map_err(failed)
}

/// Execute one command and return its report.
pub fn execute(command: &Command, flags: &Flags) -> Result<Report, CliError> {
    if flags.limit > MAX_LIMIT {
        return Err(CliError::Usage(format!("--limit must be at most {MAX_LIMIT}")));
    }
    let build = |e: &str| build(e, flags.limit);
    Ok(match command {
        Command::Construct { expr } => {
            let g = build(expr)?;
            Report::Construct(ConstructReport {
                group: g.to_string(),
                flavors: g.flavors().to_vec(),
                rank: g.rank(),
                order: g.order() as u64,
                q_order: g.q_order() as u64,
                axioms: verify_axioms_with(&g, flags.seed, 20_000),
            })
        }
        Command::Dents { expr } => Report::Dents(dent_space(&build(expr)?)?.records()),
        Command::Gram { expr } => {
            let g = build(expr)?;
            let ds = dent_space(&g)?;
            let space = ds.space();
            Report::Gram(GramReport {
                group: g.to_string(),
                rank: space.dim(),
                gram: space.gram_rows(),
                q: (0..space.dim()).map(|i| (space.qvals() >> i & 1) as u8).collect(),
            })
        }
        Command::Type { expr } => {
            let (rank, sign) = dent_space(&build(expr)?)?.group_type().map_err(failed)?;
            Report::Type(TypeReport { rank, sign })
        }
        Command::Compose { exprs } => {
            let groups = exprs.iter().map(|e| build(e)).collect::<Result<Vec<_>, _>>()?;
            let rank: usize = groups.iter().map(Group::rank).sum();
            if rank > flags.limit {
                return Err(CliError::TooLarge { rank, limit: flags.limit });
            }
            let refs: Vec<&Group> = groups.iter().collect();
            let c = compose_all(&refs).map_err(failed)?;
            let (rank, sign) = dent_space(&c.group)?.group_type().map_err(failed)?;
            Report::Compose(ComposeReport {
                inputs: groups.iter().map(Group::to_string).collect(),
                composite: c.group.to_string(),
                flavors: c.group.flavors().to_vec(),
                rank,
                sign,
                provenance: c.provenance.clone(),
                orthogonal_sum: dent_space_isometry_check(&c, &refs).is_ok(),
            })
        }
        Command::Decompose { expr } => {
            let g = build(expr)?;
            let ds = dent_space(&g)?;
            let planes = ds.space().orthogonal_decompose().map_err(failed)?;
            let certificate = recompose(&ds, &planes, flags.seed).map_err(failed)?;
            Report::Decompose(DecomposeReport {
                group: g.to_string(),
                pieces: planes.iter().map(|&p| PieceReport { plane: p, sign: p.kind.sign() }).collect(),
                certificate,
            })
        }
        Command::Isom { source, target } => {
            let (g, h) = (build(source)?, build(target)?);
            Report::Isom(build_isomorphism(&g, &h, flags.seed).map_err(failed)?)
        }
        Command::Rt { expr } => {
            let g = build(expr)?;
            let ds = dent_space(&g)?;
            let r = centralizer_rt(&g).map_err(failed)?;
            Report::Rt(RtReport {
                group: g.to_string(),
                order: r.order(),
                center_order: r.center().len(),
                sign: r.form_type().map_err(failed)?,
                order_histogram: r.order_histogram(),
                psi_isometry: r.verify_psi(&ds).is_ok(),
            })
        }
        Command::Out { expr } => Report::Out(out_structure(&build(expr)?).map_err(failed)?),
        Command::Verify { rank } => {
            if *rank > flags.limit {
                return Err(CliError::TooLarge { rank: *rank, limit: flags.limit });
            }
            Report::Verify(verify_suite(*rank, flags.seed).map_err(CliError::Usage)?)
        }
    })
}

/// Run a parsed command line: the text to print and the exit code.
pub fn run(cli: &Cli) -> (String, u8) {
    match execute(&cli.command, &cli.flags) {
        Ok(report) => {
            let text = if cli.flags.json { report.to_json() } else { report.to_text() };
            (text, if report.passed() { 0 } else { 1 })
        }
        Err(e) => (format!("error: {e}"), e.exit_code()),
    }
}
