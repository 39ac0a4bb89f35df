//! Command-line surface over the library: exact inputs in, JSON/DOT/SVG
//! and worked traces out. Every subcommand is deterministic for fixed
//! inputs and flags; domain failures exit 1 with a machine-readable
//! error on stderr, parse failures exit 2.

use std::fs;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use flatrack::castle::{self, CastleSet};
use flatrack::hyp::{self, Cycle, Quadrangulation, Side};
use flatrack::iet::{self, IetDatum, PermPair};
use flatrack::num::{parse_scalar, Scalar};
use flatrack::pa;
use flatrack::render;
use flatrack::surface::{self, TranslationSurface};

#[derive(Parser)]
#[command(
    name = "flatrack",
    version,
    about = "exact renormalization on translation surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
    Svg,
}

#[derive(Args)]
struct Io {
    /// Input file (JSON as documented per object).
    #[arg(long = "in")]
    input: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long = "out")]
    output: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Continued-fraction digits through the accelerated induction map.
    Cf {
        /// Scalar literal, e.g. "sqrt(6)-2" or "7/10".
        #[arg(long)]
        value: String,
        #[arg(long)]
        digits: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Rauzy–Veech induction on an interval exchange.
    Rv {
        #[command(subcommand)]
        cmd: RvCmd,
    },
    /// Rauzy classes of combinatorial data.
    Rauzy {
        #[command(subcommand)]
        cmd: RauzyCmd,
    },
    /// Staircase moves on quadrangulations of hyperelliptic surfaces.
    Hyp {
        #[command(subcommand)]
        cmd: HypCmd,
    },
    /// Pseudo-Anosov enumeration by positive loops.
    Pa {
        #[command(subcommand)]
        cmd: PaCmd,
    },
    /// Diagonal changes on castle polygons in any stratum.
    Castle {
        #[command(subcommand)]
        cmd: CastleCmd,
    },
    /// Translation surfaces from polygons.
    Surface {
        #[command(subcommand)]
        cmd: SurfaceCmd,
    },
    /// SVG rendering of a decomposition.
    Render {
        /// What the input file contains.
        #[arg(long, value_enum)]
        kind: RenderKind,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Subcommand)]
enum RvCmd {
    /// One induction step.
    Step {
        #[command(flatten)]
        io: Io,
    },
    /// Zorich-accelerated step.
    Fast {
        #[command(flatten)]
        io: Io,
    },
    /// A trace of several steps.
    Orbit {
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Subcommand)]
enum RauzyCmd {
    /// The class generated by a combinatorial datum.
    Class {
        /// Two-row notation, e.g. "ABCD/DCBA".
        #[arg(long)]
        perm: String,
        /// Print only the vertex count.
        #[arg(long)]
        count: bool,
        /// Quotient by the monodromy invariant.
        #[arg(long)]
        reduced: bool,
        #[command(flatten)]
        io: Io,
    },
    /// The class as a DOT graph.
    Graph {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        reduced: bool,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Subcommand)]
enum HypCmd {
    Validate {
        #[command(flatten)]
        io: Io,
    },
    /// Staircase move along a cycle, e.g. --cycle "r:1,3".
    Move {
        #[arg(long)]
        cycle: String,
        #[arg(long)]
        backward: bool,
        #[command(flatten)]
        io: Io,
    },
    Rotate {
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Diagonal-changes class of the datum.
    Graph {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        unlabeled: bool,
    },
    /// Canonical representative in the fundamental domain.
    Canonical {
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Cyclical labeling respecting the involution.
    Label {
        #[arg(long, default_value_t = 1)]
        start: usize,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Subcommand)]
enum PaCmd {
    /// Enumerate pseudo-Anosov classes up to a loop length.
    Enumerate {
        #[arg(long)]
        k: usize,
        #[arg(long = "max-len")]
        max_len: usize,
        /// Keep only dilatations at most this value.
        #[arg(long)]
        cap: Option<f64>,
        /// Shorthand for --format json.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Certify one loop presentation (edge ids from `hyp graph`).
    CheckLoop {
        #[arg(long)]
        k: usize,
        /// Comma-separated unlabeled edge ids.
        #[arg(long = "loop")]
        loop_edges: String,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Subcommand)]
enum CastleCmd {
    Validate {
        #[command(flatten)]
        io: Io,
    },
    /// Forward diagonal change at a polygon (1-based).
    Move {
        #[arg(long)]
        index: usize,
        #[arg(long)]
        backward: bool,
        #[command(flatten)]
        io: Io,
    },
    Balance {
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Geodesic flow by an exact factor e^t.
    Flow {
        #[arg(long)]
        factor: String,
        #[command(flatten)]
        io: Io,
    },
    /// Poincaré return of the flow to the unit-width section.
    Return {
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Decompose a translation surface into castle polygons.
    FromSurface {
        #[command(flatten)]
        io: Io,
    },
    /// Iterate the return map until exact closure.
    Orbit {
        #[arg(long = "max-returns", default_value_t = 20)]
        max_returns: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Subcommand)]
enum SurfaceCmd {
    /// Genus, cone data, area.
    Info {
        #[command(flatten)]
        io: Io,
    },
    /// Saddle connections up to a length bound.
    Saddles {
        #[arg(long)]
        bound: String,
        #[command(flatten)]
        io: Io,
    },
    Systole {
        #[arg(long)]
        bound: String,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RenderKind {
    Quadrangulation,
    Castle,
    Surface,
}

#[derive(Debug)]
struct CliError {
    code: &'static str,
    message: String,
}

impl CliError {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::new("domain", e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "{{\"error\":\"{}\",\"message\":{}}}",
                e.code,
                serde_json::to_string(&e.message).unwrap()
            );
            ExitCode::FAILURE
        }
    }
}

fn read_input(io: &Io) -> Result<String, CliError> {
    match &io.input {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::new("io", format!("cannot read {path}: {e}"))),
        None => {
            let mut buf = String::new();
            std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf)
                .map_err(|e| CliError::new("io", e.to_string()))?;
            Ok(buf)
        }
    }
}

fn emit(io: &Io, text: String) -> Result<(), CliError> {
    match &io.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::new("io", format!("cannot write {path}: {e}"))),
        None => {
            let mut out = std::io::stdout();
            out.write_all(text.as_bytes())
                .and_then(|_| {
                    if text.ends_with('\n') {
                        Ok(())
                    } else {
                        out.write_all(b"\n")
                    }
                })
                .map_err(|e| CliError::new("io", e.to_string()))
        }
    }
}

fn scalar(text: &str) -> Result<Scalar, CliError> {
    parse_scalar(text).map_err(|e| CliError::new("parse", e.to_string()))
}

fn load_iet(io: &Io) -> Result<IetDatum, CliError> {
    serde_json::from_str(&read_input(io)?).map_err(|e| CliError::new("parse", e.to_string()))
}

fn load_quad(io: &Io) -> Result<Quadrangulation, CliError> {
    serde_json::from_str(&read_input(io)?).map_err(|e| CliError::new("parse", e.to_string()))
}

fn load_castle(io: &Io) -> Result<CastleSet, CliError> {
    serde_json::from_str(&read_input(io)?).map_err(|e| CliError::new("parse", e.to_string()))
}

fn load_surface(io: &Io) -> Result<TranslationSurface, CliError> {
    serde_json::from_str(&read_input(io)?).map_err(|e| CliError::new("parse", e.to_string()))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn parse_cycle(text: &str) -> Result<Cycle, CliError> {
    let (side, rest) = text
        .split_once(':')
        .ok_or_else(|| CliError::new("parse", "cycle must look like r:1,3"))?;
    let side = match side {
        "l" | "left" => Side::Left,
        "r" | "right" => Side::Right,
        _ => return Err(CliError::new("parse", "cycle side must be l or r")),
    };
    let mut support = Vec::new();
    for part in rest.split(',') {
        let idx: usize = part
            .trim()
            .parse()
            .map_err(|_| CliError::new("parse", "cycle indices are 1-based integers"))?;
        if idx == 0 {
            return Err(CliError::new("parse", "cycle indices are 1-based"));
        }
        support.push(idx - 1);
    }
    support.sort_unstable();
    Ok(Cycle { side, support })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Cf { value, digits, io } => {
            let x = scalar(&value)?;
            let expansion = iet::cf_digits(&x, digits)?;
            let rendered = match io.format {
                Format::Json => to_json(&serde_json::json!({
                    "digits": expansion.digits,
                    "terminated": expansion.terminated,
                })),
                _ => format!(
                    "[{}]{}",
                    expansion
                        .digits
                        .iter()
                        .map(|d| d.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                    if expansion.terminated {
                        " (terminated)"
                    } else {
                        ""
                    }
                ),
            };
            emit(&io, rendered)
        }
        Command::Rv { cmd } => match cmd {
            RvCmd::Step { io } => {
                let t = load_iet(&io)?;
                let step = t.rv_step()?;
                let rendered = match io.format {
                    Format::Json => to_json(&serde_json::json!({
                        "move": step.move_type.to_string(),
                        "winner": step.winner,
                        "loser": step.loser,
                        "next": step.next,
                    })),
                    _ => format!(
                        "{} move, winner {}, loser {}\n{:?}",
                        step.move_type, step.winner, step.loser, step.next
                    ),
                };
                emit(&io, rendered)
            }
            RvCmd::Fast { io } => {
                let t = load_iet(&io)?;
                let (next, n) = t.rv_fast()?;
                let rendered = match io.format {
                    Format::Json => to_json(&serde_json::json!({
                        "collapsed_steps": n,
                        "next": next,
                    })),
                    _ => format!("collapsed {n} steps\n{next:?}"),
                };
                emit(&io, rendered)
            }
            RvCmd::Orbit { steps, io } => {
                let mut t = load_iet(&io)?;
                let mut lines = Vec::new();
                for i in 0..steps {
                    let step = t.rv_step()?;
                    lines.push(format!(
                        "{i}: {} winner {} loser {} -> {:?}",
                        step.move_type, step.winner, step.loser, step.next
                    ));
                    t = step.next;
                }
                emit(&io, lines.join("\n"))
            }
        },
        Command::Rauzy { cmd } => match cmd {
            RauzyCmd::Class {
                perm,
                count,
                reduced,
                io,
            } => {
                let p =
                    PermPair::parse(&perm).map_err(|e| CliError::new("parse", e.to_string()))?;
                let class = iet::rauzy_class(&p)?;
                let n = if reduced {
                    class.reduced().vertex_count()
                } else {
                    class.vertex_count()
                };
                if count {
                    return emit(&io, n.to_string());
                }
                let rendered = match io.format {
                    Format::Json => {
                        let vertices: Vec<String> =
                            class.vertices.iter().map(|v| v.to_string()).collect();
                        to_json(&serde_json::json!({
                            "vertices": vertices,
                            "reduced_count": class.reduced().vertex_count(),
                        }))
                    }
                    Format::Dot => {
                        if reduced {
                            class.reduced().to_dot()
                        } else {
                            class.to_dot()
                        }
                    }
                    _ => format!(
                        "{} vertices ({} reduced)",
                        class.vertex_count(),
                        class.reduced().vertex_count()
                    ),
                };
                emit(&io, rendered)
            }
            RauzyCmd::Graph { perm, reduced, io } => {
                let p =
                    PermPair::parse(&perm).map_err(|e| CliError::new("parse", e.to_string()))?;
                let class = iet::rauzy_class(&p)?;
                let dot = if reduced {
                    class.reduced().to_dot()
                } else {
                    class.to_dot()
                };
                emit(&io, dot)
            }
        },
        Command::Hyp { cmd } => match cmd {
            HypCmd::Validate { io } => {
                let q = load_quad(&io)?;
                q.validate()?;
                emit(&io, format!("ok: k = {}, area = {}", q.k(), q.area()))
            }
            HypCmd::Move {
                cycle,
                backward,
                io,
            } => {
                let q = load_quad(&io)?;
                let c = parse_cycle(&cycle)?;
                let next = if backward {
                    hyp::backward_staircase_move(&q, &c)?
                } else {
                    hyp::staircase_move(&q, &c)?
                };
                emit(&io, to_json(&next))
            }
            HypCmd::Rotate { inverse, io } => {
                let q = load_quad(&io)?;
                let next = if inverse {
                    hyp::rotation_inverse(&q)
                } else {
                    hyp::rotation(&q)
                };
                emit(&io, to_json(&next))
            }
            HypCmd::Graph { io, unlabeled } => {
                let q = load_quad(&io)?;
                let g = hyp::dc_graph(&q.pi_l, &q.pi_r)?;
                if unlabeled {
                    let u = pa::unlabeled_graph(&g)?;
                    let rendered = match io.format {
                        Format::Json => to_json(&serde_json::json!({
                            "classes": u.class_count,
                            "degree": u.degree,
                            "edges": u.edges.len(),
                        })),
                        _ => u.to_dot(),
                    };
                    return emit(&io, rendered);
                }
                let rendered = match io.format {
                    Format::Json => to_json(&serde_json::json!({
                        "vertices": g.vertex_count(),
                        "edges": g.edges.len(),
                    })),
                    _ => g.to_dot(),
                };
                emit(&io, rendered)
            }
            HypCmd::Canonical { budget, io } => {
                let q = load_quad(&io)?;
                let canon = hyp::canonical_quadrangulation(&q, budget)?;
                let fr = hyp::hyp_first_return(&canon)?;
                let rendered = match io.format {
                    Format::Json => to_json(&serde_json::json!({
                        "canonical": canon,
                        "t0_log_arg": fr.log_arg.to_f64(),
                        "t0": fr.t0.value,
                    })),
                    _ => format!(
                        "t0 = -log({}) = {}\n{}",
                        fr.log_arg,
                        fr.t0.value,
                        to_json(&canon)
                    ),
                };
                emit(&io, rendered)
            }
            HypCmd::Label { start, io } => {
                let q = load_quad(&io)?;
                if start == 0 {
                    return Err(CliError::new("parse", "start is 1-based"));
                }
                let (relabeled, sigma) = hyp::cyclical_labeling(&q, start - 1)?;
                let rendered = match io.format {
                    Format::Json => to_json(&serde_json::json!({
                        "sigma": sigma.one_based(),
                        "relabeled": relabeled,
                    })),
                    _ => format!("sigma = {sigma}\n{}", to_json(&relabeled)),
                };
                emit(&io, rendered)
            }
        },
        Command::Pa { cmd } => match cmd {
            PaCmd::Enumerate {
                k,
                max_len,
                cap,
                json,
                io,
            } => {
                let report = pa::enumerate_pa(k, max_len, cap)?;
                let as_json = json || io.format == Format::Json;
                let rendered = if as_json {
                    let records: Vec<_> = report
                        .records
                        .iter()
                        .map(|(class, rec, power)| {
                            serde_json::json!({
                                "loop": class.0,
                                "sigma": rec.sigma.one_based(),
                                "charpoly": rec
                                    .char_poly
                                    .coeffs
                                    .iter()
                                    .map(|c| c.to_string())
                                    .collect::<Vec<_>>(),
                                "dilatation": rec.dilatation.value,
                                "dilatation_exact": rec
                                    .dilatation_exact
                                    .as_ref()
                                    .map(|d| d.to_string()),
                                "t0": rec.t0.value,
                                "lambda": rec.invariant.as_ref().map(|q| {
                                    q.wedges
                                        .iter()
                                        .flat_map(|w| [w.l.x.to_string(), w.r.x.to_string()])
                                        .collect::<Vec<_>>()
                                }),
                                "tau": rec.invariant.as_ref().map(|q| {
                                    q.wedges
                                        .iter()
                                        .flat_map(|w| [w.l.y.to_string(), w.r.y.to_string()])
                                        .collect::<Vec<_>>()
                                }),
                                "power": power,
                                "closure": format!("{:?}", rec.closure),
                            })
                        })
                        .collect();
                    to_json(&serde_json::json!({
                        "k": k,
                        "max_len": max_len,
                        "records": records,
                        "frontier": report.frontier,
                    }))
                } else {
                    let mut lines = vec![format!(
                        "{} classes up to loop length {max_len} (complete in length only)",
                        report.records.len()
                    )];
                    for (class, rec, power) in &report.records {
                        lines.push(format!(
                            "loop {:?} dilatation {:.12}{} sigma {} {}{}",
                            class.0,
                            rec.dilatation.value,
                            rec.dilatation_exact
                                .as_ref()
                                .map(|d| format!(" = {d}"))
                                .unwrap_or_default(),
                            rec.sigma,
                            match rec.closure {
                                pa::ClosureCheck::Exact => "closure exact",
                                pa::ClosureCheck::Approximate => "closure certified to tolerance",
                            },
                            power.map(|p| format!(" (power {p})")).unwrap_or_default(),
                        ));
                    }
                    if let Some(f) = report.frontier {
                        lines.push(format!(
                            "smallest dilatation among length-{} candidates: {f:.12}",
                            max_len + 1
                        ));
                    }
                    lines.join("\n")
                };
                emit(&io, rendered)
            }
            PaCmd::CheckLoop { k, loop_edges, io } => {
                let (pl, pr) = pa::hyperelliptic_seed(k)?;
                let labeled = hyp::dc_graph(&pl, &pr)?;
                let graph = pa::unlabeled_graph(&labeled)?;
                let edges: Vec<usize> = loop_edges
                    .split(',')
                    .map(|p| p.trim().parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| {
                        CliError::new("parse", "loop is a comma separated edge id list")
                    })?;
                if edges.is_empty() || edges.iter().any(|&e| e >= graph.edges.len()) {
                    return Err(CliError::new("parse", "edge id out of range"));
                }
                let start = (0..graph.vertex_class.len())
                    .find(|&v| graph.vertex_class[v] == graph.edges[edges[0]].from)
                    .ok_or_else(|| CliError::new("domain", "empty class"))?;
                let lifted = pa::lift_loop(&graph, &edges, start)?;
                let rec = pa::pa_record(&labeled, &lifted)?;
                emit(
                    &io,
                    format!(
                        "positive loop; sigma {}; dilatation {:.12}{}; closure {:?}",
                        rec.sigma,
                        rec.dilatation.value,
                        rec.dilatation_exact
                            .as_ref()
                            .map(|d| format!(" = {d}"))
                            .unwrap_or_default(),
                        rec.closure
                    ),
                )
            }
        },
        Command::Castle { cmd } => match cmd {
            CastleCmd::Validate { io } => {
                let set = load_castle(&io)?;
                set.validate()?;
                emit(
                    &io,
                    format!(
                        "ok: k = {}, forest {}, area {}",
                        set.k(),
                        set.forest,
                        set.area()
                    ),
                )
            }
            CastleCmd::Move {
                index,
                backward,
                io,
            } => {
                let set = load_castle(&io)?;
                if index == 0 {
                    return Err(CliError::new("parse", "index is 1-based"));
                }
                let (next, mv) = if backward {
                    castle::backward_move(&set, index - 1)?
                } else {
                    castle::forward_move(&set, index - 1)?
                };
                let rendered = match io.format {
                    Format::Json => to_json(&serde_json::json!({
                        "choice": mv.word(set.k()),
                        "next": next,
                    })),
                    _ => format!("choice {}\n{}", mv.word(set.k()), to_json(&next)),
                };
                emit(&io, rendered)
            }
            CastleCmd::Balance { budget, io } => {
                let set = load_castle(&io)?;
                let balanced = castle::balance(&set, budget)?;
                emit(&io, to_json(&balanced))
            }
            CastleCmd::Flow { factor, io } => {
                let set = load_castle(&io)?;
                let f = scalar(&factor)?;
                if f.try_signum()? <= 0 {
                    return Err(CliError::new("domain", "flow factor must be positive"));
                }
                emit(&io, to_json(&castle::teich_flow_castle(&set, &f)))
            }
            CastleCmd::Return { budget, io } => {
                let set = load_castle(&io)?;
                let ret = castle::first_return(&set, budget)?;
                let rendered = match io.format {
                    Format::Json => to_json(&serde_json::json!({
                        "t": ret.t.value,
                        "log_arg": ret.log_arg.to_f64(),
                        "moves": ret
                            .moves
                            .iter()
                            .map(|m| m.word(set.k()))
                            .collect::<Vec<_>>(),
                        "next": ret.next,
                    })),
                    _ => format!(
                        "t = {:.5}... (= -log({}))\nmoves: {}\n{}",
                        ret.t.value,
                        ret.log_arg,
                        ret.moves
                            .iter()
                            .map(|m| m.word(set.k()))
                            .collect::<Vec<_>>()
                            .join(" "),
                        to_json(&ret.next)
                    ),
                };
                emit(&io, rendered)
            }
            CastleCmd::FromSurface { io } => {
                let s = load_surface(&io)?;
                let set = castle::from_surface(&s)?;
                emit(&io, to_json(&set))
            }
            CastleCmd::Orbit {
                max_returns,
                budget,
                io,
            } => {
                let set = load_castle(&io)?;
                match castle::detect_closed_orbit(&set, max_returns, budget)? {
                    Some(orbit) => emit(
                        &io,
                        format!(
                            "closed after {} returns, sigma {}, period {} = log({})",
                            orbit.returns, orbit.relabeling, orbit.period.value, orbit.period_exp
                        ),
                    ),
                    None => emit(&io, format!("no closure within {max_returns} returns")),
                }
            }
        },
        Command::Surface { cmd } => match cmd {
            SurfaceCmd::Info { io } => {
                let s = load_surface(&io)?;
                let cone = s.build()?;
                let rendered = match io.format {
                    Format::Json => to_json(&serde_json::json!({
                        "genus": cone.genus,
                        "singularities": cone
                            .singularities
                            .iter()
                            .map(|(cycle, k)| {
                                serde_json::json!({"corners": cycle.len(), "cone_multiple": k})
                            })
                            .collect::<Vec<_>>(),
                        "area": s.area().to_f64(),
                    })),
                    _ => format!(
                        "genus {}, {} singularities with cone multiples {:?}, area {}",
                        cone.genus,
                        cone.singularities.len(),
                        cone.singularities
                            .iter()
                            .map(|(_, k)| *k)
                            .collect::<Vec<_>>(),
                        s.area()
                    ),
                };
                emit(&io, rendered)
            }
            SurfaceCmd::Saddles { bound, io } => {
                let s = load_surface(&io)?;
                let b = scalar(&bound)?;
                let cs = surface::saddle_connections(&s, &b)?;
                let rendered = match io.format {
                    Format::Json => {
                        let list: Vec<_> = cs
                            .iter()
                            .map(|c| {
                                serde_json::json!({
                                    "bundle": c.bundle.0,
                                    "holonomy": [
                                        c.holonomy.x.to_string(),
                                        c.holonomy.y.to_string()
                                    ],
                                    "horizontal": c.horizontal,
                                })
                            })
                            .collect();
                        to_json(&list)
                    }
                    _ => cs
                        .iter()
                        .map(|c| {
                            format!(
                                "bundle {} holonomy ({}, {}){}",
                                c.bundle.0,
                                c.holonomy.x,
                                c.holonomy.y,
                                if c.horizontal { " (horizontal)" } else { "" }
                            )
                        })
                        .collect::<Vec<_>>()
                        .join("\n"),
                };
                emit(&io, rendered)
            }
            SurfaceCmd::Systole { bound, io } => {
                let s = load_surface(&io)?;
                let b = scalar(&bound)?;
                let sys_sq = surface::systole_sq(&s, &b)?;
                emit(
                    &io,
                    format!(
                        "systole^2 = {} (systole = {})",
                        sys_sq,
                        sys_sq.to_f64().sqrt()
                    ),
                )
            }
        },
        Command::Render { kind, io } => {
            let text = read_input(&io)?;
            let svg = match kind {
                RenderKind::Quadrangulation => {
                    let q: Quadrangulation = serde_json::from_str(&text)
                        .map_err(|e| CliError::new("parse", e.to_string()))?;
                    render::render_quadrangulation(&q)
                }
                RenderKind::Castle => {
                    let set: CastleSet = serde_json::from_str(&text)
                        .map_err(|e| CliError::new("parse", e.to_string()))?;
                    render::render_castle(&set)
                }
                RenderKind::Surface => {
                    let s: TranslationSurface = serde_json::from_str(&text)
                        .map_err(|e| CliError::new("parse", e.to_string()))?;
                    render::render_surface(&s)
                }
            };
            emit(&io, svg)
        }
    }
}
