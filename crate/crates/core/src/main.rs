use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fintop::circle::{circle_fence, classify_homotopic, recognize_circle, CircleMap};
use fintop::complex::{barycentric, hasse_dot, order_complex};
use fintop::homotopy::{core, homotopic, Budget, HomotopyVerdict, Strategy};
use fintop::invariants::{
    cat_exact, cat_witness, enumerate_simple_colorings, refute_by_colorings, square_grid, tc_exact,
    tc_witness, Cover, ExactOptions, InvariantReport,
};
use fintop::space::{parse_space, write_space};
use fintop::witness::{build_u, build_v, verify_bundle, ChainReading, Torus};
use fintop::{product, Error, FiniteSpace, KhalimskyCircle, KhalimskyInterval, OrderMap};

/// Homotopy invariants of finite T0-spaces.
#[derive(Parser, Debug)]
#[command(name = "fintop", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Cap on maps stored or enumerated by homotopy searches.
    #[arg(long, global = true, env = "FINTOP_BUDGET")]
    budget: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
struct SpaceArgs {
    /// Khalimsky circle S^1_n.
    #[arg(long, group = "space")]
    circle: Option<usize>,
    /// Khalimsky interval [K, L].
    #[arg(long, num_args = 2, value_names = ["K", "L"], allow_negative_numbers = true, group = "space")]
    interval: Option<Vec<i64>>,
    /// Space file.
    #[arg(long, group = "space")]
    file: Option<PathBuf>,
    /// Use the product of the space with itself.
    #[arg(long)]
    square: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Auto,
    FenceBfs,
    CoreDegree,
    ExhaustiveComponents,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe a space, or print it as text or DOT.
    Space {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        dot: bool,
        /// Print the space file.
        #[arg(long)]
        write: bool,
    },
    /// Remove beat points down to a core.
    Core {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Decide whether two maps are homotopic. Map files hold a `circlemap`
    /// line or a whitespace separated value table.
    Homotopic {
        f: PathBuf,
        g: PathBuf,
        /// Source space file (for value tables).
        #[arg(long)]
        source: Option<PathBuf>,
        /// Target space file (for value tables).
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
        /// Print the fence certificate.
        #[arg(long)]
        fence: bool,
    },
    /// Degree of a circle map, with its lift over one period.
    Degree { map: PathBuf },
    /// Homotopy classification of two circle maps by degree.
    Classify {
        f: PathBuf,
        g: PathBuf,
        #[arg(long)]
        fence: bool,
    },
    /// LS-category.
    Cat {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Topological complexity.
    Tc {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Certify the built-in two-piece cover of S^1_k × S^1_k, k >= 5.
        #[arg(long)]
        builtin_witness: bool,
    },
    /// Simple colorings of the square decomposition of S^1_n × S^1_n.
    Colorings {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        colors: usize,
        #[arg(long)]
        no_symmetry: bool,
        /// Also certify that every coloring gives a failing cover.
        #[arg(long)]
        refute: bool,
    },
    /// Check the explicit cover of S^1_k × S^1_k and its retraction chain.
    VerifyWitness {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        report: Option<Format>,
        /// Read the retraction formulas word for word.
        #[arg(long)]
        literal: bool,
    },
    /// Write the order complex (or its subdivision) as .asc, or the Hasse
    /// diagram as DOT.
    ExportComplex {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        barycentric: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Recompute the table of known values.
    ReproducePaper,
}

#[derive(Args, Debug, Clone)]
struct SearchArgs {
    /// Exhaustive search over principal covers.
    #[arg(long)]
    exact: bool,
    /// Largest value to try in exact mode.
    #[arg(long, default_value_t = 4)]
    limit: usize,
    /// Cover file to certify.
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(long)]
    no_symmetry: bool,
    /// Allow exact search on more than 30 maximal elements.
    #[arg(long)]
    force: bool,
}

/// Exit status: 0 proven, 1 usage or input error, 2 undecided or bounds
/// only, 3 failed internal check.
enum Status {
    Ok,
    Bounds,
    Failed,
}

struct Output {
    text: String,
    json: Value,
    status: Status,
}

fn load_space(args: &SpaceArgs) -> Result<FiniteSpace, Error> {
    let base = if let Some(n) = args.circle {
        KhalimskyCircle::new(n)?.into_space()
    } else if let Some(b) = &args.interval {
        KhalimskyInterval::new(b[0], b[1])?.space().clone()
    } else if let Some(path) = &args.file {
        parse_space(&std::fs::read_to_string(path)?)?
    } else {
        return Err(Error::InvalidParameter(
            "give one of --circle, --interval or --file".into(),
        ));
    };
    Ok(if args.square { product(&base, &base) } else { base })
}

enum MapFile {
    Circle(CircleMap),
    Table(Vec<usize>),
}

fn read_map(path: &PathBuf) -> Result<MapFile, Error> {
    let text = std::fs::read_to_string(path)?;
    let body: String = text
        .lines()
        .filter(|l| !l.trim().starts_with('#'))
        .collect::<Vec<_>>()
        .join(" ");
    if body.trim_start().starts_with("circlemap") {
        return Ok(MapFile::Circle(CircleMap::parse(body.trim())?));
    }
    body.split_whitespace()
        .map(|w| {
            w.parse::<usize>().map_err(|_| Error::Parse {
                line: 0,
                message: format!("bad value '{w}'"),
            })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(MapFile::Table)
}

fn read_circle_map(path: &PathBuf) -> Result<CircleMap, Error> {
    match read_map(path)? {
        MapFile::Circle(c) => Ok(c),
        MapFile::Table(_) => Err(Error::InvalidParameter(format!(
            "{} is not a circlemap file",
            path.display()
        ))),
    }
}

fn to_order_map(
    file: MapFile,
    source: &Option<FiniteSpace>,
    target: &Option<FiniteSpace>,
) -> Result<OrderMap, Error> {
    match file {
        MapFile::Circle(c) => c.as_order_map(),
        MapFile::Table(t) => match (source, target) {
            (Some(s), Some(tg)) => OrderMap::new(s.clone(), tg.clone(), t),
            _ => Err(Error::InvalidParameter(
                "value tables need --source and --target".into(),
            )),
        },
    }
}

fn verdict_output(v: &HomotopyVerdict, show_fence: bool) -> Output {
    match v {
        HomotopyVerdict::Homotopic(fence) => {
            let mut text = format!("homotopic (fence of {} maps)\n", fence.len());
            if show_fence {
                text.push_str(&fence.to_text());
            }
            Output {
                text,
                json: json!({"verdict": "homotopic", "fence": fence.tables()}),
                status: Status::Ok,
            }
        }
        HomotopyVerdict::NotHomotopic(o) => Output {
            text: format!("not homotopic: {o:?}\n"),
            json: json!({"verdict": "not_homotopic", "obstruction": o}),
            status: Status::Ok,
        },
        HomotopyVerdict::Unknown(why) => Output {
            text: format!("unknown: {why}\n"),
            json: json!({"verdict": "unknown", "reason": why}),
            status: Status::Bounds,
        },
    }
}

fn report_output(r: &InvariantReport) -> Output {
    let name = match r.invariant {
        fintop::invariants::Invariant::Cat => "cat",
        fintop::invariants::Invariant::Tc => "tc",
    };
    let mut text = match r.value() {
        Some(v) => format!("{name}({}) = {v}\n", r.space),
        None => format!(
            "{} <= {name}({}) <= {}\n",
            r.lower,
            r.space,
            r.upper.map_or("?".to_string(), |u| u.to_string())
        ),
    };
    for (c, o) in &r.searched {
        let _ = writeln!(text, "  {c} pieces: {o:?}");
    }
    for n in &r.notes {
        let _ = writeln!(text, "  note: {n}");
    }
    if let Some(w) = &r.witness {
        text.push_str(&w.to_text());
    }
    let mut json = serde_json::to_value(r).unwrap_or(Value::Null);
    json["value"] = json!(r.value());
    json["witness"] = json!(r.witness.as_ref().map(|w| w.to_text()));
    Output {
        text,
        json,
        status: if r.value().is_some() {
            Status::Ok
        } else {
            Status::Bounds
        },
    }
}

fn exact_options(s: &SearchArgs, budget: Budget) -> ExactOptions {
    ExactOptions {
        limit: s.limit,
        force: s.force,
        symmetry: !s.no_symmetry,
        budget,
    }
}

/// Rows printed by `reproduce-paper`: (label, computed, expected).
fn reproduce(budget: &Budget) -> Result<Vec<(String, String, String)>, Error> {
    let mut rows = Vec::new();
    let fmt = |r: &InvariantReport| match r.value() {
        Some(v) => v.to_string(),
        None => format!("[{}, {}]", r.lower, r.upper.map_or("?".into(), |u| u.to_string())),
    };
    let opts = ExactOptions {
        budget: *budget,
        ..ExactOptions::default()
    };
    for (n, want) in [(2, 3), (3, 2), (4, 2)] {
        let c = KhalimskyCircle::new(n)?;
        let r = tc_exact(c.space(), &opts)?;
        rows.push((format!("tc(S1_{n}) exact"), fmt(&r), want.to_string()));
    }
    let grid = square_grid(4)?;
    let classes = enumerate_simple_colorings(&grid, 2, true)?;
    rows.push(("simple 2-colorings of S1_4^2, classes".into(), classes.len().to_string(), "2".into()));
    let refutation = refute_by_colorings(&grid, 2, budget)?;
    rows.push((
        "every 2-coloring of S1_4^2 fails".into(),
        refutation.refuted.to_string(),
        "true".into(),
    ));
    for k in 5..=7 {
        let t = Torus::new(k)?;
        let cover = Cover::new(
            t.space(),
            vec![build_u(k)?.into_members(), build_v(k)?.into_members()],
        )?;
        let r = tc_witness(t.circle().space(), &cover, budget)?;
        rows.push((format!("tc(S1_{k}) witness"), fmt(&r), "1".into()));
    }
    for k in 5..=7 {
        let r = verify_bundle(k, ChainReading::Repaired, budget)?;
        rows.push((
            format!("retraction chain onto C, k = {k}"),
            if r.passed { "verified" } else { "fails" }.into(),
            "verified".into(),
        ));
    }
    for n in 2..=6 {
        let c = KhalimskyCircle::new(n)?;
        rows.push((format!("cat(S1_{n})"), fmt(&cat_exact(c.space(), &opts)?), "1".into()));
    }
    for (n, want) in [(2, 3), (3, 2)] {
        let c = KhalimskyCircle::new(n)?;
        let sq = product(c.space(), c.space());
        rows.push((format!("cat(S1_{n} x S1_{n})"), fmt(&cat_exact(&sq, &opts)?), want.to_string()));
    }
    Ok(rows)
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let budget = cli.budget.map_or_else(Budget::default, Budget::with_maps);
    if budget.maps == 0 {
        return Err(Error::InvalidParameter("budget must be positive".into()));
    }
    match &cli.command {
        Command::Space { space, dot, write } => {
            let x = load_space(space)?;
            if *dot {
                let d = hasse_dot(&x)?;
                return Ok(Output { json: json!({"dot": d}), text: d, status: Status::Ok });
            }
            if *write {
                let t = write_space(&x);
                return Ok(Output { json: json!({"space": t}), text: t, status: Status::Ok });
            }
            let circle = recognize_circle(&x).map(|c| c.n);
            let c = core(&x);
            let info = json!({
                "name": x.name(),
                "points": x.len(),
                "maximal": x.maximal_elements().len(),
                "minimal": x.minimal_elements().len(),
                "covering_pairs": x.covering_pairs().len(),
                "core_points": c.len(),
                "circle_half": circle,
            });
            let text = format!(
                "{}: {} points, {} maximal, {} minimal, {} covering pairs, core of {} points{}\n",
                x.name(),
                x.len(),
                x.maximal_elements().len(),
                x.minimal_elements().len(),
                x.covering_pairs().len(),
                c.len(),
                circle.map_or(String::new(), |n| format!(", Khalimsky circle S1_{n}"))
            );
            Ok(Output { text, json: info, status: Status::Ok })
        }
        Command::Core { space } => {
            let x = load_space(space)?;
            let c = core(&x);
            if !c.sequence.replay() {
                return Ok(Output {
                    text: "collapse sequence failed to replay\n".into(),
                    json: json!({"error": "replay"}),
                    status: Status::Failed,
                });
            }
            let removals: Vec<Value> = c
                .sequence
                .removals
                .iter()
                .map(|r| json!({"point": r.point, "kind": r.kind, "witness": r.witness}))
                .collect();
            let circle = recognize_circle(c.space()).map(|n| n.n);
            let mut text = format!("core of {} has {} of {} points", x.name(), c.len(), x.len());
            if let Some(n) = circle {
                let _ = write!(text, " and is S1_{n}");
            }
            text.push('\n');
            let _ = writeln!(text, "kept: {:?}", c.subspace.embedding);
            for r in &c.sequence.removals {
                let _ = writeln!(text, "remove {} ({:?} beat, witness {})", r.point, r.kind, r.witness);
            }
            Ok(Output {
                text,
                json: json!({"points": c.len(), "kept": c.subspace.embedding, "removals": removals, "circle_half": circle}),
                status: Status::Ok,
            })
        }
        Command::Homotopic { f, g, source, target, strategy, fence } => {
            let source = source.as_ref().map(|p| std::fs::read_to_string(p).map_err(Error::from).and_then(|t| parse_space(&t))).transpose()?;
            let target = target.as_ref().map(|p| std::fs::read_to_string(p).map_err(Error::from).and_then(|t| parse_space(&t))).transpose()?;
            let f = to_order_map(read_map(f)?, &source, &target)?;
            let g = to_order_map(read_map(g)?, &source, &target)?;
            let strategy = match strategy {
                StrategyArg::Auto => Strategy::Auto,
                StrategyArg::FenceBfs => Strategy::FenceBfs,
                StrategyArg::CoreDegree => Strategy::CoreDegree,
                StrategyArg::ExhaustiveComponents => Strategy::ExhaustiveComponents,
            };
            let v = homotopic(&f, &g, strategy, &budget)?;
            if let HomotopyVerdict::Homotopic(fc) = &v {
                if fc.replay().is_err() || !fc.connects(&f, &g) {
                    return Ok(Output {
                        text: "fence certificate failed to replay\n".into(),
                        json: json!({"error": "fence"}),
                        status: Status::Failed,
                    });
                }
            }
            Ok(verdict_output(&v, *fence))
        }
        Command::Degree { map } => {
            let f = read_circle_map(map)?;
            let d = f.degree()?;
            let lift = f.lift(0, 2 * f.m() as i64, f.values()[0] as i64)?;
            Ok(Output {
                text: format!("degree {d}\nlift {:?}\n", lift.values),
                json: json!({"degree": d, "lift": lift.values}),
                status: Status::Ok,
            })
        }
        Command::Classify { f, g, fence } => {
            let f = read_circle_map(f)?;
            let g = read_circle_map(g)?;
            let same = classify_homotopic(&f, &g)?;
            let (df, dg) = (f.degree()?, g.degree()?);
            let mut text = format!(
                "deg f = {df}, deg g = {dg}: {}\n",
                if same { "homotopic" } else { "not homotopic" }
            );
            let mut maps = Vec::new();
            if *fence && same {
                if let Some(seq) = circle_fence(&f, &g)? {
                    for m in &seq {
                        let _ = writeln!(text, "{}", m.to_text());
                    }
                    maps = seq.iter().map(|m| m.to_text()).collect();
                }
            }
            Ok(Output {
                text,
                json: json!({"deg_f": df, "deg_g": dg, "homotopic": same, "fence": maps}),
                status: Status::Ok,
            })
        }
        Command::Cat { space, search } => {
            let x = load_space(space)?;
            let r = if let Some(path) = &search.witness {
                let cover = Cover::parse(&x, &std::fs::read_to_string(path)?)?;
                cat_witness(&x, &cover, &budget)?
            } else {
                cat_exact(&x, &exact_options(search, budget))?
            };
            Ok(report_output(&r))
        }
        Command::Tc { space, search, builtin_witness } => {
            let x = load_space(space)?;
            let r = if *builtin_witness {
                let k = space.circle.ok_or_else(|| {
                    Error::InvalidParameter("--builtin-witness needs --circle".into())
                })?;
                let xx = product(&x, &x);
                let cover = Cover::new(&xx, vec![build_u(k)?.into_members(), build_v(k)?.into_members()])?;
                tc_witness(&x, &cover, &budget)?
            } else if let Some(path) = &search.witness {
                let xx = product(&x, &x);
                let cover = Cover::parse(&xx, &std::fs::read_to_string(path)?)?;
                tc_witness(&x, &cover, &budget)?
            } else {
                tc_exact(&x, &exact_options(search, budget))?
            };
            Ok(report_output(&r))
        }
        Command::Colorings { n, colors, no_symmetry, refute } => {
            let grid = square_grid(*n)?;
            let classes = enumerate_simple_colorings(&grid, *colors, !no_symmetry)?;
            let mut text = format!("{} classes of simple {colors}-colorings\n", classes.len());
            for c in &classes {
                let _ = writeln!(text, "{} members:", c.members.len());
                for row in c.representative.rows() {
                    let _ = writeln!(text, "  {row}");
                }
            }
            let mut json = json!({
                "classes": classes.iter().map(|c| json!({"representative": c.representative.rows(), "members": c.members.len()})).collect::<Vec<_>>(),
            });
            let mut status = Status::Ok;
            if *refute {
                let r = refute_by_colorings(&grid, *colors, &budget)?;
                let _ = writeln!(
                    text,
                    "{} colorings: {} non-simple ({} refuted by a full line); every cover fails: {}",
                    r.total, r.non_simple, r.line_refuted, r.refuted
                );
                if !r.refuted {
                    status = Status::Bounds;
                }
                json["refutation"] = serde_json::to_value(&r).unwrap_or(Value::Null);
            }
            Ok(Output { text, json, status })
        }
        Command::VerifyWitness { k, report, literal } => {
            let reading = if *literal { ChainReading::Literal } else { ChainReading::Repaired };
            let r = verify_bundle(*k, reading, &budget)?;
            let json = serde_json::to_value(&r).unwrap_or(Value::Null);
            let mut text = format!("k = {}, m = {}, |U| = {}, |V| = {}, U ∪ V covers: {}\n", r.k, r.m, r.u_size, r.v_size, r.covers);
            for s in &r.stages {
                let _ = writeln!(
                    text,
                    "  {:4} domain {:4} image {:4} continuous {:5} vs previous {}{}",
                    s.name,
                    s.domain_size,
                    s.image_size,
                    s.continuous,
                    s.versus_previous.as_deref().unwrap_or("incomparable"),
                    s.violation.map_or(String::new(), |(p, q)| format!(" (breaks at {p:?} <= {q:?})"))
                );
            }
            let _ = writeln!(text, "  |C| = {}, n_C = {:?} (stated {}), core(U) has {} points", r.c.len(), r.n_c, r.claimed_n, r.core_u_size);
            if let Some(c) = &r.on_c {
                let _ = writeln!(text, "  on C: deg = ({}, {}), homotopic {}", c.deg_first, c.deg_second, c.homotopic);
            }
            let _ = writeln!(text, "  V: core of {} points, {}", r.core_v_size, r.v_verdict);
            for (name, p, q) in &r.literal_violations {
                let _ = writeln!(text, "  literal reading: {name} breaks at {p:?} <= {q:?}");
            }
            let _ = writeln!(text, "  checks: {:?}", r.checks);
            let _ = writeln!(text, "{}", if r.passed { "passed" } else { "FAILED" });
            let out = Output {
                text,
                json,
                status: if r.passed { Status::Ok } else { Status::Failed },
            };
            Ok(match report {
                Some(Format::Json) => Output {
                    text: serde_json::to_string_pretty(&out.json).unwrap_or_default() + "\n",
                    ..out
                },
                _ => out,
            })
        }
        Command::ExportComplex { space, out, barycentric: sd, dot } => {
            let x = load_space(space)?;
            let body = if *dot {
                hasse_dot(&x)?
            } else {
                if x.is_empty() {
                    return Err(Error::Empty("cannot export an empty space".into()));
                }
                let k = order_complex(&x);
                if *sd { barycentric(&k) } else { k }.to_asc()
            };
            if let Some(path) = out {
                std::fs::write(path, &body)?;
                Ok(Output {
                    text: format!("wrote {}\n", path.display()),
                    json: json!({"path": path}),
                    status: Status::Ok,
                })
            } else {
                Ok(Output { json: json!({"content": body}), text: body, status: Status::Ok })
            }
        }
        Command::ReproducePaper => {
            let rows = reproduce(&budget)?;
            let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
            let mut text = format!("{:width$}  {:>10}  {:>10}\n", "quantity", "computed", "expected");
            let mut all = true;
            for (label, got, want) in &rows {
                let ok = got == want;
                all &= ok;
                let _ = writeln!(text, "{label:width$}  {got:>10}  {want:>10}  {}", if ok { "ok" } else { "MISMATCH" });
            }
            Ok(Output {
                text,
                json: json!({"rows": rows.iter().map(|(l, g, w)| json!({"quantity": l, "computed": g, "expected": w})).collect::<Vec<_>>()}),
                status: if all { Status::Ok } else { Status::Failed },
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => {
                    let mut v = json!({"schema": 1});
                    v["result"] = out.json;
                    println!("{}", serde_json::to_string_pretty(&v).unwrap_or_default());
                }
            }
            ExitCode::from(match out.status {
                Status::Ok => 0,
                Status::Bounds => 2,
                Status::Failed => 3,
            })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
