//! `pcf`: properly coloured factors, their certificates, and the hardness
//! gadgets.
//!
//! Exit codes: 0 the object exists or the property holds, 3 exhaustively
//! refuted, 2 usage or parse error, 4 the harness found a divergence,
//! 5 a search cap was exceeded.

use std::fmt::Write as _;
use std::io::Read as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use pcf_core::certificate::{certify_via_witness, find_pc_factor, CertError, Certificate, SearchLimits};
use pcf_core::factor::{is_distance_d_coloured, is_distance_d_factor, is_rc_factor};
use pcf_core::format::{export_dot, export_plain_dot, parse_ecg, serialize_ecg, to_json, Instance};
use pcf_core::gadget::{build_gf, build_gfc, GadgetError, GadgetGraph};
use pcf_core::harness::{equivalence_harness, HarnessConfig, HarnessReport, SuiteTally};
use pcf_core::hypergraph::parse_hypergraph;
use pcf_core::kneser::{canonical_colouring, kneser};
use pcf_core::reduction::{build_d2c_gadget, build_rc_gadget};
use pcf_core::search::{factor_search, Condition, SearchCaps, SearchError};
use pcf_core::tutte::{deficiency_violation, gadget_violation, DeficiencyVariant};
use pcf_core::{ColouredGraph, DegreeSpec, EdgeSet};

#[derive(Parser)]
#[command(name = "pcf", version, about = "Properly coloured f-factors, certificates and hardness gadgets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ecg,
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Rc,
    D2c,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Rc,
    D2c,
    Pc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Classical,
    AsPrinted,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an ECG file and print per-vertex degrees.
    Check {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether a properly coloured f-factor exists.
    Find {
        file: String,
        #[arg(long)]
        json: bool,
        /// Re-check the emitted certificate from its JSON form.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = SearchLimits::default().max_palettes)]
        max_palettes: u128,
    },
    /// Emit the gadget graph G_f^c (default) or G_f.
    Gadget {
        file: String,
        #[arg(long, conflicts_with = "plain")]
        coloured: bool,
        #[arg(long)]
        plain: bool,
        #[arg(long, value_enum, default_value_t = Format::Ecg)]
        format: Format,
    },
    /// Certify via a Tutte witness of the gadget, or check a certificate.
    Certify {
        file: String,
        /// Certificate JSON to check (`-` for stdin).
        #[arg(long)]
        check: Option<String>,
    },
    /// Tutte's f-factor conditions on the underlying uncoloured graph.
    Tutte {
        file: String,
        #[arg(long, value_enum, default_value_t = Variant::Classical)]
        variant: Variant,
    },
    /// Build a hardness gadget from a 3-uniform hypergraph.
    Reduce {
        file: String,
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value_t = Format::Ecg)]
        format: Format,
    },
    /// Exhaustive factor search.
    Solve {
        file: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Factor degree for rc and d2c modes.
        #[arg(long)]
        r: Option<usize>,
        /// Distance for d2c mode.
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = SearchCaps::default().max_nodes)]
        max_nodes: u64,
        #[arg(long)]
        json: bool,
    },
    /// Kneser graph KG(n, k), or the canonical colouring of KG(2r-1, r-1).
    Kneser {
        #[arg(long, required_unless_present = "r", requires = "k")]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, conflicts_with_all = ["n", "k"])]
        r: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Ecg)]
        format: Format,
        /// Print size, regularity, girth and the distance-2 check instead.
        #[arg(long)]
        summary: bool,
    },
    /// Sweep small instances and compare the theorem forms.
    Equiv {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        fmax: usize,
        #[arg(long, default_value_t = 0)]
        sample: usize,
        #[arg(long, default_value_t = 5)]
        sample_n: usize,
        #[arg(long, default_value_t = 3)]
        sample_k: u32,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

enum Fail {
    Usage(String),
    Cap(String),
}

impl From<SearchError> for Fail {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::TooManyColours(_) => Fail::Usage(e.to_string()),
            _ => Fail::Cap(e.to_string()),
        }
    }
}

const YES: u8 = 0;
const NO: u8 = 3;
const DIVERGENCE: u8 = 4;

type Outcome = Result<u8, Fail>;

fn read(path: &str) -> Result<String, Fail> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Fail::Usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{path}: {e}")))
}

fn load(path: &str) -> Result<Instance, Fail> {
    parse_ecg(&read(path)?).map_err(|e| Fail::Usage(format!("{path}: {e}")))
}

fn factor_json(g: &ColouredGraph, factor: &EdgeSet) -> serde_json::Value {
    let graph = g.graph();
    factor
        .iter()
        .map(|e| {
            let (u, v) = graph.endpoints(e);
            json!([graph.name(u), graph.name(v), g.colour(e)])
        })
        .collect()
}

fn factor_text(g: &ColouredGraph, factor: &EdgeSet) -> String {
    let graph = g.graph();
    let mut out = String::new();
    for e in factor.iter() {
        let (u, v) = graph.endpoints(e);
        writeln!(out, "edge {} {} {}", graph.name(u), graph.name(v), g.colour(e)).unwrap();
    }
    out
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serialisable")
}

fn cmd_check(file: &str, as_json: bool) -> Outcome {
    let Instance { graph: g, f } = load(file)?;
    let graph = g.graph();
    if as_json {
        let vertices: Vec<_> = graph
            .vertices()
            .map(|v| json!({"id": graph.name(v), "f": f.get(v), "degree": graph.degree(v), "colour_degree": g.colour_degree(v)}))
            .collect();
        let out = json!({
            "valid": true,
            "vertices": vertices,
            "edges": g.edge_count(),
            "colours": g.k(),
            "properly_coloured": g.is_properly_coloured(),
        });
        println!("{}", pretty(&out));
    } else {
        println!("valid: {} vertices, {} edges, {} colours", g.vertex_count(), g.edge_count(), g.k());
        println!("properly coloured: {}", if g.is_properly_coloured() { "yes" } else { "no" });
        for v in graph.vertices() {
            println!("{} f={} degree={} colour-degree={}", graph.name(v), f.get(v), graph.degree(v), g.colour_degree(v));
        }
    }
    Ok(YES)
}

fn replay_command(file: &str) -> String {
    format!("pcf certify {file} --check <certificate.json>")
}

fn verify_round_trip(g: &ColouredGraph, f: &DegreeSpec, cert: &serde_json::Value) -> Result<(), CertError> {
    Certificate::from_json(g, f, cert)?.verify(g, f)
}

fn cmd_find(file: &str, as_json: bool, verify: bool, max_palettes: u128) -> Outcome {
    let Instance { graph: g, f } = load(file)?;
    let cert = match find_pc_factor(&g, &f, SearchLimits { max_palettes }) {
        Ok(c) => c,
        Err(e @ CertError::SearchCapExceeded { .. }) => return Err(Fail::Cap(e.to_string())),
        Err(e) => return Err(Fail::Usage(e.to_string())),
    };
    let mut value = cert.to_json(&g, &f, (!cert.is_positive()).then(|| replay_command(file)).as_deref());
    if verify {
        match verify_round_trip(&g, &f, &value) {
            Ok(()) => value["verified"] = true.into(),
            Err(e) => return Err(Fail::Usage(format!("certificate failed to verify: {e}"))),
        }
    }
    if as_json || !cert.is_positive() {
        if !as_json {
            println!("no");
        }
        println!("{}", pretty(&value));
    } else if let Certificate::Positive { factor } = &cert {
        println!("yes");
        print!("{}", factor_text(&g, factor));
        if verify {
            println!("verified");
        }
    }
    Ok(if cert.is_positive() { YES } else { NO })
}

fn emit_gadget(gg: &GadgetGraph, source: &ColouredGraph, format: Format) {
    match format {
        Format::Ecg => print!("{}", gg.to_ecg()),
        Format::Dot => print!("{}", gg.to_dot()),
        Format::Json => println!("{}", pretty(&gg.to_json(source))),
    }
}

fn cmd_gadget(file: &str, plain: bool, format: Format) -> Outcome {
    let Instance { graph: g, f } = load(file)?;
    let built = if plain { build_gf(g.graph(), &f) } else { build_gfc(&g, &f) };
    match built {
        Ok(gg) => {
            emit_gadget(&gg, &g, format);
            Ok(YES)
        }
        Err(e @ GadgetError::Infeasible { .. }) => {
            eprintln!("no: {e}");
            Ok(NO)
        }
        Err(e) => Err(Fail::Usage(e.to_string())),
    }
}

fn cmd_certify(file: &str, check: Option<&str>) -> Outcome {
    let Instance { graph: g, f } = load(file)?;
    if let Some(path) = check {
        let text = read(path)?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| Fail::Usage(format!("{path}: {e}")))?;
        return match verify_round_trip(&g, &f, &value) {
            Ok(()) => {
                let verdict = value["verdict"].as_str().unwrap_or("?");
                println!("certificate valid: {verdict}");
                Ok(YES)
            }
            Err(e) => {
                println!("certificate rejected: {e}");
                Ok(NO)
            }
        };
    }
    let cert = certify_via_witness(&g, &f);
    let value = cert.to_json(&g, &f, (!cert.is_positive()).then(|| replay_command(file)).as_deref());
    println!("{}", pretty(&value));
    Ok(if cert.is_positive() { YES } else { NO })
}

const TUTTE_VERTEX_CAP: usize = 12;

fn cmd_tutte(file: &str, variant: Variant) -> Outcome {
    let Instance { graph: g, f } = load(file)?;
    let graph = g.graph();
    if graph.vertex_count() > TUTTE_VERTEX_CAP {
        return Err(Fail::Cap(format!("{} vertices, cap is {TUTTE_VERTEX_CAP}", graph.vertex_count())));
    }
    let names = |vs: &[usize]| vs.iter().map(|&v| graph.name(v)).collect::<Vec<_>>().join(",");
    let variant = match variant {
        Variant::Classical => DeficiencyVariant::Classical,
        Variant::AsPrinted => DeficiencyVariant::AsPrinted,
    };
    let deficiency = deficiency_violation(graph, &f, variant);
    match &deficiency {
        None => println!("deficiency form: holds for every (S, T)"),
        Some((s, t, d)) => println!("deficiency form: fails at S={{{}}} T={{{}}} gamma={} h={}", names(s), names(t), d.gamma, d.h),
    }
    let gadget = match build_gf(graph, &f) {
        Ok(gg) => {
            let v = gadget_violation(&gg);
            match &v {
                None => println!("gadget form: holds for every (S, T)"),
                Some((s, t, c)) => {
                    println!("gadget form: fails at S={{{}}} T={{{}}} odd={} |X|={}", names(s), names(t), c.odd, c.x.len())
                }
            }
            v.is_none()
        }
        Err(e) => {
            println!("gadget form: {e}");
            false
        }
    };
    if deficiency.is_none() != gadget && variant == DeficiencyVariant::Classical {
        println!("divergence");
        return Ok(DIVERGENCE);
    }
    Ok(if deficiency.is_none() { YES } else { NO })
}

fn emit_coloured(g: &ColouredGraph, f: &DegreeSpec, format: Format) {
    match format {
        Format::Ecg => print!("{}", serialize_ecg(g, f)),
        Format::Dot => print!("{}", export_dot(g, Some(f), None)),
        Format::Json => println!("{}", to_json(g, f)),
    }
}

fn cmd_reduce(file: &str, target: Target, r: usize, format: Format) -> Outcome {
    let text = read(file)?;
    let h = parse_hypergraph(&text).map_err(|e| Fail::Usage(format!("{file}: {e}")))?;
    let g = match target {
        Target::Rc => build_rc_gadget(&h, r).map(|x| x.graph),
        Target::D2c => build_d2c_gadget(&h, r).map(|x| x.graph),
    }
    .map_err(|e| Fail::Usage(e.to_string()))?;
    let f = DegreeSpec::constant(g.vertex_count(), r);
    emit_coloured(&g, &f, format);
    Ok(YES)
}

fn cmd_solve(file: &str, mode: Mode, r: Option<usize>, d: usize, max_nodes: u64, as_json: bool) -> Outcome {
    if let Mode::Pc = mode {
        return cmd_find(file, as_json, false, SearchLimits::default().max_palettes);
    }
    let Instance { graph: g, .. } = load(file)?;
    let r = r.ok_or_else(|| Fail::Usage("--r is required for rc and d2c modes".into()))?;
    let target = DegreeSpec::constant(g.vertex_count(), r);
    let cond = match mode {
        Mode::Rc => Condition::Rainbow,
        Mode::D2c => Condition::Distance(d),
        Mode::Pc => unreachable!(),
    };
    let caps = SearchCaps { max_nodes, ..SearchCaps::default() };
    let (found, stats) = factor_search(&g, &target, cond, caps)?;
    if let Some(factor) = &found {
        let ok = match mode {
            Mode::Rc => is_rc_factor(&g, factor, r),
            _ => is_distance_d_factor(&g, factor, r, d),
        };
        assert!(ok, "solver returned an invalid factor");
    }
    if as_json {
        let out = json!({
            "verdict": if found.is_some() { "yes" } else { "no" },
            "factor": found.as_ref().map(|x| factor_json(&g, x)),
            "nodes": stats.nodes,
        });
        println!("{}", pretty(&out));
    } else {
        match &found {
            Some(factor) => {
                println!("yes");
                print!("{}", factor_text(&g, factor));
            }
            None => println!("no"),
        }
    }
    Ok(if found.is_some() { YES } else { NO })
}

fn cmd_kneser(n: Option<usize>, k: Option<usize>, r: Option<usize>, format: Format, summary: bool) -> Outcome {
    let (g, label) = match (n, k, r) {
        (_, _, Some(r)) => {
            let g = canonical_colouring(r).map_err(|e| Fail::Usage(e.to_string()))?;
            (g, format!("canonical colouring of KG({}, {})", 2 * r - 1, r - 1))
        }
        (Some(n), Some(k), None) => {
            let plain = kneser(n, k).map_err(|e| Fail::Usage(e.to_string()))?;
            let m = plain.edge_count();
            (ColouredGraph::from_graph(plain, vec![1; m], 1), format!("KG({n}, {k})"))
        }
        _ => return Err(Fail::Usage("give --n and --k, or --r".into())),
    };
    let graph = g.graph();
    let f = DegreeSpec::new(graph.vertices().map(|v| graph.degree(v)).collect());
    if summary {
        let degrees: std::collections::BTreeSet<usize> = f.values().iter().copied().collect();
        let all: EdgeSet = (0..g.edge_count()).collect();
        println!("{label}");
        println!("vertices {}", g.vertex_count());
        println!("edges {}", g.edge_count());
        println!("degrees {:?}", degrees);
        match graph.girth() {
            Some(girth) => println!("girth {girth}"),
            None => println!("girth none"),
        }
        if r.is_some() {
            println!("distance-2 coloured: {}", if is_distance_d_coloured(&g, &all, 2) { "yes" } else { "no" });
        }
        return Ok(YES);
    }
    match format {
        Format::Ecg => print!("{}", serialize_ecg(&g, &f)),
        Format::Dot => print!("{}", if r.is_some() { export_dot(&g, None, None) } else { export_plain_dot(graph) }),
        Format::Json => println!("{}", to_json(&g, &f)),
    }
    Ok(YES)
}

fn tally_line(out: &mut String, name: &str, t: &SuiteTally) {
    writeln!(out, "{name}: checked {}, divergences {}", t.checked, t.divergences).unwrap();
    for d in &t.examples {
        writeln!(out, "  example: {}", d.detail).unwrap();
        for line in d.instance.lines() {
            writeln!(out, "    {line}").unwrap();
        }
    }
}

fn report_text(r: &HarnessReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "instances {} (infeasible {}, positive {}, negative {}), palettes {}",
        r.instances, r.infeasible, r.positive, r.negative, r.palettes
    )
    .unwrap();
    tally_line(&mut out, "suite a (matching vs palettes)", &r.suite_a);
    for (rule, t) in &r.suite_b {
        tally_line(&mut out, &format!("suite b [{}] (violating vs inequality)", rule.name()), &t.instances);
        writeln!(
            out,
            "  palette mismatches {}, bridging failures {} in {} instances",
            t.palette_mismatches, t.bridging_failures, t.bridging_instances
        )
        .unwrap();
    }
    tally_line(&mut out, "suite c (proper colourings)", &r.suite_c);
    writeln!(out, "hard divergences {}", r.hard_divergences()).unwrap();
    out
}

#[allow(clippy::too_many_arguments)]
fn cmd_equiv(
    n: usize,
    k: u32,
    fmax: usize,
    sample: usize,
    sample_n: usize,
    sample_k: u32,
    seed: u64,
    jobs: Option<usize>,
    as_json: bool,
) -> Outcome {
    if n == 0 || k == 0 || sample_k == 0 {
        return Err(Fail::Usage("--n, --k and --sample-k must be positive".into()));
    }
    if n > 5 || sample_n > 8 {
        return Err(Fail::Cap("exhaustive part is capped at n = 5, sampled part at 8 vertices".into()));
    }
    let config = HarnessConfig { n, k, fmax, sample, sample_n, sample_k, seed };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Fail::Usage(e.to_string()))?;
    let report = pool.install(|| equivalence_harness(&config));
    if as_json {
        println!("{}", pretty(&json!({"config": config, "report": report})));
    } else {
        print!("{}", report_text(&report));
    }
    Ok(if report.hard_divergences() > 0 { DIVERGENCE } else { YES })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { file, json } => cmd_check(&file, json),
        Command::Find { file, json, verify, max_palettes } => cmd_find(&file, json, verify, max_palettes),
        Command::Gadget { file, plain, format, .. } => cmd_gadget(&file, plain, format),
        Command::Certify { file, check } => cmd_certify(&file, check.as_deref()),
        Command::Tutte { file, variant } => cmd_tutte(&file, variant),
        Command::Reduce { file, target, r, format } => cmd_reduce(&file, target, r, format),
        Command::Solve { file, mode, r, d, max_nodes, json } => cmd_solve(&file, mode, r, d, max_nodes, json),
        Command::Kneser { n, k, r, format, summary } => cmd_kneser(n, k, r, format, summary),
        Command::Equiv { n, k, fmax, sample, sample_n, sample_k, seed, jobs, json } => {
            cmd_equiv(n, k, fmax, sample, sample_n, sample_k, seed, jobs, json)
        }
    }
}

fn main() -> ExitCode {
    // die quietly when piped into `head`
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Cap(m)) => {
            eprintln!("error: cap exceeded: {m}");
            ExitCode::from(5)
        }
    }
}
