//! `cgk`: character-degree graph analysis from the command line.
//!
//! Exit status is 0 on success, 1 when a checked property fails, and 2 on
//! usage, domain, lookup or capacity errors.

use std::process::ExitCode;

use cgk_core::catalog::{Catalog, DegreeSet, GroupRecord};
use cgk_core::graph::{
    self, bipartition, build, clique_number, complement, components, diam3_partition, diameter, parse_shape, shape_of,
    CharacterGraph, Diam3Partition, Diameter,
};
use cgk_core::numtheory::{self, PrimeSet};
use cgk_core::scanner::{self, CatalogReport, Parity, ScanRecord, ScanShape};
use cgk_core::steinberg::{self, make_field, SearchLimits, SteinbergReport, TensorVector};
use cgk_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "cgk", version, about = "Character-degree graphs of finite groups")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full graph report for a character degree set.
    Analyze {
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u64>,
    },
    /// Catalog lookup plus graph report; also accepts PSL2(q).
    Group { name: String },
    #[command(subcommand)]
    Scan(ScanCommand),
    #[command(subcommand)]
    Nt(NtCommand),
    /// Stabilizers in the twisted tensor modules V_J of SL2(2^f).
    Steinberg(SteinbergArgs),
    /// Write a graph as DOT or JSON.
    Export(ExportArgs),
}

#[derive(Debug, Subcommand)]
enum ScanCommand {
    /// One record per prime power q in range.
    Psl2 {
        #[arg(long)]
        max_q: u64,
        #[arg(long, default_value_t = 4)]
        min_q: u64,
        /// Only list q whose graph is isomorphic to this shape.
        #[arg(long)]
        shape: Option<String>,
        /// Only list K4-free graphs.
        #[arg(long)]
        k4_free: bool,
        #[arg(long, value_enum, default_value_t = ParityArg::Any)]
        parity: ParityArg,
        /// Print only the family-wide summary.
        #[arg(long)]
        summary: bool,
    },
    /// Analyze the bundled catalog and check the classification statements.
    Catalog,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ParityArg {
    Any,
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Any => Parity::Any,
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Debug, Subcommand)]
enum NtCommand {
    /// Solutions of p^f + 1 = r^m.
    Catalan {
        #[arg(long, default_value_t = 50)]
        pmax: u64,
        #[arg(long, default_value_t = 30)]
        fmax: u32,
        #[arg(long, default_value_t = 1_000_000)]
        rmax: u64,
        #[arg(long, default_value_t = 20)]
        mmax: u32,
    },
    /// Least primitive prime divisor of p^n - 1.
    Zsigmondy {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
    /// Classify q = 2^f by the sizes of π(q ± 1).
    Interest {
        #[arg(long, default_value_t = 2)]
        fmin: u32,
        #[arg(long, default_value_t = 30)]
        fmax: u32,
    },
    /// Which f have |π(2^f - 1)| = |π(2^f + 1)| = 2.
    Evenfive {
        #[arg(long, default_value_t = 30)]
        fmax: u32,
    },
    /// Prime factorization.
    Factor { n: u64 },
}

#[derive(Debug, Args)]
struct SteinbergArgs {
    #[arg(long)]
    f: u32,
    /// Strictly increasing twist indices below f.
    #[arg(long = "J", value_delimiter = ',', required = true)]
    j: Vec<u32>,
    /// Stabilizer of the vector built from min(J).
    #[arg(long, conflicts_with_all = ["find_regular", "vector"])]
    center_vector: bool,
    /// Lexicographically first vector with trivial stabilizer.
    #[arg(long, conflicts_with = "vector")]
    find_regular: bool,
    /// Stabilizer of the vector with these coefficients.
    #[arg(long, value_delimiter = ',')]
    vector: Option<Vec<u16>>,
    /// Vectors examined before --find-regular gives up.
    #[arg(long, default_value_t = 1 << 24)]
    budget: u64,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["degrees", "group"])))]
struct ExportArgs {
    /// Graphviz DOT; the global `--json` selects
    /// `{"vertices": [...], "edges": [[a, b], ...]}` instead.
    #[arg(long)]
    dot: bool,
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<u64>>,
    #[arg(long)]
    group: Option<String>,
}

/// Caps read from `CGK_MAX_F` and `CGK_MAX_Q`.
#[derive(Debug, Clone, Copy)]
struct Caps {
    max_f: u32,
    max_q: u64,
}

impl Caps {
    fn from_env() -> Result<Self, Error> {
        fn read<T: std::str::FromStr>(key: &str, default: T) -> Result<T, Error> {
            match std::env::var(key) {
                Ok(v) => v.trim().parse().map_err(|_| Error::Domain(format!("{key}={v:?} is not a valid number"))),
                Err(_) => Ok(default),
            }
        }
        Ok(Caps {
            max_f: read("CGK_MAX_F", SearchLimits::default().max_f)?,
            max_q: read("CGK_MAX_Q", scanner::DEFAULT_MAX_Q)?,
        })
    }
}

/// Command output plus whether a checked property failed.
#[derive(Debug, Default)]
struct Output {
    text: String,
    violation: bool,
}

impl Output {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn json<T: Serialize>(&mut self, value: &T) {
        self.line(serde_json::to_string(value).expect("reports serialize"));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct GraphReport {
    degrees: Vec<u64>,
    vertices: Vec<u64>,
    edges: Vec<[u64; 2]>,
    components: Vec<PrimeSet>,
    diameter: Diameter,
    clique_number: usize,
    k4_free: bool,
    path5: bool,
    /// Canonical union/join expression, when the graph is a cograph.
    shape: Option<String>,
    /// A bipartition of the complement, when it is bipartite.
    complement_bipartition: Option<[PrimeSet; 2]>,
    /// Only for diameter three.
    partition: Option<Diam3Partition>,
}

fn graph_report(degrees: &DegreeSet) -> Result<GraphReport, Error> {
    let g = build(degrees);
    let clique = clique_number(&g)?;
    let d = diameter(&g);
    let partition = if d == Diameter::Finite(3) { diam3_partition(&g)? } else { None };
    Ok(GraphReport {
        degrees: degrees.iter().collect(),
        vertices: g.vertices().to_vec(),
        edges: g.edges().map(|(a, b)| [a, b]).collect(),
        components: components(&g),
        diameter: d,
        clique_number: clique,
        k4_free: clique <= 3,
        path5: graph::is_path5(&g),
        shape: shape_of(&g).map(|s| s.to_string()),
        complement_bipartition: bipartition(&complement(&g)).map(|(a, b)| [a, b]),
        partition,
    })
}

fn set_str(s: &PrimeSet) -> String {
    let items: Vec<String> = s.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn list_str<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn write_graph_report(out: &mut Output, r: &GraphReport) {
    out.line(format!("degrees: {}", list_str(&r.degrees)));
    out.line(format!("vertices: {}", list_str(&r.vertices)));
    out.line(format!("edges: {}", list_str(r.edges.iter().map(|[a, b]| format!("{a}-{b}")))));
    out.line(format!("components: {}", list_str(r.components.iter().map(set_str))));
    out.line(format!("diameter: {}, clique: {}, K4-free: {}", r.diameter, r.clique_number, yes_no(r.k4_free)));
    out.line(format!("shape: {}", r.shape.as_deref().unwrap_or("not a cograph")));
    match &r.complement_bipartition {
        Some([a, b]) => out.line(format!("complement bipartite: yes {} | {}", set_str(a), set_str(b))),
        None => out.line("complement bipartite: no"),
    }
    if r.diameter == Diameter::Finite(3) {
        match &r.partition {
            Some(p) => out.line(format!(
                "partition: ρ1={} ρ2={} ρ3={} ρ4={}",
                set_str(&p.rho1),
                set_str(&p.rho2),
                set_str(&p.rho3),
                set_str(&p.rho4)
            )),
            None => out.line("partition: none"),
        }
    }
    if r.path5 {
        out.line("path on five vertices: yes");
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GroupReport {
    record: GroupRecord,
    graph: GraphReport,
}

fn analyze(out: &mut Output, json: bool, degrees: Vec<u64>) -> Result<(), Error> {
    let report = graph_report(&DegreeSet::new(degrees)?)?;
    if json {
        out.json(&report);
    } else {
        write_graph_report(out, &report);
    }
    Ok(())
}

fn group(out: &mut Output, json: bool, name: &str) -> Result<(), Error> {
    let record = Catalog::bundled().resolve(name)?;
    let graph = graph_report(&record.degrees)?;
    if json {
        out.json(&GroupReport { record, graph });
        return Ok(());
    }
    out.line(format!("group: {}", record.name));
    let canonical = cgk_core::catalog::canonical_name(&record.name);
    if canonical != record.name {
        out.line(format!("isomorphic to: {canonical}"));
    }
    if let Some(order) = record.order {
        out.line(format!("order: {order}"));
    }
    out.line(format!("source: {}", serde_json::to_value(record.source).expect("serializes").as_str().unwrap_or("")));
    write_graph_report(out, &graph);
    Ok(())
}

fn shape_cell(s: &ScanShape) -> String {
    match s {
        ScanShape::Expr(e) => e.clone(),
        ScanShape::Components(sizes) => format!("components {}", list_str(sizes)),
    }
}

fn scan_row(r: &ScanRecord) -> String {
    format!(
        "{:>10}  {:>7}^{:<3} {:<5} ω={} |π(q-1)|={} |π(q+1)|={}  {}",
        r.q,
        r.u,
        r.alpha,
        if r.k4_free { "K4-free" } else { "K4" },
        r.clique_number,
        r.pi_minus,
        r.pi_plus,
        shape_cell(&r.shape)
    )
}

#[allow(clippy::too_many_arguments)]
fn scan_psl2(
    out: &mut Output,
    json: bool,
    caps: Caps,
    min_q: u64,
    max_q: u64,
    shape: Option<String>,
    k4_free: bool,
    parity: Parity,
    summary_only: bool,
) -> Result<(), Error> {
    if let Some(text) = shape {
        let expr = parse_shape(&text)?;
        let qs: Vec<u64> = scanner::find_shape_instances(&expr, max_q, parity, caps.max_q)?
            .into_iter()
            .filter(|&q| q >= min_q)
            .collect();
        if json {
            out.json(&serde_json::json!({ "shape": expr.to_string(), "q": qs }));
        } else {
            out.line(format!("shape {expr}: {} match(es)", qs.len()));
            for q in qs {
                out.line(q.to_string());
            }
        }
        return Ok(());
    }
    let records = scanner::scan_psl2(min_q, max_q, caps.max_q)?;
    let summary = scanner::scan_summary(&records);
    out.violation = !summary.passed;
    let admits = |q: u64| match parity {
        Parity::Any => true,
        Parity::Even => q.is_multiple_of(2),
        Parity::Odd => q % 2 == 1,
    };
    let shown: Vec<&ScanRecord> = records.iter().filter(|r| admits(r.q) && (!k4_free || r.k4_free)).collect();
    if json {
        if summary_only {
            out.json(&summary);
        } else {
            for r in shown {
                out.json(r);
            }
        }
        return Ok(());
    }
    if !summary_only {
        for r in shown {
            out.line(scan_row(r));
        }
    }
    out.line(format!(
        "{} prime powers, {} K4-free, K4 flag disagreements: {}, connected graphs: {}",
        summary.records,
        summary.k4_free,
        summary.k4_disagreements.len(),
        summary.connected.len()
    ));
    out.line(if summary.passed { "PASS" } else { "FAIL" });
    Ok(())
}

fn write_catalog_report(out: &mut Output, report: &CatalogReport) {
    for r in &report.rows {
        out.line(format!(
            "{:<9} |ρ|={:<2} edges={:<3} ω={} K4-free={:<3} listed={:<3} components={} diameter={}",
            r.name,
            r.vertices.len(),
            r.edge_count,
            r.clique_number,
            yes_no(r.k4_free),
            yes_no(r.on_k4_free_list),
            r.component_count,
            r.diameter
        ));
    }
    for a in &report.assertions {
        if a.passed {
            out.line(format!("PASS {}", a.name));
        } else {
            out.line(format!("FAIL {}: {}", a.name, a.failures.join("; ")));
        }
    }
}

fn scan_catalog(out: &mut Output, json: bool) -> Result<(), Error> {
    let report = scanner::verify_catalog(Catalog::bundled())?;
    out.violation = !report.passed;
    if json {
        out.json(&report);
    } else {
        write_catalog_report(out, &report);
    }
    Ok(())
}

fn nt(out: &mut Output, json: bool, cmd: NtCommand) -> Result<(), Error> {
    match cmd {
        NtCommand::Catalan { pmax, fmax, rmax, mmax } => {
            let sols = numtheory::catalan_solutions(pmax, fmax, rmax, mmax);
            out.violation = sols.iter().any(|s| s.case.is_none());
            if json {
                out.json(&sols);
            } else {
                for s in &sols {
                    let case = s.case.map_or("unclassified".to_string(), |c| format!("{c:?}"));
                    out.line(format!("{}^{} + 1 = {}^{}  case {case}", s.p, s.f, s.r, s.m));
                }
            }
        }
        NtCommand::Zsigmondy { p, n } => {
            let z = numtheory::zsigmondy(p, n)?;
            if json {
                out.json(&serde_json::json!({ "p": p, "n": n, "prime": z }));
            } else {
                out.line(match z {
                    Some(t) => format!("{t}"),
                    None => "none".to_string(),
                });
            }
        }
        NtCommand::Interest { fmin, fmax } => {
            if fmin > fmax {
                return Err(Error::Domain(format!("fmin = {fmin} exceeds fmax = {fmax}")));
            }
            let cases = (fmin..=fmax).map(numtheory::classify_interest).collect::<Result<Vec<_>, _>>()?;
            out.violation = cases.iter().any(|c| c.condition_holds && c.tag.is_none());
            if json {
                out.json(&cases);
            } else {
                for c in &cases {
                    let tag = match (c.condition_holds, c.tag) {
                        (false, _) => "-".to_string(),
                        (true, Some(t)) => format!("{t:?}"),
                        (true, None) => "unclassified".to_string(),
                    };
                    out.line(format!(
                        "f={:<3} q-1 = {:<28} q+1 = {:<28} {tag}",
                        c.f,
                        c.q_minus_one.to_string(),
                        c.q_plus_one.to_string()
                    ));
                }
            }
        }
        NtCommand::Evenfive { fmax } => {
            let rows = numtheory::evenfive_scan(fmax)?;
            out.violation = rows.iter().any(|r| !r.consistent);
            if json {
                out.json(&rows);
            } else {
                for r in &rows {
                    out.line(format!(
                        "f={:<3} |π(q-1)|={} |π(q+1)|={} both={:<3} either={:<3} {}",
                        r.f,
                        r.pi_minus,
                        r.pi_plus,
                        yes_no(r.holds),
                        yes_no(r.holds_either),
                        if r.consistent { "ok" } else { "INCONSISTENT" }
                    ));
                }
            }
        }
        NtCommand::Factor { n } => {
            let fac = numtheory::factor(n)?;
            if json {
                out.json(&fac);
            } else {
                out.line(format!("{n} = {fac}"));
            }
        }
    }
    Ok(())
}

fn steinberg_cmd(out: &mut Output, json: bool, caps: Caps, args: SteinbergArgs) -> Result<(), Error> {
    let ctx = make_field(args.f)?;
    let limits = SearchLimits { max_f: caps.max_f, vector_budget: args.budget };
    steinberg::validate_j(&ctx, &args.j)?;
    let j = args.j;
    let vector = if args.center_vector {
        Some(steinberg::lemma_center_vector(&ctx, &j, *j.first().unwrap_or(&0))?)
    } else if let Some(coeffs) = args.vector {
        Some(TensorVector::from_coeffs(&ctx, &j, coeffs.into_iter().map(steinberg::Gf).collect())?)
    } else if args.find_regular {
        steinberg::find_regular_vector(&ctx, &j, &limits)?
    } else {
        None
    };
    let searched = args.find_regular;
    let stab = match &vector {
        Some(v) => Some(steinberg::stabilizer_order(&ctx, &j, v, &limits)?),
        None => None,
    };
    let report = SteinbergReport::new(&ctx, &j, vector.as_ref(), stab);
    if json {
        out.json(&report);
        return Ok(());
    }
    out.line(format!("field: GF(2^{}) mod {}", ctx.degree(), ctx.modulus_string()));
    out.line(format!("J: {{{}}}", list_str(&j)));
    out.line(format!("dimension: {}", 1usize << j.len()));
    out.line(format!("|SL2(2^{})|: {}", ctx.degree(), report.group_order));
    let orbit = steinberg::galois_orbit(ctx.degree(), &j)?;
    out.line(format!("galois orbit of J: {}", list_str(orbit.iter().map(|o| format!("{{{}}}", list_str(o))))));
    match (&report.vector, stab) {
        (Some(v), Some(s)) => {
            out.line(format!("vector: [{}]", list_str(v)));
            out.line(format!("stabilizer order: {s}"));
            out.line(format!("orbit size: {}", report.group_order / s));
        }
        _ if searched => out.line("regular vector: none"),
        _ => {}
    }
    Ok(())
}

fn export(out: &mut Output, json: bool, args: ExportArgs) -> Result<(), Error> {
    if json == args.dot {
        return Err(Error::Domain("export needs exactly one of --dot and --json".into()));
    }
    let g: CharacterGraph = match (args.degrees, args.group) {
        (Some(d), _) => build(&DegreeSet::new(d)?),
        (None, Some(name)) => build(&Catalog::bundled().resolve(&name)?.degrees),
        (None, None) => unreachable!("clap requires an input"),
    };
    if args.dot {
        out.text.push_str(&graph::to_dot(&g));
    } else {
        out.line(graph::to_json(&g));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Output, Error> {
    let caps = Caps::from_env()?;
    let mut out = Output::default();
    let json = cli.json;
    match cli.command {
        Command::Analyze { degrees } => analyze(&mut out, json, degrees)?,
        Command::Group { name } => group(&mut out, json, &name)?,
        Command::Scan(ScanCommand::Psl2 { max_q, min_q, shape, k4_free, parity, summary }) => {
            scan_psl2(&mut out, json, caps, min_q, max_q, shape, k4_free, parity.into(), summary)?
        }
        Command::Scan(ScanCommand::Catalog) => scan_catalog(&mut out, json)?,
        Command::Nt(cmd) => nt(&mut out, json, cmd)?,
        Command::Steinberg(args) => steinberg_cmd(&mut out, json, caps, args)?,
        Command::Export(args) => export(&mut out, json, args)?,
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.violation { 1 } else { 0 })
        }
        Err(e) => {
            if json {
                eprintln!("{}", serde_json::json!({ "error": e.to_string() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Output, Error> {
        let mut argv = vec!["cgk"];
        argv.extend_from_slice(args);
        run(Cli::try_parse_from(argv).expect("valid arguments"))
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn j1_report_line() {
        let out = run_args(&["analyze", "--degrees", "1,56,76,77,120,133,209"]).unwrap();
        assert!(out.text.contains("diameter: 3, clique: 3, K4-free: yes"), "{}", out.text);
        assert!(out.text.contains("partition: ρ1={3, 5} ρ2={2} ρ3={7, 19} ρ4={11}"));
        assert!(out.text.contains("complement bipartite: yes"));
    }

    #[test]
    fn graph_report_round_trips() {
        let out = run_args(&["--json", "group", "A5"]).unwrap();
        let back: GroupReport = serde_json::from_str(out.text.trim()).unwrap();
        assert_eq!(back.record.name, "A5");
        assert_eq!(back.graph.vertices, vec![2, 3, 5]);
        assert_eq!(back.graph.diameter, Diameter::Disconnected);
        assert_eq!(serde_json::to_string(&back).unwrap(), out.text.trim());
    }

    #[test]
    fn unknown_group_is_an_error() {
        assert!(matches!(run_args(&["group", "NOPE"]), Err(Error::Lookup { .. })));
    }

    #[test]
    fn formula_groups() {
        let out = run_args(&["group", "PSL2(32)"]).unwrap();
        assert!(out.text.contains("source: formula"));
        assert!(out.text.contains("shape: K1∪K1∪K2"));
    }

    #[test]
    fn scan_shape_listing() {
        let out = run_args(&["scan", "psl2", "--max-q", "200", "--shape", "K1 U K3"]).unwrap();
        assert!(out.text.lines().any(|l| l == "127"));
    }

    #[test]
    fn catalan_table() {
        let out =
            run_args(&["nt", "catalan", "--pmax", "50", "--fmax", "30", "--rmax", "1000000", "--mmax", "20"]).unwrap();
        assert!(out.text.contains("2^3 + 1 = 3^2  case A"));
        assert!(!out.violation);
    }

    #[test]
    fn steinberg_center_vector() {
        let out = run_args(&["--json", "steinberg", "--f", "3", "--J", "0", "--center-vector"]).unwrap();
        let r: SteinbergReport = serde_json::from_str(out.text.trim()).unwrap();
        assert_eq!(r.stabilizer_order, Some(8));
        let out = run_args(&["steinberg", "--f", "3", "--J", "0", "--find-regular"]).unwrap();
        assert!(out.text.contains("regular vector: none"));
    }

    #[test]
    fn steinberg_caps() {
        let caps = Caps { max_f: 2, max_q: 100 };
        let cli = Cli::try_parse_from(["cgk", "steinberg", "--f", "3", "--J", "0", "--center-vector"]).unwrap();
        let Command::Steinberg(args) = cli.command else { unreachable!() };
        let mut out = Output::default();
        assert!(matches!(steinberg_cmd(&mut out, false, caps, args), Err(Error::Capacity(_))));
    }
}
