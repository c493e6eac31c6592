//! Command line front end: parse exact-rational input files, dispatch to
//! the engine, emit reports.
//!
//! Exit codes: 0 = all checks balanced/valid; 1 = a verification failed
//! (the report is still emitted); 2 = input or schema error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use berkrh::berkdomain::{Center, FtDomainP1};
use berkrh::error::Error;
use berkrh::exactval::{Prime, QExact};
use berkrh::laurent::{LaurentPoly, PValue, RationalMap};
use berkrh::ledger::{assemble_global_rh, TriangGraph};
use berkrh::ramification::{
    different_value, discriminant_value, germ_data, CheckStatus, TangentDirection,
};
use berkrh::rhcheck::{char_p_divisor, check_rh, self_map_on_unit_disc, validate_morphism,
    MorphismSpec};
use berkrh::valpolygon::{build_polygon, Side, SlopeBound};

mod schema;

#[derive(Parser)]
#[command(name = "berkrh")]
#[command(about = "Exact ramification and balance checks for finite maps on the p-adic projective line")]
#[command(version)]
struct Cli {
    /// Print the input file schemas and exit
    #[arg(long)]
    schema: bool,

    /// Emit machine-readable JSON instead of tables
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Option<Commands>,
}

#[derive(Subcommand)]
enum Commands {
    /// Valuation polygon of a polynomial: hull, breakpoints, root counts
    Polygon(PolygonArgs),
    /// Boundary-germ analysis on an annulus
    Annulus {
        #[command(subcommand)]
        cmd: AnnulusCmd,
    },
    /// Euler characteristic of a domain file
    Euler(EulerArgs),
    /// Balance checks for a declared finite morphism
    Rh {
        #[command(subcommand)]
        cmd: RhCmd,
    },
    /// Decomposition-graph bookkeeping
    Ledger {
        #[command(subcommand)]
        cmd: LedgerCmd,
    },
    /// Residue-direction divisor of a good-reduction lift
    Charp {
        #[command(subcommand)]
        cmd: CharpCmd,
    },
    /// Built-in worked examples
    Examples {
        #[command(subcommand)]
        cmd: ExamplesCmd,
    },
}

#[derive(Args)]
struct PolygonArgs {
    /// Polynomial file: {"exponent": "coefficient", ...}
    #[arg(long)]
    poly: PathBuf,
    /// Prime for the valuation
    #[arg(short)]
    p: u64,
    /// Optional closed interval [s1, s2]: also count root valuations in it
    #[arg(long, num_args = 2, value_names = ["S1", "S2"], allow_hyphen_values = true)]
    range: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum AnnulusCmd {
    /// Germ invariants (d, sigma, nu, v(eps)) along a direction
    Analyze(AnnulusArgs),
}

#[derive(Args)]
struct AnnulusArgs {
    /// Map file: {"num": {...}, "den": {...}} (den optional)
    #[arg(long)]
    map: PathBuf,
    /// Direction file: {"center", "log_radius", "side", "image_center"}
    #[arg(long)]
    dir: PathBuf,
    #[arg(short)]
    p: u64,
}

#[derive(Args)]
struct EulerArgs {
    /// Domain file: {"genus", "removed_open": [...], "removed_closed": [...]}
    #[arg(long)]
    domain: PathBuf,
    /// Prime used for the disjointness validation (optional)
    #[arg(short, default_value_t = 2)]
    p: u64,
}

#[derive(Subcommand)]
enum RhCmd {
    /// Validate the declared data and verify the balance identity
    Check(RhArgs),
}

#[derive(Args)]
struct RhArgs {
    /// Morphism file: {"map", "domain", "codomain", "direction_images", "p"}
    #[arg(long)]
    morphism: PathBuf,
}

#[derive(Subcommand)]
enum LedgerCmd {
    /// Additivity, edge cancellation, and global assembly of a graph file
    Verify(LedgerArgs),
}

#[derive(Args)]
struct LedgerArgs {
    /// Graph file: {"vertices", "internal_edges", "external_ends",
    /// "chi_x_pieces", "chi_total", "deg"}
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Subcommand)]
enum CharpCmd {
    /// Sigma per residue direction with the 2deg-2 certificate
    Divisor(CharpArgs),
}

#[derive(Args)]
struct CharpArgs {
    #[arg(long)]
    map: PathBuf,
    /// Optional hints file: a JSON list of rational direction centers
    #[arg(long)]
    hints: Option<PathBuf>,
    #[arg(short)]
    p: u64,
}

#[derive(Subcommand)]
enum ExamplesCmd {
    /// The two standard lifts of the residue Frobenius on the unit disc
    Frobenius {
        #[arg(short, default_value_t = 5)]
        p: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    if cli.schema {
        println!("{}", schema::SCHEMAS);
        return Ok(ExitCode::SUCCESS);
    }
    let json = cli.json;
    match cli.command {
        None => Err(Error::input(
            "no subcommand given (try --help or --schema)",
        )),
        Some(Commands::Polygon(args)) => cmd_polygon(args, json),
        Some(Commands::Annulus { cmd: AnnulusCmd::Analyze(args) }) => cmd_annulus(args, json),
        Some(Commands::Euler(args)) => cmd_euler(args, json),
        Some(Commands::Rh { cmd: RhCmd::Check(args) }) => cmd_rh(args, json),
        Some(Commands::Ledger { cmd: LedgerCmd::Verify(args) }) => cmd_ledger(args, json),
        Some(Commands::Charp { cmd: CharpCmd::Divisor(args) }) => cmd_charp(args, json),
        Some(Commands::Examples { cmd: ExamplesCmd::Frobenius { p } }) => cmd_frobenius(p, json),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {what} file {}: {e}", path.display())))?;
    reject_float_literals(&text, what)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("{what} file {}: {e}", path.display())))
}

/// Every number in input files is an exact string; bare JSON numbers with a
/// fractional or exponent part are rejected up front.
fn reject_float_literals(text: &str, what: &str) -> Result<(), Error> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::input(format!("{what}: {e}")))?;
    fn walk(v: &serde_json::Value) -> bool {
        match v {
            serde_json::Value::Number(n) => n.as_i64().is_some() || n.as_u64().is_some(),
            serde_json::Value::Array(a) => a.iter().all(walk),
            serde_json::Value::Object(o) => o.values().all(walk),
            _ => true,
        }
    }
    if walk(&value) {
        Ok(())
    } else {
        Err(Error::input(format!(
            "{what}: floating point literals are not accepted; write numbers as strings"
        )))
    }
}

fn emit<T: Serialize>(value: &T, human: String, json: bool) {
    if json {
        println!("{}", serde_json::to_string(value).expect("serializable report"));
    } else {
        println!("{human}");
    }
}

fn cmd_polygon(args: PolygonArgs, json: bool) -> Result<ExitCode, Error> {
    let p = Prime::new(args.p)?;
    let f: LaurentPoly = read_json(&args.poly, "polynomial")?;
    let polygon = build_polygon(&f, &p)?;
    let rep = polygon.report();
    let range_count = match &args.range {
        None => None,
        Some(bounds) => {
            let s1: QExact = bounds[0].parse()?;
            let s2: QExact = bounds[1].parse()?;
            if s1 > s2 {
                return Err(Error::input("range: s1 must be <= s2"));
            }
            Some(polygon.count_zero_valuations(
                &SlopeBound::Finite(s1),
                &SlopeBound::Finite(s2),
                true,
                true,
            )?)
        }
    };
    let payload = json!({
        "vertices": rep.vertices,
        "breakpoints": rep.breakpoints,
        "range_count": range_count,
    });
    let mut human = String::new();
    writeln!(human, "valuation polygon (p = {})", args.p).unwrap();
    for (i, v) in &rep.vertices {
        writeln!(human, "  vertex  ({i}, {v})").unwrap();
    }
    for b in &rep.breakpoints {
        writeln!(human, "  breakpoint s = {b}").unwrap();
    }
    if let Some(count) = range_count {
        writeln!(human, "  roots with valuation in range: {count}").unwrap();
    }
    emit(&payload, human.trim_end().to_string(), json);
    Ok(ExitCode::SUCCESS)
}

#[derive(serde::Deserialize)]
struct DirectionFile {
    center: String,
    log_radius: QExact,
    side: String,
    image_center: String,
}

fn cmd_annulus(args: AnnulusArgs, json: bool) -> Result<ExitCode, Error> {
    let p = Prime::new(args.p)?;
    let map: RationalMap = read_json(&args.map, "map")?;
    let dirfile: DirectionFile = read_json(&args.dir, "direction")?;
    let side = match dirfile.side.as_str() {
        "inside" => Side::Inside,
        "outside" => Side::Outside,
        other => {
            return Err(Error::input(format!(
                "direction side must be `inside` or `outside`, got `{other}`"
            )))
        }
    };
    let dir = TangentDirection {
        center: Center::parse(&dirfile.center)?,
        log_radius: dirfile.log_radius.clone(),
        side,
    };
    let image_center = PValue::parse(&dirfile.image_center)?;
    let germ = germ_data(&map, &dir, &image_center, &p)?;
    let boundary_different = different_value(&germ, &QExact::zero());
    let boundary_disc = discriminant_value(&germ, &QExact::zero(), &p)?;
    let payload = json!({
        "d": germ.d,
        "sigma": germ.sigma,
        "nu": germ.nu,
        "eps_val": germ.eps_val.to_string(),
        "different_at_boundary": boundary_different.to_string(),
        "discriminant_at_boundary": boundary_disc.to_string(),
    });
    let human = format!(
        "germ at {}:\n  d       = {}\n  sigma   = {}\n  nu      = {}\n  v(eps)  = {}\n  v(different) at boundary    = {}\n  v(discriminant) at boundary = {}",
        dir.label(),
        germ.d,
        germ.sigma,
        germ.nu,
        germ.eps_val,
        boundary_different,
        boundary_disc
    );
    emit(&payload, human, json);
    Ok(ExitCode::SUCCESS)
}

fn cmd_euler(args: EulerArgs, json: bool) -> Result<ExitCode, Error> {
    let p = Prime::new(args.p)?;
    let domain: FtDomainP1 = read_json(&args.domain, "domain")?;
    domain.validate(&p)?;
    let chi = domain.euler_char();
    let payload = json!({
        "genus": domain.genus,
        "boundary_components": domain.boundary_count(),
        "euler_char": chi,
    });
    emit(&payload, format!("{chi}"), json);
    Ok(ExitCode::SUCCESS)
}

fn cmd_rh(args: RhArgs, json: bool) -> Result<ExitCode, Error> {
    let spec: MorphismSpec = read_json(&args.morphism, "morphism")?;
    let diags = validate_morphism(&spec)?;
    if !diags.all_passed {
        let payload = json!({
            "validation": diags.checks,
            "balanced": false,
        });
        let mut human = String::from("validation failed:\n");
        for c in diags.checks.iter().filter(|c| !c.passed) {
            writeln!(human, "  FAIL {}: {}", c.name, c.detail).unwrap();
        }
        emit(&payload, human.trim_end().to_string(), json);
        return Ok(ExitCode::from(1));
    }
    let report = check_rh(&spec)?;
    let human = render_rh_report(&report);
    emit(&report, human, json);
    Ok(if report.balanced {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn render_rh_report(report: &berkrh::rhcheck::RHReport) -> String {
    let mut s = String::new();
    writeln!(s, "chi(Y) = {}   chi(X) = {}   deg = {}", report.chi_y, report.chi_x, report.deg)
        .unwrap();
    writeln!(s, "sum (e_P - 1) = {}", report.ram_sum).unwrap();
    for t in &report.nu_out {
        writeln!(s, "  nu[{}] = {}   (outward, enters with -)", t.direction, t.nu).unwrap();
    }
    for t in &report.nu_in {
        writeln!(s, "  nu[{}] = {}   (inward, enters with +)", t.direction, t.nu).unwrap();
    }
    writeln!(
        s,
        "balance: {} = {}*{} - {} - {} + {}  ->  lhs {} vs rhs {}",
        report.lhs,
        report.deg,
        report.chi_x,
        report.ram_sum,
        report.nu_out.iter().map(|t| t.nu).sum::<i64>(),
        report.nu_in.iter().map(|t| t.nu).sum::<i64>(),
        report.lhs,
        report.rhs
    )
    .unwrap();
    write!(s, "{}", if report.balanced { "BALANCED" } else { "NOT BALANCED" }).unwrap();
    s
}

#[derive(serde::Deserialize)]
struct GraphFile {
    #[serde(flatten)]
    graph: TriangGraph,
    chi_x_pieces: Vec<i64>,
    chi_total: i64,
    deg: i64,
}

fn cmd_ledger(args: LedgerArgs, json: bool) -> Result<ExitCode, Error> {
    let file: GraphFile = read_json(&args.graph, "graph")?;
    file.graph.validate()?;
    let additivity = file.graph.check_additivity(file.chi_total);
    let cancellation = file.graph.check_edge_cancellation();
    if !additivity || !cancellation {
        let payload = json!({
            "additivity": additivity,
            "edge_cancellation": cancellation,
            "balanced": false,
        });
        let human = format!(
            "additivity: {}\nedge cancellation: {}\nassembly refused",
            if additivity { "ok" } else { "FAIL" },
            if cancellation { "ok" } else { "FAIL" }
        );
        emit(&payload, human, json);
        return Ok(ExitCode::from(1));
    }
    let report = assemble_global_rh(&file.graph, &file.chi_x_pieces, file.chi_total, file.deg)?;
    let human = format!(
        "additivity: ok\nedge cancellation: ok\n{}",
        render_rh_report(&report)
    );
    emit(&report, human, json);
    Ok(if report.balanced {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_charp(args: CharpArgs, json: bool) -> Result<ExitCode, Error> {
    let p = Prime::new(args.p)?;
    let map: RationalMap = read_json(&args.map, "map")?;
    let hints: Vec<QExact> = match &args.hints {
        None => Vec::new(),
        Some(path) => {
            let raw: Vec<String> = read_json(path, "hints")?;
            raw.iter()
                .map(|s| s.parse())
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let report = char_p_divisor(&map, &hints, &p)?;
    let human = render_divisor(&report);
    emit(&report, human, json);
    Ok(match report.status {
        CheckStatus::Verified => ExitCode::SUCCESS,
        CheckStatus::Incomplete => ExitCode::from(1),
    })
}

fn render_divisor(report: &berkrh::ramification::LocalSumReport) -> String {
    let mut s = String::new();
    writeln!(s, "residue direction   sigma").unwrap();
    for (label, sigma) in &report.directions {
        writeln!(s, "  {label:<17} {sigma}").unwrap();
    }
    writeln!(s, "total = {}   expected 2*deg - 2 = {}", report.total, report.expected).unwrap();
    write!(
        s,
        "{}",
        match report.status {
            CheckStatus::Verified => "VERIFIED",
            CheckStatus::Incomplete => "INCOMPLETE",
        }
    )
    .unwrap();
    s
}

fn cmd_frobenius(p: u64, json: bool) -> Result<ExitCode, Error> {
    let prime = Prime::new(p)?;
    let pi = p as i64;
    let f1 = RationalMap::from_poly(LaurentPoly::monomial(pi))?;
    let f2 = RationalMap::from_poly(LaurentPoly::from_pairs([
        (pi, QExact::one()),
        (1, -QExact::one()),
    ]))?;
    let r1 = check_rh(&self_map_on_unit_disc(f1.clone(), p))?;
    let r2 = check_rh(&self_map_on_unit_disc(f2.clone(), p))?;
    let hints = [QExact::zero(), QExact::one()];
    let d1 = char_p_divisor(&f1, &hints, &prime)?;
    let shifted = RationalMap::from_poly(
        LaurentPoly::from_pairs([(1, QExact::one()), (0, -QExact::one())])
            .pow(p as u32)
            .add(&LaurentPoly::one()),
    )?;
    let d2 = char_p_divisor(&shifted, &hints, &prime)?;
    let ok = r1.balanced
        && r2.balanced
        && d1.status == CheckStatus::Verified
        && d2.status == CheckStatus::Verified;
    let payload = json!({
        "p": p,
        "plain_lift": r1,
        "etale_lift": r2,
        "plain_lift_divisor": d1,
        "shifted_lift_divisor": d2,
        "all_verified": ok,
    });
    let human = format!(
        "lift x^{p} on the closed unit disc:\n{}\n\nlift x^{p} - x on the closed unit disc:\n{}\n\nresidue divisor of x^{p}:\n{}\n\nresidue divisor of (x-1)^{p} + 1:\n{}",
        render_rh_report(&r1),
        render_rh_report(&r2),
        render_divisor(&d1),
        render_divisor(&d2)
    );
    emit(&payload, human, json);
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
