//! Command-line front end: lattices, straightening relations, cones, polytopes
//! and verification suites.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use plueckerfan::cone::{
    check_witness, cone_hrep, facet_count, facet_witness, interior_witness, rho_map, sigma_map, violations,
    ConeContext, ConeHRep, ConeTarget, WeightVector, XiPoint, XiPointJson,
};
use plueckerfan::oracle::{lattice_membership, OracleMode};
use plueckerfan::order::Poset;
use plueckerfan::plucker::{build, parse_column, LatticeKind, PairKind, PluckerLattice};
use plueckerfan::poly::{format_coeff, parse_coeff, Coeff};
use plueckerfan::polytope::{
    dilation_points, interpolating_hrep, minkowski_decompose, ChainOrderPartition, RationalPoint,
};
use plueckerfan::straighten::{format_lattice_polynomial, lattice_relation_to_json, straighten_pair};
use plueckerfan::suites::{run_suite, Suite, SuiteConfig, DEFAULT_SAMPLES};
use plueckerfan::Error;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "plueckerfan", version, about = "Lattices, straightening laws and maximal Gröbner cones of the Plücker ideal")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Log progress to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Action {
    Hrep,
    Points,
    Decompose,
}

#[derive(Subcommand)]
enum Command {
    /// Hasse diagram of M(n) or N(n).
    Lattice {
        #[arg(long, default_value = "M")]
        kind: LatticeKind,
        #[arg(long)]
        n: usize,
    },
    /// Incomparable pairs with their classification.
    Pairs {
        #[arg(long, default_value = "M")]
        kind: LatticeKind,
        #[arg(long)]
        n: usize,
        /// Only list diamond pairs.
        #[arg(long)]
        diamond: bool,
    },
    /// Straightening relation of a pair, e.g. "1,4 2,3".
    Straighten {
        #[arg(long, default_value = "M")]
        kind: LatticeKind,
        #[arg(long)]
        n: usize,
        /// The two columns, separated by whitespace or given as two arguments.
        #[arg(required = true, num_args = 1..=2)]
        pair: Vec<String>,
        /// Also test membership in the Plücker ideal.
        #[arg(long)]
        oracle: Option<OracleMode>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// H-description of a cone.
    Cone {
        #[arg(long)]
        target: ConeTarget,
        #[arg(long)]
        n: usize,
    },
    /// Tests whether a weight vector lies in a cone.
    CheckPoint {
        #[arg(long)]
        target: ConeTarget,
        #[arg(long)]
        n: usize,
        /// JSON object from element names to rationals, or `interior` / `zero`.
        #[arg(long, conflicts_with = "xi")]
        weights: Option<String>,
        /// JSON point (z, c) mapped to weights by σ (M-based targets) or ρ.
        #[arg(long)]
        xi: Option<PathBuf>,
    },
    /// Interpolating chain-order polytope of a poset.
    Polytope {
        /// Poset JSON file with `elements` and `covers`.
        #[arg(long)]
        poset: PathBuf,
        /// `order`, `chain`, or a partition JSON file with `order` and `chain`.
        #[arg(long, default_value = "order")]
        partition: String,
        /// Dilation factor.
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, value_enum, default_value_t = Action::Points)]
        action: Action,
        /// Point JSON file (element id to rational) for `decompose`.
        #[arg(long)]
        point: Option<PathBuf>,
    },
    /// Facet counts, and witness checks for one target.
    Facets {
        #[arg(long)]
        n: usize,
        /// Also check the irredundancy witness of every facet of this target.
        #[arg(long)]
        target: Option<ConeTarget>,
    },
    /// Runs a verification suite; the exit code is the failure count (at most 125).
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "probabilistic")]
        oracle: OracleMode,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Poset JSON file replacing the default family of the polytope suites.
        #[arg(long)]
        poset: Option<PathBuf>,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Capacity(_)) => 3,
            Failure::Lib(Error::Internal(_)) => 1,
            Failure::Lib(_) | Failure::Io(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(e) => f.write_str(e),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

struct Output {
    json: Value,
    text: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.verbose {
        env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    }
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
                Format::Text => out.text,
            };
            let written = match &cli.out {
                Some(path) => fs::write(path, body).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{body}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn read(path: &PathBuf) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn ok(json: Value, text: String) -> Res<Output> {
    Ok(Output { json, text, code: 0 })
}

fn run(cli: &Cli) -> Res<Output> {
    match &cli.command {
        Command::Lattice { kind, n } => cmd_lattice(*kind, *n),
        Command::Pairs { kind, n, diamond } => cmd_pairs(*kind, *n, *diamond),
        Command::Straighten {
            kind,
            n,
            pair,
            oracle,
            trials,
            seed,
        } => cmd_straighten(*kind, *n, pair, *oracle, *trials, *seed),
        Command::Cone { target, n } => cmd_cone(*target, *n),
        Command::CheckPoint { target, n, weights, xi } => cmd_check_point(*target, *n, weights.as_deref(), xi.as_ref()),
        Command::Polytope {
            poset,
            partition,
            t,
            action,
            point,
        } => cmd_polytope(poset, partition, *t, *action, point.as_ref()),
        Command::Facets { n, target } => cmd_facets(*n, *target),
        Command::Verify {
            suite,
            n,
            seed,
            oracle,
            trials,
            samples,
            poset,
        } => {
            let poset = match poset {
                Some(p) => Some(Poset::from_json(&read(p)?)?),
                None => None,
            };
            let cfg = SuiteConfig {
                n: *n,
                seed: *seed,
                oracle: *oracle,
                trials: *trials,
                samples: *samples,
                poset,
            };
            let report = run_suite(*suite, &cfg)?;
            Ok(Output {
                json: to_value(&report),
                text: report.to_text(),
                code: report.exit_code() as u8,
            })
        }
    }
}

fn cmd_lattice(kind: LatticeKind, n: usize) -> Res<Output> {
    let pl = build(kind, n)?;
    let h = pl.hasse_json();
    let l = pl.lattice();
    let mut text = format!("{kind}({n}): {} elements, {} covers\n", h.elements.len(), h.covers.len());
    for a in 0..pl.len() {
        let ups: Vec<String> = l.poset().upper_covers(a).iter().map(|&b| pl.id(b)).collect();
        text += &format!("[{}] {} < {}\n", l.grade(a), pl.id(a), ups.join(" "));
    }
    ok(to_value(&h), text)
}

fn kind_name(k: PairKind) -> &'static str {
    match k {
        PairKind::NotDiamond => "not_diamond",
        PairKind::DiamondPlain => "diamond",
        PairKind::DiamondSpecial => "special",
    }
}

fn cmd_pairs(kind: LatticeKind, n: usize, diamond_only: bool) -> Res<Output> {
    let pl = build(kind, n)?;
    let name = |a: Option<usize>| a.map(|a| Value::String(pl.id(a))).unwrap_or(Value::Null);
    let mut rows = Vec::new();
    let mut text = String::new();
    for (a, b) in pl.lattice().incomparable_pairs() {
        let c = pl.classify_pair(a, b)?;
        if diamond_only && c.kind == PairKind::NotDiamond {
            continue;
        }
        rows.push(json!({
            "a": pl.id(a),
            "b": pl.id(b),
            "kind": kind_name(c.kind),
            "meet": pl.id(c.meet),
            "join": pl.id(c.join),
            "below": name(c.below),
            "above": name(c.above),
        }));
        text += &format!(
            "{} {} {} meet={} join={} below={} above={}\n",
            pl.id(a),
            pl.id(b),
            kind_name(c.kind),
            pl.id(c.meet),
            pl.id(c.join),
            c.below.map(|x| pl.id(x)).unwrap_or_else(|| "-".into()),
            c.above.map(|x| pl.id(x)).unwrap_or_else(|| "-".into()),
        );
    }
    ok(Value::Array(rows), text)
}

fn parse_pair(pl: &PluckerLattice, pair: &[String]) -> Res<(usize, usize)> {
    let words: Vec<&str> = pair.iter().flat_map(|s| s.split_whitespace()).collect();
    let [x, y] = words.as_slice() else {
        return Err(Failure::Lib(Error::Invalid(format!("expected two columns, got {}", words.len()))));
    };
    Ok((pl.element(&parse_column(x)?)?, pl.element(&parse_column(y)?)?))
}

fn cmd_straighten(
    kind: LatticeKind,
    n: usize,
    pair: &[String],
    oracle: Option<OracleMode>,
    trials: usize,
    seed: u64,
) -> Res<Output> {
    let pl = build(kind, n)?;
    let (a, b) = parse_pair(&pl, pair)?;
    let s = straighten_pair(&pl, a, b)?;
    let mut text = format_lattice_polynomial(&pl, &s) + "\n";
    let mut code = 0;
    if let Some(mode) = oracle {
        let v = lattice_membership(&pl, &s, mode, trials, seed)?;
        eprintln!("membership: {} ({mode:?}, failure bound {})", v.member, format_coeff(&v.failure_bound));
        text += &format!("membership: {}\n", v.member);
        if !v.member {
            code = 1;
        }
    }
    Ok(Output {
        json: to_value(&lattice_relation_to_json(&pl, &s)),
        text,
        code,
    })
}

fn cone_lattice(target: ConeTarget, n: usize) -> Res<PluckerLattice> {
    let kind = match target {
        ConeTarget::Hibi | ConeTarget::HibiRedundant | ConeTarget::Ssyt | ConeTarget::SsytRedundant | ConeTarget::ToricGt => {
            LatticeKind::M
        }
        _ => LatticeKind::N,
    };
    Ok(build(kind, n)?)
}

fn context(target: ConeTarget, pl: &PluckerLattice) -> ConeContext<'_> {
    match target {
        ConeTarget::Hibi | ConeTarget::HibiRedundant => ConeContext::Lattice(pl.lattice()),
        ConeTarget::Genhibi | ConeTarget::GenhibiRedundant => ConeContext::Partitioned(pl.lattice(), pl.partition()),
        _ => ConeContext::Plucker(pl),
    }
}

fn cone_text(h: &ConeHRep, pl: &PluckerLattice) -> String {
    let mut s = format!("{} n={}: {} inequalities\n", h.target, pl.n(), h.len());
    for q in &h.inequalities {
        let terms: Vec<String> = q
            .terms
            .iter()
            .map(|(&a, &c)| format!("{}{}·w[{}]", if c < 0 { "-" } else { "+" }, c.abs(), pl.id(a)))
            .collect();
        let rel = serde_json::to_value(q.rel).expect("serializable");
        s += &format!("{} {} 0\n", terms.join(" "), rel.as_str().unwrap_or("?"));
    }
    s
}

fn cmd_cone(target: ConeTarget, n: usize) -> Res<Output> {
    let pl = cone_lattice(target, n)?;
    let h = cone_hrep(target, context(target, &pl))?;
    ok(to_value(&h.to_json(|a| pl.id(a))), cone_text(&h, &pl))
}

fn parse_weights(pl: &PluckerLattice, text: &str) -> Res<WeightVector> {
    let map: BTreeMap<String, Value> =
        serde_json::from_str(text).map_err(|e| Failure::Lib(Error::Invalid(format!("weights JSON: {e}"))))?;
    let mut w: Vec<Option<Coeff>> = vec![None; pl.len()];
    for (k, v) in map {
        let a = pl.element_of_id(&k)?;
        let s = match v {
            Value::String(s) => s,
            Value::Number(x) => x.to_string(),
            other => return Err(Failure::Lib(Error::Invalid(format!("weight of `{k}` is {other}")))),
        };
        w[a] = Some(parse_coeff(&s).ok_or_else(|| Error::Invalid(format!("weight of `{k}`: `{s}` is not a rational")))?);
    }
    w.into_iter()
        .enumerate()
        .map(|(a, c)| c.ok_or_else(|| Failure::Lib(Error::Invalid(format!("missing weight for `{}`", pl.id(a))))))
        .collect()
}

fn cmd_check_point(target: ConeTarget, n: usize, weights: Option<&str>, xi: Option<&PathBuf>) -> Res<Output> {
    let pl = cone_lattice(target, n)?;
    let h = cone_hrep(target, context(target, &pl))?;
    let w = match (weights, xi) {
        (Some("interior"), _) => interior_witness(pl.lattice()),
        (Some("zero"), _) => vec![Coeff::default(); pl.len()],
        (Some(path), _) => parse_weights(&pl, &read(&PathBuf::from(path))?)?,
        (None, Some(path)) => {
            let j: XiPointJson = serde_json::from_str(&read(path)?)
                .map_err(|e| Failure::Lib(Error::Invalid(format!("point JSON: {e}"))))?;
            let p = XiPoint::from_json(&j)?;
            match pl.kind() {
                LatticeKind::M => sigma_map(&pl, &p)?,
                LatticeKind::N => rho_map(&pl, &p)?,
            }
        }
        (None, None) => return Err(Failure::Lib(Error::Invalid("give --weights or --xi".into()))),
    };
    if w.len() != h.dim {
        return Err(Failure::Lib(Error::Invalid("weight vector has the wrong length".into())));
    }
    let bad = violations(&h, &w);
    let weights: BTreeMap<String, String> = (0..pl.len()).map(|a| (pl.id(a), format_coeff(&w[a]))).collect();
    let json = json!({
        "target": target.name(),
        "n": n,
        "member": bad.is_empty(),
        "violated": bad,
        "weights": weights,
    });
    let text = if bad.is_empty() {
        format!("member of {target}({n})\n")
    } else {
        format!("not a member of {target}({n}): violates inequalities {bad:?}\n")
    };
    ok(json, text)
}

fn cmd_polytope(poset: &PathBuf, partition: &str, t: usize, action: Action, point: Option<&PathBuf>) -> Res<Output> {
    let p = Poset::from_json(&read(poset)?)?;
    let part = match partition {
        "order" => ChainOrderPartition::all_order(&p),
        "chain" => ChainOrderPartition::all_chain(&p),
        path => ChainOrderPartition::from_json(&p, &read(&PathBuf::from(path))?)?,
    };
    match action {
        Action::Hrep => {
            let h = interpolating_hrep(&p, &part)?;
            let lines: Vec<String> = h.inequalities().iter().map(|q| q.display(&p)).collect();
            let text = lines.join("\n") + "\n";
            ok(json!({ "inequalities": lines }), text)
        }
        Action::Points => {
            let pts = dilation_points(&p, &part, t)?;
            let rows: Vec<_> = pts.iter().map(|x| x.to_json(&p)).collect();
            let text = format!("{} points in dilation {t}\n", rows.len())
                + &rows.iter().map(|r| format!("{r:?}\n")).collect::<String>();
            ok(json!({ "t": t, "count": rows.len(), "points": rows }), text)
        }
        Action::Decompose => {
            let path = point.ok_or_else(|| Failure::Lib(Error::Invalid("decompose needs --point".into())))?;
            let map: BTreeMap<String, String> = serde_json::from_str(&read(path)?)
                .map_err(|e| Failure::Lib(Error::Invalid(format!("point JSON: {e}"))))?;
            let x = RationalPoint::from_json(&p, &map)?;
            let parts = minkowski_decompose(&p, &part, &x, t)?;
            let rows: Vec<_> = parts.iter().map(|v| v.to_json(&p)).collect();
            let text = rows.iter().map(|r| format!("{r:?}\n")).collect::<String>();
            ok(json!({ "t": t, "summands": rows }), text)
        }
    }
}

fn cmd_facets(n: usize, target: Option<ConeTarget>) -> Res<Output> {
    let c = facet_count(n)?;
    let mut json = to_value(&c);
    let mut text = format!(
        "n={n}: SSYT {} facets ({} diamond + {} special), PBW {} facets; formulas {} = {} + {}\n",
        c.ssyt, c.diamond, c.special, c.pbw, c.total_formula, c.diamond_formula, c.special_formula
    );
    let mut code = 0;
    if let Some(target) = target {
        if !target.is_minimal() {
            return Err(Failure::Lib(Error::Invalid(format!("{target} is not a minimal description"))));
        }
        let pl = cone_lattice(target, n)?;
        let ctx = context(target, &pl);
        let h = cone_hrep(target, ctx)?;
        let mut failed = Vec::new();
        for f in 0..h.len() {
            let w = facet_witness(&h, ctx, f)?;
            if !check_witness(&h, f, &w).ok() {
                failed.push(f);
            }
        }
        text += &format!("{target}({n}): {} facets, {} witness failures\n", h.len(), failed.len());
        json["witnesses"] = json!({ "target": target.name(), "facets": h.len(), "failed": failed });
        code = failed.len().min(125) as u8;
    }
    Ok(Output { json, text, code })
}
