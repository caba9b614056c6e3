//! Command-line front end: deciders, exact sums, tree builders, maps and
//! certificate-emitting witness constructions, all printing JSON.
//!
//! Exit codes: 0 for a true verdict or a passing certificate, 1 for a false
//! verdict or a failing or unfinished certificate, 2 for usage and domain errors.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mycielski::cert::Certificate;
use mycielski::eqrel::{delta_total, delta_window, related, DeltaValue, Point, RelTag};
use mycielski::gen::seeded;
use mycielski::maps::e2::{p_e2, p_e2_witness, Theta, DEFAULT_BUDGET};
use mycielski::maps::gadget::{e0_gadget_check, e2_gadget_check};
use mycielski::maps::jonsson::jonsson_build;
use mycielski::maps::{block_reduction, k_e0, oplus_reduction, p_e0, p_prime_e0, q_e0};
use mycielski::rational::format_rational;
use mycielski::replay::reverify;
use mycielski::trees::e0::E0Tree;
use mycielski::trees::e2::{build_e2_family, build_e2_tree, verify_e2_family, verify_e2_tree, E2Tree, E2TreeFamily};
use mycielski::trees::finite::FiniteTree;
use mycielski::witnesses::{
    e0_mycielski_check, e0_weak_mycielski_check, e1_witness, e2_mycielski_check, e2_weak_mycielski_check,
    e3_witness, grid_system_check, identity_grid_instance, oracle_by_name,
};
use mycielski::word::parse_digits;
use mycielski::{Error, FiniteWord, OmegaSeq, UPWord};

#[derive(Parser)]
#[command(name = "mycielski", version, about = "Exact constructions on ultimately periodic words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[allow(clippy::large_enum_variant)]
#[derive(Subcommand)]
enum Command {
    /// Decide whether two points are related.
    Decide {
        /// e0, e1, e2, e3, etail, f or equality.
        relation: String,
        x: String,
        y: String,
    },
    /// Exact partial sum of 1/(k+1) over differing positions.
    Delta {
        #[arg(long, default_value_t = 0)]
        from: usize,
        /// Window end; omitted means the whole tail.
        #[arg(long)]
        to: Option<usize>,
        x: String,
        y: String,
    },
    /// Build a tree and print it as JSON.
    TreeBuild {
        #[arg(value_enum)]
        kind: TreeKind,
        /// Seed for a random E0-tree; the identity tree when omitted.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 4)]
        max_block: usize,
        #[arg(long, default_value_t = 8)]
        levels: usize,
        #[arg(long, default_value_t = 2)]
        maps: usize,
    },
    /// Verify a tree read from a JSON file (or - for standard input).
    TreeVerify {
        #[arg(value_enum)]
        kind: TreeKind,
        file: String,
    },
    /// Evaluate a map on word literals.
    Map {
        #[arg(value_enum)]
        name: MapName,
        words: Vec<String>,
        /// Thresholds for p-e2: "default" or a comma list like "2,3,9/2".
        #[arg(long, default_value = "default")]
        theta: String,
        /// Output digits for p-e2.
        #[arg(long, default_value_t = 2)]
        len: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// E0-tree JSON file for e0-phi; the identity tree when omitted.
        #[arg(long)]
        tree: Option<String>,
    },
    /// Run a witness construction and print its certificate.
    Witness(WitnessArgs),
    /// Recompute a stored certificate and compare it byte for byte.
    CertVerify { file: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeKind {
    E0,
    E2,
    E2Family,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapName {
    #[value(name = "p-e0")]
    PE0,
    #[value(name = "q-e0")]
    QE0,
    #[value(name = "p-prime")]
    PPrime,
    #[value(name = "k-e0")]
    KE0,
    Oplus,
    Block,
    #[value(name = "p-e2")]
    PE2,
    #[value(name = "e0-phi")]
    E0Phi,
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessTag {
    #[value(name = "e0-3mycielski")]
    E0Mycielski,
    #[value(name = "e0-weak-3mycielski")]
    E0Weak,
    #[value(name = "e1-2mycielski")]
    E1,
    #[value(name = "e2-2mycielski")]
    E2,
    #[value(name = "e2-weak-2mycielski")]
    E2Weak,
    #[value(name = "e3-2mycielski")]
    E3,
    #[value(name = "e3-grid-system")]
    GridSystem,
    #[value(name = "e2-surjectivity")]
    E2Surjectivity,
    #[value(name = "jonsson")]
    Jonsson,
    #[value(name = "e0-gadget")]
    E0Gadget,
    #[value(name = "e2-gadget")]
    E2Gadget,
}

#[derive(clap::Args)]
struct WitnessArgs {
    #[arg(value_enum)]
    tag: WitnessTag,
    /// Seed for random trees; the identity tree when omitted.
    #[arg(long)]
    tree_seed: Option<u64>,
    #[arg(long, default_value_t = 4)]
    max_block: usize,
    /// Depth of the direct scan recorded next to the exact decision, or of the random tree for jonsson.
    #[arg(long)]
    depth: Option<usize>,
    /// Comma-separated stems for e0-weak-3mycielski.
    #[arg(long, default_value = "00,10,11")]
    stems: String,
    #[arg(long, default_value = "interleave")]
    oracle: String,
    /// Stages; 8 by default, depth + 1 for jonsson.
    #[arg(long)]
    stages: Option<usize>,
    /// Tree levels; 8 by default, 300 for e2-surjectivity and 400 for e2-gadget.
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long, default_value_t = 2)]
    maps: usize,
    #[arg(long, default_value_t = 3)]
    horizon: usize,
    /// Ternary target word for e2-surjectivity.
    #[arg(long, default_value = "01")]
    target: String,
    /// Thresholds; "2,3,9/2" by default, "1/4,1/2,…,2" for e2-gadget.
    #[arg(long)]
    theta: Option<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Stems for the gadget checks.
    #[arg(long, default_value = "10")]
    u: String,
    #[arg(long, default_value = "00")]
    v: String,
    #[arg(long, default_value = "11")]
    w: String,
    /// Write the certificate here as well as to standard output.
    #[arg(long)]
    out: Option<String>,
}

enum Outcome {
    Verdict(bool),
    Value(Value),
    Cert(Certificate),
    Report(Value, bool),
}

fn read_input(path: &str) -> Result<String, Error> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?;
    Ok(text)
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        position: e.column(),
        message: format!("{what} JSON line {}: {e}", e.line()),
    })
}

fn word(s: &str) -> Result<UPWord, Error> {
    UPWord::parse(s, None)
}

fn point(s: &str) -> Result<Point, Error> {
    if s.starts_with('[') {
        Ok(Point::Seq(OmegaSeq::parse(s)?))
    } else {
        Ok(Point::Word(word(s)?))
    }
}

fn e0_tree(seed: Option<u64>, max_block: usize) -> E0Tree {
    match seed {
        Some(s) => E0Tree::random(&mut seeded(s), max_block),
        None => E0Tree::identity(),
    }
}

fn words<const N: usize>(ws: &[String]) -> Result<[UPWord; N], Error> {
    if ws.len() != N {
        return Err(Error::InvalidArgument(format!("expected {N} word literals, got {}", ws.len())));
    }
    let parsed = ws.iter().map(|s| word(s)).collect::<Result<Vec<_>, _>>()?;
    Ok(parsed.try_into().expect("length checked"))
}

fn value(w: UPWord) -> Value {
    json!({ "value": w.to_string() })
}

fn run_map(name: MapName, ws: &[String], theta: &str, len: usize, budget: usize, tree: Option<&str>) -> Result<Value, Error> {
    Ok(match name {
        MapName::PE0 => {
            let [x, y, z] = words(ws)?;
            value(p_e0(&x, &y, &z)?)
        }
        MapName::QE0 => {
            let [x, y, z] = words(ws)?;
            value(q_e0(&x, &y, &z)?)
        }
        MapName::PPrime => {
            let [x, y, z] = words(ws)?;
            value(p_prime_e0(&x, &y, &z)?)
        }
        MapName::KE0 => {
            let [x, y, z] = words(ws)?;
            value(k_e0(&x, &y, &z)?)
        }
        MapName::Oplus => {
            let [x] = words(ws)?;
            value(oplus_reduction(&x)?)
        }
        MapName::Block => {
            let [x] = words(ws)?;
            value(block_reduction(&x)?)
        }
        MapName::PE2 => {
            let [x, y, z] = words(ws)?;
            let digits = p_e2(&x, &y, &z, &theta.parse::<Theta>()?, len, budget)?;
            json!({ "value": digits.iter().map(|d| char::from(b'0' + d)).collect::<String>() })
        }
        MapName::E0Phi => {
            let [x] = words(ws)?;
            let p: E0Tree = match tree {
                Some(path) => from_json(&read_input(path)?, "tree")?,
                None => E0Tree::identity(),
            };
            value(p.phi(&x)?)
        }
    })
}

fn random_tree(seed: Option<u64>, depth: usize) -> FiniteTree {
    match seed {
        Some(s) => mycielski::gen::random_finite_tree(&mut seeded(s), depth, 0.7),
        None => FiniteTree::full(depth),
    }
}

const GADGET_THETA: &str = "1/4,1/2,3/4,1,5/4,3/2,7/4,2";

fn run_witness(a: &WitnessArgs) -> Result<Certificate, Error> {
    let p = e0_tree(a.tree_seed, a.max_block);
    let stages = a.stages.unwrap_or(8);
    let levels = a.levels.unwrap_or(match a.tag {
        WitnessTag::E2Surjectivity => 300,
        WitnessTag::E2Gadget => 400,
        _ => 8,
    });
    let theta = a.theta.clone().unwrap_or_else(|| {
        match a.tag {
            WitnessTag::E2Gadget => GADGET_THETA,
            _ => "2,3,9/2",
        }
        .to_string()
    });
    Ok(match a.tag {
        WitnessTag::E0Mycielski => e0_mycielski_check(&p, a.depth),
        WitnessTag::E0Weak => {
            let stems = a
                .stems
                .split(',')
                .map(|s| parse_digits(s, 0))
                .collect::<Result<Vec<_>, _>>()?;
            let stems: [Vec<u8>; 3] = stems
                .try_into()
                .map_err(|_| Error::InvalidArgument("--stems needs exactly three stems".into()))?;
            e0_weak_mycielski_check(&p, &stems, a.depth)?
        }
        WitnessTag::E1 => e1_witness(oracle_by_name(&a.oracle)?.as_ref(), stages)?.1,
        WitnessTag::E2 => e2_mycielski_check(&build_e2_tree(levels)?),
        WitnessTag::E2Weak => e2_weak_mycielski_check(&build_e2_family(levels, a.maps)?)?,
        WitnessTag::E3 => {
            let name = if a.oracle == "interleave" { "identity" } else { a.oracle.as_str() };
            e3_witness(oracle_by_name(name)?.as_ref(), stages)?.1
        }
        WitnessTag::GridSystem => {
            let (phi, sys) = identity_grid_instance(a.horizon)?;
            grid_system_check(&phi, &sys)
        }
        WitnessTag::E2Surjectivity => {
            let v = FiniteWord::new(3, parse_digits(&a.target, 0)?)?;
            p_e2_witness(&v, &E2Tree::identity(levels), &theta.parse()?, a.budget)?.1
        }
        WitnessTag::Jonsson => {
            let depth = a.depth.unwrap_or(4);
            let t = random_tree(a.tree_seed, depth);
            jonsson_build(&t, a.stages.unwrap_or(depth + 1))?.1
        }
        WitnessTag::E0Gadget => {
            e0_gadget_check(&p, &parse_digits(&a.u, 0)?, &parse_digits(&a.v, 0)?, &parse_digits(&a.w, 0)?)?
        }
        WitnessTag::E2Gadget => e2_gadget_check(
            &E2Tree::identity(levels),
            &parse_digits(&a.u, 0)?,
            &parse_digits(&a.v, 0)?,
            &parse_digits(&a.w, 0)?,
            &theta.parse()?,
            theta.split(',').count(),
            a.budget,
        )?,
    })
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Decide { relation, x, y } => {
            let tag: RelTag = relation.parse()?;
            Ok(Outcome::Verdict(related(tag, &point(&x)?, &point(&y)?)?))
        }
        Command::Delta { from, to, x, y } => {
            let (x, y) = (word(&x)?, word(&y)?);
            let v = match to {
                Some(to) => format_rational(&delta_window(from, to, &x, &y)?),
                None => match delta_total(from, &x, &y) {
                    DeltaValue::Finite(r) => format_rational(&r),
                    DeltaValue::Infinite => "infinite".into(),
                },
            };
            Ok(Outcome::Value(json!({ "value": v })))
        }
        Command::TreeBuild { kind, seed, max_block, levels, maps } => Ok(Outcome::Value(match kind {
            TreeKind::E0 => serde_json::to_value(e0_tree(seed, max_block)).expect("tree serializes"),
            TreeKind::E2 => serde_json::to_value(build_e2_tree(levels)?).expect("tree serializes"),
            TreeKind::E2Family => serde_json::to_value(build_e2_family(levels, maps)?).expect("family serializes"),
        })),
        Command::TreeVerify { kind, file } => {
            let text = read_input(&file)?;
            match kind {
                TreeKind::E0 => {
                    from_json::<E0Tree>(&text, "E0-tree")?;
                    Ok(Outcome::Verdict(true))
                }
                TreeKind::E2 => Ok(Outcome::Cert(verify_e2_tree(&from_json::<E2Tree>(&text, "E2-tree")?))),
                TreeKind::E2Family => Ok(Outcome::Cert(verify_e2_family(&from_json::<E2TreeFamily>(&text, "family")?))),
            }
        }
        Command::Map { name, words, theta, len, budget, tree } => {
            Ok(Outcome::Value(run_map(name, &words, &theta, len, budget, tree.as_deref())?))
        }
        Command::Witness(a) => {
            let cert = run_witness(&a)?;
            if let Some(path) = &a.out {
                fs::write(path, cert.to_json())
                    .map_err(|e| Error::InvalidArgument(format!("cannot write {path}: {e}")))?;
            }
            Ok(Outcome::Cert(cert))
        }
        Command::CertVerify { file } => {
            let (r, fresh) = reverify(&read_input(&file)?)?;
            let ok = r.identical && r.consistent && r.passed;
            let out = json!({
                "theorem": fresh.theorem,
                "identical": r.identical,
                "consistent": r.consistent,
                "verdict": fresh.verdict,
            });
            Ok(Outcome::Report(out, ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Verdict(v)) => {
            println!("{}", json!({ "verdict": v }));
            ExitCode::from(if v { 0 } else { 1 })
        }
        Ok(Outcome::Report(v, ok)) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Ok(Outcome::Value(v)) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            ExitCode::SUCCESS
        }
        Ok(Outcome::Cert(c)) => {
            print!("{}", c.to_json());
            ExitCode::from(if c.passed() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
