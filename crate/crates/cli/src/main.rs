use std::fmt::Display;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use gdet::measure::{group_measure, reduce_word};
use gdet::search::default_workers;
use gdet::witness::{self, D2pkVariant, D2powkVariant, D4pVariant};
use gdet::{
    certified_lambda, cyclo_resultant_closed, cyclotomic, log_measure, normalize_bivariate, suite,
    value_scan, verify, Assignment, CayleyTable, Error, Factorization, GroupSpec, LambdaOptions,
    ScanResult, SearchConfig, Status, Witness,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gdet", version, about = "Exact group determinants and minimal dihedral values")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Group determinant of an element, e.g. `measure dihedral:5 "1,1;1"`.
    Measure {
        /// cyclic:N, dihedral:N, abelian:N1xN2x..., or table:@FILE
        group: String,
        /// Coefficients ("a0,a1;b0,...") or terms ("c:y^i*x^j,...")
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Determinant over an explicit Cayley table file.
    Det {
        table: String,
        /// One integer per group element, comma separated.
        #[arg(allow_hyphen_values = true)]
        values: String,
    },
    /// Certified minimal non-trivial determinant of D_2n.
    Lambda {
        /// n as an integer or a factorization such as "2^2*3*5".
        n: String,
        /// Coefficient window for the search fallback, e.g. -1..1.
        #[arg(long, allow_hyphen_values = true)]
        search_window: Option<String>,
        #[arg(long)]
        max_states: Option<u128>,
    },
    /// Build and verify a witness construction.
    Witness(WitnessArgs),
    /// All determinant values over a coefficient window.
    Scan {
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long)]
        max_abs: Option<BigInt>,
        #[arg(long)]
        max_states: Option<u128>,
        #[arg(long, value_enum, default_value = "csv")]
        emit: Emit,
    },
    /// Coefficients of the m-th cyclotomic polynomial.
    Cyclo {
        #[arg(long)]
        m: u64,
    },
    /// |Res(Phi_n, Phi_m)| for n < m.
    Cyclores {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
    },
    /// Run a named group of built-in checks ("all" runs every check).
    Verify { suite: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Odd,
    TwoPower,
    PrimePower,
    D2pk,
    D4p,
    D2powk,
    D2p2,
    Valuation,
}

#[derive(clap::Args)]
struct WitnessArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
    #[arg(long)]
    variant: Option<String>,
    /// Use the negative sign where a construction offers both.
    #[arg(long)]
    negative: bool,
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::StateSpaceOverflow { .. }) { 3 } else { 2 };
        Failure { code, msg: e.to_string() }
    }
}

fn input(msg: impl Display) -> Failure {
    Failure { code: 2, msg: msg.to_string() }
}

type Res<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Cmd) -> Res<u8> {
    match cmd {
        Cmd::Measure { group, poly } => {
            let spec = parse_group(&group)?;
            let a = parse_poly(&spec, &poly)?;
            print_measure(&spec, &a)
        }
        Cmd::Det { table, values } => {
            let spec = GroupSpec::Explicit(read_table(&table)?);
            let a = parse_flat(&values, spec.order())?;
            print_measure(&spec, &a)
        }
        Cmd::Lambda { n, search_window, max_states } => {
            let nf = Factorization::from_str(&n)?;
            let mut opts = LambdaOptions::default();
            if let Some(w) = search_window {
                opts.search_window = Some(parse_window(&w)?);
            }
            if let Some(m) = max_states {
                opts.max_states = m;
            }
            opts.workers = default_workers();
            let cert = certified_lambda(&nf, &opts);
            println!("{}", to_json(&cert)?);
            Ok(if cert.status == Status::Exact { 0 } else { 3 })
        }
        Cmd::Witness(args) => {
            let w = build_witness(&args)?;
            let mut v = serde_json::to_value(&w).map_err(input)?;
            v["verified"] = Value::Bool(verify(&w));
            println!("{}", serde_json::to_string_pretty(&v).map_err(input)?);
            Ok(0)
        }
        Cmd::Scan { group, window, max_abs, max_states, emit } => {
            let spec = parse_group(&group)?;
            let (lo, hi) = parse_window(&window)?;
            let mut cfg = SearchConfig::new(1, lo, hi).with_workers(default_workers());
            if let Some(m) = max_abs {
                cfg = cfg.with_max_abs(m);
            }
            if let Some(m) = max_states {
                cfg.max_states = m;
            }
            let scan = value_scan(&spec, &cfg)?;
            match emit {
                Emit::Json => println!("{}", to_json(&scan)?),
                Emit::Csv => write_scan_csv(&spec, &scan)?,
            }
            Ok(0)
        }
        Cmd::Cyclo { m } => {
            if m == 0 {
                return Err(input("m must be positive"));
            }
            let c: Vec<String> = cyclotomic(m).coeffs().iter().map(|c| c.to_string()).collect();
            println!("{}", c.join(","));
            Ok(0)
        }
        Cmd::Cyclores { n, m } => {
            println!("{}", cyclo_resultant_closed(n, m)?);
            Ok(0)
        }
        Cmd::Verify { suite: name } => {
            let checks = suite::select(&name).ok_or_else(|| input(format!("unknown suite {name:?}")))?;
            let mut all = true;
            for c in checks {
                let o = c.run();
                all &= o.passed;
                let tag = if o.passed { "PASS" } else { "FAIL" };
                println!("{tag}  {:>2}  {:<12} {}: {}", o.id, o.name, c.title, o.detail);
            }
            Ok(if all { 0 } else { 1 })
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Res<String> {
    serde_json::to_string_pretty(v).map_err(input)
}

fn print_measure(spec: &GroupSpec, a: &Assignment) -> Res<u8> {
    let v = group_measure(spec, a)?;
    let log = log_measure(&v, spec.order() as u64).ok();
    let out = json!({
        "group": spec.label(),
        "value": v.to_string(),
        "log_measure": log,
    });
    println!("{}", to_json(&out)?);
    Ok(0)
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Res<T> {
    s.trim().parse().map_err(|_| input(format!("invalid {what} {s:?}")))
}

fn parse_group(s: &str) -> Res<GroupSpec> {
    let (kind, arg) = s
        .split_once(':')
        .ok_or_else(|| input(format!("expected KIND:ARG for the group, got {s:?}")))?;
    let spec = match kind {
        "cyclic" => GroupSpec::Cyclic(parse_num(arg, "group order")?),
        "dihedral" => GroupSpec::Dihedral(parse_num(arg, "dihedral parameter")?),
        "abelian" => GroupSpec::AbelianProduct(
            arg.split('x')
                .map(|d| parse_num(d, "factor"))
                .collect::<Res<_>>()?,
        ),
        "table" => {
            let path = arg.strip_prefix('@').unwrap_or(arg);
            GroupSpec::Explicit(read_table(path)?)
        }
        _ => return Err(input(format!("unknown group kind {kind:?}"))),
    };
    spec.validate()?;
    Ok(spec)
}

fn read_table(path: &str) -> Res<CayleyTable> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| input(format!("{path}: {e}")))
}

fn parse_window(s: &str) -> Res<(i64, i64)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| input(format!("expected LO..HI, got {s:?}")))?;
    let (lo, hi) = (parse_num(lo, "window bound")?, parse_num(hi, "window bound")?);
    if lo > hi {
        return Err(input(format!("empty window {s:?}")));
    }
    Ok((lo, hi))
}

fn parse_flat(s: &str, len: usize) -> Res<Assignment> {
    let mut v: Vec<BigInt> = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_num(t, "coefficient"))
        .collect::<Res<_>>()?;
    if v.len() > len {
        return Err(input(format!("{} coefficients for a group of order {len}", v.len())));
    }
    v.resize(len, BigInt::from(0));
    Ok(Assignment(v))
}

fn parse_poly(spec: &GroupSpec, s: &str) -> Res<Assignment> {
    if s.contains(':') {
        return parse_terms(spec, s);
    }
    match spec {
        GroupSpec::Dihedral(n) => {
            let (a, b) = s.split_once(';').unwrap_or((s, ""));
            let mut v = parse_flat(a, *n)?.0;
            v.extend(parse_flat(b, *n)?.0);
            Ok(Assignment(v))
        }
        _ if s.contains(';') => Err(input("';' separates blocks only for dihedral groups")),
        _ => parse_flat(s, spec.order()),
    }
}

/// Terms `c:y^i*x^j` separated by commas; `1` stands for the empty word.
fn parse_terms(spec: &GroupSpec, s: &str) -> Res<Assignment> {
    let (n, dihedral) = match spec {
        GroupSpec::Dihedral(n) => (*n, true),
        GroupSpec::Cyclic(n) => (*n, false),
        _ => return Err(input("the term form applies to cyclic and dihedral groups")),
    };
    let mut terms = Vec::new();
    for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let t = t.strip_prefix('+').unwrap_or(t);
        let (c, word) = t
            .split_once(':')
            .ok_or_else(|| input(format!("expected c:word, got {t:?}")))?;
        let c: BigInt = parse_num(c, "coefficient")?;
        let mut factors = Vec::new();
        for f in word.split('*').map(str::trim) {
            if f == "1" {
                continue;
            }
            let (var, e) = f.split_once('^').unwrap_or((f, "1"));
            let var = match var {
                "x" => 'x',
                "y" if dihedral => 'y',
                _ => return Err(input(format!("unknown factor {f:?}"))),
            };
            factors.push((var, parse_num::<i64>(e, "exponent")?));
        }
        let (i, j) = reduce_word(&factors);
        terms.push((c, i, j));
    }
    let e = normalize_bivariate(&terms, n as u64);
    Ok(if dihedral {
        e.to_assignment()
    } else {
        Assignment(e.a.to_dense())
    })
}

fn require<T>(v: Option<T>, flag: &str) -> Res<T> {
    v.ok_or_else(|| input(format!("--{flag} is required")))
}

fn build_witness(args: &WitnessArgs) -> Res<Witness> {
    let nf = || -> Res<Factorization> { Ok(Factorization::from_str(&require(args.n.clone(), "n")?)?) };
    let n_u64 = || -> Res<u64> { parse_num(&require(args.n.clone(), "n")?, "n") };
    let variant = args.variant.as_deref().unwrap_or("");
    let positive = !args.negative;
    let w = match args.family {
        Family::Odd => witness::odd_coprime(require(args.m, "m")? as u64, n_u64()?)?,
        Family::TwoPower => witness::two_power(&nf()?)?,
        Family::PrimePower => witness::odd_prime_power(require(args.p, "p")?, &nf()?)?,
        Family::D2pk => {
            let v = match variant {
                "" | "main" => D2pkVariant::Main { l: require(args.l, "l")? },
                "x-plus-one" => D2pkVariant::XPlusOne,
                "quad" => D2pkVariant::Quad,
                _ => return Err(input(format!("unknown d2pk variant {variant:?}"))),
            };
            witness::family_d2pk(require(args.p, "p")?, require(args.k, "k")?, v)?
        }
        Family::D4p => {
            let v = match variant {
                "delta" => D4pVariant::Delta { k: require(args.k, "k")? },
                "x-squared-plus-one" => D4pVariant::XSquaredPlusOne,
                "minus-sixteen" => D4pVariant::MinusSixteen,
                "sixty-four" => D4pVariant::SixtyFour,
                "minus-sixty-four" => D4pVariant::MinusSixtyFour,
                "pow" => D4pVariant::Pow { l: require(args.l, "l")?, positive },
                _ => return Err(input(format!("unknown d4p variant {variant:?}"))),
            };
            witness::family_d4p(require(args.p, "p")?, v)?
        }
        Family::D2powk => {
            let v = match variant {
                "odd" => D2powkVariant::Odd { m: require(args.m, "m")? },
                "sixteen" => D2powkVariant::Sixteen { m: require(args.m, "m")? },
                "sixty-four" => D2powkVariant::SixtyFour { m: require(args.m, "m")? },
                "d8" => D2powkVariant::D8 { c: require(args.c, "c")?, positive },
                "d16-ten" => D2powkVariant::D16Ten { positive },
                "d16-eleven" => D2powkVariant::D16Eleven { positive },
                "lower" => D2powkVariant::Lower { m: require(args.m, "m")? },
                "valuation" => D2powkVariant::Valuation,
                _ => return Err(input(format!("unknown d2powk variant {variant:?}"))),
            };
            witness::family_d2powk(require(args.k, "k")?, v)?
        }
        Family::D2p2 => witness::family_d2p2(require(args.p, "p")?)?,
        Family::Valuation => witness::valuation_witness(
            require(args.p, "p")?,
            require(args.k, "k")?,
            args.a.unwrap_or(1),
            args.b.unwrap_or(1),
        )?,
    };
    Ok(w)
}

fn write_scan_csv(spec: &GroupSpec, scan: &ScanResult) -> Res<()> {
    let mut out = csv::Writer::from_writer(std::io::stdout());
    out.write_record(["value", "a", "b"]).map_err(input)?;
    let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
    for e in &scan.entries {
        let (a, b) = match spec {
            GroupSpec::Dihedral(n) => e.example.split_at(*n),
            _ => (e.example.as_slice(), &[][..]),
        };
        out.write_record([e.value.to_string(), join(a), join(b)]).map_err(input)?;
    }
    out.flush().map_err(input)?;
    Ok(())
}
