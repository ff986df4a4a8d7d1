//! Command-line front end: argument parsing, canonical requests, dispatch,
//! rendering and the on-disk result cache.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arith::{is_prime, parse_rational, rat, rational_string, Rational};
use crate::cocycle::{self, Cochain, CocycleDoc};
use crate::cyclotomic::CycValue;
use crate::dims::{self, DimResult, EngineChoice, TwistSpec};
use crate::error::Error;
use crate::group::{self, parse_group, PermGroup};
use crate::perm::Perm;
use crate::pi_finite::{loop_tower, order_degree_profile};
use crate::series::{series_inverse, verify_series, DimSeries};
use crate::tuples::commuting_tuple_classes;
use crate::{burnside, height1, par, wreath};

/// Bumped whenever a change could alter any cached payload.
pub const ENGINE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+e1");

#[derive(Parser, Debug)]
#[command(name = "altpow", version, about = "Exact twisted alternating powers and iterated characters")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Largest permutation group the engine will enumerate.
    #[arg(long, global = true)]
    pub order_bound: Option<u64>,
    /// Skip the result cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Twisted alternating-power dimension.
    Dim(DimArgs),
    /// Twisted power operation on an integer.
    Powerop(DimArgs),
    /// Components of the loop tower over BΣ_m.
    Loops(LoopsArgs),
    /// Conjugacy classes of a wreath product G ≀ S_m.
    WreathClasses(WreathArgs),
    /// Height-1 dimensions for sgn^(1).
    H1(H1Args),
    /// Sylow-intersection decomposition.
    Yoshida(YoshidaArgs),
    /// Generating-function identity.
    Genfunc(GenfuncArgs),
    /// Transgression of a cocycle along commuting elements.
    Transgress(TransgressArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineArg {
    Auto,
    Structural,
    BruteForce,
}

#[derive(Args, Debug)]
pub struct DimArgs {
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 0)]
    pub height: usize,
    /// `sym` or a group spec such as `deg=4; (0 1)(2 3)` or `A4`.
    #[arg(long, default_value = "sym")]
    pub group: String,
    /// `trivial`, `sgn1`, or a cocycle JSON file.
    #[arg(long, default_value = "trivial")]
    pub twist: String,
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    pub engine: EngineArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopsEngine {
    Structural,
    BruteForce,
    Both,
}

#[derive(Args, Debug)]
pub struct LoopsArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 0)]
    pub t: usize,
    #[arg(long)]
    pub count_only: bool,
    #[arg(long, value_enum, default_value_t = LoopsEngine::Structural)]
    pub engine: LoopsEngine,
    /// Also integrate `d^{orbits}` over the components.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
}

#[derive(Args, Debug)]
pub struct WreathArgs {
    #[arg(long)]
    pub g: String,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub verify: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormArg {
    AsPrinted,
    Resolved,
}

#[derive(Args, Debug)]
pub struct H1Args {
    #[arg(long)]
    pub m: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    /// Categorical (super) dimension instead of the chromatic one.
    #[arg(long = "super")]
    pub super_: bool,
    #[arg(long, value_enum)]
    pub closed_form: Option<ClosedFormArg>,
}

#[derive(Args, Debug)]
pub struct YoshidaArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long, default_value_t = 0)]
    pub t: usize,
    /// Leave the first loop coordinate unconstrained (experimental).
    #[arg(long)]
    pub mixed: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AltSource {
    Closed,
    Inverse,
    Sgn1,
    File,
}

#[derive(Args, Debug)]
pub struct GenfuncArgs {
    #[arg(long, default_value_t = 0)]
    pub height: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long)]
    pub max_m: u32,
    #[arg(long, value_enum, default_value_t = AltSource::Closed)]
    pub alt_source: AltSource,
    /// JSON array of alt coefficients, for `--alt-source file`.
    #[arg(long)]
    pub alt_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TransgressArgs {
    /// Cocycle JSON file.
    #[arg(long, conflicts_with = "builtin")]
    pub cocycle: Option<PathBuf>,
    /// `symplectic`, `carry:K:E`, or `bilinear:P:a,b;c,d`.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Loop elements in cycle notation, applied in order.
    #[arg(long = "elem", allow_hyphen_values = true)]
    pub elems: Vec<String>,
}

/// Failure of a CLI invocation, with its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_bound() => 3,
            CliError::Core(Error::EngineDisagreement(_)) => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// A semantic request: command plus normalized parameters. Its JSON form
/// has sorted keys, so it is unique per request.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Request {
    pub command: String,
    pub params: BTreeMap<String, Value>,
}

impl Request {
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("request serializes")
    }

    pub fn cache_key(&self) -> String {
        let mut h = Sha256::new();
        h.update(ENGINE_VERSION.as_bytes());
        h.update([0]);
        h.update(self.canonical().as_bytes());
        hex::encode(h.finalize())
    }
}

enum GroupChoice {
    Symmetric(u32),
    Explicit(PermGroup),
}

impl GroupChoice {
    fn degree(&self) -> u32 {
        match self {
            GroupChoice::Symmetric(m) => *m,
            GroupChoice::Explicit(g) => g.degree() as u32,
        }
    }

    fn spec(&self) -> String {
        match self {
            GroupChoice::Symmetric(m) => format!("sym({m})"),
            GroupChoice::Explicit(g) => g.spec_string(),
        }
    }
}

fn dim_group(args: &DimArgs) -> CliResult<GroupChoice> {
    if args.group.trim() == "sym" {
        let m = args.m.ok_or_else(|| usage("--m is required with --group sym"))?;
        return Ok(GroupChoice::Symmetric(m));
    }
    let g = parse_group(&args.group)?;
    if let Some(m) = args.m {
        if m as usize != g.degree() {
            return Err(usage(format!("--m {m} does not match the group degree {}", g.degree())));
        }
    }
    Ok(GroupChoice::Explicit(g))
}

fn load_cocycle(path: &Path) -> CliResult<Cochain> {
    let text = read_file(path)?;
    let doc: CocycleDoc =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(Cochain::from_json(&doc)?)
}

fn dim_twist(args: &DimArgs, group: &GroupChoice) -> CliResult<TwistSpec> {
    match args.twist.trim() {
        "trivial" => Ok(TwistSpec::Trivial),
        "sgn1" => Ok(TwistSpec::BuiltinSgn1),
        path => {
            let c = load_cocycle(Path::new(path))?;
            if let GroupChoice::Explicit(g) = group {
                if c.group().group() != g {
                    return Err(CliError::Core(Error::ConstraintMismatch(
                        "twist cocycle is defined on a different group".into(),
                    )));
                }
            }
            Ok(TwistSpec::Cocycle(c))
        }
    }
}

fn twist_param(t: &TwistSpec) -> Value {
    match t {
        TwistSpec::Cocycle(c) => serde_json::to_value(c.to_json()).expect("doc serializes"),
        other => json!(other.name()),
    }
}

fn parse_builtin(spec: &str) -> CliResult<Cochain> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || usage(format!("unrecognised builtin cocycle {spec:?}"));
    let num = |s: &str| s.trim().parse::<i64>().map_err(|_| bad());
    match parts.as_slice() {
        ["symplectic"] => Ok(cocycle::symplectic_cocycle()?),
        ["carry", k, e] => {
            let k = num(k)?;
            if k < 1 {
                return Err(bad());
            }
            Ok(cocycle::carry_cocycle(k as usize, num(e)?)?)
        }
        ["bilinear", p, rows] => {
            let p = num(p)?;
            if p < 2 {
                return Err(bad());
            }
            let form = rows
                .split(';')
                .map(|r| r.split(',').map(num).collect::<CliResult<Vec<_>>>())
                .collect::<CliResult<Vec<_>>>()?;
            Ok(cocycle::bilinear_cocycle(p as usize, &form)?)
        }
        _ => Err(bad()),
    }
}

fn transgress_cocycle(args: &TransgressArgs) -> CliResult<Cochain> {
    match (&args.cocycle, &args.builtin) {
        (Some(path), None) => load_cocycle(path),
        (None, Some(spec)) => parse_builtin(spec),
        _ => Err(usage("exactly one of --cocycle or --builtin is required")),
    }
}

fn check_prime(p: u64) -> CliResult<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(usage(format!("{p} is not prime")))
    }
}

/// Validates arguments and builds the canonical request.
pub fn request(cmd: &Command) -> CliResult<Request> {
    let mut params = BTreeMap::new();
    let mut put = |k: &str, v: Value| {
        params.insert(k.to_string(), v);
    };
    let name = match cmd {
        Command::Dim(a) | Command::Powerop(a) => {
            check_prime(a.p)?;
            let g = dim_group(a)?;
            let twist = dim_twist(a, &g)?;
            put("group", json!(g.spec()));
            put("m", json!(g.degree()));
            put("d", json!(a.d.to_string()));
            put("p", json!(a.p));
            put("height", json!(a.height));
            put("twist", twist_param(&twist));
            put("engine", json!(format!("{:?}", a.engine).to_lowercase()));
            if matches!(cmd, Command::Dim(_)) {
                "dim"
            } else {
                "powerop"
            }
        }
        Command::Loops(a) => {
            check_prime(a.p)?;
            put("m", json!(a.m));
            put("p", json!(a.p));
            put("t", json!(a.t));
            put("count_only", json!(a.count_only));
            put("engine", json!(format!("{:?}", a.engine).to_lowercase()));
            put("d", json!(a.d.map(|d| d.to_string())));
            "loops"
        }
        Command::WreathClasses(a) => {
            put("g", json!(parse_group(&a.g)?.spec_string()));
            put("m", json!(a.m));
            put("verify", json!(a.verify));
            "wreath-classes"
        }
        Command::H1(a) => {
            if a.super_ && a.d < 0 {
                return Err(usage("--super needs d >= 0"));
            }
            put("m", json!(a.m));
            put("d", json!(a.d.to_string()));
            put("super", json!(a.super_));
            put("closed_form", json!(a.closed_form.map(|c| format!("{c:?}").to_lowercase())));
            "h1"
        }
        Command::Yoshida(a) => {
            check_prime(a.p)?;
            put("group", json!(parse_group(&a.group)?.spec_string()));
            put("p", json!(a.p));
            put("verify", json!(a.verify));
            if a.verify {
                put("d", json!(a.d.to_string()));
                put("t", json!(a.t));
                put("mixed", json!(a.mixed));
            }
            "yoshida"
        }
        Command::Genfunc(a) => {
            if a.height > 1 {
                return Err(usage("--height must be 0 or 1"));
            }
            put("height", json!(a.height));
            put("d", json!(a.d.to_string()));
            put("max_m", json!(a.max_m));
            put("alt_source", json!(format!("{:?}", a.alt_source).to_lowercase()));
            if a.alt_source == AltSource::File {
                let alt = genfunc_alt_file(a)?;
                put("alt", json!(alt.to_strings()));
            }
            "genfunc"
        }
        Command::Transgress(a) => {
            let c = transgress_cocycle(a)?;
            let deg = c.group().group().degree();
            let elems = a
                .elems
                .iter()
                .map(|s| Ok(Perm::parse(deg, s)?.to_string()))
                .collect::<CliResult<Vec<_>>>()?;
            put("cocycle", serde_json::to_value(c.to_json()).expect("doc serializes"));
            put("elems", json!(elems));
            "transgress"
        }
    };
    Ok(Request {
        command: name.to_string(),
        params,
    })
}

fn engine_choice(e: EngineArg) -> EngineChoice {
    match e {
        EngineArg::Auto => EngineChoice::Auto,
        EngineArg::Structural => EngineChoice::Structural,
        EngineArg::BruteForce => EngineChoice::BruteForce,
    }
}

/// `value`, `exactness`, `conductor` and `is_integer` fields for an exact
/// result.
pub fn cyc_fields(v: &CycValue) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    let exactness = if v.is_integer() {
        json!("integer")
    } else if v.as_rational().is_some() {
        json!("rational")
    } else {
        json!({"cyclotomic": {"conductor": v.conductor()}})
    };
    m.insert("value".into(), json!(v.to_string()));
    m.insert("exactness".into(), exactness);
    m.insert("conductor".into(), json!(v.conductor().to_string()));
    m.insert("is_integer".into(), json!(v.is_integer()));
    if v.as_rational().is_none() {
        let coeffs: Vec<String> = v.coeffs().iter().map(rational_string).collect();
        m.insert("coeffs".into(), json!(coeffs));
    }
    m
}

fn int_fields(v: &BigInt) -> serde_json::Map<String, Value> {
    cyc_fields(&CycValue::from_int(v.clone()))
}

fn dim_result(a: &DimArgs, power: bool) -> CliResult<Value> {
    let g = dim_group(a)?;
    let twist = dim_twist(a, &g)?;
    let engine = engine_choice(a.engine);
    let r: DimResult = match &g {
        GroupChoice::Symmetric(m) => dims::alt_dim_symmetric(*m, &twist, a.d, a.p, a.height, engine)?,
        GroupChoice::Explicit(h) if power => dims::power_op_with(h, &twist, a.d, a.p, a.height, engine)?,
        GroupChoice::Explicit(h) => dims::alt_dim_with(h, &twist, a.d, a.p, a.height, engine)?,
    };
    let mut out = cyc_fields(&r.value);
    out.insert("engine".into(), serde_json::to_value(r.engine).expect("engine serializes"));
    out.insert("agreement".into(), json!(r.agreement));
    out.insert("group".into(), json!(g.spec()));
    out.insert("twist".into(), json!(twist.name()));
    Ok(Value::Object(out))
}

fn loops_result(a: &LoopsArgs) -> CliResult<Value> {
    let want_structural = a.engine != LoopsEngine::BruteForce;
    let want_brute = a.engine != LoopsEngine::Structural;
    let structural = want_structural.then(|| loop_tower(a.m, a.p, a.t));
    let brute = if want_brute {
        let g = PermGroup::symmetric(a.m.max(1) as usize)?;
        let mut constrain = vec![true; a.t + 1];
        constrain[0] = false;
        Some(commuting_tuple_classes(&g, a.t, a.p, &constrain)?)
    } else {
        None
    };
    let mut out = serde_json::Map::new();
    let count = structural
        .as_ref()
        .map(|x| x.len())
        .or_else(|| brute.as_ref().map(Vec::len))
        .unwrap_or(0);
    out.insert("components".into(), json!(count));
    let engine = match a.engine {
        LoopsEngine::Structural => "structural",
        LoopsEngine::BruteForce => "brute-force",
        LoopsEngine::Both => "both",
    };
    out.insert("engine".into(), json!(engine));
    if let (Some(x), Some(b)) = (&structural, &brute) {
        let mut lhs: Vec<(String, u32)> = order_degree_profile(x)
            .into_iter()
            .map(|(o, d)| (o.to_string(), d))
            .collect();
        let mut rhs: Vec<(String, u32)> = b
            .iter()
            .map(|c| (c.centralizer_order.to_string(), c.orbit_count as u32))
            .collect();
        lhs.sort();
        rhs.sort();
        let agree = x.len() == b.len() && lhs == rhs;
        out.insert("agreement".into(), json!(agree));
        if !agree {
            return Err(CliError::Core(Error::EngineDisagreement(format!(
                "structural engine has {} components, brute force {}",
                x.len(),
                b.len()
            ))));
        }
    } else {
        out.insert("agreement".into(), Value::Null);
    }
    if let Some(d) = a.d {
        let v = match (&structural, &brute) {
            (Some(x), _) => CycValue::from_rational(crate::pi_finite::groupoid_cardinality(
                x,
                crate::pi_finite::permutation_weight(d),
            )),
            (None, Some(_)) => CycValue::from_rational(burnside::tuple_integral(
                &PermGroup::symmetric(a.m.max(1) as usize)?,
                a.p,
                d,
                a.t,
                &std::iter::once(false).chain(std::iter::repeat_n(true, a.t)).collect::<Vec<_>>(),
            )?),
            _ => unreachable!("some engine ran"),
        };
        out.insert("integral".into(), json!(v.to_string()));
    }
    if !a.count_only {
        let rows = match (&structural, &brute) {
            (Some(x), _) => serde_json::to_value(&x.components),
            (None, Some(b)) => serde_json::to_value(b),
            _ => unreachable!("some engine ran"),
        }
        .expect("rows serialize");
        out.insert("rows".into(), rows);
    }
    Ok(Value::Object(out))
}

fn wreath_result(a: &WreathArgs) -> CliResult<Value> {
    let g = parse_group(&a.g)?;
    let table = wreath::wreath_class_table(&g, a.m);
    let mass = table
        .iter()
        .map(|(_, o)| crate::arith::recip(o))
        .fold(Rational::from_integer(0.into()), |x, y| x + y);
    let rows: Vec<Value> = table
        .iter()
        .map(|(label, order)| {
            let view = label.describe(&g);
            json!({
                "cycle_type": view.cycle_type,
                "assignments": view.assignments,
                "centralizer_order": order.to_string(),
            })
        })
        .collect();
    let mut out = serde_json::Map::new();
    out.insert("group".into(), json!(g.spec_string()));
    out.insert("m".into(), json!(a.m));
    out.insert("classes".into(), json!(table.len()));
    out.insert("mass".into(), json!(rational_string(&mass)));
    if a.verify {
        let v = wreath::verify_wreath_table(&g, a.m)?;
        out.insert("verified".into(), json!(v.passed()));
        out.insert("verification".into(), serde_json::to_value(v).expect("report serializes"));
    }
    out.insert("rows".into(), json!(rows));
    Ok(Value::Object(out))
}

fn h1_result(a: &H1Args) -> CliResult<Value> {
    let mut out;
    if a.super_ {
        out = int_fields(&height1::superdim2_alt(a.m, a.d as u64));
        out.insert("method".into(), json!("categorical"));
    } else {
        out = int_fields(&height1::alt_dim_h1(a.m, a.d));
        out.insert("method".into(), json!("enumeration"));
        let (o2, d2) = height1::od2_sets(a.m);
        out.insert("o2".into(), json!(o2));
        out.insert("d2".into(), json!(d2));
        let report = height1::parity_discrepancy_report(a.m..=a.m, &[a.d]);
        let row = &report.rows[0];
        out.insert(
            "parity_report".into(),
            json!({
                "enumeration": row.enumeration,
                "as_printed": row.as_printed,
                "resolved": row.resolved,
                "as_printed_matches": row.as_printed_matches,
                "resolved_matches": row.resolved_matches,
            }),
        );
        if let Some(conv) = a.closed_form {
            let conv = match conv {
                ClosedFormArg::AsPrinted => height1::ParityConvention::AsPrinted,
                ClosedFormArg::Resolved => height1::ParityConvention::Resolved,
            };
            let v = height1::alt_dim_h1_closed(a.m, a.d, conv);
            out.insert(
                "closed_form".into(),
                json!({
                    "convention": conv,
                    "value": v.to_string(),
                    "matches_enumeration": v.to_string() == row.enumeration,
                }),
            );
        }
    }
    out.insert("outside_regime".into(), json!(height1::outside_regime(a.m)));
    Ok(Value::Object(out))
}

fn yoshida_result(a: &YoshidaArgs) -> CliResult<Value> {
    let g = parse_group(&a.group)?;
    let terms = burnside::yoshida_terms(&g, a.p)?;
    let mut out = serde_json::Map::new();
    out.insert("group".into(), json!(g.spec_string()));
    out.insert("p".into(), json!(a.p));
    out.insert("sylow_count".into(), json!(terms.iter().filter(|t| t.arity() == 1).count()));
    out.insert("terms".into(), json!(terms.len()));
    if a.verify {
        let report = burnside::verify_loop_decomposition(&g, a.p, a.d, a.t, a.mixed)?;
        out.insert("identity_holds".into(), json!(report.holds));
        out.insert("verification".into(), serde_json::to_value(report).expect("report serializes"));
    }
    out.insert("rows".into(), serde_json::to_value(&terms).expect("terms serialize"));
    Ok(Value::Object(out))
}

fn genfunc_alt_file(a: &GenfuncArgs) -> CliResult<DimSeries> {
    let path = a.alt_file.as_ref().ok_or_else(|| usage("--alt-source file needs --alt-file"))?;
    let text = read_file(path)?;
    let raw: Vec<Value> = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let coeffs = raw
        .iter()
        .map(|v| {
            let s = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(usage("alt coefficients must be numbers or strings")),
            };
            parse_rational(&s).ok_or_else(|| usage(format!("bad coefficient {s:?}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if coeffs.len() < a.max_m as usize + 1 {
        return Err(usage(format!("--alt-file supplies {} coefficients, need {}", coeffs.len(), a.max_m + 1)));
    }
    Ok(DimSeries::new(coeffs[..=a.max_m as usize].to_vec()))
}

fn genfunc_result(a: &GenfuncArgs) -> CliResult<Value> {
    let ms: Vec<u32> = (0..=a.max_m).collect();
    let super_pair = a.height == 1 && a.alt_source == AltSource::Closed;
    if super_pair && a.d < 0 {
        return Err(usage("the categorical height-1 series needs d >= 0"));
    }
    let sym_terms: Vec<Rational> = par::try_map(&ms, |&m| -> CliResult<Rational> {
        Ok(match a.height {
            0 => rat(dims::height0_dims(a.d, m)?.sym),
            _ if super_pair => rat(height1::superdim2_sym(m, a.d as u64)?),
            _ => {
                let r = dims::alt_dim_symmetric(m, &TwistSpec::Trivial, a.d, 2, 1, EngineChoice::Structural)?;
                r.value.as_rational().cloned().expect("trivial twist is rational")
            }
        })
    })?;
    let sym = DimSeries::new(sym_terms);
    let alt = match a.alt_source {
        AltSource::Closed if a.height == 0 => {
            DimSeries::new(par::try_map(&ms, |&m| Ok::<_, Error>(rat(dims::height0_dims(a.d, m)?.alt)))?)
        }
        AltSource::Closed => DimSeries::new(ms.iter().map(|&m| rat(height1::superdim2_alt(m, a.d as u64))).collect()),
        AltSource::Sgn1 => {
            if a.height != 1 {
                return Err(usage("--alt-source sgn1 needs --height 1"));
            }
            DimSeries::new(ms.iter().map(|&m| rat(height1::alt_dim_h1(m, a.d))).collect())
        }
        AltSource::Inverse => {
            let inv = series_inverse(&sym)?;
            DimSeries::new(
                inv.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(m, c)| if m % 2 == 1 { -c.clone() } else { c.clone() })
                    .collect(),
            )
        }
        AltSource::File => genfunc_alt_file(a)?,
    };
    let report = verify_series(&sym, &alt, a.d)?;
    let mut out = match serde_json::to_value(report).expect("report serializes") {
        Value::Object(m) => m,
        _ => unreachable!("struct serializes to an object"),
    };
    let experimental = a.height == 1 && matches!(a.alt_source, AltSource::Closed | AltSource::Sgn1 | AltSource::File);
    out.insert("height".into(), json!(a.height));
    out.insert("experimental".into(), json!(experimental));
    Ok(Value::Object(out))
}

fn transgress_result(a: &TransgressArgs) -> CliResult<Value> {
    let c = transgress_cocycle(a)?;
    let deg = c.group().group().degree();
    let elems = a
        .elems
        .iter()
        .map(|s| Perm::parse(deg, s))
        .collect::<crate::Result<Vec<_>>>()?;
    if elems.len() > c.degree() {
        return Err(usage(format!(
            "{} elements given for a cocycle of degree {}",
            elems.len(),
            c.degree()
        )));
    }
    let mut out = serde_json::Map::new();
    out.insert("elems".into(), json!(elems.iter().map(Perm::to_string).collect::<Vec<_>>()));
    out.insert("degree".into(), json!(c.degree()));
    if elems.len() == c.degree() {
        let q = cocycle::iterated_transgression(&c, &elems)?;
        out.insert("value".into(), json!(q.to_string()));
        out.insert("exactness".into(), json!("rational"));
        out.insert("modulus".into(), json!("1"));
    } else {
        for (i, a) in elems.iter().enumerate() {
            if elems[i + 1..].iter().any(|b| !a.commutes_with(b)) {
                return Err(Error::NotCommuting.into());
            }
        }
        let mut cur = c;
        for e in &elems {
            cur = cocycle::transgress_step(&cur, e)?;
        }
        out.insert("is_cocycle".into(), json!(cur.is_cocycle()?));
        out.insert("cochain".into(), serde_json::to_value(cur.to_json()).expect("doc serializes"));
    }
    Ok(Value::Object(out))
}

/// Runs a command and returns its JSON payload.
pub fn dispatch(cmd: &Command) -> CliResult<Value> {
    match cmd {
        Command::Dim(a) => dim_result(a, false),
        Command::Powerop(a) => dim_result(a, true),
        Command::Loops(a) => loops_result(a),
        Command::WreathClasses(a) => wreath_result(a),
        Command::H1(a) => h1_result(a),
        Command::Yoshida(a) => yoshida_result(a),
        Command::Genfunc(a) => genfunc_result(a),
        Command::Transgress(a) => transgress_result(a),
    }
}

/// Location of the result cache: `ALTPOW_CACHE`, else the user cache dir.
pub fn cache_dir() -> Option<PathBuf> {
    if let Some(dir) = std::env::var_os("ALTPOW_CACHE") {
        return Some(PathBuf::from(dir));
    }
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(dir).join("altpow"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("altpow"))
}

#[derive(Serialize, serde::Deserialize)]
struct CacheEntry {
    key: String,
    engine_version: String,
    payload: Value,
}

/// Outcome of a cache lookup.
#[derive(Debug, PartialEq)]
pub enum CacheLookup {
    Hit(Value),
    Miss,
    /// The entry existed but could not be read; it is treated as a miss.
    Corrupt(String),
}

pub fn cache_lookup(dir: &Path, req: &Request) -> CacheLookup {
    let path = dir.join(format!("{}.json", req.cache_key()));
    let Ok(text) = std::fs::read_to_string(&path) else {
        return CacheLookup::Miss;
    };
    match serde_json::from_str::<CacheEntry>(&text) {
        Ok(e) if e.engine_version == ENGINE_VERSION && e.key == req.canonical() => CacheLookup::Hit(e.payload),
        Ok(_) => CacheLookup::Miss,
        Err(err) => CacheLookup::Corrupt(format!("{}: {err}", path.display())),
    }
}

/// Publishes an entry atomically (temp file then rename).
pub fn cache_store(dir: &Path, req: &Request, payload: &Value) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let entry = CacheEntry {
        key: req.canonical(),
        engine_version: ENGINE_VERSION.to_string(),
        payload: payload.clone(),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer(&mut tmp, &entry)?;
    tmp.flush()?;
    tmp.persist(dir.join(format!("{}.json", req.cache_key())))
        .map_err(|e| e.error)?;
    Ok(())
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Tab-separated rendering: one row per entry of `rows`, or one
/// `key<TAB>value` line per field when there are no rows.
pub fn render_tsv(payload: &Value) -> String {
    let mut s = String::new();
    let Value::Object(map) = payload else {
        return cell(payload) + "\n";
    };
    match map.get("rows") {
        Some(Value::Array(rows)) if !rows.is_empty() => {
            let mut cols: Vec<String> = Vec::new();
            for r in rows {
                if let Value::Object(o) = r {
                    for k in o.keys() {
                        if !cols.contains(k) {
                            cols.push(k.clone());
                        }
                    }
                }
            }
            s.push_str(&cols.join("\t"));
            s.push('\n');
            for r in rows {
                let line: Vec<String> = cols.iter().map(|c| r.get(c).map(cell).unwrap_or_default()).collect();
                s.push_str(&line.join("\t"));
                s.push('\n');
            }
        }
        _ => {
            for (k, v) in map {
                s.push_str(&format!("{k}\t{}\n", cell(v)));
            }
        }
    }
    s
}

pub fn render(payload: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(payload).expect("payload serializes") + "\n",
        Format::Tsv => render_tsv(payload),
    }
}

/// Executes a parsed invocation; returns rendered output and any warnings.
pub fn execute(cli: &Cli) -> CliResult<(String, Vec<String>)> {
    if let Some(b) = cli.order_bound {
        group::set_order_bound(b);
    }
    let req = request(&cli.command)?;
    let dir = if cli.no_cache { None } else { cache_dir() };
    let mut warnings = Vec::new();
    if let Some(dir) = &dir {
        match cache_lookup(dir, &req) {
            CacheLookup::Hit(payload) => return Ok((render(&payload, cli.format), warnings)),
            CacheLookup::Corrupt(msg) => warnings.push(format!("ignoring corrupted cache entry {msg}")),
            CacheLookup::Miss => {}
        }
    }
    let payload = par::with_threads(cli.threads, || dispatch(&cli.command))?;
    if let Some(dir) = &dir {
        if let Err(e) = cache_store(dir, &req, &payload) {
            warnings.push(format!("could not write cache entry in {}: {e}", dir.display()));
        }
    }
    Ok((render(&payload, cli.format), warnings))
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok((out, warnings)) => {
            for w in warnings {
                eprintln!("altpow: warning: {w}");
            }
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("altpow: error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CliResult<Value> {
        let cli = Cli::try_parse_from(std::iter::once("altpow").chain(args.iter().copied())).unwrap();
        dispatch(&cli.command)
    }

    #[test]
    fn h1_example() {
        let v = run(&["h1", "--m", "4", "--d", "2", "--closed-form", "resolved"]).unwrap();
        assert_eq!(v["value"], "18");
        assert_eq!(v["exactness"], "integer");
        assert_eq!(v["closed_form"]["matches_enumeration"], true);
        assert_eq!(v["parity_report"]["as_printed"], "16");
    }

    #[test]
    fn loops_count() {
        let v = run(&["loops", "--m", "3", "--p", "2", "--t", "1", "--count-only", "--engine", "both"]).unwrap();
        assert_eq!(v["components"], 5);
        assert_eq!(v["agreement"], true);
    }

    #[test]
    fn genfunc_height0() {
        let v = run(&["genfunc", "--height", "0", "--d", "3", "--max-m", "10"]).unwrap();
        assert_eq!(v["identity_holds"], true);
        let v = run(&["genfunc", "--height", "1", "--d", "2", "--max-m", "6", "--alt-source", "inverse"]).unwrap();
        assert_eq!(v["identity_holds"], true);
    }

    #[test]
    fn dim_and_powerop() {
        let v = run(&["dim", "--m", "2", "--d", "3", "--p", "2"]).unwrap();
        assert_eq!(v["value"], "6");
        let v = run(&["powerop", "--group", "S3", "--d", "-2", "--height", "1", "--engine", "auto"]).unwrap();
        assert_eq!(v["engine"], "both");
        assert_eq!(v["agreement"], true);
        let v = run(&["dim", "--m", "4", "--d", "2", "--height", "1", "--twist", "sgn1"]).unwrap();
        assert_eq!(v["value"], "18");
    }

    #[test]
    fn transgress_builtin() {
        let v = run(&["transgress", "--builtin", "symplectic", "--elem", "(0 1)", "--elem", "(2 3)"]).unwrap();
        assert_eq!(v["value"], "1/2");
        let v = run(&["transgress", "--builtin", "symplectic", "--elem", "(0 1)"]).unwrap();
        assert_eq!(v["is_cocycle"], true);
    }

    #[test]
    fn exit_codes() {
        let err = run(&["dim", "--d", "2"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        group::set_order_bound(100);
        let err = run(&["yoshida", "--group", "S6", "--p", "2"]).unwrap_err();
        group::set_order_bound(group::DEFAULT_ORDER_BOUND);
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn requests_are_canonical() {
        let parse = |args: &[&str]| {
            let cli = Cli::try_parse_from(std::iter::once("altpow").chain(args.iter().copied())).unwrap();
            request(&cli.command).unwrap()
        };
        let a = parse(&["yoshida", "--group", "deg=3; (0 1), (0 1 2)", "--p", "2"]);
        let b = parse(&["yoshida", "--p", "2", "--group", "deg=3; (0 1 2), (0 1)"]);
        assert_eq!(a.canonical(), b.canonical());
        assert_ne!(a.cache_key(), parse(&["yoshida", "--group", "S3", "--p", "3"]).cache_key());
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cli = Cli::try_parse_from(["altpow", "h1", "--m", "5", "--d", "3"]).unwrap();
        let req = request(&cli.command).unwrap();
        assert_eq!(cache_lookup(dir.path(), &req), CacheLookup::Miss);
        let payload = dispatch(&cli.command).unwrap();
        cache_store(dir.path(), &req, &payload).unwrap();
        assert_eq!(cache_lookup(dir.path(), &req), CacheLookup::Hit(payload));
        std::fs::write(dir.path().join(format!("{}.json", req.cache_key())), "{not json").unwrap();
        assert!(matches!(cache_lookup(dir.path(), &req), CacheLookup::Corrupt(_)));
    }

    #[test]
    fn tsv_rows() {
        let v = run(&["wreath-classes", "--g", "Z2", "--m", "2"]).unwrap();
        let tsv = render_tsv(&v);
        assert_eq!(tsv.lines().count(), 6);
        assert!(tsv.starts_with("cycle_type\tassignments\tcentralizer_order") || tsv.contains("centralizer_order"));
    }
}
