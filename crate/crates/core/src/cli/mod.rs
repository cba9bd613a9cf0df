//! Batch command surface: run configuration, dispatch to the library and JSON output.
//!
//! Settings are resolved from command-line flags, then `COCYCLE_CACHE_DIR` for the
//! cache directory, then a `key = value` config file, then defaults. Every command
//! writes one JSON document to stdout; logs go to stderr. Exit codes: 0 success,
//! 1 a verification command failed its tolerance, 2 invalid configuration or error.

use crate::archimedean::{omega_bar_coeffs, period_polynomial, period_polynomial_by_integrals, PeriodPolynomial};
use crate::arith::{canonical_sqrt_d, check_prime, legendre, parse_rat, smallest_nonresidue, PadicElem, QuadExtElem};
use crate::cache::{set_cache_dir, CACHE_ENV};
use crate::cocycles::{eval_j, kappa, res0_j, JParams, PhiTauFunction};
use crate::error::{Error, Result};
use crate::quadforms::{enumerate_simple, intersection, padic_intersection, validate_disc, BinaryQF, Cusp};
use crate::st_lift::{bound_check, st_eval, EichlerSymbol};
use crate::verify::{self, CriterionReport};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "cocycle", version, about = "Rigid meromorphic cocycles: evaluation and verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Simple forms of discriminant D
    Forms,
    /// Real and p-adic intersection numbers of --form with (r, s)
    Intersect,
    /// J_{k,D}{r,s}(z)
    EvalJ,
    /// phi_tau(z) for the orbit of --form
    PhiTau,
    /// kappa_{k,D}{r,s}
    Kappa,
    /// Res0(J_{k,D}{r,s}) summed through layer --level
    Res0,
    /// Res0(J) = kappa at (p, k, D)
    VerifyResidue,
    /// ST(kappa){0,inf}(z) at tree level --level
    StEval,
    /// ST(kappa) = J and the left-inverse property
    VerifySt,
    /// Moment bounds of ST(kappa) to --depth
    Bounds,
    /// kappa-bar{r,s} by the closed constant and by geodesic integrals
    Periods,
    /// Coefficients of the complex generating series for D <= --D-max
    Omega,
    /// Exhaustive binomial identity for k <= --kmax
    IdentityCheck,
    /// The full acceptance suite
    Accept,
}

impl Command {
    pub fn is_verification(self) -> bool {
        matches!(self, Command::VerifyResidue | Command::VerifySt | Command::Bounds | Command::IdentityCheck | Command::Accept)
    }
}

/// Command-line overrides; any field left unset falls back to the config file.
#[derive(Args, Debug, Clone, Default)]
pub struct Opts {
    /// key = value config file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true)]
    pub k: Option<i64>,
    #[arg(long = "D", global = true, allow_hyphen_values = true)]
    pub d: Option<String>,
    #[arg(long = "D-max", global = true)]
    pub d_max: Option<u64>,
    /// Absolute p-adic precision M
    #[arg(long, global = true)]
    pub prec: Option<i64>,
    /// Tree level N
    #[arg(long, global = true)]
    pub level: Option<i64>,
    /// Truncation height H for Heegner-form sums
    #[arg(long, global = true)]
    pub height: Option<i64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long = "cache-dir", global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Cusp r: an integer, a fraction a/b, or inf
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Point x,y meaning x + y sqrt(u), u the least non-residue mod p; x and y are
    /// rationals or p-adic strings p:val:digits:prec
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Form a,b,c
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub form: Option<String>,
    #[arg(long, global = true)]
    pub kmax: Option<i64>,
    #[arg(long, global = true)]
    pub depth: Option<i64>,
    /// Also write the omega rows as CSV
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
}

/// A validated run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub p: u64,
    pub k: i64,
    pub d: BigInt,
    pub d_max: u64,
    pub prec: i64,
    pub level: i64,
    pub height: i64,
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
    pub r: Cusp,
    pub s: Cusp,
    pub z: (String, String),
    pub form: BinaryQF,
    pub kmax: i64,
    pub depth: i64,
    pub csv: Option<PathBuf>,
}

const KEYS: &[&str] =
    &["p", "k", "D", "D_max", "prec", "level", "height", "seed", "cache_dir", "r", "s", "z", "form", "kmax", "depth", "csv"];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| Error::config("config", format!("line {}: expected key = value", n + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::config(key, format!("unknown key on line {}", n + 1)));
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn num<T: std::str::FromStr>(field: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::config(field, format!("cannot parse `{v}`")))
}

fn parse_form(v: &str) -> Result<BinaryQF> {
    let parts: Vec<&str> = v.trim().trim_start_matches('[').trim_end_matches(']').split(',').collect();
    if parts.len() != 3 {
        return Err(Error::config("form", format!("expected a,b,c, got `{v}`")));
    }
    let c: Vec<BigInt> = parts.iter().map(|x| num::<BigInt>("form", x)).collect::<Result<_>>()?;
    Ok(BinaryQF { a: c[0].clone(), b: c[1].clone(), c: c[2].clone() })
}

fn parse_point(v: &str) -> Result<(String, String)> {
    let (x, y) = v.split_once(',').ok_or_else(|| Error::config("z", format!("expected x,y, got `{v}`")))?;
    Ok((x.trim().to_string(), y.trim().to_string()))
}

impl RunConfig {
    /// Resolves flags over the config file over defaults and validates the result.
    pub fn resolve(opts: &Opts) -> Result<Self> {
        let file = match &opts.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        let get = |key: &str, flag: Option<String>, default: &str| flag.or_else(|| file.get(key).cloned()).unwrap_or_else(|| default.to_string());
        let cache_dir = opts
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .or_else(|| file.get("cache_dir").map(PathBuf::from));
        let cusp = |field: &str, v: String| -> Result<Cusp> { v.parse().map_err(|_| Error::config(field, format!("not a cusp: `{v}`"))) };
        let cfg = RunConfig {
            p: num("p", &get("p", opts.p.map(|x| x.to_string()), "3"))?,
            k: num("k", &get("k", opts.k.map(|x| x.to_string()), "3"))?,
            d: num("D", &get("D", opts.d.clone(), "13"))?,
            d_max: num("D_max", &get("D_max", opts.d_max.map(|x| x.to_string()), "100"))?,
            prec: num("prec", &get("prec", opts.prec.map(|x| x.to_string()), "10"))?,
            level: num("level", &get("level", opts.level.map(|x| x.to_string()), "6"))?,
            height: num("height", &get("height", opts.height.map(|x| x.to_string()), "60"))?,
            seed: num("seed", &get("seed", opts.seed.map(|x| x.to_string()), "20240601"))?,
            cache_dir,
            r: cusp("r", get("r", opts.r.clone(), "0"))?,
            s: cusp("s", get("s", opts.s.clone(), "inf"))?,
            z: parse_point(&get("z", opts.z.clone(), "0,1"))?,
            form: parse_form(&get("form", opts.form.clone(), "1,1,-3"))?,
            kmax: num("kmax", &get("kmax", opts.kmax.map(|x| x.to_string()), "10"))?,
            depth: num("depth", &get("depth", opts.depth.map(|x| x.to_string()), "4"))?,
            csv: opts.csv.clone().or_else(|| file.get("csv").map(PathBuf::from)),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_prime(self.p).map_err(|e| Error::config("p", e.to_string()))?;
        if self.k < 1 || self.k % 2 == 0 {
            return Err(Error::config("k", format!("weight k must be odd and positive, got {}", self.k)));
        }
        validate_disc(&self.d).map_err(|e| Error::config("D", e.to_string()))?;
        let positive = [("prec", self.prec), ("level", self.level), ("height", self.height), ("kmax", self.kmax), ("depth", self.depth)];
        for (field, v) in positive {
            if v < 1 {
                return Err(Error::config(field, format!("must be at least 1, got {v}")));
            }
        }
        if self.r == self.s {
            return Err(Error::config("s", "endpoints r and s coincide"));
        }
        Ok(())
    }

    pub fn j_params(&self) -> Result<JParams> {
        JParams::new(self.p, self.k, self.d.clone())
    }

    /// The point z = x + y sqrt(u) in the unramified quadratic extension, at precision `prec`.
    pub fn point(&self, prec: i64) -> Result<QuadExtElem> {
        let u = smallest_nonresidue(self.p);
        let coord = |v: &str| -> Result<PadicElem> {
            if v.contains(':') {
                let e: PadicElem = v.parse().map_err(|_| Error::config("z", format!("not a p-adic string: `{v}`")))?;
                if e.p() != self.p {
                    return Err(Error::config("z", format!("`{v}` is not {}-adic", self.p)));
                }
                Ok(e)
            } else {
                let x = parse_rat(v).map_err(|_| Error::config("z", format!("not a rational: `{v}`")))?;
                Ok(PadicElem::from_rational(self.p, &x, prec))
            }
        };
        Ok(QuadExtElem::new(coord(&self.z.0)?, coord(&self.z.1)?, u))
    }
}

fn int(n: &BigInt) -> Value {
    n.to_i64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

fn form_json(q: &BinaryQF) -> Value {
    json!({ "a": int(&q.a), "b": int(&q.b), "c": int(&q.c), "disc": int(&q.disc()) })
}

fn report_json(r: &CriterionReport) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

fn period_json(pp: &PeriodPolynomial) -> Value {
    json!({
        "coeffs": pp.coeffs.iter().map(|c| json!({ "re": c.re, "im": c.im })).collect::<Vec<_>>(),
        "forms_used": pp.forms_used,
    })
}

/// Result of one command: the JSON document and whether it passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub json: Value,
    pub pass: bool,
}

impl Outcome {
    fn data(json: Value) -> Self {
        Outcome { json, pass: true }
    }

    fn reports(reports: Vec<CriterionReport>) -> Self {
        let pass = verify::all_pass(&reports);
        let lines: Vec<String> = reports.iter().map(|r| r.line()).collect();
        Outcome { json: json!({ "pass": pass, "summary": lines, "criteria": reports.iter().map(report_json).collect::<Vec<_>>() }), pass }
    }
}

/// Runs one command against a validated configuration.
pub fn dispatch(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    // rational inputs are exact; this many digits covers any working precision used below
    let zprec = 2 * cfg.prec + 4 * cfg.k * (cfg.level + 2) + 40;
    match command {
        Command::Forms => {
            let mut forms = enumerate_simple(&cfg.d)?;
            forms.sort();
            Ok(Outcome::data(json!({
                "D": int(&cfg.d),
                "count": forms.len(),
                "forms": forms.iter().map(form_json).collect::<Vec<_>>(),
            })))
        }
        Command::Intersect => {
            let q = &cfg.form;
            let real = intersection(q, &cfg.r, &cfg.s)?;
            let disc = q.disc();
            let heegner = (&q.a % BigInt::from(cfg.p)) == BigInt::from(0);
            let padic = if heegner && legendre(&disc, cfg.p) == 1 {
                let root = canonical_sqrt_d(&disc, cfg.p, cfg.prec)?;
                Some(padic_intersection(q, cfg.p, &root)?)
            } else {
                None
            };
            Ok(Outcome::data(json!({
                "form": form_json(q),
                "r": cfg.r.to_string(),
                "s": cfg.s.to_string(),
                "intersection": real,
                "p": cfg.p,
                "padic_intersection": padic,
            })))
        }
        Command::EvalJ => {
            let params = cfg.j_params()?;
            let z = cfg.point(zprec)?;
            let ev = eval_j(&params, &cfg.r, &cfg.s, &z, cfg.prec)?;
            Ok(Outcome::data(json!({
                "value": ev.value.value.to_string(),
                "prec": ev.value.guaranteed_abs_prec,
                "layers": ev.layers,
                "forms_used": ev.forms_used,
            })))
        }
        Command::PhiTau => {
            let phi = PhiTauFunction::new(cfg.p, cfg.k, cfg.form.clone())?;
            let z = cfg.point(zprec)?;
            let ev = phi.evaluate(&z, cfg.prec)?;
            Ok(Outcome::data(json!({
                "value": ev.value.value.to_string(),
                "prec": ev.value.guaranteed_abs_prec,
                "layers": ev.layers,
                "forms_used": ev.forms_used,
                "capped": ev.capped,
            })))
        }
        Command::Kappa => {
            let kp = kappa(&cfg.j_params()?, &cfg.r, &cfg.s, cfg.prec)?;
            Ok(Outcome::data(json!({
                "r": cfg.r.to_string(),
                "s": cfg.s.to_string(),
                "spoly": kp.spoly.iter().map(int).collect::<Vec<_>>(),
                "coeffs": kp.coeffs.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "prec": cfg.prec,
            })))
        }
        Command::Res0 => {
            let res = res0_j(&cfg.j_params()?, &cfg.r, &cfg.s, cfg.level, cfg.prec)?;
            Ok(Outcome::data(json!({
                "r": cfg.r.to_string(),
                "s": cfg.s.to_string(),
                "last_layer": cfg.level,
                "coeffs": res.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "prec": cfg.prec,
            })))
        }
        Command::VerifyResidue => {
            let d = cfg.d.to_i64().ok_or_else(|| Error::config("D", "too large for verification"))?;
            Ok(Outcome::reports(vec![verify::residue_identity(&[(cfg.p, cfg.k, d)], cfg.prec)?]))
        }
        Command::StEval => {
            let c0 = EichlerSymbol::kappa(&cfg.j_params()?, cfg.prec + 40)?;
            let z = cfg.point(zprec)?;
            let ev = st_eval(&c0, &z, cfg.level, cfg.prec)?;
            // digits beyond the observed stability against level N-1 are not meaningful
            let shown = ev.value.value.with_prec(ev.prec_observed.min(ev.value.guaranteed_abs_prec));
            Ok(Outcome::data(json!({
                "value": shown.to_string(),
                "prec_observed": ev.prec_observed,
                "level": ev.level,
            })))
        }
        Command::VerifySt => {
            let d = cfg.d.to_i64().ok_or_else(|| Error::config("D", "too large for verification"))?;
            Ok(Outcome::reports(vec![
                verify::st_correspondence(cfg.p, cfg.k, d)?,
                verify::left_inverse(cfg.p, cfg.k, d, 4, 4)?,
            ]))
        }
        Command::Bounds => {
            let c0 = EichlerSymbol::kappa(&cfg.j_params()?, 60)?;
            let b = bound_check(&c0, cfg.depth)?;
            let pass = b.pass;
            Ok(Outcome { json: serde_json::to_value(&b).expect("bound report serializes"), pass })
        }
        Command::Periods => {
            for (field, c) in [("r", &cfg.r), ("s", &cfg.s)] {
                if c.is_infinity() {
                    return Err(Error::config(field, "period polynomials here need finite endpoints"));
                }
            }
            let one = period_polynomial(cfg.k, &cfg.d, cfg.p, &cfg.r, &cfg.s)?;
            let two = period_polynomial_by_integrals(cfg.k, &cfg.d, cfg.p, &cfg.r, &cfg.s, cfg.height)?;
            Ok(Outcome::data(json!({
                "r": cfg.r.to_string(),
                "s": cfg.s.to_string(),
                "height": cfg.height,
                "closed_form": period_json(&one),
                "integrals": period_json(&two),
                "max_distance": one.max_dist(&two),
            })))
        }
        Command::Omega => {
            let rows = omega_bar_coeffs(cfg.k, cfg.p, cfg.d_max)?;
            if let Some(path) = &cfg.csv {
                let mut text = String::from("D,scale_num,spoly\n");
                for row in &rows {
                    let coeffs: Vec<String> = row.spoly.iter().map(|c| c.to_string()).collect();
                    text.push_str(&format!("{},{},{}\n", row.d, row.scale_num, coeffs.join(" ")));
                }
                std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            Ok(Outcome::data(json!({
                "k": cfg.k,
                "p": cfg.p,
                "rows": serde_json::to_value(&rows).expect("rows serialize"),
            })))
        }
        Command::IdentityCheck => Ok(Outcome::reports(vec![verify::binomial_identity(cfg.kmax)])),
        Command::Accept => Ok(Outcome::reports(verify::run_all(cfg.seed)?)),
    }
}

fn error_json(e: &Error) -> Value {
    match e {
        Error::ConfigInvalid { field, msg } => json!({ "error": "ConfigInvalid", "field": field, "message": msg }),
        other => json!({ "error": other.kind(), "message": other.to_string() }),
    }
}

fn emit(v: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).expect("JSON output");
    // a closed pipe downstream is not an error of the command
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

/// Parses arguments, runs the command, prints JSON and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).target(env_logger::Target::Stderr).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let started = Instant::now();
    let result = RunConfig::resolve(&cli.opts).and_then(|cfg| {
        if let Some(dir) = &cfg.cache_dir {
            set_cache_dir(Some(dir.clone()));
        }
        log::info!("{:?}: p={} k={} D={} prec={} level={}", cli.command, cfg.p, cfg.k, cfg.d, cfg.prec, cfg.level);
        dispatch(cli.command, &cfg)
    });
    match result {
        Ok(out) => {
            emit(&out.json);
            log::info!("{:?} finished in {:.2?}", cli.command, started.elapsed());
            if cli.command.is_verification() && !out.pass {
                1
            } else {
                0
            }
        }
        Err(e) => {
            log::error!("{e}");
            emit(&error_json(&e));
            2
        }
    }
}
