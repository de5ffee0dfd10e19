//! `kt`: command-line frontend for graded Koszul/Tate computations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kt_core::io::{
    chain_map_from_json, chain_map_to_json, complex_from_json, complex_to_json, homology_table, local_cohomology_table, matrix_from_json,
    module_from_json, parse_json, parse_poly_list, polys_to_json, presented_complex_from_json, presented_complex_to_json, to_canonical,
};
use kt_core::koszul::{kappa, koszul};
use kt_core::localcoh::{local_cohomology_ext_tate, local_cohomology_koszul, Caps, GradedDimTable, Window};
use kt_core::resolution::{free_resolution, grade, is_perfect, pd, resolve_complex};
use kt_core::sr::{efd_witness, frobenius_pd_invariance, strong_reducer, verify_strong_reducer, SrCaps, SupportedComplexInput};
use kt_core::tate::{tate, tate_to_koszul_lift};
use kt_core::{acceptance, ChainMap, Error, FreeComplex, Poly, PresentedComplex, PresentedModule, Ring};

#[derive(Parser)]
#[command(name = "kt", version, about = "Graded Koszul and Tate complexes, local cohomology and strong reducers over F_p")]
struct Cli {
    /// Ring description file (`p=2; vars x:1 y:1;`), or the description itself.
    #[arg(long, global = true)]
    ring: Option<String>,

    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Config file with `n_cap`, `u_cap` and `window` defaults [default: ./kt.json if present].
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Clone)]
struct CapArgs {
    /// Cap on Koszul exponents and annihilator searches.
    #[arg(long, env = "KT_NCAP")]
    ncap: Option<u64>,
    /// Lift searches stop at `ucap · r`.
    #[arg(long, env = "KT_UCAP")]
    ucap: Option<u64>,
}

#[derive(Subcommand)]
enum Verb {
    /// Koszul complex K(f).
    Koszul {
        #[arg(long)]
        elems: String,
    },
    /// The comparison map κ: K(f^n) -> K(f^m), n ≥ m.
    Kappa {
        #[arg(long)]
        elems: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
    },
    /// Tate resolution of S/(f).
    Tate {
        #[arg(long)]
        elems: String,
        /// Maximum number of differentials [default: #variables + #elems + 1].
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// A lift T(f^u) -> K(f^r) extending κ.
    Lift {
        #[arg(long)]
        elems: String,
        #[arg(long)]
        r: u64,
        /// First u to try [default: r].
        #[arg(long)]
        u_start: Option<u64>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Local cohomology H^i_(f)(M) on a window of internal degrees.
    Localcoh {
        #[arg(long)]
        elems: String,
        /// Module file; the ring itself when omitted.
        #[arg(long)]
        module: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "koszul")]
        method: Method,
        /// Cohomological degree, or a range `a:b`.
        #[arg(long, default_value = "0:2", allow_hyphen_values = true)]
        i: String,
        /// Internal degrees `tmin:tmax`.
        #[arg(long, env = "KT_WINDOW", allow_hyphen_values = true)]
        window: Option<String>,
        /// Number of Tate stages for `--method ext`.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Free resolution of a module, or of a complex of presented modules.
    Resolve {
        #[arg(long, conflicts_with = "complex")]
        module: Option<PathBuf>,
        #[arg(long)]
        complex: Option<PathBuf>,
        /// Extra steps allowed past the top of the complex.
        #[arg(long, default_value_t = 6)]
        max_extra: usize,
    },
    /// Projective dimension of a module or of S/I.
    Pd {
        #[arg(long, conflicts_with = "ideal")]
        module: Option<PathBuf>,
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Grade of an ideal.
    Grade {
        #[arg(long)]
        ideal: String,
    },
    /// Whether grade(I) = pd(S/I).
    Perfect {
        #[arg(long)]
        ideal: String,
    },
    /// Strong reducer of (X, f: X_m -> Q); writes T.json, alpha.json and report.json.
    Reduce {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        support: String,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value_t = 5)]
        e_max: u32,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Re-checks a stored strong reducer.
    VerifySr {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long = "t")]
        t: PathBuf,
        #[arg(long)]
        alpha: PathBuf,
    },
    /// Graded homology dimensions of a complex.
    Homology {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, env = "KT_WINDOW", allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// min_c, max_c, supph and width of a complex.
    Stats {
        #[arg(long)]
        complex: PathBuf,
    },
    /// pd(S/I^[p^e]) for e = 0..=e_max.
    Frobenius {
        #[arg(long)]
        ideal: String,
        #[arg(long, default_value_t = 2)]
        e_max: u32,
        /// Also compare each Frobenius power with ordinary powers of I.
        #[arg(long)]
        witness: bool,
    },
    /// Runs the packaged acceptance experiments.
    Accept {
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Koszul,
    Ext,
}

/// Defaults read from the config file; flags and `KT_*` variables win.
#[derive(Default)]
struct Config {
    n_cap: Option<u64>,
    u_cap: Option<u64>,
    window: Option<String>,
}

impl Config {
    fn load(path: Option<&Path>) -> Result<Config, Failure> {
        let path = match path {
            Some(p) => p.to_path_buf(),
            None if Path::new("kt.json").is_file() => PathBuf::from("kt.json"),
            None => return Ok(Config::default()),
        };
        let v = read_json(&path)?;
        Ok(Config {
            n_cap: v.get("n_cap").and_then(Value::as_u64),
            u_cap: v.get("u_cap").and_then(Value::as_u64),
            window: v.get("window").and_then(Value::as_str).map(str::to_string),
        })
    }

    fn n_cap(&self, caps: &CapArgs) -> u64 {
        caps.ncap.or(self.n_cap).unwrap_or(32)
    }

    fn u_cap(&self, caps: &CapArgs) -> u64 {
        caps.ucap.or(self.u_cap).unwrap_or(16)
    }

    fn window(&self, given: &Option<String>) -> Result<(i64, i64), Failure> {
        parse_range(given.as_deref().or(self.window.as_deref()).unwrap_or("-5:5"), "window")
    }
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_cap_exhausted() { 2 } else { 1 }, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    parse_json(&read_text(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_ring(arg: &Option<String>) -> Result<Ring, Failure> {
    let arg = arg.as_deref().ok_or_else(|| usage("--ring is required"))?;
    let path = Path::new(arg);
    let text = if path.is_file() { read_text(path)? } else { arg.to_string() };
    Ok(Ring::parse(&text)?)
}

fn parse_range(s: &str, what: &str) -> Result<(i64, i64), Failure> {
    let bad = || usage(format!("{what}: expected an integer or a range a:b, got {s:?}"));
    let (a, b) = match s.split_once(':') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let a = s.trim().parse().map_err(|_| bad())?;
            (a, a)
        }
    };
    if a > b {
        return Err(usage(format!("{what}: empty range {s:?}")));
    }
    Ok((a, b))
}

fn polys(ring: &Ring, s: &str) -> Result<Vec<Poly>, Failure> {
    let ps = parse_poly_list(ring, s)?;
    if ps.is_empty() {
        return Err(usage("expected at least one polynomial"));
    }
    Ok(ps)
}

/// Free complexes load from `{"twists", "maps"}`, presented ones from `{"terms", "maps"}`.
enum AnyComplex {
    Free(FreeComplex),
    Presented(PresentedComplex),
}

impl AnyComplex {
    fn load(ring: &Ring, path: &Path) -> Result<AnyComplex, Failure> {
        let v = read_json(path)?;
        Ok(if v.get("terms").is_some() {
            AnyComplex::Presented(presented_complex_from_json(ring, &v)?)
        } else {
            AnyComplex::Free(complex_from_json(ring, &v)?)
        })
    }

    fn presented(&self) -> PresentedComplex {
        match self {
            AnyComplex::Free(x) => x.as_presented(),
            AnyComplex::Presented(x) => x.clone(),
        }
    }
}

fn load_free_complex(ring: &Ring, path: &Path) -> Result<FreeComplex, Failure> {
    Ok(complex_from_json(ring, &read_json(path)?)?)
}

fn load_module(ring: &Ring, path: &Path) -> Result<PresentedModule, Failure> {
    Ok(module_from_json(ring, &read_json(path)?)?)
}

fn write_json(path: &Path, v: &Value) -> Result<(), Failure> {
    fs::write(path, to_canonical(v)).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn opt_i64(x: Option<i64>) -> String {
    x.map_or("-".into(), |n| n.to_string())
}

fn text_complex(ring: &Ring, x: &FreeComplex) -> String {
    if x.is_zero() {
        return "0\n".into();
    }
    let mut out = String::new();
    for n in x.degrees().rev() {
        let tw: Vec<String> = x.module(n).twists().iter().map(|t| format!("S({t})")).collect();
        out.push_str(&format!("X_{n} = {}\n", if tw.is_empty() { "0".into() } else { tw.join(" + ") }));
        if n > x.lo() {
            for row in x.diff(n).rows(ring) {
                let cells: Vec<String> = row.iter().map(|p| p.to_string(ring)).collect();
                out.push_str(&format!("  [{}]\n", cells.join(", ")));
            }
        }
    }
    out
}

fn text_chain_map(ring: &Ring, f: &ChainMap) -> String {
    let mut out = String::new();
    for n in f.source().degrees() {
        out.push_str(&format!("degree {n}:\n"));
        for row in f.map(n).rows(ring) {
            let cells: Vec<String> = row.iter().map(|p| p.to_string(ring)).collect();
            out.push_str(&format!("  [{}]\n", cells.join(", ")));
        }
    }
    out
}

fn text_table(table: &GradedDimTable) -> String {
    let mut out = format!("stages {:?}\n", table.exponents);
    for ((i, t), c) in &table.cells {
        out.push_str(&format!("i={i} t={t} dim={} stage={}{}\n", c.dim, c.stage, if c.stable { "" } else { " UNSTABLE" }));
    }
    out
}

/// What a verb produced: a JSON value and its text rendering.
struct Output {
    json: Value,
    text: String,
    code: u8,
}

impl Output {
    fn new(json: Value, text: String) -> Output {
        Output { json, text, code: 0 }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let config = Config::load(cli.config.as_deref())?;
    if let Verb::Accept { criterion } = &cli.verb {
        return accept(*criterion);
    }
    let ring = load_ring(&cli.ring)?;
    let r = &ring;
    Ok(match &cli.verb {
        Verb::Koszul { elems } => {
            let k = koszul(r, &polys(r, elems)?)?.complex;
            Output::new(complex_to_json(r, &k), text_complex(r, &k))
        }
        Verb::Kappa { elems, n, m } => {
            if n < m || *m < 1 {
                return Err(usage("kappa needs n ≥ m ≥ 1"));
            }
            let f = kappa(r, *n, *m, &polys(r, elems)?)?;
            Output::new(chain_map_to_json(r, &f), text_chain_map(r, &f))
        }
        Verb::Tate { elems, max_len } => {
            let seq = polys(r, elems)?;
            let t = tate(r, &seq, max_len.unwrap_or(r.nvars() + seq.len() + 1))?;
            let mut v = complex_to_json(r, &t.complex);
            v["finished"] = json!(t.finished);
            Output::new(v, format!("{}finished: {}\n", text_complex(r, &t.complex), t.finished))
        }
        Verb::Lift { elems, r: rr, u_start, caps } => {
            let seq = polys(r, elems)?;
            let l = tate_to_koszul_lift(r, &seq, *rr, u_start.unwrap_or(*rr), config.u_cap(caps) * rr)?;
            l.map.validate(r)?;
            let mut v = chain_map_to_json(r, &l.map);
            v["u"] = json!(l.u);
            v["verified"] = json!(true);
            Output::new(v, format!("u = {}\n{}", l.u, text_chain_map(r, &l.map)))
        }
        Verb::Localcoh { elems, module, method, i, window, depth, caps } => {
            let seq = polys(r, elems)?;
            let m = match module {
                Some(p) => load_module(r, p)?,
                None => PresentedModule::quotient_ring(r, &[])?,
            };
            let (i_min, i_max) = parse_range(i, "i")?;
            let (t_min, t_max) = config.window(window)?;
            let w = Window::new(i_min, i_max, t_min, t_max);
            let limits = Caps { n_cap: config.n_cap(caps), depth: *depth, u_cap_factor: config.u_cap(caps) };
            let table = match method {
                Method::Koszul => local_cohomology_koszul(r, &seq, &m, &w, limits.n_cap)?,
                Method::Ext => local_cohomology_ext_tate(r, &seq, &m, &w, limits.depth, limits.u_cap_factor)?,
            };
            Output::new(local_cohomology_table(&table), text_table(&table))
        }
        Verb::Resolve { module, complex, max_extra } => match (module, complex) {
            (Some(p), None) => {
                let res = free_resolution(r, &load_module(r, p)?, r.nvars() + 1);
                Output::new(complex_to_json(r, &res.complex), text_complex(r, &res.complex))
            }
            (None, Some(p)) => {
                let x = AnyComplex::load(r, p)?.presented();
                let res = resolve_complex(r, &x, *max_extra)?;
                let v = json!({
                    "complex": complex_to_json(r, &res.complex),
                    "quasi_iso": res.is_quasi_iso(r, &x),
                    "source": presented_complex_to_json(r, &x),
                });
                let text = format!("{}quasi-isomorphism: {}\n", text_complex(r, &res.complex), res.is_quasi_iso(r, &x));
                Output::new(v, text)
            }
            _ => return Err(usage("resolve needs --module or --complex")),
        },
        Verb::Pd { module, ideal } => {
            let m = match (module, ideal) {
                (Some(p), None) => load_module(r, p)?,
                (None, Some(i)) => PresentedModule::quotient_ring(r, &parse_poly_list(r, i)?)?,
                _ => return Err(usage("pd needs --module or --ideal")),
            };
            let d = pd(r, &m);
            Output::new(json!({ "pd": d }), format!("pd = {}\n", d.map_or("-∞ (zero module)".into(), |d| d.to_string())))
        }
        Verb::Grade { ideal } => {
            let g = grade(r, &polys(r, ideal)?)?;
            Output::new(json!({ "grade": g }), format!("grade = {g}\n"))
        }
        Verb::Perfect { ideal } => {
            let gens = polys(r, ideal)?;
            let g = grade(r, &gens)?;
            let d = pd(r, &PresentedModule::quotient_ring(r, &gens)?);
            let p = is_perfect(r, &gens)?;
            Output::new(json!({ "grade": g, "pd": d, "perfect": p }), format!("grade = {g}, pd = {}, perfect: {p}\n", opt_i64(d.map(|d| d as i64))))
        }
        Verb::Reduce { complex, support, target, map, out, e_max, caps } => {
            let x = load_free_complex(r, complex)?;
            let q = load_module(r, target)?;
            let f = matrix_from_json(r, &read_json(map)?)?;
            let input = SupportedComplexInput { complex: x, support: polys(r, support)?, target: q, map: f };
            let sr = strong_reducer(r, &input, &SrCaps { n_cap: config.n_cap(caps), u_cap_factor: config.u_cap(caps), e_max: *e_max })?;
            let report = json!({
                "clauses": {
                    "min_c": sr.report.min_c_ok,
                    "supph": sr.report.supph_ok,
                    "epimorphism": sr.report.epimorphism,
                    "factors": sr.report.factors,
                },
                "holds": sr.report.holds(),
                "m": sr.stages.m,
                "pd": sr.report.pd,
                "stages": {
                    "annihilator_exponent": sr.stages.annihilator_exponent,
                    "foxby_exponent": sr.stages.foxby_exponent,
                    "u": sr.stages.u,
                    "e": sr.stages.e,
                },
                "support": polys_to_json(r, &input.support),
            });
            fs::create_dir_all(out).map_err(|e| usage(format!("{}: {e}", out.display())))?;
            write_json(&out.join("T.json"), &complex_to_json(r, &sr.complex))?;
            write_json(&out.join("alpha.json"), &chain_map_to_json(r, &sr.alpha))?;
            write_json(&out.join("report.json"), &report)?;
            let text = format!(
                "m = {}, u = {}, e = {}, pd H_m(T) = {}\nwrote T.json, alpha.json, report.json to {}\n",
                sr.stages.m,
                sr.stages.u,
                sr.stages.e,
                opt_i64(sr.report.pd.map(|d| d as i64)),
                out.display()
            );
            Output::new(report, text)
        }
        Verb::VerifySr { complex, target, map, t, alpha } => {
            let x = load_free_complex(r, complex)?;
            let q = load_module(r, target)?;
            let f = matrix_from_json(r, &read_json(map)?)?;
            let tc = load_free_complex(r, t)?;
            let a = chain_map_from_json(r, &read_json(alpha)?)?;
            let rep = verify_strong_reducer(r, &tc, &a, &x, &f, &q)?;
            let v = json!({
                "clauses": { "min_c": rep.min_c_ok, "supph": rep.supph_ok, "epimorphism": rep.epimorphism, "factors": rep.factors },
                "holds": rep.holds(),
                "m": rep.m,
                "pd": rep.pd,
            });
            let text = format!(
                "min_c: {}\nsupph: {}\nepimorphism: {}\nfactors: {}\nholds: {}\n",
                rep.min_c_ok,
                rep.supph_ok,
                rep.epimorphism,
                rep.factors,
                rep.holds()
            );
            let mut o = Output::new(v, text);
            if !rep.holds() {
                o.code = 1;
            }
            o
        }
        Verb::Homology { complex, window } => {
            let (t_min, t_max) = config.window(window)?;
            match AnyComplex::load(r, complex)? {
                AnyComplex::Free(x) => {
                    let v = homology_table(r, &x, t_min, t_max);
                    Output::new(v.clone(), text_records(&v, &["n", "t", "dim"]))
                }
                AnyComplex::Presented(x) => {
                    let recs: Vec<Value> = x
                        .degrees()
                        .flat_map(|n| (t_min..=t_max).map(move |t| (n, t)))
                        .map(|(n, t)| json!({ "n": n, "t": t, "dim": x.homology_dim(r, n, t) }))
                        .collect();
                    let v = Value::Array(recs);
                    Output::new(v.clone(), text_records(&v, &["n", "t", "dim"]))
                }
            }
        }
        Verb::Stats { complex } => {
            let s = match AnyComplex::load(r, complex)? {
                AnyComplex::Free(x) => x.stats(r),
                AnyComplex::Presented(x) => x.stats(r),
            };
            let supph: Vec<i64> = s.supph.iter().copied().collect();
            let v = json!({ "min_c": s.min_c, "max_c": s.max_c, "min": s.min, "supph": supph, "width": s.width });
            let text = format!("min_c = {}\nmax_c = {}\nmin = {}\nsupph = {supph:?}\nwidth = {}\n", opt_i64(s.min_c), opt_i64(s.max_c), opt_i64(s.min), s.width);
            Output::new(v, text)
        }
        Verb::Frobenius { ideal, e_max, witness } => {
            let gens = polys(r, ideal)?;
            let rep = frobenius_pd_invariance(r, &gens, *e_max)?;
            let mut v = json!({ "pds": rep.pds, "invariant": rep.invariant() });
            let mut text: String = rep.pds.iter().enumerate().map(|(e, d)| format!("e={e} pd={}\n", opt_i64(d.map(|d| d as i64)))).collect();
            text.push_str(&format!("invariant: {}\n", rep.invariant()));
            if *witness {
                let steps = efd_witness(r, &gens, *e_max)?;
                v["witness"] = steps.iter().map(|s| json!({ "e": s.e, "q": s.q, "power": s.power, "pd": s.pd, "pd_finite": s.pd_finite })).collect();
                for s in &steps {
                    text.push_str(&format!("I^[{}] ⊆ I^{}\n", s.q, s.power));
                }
            }
            Output::new(v, text)
        }
        Verb::Accept { .. } => unreachable!("handled before the ring is loaded"),
    })
}

fn text_records(v: &Value, keys: &[&str]) -> String {
    v.as_array()
        .into_iter()
        .flatten()
        .map(|rec| {
            let parts: Vec<String> = keys.iter().map(|k| format!("{k}={}", rec[*k])).collect();
            parts.join(" ") + "\n"
        })
        .collect()
}

fn accept(criterion: Option<u32>) -> Result<Output, Failure> {
    let outcomes = match criterion {
        Some(id) if (1..=acceptance::NAMES.len() as u32).contains(&id) => vec![acceptance::run(id)],
        Some(id) => return Err(usage(format!("no criterion {id}; there are {}", acceptance::NAMES.len()))),
        None => acceptance::run_all(),
    };
    let v: Value = outcomes.iter().map(|o| json!({ "id": o.id, "name": o.name, "passed": o.passed, "detail": o.detail })).collect();
    let mut text: String = outcomes.iter().map(|o| o.line() + "\n").collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    text.push_str(&format!("{passed}/{} criteria pass\n", outcomes.len()));
    let mut o = Output::new(v, text);
    if passed < outcomes.len() {
        o.code = 1;
    }
    Ok(o)
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
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                print!("{}", to_canonical(&out.json));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
