//! The `witch` command line. JSON goes to stdout, summaries (with `-v`) and errors to stderr.
//! Exit codes: 0 success, 1 domain error, 2 usage error.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use witch_core::limits::{check_gromov_convergence, classify_new_point, gromov_limit};
use witch_core::metric::{mu_eps, mu_eps_with_data, MuOptions};
use witch_core::moduli::WitchCurve;
use witch_core::number::to_f64;
use witch_core::strata::{enumerate_k, forgetful, k_dimension, StratumPoset};
use witch_core::treepair::TreePair;

use crate::dot;
use crate::error::{bad, Result, WitchError};
use crate::format::{
    rational, read_rational, to_json, ClassificationDoc, CurveDoc, FamilyDoc, LimitDoc, Map1Doc, Map2Doc, PointSpec,
    ReportDoc, TreePairDoc, WitnessDoc,
};
use crate::parallel::{enumerate_w, with_pool};

#[derive(Debug, Parser)]
#[command(name = "witch", version, about = "Strata, Gromov limits and distances for witch curves")]
pub struct Cli {
    /// Print a human-readable summary on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stable rooted ribbon trees with R leaves, i.e. the faces of K_R.
    EnumerateK { r: usize },
    /// All tree-pairs of type N (comma-separated, e.g. 1,0,2).
    EnumerateW { n: String },
    /// Hasse diagram of W_N, or of K_R with --k.
    Hasse(HasseArgs),
    /// Number of strata in each dimension of W_N.
    Fvector { n: String },
    /// Check a tree-pair, curve or limit file.
    Validate {
        file: String,
    },
    /// Canonical form of a tree-pair, curve or limit file.
    Canon {
        file: String,
        /// Also write the bubble tree as DOT to this path (`-` for stdout).
        #[arg(long)]
        dot: Option<String>,
    },
    /// Whether two curves (or tree-pairs) are isomorphic, with the maps when they are.
    Iso { a: String, b: String },
    /// Gromov limit of a Laurent family.
    Limit {
        family: String,
        /// Also run the convergence checker; exits with 1 unless every axiom holds.
        #[arg(long)]
        check: bool,
    },
    /// Where a new point goes relative to the limit of a family.
    Classify {
        family: String,
        /// JSON `{"seam": i, "y": laurent}` or `{"x": laurent, "y": laurent}`.
        #[arg(long)]
        point: String,
    },
    /// Approximate distance μ_ε from curve A to curve B.
    Mu(MuArgs),
    /// The seam tree (and abscissas, for a curve) under a tree-pair, curve or limit.
    Forget { file: String },
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("poset").required(true).args(["n", "k"])))]
pub struct HasseArgs {
    pub n: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Write DOT to this path (`-` for stdout) instead of JSON.
    #[arg(long)]
    pub dot: Option<String>,
}

#[derive(Debug, Args)]
pub struct MuArgs {
    pub a: String,
    pub b: String,
    /// Ball radius as a rational, e.g. 1/4.
    #[arg(long)]
    pub eps: String,
    /// Starting witness; its value is reported as well.
    #[arg(long)]
    pub witness: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 6)]
    pub restarts: usize,
}

/// Standard streams, replaceable in tests.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Runs one invocation and returns the exit code.
pub fn run(args: impl IntoIterator<Item = OsString>, io: &mut Io) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { io.stderr } else { io.stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli, io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            if let WitchError::Usage(_) = e {
                let _ = writeln!(io.stderr, "{}", Cli::command().render_usage());
            }
            e.exit_code()
        }
    }
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String> {
    let mut text = String::new();
    if path == "-" {
        stdin.read_to_string(&mut text).map_err(|source| WitchError::Io { path: "<stdin>".into(), source })?;
    } else {
        text = std::fs::read_to_string(path).map_err(|source| WitchError::Io { path: path.into(), source })?;
    }
    Ok(text)
}

fn parse<T: for<'de> Deserialize<'de>>(path: &str, stdin: &mut dyn Read) -> Result<T> {
    Ok(serde_json::from_str(&read_input(path, stdin)?)?)
}

fn write_to(path: &str, text: &str, stdout: &mut dyn Write) -> Result<()> {
    let io_err = |source| WitchError::Io { path: path.into(), source };
    if path == "-" {
        stdout.write_all(text.as_bytes()).map_err(io_err)
    } else {
        std::fs::write(path, text).map_err(io_err)
    }
}

fn emit<T: Serialize>(value: &T, stdout: &mut dyn Write) -> Result<()> {
    write_to("-", &to_json(value)?, stdout)
}

pub fn parse_type_vector(s: &str) -> Result<Vec<usize>> {
    let inner = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    inner
        .split(',')
        .map(|k| k.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| WitchError::Usage(format!("type vector must be comma-separated counts, got {s:?}")))
}

enum Input {
    Limit(Box<witch_core::limits::GromovLimit>),
    Curve(Box<WitchCurve>),
    Pair(TreePair),
}

impl Input {
    fn read(path: &str, stdin: &mut dyn Read) -> Result<Input> {
        // Told apart by a key only that kind of file has.
        let text = read_input(path, stdin)?;
        let value: Value = serde_json::from_str(&text)?;
        let has = |key: &str| value.get(key).is_some();
        Ok(if has("curve") {
            Input::Limit(Box::new(serde_json::from_str::<LimitDoc>(&text)?.to_limit()?))
        } else if has("tree_pair") {
            Input::Curve(Box::new(serde_json::from_str::<CurveDoc>(&text)?.to_curve()?))
        } else if has("seam_tree") {
            Input::Pair(serde_json::from_str::<TreePairDoc>(&text)?.to_pair()?.0)
        } else {
            return Err(bad(format!("{path} is not a tree-pair, curve or limit file")));
        })
    }

    fn pair(&self) -> &TreePair {
        match self {
            Input::Limit(l) => l.pair(),
            Input::Curve(c) => c.pair(),
            Input::Pair(p) => p,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Input::Limit(_) => "limit",
            Input::Curve(_) => "curve",
            Input::Pair(_) => "tree_pair",
        }
    }

    fn curve(self, path: &str) -> Result<WitchCurve> {
        match self {
            Input::Limit(l) => Ok(l.curve),
            Input::Curve(c) => Ok(*c),
            Input::Pair(_) => Err(bad(format!("{path} holds a tree-pair, not a curve"))),
        }
    }
}

fn hasse_json<T>(poset: &StratumPoset<T>, label: impl Fn(&T) -> String) -> Value {
    let covers: Vec<[usize; 2]> =
        poset.covers.iter().enumerate().flat_map(|(b, below)| below.iter().map(move |a| [*a, b])).collect();
    json!({
        "elements": poset.elements.iter().map(label).collect::<Vec<_>>(),
        "dimension": poset.dimension,
        "covers": covers,
    })
}

fn execute(cli: &Cli, io: &mut Io) -> Result<i32> {
    let verbose = cli.verbose;
    let note = |io: &mut Io, text: String| {
        if verbose {
            let _ = writeln!(io.stderr, "{text}");
        }
    };
    match &cli.command {
        Command::EnumerateK { r } => {
            let k = enumerate_k(*r)?;
            let list: Vec<Value> =
                k.elements.iter().map(|t| json!({ "tree": t.encoding(), "dimension": k_dimension(t) })).collect();
            note(io, format!("K_{r}: {} faces", list.len()));
            emit(&list, io.stdout)?;
        }
        Command::EnumerateW { n } => {
            let n = parse_type_vector(n)?;
            let w = with_pool(|| enumerate_w(&n))??;
            let list: Vec<Value> = w
                .elements
                .iter()
                .zip(&w.dimension)
                .map(|(p, d)| json!({ "encoding": p.encoding(), "dimension": d, "tree_pair": TreePairDoc::from_pair(p) }))
                .collect();
            note(io, format!("W_{n:?}: {} strata", list.len()));
            emit(&list, io.stdout)?;
        }
        Command::Hasse(args) => {
            let (value, text) = match (&args.n, args.k) {
                (Some(n), None) => {
                    let n = parse_type_vector(n)?;
                    let w = with_pool(|| enumerate_w(&n))??;
                    (hasse_json(&w, TreePair::encoding), dot::hasse(&w, TreePair::encoding))
                }
                (None, Some(r)) => {
                    let k = enumerate_k(r)?;
                    (hasse_json(&k, |t| t.encoding()), dot::hasse(&k, |t| t.encoding()))
                }
                _ => return Err(WitchError::Usage("give exactly one of N and --k R".into())),
            };
            match &args.dot {
                Some(path) => write_to(path, &text, io.stdout)?,
                None => emit(&value, io.stdout)?,
            }
        }
        Command::Fvector { n } => {
            let n = parse_type_vector(n)?;
            let w = with_pool(|| enumerate_w(&n))??;
            emit(&w.f_vector(), io.stdout)?;
        }
        Command::Validate { file } => {
            let input = Input::read(file, io.stdin)?;
            let pair = input.pair();
            note(io, format!("valid {}: {}", input.kind(), pair.encoding()));
            emit(
                &json!({ "valid": true, "kind": input.kind(), "encoding": pair.encoding(), "dimension": pair.dimension() }),
                io.stdout,
            )?;
        }
        Command::Canon { file, dot: dot_path } => {
            let input = Input::read(file, io.stdin)?;
            if let Some(path) = dot_path {
                write_to(path, &dot::bubble_tree(input.pair()), io.stdout)?;
                if path == "-" {
                    return Ok(0);
                }
            }
            match input {
                Input::Limit(l) => emit(&LimitDoc::from_limit(&l.canonicalized()), io.stdout)?,
                Input::Curve(c) => emit(&CurveDoc::from_curve(&c.canonical_form().0), io.stdout)?,
                Input::Pair(p) => emit(&TreePairDoc::from_pair(&p), io.stdout)?,
            }
        }
        Command::Iso { a, b } => {
            let (first, second) = (Input::read(a, io.stdin)?, Input::read(b, io.stdin)?);
            let value = match (first, second) {
                (Input::Pair(p), Input::Pair(q)) => json!({ "isomorphic": p == q }),
                (first, second) => {
                    let (w, v) = (first.curve(a)?, second.curve(b)?);
                    match w.is_isomorphic(&v) {
                        None => json!({ "isomorphic": false }),
                        Some(iso) => {
                            let phi: std::collections::BTreeMap<_, _> = iso
                                .phi
                                .iter()
                                .map(|(k, f)| (*k, Map1Doc { a: rational(&f.a), b: rational(&f.b) }))
                                .collect();
                            let psi: std::collections::BTreeMap<_, _> = iso
                                .psi
                                .iter()
                                .map(|(k, f)| (*k, Map2Doc { a: rational(&f.a), bx: rational(&f.b.x), by: rational(&f.b.y) }))
                                .collect();
                            json!({ "isomorphic": true, "phi": phi, "psi": psi })
                        }
                    }
                }
            };
            note(io, format!("isomorphic: {}", value["isomorphic"]));
            emit(&value, io.stdout)?;
        }
        Command::Limit { family, check } => {
            let fam = parse::<FamilyDoc>(family, io.stdin)?.to_family()?;
            let lim = gromov_limit(&fam)?;
            note(io, format!("limit stratum {}", lim.pair().encoding()));
            if *check {
                let report = check_gromov_convergence(&lim, &fam)?;
                for (name, r) in report.axioms() {
                    note(io, format!("{name}: {}/{} passed", r.checked - r.failures.len(), r.checked));
                }
                let doc = ReportDoc::from_report(&report);
                emit(&json!({ "limit": LimitDoc::from_limit(&lim), "check": doc }), io.stdout)?;
                return Ok(if report.all_passed() { 0 } else { 1 });
            }
            emit(&LimitDoc::from_limit(&lim), io.stdout)?;
        }
        Command::Classify { family, point } => {
            let fam = parse::<FamilyDoc>(family, io.stdin)?.to_family()?;
            let spec: PointSpec = serde_json::from_str(point)
                .map_err(|e| WitchError::Usage(format!("--point must be a JSON point spec ({e})")))?;
            let (zx, zy) = spec.resolve(&fam)?;
            let lim = gromov_limit(&fam)?;
            let cls = classify_new_point(&lim, &fam, &zx, &zy)?;
            note(io, format!("case {}", cls.case.tag()));
            emit(&json!({ "classification": ClassificationDoc::from_classification(&cls), "limit": LimitDoc::from_limit(&lim) }), io.stdout)?;
        }
        Command::Mu(args) => {
            let eps = read_rational(&args.eps).map_err(|e| WitchError::Usage(format!("--eps: {e}")))?;
            let eps = to_f64(&eps);
            let w = Input::read(&args.a, io.stdin)?.curve(&args.a)?;
            let v = Input::read(&args.b, io.stdin)?.curve(&args.b)?;
            let mut options = MuOptions { restarts: args.restarts, seed: args.seed, ..Default::default() };
            let mut given = None;
            if let Some(path) = &args.witness {
                let witness = parse::<WitnessDoc>(path, io.stdin)?.to_witness(w.pair(), v.pair())?;
                given = Some(mu_eps_with_data(&w, &v, &witness, eps)?);
                options.start = Some(witness);
            }
            let est = mu_eps(&w, &v, eps, &options)?;
            let value = if est.value.is_finite() { json!(est.value) } else { json!("inf") };
            note(io, format!("mu_eps = {}", value));
            let mut out = json!({ "eps": eps, "value": value, "witness": est.witness.as_ref().map(WitnessDoc::from_witness) });
            if let Some(g) = given {
                out["given_witness_value"] = json!(g);
            }
            emit(&out, io.stdout)?;
        }
        Command::Forget { file } => {
            let input = Input::read(file, io.stdin)?;
            let tree = forgetful(input.pair());
            let mut out = json!({ "seam_tree": tree.encoding() });
            if let Input::Curve(_) | Input::Limit(_) = input {
                let disk = input.curve(file)?.disk_tree();
                let x: std::collections::BTreeMap<_, Vec<String>> =
                    disk.x().iter().map(|(v, xs)| (*v, xs.iter().map(rational).collect())).collect();
                out["x"] = json!(x);
            }
            emit(&out, io.stdout)?;
        }
    }
    Ok(0)
}
