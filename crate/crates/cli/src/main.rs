//! `predual`: every library operation behind a JSON-in, JSON-out command.
//!
//! Exit codes: 0 on success, 2 when the library rejects the input (the error
//! object carries a code and, where there is one, a witness), 1 for usage,
//! I/O and parse failures.

mod suite;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use predual::duality::{self, RawL1Vec};
use predual::funcspace::{self, RawCFunc};
use predual::scalar::{parse_rational, rational_to_string, RawScalar};
use predual::sequences::{self, RawUaSeq};
use predual::topology::{self, finite_subcover};
use predual::{CFunc, CoverSpec, L1Vec, Mode, RawRtSet, Real, RtSet, Scalar, TopologyId, UaSeq};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "predual",
    version,
    about = "Finitary topologies on ℕ, their function spaces and l1 duality"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// JSON object supplying any argument by name (inline flags win).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Scalar mode for inputs that do not state one.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SetOp {
    Intersect,
    Union,
    Difference,
    Complement,
    Subset,
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyArg {
    Tn,
    Appert,
}

#[derive(Subcommand)]
enum Cmd {
    /// The basic open set A_{k,l} = {k} ∪ {mn+k : m ≥ l}.
    Basis {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        l: Option<u64>,
    },
    /// Whether j belongs to a set.
    Member {
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        j: Option<u64>,
    },
    /// Boolean operations on sets.
    Setop {
        #[arg(long, value_enum)]
        op: SetOp,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
    },
    /// Openness in 𝒯ₙ (n taken from the set) or in Appert's topology.
    IsOpen {
        #[arg(long)]
        set: Option<String>,
        #[arg(long, value_enum, default_value = "tn")]
        topology: TopologyArg,
    },
    /// Closure (or interior) in 𝒯ₙ.
    Closure {
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        interior: bool,
    },
    /// Disjoint open neighbourhoods of two distinct points.
    Separate {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        x: Option<u64>,
        #[arg(long)]
        y: Option<u64>,
    },
    /// A finite subcover of an open cover of ℕ.
    Subcover {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        cover: Option<String>,
    },
    /// Compares accumulation-point counts of 𝒯ₙ and 𝒯ₘ.
    Distinguish {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
    },
    /// The metric inducing 𝒯ₙ.
    Metric {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        x: Option<u64>,
        #[arg(long)]
        y: Option<u64>,
    },
    /// Appert openness, density and counting function.
    Appert {
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        window: Option<u64>,
    },
    /// Limit of an ultimately affine sequence in 𝒯ₙ.
    SeqLimit {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        seq: Option<String>,
        /// Decide through metric distances instead of residues.
        #[arg(long)]
        metric: bool,
    },
    /// A convergent subsequence and its limit.
    Subseq {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        seq: Option<String>,
    },
    /// Value of a continuous function at j, or its table on 1..=window.
    FuncEval {
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        j: Option<u64>,
        #[arg(long)]
        window: Option<u64>,
    },
    /// Sup norm and a point attaining it.
    Norm {
        #[arg(long)]
        f: Option<String>,
    },
    /// Continuous extension of values prescribed on a finite set.
    Tietze {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        values: Option<String>,
        #[arg(long)]
        fill: Option<String>,
    },
    /// Square root of a positive function.
    Sqrt {
        #[arg(long)]
        f: Option<String>,
    },
    /// The pairing ⟨g, y⟩ = Σ y_i g(i).
    Pair {
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        y: Option<String>,
    },
    /// A norm-one function whose pairing with y (nearly) attains ‖y‖₁.
    NormingCert {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Samples the unit ball to check the certificate is optimal.
    VerifyNorming {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Whether a normalized y defines a character (an evaluation map).
    Character {
        #[arg(long)]
        y: Option<String>,
    },
    /// Runs the randomized property bundles and reports pass/fail counts.
    Suite {
        #[arg(long)]
        seed: Option<u64>,
        /// Random instances per property.
        #[arg(long)]
        trials: Option<u64>,
    },
}

enum Failure {
    Library(predual::Error),
    Usage(String),
    Parse(String),
    Io(String),
}

impl From<predual::Error> for Failure {
    fn from(e: predual::Error) -> Self {
        Failure::Library(e)
    }
}

impl Failure {
    fn report(&self) -> (Value, u8) {
        match self {
            Failure::Library(e) => (
                json!({"error": e.code(), "witness": e.witness(), "message": e.to_string()}),
                2,
            ),
            Failure::Usage(m) => (json!({"error": "usage", "message": m}), 1),
            Failure::Parse(m) => (json!({"error": "parse", "message": m}), 1),
            Failure::Io(m) => (json!({"error": "io", "message": m}), 1),
        }
    }
}

type Out = Result<String, Failure>;

/// Argument lookup: an inline flag, else the field of the `--input` object.
struct Args {
    input: Option<Value>,
    mode: Option<Mode>,
}

impl Args {
    fn num(&self, name: &str, flag: Option<u64>) -> Result<u64, Failure> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.input.as_ref().and_then(|i| i.get(name)) {
            Some(v) => v.as_u64().ok_or_else(|| {
                Failure::Parse(format!("--{name}: expected a non-negative integer"))
            }),
            None => Err(Failure::Usage(format!("missing --{name}"))),
        }
    }

    fn opt_num(&self, name: &str, flag: Option<u64>) -> Result<Option<u64>, Failure> {
        match self.num(name, flag) {
            Err(Failure::Usage(_)) => Ok(None),
            r => r.map(Some),
        }
    }

    fn opt_json<T: DeserializeOwned>(
        &self,
        name: &str,
        flag: &Option<String>,
    ) -> Result<Option<T>, Failure> {
        let value = match flag {
            Some(text) => {
                serde_json::from_str(text).map_err(|e| Failure::Parse(format!("--{name}: {e}")))?
            }
            None => match self.input.as_ref().and_then(|i| i.get(name)) {
                Some(v) => v.clone(),
                None => return Ok(None),
            },
        };
        serde_json::from_value(value)
            .map(Some)
            .map_err(|e| Failure::Parse(format!("--{name}: {e}")))
    }

    fn json<T: DeserializeOwned>(&self, name: &str, flag: &Option<String>) -> Result<T, Failure> {
        self.opt_json(name, flag)?
            .ok_or_else(|| Failure::Usage(format!("missing --{name}")))
    }

    fn set(&self, name: &str, flag: &Option<String>) -> Result<RtSet, Failure> {
        Ok(RtSet::canonicalize(self.json::<RawRtSet>(name, flag)?)?)
    }

    fn seq(&self, flag: &Option<String>) -> Result<UaSeq, Failure> {
        Ok(UaSeq::try_from(self.json::<RawUaSeq>("seq", flag)?)?)
    }

    fn func(&self, name: &str, flag: &Option<String>) -> Result<CFunc, Failure> {
        let raw: RawCFunc = self.json(name, flag)?;
        Ok(match self.mode {
            Some(m) => raw.into_cfunc(m)?,
            None => CFunc::try_from(raw)?,
        })
    }

    fn l1(&self, flag: &Option<String>) -> Result<L1Vec, Failure> {
        let raw: RawL1Vec = self.json("y", flag)?;
        Ok(match self.mode {
            Some(m) => raw.into_l1(m)?,
            None => L1Vec::try_from(raw)?,
        })
    }

    fn scalar(&self, raw: RawScalar) -> Result<Scalar, Failure> {
        let mode = self.mode.unwrap_or_else(|| raw.implied_mode());
        Ok(raw.into_scalar(mode)?)
    }
}

/// Serializes in declaration order; maps inside are already sorted.
fn to_json<T: serde::Serialize>(v: &T) -> Out {
    serde_json::to_string(v).map_err(|e| Failure::Parse(e.to_string()))
}

#[derive(Deserialize)]
struct RawCover {
    opens: Vec<RawRtSet>,
    #[serde(default)]
    with_isolated_singletons: bool,
}

fn run(cmd: Cmd, a: &Args) -> Out {
    match cmd {
        Cmd::Basis { n, k, l } => to_json(&RtSet::basic_open(
            a.num("n", n)?,
            a.num("k", k)?,
            a.num("l", l)?,
        )?),
        Cmd::Member { set, j } => {
            let s = a.set("set", &set)?;
            to_json(&json!({"member": s.member(a.num("j", j)?)?}))
        }
        Cmd::Setop {
            op,
            a: left,
            b: right,
        } => {
            let s = a.set("a", &left)?;
            if let SetOp::Complement = op {
                return to_json(&s.complement());
            }
            let t = a.set("b", &right)?;
            match op {
                SetOp::Intersect => to_json(&s.intersect(&t)?),
                SetOp::Union => to_json(&s.union(&t)?),
                SetOp::Difference => to_json(&s.difference(&t)?),
                SetOp::Subset => to_json(&json!({"subset": s.is_subset(&t)?})),
                SetOp::Complement => unreachable!(),
            }
        }
        Cmd::IsOpen { set, topology } => {
            let s = a.set("set", &set)?;
            let top = match topology {
                TopologyArg::Tn => TopologyId::tn(s.modulus())?,
                TopologyArg::Appert => TopologyId::Appert,
            };
            to_json(&json!({"open": topology::is_open(top, &s)?}))
        }
        Cmd::Closure { set, interior } => {
            let s = a.set("set", &set)?;
            let n = s.modulus();
            to_json(&if interior {
                topology::interior(n, &s)?
            } else {
                topology::closure(n, &s)?
            })
        }
        Cmd::Separate { n, x, y } => to_json(&topology::separate(
            a.num("n", n)?,
            a.num("x", x)?,
            a.num("y", y)?,
        )?),
        Cmd::Subcover { n, cover } => {
            let n = a.num("n", n)?;
            let raw: RawCover = a.json("cover", &cover)?;
            let spec = CoverSpec {
                opens: raw
                    .opens
                    .into_iter()
                    .map(RtSet::canonicalize)
                    .collect::<predual::Result<_>>()?,
                with_isolated_singletons: raw.with_isolated_singletons,
            };
            to_json(&finite_subcover(n, &spec)?)
        }
        Cmd::Distinguish { n, m } => {
            to_json(&topology::distinguish(a.num("n", n)?, a.num("m", m)?)?)
        }
        Cmd::Metric { n, x, y } => {
            let d = topology::metric_d(a.num("n", n)?, a.num("x", x)?, a.num("y", y)?)?;
            to_json(&json!({"d": rational_to_string(&d)}))
        }
        Cmd::Appert { set, window } => {
            let s = a.set("set", &set)?;
            let mut out = json!({
                "open": topology::is_open(TopologyId::Appert, &s)?,
                "density": rational_to_string(&topology::appert_density(&s)),
            });
            if let Some(w) = a.opt_num("window", window)? {
                out["count"] = json!(topology::appert_count(&s, w));
            }
            to_json(&out)
        }
        Cmd::SeqLimit { n, seq, metric } => {
            let (n, s) = (a.num("n", n)?, a.seq(&seq)?);
            to_json(&if metric {
                sequences::limit_in_metric(&s, n)?
            } else {
                sequences::limit_in_topology(&s, n)?
            })
        }
        Cmd::Subseq { n, seq } => to_json(&sequences::convergent_subsequence(
            &a.seq(&seq)?,
            a.num("n", n)?,
        )?),
        Cmd::FuncEval { f, j, window } => {
            let f = a.func("f", &f)?;
            match a.opt_num("window", window)? {
                Some(w) => to_json(&f.tabulate(w)),
                None => to_json(&f.eval(a.num("j", j)?)?),
            }
        }
        Cmd::Norm { f } => to_json(&a.func("f", &f)?.sup_norm()),
        Cmd::Tietze { n, values, fill } => {
            let n = a.num("n", n)?;
            let raw: BTreeMap<u64, RawScalar> = a.json("values", &values)?;
            let values = raw
                .into_iter()
                .map(|(j, v)| Ok((j, a.scalar(v)?)))
                .collect::<Result<BTreeMap<_, _>, Failure>>()?;
            let fill = match a.opt_json::<RawScalar>("fill", &fill)? {
                Some(raw) => Some(a.scalar(raw)?),
                None => None,
            };
            to_json(&funcspace::tietze_extend(n, &values, fill.as_ref())?)
        }
        Cmd::Sqrt { f } => to_json(&a.func("f", &f)?.sqrt_positive()?),
        Cmd::Pair { g, y } => {
            let (g, y) = (a.func("g", &g)?, a.l1(&y)?);
            to_json(&duality::pair(&g, &y)?)
        }
        Cmd::NormingCert { n, y, epsilon } => {
            let eps = match epsilon.or_else(|| {
                a.input
                    .as_ref()
                    .and_then(|i| i.get("epsilon"))
                    .map(|v| v.as_str().map_or_else(|| v.to_string(), str::to_owned))
            }) {
                Some(text) => Real::Exact(parse_rational(&text)?),
                None => Real::zero(Mode::Exact),
            };
            to_json(&duality::norming_certificate(
                a.num("n", n)?,
                &a.l1(&y)?,
                &eps,
            )?)
        }
        Cmd::VerifyNorming { n, y, trials, seed } => {
            let trials = a.opt_num("trials", trials)?.unwrap_or(64);
            let seed = a.opt_num("seed", seed)?.unwrap_or(0);
            to_json(&duality::verify_one_norming(
                a.num("n", n)?,
                &a.l1(&y)?,
                trials,
                seed,
            )?)
        }
        Cmd::Character { y } => to_json(&duality::detect_character(&a.l1(&y)?)?),
        Cmd::Suite { seed, trials } => {
            let seed = a.opt_num("seed", seed)?.unwrap_or(0);
            let trials = a.opt_num("trials", trials)?.unwrap_or(200);
            to_json(&suite::run(seed, trials))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return emit(Err(Failure::Usage(first_line(&e.to_string()).to_owned()))),
    };
    let input = match &cli.input {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match serde_json::from_str::<Value>(&text) {
                Ok(v) => Some(v),
                Err(e) => return emit(Err(Failure::Parse(format!("{}: {e}", path.display())))),
            },
            Err(e) => return emit(Err(Failure::Io(format!("{}: {e}", path.display())))),
        },
        None => None,
    };
    let args = Args {
        input,
        mode: cli.mode.map(Mode::from),
    };
    emit(run(cli.cmd, &args))
}

fn first_line(s: &str) -> &str {
    s.lines()
        .next()
        .unwrap_or_default()
        .trim_start_matches("error: ")
}

fn emit(out: Out) -> ExitCode {
    let (value, code) = match out {
        Ok(v) => (v, 0),
        Err(f) => {
            let (v, code) = f.report();
            (v.to_string(), code)
        }
    };
    println!("{value}");
    ExitCode::from(code)
}
