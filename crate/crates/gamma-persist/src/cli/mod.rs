//! Command-line adapters over the library.

mod render;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use gamma_persist::barcodes1d::GradedBarcode;
use gamma_persist::cellular1d::{decompose, dualize, from_barcode, gammafy, DualVariant};
use gamma_persist::convolution1d::{convolve, distance_bounds, is_a_isomorphic, AIso, DecideOptions};
use gamma_persist::foundations::{fmt_decimal, parse_rat, ExtRat, FieldId, Rat};
use gamma_persist::gamma_geometry::{gamma_predicates, Cone, HPolyhedron};
use gamma_persist::io::{self, barcode_from_json, barcode_to_json, read_doc, write_doc, DECIMAL_DIGITS};
use gamma_persist::pipeline::{
    distance_function, perturbation_trials, stability_experiment, sublevel_persistence, Mesh, MeshFunction, Metric,
    PointCloud, TrialConfig,
};
use gamma_persist::stratify_nd::{stratify, validate_stratification, Arrangement, Boxing, PLGammaSheafSpec};
use gamma_persist::Error;

#[derive(Parser, Debug)]
#[command(name = "gamma-persist", version, about = "Exact barcodes, convolution distance and gamma-stratifications")]
struct Cli {
    /// Add lossy decimal companions to exact numbers in the output.
    #[arg(long, global = true)]
    decimal: bool,
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Barcode of a zigzag module; with --to-zigzag, the module of a barcode.
    Decompose {
        input: PathBuf,
        #[arg(long)]
        to_zigzag: bool,
    },
    /// Convolution of two barcodes.
    Convolve { f: PathBuf, g: PathBuf },
    /// Bounds on the convolution distance.
    Distance {
        f: PathBuf,
        g: PathBuf,
        #[arg(long, default_value_t = 8)]
        exact_bound: usize,
    },
    /// Decides whether two barcodes are a-isomorphic.
    Interleave {
        f: PathBuf,
        g: PathBuf,
        #[arg(short, long)]
        a: String,
        #[arg(long, default_value_t = 8)]
        exact_bound: usize,
    },
    /// Verdier-type dual of a barcode.
    Dualize {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::D)]
        variant: Variant,
    },
    /// The γ-sheaf associated with a barcode.
    Gammafy { input: PathBuf },
    /// Both descriptions of a cone, optionally its polar and predicates of a polyhedron.
    Cone {
        input: PathBuf,
        #[arg(long)]
        polar: bool,
        #[arg(long)]
        poly: Option<PathBuf>,
    },
    /// PL-γ-stratification of a support.
    Stratify {
        #[arg(long)]
        cone: PathBuf,
        #[arg(long)]
        spec: PathBuf,
    },
    /// Sublevel persistence of a mesh function or of the distance to a point cloud.
    Persist {
        #[arg(long, conflicts_with_all = ["cloud", "mesh"])]
        function: Option<PathBuf>,
        #[arg(long, requires = "mesh")]
        cloud: Option<PathBuf>,
        #[arg(long)]
        mesh: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MetricArg::Linf)]
        metric: MetricArg,
        /// The last CSV column holds the weights.
        #[arg(long)]
        weighted: bool,
    },
    /// Stability check for two functions, or random trials around one.
    Stability {
        f1: PathBuf,
        f2: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value = "1/10")]
        eps: String,
        #[arg(long, default_value_t = 100)]
        denominator: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// SVG of a barcode or of 2-D strata.
    Render { input: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Variant {
    D,
    Dprime,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Linf,
    L1,
    L2sq,
}

/// A failure with its exit status.
enum Failure {
    Domain(Error),
    Malformed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        if e.is_malformed() {
            Failure::Malformed(e.to_string())
        } else {
            Failure::Domain(e)
        }
    }
}

type Out = std::result::Result<String, Failure>;

fn kind(e: &Error) -> &'static str {
    match e {
        Error::FieldMismatch => "field_mismatch",
        Error::Shape(_) => "shape",
        Error::Undefined(_) => "undefined",
        Error::Parse(_) => "parse",
        Error::NonProperConvolution => "non_proper_convolution",
        Error::Invalid(_) => "invalid",
        Error::IncompatibleHyperplane { .. } => "incompatible_hyperplane",
    }
}

fn read(p: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(p).map_err(|e| Failure::Malformed(format!("{}: {e}", p.display())))
}

fn barcode(p: &Path) -> std::result::Result<GradedBarcode, Failure> {
    Ok(barcode_from_json(&read(p)?)?)
}

fn doc<T: serde::de::DeserializeOwned>(p: &Path) -> std::result::Result<T, Failure> {
    Ok(read_doc(&read(p)?)?)
}

fn env_field() -> std::result::Result<FieldId, Failure> {
    match std::env::var("GP_FIELD") {
        Ok(s) => Ok(FieldId::parse(&s)?),
        Err(_) => Ok(FieldId::F2),
    }
}

fn ext(e: &ExtRat, decimal: bool, key: &str, out: &mut serde_json::Map<String, Value>) {
    out.insert(key.into(), json!(e.to_string()));
    if decimal {
        let d = match e {
            ExtRat::Finite(r) => fmt_decimal(r, DECIMAL_DIGITS),
            other => other.to_string(),
        };
        out.insert(format!("{key}_decimal"), json!(d));
    }
}

fn rat_arg(s: &str) -> std::result::Result<Rat, Failure> {
    Ok(parse_rat(s)?)
}

#[derive(Deserialize)]
struct StratifyInput {
    arrangement: Arrangement,
    support: Vec<HPolyhedron>,
    #[serde(default)]
    boxing: Option<Boxing>,
}

fn run(cli: &Cli) -> Out {
    let dec = cli.decimal;
    match &cli.verb {
        Verb::Decompose { input, to_zigzag } => {
            if *to_zigzag {
                let b = barcode(input)?;
                return Ok(io::zigzag_to_json(&from_barcode(env_field()?, &b)?));
            }
            let mods = io::zigzag_from_json(&read(input)?, env_field()?)?;
            let b = GradedBarcode::from_components(mods.iter().map(|(&d, m)| (d, decompose(m))));
            Ok(barcode_to_json(&b, dec))
        }
        Verb::Convolve { f, g } => Ok(barcode_to_json(&convolve(&barcode(f)?, &barcode(g)?)?, dec)),
        Verb::Distance { f, g, exact_bound } => {
            let opts = DecideOptions { exact_bound: *exact_bound, ..Default::default() };
            let d = distance_bounds(&barcode(f)?, &barcode(g)?, &opts)?;
            let mut m = serde_json::Map::new();
            ext(&d.lower, dec, "lower", &mut m);
            ext(&d.upper, dec, "upper", &mut m);
            m.insert("exact".into(), json!(d.exact));
            Ok(write_doc(&Value::Object(m)))
        }
        Verb::Interleave { f, g, a, exact_bound } => {
            let opts = DecideOptions { exact_bound: *exact_bound, ..Default::default() };
            let (a, f, g) = (rat_arg(a)?, barcode(f)?, barcode(g)?);
            let body = match is_a_isomorphic(&f, &g, &a, &opts)? {
                AIso::Yes(w) => json!({"a": a.to_string(), "result": "yes", "witness": w}),
                AIso::No => json!({"a": a.to_string(), "result": "no"}),
                AIso::Indeterminate => json!({"a": a.to_string(), "result": "indeterminate"}),
            };
            Ok(write_doc(&body))
        }
        Verb::Dualize { input, variant } => {
            let v = match variant {
                Variant::D => DualVariant::D,
                Variant::Dprime => DualVariant::DPrime,
            };
            Ok(barcode_to_json(&dualize(&barcode(input)?, v), dec))
        }
        Verb::Gammafy { input } => Ok(barcode_to_json(&gammafy(&barcode(input)?), dec)),
        Verb::Cone { input, polar, poly } => {
            let c: Cone = doc(input)?;
            let c = if *polar { c.polar() } else { c };
            let strs = |vs: &[Vec<Rat>]| -> Vec<Vec<String>> { vs.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect() };
            let mut body = json!({
                "dim": c.dim(),
                "rays": strs(c.rays()),
                "normals": strs(c.normals()),
                "proper": c.is_proper(),
                "solid": c.is_solid(),
            });
            if let Some(p) = poly {
                let p: HPolyhedron = doc(p)?;
                let g = gamma_predicates(&p, &c)?;
                body["predicates"] = json!({
                    "open": g.open, "closed": g.closed, "gamma_open": g.gamma_open, "gamma_closed": g.gamma_closed,
                    "gamma_locally_closed": g.gamma_locally_closed, "gamma_flat": g.gamma_flat, "gamma_proper": g.gamma_proper,
                });
            }
            Ok(write_doc(&body))
        }
        Verb::Stratify { cone, spec } => {
            let cone: Cone = doc(cone)?;
            let s: StratifyInput = doc(spec)?;
            let spec = PLGammaSheafSpec { arrangement: s.arrangement, support: s.support, cone, boxing: s.boxing };
            let st = stratify(&spec)?;
            let rep = validate_stratification(&st, &spec.support, &spec.cone);
            Ok(io::strata_to_json(&st.strata, Some(json!({"validation": rep}))))
        }
        Verb::Persist { function, cloud, mesh, metric, weighted } => {
            let f: MeshFunction = match (function, cloud, mesh) {
                (Some(f), _, _) => doc(f)?,
                (None, Some(c), Some(m)) => {
                    let cloud = PointCloud::from_csv(&read(c)?, *weighted)?;
                    let mesh: Mesh = doc(m)?;
                    let metric = match metric {
                        MetricArg::Linf => Metric::Linf,
                        MetricArg::L1 => Metric::L1,
                        MetricArg::L2sq => Metric::L2sq,
                    };
                    distance_function(&cloud, &mesh, metric)?
                }
                _ => return Err(Failure::Malformed("either --function or --cloud with --mesh is required".into())),
            };
            Ok(barcode_to_json(&sublevel_persistence(&f)?, dec))
        }
        Verb::Stability { f1, f2, trials, eps, denominator, seed } => {
            let a: MeshFunction = doc(f1)?;
            let opts = DecideOptions::default();
            match (f2, trials) {
                (Some(f2), None) => {
                    let b: MeshFunction = doc(f2)?;
                    let r = stability_experiment(&a, &b, &opts)?;
                    let mut m = serde_json::Map::new();
                    ext(&ExtRat::Finite(r.epsilon), dec, "epsilon", &mut m);
                    ext(&r.bounds.upper, dec, "upper", &mut m);
                    m.insert("pass".into(), json!(r.pass));
                    Ok(write_doc(&Value::Object(m)))
                }
                (None, Some(n)) => {
                    let cfg = TrialConfig { trials: *n, eps: rat_arg(eps)?, denominator: *denominator, seed: *seed };
                    let r = perturbation_trials(&a, &cfg, &opts)?;
                    Ok(write_doc(&json!({
                        "epsilon": cfg.eps.to_string(), "trials": r.trials, "passed": r.passed,
                        "failures": r.failures, "pass": r.failures.is_empty(),
                    })))
                }
                _ => Err(Failure::Malformed("give a second function or --trials, not both".into())),
            }
        }
        Verb::Render { input } => {
            let text = read(input)?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Malformed(e.to_string()))?;
            if v.get("strata").is_some() {
                Ok(render::strata_svg(&io::strata_from_json(&text)?)?)
            } else {
                Ok(render::barcode_svg(&barcode_from_json(&text)?))
            }
        }
    }
}

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(p) => std::fs::write(p, out).map_err(|e| e.to_string()),
                None => {
                    print!("{out}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("{}", json!({"error": {"kind": "io", "message": e}}));
                    2
                }
            }
        }
        Err(Failure::Domain(e)) => {
            let mut err = json!({"kind": kind(&e), "message": e.to_string()});
            if let Error::IncompatibleHyperplane { index, .. } = &e {
                err["index"] = json!(index);
            }
            eprintln!("{}", json!({ "error": err }));
            1
        }
        Err(Failure::Malformed(m)) => {
            eprintln!("{}", json!({"error": {"kind": "malformed", "message": m}}));
            2
        }
    }
}
