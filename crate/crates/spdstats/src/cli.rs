//! Subcommand surface over the library: distances, means, interpolation,
//! PCA, anisotropy maps, the simulation study and synthetic fields.
//!
//! Exit codes: 0 success, 1 domain error (library failure), 2 usage error.
//! All output is deterministic for fixed flags and seed.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Read, Write};

use crate::anisotropy::{anisotropy_map, AnisotropyKind};
use crate::error::Result;
use crate::field::TensorField;
use crate::geodesic::{field_interpolate, geodesic_point, Weighting};
use crate::linalg::SpdMat;
use crate::mean::{mean, MeanConfig};
use crate::metric::{dist, MetricKind};
use crate::sim::{
    run_study, write_study_csv, ErrorModel, ErrorModelKind, Estimator, LogNoiseVariant, StudyConfig,
};
use crate::synth;
use crate::tangent::{fit_pca, pc_path};

const USAGE: &str = "usage: spdstats <command> [options]

commands:
  dist        --metric KIND [--alpha A] fileA fileB
  mean        --metric KIND [--alpha A] [--weights FILE] file...
  interp      --metric KIND [--alpha A] (--w W fileA fileB |
              --factor F [--weighting bilinear|inverse] field)
  pca         [--scores | --path J [--steps N] [--range C]] file...
  anisotropy  --kind fa|pa|ga|faalpha [--alpha A] [--format csv|pgm]
              [--ga-max X] field
  simulate    (--table 2|3 | --model I..IV --n N --lambda l1,l2,l3)
              [--sigma S] [--reps R] [--seed SEED] [--estimators ECSHLRF]
              [--model3 sym|factor|literal] [--threads T]
  synth       --pattern geodesic|two-region|crossing [--out FILE]
              [--steps N] [--dims NX,NY] [--metric KIND] [--sigma S]
              [--seed SEED] [--from file --to file]

metrics: euclidean, logeuclidean, riemannian, cholesky, rooteuclidean,
         procrustes, fullprocrustes, power (power needs --alpha)";

struct Parsed {
    positional: Vec<String>,
    flags: BTreeMap<String, String>,
}

/// Flags that take no value.
const BOOLEAN_FLAGS: &[&str] = &["scores"];

fn parse_flags(args: &[String], allowed: &[&str]) -> std::result::Result<Parsed, String> {
    let mut positional = Vec::new();
    let mut flags = BTreeMap::new();
    let mut i = 0;
    while i < args.len() {
        let a = &args[i];
        if let Some(name) = a.strip_prefix("--") {
            if !allowed.contains(&name) {
                return Err(format!("unknown flag --{name}"));
            }
            if BOOLEAN_FLAGS.contains(&name) {
                flags.insert(name.to_string(), "true".to_string());
            } else {
                i += 1;
                let value = args
                    .get(i)
                    .ok_or_else(|| format!("flag --{name} needs a value"))?;
                flags.insert(name.to_string(), value.clone());
            }
        } else {
            positional.push(a.clone());
        }
        i += 1;
    }
    Ok(Parsed { positional, flags })
}

fn parse_metric(flags: &BTreeMap<String, String>) -> std::result::Result<MetricKind, String> {
    let name = flags
        .get("metric")
        .ok_or_else(|| "--metric is required".to_string())?;
    let alpha = flags
        .get("alpha")
        .map(|a| a.parse::<f64>().map_err(|_| format!("bad --alpha '{a}'")))
        .transpose()?;
    metric_by_name(name, alpha)
}

fn metric_by_name(name: &str, alpha: Option<f64>) -> std::result::Result<MetricKind, String> {
    let kind = match name.to_ascii_lowercase().as_str() {
        "euclidean" => MetricKind::Euclidean,
        "logeuclidean" => MetricKind::LogEuclidean,
        "riemannian" => MetricKind::Riemannian,
        "cholesky" => MetricKind::Cholesky,
        "rooteuclidean" => MetricKind::RootEuclidean,
        "procrustes" => MetricKind::ProcrustesSS,
        "fullprocrustes" => MetricKind::FullProcrustes,
        "power" => {
            let a = alpha.ok_or_else(|| "--metric power needs --alpha".to_string())?;
            MetricKind::PowerEuclidean(a)
        }
        other => return Err(format!("unknown metric '{other}'")),
    };
    Ok(kind)
}

fn load_field(path: &str) -> Result<TensorField> {
    let file = File::open(path).map_err(|e| crate::error::Error::Parse {
        line: 0,
        msg: format!("{path}: {e}"),
    })?;
    let reader = BufReader::new(file);
    if path.ends_with(".json") {
        TensorField::read_json(reader)
    } else {
        TensorField::read_csv(reader)
    }
}

fn single_tensor(field: &TensorField, path: &str) -> Result<SpdMat> {
    let tensors = field.tensors();
    if tensors.len() != 1 {
        return Err(crate::error::Error::InvalidInput(format!(
            "{path}: expected a single-tensor file, found {} voxels",
            tensors.len()
        )));
    }
    Ok(tensors[0].clone())
}

/// Samples from the inputs: one multi-voxel field, or several
/// single-tensor files.
fn load_samples(paths: &[String]) -> Result<Vec<SpdMat>> {
    if paths.is_empty() {
        return Err(crate::error::Error::InvalidInput("no input files".into()));
    }
    if paths.len() == 1 {
        let field = load_field(&paths[0])?;
        let tensors: Vec<SpdMat> = field.tensors().into_iter().cloned().collect();
        if tensors.is_empty() {
            return Err(crate::error::Error::InvalidInput(format!(
                "{}: field has no unmasked voxels",
                paths[0]
            )));
        }
        return Ok(tensors);
    }
    paths
        .iter()
        .map(|p| single_tensor(&load_field(p)?, p))
        .collect()
}

fn tensor_to_field(t: &SpdMat) -> TensorField {
    let mut field = TensorField::new([1, 1, 1], [1.0; 3]);
    field.set(0, 0, 0, t.clone()).expect("fresh field accepts");
    field
}

/// 12 significant digits.
fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

fn usage_error(stderr: &mut dyn Write, msg: &str) -> i32 {
    let _ = writeln!(stderr, "error: {msg}");
    let _ = writeln!(stderr, "{USAGE}");
    2
}

fn domain_error(stderr: &mut dyn Write, err: &crate::error::Error) -> i32 {
    let _ = writeln!(stderr, "error: {err}");
    1
}

/// Run the CLI on pre-split arguments, writing to the given sinks.
pub fn run(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let Some(verb) = args.first() else {
        return usage_error(stderr, "missing command");
    };
    let rest = &args[1..];
    let outcome = match verb.as_str() {
        "dist" => cmd_dist(rest, stdout, stderr),
        "mean" => cmd_mean(rest, stdout, stderr),
        "interp" => cmd_interp(rest, stdout, stderr),
        "pca" => cmd_pca(rest, stdout, stderr),
        "anisotropy" => cmd_anisotropy(rest, stdout, stderr),
        "simulate" => cmd_simulate(rest, stdout, stderr),
        "synth" => cmd_synth(rest, stdout, stderr),
        "help" | "--help" | "-h" => {
            let _ = writeln!(stdout, "{USAGE}");
            return 0;
        }
        other => return usage_error(stderr, &format!("unknown command '{other}'")),
    };
    match outcome {
        Flow::Done => 0,
        Flow::Usage(msg) => usage_error(stderr, &msg),
        Flow::Domain(err) => domain_error(stderr, &err),
    }
}

enum Flow {
    Done,
    Usage(String),
    Domain(crate::error::Error),
}

impl From<crate::error::Error> for Flow {
    fn from(e: crate::error::Error) -> Flow {
        Flow::Domain(e)
    }
}

macro_rules! try_domain {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return Flow::Domain(err),
        }
    };
}

macro_rules! try_usage {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(msg) => return Flow::Usage(msg),
        }
    };
}

fn cmd_dist(args: &[String], stdout: &mut dyn Write, _stderr: &mut dyn Write) -> Flow {
    let parsed = try_usage!(parse_flags(args, &["metric", "alpha"]));
    let kind = try_usage!(parse_metric(&parsed.flags));
    if parsed.positional.len() != 2 {
        return Flow::Usage("dist needs exactly two input files".into());
    }
    let a = try_domain!(load_field(&parsed.positional[0]));
    let b = try_domain!(load_field(&parsed.positional[1]));
    if a.unmasked_count() == 1 && b.unmasked_count() == 1 {
        let ta = try_domain!(single_tensor(&a, &parsed.positional[0]));
        let tb = try_domain!(single_tensor(&b, &parsed.positional[1]));
        let d = try_domain!(dist(kind, &ta, &tb));
        let _ = writeln!(stdout, "{}", sig12(d));
        return Flow::Done;
    }
    if a.dims() != b.dims() {
        return Flow::Domain(crate::error::Error::InvalidInput(format!(
            "field dims differ: {:?} vs {:?}",
            a.dims(),
            b.dims()
        )));
    }
    let _ = writeln!(stdout, "x,y,z,dist");
    for (x, y, z) in a.coords() {
        if let (Some(ta), Some(tb)) = (a.get(x, y, z), b.get(x, y, z)) {
            let d = try_domain!(dist(kind, ta, tb));
            let _ = writeln!(stdout, "{x},{y},{z},{}", sig12(d));
        }
    }
    Flow::Done
}

fn cmd_mean(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> Flow {
    let parsed = try_usage!(parse_flags(args, &["metric", "alpha", "weights"]));
    let kind = try_usage!(parse_metric(&parsed.flags));
    let samples = try_domain!(load_samples(&parsed.positional));
    let mut config = MeanConfig::new(kind);
    if let Some(wpath) = parsed.flags.get("weights") {
        let mut text = String::new();
        let mut f = match File::open(wpath) {
            Ok(f) => f,
            Err(e) => return Flow::Usage(format!("{wpath}: {e}")),
        };
        if f.read_to_string(&mut text).is_err() {
            return Flow::Usage(format!("{wpath}: unreadable"));
        }
        let weights: std::result::Result<Vec<f64>, _> = text
            .split([',', '\n', ' '])
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<f64>())
            .collect();
        match weights {
            Ok(w) => config = config.with_weights(w),
            Err(_) => return Flow::Usage(format!("{wpath}: bad weight value")),
        }
    }
    let result = try_domain!(mean(&samples, &config));
    let _ = writeln!(
        stderr,
        "iterations={} objective={} converged={}",
        result.iterations,
        sig12(result.objective),
        result.converged
    );
    try_domain!(tensor_to_field(&result.estimate).write_csv(stdout));
    Flow::Done
}

fn cmd_interp(args: &[String], stdout: &mut dyn Write, _stderr: &mut dyn Write) -> Flow {
    let parsed = try_usage!(parse_flags(
        args,
        &["metric", "alpha", "w", "factor", "weighting"]
    ));
    let kind = try_usage!(parse_metric(&parsed.flags));
    match (parsed.flags.get("w"), parsed.flags.get("factor")) {
        (Some(w), None) => {
            let w: f64 = try_usage!(w.parse().map_err(|_| format!("bad --w '{w}'")));
            if parsed.positional.len() != 2 {
                return Flow::Usage("interp --w needs two tensor files".into());
            }
            let a = try_domain!(single_tensor(
                &try_domain!(load_field(&parsed.positional[0])),
                &parsed.positional[0]
            ));
            let b = try_domain!(single_tensor(
                &try_domain!(load_field(&parsed.positional[1])),
                &parsed.positional[1]
            ));
            let point = try_domain!(geodesic_point(kind, &a, &b, w));
            try_domain!(tensor_to_field(&point).write_csv(stdout));
            Flow::Done
        }
        (None, Some(f)) => {
            let factor: usize = try_usage!(f.parse().map_err(|_| format!("bad --factor '{f}'")));
            if parsed.positional.len() != 1 {
                return Flow::Usage("interp --factor needs one field file".into());
            }
            let weighting = match parsed.flags.get("weighting").map(String::as_str) {
                None | Some("bilinear") => Weighting::Bilinear,
                Some("inverse") => Weighting::InverseDistance,
                Some(other) => return Flow::Usage(format!("unknown weighting '{other}'")),
            };
            let field = try_domain!(load_field(&parsed.positional[0]));
            let out = try_domain!(field_interpolate(&field, factor, kind, weighting));
            try_domain!(out.write_csv(stdout));
            Flow::Done
        }
        _ => Flow::Usage("interp needs exactly one of --w or --factor".into()),
    }
}

fn cmd_pca(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> Flow {
    let parsed = try_usage!(parse_flags(args, &["scores", "path", "steps", "range"]));
    let samples = try_domain!(load_samples(&parsed.positional));
    let config = MeanConfig::new(MetricKind::ProcrustesSS);
    let model = try_domain!(fit_pca(&samples, &config));
    let total: f64 = model.variances.iter().sum();
    let _ = writeln!(stderr, "n={} p={}", samples.len(), model.p());

    if let Some(j) = parsed.flags.get("path") {
        let j: usize = try_usage!(j.parse().map_err(|_| format!("bad --path '{j}'")));
        let steps: usize = match parsed.flags.get("steps") {
            Some(s) => try_usage!(s.parse().map_err(|_| format!("bad --steps '{s}'"))),
            None => 11,
        };
        let range: f64 = match parsed.flags.get("range") {
            Some(c) => try_usage!(c.parse().map_err(|_| format!("bad --range '{c}'"))),
            None => 2.0,
        };
        if steps < 2 {
            return Flow::Usage("--steps must be at least 2".into());
        }
        let mut field = TensorField::new([steps, 1, 1], [1.0; 3]);
        for i in 0..steps {
            let c = -range + 2.0 * range * i as f64 / (steps - 1) as f64;
            let t = try_domain!(pc_path(&model, j, c));
            try_domain!(field.set(i, 0, 0, t));
        }
        try_domain!(field.write_csv(stdout));
        return Flow::Done;
    }

    if parsed.flags.contains_key("scores") {
        let _ = writeln!(stdout, "sample,component,score");
        for (i, row) in model.scores.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                let _ = writeln!(stdout, "{i},{},{}", j + 1, sig12(*s));
            }
        }
        return Flow::Done;
    }

    let _ = writeln!(stdout, "component,variance,fraction");
    for (j, v) in model.variances.iter().enumerate() {
        let _ = writeln!(stdout, "{},{},{}", j + 1, sig12(*v), sig12(v / total));
    }
    Flow::Done
}

fn cmd_anisotropy(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> Flow {
    let parsed = try_usage!(parse_flags(args, &["kind", "alpha", "format", "ga-max"]));
    let kind = match parsed.flags.get("kind").map(String::as_str) {
        Some("fa") => AnisotropyKind::FA,
        Some("pa") => AnisotropyKind::PA,
        Some("ga") => AnisotropyKind::GA,
        Some("faalpha") => {
            let a = match parsed.flags.get("alpha") {
                Some(a) => try_usage!(a.parse::<f64>().map_err(|_| format!("bad --alpha '{a}'"))),
                None => return Flow::Usage("--kind faalpha needs --alpha".into()),
            };
            AnisotropyKind::FAalpha(a)
        }
        Some(other) => return Flow::Usage(format!("unknown anisotropy kind '{other}'")),
        None => return Flow::Usage("--kind is required".into()),
    };
    if parsed.positional.len() != 1 {
        return Flow::Usage("anisotropy needs one field file".into());
    }
    let field = try_domain!(load_field(&parsed.positional[0]));
    let map = anisotropy_map(&field, kind);
    let failed = field.unmasked_count() - map.mask.iter().filter(|&&m| m).count();
    if failed > 0 {
        let _ = writeln!(
            stderr,
            "masked {failed} voxels where the measure is undefined"
        );
    }
    match parsed.flags.get("format").map(String::as_str) {
        None | Some("csv") => {
            try_domain!(map.write_csv(stdout));
        }
        Some("pgm") => {
            let hi = if kind == AnisotropyKind::GA {
                match parsed.flags.get("ga-max") {
                    Some(x) => {
                        try_usage!(x.parse::<f64>().map_err(|_| format!("bad --ga-max '{x}'")))
                    }
                    None => 3.0,
                }
            } else {
                1.0
            };
            try_domain!(map.write_pgm(stdout, 0.0, hi));
        }
        Some(other) => return Flow::Usage(format!("unknown format '{other}'")),
    }
    Flow::Done
}

fn parse_model(token: &str) -> std::result::Result<ErrorModelKind, String> {
    match token.to_ascii_uppercase().as_str() {
        "I" | "1" => Ok(ErrorModelKind::GaussianSqrt),
        "II" | "2" => Ok(ErrorModelKind::GaussianCholesky),
        "III" | "3" => Ok(ErrorModelKind::LogGaussian),
        "IV" | "4" => Ok(ErrorModelKind::StudentT3),
        other => Err(format!("unknown model '{other}'")),
    }
}

fn parse_estimators(token: &str) -> std::result::Result<Vec<Estimator>, String> {
    token
        .chars()
        .map(|c| match c.to_ascii_uppercase() {
            'E' => Ok(Estimator::Euclidean),
            'C' => Ok(Estimator::Cholesky),
            'S' => Ok(Estimator::ProcrustesSS),
            'H' => Ok(Estimator::RootEuclidean),
            'L' => Ok(Estimator::LogEuclidean),
            'R' => Ok(Estimator::Riemannian),
            'F' => Ok(Estimator::FullProcrustes),
            other => Err(format!("unknown estimator '{other}'")),
        })
        .collect()
}

fn cmd_simulate(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> Flow {
    let parsed = try_usage!(parse_flags(
        args,
        &[
            "table",
            "model",
            "n",
            "lambda",
            "sigma",
            "reps",
            "seed",
            "estimators",
            "model3",
            "threads"
        ]
    ));
    if !parsed.positional.is_empty() {
        return Flow::Usage(format!("unexpected argument '{}'", parsed.positional[0]));
    }
    let sigma: f64 = match parsed.flags.get("sigma") {
        Some(s) => try_usage!(s.parse().map_err(|_| format!("bad --sigma '{s}'"))),
        None => 0.1,
    };
    let reps: usize = match parsed.flags.get("reps") {
        Some(r) => try_usage!(r.parse().map_err(|_| format!("bad --reps '{r}'"))),
        None => 1000,
    };
    let seed: u64 = match parsed.flags.get("seed") {
        Some(s) => try_usage!(s.parse().map_err(|_| format!("bad --seed '{s}'"))),
        None => 2009,
    };
    let log_variant = match parsed.flags.get("model3").map(String::as_str) {
        None | Some("sym") => LogNoiseVariant::SymmetricLog,
        Some("factor") => LogNoiseVariant::FactorLog,
        Some("literal") => LogNoiseVariant::Literal,
        Some(other) => return Flow::Usage(format!("unknown model3 variant '{other}'")),
    };
    let estimators = match parsed.flags.get("estimators") {
        Some(t) => try_usage!(parse_estimators(t)),
        None => Estimator::ALL.to_vec(),
    };

    let mut configs: Vec<StudyConfig> = Vec::new();
    if let Some(table) = parsed.flags.get("table") {
        let preset = match table.as_str() {
            "2" => crate::sim::table2_configs(seed, reps),
            "3" => crate::sim::table3_configs(seed, reps),
            other => return Flow::Usage(format!("unknown table '{other}'")),
        };
        for mut cfg in preset {
            cfg.model.sigma = sigma;
            cfg.model.log_variant = log_variant;
            cfg.estimators = estimators.clone();
            configs.push(cfg);
        }
    } else {
        let model_kind = match parsed.flags.get("model") {
            Some(m) => try_usage!(parse_model(m)),
            None => return Flow::Usage("simulate needs --table or --model".into()),
        };
        let n: usize = match parsed.flags.get("n") {
            Some(n) => try_usage!(n.parse().map_err(|_| format!("bad --n '{n}'"))),
            None => return Flow::Usage("--model mode needs --n".into()),
        };
        let lambda: Vec<f64> = match parsed.flags.get("lambda") {
            Some(l) => {
                let parts: std::result::Result<Vec<f64>, _> =
                    l.split(',').map(|t| t.trim().parse::<f64>()).collect();
                try_usage!(parts.map_err(|_| format!("bad --lambda '{l}'")))
            }
            None => return Flow::Usage("--model mode needs --lambda".into()),
        };
        let mut model = ErrorModel::new(model_kind, sigma);
        model.log_variant = log_variant;
        let mut cfg = StudyConfig::new(lambda, model, n);
        cfg.replications = reps;
        cfg.seed = seed;
        cfg.estimators = estimators;
        configs.push(cfg);
    }

    let run_all = || -> Result<Vec<(ErrorModelKind, usize, crate::sim::StudyResult)>> {
        configs
            .iter()
            .map(|cfg| Ok((cfg.model.kind, cfg.n, run_study(cfg)?)))
            .collect()
    };
    let rows = if let Some(t) = parsed.flags.get("threads") {
        let threads: usize = try_usage!(t.parse().map_err(|_| format!("bad --threads '{t}'")));
        let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(p) => p,
            Err(e) => return Flow::Usage(format!("cannot build thread pool: {e}")),
        };
        try_domain!(pool.install(run_all))
    } else {
        try_domain!(run_all())
    };

    let total_failures: usize = rows
        .iter()
        .flat_map(|(_, _, r)| r.summaries.iter().map(|s| s.failures))
        .sum();
    if total_failures > 0 {
        let _ = writeln!(
            stderr,
            "warning: {total_failures} estimator failures excluded"
        );
    }
    try_domain!(write_study_csv(stdout, &rows));
    Flow::Done
}

fn cmd_synth(args: &[String], stdout: &mut dyn Write, _stderr: &mut dyn Write) -> Flow {
    let parsed = try_usage!(parse_flags(
        args,
        &["pattern", "out", "steps", "dims", "metric", "alpha", "sigma", "seed", "from", "to"]
    ));
    let seed: u64 = match parsed.flags.get("seed") {
        Some(s) => try_usage!(s.parse().map_err(|_| format!("bad --seed '{s}'"))),
        None => 1,
    };
    let sigma: f64 = match parsed.flags.get("sigma") {
        Some(s) => try_usage!(s.parse().map_err(|_| format!("bad --sigma '{s}'"))),
        None => 0.0,
    };
    let dims: (usize, usize) = match parsed.flags.get("dims") {
        Some(d) => {
            let parts: Vec<&str> = d.split(',').collect();
            if parts.len() != 2 {
                return Flow::Usage(format!("bad --dims '{d}', expected NX,NY"));
            }
            let nx = try_usage!(parts[0]
                .trim()
                .parse()
                .map_err(|_| format!("bad --dims '{d}'")));
            let ny = try_usage!(parts[1]
                .trim()
                .parse()
                .map_err(|_| format!("bad --dims '{d}'")));
            (nx, ny)
        }
        None => (16, 16),
    };

    let field = match parsed.flags.get("pattern").map(String::as_str) {
        Some("geodesic") => {
            let steps: usize = match parsed.flags.get("steps") {
                Some(s) => try_usage!(s.parse().map_err(|_| format!("bad --steps '{s}'"))),
                None => 11,
            };
            if steps < 2 {
                return Flow::Usage("--steps must be at least 2".into());
            }
            let kind = match parsed.flags.get("metric") {
                Some(_) => try_usage!(parse_metric(&parsed.flags)),
                None => MetricKind::ProcrustesSS,
            };
            let (a, b) = match (parsed.flags.get("from"), parsed.flags.get("to")) {
                (Some(fa), Some(fb)) => {
                    let a = try_domain!(single_tensor(&try_domain!(load_field(fa)), fa));
                    let b = try_domain!(single_tensor(&try_domain!(load_field(fb)), fb));
                    (a, b)
                }
                (None, None) => synth::anisotropic_pair(),
                _ => return Flow::Usage("--from and --to must be given together".into()),
            };
            try_domain!(synth::geodesic_field(&a, &b, steps, kind))
        }
        Some("two-region") => try_domain!(synth::two_region_field(dims.0, dims.1)),
        Some("crossing") => try_domain!(synth::crossing_field(dims.0, dims.1, sigma, seed)),
        Some(other) => return Flow::Usage(format!("unknown pattern '{other}'")),
        None => return Flow::Usage("--pattern is required".into()),
    };

    if let Some(path) = parsed.flags.get("out") {
        let mut file = match File::create(path) {
            Ok(f) => f,
            Err(e) => return Flow::Usage(format!("{path}: {e}")),
        };
        if path.ends_with(".json") {
            try_domain!(field.write_json(&mut file));
        } else {
            try_domain!(field.write_csv(&mut file));
        }
    } else {
        try_domain!(field.write_csv(stdout));
    }
    Flow::Done
}
