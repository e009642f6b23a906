use crate::bench::{run_benchmark, BenchmarkSpec};
use crate::io::{create_dir, read_json, to_json, write_text};
use crate::{CliError, Precision, Result};
use fourier_jumps::model::{adversarial_pair, synth_spectrum, ModelFile, SmoothSpec};
use fourier_jumps::reconstruct::ApproximantFile;
use fourier_jumps::solver::RootSelection;
use fourier_jumps::spectrum::SpectrumFile;
use fourier_jumps::stability::{
    c9_bound, c9_bound_exact, decimated_constant, decimated_constant_exact, decimated_node_bound,
    decimated_node_bound_via_prony, method_gap_factor, method_gap_factor_exact, misspec_exponent,
    node_perturbation_bound, PronyConfig,
};
use fourier_jumps::{full_reconstruct, AprioriBounds, FourierSpectrum, PlanKind, ReconstructionConfig};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

pub fn load_spectrum(path: &Path) -> Result<FourierSpectrum<f64>> {
    let file: SpectrumFile = read_json(path)?;
    Ok(FourierSpectrum::try_from(file)?)
}

/// Spectrum of a model file plus a catalog smooth part. `smooth` overrides
/// the part recorded in the model file.
pub fn cmd_synth(model_path: &Path, smooth: Option<&str>, m: usize, out: Option<&Path>) -> Result<()> {
    let file: ModelFile = read_json(model_path)?;
    let model = file.to_model()?;
    let spec = match smooth {
        Some(name) => SmoothSpec::by_name(name)?,
        None => file.smooth.clone().unwrap_or(SmoothSpec::Zero),
    };
    let part = spec.build()?;
    let spectrum = synth_spectrum(&model, Some(&part), m)?;
    write_text(out, &(spectrum.to_json() + "\n"))
}

#[derive(Debug, Clone)]
pub struct RecoverArgs {
    pub spectrum: PathBuf,
    pub d: usize,
    pub k: usize,
    pub bounds: PathBuf,
    pub plan: PlanKind,
    pub half_order: Option<usize>,
    pub priors: Option<Vec<f64>>,
    pub trust_priors: bool,
    pub refinement_steps: Option<usize>,
    pub root_selection: RootSelection,
}

pub fn cmd_recover(args: &RecoverArgs, precision: Precision, out: Option<&Path>) -> Result<()> {
    if precision != Precision::Double {
        return Err(CliError::Usage(
            "recover runs in double precision; extended precision is available to bench".into(),
        ));
    }
    let spec = load_spectrum(&args.spectrum)?;
    let bounds: AprioriBounds = read_json(&args.bounds)?;
    let mut config = ReconstructionConfig::new(args.d, args.k, bounds);
    config.plan_kind = args.plan;
    if let Some(h) = args.half_order {
        config.half_order = h;
    }
    if let Some(n) = args.refinement_steps {
        config.refinement_sweeps = n;
    }
    config.priors = args.priors.clone();
    config.trust_priors = args.trust_priors;
    config.root_selection = args.root_selection;
    let appr = full_reconstruct(&spec, &config)?;
    write_text(out, &to_json(&ApproximantFile::new(&appr, &config)))
}

pub fn cmd_bench(spec_path: &Path, seed: Option<u64>, precision: Option<Precision>, out: Option<&Path>) -> Result<()> {
    let spec: BenchmarkSpec = read_json(spec_path)?;
    spec.validate()?;
    let seed = seed.or(spec.seed).unwrap_or(0);
    let precision = match precision {
        Some(p) => p,
        None => match &spec.precision {
            Some(s) => s.parse().map_err(CliError::Usage)?,
            None => Precision::Double,
        },
    };
    let report = run_benchmark(&spec, seed, precision)?;
    write_text(out, &report.to_csv()?)
}

#[derive(Debug, Clone, Serialize)]
pub struct AdversarialReport {
    #[serde(rename = "M")]
    pub m: usize,
    pub d: usize,
    pub delta: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub max_coefficient_discrepancy: f64,
    pub max_scaled_correction: f64,
    pub shifted_model: ModelFile,
}

/// Writes `g.json`, `h.json` and `report.json` into `out_dir`.
pub fn cmd_adversarial(model_path: &Path, m: usize, bounds_path: &Path, out_dir: &Path) -> Result<AdversarialReport> {
    let file: ModelFile = read_json(model_path)?;
    let model = file.to_model()?;
    let bounds: AprioriBounds = read_json(bounds_path)?;
    let pair = adversarial_pair(&model, m, &bounds)?;
    create_dir(out_dir)?;
    write_text(Some(&out_dir.join("g.json")), &(pair.g.to_json() + "\n"))?;
    write_text(Some(&out_dir.join("h.json")), &(pair.h.to_json() + "\n"))?;
    let report = AdversarialReport {
        m,
        d: model.order(),
        delta: pair.delta,
        r: bounds.r,
        a: bounds.a,
        max_coefficient_discrepancy: pair.max_discrepancy,
        max_scaled_correction: pair.max_scaled_correction,
        shifted_model: ModelFile::from_model(&pair.shifted, None),
    };
    write_text(Some(&out_dir.join("report.json")), &to_json(&report))?;
    Ok(report)
}

/// One bound query, tagged by `query`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "query", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundQuery {
    NodePerturbation {
        multiplicities: Vec<usize>,
        #[serde(default)]
        t: Option<usize>,
        sigma: usize,
        #[serde(default = "unit_gap")]
        node_gap: f64,
        eps: f64,
        #[serde(default)]
        node: usize,
        a_lead: f64,
    },
    Decimated {
        d: usize,
        #[serde(rename = "M")]
        m: usize,
        r_star: f64,
        b_star: f64,
    },
    DecimatedViaProny {
        d: usize,
        #[serde(rename = "M")]
        m: usize,
        r_star: f64,
        b_star: f64,
    },
    DecimatedConstant {
        d: usize,
    },
    C9 {
        d: usize,
    },
    MethodGap {
        d: usize,
    },
    MisspecExponent {
        d_used: usize,
        d_true: usize,
    },
}

fn unit_gap() -> f64 {
    1.0
}

impl BoundQuery {
    /// `{"bound": value, "inputs": {...}}`, with the exact rational where
    /// one exists.
    pub fn answer(&self) -> Result<Value> {
        let inputs = serde_json::to_value(self).expect("serializable query");
        let (bound, exact) = match self {
            BoundQuery::NodePerturbation {
                multiplicities,
                t,
                sigma,
                node_gap,
                eps,
                node,
                a_lead,
            } => {
                let cfg = PronyConfig {
                    multiplicities: multiplicities.clone(),
                    t: t.unwrap_or(*sigma),
                    sigma: *sigma,
                    node_gap: *node_gap,
                    eps: *eps,
                };
                (json!(node_perturbation_bound(&cfg, *node, *a_lead)?), None)
            }
            BoundQuery::Decimated { d, m, r_star, b_star } => {
                (json!(decimated_node_bound(*d, *m, *r_star, *b_star)?), None)
            }
            BoundQuery::DecimatedViaProny { d, m, r_star, b_star } => {
                (json!(decimated_node_bound_via_prony(*d, *m, *r_star, *b_star)?), None)
            }
            BoundQuery::DecimatedConstant { d } => (
                json!(decimated_constant(*d)),
                Some(decimated_constant_exact(*d).to_string()),
            ),
            BoundQuery::C9 { d } => (json!(c9_bound(*d)), Some(c9_bound_exact(*d).to_string())),
            BoundQuery::MethodGap { d } => (
                json!(method_gap_factor(*d)),
                Some(method_gap_factor_exact(*d).to_string()),
            ),
            BoundQuery::MisspecExponent { d_used, d_true } => {
                (json!(misspec_exponent(*d_used, *d_true)?), None)
            }
        };
        let mut obj = json!({ "bound": bound, "inputs": inputs });
        if let Some(e) = exact {
            obj["exact"] = json!(e);
        }
        Ok(obj)
    }
}

/// Answers a single query object or an array of them.
pub fn cmd_bounds(query_path: &Path, out: Option<&Path>) -> Result<()> {
    let value: Value = read_json(query_path)?;
    let parse = |v: Value| -> Result<BoundQuery> {
        serde_json::from_value(v).map_err(|e| CliError::Usage(format!("bad bound query: {e}")))
    };
    let answer = match value {
        Value::Array(items) => Value::Array(
            items
                .into_iter()
                .map(|v| parse(v)?.answer())
                .collect::<Result<_>>()?,
        ),
        v => parse(v)?.answer()?,
    };
    write_text(out, &to_json(&answer))
}
