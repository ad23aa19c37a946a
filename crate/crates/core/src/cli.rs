//! Command-line front end.
//!
//! Every subcommand reads CSV inputs, computes everything in memory and then
//! writes its artifacts plus a `manifest.txt` of `key=value` lines into the
//! output directory in one atomic step. The output directory comes from
//! `--out`, else `$RCA_OUT_DIR`, else `rca-out`.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cca::cca_fit;
use crate::covariance::CovarianceSpec;
use crate::diffexpr::{residual_scores, roc_curve, TimeSeriesPair};
use crate::error::{RcaError, Result};
use crate::io::{format_value, load_csv, load_vector, to_csv, write_all_atomic, CsvMatrix};
use crate::itrca::{
    iterative_rca, predict_view1_rows, rms_error, ItrcaConfig, Predictor, RankRule,
    SharedPrivateModel,
};
use crate::kernels::{
    paired_time_grid, KernelSpec, NoiseMode, DEFAULT_LENGTHSCALE, DEFAULT_NOISE_FRACTION,
};
use crate::rca::{ppca_fit, rca_fit};
use crate::synth::{planted_diffexpr, planted_shared_private, DiffexprParams, SharedPrivateParams};
use crate::{Matrix, Vector};

pub const OUT_DIR_ENV: &str = "RCA_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "rca-out";

#[derive(Debug, Parser)]
#[command(name = "rca", version, about = "Residual component analysis")]
pub struct Cli {
    /// Output directory [default: $RCA_OUT_DIR or ./rca-out]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Residual components of a Gram/covariance matrix given a known covariance.
    Rca {
        /// Symmetric matrix G (CSV)
        #[arg(long)]
        gram: PathBuf,
        /// identity:<s2> | explicit:<csv> | lowrank:<csv>:<s2> | blockdiag:<csv>;<csv>;... | rbf:<lengthscale>:<noise-variance>
        #[arg(long)]
        sigma: String,
        /// Inputs for an rbf sigma: comma-separated numbers or a CSV file
        #[arg(long)]
        times: Option<String>,
    },
    /// Probabilistic PCA with isotropic noise.
    Ppca {
        /// Data matrix, rows are samples (CSV)
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        sigma2: f64,
    },
    /// Canonical correlation analysis of two aligned views.
    Cca {
        #[arg(long)]
        y1: PathBuf,
        #[arg(long)]
        y2: PathBuf,
    },
    /// Differential scores for paired treatment/control time series.
    Diffexpr {
        /// Treatment series, rows are time points, columns genes (CSV)
        #[arg(long)]
        y1: PathBuf,
        /// Control series (CSV)
        #[arg(long)]
        y2: PathBuf,
        /// Treatment times: comma-separated numbers or a CSV file [default: 0,20,...,240]
        #[arg(long)]
        t1: Option<String>,
        /// Control times [default: 0,20,40,60,120,180,240]
        #[arg(long)]
        t2: Option<String>,
        #[arg(long, default_value_t = DEFAULT_LENGTHSCALE)]
        lengthscale: f64,
        /// Kernel noise as a fraction of the mean standardized variance
        #[arg(long, default_value_t = DEFAULT_NOISE_FRACTION, conflicts_with = "noise_variance")]
        noise_fraction: f64,
        /// Absolute kernel noise variance (overrides the fraction)
        #[arg(long)]
        noise_variance: Option<f64>,
        /// Per-gene 0/1 labels (last CSV column) for ROC output
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Shared/private latent model of two aligned views.
    Itrca {
        #[arg(long)]
        y1: PathBuf,
        #[arg(long)]
        y2: PathBuf,
        #[arg(long, default_value_t = 0.3)]
        alpha: f64,
        /// Stopping tolerance on the log-likelihood change [default: 1e-6·n·(d1+d2)]
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        #[arg(long, value_enum, default_value_t = RankRuleArg::SamplingEdge)]
        rank_rule: RankRuleArg,
    },
    /// Predict view 1 from view 2 with a model written by `itrca`.
    Predict {
        /// Output directory of an `itrca` run
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        y2: PathBuf,
        #[arg(long, value_enum, default_value_t = PredictorArg::Printed)]
        predictor: PredictorArg,
        /// True view 1 for an RMS report
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Planted differential-expression instance.
    SynthDiffexpr {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        genes: usize,
        #[arg(long, default_value_t = 10)]
        planted: usize,
        /// Bump amplitude in null standard deviations
        #[arg(long, default_value_t = 3.0)]
        effect: f64,
        #[arg(long, default_value_t = 0.1)]
        noise_sd: f64,
    },
    /// Planted shared/private instance.
    SynthItrca {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 15)]
        d1: usize,
        #[arg(long, default_value_t = 12)]
        d2: usize,
        #[arg(long, default_value_t = 2)]
        qs: usize,
        #[arg(long, default_value_t = 1)]
        q1: usize,
        #[arg(long, default_value_t = 1)]
        q2: usize,
        /// Observation noise variance
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        /// Extra iid rows written as test_y1/test_y2 with Bayes-optimal predictions
        #[arg(long, default_value_t = 0)]
        test_rows: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RankRuleArg {
    Strict,
    SamplingEdge,
}

impl From<RankRuleArg> for RankRule {
    fn from(r: RankRuleArg) -> Self {
        match r {
            RankRuleArg::Strict => RankRule::Strict,
            RankRuleArg::SamplingEdge => RankRule::SamplingEdge,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PredictorArg {
    Printed,
    Exact,
}

impl From<PredictorArg> for Predictor {
    fn from(p: PredictorArg) -> Self {
        match p {
            PredictorArg::Printed => Predictor::Printed,
            PredictorArg::Exact => Predictor::Exact,
        }
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rca { .. } => "rca",
            Command::Ppca { .. } => "ppca",
            Command::Cca { .. } => "cca",
            Command::Diffexpr { .. } => "diffexpr",
            Command::Itrca { .. } => "itrca",
            Command::Predict { .. } => "predict",
            Command::SynthDiffexpr { .. } => "synth-diffexpr",
            Command::SynthItrca { .. } => "synth-itrca",
        }
    }
}

/// Files and manifest entries produced by one command.
#[derive(Debug, Default)]
struct Artifacts {
    files: Vec<(String, String)>,
    manifest: Vec<(String, String)>,
}

impl Artifacts {
    fn file(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    fn matrix(&mut self, name: &str, m: &Matrix) {
        self.file(name, to_csv(m, None, None));
    }

    fn column(&mut self, name: &str, header: &str, v: &Vector) {
        let m = Matrix::from_column_slice(v.len(), 1, v.as_slice());
        self.file(name, to_csv(&m, Some(&[header.to_string()]), None));
    }

    fn set(&mut self, key: &str, value: impl ToString) {
        self.manifest.push((key.to_string(), value.to_string()));
    }

    fn set_real(&mut self, key: &str, value: f64) {
        self.set(key, format_value(value));
    }
}

/// Resolves the output directory from the flag or the environment.
pub fn output_dir(flag: Option<&Path>) -> PathBuf {
    match flag {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)),
    }
}

/// Runs one parsed invocation; returns the directory written.
pub fn run(cli: &Cli) -> Result<PathBuf> {
    let mut art = Artifacts::default();
    art.set("command", cli.command.name());
    art.set("version", env!("CARGO_PKG_VERSION"));
    dispatch(&cli.command, &mut art)?;

    let mut manifest = String::new();
    for (k, v) in &art.manifest {
        manifest.push_str(&format!("{k}={v}\n"));
    }
    let names: Vec<&str> = art.files.iter().map(|(n, _)| n.as_str()).collect();
    manifest.push_str(&format!("outputs={}\n", names.join(";")));
    art.files.push(("manifest.txt".to_string(), manifest));

    let dir = output_dir(cli.out.as_deref());
    write_all_atomic(&dir, &art.files)?;
    Ok(dir)
}

fn dispatch(command: &Command, art: &mut Artifacts) -> Result<()> {
    match command {
        Command::Rca { gram, sigma, times } => cmd_rca(art, gram, sigma, times.as_deref()),
        Command::Ppca { y, sigma2 } => cmd_ppca(art, y, *sigma2),
        Command::Cca { y1, y2 } => cmd_cca(art, y1, y2),
        Command::Diffexpr {
            y1,
            y2,
            t1,
            t2,
            lengthscale,
            noise_fraction,
            noise_variance,
            labels,
        } => {
            let noise = match noise_variance {
                Some(v) => NoiseMode::Absolute(*v),
                None => NoiseMode::FractionOfDataVariance(*noise_fraction),
            };
            let spec = KernelSpec::new(*lengthscale, noise)?;
            cmd_diffexpr(
                art,
                y1,
                y2,
                t1.as_deref(),
                t2.as_deref(),
                &spec,
                labels.as_deref(),
            )
        }
        Command::Itrca {
            y1,
            y2,
            alpha,
            tol,
            max_iter,
            rank_rule,
        } => {
            let config = ItrcaConfig {
                alpha: *alpha,
                tol: *tol,
                max_iter: *max_iter,
                rank_rule: (*rank_rule).into(),
            };
            cmd_itrca(art, y1, y2, &config)
        }
        Command::Predict {
            model,
            y2,
            predictor,
            truth,
        } => cmd_predict(art, model, y2, (*predictor).into(), truth.as_deref()),
        Command::SynthDiffexpr {
            seed,
            genes,
            planted,
            effect,
            noise_sd,
        } => {
            let params = DiffexprParams {
                genes: *genes,
                planted: *planted,
                effect: *effect,
                noise_sd: *noise_sd,
            };
            cmd_synth_diffexpr(art, *seed, &params)
        }
        Command::SynthItrca {
            seed,
            n,
            d1,
            d2,
            qs,
            q1,
            q2,
            noise,
            test_rows,
        } => {
            let params = SharedPrivateParams {
                n: *n,
                d1: *d1,
                d2: *d2,
                qs: *qs,
                q1: *q1,
                q2: *q2,
                noise: *noise,
                whiten_latents: true,
            };
            cmd_synth_itrca(art, *seed, &params, *test_rows)
        }
    }
}

fn parse_real(name: &'static str, s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| RcaError::invalid(name, format!("cannot parse `{s}` as a number")))
}

/// Comma-separated numbers, or else a path to a CSV file of numbers.
pub fn parse_times(arg: &str) -> Result<Vec<f64>> {
    let inline: std::result::Result<Vec<f64>, _> =
        arg.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match inline {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => load_vector(Path::new(arg)),
    }
}

/// Parses a `--sigma` argument.
pub fn parse_sigma(arg: &str, times: Option<&str>) -> Result<CovarianceSpec> {
    let (kind, rest) = arg.split_once(':').unwrap_or((arg, ""));
    match kind {
        "identity" => Ok(CovarianceSpec::ScaledIdentity(parse_real("sigma", rest)?)),
        "explicit" => Ok(CovarianceSpec::Explicit(load_csv(Path::new(rest))?.data)),
        "lowrank" => {
            let (path, noise) = rest
                .rsplit_once(':')
                .ok_or_else(|| RcaError::invalid("sigma", "expected lowrank:<csv>:<noise>"))?;
            Ok(CovarianceSpec::LowRankPlusNoise {
                factor: load_csv(Path::new(path))?.data,
                noise: parse_real("sigma", noise)?,
            })
        }
        "blockdiag" => {
            let blocks = rest
                .split(';')
                .map(|p| load_csv(Path::new(p)).map(|m| m.data))
                .collect::<Result<Vec<_>>>()?;
            Ok(CovarianceSpec::BlockDiagonal(blocks))
        }
        "rbf" => {
            let (ell, noise) = rest.split_once(':').ok_or_else(|| {
                RcaError::invalid("sigma", "expected rbf:<lengthscale>:<noise-variance>")
            })?;
            let times =
                times.ok_or_else(|| RcaError::invalid("times", "required for an rbf sigma"))?;
            Ok(CovarianceSpec::Kernel {
                spec: KernelSpec::new(
                    parse_real("sigma", ell)?,
                    NoiseMode::Absolute(parse_real("sigma", noise)?),
                )?,
                times: parse_times(times)?,
                data_variance: None,
            })
        }
        _ => Err(RcaError::invalid(
            "sigma",
            format!("unknown kind `{kind}` (identity, explicit, lowrank, blockdiag, rbf)"),
        )),
    }
}

fn cmd_rca(art: &mut Artifacts, gram: &Path, sigma: &str, times: Option<&str>) -> Result<()> {
    let g = load_csv(gram)?.data;
    let spec = parse_sigma(sigma, times)?;
    let fit = rca_fit(&g, &spec)?;
    art.set("gram", gram.display());
    art.set("sigma", sigma);
    art.set("dim", g.nrows());
    art.set("q", fit.q);
    art.set_real("log_likelihood", fit.log_likelihood);
    art.column("eigvals.csv", "value", &fit.eig.values);
    art.matrix("eigvecs.csv", &fit.eig.vectors);
    art.matrix("loadings.csv", &fit.loadings);
    Ok(())
}

fn cmd_ppca(art: &mut Artifacts, y: &Path, sigma2: f64) -> Result<()> {
    let data = load_csv(y)?.data;
    let fit = ppca_fit(&data, sigma2)?;
    art.set("y", y.display());
    art.set_real("sigma2", sigma2);
    art.set("n", data.nrows());
    art.set("d", data.ncols());
    art.set("q", fit.rca.q);
    art.set_real("log_likelihood", fit.rca.log_likelihood);
    art.column("eigvals.csv", "value", &fit.rca.eig.values);
    art.matrix("loadings.csv", &fit.rca.loadings);
    art.column("mean.csv", "mean", &fit.mean);
    Ok(())
}

fn cmd_cca(art: &mut Artifacts, y1: &Path, y2: &Path) -> Result<()> {
    let a = load_csv(y1)?.data;
    let b = load_csv(y2)?.data;
    let fit = cca_fit(&a, &b)?;
    art.set("y1", y1.display());
    art.set("y2", y2.display());
    art.set("q", fit.q());
    art.set("clamped", fit.clamped);
    art.column("correlations.csv", "correlation", &fit.correlations);
    art.column("spectrum.csv", "value", &fit.spectrum);
    art.matrix("s1.csv", &fit.s1);
    art.matrix("s2.csv", &fit.s2);
    art.matrix("v1.csv", &fit.v1);
    art.matrix("v2.csv", &fit.v2);
    Ok(())
}

fn gene_ids(csv: &CsvMatrix) -> Vec<String> {
    let d = csv.data.ncols();
    match &csv.header {
        Some(h) => h[h.len() - d..].to_vec(),
        None => (1..=d).map(|j| format!("gene_{j}")).collect(),
    }
}

fn cmd_diffexpr(
    art: &mut Artifacts,
    y1: &Path,
    y2: &Path,
    t1: Option<&str>,
    t2: Option<&str>,
    spec: &KernelSpec,
    labels: Option<&Path>,
) -> Result<()> {
    let a = load_csv(y1)?;
    let b = load_csv(y2)?;
    let ids = gene_ids(&a);
    let (g1, g2) = paired_time_grid();
    let t1 = t1.map(parse_times).transpose()?.unwrap_or(g1);
    let t2 = t2.map(parse_times).transpose()?.unwrap_or(g2);
    let pair = TimeSeriesPair::new(a.data, b.data, t1, t2)?;
    let ranking = residual_scores(&pair, spec)?;

    art.set("y1", y1.display());
    art.set("y2", y2.display());
    art.set(
        "t1",
        pair.t1
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(";"),
    );
    art.set(
        "t2",
        pair.t2
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(";"),
    );
    art.set_real("lengthscale", spec.lengthscale);
    match spec.noise {
        NoiseMode::Absolute(v) => art.set_real("noise_variance", v),
        NoiseMode::FractionOfDataVariance(p) => art.set_real("noise_fraction", p),
    }
    art.set("genes", pair.genes());
    art.set("q_used", ranking.q_used);
    art.set("no_residual", ranking.no_residual);

    let ranks = ranking.ranks();
    let mut scores = String::from("gene_id,score,rank\n");
    for (j, id) in ids.iter().enumerate() {
        scores.push_str(&format!(
            "{id},{},{}\n",
            format_value(ranking.scores[j]),
            ranks[j]
        ));
    }
    art.file("scores.csv", scores);
    art.column("eigvals.csv", "value", &ranking.eigenvalues);

    if let Some(path) = labels {
        let m = load_csv(path)?.data;
        let flags: Vec<bool> = m.column(m.ncols() - 1).iter().map(|&v| v != 0.0).collect();
        let roc = roc_curve(ranking.scores.as_slice(), &flags)?;
        let mut text = String::from("threshold,fpr,tpr\n");
        for (th, fpr, tpr) in &roc.points {
            text.push_str(&format!(
                "{},{},{}\n",
                format_value(*th),
                format_value(*fpr),
                format_value(*tpr)
            ));
        }
        text.push_str(&format!("# auc,{}\n", format_value(roc.auc)));
        art.file("roc.csv", text);
        art.set("labels", path.display());
        art.set_real("auc", roc.auc);
    }
    Ok(())
}

fn cmd_itrca(art: &mut Artifacts, y1: &Path, y2: &Path, config: &ItrcaConfig) -> Result<()> {
    let a = load_csv(y1)?.data;
    let b = load_csv(y2)?.data;
    let model = iterative_rca(&a, &b, config)?;
    let (q1, q2, qs) = model.ranks();
    art.set("y1", y1.display());
    art.set("y2", y2.display());
    art.set_real("alpha", config.alpha);
    match config.tol {
        Some(t) => art.set_real("tol", t),
        None => art.set("tol", "default"),
    }
    art.set("max_iter", config.max_iter);
    art.set("rank_rule", config.rank_rule.name());
    art.set("n", a.nrows());
    art.set("d1", model.d1());
    art.set("d2", model.d2());
    art.set("q1", q1);
    art.set("q2", q2);
    art.set("qs", qs);
    art.set_real("sigma1_sq", model.sigma1_sq);
    art.set_real("sigma2_sq", model.sigma2_sq);
    art.set("iterations", model.iterations());
    art.set("converged", model.converged);
    if let Some(l) = model.final_log_likelihood() {
        art.set_real("log_likelihood", l);
    }

    art.matrix("w1.csv", &model.w1);
    art.matrix("w2.csv", &model.w2);
    art.matrix("v1.csv", &model.v1);
    art.matrix("v2.csv", &model.v2);
    art.column("mu1.csv", "mu1", &model.mu1);
    art.column("mu2.csv", "mu2", &model.mu2);
    let mut log = String::from("iteration,log_likelihood,q1,q2,qs\n");
    for r in &model.history {
        log.push_str(&format!(
            "{},{},{},{},{}\n",
            r.iteration,
            format_value(r.log_likelihood),
            r.q1,
            r.q2,
            r.qs
        ));
    }
    art.file("iterations.csv", log);
    Ok(())
}

fn read_manifest(dir: &Path) -> Result<Vec<(String, String)>> {
    let path = dir.join("manifest.txt");
    let text = std::fs::read_to_string(&path).map_err(|e| RcaError::File {
        path: path.clone(),
        source: Box::new(e.into()),
    })?;
    Ok(text
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect())
}

fn manifest_value<'a>(m: &'a [(String, String)], key: &'static str) -> Result<&'a str> {
    m.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| RcaError::invalid("model", format!("manifest lacks `{key}`")))
}

fn manifest_count(m: &[(String, String)], key: &'static str) -> Result<usize> {
    manifest_value(m, key)?
        .parse()
        .map_err(|_| RcaError::invalid("model", format!("manifest `{key}` is not a count")))
}

fn load_block(dir: &Path, name: &str, rows: usize, cols: usize) -> Result<Matrix> {
    if cols == 0 {
        return Ok(Matrix::zeros(rows, 0));
    }
    let m = load_csv(&dir.join(name))?.data;
    if m.shape() != (rows, cols) {
        return Err(RcaError::dimension(
            "model block",
            format!("{rows}x{cols}"),
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(m)
}

/// Reads a model directory written by the `itrca` subcommand.
pub fn load_model(dir: &Path) -> Result<SharedPrivateModel> {
    let m = read_manifest(dir)?;
    if manifest_value(&m, "command")? != "itrca" {
        return Err(RcaError::invalid("model", "not an itrca output directory"));
    }
    let (d1, d2) = (manifest_count(&m, "d1")?, manifest_count(&m, "d2")?);
    let (q1, q2, qs) = (
        manifest_count(&m, "q1")?,
        manifest_count(&m, "q2")?,
        manifest_count(&m, "qs")?,
    );
    let mu1 = load_csv(&dir.join("mu1.csv"))?.data;
    let mu2 = load_csv(&dir.join("mu2.csv"))?.data;
    if mu1.len() != d1 || mu2.len() != d2 {
        return Err(RcaError::dimension(
            "model means",
            format!("{d1} and {d2}"),
            format!("{} and {}", mu1.len(), mu2.len()),
        ));
    }
    Ok(SharedPrivateModel {
        w1: load_block(dir, "w1.csv", d1, q1)?,
        w2: load_block(dir, "w2.csv", d2, q2)?,
        v1: load_block(dir, "v1.csv", d1, qs)?,
        v2: load_block(dir, "v2.csv", d2, qs)?,
        sigma1_sq: parse_real("sigma1_sq", manifest_value(&m, "sigma1_sq")?)?,
        sigma2_sq: parse_real("sigma2_sq", manifest_value(&m, "sigma2_sq")?)?,
        mu1: Vector::from_column_slice(mu1.as_slice()),
        mu2: Vector::from_column_slice(mu2.as_slice()),
        alpha: parse_real("alpha", manifest_value(&m, "alpha")?)?,
        history: Vec::new(),
        converged: manifest_value(&m, "converged")? == "true",
    })
}

fn cmd_predict(
    art: &mut Artifacts,
    model_dir: &Path,
    y2: &Path,
    predictor: Predictor,
    truth: Option<&Path>,
) -> Result<()> {
    let model = load_model(model_dir)?;
    let input = load_csv(y2)?.data;
    let pred = predict_view1_rows(&model, &input, predictor)?;
    art.set("model", model_dir.display());
    art.set("y2", y2.display());
    art.set("predictor", predictor.name());
    art.set("rows", pred.nrows());
    if let Some(path) = truth {
        let t = load_csv(path)?.data;
        art.set("truth", path.display());
        art.set_real("rms", rms_error(&pred, &t)?);
    }
    art.matrix("predictions.csv", &pred);
    Ok(())
}

fn cmd_synth_diffexpr(art: &mut Artifacts, seed: u64, params: &DiffexprParams) -> Result<()> {
    let inst = planted_diffexpr(seed, params)?;
    let ids: Vec<String> = (1..=params.genes).map(|j| format!("gene_{j}")).collect();
    art.set("seed", seed);
    art.set("genes", params.genes);
    art.set("planted", params.planted);
    art.set_real("effect", params.effect);
    art.set_real("noise_sd", params.noise_sd);
    art.file("y1.csv", to_csv(&inst.pair.y1, Some(&ids), None));
    art.file("y2.csv", to_csv(&inst.pair.y2, Some(&ids), None));
    art.column("t1.csv", "time", &Vector::from_vec(inst.pair.t1.clone()));
    art.column("t2.csv", "time", &Vector::from_vec(inst.pair.t2.clone()));
    let mut labels = String::from("gene_id,label\n");
    for (id, &l) in ids.iter().zip(&inst.labels) {
        labels.push_str(&format!("{id},{}\n", l as u8));
    }
    art.file("labels.csv", labels);
    Ok(())
}

fn cmd_synth_itrca(
    art: &mut Artifacts,
    seed: u64,
    params: &SharedPrivateParams,
    test_rows: usize,
) -> Result<()> {
    let inst = planted_shared_private(seed, params)?;
    art.set("seed", seed);
    art.set("n", params.n);
    art.set("d1", params.d1);
    art.set("d2", params.d2);
    art.set("qs", params.qs);
    art.set("q1", params.q1);
    art.set("q2", params.q2);
    art.set_real("noise", params.noise);
    art.set("test_rows", test_rows);
    art.matrix("y1.csv", &inst.y1);
    art.matrix("y2.csv", &inst.y2);
    art.matrix("true_w1.csv", &inst.truth.w1);
    art.matrix("true_w2.csv", &inst.truth.w2);
    art.matrix("true_v1.csv", &inst.truth.v1);
    art.matrix("true_v2.csv", &inst.truth.v2);
    if test_rows > 0 {
        // separate stream so the training data do not depend on test_rows
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7e57_0000_0000_0000);
        let (t1, t2) = inst.truth.sample(&mut rng, test_rows);
        art.matrix("test_y1.csv", &t1);
        art.matrix("test_y2.csv", &t2);
        art.matrix("bayes_y1.csv", &inst.truth.conditional_mean(&t2));
    }
    Ok(())
}
