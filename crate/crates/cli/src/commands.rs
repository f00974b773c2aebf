use std::io::Write;
use std::path::Path;

use gaitdom::classifier::{
    cross_validate, grid_search, load_model, save_model, CvConfig, CvReport, GridSearchResult, OvrModel,
    SvmHyperParams, SvmLearner, DEFAULT_C_GRID, DEFAULT_GAMMA_GRID,
};
use gaitdom::classify::classify_gait;
use gaitdom::engine::{run_benchmark, write_trace_csv, BenchConfig, GaitLibrary, Scene, SceneConfig};
use gaitdom::features::{extract_features, write_features_csv, GaitFeatures};
use gaitdom::mapping::{
    aggregate_responses, label_corpus, pca_dominance_axis, score_to_label, split_half_error, write_labels_csv,
    DominanceLabel, DominanceMapping, LabelSet, ScoringAxis,
};
use gaitdom::mocap::{bvh_to_gait, save_gait, ConvertOptions, JointMapping};
use gaitdom::synth::synthetic_corpus;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::io::{self, write_meta};
use crate::{
    BenchArgs, ClassifyArgs, Cli, CliError, Command, ConvertArgs, CrossvalArgs, FeaturesArgs, LabelArgs, LibraryArgs,
    ModelArgs, ServeArgs, SimulateArgs, TrainArgs,
};

struct Ctx {
    seed: u64,
    deterministic: bool,
}

impl Ctx {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let ctx = Ctx { seed: cli.seed.unwrap_or(0), deterministic: cli.deterministic };
    match &cli.command {
        Command::Convert(a) => convert(a, &ctx),
        Command::Features(a) => features(a, &ctx),
        Command::Label(a) => label(a, &ctx),
        Command::Train(a) => train(a, &ctx),
        Command::Classify(a) => classify(a, &ctx),
        Command::Crossval(a) => crossval(a, &ctx),
        Command::Simulate(a) => simulate(a, cli.seed, &ctx),
        Command::Bench(a) => bench(a, &ctx),
        Command::Serve(a) => serve(a, &ctx),
    }
}

fn convert(a: &ConvertArgs, ctx: &Ctx) -> Result<(), CliError> {
    let mapping = match a.mapping.as_str() {
        "cmu" => JointMapping::cmu(),
        "identity" => JointMapping::identity(),
        path => JointMapping::load(Path::new(path))?,
    };
    let options = ConvertOptions { scale: a.scale, fps_override: a.fps_override };
    std::fs::create_dir_all(&a.output).map_err(|e| CliError::io(&a.output, e))?;
    let mut ids = Vec::new();
    for file in io::expand_inputs(&a.input, "bvh")? {
        let text = std::fs::read_to_string(&file).map_err(|e| CliError::io(&file, e))?;
        let id = file.file_stem().unwrap_or_default().to_string_lossy().to_string();
        let gait = bvh_to_gait(&text, &mapping, &options, &id, &a.source)
            .map_err(|e| CliError::new("mocap", format!("{}: {e}", file.display())))?;
        save_gait(&gait, &a.output.join(format!("{id}.json")))?;
        ids.push(id);
    }
    write_meta(&a.output, "convert", ctx.seed, ctx.deterministic, json!({ "gaits": ids, "mapping": a.mapping, "scale": a.scale, "fps_override": a.fps_override }))
}

fn features(a: &FeaturesArgs, ctx: &Ctx) -> Result<(), CliError> {
    let rows = io::load_gaits(&a.input)?
        .iter()
        .map(|g| {
            extract_features(g)
                .map(|f| (g.id.clone(), f))
                .map_err(|e| CliError::new("features", format!("gait `{}`: {e}", g.id)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    write_features_csv(io::create(&a.output)?, &rows)?;
    write_meta(&a.output, "features", ctx.seed, ctx.deterministic, json!({ "gaits": rows.len() }))
}

fn label(a: &LabelArgs, ctx: &Ctx) -> Result<(), CliError> {
    let records = io::load_responses(&a.input)?;
    let agg = aggregate_responses(&records);
    for g in &agg.incomplete {
        log::warn!("gait `{}` skipped: no ratings for {:?}", g.gait_id, g.missing);
    }
    let (axis, explained) = match a.axis.as_str() {
        "pca" => {
            let pca = pca_dominance_axis(&agg.complete)?;
            (ScoringAxis::from(&pca), Some(pca.explained_variance))
        }
        _ => (ScoringAxis::default(), None),
    };
    let (mapping, labels) = label_corpus(&agg.complete, &axis)?;
    write_labels_csv(io::create(&a.output)?, &labels)?;
    if let Some(path) = &a.mapping {
        io::write_string(path, &serde_json::to_string_pretty(&mapping).expect("mapping serialises"))?;
    }
    let reliability = split_half_error(&records, ctx.seed);
    let counts: Vec<(DominanceLabel, usize)> =
        DominanceLabel::ALL.iter().map(|&l| (l, labels.iter().filter(|g| g.label5 == l).count())).collect();
    write_meta(
        &a.output,
        "label",
        ctx.seed,
        ctx.deterministic,
        json!({
            "gaits": labels.len(),
            "incomplete": agg.incomplete.iter().map(|g| &g.gait_id).collect::<Vec<_>>(),
            "axis": axis.coefficients,
            "explained_variance": explained,
            "label_counts": counts,
            "split_half_error_percent": reliability.per_adjective,
            "split_half_average_percent": reliability.average,
        }),
    )
}

/// Features paired with class indices, in features-file order.
fn training_set(features: &Path, labels: &Path, set: LabelSet) -> Result<(Vec<GaitFeatures>, Vec<usize>), CliError> {
    let feats = io::load_features(features)?;
    let labels = io::load_labels(labels)?;
    let by_id: std::collections::HashMap<&str, DominanceLabel> = labels.iter().map(|l| (l.gait_id.as_str(), l.label5)).collect();
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (id, f) in feats {
        match by_id.get(id.as_str()) {
            Some(&l) => {
                y.push(set.class_of(l));
                x.push(f);
            }
            None => log::warn!("gait `{id}` has features but no label; skipped"),
        }
    }
    if x.is_empty() {
        return Err(CliError::new("classifier", "no gait has both features and a label"));
    }
    Ok((x, y))
}

fn parse_grid(spec: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let mut cs = DEFAULT_C_GRID.to_vec();
    let mut gammas = DEFAULT_GAMMA_GRID.to_vec();
    for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, values) = part.split_once('=').ok_or_else(|| CliError::usage(format!("grid part `{part}` lacks `=`")))?;
        let values = values
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| CliError::usage(format!("grid value `{v}` is not a number"))))
            .collect::<Result<Vec<_>, _>>()?;
        match key.trim() {
            "c" | "C" => cs = values,
            "gamma" => gammas = values,
            other => return Err(CliError::usage(format!("unknown grid key `{other}`"))),
        }
    }
    Ok((cs, gammas))
}

fn hyperparams(m: &ModelArgs, x: &[GaitFeatures], y: &[usize], seed: u64) -> Result<(SvmHyperParams, Option<GridSearchResult>), CliError> {
    let base = SvmHyperParams::new(m.c, m.gamma);
    base.validate()?;
    let Some(spec) = &m.grid else {
        return Ok((base, None));
    };
    let (cs, gammas) = parse_grid(spec)?;
    let rows: Vec<&[f64]> = x.iter().map(|f| f.as_slice()).collect();
    let result = grid_search(&rows, y, m.levels, &cs, &gammas, m.inner_k, seed, &base)?;
    Ok((result.best, Some(result)))
}

fn train(a: &TrainArgs, ctx: &Ctx) -> Result<(), CliError> {
    let (x, y) = training_set(&a.features, &a.labels, a.model.levels)?;
    let mut rng = ctx.rng();
    let (params, grid) = hyperparams(&a.model, &x, &y, rng.next_u64())?;
    let model = OvrModel::train(&x, &y, a.model.levels, &params, rng.next_u64())?;
    if !model.metadata.converged {
        log::warn!("SMO hit its pass limit for at least one class");
    }
    save_model(&a.output, &model)?;
    write_meta(&a.output, "train", ctx.seed, ctx.deterministic, json!({ "samples": x.len(), "params": params, "grid": grid, "training": model.metadata }))
}

fn classify(a: &ClassifyArgs, ctx: &Ctx) -> Result<(), CliError> {
    let model = load_model(&a.model)?;
    let mapping: Option<DominanceMapping> = match &a.mapping {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            Some(serde_json::from_str(&text).map_err(|e| CliError::new("mapping", format!("{}: {e}", p.display())))?)
        }
        None => None,
    };
    let mut out = String::new();
    for gait in io::load_gaits(&a.input)? {
        let c = classify_gait(&gait, &model, mapping.as_ref())?;
        out.push_str(&serde_json::to_string(&c).expect("classification serialises"));
        out.push('\n');
    }
    match &a.output {
        Some(path) => {
            io::write_string(path, &out)?;
            write_meta(path, "classify", ctx.seed, ctx.deterministic, json!({ "model": a.model }))
        }
        None => std::io::stdout().write_all(out.as_bytes()).map_err(|e| CliError::new("io", e.to_string())),
    }
}

#[derive(Serialize)]
struct CrossvalSummary {
    levels: usize,
    samples: usize,
    params: SvmHyperParams,
    grid: Option<GridSearchResult>,
    /// Accuracy of always predicting the most frequent class.
    majority_baseline: f64,
    /// Five-level predictions scored after collapsing to three levels.
    three_level_accuracy: f64,
    cv: CvReport,
}

fn crossval(a: &CrossvalArgs, ctx: &Ctx) -> Result<(), CliError> {
    let set = a.model.levels;
    let (x, y) = training_set(&a.features, &a.labels, set)?;
    let mut rng = ctx.rng();
    let (params, grid) = hyperparams(&a.model, &x, &y, rng.next_u64())?;
    let rows: Vec<&[f64]> = x.iter().map(|f| f.as_slice()).collect();
    let learner = SvmLearner { params, label_set: set };
    let config = CvConfig { k: a.k, iterations: a.iterations, seed: rng.next_u64() };
    let cv = cross_validate(&learner, &rows, &y, set.class_count(), config)?;
    let mut counts = vec![0usize; set.class_count()];
    for &c in &y {
        counts[c] += 1;
    }
    let majority_baseline = *counts.iter().max().expect("classes") as f64 / y.len() as f64;
    let three_level_accuracy = match set {
        LabelSet::Five => cv.confusion.collapse_to_three().accuracy(),
        LabelSet::Three => cv.confusion.accuracy(),
    };
    let summary = CrossvalSummary { levels: set.class_count(), samples: y.len(), params, grid, majority_baseline, three_level_accuracy, cv };
    let mut text = serde_json::to_string_pretty(&summary).expect("report serialises");
    text.push('\n');
    match &a.output {
        Some(path) => {
            io::write_string(path, &text)?;
            write_meta(path, "crossval", ctx.seed, ctx.deterministic, json!({ "k": a.k, "iterations": a.iterations }))
        }
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::new("io", e.to_string())),
    }
}

fn load_library(a: &LibraryArgs) -> Result<GaitLibrary, CliError> {
    let labels_path = a.labels.as_ref().ok_or_else(|| CliError::usage("--labels is required with --gaits"))?;
    let gaits = io::load_gaits(&a.gaits)?;
    Ok(GaitLibrary::from_labels(gaits, &io::load_labels(labels_path)?)?)
}

/// Walkers labelled directly by the dominance value that generated them.
fn synthetic_library(n: usize, seed: u64) -> Result<GaitLibrary, CliError> {
    let gaits = synthetic_corpus(n, seed)
        .into_iter()
        .map(|p| score_to_label(p.dominance.clamp(-1.0, 1.0)).map(|l| (p.gait, l)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GaitLibrary::new(gaits)?)
}

fn simulate(a: &SimulateArgs, seed: Option<u64>, ctx: &Ctx) -> Result<(), CliError> {
    let mut config = SceneConfig::load(&a.input)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    let library = load_library(&a.library)?;
    let mut scene = Scene::from_config(&config, &library)?;
    let frames = a.frames.unwrap_or(config.frames);
    let rows = scene.run(frames, config.dt)?;
    write_trace_csv(io::create(&a.output)?, &rows)?;
    write_meta(&a.output, "simulate", config.seed, ctx.deterministic, json!({ "frames": frames, "dt": config.dt, "characters": config.characters.len() }))
}

fn bench(a: &BenchArgs, ctx: &Ctx) -> Result<(), CliError> {
    let library = if a.library.gaits.is_empty() { synthetic_library(a.synthetic, ctx.seed)? } else { load_library(&a.library)? };
    let config = BenchConfig { rows: a.rows.clone(), frames: a.frames, seed: ctx.seed, ..BenchConfig::default() };
    let rows = run_benchmark(&library, &config)?;
    println!("{:>10}  {:>8}  {:>22}  {:>19}", "characters", "frames", "without dominance (ms)", "with dominance (ms)");
    for r in &rows {
        println!("{:>10}  {:>8}  {:>22.4}  {:>19.4}", r.characters, r.frames, r.without_dominance_ms, r.with_dominance_ms);
    }
    if let Some(path) = &a.output {
        let mut text = String::from("characters,frames,without_dominance_ms,with_dominance_ms\n");
        for r in &rows {
            text.push_str(&format!("{},{},{},{}\n", r.characters, r.frames, r.without_dominance_ms, r.with_dominance_ms));
        }
        io::write_string(path, &text)?;
        write_meta(path, "bench", ctx.seed, ctx.deterministic, json!({ "library": library.len(), "frames": config.frames.max(1000) }))?;
    }
    Ok(())
}

fn serve(a: &ServeArgs, ctx: &Ctx) -> Result<(), CliError> {
    let config = gaitdom_service::ServiceConfig {
        data_dir: a.data_dir.clone(),
        port: a.port,
        server_seed: ctx.seed,
        policy: gaitdom_service::PolicyConfig::default(),
    };
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| CliError::new("io", e.to_string()))?;
    Ok(runtime.block_on(gaitdom_service::serve(config))?)
}
