//! Synthetic dataset generation and the experiment runner: samples graph
//! pairs, computes approximate (and optionally exact) distances, and
//! reports per-pair records plus per-method aggregates as CSV.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cost::{Cost, EditCostModel, LevelWeights};
use crate::dataset::{parse_graphs, Dataset, ParseError};
use crate::exact::{exact_ged, ExactError, EXACT_VERTEX_LIMIT};
use crate::ged::{approx_ged, ApproxConfig, GedError, Method, PhaseTimings};
use crate::graph::{GraphError, LabelDictionary, LabeledGraph};
use crate::sdted::{CacheScope, CacheStats, SdtedCache};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("requested {requested} pairs but only {available} distinct ordered pairs exist")]
    NotEnoughPairs { requested: usize, available: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ged(#[from] GedError),
}

/// Parameters of the seeded random-graph generator: `count` graphs with
/// uniformly drawn vertex counts, independent edge inclusion, and
/// uniform label draws.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub count: usize,
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub edge_prob: f64,
    pub vertex_labels: usize,
    pub edge_labels: usize,
    pub seed: u64,
}

/// Deterministic per seed: the same spec always yields the same dataset.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset, BenchError> {
    if spec.min_vertices > spec.max_vertices {
        return Err(BenchError::InvalidSpec(format!(
            "min_vertices {} > max_vertices {}",
            spec.min_vertices, spec.max_vertices
        )));
    }
    if !(0.0..=1.0).contains(&spec.edge_prob) {
        return Err(BenchError::InvalidSpec(format!(
            "edge_prob {} outside [0, 1]",
            spec.edge_prob
        )));
    }
    if spec.count > 0 && spec.max_vertices > 0 && spec.vertex_labels == 0 {
        return Err(BenchError::InvalidSpec("vertex_labels must be positive".into()));
    }
    if spec.edge_prob > 0.0 && spec.max_vertices > 1 && spec.edge_labels == 0 {
        return Err(BenchError::InvalidSpec("edge_labels must be positive".into()));
    }

    let mut labels = LabelDictionary::new();
    for i in 0..spec.vertex_labels {
        labels.intern_vertex_label(&format!("a{i}"));
    }
    for i in 0..spec.edge_labels {
        labels.intern_edge_label(&format!("x{i}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut graphs = Vec::with_capacity(spec.count);
    let mut graph_ids = Vec::with_capacity(spec.count);
    for id in 0..spec.count {
        let n = rng.gen_range(spec.min_vertices..=spec.max_vertices);
        let vertex_labels: Vec<u32> = (0..n)
            .map(|_| rng.gen_range(0..spec.vertex_labels) as u32)
            .collect();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(spec.edge_prob) {
                    edges.push((u, v, rng.gen_range(0..spec.edge_labels) as u32));
                }
            }
        }
        graphs.push(LabeledGraph::new(vertex_labels, edges)?);
        graph_ids.push(id.to_string());
    }
    Ok(Dataset {
        graphs,
        graph_ids,
        labels,
    })
}

#[derive(Debug, Clone)]
pub enum DatasetSource {
    File(PathBuf),
    Synthetic(SyntheticSpec),
}

/// One method configuration to evaluate.
#[derive(Debug, Clone)]
pub struct MethodSpec {
    pub method: Method,
    pub height: u32,
    pub weight: Cost,
    pub cache: CacheScope,
}

impl MethodSpec {
    pub fn new(method: Method, height: u32) -> Self {
        MethodSpec {
            method,
            height,
            weight: LevelWeights::half().base(),
            cache: CacheScope::PerPair,
        }
    }

    fn approx_config(&self) -> ApproxConfig {
        let mut cfg = ApproxConfig::new(self.method, self.height);
        cfg.weights = LevelWeights::new(self.weight).expect("validated on spec construction");
        cfg.cache = self.cache;
        cfg
    }

    /// Label used in the CSV and the report.
    pub fn label(&self) -> String {
        match self.method {
            Method::Bgm => "bgm".to_string(),
            m => format!("{}_h{}", m.name(), self.height),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub source: DatasetSource,
    pub pairs: usize,
    pub seed: u64,
    pub methods: Vec<MethodSpec>,
    pub exact: bool,
    pub workers: usize,
    pub timing_runs: u32,
}

impl ExperimentSpec {
    pub fn new(source: DatasetSource, pairs: usize, seed: u64) -> Self {
        ExperimentSpec {
            source,
            pairs,
            seed,
            methods: Vec::new(),
            exact: false,
            workers: 1,
            timing_runs: 5,
        }
    }
}

/// Why a pair contributes no relative error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactOutcome {
    Computed,
    /// Exact distance is zero; relative error is undefined there.
    ZeroDistance,
    /// The pair exceeded the exact solver's size guard.
    GuardTripped,
    Disabled,
}

#[derive(Debug, Clone)]
pub struct PairRecord {
    pub pair_index: usize,
    pub g1: usize,
    pub g2: usize,
    pub g1_id: String,
    pub g2_id: String,
    pub method: MethodSpec,
    pub bound: Cost,
    pub exact: Option<Cost>,
    pub relative_error: Option<Cost>,
    pub timings: PhaseTimings,
    pub cache_stats: CacheStats,
}

#[derive(Debug, Clone)]
pub struct MethodSummary {
    pub method: MethodSpec,
    pub mean_relative_error: Option<Cost>,
    pub pairs_with_error: usize,
    pub skipped_zero_distance: usize,
    pub skipped_size_guard: usize,
    pub mean_timings: PhaseTimings,
    pub total_cache_stats: CacheStats,
}

#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub records: Vec<PairRecord>,
    pub summaries: Vec<MethodSummary>,
    pub pairs: Vec<(usize, usize)>,
}

impl ErrorReport {
    pub fn summary_for(&self, label: &str) -> Option<&MethodSummary> {
        self.summaries.iter().find(|s| s.method.label() == label)
    }
}

/// Uniformly samples `count` distinct ordered pairs (i, j), i != j.
fn sample_pairs(
    n: usize,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(usize, usize)>, BenchError> {
    let available = n.saturating_mul(n.saturating_sub(1));
    if count > available {
        return Err(BenchError::NotEnoughPairs {
            requested: count,
            available,
        });
    }
    let mut all: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let (chosen, _) = all.partial_shuffle(rng, count);
    Ok(chosen.to_vec())
}

struct PairOutcome {
    exact: Option<Cost>,
    exact_outcome: ExactOutcome,
    per_method: Vec<(Cost, PhaseTimings, CacheStats)>,
}

pub fn load_dataset(source: &DatasetSource) -> Result<Dataset, BenchError> {
    match source {
        DatasetSource::File(path) => {
            let text = std::fs::read_to_string(path)?;
            Ok(parse_graphs(&text)?)
        }
        DatasetSource::Synthetic(spec) => generate_synthetic(spec),
    }
}

/// Runs the full experiment: sampling, per-pair distances on a worker
/// pool, aggregation. Identical spec (and seed) always produces the
/// identical report up to the timing fields.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ErrorReport, BenchError> {
    let dataset = load_dataset(&spec.source)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pairs = sample_pairs(dataset.len(), spec.pairs, &mut rng)?;
    let costs = EditCostModel::uniform();

    // One shared cache per method that asked for the global scope.
    let shared_caches: Vec<Option<SdtedCache>> = spec
        .methods
        .iter()
        .map(|m| (m.cache == CacheScope::Global).then(SdtedCache::new))
        .collect();

    let outcomes: Vec<Option<PairOutcome>> = {
        let slots: Mutex<Vec<Option<PairOutcome>>> =
            Mutex::new((0..pairs.len()).map(|_| None).collect());
        let next = AtomicUsize::new(0);
        let workers = spec.workers.max(1).min(pairs.len().max(1));
        let run_pair = |&(i, j): &(usize, usize)| -> Result<PairOutcome, BenchError> {
            let g = &dataset.graphs[i];
            let h = &dataset.graphs[j];
            let (exact, exact_outcome) = if !spec.exact {
                (None, ExactOutcome::Disabled)
            } else if g.vertex_count() + h.vertex_count() > EXACT_VERTEX_LIMIT {
                (None, ExactOutcome::GuardTripped)
            } else {
                match exact_ged(g, h, &costs) {
                    Ok(d) if d.is_zero() => (Some(d), ExactOutcome::ZeroDistance),
                    Ok(d) => (Some(d), ExactOutcome::Computed),
                    Err(ExactError::TooLarge(..)) => (None, ExactOutcome::GuardTripped),
                    Err(e) => panic!("exact solver failed unexpectedly: {e}"),
                }
            };
            let mut per_method = Vec::with_capacity(spec.methods.len());
            for (m, shared) in spec.methods.iter().zip(&shared_caches) {
                let cfg = m.approx_config();
                let mut kept: Option<(Cost, CacheStats)> = None;
                let mut sums = PhaseTimings::default();
                let runs = spec.timing_runs.max(1);
                for _ in 0..runs {
                    let r = approx_ged(g, h, &cfg, shared.as_ref())?;
                    sums.trees_us += r.timings.trees_us;
                    sums.matrix_us += r.timings.matrix_us;
                    sums.lap_us += r.timings.lap_us;
                    sums.path_us += r.timings.path_us;
                    match &kept {
                        None => kept = Some((r.upper_bound, r.cache_stats)),
                        Some((b, _)) => debug_assert_eq!(*b, r.upper_bound),
                    }
                }
                let (bound, stats) = kept.expect("at least one run");
                let mean = PhaseTimings {
                    trees_us: sums.trees_us / runs as u64,
                    matrix_us: sums.matrix_us / runs as u64,
                    lap_us: sums.lap_us / runs as u64,
                    path_us: sums.path_us / runs as u64,
                };
                per_method.push((bound, mean, stats));
            }
            Ok(PairOutcome {
                exact,
                exact_outcome,
                per_method,
            })
        };

        std::thread::scope(|scope| -> Result<(), BenchError> {
            let mut handles = Vec::new();
            for _ in 0..workers {
                handles.push(scope.spawn(|| -> Result<(), BenchError> {
                    loop {
                        let at = next.fetch_add(1, Ordering::Relaxed);
                        if at >= pairs.len() {
                            return Ok(());
                        }
                        let outcome = run_pair(&pairs[at])?;
                        slots.lock().unwrap()[at] = Some(outcome);
                    }
                }));
            }
            for handle in handles {
                handle.join().expect("worker panicked")?;
            }
            Ok(())
        })?;
        slots.into_inner().unwrap()
    };

    let mut records = Vec::new();
    let mut per_method_acc: BTreeMap<usize, (Cost, usize, usize, usize, PhaseTimings, CacheStats)> =
        (0..spec.methods.len())
            .map(|m| {
                (
                    m,
                    (
                        Cost::zero(),
                        0usize,
                        0usize,
                        0usize,
                        PhaseTimings::default(),
                        CacheStats::default(),
                    ),
                )
            })
            .collect();

    for (idx, (&(i, j), outcome)) in pairs.iter().zip(&outcomes).enumerate() {
        let outcome = outcome.as_ref().expect("all pairs processed");
        for (m, (bound, timings, stats)) in outcome.per_method.iter().enumerate() {
            let relative_error = match (outcome.exact_outcome, outcome.exact) {
                (ExactOutcome::Computed, Some(d)) => Some((*bound - d).abs() / d),
                _ => None,
            };
            let acc = per_method_acc.get_mut(&m).unwrap();
            if let Some(r) = relative_error {
                acc.0 += r;
                acc.1 += 1;
            }
            match outcome.exact_outcome {
                ExactOutcome::ZeroDistance => acc.2 += 1,
                ExactOutcome::GuardTripped => acc.3 += 1,
                _ => {}
            }
            acc.4.trees_us += timings.trees_us;
            acc.4.matrix_us += timings.matrix_us;
            acc.4.lap_us += timings.lap_us;
            acc.4.path_us += timings.path_us;
            acc.5.hits += stats.hits;
            acc.5.misses += stats.misses;
            acc.5.entries += stats.entries;
            records.push(PairRecord {
                pair_index: idx,
                g1: i,
                g2: j,
                g1_id: dataset.graph_ids[i].clone(),
                g2_id: dataset.graph_ids[j].clone(),
                method: spec.methods[m].clone(),
                bound: *bound,
                exact: outcome.exact,
                relative_error,
                timings: *timings,
                cache_stats: *stats,
            });
        }
    }

    let pair_count = pairs.len().max(1) as u64;
    let summaries = spec
        .methods
        .iter()
        .enumerate()
        .map(|(m, method)| {
            let (sum, used, zero, guard, t, stats) = per_method_acc[&m];
            MethodSummary {
                method: method.clone(),
                mean_relative_error: (used > 0).then(|| sum / Cost::from(used as i128)),
                pairs_with_error: used,
                skipped_zero_distance: zero,
                skipped_size_guard: guard,
                mean_timings: PhaseTimings {
                    trees_us: t.trees_us / pair_count,
                    matrix_us: t.matrix_us / pair_count,
                    lap_us: t.lap_us / pair_count,
                    path_us: t.path_us / pair_count,
                },
                total_cache_stats: stats,
            }
        })
        .collect();

    Ok(ErrorReport {
        records,
        summaries,
        pairs,
    })
}

pub const CSV_HEADER: &str = "pair_id,g1_id,g2_id,method,height,k,weight,bound,exact,rel_err,t_trees_us,t_matrix_us,t_lap_us,t_path_us,cache_hits,cache_misses";

fn method_columns(m: &MethodSpec) -> (String, String, String, String) {
    match m.method {
        Method::Bgm => (m.method.name().into(), String::new(), String::new(), String::new()),
        _ => (
            m.method.name().into(),
            m.height.to_string(),
            m.method.redundancy(m.height).unwrap().to_string(),
            m.weight.to_string(),
        ),
    }
}

/// Renders the report as CSV: one row per (pair, method) and one
/// aggregate row per method. Costs print as exact rationals.
pub fn render_csv(report: &ErrorReport) -> String {
    let mut out = String::with_capacity(64 * (report.records.len() + 8));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &report.records {
        let (name, height, k, weight) = method_columns(&r.method);
        let exact = r.exact.map(|c| c.to_string()).unwrap_or_default();
        let rel = r.relative_error.map(|c| c.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.pair_index,
            r.g1_id,
            r.g2_id,
            name,
            height,
            k,
            weight,
            r.bound,
            exact,
            rel,
            r.timings.trees_us,
            r.timings.matrix_us,
            r.timings.lap_us,
            r.timings.path_us,
            r.cache_stats.hits,
            r.cache_stats.misses,
        ));
    }
    for s in &report.summaries {
        let (name, height, k, weight) = method_columns(&s.method);
        let rel = s
            .mean_relative_error
            .map(|c| c.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "aggregate,,,{},{},{},{},,,{},{},{},{},{},{},{}\n",
            name,
            height,
            k,
            weight,
            rel,
            s.mean_timings.trees_us,
            s.mean_timings.matrix_us,
            s.mean_timings.lap_us,
            s.mean_timings.path_us,
            s.total_cache_stats.hits,
            s.total_cache_stats.misses,
        ));
    }
    out
}

/// The CSV with the four timing columns blanked, for byte-exact
/// reproducibility comparisons.
pub fn csv_without_timings(csv: &str) -> String {
    csv.lines()
        .map(|line| {
            let mut cols: Vec<&str> = line.split(',').collect();
            for t in 10..14 {
                if t < cols.len() {
                    cols[t] = "";
                }
            }
            cols.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}
