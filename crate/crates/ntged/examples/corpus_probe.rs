// Scratch probe for picking frozen-corpus parameters.

use ntged::bench::*;
use ntged::ged::Method;
use std::time::Instant;

fn main() {
    let corpus = SyntheticSpec {
        count: 30,
        min_vertices: 8,
        max_vertices: 12,
        edge_prob: 0.25,
        vertex_labels: 3,
        edge_labels: 2,
        seed: 42,
    };
    let spec = ExperimentSpec {
        source: DatasetSource::Synthetic(corpus),
        pairs: 100,
        seed: 7,
        methods: vec![
            MethodSpec::new(Method::Nt, 5),
            MethodSpec::new(Method::Nt, 1),
            MethodSpec::new(Method::Bgm, 0),
        ],
        exact: true,
        workers: 4,
        timing_runs: 1,
    };
    let t0 = Instant::now();
    let report = run_experiment(&spec).unwrap();
    println!("elapsed {:?}", t0.elapsed());
    for s in &report.summaries {
        println!(
            "{:>8}: R = {:?} (~{:.4}) over {} pairs, zero-skip {}, guard-skip {}",
            s.method.label(),
            s.mean_relative_error.map(|c| c.to_string()),
            s.mean_relative_error
                .map(|c| *c.numer() as f64 / *c.denom() as f64)
                .unwrap_or(f64::NAN),
            s.pairs_with_error,
            s.skipped_zero_distance,
            s.skipped_size_guard,
        );
    }
}
