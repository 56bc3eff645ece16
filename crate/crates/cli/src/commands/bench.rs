//! `bench-opt`: time/memory/fitness table for the three optimizers over the
//! benchmark zoo.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use hawkwolf::optimizer::{
    g_hho_optimize, run_gwo, run_hho, Benchmark, EvalMode, RunConfig, SearchSpace,
};
use hawkwolf::util::peak_rss_bytes;

use crate::commands::{out_file, write_text};
use crate::config::BenchSection;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
enum Algorithm {
    Hho,
    Gwo,
    GHho,
}

impl Algorithm {
    fn name(&self) -> &'static str {
        match self {
            Algorithm::Hho => "HHO",
            Algorithm::Gwo => "GWO",
            Algorithm::GHho => "G-HHO",
        }
    }

    fn run(
        &self,
        config: &RunConfig,
        space: &SearchSpace<f64>,
        bench: &Benchmark,
    ) -> hawkwolf::Result<f64> {
        let best = match self {
            Algorithm::Hho => run_hho(config, space, bench)?.0,
            Algorithm::Gwo => run_gwo(config, space, bench)?.0,
            Algorithm::GHho => g_hho_optimize(config, space, bench)?.0,
        };
        best.fitness()
    }
}

#[derive(Serialize)]
struct BenchRow {
    algorithm: &'static str,
    function: &'static str,
    seeds: u64,
    median_best_fitness: f64,
    mean_execution_seconds: f64,
    peak_memory_mb: f64,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

pub fn run(section: &BenchSection, seed_base: u64, out_dir: &Path) -> Result<(), CliError> {
    if section.seeds == 0 {
        return Err(CliError::usage("bench needs at least one seed"));
    }
    let functions: Vec<Benchmark> = section
        .functions
        .iter()
        .map(|name| {
            Benchmark::from_name(name)
                .ok_or_else(|| CliError::usage(format!("unknown benchmark function {name:?}")))
        })
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::new();
    for algorithm in [Algorithm::Hho, Algorithm::Gwo, Algorithm::GHho] {
        for bench in &functions {
            let space = SearchSpace::symmetric(section.dim, bench.default_bound())
                .map_err(CliError::from)?;
            let mut finals = Vec::with_capacity(section.seeds as usize);
            let mut seconds = Vec::with_capacity(section.seeds as usize);
            for seed_offset in 0..section.seeds {
                let config = RunConfig {
                    population: section.population,
                    max_iterations: section.max_iterations,
                    seed: seed_base.wrapping_add(seed_offset),
                    eval_mode: EvalMode::Parallel,
                    ..RunConfig::default()
                };
                let start = Instant::now();
                finals.push(algorithm.run(&config, &space, bench)?);
                seconds.push(start.elapsed().as_secs_f64());
            }
            let peak_mb = peak_rss_bytes().map_or(f64::NAN, |b| b as f64 / (1024.0 * 1024.0));
            rows.push(BenchRow {
                algorithm: algorithm.name(),
                function: bench.name(),
                seeds: section.seeds,
                median_best_fitness: median(&mut finals),
                mean_execution_seconds: seconds.iter().sum::<f64>() / seconds.len() as f64,
                peak_memory_mb: peak_mb,
            });
        }
    }

    let mut table = String::new();
    writeln!(
        table,
        "{:<8} {:<12} {:>20} {:>16} {:>12}",
        "Algo", "Function", "Median best fitness", "Mean time (s)", "Memory (MB)"
    )
    .expect("string write");
    for row in &rows {
        writeln!(
            table,
            "{:<8} {:<12} {:>20.6e} {:>16.3} {:>12.3}",
            row.algorithm,
            row.function,
            row.median_best_fitness,
            row.mean_execution_seconds,
            row.peak_memory_mb
        )
        .expect("string write");
    }
    print!("{table}");

    let mut csv = String::from(
        "algorithm,function,seeds,median_best_fitness,mean_execution_seconds,peak_memory_mb\n",
    );
    for row in &rows {
        writeln!(
            csv,
            "{},{},{},{},{:.3},{:.3}",
            row.algorithm,
            row.function,
            row.seeds,
            row.median_best_fitness,
            row.mean_execution_seconds,
            row.peak_memory_mb
        )
        .expect("string write");
    }
    write_text(&out_file(out_dir, "bench_opt.csv")?, &csv)?;
    let json = serde_json::to_string_pretty(&rows)
        .map_err(|e| CliError::Internal(format!("bench serialization: {e}")))?;
    write_text(&out_file(out_dir, "bench_opt.json")?, &json)?;
    Ok(())
}
