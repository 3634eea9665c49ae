//! Human-readable summary of a `generate` output directory.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use gatemplate::ga::display;

use crate::pipeline::{POPULATION_FILE, STATS_FILE};
use crate::CliError;

const BARS: [char; 8] = ['▁', '▂', '▃', '▄', '▅', '▆', '▇', '█'];

#[derive(Debug, Clone, PartialEq)]
pub struct Ranked {
    pub surface: String,
    pub signature: String,
    pub fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub generation: usize,
    pub mean_fitness: f64,
    pub max_fitness: f64,
    pub mean_len: f64,
    pub std_len: f64,
}

fn corrupt(path: &Path, line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{}:{line}: {msg}", path.display()))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}

pub fn read_population(path: &Path) -> Result<Vec<Ranked>, CliError> {
    let text = read(path)?;
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split('\t').collect();
            let [surface, signature, fitness] = fields[..] else {
                return Err(corrupt(path, i + 1, "expected 3 tab-separated fields"));
            };
            let fitness = fitness.parse().map_err(|e| corrupt(path, i + 1, e))?;
            Ok(Ranked {
                surface: surface.to_string(),
                signature: signature.to_string(),
                fitness,
            })
        })
        .collect()
}

pub fn read_stats(path: &Path) -> Result<Vec<StatsRow>, CliError> {
    let text = read(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(gatemplate::ga::STATS_HEADER) {
        return Err(corrupt(path, 1, "unexpected header"));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 5 {
                return Err(corrupt(path, i + 2, "expected 5 columns"));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| corrupt(path, i + 2, e));
            Ok(StatsRow {
                generation: f[0].parse().map_err(|e| corrupt(path, i + 2, e))?,
                mean_fitness: num(f[1])?,
                max_fitness: num(f[2])?,
                mean_len: num(f[3])?,
                std_len: num(f[4])?,
            })
        })
        .collect()
}

/// One block character per value, scaled between the series' extremes.
pub fn sparkline(values: &[f64]) -> String {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values
        .iter()
        .map(|&v| {
            if hi > lo {
                let level = ((v - lo) / (hi - lo) * (BARS.len() - 1) as f64).round() as usize;
                BARS[level.min(BARS.len() - 1)]
            } else {
                BARS[0]
            }
        })
        .collect()
}

fn trajectory(out: &mut String, label: &str, values: &[f64]) {
    let (Some(first), Some(last)) = (values.first(), values.last()) else {
        return;
    };
    let _ = writeln!(
        out,
        "{label:<13} {first:.4} {} {last:.4}",
        sparkline(values)
    );
}

/// Top `k` chromosomes (factors shown as bare POS) and the fitness and length
/// trajectories.
pub fn report(dir: &Path, k: usize) -> Result<String, CliError> {
    let population = read_population(&dir.join(POPULATION_FILE))?;
    let stats = read_stats(&dir.join(STATS_FILE))?;
    let mut out = String::new();
    let shown = k.min(population.len());
    let _ = writeln!(out, "top {shown} of {} chromosomes", population.len());
    for (i, c) in population.iter().take(k).enumerate() {
        let _ = writeln!(
            out,
            "{:>4}  {:.6}  {}  [{}]",
            i + 1,
            c.fitness,
            display(&c.surface),
            c.signature
        );
    }
    if let (Some(first), Some(last)) = (stats.first(), stats.last()) {
        let _ = writeln!(
            out,
            "\ngenerations {}..{}",
            first.generation, last.generation
        );
        let series = |f: fn(&StatsRow) -> f64| stats.iter().map(f).collect::<Vec<_>>();
        trajectory(&mut out, "mean fitness", &series(|s| s.mean_fitness));
        trajectory(&mut out, "max fitness", &series(|s| s.max_fitness));
        trajectory(&mut out, "mean length", &series(|s| s.mean_len));
        trajectory(&mut out, "length std", &series(|s| s.std_len));
    }
    Ok(out)
}
