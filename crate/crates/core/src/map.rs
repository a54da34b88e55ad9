//! Pairwise distance matrices over a batch of elections and their 2D
//! embedding by stress minimization.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::approx_c;
use crate::error::{Error, Result};
use crate::exact::id_exact;
use crate::limits::Limits;
use crate::metrics::MetricKind;
use crate::model::{DistanceResult, Election};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exact,
    Approx,
    /// Exact while the instance fits the limits, the `m`-approximation otherwise.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub labels: Vec<String>,
    #[serde(with = "metric_name")]
    pub metric: MetricKind,
    pub values: Vec<Vec<u64>>,
    pub tags: Vec<Vec<String>>,
}

mod metric_name {
    use super::MetricKind;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &MetricKind, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(m.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<MetricKind, D::Error> {
        let name = String::deserialize(d)?;
        name.parse().map_err(D::Error::custom)
    }
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix serializes")
    }

    /// Parses and validates shape, symmetry and the zero diagonal.
    pub fn from_json(text: &str) -> Result<Self> {
        let matrix: DistanceMatrix =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        matrix.check()?;
        Ok(matrix)
    }

    fn check(&self) -> Result<()> {
        let n = self.labels.len();
        if self.values.len() != n || self.values.iter().any(|r| r.len() != n) {
            return Err(Error::size("distance matrix", self.values.len(), n));
        }
        if self.tags.len() != n || self.tags.iter().any(|r| r.len() != n) {
            return Err(Error::size("tag matrix", self.tags.len(), n));
        }
        for i in 0..n {
            if self.values[i][i] != 0 {
                return Err(Error::InvalidParameter(format!(
                    "nonzero diagonal entry at {i}"
                )));
            }
            for j in 0..i {
                if self.values[i][j] != self.values[j][i] {
                    return Err(Error::InvalidParameter(format!(
                        "entries ({i}, {j}) and ({j}, {i}) differ"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whitespace-aligned table with labels on both axes.
    pub fn to_table(&self) -> String {
        let width = self
            .values
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .chain(self.labels.iter().map(|l| l.len()))
            .max()
            .unwrap_or(1);
        let mut out = String::new();
        let _ = write!(out, "{:width$}", "");
        for l in &self.labels {
            let _ = write!(out, " {l:>width$}");
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.values) {
            let _ = write!(out, "{l:width$}");
            for v in row {
                let _ = write!(out, " {v:>width$}");
            }
            out.push('\n');
        }
        out
    }
}

fn solve(
    e: &Election,
    f: &Election,
    metric: MetricKind,
    strategy: Strategy,
    limits: &Limits,
) -> Result<DistanceResult> {
    match (strategy, metric) {
        (Strategy::Exact, _) | (_, MetricKind::Discrete) => id_exact(e, f, metric, limits),
        (Strategy::Approx, _) => approx_c(e, f, metric),
        (Strategy::Auto, _) => match id_exact(e, f, metric, limits) {
            Err(Error::CapExceeded { .. }) => approx_c(e, f, metric),
            other => other,
        },
    }
}

/// Distances between every pair of elections. Pairs run in parallel and are
/// written back by position.
pub fn pairwise_matrix(
    labels: Vec<String>,
    elections: &[Election],
    metric: MetricKind,
    strategy: Strategy,
    limits: &Limits,
) -> Result<DistanceMatrix> {
    if labels.len() != elections.len() {
        return Err(Error::size("labels", labels.len(), elections.len()));
    }
    if let Some(first) = elections.first() {
        if elections.iter().any(|e| first.check_same_shape(e).is_err()) {
            return Err(Error::HeterogeneousSizes);
        }
    }
    let n = elections.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<DistanceResult>> = pairs
        .par_iter()
        .map(|&(i, j)| solve(&elections[i], &elections[j], metric, strategy, limits))
        .collect();
    let mut values = vec![vec![0; n]; n];
    let mut tags = vec![vec!["exact".to_string(); n]; n];
    for (&(i, j), r) in pairs.iter().zip(results) {
        let r = r?;
        values[i][j] = r.value;
        values[j][i] = r.value;
        tags[i][j] = r.tag();
        tags[j][i] = r.tag();
    }
    Ok(DistanceMatrix {
        labels,
        metric,
        values,
        tags,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub labels: Vec<String>,
    pub points: Vec<(f64, f64)>,
    /// Normalized stress of `points`.
    pub stress: f64,
    /// Stress after initialization and after each accepted step.
    pub stress_log: Vec<f64>,
    /// All target distances were zero, so every point coincides.
    pub degenerate: bool,
}

impl Embedding {
    /// `label,x,y` rows under a header, coordinates to 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,x,y\n");
        for (label, &(x, y)) in self.labels.iter().zip(&self.points) {
            let _ = writeln!(out, "{},{},{}", csv_field(label), sig9(x), sig9(y));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Formats like C's `%.9g`.
fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        }
    } else {
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!(
            "{mantissa}e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

/// Places the elections in the plane by gradient descent on normalized
/// stress `Σ (‖p_i − p_j‖ − D_ij)² / Σ D_ij²`.
///
/// Points start uniformly in the unit square scaled by the mean target
/// distance. A step that would raise stress is halved until it does not, so
/// the logged stress never increases.
pub fn embed_2d(matrix: &DistanceMatrix, seed: u64, iterations: usize) -> Result<Embedding> {
    matrix.check()?;
    let n = matrix.len();
    if n < 2 {
        return Err(Error::TooFewElections { needed: 2, got: n });
    }
    let target: Vec<Vec<f64>> = matrix
        .values
        .iter()
        .map(|row| row.iter().map(|&v| v as f64).collect())
        .collect();
    let mut norm = 0.0;
    let mut sum = 0.0;
    for (i, row) in target.iter().enumerate() {
        for &d in &row[i + 1..] {
            norm += d * d;
            sum += d;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if norm == 0.0 {
        let p = (rng.gen::<f64>(), rng.gen::<f64>());
        return Ok(Embedding {
            labels: matrix.labels.clone(),
            points: vec![p; n],
            stress: 0.0,
            stress_log: vec![0.0],
            degenerate: true,
        });
    }
    let scale = sum / (n * (n - 1) / 2) as f64;
    let mut points: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen::<f64>() * scale, rng.gen::<f64>() * scale))
        .collect();

    let mut stress = stress_of(&points, &target) / norm;
    let mut log = vec![stress];
    let mut step = 0.5;
    for _ in 0..iterations {
        let grad = gradient(&points, &target);
        let mut accepted = false;
        while step > 1e-12 {
            let trial: Vec<(f64, f64)> = points
                .iter()
                .zip(&grad)
                .map(|(&(x, y), &(gx, gy))| (x - step * gx, y - step * gy))
                .collect();
            let s = stress_of(&trial, &target) / norm;
            if s <= stress {
                points = trial;
                stress = s;
                accepted = true;
                step *= 1.25;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        log.push(stress);
        if stress == 0.0 {
            break;
        }
    }
    Ok(Embedding {
        labels: matrix.labels.clone(),
        points,
        stress,
        stress_log: log,
        degenerate: false,
    })
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

fn stress_of(points: &[(f64, f64)], target: &[Vec<f64>]) -> f64 {
    let mut s = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let r = dist(points[i], points[j]) - target[i][j];
            s += r * r;
        }
    }
    s
}

// gradient of the unnormalized stress halved, each pair weighted by its residual
fn gradient(points: &[(f64, f64)], target: &[Vec<f64>]) -> Vec<(f64, f64)> {
    let n = points.len();
    let mut g = vec![(0.0, 0.0); n];
    for i in 0..n {
        for j in i + 1..n {
            let d = dist(points[i], points[j]);
            if d == 0.0 {
                continue;
            }
            let c = (d - target[i][j]) / d;
            let dx = c * (points[i].0 - points[j].0);
            let dy = c * (points[i].1 - points[j].1);
            g[i].0 += dx;
            g[i].1 += dy;
            g[j].0 -= dx;
            g[j].1 -= dy;
        }
    }
    for v in &mut g {
        v.0 /= (n - 1) as f64;
        v.1 /= (n - 1) as f64;
    }
    g
}
