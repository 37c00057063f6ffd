use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::corpus;
use crate::error::{MsrError, Result};
use crate::msr::sqrt_integral;
use crate::quadrature::make_rule;
use crate::rng::SplitMix64;
use crate::sym::{inverse, order_unit_norm, sqrt_spectral, SymMatrix, ToleranceConfig, MAX_DIM};

use super::write_text;

/// Spectrum of the bench matrix: log-spaced over this range, so the
/// smallest eigenvalue stresses the quadrature near zero.
pub const BENCH_SPECTRUM: (f64, f64) = (1e-6, 1e2);

const MIN_TIMING: Duration = Duration::from_millis(2);

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub nodes_list: Vec<usize>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub tolerances: ToleranceConfig,
}

impl BenchConfig {
    pub fn new(dims: Vec<usize>, nodes_list: Vec<usize>) -> Self {
        Self {
            seed: super::DEFAULT_SEED,
            dims,
            nodes_list,
            out: None,
            svg: None,
            tolerances: ToleranceConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.nodes_list.is_empty() {
            return Err(MsrError::Input(
                "bench needs at least one dimension and one node count".into(),
            ));
        }
        if let Some(d) = self.dims.iter().find(|d| !(1..=MAX_DIM).contains(*d)) {
            return Err(MsrError::Input(format!("dimension {d} outside 1..={MAX_DIM}")));
        }
        if let Some(n) = self.nodes_list.iter().find(|n| **n < 2) {
            return Err(MsrError::Input(format!("node count {n} is below 2")));
        }
        self.tolerances.validate()
    }
}

/// Accuracy and cost of one square-root method on the bench matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub method: String,
    pub dim: usize,
    /// Quadrature nodes, integral method only.
    pub nodes: Option<usize>,
    /// Iterations, Denman–Beavers only.
    pub iterations: Option<usize>,
    /// Seconds per call.
    pub wall_time: f64,
    /// `‖result − sqrt_spectral(a)‖`.
    pub error: f64,
}

#[derive(Debug, Clone)]
pub struct DenmanBeavers {
    pub value: SymMatrix,
    pub iterations: usize,
    /// `‖value² − a‖`
    pub residual: f64,
}

/// Coupled Denman–Beavers iteration `Y ← (Y + Z⁻¹)/2`, `Z ← (Z + Y⁻¹)/2`
/// from `Y = a`, `Z = 1`; `Y → a^{1/2}` and `Z → a^{-1/2}` for positive
/// definite `a`. Stops once `‖Y² − a‖ ≤ tol · max(1, ‖a‖)`, or after a few
/// steps without improvement (rounding floor on ill-conditioned input), and
/// returns the iterate with the smallest residual.
pub fn denman_beavers(a: &SymMatrix, max_iter: usize, tol: f64, cfg: &ToleranceConfig) -> Result<DenmanBeavers> {
    const PATIENCE: usize = 3;
    let scale = order_unit_norm(a).max(1.0);
    let mut y = a.clone();
    let mut z = SymMatrix::identity(a.n());
    let mut best = DenmanBeavers {
        residual: order_unit_norm(&(&y.square() - a)),
        value: y.clone(),
        iterations: 0,
    };
    let mut stale = 0;
    let mut iterations = 0;
    while best.residual > tol * scale && iterations < max_iter && stale < PATIENCE {
        let y_inv = inverse(&y, cfg)?;
        let z_inv = inverse(&z, cfg)?;
        y = (&y + &z_inv).scale(0.5);
        z = (&z + &y_inv).scale(0.5);
        iterations += 1;
        let residual = order_unit_norm(&(&y.square() - a));
        if residual < best.residual {
            best = DenmanBeavers {
                value: y.clone(),
                iterations,
                residual,
            };
            stale = 0;
        } else {
            stale += 1;
        }
    }
    Ok(best)
}

/// The fixed bench matrix for one dimension.
pub fn bench_matrix(seed: u64, dim: usize) -> SymMatrix {
    let (lo, hi) = (BENCH_SPECTRUM.0.log10(), BENCH_SPECTRUM.1.log10());
    let spectrum: Vec<f64> = (0..dim)
        .map(|i| {
            let s = if dim == 1 { 0.0 } else { i as f64 / (dim - 1) as f64 };
            10f64.powf(lo + (hi - lo) * s)
        })
        .collect();
    corpus::with_spectrum(&mut SplitMix64::for_trial(seed, dim as u64), &spectrum)
}

// Average time per call, repeating until the total is measurable.
fn timed<T>(mut f: impl FnMut() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let mut value = f()?;
    let mut calls = 1u32;
    while start.elapsed() < MIN_TIMING {
        value = f()?;
        calls += 1;
    }
    let secs = start.elapsed().as_secs_f64() / f64::from(calls);
    Ok((value, secs.max(f64::MIN_POSITIVE)))
}

/// Spectral, integral (for every node count) and Denman–Beavers roots of
/// the bench matrix in every dimension. Writes CSV and SVG when configured.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    config.validate()?;
    let cfg = &config.tolerances;
    let mut records = Vec::new();
    for &dim in &config.dims {
        let a = bench_matrix(config.seed, dim);
        let (oracle, t) = timed(|| sqrt_spectral(&a, cfg))?;
        records.push(BenchRecord {
            method: "spectral".into(),
            dim,
            nodes: None,
            iterations: None,
            wall_time: t,
            error: 0.0,
        });
        for &n in &config.nodes_list {
            let rule = make_rule(n)?;
            let (r, t) = timed(|| sqrt_integral(&a, &rule, cfg))?;
            records.push(BenchRecord {
                method: "integral".into(),
                dim,
                nodes: Some(n),
                iterations: None,
                wall_time: t,
                error: order_unit_norm(&(&r.value - &oracle)),
            });
        }
        let (db, t) = timed(|| denman_beavers(&a, 100, 1e-13, cfg))?;
        records.push(BenchRecord {
            method: "denman-beavers".into(),
            dim,
            nodes: None,
            iterations: Some(db.iterations),
            wall_time: t,
            error: order_unit_norm(&(&db.value - &oracle)),
        });
    }
    if let Some(path) = &config.out {
        write_text(path, &bench_csv(&records))?;
    }
    if let Some(path) = &config.svg {
        write_text(path, &bench_svg(&records))?;
    }
    Ok(records)
}

/// `method,dim,nodes,iterations,wall_time,error`; empty fields where a
/// column does not apply.
pub fn bench_csv(records: &[BenchRecord]) -> String {
    let opt = |v: Option<usize>| v.map(|v| v.to_string()).unwrap_or_default();
    let mut s = String::from("method,dim,nodes,iterations,wall_time,error\n");
    for r in records {
        s.push_str(&format!(
            "{},{},{},{},{:e},{:e}\n",
            r.method,
            r.dim,
            opt(r.nodes),
            opt(r.iterations),
            r.wall_time,
            r.error
        ));
    }
    s
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Log-log plot of integral-method error against node count, one curve per
/// dimension. Zero errors are drawn at `1e-17`.
pub fn bench_svg(records: &[BenchRecord]) -> String {
    let (w, h) = (640.0, 420.0);
    let (left, right, top, bottom) = (70.0, 130.0, 30.0, 50.0);
    let points: Vec<(usize, f64, f64)> = records
        .iter()
        .filter_map(|r| r.nodes.map(|n| (r.dim, (n as f64).log2(), r.error.max(1e-17).log10())))
        .collect();
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    if points.is_empty() {
        s.push_str("</svg>\n");
        return s;
    }
    let fold =
        |f: fn(f64, f64) -> f64, init: f64, sel: fn(&(usize, f64, f64)) -> f64| points.iter().map(sel).fold(init, f);
    let (x0, x1) = (
        fold(f64::min, f64::INFINITY, |p| p.1).floor(),
        fold(f64::max, f64::NEG_INFINITY, |p| p.1).ceil(),
    );
    let (y0, y1) = (
        fold(f64::min, f64::INFINITY, |p| p.2).floor(),
        fold(f64::max, f64::NEG_INFINITY, |p| p.2).ceil(),
    );
    let (x1, y1) = (x1.max(x0 + 1.0), y1.max(y0 + 1.0));
    let px = |x: f64| left + (x - x0) / (x1 - x0) * (w - left - right);
    let py = |y: f64| h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom);

    s.push_str(&format!(
        "<line x1=\"{l}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{l}\" y1=\"{t}\" x2=\"{l}\" y2=\"{b}\" stroke=\"black\"/>\n",
        l = left,
        r = w - right,
        t = top,
        b = h - bottom
    ));
    for k in (x0 as i64)..=(x1 as i64) {
        let x = px(k as f64);
        s.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{b}\" x2=\"{x:.1}\" y2=\"{b5}\" stroke=\"black\"/><text x=\"{x:.1}\" y=\"{ty}\" text-anchor=\"middle\">{n}</text>\n",
            b = h - bottom,
            b5 = h - bottom + 5.0,
            ty = h - bottom + 18.0,
            n = 1u64 << k.max(0)
        ));
    }
    let step = ((y1 - y0) / 8.0).ceil().max(1.0) as i64;
    for k in ((y0 as i64)..=(y1 as i64)).step_by(step as usize) {
        let y = py(k as f64);
        s.push_str(&format!(
            "<line x1=\"{l5}\" y1=\"{y:.1}\" x2=\"{l}\" y2=\"{y:.1}\" stroke=\"black\"/><text x=\"{tx}\" y=\"{ty:.1}\" text-anchor=\"end\">1e{k}</text>\n",
            l = left,
            l5 = left - 5.0,
            tx = left - 8.0,
            ty = y + 4.0
        ));
    }
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">quadrature nodes N</text>\n<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">error vs spectral root</text>\n",
        left + (w - left - right) / 2.0,
        h - 12.0,
        top + (h - top - bottom) / 2.0,
        top + (h - top - bottom) / 2.0
    ));

    let mut dims: Vec<usize> = points.iter().map(|p| p.0).collect();
    dims.dedup();
    for (i, dim) in dims.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = points
            .iter()
            .filter(|p| p.0 == *dim)
            .map(|p| format!("{:.1},{:.1}", px(p.1), py(p.2)))
            .collect();
        s.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            path.join(" ")
        ));
        for p in &path {
            let (x, y) = p.split_once(',').expect("formatted pair");
            s.push_str(&format!("<circle cx=\"{x}\" cy=\"{y}\" r=\"3\" fill=\"{color}\"/>\n"));
        }
        let ly = top + 16.0 * i as f64;
        s.push_str(&format!(
            "<line x1=\"{a}\" y1=\"{ly}\" x2=\"{b}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/><text x=\"{c}\" y=\"{ty}\">dim {dim}</text>\n",
            a = w - right + 15.0,
            b = w - right + 40.0,
            c = w - right + 46.0,
            ty = ly + 4.0
        ));
    }
    s.push_str("</svg>\n");
    s
}
