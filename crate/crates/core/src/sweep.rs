//! Geometry builders, grid sweeps and CSV output.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::detector::{matrix_elements, DetectorParams, Geometry, MatrixElements};
use crate::error::{Error, Result};
use crate::qubit::{build_rho, SpectrumMode};
use crate::tangle::{equilateral_closed, linear_closed, pi_scalene_closed, pi_tangle_general, PiTangleResult};
use crate::toy::{CkwCell, CkwScanSpec};

/// Largest tolerated closed-form vs eigenvalue disagreement per cell.
pub const DISCREPANCY_TOL: f64 = 1e-10;

pub const SWEEP_HEADER: [&str; 12] = [
    "gap", "length", "pi", "pi_A", "pi_B", "pi_C", "N_A_BC", "N_B_AC", "N_C_AB", "N_AB", "N_AC",
    "N_BC",
];
pub const CKW_HEADER: [&str; 5] = ["p2", "x2", "pi", "quartic", "excluded"];

/// Evenly spaced samples from `min` to `max` inclusive (just `min` if steps = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let n = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let t = i as f64 / n;
                self.min * (1.0 - t) + self.max * t
            })
            .collect()
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Config(format!("{name}: steps must be >= 1")));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || !(self.min < self.max) {
            return Err(Error::Config(format!(
                "{name}: need finite min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryKind {
    Equilateral,
    Linear,
    /// A, C fixed `scalene_base` apart; the sweep's length axis is the
    /// displacement D of B parallel to AC.
    Scalene,
    /// Perturbative toy-model scan; gap axis → P₂, length axis → |X₂|.
    ToyScan,
}

impl FromStr for GeometryKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equilateral" => Ok(Self::Equilateral),
            "linear" => Ok(Self::Linear),
            "scalene" => Ok(Self::Scalene),
            "toy-scan" => Ok(Self::ToyScan),
            _ => Err(Error::Config(format!(
                "unknown geometry '{s}' (equilateral | linear | scalene | toy-scan)"
            ))),
        }
    }
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Equilateral => "equilateral",
            Self::Linear => "linear",
            Self::Scalene => "scalene",
            Self::ToyScan => "toy-scan",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    ClosedForm,
    Eigenvalue,
    /// Report the closed form, plus its largest deviation from the eigenvalue route.
    Both,
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" => Ok(Self::ClosedForm),
            "eigenvalue" => Ok(Self::Eigenvalue),
            "both" => Ok(Self::Both),
            _ => Err(Error::Config(format!(
                "unknown route '{s}' (closed-form | eigenvalue | both)"
            ))),
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ClosedForm => "closed-form",
            Self::Eigenvalue => "eigenvalue",
            Self::Both => "both",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub geometry: GeometryKind,
    pub lambda: f64,
    pub gap: Axis,
    /// L (equilateral, linear spacing) or D (scalene)
    pub length: Axis,
    pub scalene_base: f64,
    pub route: Route,
    pub output: PathBuf,
    /// worker threads; None = rayon default
    pub threads: Option<usize>,
    /// C₂/P₂ for toy-scan
    pub c2_ratio: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            geometry: GeometryKind::Equilateral,
            lambda: 0.1,
            gap: Axis::new(-1.0, 3.0, 200),
            length: Axis::new(0.25, 10.0, 200),
            scalene_base: 7.0,
            route: Route::ClosedForm,
            output: PathBuf::from("sweep.csv"),
            threads: None,
            c2_ratio: 0.9,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::Config(format!("lambda must be finite and > 0, got {}", self.lambda)));
        }
        self.gap.validate("gap")?;
        self.length.validate("length")?;
        match self.geometry {
            GeometryKind::Equilateral | GeometryKind::Linear if self.length.min <= 0.0 => {
                Err(Error::Config("length axis must be > 0".into()))
            }
            GeometryKind::Scalene if !(self.scalene_base.is_finite() && self.scalene_base > 0.0) => {
                Err(Error::Config("scalene_base must be finite and > 0".into()))
            }
            GeometryKind::ToyScan => self.ckw_spec().validate(),
            _ => Ok(()),
        }?;
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be >= 1".into()));
        }
        Ok(())
    }

    /// The toy-scan reading of this config.
    pub fn ckw_spec(&self) -> CkwScanSpec {
        CkwScanSpec {
            p2: self.gap,
            x2: self.length,
            c2_ratio: self.c2_ratio,
            lambda: self.lambda,
        }
    }
}

/// `length` is the side (equilateral), the spacing (linear) or the displacement D (scalene).
pub fn build_geometry(kind: GeometryKind, length: f64, scalene_base: f64) -> Result<Geometry> {
    match kind {
        GeometryKind::Equilateral => Geometry::equilateral(length),
        GeometryKind::Linear => Geometry::linear(length),
        GeometryKind::Scalene => Geometry::scalene(scalene_base, length),
        GeometryKind::ToyScan => Err(Error::Config("toy-scan has no detector geometry".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub gap: f64,
    pub length: f64,
    pub result: PiTangleResult,
    /// max |closed form − eigenvalue| over all fields, when both routes ran
    pub discrepancy: Option<f64>,
}

/// The geometry's own closed form.
pub fn closed_form(kind: GeometryKind, me: &MatrixElements) -> Result<PiTangleResult> {
    match kind {
        GeometryKind::Equilateral => Ok(equilateral_closed(me.p, me.c_ab, me.x_ab.norm())),
        GeometryKind::Linear => linear_closed(me.p, me.c_ab, me.c_ac, me.x_ab, me.x_ac),
        _ => pi_scalene_closed(me),
    }
}

pub fn eigenvalue_route(me: &MatrixElements) -> Result<PiTangleResult> {
    pi_tangle_general(&build_rho(me), SpectrumMode::LeadingOrder)
}

pub fn evaluate_point(
    kind: GeometryKind,
    lambda: f64,
    gap: f64,
    length: f64,
    scalene_base: f64,
    route: Route,
) -> Result<SweepCell> {
    let params = DetectorParams::new(lambda, gap)?;
    let geom = build_geometry(kind, length, scalene_base)?;
    let me = matrix_elements(&params, &geom)?;
    let (result, discrepancy) = match route {
        Route::ClosedForm => (closed_form(kind, &me)?, None),
        Route::Eigenvalue => (eigenvalue_route(&me)?, None),
        Route::Both => {
            let c = closed_form(kind, &me)?;
            let e = eigenvalue_route(&me)?;
            (c, Some(c.max_abs_diff(&e)))
        }
    };
    Ok(SweepCell {
        gap,
        length,
        result,
        discrepancy,
    })
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::Config(format!("thread pool: {e}"))),
    }
}

/// Row-major over (gap, length), gap outer. Output order never depends on scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepCell>> {
    cfg.validate()?;
    if cfg.geometry == GeometryKind::ToyScan {
        return Err(Error::Config("toy-scan grids go through run_ckw_scan".into()));
    }
    let gaps = cfg.gap.values();
    let lengths = cfg.length.values();
    let n = lengths.len();
    let results: Vec<Result<SweepCell>> = with_threads(cfg.threads, || {
        (0..gaps.len() * n)
            .into_par_iter()
            .map(|k| {
                let (g, l) = (gaps[k / n], lengths[k % n]);
                evaluate_point(cfg.geometry, cfg.lambda, g, l, cfg.scalene_base, cfg.route).map_err(
                    |e| Error::Cell {
                        gap: g,
                        length: l,
                        source: Box::new(e),
                    },
                )
            })
            .collect()
    })?;
    // first failure in grid order, so the reported cell is deterministic too
    results.into_iter().collect()
}

pub fn run_ckw_scan(cfg: &SweepConfig) -> Result<Vec<CkwCell>> {
    cfg.validate()?;
    let spec = cfg.ckw_spec();
    with_threads(cfg.threads, || crate::toy::ckw_scan(&spec))?
}

pub fn max_discrepancy(cells: &[SweepCell]) -> Option<f64> {
    cells
        .iter()
        .filter_map(|c| c.discrepancy)
        .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.max(d))))
}

/// Shortest representation that parses back to the same f64.
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Header plus one row per cell; a `discrepancy` column is added when any cell has one.
pub fn write_csv(cells: &[SweepCell], path: &Path) -> Result<()> {
    let with_disc = cells.iter().any(|c| c.discrepancy.is_some());
    let mut w = csv_writer(path)?;
    let mut header: Vec<&str> = SWEEP_HEADER.to_vec();
    if with_disc {
        header.push("discrepancy");
    }
    w.write_record(&header).map_err(csv_err(path))?;
    for c in cells {
        let mut row: Vec<String> = vec![format_float(c.gap), format_float(c.length)];
        row.extend(c.result.fields().iter().map(|&v| format_float(v)));
        if with_disc {
            row.push(c.discrepancy.map(format_float).unwrap_or_default());
        }
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Excluded cells leave `pi` empty.
pub fn write_ckw_csv(cells: &[CkwCell], path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(CKW_HEADER).map_err(csv_err(path))?;
    for c in cells {
        w.write_record([
            format_float(c.p2),
            format_float(c.x2),
            if c.excluded { String::new() } else { format_float(c.pi) },
            format_float(c.quartic),
            (c.excluded as u8).to_string(),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_endpoints_exact() {
        let v = Axis::new(-1.0, 3.0, 7).values();
        assert_eq!(v.len(), 7);
        assert_eq!(v[0], -1.0);
        assert_eq!(v[6], 3.0);
        assert_eq!(Axis::new(2.0, 5.0, 1).values(), vec![2.0]);
        assert!(Axis::new(1.0, 1.0, 3).validate("x").is_err());
        assert!(Axis::new(0.0, 1.0, 0).validate("x").is_err());
    }

    #[test]
    fn parse_names_round_trip() {
        for k in ["equilateral", "linear", "scalene", "toy-scan"] {
            assert_eq!(k.parse::<GeometryKind>().unwrap().to_string(), k);
        }
        for r in ["closed-form", "eigenvalue", "both"] {
            assert_eq!(r.parse::<Route>().unwrap().to_string(), r);
        }
        assert!("triangle".parse::<GeometryKind>().is_err());
    }

    #[test]
    fn geometry_builders() {
        let l = build_geometry(GeometryKind::Linear, 1.5, 7.0).unwrap();
        assert_eq!(l.distances(), [1.5, 3.0, 1.5]);
        let s = build_geometry(GeometryKind::Scalene, 0.0, 7.0).unwrap();
        assert_eq!(s.distances(), [7.0; 3]);
        assert!(build_geometry(GeometryKind::Equilateral, -1.0, 7.0).is_err());
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, -2.5e-300, 1.0 / 3.0, 7.957747154594767e-4, 0.0] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }
}
