//! File formats: region and distribution JSON, wave-function and tube-sample
//! CSV, plot series, and atomic file writes.

use std::io::Write as _;
use std::path::Path;
use std::sync::Arc;

use modloc_core::conventions;
use modloc_core::flap::{Atom, Cell, Density, SampledDistribution};
use modloc_core::geometry::{ComplexFourVector, FourVector};
use modloc_core::localization::{TubePoint, TubeSample};
use modloc_core::regions::{HalfSpace, PolyRegion};
use modloc_core::shell::{MassShellGrid, TransversePoint, WaveFunction};
use modloc_core::C64;
use serde::{Deserialize, Serialize};

use crate::error::{CoreContext, RunError};

/// A coordinate bound: a number, or "inf" / "-inf".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Num(f64),
    Str(InfStr),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfStr {
    #[serde(rename = "inf")]
    Inf,
    #[serde(rename = "-inf")]
    NegInf,
}

impl Bound {
    pub fn value(self) -> f64 {
        match self {
            Bound::Num(x) => x,
            Bound::Str(InfStr::Inf) => f64::INFINITY,
            Bound::Str(InfStr::NegInf) => f64::NEG_INFINITY,
        }
    }

    pub fn from_value(x: f64) -> Bound {
        if x == f64::INFINITY {
            Bound::Str(InfStr::Inf)
        } else if x == f64::NEG_INFINITY {
            Bound::Str(InfStr::NegInf)
        } else {
            Bound::Num(x)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfSpaceJson {
    pub n: Vec<f64>,
    pub c: f64,
}

/// `{x : ⟨n, x⟩ ≤ c for every half-space}`. `dim` is needed only when there
/// are no half-spaces; vertices and rays are informative on output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default)]
    pub halfspaces: Vec<HalfSpaceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vec<f64>>>,
}

impl RegionJson {
    pub fn build(&self, field: &str) -> Result<PolyRegion, RunError> {
        let dim = match (self.dim, self.halfspaces.first()) {
            (Some(d), _) => d,
            (None, Some(h)) => h.n.len(),
            (None, None) => return Err(RunError::invalid(format!("{field}.dim"), "required when there are no half-spaces")),
        };
        if !matches!(dim, 1 | 2 | 4) {
            return Err(RunError::invalid(format!("{field}.dim"), "must be 1, 2 or 4"));
        }
        let mut hs = Vec::with_capacity(self.halfspaces.len());
        for (i, h) in self.halfspaces.iter().enumerate() {
            if h.n.len() != dim {
                return Err(RunError::invalid(format!("{field}.halfspaces[{i}].n"), format!("expected {dim} components")));
            }
            hs.push(HalfSpace::new(h.n.clone(), h.c).map_err(|e| RunError::invalid(format!("{field}.halfspaces[{i}]"), e.to_string()))?);
        }
        PolyRegion::from_halfspaces(dim, hs).map_err(|e| RunError::invalid(field, e.to_string()))
    }

    pub fn from_region(r: &PolyRegion) -> RegionJson {
        RegionJson {
            dim: Some(r.dim),
            halfspaces: r.halfspaces.iter().map(|h| HalfSpaceJson { n: h.normal.clone(), c: h.offset }).collect(),
            vertices: r.vrep.as_ref().map(|v| v.vertices.clone()),
            rays: r.vrep.as_ref().map(|v| v.rays.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomJson {
    pub x: Vec<f64>,
    #[serde(default = "unit_weight")]
    pub w: [f64; 2],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub deriv: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellJson {
    pub lo: Vec<Bound>,
    pub hi: Vec<Bound>,
    #[serde(default = "unit_weight")]
    pub w: [f64; 2],
    /// "const", "exp" (with `rate`), or any other tag for a density the
    /// library cannot classify.
    #[serde(default = "const_density")]
    pub density: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<Vec<f64>>,
}

fn unit_weight() -> [f64; 2] {
    [1.0, 0.0]
}

fn const_density() -> String {
    "const".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionJson {
    pub n: usize,
    #[serde(default)]
    pub atoms: Vec<AtomJson>,
    #[serde(default)]
    pub cells: Vec<CellJson>,
    #[serde(default)]
    pub order: u32,
    pub hull: RegionJson,
}

impl DistributionJson {
    pub fn build(&self, field: &str) -> Result<SampledDistribution, RunError> {
        let n = self.n;
        let mut atoms = Vec::with_capacity(self.atoms.len());
        for (i, a) in self.atoms.iter().enumerate() {
            let deriv = if a.deriv.is_empty() { vec![0; n] } else { a.deriv.clone() };
            if a.x.len() != n || deriv.len() != n {
                return Err(RunError::invalid(format!("{field}.atoms[{i}]"), format!("x and deriv need {n} components")));
            }
            atoms.push(Atom { x: a.x.clone(), w: C64::new(a.w[0], a.w[1]), deriv });
        }
        let mut cells = Vec::with_capacity(self.cells.len());
        for (i, c) in self.cells.iter().enumerate() {
            if c.lo.len() != n || c.hi.len() != n {
                return Err(RunError::invalid(format!("{field}.cells[{i}]"), format!("lo and hi need {n} components")));
            }
            let density = match (c.density.as_str(), &c.rate) {
                ("const", None) => Density::Const,
                ("const", Some(_)) => return Err(RunError::invalid(format!("{field}.cells[{i}].rate"), "only meaningful with density \"exp\"")),
                ("exp", Some(r)) if r.len() == n => Density::Exp(r.clone()),
                ("exp", _) => return Err(RunError::invalid(format!("{field}.cells[{i}].rate"), format!("density \"exp\" needs a rate with {n} components"))),
                (other, _) => Density::Opaque(other.to_string()),
            };
            cells.push(Cell {
                lo: c.lo.iter().map(|b| b.value()).collect(),
                hi: c.hi.iter().map(|b| b.value()).collect(),
                w: C64::new(c.w[0], c.w[1]),
                density,
            });
        }
        let hull = self.hull.build(&format!("{field}.hull"))?;
        SampledDistribution::new(n, atoms, cells, self.order, hull).map_err(|e| RunError::invalid(field, e.to_string()))
    }

    pub fn from_distribution(u: &SampledDistribution) -> DistributionJson {
        DistributionJson {
            n: u.dim,
            atoms: u.atoms.iter().map(|a| AtomJson { x: a.x.clone(), w: [a.w.re, a.w.im], deriv: a.deriv.clone() }).collect(),
            cells: u
                .cells
                .iter()
                .map(|c| {
                    let (density, rate) = match &c.density {
                        Density::Const => ("const".to_string(), None),
                        Density::Exp(r) => ("exp".to_string(), Some(r.clone())),
                        Density::Opaque(s) => (s.clone(), None),
                    };
                    CellJson {
                        lo: c.lo.iter().map(|&x| Bound::from_value(x)).collect(),
                        hi: c.hi.iter().map(|&x| Bound::from_value(x)).collect(),
                        w: [c.w.re, c.w.im],
                        density,
                        rate,
                    }
                })
                .collect(),
            order: u.order,
            hull: RegionJson::from_region(&u.hull),
        }
    }
}

/// Shortest round-tripping text for a float.
pub fn fmt(x: f64) -> String {
    format!("{x:e}")
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> RunError + '_ {
    move |e| RunError::io(path, e)
}

/// Wave-function CSV: comment header with the grid, then one row per sample
/// in storage order (transverse point major, rapidity minor).
pub fn wavefunction_csv(w: &WaveFunction) -> String {
    let g = &w.grid;
    let mut out = String::new();
    out.push_str("# modloc wave function\n");
    out.push_str(&format!("# mass={} theta0={} dtheta={} n_theta={} n_transverse={}\n", fmt(g.mass), fmt(g.theta0), fmt(g.dtheta), g.n_theta, g.transverse.len()));
    out.push_str(&format!("# conventions: {}; {}\n", conventions::BOOST_SIGN, conventions::LIGHT_CONE));
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["theta", "p1", "p2", "weight", "re", "im"]).expect("in-memory write");
    for (t, tp) in g.transverse.iter().enumerate() {
        for j in 0..g.n_theta {
            let v = w.at(j, t);
            wtr.write_record([fmt(g.theta(j)), fmt(tp.q[0]), fmt(tp.q[1]), fmt(tp.weight), fmt(v.re), fmt(v.im)]).expect("in-memory write");
        }
    }
    out.push_str(&String::from_utf8(wtr.into_inner().expect("in-memory write")).expect("utf8"));
    out
}

fn header_value<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.split_whitespace().find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
}

pub fn read_wavefunction_file(path: &Path) -> Result<WaveFunction, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    read_wavefunction(&text, path)
}

pub fn read_wavefunction(text: &str, path: &Path) -> Result<WaveFunction, RunError> {
    let header = text.lines().find(|l| l.starts_with('#') && l.contains("n_theta=")).ok_or_else(|| RunError::io(path, "missing grid header line"))?;
    let num = |key: &str| -> Result<f64, RunError> {
        header_value(header, key).and_then(|v| v.parse::<f64>().ok()).ok_or_else(|| RunError::io(path, format!("bad or missing `{key}` in header")))
    };
    let (mass, theta0, dtheta) = (num("mass")?, num("theta0")?, num("dtheta")?);
    let n_theta = num("n_theta")? as usize;
    let n_tr = num("n_transverse")? as usize;
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let mut transverse: Vec<TransversePoint> = Vec::with_capacity(n_tr);
    let mut samples = Vec::with_capacity(n_theta * n_tr);
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        let row = k + 2;
        if rec.len() != 6 {
            return Err(RunError::io(path, format!("row {row}: expected 6 columns")));
        }
        let f = |i: usize| rec[i].trim().parse::<f64>().map_err(|e| RunError::io(path, format!("row {row}, column {}: {e}", i + 1)));
        let (theta, p1, p2, weight, re, im) = (f(0)?, f(1)?, f(2)?, f(3)?, f(4)?, f(5)?);
        let (t, j) = (k / n_theta.max(1), k % n_theta.max(1));
        if j == 0 {
            transverse.push(TransversePoint { q: [p1, p2], weight });
        } else if transverse[t].q != [p1, p2] || transverse[t].weight != weight {
            return Err(RunError::io(path, format!("row {row}: transverse point changes inside a fibre")));
        }
        let want = theta0 + j as f64 * dtheta;
        if (theta - want).abs() > 1e-9 * (1.0 + want.abs()) {
            return Err(RunError::io(path, format!("row {row}: rapidity {theta} off the grid (expected {want})")));
        }
        samples.push(C64::new(re, im));
    }
    if samples.len() != n_theta * n_tr || transverse.len() != n_tr {
        return Err(RunError::io(path, format!("expected {} rows, found {}", n_theta * n_tr, samples.len())));
    }
    let probe = MassShellGrid::new(mass, theta0, theta0 + dtheta * (n_theta.max(2) - 1) as f64, n_theta, transverse.clone()).map_err(|e| RunError::io(path, e))?;
    let grid = MassShellGrid { dtheta, ..probe };
    WaveFunction::new(Arc::new(grid), samples).ctx("wave function")
}

/// Grids equal up to rounding in the stored rapidity step.
pub fn grids_match(a: &MassShellGrid, b: &MassShellGrid) -> bool {
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs()));
    close(a.mass, b.mass)
        && close(a.theta0, b.theta0)
        && close(a.dtheta, b.dtheta)
        && a.n_theta == b.n_theta
        && a.transverse.len() == b.transverse.len()
        && a.transverse.iter().zip(&b.transverse).all(|(p, q)| close(p.q[0], q.q[0]) && close(p.q[1], q.q[1]) && close(p.weight, q.weight))
}

const TUBE_HEADER: [&str; 18] = [
    "tau_re", "tau_im", "j", "t", "p0", "p1", "p2", "p3", "zeta0_re", "zeta0_im", "zeta1_re", "zeta1_im", "zeta2_re", "zeta2_im", "zeta3_re", "zeta3_im", "u_re", "u_im",
];

pub fn tube_sample_csv(s: &TubeSample) -> String {
    let mut out = String::new();
    out.push_str("# modloc tube sample\n");
    out.push_str(&format!("# vertex={} frame={}\n", s.vertex.0.iter().map(|x| fmt(*x)).collect::<Vec<_>>().join(","), s.frame.m.iter().flatten().map(|x| fmt(*x)).collect::<Vec<_>>().join(",")));
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(TUBE_HEADER).expect("in-memory write");
    for p in &s.points {
        let mut row = vec![fmt(p.tau.re), fmt(p.tau.im), p.index.0.to_string(), p.index.1.to_string()];
        row.extend(p.p.0.iter().map(|x| fmt(*x)));
        for z in p.zeta.0 {
            row.push(fmt(z.re));
            row.push(fmt(z.im));
        }
        row.push(fmt(p.u.re));
        row.push(fmt(p.u.im));
        wtr.write_record(&row).expect("in-memory write");
    }
    out.push_str(&String::from_utf8(wtr.into_inner().expect("in-memory write")).expect("utf8"));
    out
}

/// Reads the points of a tube-sample CSV (vertex and frame come from the
/// header line).
pub fn read_tube_points(text: &str, path: &Path) -> Result<Vec<TubePoint>, RunError> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        if rec.len() != TUBE_HEADER.len() {
            return Err(RunError::io(path, format!("row {}: expected {} columns", k + 2, TUBE_HEADER.len())));
        }
        let f = |i: usize| rec[i].parse::<f64>().map_err(|e| RunError::io(path, format!("row {}, column {}: {e}", k + 2, i + 1)));
        let u = |i: usize| rec[i].parse::<usize>().map_err(|e| RunError::io(path, format!("row {}, column {}: {e}", k + 2, i + 1)));
        let mut zeta = [C64::new(0.0, 0.0); 4];
        for (m, z) in zeta.iter_mut().enumerate() {
            *z = C64::new(f(8 + 2 * m)?, f(9 + 2 * m)?);
        }
        out.push(TubePoint {
            tau: C64::new(f(0)?, f(1)?),
            index: (u(2)?, u(3)?),
            p: FourVector([f(4)?, f(5)?, f(6)?, f(7)?]),
            zeta: ComplexFourVector(zeta),
            u: C64::new(f(16)?, f(17)?),
        });
    }
    Ok(out)
}

/// Plot data: a header row then numeric rows.
pub fn series_csv(headers: &[&str], rows: &[Vec<f64>]) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(headers).expect("in-memory write");
    for r in rows {
        wtr.write_record(r.iter().map(|x| fmt(*x))).expect("in-memory write");
    }
    String::from_utf8(wtr.into_inner().expect("in-memory write")).expect("utf8")
}

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), RunError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = std::fs::remove_file(&tmp);
        return Err(RunError::io(path, e));
    }
    Ok(())
}
