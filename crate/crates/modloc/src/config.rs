//! Run configuration: the JSON schema and its translation into core objects.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use modloc_core::analytic::{AnalyticVector, Sign};
use modloc_core::flap::{NormKind, TestFunction};
use modloc_core::geometry::{boost3, rotation_x_pi, rotation_z, FourVector, LorentzTransform, PoincareElement};
use modloc_core::localization::{LocalizeMethod, WedgeFamily};
use modloc_core::regions::{Cone, PolyRegion};
use modloc_core::shell::{AnalyticFamily, FamilyTag, MassShellGrid, WaveFunction};
use modloc_core::C64;
use serde::{Deserialize, Serialize};

use crate::error::{CoreContext, RunError};
use crate::formats::{self, DistributionJson, RegionJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Tomita,
    Localize,
    Boundary,
    Pws,
    Hormander,
    Epstein,
    SupportEstimate,
    Cauchy,
}

impl Mode {
    pub const ALL: [Mode; 8] = [
        Mode::Tomita,
        Mode::Localize,
        Mode::Boundary,
        Mode::Pws,
        Mode::Hormander,
        Mode::Epstein,
        Mode::SupportEstimate,
        Mode::Cauchy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Tomita => "tomita",
            Mode::Localize => "localize",
            Mode::Boundary => "boundary",
            Mode::Pws => "pws",
            Mode::Hormander => "hormander",
            Mode::Epstein => "epstein",
            Mode::SupportEstimate => "support-estimate",
            Mode::Cauchy => "cauchy",
        }
    }

    pub fn parse(s: &str) -> Result<Mode, RunError> {
        Mode::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| RunError::UnknownMode(s.to_string()))
    }

    /// Tolerance used when neither the config nor the command line sets one.
    pub fn default_tol(self) -> f64 {
        match self {
            Mode::Tomita => 1e-8,
            Mode::Localize | Mode::Boundary => 1e-6,
            Mode::Pws | Mode::Epstein => 0.2,
            Mode::Hormander => 1e-9,
            Mode::SupportEstimate => 0.01,
            Mode::Cauchy => 1e-4,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Output directory, relative to the working directory.
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub tomita: TomitaConfig,
    #[serde(default)]
    pub localize: LocalizeConfig,
    #[serde(default)]
    pub boundary: BoundaryConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pws: Option<PwsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hormander: Option<HormanderConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epstein: Option<EpsteinConfig>,
    #[serde(default, rename = "support-estimate", skip_serializing_if = "Option::is_none")]
    pub support_estimate: Option<SupportConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cauchy: Option<CauchyConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub mass: f64,
    pub n_theta: usize,
    pub theta_max: f64,
    /// 0 selects the 1+1 reduction.
    pub transverse_per_axis: usize,
    pub transverse_extent: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { mass: 1.0, n_theta: 1024, theta_max: 16.0, transverse_per_axis: 0, transverse_extent: 2.0 }
    }
}

impl GridConfig {
    pub fn build(&self) -> Result<Arc<MassShellGrid>, RunError> {
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(RunError::invalid("grid.mass", "must be positive and finite"));
        }
        if self.n_theta < 16 || self.n_theta % 2 != 0 {
            return Err(RunError::invalid("grid.n_theta", "must be even and at least 16"));
        }
        if !(self.theta_max > 0.0 && self.theta_max.is_finite()) {
            return Err(RunError::invalid("grid.theta_max", "must be positive and finite"));
        }
        let g = match self.transverse_per_axis {
            0 => MassShellGrid::rapidity(self.mass, self.n_theta, self.theta_max),
            1 => return Err(RunError::invalid("grid.transverse_per_axis", "use 0 for 1+1 or at least 2")),
            k => {
                if !(self.transverse_extent > 0.0) {
                    return Err(RunError::invalid("grid.transverse_extent", "must be positive"));
                }
                MassShellGrid::with_square_transverse(self.mass, self.n_theta, self.theta_max, k, self.transverse_extent)
            }
        };
        Ok(Arc::new(g.ctx("grid")?))
    }
}

/// A Poincaré element `(a, Λ)` with `Λ = F^flip · R_z(rotation_z) · Λ₃(boost)`,
/// or explicit matrix rows.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FrameConfig {
    pub a: [f64; 4],
    pub boost: f64,
    pub rotation_z: f64,
    pub flip: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<[[f64; 4]; 4]>,
}

impl FrameConfig {
    pub fn build(&self, field: &str) -> Result<PoincareElement, RunError> {
        if self.a.iter().any(|x| !x.is_finite()) {
            return Err(RunError::invalid(format!("{field}.a"), "must be finite"));
        }
        let lambda = match self.rows {
            Some(rows) => {
                if self.boost != 0.0 || self.rotation_z != 0.0 || self.flip {
                    return Err(RunError::invalid(format!("{field}.rows"), "cannot be combined with boost/rotation_z/flip"));
                }
                let l = LorentzTransform::from_rows(rows);
                if !l.is_lorentz() {
                    return Err(RunError::invalid(format!("{field}.rows"), "not a Lorentz matrix"));
                }
                l
            }
            None => {
                let l = rotation_z(self.rotation_z).compose(&boost3(self.boost));
                if self.flip {
                    rotation_x_pi().compose(&l)
                } else {
                    l
                }
            }
        };
        Ok(PoincareElement::new(FourVector(self.a), lambda))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignConfig {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl From<SignConfig> for Sign {
    fn from(s: SignConfig) -> Sign {
        match s {
            SignConfig::Plus => Sign::Plus,
            SignConfig::Minus => Sign::Minus,
        }
    }
}

fn one() -> [f64; 2] {
    [1.0, 0.0]
}

fn unit_width() -> f64 {
    1.0
}

/// A one-particle vector: a closed-form analytic family or samples from a
/// wave-function CSV file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum VectorSpec {
    Gaussian {
        #[serde(default)]
        center: f64,
        #[serde(default = "unit_width")]
        width: f64,
        #[serde(default = "one")]
        amplitude: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        transverse_width: Option<f64>,
    },
    Sech {
        #[serde(default = "unit_width")]
        scale: f64,
        #[serde(default)]
        center: f64,
        #[serde(default = "one")]
        amplitude: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        transverse_width: Option<f64>,
    },
    Rational {
        poles: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        envelope: Option<f64>,
        #[serde(default = "one")]
        amplitude: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        transverse_width: Option<f64>,
    },
    Csv {
        path: PathBuf,
    },
}

impl Default for VectorSpec {
    fn default() -> Self {
        VectorSpec::Gaussian { center: 0.0, width: 1.0, amplitude: one(), transverse_width: None }
    }
}

/// A resolved vector: closed form where available.
#[derive(Debug, Clone)]
pub enum Vector {
    Analytic(AnalyticVector),
    Sampled(WaveFunction),
}

impl Vector {
    pub fn samples(&self) -> WaveFunction {
        match self {
            Vector::Analytic(v) => v.sample(),
            Vector::Sampled(w) => w.clone(),
        }
    }
}

impl VectorSpec {
    pub fn family(&self, field: &str) -> Result<Option<AnalyticFamily>, RunError> {
        let c = |a: [f64; 2]| C64::new(a[0], a[1]);
        let (mut f, amp, tw) = match self {
            VectorSpec::Gaussian { center, width, amplitude, transverse_width } => (AnalyticFamily::gaussian(*center, *width), amplitude, transverse_width),
            VectorSpec::Sech { scale, center, amplitude, transverse_width } => {
                let mut f = AnalyticFamily::sech(*scale);
                if let FamilyTag::Sech { center: c0, .. } = &mut f.tag {
                    *c0 = *center;
                }
                (f, amplitude, transverse_width)
            }
            VectorSpec::Rational { poles, envelope, amplitude, transverse_width } => {
                (AnalyticFamily::rational(poles.iter().map(|p| c(*p)).collect(), *envelope), amplitude, transverse_width)
            }
            VectorSpec::Csv { .. } => return Ok(None),
        };
        f = f.with_amplitude(c(*amp));
        if let Some(s) = tw {
            f = f.with_transverse_width(*s);
        }
        f.validate().map_err(|e| RunError::invalid(field, e.to_string()))?;
        Ok(Some(f))
    }

    pub fn build(&self, field: &str, grid: &Arc<MassShellGrid>, base: &Path) -> Result<Vector, RunError> {
        if let VectorSpec::Csv { path } = self {
            let full = base.join(path);
            let w = formats::read_wavefunction_file(&full)?;
            if !formats::grids_match(&w.grid, grid) {
                return Err(RunError::invalid(format!("{field}.path"), "wave function grid differs from the configured grid"));
            }
            return Ok(Vector::Sampled(WaveFunction::new(grid.clone(), w.samples).ctx(field)?));
        }
        let f = self.family(field)?.expect("analytic spec");
        Ok(Vector::Analytic(AnalyticVector::from_family(f, grid.clone())))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilyConfig {
    /// Right wedge with edge at `x³ = -A` and the flipped wedge with edge at `x³ = A`.
    Slab { half_width: f64 },
    Frames {
        frames: Vec<FrameConfig>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        region: Option<Source<RegionJson>>,
    },
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig::Slab { half_width: 4.0 }
    }
}

impl FamilyConfig {
    pub fn build(&self, field: &str, base: &Path) -> Result<WedgeFamily, RunError> {
        match self {
            FamilyConfig::Slab { half_width } => {
                if !(*half_width > 0.0 && half_width.is_finite()) {
                    return Err(RunError::invalid(format!("{field}.half_width"), "must be positive"));
                }
                WedgeFamily::slab(*half_width).ctx(field)
            }
            FamilyConfig::Frames { frames, region } => {
                if frames.is_empty() {
                    return Err(RunError::invalid(format!("{field}.frames"), "needs at least one wedge"));
                }
                let els = frames.iter().enumerate().map(|(i, f)| f.build(&format!("{field}.frames[{i}]"))).collect::<Result<Vec<_>, _>>()?;
                match region {
                    None => WedgeFamily::new(els).ctx(field),
                    Some(r) => {
                        let k = r.load(&format!("{field}.region"), base)?.build(&format!("{field}.region"))?;
                        WedgeFamily::with_region(els, k).map_err(|e| RunError::invalid(format!("{field}.region"), e.to_string()))
                    }
                }
            }
        }
    }
}

/// Either a path (relative to the config file) or the object inline.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Source<T> {
    Path(PathBuf),
    Inline(T),
}

// Hand-written so errors inside an inline object surface instead of
// "did not match any variant".
impl<'de, T: serde::de::DeserializeOwned> Deserialize<'de> for Source<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(Source::Path(PathBuf::from(s))),
            v @ serde_json::Value::Object(_) => T::deserialize(v).map(Source::Inline).map_err(D::Error::custom),
            _ => Err(D::Error::custom("expected a file path or an inline object")),
        }
    }
}

impl<T: Clone + serde::de::DeserializeOwned> Source<T> {
    pub fn load(&self, field: &str, base: &Path) -> Result<T, RunError> {
        match self {
            Source::Inline(t) => Ok(t.clone()),
            Source::Path(p) => {
                let full = base.join(p);
                let text = std::fs::read_to_string(&full).map_err(|e| RunError::io(&full, e))?;
                serde_json::from_str(&text).map_err(|e| match RunError::parse(&full, &e) {
                    RunError::Parse { path, line, column, msg } => RunError::Parse { path, line, column, msg: format!("{field}: {msg}") },
                    other => other,
                })
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TomitaConfig {
    pub frame: FrameConfig,
    /// Frame whose involution is used in place of the wedge's own (control runs).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_frame: Option<FrameConfig>,
    pub signs: Vec<SignConfig>,
    /// Defaults to the five-member gaussian battery.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub battery: Option<Vec<VectorSpec>>,
    pub backend_tol: f64,
    pub noise_control: bool,
}

impl Default for TomitaConfig {
    fn default() -> Self {
        TomitaConfig {
            frame: FrameConfig::default(),
            j_frame: None,
            signs: vec![SignConfig::Plus, SignConfig::Minus],
            battery: None,
            backend_tol: 1e-6,
            noise_control: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodConfig {
    Cg,
    Cyclic,
}

impl From<MethodConfig> for LocalizeMethod {
    fn from(m: MethodConfig) -> LocalizeMethod {
        match m {
            MethodConfig::Cg => LocalizeMethod::ConjugateGradient,
            MethodConfig::Cyclic => LocalizeMethod::Cyclic,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LocalizeConfig {
    pub family: FamilyConfig,
    pub sign: SignConfig,
    pub input: VectorSpec,
    /// Scale the input to unit norm first (residuals are absolute).
    pub normalize: bool,
    pub method: MethodConfig,
    pub max_iter: usize,
    /// Second input; its localization is combined with the first to test
    /// closure under real-linear combinations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub combine_with: Option<VectorSpec>,
}

impl Default for LocalizeConfig {
    fn default() -> Self {
        LocalizeConfig {
            family: FamilyConfig::default(),
            sign: SignConfig::Plus,
            input: VectorSpec::default(),
            normalize: true,
            method: MethodConfig::Cg,
            max_iter: 200,
            combine_with: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrowthConfig {
    /// Defaults to the wedge vertex as a point region.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<Source<RegionJson>>,
    pub n_lambda: usize,
    pub lambda_max: f64,
    pub n_height: usize,
    pub stride: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_declared: Option<f64>,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig { region: None, n_lambda: 5, lambda_max: 2.0, n_height: 4, stride: 16, n_declared: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundaryConfig {
    pub frame: FrameConfig,
    pub sign: SignConfig,
    pub vector: VectorSpec,
    /// Replace the vector `v` by the wedge member `v + s v`.
    pub member: bool,
    pub stride: usize,
    /// Stride through the boundary points for the written tube sample.
    pub tube_stride: usize,
    /// Extra shell points drawn from the seeded generator.
    pub random_points: usize,
    /// Complex boost parameters `[re, im]`; the default is a 5x5 strip grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub taus: Option<Vec<[f64; 2]>>,
    /// Also run the `i·ψ` control, which must fail the boundary condition.
    pub control: bool,
    pub control_min: f64,
    pub factorization_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthConfig>,
}

impl Default for BoundaryConfig {
    fn default() -> Self {
        BoundaryConfig {
            frame: FrameConfig::default(),
            sign: SignConfig::Plus,
            vector: VectorSpec::default(),
            member: true,
            stride: 1,
            tube_stride: 16,
            random_points: 0,
            taus: None,
            control: true,
            control_min: 1e-2,
            factorization_tol: 1e-8,
            growth: Some(GrowthConfig::default()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum NormConfig {
    #[default]
    Max,
    Euclidean,
}

impl From<NormConfig> for NormKind {
    fn from(n: NormConfig) -> NormKind {
        match n {
            NormConfig::Max => NormKind::Max,
            NormConfig::Euclidean => NormKind::Euclidean,
        }
    }
}

/// Tube sampling grid; unset fields take mode-specific defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TubeGridConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_xi: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_r: Option<usize>,
    pub norm: NormConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayProbeConfig {
    pub eta: Vec<f64>,
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PwsConfig {
    pub distribution: Source<DistributionJson>,
    /// Hull to check the bound against instead of the declared one
    /// (negative controls).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_hull: Option<Source<RegionJson>>,
    #[serde(default)]
    pub grid: TubeGridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray_probe: Option<RayProbeConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HormanderConfig {
    pub distribution: Source<DistributionJson>,
    /// Expected `[lo, hi]` per axis, compared through the support function
    /// along `±e_i`; entries may be "inf"/"-inf".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Vec<[formats::Bound; 2]>>,
}

/// Product `f(ζ) = Π_j f_j(ζ_j)` of one-variable factors.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TubeFunctionSpec {
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Factor {
    /// `1/(z + shift)`.
    Inverse {
        #[serde(default)]
        shift: [f64; 2],
    },
    Constant { value: [f64; 2] },
    /// `exp(-i z²)`.
    Chirp,
    /// `exp(-i x z)`, the transform of a point mass at `x`.
    Exp { x: f64 },
    /// `2 sin(a z)/z`, the transform of the indicator of `[-a, a]`.
    Sinc { half_width: f64 },
}

impl Factor {
    pub fn eval(&self, z: C64) -> C64 {
        let i = C64::new(0.0, 1.0);
        match self {
            Factor::Inverse { shift } => 1.0 / (z + C64::new(shift[0], shift[1])),
            Factor::Constant { value } => C64::new(value[0], value[1]),
            Factor::Chirp => (-i * z * z).exp(),
            Factor::Exp { x } => (-i * *x * z).exp(),
            Factor::Sinc { half_width } => {
                if z.norm() < 1e-8 {
                    C64::new(2.0 * half_width, 0.0) * (1.0 - (*half_width * z).powi(2) / 6.0)
                } else {
                    2.0 * (*half_width * z).sin() / z
                }
            }
        }
    }
}

impl TubeFunctionSpec {
    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn validate(&self, field: &str) -> Result<(), RunError> {
        if self.factors.is_empty() || self.factors.len() > 4 || self.factors.len() == 3 {
            return Err(RunError::invalid(format!("{field}.factors"), "need 1, 2 or 4 factors"));
        }
        Ok(())
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        self.factors.iter().zip(z).fold(C64::new(1.0, 0.0), |acc, (f, &zj)| acc * f.eval(zj))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    /// Generators of a closed cone; omitted means the positive orthant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<f64>>>,
    #[serde(default = "yes")]
    pub open: bool,
}

fn yes() -> bool {
    true
}

impl ConeConfig {
    pub fn build(&self, dim: usize, field: &str) -> Result<Cone, RunError> {
        match &self.generators {
            None => Ok(Cone::orthant(dim, self.open)),
            Some(g) => {
                if g.is_empty() || g.iter().any(|v| v.len() != dim) {
                    return Err(RunError::invalid(format!("{field}.generators"), format!("need nonempty generators of length {dim}")));
                }
                Ok(Cone::from_generators(dim, g.clone(), self.open))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestFunctionConfig {
    Gaussian,
    Sech,
}

impl From<TestFunctionConfig> for TestFunction {
    fn from(t: TestFunctionConfig) -> TestFunction {
        match t {
            TestFunctionConfig::Gaussian => TestFunction::Gaussian,
            TestFunctionConfig::Sech => TestFunction::Sech,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeConfig {
    /// Ray direction in the cone; defaults to `(1, …, 1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<f64>>,
    pub eta0: f64,
    pub steps: usize,
    pub tests: Vec<TestFunctionConfig>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { direction: None, eta0: 1.0, steps: 8, tests: vec![TestFunctionConfig::Gaussian, TestFunctionConfig::Sech] }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsteinConfig {
    pub function: TubeFunctionSpec,
    #[serde(default = "default_cone")]
    pub cone: ConeConfig,
    #[serde(default)]
    pub grid: TubeGridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_declared: Option<f64>,
    /// Assert `N_est <= n_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<f64>,
    /// Run the boundary-convergence probe (skipped when null).
    #[serde(default = "default_probe")]
    pub probe: Option<ProbeConfig>,
}

fn default_cone() -> ConeConfig {
    ConeConfig { generators: None, open: true }
}

fn default_probe() -> Option<ProbeConfig> {
    Some(ProbeConfig::default())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiiConfig {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Default for RadiiConfig {
    fn default() -> Self {
        RadiiConfig { lo: 2.0, hi: 50.0, n: 24 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportConfig {
    /// Transform evaluated in closed form from a distribution spec...
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<Source<DistributionJson>>,
    /// ...or given directly as a product function.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<TubeFunctionSpec>,
    /// Hull to compare against; defaults to the distribution's hull.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_hull: Option<Source<RegionJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub radii: RadiiConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CauchyConfig {
    pub function: TubeFunctionSpec,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Targets as lists of `[re, im]`, one per coordinate.
    #[serde(default)]
    pub targets: Vec<Vec<[f64; 2]>>,
    /// Extra targets drawn from the seeded generator.
    #[serde(default)]
    pub random_targets: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Check that the error at least halves as the node count doubles.
    #[serde(default = "yes")]
    pub halving: bool,
}

fn default_samples() -> usize {
    4096
}

/// Parses a config file, reporting the line and column of syntax and schema
/// errors.
pub fn load(path: &Path) -> Result<RunConfig, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    parse(&text, path)
}

pub fn parse(text: &str, path: &Path) -> Result<RunConfig, RunError> {
    serde_json::from_str(text).map_err(|e| RunError::parse(path, &e))
}

/// Resolved tolerance for the mode after command-line overrides.
pub fn resolve_tol(mode: Mode, cfg: &RunConfig, cli_tol: Option<f64>) -> Result<f64, RunError> {
    let tol = cli_tol.or(cfg.tol).unwrap_or(mode.default_tol());
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(RunError::invalid("tol", "must be positive and finite"));
    }
    Ok(tol)
}

impl DistributionJson {
    pub fn resolve(src: &Source<DistributionJson>, field: &str, base: &Path) -> Result<modloc_core::flap::SampledDistribution, RunError> {
        src.load(field, base)?.build(field)
    }
}

impl RegionJson {
    pub fn resolve(src: &Source<RegionJson>, field: &str, base: &Path) -> Result<PolyRegion, RunError> {
        src.load(field, base)?.build(field)
    }
}
