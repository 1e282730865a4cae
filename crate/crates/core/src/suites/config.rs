//! JSON configuration for the verification suites.

use serde::Deserialize;
use serde_json::Value;

use crate::error::{DunklError, Result};
use crate::numeric::KernelStrategy;
use crate::poly::{Poly, PolyTermJson};
use crate::rational::parse_q;
use crate::root_system::{Multiplicity, RootSystem, RootSystemDoc};
use crate::testfn::TestFn;

fn doc(name: &str, n: Option<usize>, k: &str) -> RootSystemDoc {
    RootSystemDoc {
        name: name.into(),
        n,
        parts: vec![],
        k_by_orbit: vec![k.into()],
    }
}

fn sweep(ks: &[&str]) -> Vec<RootSystemDoc> {
    let mut out = Vec::new();
    for (name, n) in [("rank1", None), ("A", Some(1)), ("A", Some(2))] {
        for k in ks {
            out.push(doc(name, n, k));
        }
    }
    out
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSettings {
    pub half_width: f64,
    pub n: usize,
}

impl GridSettings {
    fn new(half_width: f64, n: usize) -> Self {
        GridSettings { half_width, n }
    }

    fn validate(&self, what: &str, min_n: usize) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(DunklError::Config(format!("{what}.half_width must be positive")));
        }
        if self.n < min_n {
            return Err(DunklError::Config(format!(
                "{what}.n = {} is below the minimum {min_n}",
                self.n
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolySettings {
    pub systems: Vec<RootSystemDoc>,
    pub samples: usize,
    pub max_degree: u32,
    pub intertwiner_degree: usize,
    pub multiplicativity_degree: usize,
}

impl Default for PolySettings {
    fn default() -> Self {
        PolySettings {
            systems: sweep(&["0", "1/2", "1", "2"]),
            samples: 50,
            max_degree: 8,
            intertwiner_degree: 10,
            multiplicativity_degree: 5,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransformSettings {
    pub mehta_systems: Vec<RootSystemDoc>,
    pub plancherel_systems: Vec<RootSystemDoc>,
    pub plancherel_samples: usize,
    pub grid: GridSettings,
    pub spectral: GridSettings,
    pub kernel_degree: usize,
    pub mehta_tol: f64,
    pub plancherel_tol: f64,
    pub kernel_tol: f64,
    pub classical_tol: f64,
}

impl Default for TransformSettings {
    fn default() -> Self {
        TransformSettings {
            mehta_systems: sweep(&["0", "1/2", "1"]),
            plancherel_systems: vec![
                doc("rank1", None, "0"),
                doc("rank1", None, "1"),
                doc("A", Some(1), "0"),
                doc("A", Some(1), "1"),
            ],
            plancherel_samples: 10,
            grid: GridSettings::new(12.0, 60),
            spectral: GridSettings::new(12.0, 60),
            kernel_degree: 30,
            mehta_tol: 1e-6,
            plancherel_tol: 1e-3,
            kernel_tol: 1e-10,
            classical_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SupportSettings {
    pub bump_power: i32,
    pub input_n: usize,
    pub translation_x: f64,
    pub translation_spectral: GridSettings,
    pub translation_output: GridSettings,
    pub convolution_radius: f64,
    pub convolution_center: Vec<f64>,
    pub convolution_spectral: GridSettings,
    pub convolution_output: GridSettings,
    pub threshold: f64,
    pub mollifier_tol: f64,
}

impl Default for SupportSettings {
    fn default() -> Self {
        SupportSettings {
            bump_power: 8,
            input_n: 64,
            translation_x: 2.0,
            translation_spectral: GridSettings::new(40.0, 160),
            translation_output: GridSettings::new(5.0, 200),
            convolution_radius: 0.5,
            convolution_center: vec![1.0, -0.5],
            convolution_spectral: GridSettings::new(30.0, 100),
            convolution_output: GridSettings::new(3.5, 120),
            threshold: 1e-4,
            mollifier_tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParametrixSettings {
    pub space: GridSettings,
    pub spectral: GridSettings,
    pub identity_tol: f64,
    pub symbol_order: u32,
}

impl Default for ParametrixSettings {
    fn default() -> Self {
        ParametrixSettings {
            space: GridSettings::new(12.0, 80),
            spectral: GridSettings::new(12.0, 80),
            identity_tol: 1e-3,
            symbol_order: 3,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SobolevSettings {
    pub space: GridSettings,
    pub spectral: GridSettings,
    pub orders: Vec<f64>,
    pub residual_tol: f64,
    pub ratio_slack: f64,
    pub norm_tol: f64,
}

impl Default for SobolevSettings {
    fn default() -> Self {
        SobolevSettings {
            space: GridSettings::new(24.0, 120),
            spectral: GridSettings::new(10.0, 120),
            orders: vec![0.0, 1.0, 2.0],
            residual_tol: 1e-3,
            ratio_slack: 1e-3,
            norm_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RieszCase {
    pub n: usize,
    pub k: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RieszSettings {
    pub cases: Vec<RieszCase>,
    pub z_samples: usize,
    pub shift: f64,
    pub laplace_tol: f64,
    pub pair_tol: f64,
    pub direct_tol: f64,
}

impl Default for RieszSettings {
    fn default() -> Self {
        let case = |n, k: &str| RieszCase { n, k: k.into() };
        RieszSettings {
            cases: vec![case(1, "0"), case(2, "0"), case(2, "1/2"), case(2, "1")],
            z_samples: 10,
            shift: 1.0,
            laplace_tol: 1e-3,
            pair_tol: 1e-6,
            direct_tol: 1e-4,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TableSettings {
    pub half_width: f64,
    pub mehta_resolutions: Vec<usize>,
    pub plancherel_resolutions: Vec<usize>,
    pub truncations: Vec<usize>,
    /// Kernel argument `x` for the truncation table; empty means `e₁`.
    pub x: Vec<f64>,
    /// Relative errors below this are treated as converged when checking
    /// monotone decrease.
    pub floor: f64,
}

impl Default for TableSettings {
    fn default() -> Self {
        TableSettings {
            half_width: 12.0,
            mehta_resolutions: vec![64, 128, 256],
            plancherel_resolutions: vec![8, 16, 32, 64],
            truncations: vec![5, 10, 20, 30],
            x: vec![],
            floor: 1e-12,
        }
    }
}

/// Test function `p(x)e^{−a|x|²/2}` in JSON form.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFnDoc {
    pub terms: Vec<PolyTermJson>,
    pub a: String,
}

impl TestFnDoc {
    pub fn build(&self, dim: usize) -> Result<TestFn> {
        let p = if self.terms.is_empty() {
            Poly::one(dim)
        } else {
            Poly::from_json_terms(dim, &self.terms)?
        };
        TestFn::new(p, parse_q(&self.a)?)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSettings {
    /// Spectral argument `λ` as `[re, im]` pairs; empty means `λ = (1, 0, …)`.
    pub lambda: Vec<[f64; 2]>,
    pub test_function: Option<TestFnDoc>,
    pub grid: GridSettings,
}

impl Default for EvalSettings {
    fn default() -> Self {
        EvalSettings {
            lambda: vec![],
            test_function: None,
            grid: GridSettings::new(12.0, 60),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSettings {
    pub report: Option<String>,
    pub table: Option<String>,
}

fn default_root_system() -> RootSystemDoc {
    doc("rank1", None, "1")
}

fn default_kernel() -> KernelStrategy {
    KernelStrategy::Auto
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    /// Root system for tables and point evaluation.
    #[serde(default = "default_root_system")]
    pub root_system: RootSystemDoc,
    #[serde(default = "default_kernel")]
    pub kernel: KernelStrategy,
    #[serde(default)]
    pub poly: PolySettings,
    #[serde(default)]
    pub transform: TransformSettings,
    #[serde(default)]
    pub supports: SupportSettings,
    #[serde(default)]
    pub parametrix: ParametrixSettings,
    #[serde(default)]
    pub sobolev: SobolevSettings,
    #[serde(default)]
    pub riesz: RieszSettings,
    #[serde(default)]
    pub tables: TableSettings,
    #[serde(default)]
    pub eval: EvalSettings,
    #[serde(default)]
    pub output: OutputSettings,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(DunklError::Config(format!("{name} must be a positive number, got {v}")))
    }
}

fn build_system(d: &RootSystemDoc) -> Result<(RootSystem, Multiplicity)> {
    d.build().map_err(|e| match e {
        DunklError::Config(_) => e,
        other => DunklError::Config(other.to_string()),
    })
}

impl Config {
    /// All defaults with the given seed.
    pub fn with_seed(seed: u64) -> Self {
        Config::from_value(serde_json::json!({ "seed": seed })).expect("defaults are valid")
    }

    /// Parses and validates a JSON document. `overrides` replace top-level
    /// keys; values that are not valid JSON are taken as strings.
    pub fn from_json(text: &str, overrides: &[(String, String)]) -> Result<Self> {
        let mut v: Value = serde_json::from_str(text).map_err(|e| DunklError::Config(e.to_string()))?;
        let obj = v
            .as_object_mut()
            .ok_or_else(|| DunklError::Config("configuration must be a JSON object".into()))?;
        for (key, raw) in overrides {
            let val = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.clone()));
            obj.insert(key.clone(), val);
        }
        Config::from_value(v)
    }

    pub fn from_value(v: Value) -> Result<Self> {
        let cfg: Config = serde_json::from_value(v).map_err(|e| DunklError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Tolerances positive, grids above their minimum resolutions, `k ≥ 0`.
    pub fn validate(&self) -> Result<()> {
        build_system(&self.root_system)?;
        if let KernelStrategy::Series { n_max, tol } = &self.kernel {
            positive("kernel.tol", *tol)?;
            if *n_max == 0 {
                return Err(DunklError::Config("kernel.n_max must be positive".into()));
            }
        }

        let p = &self.poly;
        for d in &p.systems {
            build_system(d)?;
        }
        if p.samples == 0 || p.max_degree == 0 || p.intertwiner_degree == 0 {
            return Err(DunklError::Config("poly sample counts and degrees must be positive".into()));
        }

        let t = &self.transform;
        for d in t.mehta_systems.iter().chain(&t.plancherel_systems) {
            build_system(d)?;
        }
        t.grid.validate("transform.grid", 32)?;
        t.spectral.validate("transform.spectral", 32)?;
        if t.kernel_degree < 5 {
            return Err(DunklError::Config("transform.kernel_degree must be at least 5".into()));
        }
        for (n, v) in [
            ("transform.mehta_tol", t.mehta_tol),
            ("transform.plancherel_tol", t.plancherel_tol),
            ("transform.kernel_tol", t.kernel_tol),
            ("transform.classical_tol", t.classical_tol),
        ] {
            positive(n, v)?;
        }

        let s = &self.supports;
        if s.input_n < 16 {
            return Err(DunklError::Config("supports.input_n must be at least 16".into()));
        }
        s.translation_spectral.validate("supports.translation_spectral", 64)?;
        s.translation_output.validate("supports.translation_output", 64)?;
        s.convolution_spectral.validate("supports.convolution_spectral", 48)?;
        s.convolution_output.validate("supports.convolution_output", 48)?;
        if s.convolution_center.len() != 2 {
            return Err(DunklError::Config("supports.convolution_center needs two coordinates".into()));
        }
        if s.bump_power < 2 {
            return Err(DunklError::Config("supports.bump_power must be at least 2".into()));
        }
        positive("supports.translation_x", s.translation_x.abs())?;
        positive("supports.convolution_radius", s.convolution_radius)?;
        positive("supports.threshold", s.threshold)?;
        positive("supports.mollifier_tol", s.mollifier_tol)?;

        let pm = &self.parametrix;
        pm.space.validate("parametrix.space", 32)?;
        pm.spectral.validate("parametrix.spectral", 32)?;
        positive("parametrix.identity_tol", pm.identity_tol)?;

        let so = &self.sobolev;
        so.space.validate("sobolev.space", 48)?;
        so.spectral.validate("sobolev.spectral", 48)?;
        if so.orders.iter().any(|s| *s < 0.0 || !s.is_finite()) {
            return Err(DunklError::Config("sobolev.orders must be nonnegative".into()));
        }
        positive("sobolev.residual_tol", so.residual_tol)?;
        positive("sobolev.ratio_slack", so.ratio_slack)?;
        positive("sobolev.norm_tol", so.norm_tol)?;

        let r = &self.riesz;
        for c in &r.cases {
            if c.n == 0 || c.n > 2 {
                return Err(DunklError::Config(format!("riesz case n = {} must be 1 or 2", c.n)));
            }
            let k = parse_q(&c.k).map_err(|e| DunklError::Config(e.to_string()))?;
            if k < num_traits::Zero::zero() {
                return Err(DunklError::Config("riesz k must be nonnegative".into()));
            }
        }
        if r.z_samples == 0 {
            return Err(DunklError::Config("riesz.z_samples must be positive".into()));
        }
        positive("riesz.shift", r.shift)?;
        positive("riesz.laplace_tol", r.laplace_tol)?;
        positive("riesz.pair_tol", r.pair_tol)?;
        positive("riesz.direct_tol", r.direct_tol)?;

        let tb = &self.tables;
        positive("tables.half_width", tb.half_width)?;
        positive("tables.floor", tb.floor)?;
        if tb.mehta_resolutions.iter().chain(&tb.plancherel_resolutions).any(|n| *n < 4) {
            return Err(DunklError::Config("table resolutions must be at least 4".into()));
        }
        if tb.truncations.iter().any(|n| *n > 80) {
            return Err(DunklError::Config("kernel truncations above 80 are not supported".into()));
        }

        self.eval.grid.validate("eval.grid", 16)?;
        if let Some(t) = &self.eval.test_function {
            let (rs, _) = build_system(&self.root_system)?;
            t.build(rs.ambient_dim()).map_err(|e| DunklError::Config(e.to_string()))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_is_mandatory() {
        assert!(matches!(Config::from_json("{}", &[]), Err(DunklError::Config(_))));
        assert!(Config::from_json(r#"{"seed": 3}"#, &[]).is_ok());
    }

    #[test]
    fn validation() {
        let low = r#"{"seed": 1, "transform": {"grid": {"half_width": 12, "n": 8}}}"#;
        let e = Config::from_json(low, &[]).unwrap_err().to_string();
        assert!(e.contains("minimum"), "{e}");
        let neg = r#"{"seed": 1, "poly": {"systems": [{"name": "rank1", "k_by_orbit": ["-1"]}]}}"#;
        assert!(Config::from_json(neg, &[]).is_err());
        let tol = r#"{"seed": 1, "riesz": {"laplace_tol": 0}}"#;
        assert!(Config::from_json(tol, &[]).is_err());
        assert!(Config::from_json(r#"{"seed": 1, "bogus": 2}"#, &[]).is_err());
    }

    #[test]
    fn overrides() {
        let c = Config::from_json(r#"{"seed": 1}"#, &[("seed".into(), "9".into())]).unwrap();
        assert_eq!(c.seed, 9);
    }
}
