//! `key = value` run configuration. `#` starts a comment; keys are listed in `configs/README.md`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::background::integrate_background;
use crate::domain::{BasisKind, GasConfig, Grid, InletState, NozzleGeometry};
use crate::error::{Error, Result};
use crate::iteration::{BoundaryData, Problem, Profile, Reference, SolverConfig};

/// What `sweep` bisects on.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepTarget {
    /// A user parameter `param.<name>` used in the profile expressions.
    Param(String),
    /// The signed entrance field `e_entrance`.
    EntranceField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub target: SweepTarget,
    /// Bracket `[lo, hi]`; `lo` is expected to converge.
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

/// Expressions of the boundary profiles in `theta`; `None` means the background value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProfileSources {
    pub u_en: Option<String>,
    pub v_en: Option<String>,
    pub e_en: Option<String>,
    pub k_en: Option<String>,
    pub s_en: Option<String>,
    pub phi_ex: Option<String>,
    /// Expression in `r` and `theta`.
    pub b_field: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub gamma: f64,
    pub b0: f64,
    pub geo: NozzleGeometry,
    pub rho0: f64,
    pub u0: f64,
    pub p0: f64,
    pub e_entrance: f64,
    pub solver: SolverConfig,
    pub profiles: ProfileSources,
    pub params: Vec<(String, f64)>,
    pub sweep: Option<SweepConfig>,
    /// Radial resolutions of the `linear` check.
    pub linear_nrs: Vec<usize>,
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn num<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|_| Error::Config { line, msg: format!("`{key}`: cannot parse `{v}`") }),
        }
    }

    fn required(&mut self, key: &str) -> Result<f64> {
        self.num(key)?.ok_or_else(|| Error::Config { line: 0, msg: format!("missing required key `{key}`") })
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Config { line: n + 1, msg: format!("expected `key = value`, got `{line}`") })?;
            let k = k.trim().to_string();
            if map.insert(k.clone(), (n + 1, v.trim().to_string())).is_some() {
                return Err(Error::Config { line: n + 1, msg: format!("duplicate key `{k}`") });
            }
        }
        let mut e = Entries { map };

        let gamma = e.required("gamma")?;
        let b0 = e.required("b0")?;
        let geo = NozzleGeometry::new(e.required("r1")?, e.required("r2")?, e.required("theta0")?, e.required("depth")?)?;
        let (rho0, u0, p0, e_entrance) = (e.required("rho0")?, e.required("u0")?, e.required("p0")?, e.required("e_entrance")?);

        let mut s = SolverConfig::default();
        macro_rules! opt {
            ($key:literal, $field:expr) => {
                if let Some(v) = e.num($key)? {
                    $field = v;
                }
            };
        }
        opt!("nr", s.nr);
        opt!("m", s.m);
        s.ntheta = e.num("ntheta")?;
        s.n_sine = e.num("n_sine")?;
        opt!("tol_inner", s.tol_inner);
        opt!("tol_outer", s.tol_outer);
        opt!("max_inner", s.max_inner);
        opt!("max_outer", s.max_outer);
        opt!("relax", s.relax);
        opt!("delta_mu", s.delta_mu);
        opt!("delta_nu", s.delta_nu);
        opt!("compat_tol", s.compat_tol);
        opt!("multiplier.lambda0", s.multiplier.lambda0);
        opt!("multiplier.k_star", s.multiplier.k_star);
        opt!("multiplier.delta1", s.multiplier.delta1);
        opt!("multiplier.samples", s.multiplier.samples);
        if let Some((line, v)) = e.take("basis") {
            s.basis = match v.as_str() {
                "even" => BasisKind::Even,
                "full" => BasisKind::Full,
                _ => return Err(Error::Config { line, msg: format!("`basis`: expected `even` or `full`, got `{v}`") }),
            };
        }

        let profiles = ProfileSources {
            u_en: e.take("u_en").map(|x| x.1),
            v_en: e.take("v_en").map(|x| x.1),
            e_en: e.take("e_en").map(|x| x.1),
            k_en: e.take("k_en").map(|x| x.1),
            s_en: e.take("s_en").map(|x| x.1),
            phi_ex: e.take("phi_ex").map(|x| x.1),
            b_field: e.take("b_field").map(|x| x.1),
        };

        let linear_nrs = match e.take("linear.nrs") {
            None => vec![65, 129, 257],
            Some((line, v)) => v
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Config { line, msg: format!("`linear.nrs`: cannot parse `{v}`") })?,
        };

        let sweep = match e.take("sweep.target") {
            None => None,
            Some((line, v)) => {
                let target = if v == "e_entrance" {
                    SweepTarget::EntranceField
                } else if let Some(name) = v.strip_prefix("param.") {
                    SweepTarget::Param(name.to_string())
                } else {
                    return Err(Error::Config { line, msg: format!("`sweep.target`: expected `e_entrance` or `param.<name>`, got `{v}`") });
                };
                Some(SweepConfig { target, lo: e.required("sweep.lo")?, hi: e.required("sweep.hi")?, steps: e.num("sweep.steps")?.unwrap_or(12) })
            }
        };

        let keys: Vec<String> = e.map.keys().filter(|k| k.starts_with("param.")).cloned().collect();
        let mut params = Vec::new();
        for k in keys {
            let v: f64 = e.num(&k)?.unwrap();
            params.push((k["param.".len()..].to_string(), v));
        }
        if let Some((k, (line, _))) = e.map.iter().next() {
            return Err(Error::Config { line: *line, msg: format!("unknown key `{k}`") });
        }
        if let Some(SweepConfig { target: SweepTarget::Param(name), .. }) = &sweep {
            if !params.iter().any(|(n, _)| n == name) {
                return Err(Error::Config { line: 0, msg: format!("sweep parameter `{name}` has no `param.{name}` entry") });
            }
        }
        Ok(Self { gamma, b0, geo, rho0, u0, p0, e_entrance, solver: s, profiles, params, sweep, linear_nrs })
    }

    pub fn gas(&self) -> Result<GasConfig> {
        GasConfig::new(self.gamma, self.b0)
    }

    pub fn inlet(&self, gas: &GasConfig) -> Result<InletState> {
        InletState::new(self.rho0, self.u0, self.p0, self.e_entrance, gas, &self.geo)
    }

    pub fn set_param(&mut self, name: &str, value: f64) {
        match self.params.iter_mut().find(|(n, _)| n == name) {
            Some(p) => p.1 = value,
            None => self.params.push((name.to_string(), value)),
        }
    }

    /// Background, boundary data and grid assembled into a solvable instance.
    pub fn problem(&self) -> Result<Problem> {
        let gas = self.gas()?;
        let inlet = self.inlet(&gas)?;
        let bg = integrate_background(&gas, &inlet, &self.geo, self.solver.nr)?;
        let reference = Reference::new(&inlet, &bg);
        let mut scope = BoundaryData::scope(&reference, &self.geo);
        for (n, v) in &self.params {
            scope.set(n, *v);
        }
        let mut bd = BoundaryData::background(&reference);
        let p = &self.profiles;
        for (src, slot) in [
            (&p.u_en, &mut bd.u_en),
            (&p.v_en, &mut bd.v_en),
            (&p.e_en, &mut bd.e_en),
            (&p.k_en, &mut bd.k_en),
            (&p.s_en, &mut bd.s_en),
            (&p.phi_ex, &mut bd.phi_ex),
        ] {
            if let Some(s) = src {
                *slot = Profile::parse(s, &scope)?;
            }
        }
        let gas = match &p.b_field {
            None => gas,
            Some(src) => {
                let grid = Grid::new(&self.geo, self.solver.nr, self.solver.ntheta())?;
                let expr: meval::Expr = src.parse().map_err(|e| Error::Unsupported(format!("expression `{src}`: {e}")))?;
                let mut local = scope.clone().with("b0", self.b0);
                let mut b = grid.zeros();
                for ((i, j), v) in b.indexed_iter_mut() {
                    local.set("r", grid.r[i]);
                    local.set("theta", grid.theta[j]);
                    *v = expr.eval_with_context(&local).map_err(|e| Error::Unsupported(format!("expression `{src}`: {e}")))?;
                }
                gas.with_b_field(b)?
            }
        };
        Problem::new(gas, self.geo, inlet, bd, self.solver.clone())
    }
}
