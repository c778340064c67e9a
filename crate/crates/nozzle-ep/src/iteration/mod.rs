//! Two-layer fixed-point solve: the inner velocity/potential map and the outer transport map.

pub mod boundary;
pub mod maps;
pub mod rhs;

pub use boundary::{BoundaryData, Profile, Reference, Scope, Sigma};
pub use maps::{inner_fixed_point, inner_map_t1, outer_map_t2, solve_problem, InnerResult, InnerStep, OuterResult};
pub use rhs::{assemble_rhs, Rhs};

use ndarray::Array1;

use crate::background::{integrate_background, validate_inlet, BackgroundSolution};
use crate::domain::{quad, BasisKind, CosineBasis, GasConfig, Grid, InletState, NozzleGeometry, SineBasis};
use crate::error::{Error, Result};
use crate::linear::{assemble_bar_coefficients, BarCoefficients, MultiplierConfig};

/// Discretization and iteration controls.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub nr: usize,
    pub m: usize,
    /// Defaults to `8m + 1`.
    pub ntheta: Option<usize>,
    /// Sine modes of the divergence potential; defaults to `2(m + 1)`.
    pub n_sine: Option<usize>,
    pub basis: BasisKind,
    pub tol_inner: f64,
    pub tol_outer: f64,
    pub max_inner: usize,
    pub max_outer: usize,
    /// Under-relaxation factor in `(0, 1]`; 1 means plain iteration.
    pub relax: f64,
    /// Monitored set radii for `(𝒮, 𝒦)` and `(𝒰, 𝒱, Φ̌)`.
    pub delta_mu: f64,
    pub delta_nu: f64,
    /// Tolerance of the wall compatibility check on boundary data.
    pub compat_tol: f64,
    pub multiplier: MultiplierConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            nr: 129,
            m: 16,
            ntheta: None,
            n_sine: None,
            basis: BasisKind::Even,
            tol_inner: 1e-10,
            tol_outer: 1e-9,
            max_inner: 50,
            max_outer: 50,
            relax: 1.0,
            delta_mu: 0.1,
            delta_nu: 0.1,
            compat_tol: 1e-6,
            multiplier: MultiplierConfig::default(),
        }
    }
}

impl SolverConfig {
    pub fn ntheta(&self) -> usize {
        self.ntheta.unwrap_or(8 * self.m + 1)
    }

    pub fn n_sine(&self) -> usize {
        self.n_sine.unwrap_or(2 * (self.m + 1))
    }
}

/// Boundary data sampled on the angular nodes.
#[derive(Debug, Clone)]
pub struct Sampled {
    pub u_en: Array1<f64>,
    pub v_en: Array1<f64>,
    pub dv_en: Array1<f64>,
    pub e_en: Array1<f64>,
    pub d2e_en: Array1<f64>,
    pub phi_ex: Array1<f64>,
    pub d2phi_ex: Array1<f64>,
    pub k_en: Array1<f64>,
    pub s_en: Array1<f64>,
    /// `𝔤 = ∫_{-θ0}^θ r2 V_en`.
    pub lift_g: Array1<f64>,
}

/// One fully specified instance: physics, background, discretization and boundary data.
#[derive(Debug, Clone)]
pub struct Problem {
    pub gas: GasConfig,
    pub geo: NozzleGeometry,
    pub inlet: InletState,
    pub bd: BoundaryData,
    pub reference: Reference,
    pub cfg: SolverConfig,
    pub grid: Grid,
    pub bg: BackgroundSolution,
    pub bar: BarCoefficients,
    pub basis: CosineBasis,
    pub sine: SineBasis,
    pub data: Sampled,
}

impl Problem {
    /// Background, grid and sampled data; fails when the inlet is inadmissible or the boundary
    /// data violate wall compatibility.
    pub fn new(gas: GasConfig, geo: NozzleGeometry, inlet: InletState, bd: BoundaryData, cfg: SolverConfig) -> Result<Self> {
        let report = validate_inlet(&gas, &inlet, &geo);
        if !report.supersonic {
            return Err(Error::param("inlet", format!("entrance Mach number squared {} <= 1", report.m0sq)));
        }
        if !(cfg.relax > 0.0 && cfg.relax <= 1.0) {
            return Err(Error::param("relax", format!("{} not in (0, 1]", cfg.relax)));
        }
        let grid = Grid::new(&geo, cfg.nr, cfg.ntheta())?;
        if let Some(b) = &gas.b_field {
            grid.check_field(b)?;
        }
        let bg = integrate_background(&gas, &inlet, &geo, cfg.nr)?;
        let bar = assemble_bar_coefficients(&bg)?;
        let basis = CosineBasis::with_kind(geo.theta0, cfg.m, cfg.basis);
        basis.check_aliasing(grid.ntheta)?;
        let sine = SineBasis::new(geo.theta0, cfg.n_sine());
        sine.check_aliasing(grid.ntheta)?;
        let reference = Reference::new(&inlet, &bg);
        bd.check(&reference, &grid, cfg.compat_tol)?;
        let th = &grid.theta;
        let v_en = bd.v_en.sample(th);
        let lift_g = quad::cumulative_quartic((&v_en * geo.r2).view(), grid.dtheta);
        let data = Sampled {
            u_en: bd.u_en.sample(th),
            dv_en: th.mapv(|t| bd.v_en.derivative(t, 1, 0.0)),
            e_en: bd.e_en.sample(th),
            d2e_en: th.mapv(|t| bd.e_en.derivative(t, 2, reference.e0)),
            phi_ex: bd.phi_ex.sample(th),
            d2phi_ex: th.mapv(|t| bd.phi_ex.derivative(t, 2, reference.phi_r)),
            k_en: bd.k_en.sample(th),
            s_en: bd.s_en.sample(th),
            v_en,
            lift_g,
        };
        Ok(Self { gas, geo, inlet, bd, reference, cfg, grid, bg, bar, basis, sine, data })
    }

    pub fn sigma(&self) -> Result<Sigma> {
        self.bd.sigma(&self.reference, &self.gas, &self.grid)
    }
}
