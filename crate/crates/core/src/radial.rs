//! Hydrogenic radial functions at high `n`, and the radial density and
//! `⟨r⟩` of a packet built from them.
//!
//! `R_nl(r) = N x^l e^{-x/2} L^{(2l+1)}_{n-l-1}(x)` with `x = 2r/n`. The
//! normalisation involves `(n+l)!`, which overflows `f64` near `n = 85`, so
//! it is carried as a logarithm and combined with the power and exponential
//! factors before a single exponentiation. The Laguerre polynomial comes
//! from the upward three-term recurrence in the degree with a running
//! rescale.
//!
//! Quantum defects only shift energies here; the radial functions stay
//! hydrogenic.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::packet::WeightDistribution;
use crate::phase::reduced_phase;
use crate::spectrum::EnergyModel;

/// Largest supported principal quantum number.
pub const MAX_N: u32 = 100;
/// Inner edge of the default grid, in Bohr radii.
pub const DEFAULT_R_MIN: f64 = 1e-3;
/// Grid points per shortest local de Broglie wavelength.
pub const POINTS_PER_WAVELENGTH: f64 = 40.0;
pub const DEFAULT_L: u32 = 1;

const RESCALE_ABOVE: f64 = 1e150;
const LN_RESCALE: f64 = 345.38776394910684; // ln(1e150)

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadialState {
    n: u32,
    l: u32,
}

impl RadialState {
    pub fn new(n: u32, l: u32) -> Result<Self> {
        if n == 0 || l >= n {
            return Err(Error::IncompatibleL { n, l });
        }
        if n > MAX_N {
            return Err(Error::Unsupported { n, max: MAX_N });
        }
        Ok(Self { n, l })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// `ln N` with `N² = (2/n)³ (n-l-1)! / (2n (n+l)!)`.
    fn ln_normalization(&self) -> f64 {
        let n = f64::from(self.n);
        1.5 * (2.0 / n).ln()
            + 0.5
                * (ln_factorial(self.n - self.l - 1)
                    - (2.0 * n).ln()
                    - ln_factorial(self.n + self.l))
    }

    /// `R_nl(r)`, normalised so that `∫ R² r² dr = 1`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::Domain(format!("radius {r} must be nonnegative")));
        }
        Ok(self.eval_with(self.ln_normalization(), r))
    }

    fn eval_with(&self, ln_norm: f64, r: f64) -> f64 {
        let x = 2.0 * r / f64::from(self.n);
        if x == 0.0 {
            return if self.l == 0 {
                ln_norm.exp() * laguerre_at_zero(self.n - 1, 1)
            } else {
                0.0
            };
        }
        let (lag, ln_scale) = scaled_laguerre(self.n - self.l - 1, f64::from(2 * self.l + 1), x);
        if lag == 0.0 {
            return 0.0;
        }
        let ln_mag = ln_norm + f64::from(self.l) * x.ln() - 0.5 * x + ln_scale + lag.abs().ln();
        lag.signum() * ln_mag.exp()
    }
}

/// `R_nl(r)` for a single state.
pub fn radial_eval(state: RadialState, r: f64) -> Result<f64> {
    state.eval(r)
}

/// `ln k!` as a sum of logarithms; exact to rounding for the small integer
/// arguments used here.
fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|i| f64::from(i).ln()).sum()
}

/// `L_k^{(α)}(0) = C(k + α, k)` for integer α.
fn laguerre_at_zero(k: u32, alpha: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * f64::from(i + alpha) / f64::from(i))
}

/// Associated Laguerre polynomial `L_k^{(α)}(x)` returned as
/// `(mantissa, ln scale)` with value `mantissa · e^{scale}`.
fn scaled_laguerre(k: u32, alpha: f64, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    if k == 0 {
        return (prev, 0.0);
    }
    let mut cur = 1.0 + alpha - x;
    let mut ln_scale = 0.0;
    for j in 1..k {
        let j = f64::from(j);
        let next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur /= RESCALE_ABOVE;
            prev /= RESCALE_ABOVE;
            ln_scale += LN_RESCALE;
        }
    }
    (cur, ln_scale)
}

/// Radial abscissae with trapezoid quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    r: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    /// `points` equally spaced abscissae on `[r_min, r_max]`.
    pub fn uniform(r_min: f64, r_max: f64, points: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("[{r_min}, {r_max}]")));
        }
        if points < 2 {
            return Err(Error::InvalidGrid(format!("{points} points")));
        }
        let h = (r_max - r_min) / (points - 1) as f64;
        let r: Vec<f64> = (0..points).map(|i| r_min + i as f64 * h).collect();
        let mut weights = vec![h; points];
        weights[0] = 0.5 * h;
        weights[points - 1] = 0.5 * h;
        Ok(Self { r, weights })
    }

    /// Arbitrary strictly increasing positive abscissae with trapezoid weights.
    pub fn from_points(r: Vec<f64>) -> Result<Self> {
        if r.len() < 2 || !(r[0] > 0.0) || r.windows(2).any(|p| !(p[1] > p[0])) {
            return Err(Error::InvalidGrid(
                "abscissae must be positive and strictly increasing".into(),
            ));
        }
        let m = r.len();
        let mut weights = vec![0.0; m];
        for i in 0..m - 1 {
            let h = r[i + 1] - r[i];
            weights[i] += 0.5 * h;
            weights[i + 1] += 0.5 * h;
        }
        Ok(Self { r, weights })
    }

    /// Trapezoid rule in `s = √r` on `[√r_min, √r_max]` with `points`
    /// equally spaced nodes; the weight of node `i` is `2 s_i h` (plus the
    /// usual halving at the ends).
    pub fn sqrt_mapped(r_min: f64, r_max: f64, points: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("[{r_min}, {r_max}]")));
        }
        if points < 2 {
            return Err(Error::InvalidGrid(format!("{points} points")));
        }
        let (s0, s1) = (r_min.sqrt(), r_max.sqrt());
        let h = (s1 - s0) / (points - 1) as f64;
        let mut r = Vec::with_capacity(points);
        let mut weights = Vec::with_capacity(points);
        for i in 0..points {
            let s = s0 + i as f64 * h;
            let end = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
            r.push(s * s);
            weights.push(end * 2.0 * s * h);
        }
        Ok(Self { r, weights })
    }

    /// Default grid for states up to `n_max` with angular momentum `l`:
    /// `[10⁻³, 4 n_max²]`, uniform in `s = √r`.
    ///
    /// In `s` the local wavelength of a Coulomb state is `2π / (2 √r p(r))`
    /// with `p² = 2E + 2/r - l(l+1)/r²`; its minimum over the classically
    /// allowed region is `2π / (2 √(2 - 2√(l(l+1))/n))`. The spacing puts 40
    /// points in that shortest wavelength, so every local wavelength gets at
    /// least 40.
    pub fn for_states(n_max: u32, l: u32) -> Result<Self> {
        RadialState::new(n_max, l)?;
        let n = f64::from(n_max);
        let r_max = 4.0 * n * n;
        let centrifugal = f64::from(l * (l + 1)).sqrt();
        let k_max = 2.0 * (2.0 - 2.0 * centrifugal / n).max(1e-3).sqrt();
        let h = std::f64::consts::TAU / k_max / POINTS_PER_WAVELENGTH;
        let points = ((r_max.sqrt() - DEFAULT_R_MIN.sqrt()) / h).ceil() as usize + 1;
        Self::sqrt_mapped(DEFAULT_R_MIN, r_max, points)
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Quadrature of sampled values `f(r_i)`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.r.len());
        self.weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }
}

/// Tabulated radial functions of a packet's support on a fixed grid.
///
/// Building the table is the expensive part; densities at many times reuse it.
#[derive(Debug, Clone)]
pub struct RadialBasis {
    l: u32,
    grid: RadialGrid,
    amplitudes: Vec<f64>,
    ns: Vec<u32>,
    /// `table[k][i] = R_{n_k l}(r_i)`
    table: Vec<Vec<f64>>,
}

impl RadialBasis {
    pub fn new(weights: &WeightDistribution, l: u32, grid: RadialGrid) -> Result<Self> {
        let n_min = weights.n_min();
        if l >= n_min {
            return Err(Error::IncompatibleL { n: n_min, l });
        }
        let states = weights
            .levels()
            .iter()
            .map(|lv| RadialState::new(lv.n, l))
            .collect::<Result<Vec<_>>>()?;
        let table = states
            .par_iter()
            .map(|s| {
                let ln_norm = s.ln_normalization();
                grid.r().iter().map(|&r| s.eval_with(ln_norm, r)).collect()
            })
            .collect();
        Ok(Self {
            l,
            amplitudes: weights.levels().iter().map(|lv| lv.w.sqrt()).collect(),
            ns: weights.levels().iter().map(|lv| lv.n).collect(),
            grid,
            table,
        })
    }

    /// Basis on the default grid for the distribution's highest level.
    pub fn with_default_grid(weights: &WeightDistribution, l: u32) -> Result<Self> {
        let grid = RadialGrid::for_states(weights.n_max(), l)?;
        Self::new(weights, l, grid)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// `|Σ √w_n R_nl(r) e^{-i E_n t}|² r²` at each grid point.
    pub fn density(&self, model: &EnergyModel, t: f64) -> Vec<f64> {
        let coeffs: Vec<Complex64> = self
            .ns
            .iter()
            .zip(&self.amplitudes)
            .map(|(&n, &a)| {
                let (s, c) = reduced_phase(model.level_energy(n), t).sin_cos();
                Complex64::new(a * c, -a * s)
            })
            .collect();
        self.grid
            .r()
            .par_iter()
            .enumerate()
            .map(|(i, &r)| {
                let mut psi = Complex64::new(0.0, 0.0);
                for (c, row) in coeffs.iter().zip(&self.table) {
                    psi += c * row[i];
                }
                psi.norm_sqr() * r * r
            })
            .collect()
    }

    pub fn expectation_r(&self, model: &EnergyModel, t: f64) -> f64 {
        let rho = self.density(model, t);
        let norm = self.grid.integrate(&rho);
        let first: f64 = self
            .grid
            .weights()
            .iter()
            .zip(self.grid.r())
            .zip(&rho)
            .map(|((w, r), p)| w * r * p)
            .sum();
        first / norm
    }
}

/// Radial probability density of the packet at time `t` on `grid`.
pub fn density(
    model: &EnergyModel,
    weights: &WeightDistribution,
    l: u32,
    grid: &RadialGrid,
    t: f64,
) -> Result<Vec<f64>> {
    Ok(RadialBasis::new(weights, l, grid.clone())?.density(model, t))
}

/// `⟨r⟩(t) = ∫ r ρ dr / ∫ ρ dr`, in Bohr radii.
pub fn expectation_r(
    model: &EnergyModel,
    weights: &WeightDistribution,
    l: u32,
    grid: &RadialGrid,
    t: f64,
) -> Result<f64> {
    Ok(RadialBasis::new(weights, l, grid.clone())?.expectation_r(model, t))
}

/// Shape overlap `[∫ √(ρ_a ρ_b) dr]²` of two densities on the same grid.
pub fn density_overlap(grid: &RadialGrid, a: &[f64], b: &[f64]) -> f64 {
    let s: f64 = grid
        .weights()
        .iter()
        .zip(a.iter().zip(b))
        .map(|(w, (x, y))| w * (x * y).sqrt())
        .sum();
    s * s
}
