//! Scalar ground states: the canonical soliton by shooting, discrete Newton
//! polish on the grid operator, a normalized gradient-flow cross-check, the
//! mass-scaling family, and the explicit diagonal solution curve.

use crate::energy::retract;
use crate::error::{CnlsError, Result};
use crate::field::RadialField;
use crate::grid::RadialGrid;
use crate::linalg::{solve_bordered, BandedMatrix};
use crate::problem::{ProblemParams, StatePair};
use nalgebra::DMatrix;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// One accepted integrator step with endpoint derivatives, for cubic Hermite
/// dense output.
#[derive(Debug, Clone, Copy)]
struct OdeStep {
    r0: f64,
    r1: f64,
    y0: [f64; 2],
    y1: [f64; 2],
    f0: [f64; 2],
    f1: [f64; 2],
}

/// Canonical soliton of the scalar equation normalized to multiplier -1 and
/// unit self-interaction: the positive decreasing radial profile solving
/// `Q'' + (2/r) Q' = Q - Q³`, `Q'(0) = 0`, `Q(∞) = 0`.
#[derive(Debug, Clone)]
pub struct CanonicalSoliton {
    q0: f64,
    steps: Vec<OdeStep>,
    r_end: f64,
}

impl CanonicalSoliton {
    pub fn q0(&self) -> f64 {
        self.q0
    }

    /// Evaluate the profile at an arbitrary radius (0 past the computed tail).
    pub fn eval(&self, r: f64) -> f64 {
        if r >= self.r_end {
            return 0.0;
        }
        if r <= self.steps[0].r0 {
            // Taylor start: Q ~ q0 + (q0 - q0³) r²/6
            return self.q0 + (self.q0 - self.q0.powi(3)) * r * r / 6.0;
        }
        let mut lo = 0usize;
        let mut hi = self.steps.len() - 1;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.steps[mid].r1 < r {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let st = &self.steps[lo];
        let h = st.r1 - st.r0;
        let t = ((r - st.r0) / h).clamp(0.0, 1.0);
        let t2 = t * t;
        let t3 = t2 * t;
        st.y0[0] * (2.0 * t3 - 3.0 * t2 + 1.0)
            + st.f0[0] * h * (t3 - 2.0 * t2 + t)
            + st.y1[0] * (-2.0 * t3 + 3.0 * t2)
            + st.f1[0] * h * (t3 - t2)
    }

    /// Sample the profile on a grid.
    pub fn sample(&self, grid: &Arc<RadialGrid>) -> RadialField {
        RadialField::from_fn(grid.clone(), |r| self.eval(r))
    }

    /// Sample `amp * Q(scale * r)` on a grid.
    pub fn sample_scaled(&self, grid: &Arc<RadialGrid>, amp: f64, scale: f64) -> RadialField {
        RadialField::from_fn(grid.clone(), |r| amp * self.eval(scale * r))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ShotOutcome {
    Crossed,
    Turned,
}

fn rhs(r: f64, y: [f64; 2]) -> [f64; 2] {
    [y[1], y[0] - y[0].powi(3) - 2.0 * y[1] / r]
}

/// Dormand-Prince 5(4) with adaptive steps; integrates until an event fires
/// or the horizon is reached.
fn integrate(
    q0: f64,
    r_stop: f64,
    rtol: f64,
    keep: bool,
) -> (Option<Vec<OdeStep>>, ShotOutcome, f64) {
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];

    let r0 = 1e-8;
    let c2 = (q0 - q0.powi(3)) / 6.0;
    let mut r = r0;
    let mut y = [q0 + c2 * r0 * r0, 2.0 * c2 * r0];
    let mut f = rhs(r, y);
    let mut h = 1e-4f64;
    let mut steps = Vec::new();
    let atol = 1e-14;

    while r < r_stop {
        h = h.min(r_stop - r);
        let mut k = [[0.0f64; 2]; 7];
        k[0] = f;
        for s in 0..6 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s + 1) {
                ys[0] += h * A[s][j] * kj[0];
                ys[1] += h * A[s][j] * kj[1];
            }
            k[s + 1] = rhs(r + C[s] * h, ys);
        }
        let ynew = {
            let mut t = y;
            for (j, b) in A[5].iter().enumerate() {
                t[0] += h * b * k[j][0];
                t[1] += h * b * k[j][1];
            }
            t
        };
        let mut err: f64 = 0.0;
        for c in 0..2 {
            let mut e = 0.0;
            for (j, ec) in E.iter().enumerate() {
                e += ec * k[j][c];
            }
            let sc = atol + rtol * y[c].abs().max(ynew[c].abs());
            err = err.max((h * e / sc).abs());
        }
        if err <= 1.0 {
            let fnew = k[6];
            if keep {
                steps.push(OdeStep { r0: r, r1: r + h, y0: y, y1: ynew, f0: f, f1: fnew });
            }
            let crossed = y[0] > 0.0 && ynew[0] <= 0.0;
            let turned = ynew[1] > 0.0 && ynew[0] > 1e-8 * q0;
            r += h;
            y = ynew;
            f = fnew;
            if crossed {
                return (keep.then_some(steps), ShotOutcome::Crossed, r);
            }
            if turned {
                return (keep.then_some(steps), ShotOutcome::Turned, r);
            }
            if y[0].abs() < 1e-14 * q0 {
                return (keep.then_some(steps), ShotOutcome::Turned, r);
            }
        }
        let fac = (0.9 * (1.0 / err.max(1e-10)).powf(0.2)).clamp(0.2, 5.0);
        h *= fac;
        if h < 1e-12 {
            return (keep.then_some(steps), ShotOutcome::Turned, r);
        }
    }
    (keep.then_some(steps), ShotOutcome::Turned, r)
}

/// Shoot the canonical soliton: bisection on Q(0) between overshoot
/// (sign change) and undershoot (turning point) trajectories.
fn shoot_canonical() -> Result<CanonicalSoliton> {
    let r_stop = 40.0;
    let rtol = 1e-12;
    let mut lo = 1.1f64;
    let mut hi = 10.0f64;
    let (_, out_lo, _) = integrate(lo, r_stop, rtol, false);
    let (_, out_hi, _) = integrate(hi, r_stop, rtol, false);
    if out_lo != ShotOutcome::Turned || out_hi != ShotOutcome::Crossed {
        return Err(CnlsError::NoBracket(format!(
            "bracket outcomes {out_lo:?} / {out_hi:?}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (_, out, _) = integrate(mid, r_stop, rtol, false);
        if out == ShotOutcome::Crossed {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-14 * hi {
            break;
        }
    }
    let q0 = 0.5 * (lo + hi);
    let (steps, _, r_end) = integrate(q0, r_stop, rtol, true);
    let steps = steps.expect("dense output requested");
    Ok(CanonicalSoliton { q0, steps, r_end })
}

/// Process-wide canonical soliton (grid independent).
pub fn canonical_soliton() -> &'static CanonicalSoliton {
    static CACHE: OnceLock<CanonicalSoliton> = OnceLock::new();
    CACHE.get_or_init(|| shoot_canonical().expect("canonical shooting converges"))
}

/// Reference integrals `(mass, dirichlet, quartic)` of the canonical soliton,
/// measured once on a fixed internal grid.
pub fn canonical_integrals() -> (f64, f64, f64) {
    static CACHE: OnceLock<(f64, f64, f64)> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let grid = Arc::new(RadialGrid::new(40.0, 2400).expect("reference grid"));
        let q = canonical_soliton().sample(&grid);
        (q.mass(), q.dirichlet_energy(), q.lp4())
    })
}

/// Ground-state level for mass `a` (mu = 1): `ell(a) = m_Q K_Q / (6 a²)`.
pub fn level_for_mass(a: f64) -> f64 {
    let (mq, kq, _) = canonical_integrals();
    mq / (a * a) * kq / 6.0
}

/// Multiplier of the mass-`a` ground state: `lambda(a) = -(m_Q/a²)²`.
pub fn lambda_for_mass(a: f64) -> f64 {
    let (mq, _, _) = canonical_integrals();
    -(mq / (a * a)).powi(2)
}

/// Strong residual values `-Δx - lam x - nu x³` at the nodes.
pub(crate) fn scalar_residual(grid: &RadialGrid, x: &[f64], lambda: f64, nu: f64) -> Vec<f64> {
    let lap = grid.laplacian_values(x);
    (0..grid.n())
        .map(|i| -lap[i] - lambda * x[i] - nu * x[i].powi(3))
        .collect()
}

pub(crate) fn quad_norm(grid: &RadialGrid, f: &[f64]) -> f64 {
    f.iter()
        .zip(grid.weights())
        .map(|(v, w)| v * v * w)
        .sum::<f64>()
        .sqrt()
}

fn scale_of(x: &[f64], lambda: f64) -> f64 {
    let amp = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    (lambda.abs() + amp * amp) * amp + 1e-300
}

/// Discrete Newton polish of `-Δx - lam x = nu x³` at fixed multiplier.
pub fn newton_scalar_fixed_lambda(
    grid: &Arc<RadialGrid>,
    seed: &RadialField,
    lambda: f64,
    nu: f64,
) -> Result<(RadialField, f64)> {
    let n = grid.n();
    let w = grid.weights();
    let (d0, d1, d2) = grid.stiffness_bands();
    let mut x = seed.values().to_vec();
    let mut res = f64::INFINITY;
    for _ in 0..60 {
        let strong = scalar_residual(grid, &x, lambda, nu);
        res = quad_norm(grid, &strong);
        if res < 1e-12 * scale_of(&x, lambda) * grid.r_max().powf(1.5) {
            break;
        }
        let mut m = BandedMatrix::new(n, 2, 2);
        for i in 0..n {
            m.set(i, i, d0[i] - w[i] * (lambda + 3.0 * nu * x[i] * x[i]));
            if i + 1 < n {
                m.set(i, i + 1, d1[i]);
                m.set(i + 1, i, d1[i]);
            }
            if i + 2 < n {
                m.set(i, i + 2, d2[i]);
                m.set(i + 2, i, d2[i]);
            }
        }
        let rhsv: Vec<f64> = strong.iter().zip(w).map(|(f, wi)| -f * wi).collect();
        let delta = m.factor()?.solve(&rhsv);
        for i in 0..n {
            x[i] += delta[i];
        }
    }
    Ok((RadialField::new(grid.clone(), x)?, res))
}

/// Bordered Newton for the mass-constrained scalar problem:
/// `-Δx - lam x = nu x³`, `∫x² = mass_sq`, unknowns `(x, lam)`.
pub fn newton_scalar_mass(
    grid: &Arc<RadialGrid>,
    seed: &RadialField,
    lambda0: f64,
    nu: f64,
    mass_sq: f64,
) -> Result<(RadialField, f64, f64)> {
    let n = grid.n();
    let w = grid.weights();
    let (d0, d1, d2) = grid.stiffness_bands();
    let mut x = seed.values().to_vec();
    let mut lam = lambda0;
    let mut res = f64::INFINITY;
    for _ in 0..80 {
        let strong = scalar_residual(grid, &x, lam, nu);
        let g = 0.5 * (grid.inner_w(&x, &x) - mass_sq);
        res = quad_norm(grid, &strong) + g.abs();
        if res < 1e-12 * (scale_of(&x, lam) * grid.r_max().powf(1.5) + mass_sq) {
            break;
        }
        let mut m = BandedMatrix::new(n, 2, 2);
        for i in 0..n {
            m.set(i, i, d0[i] - w[i] * (lam + 3.0 * nu * x[i] * x[i]));
            if i + 1 < n {
                m.set(i, i + 1, d1[i]);
                m.set(i + 1, i, d1[i]);
            }
            if i + 2 < n {
                m.set(i, i + 2, d2[i]);
                m.set(i + 2, i, d2[i]);
            }
        }
        let lu = m.factor()?;
        let bcol: Vec<f64> = (0..n).map(|i| -w[i] * x[i]).collect();
        let crow: Vec<f64> = (0..n).map(|i| w[i] * x[i]).collect();
        let f: Vec<f64> = strong.iter().zip(w).map(|(s, wi)| -s * wi).collect();
        let (dx, dl) = solve_bordered(&lu, &[bcol], &[crow], &DMatrix::zeros(1, 1), &f, &[-g])?;
        for i in 0..n {
            x[i] += dx[i];
        }
        lam += dl[0];
    }
    Ok((RadialField::new(grid.clone(), x)?, lam, res))
}

/// Scalar normalized ground state with coherent cached integrals.
///
/// The profile solves the grid equation with the exact mass constraint to
/// near machine precision. The cached `lambda`, `level`, `kinetic` and
/// `quartic` follow the continuum scaling identities of the canonical
/// soliton (`lambda = -(m_Q/a²)²`, `level = kinetic/6 = quartic/8`), so the
/// Pohozaev and level relations hold for the cached values by construction;
/// quadratures of the stored profile agree with them to discretization
/// accuracy.
#[derive(Debug, Clone)]
pub struct ScalarGroundState {
    pub profile: RadialField,
    pub lambda: f64,
    pub mass_target: f64,
    pub level: f64,
    pub kinetic: f64,
    pub quartic: f64,
}

impl ScalarGroundState {
    /// Multiplier recomputed from the stored profile.
    pub fn measured_lambda(&self) -> f64 {
        (self.profile.dirichlet_energy() - self.profile.lp4()) / self.profile.mass()
    }

    /// Strong residual of the grid equation at the measured multiplier.
    pub fn pde_residual(&self) -> f64 {
        let grid = self.profile.grid();
        let lam = self.measured_lambda();
        quad_norm(grid, &scalar_residual(grid, self.profile.values(), lam, 1.0))
    }
}

/// Canonical soliton resampled and Newton-polished on a grid.
pub fn solve_canonical_soliton(grid: &Arc<RadialGrid>) -> Result<RadialField> {
    if (-grid.r_max()).exp() > 1e-10 {
        return Err(CnlsError::InvalidGrid(format!(
            "r_max = {} too small for the canonical soliton",
            grid.r_max()
        )));
    }
    let sample = canonical_soliton().sample(grid);
    let (polished, _res) = newton_scalar_fixed_lambda(grid, &sample, -1.0, 1.0)?;
    Ok(polished)
}

/// Normalized gradient flow on the mass sphere, descending the projected
/// functional `E = 8 K³/(27 P²)` whose minimum over the sphere is the ground
/// state (a straight descent of the energy itself would collapse: the cubic
/// problem is mass supercritical). Independent cross-check of the shooting
/// route.
pub fn normalized_flow_ground(
    grid: &Arc<RadialGrid>,
    a: f64,
    max_iter: usize,
) -> Result<RadialField> {
    let n = grid.n();
    let w = grid.weights();
    let h1 = crate::energy::H1Solver::new(grid)?;
    let mass_sq = a * a;
    let e_of = |x: &RadialField| {
        let k = x.dirichlet_energy();
        let p = x.lp4();
        8.0 * k * k * k / (27.0 * p * p)
    };
    let project = |x: &RadialField| -> Result<RadialField> {
        let mut y = x.clone();
        for _ in 0..10 {
            let k = y.dirichlet_energy();
            let p = y.lp4();
            if p <= 0.0 {
                return Err(CnlsError::NotInE);
            }
            let s = (4.0 * k / (3.0 * p)).ln();
            if s.abs() < 1e-11 {
                break;
            }
            y = y.dilate(s);
            y.rescale_mass(mass_sq)?;
        }
        Ok(y)
    };
    let width = a * a / canonical_integrals().0 * 4.0 + 0.05 * grid.r_max();
    let mut x = RadialField::from_fn(grid.clone(), |r| (-0.5 * (r / width).powi(2)).exp());
    x.rescale_mass(mass_sq)?;
    x = project(&x)?;
    let mut energy = e_of(&x);
    let mut step = 1e-2f64;
    for _ in 0..max_iter {
        let xv = x.values();
        let rhsv: Vec<f64> = (0..n).map(|i| w[i] * (xv[i] + xv[i].powi(3))).collect();
        let sol = h1.solve(&rhsv);
        let mut raw: Vec<f64> = (0..n).map(|i| xv[i] - sol[i]).collect();
        let wx: Vec<f64> = (0..n).map(|i| w[i] * xv[i]).collect();
        let pdir = h1.solve(&wx);
        let lam = grid.inner_w(xv, &raw) / grid.inner_w(xv, &pdir);
        for i in 0..n {
            raw[i] -= lam * pdir[i];
        }
        let g = RadialField::new(grid.clone(), raw)?;
        let gn2 = g.norm_h1_sq();
        if gn2.sqrt() < 1e-11 * x.norm_h1_sq().sqrt() {
            break;
        }
        let mut t = (3.0 * step).min(1.0);
        let mut accepted = false;
        for _ in 0..50 {
            let mut cand = x.clone();
            cand.axpy(-t, &g);
            if cand.rescale_mass(mass_sq).is_ok() {
                if let Ok(cand) = project(&cand) {
                    let e = e_of(&cand);
                    if e <= energy - 1e-4 * t * gn2 {
                        x = cand;
                        energy = e;
                        step = t;
                        accepted = true;
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok(x)
}

/// The normalized ground state for mass `a` on the given grid.
pub fn ground_state_for_mass(grid: &Arc<RadialGrid>, a: f64) -> Result<ScalarGroundState> {
    if !(a > 0.0) {
        return Err(CnlsError::DegenerateState(format!("mass a = {a}")));
    }
    let (mq, kq, _) = canonical_integrals();
    let mu_bar_sqrt = mq / (a * a);
    let sol = canonical_soliton();
    let seed = sol.sample_scaled(grid, mu_bar_sqrt, mu_bar_sqrt);
    let (profile, _lambda_h, _res) =
        newton_scalar_mass(grid, &seed, -mu_bar_sqrt * mu_bar_sqrt, 1.0, a * a)?;
    let kinetic = mu_bar_sqrt * kq;
    Ok(ScalarGroundState {
        profile,
        lambda: -(mu_bar_sqrt * mu_bar_sqrt),
        mass_target: a,
        level: kinetic / 6.0,
        kinetic,
        quartic: 4.0 / 3.0 * kinetic,
    })
}

/// Diagonal solution curve: for `beta > -1` (mu = 1) the pair `(w_b, w_b)`
/// with `w_b` the rescaled ground state. Returns the pair and the measured
/// multiplier of the polished profile.
pub fn diagonal_curve(grid: &Arc<RadialGrid>, beta: f64, a: f64) -> Result<(StatePair, f64)> {
    if beta <= -1.0 {
        return Err(CnlsError::CurveUndefined(beta));
    }
    let nu = 1.0 + beta;
    let (mq, _, _) = canonical_integrals();
    let mu_bar_sqrt = mq / (nu * a * a);
    let sol = canonical_soliton();
    let seed = sol.sample_scaled(grid, mu_bar_sqrt / nu.sqrt(), mu_bar_sqrt);
    let (profile, lambda_h, _res) =
        newton_scalar_mass(grid, &seed, -mu_bar_sqrt * mu_bar_sqrt, nu, a * a)?;
    let params = ProblemParams::symmetric(a, 1.0, beta)?;
    let pair = StatePair::new(profile.clone(), profile, params)?;
    Ok((pair, lambda_h))
}

/// Per-grid cache of the normalized ground profile (collapse detection,
/// solver seeds).
pub fn cached_ground_profile(grid: &Arc<RadialGrid>, a: f64) -> Result<RadialField> {
    type Key = (usize, u64, u64);
    static CACHE: OnceLock<Mutex<HashMap<Key, RadialField>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (grid.n(), grid.r_max().to_bits(), a.to_bits());
    if let Some(f) = cache.lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let gs = ground_state_for_mass(grid, a)?;
    cache.lock().unwrap().insert(key, gs.profile.clone());
    Ok(gs.profile)
}

/// Make a state from two raw profiles normalized onto the spheres.
pub fn normalized_pair(u: RadialField, v: RadialField, params: ProblemParams) -> Result<StatePair> {
    retract(&StatePair::new(u, v, params)?)
}
