//! The energy functional J, the dilation fiber map, the closed-form
//! projection onto the Pohozaev manifold, constrained gradients with
//! Lagrange multiplier extraction, and the Hessian quadratic form.

use crate::error::{CnlsError, Result};
use crate::field::RadialField;
use crate::grid::RadialGrid;
use crate::linalg::{BandedLu, BandedMatrix};
use crate::problem::{DiagnosticsBundle, ProblemParams, StatePair};

/// Relative tolerance for membership in the Pohozaev manifold.
pub const TOL_POH: f64 = 1e-8;
/// Relative tolerance for the on-sphere mass constraint.
pub const TOL_MASS: f64 = 1e-10;

/// Kinetic part `∫ |∇u|² + |∇v|²`.
pub fn kinetic(state: &StatePair) -> f64 {
    state.u.dirichlet_energy() + state.v.dirichlet_energy()
}

/// Quartic interaction `∫ mu1 u⁴ + 2 beta u²v² + mu2 v⁴`.
pub fn quartic(state: &StatePair) -> f64 {
    let p = &state.params;
    let cross = state
        .u
        .mixed_quartic(&state.v)
        .expect("components share a grid by construction");
    p.mu1 * state.u.lp4() + 2.0 * p.beta * cross + p.mu2 * state.v.lp4()
}

/// The energy `J(u,v) = 1/2 kinetic - 1/4 quartic`.
pub fn energy(state: &StatePair) -> f64 {
    0.5 * kinetic(state) - 0.25 * quartic(state)
}

/// Segregation measure `∫ u² v²`.
pub fn segregation(state: &StatePair) -> f64 {
    state.u.mixed_quartic(&state.v).expect("shared grid")
}

/// Energy along the dilation orbit, evaluated from the cached integrals:
/// `Ψ(s) = e^{2s}/2 kinetic - e^{3s}/4 quartic`.
pub fn fiber_value(state: &StatePair, s: f64) -> f64 {
    let k = kinetic(state);
    let q = quartic(state);
    0.5 * (2.0 * s).exp() * k - 0.25 * (3.0 * s).exp() * q
}

/// The unique maximizer of the fiber map, `exp(s) = 4 kinetic / (3 quartic)`.
/// Fails when the state has nonpositive quartic interaction.
pub fn s_map(state: &StatePair) -> Result<f64> {
    let k = kinetic(state);
    let q = quartic(state);
    if q <= 0.0 {
        return Err(CnlsError::NotInE);
    }
    Ok((4.0 * k / (3.0 * q)).ln())
}

/// The projected energy `E = 8 kinetic³ / (27 quartic²)`, i.e. the value of
/// J at the fiber maximizer.
pub fn projected_energy(state: &StatePair) -> Result<f64> {
    let k = kinetic(state);
    let q = quartic(state);
    if q <= 0.0 {
        return Err(CnlsError::NotInE);
    }
    Ok(8.0 * k * k * k / (27.0 * q * q))
}

/// Dilate both components by the same parameter (mass-preserving up to
/// interpolation error).
pub fn dilate_both(state: &StatePair, s: f64) -> StatePair {
    StatePair {
        u: state.u.dilate(s),
        v: state.v.dilate(s),
        params: state.params,
    }
}

/// Rescale both components back onto their mass spheres.
pub fn retract(state: &StatePair) -> Result<StatePair> {
    let mut u = state.u.clone();
    let mut v = state.v.clone();
    u.rescale_mass(state.params.a1 * state.params.a1)?;
    v.rescale_mass(state.params.a2 * state.params.a2)?;
    Ok(StatePair { u, v, params: state.params })
}

/// Project a state onto the Pohozaev manifold by dilation, polishing the
/// dilation parameter against the resampled integrals until the residual
/// `kinetic - 3/4 quartic` is below [`TOL_POH`] relative to the kinetic part.
pub fn pohozaev_project(state: &StatePair) -> Result<StatePair> {
    let k0 = kinetic(state);
    let q0 = quartic(state);
    if q0 <= 0.0 {
        return Err(CnlsError::NotInE);
    }
    let mut s = (4.0 * k0 / (3.0 * q0)).ln();
    for _ in 0..16 {
        let cand = retract(&dilate_both(state, s))?;
        let k = kinetic(&cand);
        let q = quartic(&cand);
        if q <= 0.0 {
            return Err(CnlsError::NotInE);
        }
        if (k - 0.75 * q).abs() <= TOL_POH * k {
            return Ok(cand);
        }
        s += (4.0 * k / (3.0 * q)).ln();
    }
    Err(CnlsError::NumericalFailure(
        "Pohozaev projection did not reach tolerance".into(),
    ))
}

/// Banded factorization of the H¹ operator `K + W`, reused across gradient
/// evaluations on a fixed grid.
pub struct H1Solver {
    lu: BandedLu,
}

impl H1Solver {
    pub fn new(grid: &RadialGrid) -> Result<Self> {
        let n = grid.n();
        let (d0, d1, d2) = grid.stiffness_bands();
        let w = grid.weights();
        let mut m = BandedMatrix::new(n, 2, 2);
        for i in 0..n {
            m.set(i, i, d0[i] + w[i]);
            if i + 1 < n {
                m.set(i, i + 1, d1[i]);
                m.set(i + 1, i, d1[i]);
            }
            if i + 2 < n {
                m.set(i, i + 2, d2[i]);
                m.set(i + 2, i, d2[i]);
            }
        }
        Ok(Self { lu: m.factor()? })
    }

    /// Solve `(K + W) x = rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        self.lu.solve(rhs)
    }
}

/// The constrained H¹-preconditioned gradient of J together with the
/// multiplier estimates fixed by L²-orthogonality to the components.
pub struct GradientPair {
    pub gu: RadialField,
    pub gv: RadialField,
    pub lambda1: f64,
    pub lambda2: f64,
}

pub fn gradient(state: &StatePair, h1: &H1Solver) -> Result<GradientPair> {
    let grid = state.grid().clone();
    let w = grid.weights();
    let p = &state.params;
    let n = grid.n();

    let comp = |x: &RadialField, cubic: Vec<f64>| -> (RadialField, f64) {
        // raw = x - (K+W)^{-1} W (x + cubic); then subtract the multiplier
        // direction p_x = (K+W)^{-1} W x so that <x, grad>_w = 0
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            rhs[i] = w[i] * (x.values()[i] + cubic[i]);
        }
        let sol = h1.solve(&rhs);
        let mut raw: Vec<f64> = x.values().iter().zip(&sol).map(|(a, b)| a - b).collect();
        let wrhs: Vec<f64> = (0..n).map(|i| w[i] * x.values()[i]).collect();
        let pdir = h1.solve(&wrhs);
        let num = grid.inner_w(x.values(), &raw);
        let den = grid.inner_w(x.values(), &pdir);
        let lambda = num / den;
        for i in 0..n {
            raw[i] -= lambda * pdir[i];
        }
        (
            RadialField::new(grid.clone(), raw).expect("finite gradient"),
            lambda,
        )
    };

    let uv = state.u.values();
    let vv = state.v.values();
    let cubic_u: Vec<f64> = (0..n)
        .map(|i| p.mu1 * uv[i].powi(3) + p.beta * uv[i] * vv[i] * vv[i])
        .collect();
    let cubic_v: Vec<f64> = (0..n)
        .map(|i| p.mu2 * vv[i].powi(3) + p.beta * vv[i] * uv[i] * uv[i])
        .collect();

    let (gu, lambda1) = comp(&state.u, cubic_u);
    let (gv, lambda2) = comp(&state.v, cubic_v);
    Ok(GradientPair { gu, gv, lambda1, lambda2 })
}

/// H¹ norm of a gradient pair.
pub fn grad_norm(g: &GradientPair) -> f64 {
    (g.gu.norm_h1_sq() + g.gv.norm_h1_sq()).sqrt()
}

/// Multiplier estimates from the Rayleigh identities
/// `lambda_1 = (∫|∇u|² - mu1 ∫u⁴ - beta ∫u²v²) / a1²` (exact at solutions).
pub fn rayleigh_multipliers(state: &StatePair) -> (f64, f64) {
    let p = &state.params;
    let cross = segregation(state);
    let l1 = (state.u.dirichlet_energy() - p.mu1 * state.u.lp4() - p.beta * cross)
        / state.u.mass();
    let l2 = (state.v.dirichlet_energy() - p.mu2 * state.v.lp4() - p.beta * cross)
        / state.v.mass();
    (l1, l2)
}

/// Strong residual of the coupled system in the quadrature norm,
/// `‖-Δu - λ1 u - mu1 u³ - beta u v²‖ ⊕ (u <-> v)`.
pub fn system_residual(state: &StatePair, lambda1: f64, lambda2: f64) -> f64 {
    let grid = state.grid();
    let p = &state.params;
    let lap_u = grid.laplacian_values(state.u.values());
    let lap_v = grid.laplacian_values(state.v.values());
    let mut acc = 0.0;
    for i in 0..grid.n() {
        let (u, v) = (state.u.values()[i], state.v.values()[i]);
        let ru = -lap_u[i] - lambda1 * u - p.mu1 * u * u * u - p.beta * u * v * v;
        let rv = -lap_v[i] - lambda2 * v - p.mu2 * v * v * v - p.beta * v * u * u;
        acc += grid.weights()[i] * (ru * ru + rv * rv);
    }
    acc.sqrt()
}

/// The second variation of J at an (approximate) critical point, as a
/// symmetric bilinear form on tangent directions of the mass spheres.
pub fn hessian_form(
    state: &StatePair,
    dir1: (&RadialField, &RadialField),
    dir2: (&RadialField, &RadialField),
) -> Result<f64> {
    let grid = state.grid();
    for (base, d) in [
        (&state.u, dir1.0),
        (&state.v, dir1.1),
        (&state.u, dir2.0),
        (&state.v, dir2.1),
    ] {
        let viol = grid.inner_w(base.values(), d.values()).abs();
        let scale = (base.mass() * d.mass()).sqrt();
        if scale > 0.0 && viol > 1e-8 * scale {
            return Err(CnlsError::NotTangent(viol / scale));
        }
    }
    let (l1, l2) = rayleigh_multipliers(state);
    Ok(hessian_form_with_multipliers(state, dir1, dir2, l1, l2))
}

pub fn hessian_form_with_multipliers(
    state: &StatePair,
    dir1: (&RadialField, &RadialField),
    dir2: (&RadialField, &RadialField),
    lambda1: f64,
    lambda2: f64,
) -> f64 {
    let grid = state.grid();
    let p = &state.params;
    let n = grid.n();
    let w = grid.weights();
    let (phi1, psi1) = dir1;
    let (phi2, psi2) = dir2;
    let mut val = grid.stiffness_form(phi1.values(), phi2.values())
        + grid.stiffness_form(psi1.values(), psi2.values());
    for i in 0..n {
        let (u, v) = (state.u.values()[i], state.v.values()[i]);
        let (p1, q1) = (phi1.values()[i], psi1.values()[i]);
        let (p2, q2) = (phi2.values()[i], psi2.values()[i]);
        val -= w[i] * lambda1 * p1 * p2 + w[i] * lambda2 * q1 * q2;
        val -= w[i]
            * ((3.0 * p.mu1 * u * u + p.beta * v * v) * p1 * p2
                + (3.0 * p.mu2 * v * v + p.beta * u * u) * q1 * q2
                + 2.0 * p.beta * u * v * (p1 * q2 + p2 * q1));
    }
    val
}

/// Gagliardo-Nirenberg ratio `∫f⁴ / ((∫f²)^{1/2} (∫|∇f|²)^{3/2})`.
pub fn gn_ratio(f: &RadialField) -> Result<f64> {
    let m = f.mass();
    let d = f.dirichlet_energy();
    if m <= 0.0 || d <= 0.0 {
        return Err(CnlsError::UndefinedRatio);
    }
    Ok(f.lp4() / (m.sqrt() * d.powf(1.5)))
}

/// Assemble the standard diagnostics of a state.
pub fn diagnostics(state: &StatePair, grad_norm: f64) -> DiagnosticsBundle {
    let k = kinetic(state);
    let q = quartic(state);
    let (l1, l2) = rayleigh_multipliers(state);
    DiagnosticsBundle {
        kinetic: k,
        quartic: q,
        pohozaev_residual: k - 0.75 * q,
        lambda1: l1,
        lambda2: l2,
        grad_norm,
        segregation: segregation(state),
    }
}

/// Convenience constructor: normalized state from two raw profiles.
pub fn state_from_profiles(
    u: RadialField,
    v: RadialField,
    params: ProblemParams,
) -> Result<StatePair> {
    retract(&StatePair::new(u, v, params)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn gaussian_state(beta: f64) -> StatePair {
        let g = Arc::new(RadialGrid::new(40.0, 2000).unwrap());
        let u = RadialField::from_fn(g.clone(), |r| (-r * r / 2.0).exp());
        let v = RadialField::from_fn(g, |r| (-r * r / 2.0).exp());
        let params = ProblemParams::new(u.mass().sqrt(), v.mass().sqrt(), 1.0, 1.0, beta).unwrap();
        StatePair::new(u, v, params).unwrap()
    }

    #[test]
    fn gaussian_energy_matches_hand_value() {
        // J = 1/2 (2 * 3/2 pi^{3/2}) - 1/4 (2 * (pi/2)^{3/2}) at beta = 0
        let st = gaussian_state(0.0);
        let expected = 1.5 * PI.powf(1.5) - 0.5 * (PI / 2.0).powf(1.5);
        assert_relative_eq!(energy(&st), expected, max_relative = 1e-5);
        assert!((energy(&st) - 7.3681).abs() < 1e-4 * 7.3681 + 2e-4);
    }

    #[test]
    fn fiber_at_zero_is_energy() {
        let st = gaussian_state(-0.5);
        assert_relative_eq!(fiber_value(&st, 0.0), energy(&st), max_relative = 1e-12);
    }

    #[test]
    fn fiber_decreases_past_the_maximum() {
        let st = gaussian_state(0.0);
        let s = s_map(&st).unwrap();
        let at_max = fiber_value(&st, s);
        for ds in [0.3, 1.0, 3.0] {
            assert!(fiber_value(&st, s + ds) < at_max);
            assert!(fiber_value(&st, s - ds) < at_max);
        }
        assert!(fiber_value(&st, s + 8.0) < 0.0);
    }

    #[test]
    fn gaussian_s_map_value() {
        // exp(s) = 4 K / (3 Q) with K = 2 * (3/2) pi^{3/2}, Q = 2 (pi/2)^{3/2}
        let st = gaussian_state(0.0);
        let s = s_map(&st).unwrap();
        let expected = (4.0 * 3.0 * PI.powf(1.5) / (3.0 * 2.0 * (PI / 2.0).powf(1.5))).ln();
        assert_relative_eq!(s, expected, max_relative = 1e-6);
        assert!((s - 1.733).abs() < 1e-3);
    }

    #[test]
    fn s_map_requires_positive_quartic() {
        // strongly negative coupling drives the quartic negative
        let st = gaussian_state(-4.0);
        assert!(quartic(&st) < 0.0);
        assert!(matches!(s_map(&st), Err(CnlsError::NotInE)));
        assert!(matches!(projected_energy(&st), Err(CnlsError::NotInE)));
        assert!(matches!(pohozaev_project(&st), Err(CnlsError::NotInE)));
    }

    #[test]
    fn shift_law_of_the_s_map() {
        let st = gaussian_state(-0.3);
        let s0 = s_map(&st).unwrap();
        for t in [-0.5, 0.25, 0.8] {
            let shifted = retract(&dilate_both(&st, t)).unwrap();
            let s1 = s_map(&shifted).unwrap();
            assert!(
                (s1 - (s0 - t)).abs() < 1e-6 * (1.0 + s0.abs()),
                "t={t}: {s1} vs {}",
                s0 - t
            );
        }
    }

    #[test]
    fn projected_energy_gaussian_and_invariance() {
        let st = gaussian_state(0.0);
        let k = kinetic(&st);
        let q = quartic(&st);
        let e = projected_energy(&st).unwrap();
        assert_relative_eq!(e, 8.0 * k * k * k / (27.0 * q * q), max_relative = 1e-12);
        assert!((e - 89.12).abs() < 1e-2 * 89.12);
        for s in [-1.0, -0.4, 0.5, 1.0] {
            let d = retract(&dilate_both(&st, s)).unwrap();
            assert_relative_eq!(
                projected_energy(&d).unwrap(),
                e,
                max_relative = 1e-4
            );
        }
    }

    #[test]
    fn projection_lands_on_pohozaev_manifold() {
        let st = gaussian_state(-0.5);
        let proj = pohozaev_project(&st).unwrap();
        let k = kinetic(&proj);
        let q = quartic(&proj);
        assert!((k - 0.75 * q).abs() <= TOL_POH * k);
        // on P the s-map vanishes and J = kinetic/6 = quartic/8
        assert!(s_map(&proj).unwrap().abs() < 1e-7);
        // J = kinetic/6 = quartic/8 up to the projection tolerance
        assert_relative_eq!(energy(&proj), k / 6.0, max_relative = 5.0 * TOL_POH);
        assert_relative_eq!(energy(&proj), q / 8.0, max_relative = 5.0 * TOL_POH);
        // masses preserved
        assert!(proj.is_on_sphere(1e-10));
        // idempotence
        let again = pohozaev_project(&proj).unwrap();
        assert!(proj.dist_h1(&again) < 1e-6 * proj.u.norm_h1_sq().sqrt());
        // projected energy equals J on P
        assert_relative_eq!(
            projected_energy(&proj).unwrap(),
            energy(&proj),
            max_relative = 1e-7
        );
    }

    #[test]
    fn gradient_is_l2_orthogonal_and_matches_fd() {
        let g = Arc::new(RadialGrid::new(30.0, 1200).unwrap());
        let u = RadialField::from_fn(g.clone(), |r| (1.0 + 0.3 * r) * (-r * r / 2.0).exp());
        let v = RadialField::from_fn(g.clone(), |r| (-0.4 * (r - 1.5) * (r - 1.5)).exp());
        let params = ProblemParams::new(
            u.mass().sqrt(),
            v.mass().sqrt(),
            1.0,
            1.3,
            -0.7,
        )
        .unwrap();
        let st = StatePair::new(u, v, params).unwrap();
        let h1 = H1Solver::new(&g).unwrap();
        let gr = gradient(&st, &h1).unwrap();

        // L2 orthogonality
        let o1 = g.inner_w(st.u.values(), gr.gu.values()).abs();
        let o2 = g.inner_w(st.v.values(), gr.gv.values()).abs();
        assert!(o1 < 1e-10 * st.u.mass().sqrt() * gr.gu.mass().sqrt().max(1e-30));
        assert!(o2 < 1e-10 * st.v.mass().sqrt() * gr.gv.mass().sqrt().max(1e-30));

        // finite-difference directional derivative along a tangent direction
        let mut phi = RadialField::from_fn(g.clone(), |r| (0.9 * r).sin() * (-0.3 * r).exp());
        let c = g.inner_w(st.u.values(), phi.values()) / st.u.mass();
        let mut tmp = st.u.clone();
        tmp.scale(c);
        phi.axpy(-1.0, &tmp);
        let mut psi = RadialField::from_fn(g.clone(), |r| (-0.2 * (r - 2.0) * (r - 2.0)).exp());
        let c = g.inner_w(st.v.values(), psi.values()) / st.v.mass();
        let mut tmp = st.v.clone();
        tmp.scale(c);
        psi.axpy(-1.0, &tmp);

        let eps = 1e-5;
        let perturbed = |sgn: f64| {
            let mut u = st.u.clone();
            u.axpy(sgn * eps, &phi);
            let mut v = st.v.clone();
            v.axpy(sgn * eps, &psi);
            energy(&StatePair::new(u, v, params).unwrap())
        };
        let fd = (perturbed(1.0) - perturbed(-1.0)) / (2.0 * eps);
        let an = gr.gu.inner_h1(&phi).unwrap() + gr.gv.inner_h1(&psi).unwrap();
        assert_relative_eq!(fd, an, max_relative = 1e-6);
    }

    #[test]
    fn decoupled_identical_components_share_multiplier() {
        let st = gaussian_state(0.0);
        let h1 = H1Solver::new(st.grid()).unwrap();
        let gr = gradient(&st, &h1).unwrap();
        assert_relative_eq!(gr.lambda1, gr.lambda2, max_relative = 1e-10);
        let (r1, r2) = rayleigh_multipliers(&st);
        assert_relative_eq!(r1, r2, max_relative = 1e-10);
    }

    #[test]
    fn sigma_symmetry_of_energy_and_s_map() {
        let g = Arc::new(RadialGrid::new(30.0, 900).unwrap());
        let u = RadialField::from_fn(g.clone(), |r| (-r * r / 2.0).exp());
        let v = RadialField::from_fn(g, |r| (-0.5 * (r - 1.0) * (r - 1.0)).exp());
        let a = u.mass().sqrt().max(v.mass().sqrt());
        let params = ProblemParams::symmetric(a, 1.0, -0.4).unwrap();
        let st = retract(&StatePair::new(u, v, params).unwrap()).unwrap();
        let sw = st.swapped();
        assert_eq!(energy(&st), energy(&sw));
        assert_eq!(s_map(&st).unwrap(), s_map(&sw).unwrap());
    }

    #[test]
    fn projected_energy_decreases_in_beta() {
        let g = Arc::new(RadialGrid::new(30.0, 900).unwrap());
        let u = RadialField::from_fn(g.clone(), |r| (-r * r / 2.0).exp());
        let v = RadialField::from_fn(g, |r| (-0.6 * r * r).exp());
        let params = ProblemParams::new(u.mass().sqrt(), v.mass().sqrt(), 1.0, 1.0, 0.0).unwrap();
        let st = StatePair::new(u, v, params).unwrap();
        assert!(segregation(&st) > 0.0);
        let mut prev = f64::INFINITY;
        for beta in [-0.4, -0.2, 0.0, 0.2] {
            let mut s2 = st.clone();
            s2.params.beta = beta;
            let e = projected_energy(&s2).unwrap();
            assert!(e < prev, "E not strictly decreasing in beta at {beta}");
            prev = e;
        }
    }

    #[test]
    fn gn_ratio_gaussian_and_dilation_invariance() {
        let g = Arc::new(RadialGrid::new(40.0, 2000).unwrap());
        let f = RadialField::from_fn(g.clone(), |r| (-r * r / 2.0).exp());
        let ratio = gn_ratio(&f).unwrap();
        let expected = (PI / 2.0).powf(1.5) / (PI.powf(1.5).sqrt() * (1.5 * PI.powf(1.5)).powf(1.5));
        assert_relative_eq!(ratio, expected, max_relative = 1e-6);
        assert!((ratio - 0.03459).abs() < 1e-4);
        for s in [-1.0, 0.5, 1.0] {
            assert_relative_eq!(gn_ratio(&f.dilate(s)).unwrap(), ratio, max_relative = 1e-4);
        }
        assert!(gn_ratio(&RadialField::zeros(g)).is_err());
    }

    #[test]
    fn hessian_form_rejects_non_tangent_directions() {
        let st = gaussian_state(0.0);
        let d = st.u.clone();
        assert!(matches!(
            hessian_form(&st, (&d, &d), (&d, &d)),
            Err(CnlsError::NotTangent(_))
        ));
    }

    #[test]
    fn hessian_form_splits_at_beta_zero() {
        // at beta = 0 the form is the sum of the two single-component forms
        let g = Arc::new(RadialGrid::new(25.0, 600).unwrap());
        let u = RadialField::from_fn(g.clone(), |r| (-r * r / 2.0).exp());
        let v = RadialField::from_fn(g.clone(), |r| (-0.7 * r * r).exp());
        let params = ProblemParams::new(u.mass().sqrt(), v.mass().sqrt(), 1.0, 1.0, 0.0).unwrap();
        let st = StatePair::new(u, v, params).unwrap();
        let mk_tangent = |base: &RadialField, f: fn(f64) -> f64| {
            let mut d = RadialField::from_fn(g.clone(), f);
            let c = g.inner_w(base.values(), d.values()) / base.mass();
            let mut tmp = base.clone();
            tmp.scale(c);
            d.axpy(-1.0, &tmp);
            d
        };
        let phi = mk_tangent(&st.u, |r| (0.8 * r).sin() * (-0.4 * r).exp());
        let psi = mk_tangent(&st.v, |r| (1.1 * r).cos() * (-0.5 * r).exp());
        let zero = RadialField::zeros(g.clone());
        let full = hessian_form(&st, (&phi, &psi), (&phi, &psi)).unwrap();
        let u_only = hessian_form(&st, (&phi, &zero), (&phi, &zero)).unwrap();
        let v_only = hessian_form(&st, (&zero, &psi), (&zero, &psi)).unwrap();
        assert_relative_eq!(full, u_only + v_only, max_relative = 1e-12);
        // zero directions give zero
        assert_eq!(hessian_form(&st, (&zero, &zero), (&zero, &zero)).unwrap(), 0.0);
    }
}
