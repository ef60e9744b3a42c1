use crate::error::{CnlsError, Result};
use crate::field::RadialField;
use crate::grid::RadialGrid;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Masses and interaction strengths of the two-component system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub a1: f64,
    pub a2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub beta: f64,
}

impl ProblemParams {
    pub fn new(a1: f64, a2: f64, mu1: f64, mu2: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("a1", a1), ("a2", a2), ("mu1", mu1), ("mu2", mu2)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CnlsError::DegenerateState(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        if !beta.is_finite() {
            return Err(CnlsError::DegenerateState("beta must be finite".into()));
        }
        Ok(Self { a1, a2, mu1, mu2, beta })
    }

    /// Symmetric system with equal masses and self-interactions.
    pub fn symmetric(a: f64, mu: f64, beta: f64) -> Result<Self> {
        Self::new(a, a, mu, mu, beta)
    }

    pub fn is_symmetric(&self) -> bool {
        self.a1 == self.a2 && self.mu1 == self.mu2
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    /// Parameters of the component-swapped problem.
    pub fn swapped(&self) -> Self {
        Self { a1: self.a2, a2: self.a1, mu1: self.mu2, mu2: self.mu1, beta: self.beta }
    }
}

/// A pair (u, v) together with its problem data; the constraint manifold is
/// the product of the two mass spheres.
#[derive(Debug, Clone)]
pub struct StatePair {
    pub u: RadialField,
    pub v: RadialField,
    pub params: ProblemParams,
}

impl StatePair {
    pub fn new(u: RadialField, v: RadialField, params: ProblemParams) -> Result<Self> {
        if !u.same_grid(&v) {
            return Err(CnlsError::GridMismatch);
        }
        Ok(Self { u, v, params })
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        self.u.grid()
    }

    /// Relative mass defects of both components.
    pub fn mass_defects(&self) -> (f64, f64) {
        let t1 = self.params.a1 * self.params.a1;
        let t2 = self.params.a2 * self.params.a2;
        ((self.u.mass() - t1) / t1, (self.v.mass() - t2) / t2)
    }

    pub fn is_on_sphere(&self, tol: f64) -> bool {
        let (d1, d2) = self.mass_defects();
        d1.abs() <= tol && d2.abs() <= tol
    }

    /// The component swap sigma(u, v) = (v, u).
    pub fn swapped(&self) -> StatePair {
        StatePair {
            u: self.v.clone(),
            v: self.u.clone(),
            params: self.params.swapped(),
        }
    }

    /// H¹ distance to another pair on the same grid.
    pub fn dist_h1(&self, other: &StatePair) -> f64 {
        let mut du = self.u.clone();
        du.axpy(-1.0, &other.u);
        let mut dv = self.v.clone();
        dv.axpy(-1.0, &other.v);
        (du.norm_h1_sq() + dv.norm_h1_sq()).sqrt()
    }

    /// H¹ distance modulo the component swap.
    pub fn dist_h1_mod_sigma(&self, other: &StatePair) -> f64 {
        self.dist_h1(other).min(self.dist_h1(&other.swapped()))
    }
}

/// Scalar diagnostics of a state: the quantities entering the Pohozaev
/// relation, multiplier estimates and the segregation measure.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DiagnosticsBundle {
    pub kinetic: f64,
    pub quartic: f64,
    pub pohozaev_residual: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub grad_norm: f64,
    pub segregation: f64,
}
