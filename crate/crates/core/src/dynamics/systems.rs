use std::fmt;
use std::sync::Arc;

use crate::dictionary::TermLabel;

/// Autonomous right-hand side `u̇ = f(u)`.
pub trait VectorField {
    fn dim(&self) -> usize;
    fn rhs(&self, u: &[f64]) -> Vec<f64>;
}

pub fn lorenz_rhs(u: &[f64]) -> [f64; 3] {
    [
        10.0 * (u[1] - u[0]),
        u[0] * (28.0 - u[2]) - u[1],
        u[0] * u[1] - 8.0 / 3.0 * u[2],
    ]
}

pub fn thomas_rhs(u: &[f64]) -> [f64; 3] {
    [
        -0.18 * u[0] + u[1].sin(),
        -0.18 * u[1] + u[2].sin(),
        -0.18 * u[2] + u[0].sin(),
    ]
}

type RhsFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// A user-supplied vector field.
#[derive(Clone)]
pub struct CustomSystem {
    name: String,
    dim: usize,
    f: Arc<RhsFn>,
}

impl CustomSystem {
    pub fn new(name: impl Into<String>, dim: usize, f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            dim,
            f: Arc::new(f),
        }
    }
}

impl fmt::Debug for CustomSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomSystem")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum SystemId {
    Lorenz,
    Thomas,
    Custom(CustomSystem),
}

impl SystemId {
    pub fn name(&self) -> &str {
        match self {
            SystemId::Lorenz => "lorenz",
            SystemId::Thomas => "thomas",
            SystemId::Custom(c) => &c.name,
        }
    }

    /// Coefficients of the true model over `labels`, one vector per
    /// equation. `None` for custom systems or when a true term is missing
    /// from the dictionary.
    pub fn true_coefficients(&self, labels: &[TermLabel]) -> Option<Vec<Vec<f64>>> {
        let poly = |e: [u32; 3]| TermLabel::monomial(e.to_vec());
        let sin = |e: [u32; 3]| TermLabel::sin(e.to_vec());
        let terms: Vec<Vec<(TermLabel, f64)>> = match self {
            SystemId::Lorenz => vec![
                vec![(poly([1, 0, 0]), -10.0), (poly([0, 1, 0]), 10.0)],
                vec![(poly([1, 0, 0]), 28.0), (poly([0, 1, 0]), -1.0), (poly([1, 0, 1]), -1.0)],
                vec![(poly([0, 0, 1]), -8.0 / 3.0), (poly([1, 1, 0]), 1.0)],
            ],
            SystemId::Thomas => vec![
                vec![(poly([1, 0, 0]), -0.18), (sin([0, 1, 0]), 1.0)],
                vec![(poly([0, 1, 0]), -0.18), (sin([0, 0, 1]), 1.0)],
                vec![(poly([0, 0, 1]), -0.18), (sin([1, 0, 0]), 1.0)],
            ],
            SystemId::Custom(_) => return None,
        };
        terms
            .into_iter()
            .map(|eq| {
                let mut c = vec![0.0; labels.len()];
                for (term, value) in eq {
                    let j = labels.iter().position(|l| *l == term)?;
                    c[j] = value;
                }
                Some(c)
            })
            .collect()
    }

    /// Count of nonzero terms in the true model, if known.
    pub fn true_term_count(&self) -> Option<usize> {
        match self {
            SystemId::Lorenz => Some(7),
            SystemId::Thomas => Some(6),
            SystemId::Custom(_) => None,
        }
    }
}

impl VectorField for SystemId {
    fn dim(&self) -> usize {
        match self {
            SystemId::Lorenz | SystemId::Thomas => 3,
            SystemId::Custom(c) => c.dim,
        }
    }

    fn rhs(&self, u: &[f64]) -> Vec<f64> {
        match self {
            SystemId::Lorenz => lorenz_rhs(u).to_vec(),
            SystemId::Thomas => thomas_rhs(u).to_vec(),
            SystemId::Custom(c) => (c.f)(u),
        }
    }
}

impl<F: Fn(&[f64]) -> Vec<f64>> VectorField for (usize, F) {
    fn dim(&self) -> usize {
        self.0
    }

    fn rhs(&self, u: &[f64]) -> Vec<f64> {
        (self.1)(u)
    }
}
