use std::fmt;
use std::sync::Arc;

use crate::mesh::Point;

pub type VectorField = Arc<dyn Fn(Point) -> Point + Send + Sync>;
pub type ScalarField = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

/// Magnetic potential `A`, electric potential `V` and optional gauge function
/// `chi` relating `A` to a reference gauge, together with sup-norm bounds.
#[derive(Clone)]
pub struct FieldSpec {
    pub name: String,
    pub a: VectorField,
    pub div_a: ScalarField,
    pub v: ScalarField,
    pub chi: Option<ScalarField>,
    pub grad_chi: Option<VectorField>,
    /// Bound on `|A|` over the domain.
    pub a_inf: f64,
    /// Bound on `|V|` over the domain.
    pub v_inf: f64,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("name", &self.name)
            .field("a_inf", &self.a_inf)
            .field("v_inf", &self.v_inf)
            .field("has_chi", &self.chi.is_some())
            .finish()
    }
}

impl FieldSpec {
    pub fn new(name: impl Into<String>, a: VectorField, div_a: ScalarField, v: ScalarField, a_inf: f64, v_inf: f64) -> Self {
        Self {
            name: name.into(),
            a,
            div_a,
            v,
            chi: None,
            grad_chi: None,
            a_inf,
            v_inf,
        }
    }

    /// `A = 0`, `V = 0`.
    pub fn zero() -> Self {
        Self::new("zero", Arc::new(|_| [0.0, 0.0]), Arc::new(|_| 0.0), Arc::new(|_| 0.0), 0.0, 0.0)
    }

    pub fn with_potential(mut self, v: ScalarField, v_inf: f64) -> Self {
        self.v = v;
        self.v_inf = v_inf;
        self
    }

    pub fn with_gauge_function(mut self, chi: ScalarField, grad_chi: VectorField) -> Self {
        self.chi = Some(chi);
        self.grad_chi = Some(grad_chi);
        self
    }

    /// Lower bound of the discrete spectrum: `-(|A|_inf^2 + |V|_inf)`.
    pub fn spectral_floor(&self) -> f64 {
        -(self.a_inf * self.a_inf + self.v_inf)
    }
}
