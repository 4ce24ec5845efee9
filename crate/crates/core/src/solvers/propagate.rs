use num_complex::Complex64 as C64;

use super::linear::Factorization;
use crate::assembly::{CsrMatrix, HermitianSystem, HybridField};
use crate::error::{Error, Result};

/// Uniform time grid covering `[0, t_end]`; the step is shrunk so that it
/// divides `t_end` exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub n_steps: usize,
    pub dt: f64,
}

impl TimeGrid {
    pub fn new(dt: f64, t_end: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt must be positive and finite, got {dt}")));
        }
        if !(t_end >= 0.0 && t_end.is_finite()) {
            return Err(Error::InvalidConfig(format!("t_end must be non-negative and finite, got {t_end}")));
        }
        let n_steps = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
        let dt = if n_steps == 0 { dt } else { t_end / n_steps as f64 };
        Ok(Self { n_steps, dt })
    }

    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }
}

/// Crank-Nicolson step for `i M dpsi/dt = K psi - F`:
/// `(i M / dt - K / 2) psi' = (i M / dt + K / 2) psi - F`.
pub struct CrankNicolson {
    lhs: Factorization,
    rhs: CsrMatrix,
    dt: f64,
}

impl std::fmt::Debug for CrankNicolson {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CrankNicolson").field("dt", &self.dt).field("lhs", &self.lhs).finish()
    }
}

impl CrankNicolson {
    /// A negative `dt` steps backwards in time.
    pub fn new(sys: &HermitianSystem, dt: f64) -> Result<Self> {
        if !(dt != 0.0 && dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("time step must be nonzero and finite, got {dt}")));
        }
        let im = C64::new(0.0, 1.0 / dt);
        let half = C64::new(0.5, 0.0);
        let lhs = CsrMatrix::axpby(im, &sys.mass, -half, &sys.stiffness);
        let rhs = CsrMatrix::axpby(im, &sys.mass, half, &sys.stiffness);
        Ok(Self {
            lhs: Factorization::new(&lhs)?,
            rhs,
            dt,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// `source` is the load vector at the midpoint of the step.
    pub fn step(&self, psi: &[C64], source: Option<&[C64]>) -> Result<HybridField> {
        let mut b = self.rhs.matvec(psi);
        if let Some(f) = source {
            for (bi, fi) in b.iter_mut().zip(f) {
                *bi -= fi;
            }
        }
        self.lhs.solve(&b)
    }
}

/// Evolves `psi0` to `t_end`. `observe(step, t, psi)` runs on the initial
/// state and after every step. `source(t)` gives the load vector at time `t`.
pub fn evolve<O>(
    sys: &HermitianSystem,
    psi0: &[C64],
    grid: TimeGrid,
    source: Option<&(dyn Fn(f64) -> HybridField + Sync)>,
    mut observe: O,
) -> Result<HybridField>
where
    O: FnMut(usize, f64, &[C64]) -> Result<()>,
{
    let cn = CrankNicolson::new(sys, grid.dt)?;
    let finite = |v: &[C64]| v.iter().all(|z| z.re.is_finite() && z.im.is_finite());
    let mut psi = psi0.to_vec();
    if !finite(&psi) {
        return Err(Error::NonFinite { step: 0 });
    }
    observe(0, 0.0, &psi)?;
    for n in 0..grid.n_steps {
        let f = source.map(|s| s(grid.time(n) + 0.5 * grid.dt));
        if f.as_deref().is_some_and(|f| !finite(f)) {
            return Err(Error::NonFinite { step: n + 1 });
        }
        psi = cn.step(&psi, f.as_deref()).map_err(|_| Error::NonFinite { step: n + 1 })?;
        if !finite(&psi) {
            return Err(Error::NonFinite { step: n + 1 });
        }
        observe(n + 1, grid.time(n + 1), &psi)?;
    }
    Ok(psi)
}
