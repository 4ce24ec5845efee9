use faer::dyn_stack::{MemBuffer, MemStack};
use faer::sparse::linalg::lu::{factorize_symbolic_lu, LuRef, NumericLu, SymbolicLu};
use faer::{Conj, Mat, Par};
use num_complex::Complex64 as C64;

use crate::assembly::CsrMatrix;
use crate::error::{Error, Result};

/// Sparse LU factorization with a fill-reducing column ordering. Runs
/// single-threaded so results are bit-reproducible.
pub struct Factorization {
    matrix: CsrMatrix,
    symbolic: SymbolicLu<usize>,
    numeric: NumericLu<usize, C64>,
}

impl std::fmt::Debug for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Factorization")
            .field("n", &self.matrix.nrows)
            .field("nnz", &self.matrix.nnz())
            .finish()
    }
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl Factorization {
    pub fn new(a: &CsrMatrix) -> Result<Self> {
        if a.nrows != a.ncols {
            return Err(Error::Factorization(format!("matrix is {} x {}", a.nrows, a.ncols)));
        }
        let mat = a.to_faer()?;
        let symbolic = factorize_symbolic_lu(mat.symbolic(), Default::default())
            .map_err(|e| Error::Factorization(format!("symbolic analysis: {e:?}")))?;
        let mut numeric = NumericLu::new();
        let par = Par::Seq;
        let mut buf = MemBuffer::new(symbolic.factorize_numeric_lu_scratch::<C64>(par, Default::default()));
        symbolic
            .factorize_numeric_lu(&mut numeric, mat.as_ref(), par, MemStack::new(&mut buf), Default::default())
            .map_err(|e| Error::Factorization(format!("numeric factorization: {e:?}")))?;
        Ok(Self {
            matrix: a.clone(),
            symbolic,
            numeric,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows
    }

    fn solve_once(&self, b: &[C64]) -> Vec<C64> {
        let n = self.dim();
        let par = Par::Seq;
        let mut rhs = Mat::<C64>::from_fn(n, 1, |i, _| b[i]);
        let mut buf = MemBuffer::new(self.symbolic.solve_in_place_scratch::<C64>(1, par));
        let lu = LuRef::new_unchecked(&self.symbolic, &self.numeric);
        lu.solve_in_place_with_conj(Conj::No, rhs.as_mut(), par, MemStack::new(&mut buf));
        (0..n).map(|i| rhs[(i, 0)]).collect()
    }

    /// Solves `A x = b` with one step of iterative refinement. Fails when the
    /// result is not finite, which signals a numerically singular pivot.
    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        assert_eq!(b.len(), self.dim());
        if self.dim() == 0 {
            return Ok(Vec::new());
        }
        let mut x = self.solve_once(b);
        let ax = self.matrix.matvec(&x);
        let r: Vec<C64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
        let dx = self.solve_once(&r);
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
        if !x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Factorization(format!(
                "numerically singular matrix of order {} ({} nonzeros): solution is not finite",
                self.dim(),
                self.matrix.nnz()
            )));
        }
        Ok(x)
    }

    /// `|A x - b| / |b|`.
    pub fn relative_residual(&self, x: &[C64], b: &[C64]) -> f64 {
        let ax = self.matrix.matvec(x);
        let r: Vec<C64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
        norm2(&r) / norm2(b).max(f64::MIN_POSITIVE)
    }
}

/// Factorizes and solves in one call.
pub fn solve(a: &CsrMatrix, b: &[C64]) -> Result<Vec<C64>> {
    Factorization::new(a)?.solve(b)
}
