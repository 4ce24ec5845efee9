use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::linear::Factorization;
use crate::assembly::{CsrMatrix, HermitianSystem, HybridField};
use crate::error::{Error, Result};

/// Problems with at most this many cell unknowns use the dense solver under
/// [`EigenMethod::Auto`].
pub const DENSE_CELL_DOF_LIMIT: usize = 600;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenMethod {
    Auto,
    ShiftInvert,
    Dense,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenOptions {
    pub n_eig: usize,
    /// Must lie below the wanted eigenvalues. Defaults to the spectral floor
    /// of the system minus one.
    pub shift: Option<f64>,
    /// Required relative residual `|K v - lambda M v| / |K v|`.
    pub tol: f64,
    pub method: EigenMethod,
    pub krylov_dim: Option<usize>,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            n_eig: 5,
            shift: None,
            tol: 1e-8,
            method: EigenMethod::Auto,
            krylov_dim: None,
            max_restarts: 300,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenPairs {
    /// Ascending.
    pub values: Vec<f64>,
    /// Normalized so that `v^H M v = 1`, with the largest cell coefficient
    /// real and positive.
    pub vectors: Vec<HybridField>,
    pub residuals: Vec<f64>,
    pub shift: f64,
    pub operator_applications: usize,
    pub method: EigenMethod,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `w -> (K - sigma M)^{-1} M w`, self-adjoint in the `M` semi-inner product.
struct Operator<'a> {
    fac: Factorization,
    mass: &'a CsrMatrix,
    applications: usize,
}

impl Operator<'_> {
    fn apply(&mut self, v: &[C64]) -> Result<Vec<C64>> {
        self.applications += 1;
        self.fac.solve(&self.mass.matvec(v))
    }
}

/// An `M`-normalized vector together with `M` times it.
struct MVec {
    x: Vec<C64>,
    mx: Vec<C64>,
}

struct Ritz {
    theta: f64,
    x: MVec,
}

fn orthogonalize(w: &mut [C64], locked: &[MVec], basis: &[MVec]) -> Vec<C64> {
    let mut h = vec![C64::new(0.0, 0.0); basis.len()];
    for _ in 0..2 {
        for q in locked {
            let c = dot(&q.mx, w);
            axpy(-c, &q.x, w);
        }
        for (hi, q) in h.iter_mut().zip(basis) {
            let c = dot(&q.mx, w);
            *hi += c;
            axpy(-c, &q.x, w);
        }
    }
    h
}

fn normalize(w: Vec<C64>, mass: &CsrMatrix) -> (f64, MVec) {
    let mw = mass.matvec(&w);
    let beta = dot(&w, &mw).re.max(0.0).sqrt();
    let s = if beta > 0.0 { 1.0 / beta } else { 0.0 };
    (
        beta,
        MVec {
            x: w.iter().map(|z| z * s).collect(),
            mx: mw.iter().map(|z| z * s).collect(),
        },
    )
}

fn fresh_vector(op: &mut Operator, rng: &mut ChaCha8Rng, locked: &[MVec], basis: &[MVec]) -> Result<Option<MVec>> {
    let n = op.mass.nrows;
    for _ in 0..3 {
        let r: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mut w = op.apply(&r)?;
        let before = normalize(w.clone(), op.mass).0;
        orthogonalize(&mut w, locked, basis);
        let (beta, q) = normalize(w, op.mass);
        if beta.is_finite() && beta > 1e-10 * before {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

/// One application of the operator. `M` is singular on the face unknowns, so
/// Krylov vectors accumulate face components the `M` inner product cannot
/// see; mapping through the operator restores the face part determined by
/// the cell part.
fn purify(op: &mut Operator, x: MVec) -> Result<MVec> {
    let y = op.apply(&x.x)?;
    Ok(normalize(y, op.mass).1)
}

fn combine(basis: &[MVec], y: &[C64]) -> MVec {
    let n = basis[0].x.len();
    let mut x = vec![C64::new(0.0, 0.0); n];
    let mut mx = vec![C64::new(0.0, 0.0); n];
    for (q, &c) in basis.iter().zip(y) {
        axpy(c, &q.x, &mut x);
        axpy(c, &q.mx, &mut mx);
    }
    MVec { x, mx }
}

/// Krylov-Schur iteration for the `nwant` largest eigenvalues of the
/// operator on the `M`-orthogonal complement of `locked`.
fn krylov_schur(
    op: &mut Operator,
    locked: &[MVec],
    nwant: usize,
    m: usize,
    tol: f64,
    max_restarts: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Ritz>> {
    debug_assert!(m > nwant);
    let start = fresh_vector(op, rng, locked, &[])?
        .ok_or_else(|| Error::Factorization("could not build a starting vector".into()))?;
    let mut basis = vec![start];
    let mut h = DMatrix::<C64>::zeros(m + 1, m);
    let mut j0 = 0;
    let mut estimates = Vec::new();
    for _ in 0..=max_restarts {
        for j in j0..m {
            let mut w = op.apply(&basis[j].x)?;
            let scale = normalize(w.clone(), op.mass).0;
            let coeffs = orthogonalize(&mut w, locked, &basis);
            for (i, c) in coeffs.into_iter().enumerate() {
                h[(i, j)] += c;
            }
            let (beta, q) = normalize(w, op.mass);
            if beta > 1e-12 * scale {
                h[(j + 1, j)] = C64::new(beta, 0.0);
                basis.push(q);
            } else {
                match fresh_vector(op, rng, locked, &basis)? {
                    Some(q) => basis.push(q),
                    None => return Err(Error::Factorization("Krylov space exhausted".into())),
                }
            }
        }

        let hm = h.view((0, 0), (m, m)).into_owned();
        let sym = (&hm + hm.adjoint()) * C64::new(0.5, 0.0);
        let eig = sym.symmetric_eigen();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let last = h.row(m).into_owned();
        let b: Vec<C64> = order
            .iter()
            .map(|&i| (&last * eig.eigenvectors.column(i))[(0, 0)])
            .collect();
        estimates = order
            .iter()
            .zip(&b)
            .take(nwant)
            .map(|(&i, bi)| bi.norm() / eig.eigenvalues[i].abs().max(f64::MIN_POSITIVE))
            .collect();
        if estimates.iter().all(|&e| e <= tol) {
            return Ok(order
                .iter()
                .take(nwant)
                .map(|&i| {
                    let y: Vec<C64> = eig.eigenvectors.column(i).iter().copied().collect();
                    Ritz {
                        theta: eig.eigenvalues[i],
                        x: combine(&basis[..m], &y),
                    }
                })
                .collect());
        }

        let p = ((nwant + m) / 2).max(nwant + 1).min(m - 1);
        let mut next: Vec<MVec> = order[..p]
            .iter()
            .map(|&i| {
                let y: Vec<C64> = eig.eigenvectors.column(i).iter().copied().collect();
                combine(&basis[..m], &y)
            })
            .collect();
        next.push(basis.swap_remove(m));
        basis = next;
        h.fill(C64::new(0.0, 0.0));
        for (a, &i) in order[..p].iter().enumerate() {
            h[(a, a)] = C64::new(eig.eigenvalues[i], 0.0);
            h[(p, a)] = b[a];
        }
        j0 = p;
    }
    Err(Error::EigenNotConverged {
        iterations: op.applications,
        residuals: estimates,
    })
}

fn relative_residual(sys: &HermitianSystem, v: &[C64], lambda: f64) -> f64 {
    let kv = sys.stiffness.matvec(v);
    let mv = sys.mass.matvec(v);
    let r: Vec<C64> = kv.iter().zip(&mv).map(|(a, b)| a - b * lambda).collect();
    norm(&r) / norm(&kv).max(f64::MIN_POSITIVE)
}

/// `M`-normalizes and fixes the phase so the largest cell coefficient is
/// real and positive.
fn canonical(sys: &HermitianSystem, mut v: Vec<C64>) -> Vec<C64> {
    let nc = sys.dofs.n_cell_dofs;
    let s = sys.l2_norm_cells(&v);
    let pivot = v[..nc]
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(C64::new(1.0, 0.0));
    let phase = if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { C64::new(1.0, 0.0) };
    for z in v.iter_mut() {
        *z *= phase / s;
    }
    v
}

fn finish(
    sys: &HermitianSystem,
    mut pairs: Vec<(f64, Vec<C64>)>,
    n_eig: usize,
    shift: f64,
    applications: usize,
    method: EigenMethod,
) -> EigenPairs {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.truncate(n_eig);
    let vectors: Vec<HybridField> = pairs.iter().map(|(_, v)| canonical(sys, v.clone())).collect();
    let values: Vec<f64> = vectors.iter().map(|v| sys.rayleigh_quotient(v)).collect();
    let residuals = vectors.iter().zip(&values).map(|(v, &l)| relative_residual(sys, v, l)).collect();
    EigenPairs {
        values,
        vectors,
        residuals,
        shift,
        operator_applications: applications,
        method,
    }
}

/// All eigenpairs through face elimination and a Cholesky-reduced Hermitian
/// eigenproblem on the cell unknowns; returns the `n_eig` lowest.
fn dense(sys: &HermitianSystem, n_eig: usize) -> Result<EigenPairs> {
    let nc = sys.dofs.n_cell_dofs;
    let nf = sys.n_dof() - nc;
    let kd = sys.stiffness.to_dense();
    let kcc = kd.view((0, 0), (nc, nc)).into_owned();
    let kcf = kd.view((0, nc), (nc, nf)).into_owned();
    let kfc = kd.view((nc, 0), (nf, nc)).into_owned();
    let kff = kd.view((nc, nc), (nf, nf)).into_owned();
    let x = if nf > 0 {
        kff.lu()
            .solve(&kfc)
            .ok_or_else(|| Error::Factorization("face block of the stiffness is singular".into()))?
    } else {
        DMatrix::zeros(0, nc)
    };
    let s = &kcc - &kcf * &x;
    let s = (&s + s.adjoint()) * C64::new(0.5, 0.0);
    let mcc = sys.mass.to_dense().view((0, 0), (nc, nc)).into_owned();
    let l = mcc
        .cholesky()
        .ok_or_else(|| Error::Factorization("cell mass is not positive definite".into()))?
        .l();
    let a = l.solve_lower_triangular(&s).expect("triangular factor is nonsingular");
    let a = l
        .solve_lower_triangular(&a.adjoint())
        .expect("triangular factor is nonsingular");
    let a = (&a + a.adjoint()) * C64::new(0.5, 0.0);
    let eig = a.symmetric_eigen();
    let mut order: Vec<usize> = (0..nc).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let lh = l.adjoint();
    let pairs = order
        .iter()
        .take(n_eig)
        .map(|&i| {
            let y: DVector<C64> = eig.eigenvectors.column(i).into_owned();
            let xc = lh.solve_upper_triangular(&y).expect("triangular factor is nonsingular");
            let xf = -(&x * &xc);
            let v: Vec<C64> = xc.iter().chain(xf.iter()).copied().collect();
            (eig.eigenvalues[i], v)
        })
        .collect();
    Ok(finish(sys, pairs, n_eig, f64::NAN, 0, EigenMethod::Dense))
}

fn shift_invert(sys: &HermitianSystem, opts: &EigenOptions) -> Result<EigenPairs> {
    let n_eig = opts.n_eig;
    let avail = sys.dofs.n_cell_dofs;
    let sigma = opts.shift.unwrap_or(sys.spectral_floor - 1.0);
    let nwant = (n_eig + 2).min(avail);
    // one direction must remain outside the Krylov space for restarts
    let m = opts.krylov_dim.unwrap_or((3 * nwant).max(40)).min(avail - 1);
    if m <= nwant {
        return dense(sys, n_eig);
    }
    let shifted = CsrMatrix::axpby(
        C64::new(1.0, 0.0),
        &sys.stiffness,
        C64::new(-sigma, 0.0),
        &sys.mass,
    );
    let mut op = Operator {
        fac: Factorization::new(&shifted)?,
        mass: &sys.mass,
        applications: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut tol = 1e-10;
    let mut residuals = Vec::new();
    for _ in 0..3 {
        let mut found: Vec<(f64, MVec)> = krylov_schur(&mut op, &[], nwant, m, tol, opts.max_restarts, &mut rng)?
            .into_iter()
            .map(|r| purify(&mut op, r.x).map(|x| (sys.rayleigh_quotient(&x.x), x)))
            .collect::<Result<_>>()?;
        // A single Krylov sequence sees one direction per eigenspace; search
        // the complement of the converged vectors for missed eigenvalues.
        loop {
            found.sort_by(|a, b| a.0.total_cmp(&b.0));
            let cutoff = found[n_eig - 1].0;
            let rest = avail - found.len();
            if rest <= 2 {
                break;
            }
            let locked: Vec<MVec> = found
                .iter()
                .map(|(_, q)| MVec {
                    x: q.x.clone(),
                    mx: q.mx.clone(),
                })
                .collect();
            let mm = m.min(rest - 1);
            let extra = krylov_schur(&mut op, &locked, 1, mm, tol, opts.max_restarts, &mut rng)?;
            let r = extra.into_iter().next().expect("one Ritz pair requested");
            let x = purify(&mut op, r.x)?;
            let lambda = sys.rayleigh_quotient(&x.x);
            if r.theta > 0.0 && lambda < cutoff - 1e-9 * cutoff.abs().max(1.0) {
                found.push((lambda, x));
            } else {
                break;
            }
        }
        let pairs: Vec<(f64, Vec<C64>)> = found.into_iter().map(|(l, q)| (l, q.x)).collect();
        let out = finish(sys, pairs, n_eig, sigma, op.applications, EigenMethod::ShiftInvert);
        if out.residuals.iter().all(|&r| r <= opts.tol) {
            return Ok(EigenPairs {
                operator_applications: op.applications,
                ..out
            });
        }
        residuals = out.residuals;
        tol *= 1e-2;
    }
    Err(Error::EigenNotConverged {
        iterations: op.applications,
        residuals,
    })
}

/// The `n_eig` lowest eigenpairs of `K v = lambda M v`.
pub fn lowest_eigenpairs(sys: &HermitianSystem, opts: &EigenOptions) -> Result<EigenPairs> {
    if opts.n_eig == 0 || opts.n_eig > sys.dofs.n_cell_dofs {
        return Err(Error::InvalidConfig(format!(
            "n_eig must be between 1 and {}, got {}",
            sys.dofs.n_cell_dofs, opts.n_eig
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidConfig(format!("tol must be positive, got {}", opts.tol)));
    }
    let method = match opts.method {
        EigenMethod::Auto if sys.dofs.n_cell_dofs <= DENSE_CELL_DOF_LIMIT => EigenMethod::Dense,
        EigenMethod::Auto => EigenMethod::ShiftInvert,
        m => m,
    };
    let out = match method {
        EigenMethod::Dense => dense(sys, opts.n_eig)?,
        _ => shift_invert(sys, opts)?,
    };
    if out.residuals.iter().any(|&r| !(r <= opts.tol)) {
        return Err(Error::EigenNotConverged {
            iterations: out.operator_applications,
            residuals: out.residuals,
        });
    }
    Ok(out)
}
