use crate::mesh::{Point, DIM};

/// Dimension of the full polynomial space of total degree `l` in 2D.
pub fn poly_dim(l: usize) -> usize {
    (l + 1) * (l + 2) / 2
}

/// Multi-indices of total degree <= `l`, graded by degree and then by
/// decreasing x-exponent.
pub fn exponents(l: usize) -> Vec<[usize; DIM]> {
    let mut out = Vec::with_capacity(poly_dim(l));
    for d in 0..=l {
        for a in (0..=d).rev() {
            out.push([a, d - a]);
        }
    }
    out
}

/// Scaled monomials `((x - x_T) / h_T)^alpha`. The basis of degree `l` is a
/// prefix of the basis of degree `l + 1`.
#[derive(Clone, Debug)]
pub struct CellBasis {
    pub degree: usize,
    pub center: Point,
    pub scale: f64,
    exps: Vec<[usize; DIM]>,
}

impl CellBasis {
    pub fn new(degree: usize, center: Point, scale: f64) -> Self {
        Self {
            degree,
            center,
            scale,
            exps: exponents(degree),
        }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[[usize; DIM]] {
        &self.exps
    }

    fn powers(&self, p: Point) -> [Vec<f64>; DIM] {
        let mut pw: [Vec<f64>; DIM] = Default::default();
        for c in 0..DIM {
            let t = (p[c] - self.center[c]) / self.scale;
            let mut v = Vec::with_capacity(self.degree + 1);
            v.push(1.0);
            for i in 1..=self.degree {
                v.push(v[i - 1] * t);
            }
            pw[c] = v;
        }
        pw
    }

    pub fn eval_into(&self, p: Point, out: &mut [f64]) {
        let pw = self.powers(p);
        for (o, e) in out.iter_mut().zip(&self.exps) {
            *o = pw[0][e[0]] * pw[1][e[1]];
        }
    }

    pub fn eval(&self, p: Point) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        self.eval_into(p, &mut v);
        v
    }

    pub fn grad_into(&self, p: Point, out: &mut [Point]) {
        let pw = self.powers(p);
        let s = 1.0 / self.scale;
        for (o, e) in out.iter_mut().zip(&self.exps) {
            let dx = if e[0] > 0 { e[0] as f64 * pw[0][e[0] - 1] * pw[1][e[1]] * s } else { 0.0 };
            let dy = if e[1] > 0 { e[1] as f64 * pw[0][e[0]] * pw[1][e[1] - 1] * s } else { 0.0 };
            *o = [dx, dy];
        }
    }

    pub fn grad(&self, p: Point) -> Vec<Point> {
        let mut v = vec![[0.0; DIM]; self.dim()];
        self.grad_into(p, &mut v);
        v
    }
}

/// Scaled monomials `(((x - x_F) . t_F) / h_F)^j` on a face.
#[derive(Clone, Debug)]
pub struct FaceBasis {
    pub degree: usize,
    pub origin: Point,
    pub tangent: Point,
    pub scale: f64,
}

impl FaceBasis {
    pub fn new(degree: usize, origin: Point, tangent: Point, scale: f64) -> Self {
        Self {
            degree,
            origin,
            tangent,
            scale,
        }
    }

    pub fn dim(&self) -> usize {
        self.degree + 1
    }

    pub fn eval_into(&self, p: Point, out: &mut [f64]) {
        let s = ((p[0] - self.origin[0]) * self.tangent[0] + (p[1] - self.origin[1]) * self.tangent[1]) / self.scale;
        let mut acc = 1.0;
        for o in out.iter_mut().take(self.dim()) {
            *o = acc;
            acc *= s;
        }
    }

    pub fn eval(&self, p: Point) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        self.eval_into(p, &mut v);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_ordering() {
        assert_eq!(exponents(2), vec![[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]]);
        for l in 0..6 {
            assert_eq!(exponents(l).len(), poly_dim(l));
            assert_eq!(&exponents(l + 1)[..poly_dim(l)], &exponents(l)[..]);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let b = CellBasis::new(4, [0.3, -0.2], 0.7);
        let p = [0.41, 0.05];
        let g = b.grad(p);
        let h = 1e-6;
        for c in 0..DIM {
            let mut pp = p;
            let mut pm = p;
            pp[c] += h;
            pm[c] -= h;
            let (vp, vm) = (b.eval(pp), b.eval(pm));
            for i in 0..b.dim() {
                let fd = (vp[i] - vm[i]) / (2.0 * h);
                assert!((fd - g[i][c]).abs() < 1e-7, "i={i} c={c}");
            }
        }
    }

    #[test]
    fn face_basis_powers() {
        let f = FaceBasis::new(3, [0.0, 0.0], [0.0, 1.0], 2.0);
        assert_eq!(f.eval([5.0, 1.0]), vec![1.0, 0.5, 0.25, 0.125]);
    }
}
