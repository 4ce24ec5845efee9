use num_complex::Complex64 as C64;
use rand::Rng;

use super::exponents;
use crate::mesh::Point;

/// Complex polynomial `sum_alpha c_alpha ((x - x0) / s)^alpha` in a
/// centred, scaled frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    pub center: Point,
    pub scale: f64,
    pub terms: Vec<([usize; 2], C64)>,
}

impl Polynomial {
    /// Polynomial in global coordinates.
    pub fn global(terms: Vec<([usize; 2], C64)>) -> Self {
        Self {
            center: [0.0, 0.0],
            scale: 1.0,
            terms,
        }
    }

    pub fn constant(c: C64) -> Self {
        Self::global(vec![([0, 0], c)])
    }

    /// Random coefficients in `[-1, 1] + i [-1, 1]` for every monomial of
    /// degree `<= degree` in the frame `(center, scale)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, degree: usize, center: Point, scale: f64) -> Self {
        let terms = exponents(degree)
            .into_iter()
            .map(|e| (e, C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
            .collect();
        Self { center, scale, terms }
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(e, _)| e[0] + e[1]).max().unwrap_or(0)
    }

    fn local(&self, p: Point) -> Point {
        [(p[0] - self.center[0]) / self.scale, (p[1] - self.center[1]) / self.scale]
    }

    pub fn eval(&self, p: Point) -> C64 {
        let t = self.local(p);
        self.terms
            .iter()
            .map(|(e, c)| c * t[0].powi(e[0] as i32) * t[1].powi(e[1] as i32))
            .sum()
    }

    pub fn grad(&self, p: Point) -> [C64; 2] {
        let t = self.local(p);
        let mut g = [C64::new(0.0, 0.0); 2];
        for (e, c) in &self.terms {
            if e[0] > 0 {
                g[0] += c * e[0] as f64 * t[0].powi(e[0] as i32 - 1) * t[1].powi(e[1] as i32);
            }
            if e[1] > 0 {
                g[1] += c * e[1] as f64 * t[0].powi(e[0] as i32) * t[1].powi(e[1] as i32 - 1);
            }
        }
        [g[0] / self.scale, g[1] / self.scale]
    }
}
