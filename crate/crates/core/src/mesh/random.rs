use rand::Rng;

use super::{Point, PolytopalMesh};
use crate::error::Result;

/// Random star-shaped polygon with `n` vertices, counter-clockwise. Radii in
/// `[0.4, 1]` times a random scale in `[0.05, 3]` around a random centre.
/// Vertex angles keep a minimum gap so no edge degenerates, and no angular
/// step reaches `pi`, so the centre is interior and the polygon is simple.
pub fn random_polygon<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Point> {
    assert!(n >= 3);
    let tau = std::f64::consts::TAU;
    let gap = 0.35 * tau / n as f64;
    let free = tau - gap * n as f64;
    let max_step = 0.9 * std::f64::consts::PI;
    let cuts = loop {
        let mut cuts: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * free).collect();
        cuts.sort_by(f64::total_cmp);
        let wrap = free - (cuts[n - 1] - cuts[0]);
        if cuts.windows(2).map(|w| w[1] - w[0]).chain([wrap]).all(|d| gap + d < max_step) {
            break cuts;
        }
    };
    let offset = rng.random::<f64>() * tau;
    let scale = 0.05 + 2.95 * rng.random::<f64>();
    let center = [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
    cuts.iter()
        .enumerate()
        .map(|(i, &c)| {
            let t = offset + c + gap * i as f64;
            let r = scale * rng.random_range(0.4..1.0);
            [center[0] + r * t.cos(), center[1] + r * t.sin()]
        })
        .collect()
}

/// Single-cell mesh over a polygon.
pub fn single_cell_mesh(polygon: Vec<Point>) -> Result<PolytopalMesh> {
    let n = polygon.len();
    PolytopalMesh::from_polygons(polygon, vec![(0..n).collect()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn random_polygons_are_valid_cells() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 3..=12 {
            for _ in 0..200 {
                let m = single_cell_mesh(random_polygon(&mut rng, n)).unwrap();
                assert_eq!(m.cells[0].face_ids.len(), n);
                assert!(m.cells[0].measure > 0.0);
            }
        }
    }
}
