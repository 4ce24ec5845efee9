use std::collections::HashMap;

use super::{signed_area, Point, PolytopalMesh, MAX_FACES_PER_CELL};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Rectangle {
    pub min: Point,
    pub max: Point,
}

impl Rectangle {
    pub fn new(min: Point, max: Point) -> Self {
        Self { min, max }
    }

    pub fn unit() -> Self {
        Self::new([0.0, 0.0], [1.0, 1.0])
    }

    /// The square `[-half, half]^2`.
    pub fn centered(half: f64) -> Self {
        Self::new([-half, -half], [half, half])
    }

    pub fn area(&self) -> f64 {
        (self.max[0] - self.min[0]) * (self.max[1] - self.min[1])
    }

    fn check(&self) -> Result<()> {
        let ok = (0..2).all(|d| self.min[d].is_finite() && self.max[d].is_finite() && self.max[d] > self.min[d]);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidMeshParameters(format!("degenerate bounds {self:?}")))
        }
    }
}

fn grid_coord(bounds: &Rectangle, n: [usize; 2], i: usize, j: usize) -> Point {
    let x = if i == n[0] {
        bounds.max[0]
    } else {
        bounds.min[0] + (bounds.max[0] - bounds.min[0]) * i as f64 / n[0] as f64
    };
    let y = if j == n[1] {
        bounds.max[1]
    } else {
        bounds.min[1] + (bounds.max[1] - bounds.min[1]) * j as f64 / n[1] as f64
    };
    [x, y]
}

/// Uniform `nx x ny` quadrilateral mesh of `bounds`.
pub fn generate_cartesian(bounds: Rectangle, nx: usize, ny: usize) -> Result<PolytopalMesh> {
    bounds.check()?;
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidMeshParameters(format!("nx = {nx}, ny = {ny} must be >= 1")));
    }
    let vid = |i: usize, j: usize| j * (nx + 1) + i;
    let mut points = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            points.push(grid_coord(&bounds, [nx, ny], i, j));
        }
    }
    let mut polygons = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            polygons.push(vec![vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)]);
        }
    }
    PolytopalMesh::from_polygons(points, polygons)
}

#[derive(Clone, Debug)]
pub struct PuncturedOptions {
    pub bounds: Rectangle,
    pub nx: usize,
    pub ny: usize,
    pub hole_center: Point,
    pub hole_radius: f64,
    pub hole_segments: usize,
    /// Clipped cells smaller than this fraction of a full grid cell are
    /// merged into the neighbour sharing their longest edge. `0.0` disables
    /// agglomeration.
    pub merge_fraction: f64,
}

impl PuncturedOptions {
    pub fn new(bounds: Rectangle, nx: usize, ny: usize, hole_center: Point, hole_radius: f64) -> Self {
        Self {
            bounds,
            nx,
            ny,
            hole_center,
            hole_radius,
            hole_segments: 64,
            merge_fraction: 0.25,
        }
    }

    /// Vertices of the polygonal hole, counter-clockwise. The first vertex is
    /// rotated by half a segment so the polygon is mirror symmetric about both
    /// axes through its centre without placing vertices on them.
    pub fn hole_polygon(&self) -> Vec<Point> {
        let n = self.hole_segments;
        (0..n)
            .map(|j| {
                let t = std::f64::consts::PI * (2.0 * j as f64 + 1.0) / n as f64;
                [
                    self.hole_center[0] + self.hole_radius * t.cos(),
                    self.hole_center[1] + self.hole_radius * t.sin(),
                ]
            })
            .collect()
    }
}

/// Point registry that snaps coordinates closer than `tol` onto one vertex.
struct Registry {
    points: Vec<Point>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    tol: f64,
}

impl Registry {
    fn new(tol: f64) -> Self {
        Self {
            points: Vec::new(),
            buckets: HashMap::new(),
            tol,
        }
    }

    fn key(&self, p: Point) -> (i64, i64) {
        ((p[0] / (4.0 * self.tol)).floor() as i64, (p[1] / (4.0 * self.tol)).floor() as i64)
    }

    fn insert(&mut self, p: Point) -> usize {
        let (kx, ky) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.buckets.get(&(kx + dx, ky + dy)) {
                    for &id in ids {
                        if super::dist(&self.points[id], &p) <= self.tol {
                            return id;
                        }
                    }
                }
            }
        }
        let id = self.points.len();
        self.points.push(p);
        self.buckets.entry((kx, ky)).or_default().push(id);
        id
    }
}

/// Point on the boundary loop of a grid cell, tagged with the hole edge it
/// lies on (if any).
#[derive(Clone, Copy, Debug)]
struct LoopPoint {
    p: Point,
    hole_edge: Option<usize>,
}

fn inside_convex(p: Point, hole: &[Point], tol: f64) -> bool {
    let n = hole.len();
    (0..n).all(|j| {
        let a = hole[j];
        let b = hole[(j + 1) % n];
        let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        cross > tol * super::dist(&a, &b)
    })
}

/// Intersections of the axis-aligned segment `a -> b` with the hole edges.
/// The crossing is computed from the hole edge and the grid line only, so
/// both cells sharing a grid edge obtain bitwise identical points.
fn axis_crossings(a: Point, b: Point, hole: &[Point]) -> Vec<(f64, LoopPoint)> {
    let n = hole.len();
    let vertical = a[0] == b[0];
    let (axis, other) = if vertical { (0, 1) } else { (1, 0) };
    let line = a[axis];
    let (lo, hi) = (a[other].min(b[other]), a[other].max(b[other]));
    let mut out = Vec::new();
    for j in 0..n {
        let p = hole[j];
        let q = hole[(j + 1) % n];
        let (dp, dq) = (p[axis] - line, q[axis] - line);
        if dp == dq || (dp > 0.0 && dq > 0.0) || (dp < 0.0 && dq < 0.0) {
            continue;
        }
        let s = (line - p[axis]) / (q[axis] - p[axis]);
        let c = p[other] + s * (q[other] - p[other]);
        if c < lo || c > hi {
            continue;
        }
        let mut pt = [0.0; 2];
        pt[axis] = line;
        pt[other] = c;
        let t = (c - a[other]) / (b[other] - a[other]);
        out.push((t, LoopPoint { p: pt, hole_edge: Some(j) }));
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

/// Connected components of a square minus a convex hole; empty when the
/// square is swallowed.
fn clip_square(square: [Point; 4], hole: &[Point], tol: f64) -> Result<Vec<Vec<Point>>> {
    let n = hole.len();
    let mut lp: Vec<LoopPoint> = Vec::new();
    for e in 0..4 {
        let a = square[e];
        let b = square[(e + 1) % 4];
        lp.push(LoopPoint { p: a, hole_edge: None });
        for (t, c) in axis_crossings(a, b, hole) {
            if t > 0.0 && t < 1.0 {
                lp.push(c);
            } else if let Some(last) = lp.last_mut() {
                // crossing at the corner: keep the tag on the corner
                if t <= 0.0 && super::dist(&last.p, &c.p) <= tol {
                    last.hole_edge = c.hole_edge;
                }
            }
        }
    }
    dedup_loop(&mut lp, tol);
    let m = lp.len();
    let outside: Vec<bool> = (0..m)
        .map(|i| {
            let a = lp[i].p;
            let b = lp[(i + 1) % m].p;
            !inside_convex([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])], hole, tol)
        })
        .collect();

    if outside.iter().all(|&o| !o) {
        return Ok(Vec::new());
    }
    if outside.iter().all(|&o| o) {
        let hole_inside = hole.iter().any(|&v| {
            v[0] > square[0][0] && v[0] < square[2][0] && v[1] > square[0][1] && v[1] < square[2][1]
        });
        if hole_inside {
            return Err(Error::InvalidMeshParameters(
                "hole intersects a grid cell without crossing its boundary (hole too small for the grid)".into(),
            ));
        }
        return Ok(vec![square.to_vec()]);
    }

    // Every maximal outside run of the loop starts at an exit from the hole
    // and ends at an entry; closing it along the hole back to its own exit
    // gives one component of the square minus the (convex) hole.
    let mut components = Vec::new();
    for start in (0..m).filter(|&i| outside[i] && !outside[(i + m - 1) % m]) {
        let exit = lp[start];
        let mut poly = Vec::new();
        let mut i = start;
        while outside[i] {
            poly.push(lp[i].p);
            i = (i + 1) % m;
        }
        let entry = lp[i];
        poly.push(entry.p);
        let (ea, eb) = match (entry.hole_edge, exit.hole_edge) {
            (Some(ea), Some(eb)) => (ea, eb),
            _ => {
                return Err(Error::InvalidMeshParameters(
                    "cell boundary enters the hole without crossing a hole edge".into(),
                ))
            }
        };
        let mut v = ea;
        let mut steps = 0;
        while v != eb {
            poly.push(hole[v]);
            v = (v + n - 1) % n;
            steps += 1;
            if steps > n {
                return Err(Error::InvalidMeshParameters("hole walk did not terminate".into()));
            }
        }
        let mut pts: Vec<LoopPoint> = poly.into_iter().map(|p| LoopPoint { p, hole_edge: None }).collect();
        dedup_loop(&mut pts, tol);
        components.push(pts.into_iter().map(|l| l.p).collect());
    }
    Ok(components)
}

fn dedup_loop(lp: &mut Vec<LoopPoint>, tol: f64) {
    let mut out: Vec<LoopPoint> = Vec::with_capacity(lp.len());
    for &q in lp.iter() {
        match out.last_mut() {
            Some(last) if super::dist(&last.p, &q.p) <= tol => {
                if last.hole_edge.is_none() {
                    last.hole_edge = q.hole_edge;
                }
            }
            _ => out.push(q),
        }
    }
    while out.len() > 1 && super::dist(&out[0].p, &out[out.len() - 1].p) <= tol {
        let last = out.pop().unwrap();
        if out[0].hole_edge.is_none() {
            out[0].hole_edge = last.hole_edge;
        }
    }
    *lp = out;
}

/// Cartesian mesh of `bounds` with a regular-polygon approximation of a disk
/// removed. Cells cut by the hole boundary become general polygons; tiny cut
/// cells are merged into a neighbour.
pub fn generate_punctured(opts: &PuncturedOptions) -> Result<PolytopalMesh> {
    let b = opts.bounds;
    b.check()?;
    if opts.nx == 0 || opts.ny == 0 {
        return Err(Error::InvalidMeshParameters("nx, ny must be >= 1".into()));
    }
    if opts.hole_segments < 8 {
        return Err(Error::InvalidMeshParameters(format!(
            "hole_segments = {} must be >= 8",
            opts.hole_segments
        )));
    }
    let (c, r) = (opts.hole_center, opts.hole_radius);
    if !(r > 0.0) || c[0] - r <= b.min[0] || c[0] + r >= b.max[0] || c[1] - r <= b.min[1] || c[1] + r >= b.max[1] {
        return Err(Error::InvalidMeshParameters("hole must lie strictly inside the bounds".into()));
    }

    let dx = (b.max[0] - b.min[0]) / opts.nx as f64;
    let dy = (b.max[1] - b.min[1]) / opts.ny as f64;
    let cell_area = dx * dy;
    let h_cell = (dx * dx + dy * dy).sqrt();
    let tol = 1e-9 * h_cell;
    let hole = opts.hole_polygon();

    let mut registry = Registry::new(tol);
    let mut polygons: Vec<Vec<usize>> = Vec::new();
    let mut clipped: Vec<bool> = Vec::new();

    for j in 0..opts.ny {
        for i in 0..opts.nx {
            let sq = [
                grid_coord(&b, [opts.nx, opts.ny], i, j),
                grid_coord(&b, [opts.nx, opts.ny], i + 1, j),
                grid_coord(&b, [opts.nx, opts.ny], i + 1, j + 1),
                grid_coord(&b, [opts.nx, opts.ny], i, j + 1),
            ];
            // far from the hole: keep as is
            let far = sq[2][0] < c[0] - r || sq[0][0] > c[0] + r || sq[2][1] < c[1] - r || sq[0][1] > c[1] + r;
            let pieces = if far { vec![sq.to_vec()] } else { clip_square(sq, &hole, tol)? };
            for poly in pieces {
                let was_clipped = poly.len() != 4 || poly.iter().zip(sq.iter()).any(|(a, b)| a != b);
                let area = signed_area(&poly);
                if area < 1e-12 * h_cell * h_cell {
                    return Err(Error::DegenerateCell {
                        cell: polygons.len(),
                        reason: format!("clipped grid cell ({i}, {j}) has measure {area:e}"),
                    });
                }
                polygons.push(poly.into_iter().map(|p| registry.insert(p)).collect());
                clipped.push(was_clipped);
            }
        }
    }

    let rank: Vec<u8> = registry
        .points
        .iter()
        .map(|&p| {
            if (0..2).any(|d| p[d] == b.min[d] || p[d] == b.max[d]) {
                3
            } else if hole.iter().any(|v| super::dist(v, &p) <= tol) {
                2
            } else if on_polygon_boundary(p, &hole, tol) {
                1
            } else {
                0
            }
        })
        .collect();
    let points = collapse_short_edges(registry.points, &rank, &mut polygons, &mut clipped, SHORT_EDGE * h_cell);

    if opts.merge_fraction > 0.0 {
        agglomerate(&points, &mut polygons, &clipped, opts.merge_fraction * cell_area)?;
    }

    for (id, poly) in polygons.iter().enumerate() {
        if poly.len() > MAX_FACES_PER_CELL {
            return Err(Error::DegenerateCell {
                cell: id,
                reason: format!("{} faces exceeds the limit of {MAX_FACES_PER_CELL}", poly.len()),
            });
        }
    }

    PolytopalMesh::from_polygons(points, polygons)
}

/// Edges shorter than this fraction of the grid cell diagonal are collapsed.
const SHORT_EDGE: f64 = 1e-2;

fn on_polygon_boundary(p: Point, poly: &[Point], tol: f64) -> bool {
    let n = poly.len();
    (0..n).any(|j| {
        let (a, b) = (poly[j], poly[(j + 1) % n]);
        let len = super::dist(&a, &b);
        let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        let along = (b[0] - a[0]) * (p[0] - a[0]) + (b[1] - a[1]) * (p[1] - a[1]);
        cross.abs() <= tol * len && along >= -tol * len && along <= len * (len + tol)
    })
}

/// Merges the endpoints of every edge shorter than `min_len` into the
/// endpoint of higher rank, then drops polygons reduced below three vertices
/// and compacts the vertex list. Ranks: 3 on the outer boundary, 2 at hole
/// vertices, 1 on hole edges, 0 elsewhere, so both boundaries stay in place
/// and only interior grid points move.
fn collapse_short_edges(
    points: Vec<Point>,
    rank: &[u8],
    polygons: &mut Vec<Vec<usize>>,
    clipped: &mut Vec<bool>,
    min_len: f64,
) -> Vec<Point> {
    let mut parent: Vec<usize> = (0..points.len()).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for poly in polygons.iter() {
        for i in 0..poly.len() {
            let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
            if super::dist(&points[a], &points[b]) >= min_len {
                continue;
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb || rank[ra].min(rank[rb]) >= 2 {
                continue;
            }
            let keep_a = (rank[ra], std::cmp::Reverse(ra)) > (rank[rb], std::cmp::Reverse(rb));
            if keep_a {
                parent[rb] = ra;
            } else {
                parent[ra] = rb;
            }
        }
    }
    let mut kept = Vec::with_capacity(polygons.len());
    for (poly, &c) in polygons.iter_mut().zip(clipped.iter()) {
        let mut out: Vec<usize> = Vec::with_capacity(poly.len());
        for &v in poly.iter() {
            let r = find(&mut parent, v);
            if out.last() != Some(&r) {
                out.push(r);
            }
        }
        while out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        *poly = out;
        kept.push((poly.len() >= 3, c));
    }
    let mut it = kept.iter();
    polygons.retain(|_| it.next().is_some_and(|k| k.0));
    *clipped = kept.iter().filter(|k| k.0).map(|k| k.1).collect();

    let mut new_id = vec![usize::MAX; points.len()];
    let mut compact = Vec::new();
    for poly in polygons.iter_mut() {
        for v in poly.iter_mut() {
            if new_id[*v] == usize::MAX {
                new_id[*v] = compact.len();
                compact.push(points[*v]);
            }
            *v = new_id[*v];
        }
    }
    compact
}

fn edge_len(points: &[Point], a: usize, b: usize) -> f64 {
    super::dist(&points[a], &points[b])
}

/// Merges every clipped polygon with area below `min_area` into the adjacent
/// polygon across its longest edge.
fn agglomerate(points: &[Point], polygons: &mut Vec<Vec<usize>>, clipped: &[bool], min_area: f64) -> Result<()> {
    let area_of = |poly: &Vec<usize>| signed_area(&poly.iter().map(|&v| points[v]).collect::<Vec<_>>());
    let mut alive: Vec<bool> = vec![true; polygons.len()];
    loop {
        // directed edge -> polygon
        let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
        for (pid, poly) in polygons.iter().enumerate() {
            if !alive[pid] {
                continue;
            }
            for i in 0..poly.len() {
                owner.insert((poly[i], poly[(i + 1) % poly.len()]), pid);
            }
        }
        let small = (0..polygons.len()).find(|&p| alive[p] && clipped[p] && area_of(&polygons[p]) < min_area);
        let Some(p) = small else { break };
        let poly = &polygons[p];
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..poly.len() {
            let (a, bb) = (poly[i], poly[(i + 1) % poly.len()]);
            if let Some(&q) = owner.get(&(bb, a)) {
                let len = edge_len(points, a, bb);
                if best.map_or(true, |(l, _, _)| len > l) {
                    best = Some((len, q, i));
                }
            }
        }
        let Some((_, q, i)) = best else {
            return Err(Error::DegenerateCell {
                cell: p,
                reason: "small clipped cell has no neighbour to merge with".into(),
            });
        };
        let merged = merge_polygons(&polygons[p], &polygons[q], i);
        polygons[q] = merged;
        alive[p] = false;
        // q absorbed p; it is no longer small unless still tiny
    }
    let mut k = 0;
    polygons.retain(|_| {
        let keep = alive[k];
        k += 1;
        keep
    });
    Ok(())
}

/// Union of `p` and `q` across p's edge `i` (p[i] -> p[i+1]), which q
/// traverses in the opposite direction.
fn merge_polygons(p: &[usize], q: &[usize], i: usize) -> Vec<usize> {
    let np = p.len();
    let a = p[i];
    let _b = p[(i + 1) % np];
    // p from b around to a (inclusive), q from a around to b (exclusive ends)
    let mut out: Vec<usize> = (0..np).map(|k| p[(i + 1 + k) % np]).collect(); // b ... a
    let jq = q.iter().position(|&v| v == a).expect("shared vertex");
    let nq = q.len();
    // q traverses b -> a, so q[jq - 1] = b; append q strictly after a up to before b
    for k in 1..nq - 1 {
        out.push(q[(jq + k) % nq]);
    }
    // remove spikes x, y, x produced by multiple shared edges
    let mut changed = true;
    while changed && out.len() > 3 {
        changed = false;
        let n = out.len();
        for s in 0..n {
            if out[s] == out[(s + 2) % n] {
                let mid = (s + 1) % n;
                let far = (s + 2) % n;
                let mut rm = [mid, far];
                rm.sort_unstable();
                out.remove(rm[1]);
                out.remove(rm[0]);
                changed = true;
                break;
            }
        }
    }
    out
}
