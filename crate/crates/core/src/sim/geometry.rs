//! Spatial queries on a square window: bucketed nearest-neighbor searches,
//! per-cell Voronoi cover radii, and exact uniform sampling inside a cell.

use std::f64::consts::PI;

/// A position in the simulation window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn dist2(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(self, other: Point) -> f64 {
        self.dist2(other).sqrt()
    }
}

/// Uniform-grid spatial index over points in `[0, side]²`, CSR bucket layout.
pub(crate) struct PointGrid {
    side: f64,
    n: usize,
    cell: f64,
    offsets: Vec<u32>,
    items: Vec<u32>,
}

impl PointGrid {
    pub fn build(points: &[Point], side: f64) -> Self {
        let n = ((points.len() as f64).sqrt().ceil() as usize).max(1);
        let cell = side / n as f64;
        let mut counts = vec![0u32; n * n + 1];
        let idx_of = |p: &Point| -> usize {
            let i = ((p.x / cell) as usize).min(n - 1);
            let j = ((p.y / cell) as usize).min(n - 1);
            j * n + i
        };
        for p in points {
            counts[idx_of(p) + 1] += 1;
        }
        for k in 1..counts.len() {
            counts[k] += counts[k - 1];
        }
        let mut items = vec![0u32; points.len()];
        let mut cursor = counts.clone();
        for (pi, p) in points.iter().enumerate() {
            let b = idx_of(p);
            items[cursor[b] as usize] = pi as u32;
            cursor[b] += 1;
        }
        Self { side, n, cell, offsets: counts, items }
    }

    fn bucket_of(&self, p: Point) -> (isize, isize) {
        let i = ((p.x / self.cell) as isize).clamp(0, self.n as isize - 1);
        let j = ((p.y / self.cell) as isize).clamp(0, self.n as isize - 1);
        (i, j)
    }

    fn bucket_points(&self, i: isize, j: isize) -> &[u32] {
        let b = j as usize * self.n + i as usize;
        let lo = self.offsets[b] as usize;
        let hi = self.offsets[b + 1] as usize;
        &self.items[lo..hi]
    }

    /// Visit buckets ring by ring around `p`. After each completed ring,
    /// `stop(state, reach)` is consulted with `reach` the minimum distance any
    /// unvisited point can have; `visit` may request an abort by returning
    /// false.
    fn ring_scan<S, FV, FS>(&self, p: Point, state: &mut S, mut visit: FV, mut stop: FS)
    where
        FV: FnMut(&mut S, u32) -> bool,
        FS: FnMut(&S, f64) -> bool,
    {
        let (ci, cj) = self.bucket_of(p);
        let n = self.n as isize;
        macro_rules! visit_bucket {
            ($i:expr, $j:expr) => {
                for &k in self.bucket_points($i, $j) {
                    if !visit(state, k) {
                        return;
                    }
                }
            };
        }
        for r in 0.. {
            // Ring fully outside the grid: nothing left to scan.
            if r > 0 && ci - r < 0 && ci + r > n - 1 && cj - r < 0 && cj + r > n - 1 {
                return;
            }
            if r == 0 {
                visit_bucket!(ci, cj);
            } else {
                for i in (ci - r).max(0)..=(ci + r).min(n - 1) {
                    if cj - r >= 0 {
                        visit_bucket!(i, cj - r);
                    }
                    if cj + r <= n - 1 {
                        visit_bucket!(i, cj + r);
                    }
                }
                for j in (cj - r + 1).max(0)..=(cj + r - 1).min(n - 1) {
                    if ci - r >= 0 {
                        visit_bucket!(ci - r, j);
                    }
                    if ci + r <= n - 1 {
                        visit_bucket!(ci + r, j);
                    }
                }
            }
            // A point in ring r+1 or beyond is at least r * cell away.
            if stop(state, r as f64 * self.cell) {
                return;
            }
        }
    }

    /// Nearest point to `p`, optionally skipping one index.
    /// Returns (index, squared distance).
    pub fn nearest(&self, points: &[Point], p: Point, skip: Option<u32>) -> (u32, f64) {
        let mut best = (u32::MAX, f64::INFINITY);
        self.ring_scan(
            p,
            &mut best,
            |best, k| {
                if Some(k) != skip {
                    let d2 = points[k as usize].dist2(p);
                    if d2 < best.1 {
                        *best = (k, d2);
                    }
                }
                true
            },
            |best, reach| best.1 <= reach * reach,
        );
        best
    }

    /// Whether point `i` is the nearest to `q` (squared serving distance
    /// `d2_own` precomputed). Aborts as soon as any closer point is seen.
    pub fn is_nearest(&self, points: &[Point], q: Point, i: u32, d2_own: f64) -> bool {
        let mut ok = true;
        self.ring_scan(
            q,
            &mut ok,
            |ok, k| {
                if k != i && points[k as usize].dist2(q) < d2_own {
                    *ok = false;
                    return false;
                }
                true
            },
            |_, reach| reach * reach >= d2_own,
        );
        ok
    }

    /// Indices of all points (excluding `skip`) within `radius` of `p`,
    /// appended to `out`.
    pub fn collect_within(
        &self,
        points: &[Point],
        p: Point,
        radius: f64,
        skip: u32,
        out: &mut Vec<u32>,
    ) {
        out.clear();
        let r2 = radius * radius;
        self.ring_scan(
            p,
            out,
            |out, k| {
                if k != skip && points[k as usize].dist2(p) <= r2 {
                    out.push(k);
                }
                true
            },
            |_, reach| reach >= radius,
        );
    }

    /// Six-sector cover radius (squared) for the Voronoi cell of point `i`:
    /// the cell, clipped to the window, lies inside the disk of this radius.
    ///
    /// Per 60° sector the cell cannot extend beyond the nearest same-sector
    /// point, nor beyond the window; the cover is the max over sectors of the
    /// smaller of the two.
    pub fn voronoi_cover_radius2(&self, points: &[Point], i: u32) -> f64 {
        let p = points[i as usize];
        // A sector can be empty of points all the way to the window edge;
        // clipping by the window extent keeps the bound finite and lets the
        // ring scan terminate early instead of sweeping the whole grid.
        let mut ext2 = [f64::INFINITY; 6];
        for (s, e) in ext2.iter_mut().enumerate() {
            let ext = sector_window_extent(p, s, self.side);
            *e = ext * ext;
        }
        let mut sectors = [f64::INFINITY; 6];
        self.ring_scan(
            p,
            &mut sectors,
            |sectors, k| {
                if k != i {
                    let q = points[k as usize];
                    let d2 = q.dist2(p);
                    let s = sector_of(q.x - p.x, q.y - p.y);
                    if d2 < sectors[s] {
                        sectors[s] = d2;
                    }
                }
                true
            },
            |sectors, reach| {
                let r2 = reach * reach;
                sectors.iter().zip(&ext2).all(|(&b, &e)| b.min(e) <= r2)
            },
        );
        let mut cover = 0.0f64;
        for (&b, &e) in sectors.iter().zip(&ext2) {
            cover = cover.max(b.min(e));
        }
        cover
    }
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Sector index in 0..6 for the direction (dx, dy); sector k spans
/// [−π + kπ/3, −π + (k+1)π/3). Boundary directions may land in the adjacent
/// sector, which keeps every angular gap within 60° either way.
pub(crate) fn sector_of(dx: f64, dy: f64) -> usize {
    if dy >= 0.0 {
        if dy < SQRT3 * dx {
            3
        } else if dy < -SQRT3 * dx {
            5
        } else {
            4
        }
    } else if -dy < SQRT3 * dx {
        2
    } else if dy > SQRT3 * dx {
        0
    } else {
        1
    }
}

fn ray_exit_distance(p: Point, dir_x: f64, dir_y: f64, side: f64) -> f64 {
    let tx = if dir_x > 1e-300 {
        (side - p.x) / dir_x
    } else if dir_x < -1e-300 {
        -p.x / dir_x
    } else {
        f64::INFINITY
    };
    let ty = if dir_y > 1e-300 {
        (side - p.y) / dir_y
    } else if dir_y < -1e-300 {
        -p.y / dir_y
    } else {
        f64::INFINITY
    };
    tx.min(ty).max(0.0)
}

// Unit vectors of the sector boundary angles −π + kπ/3 for k = 0..=6.
const SECTOR_DIRS: [(f64, f64); 7] = [
    (-1.0, 0.0),
    (-0.5, -SQRT3 * 0.5),
    (0.5, -SQRT3 * 0.5),
    (1.0, 0.0),
    (0.5, SQRT3 * 0.5),
    (-0.5, SQRT3 * 0.5),
    (-1.0, 0.0),
];

/// Farthest window point from `p` within sector `s` (exact: the max over the
/// convex region window ∩ sector is attained at a corner or a ray exit).
pub(crate) fn sector_window_extent(p: Point, s: usize, side: f64) -> f64 {
    let mut best: f64 = 0.0;
    for &(dx, dy) in &[SECTOR_DIRS[s], SECTOR_DIRS[s + 1]] {
        best = best.max(ray_exit_distance(p, dx, dy, side));
    }
    for &(cx, cy) in &[(0.0, 0.0), (side, 0.0), (0.0, side), (side, side)] {
        let dx = cx - p.x;
        let dy = cy - p.y;
        if (dx != 0.0 || dy != 0.0) && sector_of(dx, dy) == s {
            best = best.max((dx * dx + dy * dy).sqrt());
        }
    }
    best
}

/// Uniform sample from the Voronoi cell of point `i`, clipped to the window.
///
/// Rejection from the covering disk with membership via early-abort nearest
/// tests; needle-shaped cells whose acceptance ratio is pathologically small
/// fall back to exact sampling from the clipped cell polygon.
pub(crate) fn sample_in_voronoi_cell<R: rand::Rng>(
    points: &[Point],
    grid: &PointGrid,
    i: u32,
    side: f64,
    rng: &mut R,
) -> Point {
    let center = points[i as usize];
    let radius = grid.voronoi_cover_radius2(points, i).sqrt();
    for _ in 0..50_000 {
        let r = radius * rng.gen::<f64>().sqrt();
        let phi = 2.0 * PI * rng.gen::<f64>();
        let cand = Point { x: center.x + r * phi.cos(), y: center.y + r * phi.sin() };
        if cand.x < 0.0 || cand.x > side || cand.y < 0.0 || cand.y > side {
            continue;
        }
        if grid.is_nearest(points, cand, i, cand.dist2(center)) {
            return cand;
        }
    }
    sample_from_cell_polygon(points, grid, i, side, radius, rng)
}

/// Exact cell sampling: build V_i ∩ window as a convex polygon by clipping
/// the cover box with the bisectors of every point close enough to cut it,
/// then draw uniformly via fan triangulation.
fn sample_from_cell_polygon<R: rand::Rng>(
    points: &[Point],
    grid: &PointGrid,
    i: u32,
    side: f64,
    radius: f64,
    rng: &mut R,
) -> Point {
    let c = points[i as usize];
    // Bounding box of the cover disk, clipped to the window. The cell lies
    // inside it, so only bisectors of points within 2√2·radius can cut it.
    let mut poly = vec![
        Point { x: (c.x - radius).max(0.0), y: (c.y - radius).max(0.0) },
        Point { x: (c.x + radius).min(side), y: (c.y - radius).max(0.0) },
        Point { x: (c.x + radius).min(side), y: (c.y + radius).min(side) },
        Point { x: (c.x - radius).max(0.0), y: (c.y + radius).min(side) },
    ];
    let mut neighbors = Vec::new();
    grid.collect_within(points, c, 2.0 * std::f64::consts::SQRT_2 * radius, i, &mut neighbors);
    let mut tmp = Vec::with_capacity(poly.len() + 1);
    for &k in &neighbors {
        let q = points[k as usize];
        // Half-plane of points at least as close to c as to q:
        // 2(q − c)·p ≤ |q|² − |c|².
        let a = 2.0 * (q.x - c.x);
        let b = 2.0 * (q.y - c.y);
        let rhs = q.x * q.x + q.y * q.y - c.x * c.x - c.y * c.y;
        tmp.clear();
        let m = poly.len();
        for v in 0..m {
            let p0 = poly[v];
            let p1 = poly[(v + 1) % m];
            let f0 = a * p0.x + b * p0.y - rhs;
            let f1 = a * p1.x + b * p1.y - rhs;
            if f0 <= 0.0 {
                tmp.push(p0);
            }
            if (f0 < 0.0) != (f1 < 0.0) && f0 != f1 {
                let t = f0 / (f0 - f1);
                if t > 0.0 && t < 1.0 {
                    tmp.push(Point {
                        x: p0.x + t * (p1.x - p0.x),
                        y: p0.y + t * (p1.y - p0.y),
                    });
                }
            }
        }
        std::mem::swap(&mut poly, &mut tmp);
        if poly.len() < 3 {
            return c;
        }
    }
    // Fan triangulation with area-weighted triangle choice.
    let anchor = poly[0];
    let mut areas = Vec::with_capacity(poly.len().saturating_sub(2));
    let mut total = 0.0;
    for v in 1..poly.len() - 1 {
        let (b1, b2) = (poly[v], poly[v + 1]);
        let area = 0.5
            * ((b1.x - anchor.x) * (b2.y - anchor.y) - (b2.x - anchor.x) * (b1.y - anchor.y))
                .abs();
        total += area;
        areas.push(area);
    }
    if total <= 0.0 {
        return c;
    }
    let mut pick = rng.gen::<f64>() * total;
    let mut tri = areas.len() - 1;
    for (t, &area) in areas.iter().enumerate() {
        if pick < area {
            tri = t;
            break;
        }
        pick -= area;
    }
    let (b1, b2) = (poly[tri + 1], poly[tri + 2]);
    let mut u = rng.gen::<f64>();
    let mut v = rng.gen::<f64>();
    if u + v > 1.0 {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    Point {
        x: anchor.x + u * (b1.x - anchor.x) + v * (b2.x - anchor.x),
        y: anchor.y + u * (b1.y - anchor.y) + v * (b2.y - anchor.y),
    }
}
