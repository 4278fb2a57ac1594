//! Conformal modulus of rectilinear quadrilaterals and the Rengel bounds.
//!
//! The modulus is the reciprocal of the Dirichlet energy of the potential
//! that is 1 on the side B1, 0 on B2 and has zero normal derivative on the
//! a-sides. On the grid the energy of a cell is half the sum of the squared
//! differences along its four edges, which is the piecewise-linear energy on
//! the triangulated grid. Discrete moduli therefore approach the true value
//! from below.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::geom::Point;
use crate::quad::{cyclic_between, MarkedQuadrilateral, SideId};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ModulusError {
    #[error("edge {edge} is not axis-parallel")]
    NotRectilinear { edge: usize },
    #[error("coordinate {value} is not a multiple of the grid step")]
    CoordinatesNotOnGrid { value: f64 },
    #[error("grid step must be positive and finite")]
    InvalidStep,
    #[error("grid of {nodes} nodes exceeds the limit")]
    GridTooLarge { nodes: usize },
    #[error("conjugate gradient stalled at relative residual {residual} after {iterations} iterations")]
    SolverDiverged { residual: f64, iterations: usize },
    #[error("extrapolation needs at least two levels")]
    NotEnoughLevels,
    #[error("levels must halve the step each time")]
    LevelsNotHalving,
    #[error("internal distances must be positive")]
    NonPositiveDistance,
    #[error("K must be at least 1, got {0}")]
    InvalidK(f64),
}

/// Upper bound on grid nodes accepted by the solver.
pub const MAX_GRID_NODES: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeClass {
    Exterior,
    Interior,
    /// On the closed side B2, where the potential is 0.
    Dirichlet0,
    /// On the closed side B1, where the potential is 1.
    Dirichlet1,
    /// On an a-side away from the b-sides.
    Neumann,
}

/// Grid nodes of a rectilinear quadrilateral, classified, with the edge
/// weights of the discrete energy.
#[derive(Clone, Debug, PartialEq)]
pub struct GridDiscretization {
    pub h: f64,
    /// Coordinates of node `(0, 0)`.
    pub origin: Point,
    pub nx: usize,
    pub ny: usize,
    pub classes: Vec<NodeClass>,
    /// Weight of the link from node `k` to `k + 1`.
    wx: Vec<f64>,
    /// Weight of the link from node `k` to `k + nx`.
    wy: Vec<f64>,
}

impl GridDiscretization {
    pub fn node(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn position(&self, k: usize) -> Point {
        let (i, j) = (k % self.nx, k / self.nx);
        Point::new(self.origin.x + i as f64 * self.h, self.origin.y + j as f64 * self.h)
    }

    pub fn count(&self, class: NodeClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    fn links(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let nx = self.nx;
        let hx = self.wx.iter().enumerate().filter(|(_, &w)| w > 0.0).map(|(k, &w)| (k, k + 1, w));
        let hy = self.wy.iter().enumerate().filter(|(_, &w)| w > 0.0).map(move |(k, &w)| (k, k + nx, w));
        hx.chain(hy)
    }

    /// Discrete energy of a full nodal vector.
    pub fn energy(&self, u: &[f64]) -> f64 {
        self.links().map(|(a, b, w)| w * (u[a] - u[b]) * (u[a] - u[b])).sum()
    }
}

fn lattice(v: f64, h: f64) -> Result<i64, ModulusError> {
    let s = v / h;
    let r = libm::round(s);
    if (s - r).abs() > 1e-9 * r.abs().max(1.0) || r.abs() > 2f64.powi(40) {
        return Err(ModulusError::CoordinatesNotOnGrid { value: v });
    }
    Ok(r as i64)
}

/// Classifies the grid of step `h` for a rectilinear quadrilateral.
pub fn discretize(q: &MarkedQuadrilateral, h: f64) -> Result<GridDiscretization, ModulusError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(ModulusError::InvalidStep);
    }
    let poly = q.polygon();
    let n = poly.len();
    for (e, (a, b)) in poly.edges().enumerate() {
        if a.x != b.x && a.y != b.y {
            return Err(ModulusError::NotRectilinear { edge: e });
        }
    }
    let mut iv = Vec::with_capacity(n);
    for &v in poly.vertices() {
        iv.push((lattice(v.x, h)?, lattice(v.y, h)?));
    }
    let imin = iv.iter().map(|p| p.0).min().unwrap();
    let jmin = iv.iter().map(|p| p.1).min().unwrap();
    for p in iv.iter_mut() {
        p.0 -= imin;
        p.1 -= jmin;
    }
    let w = iv.iter().map(|p| p.0).max().unwrap() as usize;
    let hgt = iv.iter().map(|p| p.1).max().unwrap() as usize;
    let (nx, ny) = (w + 1, hgt + 1);
    if nx.saturating_mul(ny) > MAX_GRID_NODES {
        return Err(ModulusError::GridTooLarge { nodes: nx.saturating_mul(ny) });
    }
    let edge_len = |e: usize| -> i64 {
        let (a, b) = (iv[e], iv[(e + 1) % n]);
        (b.0 - a.0).abs() + (b.1 - a.1).abs()
    };
    let mut marks = [(0usize, 0i64); 4];
    for (j, m) in q.marks().iter().enumerate() {
        let len = edge_len(m.edge) as f64;
        let k = m.t * len;
        let r = libm::round(k);
        if (k - r).abs() > 1e-9 * len.max(1.0) {
            return Err(ModulusError::CoordinatesNotOnGrid { value: m.t });
        }
        marks[j] = (m.edge, r as i64);
    }

    // Cells whose centre is inside: scan rows against the vertical edges.
    let mut inside = vec![false; w * hgt];
    let verticals: Vec<(i64, i64, i64)> = (0..n)
        .filter_map(|e| {
            let (a, b) = (iv[e], iv[(e + 1) % n]);
            (a.0 == b.0 && a.1 != b.1).then_some((a.0, a.1.min(b.1), a.1.max(b.1)))
        })
        .collect();
    for j in 0..hgt as i64 {
        let mut xs: Vec<i64> = verticals.iter().filter(|v| v.1 <= j && j < v.2).map(|v| v.0).collect();
        xs.sort_unstable();
        for pair in xs.chunks(2) {
            if let [x0, x1] = *pair {
                for i in x0..x1 {
                    inside[j as usize * w + i as usize] = true;
                }
            }
        }
    }

    let mut classes = vec![NodeClass::Exterior; nx * ny];
    let mut wx = vec![0.0; nx * ny];
    let mut wy = vec![0.0; nx * ny];
    for j in 0..hgt {
        for i in 0..w {
            if !inside[j * w + i] {
                continue;
            }
            let k = j * nx + i;
            wx[k] += 0.5;
            wx[k + nx] += 0.5;
            wy[k] += 0.5;
            wy[k + 1] += 0.5;
            for c in [k, k + 1, k + nx, k + nx + 1] {
                classes[c] = NodeClass::Interior;
            }
        }
    }
    let side = |s: SideId, loc: (usize, i64)| {
        let (a, b) = s.marks();
        cyclic_between(marks[a], loc, marks[b])
    };
    for e in 0..n {
        let (a, b) = (iv[e], iv[(e + 1) % n]);
        let len = edge_len(e);
        let d = ((b.0 - a.0).signum(), (b.1 - a.1).signum());
        for k in 0..len {
            let node = (a.1 + k * d.1) as usize * nx + (a.0 + k * d.0) as usize;
            classes[node] = if side(SideId::B1, (e, k)) {
                NodeClass::Dirichlet1
            } else if side(SideId::B2, (e, k)) {
                NodeClass::Dirichlet0
            } else {
                NodeClass::Neumann
            };
        }
    }
    let origin = Point::new(imin as f64 * h, jmin as f64 * h);
    Ok(GridDiscretization { h, origin, nx, ny, classes, wx, wy })
}

/// The discrete potential and solver diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    pub grid: GridDiscretization,
    /// Nodal values, zero at exterior nodes.
    pub values: Vec<f64>,
    pub energy: f64,
    pub iterations: usize,
    /// Quadratic objective after each iteration; non-increasing for CG.
    pub objective_history: Vec<f64>,
    /// Relative residual after each iteration.
    pub residual_history: Vec<f64>,
}

/// Solves for the discrete potential by Jacobi-preconditioned conjugate
/// gradients, stopping at relative residual `tol`.
pub fn solve_potential(q: &MarkedQuadrilateral, h: f64, tol: f64) -> Result<Potential, ModulusError> {
    let grid = discretize(q, h)?;
    let total = grid.nx * grid.ny;
    let mut index = vec![usize::MAX; total];
    let mut free = Vec::new();
    let mut values = vec![0.0; total];
    for (k, c) in grid.classes.iter().enumerate() {
        match c {
            NodeClass::Interior | NodeClass::Neumann => {
                index[k] = free.len();
                free.push(k);
            }
            NodeClass::Dirichlet1 => values[k] = 1.0,
            _ => {}
        }
    }
    let nf = free.len();
    let mut diag = vec![0.0; nf];
    let mut rhs = vec![0.0; nf];
    let mut coupling: Vec<(u32, u32, f64)> = Vec::new();
    for (a, b, w) in grid.links() {
        match (index[a], index[b]) {
            (usize::MAX, usize::MAX) => {}
            (ia, usize::MAX) => {
                diag[ia] += w;
                rhs[ia] += w * values[b];
            }
            (usize::MAX, ib) => {
                diag[ib] += w;
                rhs[ib] += w * values[a];
            }
            (ia, ib) => {
                diag[ia] += w;
                diag[ib] += w;
                coupling.push((ia as u32, ib as u32, w));
            }
        }
    }
    let apply = |x: &[f64], y: &mut [f64]| {
        for i in 0..x.len() {
            y[i] = diag[i] * x[i];
        }
        for &(a, b, w) in &coupling {
            let (a, b) = (a as usize, b as usize);
            y[a] -= w * x[b];
            y[b] -= w * x[a];
        }
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    let bnorm = libm::sqrt(dot(&rhs, &rhs));
    let mut x = vec![0.0; nf];
    let mut objective_history = Vec::new();
    let mut residual_history = Vec::new();
    let mut iterations = 0;
    if bnorm > 0.0 {
        let mut r = rhs.clone();
        let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
        let mut p = z.clone();
        let mut ap = vec![0.0; nf];
        let mut rz = dot(&r, &z);
        let cap = 50 * nf.max(1);
        loop {
            apply(&p, &mut ap);
            let alpha = rz / dot(&p, &ap);
            for i in 0..nf {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            iterations += 1;
            let res = libm::sqrt(dot(&r, &r)) / bnorm;
            residual_history.push(res);
            objective_history.push(-0.5 * (dot(&x, &rhs) + dot(&x, &r)));
            if res <= tol {
                break;
            }
            if iterations >= cap || !res.is_finite() {
                return Err(ModulusError::SolverDiverged { residual: res, iterations });
            }
            for i in 0..nf {
                z[i] = r[i] / diag[i];
            }
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..nf {
                p[i] = z[i] + beta * p[i];
            }
        }
    }
    for (i, &k) in free.iter().enumerate() {
        values[k] = x[i];
    }
    let energy = grid.energy(&values);
    Ok(Potential { grid, values, energy, iterations, objective_history, residual_history })
}

/// Numerical modulus with its discretization history.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulusResult {
    pub modulus: f64,
    pub energy: f64,
    /// `(h, M(h))` for every solved level, coarsest first.
    pub levels: Vec<(f64, f64)>,
    pub error_estimate: f64,
    pub iterations: usize,
    /// Fitted convergence order, when three levels allowed a fit.
    pub order: Option<f64>,
}

/// Largest power-of-two step with all coordinates on the lattice and at
/// least `min_cells` cells across the longer side.
pub fn lattice_step(q: &MarkedQuadrilateral, min_cells: f64) -> f64 {
    let bb = q.polygon().bbox();
    let extent = bb.width().max(bb.height());
    let mut h = libm::exp2(libm::floor(libm::log2(extent / min_cells)));
    let mut coords: Vec<f64> = Vec::new();
    for v in q.polygon().vertices().iter().copied().chain(q.mark_points()) {
        coords.push(v.x);
        coords.push(v.y);
    }
    for _ in 0..60 {
        if coords.iter().all(|&c| (c / h - libm::round(c / h)).abs() <= 1e-9 * libm::round(c / h).abs().max(1.0)) {
            break;
        }
        h *= 0.5;
    }
    h
}

/// Default relative residual for the solver.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Modulus on the grid of step `h`.
///
/// When the grid of step `2h` also fits the polygon it is solved too, and
/// the difference of the two values is reported as the error estimate;
/// otherwise the estimate is infinite.
pub fn compute_modulus(q: &MarkedQuadrilateral, h: f64, tol: f64) -> Result<ModulusResult, ModulusError> {
    let fine = solve_potential(q, h, tol)?;
    let m = 1.0 / fine.energy;
    let mut levels = vec![(h, m)];
    let mut iterations = fine.iterations;
    let mut error_estimate = f64::INFINITY;
    if let Ok(coarse) = solve_potential(q, 2.0 * h, tol) {
        let mc = 1.0 / coarse.energy;
        levels.insert(0, (2.0 * h, mc));
        iterations += coarse.iterations;
        error_estimate = (m - mc).abs();
    }
    Ok(ModulusResult { modulus: m, energy: fine.energy, levels, error_estimate, iterations, order: None })
}

/// Richardson extrapolation over successively halved steps.
pub fn modulus_extrapolated(q: &MarkedQuadrilateral, levels: &[f64]) -> Result<ModulusResult, ModulusError> {
    if levels.len() < 2 {
        return Err(ModulusError::NotEnoughLevels);
    }
    for w in levels.windows(2) {
        if (w[1] * 2.0 - w[0]).abs() > 1e-12 * w[0] {
            return Err(ModulusError::LevelsNotHalving);
        }
    }
    let mut values = Vec::with_capacity(levels.len());
    let mut iterations = 0;
    for &h in levels {
        let p = solve_potential(q, h, DEFAULT_TOLERANCE)?;
        iterations += p.iterations;
        values.push((h, 1.0 / p.energy));
    }
    let (extrapolated, order) = richardson(&values.iter().map(|v| v.1).collect::<Vec<_>>());
    let last = values.last().unwrap().1;
    Ok(ModulusResult {
        modulus: extrapolated,
        energy: 1.0 / extrapolated,
        levels: values,
        error_estimate: (last - extrapolated).abs(),
        iterations,
        order,
    })
}

/// Extrapolates a sequence computed at halving steps.
///
/// The order is fitted from the last three values; with two values, or when
/// the fit is not convergent, first order is assumed.
pub fn richardson(m: &[f64]) -> (f64, Option<f64>) {
    let k = m.len();
    let last = m[k - 1];
    let d1 = last - m[k - 2];
    if d1 == 0.0 {
        return (last, None);
    }
    let mut order = None;
    if k >= 3 {
        let d0 = m[k - 2] - m[k - 3];
        let ratio = d0 / d1;
        if ratio.is_finite() && ratio > 1.0 {
            order = Some(libm::log2(ratio));
        }
    }
    let p = order.unwrap_or(1.0);
    (last + d1 / (libm::exp2(p) - 1.0), order)
}

/// Bounds on the modulus in terms of the two internal distances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RengelBounds {
    pub lower: f64,
    pub upper: f64,
}

impl RengelBounds {
    pub fn contains(&self, m: f64, slack: f64) -> bool {
        self.lower - slack <= m && m <= self.upper + slack
    }
}

fn rengel_lower(x: f64) -> f64 {
    let y = libm::log1p(2.0 * x);
    y * y / (PI * (1.0 + 2.0 * y))
}

/// Rengel's inequalities evaluated at `s_a`, `s_b`.
pub fn rengel_bounds(s_a: f64, s_b: f64) -> Result<RengelBounds, ModulusError> {
    if !(s_a > 0.0 && s_b > 0.0) {
        return Err(ModulusError::NonPositiveDistance);
    }
    let lower = rengel_lower(s_b / s_a);
    let upper = 1.0 / rengel_lower(s_a / s_b);
    Ok(RengelBounds { lower, upper })
}

/// Largest ratio of internal distances compatible with a modulus in
/// `[1/K, K]`, found by bisection on `lower(x) = K`.
pub fn ratio_bound_from_k(k: f64) -> Result<f64, ModulusError> {
    if !(k >= 1.0 && k.is_finite()) {
        return Err(ModulusError::InvalidK(k));
    }
    // lower(x) = g(ln(1 + 2x)) with g(y) = y^2 / (pi (1 + 2y)) increasing.
    let g = |y: f64| y * y / (PI * (1.0 + 2.0 * y));
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while g(hi) < k {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * libm::expm1(0.5 * (lo + hi)))
}
