mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use quadlab_core::geodesic::geodesic_between_sides;
use quadlab_core::geom::point_polyline_distance;
use quadlab_core::modulus::{
    compute_modulus, lattice_step, modulus_extrapolated, ratio_bound_from_k, rengel_bounds, solve_potential,
    ModulusError, DEFAULT_TOLERANCE,
};
use quadlab_core::{Containment, MarkedQuadrilateral, Point, SideId, SidePair};

/// Successive over-relaxation on the same cell energy, built from point
/// queries only.
fn sor_modulus(q: &MarkedQuadrilateral, h: f64) -> f64 {
    let bb = q.polygon().bbox();
    let nx = ((bb.width() / h).round() as usize) + 1;
    let ny = ((bb.height() / h).round() as usize) + 1;
    let at = |i: usize, j: usize| Point::new(bb.min.x + i as f64 * h, bb.min.y + j as f64 * h);
    let cell = |i: usize, j: usize| q.contains_point(at(i, j) + Point::new(0.5 * h, 0.5 * h)) == Containment::Inside;
    let mut inside = vec![false; (nx - 1) * (ny - 1)];
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            inside[j * (nx - 1) + i] = cell(i, j);
        }
    }
    let cell_in = |i: isize, j: isize| {
        i >= 0 && j >= 0 && (i as usize) < nx - 1 && (j as usize) < ny - 1 && inside[j as usize * (nx - 1) + i as usize]
    };
    let b1 = q.side_arc(SideId::B1);
    let b2 = q.side_arc(SideId::B2);
    let tol = 1e-12 * bb.diagonal();
    let mut u = vec![0.0; nx * ny];
    let mut fixed = vec![true; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let p = at(i, j);
            let k = j * nx + i;
            let (ii, jj) = (i as isize, j as isize);
            let touches = cell_in(ii - 1, jj - 1) || cell_in(ii, jj - 1) || cell_in(ii - 1, jj) || cell_in(ii, jj);
            if !touches {
                continue;
            }
            if point_polyline_distance(p, &b1) <= tol {
                u[k] = 1.0;
            } else if point_polyline_distance(p, &b2) > tol {
                fixed[k] = false;
                u[k] = 0.5;
            }
        }
    }
    // Link weight: half per adjacent inside cell.
    let wx = |i: usize, j: usize| 0.5 * (cell_in(i as isize, j as isize - 1) as u8 + cell_in(i as isize, j as isize) as u8) as f64;
    let wy = |i: usize, j: usize| 0.5 * (cell_in(i as isize - 1, j as isize) as u8 + cell_in(i as isize, j as isize) as u8) as f64;
    for _ in 0..200_000 {
        let mut change = 0.0f64;
        for j in 0..ny {
            for i in 0..nx {
                let k = j * nx + i;
                if fixed[k] {
                    continue;
                }
                let (mut s, mut w) = (0.0, 0.0);
                if i + 1 < nx {
                    let c = wx(i, j);
                    s += c * u[k + 1];
                    w += c;
                }
                if i > 0 {
                    let c = wx(i - 1, j);
                    s += c * u[k - 1];
                    w += c;
                }
                if j + 1 < ny {
                    let c = wy(i, j);
                    s += c * u[k + nx];
                    w += c;
                }
                if j > 0 {
                    let c = wy(i, j - 1);
                    s += c * u[k - nx];
                    w += c;
                }
                let new = u[k] + 1.9 * (s / w - u[k]);
                change = change.max((new - u[k]).abs());
                u[k] = new;
            }
        }
        if change < 1e-14 {
            break;
        }
    }
    let mut energy = 0.0;
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            if !inside[j * (nx - 1) + i] {
                continue;
            }
            let k = j * nx + i;
            let d = [u[k] - u[k + 1], u[k + nx] - u[k + nx + 1], u[k] - u[k + nx], u[k + 1] - u[k + nx + 1]];
            energy += 0.5 * d.iter().map(|x| x * x).sum::<f64>();
        }
    }
    1.0 / energy
}

#[test]
fn square_and_rectangle_anchors() {
    let s = compute_modulus(&rect(1.0, 1.0), 1.0 / 32.0, DEFAULT_TOLERANCE).unwrap();
    assert!((s.modulus - 1.0).abs() <= 0.005);
    let r = compute_modulus(&rect(2.0, 1.0), 1.0 / 32.0, DEFAULT_TOLERANCE).unwrap();
    assert!((r.modulus - 2.0).abs() <= 0.02);
    assert!((r.modulus * r.energy - 1.0).abs() < 1e-15);
    let e = modulus_extrapolated(&rect(2.0, 1.0), &[1.0 / 16.0, 1.0 / 32.0]).unwrap();
    assert!((e.modulus - 2.0).abs() < 1e-6);
    assert!(e.error_estimate < 1e-3);
}

#[test]
fn solver_matches_relaxation_oracle() {
    for q in [l_polygon(), u_polygon(), rect(2.0, 1.0)] {
        let h = 1.0 / 16.0;
        let cg = compute_modulus(&q, h, 1e-12).unwrap().modulus;
        let sor = sor_modulus(&q, h);
        assert!((cg - sor).abs() <= 1e-8 * sor, "{cg} vs {sor}");
    }
}

#[test]
fn l_polygon_refinement() {
    let q = l_polygon();
    let e = modulus_extrapolated(&q, &[1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0]).unwrap();
    let p = e.order.unwrap();
    assert!(p > 0.5 && p < 2.2, "order {p}");
    let m: Vec<f64> = e.levels.iter().map(|l| l.1).collect();
    assert!(m[0] < m[1] && m[1] < m[2]);
    assert!(e.error_estimate >= (m[2] - e.modulus).abs());
    let c = modulus_extrapolated(&q.conjugate(), &[1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0]).unwrap();
    assert!((e.modulus * c.modulus - 1.0).abs() <= 0.02);
    assert!((e.modulus - 0.57735).abs() <= 2e-4, "{}", e.modulus);
}

#[test]
fn conjugate_rectangle() {
    let q = rect(2.0, 1.0);
    let c = q.conjugate();
    assert_eq!(geodesic_between_sides(&c, SidePair::A).length, 2.0);
    assert_eq!(geodesic_between_sides(&c, SidePair::B).length, 1.0);
    let m = compute_modulus(&q, 1.0 / 16.0, DEFAULT_TOLERANCE).unwrap().modulus;
    let mc = compute_modulus(&c, 1.0 / 16.0, DEFAULT_TOLERANCE).unwrap().modulus;
    assert!((m * mc - 1.0).abs() <= 0.02);
}

#[test]
fn rengel_values() {
    let l3 = 3f64.ln();
    let lower = l3 * l3 / (PI * (1.0 + 2.0 * l3));
    let b = rengel_bounds(1.0, 1.0).unwrap();
    assert!((b.lower - lower).abs() < 1e-15);
    assert!((b.lower - 0.12016).abs() < 5e-6);
    assert!((b.upper - 8.3222).abs() < 1e-4);
    assert!((b.lower * b.upper - 1.0).abs() < 1e-15);
    let b = rengel_bounds(1.0, 2.0).unwrap();
    assert!((b.lower - 0.19543).abs() < 5e-6, "{}", b.lower);
    let l2 = 2f64.ln();
    assert!((b.upper - (PI + 2.0 * PI * l2) / (l2 * l2)).abs() < 1e-13, "{}", b.upper);
    assert!((b.upper - 15.6035).abs() < 1e-4);
    assert!(b.contains(2.0, 0.0));
    assert_eq!(rengel_bounds(0.0, 1.0), Err(ModulusError::NonPositiveDistance));
}

#[test]
fn ratio_bound_closed_form() {
    let y = PI + (PI * PI + PI).sqrt();
    let x = ((y).exp() - 1.0) / 2.0;
    let l = ratio_bound_from_k(1.0).unwrap();
    assert!((l - x).abs() <= 1e-9 * x, "{l} vs {x}");
    assert!((l - 425.97).abs() < 0.01);
    let b = rengel_bounds(1.0, l).unwrap();
    assert!((b.lower - 1.0).abs() < 1e-9);
    assert!(matches!(ratio_bound_from_k(0.9), Err(ModulusError::InvalidK(_))));
    assert!(ratio_bound_from_k(2.0).unwrap() > l);
}

#[test]
fn rejects_unsuitable_grids() {
    assert!(matches!(
        compute_modulus(&diamond(), 0.5, DEFAULT_TOLERANCE),
        Err(ModulusError::NotRectilinear { .. })
    ));
    assert!(matches!(
        compute_modulus(&rect(2.0, 1.0), 0.3, DEFAULT_TOLERANCE),
        Err(ModulusError::CoordinatesNotOnGrid { .. })
    ));
    assert!(matches!(modulus_extrapolated(&rect(2.0, 1.0), &[0.25]), Err(ModulusError::NotEnoughLevels)));
    assert!(matches!(
        modulus_extrapolated(&rect(2.0, 1.0), &[0.25, 0.1]),
        Err(ModulusError::LevelsNotHalving)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rengel_sandwich(q in histogram_strategy(8, 6)) {
        let s_a = geodesic_between_sides(&q, SidePair::A).length;
        let s_b = geodesic_between_sides(&q, SidePair::B).length;
        let r = compute_modulus(&q, lattice_step(&q, 16.0), DEFAULT_TOLERANCE).unwrap();
        let b = rengel_bounds(s_a, s_b).unwrap();
        prop_assert!(b.lower <= b.upper);
        prop_assert!(b.contains(r.modulus, r.error_estimate), "{} not in {:?}", r.modulus, b);
    }

    #[test]
    fn reciprocity(q in histogram_strategy(6, 4)) {
        let h = lattice_step(&q, 32.0);
        let m = compute_modulus(&q, h, DEFAULT_TOLERANCE).unwrap();
        let c = compute_modulus(&q.conjugate(), h, DEFAULT_TOLERANCE).unwrap();
        let rel = m.error_estimate / m.modulus + c.error_estimate / c.modulus;
        prop_assert!((m.modulus * c.modulus - 1.0).abs() <= 2.0 * rel, "{} {}", m.modulus * c.modulus, rel);
    }

    #[test]
    fn scale_invariance_is_exact(q in histogram_strategy(8, 6), e in -3i32..4) {
        let k = 2f64.powi(e);
        let a = solve_potential(&q, 0.5, DEFAULT_TOLERANCE).unwrap();
        let b = solve_potential(&q.scaled(k), 0.5 * k, DEFAULT_TOLERANCE).unwrap();
        prop_assert_eq!(a.energy.to_bits(), b.energy.to_bits());
    }

    #[test]
    fn potential_is_well_behaved(q in histogram_strategy(8, 6)) {
        let p = solve_potential(&q, 0.25, DEFAULT_TOLERANCE).unwrap();
        prop_assert!(p.energy > 0.0);
        let slack = 1e-9;
        prop_assert!(p.values.iter().all(|&u| (-slack..=1.0 + slack).contains(&u)));
        for w in p.objective_history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12 * w[0].abs());
        }
        prop_assert!(*p.residual_history.last().unwrap() <= DEFAULT_TOLERANCE);
    }
}
