use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use loopbound::bounds::{injectivity_bound, theorem_b_bound, GeometryBudget};
use loopbound::loops::{loop_length, turning_angle_broken, BrokenLoop};
use loopbound::measure::{cone_annulus_volume, packing_configuration, packing_number_with, PackingOptions, RegionSpec};
use loopbound::modelspaces::{ModelSpace, Point};
use loopbound::spaceform::{comparison_angle, cs, opposite_side, sn, Curvature, SideTriple};

fn kappa() -> impl Strategy<Value = f64> {
    prop_oneof![Just(-1.0), Just(0.0), Just(1.0), -2.0..2.0f64]
}

fn unit3() -> impl Strategy<Value = Point> {
    (0.05..PI - 0.05, 0.0..TAU).prop_map(|(a, b)| Point::unit(vec![a.sin() * b.cos(), a.sin() * b.sin(), a.cos()]))
}

fn polar(radius: f64) -> impl Strategy<Value = Point> {
    (0.0..radius, 0.0..TAU).prop_map(|(t, phi)| Point::polar(t, phi))
}

fn spaces() -> impl Strategy<Value = ModelSpace> {
    prop_oneof![
        (0.2..6.0f64).prop_map(|theta| ModelSpace::flat_cone(theta, 1.0).unwrap()),
        (0.2..6.2f64, prop_oneof![Just(-1.0), Just(1.0)]).prop_map(|(l, k)| ModelSpace::kappa_cone(k, l, 1.0).unwrap()),
    ]
}

fn check_metric(space: &ModelSpace, p: &Point, q: &Point, r: &Point) -> Result<(), TestCaseError> {
    let (pq, qp) = (space.distance(p, q).unwrap(), space.distance(q, p).unwrap());
    let (pr, qr) = (space.distance(p, r).unwrap(), space.distance(q, r).unwrap());
    prop_assert!(pq >= 0.0);
    prop_assert!((pq - qp).abs() <= 1e-12);
    prop_assert_eq!(space.distance(p, p).unwrap(), 0.0);
    prop_assert!(pr <= pq + qr + 1e-12, "{pr} > {pq} + {qr}");
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sphere_metric(p in unit3(), q in unit3(), r in unit3()) {
        check_metric(&ModelSpace::sphere(1.0, 2).unwrap(), &p, &q, &r)?;
    }

    #[test]
    fn cone_metric(space in spaces(), p in polar(1.0), q in polar(1.0), r in polar(1.0)) {
        check_metric(&space, &p, &q, &r)?;
    }

    #[test]
    fn product_metric(p in polar(1.0), q in polar(1.0), r in polar(1.0), x in -0.7..0.7f64, y in -0.7..0.7f64, z in -0.7..0.7f64) {
        let space = ModelSpace::product(ModelSpace::flat_cone(1.0, 1.0).unwrap(), ModelSpace::euclidean_ball(1, 1.0).unwrap()).unwrap();
        let pp = Point::pair(p.clone(), Point::Coords(vec![x]));
        let qq = Point::pair(q.clone(), Point::Coords(vec![y]));
        let rr = Point::pair(r, Point::Coords(vec![z]));
        check_metric(&space, &pp, &qq, &rr)?;
        let cone = ModelSpace::flat_cone(1.0, 1.0).unwrap();
        let expect = cone.distance(&p, &q).unwrap().hypot(x - y);
        prop_assert!((space.distance(&pp, &qq).unwrap() - expect).abs() <= 1e-12);
    }

    /// Angles in a space with curvature ≥ 0 dominate flat comparison angles.
    #[test]
    fn cone_angles_dominate_comparison(theta in 0.3..6.0f64, a in polar(1.0), p in polar(1.0), q in polar(1.0)) {
        let space = ModelSpace::flat_cone(theta, 1.0).unwrap();
        let (ap, aq, pq) = (space.distance(&a, &p).unwrap(), space.distance(&a, &q).unwrap(), space.distance(&p, &q).unwrap());
        prop_assume!(ap > 1e-3 && aq > 1e-3);
        prop_assume!(space.check_unique_geodesic(&a, &p).is_ok() && space.check_unique_geodesic(&a, &q).is_ok());
        let angle = match space.vertex_angle(&a, &p, &q) {
            Ok(x) => x,
            Err(_) => return Ok(()),
        };
        let cmp = comparison_angle(Curvature::new(0.0).unwrap(), SideTriple::new(ap, aq, pq)).unwrap();
        prop_assert!(angle >= cmp - 1e-7, "angle {angle} < comparison {cmp}");
    }

    /// On the model sphere the actual and comparison angles coincide.
    #[test]
    fn sphere_angles_match_comparison(a in unit3(), p in unit3(), q in unit3()) {
        let space = ModelSpace::sphere(1.0, 2).unwrap();
        let (ap, aq, pq) = (space.distance(&a, &p).unwrap(), space.distance(&a, &q).unwrap(), space.distance(&p, &q).unwrap());
        prop_assume!(ap > 1e-2 && aq > 1e-2 && ap < PI - 1e-2 && aq < PI - 1e-2);
        let angle = space.vertex_angle(&a, &p, &q).unwrap();
        let cmp = comparison_angle(Curvature::new(1.0).unwrap(), SideTriple::new(ap, aq, pq)).unwrap();
        prop_assert!((angle - cmp).abs() <= 1e-6, "{angle} vs {cmp}");
    }

    #[test]
    fn pythagorean_identity(k in kappa(), r in 0.0..1.0f64) {
        let kk = Curvature::new(k).unwrap();
        let (s, c) = (sn(kk, r).unwrap(), cs(kk, r).unwrap());
        prop_assert!((c * c + k * s * s - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn cosine_law_round_trip(k in kappa(), a in 0.05..1.0f64, b in 0.05..1.0f64, gamma in 0.01..PI - 0.01) {
        let kk = Curvature::new(k).unwrap();
        let c = opposite_side(kk, a, b, gamma).unwrap();
        let back = comparison_angle(kk, SideTriple::new(a, b, c)).unwrap();
        prop_assert!((back - gamma).abs() <= 1e-8, "{back} vs {gamma}");
    }

    /// Splitting an edge at an interior point adds a straight vertex.
    #[test]
    fn vertex_insertion_invariance(p in unit3(), q in unit3(), r in unit3(), s in 0.05..0.95f64, edge in 0usize..3) {
        let space = ModelSpace::sphere(1.0, 2).unwrap();
        let lp = match BrokenLoop::new(space, vec![p, q, r]) {
            Ok(lp) => lp,
            Err(_) => return Ok(()),
        };
        prop_assume!(lp.vertices().windows(2).all(|w| lp.space().distance(&w[0], &w[1]).unwrap() > 1e-2));
        let split = lp.insert_vertex(edge, s).unwrap();
        prop_assert!((loop_length(&split) - loop_length(&lp)).abs() <= 1e-12);
        let (t0, t1) = (turning_angle_broken(&lp).unwrap(), turning_angle_broken(&split).unwrap());
        prop_assert!((t0 - t1).abs() <= 1e-7, "{t0} vs {t1}");
    }

    #[test]
    fn annulus_additivity(k in kappa(), n in 2usize..5, r1 in 0.0..0.5f64, d1 in 0.01..0.5f64, d2 in 0.01..0.5f64, link in 0.1..6.0f64) {
        let kk = Curvature::new(k).unwrap();
        let (r2, r3) = (r1 + d1, r1 + d1 + d2);
        let whole = cone_annulus_volume(kk, n, link, r1, r3).unwrap();
        let parts = cone_annulus_volume(kk, n, link, r1, r2).unwrap() + cone_annulus_volume(kk, n, link, r2, r3).unwrap();
        prop_assert!((whole - parts).abs() <= 1e-9 * whole.max(1.0));
    }

    #[test]
    fn bounds_linear_in_turning(t1 in 0.0..TAU, t2 in 0.0..TAU) {
        let b = GeometryBudget::new(3, Curvature::new(-1.0).unwrap(), 1.5, 2.0, 1.0).unwrap();
        let diff = theorem_b_bound(&b, t1).unwrap() - theorem_b_bound(&b, t2).unwrap();
        prop_assert!((diff - (t2 - t1) * 1.5).abs() <= 1e-12);
        let kk = Curvature::new(0.0).unwrap();
        let diff = injectivity_bound(2, kk, 0.7, 1.0, t1).unwrap() - injectivity_bound(2, kk, 0.7, 1.0, t2).unwrap();
        prop_assert!((diff - 0.5 * 0.7 * (t2 - t1)).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Every packing is ε-separated, checked pairwise.
    #[test]
    fn packings_are_separated(eps in 0.08..0.4f64, seed in any::<u64>(), which in 0usize..4) {
        let space = match which {
            0 => ModelSpace::euclidean_box(vec![1.0, 0.7]).unwrap(),
            1 => ModelSpace::euclidean_ball(2, 1.0).unwrap(),
            2 => ModelSpace::sphere(1.0, 2).unwrap(),
            _ => ModelSpace::flat_cone(2.0, 1.0).unwrap(),
        };
        let opts = PackingOptions { restarts: 3, ..PackingOptions::default() };
        for restart in 0..3 {
            let pts = packing_configuration(&space, &RegionSpec::WholeSpace, eps, &opts, seed, restart).unwrap();
            for i in 0..pts.len() {
                for j in 0..i {
                    let d = space.distance(&pts[i], &pts[j]).unwrap();
                    prop_assert!(d >= eps * (1.0 - 1e-9), "{d} < {eps}");
                }
            }
        }
        let best = packing_number_with(&space, &RegionSpec::WholeSpace, eps, &opts, seed).unwrap();
        prop_assert!(best.count >= 1);
    }
}

/// Exhaustive search over 1-D grids confirms the greedy packing is optimal there.
#[test]
fn interval_packing_matches_brute_force() {
    fn brute(points: &[f64], eps: f64) -> usize {
        let m = points.len();
        (0u32..1 << m)
            .filter(|mask| {
                let chosen: Vec<f64> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| points[i]).collect();
                chosen.windows(2).all(|w| w[1] - w[0] >= eps * (1.0 - 1e-9))
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap()
    }
    let space = ModelSpace::euclidean_box(vec![1.0]).unwrap();
    for m in [5usize, 11, 21] {
        let grid: Vec<f64> = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
        for eps in [0.1, 0.17, 0.25, 0.33, 0.5] {
            let exact = brute(&grid, eps);
            let greedy = packing_number_with(&space, &RegionSpec::WholeSpace, eps, &PackingOptions::default(), 5).unwrap();
            let continuum = (1.0 / eps).floor() as usize + 1;
            assert!(greedy.count as usize >= exact, "m={m} eps={eps}: {} < {exact}", greedy.count);
            assert_eq!(greedy.count as usize, continuum, "eps={eps}");
        }
    }
}

/// On a Voronoi boundary in the plane, with `x` equidistant from `p_i` and
/// `p_{i+1}`, the cosine comparison holds with equality.
#[test]
fn voronoi_boundary_equality() {
    for (h, x_len) in [(0.01f64, 0.3f64), (0.005, 1.0), (0.009, 0.02)] {
        let cos_angle = h / (2.0 * x_len);
        let angle = cos_angle.acos();
        let opp = opposite_side(Curvature::new(0.0).unwrap(), x_len, h, angle).unwrap();
        assert!((opp - x_len).abs() <= 1e-12);
        let cmp = comparison_angle(Curvature::new(0.0).unwrap(), SideTriple::new(x_len, h, opp)).unwrap();
        assert!((cmp.cos() - h / (2.0 * x_len)).abs() <= 1e-12);
    }
}
