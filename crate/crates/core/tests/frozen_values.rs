//! Reference values computed once at 40 digits with mpmath, by closing the
//! quadrilateral geometrically (rotation matrices and a root finder on the
//! coupler arc), then frozen here.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

use approx::assert_relative_eq;
use bennett_linkage::isogram::{solve_spherical_isogram, Branch, SphericalIsogramSpec};
use bennett_linkage::linkage::{validate_spec, Design, EightBarSpec, SphericalEightBar};
use bennett_linkage::oracle::{jacobian_nullity, solve_loop, spherical_isogram_problem};
use bennett_linkage::sphere_geom::{
    common_perpendicular_circle, spherical_distance, symmetry_centers, OrientedGreatCircle, SpherePoint,
    SphericalRotation, Vec3,
};

fn equator() -> OrientedGreatCircle {
    OrientedGreatCircle::from_normal(Vec3::z()).unwrap()
}

fn ex() -> SpherePoint {
    SpherePoint::new(Vec3::x()).unwrap()
}

#[test]
fn distance_to_the_diagonal() {
    let d = spherical_distance(&ex(), &SpherePoint::from_xyz(1.0, 1.0, 1.0).unwrap());
    assert_relative_eq!(d, 0.9553166181245092781638571, epsilon = 1e-15);
}

// (alpha, beta, branch, phi1, phi2)
const CLOSED: [(f64, f64, Branch, f64, f64); 4] = [
    (FRAC_PI_3, FRAC_PI_4, Branch::Plus, 1.0, -0.1792787382841061179262445),
    (FRAC_PI_3, FRAC_PI_4, Branch::Minus, 1.0, 1.454215743075980796006621),
    (1.1, 0.7, Branch::Plus, -2.3, 1.031176796008671647995912),
    (1.1, 0.7, Branch::Minus, -2.3, -2.588449789329490824513693),
];

#[test]
fn coupled_angle_matches_geometric_closure() {
    for (alpha, beta, branch, phi1, phi2) in CLOSED {
        let spec = SphericalIsogramSpec::new(alpha, beta, branch).unwrap();
        let pose = solve_spherical_isogram(&spec, &equator(), &ex(), phi1).unwrap();
        assert_relative_eq!(pose.phi2, phi2, epsilon = 1e-13);
        assert!(pose.side_residual(&spec) < 1e-13);
    }
}

#[test]
fn newton_closure_finds_the_same_pose() {
    for (alpha, beta, branch, phi1, phi2) in CLOSED {
        let s = if branch == Branch::Plus { -1.0 } else { 1.0 };
        let seed = [phi1, phi2 + 0.05, s * phi1 - 0.05, s * phi2 + 0.05];
        let problem = spherical_isogram_problem(alpha, beta, phi1, seed);
        let sol = solve_loop(&problem).unwrap();
        assert!((sol.angles[1] - phi2).abs() < 1e-9, "{branch:?}: {} vs {phi2}", sol.angles[1]);
        assert_eq!(jacobian_nullity(&problem, &sol.angles), 1);
    }
}

#[test]
fn half_turn_between_perpendicular_circles() {
    let g1 = OrientedGreatCircle::from_normal(Vec3::z()).unwrap();
    let g2 = OrientedGreatCircle::from_normal(Vec3::x()).unwrap();
    let s = symmetry_centers(&g1, &g2).unwrap();
    let r = 0.5f64.sqrt();
    assert!(s.center.residual_up_to_antipode(&SpherePoint::from_xyz(r, 0.0, r).unwrap()) < 1e-15);
    // of the two bisecting axes only this one carries the orientation over
    let other = SpherePoint::from_xyz(r, 0.0, -r).unwrap();
    assert!(SphericalRotation::half_turn(&s.center).apply(&g1).residual(&g2) < 1e-15);
    assert!(SphericalRotation::half_turn(&other).apply(&g1).residual(&g2) > 1.0);
    assert!(common_perpendicular_circle(&g1, &g2).unwrap().incidence(&s.center) < 1e-15);
}

fn sample() -> EightBarSpec {
    EightBarSpec {
        u1: 0.0,
        u2: PI / 3.0,
        u3: 7.0 * PI / 12.0,
        beta1: PI / 4.0,
        beta2: PI / 5.0,
        beta3: Some(PI / 6.0),
        branch1: Branch::Plus,
        branch2: Branch::Plus,
        branch3: Some(Branch::Plus),
        derive: false,
    }
}

#[test]
fn third_arm_of_pi_over_six_is_not_compatible() {
    // the three coefficients by hand
    let c = |a: f64, b: f64| (b - a).sin() / (b.sin() + a.sin());
    let (c21, c32, c31) = (c(PI / 3.0, PI / 4.0), c(PI / 4.0, PI / 5.0), c(7.0 * PI / 12.0, PI / 6.0));
    assert!((c31 - c32 * c21).abs() > 0.1);
    assert!(validate_spec(&sample()).is_err());
    let derived = validate_spec(&EightBarSpec { derive: true, ..sample() }).unwrap();
    assert_relative_eq!(derived.c31, c32 * c21, epsilon = 1e-15);
}

#[test]
fn forced_incompatible_design_does_not_assemble() {
    let good = validate_spec(&EightBarSpec { derive: true, ..sample() }).unwrap();
    let forced = Design { beta: [good.beta[0], good.beta[1], PI / 6.0], ..good };
    match SphericalEightBar::from_design(forced) {
        Err(_) => {}
        Ok(lk) => {
            for phi in [0.4, 1.3, 2.5, -2.0] {
                assert!(lk.assemble(phi).is_err(), "assembled at {phi}");
            }
        }
    }
}
