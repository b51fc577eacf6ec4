//! Seeded random designs shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use bennett_linkage::isogram::Branch;
use bennett_linkage::linkage::{EightBarSpec, SpatialEightBar, SpatialEightBarSpec, SphericalEightBar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn branch(r: &mut ChaCha8Rng) -> Branch {
    if r.random_bool(0.5) {
        Branch::Plus
    } else {
        Branch::Minus
    }
}

pub fn arc(r: &mut ChaCha8Rng) -> f64 {
    r.random_range(0.2..PI - 0.2)
}

/// Random angles in (-pi, pi) kept away from the aligned and flipped poses.
pub fn regular_angle(r: &mut ChaCha8Rng) -> f64 {
    loop {
        let phi: f64 = r.random_range(-PI..PI);
        if phi.sin().abs() > 0.05 {
            return phi;
        }
    }
}

pub fn spherical_spec(r: &mut ChaCha8Rng) -> EightBarSpec {
    let a1 = r.random_range(0.3..1.5);
    let a2 = r.random_range(0.3..(PI - 0.3 - a1).min(1.5));
    let u1 = r.random_range(-1.0..1.0);
    EightBarSpec {
        u1,
        u2: u1 + a1,
        u3: u1 + a1 + a2,
        beta1: arc(r),
        beta2: arc(r),
        beta3: None,
        branch1: branch(r),
        branch2: branch(r),
        branch3: None,
        derive: true,
    }
}

/// A random design that validates, with its derived third arm kept
/// away from the ends of (0, pi). Also returns the number of draws
/// rejected on the way.
pub fn spherical_linkage(r: &mut ChaCha8Rng) -> (SphericalEightBar, usize) {
    let mut rejected = 0;
    loop {
        let spec = spherical_spec(r);
        match SphericalEightBar::new(&spec) {
            Ok(lk) if lk.design.beta[2] > 0.15 && lk.design.beta[2] < PI - 0.15 => return (lk, rejected),
            _ => rejected += 1,
        }
    }
}

pub fn spatial_linkage(r: &mut ChaCha8Rng) -> (SpatialEightBar, usize) {
    let mut rejected = 0;
    loop {
        let s = spherical_spec(r);
        let spec = SpatialEightBarSpec {
            u1: s.u1,
            u2: s.u2,
            u3: s.u3,
            beta1: s.beta1,
            beta2: s.beta2,
            beta3: None,
            branch1: s.branch1,
            branch2: s.branch2,
            branch3: None,
            a1: r.random_range(0.2..2.0),
            a2: r.random_range(0.2..2.0),
            b1: None,
            b2: None,
            b3: None,
            derive: true,
        };
        match SpatialEightBar::new(&spec) {
            Ok(lk) if lk.design.design.beta[2] > 0.15 && lk.design.design.beta[2] < PI - 0.15 => return (lk, rejected),
            _ => rejected += 1,
        }
    }
}
