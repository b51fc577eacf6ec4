//! Cube linkgraph: eight bars `g0..g3`, `h0..h3`, twelve joints
//! `R_ij = g_i ∩ h_j` (i ≠ j), six four-bar cells on the cube faces.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bar {
    G(u8),
    H(u8),
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bar::G(i) => write!(f, "g{i}"),
            Bar::H(j) => write!(f, "h{j}"),
        }
    }
}

/// Joint on `g_g` and `h_h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointId {
    pub g: u8,
    pub h: u8,
}

const fn j(g: u8, h: u8) -> JointId {
    JointId { g, h }
}

/// All joints, lexicographic in `(i, j)`.
#[rustfmt::skip]
pub const JOINTS: [JointId; 12] = [
    j(0, 1), j(0, 2), j(0, 3),
    j(1, 0), j(1, 2), j(1, 3),
    j(2, 0), j(2, 1), j(2, 3),
    j(3, 0), j(3, 1), j(3, 2),
];

/// Cell vertices in cyclic order. Cells 1-3 contain `g0`, cells 4-6
/// contain `h0`. The half-turn of cell k exchanges
/// vertices 0 <-> 2 and 1 <-> 3.
pub const CELLS: [[JointId; 4]; 6] = [
    [j(0, 1), j(0, 2), j(3, 2), j(3, 1)],
    [j(0, 2), j(0, 3), j(1, 3), j(1, 2)],
    [j(0, 1), j(0, 3), j(2, 3), j(2, 1)],
    [j(1, 3), j(2, 3), j(2, 0), j(1, 0)],
    [j(2, 1), j(3, 1), j(3, 0), j(2, 0)],
    [j(3, 2), j(1, 2), j(1, 0), j(3, 0)],
];

impl JointId {
    pub fn new(g: u8, h: u8) -> Option<Self> {
        (g < 4 && h < 4 && g != h).then_some(JointId { g, h })
    }

    /// Position in [`JOINTS`].
    pub fn index(self) -> usize {
        let (g, h) = (self.g as usize, self.h as usize);
        3 * g + if h < g { h } else { h - 1 }
    }

    pub fn bars(self) -> (Bar, Bar) {
        (Bar::G(self.g), Bar::H(self.h))
    }

    pub fn on(self, bar: Bar) -> bool {
        match bar {
            Bar::G(i) => self.g == i,
            Bar::H(k) => self.h == k,
        }
    }

    /// `R01`-style label with the given prefix letter.
    pub fn label(self, prefix: char) -> String {
        format!("{prefix}{}{}", self.g, self.h)
    }
}

/// Bar shared by two joints of a cell side.
pub fn shared_bar(a: JointId, b: JointId) -> Option<Bar> {
    if a.g == b.g && a.h != b.h {
        Some(Bar::G(a.g))
    } else if a.h == b.h && a.g != b.g {
        Some(Bar::H(a.h))
    } else {
        None
    }
}

/// The three joints carried by a bar.
pub fn joints_on(bar: Bar) -> impl Iterator<Item = JointId> {
    JOINTS.into_iter().filter(move |jt| jt.on(bar))
}

pub const BARS: [Bar; 8] = [Bar::G(0), Bar::G(1), Bar::G(2), Bar::G(3), Bar::H(0), Bar::H(1), Bar::H(2), Bar::H(3)];

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn indices_are_a_bijection() {
        for (k, jt) in JOINTS.iter().enumerate() {
            assert_eq!(jt.index(), k);
        }
        assert!(JointId::new(2, 2).is_none());
    }

    #[test]
    fn every_bar_carries_three_joints() {
        for bar in BARS {
            assert_eq!(joints_on(bar).count(), 3, "{bar}");
        }
    }

    #[test]
    fn cells_are_cube_faces() {
        let mut edge_use = [0; 12];
        for cell in &CELLS {
            let mut bars = HashSet::new();
            for k in 0..4 {
                let bar = shared_bar(cell[k], cell[(k + 1) % 4]).expect("adjacent joints share a bar");
                bars.insert(bar);
                edge_use[cell[k].index()] += 1;
            }
            assert_eq!(bars.len(), 4);
        }
        // each joint (cube edge) borders exactly two faces
        assert!(edge_use.iter().all(|&n| n == 2));
    }
}
