//! Dual numbers `re + eps * du` with `eps^2 = 0`.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Dual {
    pub re: f64,
    pub du: f64,
}

impl Dual {
    pub const fn new(re: f64, du: f64) -> Self {
        Dual { re, du }
    }

    pub const fn real(re: f64) -> Self {
        Dual { re, du: 0.0 }
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.re.sin_cos();
        Dual::new(s, self.du * c)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.re.sin_cos();
        Dual::new(c, -self.du * s)
    }

    pub fn tan(self) -> Self {
        let t = self.re.tan();
        Dual::new(t, self.du * (1.0 + t * t))
    }

    pub fn atan(self) -> Self {
        Dual::new(self.re.atan(), self.du / (1.0 + self.re * self.re))
    }

    pub fn scale(self, k: f64) -> Self {
        Dual::new(self.re * k, self.du * k)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.re + o.re, self.du + o.du)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.re - o.re, self.du - o.du)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.re * o.re, self.re * o.du + self.du * o.re)
    }
}

/// Division by a dual number with vanishing real part is undefined; the
/// result then carries infinities, so callers check denominators first.
impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual::new(self.re / o.re, (self.du * o.re - self.re * o.du) / (o.re * o.re))
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.du)
    }
}
