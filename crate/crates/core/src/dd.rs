//! Double-double arithmetic: an unevaluated sum hi + lo of two doubles,
//! good for about 32 significant digits.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd(pub f64, pub f64);

impl Dd {
    pub fn from(x: f64) -> Dd {
        Dd(x, 0.0)
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd(s, (a - (s - bb)) + (b - bb))
    }

    pub fn to_f64(self) -> f64 {
        self.0 + self.1
    }

    pub fn abs(self) -> Dd {
        if self.0 < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.0, o.0);
        let t = Dd::two_sum(self.1, o.1);
        let hi = Dd::two_sum(s.0, s.1 + t.0);
        Dd::two_sum(hi.0, hi.1 + t.1)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        let lo = e + (self.0 * o.1 + self.1 * o.0);
        Dd::two_sum(p, lo)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.0 / o.0;
        let r = self - o * Dd::from(q1);
        let q2 = r.0 / o.0;
        let r2 = r - o * Dd::from(q2);
        let q3 = r2.0 / o.0;
        Dd::two_sum(q1, q2) + Dd::from(q3)
    }
}
