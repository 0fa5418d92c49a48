use std::ops::{Add, Mul, Neg, Sub};

use super::Interval;

/// Second-order jet: enclosures of f, f', f'' over a common argument set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub value: Interval,
    pub d1: Interval,
    pub d2: Interval,
}

impl Jet2 {
    #[inline]
    pub fn variable(x: Interval) -> Self {
        Jet2 { value: x, d1: Interval::ONE, d2: Interval::ZERO }
    }

    #[inline]
    pub fn constant(c: Interval) -> Self {
        Jet2 { value: c, d1: Interval::ZERO, d2: Interval::ZERO }
    }

    #[inline]
    pub fn scale(self, c: Interval) -> Self {
        Jet2 { value: self.value * c, d1: self.d1 * c, d2: self.d2 * c }
    }

    #[inline]
    pub fn add_const(self, c: Interval) -> Self {
        Jet2 { value: self.value + c, ..self }
    }

    #[inline]
    pub fn sqr(self) -> Self {
        Jet2 {
            value: self.value.sqr(),
            d1: self.value * self.d1 * 2.0,
            d2: (self.d1.sqr() + self.value * self.d2) * 2.0,
        }
    }

    #[inline]
    pub fn exp(self) -> Self {
        let e = self.value.exp();
        Jet2 { value: e, d1: e * self.d1, d2: e * (self.d2 + self.d1.sqr()) }
    }

    /// 1/self; saturates when the value may vanish.
    pub fn recip(self) -> Self {
        let r = self.value.recip();
        let r2 = r.sqr();
        Jet2 {
            value: r,
            d1: -(self.d1 * r2),
            d2: (self.d1.sqr() * r * 2.0 - self.d2) * r2,
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    #[inline]
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 { value: self.value + o.value, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    #[inline]
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2 { value: self.value - o.value, d1: self.d1 - o.d1, d2: self.d2 - o.d2 }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    #[inline]
    fn neg(self) -> Jet2 {
        Jet2 { value: -self.value, d1: -self.d1, d2: -self.d2 }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            value: self.value * o.value,
            d1: self.d1 * o.value + self.value * o.d1,
            d2: self.d2 * o.value + self.d1 * o.d1 * 2.0 + self.value * o.d2,
        }
    }
}

impl Add<Interval> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn add(self, c: Interval) -> Jet2 {
        self.add_const(c)
    }
}

impl Sub<Interval> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn sub(self, c: Interval) -> Jet2 {
        self.add_const(-c)
    }
}

impl Mul<Interval> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(self, c: Interval) -> Jet2 {
        self.scale(c)
    }
}
