use std::ops::{Add, Mul, Neg, Sub};

use super::Interval;

/// Truncated Taylor series with interval coefficients: `c[k]` encloses
/// f⁽ᵏ⁾(x)/k! for x in the expansion set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Taylor<const N: usize> {
    pub c: [Interval; N],
}

impl<const N: usize> Taylor<N> {
    pub const ZERO: Self = Taylor { c: [Interval::ZERO; N] };

    #[inline]
    pub fn variable(x: Interval) -> Self {
        let mut t = Self::ZERO;
        t.c[0] = x;
        if N > 1 {
            t.c[1] = Interval::ONE;
        }
        t
    }

    #[inline]
    pub fn constant(x: Interval) -> Self {
        let mut t = Self::ZERO;
        t.c[0] = x;
        t
    }

    #[inline]
    pub fn value(&self) -> Interval {
        self.c[0]
    }

    /// Enclosure of the k-th derivative.
    pub fn derivative(&self, k: usize) -> Interval {
        let f: f64 = (1..=k).map(|i| i as f64).product();
        self.c[k] * f
    }

    #[inline]
    pub fn scale(mut self, a: Interval) -> Self {
        for c in &mut self.c {
            *c = *c * a;
        }
        self
    }

    #[inline]
    pub fn add_const(mut self, a: Interval) -> Self {
        self.c[0] = self.c[0] + a;
        self
    }

    pub fn sqr(self) -> Self {
        let mut out = Self::ZERO;
        for k in 0..N {
            let mut acc = Interval::ZERO;
            for j in 0..(k + 1) / 2 {
                acc += self.c[j] * self.c[k - j];
            }
            acc = acc * 2.0;
            if k % 2 == 0 {
                acc += self.c[k / 2].sqr();
            }
            out.c[k] = acc;
        }
        out
    }

    pub fn exp(self) -> Self {
        let mut e = Self::ZERO;
        e.c[0] = self.c[0].exp();
        for k in 1..N {
            let mut acc = Interval::ZERO;
            for j in 1..=k {
                acc += self.c[j] * e.c[k - j] * j as f64;
            }
            e.c[k] = acc / k as f64;
        }
        e
    }

    /// 1/self; saturates when the value may vanish.
    pub fn recip(self) -> Self {
        let mut r = Self::ZERO;
        let r0 = self.c[0].recip();
        r.c[0] = r0;
        for k in 1..N {
            let mut acc = Interval::ZERO;
            for j in 1..=k {
                acc += self.c[j] * r.c[k - j];
            }
            r.c[k] = -(acc * r0);
        }
        r
    }

    /// Enclosure of f(x₀ + h) for h ∈ `h`, given `centre` at x₀ (thin) and
    /// `range` over the whole set (only its top coefficient is used).
    pub fn eval_offset(centre: &Self, range: &Self, h: Interval) -> Interval {
        let mut acc = range.c[N - 1];
        for k in (0..N - 1).rev() {
            acc = acc * h + centre.c[k];
        }
        acc
    }

    /// Enclosure of f′(x₀ + h) for h ∈ `h`.
    pub fn eval_offset_d1(centre: &Self, range: &Self, h: Interval) -> Interval {
        if N < 2 {
            return Interval::ZERO;
        }
        let mut acc = range.c[N - 1] * (N - 1) as f64;
        for k in (1..N - 1).rev() {
            acc = acc * h + centre.c[k] * k as f64;
        }
        acc
    }
}

impl<const N: usize> Add for Taylor<N> {
    type Output = Self;
    #[inline]
    fn add(mut self, o: Self) -> Self {
        for k in 0..N {
            self.c[k] = self.c[k] + o.c[k];
        }
        self
    }
}

impl<const N: usize> Sub for Taylor<N> {
    type Output = Self;
    #[inline]
    fn sub(mut self, o: Self) -> Self {
        for k in 0..N {
            self.c[k] = self.c[k] - o.c[k];
        }
        self
    }
}

impl<const N: usize> Neg for Taylor<N> {
    type Output = Self;
    #[inline]
    fn neg(mut self) -> Self {
        for c in &mut self.c {
            *c = -*c;
        }
        self
    }
}

impl<const N: usize> Mul for Taylor<N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = Self::ZERO;
        for k in 0..N {
            let mut acc = Interval::ZERO;
            for j in 0..=k {
                acc += self.c[j] * o.c[k - j];
            }
            out.c[k] = acc;
        }
        out
    }
}

impl<const N: usize> Add<Interval> for Taylor<N> {
    type Output = Self;
    #[inline]
    fn add(self, a: Interval) -> Self {
        self.add_const(a)
    }
}

impl<const N: usize> Sub<Interval> for Taylor<N> {
    type Output = Self;
    #[inline]
    fn sub(self, a: Interval) -> Self {
        self.add_const(-a)
    }
}

impl<const N: usize> Mul<Interval> for Taylor<N> {
    type Output = Self;
    #[inline]
    fn mul(self, a: Interval) -> Self {
        self.scale(a)
    }
}
