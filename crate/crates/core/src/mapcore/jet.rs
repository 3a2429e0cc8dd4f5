use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Value and first three derivatives of an analytic function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    pub d3: Complex64,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl Jet3 {
    pub const fn new(value: Complex64, d1: Complex64, d2: Complex64, d3: Complex64) -> Self {
        Self { value, d1, d2, d3 }
    }

    pub const fn constant(value: Complex64) -> Self {
        Self::new(value, ZERO, ZERO, ZERO)
    }

    /// The jet of the identity function at `z`.
    pub const fn variable(z: Complex64) -> Self {
        Self::new(z, ONE, ZERO, ZERO)
    }

    pub fn is_finite(&self) -> bool {
        [self.value, self.d1, self.d2, self.d3]
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scale(self, s: Complex64) -> Self {
        Self::new(self.value * s, self.d1 * s, self.d2 * s, self.d3 * s)
    }

    /// Chain rule to third order: `outer` is the jet of F at `self.value`,
    /// the result is the jet of F composed with `self`.
    pub fn compose(self, outer: Jet3) -> Self {
        let (g1, g2, g3) = (self.d1, self.d2, self.d3);
        Self::new(
            outer.value,
            outer.d1 * g1,
            outer.d2 * g1 * g1 + outer.d1 * g2,
            outer.d3 * g1 * g1 * g1 + 3.0 * outer.d2 * g1 * g2 + outer.d1 * g3,
        )
    }

    pub fn recip(self) -> Self {
        let w = self.value;
        let w2 = w * w;
        self.compose(Jet3::new(
            w.inv(),
            -(w2.inv()),
            2.0 * (w2 * w).inv(),
            -6.0 * (w2 * w2).inv(),
        ))
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.compose(Jet3::new(e, e, e, e))
    }

    /// Principal logarithm.
    pub fn ln(self) -> Self {
        let w = self.value;
        self.compose(Jet3::new(w.ln(), w.inv(), -(w * w).inv(), 2.0 * (w * w * w).inv()))
    }

    /// Principal power `w^p` for real `p`.
    pub fn powf(self, p: f64) -> Self {
        let w = self.value;
        let base = w.powf(p);
        let inv = w.inv();
        self.compose(Jet3::new(
            base,
            base * inv * p,
            base * inv * inv * (p * (p - 1.0)),
            base * inv * inv * inv * (p * (p - 1.0) * (p - 2.0)),
        ))
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Jet3::constant(ONE);
        }
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut acc = self;
        for _ in 1..n {
            acc = acc * self;
        }
        acc
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, o: Jet3) -> Jet3 {
        Jet3::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, o: Jet3) -> Jet3 {
        self + (-o)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        Jet3::new(-self.value, -self.d1, -self.d2, -self.d3)
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, o: Jet3) -> Jet3 {
        Jet3::new(
            self.value * o.value,
            self.d1 * o.value + self.value * o.d1,
            self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
            self.d3 * o.value
                + 3.0 * self.d2 * o.d1
                + 3.0 * self.d1 * o.d2
                + self.value * o.d3,
        )
    }
}
