//! Double-double complex arithmetic for the Taylor oracle.
//!
//! Each real is an unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`,
//! giving roughly 106 bits of significand. Squaring a matrix nine times
//! (as `m1` needs) costs about nine bits, which plain `f64` cannot spare.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub(crate) const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub(crate) const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    pub(crate) fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub(crate) fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    /// Division by an ordinary double.
    pub(crate) fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let (s, t) = two_sum(self.hi, -p);
        let t = t - e + self.lo;
        let q2 = (s + t) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct DdComplex {
    pub(crate) re: DoubleDouble,
    pub(crate) im: DoubleDouble,
}

impl DdComplex {
    pub(crate) const ZERO: DdComplex = DdComplex {
        re: DoubleDouble::ZERO,
        im: DoubleDouble::ZERO,
    };
    pub(crate) const ONE: DdComplex = DdComplex {
        re: DoubleDouble::ONE,
        im: DoubleDouble::ZERO,
    };

    pub(crate) fn from_c64(z: Complex64) -> Self {
        DdComplex {
            re: DoubleDouble::from_f64(z.re),
            im: DoubleDouble::from_f64(z.im),
        }
    }

    pub(crate) fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `|re| + |im|`; within a factor sqrt(2) of the modulus, enough for norms.
    pub(crate) fn abs1(self) -> f64 {
        self.re.abs().to_f64() + self.im.abs().to_f64()
    }

    pub(crate) fn div_f64(self, b: f64) -> Self {
        DdComplex {
            re: self.re.div_f64(b),
            im: self.im.div_f64(b),
        }
    }

    pub(crate) fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for DdComplex {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        DdComplex {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Mul for DdComplex {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        DdComplex {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

/// Square row-major matrix of `DdComplex`.
#[derive(Clone, Debug)]
pub(crate) struct DdMatrix {
    pub(crate) n: usize,
    pub(crate) data: Vec<DdComplex>,
}

impl DdMatrix {
    pub(crate) fn identity(n: usize) -> Self {
        let mut data = vec![DdComplex::ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = DdComplex::ONE;
        }
        DdMatrix { n, data }
    }

    pub(crate) fn mul(&self, other: &DdMatrix) -> DdMatrix {
        let n = self.n;
        let mut data = vec![DdComplex::ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                for j in 0..n {
                    data[i * n + j] = data[i * n + j] + aik * other.data[k * n + j];
                }
            }
        }
        DdMatrix { n, data }
    }

    pub(crate) fn add(&self, other: &DdMatrix) -> DdMatrix {
        DdMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub(crate) fn div_f64(&self, b: f64) -> DdMatrix {
        DdMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z.div_f64(b)).collect(),
        }
    }

    /// Max row sum of `abs1` entries.
    pub(crate) fn norm_inf(&self) -> f64 {
        self.data
            .chunks(self.n)
            .map(|row| row.iter().map(|z| z.abs1()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}
