//! Divisor classes on the Hirzebruch surface F_e.
//!
//! `Num(F_e)` is generated by the negative section `C` and a fiber `f`, with
//! `C^2 = -e`, `C.f = 1`, `f^2 = 0`. A class `aC + bf` is stored together with
//! its `e` so that classes from different surfaces cannot be combined by
//! accident.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The Hirzebruch index `e` of `F_e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceParams {
    e: i64,
}

impl SurfaceParams {
    pub fn new(e: i64) -> Result<Self> {
        if e < 0 {
            return Err(Error::InvalidArgument(format!("e must be >= 0, got {e}")));
        }
        Ok(Self { e })
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn class(&self, a: i64, b: i64) -> DivisorClass {
        DivisorClass { a, b, e: self.e }
    }

    pub fn canonical(&self) -> DivisorClass {
        canonical_class(self.e)
    }
}

/// The class `aC_e + bf`, i.e. the line bundle `O_{F_e}(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    pub a: i64,
    pub b: i64,
    pub e: i64,
}

impl DivisorClass {
    pub fn new(a: i64, b: i64, e: i64) -> Self {
        Self { a, b, e }
    }

    pub fn surface(&self) -> SurfaceParams {
        SurfaceParams { e: self.e }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.e != other.e {
            return Err(Error::SurfaceMismatch { left: self.e, right: other.e });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self::new(self.a + other.a, self.b + other.b, self.e))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-*other)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(k * self.a, k * self.b, self.e)
    }

    /// Intersection number with another class on the same surface.
    pub fn dot(&self, other: &Self) -> Result<i64> {
        intersect(self, other)
    }

    /// Self-intersection `D^2`.
    pub fn square(&self) -> i64 {
        -self.e * self.a * self.a + 2 * self.a * self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({},{})", self.a, self.b)
    }
}

// The operator impls panic on mismatched surfaces; use the `try_*` forms
// where the inputs are not known to agree.
impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("surface mismatch")
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("surface mismatch")
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b, self.e)
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

/// Bilinear extension of `C^2 = -e`, `C.f = 1`, `f^2 = 0`.
pub fn intersect(d1: &DivisorClass, d2: &DivisorClass) -> Result<i64> {
    d1.check_same(d2)?;
    Ok(-d1.e * d1.a * d2.a + d1.a * d2.b + d2.a * d1.b)
}

/// `K = -2C - (e+2)f`.
pub fn canonical_class(e: i64) -> DivisorClass {
    DivisorClass::new(-2, -(e + 2), e)
}

/// Riemann-Roch: `chi(O(a,b)) = (a+1)(b+1) - e a(a+1)/2`.
pub fn euler_char(d: &DivisorClass) -> i64 {
    let (a, b, e) = (d.a, d.b, d.e);
    (a + 1) * (b + 1) - e * a * (a + 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn generator_products() {
        for e in 0..4 {
            let c = DivisorClass::new(1, 0, e);
            let f = DivisorClass::new(0, 1, e);
            assert_eq!(intersect(&c, &f).unwrap(), 1);
            assert_eq!(intersect(&f, &f).unwrap(), 0);
            assert_eq!(intersect(&c, &c).unwrap(), -e);
        }
        let d = DivisorClass::new(3, 5, 1);
        assert_eq!(intersect(&d, &d).unwrap(), 21);
        assert_eq!(d.square(), 21);
    }

    #[test]
    fn mismatched_surfaces_are_rejected() {
        let x = DivisorClass::new(1, 0, 0);
        let y = DivisorClass::new(1, 0, 1);
        assert_eq!(intersect(&x, &y), Err(Error::SurfaceMismatch { left: 0, right: 1 }));
        assert!(x.try_add(&y).is_err());
        assert!(SurfaceParams::new(-1).is_err());
    }

    #[test]
    fn canonical_classes() {
        assert_eq!(canonical_class(0), DivisorClass::new(-2, -2, 0));
        assert_eq!(canonical_class(1), DivisorClass::new(-2, -3, 1));
        assert_eq!(canonical_class(2), DivisorClass::new(-2, -4, 2));
    }

    #[test]
    fn euler_char_examples() {
        assert_eq!(euler_char(&DivisorClass::new(0, 0, 3)), 1);
        // monomial count 4 + 3 + 2
        assert_eq!(euler_char(&DivisorClass::new(2, 3, 1)), 9);
        assert_eq!(euler_char(&DivisorClass::new(1, 0, 2)), 0);
    }

    proptest! {
        #[test]
        fn intersect_symmetric_bilinear(
            e in 0i64..4,
            a1 in -20i64..=20, b1 in -20i64..=20,
            a2 in -20i64..=20, b2 in -20i64..=20,
            a3 in -20i64..=20, b3 in -20i64..=20,
            k in -5i64..=5,
        ) {
            let x = DivisorClass::new(a1, b1, e);
            let y = DivisorClass::new(a2, b2, e);
            let z = DivisorClass::new(a3, b3, e);
            prop_assert_eq!(intersect(&x, &y)?, intersect(&y, &x)?);
            prop_assert_eq!(intersect(&(x + y), &z)?, intersect(&x, &z)? + intersect(&y, &z)?);
            prop_assert_eq!(intersect(&x.scale(k), &z)?, k * intersect(&x, &z)?);
        }

        #[test]
        fn riemann_roch_and_serre_symmetry(e in 0i64..4, a in -20i64..=20, b in -20i64..=20) {
            let d = DivisorClass::new(a, b, e);
            let k = canonical_class(e);
            let rr = intersect(&d, &(d - k))?;
            prop_assert_eq!(rr % 2, 0);
            prop_assert_eq!(euler_char(&d), rr / 2 + 1);
            prop_assert_eq!(euler_char(&(k - d)), euler_char(&d));
        }
    }
}
