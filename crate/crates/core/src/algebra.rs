//! Exact arithmetic on the two value domains arrays are built over.
//!
//! Roots of unity are kept in index notation: the value `exp(2πi·e/r)` is
//! stored as the exponent `e` and multiplication is addition mod `r`.
//! Quaternions carry integer components, which is enough for every unit
//! quaternion in {±1, ±i, ±j, ±k} and keeps products and correlation sums
//! exact. Floating point only appears when a root exponent is evaluated.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A root of unity `exp(2πi·e/r)` in index notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootExponent {
    exponent: u32,
    order: u32,
}

impl RootExponent {
    /// Requires `0 <= exponent < order`.
    pub fn new(exponent: i64, order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder);
        }
        if exponent < 0 || exponent >= order as i64 {
            return Err(Error::ExponentOutOfRange { exponent, order });
        }
        Ok(Self {
            exponent: exponent as u32,
            order,
        })
    }

    /// Reduces any integer exponent into `[0, order)`.
    pub fn reduced(exponent: i64, order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder);
        }
        let exponent = exponent.rem_euclid(order as i64) as u32;
        Ok(Self { exponent, order })
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    pub fn order(self) -> u32 {
        self.order
    }

    pub fn value(self) -> Complex64 {
        unit_root(self.exponent, self.order)
    }

    pub fn conj(self) -> Self {
        Self {
            exponent: (self.order - self.exponent) % self.order,
            order: self.order,
        }
    }
}

impl Mul for RootExponent {
    type Output = RootExponent;

    /// Both operands must share the same root order.
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.order, rhs.order, "root orders differ");
        Self {
            exponent: ((self.exponent as u64 + rhs.exponent as u64) % self.order as u64) as u32,
            order: self.order,
        }
    }
}

/// Evaluates `exp(2πi·e/r)`.
pub fn root_value(exponent: u32, order: u32) -> Result<Complex64> {
    Ok(RootExponent::new(exponent as i64, order)?.value())
}

/// `exp(2πi·e/r)` with quarter turns returned exactly.
pub(crate) fn unit_root(exponent: u32, order: u32) -> Complex64 {
    let e = exponent as u64 % order as u64;
    let r = order as u64;
    if (4 * e).is_multiple_of(r) {
        return match (4 * e / r) % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, TAU * e as f64 / r as f64)
}

/// Table of all `order` roots, indexed by exponent.
pub(crate) fn root_table(order: u32) -> Vec<Complex64> {
    (0..order).map(|e| unit_root(e, order)).collect()
}

/// An integer quaternion `w + x·i + y·j + z·k`.
///
/// Serialized as the 4-element array `[w, x, y, z]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 4]", into = "[i64; 4]")]
pub struct Quaternion {
    pub w: i64,
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0, 0, 0, 0);
    pub const ONE: Quaternion = Quaternion::new(1, 0, 0, 0);
    pub const I: Quaternion = Quaternion::new(0, 1, 0, 0);
    pub const J: Quaternion = Quaternion::new(0, 0, 1, 0);
    pub const K: Quaternion = Quaternion::new(0, 0, 0, 1);

    pub const fn new(w: i64, x: i64, y: i64, z: i64) -> Self {
        Self { w, x, y, z }
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Squared norm `w² + x² + y² + z²`, exact.
    pub fn norm_sqr(self) -> i64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        (self.norm_sqr() as f64).sqrt()
    }

    pub fn is_unit(self) -> bool {
        self.norm_sqr() == 1
    }

    pub fn to_array(self) -> [i64; 4] {
        [self.w, self.x, self.y, self.z]
    }
}

/// Hamilton product.
pub fn quat_mul(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q
}

pub fn quat_conj(q: Quaternion) -> Quaternion {
    q.conj()
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;

    fn add(self, q: Quaternion) -> Quaternion {
        Quaternion::new(self.w + q.w, self.x + q.x, self.y + q.y, self.z + q.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;

    fn sub(self, q: Quaternion) -> Quaternion {
        self + (-q)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, q: Quaternion) {
        *self = *self + q;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl From<[i64; 4]> for Quaternion {
    fn from([w, x, y, z]: [i64; 4]) -> Self {
        Quaternion::new(w, x, y, z)
    }
}

impl From<Quaternion> for [i64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

/// Prints the eight basis units as `1`, `-i`, `k`, ...; anything else as a tuple.
impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = [
            (Quaternion::ONE, "1"),
            (Quaternion::I, "i"),
            (Quaternion::J, "j"),
            (Quaternion::K, "k"),
        ];
        for (unit, name) in names {
            if *self == unit {
                return f.write_str(name);
            }
            if *self == -unit {
                return write!(f, "-{name}");
            }
        }
        write!(f, "({},{},{},{})", self.w, self.x, self.y, self.z)
    }
}

/// Parses a basis token (`1`, `-1`, `i`, `-i`, `j`, `-j`, `k`, `-k`) or an
/// explicit tuple `(w,x,y,z)`.
impl FromStr for Quaternion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(format!(
                    "expected 4 components in `{s}`, found {}",
                    parts.len()
                ));
            }
            let mut c = [0i64; 4];
            for (slot, part) in c.iter_mut().zip(&parts) {
                *slot = part
                    .parse()
                    .map_err(|_| format!("invalid component `{part}`"))?;
            }
            return Ok(Quaternion::from(c));
        }
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1, rest.trim()),
            None => (1, s.strip_prefix('+').unwrap_or(s).trim()),
        };
        let unit = match body {
            "1" => Quaternion::ONE,
            "i" => Quaternion::I,
            "j" => Quaternion::J,
            "k" => Quaternion::K,
            _ => return Err(format!("unrecognised quaternion token `{s}`")),
        };
        Ok(if sign < 0 { -unit } else { unit })
    }
}

/// A single correlation value in either domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CorrelationValue {
    Complex(Complex64),
    Quaternion(Quaternion),
}

impl CorrelationValue {
    pub fn magnitude(&self) -> f64 {
        match self {
            CorrelationValue::Complex(c) => c.norm(),
            CorrelationValue::Quaternion(q) => q.norm(),
        }
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match self {
            CorrelationValue::Complex(c) => Some(*c),
            CorrelationValue::Quaternion(_) => None,
        }
    }
}

impl fmt::Display for CorrelationValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorrelationValue::Complex(c) => {
                let re = if c.re.abs() < 5e-7 { 0.0 } else { c.re };
                let im = if c.im.abs() < 5e-7 { 0.0 } else { c.im };
                if im == 0.0 {
                    write!(f, "{re:.6}")
                } else if im < 0.0 {
                    write!(f, "{re:.6}-{:.6}i", -im)
                } else {
                    write!(f, "{re:.6}+{im:.6}i")
                }
            }
            CorrelationValue::Quaternion(q) => write!(f, "({},{},{},{})", q.w, q.x, q.y, q.z),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn root_value_examples() {
        assert_eq!(root_value(0, 5).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(root_value(1, 2).unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(root_value(1, 4).unwrap(), Complex64::new(0.0, 1.0));
        assert!(close(
            root_value(1, 3).unwrap(),
            Complex64::new(-0.5, 3f64.sqrt() / 2.0)
        ));
    }

    #[test]
    fn root_value_rejects_zero_order() {
        assert_eq!(root_value(0, 0), Err(Error::InvalidOrder));
        assert!(matches!(
            root_value(5, 5),
            Err(Error::ExponentOutOfRange { .. })
        ));
    }

    #[test]
    fn hamilton_relations() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::K, Quaternion::I);
        assert_eq!(Quaternion::K * Quaternion::I, Quaternion::J);
        assert_eq!(Quaternion::J * Quaternion::I, -Quaternion::K);
        assert_eq!(Quaternion::I * Quaternion::I, -Quaternion::ONE);
        let q = Quaternion::new(0, 0, -1, 0);
        assert_eq!(quat_mul(Quaternion::ONE, q), q);
        assert_eq!(
            Quaternion::I * Quaternion::J * Quaternion::K,
            -Quaternion::ONE
        );
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(quat_conj(Quaternion::ONE), Quaternion::ONE);
        assert_eq!(quat_conj(Quaternion::K), -Quaternion::K);
        let ij = Quaternion::I * Quaternion::J;
        assert_eq!(quat_conj(ij), Quaternion::J.conj() * Quaternion::I.conj());
        assert_eq!(quat_conj(ij), -Quaternion::K);
    }

    #[test]
    fn token_parsing_and_display() {
        for tok in ["1", "-1", "i", "-i", "j", "-j", "k", "-k"] {
            let q: Quaternion = tok.parse().unwrap();
            assert_eq!(q.to_string(), tok);
        }
        assert_eq!("(0,1,0,0)".parse::<Quaternion>().unwrap(), Quaternion::I);
        assert_eq!(
            "( 2, 0 ,0,0)".parse::<Quaternion>().unwrap().to_string(),
            "(2,0,0,0)"
        );
        assert!("m".parse::<Quaternion>().is_err());
        assert!("(1,0,0)".parse::<Quaternion>().is_err());
    }

    fn unit_quaternion() -> impl Strategy<Value = Quaternion> {
        prop_oneof![
            Just(Quaternion::ONE),
            Just(Quaternion::I),
            Just(Quaternion::J),
            Just(Quaternion::K),
        ]
        .prop_flat_map(|q| prop_oneof![Just(q), Just(-q)])
    }

    fn any_quaternion() -> impl Strategy<Value = Quaternion> {
        (-50i64..50, -50i64..50, -50i64..50, -50i64..50)
            .prop_map(|(w, x, y, z)| Quaternion::new(w, x, y, z))
    }

    proptest! {
        #[test]
        fn root_products_are_exponent_sums(r in 1u32..64, a in 0u32..64, b in 0u32..64) {
            let (a, b) = (a % r, b % r);
            let lhs = root_value(a, r).unwrap() * root_value(b, r).unwrap();
            let prod = RootExponent::new(a as i64, r).unwrap() * RootExponent::new(b as i64, r).unwrap();
            prop_assert!(close(lhs, prod.value()));
            prop_assert_eq!(prod.exponent(), (a + b) % r);
        }

        #[test]
        fn unit_products_are_associative(p in unit_quaternion(), q in unit_quaternion(), s in unit_quaternion()) {
            prop_assert_eq!((p * q) * s, p * (q * s));
            prop_assert!((p * q).is_unit());
        }

        #[test]
        fn integer_products_are_associative(p in any_quaternion(), q in any_quaternion(), s in any_quaternion()) {
            prop_assert_eq!((p * q) * s, p * (q * s));
            prop_assert_eq!((p * q).norm_sqr(), p.norm_sqr() * q.norm_sqr());
        }

        #[test]
        fn conj_is_involutive_antihomomorphism(p in any_quaternion(), q in any_quaternion()) {
            prop_assert_eq!(p.conj().conj(), p);
            prop_assert_eq!((p * q).conj(), q.conj() * p.conj());
        }
    }
}
