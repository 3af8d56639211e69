//! Exact scalars of the form a + b*sqrt(d) with rational a, b.
//!
//! The radicand d is a squarefree nonnegative integer; d = 0 marks a plain
//! rational (then b = 0). Scalars with distinct nonzero radicands belong to
//! different fields and combining them panics: every computation in this crate
//! lives in a single quadratic extension fixed by its input data.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    d: u64,
}

/// Splits m into f^2 * d with d squarefree, returning (f, d).
fn extract_square(m: u64) -> (u64, u64) {
    let mut f = 1u64;
    let mut d = m;
    let mut k = 2u64;
    while k * k <= d {
        while d % (k * k) == 0 {
            d /= k * k;
            f *= k;
        }
        k += 1;
    }
    (f, d)
}

fn ratio_i64(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Scalar {
    /// Builds a + b*sqrt(d), normalizing so that b = 0 forces d = 0 and d is
    /// squarefree (square factors of d are folded into b; d = 1 folds into a).
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Scalar {
        if b.is_zero() {
            return Scalar { a, b, d: 0 };
        }
        let (f, d0) = extract_square(d);
        let b = b * BigRational::from_integer(BigInt::from(f));
        if d0 <= 1 {
            // sqrt(0) = 0, sqrt(1) = 1
            if d0 == 0 {
                Scalar { a, b: BigRational::zero(), d: 0 }
            } else {
                Scalar { a: a + b, b: BigRational::zero(), d: 0 }
            }
        } else {
            Scalar { a, b, d: d0 }
        }
    }

    pub fn zero() -> Scalar {
        Scalar { a: BigRational::zero(), b: BigRational::zero(), d: 0 }
    }

    pub fn one() -> Scalar {
        Scalar { a: BigRational::one(), b: BigRational::zero(), d: 0 }
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar { a: ratio_i64(n), b: BigRational::zero(), d: 0 }
    }

    pub fn from_bigint(n: BigInt) -> Scalar {
        Scalar { a: BigRational::from_integer(n), b: BigRational::zero(), d: 0 }
    }

    pub fn from_rational(r: BigRational) -> Scalar {
        Scalar { a: r, b: BigRational::zero(), d: 0 }
    }

    pub fn ratio(num: i64, den: i64) -> Scalar {
        Scalar::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// sqrt(m) as an exact scalar.
    pub fn root_of(m: u64) -> Scalar {
        Scalar::new(BigRational::zero(), BigRational::one(), m)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational value, or None when a sqrt term is present.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.b.is_zero() { Some(&self.a) } else { None }
    }

    fn join(d1: u64, d2: u64) -> u64 {
        match (d1, d2) {
            (0, d) | (d, 0) => d,
            (x, y) => {
                assert_eq!(x, y, "scalars from different quadratic fields: sqrt({x}) vs sqrt({y})");
                x
            }
        }
    }

    /// Galois conjugate a - b*sqrt(d).
    pub fn conj_sqrt(&self) -> Scalar {
        Scalar { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Complex conjugate; the identity on this real ring, kept explicit where
    /// an adjoint formula calls for it.
    pub fn conj(&self) -> Scalar {
        self.clone()
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        if self.b.is_zero() {
            return Scalar { a: self.a.recip(), b: BigRational::zero(), d: 0 };
        }
        // 1/(a + b sqrt d) = (a - b sqrt d)/(a^2 - b^2 d)
        let norm = &self.a * &self.a - &self.b * &self.b * ratio_i64(self.d as i64);
        assert!(!norm.is_zero(), "inverse of zero norm element");
        let ninv = norm.recip();
        Scalar { a: &self.a * &ninv, b: -(&self.b * &ninv), d: self.d }
    }

    /// Exact sign of the real number a + b*sqrt(d).
    pub fn sign(&self) -> Ordering {
        if self.b.is_zero() {
            return self.a.cmp(&BigRational::zero());
        }
        if self.a.is_zero() {
            return self.b.cmp(&BigRational::zero());
        }
        let sa = self.a.is_positive();
        let sb = self.b.is_positive();
        if sa == sb {
            return if sa { Ordering::Greater } else { Ordering::Less };
        }
        // Opposite signs: compare |a| with |b| sqrt(d) via squares.
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * ratio_i64(self.d as i64);
        match lhs.cmp(&rhs) {
            Ordering::Greater => self.a.cmp(&BigRational::zero()),
            Ordering::Less => self.b.cmp(&BigRational::zero()),
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().expect("rational out of f64 range");
        if self.b.is_zero() {
            a
        } else {
            let b = self.b.to_f64().expect("rational out of f64 range");
            a + b * (self.d as f64).sqrt()
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let d = Scalar::join(self.d, rhs.d);
        let b = &self.b + &rhs.b;
        let d = if b.is_zero() { 0 } else { d };
        Scalar { a: &self.a + &rhs.a, b, d }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let d = Scalar::join(self.d, rhs.d);
        let b = &self.b - &rhs.b;
        let d = if b.is_zero() { 0 } else { d };
        Scalar { a: &self.a - &rhs.a, b, d }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        let d = Scalar::join(self.d, rhs.d);
        let dr = ratio_i64(d as i64);
        let a = &self.a * &rhs.a + &self.b * &rhs.b * &dr;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        let d = if b.is_zero() { 0 } else { d };
        Scalar { a, b, d }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let root = format!("sqrt({})", self.d);
        let bterm = if self.b.is_one() {
            root
        } else if (-&self.b).is_one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{bterm}")
        } else if self.b.is_positive() {
            write!(f, "{}+{}", self.a, bterm)
        } else {
            write!(f, "{}{}", self.a, bterm)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_normalization() {
        let s = Scalar::root_of(12);
        assert_eq!(s.radicand(), 3);
        assert_eq!(s.sqrt_part(), &ratio_i64(2));
        let s = Scalar::root_of(4);
        assert!(s.is_rational());
        assert_eq!(s.rational_part(), &ratio_i64(2));
        let s = Scalar::root_of(1);
        assert!(s.is_one());
        let s = Scalar::root_of(0);
        assert!(s.is_zero());
    }

    #[test]
    fn field_arithmetic() {
        let x = Scalar::new(ratio_i64(1), ratio_i64(2), 5);
        let y = Scalar::new(ratio_i64(3), ratio_i64(-1), 5);
        let p = &x * &y;
        // (1 + 2 sqrt5)(3 - sqrt5) = 3 - sqrt5 + 6 sqrt5 - 10 = -7 + 5 sqrt5
        assert_eq!(p, Scalar::new(ratio_i64(-7), ratio_i64(5), 5));
        let s = &x + &y;
        assert_eq!(s, Scalar::new(ratio_i64(4), ratio_i64(1), 5));
        let z = &x * &x.inv();
        assert!(z.is_one());
    }

    #[test]
    fn sqrt_terms_cancel_back_to_rational() {
        let x = Scalar::new(ratio_i64(1), ratio_i64(2), 5);
        let y = Scalar::new(ratio_i64(0), ratio_i64(-2), 5);
        let s = &x + &y;
        assert!(s.is_rational());
        assert_eq!(s.radicand(), 0);
        // A pure rational may then join a different field.
        let t = &s + &Scalar::root_of(2);
        assert_eq!(t.radicand(), 2);
    }

    #[test]
    fn exact_sign() {
        // 7 - 4 sqrt3 = 7 - 6.92... > 0
        let s = Scalar::new(ratio_i64(7), ratio_i64(-4), 3);
        assert_eq!(s.sign(), Ordering::Greater);
        // 7 - 5 sqrt2 = 7 - 7.07... < 0
        let s = Scalar::new(ratio_i64(7), ratio_i64(-5), 2);
        assert_eq!(s.sign(), Ordering::Less);
        // -7 + 4 sqrt3 = -0.07...
        let s = Scalar::new(ratio_i64(-7), ratio_i64(4), 3);
        assert_eq!(s.sign(), Ordering::Less);
        // -7 + 5 sqrt2 > 0
        let s = Scalar::new(ratio_i64(-7), ratio_i64(5), 2);
        assert_eq!(s.sign(), Ordering::Greater);
        assert_eq!(Scalar::zero().sign(), Ordering::Equal);
    }

    #[test]
    fn mul_by_zero_ignores_field() {
        let x = Scalar::root_of(5);
        let z = &x * &Scalar::zero();
        assert!(z.is_zero());
        assert_eq!(z.radicand(), 0);
    }

    #[test]
    #[should_panic]
    fn mixing_fields_panics() {
        let _ = &Scalar::root_of(2) + &Scalar::root_of(3);
    }

    #[test]
    fn f64_value() {
        let x = Scalar::new(ratio_i64(1), BigRational::new(BigInt::from(1), BigInt::from(2)), 2);
        let v = x.to_f64();
        assert!((v - (1.0 + 0.5 * 2f64.sqrt())).abs() < 1e-15);
    }
}
