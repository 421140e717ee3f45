use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{ExtField, Field};
use super::PolyError;

/// A field element tagged with the field it lives in.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Prime { p: u64, v: u64 },
    Ext { field: Arc<ExtField>, c: Vec<u64> },
    Complex(Complex64),
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::Prime { p, v }, Scalar::Prime { p: q, v: w }) => p == q && v == w,
            (Scalar::Ext { field: f, c }, Scalar::Ext { field: g, c: d }) => f == g && c == d,
            (Scalar::Complex(a), Scalar::Complex(b)) => a == b,
            _ => false,
        }
    }
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { p, .. } => Field::Prime(*p),
            Scalar::Ext { field, .. } => Field::Extension(field.clone()),
            Scalar::Complex(_) => Field::Complex,
        }
    }

    pub fn zero(field: &Field) -> Self {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: &Field) -> Self {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: &Field, v: i64) -> Self {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.into())),
            Field::Prime(p) => Scalar::Prime { p: *p, v: v.rem_euclid(*p as i64) as u64 },
            Field::Extension(e) => Scalar::Ext {
                field: e.clone(),
                c: e.from_u64(v.rem_euclid(e.characteristic() as i64) as u64),
            },
            Field::Complex => Scalar::Complex(Complex64::new(v as f64, 0.0)),
        }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Scalar::Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Scalar::Complex(Complex64::new(re, im))
    }

    /// Image of a rational number in `field`; fails when the denominator is
    /// divisible by the characteristic.
    pub fn from_rational(field: &Field, r: &BigRational) -> Result<Self, PolyError> {
        match field {
            Field::Rational => Ok(Scalar::Rational(r.clone())),
            Field::Complex => Ok(Scalar::Complex(Complex64::new(ratio_to_f64(r), 0.0))),
            Field::Prime(_) | Field::Extension(_) => {
                let p = field.characteristic();
                let num = bigint_mod(r.numer(), p);
                let den = bigint_mod(r.denom(), p);
                if den == 0 {
                    return Err(PolyError::BadReduction(format!("denominator of {r} vanishes mod {p}")));
                }
                let n = Scalar::from_i64(field, num as i64);
                let d = Scalar::from_i64(field, den as i64);
                n.checked_div(&d)
            }
        }
    }

    /// Element number `index` of a finite field in digit order.
    pub fn finite_element(field: &Field, index: u64) -> Option<Self> {
        match field {
            Field::Prime(p) => (index < *p).then_some(Scalar::Prime { p: *p, v: index }),
            Field::Extension(e) => match e.order() {
                Some(q) if index >= q => None,
                _ => Some(Scalar::Ext { field: e.clone(), c: e.element(index) }),
            },
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { v, .. } => *v == 0,
            Scalar::Ext { c, .. } => c.iter().all(|&x| x == 0),
            Scalar::Complex(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { v, .. } => *v == 1,
            Scalar::Ext { c, .. } => c[0] == 1 && c[1..].iter().all(|&x| x == 0),
            Scalar::Complex(z) => z.re == 1.0 && z.im == 0.0,
        }
    }

    fn mismatch(&self, other: &Scalar) -> PolyError {
        PolyError::FieldMismatch(self.field().to_string(), other.field().to_string())
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, PolyError> {
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { p, v }, Scalar::Prime { p: q, v: w }) if p == q => {
                Scalar::Prime { p: *p, v: (v + w) % p }
            }
            (Scalar::Ext { field, c }, Scalar::Ext { field: g, c: d }) if field == g => {
                Scalar::Ext { field: field.clone(), c: field.add(c, d) }
            }
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a + b),
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, PolyError> {
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Prime { p, v }, Scalar::Prime { p: q, v: w }) if p == q => {
                Scalar::Prime { p: *p, v: (v + p - w) % p }
            }
            (Scalar::Ext { field, c }, Scalar::Ext { field: g, c: d }) if field == g => {
                Scalar::Ext { field: field.clone(), c: field.sub(c, d) }
            }
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a - b),
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, PolyError> {
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { p, v }, Scalar::Prime { p: q, v: w }) if p == q => Scalar::Prime {
                p: *p,
                v: ((*v as u128 * *w as u128) % *p as u128) as u64,
            },
            (Scalar::Ext { field, c }, Scalar::Ext { field: g, c: d }) if field == g => {
                Scalar::Ext { field: field.clone(), c: field.mul(c, d) }
            }
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a * b),
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, PolyError> {
        let inv = other.inv().ok_or(PolyError::DivisionByZero)?;
        self.checked_mul(&inv)
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Prime { p, v } => Scalar::Prime { p: *p, v: pow_mod(*v, *p - 2, *p) },
            Scalar::Ext { field, c } => Scalar::Ext { field: field.clone(), c: field.inv(c)? },
            Scalar::Complex(z) => Scalar::Complex(z.inv()),
        })
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one(&self.field());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Explicit embedding into a larger field: Q into C, and F_{p^k} into
    /// F_{p^K} when k divides K. Equal fields map identically.
    pub fn coerce_into(&self, target: &Field) -> Result<Scalar, PolyError> {
        if &self.field() == target {
            return Ok(self.clone());
        }
        match (self, target) {
            (Scalar::Rational(r), Field::Complex) => Ok(Scalar::Complex(Complex64::new(ratio_to_f64(r), 0.0))),
            (Scalar::Prime { p, v }, Field::Extension(e)) if e.characteristic() == *p => {
                Ok(Scalar::Ext { field: e.clone(), c: e.from_u64(*v) })
            }
            (Scalar::Ext { field, c }, Field::Extension(big)) => {
                let root = embedding_root(field, big)?;
                let big_field = Field::Extension(big.clone());
                let mut acc = Scalar::zero(&big_field);
                let mut power = Scalar::one(&big_field);
                for &ci in c {
                    if ci != 0 {
                        acc = &acc + &(&power * &Scalar::from_i64(&big_field, ci as i64));
                    }
                    power = &power * &root;
                }
                Ok(acc)
            }
            _ => Err(PolyError::FieldMismatch(self.field().to_string(), target.to_string())),
        }
    }

    /// Complex value for rational or complex scalars.
    pub fn to_complex(&self) -> Option<Complex64> {
        match self {
            Scalar::Rational(r) => Some(Complex64::new(ratio_to_f64(r), 0.0)),
            Scalar::Complex(z) => Some(*z),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Magnitude used for numeric scale estimates (1 for nonzero finite-field elements).
    pub fn magnitude(&self) -> f64 {
        match self {
            Scalar::Rational(r) => ratio_to_f64(r).abs(),
            Scalar::Complex(z) => z.norm(),
            s => {
                if s.is_zero() {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Equality with a tolerance for complex scalars, exact otherwise.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        match (self.to_complex(), other.to_complex()) {
            (Some(a), Some(b)) if matches!(self, Scalar::Complex(_)) || matches!(other, Scalar::Complex(_)) => {
                (a - b).norm() <= tol * (1.0f64).max(a.norm()).max(b.norm())
            }
            _ => self == other,
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar field tags must match")
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar field tags must match")
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar field tags must match")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Prime { p, v } => Scalar::Prime { p: *p, v: (p - v) % p },
            Scalar::Ext { field, c } => Scalar::Ext { field: field.clone(), c: field.neg(c) },
            Scalar::Complex(z) => Scalar::Complex(-z),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { v, .. } => write!(f, "{v}"),
            Scalar::Ext { c, .. } => write!(f, "{c:?}"),
            Scalar::Complex(z) => write!(f, "({}{:+}i)", z.re, z.im),
        }
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // overflowing ratios: scale through the bit lengths
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        if n - d > 1000 {
            if r.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        } else {
            0.0
        }
    })
}

pub(crate) fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let m = n % BigInt::from(p);
    let m = if m.is_negative() { m + BigInt::from(p) } else { m };
    m.to_u64().expect("residue fits")
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % p) as u128;
    let m = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// Image of the generator of `small` inside `big`: the least root (in digit
/// order) of the small modulus. Cached per field pair.
fn embedding_root(small: &Arc<ExtField>, big: &Arc<ExtField>) -> Result<Scalar, PolyError> {
    type Key = (Vec<u64>, Vec<u64>, u64);
    static CACHE: OnceLock<Mutex<HashMap<Key, Vec<u64>>>> = OnceLock::new();
    if small.characteristic() != big.characteristic() || big.degree() % small.degree() != 0 {
        return Err(PolyError::FieldMismatch(
            Field::Extension(small.clone()).to_string(),
            Field::Extension(big.clone()).to_string(),
        ));
    }
    let key = (small.modulus().to_vec(), big.modulus().to_vec(), small.characteristic());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(&key) {
        return Ok(Scalar::Ext { field: big.clone(), c: c.clone() });
    }
    let order = big.order().ok_or_else(|| PolyError::Budget("embedding field too large".into()))?;
    for idx in 0..order {
        let x = big.element(idx);
        // Horner on the small modulus
        let mut acc = big.from_u64(0);
        for &m in small.modulus().iter().rev() {
            acc = big.add(&big.mul(&acc, &x), &big.from_u64(m));
        }
        if acc.iter().all(|&v| v == 0) {
            cache.lock().unwrap().insert(key, x.clone());
            return Ok(Scalar::Ext { field: big.clone(), c: x });
        }
    }
    unreachable!("a subfield modulus splits in every extension of divisible degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_lowest_terms() {
        let a = Scalar::rational(6, -4);
        assert_eq!(a.to_string(), "-3/2");
    }

    #[test]
    fn mismatched_fields_rejected() {
        let a = Scalar::from_i64(&Field::Prime(5), 2);
        let b = Scalar::from_i64(&Field::Prime(7), 2);
        assert!(a.checked_mul(&b).is_err());
        assert!(a.checked_add(&Scalar::rational(1, 1)).is_err());
    }

    #[test]
    fn f5_product() {
        let f = Field::Prime(5);
        let p = &Scalar::from_i64(&f, 2) * &Scalar::from_i64(&f, 3);
        assert!(p.is_one());
    }

    #[test]
    fn reduction_of_rationals() {
        let f = Field::Prime(7);
        let half = Scalar::from_rational(&f, &BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(half, Scalar::from_i64(&f, 4));
        assert!(Scalar::from_rational(&f, &BigRational::new(1.into(), 7.into())).is_err());
    }

    #[test]
    fn subfield_embedding_is_a_homomorphism() {
        let small = Field::finite(3, 2).unwrap();
        let big = Field::finite(3, 4).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let a = Scalar::finite_element(&small, i).unwrap();
                let b = Scalar::finite_element(&small, j).unwrap();
                let ab = (&a * &b).coerce_into(&big).unwrap();
                let prod = &a.coerce_into(&big).unwrap() * &b.coerce_into(&big).unwrap();
                assert_eq!(ab, prod);
                let s = (&a + &b).coerce_into(&big).unwrap();
                assert_eq!(s, &a.coerce_into(&big).unwrap() + &b.coerce_into(&big).unwrap());
            }
        }
    }
}
