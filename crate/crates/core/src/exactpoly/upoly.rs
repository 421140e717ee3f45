//! Dense univariate polynomials over a [`Field`], used by root finding,
//! gcd computations and the elimination back-end.

use super::field::Field;
use super::scalar::Scalar;
use super::PolyError;

/// Ascending coefficients; trailing zeros are trimmed so the zero polynomial
/// has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(field: Field, coeffs: Vec<Scalar>) -> Result<Self, PolyError> {
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(PolyError::FieldMismatch(bad.field().to_string(), field.to_string()));
        }
        let mut p = UniPoly { field, coeffs };
        p.trim();
        Ok(p)
    }

    pub fn zero(field: Field) -> Self {
        UniPoly { field, coeffs: vec![] }
    }

    pub fn constant(c: Scalar) -> Self {
        let field = c.field();
        let mut p = UniPoly { field, coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn from_i64(field: &Field, coeffs: &[i64]) -> Self {
        let c = coeffs.iter().map(|&v| Scalar::from_i64(field, v)).collect();
        UniPoly::new(field.clone(), c).expect("same field")
    }

    /// `x - r`
    pub fn linear_root(r: &Scalar) -> Self {
        let f = r.field();
        UniPoly { field: f.clone(), coeffs: vec![-r, Scalar::one(&f)] }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Result<Scalar, PolyError> {
        let field = x.field();
        let mut acc = Scalar::zero(&field);
        for c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(x)?.checked_add(&c.coerce_into(&field)?)?;
        }
        Ok(acc)
    }

    /// Coefficients embedded into a larger field.
    pub fn coerce_into(&self, field: &Field) -> Result<UniPoly, PolyError> {
        let c = self.coeffs.iter().map(|c| c.coerce_into(field)).collect::<Result<Vec<_>, _>>()?;
        UniPoly::new(field.clone(), c)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Scalar::zero(&self.field);
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&z);
                let b = other.coeffs.get(i).unwrap_or(&z);
                a + b
            })
            .collect();
        let mut p = UniPoly { field: self.field.clone(), coeffs };
        p.trim();
        p
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field.clone());
        }
        let mut out = vec![Scalar::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        let mut p = UniPoly { field: self.field.clone(), coeffs: out };
        p.trim();
        p
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        let mut p = UniPoly { field: self.field.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() };
        p.trim();
        p
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Scalar::from_i64(&self.field, i as i64))
            .collect();
        let mut p = UniPoly { field: self.field.clone(), coeffs };
        p.trim();
        p
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), PolyError> {
        let dl = d.leading().ok_or(PolyError::DivisionByZero)?;
        let inv = dl.inv().ok_or(PolyError::DivisionByZero)?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((UniPoly::zero(self.field.clone()), self.clone()));
        }
        let mut q = vec![Scalar::zero(&self.field); r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = &r[top] * &inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                let idx = top - dd + i;
                r[idx] = &r[idx] - &(&c * dc);
            }
            q[top - dd] = c;
        }
        r.truncate(dd);
        let mut q = UniPoly { field: self.field.clone(), coeffs: q };
        let mut r = UniPoly { field: self.field.clone(), coeffs: r };
        q.trim();
        r.trim();
        Ok((q, r))
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading().and_then(|l| l.inv()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Number of distinct roots over the algebraic closure (exact fields, char 0
    /// or characteristic larger than the degree).
    pub fn distinct_root_count(&self) -> usize {
        match self.degree() {
            None | Some(0) => 0,
            Some(d) => d - self.gcd(&self.derivative()).degree().unwrap_or(0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_over_q() {
        let f = Field::Rational;
        // (x-1)(x-2) and (x-1)(x+3)
        let a = UniPoly::from_i64(&f, &[2, -3, 1]);
        let b = UniPoly::from_i64(&f, &[-3, 2, 1]);
        assert_eq!(a.gcd(&b), UniPoly::from_i64(&f, &[-1, 1]));
    }

    #[test]
    fn division_identity() {
        let f = Field::Prime(11);
        let a = UniPoly::from_i64(&f, &[3, 0, 5, 7, 1]);
        let d = UniPoly::from_i64(&f, &[1, 2, 3]);
        let (q, r) = a.div_rem(&d).unwrap();
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn distinct_roots() {
        let f = Field::Rational;
        // (x-1)^2 (x+1)
        let p = UniPoly::from_i64(&f, &[1, -1, -1, 1]);
        assert_eq!(p.distinct_root_count(), 2);
    }
}
