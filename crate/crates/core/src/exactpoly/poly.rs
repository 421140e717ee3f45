use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::field::Field;
use super::scalar::Scalar;
use super::PolyError;

pub type Monomial = Vec<u32>;
pub type Vars = Arc<[String]>;

/// Shorthand for building a variable list.
pub fn vars(names: &[&str]) -> Vars {
    names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

/// Graded lexicographic comparison of exponent vectors.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub exp: Monomial,
    pub coeff: Scalar,
}

/// Sparse multivariate polynomial. Terms are kept in descending grlex order
/// with no zero coefficients; all coefficients carry the polynomial's field.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    vars: Vars,
    field: Field,
    terms: Vec<Term>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked ring operation on two polynomials over the same variables and field.
pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: ArithOp) -> Result<MultiPoly, PolyError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
    }
}

impl MultiPoly {
    pub fn zero(vars: Vars, field: Field) -> Self {
        MultiPoly { vars, field, terms: Vec::new() }
    }

    pub fn constant(vars: Vars, c: Scalar) -> Self {
        let field = c.field();
        let n = vars.len();
        let terms = if c.is_zero() { vec![] } else { vec![Term { exp: vec![0; n], coeff: c }] };
        MultiPoly { vars, field, terms }
    }

    pub fn one(vars: Vars, field: &Field) -> Self {
        MultiPoly::constant(vars, Scalar::one(field))
    }

    pub fn var(vars: Vars, field: &Field, name: &str) -> Result<Self, PolyError> {
        let i = index_of(&vars, name)?;
        let mut exp = vec![0; vars.len()];
        exp[i] = 1;
        Ok(MultiPoly { vars, field: field.clone(), terms: vec![Term { exp, coeff: Scalar::one(field) }] })
    }

    /// Canonicalizes an arbitrary list of terms (merging duplicates, dropping zeros).
    pub fn from_terms(
        vars: Vars,
        field: Field,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self, PolyError> {
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (exp, coeff) in terms {
            if exp.len() != vars.len() {
                return Err(PolyError::ArityMismatch { expected: vars.len(), got: exp.len() });
            }
            if coeff.field() != field {
                return Err(PolyError::FieldMismatch(coeff.field().to_string(), field.to_string()));
            }
            match acc.get_mut(&exp) {
                Some(c) => *c = &*c + &coeff,
                None => {
                    acc.insert(exp, coeff);
                }
            }
        }
        Ok(Self::from_map(vars, field, acc))
    }

    fn from_map(vars: Vars, field: Field, acc: BTreeMap<Monomial, Scalar>) -> Self {
        let mut terms: Vec<Term> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exp, coeff)| Term { exp, coeff })
            .collect();
        terms.sort_by(|a, b| grlex_cmp(&b.exp, &a.exp));
        MultiPoly { vars, field, terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        index_of(&self.vars, name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.exp.iter().all(|&e| e == 0))
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            Some(Scalar::zero(&self.field))
        } else if self.is_constant() {
            Some(self.terms[0].coeff.clone())
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.exp.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|t| t.exp[i]).max().unwrap_or(0)
    }

    /// Degree in a block of variables, as (min, max) over the terms.
    pub fn block_degree_range(&self, block: &[usize]) -> Option<(u32, u32)> {
        let degs = self.terms.iter().map(|t| block.iter().map(|&i| t.exp[i]).sum::<u32>());
        degs.fold(None, |acc, d| match acc {
            None => Some((d, d)),
            Some((lo, hi)) => Some((lo.min(d), hi.max(d))),
        })
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.iter().any(|t| t.exp[i] > 0)
    }

    fn compatible(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.vars != other.vars {
            return Err(PolyError::VarMismatch(format!("{:?} vs {:?}", self.vars, other.vars)));
        }
        if self.field != other.field {
            return Err(PolyError::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.compatible(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.compatible(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.compatible(other)?;
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let exp: Monomial = a.exp.iter().zip(&b.exp).map(|(x, y)| x + y).collect();
                let c = &a.coeff * &b.coeff;
                match acc.get_mut(&exp) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(exp, c);
                    }
                }
            }
        }
        Ok(Self::from_map(self.vars.clone(), self.field.clone(), acc))
    }

    fn merge(&self, other: &MultiPoly, subtract: bool) -> MultiPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => grlex_cmp(&a.exp, &b.exp),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let t = &other.terms[j];
                    let coeff = if subtract { -&t.coeff } else { t.coeff.clone() };
                    out.push(Term { exp: t.exp.clone(), coeff });
                    j += 1;
                }
                Ordering::Equal => {
                    let (a, b) = (&self.terms[i], &other.terms[j]);
                    let c = if subtract { &a.coeff - &b.coeff } else { &a.coeff + &b.coeff };
                    if !c.is_zero() {
                        out.push(Term { exp: a.exp.clone(), coeff: c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MultiPoly { vars: self.vars.clone(), field: self.field.clone(), terms: out }
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.vars.clone(), self.field.clone());
        }
        let terms = self.terms.iter().map(|t| Term { exp: t.exp.clone(), coeff: &t.coeff * c }).collect();
        MultiPoly { vars: self.vars.clone(), field: self.field.clone(), terms }
    }

    /// Multiply by a monomial `c * x^exp`.
    pub fn mul_term(&self, exp: &[u32], c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.vars.clone(), self.field.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                exp: t.exp.iter().zip(exp).map(|(a, b)| a + b).collect(),
                coeff: &t.coeff * c,
            })
            .collect();
        MultiPoly { vars: self.vars.clone(), field: self.field.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.vars.clone(), &self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Value at a point. Coefficients are embedded into the point's field
    /// (so rational polynomials may be evaluated at complex points).
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar, PolyError> {
        if point.len() != self.vars.len() {
            return Err(PolyError::ArityMismatch { expected: self.vars.len(), got: point.len() });
        }
        let field = point.first().map(|s| s.field()).unwrap_or_else(|| self.field.clone());
        if let Some(bad) = point.iter().find(|s| s.field() != field) {
            return Err(PolyError::FieldMismatch(bad.field().to_string(), field.to_string()));
        }
        let powers = power_table(point, &self.terms);
        let mut acc = Scalar::zero(&field);
        for t in &self.terms {
            let mut m = t.coeff.coerce_into(&field)?;
            for (i, &e) in t.exp.iter().enumerate() {
                if e > 0 {
                    m = &m * &powers[i][e as usize];
                }
            }
            acc = &acc + &m;
        }
        Ok(acc)
    }

    /// Substitutes values for some variables (`None` keeps the variable).
    /// The result lives over the field of the supplied values and keeps the
    /// same variable list.
    pub fn evaluate_partial(&self, assignment: &[Option<Scalar>]) -> Result<MultiPoly, PolyError> {
        if assignment.len() != self.vars.len() {
            return Err(PolyError::ArityMismatch { expected: self.vars.len(), got: assignment.len() });
        }
        let field = assignment
            .iter()
            .flatten()
            .map(|s| s.field())
            .next()
            .unwrap_or_else(|| self.field.clone());
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for t in &self.terms {
            let mut c = t.coeff.coerce_into(&field)?;
            let mut exp = t.exp.clone();
            for (i, slot) in assignment.iter().enumerate() {
                if let Some(v) = slot {
                    if v.field() != field {
                        return Err(PolyError::FieldMismatch(v.field().to_string(), field.to_string()));
                    }
                    if exp[i] > 0 {
                        c = &c * &v.pow(exp[i]);
                        exp[i] = 0;
                    }
                }
            }
            match acc.get_mut(&exp) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(exp, c);
                }
            }
        }
        Ok(Self::from_map(self.vars.clone(), field, acc))
    }

    /// Replaces variable `i` by `images[i]`; all images share one variable
    /// list and field, and the result lives there.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        if images.len() < self.vars.len() {
            return Err(PolyError::MissingAssignment(self.vars[images.len()].clone()));
        }
        if images.len() > self.vars.len() {
            return Err(PolyError::ArityMismatch { expected: self.vars.len(), got: images.len() });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        for img in &images[1..] {
            first.compatible(img)?;
        }
        let out_vars = first.vars.clone();
        let out_field = first.field.clone();
        let mut cache: Vec<Vec<MultiPoly>> = vec![Vec::new(); images.len()];
        let mut acc = MultiPoly::zero(out_vars.clone(), out_field.clone());
        for t in &self.terms {
            let c = t.coeff.coerce_into(&out_field)?;
            let mut m = MultiPoly::constant(out_vars.clone(), c);
            for (i, &e) in t.exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut cache[i];
                if pw.is_empty() {
                    pw.push(MultiPoly::one(out_vars.clone(), &out_field));
                }
                while pw.len() <= e as usize {
                    let next = &pw[pw.len() - 1] * &images[i];
                    pw.push(next);
                }
                m = &m * &pw[e as usize];
            }
            acc = &acc + &m;
        }
        Ok(acc)
    }

    /// Substitution by variable name; every variable needs an image.
    pub fn substitute_named(&self, assignment: &BTreeMap<String, MultiPoly>) -> Result<MultiPoly, PolyError> {
        let images = self
            .vars
            .iter()
            .map(|v| assignment.get(v).cloned().ok_or_else(|| PolyError::MissingAssignment(v.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.substitute(&images)
    }

    pub fn partial_derivative(&self, var: &str) -> Result<MultiPoly, PolyError> {
        let i = self.var_index(var)?;
        Ok(self.derivative_at(i))
    }

    pub(crate) fn derivative_at(&self, i: usize) -> MultiPoly {
        let terms = self.terms.iter().filter(|t| t.exp[i] > 0).map(|t| {
            let mut exp = t.exp.clone();
            let k = exp[i];
            exp[i] -= 1;
            (exp, &t.coeff * &Scalar::from_i64(&self.field, k as i64))
        });
        MultiPoly::from_terms(self.vars.clone(), self.field.clone(), terms.collect::<Vec<_>>())
            .expect("derivative preserves shape")
    }

    /// Coefficients with respect to variable `i`: entry j multiplies x_i^j.
    pub fn coefficients_in(&self, i: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(i) as usize;
        let mut buckets: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); d + 1];
        if self.is_zero() {
            return vec![MultiPoly::zero(self.vars.clone(), self.field.clone())];
        }
        for t in &self.terms {
            let mut exp = t.exp.clone();
            let j = exp[i] as usize;
            exp[i] = 0;
            buckets[j].push((exp, t.coeff.clone()));
        }
        buckets
            .into_iter()
            .map(|b| MultiPoly::from_terms(self.vars.clone(), self.field.clone(), b).expect("shape preserved"))
            .collect()
    }

    /// Exact division; fails unless `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.compatible(divisor)?;
        let lead = divisor.leading().ok_or(PolyError::DivisionByZero)?;
        let lead_inv = lead.coeff.inv().ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, Scalar)> = Vec::new();
        while let Some(top) = rem.leading() {
            if top.exp.iter().zip(&lead.exp).any(|(a, b)| a < b) {
                return Err(PolyError::NotDivisible);
            }
            let exp: Monomial = top.exp.iter().zip(&lead.exp).map(|(a, b)| a - b).collect();
            let c = &top.coeff * &lead_inv;
            rem = &rem - &divisor.mul_term(&exp, &c);
            quot.push((exp, c));
        }
        MultiPoly::from_terms(self.vars.clone(), self.field.clone(), quot)
    }

    /// Maps coefficients into another field: reduction of rationals modulo
    /// the characteristic, or an explicit subfield embedding.
    pub fn to_field(&self, field: &Field) -> Result<MultiPoly, PolyError> {
        if &self.field == field {
            return Ok(self.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let c = match (&t.coeff, field.is_finite()) {
                    (Scalar::Rational(r), true) => Scalar::from_rational(field, r)?,
                    _ => t.coeff.coerce_into(field)?,
                };
                Ok((t.exp.clone(), c))
            })
            .collect::<Result<Vec<_>, PolyError>>()?;
        MultiPoly::from_terms(self.vars.clone(), field.clone(), terms)
    }

    /// Re-expresses the polynomial over a different variable list; every
    /// variable that actually occurs must be present there.
    pub fn with_vars(&self, new_vars: Vars) -> Result<MultiPoly, PolyError> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let pos = new_vars.iter().position(|w| w == v);
            if pos.is_none() && self.involves(i) {
                return Err(PolyError::UnknownVariable(v.clone()));
            }
            map.push(pos);
        }
        let n = new_vars.len();
        let terms = self.terms.iter().map(|t| {
            let mut exp = vec![0; n];
            for (i, &e) in t.exp.iter().enumerate() {
                if let Some(j) = map[i] {
                    exp[j] += e;
                }
            }
            (exp, t.coeff.clone())
        });
        MultiPoly::from_terms(new_vars, self.field.clone(), terms.collect::<Vec<_>>())
    }

    /// Dense coefficient vector (ascending) in variable `i`; other variables must be absent.
    pub fn to_dense(&self, i: usize) -> Result<Vec<Scalar>, PolyError> {
        if (0..self.nvars()).any(|j| j != i && self.involves(j)) {
            return Err(PolyError::NotUnivariate);
        }
        let d = self.degree_in(i) as usize;
        let mut out = vec![Scalar::zero(&self.field); d + 1];
        for t in &self.terms {
            out[t.exp[i] as usize] = t.coeff.clone();
        }
        if self.is_zero() {
            out.clear();
        }
        Ok(out)
    }

    /// Builds `sum c_j x_i^j` from a dense ascending coefficient vector.
    pub fn from_dense(vars: Vars, field: Field, i: usize, coeffs: &[Scalar]) -> Result<MultiPoly, PolyError> {
        let n = vars.len();
        let terms = coeffs.iter().enumerate().map(|(j, c)| {
            let mut exp = vec![0; n];
            exp[i] = j as u32;
            (exp, c.clone())
        });
        MultiPoly::from_terms(vars, field, terms.collect::<Vec<_>>())
    }

    /// Largest coefficient magnitude; 1-valued for finite fields.
    pub fn coefficient_scale(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.magnitude()).fold(0.0, f64::max)
    }

    /// Parses `+ - * ^`, integer coefficients and the given variables
    /// (e.g. `"x^3+y^3+z^3"`, `"2*x*y - 3"`). No parentheses.
    pub fn parse(src: &str, vars: Vars) -> Result<MultiPoly, PolyError> {
        super::parse::parse_poly(src, vars)
    }
}

fn index_of(vars: &Vars, name: &str) -> Result<usize, PolyError> {
    vars.iter().position(|v| v == name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
}

fn power_table(point: &[Scalar], terms: &[Term]) -> Vec<Vec<Scalar>> {
    let n = point.len();
    let mut maxdeg = vec![0u32; n];
    for t in terms {
        for (m, &e) in maxdeg.iter_mut().zip(&t.exp) {
            *m = (*m).max(e);
        }
    }
    point
        .iter()
        .zip(&maxdeg)
        .map(|(x, &d)| {
            let mut pw = vec![Scalar::one(&x.field())];
            for _ in 0..d {
                let next = &pw[pw.len() - 1] * x;
                pw.push(next);
            }
            pw
        })
        .collect()
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("polynomials must share variables and field")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("polynomials must share variables and field")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("polynomials must share variables and field")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let terms = self.terms.iter().map(|t| Term { exp: t.exp.clone(), coeff: -&t.coeff }).collect();
        MultiPoly { vars: self.vars.clone(), field: self.field.clone(), terms }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let mono: Vec<String> = t
                .exp
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], e) })
                .collect();
            let c = t.coeff.to_string();
            let (neg, mag) = match c.strip_prefix('-') {
                Some(rest) if matches!(t.coeff, Scalar::Rational(_)) => (true, rest.to_string()),
                _ => (false, c),
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(src: &str, names: &[&str]) -> MultiPoly {
        MultiPoly::parse(src, vars(names)).unwrap()
    }

    #[test]
    fn additive_cancellation() {
        let a = q("t^2+1", &["t"]);
        let b = q("-1", &["t"]);
        assert_eq!(poly_arith(&a, &b, ArithOp::Add).unwrap(), q("t^2", &["t"]));
    }

    #[test]
    fn difference_of_squares() {
        let a = q("x+y", &["x", "y"]);
        let b = q("x-y", &["x", "y"]);
        assert_eq!(poly_arith(&a, &b, ArithOp::Mul).unwrap(), q("x^2-y^2", &["x", "y"]));
    }

    #[test]
    fn product_over_f5() {
        let f = Field::Prime(5);
        let v = vars(&["t"]);
        let a = q("2*t", &["t"]).to_field(&f).unwrap();
        let b = q("3*t", &["t"]).to_field(&f).unwrap();
        let expected = MultiPoly::from_terms(v, f.clone(), vec![(vec![2], Scalar::one(&f))]).unwrap();
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn mismatches_rejected() {
        let a = q("x", &["x"]);
        let b = q("x", &["x", "y"]);
        assert!(matches!(a.checked_add(&b), Err(PolyError::VarMismatch(_))));
        let c = a.to_field(&Field::Prime(7)).unwrap();
        assert!(matches!(a.checked_mul(&c), Err(PolyError::FieldMismatch(..))));
    }

    #[test]
    fn evaluation_examples() {
        let p = q("t^2+1", &["t"]);
        assert_eq!(p.evaluate(&[Scalar::rational(0, 1)]).unwrap(), Scalar::rational(1, 1));
        let at_i = p.evaluate(&[Scalar::complex(0.0, 1.0)]).unwrap();
        assert!(at_i.magnitude() < 1e-15);
        let m = q("x^2*y", &["x", "y"]);
        assert_eq!(m.evaluate(&[Scalar::rational(2, 1), Scalar::rational(3, 1)]).unwrap(), Scalar::rational(12, 1));
        assert!(matches!(m.evaluate(&[Scalar::rational(2, 1)]), Err(PolyError::ArityMismatch { .. })));
    }

    #[test]
    fn substitution_examples() {
        let s2 = q("s^2", &["s"]);
        assert_eq!(s2.substitute(&[q("t+1", &["t"])]).unwrap(), q("t^2+2*t+1", &["t"]));
        let uv = q("u*v", &["u", "v"]);
        assert_eq!(uv.substitute(&[q("t^2", &["t"]), q("t", &["t"])]).unwrap(), q("t^3", &["t"]));
        let p = q("t^2+1", &["t"]);
        assert_eq!(p.substitute(&[p.clone()]).unwrap(), q("t^4+2*t^2+2", &["t"]));
        assert!(matches!(uv.substitute(&[q("t", &["t"])]), Err(PolyError::MissingAssignment(v)) if v == "v"));
    }

    #[test]
    fn derivative_examples() {
        let f = q("x^3+y^3+z^3", &["x", "y", "z"]);
        assert_eq!(f.partial_derivative("x").unwrap(), q("3*x^2", &["x", "y", "z"]));
        assert!(q("7", &["x"]).partial_derivative("x").unwrap().is_zero());
        assert_eq!(q("x^2*y", &["x", "y"]).partial_derivative("y").unwrap(), q("x^2", &["x", "y"]));
        assert!(matches!(f.partial_derivative("w"), Err(PolyError::UnknownVariable(_))));
    }

    #[test]
    fn exact_division() {
        let a = q("x^2-y^2", &["x", "y"]);
        let b = q("x+y", &["x", "y"]);
        assert_eq!(a.div_exact(&b).unwrap(), q("x-y", &["x", "y"]));
        assert!(matches!(q("x^2+1", &["x", "y"]).div_exact(&b), Err(PolyError::NotDivisible)));
    }

    #[test]
    fn canonical_order_is_descending_grlex() {
        let p = q("1 + x + y^2 + x*y", &["x", "y"]);
        let exps: Vec<_> = p.terms().iter().map(|t| t.exp.clone()).collect();
        assert_eq!(exps, vec![vec![1, 1], vec![0, 2], vec![1, 0], vec![0, 0]]);
        assert_eq!(p.to_string(), "x*y + y^2 + x + 1");
    }
}
