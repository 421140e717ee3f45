//! Coefficient fields: the rationals, prime fields, prime-power extensions
//! and a double-precision complex field for the numeric backend.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::PolyError;

/// Largest characteristic accepted; keeps products of residues inside `u128`
/// comfortably and element indices inside `u64`.
pub const MAX_PRIME: u64 = 1 << 31;

/// Largest extension degree for which irreducibility is verified by trial
/// factor search.
pub const MAX_EXT_DEGREE: usize = 12;

/// F_{p^k} represented as F_p[x]/(m(x)) with `m` monic irreducible of degree k.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtField {
    p: u64,
    /// Monic modulus, ascending coefficients, length k+1.
    modulus: Vec<u64>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {:?})", self.p, self.degree(), self.modulus)
    }
}

impl ExtField {
    /// Builds F_p[x]/(modulus), rejecting reducible or non-monic moduli.
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self, PolyError> {
        check_prime(p)?;
        let k = modulus.len().saturating_sub(1);
        if k == 0 || modulus[k] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(PolyError::InvalidField(format!(
                "modulus {modulus:?} must be monic of positive degree with residues below {p}"
            )));
        }
        if k > MAX_EXT_DEGREE {
            return Err(PolyError::InvalidField(format!(
                "extension degree {k} exceeds {MAX_EXT_DEGREE}"
            )));
        }
        if !is_irreducible(p, &modulus) {
            return Err(PolyError::InvalidField(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        Ok(ExtField { p, modulus })
    }

    /// The extension of degree `k` over F_p built on the lexicographically
    /// least irreducible monic modulus (constant term least significant).
    /// Results are cached so that equal requests share one `Arc`.
    pub fn least(p: u64, k: usize) -> Result<Arc<Self>, PolyError> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<ExtField>>>> = OnceLock::new();
        check_prime(p)?;
        if k == 0 || k > MAX_EXT_DEGREE {
            return Err(PolyError::InvalidField(format!("extension degree {k} out of range")));
        }
        let cache = CACHE.get_or_init(Default::default);
        if let Some(f) = cache.lock().unwrap().get(&(p, k)) {
            return Ok(f.clone());
        }
        let mut coeffs = vec![0u64; k + 1];
        coeffs[k] = 1;
        loop {
            if is_irreducible(p, &coeffs) {
                break;
            }
            // odometer increment over c_0..c_{k-1}
            let mut i = 0;
            loop {
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
                if i == k {
                    unreachable!("irreducible polynomials exist in every degree");
                }
            }
        }
        let field = Arc::new(ExtField { p, modulus: coeffs });
        cache.lock().unwrap().insert((p, k), field.clone());
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of elements, if it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        self.p.checked_pow(self.degree() as u32)
    }

    /// Element with base-p digits of `index` as coefficients (c_0 least significant).
    pub fn element(&self, mut index: u64) -> Vec<u64> {
        let mut c = vec![0; self.degree()];
        for slot in c.iter_mut() {
            *slot = index % self.p;
            index /= self.p;
        }
        c
    }

    pub(crate) fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub(crate) fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    pub(crate) fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    pub(crate) fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let k = self.degree();
        let p = self.p as u128;
        let mut prod = vec![0u128; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        // reduce by the monic modulus from the top down
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = d - k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u128) % p;
            }
        }
        prod.truncate(k);
        prod.into_iter().map(|x| x as u64).collect()
    }

    pub(crate) fn pow(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        if a.iter().all(|&x| x == 0) {
            return None;
        }
        let q = (self.p as u128).pow(self.degree() as u32);
        Some(self.pow(a, q - 2))
    }

    pub(crate) fn one(&self) -> Vec<u64> {
        let mut c = vec![0; self.degree()];
        c[0] = 1;
        c
    }

    pub(crate) fn from_u64(&self, v: u64) -> Vec<u64> {
        let mut c = vec![0; self.degree()];
        c[0] = v % self.p;
        c
    }
}

/// The field tag carried by every scalar and polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
    Extension(Arc<ExtField>),
    /// Double-precision complex numbers; only the numeric backend uses these.
    Complex,
}

impl Field {
    pub fn prime(p: u64) -> Result<Self, PolyError> {
        check_prime(p)?;
        Ok(Field::Prime(p))
    }

    /// F_{p^k}; `k = 1` gives the prime field itself.
    pub fn finite(p: u64, k: usize) -> Result<Self, PolyError> {
        if k == 1 {
            Field::prime(p)
        } else {
            Ok(Field::Extension(ExtField::least(p, k)?))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational | Field::Complex => 0,
            Field::Prime(p) => *p,
            Field::Extension(e) => e.characteristic(),
        }
    }

    /// Degree over the prime field (1 for F_p, k for F_{p^k}, 0 otherwise).
    pub fn ext_degree(&self) -> usize {
        match self {
            Field::Prime(_) => 1,
            Field::Extension(e) => e.degree(),
            _ => 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_) | Field::Extension(_))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Field::Complex)
    }

    /// Number of elements of a finite field.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Prime(p) => Some(*p),
            Field::Extension(e) => e.order(),
            _ => None,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
            Field::Extension(e) => write!(f, "F_{}^{}", e.characteristic(), e.degree()),
            Field::Complex => write!(f, "C"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<(), PolyError> {
    if p >= MAX_PRIME || !is_prime(p) {
        return Err(PolyError::InvalidField(format!("{p} is not a supported prime")));
    }
    Ok(())
}

/// Trial factor search: no monic polynomial of degree 1..=k/2 divides `m`.
fn is_irreducible(p: u64, m: &[u64]) -> bool {
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    if m[0] == 0 {
        return false;
    }
    for d in 1..=k / 2 {
        let count = (p as u128).pow(d as u32);
        let mut cand = vec![0u64; d + 1];
        cand[d] = 1;
        for idx in 0..count {
            let mut x = idx;
            for slot in cand[..d].iter_mut() {
                *slot = (x % p as u128) as u64;
                x /= p as u128;
            }
            if poly_rem_is_zero(p, m, &cand) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(p: u64, num: &[u64], monic: &[u64]) -> bool {
    let mut r: Vec<u64> = num.to_vec();
    let d = monic.len() - 1;
    for top in (d..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (i, &m) in monic.iter().enumerate() {
            let idx = top - d + i;
            r[idx] = (r[idx] + (p - c) * m % p) % p;
        }
    }
    r[..d].iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_moduli() {
        // x^2 + 1 is reducible mod 5, x^2 + 2 is the first irreducible.
        assert_eq!(ExtField::least(5, 2).unwrap().modulus(), &[2, 0, 1]);
        // -1 is a non-residue mod 7, so x^2 + 1 already works.
        assert_eq!(ExtField::least(7, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(ExtField::least(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(ExtField::new(5, vec![1, 0, 1]).is_err());
        assert!(ExtField::new(4, vec![1, 1, 1]).is_err());
        assert!(ExtField::new(7, vec![1, 0, 1]).is_ok());
    }

    #[test]
    fn inverse_in_gf49() {
        let f = ExtField::least(7, 2).unwrap();
        for idx in 1..49 {
            let a = f.element(idx);
            let b = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &b), f.one());
        }
    }
}
