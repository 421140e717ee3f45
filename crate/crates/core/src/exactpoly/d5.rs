//! Exact common-zero decision for two-variable systems in characteristic 0.
//!
//! After eliminating x, every common zero has its y-coordinate among the
//! roots of a squarefree m(y). The gcd in x of the system is then computed
//! over Q[y]/(m) by dynamic evaluation: whenever a leading coefficient is a
//! zero divisor, m is split along its gcd with that coefficient and both
//! branches continue. A branch ending in a gcd of positive x-degree carries
//! actual common zeros.

use std::fmt;

use super::elim::{eliminate_to, ElimBudget, Eliminant};
use super::poly::MultiPoly;
use super::upoly::UniPoly;
use super::PolyError;

/// A nonempty piece of the common zero set: all (x, y) with m(y) = 0 and
/// h(x, y) = 0, where `h` is given by its coefficients in x (ascending,
/// each a polynomial in y reduced modulo m). `h = None` means x is free.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness2 {
    pub x_var: String,
    pub y_var: String,
    pub m: UniPoly,
    pub h: Option<Vec<UniPoly>>,
}

fn upoly_string(p: &UniPoly, var: &str) -> String {
    let mut parts = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        parts.push(match i {
            0 => c.to_string(),
            1 => format!("({c})*{var}"),
            _ => format!("({c})*{var}^{i}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for Witness2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", upoly_string(&self.m, &self.y_var))?;
        match &self.h {
            None => write!(f, ", {} arbitrary", self.x_var),
            Some(h) => {
                let parts: Vec<String> = h
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| format!("[{}]*{}^{}", upoly_string(c, &self.y_var), self.x_var, i))
                    .collect();
                write!(f, ", {} = 0", parts.join(" + "))
            }
        }
    }
}

impl Witness2 {
    /// The exact rational point when both m and h are linear.
    pub fn rational_point(&self) -> Option<(super::Scalar, super::Scalar)> {
        if self.m.degree() != Some(1) {
            return None;
        }
        let y = &-&self.m.coeffs()[0] * &self.m.coeffs()[1].inv()?;
        let h = self.h.as_ref()?;
        if h.len() != 2 {
            return None;
        }
        let c0 = h[0].eval(&y).ok()?;
        let c1 = h[1].eval(&y).ok()?;
        Some((&-&c0 * &c1.inv()?, y))
    }
}

/// Extended Euclid: `(g, s)` with `s * a ≡ g (mod m)` and `g = gcd(a, m)` monic.
fn ext_gcd(a: &UniPoly, m: &UniPoly) -> (UniPoly, UniPoly) {
    let f = a.field().clone();
    let (mut r0, mut r1) = (m.clone(), a.clone());
    let (mut s0, mut s1) = (UniPoly::zero(f.clone()), UniPoly::from_i64(&f, &[1]));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
        let s = s0.sub(&q.mul(&s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let lc = r0.leading().and_then(|c| c.inv()).expect("nonzero gcd");
    (r0.scale(&lc), s0.scale(&lc))
}

fn reduce(a: &UniPoly, m: &UniPoly) -> UniPoly {
    a.div_rem(m).expect("nonzero modulus").1
}

type XPoly = Vec<UniPoly>;

fn trim(p: &mut XPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

enum Lead {
    Invertible(UniPoly),
    Split(UniPoly, UniPoly),
}

fn lead_inverse(p: &XPoly, m: &UniPoly) -> Lead {
    let lc = p.last().expect("nonzero");
    let (g, s) = ext_gcd(lc, m);
    if g.degree() == Some(0) {
        Lead::Invertible(reduce(&s, m))
    } else {
        let (q, _) = m.div_rem(&g).expect("nonzero gcd");
        Lead::Split(g, q)
    }
}

fn rem_x(b: &XPoly, a: &XPoly, inv_lc: &UniPoly, m: &UniPoly) -> XPoly {
    let mut b = b.clone();
    let da = a.len() - 1;
    while b.len() > da && !b.is_empty() {
        let shift = b.len() - 1 - da;
        let c = reduce(&b.last().expect("nonzero").mul(inv_lc), m);
        for (i, ai) in a.iter().enumerate() {
            b[shift + i] = reduce(&b[shift + i].sub(&c.mul(ai)), m);
        }
        trim(&mut b);
    }
    b
}

fn split_gcd(polys: Vec<XPoly>, m: UniPoly, out: &mut Vec<(UniPoly, Option<XPoly>)>) {
    let mut polys: Vec<XPoly> = polys
        .into_iter()
        .map(|p| {
            let mut q: XPoly = p.iter().map(|c| reduce(c, &m)).collect();
            trim(&mut q);
            q
        })
        .filter(|p| !p.is_empty())
        .collect();
    loop {
        if polys.is_empty() {
            out.push((m, None));
            return;
        }
        let mut inverses = Vec::with_capacity(polys.len());
        for p in &polys {
            match lead_inverse(p, &m) {
                Lead::Invertible(inv) => inverses.push(inv),
                Lead::Split(m1, m2) => {
                    split_gcd(polys.clone(), m1, out);
                    split_gcd(polys, m2, out);
                    return;
                }
            }
        }
        let (ia, a) = polys.iter().enumerate().min_by_key(|(_, p)| p.len()).map(|(i, p)| (i, p.clone())).expect("nonempty");
        if polys.len() == 1 || a.len() == 1 {
            let inv = &inverses[ia];
            let monic: XPoly = a.iter().map(|c| reduce(&c.mul(inv), &m)).collect();
            out.push((m, Some(monic)));
            return;
        }
        let mut next = vec![a.clone()];
        for (i, b) in polys.iter().enumerate() {
            if i != ia {
                let r = rem_x(b, &a, &inverses[ia], &m);
                if !r.is_empty() {
                    next.push(r);
                }
            }
        }
        polys = next;
    }
}

fn to_xpoly(p: &MultiPoly, x: usize, y: usize) -> Result<XPoly, PolyError> {
    p.coefficients_in(x)
        .iter()
        .map(|c| UniPoly::new(p.field().clone(), c.to_dense(y)?))
        .collect()
}

/// Decides whether a system in the variables `x` and `y` (no others
/// involved) has a common zero over the algebraic closure of a field of
/// characteristic 0, returning a witness component if it does.
pub fn common_zero_2(
    system: &[MultiPoly],
    x: usize,
    y: usize,
    budget: &ElimBudget,
    seed: u64,
) -> Result<Option<Witness2>, PolyError> {
    let Some(first) = system.first() else { return Ok(None) };
    let names = first.vars().clone();
    let (x, y, m) = match eliminate_to(system, y, budget, seed)? {
        Eliminant::Empty => return Ok(None),
        Eliminant::Univariate(g) => (x, y, g),
        Eliminant::Unconstrained => match eliminate_to(system, x, budget, seed)? {
            Eliminant::Empty => return Ok(None),
            Eliminant::Univariate(g) => (y, x, g),
            Eliminant::Unconstrained => {
                // every pairwise resultant vanished both ways: a common curve
                let zero = UniPoly::zero(first.field().clone());
                return Ok(Some(Witness2 { x_var: names[x].clone(), y_var: names[y].clone(), m: zero, h: None }));
            }
        },
    };
    let sq = m.div_rem(&m.gcd(&m.derivative()))?.0.monic();
    let polys = system.iter().filter(|p| !p.is_zero()).map(|p| to_xpoly(p, x, y)).collect::<Result<Vec<_>, _>>()?;
    let mut pieces = Vec::new();
    split_gcd(polys, sq, &mut pieces);
    Ok(pieces
        .into_iter()
        .find(|(_, h)| h.as_ref().is_none_or(|h| h.len() > 1))
        .map(|(m, h)| Witness2 { x_var: names[x].clone(), y_var: names[y].clone(), m, h }))
}

#[cfg(test)]
mod tests {
    use super::super::field::Field;
    use super::super::poly::vars;
    use super::super::scalar::Scalar;
    use super::*;

    fn sys(src: &[&str]) -> Vec<MultiPoly> {
        src.iter().map(|s| MultiPoly::parse(s, vars(&["x", "y"])).unwrap()).collect()
    }

    #[test]
    fn rational_common_zero() {
        let w = common_zero_2(&sys(&["x^2 - y", "x - 1", "y - 1"]), 0, 1, &ElimBudget::default(), 1)
            .unwrap()
            .unwrap();
        let q = |n| Scalar::from_i64(&Field::Rational, n);
        assert_eq!(w.rational_point(), Some((q(1), q(1))));
    }

    #[test]
    fn spurious_eliminant_roots_rejected() {
        // the two lines meet only at (0, -1), which is off the hyperbola
        let s = sys(&["x - y - 1", "x + y + 1", "x^2 - y^2 - 1"]);
        assert!(common_zero_2(&s, 0, 1, &ElimBudget::default(), 1).unwrap().is_none());
    }

    #[test]
    fn conjugate_points_found_exactly() {
        // x^2 + 1 = 0 and y = x: two non-rational common zeros
        let w = common_zero_2(&sys(&["x^2 + 1", "y - x"]), 0, 1, &ElimBudget::default(), 1).unwrap().unwrap();
        assert_eq!(w.m.degree(), Some(2));
        assert!(w.rational_point().is_none());
    }

    #[test]
    fn zero_divisor_split() {
        // m(y) = y(y-1); at y = 0 the system x*y = 0, x - y = 0 has x = 0
        let w = common_zero_2(&sys(&["y^2 - y", "x*y", "x - y"]), 0, 1, &ElimBudget::default(), 1).unwrap();
        let w = w.unwrap();
        let q = |n| Scalar::from_i64(&Field::Rational, n);
        assert_eq!(w.rational_point(), Some((q(0), q(0))));
    }
}
