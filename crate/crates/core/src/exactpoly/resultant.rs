//! Sylvester resultants of multivariate polynomials.
//!
//! Exact fields use fraction-free Bareiss elimination. The complex field has
//! no exact division, so it falls back to a division-free Laplace expansion
//! memoized over column subsets.

use std::collections::HashMap;

use super::poly::MultiPoly;
use super::PolyError;

/// Sylvester matrix of `p` and `q` with respect to variable `var`, using
/// the actual degrees in that variable. Rows: deg q shifts of p, then deg p
/// shifts of q; coefficients in descending powers.
pub fn sylvester_matrix(p: &MultiPoly, q: &MultiPoly, var: usize) -> Vec<Vec<MultiPoly>> {
    let pc = p.coefficients_in(var);
    let qc = q.coefficients_in(var);
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    let size = m + n;
    let zero = MultiPoly::zero(p.vars().clone(), p.field().clone());
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![zero.clone(); size];
        for (j, c) in pc.iter().rev().enumerate() {
            row[shift + j] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![zero.clone(); size];
        for (j, c) in qc.iter().rev().enumerate() {
            row[shift + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Res_var(p, q). Both inputs must be nonzero and `var` must occur in one of them.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: &str) -> Result<MultiPoly, PolyError> {
    let i = p.var_index(var)?;
    if p.vars() != q.vars() {
        return Err(PolyError::VarMismatch(format!("{:?} vs {:?}", p.vars(), q.vars())));
    }
    if !p.involves(i) && !q.involves(i) {
        return Err(PolyError::UnknownVariable(format!("{var} occurs in neither polynomial")));
    }
    resultant_at(p, q, i)
}

/// Resultant with respect to variable index `i`, allowing degree zero inputs
/// (Res(c, q) = c^deg q).
pub fn resultant_at(p: &MultiPoly, q: &MultiPoly, i: usize) -> Result<MultiPoly, PolyError> {
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    if p.field() != q.field() {
        return Err(PolyError::FieldMismatch(p.field().to_string(), q.field().to_string()));
    }
    let (m, n) = (p.degree_in(i), q.degree_in(i));
    if m == 0 {
        return Ok(p.pow(n));
    }
    if n == 0 {
        return Ok(q.pow(m));
    }
    let mat = sylvester_matrix(p, q, i);
    if p.field().is_exact() {
        det_bareiss(mat)
    } else {
        Ok(det_by_minors(&mat))
    }
}

/// Fraction-free Gaussian elimination; every division is exact.
pub fn det_bareiss(mut m: Vec<Vec<MultiPoly>>) -> Result<MultiPoly, PolyError> {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square matrix");
    let vars = m[0][0].vars().clone();
    let field = m[0][0].field().clone();
    let mut negate = false;
    let mut prev = MultiPoly::one(vars.clone(), &field);
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            // prefer the sparsest available pivot
            let pivot = (k + 1..n)
                .filter(|&r| !m[r][k].is_zero())
                .min_by_key(|&r| m[r][k].terms().len());
            match pivot {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(MultiPoly::zero(vars, field)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = if num.is_zero() { num } else { num.div_exact(&prev)? };
            }
            m[i][k] = MultiPoly::zero(vars.clone(), field.clone());
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}

/// Division-free determinant by Laplace expansion along rows, memoized on
/// the set of remaining columns. Valid over any commutative ring; size is
/// limited to 20.
pub fn det_by_minors(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    assert!(n > 0 && n <= 20, "determinant size out of range");
    let mut memo: HashMap<u32, MultiPoly> = HashMap::new();
    fn rec(m: &[Vec<MultiPoly>], row: usize, cols: u32, memo: &mut HashMap<u32, MultiPoly>) -> MultiPoly {
        let n = m.len();
        if row == n {
            return MultiPoly::one(m[0][0].vars().clone(), m[0][0].field());
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = MultiPoly::zero(m[0][0].vars().clone(), m[0][0].field().clone());
        let mut sign_pos = true;
        for j in 0..n {
            if cols & (1 << j) == 0 {
                continue;
            }
            if !m[row][j].is_zero() {
                let minor = rec(m, row + 1, cols & !(1 << j), memo);
                let t = &m[row][j] * &minor;
                acc = if sign_pos { &acc + &t } else { &acc - &t };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    rec(m, 0, (1u32 << n) - 1, &mut memo)
}
