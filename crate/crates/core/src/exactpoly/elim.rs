//! Elimination by iterated resultants and the solvers built on it.
//!
//! Every resultant is taken with actual degrees, so the zero set of an
//! eliminated polynomial contains the projection of the common zero set.
//! An empty eliminated set is therefore a certificate of emptiness; a
//! nonempty one is only a candidate list and callers verify candidates.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::poly::MultiPoly;
use super::resultant::resultant_at;
use super::roots::{complex_roots, scan_roots, SCAN_CAP};
use super::scalar::{ratio_to_f64, Scalar};
use super::upoly::UniPoly;
use super::PolyError;

/// Caps on the size of one elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElimBudget {
    /// Largest Sylvester matrix dimension.
    pub max_sylvester: usize,
    /// Largest number of terms in any intermediate polynomial.
    pub max_terms: usize,
}

impl Default for ElimBudget {
    fn default() -> Self {
        ElimBudget { max_sylvester: 40, max_terms: 60_000 }
    }
}

/// Outcome of eliminating every variable but one.
#[derive(Clone, Debug, PartialEq)]
pub enum Eliminant {
    /// The system has no common zero over the algebraic closure.
    Empty,
    /// Every common zero has its kept coordinate among the roots of this
    /// (positive degree, monic) polynomial.
    Univariate(UniPoly),
    /// All eliminated polynomials vanished identically.
    Unconstrained,
}

/// Rationals: primitive integer polynomial with positive leading
/// coefficient. Finite fields: monic. Complex: unchanged.
pub fn normalize(p: &MultiPoly) -> MultiPoly {
    let Some(lead) = p.leading() else { return p.clone() };
    match p.field() {
        Field::Rational => {
            let mut den = BigInt::one();
            let mut num = BigInt::zero();
            for t in p.terms() {
                let r = t.coeff.as_rational().expect("rational");
                den = den.lcm(r.denom());
                num = num.gcd(r.numer());
            }
            let mut factor = BigRational::new(den, num);
            if lead.coeff.as_rational().expect("rational").is_negative() {
                factor = -factor;
            }
            p.scale(&Scalar::Rational(factor))
        }
        Field::Complex => p.clone(),
        _ => p.scale(&lead.coeff.inv().expect("nonzero leading coefficient")),
    }
}

fn check_size(p: &MultiPoly, budget: &ElimBudget) -> Result<(), PolyError> {
    if p.terms().len() > budget.max_terms {
        return Err(PolyError::Budget(format!(
            "intermediate polynomial with {} terms exceeds {}",
            p.terms().len(),
            budget.max_terms
        )));
    }
    Ok(())
}

fn random_combination(polys: &[MultiPoly], rng: &mut ChaCha8Rng) -> MultiPoly {
    let field = polys[0].field().clone();
    let mut acc = MultiPoly::zero(polys[0].vars().clone(), field.clone());
    for p in polys {
        let c = Scalar::from_i64(&field, rng.gen_range(1..=9));
        acc = &acc + &p.scale(&c);
    }
    acc
}

fn push_unique(list: &mut Vec<MultiPoly>, p: MultiPoly) {
    if !p.is_zero() && !list.contains(&p) {
        list.push(p);
    }
}

/// Eliminates every variable except `keep` from `system`.
pub fn eliminate_to(
    system: &[MultiPoly],
    keep: usize,
    budget: &ElimBudget,
    seed: u64,
) -> Result<Eliminant, PolyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut polys: Vec<MultiPoly> = Vec::new();
    for p in system {
        push_unique(&mut polys, normalize(p));
    }
    loop {
        if polys.iter().any(|p| p.is_constant()) {
            return Ok(Eliminant::Empty);
        }
        if polys.is_empty() {
            return Ok(Eliminant::Unconstrained);
        }
        let nvars = polys[0].nvars();
        let var = (0..nvars)
            .filter(|&v| v != keep && polys.iter().any(|p| p.involves(v)))
            .min_by_key(|&v| (polys.iter().map(|p| p.degree_in(v)).max().unwrap_or(0), v));
        let Some(v) = var else { break };
        let (with, without): (Vec<MultiPoly>, Vec<MultiPoly>) = polys.into_iter().partition(|p| p.involves(v));
        let mut next = without;
        let pairs: Vec<(MultiPoly, MultiPoly)> = match with.len() {
            1 => vec![],
            2 => vec![(with[0].clone(), with[1].clone())],
            _ => (0..3).map(|_| (random_combination(&with, &mut rng), random_combination(&with, &mut rng))).collect(),
        };
        for (a, b) in pairs {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let size = (a.degree_in(v) + b.degree_in(v)) as usize;
            if size > budget.max_sylvester {
                return Err(PolyError::Budget(format!(
                    "Sylvester matrix of size {size} exceeds {}",
                    budget.max_sylvester
                )));
            }
            let r = resultant_at(&a, &b, v)?;
            check_size(&r, budget)?;
            push_unique(&mut next, normalize(&r));
        }
        polys = next;
    }
    let mut g: Option<UniPoly> = None;
    for p in &polys {
        let u = UniPoly::new(p.field().clone(), p.to_dense(keep)?)?;
        g = Some(match g {
            None => u.monic(),
            Some(acc) => acc.gcd(&u),
        });
    }
    match g {
        Some(g) if g.degree().unwrap_or(0) > 0 => Ok(Eliminant::Univariate(g)),
        Some(_) => Ok(Eliminant::Empty),
        None => Ok(Eliminant::Unconstrained),
    }
}

/// Does the system have a common zero over the algebraic closure?
/// `Some(false)` is a certificate; `Some(true)` is exact for at most two
/// involved variables over fields of characteristic 0; `None` means the
/// elimination could not decide.
pub fn has_common_zero(system: &[MultiPoly], budget: &ElimBudget, seed: u64) -> Result<Option<bool>, PolyError> {
    let Some(first) = system.first() else { return Ok(Some(true)) };
    let involved: Vec<usize> = (0..first.nvars()).filter(|&v| system.iter().any(|p| p.involves(v))).collect();
    match involved.len() {
        0 => Ok(Some(system.iter().all(|p| p.is_zero()))),
        1 => match eliminate_to(system, involved[0], budget, seed)? {
            Eliminant::Empty => Ok(Some(false)),
            _ => Ok(Some(true)),
        },
        2 if first.field().characteristic() == 0 && first.field().is_exact() => {
            Ok(Some(super::d5::common_zero_2(system, involved[0], involved[1], budget, seed)?.is_some()))
        }
        _ => match eliminate_to(system, *involved.last().expect("nonempty"), budget, seed)? {
            Eliminant::Empty => Ok(Some(false)),
            _ => Ok(None),
        },
    }
}

/// Solutions of a zero-dimensional system over a finite field, found in
/// extensions of it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExactSolutions {
    /// Full coordinate vectors over one common extension field.
    pub points: Vec<Vec<Scalar>>,
    /// Set when some coordinate stayed unconstrained.
    pub positive_dimensional: bool,
}

/// Absolute extension degrees tried when a polynomial over F_{p^k} does not
/// split: k times these factors.
const ESCALATION: [usize; 7] = [1, 2, 3, 4, 6, 8, 12];

fn extension_candidates(field: &Field) -> Vec<Field> {
    let p = field.characteristic();
    let k = field.ext_degree();
    ESCALATION
        .iter()
        .map(|m| k * m)
        .filter(|&big| big <= super::field::MAX_EXT_DEGREE)
        .filter(|&big| p.checked_pow(big as u32).is_some_and(|q| q <= SCAN_CAP))
        .filter_map(|big| Field::finite(p, big).ok())
        .collect()
}

/// Distinct roots of `g` over the smallest extension of its field (from the
/// escalation list) in which it splits completely.
pub fn split_roots(g: &UniPoly) -> Result<Vec<Scalar>, PolyError> {
    let Some(d) = g.degree() else { return Err(PolyError::ZeroInput) };
    if d == 0 {
        return Ok(vec![]);
    }
    for field in extension_candidates(g.field()) {
        let roots = scan_roots(g, &field)?;
        if roots.iter().map(|r| r.1).sum::<usize>() == d {
            return Ok(roots.into_iter().map(|r| r.0).collect());
        }
    }
    Err(PolyError::Budget(format!("degree {d} polynomial over {} does not split within the scan cap", g.field())))
}

/// Smallest escalation field containing every field in `fields`.
pub fn common_field(fields: &[Field]) -> Result<Option<Field>, PolyError> {
    let Some(first) = fields.first() else { return Ok(None) };
    let p = first.characteristic();
    let need = fields.iter().map(|f| f.ext_degree()).fold(1, |a, b| a.lcm(&b));
    let base = fields.iter().map(|f| f.ext_degree()).min().unwrap_or(1);
    for m in ESCALATION {
        let k = base * m;
        if k % need == 0 {
            if fields.iter().all(|f| f.ext_degree() == k) {
                return Ok(Some(fields.iter().find(|f| f.ext_degree() == k).expect("present").clone()));
            }
            return Field::finite(p, k).map(Some);
        }
    }
    Err(PolyError::Budget(format!("no common extension of degree {need} over F_{p}")))
}

/// All solutions over the algebraic closure of a finite-field system, by
/// elimination to the last unsolved variable and back-substitution.
pub fn solve_exact(system: &[MultiPoly], budget: &ElimBudget, seed: u64) -> Result<ExactSolutions, PolyError> {
    let Some(first) = system.first() else {
        return Ok(ExactSolutions { points: vec![vec![]], positive_dimensional: false });
    };
    if !first.field().is_finite() {
        return Err(PolyError::FieldMismatch(first.field().to_string(), "a finite field".into()));
    }
    let n = first.nvars();
    let mut out = ExactSolutions::default();
    let mut partial: Vec<Vec<Option<Scalar>>> = Vec::new();
    solve_rec(system, &mut vec![None; n], budget, seed, &mut partial, &mut out.positive_dimensional)?;
    let fields: Vec<Field> = partial.iter().flat_map(|p| p.iter().flatten().map(|s| s.field())).collect();
    let common = common_field(&fields)?.unwrap_or_else(|| first.field().clone());
    for p in partial {
        let pt = p
            .into_iter()
            .map(|s| s.expect("solved coordinate").coerce_into(&common))
            .collect::<Result<Vec<_>, _>>()?;
        out.points.push(pt);
    }
    Ok(out)
}

fn solve_rec(
    system: &[MultiPoly],
    assignment: &mut Vec<Option<Scalar>>,
    budget: &ElimBudget,
    seed: u64,
    out: &mut Vec<Vec<Option<Scalar>>>,
    positive_dim: &mut bool,
) -> Result<(), PolyError> {
    let free: Vec<usize> = (0..assignment.len()).filter(|&i| assignment[i].is_none()).collect();
    let live: Vec<MultiPoly> = system.iter().filter(|p| !p.is_zero()).cloned().collect();
    if live.iter().any(|p| p.is_constant()) {
        return Ok(());
    }
    let Some(&var) = free.last() else {
        out.push(assignment.clone());
        return Ok(());
    };
    if live.is_empty() {
        *positive_dim = true;
        return Ok(());
    }
    let g = match eliminate_to(&live, var, budget, seed)? {
        Eliminant::Empty => return Ok(()),
        Eliminant::Unconstrained => {
            *positive_dim = true;
            return Ok(());
        }
        Eliminant::Univariate(g) => g,
    };
    for r in split_roots(&g)? {
        let mut slots = vec![None; assignment.len()];
        slots[var] = Some(r.clone());
        let sub = live.iter().map(|p| p.evaluate_partial(&slots)).collect::<Result<Vec<_>, _>>()?;
        let prev: Vec<Option<Scalar>> = assignment.clone();
        for (i, s) in assignment.iter_mut().enumerate() {
            if let Some(v) = s {
                *v = v.coerce_into(&r.field())?;
            } else if i == var {
                *s = Some(r.clone());
            }
        }
        solve_rec(&sub, assignment, budget, seed, out, positive_dim)?;
        *assignment = prev;
    }
    Ok(())
}

/// Polynomial compiled for fast complex evaluation.
#[derive(Clone, Debug)]
pub struct NumericPoly {
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl NumericPoly {
    pub fn new(p: &MultiPoly) -> Self {
        let terms = p
            .terms()
            .iter()
            .map(|t| {
                let c = match &t.coeff {
                    Scalar::Rational(r) => Complex64::new(ratio_to_f64(r), 0.0),
                    Scalar::Complex(z) => *z,
                    other => panic!("numeric evaluation of {} coefficient", other.field()),
                };
                (t.exp.clone(), c)
            })
            .collect();
        NumericPoly { terms }
    }

    /// Value and the absolute-value scale sum |c||x^e|.
    pub fn eval(&self, x: &[Complex64]) -> (Complex64, f64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (e, c) in &self.terms {
            let mut m = *c;
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    m *= xi.powu(k);
                }
            }
            v += m;
            scale += m.norm();
        }
        (v, scale)
    }

    pub fn derivative(&self, i: usize) -> NumericPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (e2, c * e[i] as f64)
            })
            .collect();
        NumericPoly { terms }
    }
}

/// Largest relative residual of the system at `x`.
pub fn relative_residual(system: &[NumericPoly], x: &[Complex64]) -> f64 {
    system
        .iter()
        .map(|p| {
            let (v, s) = p.eval(x);
            if s == 0.0 {
                0.0
            } else {
                v.norm() / s
            }
        })
        .fold(0.0, f64::max)
}

/// Solves the small dense complex system `a x = b` by Gaussian elimination
/// with partial pivoting; `None` if singular.
fn solve_linear(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))?;
        if a[piv][k].norm() < 1e-300 {
            return None;
        }
        a.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let t = a[k][j];
                a[i][j] -= f * t;
            }
            let t = b[k];
            b[i] -= f * t;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    Some(x)
}

/// Gauss-Newton refinement on an (over)determined system; keeps a step
/// only when it lowers the residual.
pub fn polish(system: &[NumericPoly], x: &mut [Complex64], iterations: usize) {
    let n = x.len();
    if n == 0 {
        return;
    }
    let jac: Vec<Vec<NumericPoly>> = system.iter().map(|p| (0..n).map(|i| p.derivative(i)).collect()).collect();
    let mut best = relative_residual(system, x);
    for _ in 0..iterations {
        if best == 0.0 {
            return;
        }
        let f: Vec<Complex64> = system.iter().map(|p| p.eval(x).0).collect();
        let j: Vec<Vec<Complex64>> = jac.iter().map(|row| row.iter().map(|d| d.eval(x).0).collect()).collect();
        let mut a = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        for (row, fi) in j.iter().zip(&f) {
            for p in 0..n {
                for q in 0..n {
                    a[p][q] += row[p].conj() * row[q];
                }
                b[p] -= row[p].conj() * fi;
            }
        }
        let Some(step) = solve_linear(a, b) else { return };
        let cand: Vec<Complex64> = x.iter().zip(&step).map(|(a, d)| a + d).collect();
        let r = relative_residual(system, &cand);
        if r < best {
            x.copy_from_slice(&cand);
            best = r;
        } else {
            return;
        }
    }
}

/// Numeric solutions of a rational system.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NumericSolutions {
    pub points: Vec<Vec<Complex64>>,
    pub positive_dimensional: bool,
}

/// Relative residual below which a polished candidate is accepted.
pub const ACCEPT_RESIDUAL: f64 = 1e-9;
/// Relative residual below which a raw candidate is worth polishing.
const CANDIDATE_RESIDUAL: f64 = 1e-5;
/// Candidate tuples tried before giving up.
const MAX_CANDIDATES: usize = 200_000;

/// Complex solutions of a zero-dimensional system over the rationals.
///
/// Each coordinate is eliminated exactly to a univariate polynomial over Q;
/// candidate tuples of their numeric roots are screened by residual,
/// refined by Gauss-Newton and merged when closer than the cluster
/// separation.
pub fn solve_numeric(system: &[MultiPoly], budget: &ElimBudget, seed: u64) -> Result<NumericSolutions, PolyError> {
    let Some(first) = system.first() else {
        return Ok(NumericSolutions { points: vec![vec![]], positive_dimensional: false });
    };
    if first.field() != &Field::Rational {
        return Err(PolyError::FieldMismatch(first.field().to_string(), "Q".into()));
    }
    let n = first.nvars();
    let live: Vec<MultiPoly> = system.iter().filter(|p| !p.is_zero()).cloned().collect();
    if live.iter().any(|p| p.is_constant()) {
        return Ok(NumericSolutions::default());
    }
    let numeric: Vec<NumericPoly> = live.iter().map(NumericPoly::new).collect();
    let mut coords: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut positive_dimensional = false;
    for v in 0..n {
        if !live.iter().any(|p| p.involves(v)) {
            positive_dimensional = true;
            coords.push(vec![]);
            continue;
        }
        match eliminate_to(&live, v, budget, seed)? {
            Eliminant::Empty => return Ok(NumericSolutions::default()),
            Eliminant::Unconstrained => {
                positive_dimensional = true;
                coords.push(vec![]);
            }
            Eliminant::Univariate(g) => {
                coords.push(complex_roots(&g)?.into_iter().map(|(z, _)| z.to_complex().expect("complex")).collect())
            }
        }
    }
    if positive_dimensional {
        return Ok(NumericSolutions { points: vec![], positive_dimensional: true });
    }
    let total: usize = coords.iter().map(|c| c.len()).product();
    if total > MAX_CANDIDATES {
        return Err(PolyError::Budget(format!("{total} candidate tuples exceed {MAX_CANDIDATES}")));
    }
    let mut points: Vec<Vec<Complex64>> = Vec::new();
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        let mut x: Vec<Complex64> = idx.iter().enumerate().map(|(v, &i)| coords[v][i]).collect();
        if relative_residual(&numeric, &x) < CANDIDATE_RESIDUAL {
            polish(&numeric, &mut x, 8);
            if relative_residual(&numeric, &x) < ACCEPT_RESIDUAL && !points.iter().any(|p| close(p, &x)) {
                points.push(x);
            }
        }
        for v in (0..n).rev() {
            idx[v] += 1;
            if idx[v] < coords[v].len() {
                break;
            }
            idx[v] = 0;
        }
    }
    points.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(NumericSolutions { points, positive_dimensional: false })
}

fn close(a: &[Complex64], b: &[Complex64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= super::roots::CLUSTER_SEPARATION * x.norm().max(y.norm()).max(1.0))
}

#[cfg(test)]
mod tests {
    use super::super::poly::vars;
    use super::*;

    fn sys(src: &[&str], names: &[&str]) -> Vec<MultiPoly> {
        src.iter().map(|s| MultiPoly::parse(s, vars(names)).unwrap()).collect()
    }

    #[test]
    fn coprime_pair_is_empty() {
        let s = sys(&["t^2+1", "t"], &["t"]);
        assert_eq!(eliminate_to(&s, 0, &ElimBudget::default(), 1).unwrap(), Eliminant::Empty);
    }

    #[test]
    fn common_root_survives() {
        let s = sys(&["t^2", "t"], &["t"]);
        match eliminate_to(&s, 0, &ElimBudget::default(), 1).unwrap() {
            Eliminant::Univariate(g) => assert_eq!(g, UniPoly::from_i64(&Field::Rational, &[0, 1])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn two_variable_elimination() {
        // circle and line meet at (3/5, 4/5) and (-3/5, -4/5)
        let s = sys(&["x^2+y^2-1", "4*x-3*y"], &["x", "y"]);
        match eliminate_to(&s, 1, &ElimBudget::default(), 1).unwrap() {
            Eliminant::Univariate(g) => assert_eq!(g.degree(), Some(2)),
            other => panic!("{other:?}"),
        }
        let sol = solve_numeric(&s, &ElimBudget::default(), 1).unwrap();
        assert_eq!(sol.points.len(), 2);
        assert!((sol.points[1][0] - Complex64::new(0.6, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn exact_solutions_over_extension() {
        let f = Field::Prime(7);
        let s: Vec<MultiPoly> =
            sys(&["x^2+1", "y-x"], &["x", "y"]).iter().map(|p| p.to_field(&f).unwrap()).collect();
        let sol = solve_exact(&s, &ElimBudget::default(), 1).unwrap();
        assert_eq!(sol.points.len(), 2);
        assert_eq!(sol.points[0][0].field(), Field::finite(7, 2).unwrap());
        for p in &sol.points {
            for q in &s {
                assert!(q.evaluate(p).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn free_variable_flags_positive_dimension() {
        let f = Field::Prime(11);
        let s: Vec<MultiPoly> = sys(&["x-3"], &["x", "y"]).iter().map(|p| p.to_field(&f).unwrap()).collect();
        assert!(solve_exact(&s, &ElimBudget::default(), 1).unwrap().positive_dimensional);
        assert!(solve_numeric(&sys(&["x-3"], &["x", "y"]), &ElimBudget::default(), 1).unwrap().positive_dimensional);
    }

    #[test]
    fn decision_in_one_and_three_variables() {
        let b = ElimBudget::default();
        assert_eq!(has_common_zero(&sys(&["t^2+1", "t"], &["t"]), &b, 3).unwrap(), Some(false));
        assert_eq!(has_common_zero(&sys(&["t^2", "t"], &["t"]), &b, 3).unwrap(), Some(true));
        let three = sys(&["x", "y", "z", "x+y+z+1"], &["x", "y", "z"]);
        assert_eq!(has_common_zero(&three, &b, 3).unwrap(), Some(false));
    }
}
