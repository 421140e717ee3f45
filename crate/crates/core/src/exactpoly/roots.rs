//! Univariate root finding: exhaustive scan over finite fields and
//! Durand–Kerner simultaneous iteration over the complex numbers.

use num_complex::Complex64;

use super::field::Field;
use super::poly::MultiPoly;
use super::scalar::Scalar;
use super::upoly::UniPoly;
use super::PolyError;

/// Relative residual bound accepted for a numeric root.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Numeric roots closer than this (relative to max(1, |z|)) are merged.
pub const CLUSTER_SEPARATION: f64 = 1e-6;
/// Largest finite field scanned for roots.
pub const SCAN_CAP: u64 = 1 << 21;

const MAX_ITER: usize = 2000;

#[derive(Clone, Debug, PartialEq)]
pub enum RootBackend {
    /// Scan every element of the given finite field (default: the polynomial's own field).
    FiniteFieldExhaustive(Option<Field>),
    ComplexNumeric,
}

/// Roots of a univariate polynomial with multiplicities.
pub fn univariate_roots(p: &MultiPoly, backend: RootBackend) -> Result<Vec<(Scalar, usize)>, PolyError> {
    let var = (0..p.nvars()).find(|&i| p.involves(i)).unwrap_or(0);
    if p.nvars() == 0 {
        return Err(PolyError::NotUnivariate);
    }
    let dense = UniPoly::new(p.field().clone(), p.to_dense(var)?)?;
    match backend {
        RootBackend::FiniteFieldExhaustive(field) => {
            let field = field.unwrap_or_else(|| p.field().clone());
            scan_roots(&dense, &field)
        }
        RootBackend::ComplexNumeric => complex_roots(&dense),
    }
}

/// All roots lying in the finite field `field`, found by scanning it.
pub fn scan_roots(p: &UniPoly, field: &Field) -> Result<Vec<(Scalar, usize)>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let order = field
        .order()
        .ok_or_else(|| PolyError::FieldMismatch(field.to_string(), "a finite field".into()))?;
    if order > SCAN_CAP {
        return Err(PolyError::Budget(format!("field of order {order} exceeds the scan cap {SCAN_CAP}")));
    }
    let p = p.coerce_into(field)?;
    let mut out = Vec::new();
    for idx in 0..order {
        let x = Scalar::finite_element(field, idx).expect("index in range");
        if p.eval(&x)?.is_zero() {
            out.push((x.clone(), multiplicity(&p, &x)?));
        }
    }
    Ok(out)
}

fn multiplicity(p: &UniPoly, r: &Scalar) -> Result<usize, PolyError> {
    let lin = UniPoly::linear_root(r);
    let mut cur = p.clone();
    let mut m = 0;
    loop {
        let (q, rem) = cur.div_rem(&lin)?;
        if !rem.is_zero() || cur.is_zero() {
            return Ok(m);
        }
        m += 1;
        cur = q;
    }
}

/// Complex roots of a polynomial with rational or complex coefficients.
pub fn complex_roots(p: &UniPoly) -> Result<Vec<(Scalar, usize)>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let coeffs = numeric_coefficients(p)?;
    let roots = durand_kerner(&coeffs)?;
    Ok(cluster(&roots).into_iter().map(|(z, m)| (Scalar::Complex(z), m)).collect())
}

/// Coefficients as complex doubles, scaled so the largest has modulus 1.
/// Rational inputs are scaled exactly first to survive huge magnitudes.
fn numeric_coefficients(p: &UniPoly) -> Result<Vec<Complex64>, PolyError> {
    match p.field() {
        Field::Rational => {
            use num_rational::BigRational;
            use num_traits::Signed;
            let rats: Vec<&BigRational> = p.coeffs().iter().map(|c| c.as_rational().expect("rational")).collect();
            let max = rats.iter().map(|r| r.abs()).max().expect("nonzero polynomial");
            Ok(rats
                .iter()
                .map(|r| Complex64::new(super::scalar::ratio_to_f64(&(*r / &max)), 0.0))
                .collect())
        }
        Field::Complex => {
            let c: Vec<Complex64> = p.coeffs().iter().map(|s| s.to_complex().expect("complex")).collect();
            let max = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
            Ok(c.iter().map(|z| z / max).collect())
        }
        other => Err(PolyError::FieldMismatch(other.to_string(), "Q or C".into())),
    }
}

/// Durand–Kerner iteration on ascending coefficients (leading nonzero).
/// Exact zero roots are split off first. Fails with `NonConvergence` when a
/// root's relative residual stays above [`RESIDUAL_TOL`].
pub fn durand_kerner(coeffs: &[Complex64]) -> Result<Vec<Complex64>, PolyError> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    let mut roots = Vec::new();
    let lead_zeros = c.iter().take_while(|z| z.norm() == 0.0).count();
    roots.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), lead_zeros));
    let c = c[lead_zeros..].to_vec();
    let d = c.len().saturating_sub(1);
    if d == 0 {
        return Ok(roots);
    }
    let lead = c[d];
    let monic: Vec<Complex64> = c.iter().map(|z| z / lead).collect();
    if d == 1 {
        roots.push(-monic[0]);
        return Ok(roots);
    }
    // initial guesses on a circle of radius ~ |a_0|^(1/d), offset from the axes
    let radius = monic[0].norm().powf(1.0 / d as f64).clamp(1e-3, 1e6);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a);
    for _ in 0..MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 1e-12);
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    // Newton polish for simple roots
    let deriv: Vec<Complex64> = monic.iter().enumerate().skip(1).map(|(i, a)| a * i as f64).collect();
    let eval_d = |x: Complex64| deriv.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a);
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let f = eval(*zi);
            let fd = eval_d(*zi);
            if fd.norm() == 0.0 {
                break;
            }
            let cand = *zi - f / fd;
            if eval(cand).norm() < f.norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }
    for zi in &z {
        let scale: f64 = monic.iter().enumerate().map(|(k, a)| a.norm() * zi.norm().powi(k as i32)).sum();
        if eval(*zi).norm() > RESIDUAL_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(PolyError::NonConvergence(format!(
                "residual {:.3e} at {zi} exceeds tolerance",
                eval(*zi).norm() / scale
            )));
        }
    }
    roots.extend(z);
    Ok(roots)
}

/// Merges numeric roots closer than [`CLUSTER_SEPARATION`]; returns cluster
/// means with multiplicities, in a deterministic order.
pub fn cluster(roots: &[Complex64]) -> Vec<(Complex64, usize)> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for &r in roots {
        match groups.iter_mut().find(|g| {
            g.iter().any(|&s| (s - r).norm() <= CLUSTER_SEPARATION * s.norm().max(r.norm()).max(1.0))
        }) {
            Some(g) => g.push(r),
            None => groups.push(vec![r]),
        }
    }
    let mut out: Vec<(Complex64, usize)> = groups
        .into_iter()
        .map(|g| {
            let n = g.len();
            (g.iter().sum::<Complex64>() / n as f64, n)
        })
        .collect();
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}

#[cfg(test)]
mod tests {
    use super::super::poly::vars;
    use super::*;

    fn q(src: &str) -> MultiPoly {
        MultiPoly::parse(src, vars(&["t"])).unwrap()
    }

    #[test]
    fn roots_over_f5() {
        let p = q("t^2+1").to_field(&Field::Prime(5)).unwrap();
        let r = univariate_roots(&p, RootBackend::FiniteFieldExhaustive(None)).unwrap();
        let vals: Vec<String> = r.iter().map(|(s, _)| s.to_string()).collect();
        assert_eq!(vals, vec!["2", "3"]);
    }

    #[test]
    fn no_roots_over_f7_but_two_over_f49() {
        let p = q("t^2+1").to_field(&Field::Prime(7)).unwrap();
        assert!(univariate_roots(&p, RootBackend::FiniteFieldExhaustive(None)).unwrap().is_empty());
        let f49 = Field::finite(7, 2).unwrap();
        let r = univariate_roots(&p, RootBackend::FiniteFieldExhaustive(Some(f49))).unwrap();
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn complex_roots_of_t2_plus_1() {
        let r = univariate_roots(&q("t^2+1"), RootBackend::ComplexNumeric).unwrap();
        assert_eq!(r.len(), 2);
        let z: Vec<Complex64> = r.iter().map(|(s, _)| s.to_complex().unwrap()).collect();
        assert!((z[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12 || (z[0] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!((z[0] + z[1]).norm() < 1e-12);
    }

    #[test]
    fn multiplicities_merge() {
        let r = univariate_roots(&q("t^3 - 3*t + 2"), RootBackend::ComplexNumeric).unwrap();
        // (t-1)^2 (t+2)
        assert_eq!(r.len(), 2);
        assert_eq!(r.iter().map(|x| x.1).sum::<usize>(), 3);
        let f = Field::Prime(11);
        let rf = univariate_roots(&q("t^3 - 3*t + 2").to_field(&f).unwrap(), RootBackend::FiniteFieldExhaustive(None))
            .unwrap();
        assert_eq!(rf, vec![(Scalar::from_i64(&f, 1), 2), (Scalar::from_i64(&f, 9), 1)]);
    }

    #[test]
    fn zero_polynomial_rejected() {
        let z = MultiPoly::zero(vars(&["t"]), Field::Rational);
        assert!(matches!(univariate_roots(&z, RootBackend::ComplexNumeric), Err(PolyError::ZeroInput)));
    }

    #[test]
    fn degree_eight_with_large_coefficients() {
        // prod (t - k) for k = 1..8, scaled by 10^40
        let mut p = q("1");
        for k in 1..=8 {
            p = &p * &q(&format!("t - {k}"));
        }
        let big = MultiPoly::parse("10000000000000000000000000000000000000000", vars(&["t"])).unwrap();
        let r = univariate_roots(&(&p * &big), RootBackend::ComplexNumeric).unwrap();
        assert_eq!(r.len(), 8);
        for (k, (z, m)) in r.iter().enumerate() {
            assert_eq!(*m, 1);
            assert!((z.to_complex().unwrap() - Complex64::new(k as f64 + 1.0, 0.0)).norm() < 1e-7);
        }
    }
}
