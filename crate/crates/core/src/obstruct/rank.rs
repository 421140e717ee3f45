//! Exact matrix rank over Q and over F_p.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub fn rank_over_q(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, piv);
        let pivot = m[rank][c].clone();
        for r in rank + 1..m.len() {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pivot;
            for k in c..cols {
                let d = &f * &m[rank][k];
                m[r][k] -= d;
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank_mod_p(rows: &[Vec<i64>], p: u64) -> usize {
    let p = p as i128;
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| (v as i128).rem_euclid(p)).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let inv = |a: i128| {
        let (mut b, mut e, mut acc) = (a, p - 2, 1i128);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let pinv = inv(m[rank][c]);
        for r in rank + 1..m.len() {
            let f = m[r][c] * pinv % p;
            if f == 0 {
                continue;
            }
            for k in c..cols {
                m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(p);
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks() {
        assert_eq!(rank_over_q(&[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(rank_over_q(&[vec![1, 0], vec![2, 0]]), 1);
        assert_eq!(rank_over_q(&[]), 0);
        // rank 2 over Q, 1 modulo 3
        let m = [vec![1, 1], vec![1, 4]];
        assert_eq!(rank_over_q(&m), 2);
        assert_eq!(rank_mod_p(&m, 3), 1);
        assert_eq!(rank_mod_p(&m, 5), 2);
    }
}
