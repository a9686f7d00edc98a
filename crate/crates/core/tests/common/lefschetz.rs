//! Brute-force Lefschetz/contraction matrices on the orthonormal
//! dz_J∧dz̄_K basis.

use num_rational::BigRational;
use num_traits::{One, Zero};
use twistform_core::{MultiIndex, Scalar};

/// Words in generators dz_0..dz_{n−1} (0..n) and dz̄_0..dz̄_{n−1} (n..2n).
pub fn words(n: usize, p: usize, qd: usize) -> Vec<(MultiIndex, MultiIndex, Vec<usize>)> {
    let mut out = Vec::new();
    for j in MultiIndex::all(n, p) {
        for k in MultiIndex::all(n, qd) {
            let mut w = j.as_slice().to_vec();
            w.extend(k.as_slice().iter().map(|x| x + n));
            out.push((j.clone(), k, w));
        }
    }
    out
}

/// `a∧b∧w` as (sign, sorted word), or None when it vanishes.
pub fn left_mul(a: usize, b: usize, w: &[usize]) -> Option<(i64, Vec<usize>)> {
    if w.contains(&a) || w.contains(&b) {
        return None;
    }
    let mut v = vec![a, b];
    v.extend_from_slice(w);
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    Some((sign, v))
}

/// Matrix of `i Σ_j μ_j dz_j∧dz̄_j ∧` from bidegree (p,q) to (p+1,q+1).
pub fn lefschetz(n: usize, p: usize, qd: usize, mu: &[BigRational]) -> Vec<Vec<Scalar>> {
    let src = words(n, p, qd);
    let dst = words(n, p + 1, qd + 1);
    let mut m = vec![vec![Scalar::zero(); src.len()]; dst.len()];
    for (col, (_, _, w)) in src.iter().enumerate() {
        for j in 0..n {
            if let Some((sign, v)) = left_mul(j, j + n, w) {
                let row = dst.iter().position(|(_, _, x)| x == &v).unwrap();
                m[row][col] += &(&Scalar::i() * &Scalar::from_rational(mu[j].clone() * BigRational::from_integer(sign.into())));
            }
        }
    }
    m
}

pub fn adjoint(m: &[Vec<Scalar>], rows: usize, cols: usize) -> Vec<Vec<Scalar>> {
    (0..cols).map(|i| (0..rows).map(|j| m[j][i].conj()).collect()).collect()
}

pub fn matmul(a: &[Vec<Scalar>], b: &[Vec<Scalar>], inner: usize, rows: usize, cols: usize) -> Vec<Vec<Scalar>> {
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| (0..inner).fold(Scalar::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// `[e(α), Λ]` on bidegree (p,q), with `α = iΣλ_j dz_j∧dz̄_j`, `Λ = L^*`.
pub fn commutator_oracle(n: usize, p: usize, qd: usize, lambda: &[BigRational]) -> Vec<Vec<Scalar>> {
    let ones = vec![BigRational::one(); n];
    let dim = words(n, p, qd).len();
    let zero = || vec![vec![Scalar::zero(); dim]; dim];
    // e∘Λ: (p,q) → (p−1,q−1) → (p,q)
    let e_lam = if p > 0 && qd > 0 {
        let lo = words(n, p - 1, qd - 1).len();
        let l_down = lefschetz(n, p - 1, qd - 1, &ones);
        let lam = adjoint(&l_down, dim, lo);
        let e = lefschetz(n, p - 1, qd - 1, lambda);
        matmul(&e, &lam, lo, dim, dim)
    } else {
        zero()
    };
    // Λ∘e: (p,q) → (p+1,q+1) → (p,q)
    let lam_e = if p < n && qd < n {
        let hi = words(n, p + 1, qd + 1).len();
        let l_up = lefschetz(n, p, qd, &ones);
        let lam = adjoint(&l_up, hi, dim);
        let e = lefschetz(n, p, qd, lambda);
        matmul(&lam, &e, hi, dim, dim)
    } else {
        zero()
    };
    (0..dim).map(|i| (0..dim).map(|j| &e_lam[i][j] - &lam_e[i][j]).collect()).collect()
}
