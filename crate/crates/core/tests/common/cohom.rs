//! Integer oracles for Bott dimensions and Euler-contraction kernels.

pub fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// Classical Bott formula for `h^q(ℙ^N, Ω^p(k))`.
pub fn bott_dim(p: i64, q: i64, k: i64, nn: i64) -> i64 {
    if p < 0 || p > nn || q < 0 || q > nn {
        return 0;
    }
    if q == 0 {
        if k == 0 && p == 0 {
            1
        } else if k > p {
            binom(k + nn - p, k) * binom(k - 1, p)
        } else {
            0
        }
    } else if q == nn {
        bott_dim(nn - p, 0, -k, nn)
    } else if k == 0 && p == q {
        1
    } else {
        0
    }
}

pub fn monomials(nvars: usize, deg: usize) -> Vec<Vec<i32>> {
    if nvars == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for a in 0..=deg {
        for mut rest in monomials(nvars - 1, deg - a) {
            rest.insert(0, a as i32);
            out.push(rest);
        }
    }
    out
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn int_rank(mut m: Vec<Vec<i128>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                for j in 0..cols {
                    m[r][j] = m[r][j] * a - m[rank][j] * b;
                }
                let g = m[r].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Kernel dimension of Euler contraction on Λ^p ⊗ S^{k−p} over ℂ^{n+1},
/// with the contraction written out by hand.
pub fn kernel_dim_oracle(n: usize, p: usize, k: usize) -> usize {
    let m = n + 1;
    let src: Vec<(Vec<usize>, Vec<i32>)> = subsets(m, p)
        .into_iter()
        .flat_map(|i| monomials(m, k - p).into_iter().map(move |a| (i.clone(), a)))
        .collect();
    let dst: Vec<(Vec<usize>, Vec<i32>)> = if p == 0 {
        vec![]
    } else {
        subsets(m, p - 1)
            .into_iter()
            .flat_map(|i| monomials(m, k - p + 1).into_iter().map(move |a| (i.clone(), a)))
            .collect()
    };
    if dst.is_empty() {
        return src.len();
    }
    // columns = source basis vectors
    let mut mat = vec![vec![0i128; src.len()]; dst.len()];
    for (col, (idx, a)) in src.iter().enumerate() {
        for (pos, &i) in idx.iter().enumerate() {
            let mut rest = idx.clone();
            rest.remove(pos);
            let mut b = a.clone();
            b[i] += 1;
            let row = dst.iter().position(|(j, e)| j == &rest && e == &b).unwrap();
            mat[row][col] += if pos % 2 == 0 { 1 } else { -1 };
        }
    }
    src.len() - int_rank(mat)
}
