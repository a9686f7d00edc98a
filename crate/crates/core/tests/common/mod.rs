#![allow(dead_code)]

pub mod cohom;
pub mod lefschetz;

use num_complex::Complex64;
use proptest::prelude::*;
use twistform_core::atlas::{ChartId, ChartPoint};
use twistform_core::{Form, LaurentPoly, MultiIndex, Scalar, VectorField};

pub fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

pub fn scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| Scalar::ratio(a, b) + Scalar::ratio(c, d) * Scalar::i())
}

pub fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |x| x != &Scalar::from_int(0))
}

pub fn poly(nvars: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-2i32..=2, nvars), scalar()), 0..4)
        .prop_map(move |t| LaurentPoly::from_terms(nvars, t))
}

pub fn poly_nonneg(nvars: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(0i32..=2, nvars), scalar()), 0..4)
        .prop_map(move |t| LaurentPoly::from_terms(nvars, t))
}

pub fn form(nvars: usize, degree: usize) -> impl Strategy<Value = Form> {
    let idx = MultiIndex::all(nvars, degree);
    let k = idx.len();
    prop::collection::vec((0..k, poly(nvars)), 0..4).prop_map(move |terms| {
        Form::from_terms(nvars, degree, terms.into_iter().map(|(i, f)| (idx[i].clone(), f))).unwrap()
    })
}

pub fn vector_field(nvars: usize) -> impl Strategy<Value = VectorField> {
    prop::collection::vec(poly(nvars), nvars).prop_map(VectorField::new)
}

/// Deterministic Gaussian-rational points with parts in [1/2, 2].
pub fn points(chart: ChartId, dim: usize, count: usize, seed: u64) -> Vec<ChartPoint> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        32 + ((state >> 33) % 97) as i64
    };
    (0..count)
        .map(|_| {
            let coords = (0..dim).map(|_| Scalar::ratio(next(), 64) + Scalar::ratio(next(), 64) * Scalar::i()).collect();
            ChartPoint::new(chart.clone(), coords)
        })
        .collect()
}

/// Coordinates of chart `from` as functions of chart `to` on ℙⁿ, computed
/// through homogeneous coordinates.
pub fn proj_transfer(n: usize, from: usize, to: usize, q: &[Complex64]) -> Vec<Complex64> {
    let mut x = Vec::with_capacity(n + 1);
    let mut it = q.iter();
    for j in 0..=n {
        x.push(if j == to { Complex64::new(1.0, 0.0) } else { *it.next().unwrap() });
    }
    (0..=n).filter(|&j| j != from).map(|j| x[j] / x[from]).collect()
}

/// Jacobian ∂w_i/∂q_j of `proj_transfer` by central differences.
pub fn proj_jacobian(n: usize, from: usize, to: usize, q: &[Complex64]) -> Vec<Vec<Complex64>> {
    let h = 1e-6;
    let mut jac = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        let mut qp = q.to_vec();
        let mut qm = q.to_vec();
        qp[j] += h;
        qm[j] -= h;
        let (wp, wm) = (proj_transfer(n, from, to, &qp), proj_transfer(n, from, to, &qm));
        for i in 0..n {
            jac[i][j] = (wp[i] - wm[i]) / (2.0 * h);
        }
    }
    jac
}

pub fn det(m: &[Vec<Complex64>]) -> Complex64 {
    let k = m.len();
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for c in 0..k {
        let minor: Vec<Vec<Complex64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| *v).collect()).collect();
        let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
        acc += m[0][c] * sign * det(&minor);
    }
    acc
}

/// Pulls a from-chart form back numerically: coefficient on dz_J is
/// Σ_I α_I(w(q)) · det(∂w_I/∂q_J).
pub fn numeric_pullback(form: &Form, n: usize, from: usize, to: usize, q: &[Complex64]) -> Vec<(Vec<usize>, Complex64)> {
    let w = proj_transfer(n, from, to, q);
    let jac = proj_jacobian(n, from, to, q);
    MultiIndex::all(n, form.degree())
        .into_iter()
        .map(|jx| {
            let mut v = Complex64::new(0.0, 0.0);
            for (ix, f) in form.coeffs() {
                let sub: Vec<Vec<Complex64>> = ix.as_slice().iter().map(|&i| jx.as_slice().iter().map(|&j| jac[i][j]).collect()).collect();
                v += f.eval(&w).unwrap() * det(&sub);
            }
            (jx.as_slice().to_vec(), v)
        })
        .collect()
}

pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 33
    }
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

/// Chart-α constant predicted from chart 0 by transport: `(z_0^{(α)})^{n+1}`
/// (the squared transition) times the Jacobian determinant of chart 0 in
/// chart α coordinates, evaluated numerically at a sample point.
pub fn transported_constant(n: usize, alpha: usize) -> Complex64 {
    let q = points(ChartId::single(alpha), n, 1, 11 + alpha as u64)[0].to_complex();
    let z0 = if alpha == 0 { Complex64::new(1.0, 0.0) } else { q[0] };
    z0.powi(n as i32 + 1) * det(&proj_jacobian(n, 0, alpha, &q))
}

/// Coefficient of dx1∧dy1∧…∧dxn∧dyn in i^{n²} dz1…dzn∧dz̄1…dz̄n, by
/// expanding dz = dx + i dy and sorting each wedge word with its sign.
pub fn lebesgue_oracle(n: usize) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    // generators: dx_j = 2j, dy_j = 2j+1
    let mut terms: Vec<(Vec<usize>, Complex64)> = vec![(vec![], Complex64::new(1.0, 0.0))];
    for conj in [false, true] {
        for j in 0..n {
            let y = if conj { -i } else { i };
            let mut next = Vec::new();
            for (w, v) in &terms {
                for (g, f) in [(2 * j, Complex64::new(1.0, 0.0)), (2 * j + 1, y)] {
                    if !w.contains(&g) {
                        let mut w2 = w.clone();
                        w2.push(g);
                        next.push((w2, v * f));
                    }
                }
            }
            terms = next;
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (mut w, v) in terms {
        let mut sign = 1.0;
        for a in 0..w.len() {
            for b in 0..w.len() - 1 - a {
                if w[b] > w[b + 1] {
                    w.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        total += v * sign;
    }
    let ipow = [Complex64::new(1.0, 0.0), i, Complex64::new(-1.0, 0.0), -i][(n * n) % 4];
    total * ipow
}
