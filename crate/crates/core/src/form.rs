//! Chart-local holomorphic forms with Laurent polynomial coefficients.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::AlgebraError;
use crate::laurent::{default_labels, LaurentPoly};
use crate::numeric::{merge_sign, NumForm};
use crate::scalar::Scalar;

/// Strictly increasing tuple of variable positions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(idx: Vec<usize>) -> Result<Self, AlgebraError> {
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(AlgebraError::BadMultiIndex(idx));
        }
        Ok(MultiIndex(idx))
    }

    /// Sorts `idx`, returning the index and whether the sort was odd.
    /// `None` if an entry repeats.
    pub fn sorted(idx: &[usize]) -> Option<(bool, Self)> {
        let mut v = idx.to_vec();
        let mut odd = false;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                odd = !odd;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((odd, MultiIndex(v)))
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        MultiIndex((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn complement(&self, n: usize) -> Self {
        MultiIndex((0..n).filter(|i| !self.contains(*i)).collect())
    }

    /// All strictly increasing tuples of length `k` from `0..n`, lexicographic.
    pub fn all(n: usize, k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if cur.len() == k {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for i in start..n {
                if n - i < k - cur.len() {
                    break;
                }
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }
}

/// A holomorphic `p`-form on one chart.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Form {
    nvars: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, LaurentPoly>,
}

impl Form {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        Form { nvars, degree, coeffs: BTreeMap::new() }
    }

    /// A 0-form.
    pub fn function(f: LaurentPoly) -> Self {
        let mut r = Self::zero(f.nvars(), 0);
        if !f.is_zero() {
            r.coeffs.insert(MultiIndex::empty(), f);
        }
        r
    }

    /// The 1-form `dz_i`.
    pub fn dz(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        Self::term(MultiIndex(alloc::vec![i]), LaurentPoly::one(nvars))
    }

    /// `f dz_I`.
    pub fn term(idx: MultiIndex, f: LaurentPoly) -> Self {
        let mut r = Self::zero(f.nvars(), idx.len());
        assert!(idx.0.iter().all(|&i| i < f.nvars()), "index out of range");
        if !f.is_zero() {
            r.coeffs.insert(idx, f);
        }
        r
    }

    /// Builds a form from terms, summing duplicates.
    pub fn from_terms<I>(nvars: usize, degree: usize, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (MultiIndex, LaurentPoly)>,
    {
        if degree > nvars {
            return Err(AlgebraError::DegreeOverflow { degree, nvars });
        }
        let mut r = Self::zero(nvars, degree);
        for (idx, f) in terms {
            if idx.len() != degree || idx.0.iter().any(|&i| i >= nvars) {
                return Err(AlgebraError::BadMultiIndex(idx.0));
            }
            if f.nvars() != nvars {
                return Err(AlgebraError::NvarsMismatch { left: nvars, right: f.nvars() });
            }
            r.add_term(idx, f);
        }
        Ok(r)
    }

    fn add_term(&mut self, idx: MultiIndex, f: LaurentPoly) {
        if f.is_zero() {
            return;
        }
        match self.coeffs.remove(&idx) {
            Some(g) => {
                let s = &g + &f;
                if !s.is_zero() {
                    self.coeffs.insert(idx, s);
                }
            }
            None => {
                self.coeffs.insert(idx, f);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, LaurentPoly> {
        &self.coeffs
    }

    pub fn coeff(&self, idx: &MultiIndex) -> LaurentPoly {
        self.coeffs.get(idx).cloned().unwrap_or_else(|| LaurentPoly::zero(self.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `dz_1∧…∧dz_n` for a top-degree form.
    pub fn top_coefficient(&self) -> Option<LaurentPoly> {
        (self.degree == self.nvars).then(|| self.coeff(&MultiIndex::full(self.nvars)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.mul_poly(&LaurentPoly::constant(self.nvars, c.clone()))
    }

    pub fn mul_poly(&self, f: &LaurentPoly) -> Self {
        assert_eq!(f.nvars(), self.nvars, "nvars mismatch");
        let mut r = Self::zero(self.nvars, self.degree);
        for (idx, g) in &self.coeffs {
            r.add_term(idx.clone(), g * f);
        }
        r
    }

    /// Applies `f` to each coefficient; the result keeps this form's shape.
    pub fn map_coeffs<F: FnMut(&LaurentPoly) -> LaurentPoly>(&self, nvars_out: usize, mut f: F) -> Self {
        let mut r = Self::zero(nvars_out, self.degree);
        for (idx, g) in &self.coeffs {
            r.add_term(idx.clone(), f(g));
        }
        r
    }

    /// Embeds into `total` variables at `offset` (coefficients and indices shift).
    pub fn lift(&self, total: usize, offset: usize) -> Self {
        let mut r = Self::zero(total, self.degree);
        for (idx, g) in &self.coeffs {
            let ni = MultiIndex(idx.0.iter().map(|i| i + offset).collect());
            r.add_term(ni, g.lift(total, offset));
        }
        r
    }

    /// Numeric evaluation of every coefficient.
    pub fn eval_at(&self, point: &[Complex64]) -> Result<NumForm, AlgebraError> {
        let mut r = NumForm::zero(self.nvars);
        for (idx, g) in &self.coeffs {
            r.add_term(idx.0.clone(), g.eval(point)?);
        }
        Ok(r)
    }

    /// Exact evaluation at a Gaussian-rational point; zero values dropped.
    pub fn eval_exact(&self, point: &[Scalar]) -> Result<BTreeMap<MultiIndex, Scalar>, AlgebraError> {
        let mut r = BTreeMap::new();
        for (idx, g) in &self.coeffs {
            let v = g.eval_exact(point)?;
            if !v.is_zero() {
                r.insert(idx.clone(), v);
            }
        }
        Ok(r)
    }

    /// Renders as `[coef] dz1∧dz2 + …`; `0` for the zero form.
    pub fn render(&self, var_labels: &[String]) -> String {
        if self.coeffs.is_empty() {
            return String::from("0");
        }
        let mut parts = Vec::new();
        for (idx, g) in &self.coeffs {
            let mut s = alloc::format!("[{}]", g.render(var_labels));
            if !idx.is_empty() {
                s.push(' ');
                let d: Vec<String> = idx.0.iter().map(|&i| alloc::format!("d{}", var_labels[i])).collect();
                s.push_str(&d.join("∧"));
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_labels(self.nvars)))
    }
}

impl<'a> Add<&'a Form> for &'a Form {
    type Output = Form;
    /// Panics on shape mismatch.
    fn add(self, o: &Form) -> Form {
        assert_eq!(self.nvars, o.nvars, "nvars mismatch");
        assert_eq!(self.degree, o.degree, "degree mismatch");
        let mut r = self.clone();
        for (idx, g) in &o.coeffs {
            r.add_term(idx.clone(), g.clone());
        }
        r
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

impl<'a> Sub<&'a Form> for &'a Form {
    type Output = Form;
    fn sub(self, o: &Form) -> Form {
        self + &(-o)
    }
}

/// Wedge product.
pub fn wedge(a: &Form, b: &Form) -> Result<Form, AlgebraError> {
    if a.nvars != b.nvars {
        return Err(AlgebraError::NvarsMismatch { left: a.nvars, right: b.nvars });
    }
    let degree = a.degree + b.degree;
    if degree > a.nvars {
        return Err(AlgebraError::DegreeOverflow { degree, nvars: a.nvars });
    }
    let mut r = Form::zero(a.nvars, degree);
    for (i, f) in &a.coeffs {
        for (j, g) in &b.coeffs {
            if let Some((neg, idx)) = merge_sign(&i.0, &j.0) {
                let c = f * g;
                r.add_term(MultiIndex(idx), if neg { -c } else { c });
            }
        }
    }
    Ok(r)
}

/// `a ∧ a ∧ … ∧ a` (`k` factors; `k = 0` gives the constant 1).
pub fn wedge_power(a: &Form, k: usize) -> Result<Form, AlgebraError> {
    let mut acc = Form::function(LaurentPoly::one(a.nvars));
    for _ in 0..k {
        acc = wedge(&acc, a)?;
    }
    Ok(acc)
}

/// Holomorphic exterior derivative `∂`.
///
/// `∂(f dz_I) = Σ_j ∂_j f dz_j ∧ dz_I`. A form of top degree maps to the
/// zero form of the same degree, since no higher degree exists.
pub fn del_op(a: &Form) -> Form {
    let degree = (a.degree + 1).min(a.nvars);
    let mut r = Form::zero(a.nvars, degree);
    if a.degree == a.nvars {
        return r;
    }
    for (idx, f) in &a.coeffs {
        for j in 0..a.nvars {
            if idx.contains(j) {
                continue;
            }
            let d = f.derivative(j);
            if d.is_zero() {
                continue;
            }
            let (neg, ni) = merge_sign(&[j], &idx.0).expect("j not in I");
            r.add_term(MultiIndex(ni), if neg { -d } else { d });
        }
    }
    r
}

/// Holomorphic vector field `Σ ξ_j ∂/∂z_j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField {
    components: Vec<LaurentPoly>,
}

impl VectorField {
    pub fn new(components: Vec<LaurentPoly>) -> Self {
        let n = components.len();
        assert!(components.iter().all(|c| c.nvars() == n), "component nvars mismatch");
        VectorField { components }
    }

    /// `Σ z_j ∂/∂z_j`.
    pub fn euler(n: usize) -> Self {
        Self::new((0..n).map(|j| LaurentPoly::var(n, j)).collect())
    }

    /// `∂/∂z_i`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        Self::new((0..n).map(|j| if j == i { LaurentPoly::one(n) } else { LaurentPoly::zero(n) }).collect())
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[LaurentPoly] {
        &self.components
    }
}

/// Interior product `ξ ⌟ a`, left anti-derivation convention:
/// `ξ ⌟ dz_{i_0}∧…∧dz_{i_{p-1}} = Σ_k (−1)^k ξ_{i_k} dz_{I∖i_k}`.
pub fn contract(xi: &VectorField, a: &Form) -> Result<Form, AlgebraError> {
    if xi.nvars() != a.nvars {
        return Err(AlgebraError::NvarsMismatch { left: xi.nvars(), right: a.nvars });
    }
    if a.degree == 0 {
        return Err(AlgebraError::DegreeUnderflow);
    }
    let mut r = Form::zero(a.nvars, a.degree - 1);
    for (idx, f) in &a.coeffs {
        for (k, &i) in idx.0.iter().enumerate() {
            let c = &xi.components[i] * f;
            if c.is_zero() {
                continue;
            }
            let mut ni = idx.0.clone();
            ni.remove(k);
            r.add_term(MultiIndex(ni), if k % 2 == 1 { -c } else { c });
        }
    }
    Ok(r)
}
