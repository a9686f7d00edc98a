//! Multivariate Laurent polynomials over [`Scalar`].

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::AlgebraError;
use crate::scalar::Scalar;

/// Exponent vector, one entry per variable; entries may be negative.
pub type Exponent = Vec<i32>;

/// A Laurent polynomial in `nvars` variables.
///
/// Terms are kept in a map keyed by exponent vector with no zero
/// coefficients, so `==` is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

/// Builds the canonical polynomial from raw terms: merges like terms,
/// drops zeros. Running it on an already canonical polynomial's terms is
/// the identity.
pub fn normalize<I>(nvars: usize, raw: I) -> LaurentPoly
where
    I: IntoIterator<Item = (Exponent, Scalar)>,
{
    let mut terms: BTreeMap<Exponent, Scalar> = BTreeMap::new();
    for (e, c) in raw {
        assert_eq!(e.len(), nvars, "exponent length must equal nvars");
        if c.is_zero() {
            continue;
        }
        match terms.get_mut(&e) {
            Some(acc) => *acc += &c,
            None => {
                terms.insert(e, c);
            }
        }
    }
    terms.retain(|_, c| !c.is_zero());
    LaurentPoly { nvars, terms }
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    /// The coordinate function `z_i` (0-based position).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Scalar::one())
    }

    pub fn monomial(nvars: usize, exp: Exponent, c: Scalar) -> Self {
        normalize(nvars, core::iter::once((exp, c)))
    }

    pub fn from_terms<I>(nvars: usize, raw: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, Scalar)>,
    {
        normalize(nvars, raw)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Exponent, Scalar> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant value if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one_poly(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// No negative exponents.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    /// Coefficient of a given exponent (zero if absent).
    pub fn coeff(&self, e: &[i32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact inverse of a monomial; `None` for anything else.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let ne: Exponent = e.iter().map(|x| -x).collect();
        Some(Self::monomial(self.nvars, ne, c.inv()?))
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let raw = self.terms.iter().filter(|(e, _)| e[i] != 0).map(|(e, c)| {
            let mut ne = e.clone();
            ne[i] -= 1;
            (ne, c * &Scalar::from_int(e[i] as i64))
        });
        normalize(self.nvars, raw)
    }

    /// Applies `f` to every exponent vector, producing a polynomial in
    /// `nvars_out` variables; colliding terms are merged.
    pub fn map_exponents<F>(&self, nvars_out: usize, mut f: F) -> Self
    where
        F: FnMut(&[i32]) -> Exponent,
    {
        normalize(nvars_out, self.terms.iter().map(|(e, c)| (f(e), c.clone())))
    }

    /// Embeds into `total` variables, placing ours at `offset..offset+nvars`.
    pub fn lift(&self, total: usize, offset: usize) -> Self {
        assert!(offset + self.nvars <= total);
        self.map_exponents(total, |e| {
            let mut ne = vec![0; total];
            ne[offset..offset + e.len()].copy_from_slice(e);
            ne
        })
    }

    fn check_point(&self, got: usize) -> Result<(), AlgebraError> {
        if got != self.nvars {
            return Err(AlgebraError::PointDimension { expected: self.nvars, got });
        }
        Ok(())
    }

    fn check_poles(&self, is_zero: impl Fn(usize) -> bool) -> Result<(), AlgebraError> {
        for e in self.terms.keys() {
            for (i, &x) in e.iter().enumerate() {
                if x < 0 && is_zero(i) {
                    return Err(AlgebraError::Pole { var: i });
                }
            }
        }
        Ok(())
    }

    /// Floating-point evaluation.
    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64, AlgebraError> {
        self.check_point(point.len())?;
        self.check_poles(|i| point[i] == Complex64::new(0.0, 0.0))?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = c.to_complex64();
            for (z, &x) in point.iter().zip(e) {
                if x != 0 {
                    t *= z.powi(x);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Exact evaluation at a Gaussian-rational point.
    pub fn eval_exact(&self, point: &[Scalar]) -> Result<Scalar, AlgebraError> {
        self.check_point(point.len())?;
        self.check_poles(|i| point[i].is_zero())?;
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (z, &x) in point.iter().zip(e) {
                if x != 0 {
                    t = &t * &z.powi(x).expect("checked pole");
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Renders with the given variable labels.
    pub fn render(&self, labels: &[String]) -> String {
        assert_eq!(labels.len(), self.nvars);
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let t = render_term(e, c, labels);
            if k == 0 {
                out.push_str(&t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&t);
            }
        }
        out
    }
}

fn render_term(e: &[i32], c: &Scalar, labels: &[String]) -> String {
    let mut mono = String::new();
    for (i, &x) in e.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if !mono.is_empty() {
            mono.push('*');
        }
        mono.push_str(&labels[i]);
        if x != 1 {
            mono.push('^');
            mono.push_str(&alloc::format!("{}", x));
        }
    }
    if mono.is_empty() {
        return alloc::format!("{}", c);
    }
    if c.is_one() {
        mono
    } else if *c == -Scalar::one() {
        alloc::format!("-{}", mono)
    } else {
        alloc::format!("{}*{}", c, mono)
    }
}

/// Positional labels `z1..zn` used when no chart naming applies.
pub fn default_labels(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| alloc::format!("z{}", i)).collect()
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_labels(self.nvars)))
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, o.nvars, "nvars mismatch");
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            match terms.get_mut(e) {
                Some(acc) => {
                    *acc += c;
                    if acc.is_zero() {
                        terms.remove(e);
                    }
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        LaurentPoly { nvars: self.nvars, terms }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &(-o)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, o.nvars, "nvars mismatch");
        let mut raw = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                raw.push((e, c1 * c2));
            }
        }
        normalize(self.nvars, raw)
    }
}

macro_rules! owned_poly_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: LaurentPoly) -> LaurentPoly {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: &LaurentPoly) -> LaurentPoly {
                (&self).$m(o)
            }
        }
    };
}
owned_poly_binop!(Add, add);
owned_poly_binop!(Sub, sub);
owned_poly_binop!(Mul, mul);
