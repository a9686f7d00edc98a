//! Floating-point exterior algebra on an arbitrary generator set.
//!
//! Degrees are mixed; a term is keyed by its strictly increasing generator
//! list. Used for evaluated forms and for products that include conjugate
//! differentials (generators `n..2n` standing for `dz̄`).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

/// Sign and merged index of `a ∧ b`, or `None` if an index repeats.
pub fn merge_sign(a: &[usize], b: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else if a[i] > b[j] {
            // b[j] jumps over the remaining a[i..]
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((inversions % 2 == 1, out))
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumForm {
    pub ngens: usize,
    pub terms: BTreeMap<Vec<usize>, Complex64>,
}

impl NumForm {
    pub fn zero(ngens: usize) -> Self {
        NumForm { ngens, terms: BTreeMap::new() }
    }

    pub fn scalar(ngens: usize, c: Complex64) -> Self {
        let mut f = Self::zero(ngens);
        f.add_term(Vec::new(), c);
        f
    }

    pub fn add_term(&mut self, idx: Vec<usize>, c: Complex64) {
        debug_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        *self.terms.entry(idx).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn get(&self, idx: &[usize]) -> Complex64 {
        self.terms.get(idx).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn add(&self, o: &NumForm) -> NumForm {
        let mut r = self.clone();
        for (k, v) in &o.terms {
            r.add_term(k.clone(), *v);
        }
        r
    }

    pub fn sub(&self, o: &NumForm) -> NumForm {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> NumForm {
        NumForm {
            ngens: self.ngens,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn wedge(&self, o: &NumForm) -> NumForm {
        assert_eq!(self.ngens, o.ngens);
        let mut r = NumForm::zero(self.ngens);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if let Some((neg, idx)) = merge_sign(a, b) {
                    let v = x * y;
                    r.add_term(idx, if neg { -v } else { v });
                }
            }
        }
        r
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        let s: f64 = self.terms.values().map(|v| v.norm_sqr()).sum();
        num_traits::Float::sqrt(s)
    }
}
