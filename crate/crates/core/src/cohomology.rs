//! Twisted holomorphic forms on projective space: the Euler-contraction
//! model of `H^{p,0}(ℙⁿ, O(k))`, Bott-type vanishing cases, and the
//! vanishing certificate for odd-degree hypersurfaces.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::atlas::{make_section, AtlasError, BundleDescriptor, ChartModel, Section};
use crate::form::{contract, Form, MultiIndex, VectorField};
use crate::laurent::{Exponent, LaurentPoly};
use crate::linalg::nullspace;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("rejected: {0}")]
    Rejected(String),
    #[error("form is not homogeneous of the stated twist")]
    NotHomogeneous,
    #[error(transparent)]
    Atlas(#[from] AtlasError),
}

/// Exponent vectors of total degree `deg` in `nvars` variables,
/// graded lexicographic (`x_0^deg` first).
pub fn homogeneous_monomials(nvars: usize, deg: usize) -> Vec<Exponent> {
    fn rec(i: usize, left: usize, cur: &mut Vec<i32>, out: &mut Vec<Exponent>) {
        if i + 1 == cur.len() {
            cur[i] = left as i32;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as i32;
            rec(i + 1, left - e, cur, out);
        }
    }
    if nvars == 0 {
        return if deg == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(0, deg, &mut vec![0; nvars], &mut out);
    out
}

/// Kernel basis of `ξ⌟` on `Λ^p V* ⊗ S^{k−p} V*`, `V = ℂ^{n+1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZSpaceBasis {
    pub n: usize,
    pub p: usize,
    pub k: i64,
    /// Dimension of the ambient space the kernel was solved in.
    pub ambient_dim: usize,
    /// Homogeneous forms in `n+1` variables.
    pub basis: Vec<Form>,
}

impl ZSpaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Ambient monomial basis `(I, x^e)`: monomials outer, subsets inner.
fn ambient(n: usize, p: usize, k: i64) -> Vec<(MultiIndex, Exponent)> {
    let mut out = Vec::new();
    for e in homogeneous_monomials(n + 1, (k - p as i64) as usize) {
        for idx in MultiIndex::all(n + 1, p) {
            out.push((idx, e.clone()));
        }
    }
    out
}

/// Solves `ξ⌟α = 0` exactly over the given ambient ordering.
pub fn zspace_basis_in(n: usize, p: usize, k: i64, amb: &[(MultiIndex, Exponent)]) -> ZSpaceBasis {
    let m = n + 1;
    let to_form = |coeffs: &[Scalar]| {
        let terms = amb
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|((idx, e), c)| (idx.clone(), LaurentPoly::monomial(m, e.clone(), c.clone())));
        Form::from_terms(m, p, terms).expect("valid ambient terms")
    };
    if p == 0 {
        // no contraction constraint on functions
        let basis = (0..amb.len())
            .map(|j| {
                let mut v = vec![Scalar::zero(); amb.len()];
                v[j] = Scalar::from_int(1);
                to_form(&v)
            })
            .collect();
        return ZSpaceBasis { n, p, k, ambient_dim: amb.len(), basis };
    }
    let xi = VectorField::euler(m);
    let mut row_of: BTreeMap<(MultiIndex, Exponent), usize> = BTreeMap::new();
    let mut cols: Vec<Vec<(usize, Scalar)>> = Vec::with_capacity(amb.len());
    for (idx, e) in amb {
        let img = contract(&xi, &Form::term(idx.clone(), LaurentPoly::monomial(m, e.clone(), Scalar::from_int(1))))
            .expect("p ≥ 1");
        let mut col = Vec::new();
        for (j, f) in img.coeffs() {
            for (fe, c) in f.terms() {
                let key = (j.clone(), fe.clone());
                let next = row_of.len();
                let r = *row_of.entry(key).or_insert(next);
                col.push((r, c.clone()));
            }
        }
        cols.push(col);
    }
    let mut mat = vec![vec![Scalar::zero(); amb.len()]; row_of.len()];
    for (j, col) in cols.into_iter().enumerate() {
        for (r, c) in col {
            mat[r][j] = c;
        }
    }
    let basis = nullspace(&mat, amb.len()).iter().map(|v| to_form(v)).collect();
    ZSpaceBasis { n, p, k, ambient_dim: amb.len(), basis }
}

/// `Z^{p,k}`: homogeneous p-forms with degree-(k−p) coefficients killed by
/// the Euler field. Empty when `k < p` or `p > n+1`.
pub fn zspace_basis(n: usize, p: usize, k: i64) -> ZSpaceBasis {
    if k < p as i64 || p > n + 1 {
        return ZSpaceBasis { n, p, k, ambient_dim: 0, basis: Vec::new() };
    }
    let amb = ambient(n, p, k);
    zspace_basis_in(n, p, k, &amb)
}

/// Restriction of a homogeneous form to chart `α`: `x_α = 1`, `dx_α = 0`.
pub fn dehomogenize(form: &Form, alpha: usize) -> Form {
    let m = form.nvars();
    let n = m - 1;
    let pos = |j: usize| if j < alpha { j } else { j - 1 };
    let mut out = Form::zero(n, form.degree());
    for (idx, f) in form.coeffs() {
        if idx.contains(alpha) {
            continue;
        }
        let ni = MultiIndex::new(idx.as_slice().iter().map(|&j| pos(j)).collect()).unwrap();
        let g = f.map_exponents(n, |e| {
            let mut v = e.to_vec();
            v.remove(alpha);
            v
        });
        out = &out + &Form::term(ni, g);
    }
    out
}

/// The O(k)-valued section on ℙⁿ whose chart forms are the
/// dehomogenizations of `form` (unverified).
pub fn section_from_homogeneous(form: &Form, k: i64) -> Result<Section, CohomologyError> {
    let m = form.nvars();
    for f in form.coeffs().values() {
        for e in f.terms().keys() {
            let deg: i64 = e.iter().map(|&x| x as i64).sum();
            if e.iter().any(|&x| x < 0) || deg + form.degree() as i64 != k {
                return Err(CohomologyError::NotHomogeneous);
            }
        }
    }
    let model = ChartModel::Projective(m - 1);
    let forms = model.charts().into_iter().map(|c| {
        let f = dehomogenize(form, c.0[0]);
        (c, f)
    });
    Ok(make_section(model, BundleDescriptor::Twist(k), form.degree(), forms.collect())?)
}

/// Where a cohomology group lives.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Group {
    /// `H^{p,q}(ℙ^N, O(k))`.
    Projective { space_dim: usize, p: i64, q: i64, k: i64 },
    /// `H^q(X, Ω^p_{ℙ^{n+1}}|_X(k))` on a degree-d hypersurface `X` of dimension n.
    Restricted { n: usize, d: usize, p: i64, q: i64, k: i64 },
    /// `H^{p,q}(X, O_X(k))`.
    Hypersurface { n: usize, d: usize, p: i64, q: i64, k: i64 },
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Projective { space_dim, p, q, k } => write!(f, "H^{{{},{}}}(P^{}, O({}))", p, q, space_dim, k),
            Group::Restricted { n, d, p, q, k } => {
                write!(f, "H^{}(X_{{{},{}}}, Omega^{}_{{P^{}|X}}({}))", q, n, d, p, n + 1, k)
            }
            Group::Hypersurface { n, d, p, q, k } => write!(f, "H^{{{},{}}}(X_{{{},{}}}, O_X({}))", p, q, n, d, k),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Justification {
    DegreeOutOfRange,
    CaseA,
    CaseB,
    CaseC,
    CaseD,
    NotCovered,
    RestrictionSequence,
    InjectionChain,
    AkizukiNakano,
    Kodaira,
}

impl Justification {
    pub fn label(&self) -> &'static str {
        match self {
            Justification::DegreeOutOfRange => "degree out of range",
            Justification::CaseA => "case (a)",
            Justification::CaseB => "case (b)",
            Justification::CaseC => "case (c)",
            Justification::CaseD => "case (d)",
            Justification::NotCovered => "not covered",
            Justification::RestrictionSequence => "restriction sequence",
            Justification::InjectionChain => "injection chain",
            Justification::AkizukiNakano => "Akizuki-Nakano",
            Justification::Kodaira => "Kodaira",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        use Justification::*;
        [DegreeOutOfRange, CaseA, CaseB, CaseC, CaseD, NotCovered, RestrictionSequence, InjectionChain, AkizukiNakano, Kodaira]
            .into_iter()
            .find(|j| j.label() == s)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VanishingStep {
    pub group: Group,
    pub justification: Justification,
    /// The side conditions that were checked, as written inequalities.
    pub conditions: Vec<String>,
    pub vanishes: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VanishingCertificate {
    pub target: Group,
    pub steps: Vec<VanishingStep>,
    pub vanishes: bool,
}

impl VanishingCertificate {
    pub fn not_covered_count(&self) -> usize {
        self.steps.iter().filter(|s| s.justification == Justification::NotCovered).count()
    }
}

/// First applicable case among (a)–(d) for `H^{p,q}(ℙ^N, O(k)) = 0`.
pub fn bott_vanishing(p: i64, q: i64, k: i64, space_dim: usize) -> VanishingStep {
    let nn = space_dim as i64;
    let group = Group::Projective { space_dim, p, q, k };
    let step = |j: Justification, conds: Vec<String>| VanishingStep {
        group: group.clone(),
        justification: j,
        conditions: conds,
        vanishes: j != Justification::NotCovered,
    };
    if p < 0 || p > nn || q < 0 || q > nn {
        return step(
            Justification::DegreeOutOfRange,
            vec![alloc::format!("(p, q) = ({}, {}) outside [0, {}]^2", p, q, nn)],
        );
    }
    if q != 0 && q != p && q != nn {
        return step(Justification::CaseA, vec![alloc::format!("q = {} not in {{0, {}, {}}}", q, p, nn)]);
    }
    if q == 0 && k <= p && (k, p) != (0, 0) {
        return step(
            Justification::CaseB,
            vec![String::from("q = 0"), alloc::format!("k = {} <= p = {}", k, p), alloc::format!("(k, p) = ({}, {}) != (0, 0)", k, p)],
        );
    }
    if p == q && p != 0 && p != nn && k != 0 {
        return step(
            Justification::CaseC,
            vec![alloc::format!("p = q = {} not in {{0, {}}}", p, nn), alloc::format!("k = {} != 0", k)],
        );
    }
    if q == nn && k >= p - nn && (k, p) != (0, nn) {
        return step(
            Justification::CaseD,
            vec![
                alloc::format!("q = {} = N", q),
                alloc::format!("k = {} >= p - N = {}", k, p - nn),
                alloc::format!("(k, p) = ({}, {}) != (0, {})", k, p, nn),
            ],
        );
    }
    step(Justification::NotCovered, Vec::new())
}

/// Twist `k = (n+2−d)/2` of the square root of `−K_X`.
pub fn hypersurface_twist(n: usize, d: usize) -> i64 {
    (n as i64 + 2 - d as i64) / 2
}

/// Certificate that `H^{p,0}(X, O_X(k)) = 0` for a smooth hypersurface
/// `X ⊂ ℙ^{n+1}` of odd degree `3 ≤ d ≤ n`, `n ≡ 3 mod 4`.
pub fn hypersurface_certificate(n: usize, d: usize) -> Result<VanishingCertificate, CohomologyError> {
    if n % 4 != 3 {
        return Err(CohomologyError::Rejected(alloc::format!(
            "n = {} is not 3 mod 4, so p = (n-1)/2 is not odd",
            n
        )));
    }
    if d.is_multiple_of(2) {
        return Err(CohomologyError::Rejected(alloc::format!(
            "d = {} is even: n+2-d is odd, so X has no square root of -K_X",
            d
        )));
    }
    if d == 1 {
        return Err(CohomologyError::Rejected(alloc::format!(
            "d = 1: X is a copy of P^{}, which carries the explicit p-contact structure (construct-pn)",
            n
        )));
    }
    if d > n {
        return Err(CohomologyError::Rejected(alloc::format!(
            "d = {} > n = {}: K_X = O_X({}) is pseudo-effective, excluded by hypothesis d <= n",
            d,
            n,
            d as i64 - n as i64 - 2
        )));
    }
    let p = ((n - 1) / 2) as i64;
    let k = hypersurface_twist(n, d);
    let dd = d as i64;
    let big_n = n + 1;
    let mut steps = Vec::new();
    let mut all = true;
    for i in 0..p {
        let a = bott_vanishing(p - i, i, k - i * dd, big_n);
        let b = bott_vanishing(p - i, i + 1, k - (i + 1) * dd, big_n);
        let ok = a.vanishes && b.vanishes;
        let conds = vec![alloc::format!("{} = 0", a.group), alloc::format!("{} = 0", b.group)];
        steps.push(a);
        steps.push(b);
        steps.push(VanishingStep {
            group: Group::Restricted { n, d, p: p - i, q: i, k: k - i * dd },
            justification: Justification::RestrictionSequence,
            conditions: conds,
            vanishes: ok,
        });
        all &= ok;
    }
    let end_twist = k - p * dd;
    let endgame = if end_twist < 0 {
        VanishingStep {
            group: Group::Hypersurface { n, d, p: 0, q: p, k: end_twist },
            justification: Justification::AkizukiNakano,
            conditions: vec![
                alloc::format!("k - p*d = {} < 0", end_twist),
                alloc::format!("0 + p = {} < n = {}", p, n),
            ],
            vanishes: p < n as i64,
        }
    } else {
        let pos = n as i64 + 2 - dd + end_twist;
        VanishingStep {
            group: Group::Hypersurface { n, d, p: 0, q: p, k: end_twist },
            justification: Justification::Kodaira,
            conditions: vec![
                alloc::format!("k - p*d = {} >= 0", end_twist),
                alloc::format!("-K_X + O_X(k - p*d) = O_X({}) positive", pos),
                alloc::format!("n + p = {} > n", n as i64 + p),
            ],
            vanishes: pos > 0,
        }
    };
    all &= endgame.vanishes;
    let target = Group::Hypersurface { n, d, p, q: 0, k };
    let mut chain: Vec<String> = steps
        .iter()
        .filter(|s| s.justification == Justification::RestrictionSequence)
        .map(|s| alloc::format!("{} = 0", s.group))
        .collect();
    chain.push(alloc::format!("{} injects into {}", target, endgame.group));
    steps.push(VanishingStep {
        group: target.clone(),
        justification: Justification::InjectionChain,
        conditions: chain,
        vanishes: all,
    });
    steps.push(endgame);
    Ok(VanishingCertificate { target, steps, vanishes: all })
}

/// `k` with `O(k)² ≅ O(n+1) = −K_{ℙⁿ}`, when it exists.
pub fn spin_root_k(n: usize) -> Option<i64> {
    (n % 2 == 1).then(|| (n as i64 + 1) / 2)
}

/// Dehomogenized sections of a Z-space basis.
pub fn basis_sections(z: &ZSpaceBasis) -> Result<Vec<Section>, CohomologyError> {
    z.basis.iter().map(|f| section_from_homogeneous(f, z.k)).collect()
}
