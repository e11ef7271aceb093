//! The Cox ring of F_e.
//!
//! Four variables: `z` of degree (1,0), `w` of degree (1,e), and `t0`, `t1` of
//! degree (0,1). The monomial `z^p w^q t0^k0 t1^k1` has degree
//! `(p + q, q e + k0 + k1)`, so the `w`-exponent selects the summand
//! `O(b - q e)` of the pushforward and monomial counts equal `h^0`.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lattice::DivisorClass;
use crate::xla::ExactMatrix;

/// Coefficients drawn for forms over Q lie in `[-Q_COEFF_BOUND, Q_COEFF_BOUND]`.
pub const Q_COEFF_BOUND: i64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    /// exponent of `z`, degree (1,0)
    pub p: u32,
    /// exponent of `w`, degree (1,e)
    pub q: u32,
    pub k0: u32,
    pub k1: u32,
}

impl Monomial {
    pub fn new(p: u32, q: u32, k0: u32, k1: u32) -> Self {
        Self { p, q, k0, k1 }
    }

    pub fn one() -> Self {
        Self::new(0, 0, 0, 0)
    }

    pub fn degree(&self, e: i64) -> DivisorClass {
        let k = (self.k0 + self.k1) as i64;
        DivisorClass::new((self.p + self.q) as i64, self.q as i64 * e + k, e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.p + other.p, self.q + other.q, self.k0 + other.k0, self.k1 + other.k1)
    }

    /// Sort key inside a fixed degree: `(q, p, k1)`.
    fn order_key(&self) -> (u32, u32, u32) {
        (self.q, self.p, self.k1)
    }
}

/// Position lookup for the monomial basis of one degree.
#[derive(Debug, Clone)]
pub struct BasisIndex {
    degree: DivisorClass,
    /// `offsets[q]` is the index of the first monomial with `w`-exponent `q`;
    /// one trailing entry holds the total size.
    offsets: Vec<usize>,
}

impl BasisIndex {
    pub fn new(degree: DivisorClass) -> Self {
        let mut offsets = vec![0usize];
        if degree.a >= 0 {
            let mut acc = 0usize;
            for q in 0..=degree.a {
                acc += (degree.b - q * degree.e + 1).max(0) as usize;
                offsets.push(acc);
            }
        }
        Self { degree, offsets }
    }

    pub fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree(&self) -> DivisorClass {
        self.degree
    }

    /// Index of `m`, which must have this degree.
    pub fn index_of(&self, m: &Monomial) -> usize {
        debug_assert_eq!(m.degree(self.degree.e), self.degree);
        self.offsets[m.q as usize] + m.k1 as usize
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        monomial_basis(&self.degree)
    }
}

/// All monomials of degree `d`, ordered by `(q, p, k1)`.
pub fn monomial_basis(d: &DivisorClass) -> Vec<Monomial> {
    let mut out = Vec::new();
    if d.a < 0 {
        return out;
    }
    for q in 0..=d.a {
        let k = d.b - q * d.e;
        if k < 0 {
            continue;
        }
        let p = d.a - q;
        for k1 in 0..=k {
            out.push(Monomial::new(p as u32, q as u32, (k - k1) as u32, k1 as u32));
        }
    }
    debug_assert!(out.windows(2).all(|w| w[0].order_key() < w[1].order_key()));
    out
}

/// A homogeneous element of the Cox ring with coefficients in `field`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    degree: DivisorClass,
    field: FieldSpec,
    terms: BTreeMap<Monomial, i64>,
}

impl Form {
    pub fn zero(degree: DivisorClass, field: FieldSpec) -> Self {
        Self { degree, field, terms: BTreeMap::new() }
    }

    pub fn constant(c: i64, e: i64, field: FieldSpec) -> Self {
        Self::from_terms(DivisorClass::new(0, 0, e), field, [(Monomial::one(), c)]).unwrap()
    }

    /// Builds a form, reducing coefficients and dropping zeros. Every monomial
    /// must have degree `degree`.
    pub fn from_terms(
        degree: DivisorClass,
        field: FieldSpec,
        terms: impl IntoIterator<Item = (Monomial, i64)>,
    ) -> Result<Self> {
        let mut form = Self::zero(degree, field);
        for (m, c) in terms {
            if m.degree(degree.e) != degree {
                return Err(Error::InvalidArgument(format!(
                    "monomial {m:?} does not have degree {degree}"
                )));
            }
            form.add_term(m, c);
        }
        Ok(form)
    }

    /// The single monomial `m` with coefficient 1.
    pub fn monomial(m: Monomial, e: i64, field: FieldSpec) -> Self {
        Self::from_terms(m.degree(e), field, [(m, 1)]).unwrap()
    }

    fn add_term(&mut self, m: Monomial, c: i64) {
        let field = self.field;
        let entry = self.terms.entry(m).or_insert(0);
        *entry = field.add(*entry, field.reduce(c));
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn degree(&self) -> DivisorClass {
        self.degree
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &i64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Coefficient vector in the order of `monomial_basis(self.degree())`.
    pub fn coefficient_vector(&self) -> Vec<i64> {
        let idx = BasisIndex::new(self.degree);
        let mut v = vec![0; idx.len()];
        for (m, c) in &self.terms {
            v[idx.index_of(m)] = *c;
        }
        v
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::InvalidArgument("adding forms of different degree".into()));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, *c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other)?;
        let degree = self.degree.try_add(&other.degree)?;
        let mut out = Form::zero(degree, self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), self.field.mul(*c1, *c2));
            }
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Form) -> Result<()> {
        if self.field != other.field {
            return Err(Error::InvalidArgument(format!(
                "forms over different fields ({} vs {})",
                self.field, other.field
            )));
        }
        if self.degree.e != other.degree.e {
            return Err(Error::SurfaceMismatch { left: self.degree.e, right: other.degree.e });
        }
        Ok(())
    }
}

/// `(row, col, coefficient)` triples of "multiply by `s`" from the basis of
/// `source` to the basis of `source + deg(s)`.
pub fn multiplication_entries(s: &Form, source: &DivisorClass) -> Vec<(usize, usize, i64)> {
    let target = BasisIndex::new(s.degree() + *source);
    let mut out = Vec::with_capacity(s.num_terms() * crate::cohomology::h0(source) as usize);
    for (col, m) in monomial_basis(source).iter().enumerate() {
        for (t, c) in s.terms() {
            out.push((target.index_of(&m.mul(t)), col, *c));
        }
    }
    out
}

/// Matrix of multiplication by `s`; columns follow the basis order of `source`.
pub fn multiplication_matrix(s: &Form, source: &DivisorClass) -> ExactMatrix {
    let target = s.degree() + *source;
    let rows = crate::cohomology::h0(&target) as usize;
    let cols = crate::cohomology::h0(source) as usize;
    let mut m = ExactMatrix::zeros(s.field(), rows, cols);
    for (i, j, c) in multiplication_entries(s, source) {
        m.add_entry(i, j, c);
    }
    m
}

/// Draws one scalar: uniform in F_p, or uniform in `[-10, 10]` over Q.
pub fn sample_scalar<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> i64 {
    match field {
        FieldSpec::Rational => rng.gen_range(-Q_COEFF_BOUND..=Q_COEFF_BOUND),
        FieldSpec::Prime(p) => rng.gen_range(0..p) as i64,
    }
}

/// Draws a nonzero scalar (used for torus points).
pub fn sample_unit<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> i64 {
    loop {
        let x = sample_scalar(field, rng);
        if x != 0 {
            return x;
        }
    }
}

/// A general form of degree `d`: every basis monomial receives a draw.
pub fn sample_form<R: Rng + ?Sized>(d: &DivisorClass, field: FieldSpec, rng: &mut R) -> Form {
    let mut form = Form::zero(*d, field);
    for m in monomial_basis(d) {
        let c = sample_scalar(field, rng);
        form.add_term(m, c);
    }
    form
}

/// Evaluates `f` at a torus point `(z, w, t0, t1)`.
pub fn evaluate(f: &Form, point: &[i64; 4]) -> Result<i64> {
    let field = f.field();
    if let Some(index) = point.iter().position(|&x| field.reduce(x) == 0) {
        return Err(Error::NonTorusPoint { index });
    }
    let pow = |x: i64, n: u32| (0..n).fold(1i64, |acc, _| field.mul(acc, x));
    let mut acc = 0;
    for (m, c) in f.terms() {
        let v = [pow(point[0], m.p), pow(point[1], m.q), pow(point[2], m.k0), pow(point[3], m.k1)]
            .into_iter()
            .fold(*c, |acc, x| field.mul(acc, x));
        acc = field.add(acc, v);
    }
    Ok(acc)
}
