//! Certification that `coker(phi)` is a locally free, Ulrich, simple bundle,
//! and computation of its self-Ext groups.
//!
//! All cohomology of the fixed blocks `A`, `B` and of their Hom bundles is
//! known in closed form, so every question reduces to the rank of one
//! explicit matrix built from multiplication by the entries of `phi`:
//!
//! * Ulrich: the `H^2`-map of the twist by `-2 c1(E)`, realized through Serre
//!   duality as the transpose of multiplication
//!   `H^0(K - B(-2c1)) -> H^0(K - A(-2c1))`.
//! * `h^0(H_r)`: the `H^0`-map `H^0(A) -> H^0(B)`.
//! * `Hom(H,H)`, `Ext^1(H,H)`: kernel and cokernel of
//!   `rho: End(B) -> Hom(A,H)`, precomposition with `phi` followed by the
//!   projection onto `coker(End(A) -> Hom(A,B))`.

use rand::Rng;
use serde::Serialize;

use crate::cohomology::{h0, line_bundle_cohomology, CohTable};
use crate::cox::{evaluate, monomial_basis, multiplication_entries, sample_unit, BasisIndex, Form};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lattice::{canonical_class, euler_char, DivisorClass};
use crate::presentation::{build_presentation, sample_phi, Presentation, ScrollConfig};
use crate::rng::{derive_seed, rng_from_seed, STREAM_PHI, STREAM_POINTS};
use crate::xla::ExactMatrix;

pub const DEFAULT_TRIALS: usize = 8;
pub const MAX_ATTEMPTS: usize = 5;

/// The morphism `phi: A -> B` as a `(delta + tau) x gamma` matrix of forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormMatrix {
    presentation: Presentation,
    field: FieldSpec,
    entries: Vec<Vec<Form>>,
    seed: Option<u64>,
}

impl FormMatrix {
    pub fn new(presentation: Presentation, field: FieldSpec, entries: Vec<Vec<Form>>, seed: Option<u64>) -> Result<Self> {
        if entries.len() != presentation.num_rows() {
            return Err(Error::InvalidArgument(format!("expected {} rows", presentation.num_rows())));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != presentation.num_cols() {
                return Err(Error::InvalidArgument(format!("expected {} columns", presentation.num_cols())));
            }
            let d = presentation.entry_degree(i);
            if let Some(f) = row.iter().find(|f| f.degree() != d || f.field() != field) {
                return Err(Error::InvalidArgument(format!(
                    "entry in row {i} has degree {} over {}, expected {d} over {field}",
                    f.degree(),
                    f.field()
                )));
            }
        }
        Ok(Self { presentation, field, entries, seed })
    }

    pub fn zero(presentation: &Presentation, field: FieldSpec) -> Self {
        let entries = (0..presentation.num_rows())
            .map(|i| vec![Form::zero(presentation.entry_degree(i), field); presentation.num_cols()])
            .collect();
        Self { presentation: presentation.clone(), field, entries, seed: None }
    }

    /// `phi` drawn from the `STREAM_PHI` stream of `seed`.
    pub fn sample(presentation: &Presentation, field: FieldSpec, seed: u64) -> Self {
        let mut rng = rng_from_seed(derive_seed(seed, STREAM_PHI));
        let mut phi = sample_phi(presentation, field, &mut rng);
        phi.seed = Some(seed);
        phi
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn num_rows(&self) -> usize {
        self.entries.len()
    }

    pub fn num_cols(&self) -> usize {
        self.presentation.num_cols()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form {
        &self.entries[i][j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, f: Form) -> Result<()> {
        if f.degree() != self.presentation.entry_degree(i) || f.field() != self.field {
            return Err(Error::InvalidArgument("entry degree or field mismatch".into()));
        }
        self.entries[i][j] = f;
        Ok(())
    }

    /// The scalar matrix `phi(x)` at a torus point.
    pub fn evaluate_at(&self, point: &[i64; 4]) -> Result<ExactMatrix> {
        let mut m = ExactMatrix::zeros(self.field, self.num_rows(), self.num_cols());
        for (i, row) in self.entries.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                m.set_entry(i, j, evaluate(f, point)?);
            }
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LocallyFree {
    Certified { trials: usize },
    Failed { point: [i64; 4] },
}

impl LocallyFree {
    pub fn is_certified(&self) -> bool {
        matches!(self, LocallyFree::Certified { .. })
    }
}

/// `phi` has full column rank at `trials` random torus points.
pub fn certify_locally_free<R: Rng + ?Sized>(phi: &FormMatrix, trials: usize, rng: &mut R) -> LocallyFree {
    for _ in 0..trials.max(1) {
        let point = [0; 4].map(|_| sample_unit(phi.field, rng));
        let m = phi.evaluate_at(&point).expect("torus point");
        if m.rank() < phi.num_cols() {
            return LocallyFree::Failed { point };
        }
    }
    LocallyFree::Certified { trials: trials.max(1) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankInfo {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
}

impl RankInfo {
    pub fn of(m: &ExactMatrix) -> Self {
        Self { rows: m.rows(), cols: m.cols(), rank: m.rank() }
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank
    }

    pub fn cokernel_dim(&self) -> usize {
        self.rows - self.rank
    }
}

fn twisted_blocks(p: &Presentation, twist: DivisorClass) -> (DivisorClass, [DivisorClass; 2]) {
    (p.block_a + twist, [p.block_b[0] + twist, p.block_b[1] + twist])
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Internal(what()))
    }
}

/// `[0, s0, s0 + s1, ...]`.
fn prefix_offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    std::iter::once(0)
        .chain(sizes.scan(0, |acc, s| {
            *acc += s;
            Some(*acc)
        }))
        .collect()
}

/// Sum of `mult * table` over the summands.
fn sum_tables(parts: &[(DivisorClass, i64)]) -> CohTable {
    parts.iter().fold(CohTable::ZERO, |acc, (d, m)| {
        let t = line_bundle_cohomology(d);
        CohTable { h0: acc.h0 + m * t.h0, h1: acc.h1 + m * t.h1, h2: acc.h2 + m * t.h2, chi: acc.chi + m * t.chi }
    })
}

/// Euler characteristics `(chi(A(T)), chi(B(T)))` of the twist by `-j c1(E)`.
pub fn twisted_euler_chars(p: &Presentation, j: i64) -> (i64, i64) {
    let (a, b) = twisted_blocks(p, -j * p.config.polarization());
    (p.gamma * euler_char(&a), p.delta * euler_char(&b[0]) + p.tau * euler_char(&b[1]))
}

/// Matrix of the dual of the `H^2`-map `H^2(A(-2c1)) -> H^2(B(-2c1))`:
/// `H^0(K - B(-2c1)) -> H^0(K - A(-2c1))`, `u -> (sum_i phi_ij u_i)_j`.
pub fn h2_dual_map(phi: &FormMatrix) -> Result<ExactMatrix> {
    let p = &phi.presentation;
    let k = canonical_class(p.config.e);
    let (a, b) = twisted_blocks(p, -2 * p.config.polarization());
    let (ka, kb) = (k - a, [k - b[0], k - b[1]]);
    for d in [ka, kb[0], kb[1]] {
        if d.a < 0 {
            return Err(Error::Unsupported(format!("Serre dual degree {d} has negative C-coefficient")));
        }
    }
    let dual_row = |i: usize| kb[usize::from(i as i64 >= p.delta)];
    let block_rows = h0(&ka) as usize;
    let col_offsets = prefix_offsets((0..phi.num_rows()).map(|i| h0(&dual_row(i)) as usize));
    let mut m = ExactMatrix::zeros(phi.field, block_rows * phi.num_cols(), col_offsets[phi.num_rows()]);
    for i in 0..phi.num_rows() {
        let source = dual_row(i);
        for j in 0..phi.num_cols() {
            for (r, c, v) in multiplication_entries(&phi.entries[i][j], &source) {
                m.add_entry(j * block_rows + r, col_offsets[i] + c, v);
            }
        }
    }
    Ok(m)
}

/// `H^0(A) -> H^0(B)` induced by `phi`.
pub fn h0_map(phi: &FormMatrix) -> ExactMatrix {
    let p = &phi.presentation;
    let block_cols = h0(&p.block_a) as usize;
    let row_offsets = prefix_offsets((0..phi.num_rows()).map(|i| h0(&block_of(p, i)) as usize));
    let mut m = ExactMatrix::zeros(phi.field, row_offsets[phi.num_rows()], block_cols * phi.num_cols());
    for i in 0..phi.num_rows() {
        for j in 0..phi.num_cols() {
            for (r, c, v) in multiplication_entries(&phi.entries[i][j], &p.block_a) {
                m.add_entry(row_offsets[i] + r, j * block_cols + c, v);
            }
        }
    }
    m
}

/// Cohomology table of `coker(phi)(-j c1(E))` for `j = 1, 2`, with the rank
/// data of the map that determines it (none for `j = 1`).
pub fn twisted_cohomology_with_map(phi: &FormMatrix, j: i64) -> Result<(CohTable, Option<RankInfo>)> {
    let p = &phi.presentation;
    let (a, b) = twisted_blocks(p, -j * p.config.polarization());
    let ta = sum_tables(&[(a, p.gamma)]);
    let tb = sum_tables(&[(b[0], p.delta), (b[1], p.tau)]);
    match j {
        1 => {
            require(ta.is_zero() && tb.is_zero(), || format!("first twist of the blocks is not acyclic: {ta:?} {tb:?}"))?;
            Ok((CohTable::ZERO, None))
        }
        2 => {
            require(ta.h0 == 0 && ta.h1 == 0 && tb.h0 == 0 && tb.h1 == 0, || {
                format!("second twist has lower cohomology: {ta:?} {tb:?}")
            })?;
            let dual = RankInfo::of(&h2_dual_map(phi)?);
            require(dual.rows as i64 == ta.h2 && dual.cols as i64 == tb.h2, || "H2-map shape mismatch".into())?;
            // The H^2-map is the transpose of `dual`.
            let table = CohTable::new(0, dual.cokernel_dim() as i64, dual.kernel_dim() as i64);
            Ok((table, Some(dual)))
        }
        _ => Err(Error::Unsupported(format!("twist j = {j}; only j = 1, 2"))),
    }
}

pub fn twisted_cohomology_of_coker(phi: &FormMatrix, j: i64) -> Result<CohTable> {
    twisted_cohomology_with_map(phi, j).map(|(t, _)| t)
}

/// `h^0(H_r)` from the untwisted sequence, with the `H^0`-map rank data.
pub fn h0_of_coker(phi: &FormMatrix) -> Result<(i64, RankInfo)> {
    let p = &phi.presentation;
    let ta = line_bundle_cohomology(&p.block_a);
    require(ta.h1 == 0, || format!("h1(A) = {} != 0", ta.h1))?;
    let info = RankInfo::of(&h0_map(phi));
    Ok((info.cokernel_dim() as i64, info))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExtDims {
    pub hom: i64,
    pub ext1: i64,
    pub ext2: i64,
    pub end_a: i64,
    pub end_b: i64,
    pub hom_ab: i64,
    /// Rank of `End(A) -> Hom(A,B)`.
    pub rank_phi0: usize,
    pub rho: RankInfo,
}

/// Degrees of the Hom bundles between blocks: `B^v A`, `B^v B`, `A^v B`.
fn structural_vanishing(p: &Presentation) -> Result<()> {
    let e = p.config.e;
    let [b1, b2] = p.block_b;
    let a = p.block_a;
    for d in [a - b1, a - b2] {
        require(line_bundle_cohomology(&d).is_zero(), || format!("H(B^v A) nonzero in degree {d}"))?;
    }
    for d in [DivisorClass::new(0, 0, e), b2 - b1, b1 - b2, b1 - a, b2 - a] {
        let t = line_bundle_cohomology(&d);
        require(t.h1 == 0 && t.h2 == 0, || format!("higher cohomology in degree {d}: {t:?}"))?;
    }
    require(b2 - b1 == DivisorClass::new(1, e - 1, e) && b1 - a == DivisorClass::new(0, 1, e), || {
        "unexpected block degrees".into()
    })
}

/// The matrix `Phi0` of `g -> phi g` on one column: column `l` is the
/// coefficient vector of column `l` of `phi`, blocks stacked by row of `phi`.
fn phi0_matrix(phi: &FormMatrix) -> (ExactMatrix, Vec<usize>) {
    let p = &phi.presentation;
    let offsets = prefix_offsets((0..phi.num_rows()).map(|i| h0(&p.entry_degree(i)) as usize));
    let mut m = ExactMatrix::zeros(phi.field, offsets[phi.num_rows()], phi.num_cols());
    for i in 0..phi.num_rows() {
        for l in 0..phi.num_cols() {
            for (t, c) in phi.entries[i][l].coefficient_vector().into_iter().enumerate() {
                m.add_entry(offsets[i] + t, l, c);
            }
        }
    }
    (m, offsets)
}

/// `rho: End(B) -> Hom(A, H)`, stacked over the summands of `A`.
pub fn rho_matrix(phi: &FormMatrix) -> Result<(ExactMatrix, usize)> {
    let p = &phi.presentation;
    structural_vanishing(p)?;
    let (phi0, offsets) = phi0_matrix(phi);
    let n0 = phi0.left_kernel();
    let rank_phi0 = phi0.rows() - n0.rows();
    let coker = n0.rows();

    // End(B) basis: (target row i', source row i, monomial of B_i' - B_i).
    let (delta, rows) = (p.delta as usize, phi.num_rows());
    let mut basis: Vec<(usize, usize, crate::cox::Monomial)> = Vec::new();
    for tgt in 0..rows {
        for src in 0..rows {
            let d = block_of(p, tgt) - block_of(p, src);
            if src >= delta && tgt < delta {
                continue;
            }
            for m in monomial_basis(&d) {
                basis.push((tgt, src, m));
            }
        }
    }
    let mut rho = ExactMatrix::zeros(phi.field, coker * phi.num_cols(), basis.len());
    let indices: Vec<BasisIndex> = (0..rows).map(|i| BasisIndex::new(p.entry_degree(i))).collect();
    for j in 0..phi.num_cols() {
        for (col, (tgt, src, m)) in basis.iter().enumerate() {
            // psi = m at (tgt, src): column j of psi phi is m * phi_{src, j} in row tgt.
            for (t, c) in phi.entries[*src][j].terms() {
                let row = offsets[*tgt] + indices[*tgt].index_of(&m.mul(t));
                rho.add_scaled_column(col, j * coker, &n0, row, *c);
            }
        }
    }
    Ok((rho, rank_phi0))
}

fn block_of(p: &Presentation, i: usize) -> DivisorClass {
    p.block_b[usize::from(i as i64 >= p.delta)]
}

/// `(hom, ext1, ext2)` of `H = coker(phi)` with itself.
pub fn ext_dims(phi: &FormMatrix) -> Result<ExtDims> {
    let p = &phi.presentation;
    let (rho, rank_phi0) = rho_matrix(phi)?;
    let rho = RankInfo::of(&rho);
    let (gamma, delta, tau) = (p.gamma, p.delta, p.tau);
    let m0 = h0(&(p.block_b[0] - p.block_a)) * delta + h0(&(p.block_b[1] - p.block_a)) * tau;
    let end_b = delta * delta + tau * tau + delta * tau * h0(&(p.block_b[1] - p.block_b[0]));
    require(rho.cols as i64 == end_b, || "End(B) basis size".into())?;
    Ok(ExtDims {
        hom: rho.kernel_dim() as i64,
        ext1: rho.cokernel_dim() as i64,
        ext2: 0,
        end_a: gamma * gamma,
        end_b,
        hom_ab: gamma * m0,
        rank_phi0,
        rho,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    pub trials: usize,
    pub compute_ext: bool,
    pub max_attempts: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { trials: DEFAULT_TRIALS, compute_ext: true, max_attempts: MAX_ATTEMPTS }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub locally_free: LocallyFree,
    pub ulrich: bool,
    pub c1_match: bool,
    pub c1: DivisorClass,
    pub c2_value: i64,
    pub h0: i64,
    pub h0_expected: i64,
    pub h0_match: bool,
    pub simple: Option<bool>,
    pub hom: Option<i64>,
    pub ext1: Option<i64>,
    pub ext2: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matrices {
    pub h2_map: Option<RankInfo>,
    pub h0_map: RankInfo,
    pub rho: Option<RankInfo>,
    pub phi0_rank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub seed: u64,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub config: ScrollConfig,
    pub seed: Option<u64>,
    pub field: FieldSpec,
    pub gamma: i64,
    pub delta: i64,
    pub tau: i64,
    pub verdicts: Verdicts,
    pub twisted: [CohTable; 2],
    pub matrices: Matrices,
    pub ext: Option<ExtDims>,
    pub attempts: Vec<Attempt>,
}

impl VerificationReport {
    /// Reasons this sample is not a general point, empty if it is.
    pub fn defects(&self) -> Vec<&'static str> {
        let v = &self.verdicts;
        let mut out = Vec::new();
        if !v.locally_free.is_certified() {
            out.push("not locally free");
        }
        if !v.ulrich {
            out.push("H2-map rank deficient");
        }
        if !v.h0_match {
            out.push("H0-map not injective");
        }
        if v.simple == Some(false) {
            out.push("hom != 1");
        }
        if !v.c1_match {
            out.push("c1 mismatch");
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.defects().is_empty()
    }
}

/// Verifies one sample of `phi`.
pub fn verify_ulrich(phi: &FormMatrix, options: &VerifyOptions) -> Result<VerificationReport> {
    let p = &phi.presentation;
    let config = p.config;
    let mut points = rng_from_seed(derive_seed(phi.seed.unwrap_or(0), STREAM_POINTS));
    let locally_free = certify_locally_free(phi, options.trials, &mut points);

    let (t1, _) = twisted_cohomology_with_map(phi, 1)?;
    let (t2, h2) = twisted_cohomology_with_map(phi, 2)?;
    let h2 = h2.expect("j = 2 has a map");
    require(h2.rows == h2.cols, || format!("H2-map not square: {}x{}", h2.cols, h2.rows))?;
    let ulrich = t1.is_zero() && t2.is_zero() && h2.rank == h2.rows;

    let c1 = p.c1_b() - p.c1_a();
    let (h0_value, h0_info) = h0_of_coker(phi)?;
    let h0_expected = config.r * config.polarization().square();

    let ext = if options.compute_ext { Some(ext_dims(phi)?) } else { None };
    Ok(VerificationReport {
        config,
        seed: phi.seed,
        field: phi.field,
        gamma: p.gamma,
        delta: p.delta,
        tau: p.tau,
        verdicts: Verdicts {
            locally_free,
            ulrich,
            c1_match: c1 == crate::presentation::c1_target(&config),
            c1,
            c2_value: p.c2(),
            h0: h0_value,
            h0_expected,
            h0_match: h0_value == h0_expected,
            simple: ext.map(|x| x.hom == 1),
            hom: ext.map(|x| x.hom),
            ext1: ext.map(|x| x.ext1),
            ext2: ext.map(|x| x.ext2),
        },
        twisted: [t1, t2],
        matrices: Matrices { h2_map: Some(h2), h0_map: h0_info, rho: ext.map(|x| x.rho), phi0_rank: ext.map(|x| x.rank_phi0) },
        ext,
        attempts: Vec::new(),
    })
}

/// Samples and verifies, resampling with `seed + 1, seed + 2, ...` when the
/// sample is not general, up to `options.max_attempts` draws. Every attempt
/// is logged in the report; the report of the last attempt is returned.
pub fn verify_config(config: &ScrollConfig, field: FieldSpec, seed: u64, options: &VerifyOptions) -> Result<VerificationReport> {
    let p = build_presentation(config)?;
    let mut attempts = Vec::new();
    let mut last = None;
    for n in 0..options.max_attempts.max(1) as u64 {
        let s = seed.wrapping_add(n);
        let report = verify_ulrich(&FormMatrix::sample(&p, field, s), options)?;
        let defects = report.defects();
        attempts.push(Attempt {
            seed: s,
            outcome: if defects.is_empty() { "general".into() } else { defects.join(", ") },
        });
        let done = defects.is_empty();
        last = Some(report);
        if done {
            break;
        }
    }
    let mut report = last.expect("at least one attempt");
    report.attempts = attempts;
    Ok(report)
}

/// All `(a, b)` with `|a|, |b| <= bound` that are Ulrich line bundles for `(3, b)`.
pub fn search_line_bundles(e: i64, b: i64, bound: i64) -> Result<Vec<DivisorClass>> {
    if bound < 1 {
        return Err(Error::InvalidArgument("box must be at least 1".into()));
    }
    if e < 0 {
        return Err(Error::InvalidArgument("e must be nonnegative".into()));
    }
    let h = DivisorClass::new(3, b, e);
    let mut out = Vec::new();
    for a in -bound..=bound {
        for bb in -bound..=bound {
            let d = DivisorClass::new(a, bb, e);
            if crate::cohomology::is_ulrich_line_bundle(&d, &h) {
                out.push(d);
            }
        }
    }
    Ok(out)
}
