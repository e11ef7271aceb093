//! Exact dense linear algebra over Q and F_p.
//!
//! Over F_p, elimination keeps rows in `u64` and postpones reductions: with
//! pivot rows reduced below `p`, each update adds less than `p^2`, so for the
//! default prime a row can absorb billions of updates before it must be
//! reduced. Over Q there are two exact routes: fraction-free (Bareiss)
//! elimination, and a certified multimodular rank. The latter takes the rank
//! modulo a prime as a lower bound and proves it is also an upper bound by
//! lifting a kernel basis to Q and checking it exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{inv_mod, is_prime, FieldSpec};

/// Matrices up to this many entries are ranked over Q by Bareiss directly.
const BAREISS_CUTOFF: usize = 48 * 48;
/// Primes tried by the certified rational rank before falling back to Bareiss.
const MAX_CERT_PRIMES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Entries {
    Fp(Vec<u32>),
    Q(Vec<BigInt>),
}

/// A dense row-major matrix over a [`FieldSpec`]. Rational matrices hold
/// integer entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Entries,
}

impl ExactMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        let data = match field {
            FieldSpec::Prime(_) => Entries::Fp(vec![0; rows * cols]),
            FieldSpec::Rational => Entries::Q(vec![BigInt::zero(); rows * cols]),
        };
        Self { field, rows, cols, data }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set_entry(i, i, 1);
        }
        m
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set_entry(i, j, v);
            }
        }
        m
    }

    pub fn from_fn(field: FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set_entry(i, j, f(i, j));
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        let idx = i * self.cols + j;
        match &self.data {
            Entries::Fp(v) => BigInt::from(v[idx]),
            Entries::Q(v) => v[idx].clone(),
        }
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: i64) {
        assert!(i < self.rows && j < self.cols);
        let idx = i * self.cols + j;
        match (&mut self.data, self.field) {
            (Entries::Fp(d), FieldSpec::Prime(p)) => d[idx] = v.rem_euclid(p as i64) as u32,
            (Entries::Q(d), _) => d[idx] = BigInt::from(v),
            _ => unreachable!(),
        }
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: i64) {
        assert!(i < self.rows && j < self.cols);
        let idx = i * self.cols + j;
        match (&mut self.data, self.field) {
            (Entries::Fp(d), FieldSpec::Prime(p)) => {
                d[idx] = ((d[idx] as i64 + v.rem_euclid(p as i64)) % p as i64) as u32
            }
            (Entries::Q(d), _) => d[idx] += v,
            _ => unreachable!(),
        }
    }

    /// `self[row_offset + k, dst_col] += coeff * src[k, src_col]` for every row `k` of `src`.
    pub fn add_scaled_column(&mut self, dst_col: usize, row_offset: usize, src: &ExactMatrix, src_col: usize, coeff: i64) {
        assert_eq!(self.field, src.field);
        assert!(row_offset + src.rows <= self.rows);
        let (dc, sc) = (self.cols, src.cols);
        match (&mut self.data, &src.data, self.field) {
            (Entries::Fp(d), Entries::Fp(s), FieldSpec::Prime(p)) => {
                let c = coeff.rem_euclid(p as i64) as u64;
                for k in 0..src.rows {
                    let x = &mut d[(row_offset + k) * dc + dst_col];
                    *x = ((*x as u64 + c * s[k * sc + src_col] as u64) % p) as u32;
                }
            }
            (Entries::Q(d), Entries::Q(s), _) => {
                for k in 0..src.rows {
                    let y = &s[k * sc + src_col];
                    if !y.is_zero() {
                        d[(row_offset + k) * dc + dst_col] += y * coeff;
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    /// Entries as `i64`; panics if a rational entry does not fit.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64().expect("entry exceeds i64")).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Entries::Fp(v) => v.iter().all(|&x| x == 0),
            Entries::Q(v) => v.iter().all(Zero::is_zero),
        }
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.rows, self.cols);
        let data = match &self.data {
            Entries::Fp(v) => Entries::Fp((0..r * c).map(|k| v[(k % r) * c + k / r]).collect()),
            Entries::Q(v) => Entries::Q((0..r * c).map(|k| v[(k % r) * c + k / r].clone()).collect()),
        };
        Self { field: self.field, rows: c, cols: r, data }
    }

    pub fn matmul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.field, other.field);
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let (n, m, k) = (self.rows, other.cols, self.cols);
        let data = match (&self.data, &other.data, self.field) {
            (Entries::Fp(a), Entries::Fp(b), FieldSpec::Prime(p)) => {
                let mut out = vec![0u32; n * m];
                for i in 0..n {
                    for j in 0..m {
                        let mut acc = 0u64;
                        for t in 0..k {
                            acc = (acc + a[i * k + t] as u64 * b[t * m + j] as u64) % p;
                        }
                        out[i * m + j] = acc as u32;
                    }
                }
                Entries::Fp(out)
            }
            (Entries::Q(a), Entries::Q(b), _) => {
                let mut out = vec![BigInt::zero(); n * m];
                for i in 0..n {
                    for t in 0..k {
                        let x = &a[i * k + t];
                        if x.is_zero() {
                            continue;
                        }
                        for j in 0..m {
                            out[i * m + j] += x * &b[t * m + j];
                        }
                    }
                }
                Entries::Q(out)
            }
            _ => unreachable!(),
        };
        ExactMatrix { field: self.field, rows: n, cols: m, data }
    }

    /// Stacks `blocks` vertically.
    pub fn vstack(field: FieldSpec, cols: usize, blocks: &[ExactMatrix]) -> ExactMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let data = match field {
            FieldSpec::Prime(_) => Entries::Fp(
                blocks
                    .iter()
                    .flat_map(|b| match &b.data {
                        Entries::Fp(v) => v.iter().copied(),
                        Entries::Q(_) => unreachable!(),
                    })
                    .collect(),
            ),
            FieldSpec::Rational => Entries::Q(
                blocks
                    .iter()
                    .flat_map(|b| match &b.data {
                        Entries::Q(v) => v.iter().cloned(),
                        Entries::Fp(_) => unreachable!(),
                    })
                    .collect(),
            ),
        };
        for b in blocks {
            assert_eq!((b.cols, b.field), (cols, field));
        }
        ExactMatrix { field, rows, cols, data }
    }

    /// Reduction of a rational (integer) matrix modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> ExactMatrix {
        assert!(is_prime(p));
        let data = match &self.data {
            Entries::Fp(v) => {
                assert_eq!(self.field, FieldSpec::Prime(p), "cannot change characteristic");
                v.clone()
            }
            Entries::Q(v) => v.iter().map(|x| bigint_mod(x, p) as u32).collect(),
        };
        ExactMatrix { field: FieldSpec::Prime(p), rows: self.rows, cols: self.cols, data: Entries::Fp(data) }
    }

    fn fp_words(&self) -> (Vec<u64>, u64) {
        match (&self.data, self.field) {
            (Entries::Fp(v), FieldSpec::Prime(p)) => (v.iter().map(|&x| x as u64).collect(), p),
            _ => panic!("not a prime-field matrix"),
        }
    }

    pub fn rank(&self) -> usize {
        match self.field {
            FieldSpec::Prime(p) => {
                let (mut data, _) = self.fp_words();
                fp_gauss(&mut data, self.rows, self.cols, p, false).len()
            }
            FieldSpec::Rational => rational_rank(self),
        }
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn cokernel_dim(&self) -> usize {
        self.rows - self.rank()
    }

    /// Rank of the reduction modulo `p`.
    pub fn rank_mod(&self, p: u64) -> usize {
        self.reduce_mod(p).rank()
    }

    /// Fraction-free Gaussian elimination over the integers. Rational
    /// matrices only.
    pub fn rank_bareiss(&self) -> usize {
        match &self.data {
            Entries::Q(v) => bareiss_rank(v.clone(), self.rows, self.cols),
            Entries::Fp(_) => self.rank(),
        }
    }

    /// A basis of the right kernel, one vector per row of the result.
    /// Over Q the vectors are scaled to be integral.
    pub fn right_kernel(&self) -> ExactMatrix {
        match self.field {
            FieldSpec::Prime(p) => {
                let (mut data, _) = self.fp_words();
                let pivots = fp_gauss(&mut data, self.rows, self.cols, p, true);
                let basis = fp_kernel_from_rref(&data, self.cols, &pivots, p);
                let mut out = ExactMatrix::zeros(self.field, basis.len(), self.cols);
                for (i, v) in basis.iter().enumerate() {
                    for (j, &x) in v.iter().enumerate() {
                        out.set_entry(i, j, x as i64);
                    }
                }
                out
            }
            FieldSpec::Rational => {
                let Entries::Q(v) = &self.data else { unreachable!() };
                let basis = rational_kernel(v, self.rows, self.cols);
                let rows = basis.len();
                let data = basis.into_iter().flatten().collect();
                ExactMatrix { field: self.field, rows, cols: self.cols, data: Entries::Q(data) }
            }
        }
    }

    /// A basis of the left kernel (vectors `y` with `y M = 0`), as rows.
    pub fn left_kernel(&self) -> ExactMatrix {
        self.transpose().right_kernel()
    }
}

pub fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

/// Gaussian elimination over F_p on a row-major buffer with delayed
/// reduction. Returns the pivot columns; the first `rank` rows then hold the
/// normalized pivot rows. With `jordan` the pivot columns are also cleared
/// above the pivots and every entry ends reduced, i.e. the reduced row
/// echelon form.
fn fp_gauss(data: &mut [u64], rows: usize, cols: usize, p: u64, jordan: bool) -> Vec<usize> {
    debug_assert!(p < (1 << 32));
    let sq = (p - 1) * (p - 1);
    let max_steps = (u64::MAX - p).checked_div(sq).map_or(usize::MAX, |s| s.max(1) as usize);
    let mut pivots = Vec::new();
    let mut piv = vec![0u32; cols];
    let mut steps = 0usize;
    for c in 0..cols {
        let rank = pivots.len();
        if rank == rows {
            break;
        }
        let mut found = None;
        for i in rank..rows {
            let x = data[i * cols + c] % p;
            data[i * cols + c] = x;
            if x != 0 {
                found = Some(i);
                break;
            }
        }
        let Some(i) = found else { continue };
        if i != rank {
            for j in 0..cols {
                data.swap(i * cols + j, rank * cols + j);
            }
        }
        let row = &mut data[rank * cols..(rank + 1) * cols];
        let inv = inv_mod(row[c], p);
        for j in c..cols {
            let v = (row[j] % p) * inv % p;
            row[j] = v;
            piv[j] = v as u32;
        }
        for i in 0..rows {
            if i == rank || (!jordan && i < rank) {
                continue;
            }
            let r = &mut data[i * cols..(i + 1) * cols];
            let f = r[c] % p;
            r[c] = 0;
            if f == 0 {
                continue;
            }
            let m = (p - f) as u32 as u64;
            for (x, &y) in r[c + 1..].iter_mut().zip(&piv[c + 1..]) {
                *x = x.wrapping_add(m * y as u64);
            }
        }
        pivots.push(c);
        steps += 1;
        if steps >= max_steps {
            let start = if jordan { 0 } else { rank + 1 };
            for x in data[start * cols..rows * cols].iter_mut() {
                *x %= p;
            }
            steps = 0;
        }
    }
    if jordan {
        for x in data.iter_mut() {
            *x %= p;
        }
    }
    pivots
}

fn fp_kernel_from_rref(data: &[u64], cols: usize, pivots: &[usize], p: u64) -> Vec<Vec<u64>> {
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - data[k * cols + f] % p) % p;
            }
            v
        })
        .collect()
}

fn bareiss_rank(mut a: Vec<BigInt>, rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(i) = (rank..rows).find(|&i| !a[i * cols + c].is_zero()) else { continue };
        if i != rank {
            for j in 0..cols {
                a.swap(i * cols + j, rank * cols + j);
            }
        }
        let pivot = a[rank * cols + c].clone();
        for i in rank + 1..rows {
            let factor = a[i * cols + c].clone();
            for j in c + 1..cols {
                let v = &pivot * &a[i * cols + j] - &factor * &a[rank * cols + j];
                a[i * cols + j] = v / &prev;
            }
            a[i * cols + c] = BigInt::zero();
        }
        // Rows above are untouched, so later divisions stay exact.
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Right kernel over Q through a rational RREF; vectors scaled to integers.
fn rational_kernel(v: &[BigInt], rows: usize, cols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let mut pivots = Vec::new();
    for c in 0..cols {
        let rank = pivots.len();
        if rank == rows {
            break;
        }
        let Some(i) = (rank..rows).find(|&i| !a[i * cols + c].is_zero()) else { continue };
        if i != rank {
            for j in 0..cols {
                a.swap(i * cols + j, rank * cols + j);
            }
        }
        let inv = a[rank * cols + c].recip();
        for j in c..cols {
            a[rank * cols + j] = &a[rank * cols + j] * &inv;
        }
        for i in 0..rows {
            if i == rank || a[i * cols + c].is_zero() {
                continue;
            }
            let f = a[i * cols + c].clone();
            for j in c..cols {
                let d = &f * &a[rank * cols + j];
                a[i * cols + j] -= d;
            }
        }
        pivots.push(c);
    }
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[k * cols + f].clone();
            }
            clear_denominators(&v)
        })
        .collect()
}

fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Primes just below 2^20; small enough that delayed reduction never
/// triggers, large enough that a bad prime is rare.
fn certification_primes() -> impl Iterator<Item = u64> {
    (1u64 << 19..1u64 << 20).rev().filter(|&n| is_prime(n))
}

/// Exact rank over Q: Bareiss for small matrices, otherwise a modular rank
/// certified by exact kernel vectors, falling back to Bareiss.
fn rational_rank(m: &ExactMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    if m.rows * m.cols <= BAREISS_CUTOFF {
        return m.rank_bareiss();
    }
    // Orient so the kernel to certify is the smaller one.
    let m = if m.rows < m.cols { m.transpose() } else { m.clone() };
    certified_rank(&m).unwrap_or_else(|| m.rank_bareiss())
}

/// Modular rank plus an exact kernel certificate, or `None` after
/// `MAX_CERT_PRIMES` primes.
fn certified_rank(m: &ExactMatrix) -> Option<usize> {
    let Entries::Q(entries) = &m.data else { unreachable!() };
    let cols = m.cols;
    let mut best: Option<Vec<usize>> = None;
    let mut modulus = BigInt::one();
    let mut residues: Vec<Vec<BigInt>> = Vec::new();
    for p in certification_primes().take(MAX_CERT_PRIMES) {
        let (mut data, _) = m.reduce_mod(p).fp_words();
        let pivots = fp_gauss(&mut data, m.rows, cols, p, true);
        if pivots.len() == cols {
            return Some(cols);
        }
        // A prime is good when it attains the largest rank with the
        // lexicographically first pivot set; restart on finding a better one.
        let better = match &best {
            None => true,
            Some(b) => pivots.len() > b.len() || (pivots.len() == b.len() && pivots < *b),
        };
        let same = best.as_ref() == Some(&pivots);
        if better {
            best = Some(pivots.clone());
            modulus = BigInt::one();
            residues.clear();
        } else if !same {
            continue;
        }
        let basis = fp_kernel_from_rref(&data, cols, &pivots, p);
        let pb = BigInt::from(p);
        if residues.is_empty() {
            residues = basis.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
        } else {
            let inv = BigInt::from(inv_mod(bigint_mod(&modulus, p), p));
            for (acc, v) in residues.iter_mut().zip(&basis) {
                for (a, &x) in acc.iter_mut().zip(v) {
                    // a + M * ((x - a) * M^{-1} mod p)
                    let t = ((BigInt::from(x) - &*a) * &inv).mod_floor(&pb);
                    *a += &modulus * t;
                }
            }
        }
        modulus *= &pb;
        if let Some(vectors) = reconstruct_all(&residues, &modulus) {
            if vectors.iter().all(|w| is_kernel_vector(entries, m.rows, cols, w)) {
                return Some(pivots.len());
            }
        }
    }
    None
}

fn reconstruct_all(residues: &[Vec<BigInt>], modulus: &BigInt) -> Option<Vec<Vec<BigInt>>> {
    residues
        .iter()
        .map(|v| {
            let q: Option<Vec<BigRational>> = v.iter().map(|u| rational_reconstruct(u, modulus)).collect();
            q.map(|q| clear_denominators(&q))
        })
        .collect()
}

/// Wang's rational reconstruction with symmetric bounds `sqrt(m/2)`.
fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

fn is_kernel_vector(entries: &[BigInt], rows: usize, cols: usize, w: &[BigInt]) -> bool {
    let support: Vec<usize> = (0..cols).filter(|&j| !w[j].is_zero()).collect();
    (0..rows).all(|i| {
        let row = &entries[i * cols..(i + 1) * cols];
        support.iter().fold(BigInt::zero(), |acc, &j| acc + &row[j] * &w[j]).is_zero()
    })
}
