//! The 3-fold scroll `X = P(E)` over `F_e`, `c1(E) = (3, b)`, `c2(E) = k`,
//! polarized by the tautological class `xi`.
//!
//! Divisors are `m xi + phi^* L`. Intersections use `xi^2 = xi c1 - c2`.
//! Line-bundle cohomology is pushed down to `F_e`: for `m >= 0` it is the
//! cohomology of `Sym^m E (x) L`, filtered with quotients
//! `A^{m-q} B^q L` from `0 -> A -> E -> B -> 0`; for `m <= -2` it is the
//! cohomology of `(Sym^{-m-2} E)^v (x) det E^v (x) L` shifted up by one.

use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::cohomology::{line_bundle_cohomology, CohTable};
use crate::error::{Error, Result};
use crate::lattice::{canonical_class, euler_char, DivisorClass};
use crate::presentation::{validate_config, ScrollConfig};

/// `m xi + phi^* l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ScrollClass {
    pub m: i64,
    pub l: DivisorClass,
}

impl ScrollClass {
    pub fn new(m: i64, l: DivisorClass) -> Self {
        Self { m, l }
    }

    pub fn xi(e: i64) -> Self {
        Self::new(1, DivisorClass::new(0, 0, e))
    }

    pub fn pullback(l: DivisorClass) -> Self {
        Self::new(0, l)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(k * self.m, k * self.l)
    }
}

impl std::ops::Add for ScrollClass {
    type Output = ScrollClass;
    fn add(self, o: ScrollClass) -> ScrollClass {
        ScrollClass::new(self.m + o.m, self.l + o.l)
    }
}

impl std::ops::Sub for ScrollClass {
    type Output = ScrollClass;
    fn sub(self, o: ScrollClass) -> ScrollClass {
        ScrollClass::new(self.m - o.m, self.l - o.l)
    }
}

impl fmt::Display for ScrollClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}xi + phi*({}, {})", self.m, self.l.a, self.l.b)
    }
}

fn check_surface(config: &ScrollConfig, classes: &[&ScrollClass]) -> Result<()> {
    match classes.iter().find(|c| c.l.e != config.e) {
        Some(c) => Err(Error::SurfaceMismatch { left: config.e, right: c.l.e }),
        None => Ok(()),
    }
}

/// Intersection number `x y z` on `X`.
pub fn triple_product(x: &ScrollClass, y: &ScrollClass, z: &ScrollClass, config: &ScrollConfig) -> Result<i64> {
    check_surface(config, &[x, y, z])?;
    let c1 = config.polarization();
    let xi3 = c1.square() - config.k;
    let d = |a: &DivisorClass, b: &DivisorClass| a.dot(b).expect("same surface");
    Ok(x.m * y.m * z.m * xi3
        + x.m * y.m * d(&c1, &z.l)
        + x.m * z.m * d(&c1, &y.l)
        + y.m * z.m * d(&c1, &x.l)
        + x.m * d(&y.l, &z.l)
        + y.m * d(&x.l, &z.l)
        + z.m * d(&x.l, &y.l))
}

/// Canonical class `K_X = -2 xi + phi^*(K + c1(E))`.
pub fn canonical_class_x(config: &ScrollConfig) -> ScrollClass {
    ScrollClass::new(-2, canonical_class(config.e) + config.polarization())
}

/// Rank and first Chern class of a bundle on `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScrollBundleData {
    pub rank: i64,
    pub c1: ScrollClass,
    /// `c1(H_r)` when the bundle is `xi (x) phi^*(H_r(-c1(E)))`.
    pub surface_c1: Option<DivisorClass>,
}

impl ScrollBundleData {
    /// `U = xi (x) phi^* F(-c1(E))` for a rank-`r` bundle `F` with `c1(F) = c1`.
    pub fn from_surface(config: &ScrollConfig, r: i64, c1: DivisorClass) -> Self {
        let l = c1 - r * config.polarization();
        Self { rank: r, c1: ScrollClass::new(r, l), surface_c1: Some(c1) }
    }

    pub fn direct_sum(&self, other: &ScrollBundleData) -> Self {
        Self { rank: self.rank + other.rank, c1: self.c1 + other.c1, surface_c1: None }
    }
}

/// Slope `c1(U) xi^2 / r`.
pub fn slope(u: &ScrollBundleData, config: &ScrollConfig) -> Result<Ratio<i64>> {
    if u.rank <= 0 {
        return Err(Error::InvalidArgument("rank must be positive".into()));
    }
    let xi = ScrollClass::xi(config.e);
    Ok(Ratio::new(triple_product(&u.c1, &xi, &xi, config)?, u.rank))
}

/// The pulled-back part of `c1(U_r)` as printed for the rank-`r` bundles.
pub fn printed_c1_pullback(config: &ScrollConfig) -> DivisorClass {
    let ScrollConfig { e, b, r, .. } = *config;
    if r % 2 == 0 {
        DivisorClass::new(r / 2, r / 2 * (b - e - 2), e)
    } else {
        let h = (r - 3) / 2;
        DivisorClass::new(3, b - 3, e) + DivisorClass::new(h, h * (b - e - 2), e)
    }
}

pub fn printed_slope(config: &ScrollConfig) -> i64 {
    8 * config.b - config.k - 12 * config.e - 3
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct C1Check {
    pub c1_from_surface: ScrollClass,
    pub c1_printed: ScrollClass,
    pub c1_match: bool,
    /// `K_X + 4 xi`, rank 2 only.
    pub special_class: Option<ScrollClass>,
    pub special: Option<bool>,
}

/// Compares `r xi + phi^*(c1(H_r) - r c1(E))` with the printed `c1(U_r)`, and
/// for `r = 2` tests `c1(U_2) = K_X + 4 xi`.
pub fn check_c1_and_specialness(config: &ScrollConfig) -> Result<C1Check> {
    if config.r < 2 {
        return Err(Error::Unsupported("rank must be at least 2".into()));
    }
    let u = ScrollBundleData::from_surface(config, config.r, crate::presentation::c1_target(config));
    let printed = ScrollClass::new(config.r, printed_c1_pullback(config));
    let special_class = (config.r == 2).then(|| canonical_class_x(config) + ScrollClass::xi(config.e).scale(4));
    Ok(C1Check {
        c1_from_surface: u.c1,
        c1_printed: printed,
        c1_match: u.c1 == printed,
        special: special_class.map(|k| k == u.c1),
        special_class,
    })
}

/// Pullback criterion for a line bundle `F` on `F_e`: `xi (x) phi^* F` is
/// Ulrich iff `F` and `F - c1(E)` have no cohomology.
pub fn pullback_ulrich_criterion(f: &DivisorClass, config: &ScrollConfig) -> bool {
    pullback_ulrich_from_tables(&line_bundle_cohomology(f), &line_bundle_cohomology(&(*f - config.polarization())))
}

/// The same criterion given the tables of `F` and `F(-c1(E))` for a bundle
/// `F`; for `F = H_r(-c1(E))` these are the `j = 1, 2` tables of `H_r`.
pub fn pullback_ulrich_from_tables(f: &CohTable, f_twisted: &CohTable) -> bool {
    f.is_zero() && f_twisted.is_zero()
}

/// Cohomology of a line bundle on `X`, `h^0..h^3`: exact, or bounds when a
/// connecting map in the filtration could be nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScrollCohomology {
    Exact { h: [i64; 4], chi: i64 },
    Unknown { lower: [i64; 4], upper: [i64; 4], chi: i64 },
}

impl ScrollCohomology {
    pub fn is_exact(&self) -> bool {
        matches!(self, ScrollCohomology::Exact { .. })
    }

    pub fn chi(&self) -> i64 {
        match self {
            ScrollCohomology::Exact { chi, .. } | ScrollCohomology::Unknown { chi, .. } => *chi,
        }
    }

    pub fn bounds(&self) -> ([i64; 4], [i64; 4]) {
        match *self {
            ScrollCohomology::Exact { h, .. } => (h, h),
            ScrollCohomology::Unknown { lower, upper, .. } => (lower, upper),
        }
    }

    /// Known to vanish in every degree.
    pub fn is_zero(&self) -> bool {
        matches!(self, ScrollCohomology::Exact { h, .. } if h.iter().all(|&x| x == 0))
    }

    /// Known to be nonzero somewhere.
    pub fn is_certainly_nonzero(&self) -> bool {
        self.chi() != 0 || self.bounds().0.iter().any(|&x| x > 0)
    }
}

impl Serialize for ScrollCohomology {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        match self {
            ScrollCohomology::Exact { h, chi } => {
                map.serialize_entry("status", "exact")?;
                map.serialize_entry("h", h)?;
                map.serialize_entry("chi", chi)?;
            }
            ScrollCohomology::Unknown { lower, upper, chi } => {
                map.serialize_entry("status", "unknown")?;
                map.serialize_entry("lower", lower)?;
                map.serialize_entry("upper", upper)?;
                map.serialize_entry("chi", chi)?;
            }
        }
        map.end()
    }
}

/// Interval cohomology of a sheaf on `F_e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Bounds {
    lo: [i64; 3],
    hi: [i64; 3],
    chi: i64,
}

impl Bounds {
    const ZERO: Bounds = Bounds { lo: [0; 3], hi: [0; 3], chi: 0 };

    fn line(d: &DivisorClass) -> Self {
        let t = line_bundle_cohomology(d);
        let h = [t.h0, t.h1, t.h2];
        Bounds { lo: h, hi: h, chi: t.chi }
    }

    /// Bounds for the middle term `Y` of `0 -> X -> Y -> Z -> 0`. Exact when
    /// every connecting map `H^i(Z) -> H^{i+1}(X)` has a zero side.
    fn extension(x: &Bounds, z: &Bounds) -> Bounds {
        // Largest possible rank of H^i(Z) -> H^{i+1}(X).
        let conn = |i: usize| if i < 2 { z.hi[i].min(x.hi[i + 1]) } else { 0 };
        let mut lo = [0; 3];
        let mut hi = [0; 3];
        for i in 0..3 {
            hi[i] = x.hi[i] + z.hi[i];
            let lost = conn(i) + if i > 0 { conn(i - 1) } else { 0 };
            lo[i] = (x.lo[i] + z.lo[i] - lost).max(0);
        }
        Bounds { lo, hi, chi: x.chi + z.chi }
    }
}

/// Filtration pieces on `F_e` and whether `X`-cohomology is shifted by one.
fn pieces(d: &ScrollClass, config: &ScrollConfig) -> (Vec<DivisorClass>, bool) {
    let (a, b) = (config.class_a(), config.class_b());
    if d.m >= 0 {
        ((0..=d.m).map(|q| d.l + (d.m - q) * a + q * b).collect(), false)
    } else if d.m == -1 {
        (Vec::new(), false)
    } else {
        let n = -d.m - 2;
        let base = d.l - config.polarization();
        // Dual filtration: quotients come in the opposite order.
        ((0..=n).rev().map(|q| base - (n - q) * a - q * b).collect(), true)
    }
}

/// `h^i(X, D)` for `D = m xi + phi^* L`.
pub fn scroll_line_cohomology(d: &ScrollClass, config: &ScrollConfig) -> Result<ScrollCohomology> {
    check_surface(config, &[d])?;
    let (pieces, shifted) = pieces(d, config);
    let total = pieces.iter().fold(Bounds::ZERO, |acc, p| Bounds::extension(&acc, &Bounds::line(p)));
    let lift = |h: [i64; 3]| if shifted { [0, h[0], h[1], h[2]] } else { [h[0], h[1], h[2], 0] };
    let chi = if shifted { -total.chi } else { total.chi };
    debug_assert_eq!(total.chi, pieces.iter().map(euler_char).sum::<i64>());
    Ok(if total.lo == total.hi {
        ScrollCohomology::Exact { h: lift(total.lo), chi }
    } else {
        ScrollCohomology::Unknown { lower: lift(total.lo), upper: lift(total.hi), chi }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UlrichVerdict {
    Ulrich,
    NotUlrich,
    Unknown,
}

/// Ulrich test on `X` w.r.t. `xi`: `D - j xi` acyclic for `j = 1, 2, 3`.
pub fn scroll_ulrich_line_bundle(d: &ScrollClass, config: &ScrollConfig) -> Result<(UlrichVerdict, Vec<ScrollCohomology>)> {
    let tables = (1..=3)
        .map(|j| scroll_line_cohomology(&(*d - ScrollClass::xi(config.e).scale(j)), config))
        .collect::<Result<Vec<_>>>()?;
    let verdict = if tables.iter().all(ScrollCohomology::is_zero) {
        UlrichVerdict::Ulrich
    } else if tables.iter().any(ScrollCohomology::is_certainly_nonzero) {
        UlrichVerdict::NotUlrich
    } else {
        UlrichVerdict::Unknown
    };
    Ok((verdict, tables))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateResult {
    pub name: String,
    pub b: i64,
    pub k: i64,
    pub t: Option<i64>,
    pub class: ScrollClass,
    pub verdict: UlrichVerdict,
    pub expected: UlrichVerdict,
    pub twists: Vec<ScrollCohomology>,
}

impl CandidateResult {
    pub fn passed(&self) -> bool {
        self.verdict == self.expected
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MainTheoremAReport {
    pub e: i64,
    pub t_max: i64,
    pub b_max: i64,
    pub candidates: Vec<CandidateResult>,
    pub all_exact: bool,
    pub passed: bool,
}

/// The line-bundle candidates `L1 = xi + (2,-1)`, `L2 = xi + (-1, b-1)`,
/// `M1 = 2xi + (-1,-t-1)`, `M2 = (2, 3t-1)`.
pub fn candidate_classes(e: i64, b: i64, t: i64) -> [(&'static str, ScrollClass); 4] {
    let c = |a, bb| DivisorClass::new(a, bb, e);
    [
        ("L1", ScrollClass::new(1, c(2, -1))),
        ("L2", ScrollClass::new(1, c(-1, b - 1))),
        ("M1", ScrollClass::new(2, c(-1, -t - 1))),
        ("M2", ScrollClass::new(0, c(2, 3 * t - 1))),
    ]
}

/// Runs the candidates. `L1`, `L2` are tried at every valid `(b, k)` with
/// `b <= b_max`. For `e = 0`, `M1`, `M2` are tried at `(b, k) = (2t, 3t)`,
/// `t = 1..t_max`, and expected Ulrich; for `e > 0` they are tried with
/// `t = b/2` at every valid `(b, k)` with even `b <= b_max`, and every
/// candidate is expected to fail.
pub fn verify_main_theorem_a(e: i64, t_max: i64, b_max: i64) -> Result<MainTheoremAReport> {
    if e < 0 || t_max < 1 {
        return Err(Error::InvalidArgument("need e >= 0 and t_max >= 1".into()));
    }
    let expected = if e == 0 { UlrichVerdict::Ulrich } else { UlrichVerdict::NotUlrich };
    let mut candidates = Vec::new();
    let mut run = |name: &str, class: ScrollClass, config: &ScrollConfig, t: Option<i64>| -> Result<()> {
        let (verdict, twists) = scroll_ulrich_line_bundle(&class, config)?;
        candidates.push(CandidateResult { name: name.into(), b: config.b, k: config.k, t, class, verdict, expected, twists });
        Ok(())
    };
    for b in 3 * e + 2..=b_max {
        for k in b - e + 1..2 * b - 4 * e {
            let config = validate_config(e, b, k, 1)?;
            for (name, class) in candidate_classes(e, b, b / 2).into_iter().take(2) {
                run(name, class, &config, None)?;
            }
            if e > 0 && b % 2 == 0 {
                for (name, class) in candidate_classes(e, b, b / 2).into_iter().skip(2) {
                    run(name, class, &config, Some(b / 2))?;
                }
            }
        }
    }
    if e == 0 {
        for t in 1..=t_max {
            let config = validate_config(0, 2 * t, 3 * t, 1)?;
            for (name, class) in candidate_classes(0, 2 * t, t).into_iter().skip(2) {
                run(name, class, &config, Some(t))?;
            }
        }
    }
    let all_exact = candidates.iter().all(|c| c.verdict != UlrichVerdict::Unknown);
    let passed = all_exact && candidates.iter().all(CandidateResult::passed);
    Ok(MainTheoremAReport { e, t_max, b_max, candidates, all_exact, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::build_presentation;

    fn cfg(e: i64, b: i64, k: i64, r: i64) -> ScrollConfig {
        validate_config(e, b, k, r).unwrap()
    }

    fn cls(a: i64, b: i64, e: i64) -> DivisorClass {
        DivisorClass::new(a, b, e)
    }

    #[test]
    fn intersection_examples() {
        let c = cfg(1, 5, 5, 2);
        let xi = ScrollClass::xi(1);
        let f = ScrollClass::pullback(cls(0, 1, 1));
        let sec = ScrollClass::pullback(cls(1, 0, 1));
        assert_eq!(triple_product(&xi, &xi, &xi, &c).unwrap(), 16);
        assert_eq!(triple_product(&xi, &xi, &f, &c).unwrap(), 3);
        assert_eq!(triple_product(&sec, &f, &f, &c).unwrap(), 0);
        assert_eq!(triple_product(&xi, &sec, &sec, &c).unwrap(), -1);
        assert!(triple_product(&xi, &xi, &ScrollClass::xi(0), &c).is_err());
    }

    #[test]
    fn degree_identity() {
        for e in 0..=3 {
            for b in 3 * e + 2..=3 * e + 12 {
                for k in b - e + 1..2 * b - 4 * e {
                    let c = cfg(e, b, k, 2);
                    let xi = ScrollClass::xi(e);
                    assert_eq!(triple_product(&xi, &xi, &xi, &c).unwrap(), 6 * b - 9 * e - k);
                    // xi^2 - c1 xi + c2 = 0 against any divisor.
                    let y = ScrollClass::new(2, cls(1, -3, e));
                    let c1 = ScrollClass::pullback(c.polarization());
                    let lhs = triple_product(&xi, &xi, &y, &c).unwrap() - triple_product(&c1, &xi, &y, &c).unwrap();
                    // c2 (a point class on F_e) times y is y.m.
                    assert_eq!(lhs, -k * y.m);
                }
            }
        }
    }

    #[test]
    fn triple_product_is_symmetric() {
        let c = cfg(2, 9, 9, 2);
        let xs = [ScrollClass::new(1, cls(2, -1, 2)), ScrollClass::new(-3, cls(0, 4, 2)), ScrollClass::new(2, cls(-1, 1, 2))];
        let v = triple_product(&xs[0], &xs[1], &xs[2], &c).unwrap();
        for p in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            assert_eq!(triple_product(&xs[p[0]], &xs[p[1]], &xs[p[2]], &c).unwrap(), v);
        }
    }

    #[test]
    fn slopes() {
        for (e, b, k, r, mu) in [(1, 5, 5, 2, 20), (0, 4, 5, 3, 24)] {
            let c = cfg(e, b, k, r);
            let u = ScrollBundleData::from_surface(&c, r, crate::presentation::c1_target(&c));
            assert_eq!(slope(&u, &c).unwrap(), Ratio::from_integer(mu));
            assert_eq!(slope(&u.direct_sum(&u), &c).unwrap(), Ratio::from_integer(mu));
        }
        for e in 0..=2 {
            for b in 3 * e + 2..=3 * e + 8 {
                for k in b - e + 1..2 * b - 4 * e {
                    for r in 2..=8 {
                        let c = cfg(e, b, k, r);
                        let u = ScrollBundleData::from_surface(&c, r, crate::presentation::c1_target(&c));
                        assert_eq!(slope(&u, &c).unwrap(), Ratio::from_integer(printed_slope(&c)));
                    }
                }
            }
        }
    }

    #[test]
    fn c1_and_specialness() {
        for e in 0..=3 {
            for b in 3 * e + 2..=3 * e + 10 {
                for r in 2..=8 {
                    let res = check_c1_and_specialness(&cfg(e, b, b - e + 1, r)).unwrap();
                    assert!(res.c1_match);
                    assert_eq!(res.special, (r == 2).then_some(true));
                }
            }
        }
        let c = cfg(1, 5, 5, 4);
        assert_eq!(printed_c1_pullback(&c), cls(2, 4, 1));
        let c = cfg(1, 5, 5, 3);
        assert_eq!(printed_c1_pullback(&c), cls(3, 2, 1));
        let c = cfg(1, 5, 5, 2);
        let res = check_c1_and_specialness(&c).unwrap();
        assert_eq!(res.c1_from_surface, ScrollClass::new(2, cls(1, 5 - 1 - 2, 1)));
    }

    #[test]
    fn pullback_criterion_examples() {
        let c = cfg(0, 4, 5, 1);
        assert!(pullback_ulrich_criterion(&cls(2, -1, 0), &c));
        assert!(!pullback_ulrich_criterion(&cls(0, 0, 0), &c));
        // Agrees with the surface criterion through F -> F + c1(E).
        for e in 0..=2 {
            let b = 3 * e + 4;
            let c = cfg(e, b, b - e + 1, 1);
            for a in -8..=8 {
                for bb in -15..=15 {
                    let f = cls(a, bb, e);
                    assert_eq!(
                        pullback_ulrich_criterion(&f, &c),
                        crate::cohomology::is_ulrich_line_bundle(&(f + c.polarization()), &c.polarization())
                    );
                }
            }
        }
    }

    #[test]
    fn pullback_of_certified_bundle() {
        use crate::verifier::{twisted_cohomology_of_coker, FormMatrix};
        let c = cfg(1, 5, 5, 2);
        let phi = FormMatrix::sample(&build_presentation(&c).unwrap(), crate::FieldSpec::default(), 42);
        let t1 = twisted_cohomology_of_coker(&phi, 1).unwrap();
        let t2 = twisted_cohomology_of_coker(&phi, 2).unwrap();
        assert!(pullback_ulrich_from_tables(&t1, &t2));
    }

    #[test]
    fn line_cohomology_examples() {
        let c = cfg(1, 5, 5, 1);
        for l in [cls(0, 0, 1), cls(3, -7, 1), cls(-4, 2, 1)] {
            assert_eq!(
                scroll_line_cohomology(&ScrollClass::new(-1, l), &c).unwrap(),
                ScrollCohomology::Exact { h: [0; 4], chi: 0 }
            );
        }
        // O_X and xi: h^0 = 1 and h^0(E) = h^0(F_e, E).
        assert_eq!(
            scroll_line_cohomology(&ScrollClass::pullback(cls(0, 0, 1)), &c).unwrap(),
            ScrollCohomology::Exact { h: [1, 0, 0, 0], chi: 1 }
        );
        // K_X has h^3 = 1 by duality with O_X.
        let k = canonical_class_x(&c);
        let r = scroll_line_cohomology(&k, &c).unwrap();
        assert_eq!(r, ScrollCohomology::Exact { h: [0, 0, 0, 1], chi: -1 });
    }

    #[test]
    fn candidates_at_e0() {
        let c = cfg(0, 2, 3, 1);
        for (name, class) in candidate_classes(0, 2, 1) {
            let (v, tables) = scroll_ulrich_line_bundle(&class, &c).unwrap();
            assert_eq!(v, UlrichVerdict::Ulrich, "{name}");
            assert!(tables.iter().all(ScrollCohomology::is_exact));
        }
        let c = cfg(1, 5, 5, 1);
        let (v, t) = scroll_ulrich_line_bundle(&candidate_classes(1, 5, 2)[0].1, &c).unwrap();
        assert_eq!(v, UlrichVerdict::NotUlrich);
        assert_eq!(t[0].chi(), -3);
        let (v, t) = scroll_ulrich_line_bundle(&candidate_classes(1, 5, 2)[1].1, &c).unwrap();
        assert_eq!(v, UlrichVerdict::NotUlrich);
        assert_eq!(t[2], ScrollCohomology::Exact { h: [0, 0, 6, 0], chi: 6 });
    }

    #[test]
    fn main_theorem_a() {
        let r = verify_main_theorem_a(0, 3, 8).unwrap();
        assert!(r.passed && r.all_exact);
        assert_eq!(r.candidates.iter().filter(|c| c.name.starts_with('M')).count(), 6);
        for e in 1..=2 {
            let r = verify_main_theorem_a(e, 3, 3 * e + 8).unwrap();
            assert!(r.passed, "e={e}");
        }
    }

    #[test]
    fn serre_duality_where_exact() {
        for (e, b, k) in [(0, 4, 5), (0, 6, 8), (1, 5, 5), (2, 9, 9)] {
            let c = cfg(e, b, k, 1);
            let kx = canonical_class_x(&c);
            for m in -4..=4 {
                for a in -4..=4 {
                    for bb in -8..=8 {
                        let d = ScrollClass::new(m, cls(a, bb, e));
                        let x = scroll_line_cohomology(&d, &c).unwrap();
                        let y = scroll_line_cohomology(&(kx - d), &c).unwrap();
                        assert_eq!(x.chi(), -y.chi());
                        if let (ScrollCohomology::Exact { h: hx, .. }, ScrollCohomology::Exact { h: hy, .. }) = (x, y) {
                            for i in 0..4 {
                                assert_eq!(hx[i], hy[3 - i], "{d} on e={e}");
                            }
                        }
                    }
                }
            }
        }
    }
}
