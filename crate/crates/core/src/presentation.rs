//! Configurations of the scroll and the presentation
//! `0 -> O(2, b-e-1)^gamma -> O(2, b-e)^delta + O(3, b-1)^tau -> H_r -> 0`.

use rand::Rng;
use serde::Serialize;

use crate::cox::sample_form;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lattice::{DivisorClass, SurfaceParams};
use crate::verifier::FormMatrix;

/// A scroll `X = P(E)` over `F_e` with `c1(E) = 3C + b f` and `c2(E) = k`,
/// together with the rank `r` of the bundles under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ScrollConfig {
    pub e: i64,
    pub b: i64,
    pub k: i64,
    pub r: i64,
}

impl ScrollConfig {
    pub fn surface(&self) -> SurfaceParams {
        SurfaceParams::new(self.e).expect("validated")
    }

    /// `c1(E) = (3, b)`.
    pub fn polarization(&self) -> DivisorClass {
        DivisorClass::new(3, self.b, self.e)
    }

    /// `A_e = (2, 2b - k - 2e)`.
    pub fn class_a(&self) -> DivisorClass {
        DivisorClass::new(2, 2 * self.b - self.k - 2 * self.e, self.e)
    }

    /// `B_e = (1, k - b + 2e)`.
    pub fn class_b(&self) -> DivisorClass {
        DivisorClass::new(1, self.k - self.b + 2 * self.e, self.e)
    }

    pub fn with_rank(&self, r: i64) -> ScrollConfig {
        ScrollConfig { r, ..*self }
    }
}

/// Checks `b - e < k < 2b - 4e` (which forces `b >= 3e + 2`), `e >= 0` and `r >= 1`.
pub fn validate_config(e: i64, b: i64, k: i64, r: i64) -> Result<ScrollConfig> {
    let fail = |s: &str| Err(Error::InvalidConfig { inequality: s.to_string() });
    if e < 0 {
        return fail("e >= 0");
    }
    if r < 1 {
        return fail("r >= 1");
    }
    if k <= b - e {
        return fail("b - e < k");
    }
    if k >= 2 * b - 4 * e {
        return fail("k < 2b - 4e");
    }
    debug_assert!(b >= 3 * e + 2);
    Ok(ScrollConfig { e, b, k, r })
}

/// Whether some `k` satisfies `b - e < k < 2b - 4e`.
pub fn k_range_nonempty(e: i64, b: i64) -> bool {
    b >= 3 * e + 2
}

/// First Chern class of the rank-`r` bundle `H_r`, `r >= 2`.
pub fn c1_target(config: &ScrollConfig) -> DivisorClass {
    let ScrollConfig { e, b, r, .. } = *config;
    let (a, bb) = if r % 2 == 0 {
        let h = r / 2;
        (3 * r + h, r * b + h * (b - e - 2))
    } else {
        let h = (r - 3) / 2;
        (3 * (r + 1) + h, (r + 1) * b - 3 + h * (b - e - 2))
    };
    DivisorClass::new(a, bb, e)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub config: ScrollConfig,
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub delta: i64,
    pub tau: i64,
    pub block_a: DivisorClass,
    pub block_b: [DivisorClass; 2],
}

impl Presentation {
    pub fn rank(&self) -> i64 {
        self.config.r
    }

    pub fn c1(&self) -> DivisorClass {
        DivisorClass::new(self.alpha, self.beta, self.config.e)
    }

    pub fn c1_a(&self) -> DivisorClass {
        self.gamma * self.block_a
    }

    pub fn c1_b(&self) -> DivisorClass {
        self.delta * self.block_b[0] + self.tau * self.block_b[1]
    }

    /// Degree of the entries in row `i` of `phi`: `(0,1)` on the first
    /// `delta` rows, `(1,e)` below.
    pub fn entry_degree(&self, i: usize) -> DivisorClass {
        let row = if (i as i64) < self.delta { self.block_b[0] } else { self.block_b[1] };
        row - self.block_a
    }

    pub fn num_rows(&self) -> usize {
        (self.delta + self.tau) as usize
    }

    pub fn num_cols(&self) -> usize {
        self.gamma as usize
    }

    /// `c2(H) = c2(B) - c2(A) - c1(A) c1(H)`.
    pub fn c2(&self) -> i64 {
        let c2a = split_c2(&[(self.block_a, self.gamma)]);
        let c2b = split_c2(&[(self.block_b[0], self.delta), (self.block_b[1], self.tau)]);
        c2b - c2a - self.c1_a().dot(&self.c1()).expect("same surface")
    }
}

/// `c2` of a direct sum of line bundles `L_i^{m_i}`.
fn split_c2(parts: &[(DivisorClass, i64)]) -> i64 {
    let e = parts[0].0.e;
    let c1 = parts.iter().fold(DivisorClass::new(0, 0, e), |acc, (l, m)| acc + *m * *l);
    let sq: i64 = parts.iter().map(|(l, m)| m * l.square()).sum();
    (c1.square() - sq) / 2
}

pub fn build_presentation(config: &ScrollConfig) -> Result<Presentation> {
    let ScrollConfig { e, b, r, .. } = *config;
    if r < 2 {
        return Err(Error::Unsupported("presentations need r >= 2; rank one is a line-bundle search".into()));
    }
    let c1 = c1_target(config);
    let (alpha, beta) = (c1.a, c1.b);
    let gamma = alpha + beta - r * (2 + b) - e * (alpha - 3 * r);
    let delta = beta - r * (b - 1) - e * (alpha - 3 * r);
    let tau = alpha - 2 * r;

    let closed = if r % 2 == 1 {
        (((b - 2 * e + 1) * r - b + 3) / 2, (r - 1) * b / 2 - e * r, 3 * (r + 1) / 2)
    } else {
        ((b - 2 * e + 1) * r / 2, (b - 2 * e) * r / 2, 3 * r / 2)
    };
    if (gamma, delta, tau) != closed {
        return Err(Error::Internal(format!(
            "coefficient routes disagree: general {:?} vs closed {closed:?}",
            (gamma, delta, tau)
        )));
    }
    if delta + tau - gamma != r {
        return Err(Error::Internal(format!("delta + tau - gamma = {} != r = {r}", delta + tau - gamma)));
    }
    if gamma <= 0 || delta <= 0 || tau <= 0 {
        return Err(Error::Internal(format!("nonpositive multiplicity in {:?}", (gamma, delta, tau))));
    }
    let presentation = Presentation {
        config: *config,
        alpha,
        beta,
        gamma,
        delta,
        tau,
        block_a: DivisorClass::new(2, b - e - 1, e),
        block_b: [DivisorClass::new(2, b - e, e), DivisorClass::new(3, b - 1, e)],
    };
    if presentation.c1_b() - presentation.c1_a() != c1 {
        return Err(Error::Internal("c1(B) - c1(A) misses the target".into()));
    }
    Ok(presentation)
}

/// A random `phi: A -> B`, each entry a random form of the block degree.
/// Entries are drawn row by row.
pub fn sample_phi<R: Rng + ?Sized>(p: &Presentation, field: FieldSpec, rng: &mut R) -> FormMatrix {
    let entries = (0..p.num_rows())
        .map(|i| {
            let d = p.entry_degree(i);
            (0..p.num_cols()).map(|_| sample_form(&d, field, rng)).collect()
        })
        .collect();
    FormMatrix::new(p.clone(), field, entries, None).expect("sampled entries have block degrees")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::h0;
    use crate::lattice::canonical_class;
    use crate::rng::rng_from_seed;

    fn cfg(e: i64, b: i64, k: i64, r: i64) -> ScrollConfig {
        validate_config(e, b, k, r).unwrap()
    }

    /// Some valid `k` for `(e, b)`.
    fn some_k(e: i64, b: i64) -> i64 {
        b - e + 1
    }

    #[test]
    fn validation_examples() {
        let c = cfg(1, 5, 5, 2);
        assert_eq!(c.class_a(), DivisorClass::new(2, 3, 1));
        assert_eq!(c.class_b(), DivisorClass::new(1, 2, 1));
        assert!(matches!(
            validate_config(1, 5, 4, 2),
            Err(Error::InvalidConfig { inequality }) if inequality == "b - e < k"
        ));
        assert!(matches!(
            validate_config(1, 5, 6, 2),
            Err(Error::InvalidConfig { inequality }) if inequality == "k < 2b - 4e"
        ));
        let c = cfg(0, 2, 3, 1);
        assert_eq!((c.b, c.k), (2, 3));
        // A_e + B_e = c1(E)
        assert_eq!(c.class_a() + c.class_b(), c.polarization());
    }

    #[test]
    fn k_range_characterization() {
        for e in 0..=4 {
            for b in -5..=30 {
                let any = (-40..=80).any(|k| validate_config(e, b, k, 2).is_ok());
                assert_eq!(any, k_range_nonempty(e, b), "e={e} b={b}");
            }
        }
    }

    #[test]
    fn c1_examples() {
        assert_eq!(c1_target(&cfg(1, 5, 5, 2)), DivisorClass::new(7, 12, 1));
        assert_eq!(c1_target(&cfg(0, 4, 5, 3)), DivisorClass::new(12, 13, 0));
        assert_eq!(c1_target(&cfg(1, 5, 5, 5)), DivisorClass::new(19, 29, 1));
    }

    #[test]
    fn presentation_examples() {
        let coeffs = |c: ScrollConfig| {
            let p = build_presentation(&c).unwrap();
            (p.gamma, p.delta, p.tau)
        };
        assert_eq!(coeffs(cfg(1, 5, 5, 2)), (4, 3, 3));
        assert_eq!(coeffs(cfg(0, 4, 5, 3)), (7, 4, 6));
        assert_eq!(coeffs(cfg(0, 2, 3, 2)), (3, 2, 3));
        assert!(matches!(build_presentation(&cfg(0, 4, 5, 1)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn presentation_invariants_over_grid() {
        for e in 0..=2 {
            for b in 3 * e + 2..=3 * e + 14 {
                for r in 2..=8 {
                    let c = cfg(e, b, some_k(e, b), r);
                    let p = build_presentation(&c).unwrap();
                    assert_eq!(p.delta + p.tau - p.gamma, r);
                    assert_eq!(p.c1(), c1_target(&c));
                    // The part of c1(U_r) pulled back from the base.
                    let base = if r % 2 == 0 {
                        DivisorClass::new(r / 2, r / 2 * (b - e - 2), e)
                    } else {
                        DivisorClass::new(3, b - 3, e) + DivisorClass::new((r - 3) / 2, (r - 3) / 2 * (b - e - 2), e)
                    };
                    assert_eq!(p.c1() - r * c.polarization(), base);
                }
            }
        }
    }

    #[test]
    fn whitney_c2_matches_ulrich_riemann_roch() {
        // Ulrich bundles of rank r on a surface with polarization H satisfy
        // c2 = (c1^2 - c1 K)/2 - r (H^2 - chi(O)).
        for e in 0..=3 {
            for b in 3 * e + 2..=3 * e + 10 {
                for r in 2..=8 {
                    let c = cfg(e, b, some_k(e, b), r);
                    let p = build_presentation(&c).unwrap();
                    let c1 = p.c1();
                    let k = canonical_class(e);
                    let h = c.polarization();
                    let expected = (c1.square() - c1.dot(&k).unwrap()) / 2 - r * (h.square() - 1);
                    assert_eq!(p.c2(), expected, "e={e} b={b} r={r}");
                }
            }
        }
        assert_eq!(build_presentation(&cfg(1, 5, 5, 2)).unwrap().c2(), 35);
    }

    #[test]
    fn sampled_phi_shape() {
        let p = build_presentation(&cfg(1, 5, 5, 2)).unwrap();
        let phi = sample_phi(&p, FieldSpec::default(), &mut rng_from_seed(1));
        assert_eq!((phi.num_rows(), phi.num_cols()), (6, 4));
        for i in 0..6 {
            let d = if i < 3 { DivisorClass::new(0, 1, 1) } else { DivisorClass::new(1, 1, 1) };
            for j in 0..4 {
                assert_eq!(phi.entry(i, j).degree(), d);
                assert!(phi.entry(i, j).num_terms() as i64 <= h0(&d));
            }
        }
        assert_eq!(h0(&DivisorClass::new(0, 1, 1)), 2);
        let again = sample_phi(&p, FieldSpec::default(), &mut rng_from_seed(1));
        assert_eq!(phi, again);
    }
}
