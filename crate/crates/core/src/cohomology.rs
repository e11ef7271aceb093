//! Exact cohomology of line bundles on F_e.
//!
//! `h^0` comes from the pushforward to the base line: for `a >= 0`,
//! `pi_* O(a,b) = sum_{i=0..a} O(b - i e)`. `h^2` is `h^0(K - D)` by Serre
//! duality and `h^1` is whatever Riemann-Roch leaves over.

use serde::{Deserialize, Serialize};

use crate::lattice::{canonical_class, euler_char, DivisorClass};

/// Dimensions `(h0, h1, h2)` with the Euler characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohTable {
    pub h0: i64,
    pub h1: i64,
    pub h2: i64,
    pub chi: i64,
}

impl CohTable {
    pub const ZERO: CohTable = CohTable { h0: 0, h1: 0, h2: 0, chi: 0 };

    pub fn new(h0: i64, h1: i64, h2: i64) -> Self {
        Self { h0, h1, h2, chi: h0 - h1 + h2 }
    }

    pub fn is_zero(&self) -> bool {
        self.h0 == 0 && self.h1 == 0 && self.h2 == 0
    }

    pub fn get(&self, i: usize) -> i64 {
        match i {
            0 => self.h0,
            1 => self.h1,
            2 => self.h2,
            _ => 0,
        }
    }

    /// The table with `h^i` and `h^{2-i}` swapped.
    pub fn reversed(&self) -> Self {
        Self::new(self.h2, self.h1, self.h0)
    }
}

/// Number of sections: `sum_{i=0..a} max(0, b - i e + 1)`.
pub fn h0(d: &DivisorClass) -> i64 {
    if d.a < 0 {
        return 0;
    }
    (0..=d.a).map(|i| (d.b - i * d.e + 1).max(0)).sum()
}

pub fn line_bundle_cohomology(d: &DivisorClass) -> CohTable {
    let h0 = h0(d);
    let h2 = self::h0(&(canonical_class(d.e) - *d));
    let chi = euler_char(d);
    let h1 = h0 + h2 - chi;
    debug_assert!(h1 >= 0, "negative h1 for {d}");
    CohTable { h0, h1, h2, chi }
}

/// Ulrich test for a line bundle on the surface w.r.t. `polarization`:
/// every cohomology group of `D - jH` vanishes for `j = 1, 2`.
pub fn is_ulrich_line_bundle(d: &DivisorClass, polarization: &DivisorClass) -> bool {
    (1..=2).all(|j| line_bundle_cohomology(&(*d - polarization.scale(j))).is_zero())
}
