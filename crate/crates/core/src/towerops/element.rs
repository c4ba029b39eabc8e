use serde::{Deserialize, Serialize};

/// An element of `U_i`, given by its coordinates on `(1, x_i, ..., x_i^{p^i d - 1})`.
///
/// Elements carry only their level; operations take the tower explicitly.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TowerElement {
    level: usize,
    coeffs: Vec<u64>,
}

impl TowerElement {
    /// Caller guarantees the length matches the level and residues are reduced.
    pub(crate) fn from_parts(level: usize, coeffs: Vec<u64>) -> Self {
        TowerElement { level, coeffs }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The constant coordinate, when every other coordinate is zero.
    pub fn as_constant(&self) -> Option<u64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }
}

impl std::fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "U{}{:?}", self.level, self.coeffs)
    }
}
