//! Materialized prefixes of permutations of the positive integers.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// The images `σ(1), …, σ(n)` of a permutation, 1-based.
///
/// Injective on the prefix. Surjectivity is witnessed up to
/// [`Permutation::surjectivity_frontier`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Permutation {
    label: String,
    images: Vec<usize>,
    #[serde(default)]
    params: Value,
}

impl Permutation {
    /// Fails with `InvalidArgument` if an image is zero or repeated.
    pub fn from_images(label: impl Into<String>, images: Vec<usize>, params: Value) -> Result<Self> {
        let mut seen = vec![false; images.iter().copied().max().unwrap_or(0) + 1];
        for (pos, &j) in images.iter().enumerate() {
            if j == 0 || std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidArgument(format!(
                    "image {j} at position {} breaks injectivity on positive integers",
                    pos + 1
                )));
            }
        }
        Ok(Permutation {
            label: label.into(),
            images,
            params,
        })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            label: "identity".into(),
            images: (1..=n).collect(),
            params: Value::Null,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &Value {
        &self.params
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `σ(j)` for 1-based `j` within the materialized prefix.
    pub fn forward(&self, j: usize) -> Option<usize> {
        j.checked_sub(1).and_then(|i| self.images.get(i)).copied()
    }

    pub fn is_injective(&self) -> bool {
        let mut v = self.images.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1]) && v.first().is_none_or(|&j| j > 0)
    }

    /// Largest `m` with `{1, …, m} ⊆ {σ(1), …, σ(n)}`.
    pub fn surjectivity_frontier(&self) -> usize {
        let mut hit = vec![false; self.images.len() + 2];
        for &j in &self.images {
            if j < hit.len() {
                hit[j] = true;
            }
        }
        hit.iter().skip(1).take_while(|&&h| h).count()
    }

    /// Position `j` with `σ(j) = target`, if materialized.
    pub fn position_of(&self, target: usize) -> Option<usize> {
        self.images.iter().position(|&j| j == target).map(|i| i + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_frontier() {
        let id = Permutation::identity(6);
        assert!(id.is_injective());
        assert_eq!(id.surjectivity_frontier(), 6);
        assert_eq!(id.forward(3), Some(3));
        assert_eq!(id.forward(0), None);
        let p = Permutation::from_images("p", vec![2, 4, 1, 6], Value::Null).unwrap();
        assert_eq!(p.surjectivity_frontier(), 2);
        assert_eq!(p.position_of(4), Some(2));
    }

    #[test]
    fn rejects_repeats_and_zero() {
        assert!(Permutation::from_images("bad", vec![1, 2, 1], Value::Null).is_err());
        assert!(Permutation::from_images("bad", vec![0], Value::Null).is_err());
    }
}
