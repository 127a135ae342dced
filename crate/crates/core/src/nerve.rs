//! Finite covers and the strictly increasing index tuples over which
//! alternating Čech cochains live.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    labels: Vec<String>,
}

impl Cover {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidInput("a cover needs at least one open set".into()));
        }
        Ok(Cover { labels })
    }

    /// The standard affine cover `U_i = {x_i != 0}` of projective n-space.
    pub fn projective(n: usize) -> Self {
        Cover { labels: (0..=n).map(|i| format!("x{i} != 0")).collect() }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// A strictly increasing tuple of chart indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!("simplex indices not strictly increasing: {indices:?}")));
        }
        Ok(Simplex(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// Number of indices minus one.
    pub fn dim(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// The simplex with the `j`-th index omitted.
    pub fn face(&self, j: usize) -> Result<Simplex> {
        if j >= self.0.len() {
            return Err(Error::IndexOutOfRange { index: j, limit: self.0.len() });
        }
        let mut v = self.0.clone();
        v.remove(j);
        Ok(Simplex(v))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// All `p`-simplices of the nerve in lexicographic order.
pub fn nerve(cover: &Cover, p: usize) -> Vec<Simplex> {
    nerve_of_size(cover.size(), p)
}

pub fn nerve_of_size(size: usize, p: usize) -> Vec<Simplex> {
    (0..size).combinations(p + 1).map(Simplex).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn nerve_examples() {
        assert_eq!(nerve_of_size(2, 1), vec![s(&[0, 1])]);
        assert_eq!(nerve_of_size(3, 1), vec![s(&[0, 1]), s(&[0, 2]), s(&[1, 2])]);
        assert_eq!(nerve_of_size(3, 2), vec![s(&[0, 1, 2])]);
        assert!(nerve_of_size(2, 2).is_empty());
        assert_eq!(nerve(&Cover::projective(2), 0).len(), 3);
    }

    #[test]
    fn face_examples() {
        assert_eq!(s(&[0, 1, 2]).face(1).unwrap(), s(&[0, 2]));
        assert_eq!(s(&[0, 1]).face(0).unwrap(), s(&[1]));
        assert_eq!(s(&[0, 2, 3]).face(2).unwrap(), s(&[0, 2]));
        assert_eq!(s(&[0, 1]).face(2).unwrap_err(), Error::IndexOutOfRange { index: 2, limit: 2 });
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Simplex::new(vec![1, 1]).is_err());
        assert!(Simplex::new(vec![2, 0]).is_err());
        assert!(Cover::new(vec![]).is_err());
    }

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    proptest! {
        #[test]
        fn nerve_has_binomial_size(size in 1usize..8, p in 0usize..8) {
            prop_assert_eq!(nerve_of_size(size, p).len(), binom(size, p + 1));
        }

        #[test]
        fn simplicial_identity(size in 3usize..8, p in 1usize..6, pick in any::<prop::sample::Index>()) {
            let all = nerve_of_size(size, p);
            prop_assume!(!all.is_empty());
            let simplex = pick.get(&all);
            for k in 0..p {
                for j in 0..=k {
                    let lhs = simplex.face(j).unwrap().face(k).unwrap();
                    let rhs = simplex.face(k + 1).unwrap().face(j).unwrap();
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
