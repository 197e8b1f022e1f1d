//! Small permutation utilities shared by the orbit counting and the affine
//! audits: cycle decomposition, composition, matrices, and enumeration of
//! the full symmetric group at desk scale.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A permutation of {0, .., n-1}, stored as the image list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidInput(format!(
                    "not a permutation of 0..{n}: {images:?}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    /// Permutation given by the single cycle (c_0 c_1 ... c_k) in S_n.
    pub fn from_cycle(n: usize, cycle: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for w in 0..cycle.len() {
            let from = cycle[w];
            let to = cycle[(w + 1) % cycle.len()];
            if from >= n || to >= n {
                return Err(Error::IndexOutOfRange(format!("cycle entry >= {n}")));
            }
            images[from] = to;
        }
        Self::from_images(images)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// self after other: (self * other)(i) = self(other(i)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n());
        Permutation((0..self.n()).map(|i| self.apply(other.apply(i))).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// Multiplicative order.
    pub fn order(&self) -> usize {
        self.cycles()
            .iter()
            .map(|c| c.len())
            .fold(1, num_integer::lcm)
    }

    /// Nontrivial cycles (length >= 2), each starting at its smallest
    /// element, sorted by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.apply(start);
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.apply(cur);
            }
            if cycle.len() >= 2 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.apply(i) == i).collect()
    }

    pub fn is_transposition(&self) -> bool {
        let cycles = self.cycles();
        cycles.len() == 1 && cycles[0].len() == 2
    }

    /// Cycle type as a sorted list of cycle lengths (including fixed points).
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.extend(std::iter::repeat(1).take(self.fixed_points().len()));
        t.sort_unstable();
        t
    }

    /// The permutation matrix P with P[pi(i)][i] = 1 (columns are images).
    pub fn matrix(&self) -> IntMatrix {
        let n = self.n();
        let mut p = IntMatrix::zeros(n, n);
        for i in 0..n {
            p[(self.apply(i), i)] = BigInt::one();
        }
        p
    }

    /// All n! permutations in lexicographic order of their image lists.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut images: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(images.clone()));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| images[i] < images[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| images[j] > images[i]).unwrap();
            images.swap(i, j);
            images[i + 1..].reverse();
        }
        out
    }

    /// Cycle notation with 1-based entries, e.g. "(1 2 5)(3 4)"; "id" for
    /// the identity.
    pub fn cycle_notation(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "id".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let inner = c
                    .iter()
                    .map(|&x| (x + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                format!("({inner})")
            })
            .collect()
    }
}
