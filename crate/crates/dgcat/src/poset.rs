//! Finite posets and their strict chains.

use crate::error::DgError;

/// `c₀ < c₁ < … < c_q`, with `q = len − 1`.
pub type Chain = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    /// Reflexive and transitive; `leq[a][b]` iff `a ≤ b`.
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Order generated by the given relations `a ≤ b`.
    pub fn new(n: usize, relations: &[(usize, usize)]) -> Result<Self, DgError> {
        let mut leq = vec![vec![false; n]; n];
        for (a, row) in leq.iter_mut().enumerate() {
            row[a] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(DgError::Object(a.max(b)));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if leq[a][k] && leq[k][b] {
                        leq[a][b] = true;
                    }
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if leq[a][b] && leq[b][a] {
                    return Err(DgError::NotAntisymmetric(a, b));
                }
            }
        }
        Ok(Poset { leq })
    }

    /// `0 < 1 < … < n−1`.
    pub fn linear(n: usize) -> Self {
        let rel: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &rel).unwrap()
    }

    pub fn discrete(n: usize) -> Self {
        Self::new(n, &[]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    /// Strict relations `a < b`.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| self.lt(a, b)).collect()
    }

    pub fn top(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|a| self.leq(a, t)))
    }

    /// Strict chains of length `q`, in lexicographic order.
    pub fn chains(&self, q: usize) -> Vec<Chain> {
        self.walks(q, false)
    }

    /// Every strict chain, grouped by ascending `q`.
    pub fn all_chains(&self) -> Vec<Chain> {
        (0..self.len()).flat_map(|q| self.chains(q)).collect()
    }

    /// Longest strict chain length; `None` for the empty poset.
    pub fn height(&self) -> Option<usize> {
        (0..self.len()).rev().find(|&q| !self.chains(q).is_empty())
    }

    /// Chains `c₀ ≤ … ≤ c_q`, repetitions allowed.
    pub fn weak_chains(&self, q: usize) -> Vec<Chain> {
        self.walks(q, true)
    }

    fn walks(&self, q: usize, weak: bool) -> Vec<Chain> {
        let mut out: Vec<Chain> = (0..self.len()).map(|a| vec![a]).collect();
        for _ in 0..q {
            out = out
                .into_iter()
                .flat_map(|c| {
                    let last = *c.last().unwrap();
                    (0..self.len())
                        .filter(move |&b| if weak { self.leq(last, b) } else { self.lt(last, b) })
                        .map(move |b| {
                            let mut d = c.clone();
                            d.push(b);
                            d
                        })
                })
                .collect();
        }
        out
    }
}

/// `c∘k̂`: the chain with its `k`-th object removed.
pub fn face(c: &[usize], k: usize) -> Chain {
    c.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &x)| x).collect()
}

pub fn is_degenerate(c: &[usize]) -> bool {
    c.windows(2).any(|w| w[0] == w[1])
}

pub fn chain_label(c: &[usize]) -> String {
    c.iter().map(ToString::to_string).collect::<Vec<_>>().join("<")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_has_the_expected_chains() {
        let p = Poset::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(p.chains(1).len(), 5);
        assert_eq!(p.chains(2), vec![vec![0, 1, 3], vec![0, 2, 3]]);
        assert!(p.chains(3).is_empty());
        assert_eq!(p.height(), Some(2));
        assert_eq!(p.top(), Some(3));
        assert!(p.lt(0, 3));
    }

    #[test]
    fn cycles_are_rejected() {
        assert_eq!(Poset::new(2, &[(0, 1), (1, 0)]), Err(DgError::NotAntisymmetric(0, 1)));
    }

    #[test]
    fn linear_order_counts_subsets() {
        let p = Poset::linear(4);
        for q in 0..4 {
            let binom = [4, 6, 4, 1][q];
            assert_eq!(p.chains(q).len(), binom);
        }
        assert_eq!(p.weak_chains(1).len(), 10);
        assert_eq!(face(&[0, 2, 3], 1), vec![0, 3]);
        assert!(is_degenerate(&[0, 0, 1]));
    }
}
