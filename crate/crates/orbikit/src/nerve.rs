//! The nerve of a finite groupoid: composable arrow tuples with face and
//! degeneracy maps, and the associated integral chain/cochain complexes.
//!
//! A degree-n simplex is a chain (r_1, ..., r_n) with target(r_i) =
//! source(r_{i+1}); faces drop an end arrow or compose an adjacent pair,
//! degeneracies insert identity arrows. The normalized complex keeps only
//! tuples with no identity entries and drops degenerate faces; it computes
//! the same (co)homology at a fraction of the rank.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::homology::ChainComplex;
use crate::matrix::IntMatrix;

pub const DEFAULT_NERVE_CAP: usize = 1_000_000;

pub struct NerveComplex {
    pub groupoid: FiniteGroupoid,
    /// tuples[n] lists the degree-n simplices; degree 0 holds one empty
    /// tuple per object (simplices are objects).
    pub tuples: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

/// Enumerate the nerve up to `max_degree`, failing when any degree would
/// exceed `cap` simplices.
pub fn nerve(g: &FiniteGroupoid, max_degree: usize, cap: usize) -> Result<NerveComplex> {
    let mut tuples: Vec<Vec<Vec<usize>>> = Vec::with_capacity(max_degree + 1);
    // degree 0: objects, encoded as a one-element tuple [object] for indexing
    let deg0: Vec<Vec<usize>> = (0..g.n_objects()).map(|u| vec![u]).collect();
    tuples.push(deg0);
    for n in 1..=max_degree {
        let prev = &tuples[n - 1];
        let mut next: Vec<Vec<usize>> = Vec::new();
        if n == 1 {
            for r in 0..g.n_arrows() {
                next.push(vec![r]);
            }
        } else {
            for t in prev {
                let last = *t.last().unwrap();
                for r in 0..g.n_arrows() {
                    if g.source(r) == g.target(last) {
                        if next.len() >= cap {
                            return Err(Error::ResourceCap(format!(
                                "nerve degree {n} exceeds cap {cap}"
                            )));
                        }
                        let mut ext = t.clone();
                        ext.push(r);
                        next.push(ext);
                    }
                }
            }
        }
        if next.len() > cap {
            return Err(Error::ResourceCap(format!("nerve degree {n} exceeds cap {cap}")));
        }
        tuples.push(next);
    }
    let index = tuples
        .iter()
        .map(|ts| ts.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
        .collect();
    Ok(NerveComplex { groupoid: g.clone(), tuples, index })
}

impl NerveComplex {
    pub fn max_degree(&self) -> usize {
        self.tuples.len() - 1
    }

    pub fn size(&self, n: usize) -> usize {
        self.tuples[n].len()
    }

    pub fn tuple_index(&self, n: usize, t: &[usize]) -> Option<usize> {
        self.index[n].get(t).copied()
    }

    /// Face map ∂_i on a degree-n tuple (n >= 1, 0 <= i <= n): ∂_0 drops the
    /// first arrow, ∂_n the last, and ∂_i composes (r_i, r_{i+1}).
    pub fn face(&self, n: usize, t: &[usize], i: usize) -> Vec<usize> {
        assert!(n >= 1 && t.len() == n && i <= n);
        if n == 1 {
            // faces land in degree 0 (objects); ∂_i drops vertex i, so
            // ∂_0 = target and ∂_1 = source
            let r = t[0];
            return if i == 0 {
                vec![self.groupoid.target(r)]
            } else {
                vec![self.groupoid.source(r)]
            };
        }
        let mut out = Vec::with_capacity(n - 1);
        if i == 0 {
            out.extend_from_slice(&t[1..]);
        } else if i == n {
            out.extend_from_slice(&t[..n - 1]);
        } else {
            out.extend_from_slice(&t[..i - 1]);
            let c = self
                .groupoid
                .compose(t[i - 1], t[i])
                .expect("nerve tuples are composable chains");
            out.push(c);
            out.extend_from_slice(&t[i + 1..]);
        }
        out
    }

    /// Degeneracy s_j on a degree-n tuple (0 <= j <= n): insert the identity
    /// arrow at position j.
    pub fn degeneracy(&self, n: usize, t: &[usize], j: usize) -> Vec<usize> {
        if n == 0 {
            // t = [object]
            assert!(t.len() == 1 && j == 0);
            return vec![self.groupoid.identity(t[0])];
        }
        assert!(t.len() == n && j <= n);
        let mut out = Vec::with_capacity(n + 1);
        out.extend_from_slice(&t[..j]);
        let obj = if j < n { self.groupoid.source(t[j]) } else { self.groupoid.target(t[n - 1]) };
        out.push(self.groupoid.identity(obj));
        out.extend_from_slice(&t[j..]);
        out
    }

    fn is_degenerate(&self, t: &[usize]) -> bool {
        t.iter().any(|&r| self.groupoid.is_identity_arrow(r))
    }

    /// Check the simplicial identities that stay inside the enumerated
    /// degrees; returns violations.
    pub fn check_simplicial_identities(&self) -> Vec<String> {
        let mut report = Vec::new();
        for n in 2..=self.max_degree() {
            for t in &self.tuples[n] {
                for j in 0..=n {
                    for i in 0..j {
                        // ∂_i ∂_j = ∂_{j-1} ∂_i for i < j
                        let a = self.face(n - 1, &self.face(n, t, j), i);
                        let b = self.face(n - 1, &self.face(n, t, i), j - 1);
                        if a != b {
                            report.push(format!(
                                "face identity fails: d{i} d{j} on {t:?} in degree {n}"
                            ));
                        }
                    }
                }
            }
        }
        for n in 0..self.max_degree() {
            for t in &self.tuples[n] {
                for j in 0..=n {
                    let s = self.degeneracy(n, t, j);
                    // ∂_j s_j = id = ∂_{j+1} s_j
                    if self.face(n + 1, &s, j) != *t || self.face(n + 1, &s, j + 1) != *t {
                        report.push(format!(
                            "degeneracy identity fails: s{j} on {t:?} in degree {n}"
                        ));
                    }
                }
            }
        }
        report
    }

    /// Integral chain complex of the nerve up to the enumerated degree. In
    /// normalized mode the bases are the nondegenerate tuples and degenerate
    /// faces are discarded.
    pub fn chain_complex(&self, normalized: bool) -> Result<ChainComplex> {
        let top = self.max_degree();
        let mut bases: Vec<Vec<usize>> = Vec::with_capacity(top + 1); // indices into tuples[n]
        let mut basis_pos: Vec<HashMap<usize, usize>> = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let keep: Vec<usize> = (0..self.tuples[n].len())
                .filter(|&i| !normalized || n == 0 || !self.is_degenerate(&self.tuples[n][i]))
                .collect();
            basis_pos.push(keep.iter().enumerate().map(|(p, &i)| (i, p)).collect());
            bases.push(keep);
        }
        let ranks: Vec<usize> = bases.iter().map(|b| b.len()).collect();
        let mut diffs = Vec::with_capacity(top);
        for n in 0..top {
            // boundary d_{n+1}: C_{n+1} -> C_n
            let mut m = IntMatrix::zeros(ranks[n], ranks[n + 1]);
            for (col, &ti) in bases[n + 1].iter().enumerate() {
                let t = &self.tuples[n + 1][ti];
                let mut sign = BigInt::from(1);
                for i in 0..=(n + 1) {
                    let f = self.face(n + 1, t, i);
                    let fi = self
                        .tuple_index(n, &f)
                        .ok_or_else(|| Error::Integrity("face escapes the nerve".into()))?;
                    if let Some(&row) = basis_pos[n].get(&fi) {
                        let cur = m.get(row, col) + &sign;
                        m.set(row, col, cur);
                    }
                    sign = -sign;
                }
            }
            diffs.push(m);
        }
        // drop zero columns of bookkeeping: complexes store diffs as given
        ChainComplex::new(ranks, diffs, false)
    }

    /// Integral cochain complex (transpose of the boundary maps).
    pub fn cochain_complex(&self, normalized: bool) -> Result<ChainComplex> {
        Ok(self.chain_complex(normalized)?.dualize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::groupoid::{action_groupoid, point_groupoid, GroupAction};
    use crate::homology::{homology, AbelianGroupPresentation};
    use num_bigint::BigInt;

    #[test]
    fn nerve_sizes_point_z2() {
        let p = point_groupoid(&FiniteGroup::cyclic(2));
        let nv = nerve(&p, 3, DEFAULT_NERVE_CAP).unwrap();
        assert_eq!((0..=3).map(|n| nv.size(n)).collect::<Vec<_>>(), vec![1, 2, 4, 8]);
        assert!(nv.check_simplicial_identities().is_empty());
    }

    #[test]
    fn nerve_sizes_trivial() {
        let p = point_groupoid(&FiniteGroup::trivial());
        let nv = nerve(&p, 3, DEFAULT_NERVE_CAP).unwrap();
        assert_eq!((0..=3).map(|n| nv.size(n)).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn nerve_sizes_swap_action() {
        let z2 = FiniteGroup::cyclic(2);
        let a = GroupAction::new(z2, vec!["a".into(), "b".into()], vec![0, 1, 1, 0]).unwrap();
        let g = action_groupoid(&a);
        let nv = nerve(&g, 2, DEFAULT_NERVE_CAP).unwrap();
        assert_eq!((0..=2).map(|n| nv.size(n)).collect::<Vec<_>>(), vec![2, 4, 8]);
        assert!(nv.check_simplicial_identities().is_empty());
    }

    #[test]
    fn cap_enforced() {
        let p = point_groupoid(&FiniteGroup::cyclic(6));
        assert!(matches!(nerve(&p, 4, 100), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn homology_of_bz2() {
        // H_1(BZ/2) = Z/2, H_2(BZ/2) = 0 — classical values
        let p = point_groupoid(&FiniteGroup::cyclic(2));
        let nv = nerve(&p, 3, DEFAULT_NERVE_CAP).unwrap();
        for normalized in [false, true] {
            let c = nv.chain_complex(normalized).unwrap();
            let h0 = homology(&c, 0).unwrap();
            assert_eq!(h0, AbelianGroupPresentation { free_rank: 1, torsion: vec![] });
            let h1 = homology(&c, 1).unwrap();
            assert_eq!(
                h1,
                AbelianGroupPresentation { free_rank: 0, torsion: vec![BigInt::from(2)] }
            );
            let h2 = homology(&c, 2).unwrap();
            assert!(h2.is_trivial());
        }
    }

    #[test]
    fn homology_of_bz3() {
        // H_1(BZ/3) = Z/3
        let p = point_groupoid(&FiniteGroup::cyclic(3));
        let nv = nerve(&p, 2, DEFAULT_NERVE_CAP).unwrap();
        let c = nv.chain_complex(true).unwrap();
        assert_eq!(
            homology(&c, 1).unwrap(),
            AbelianGroupPresentation { free_rank: 0, torsion: vec![BigInt::from(3)] }
        );
    }

    #[test]
    fn normalized_ranks() {
        let p = point_groupoid(&FiniteGroup::cyclic(3));
        let nv = nerve(&p, 3, DEFAULT_NERVE_CAP).unwrap();
        let c = nv.chain_complex(true).unwrap();
        assert_eq!(c.ranks, vec![1, 2, 4, 8]); // (|G|-1)^k
        let cu = nv.chain_complex(false).unwrap();
        assert_eq!(cu.ranks, vec![1, 3, 9, 27]); // |G|^k
    }
}
