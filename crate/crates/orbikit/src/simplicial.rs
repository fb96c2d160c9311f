//! Finite abstract simplicial complexes with a simplicial group action:
//! fixed subcomplexes, barycentric subdivision, rational Betti numbers, and
//! dimensions of character-twisted invariant subspaces of cohomology via an
//! exact averaging projector over a cyclotomic field.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::cyclotomic::{CycField, CycMatrix};
use crate::error::{Error, Result};
use crate::groupoid::GroupAction;
use crate::matrix::{kernel_basis, IntMatrix};

/// An abstract simplicial complex (simplex list closed under faces) carrying
/// an action of a finite group by simplicial automorphisms. The action's
/// point set is the vertex set.
#[derive(Clone, Debug)]
pub struct GSimplicialComplex {
    pub action: GroupAction,
    /// simplices[d] = sorted list of (d+1)-element sorted vertex tuples.
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl GSimplicialComplex {
    /// Build from an arbitrary simplex list. Simplices are normalized
    /// (vertices sorted, duplicates rejected), closure under faces is
    /// required, and the action must permute the simplex set.
    pub fn new(action: GroupAction, simplices: &[Vec<usize>]) -> Result<GSimplicialComplex> {
        let nv = action.n_points();
        let mut by_dim: Vec<HashSet<Vec<usize>>> = Vec::new();
        for s in simplices {
            if s.is_empty() {
                return Err(Error::Invalid("complex: empty simplex".into()));
            }
            let mut t = s.clone();
            t.sort_unstable();
            t.dedup();
            if t.len() != s.len() {
                return Err(Error::Invalid(format!("complex: repeated vertex in {s:?}")));
            }
            if t.iter().any(|&v| v >= nv) {
                return Err(Error::Invalid(format!("complex: vertex out of range in {s:?}")));
            }
            let d = t.len() - 1;
            while by_dim.len() <= d {
                by_dim.push(HashSet::new());
            }
            by_dim[d].insert(t);
        }
        // closure under faces
        for d in (1..by_dim.len()).rev() {
            for s in by_dim[d].clone() {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    if !by_dim[d - 1].contains(&f) {
                        return Err(Error::Invalid(format!(
                            "complex: face {f:?} of {s:?} is missing"
                        )));
                    }
                }
            }
        }
        let simplices: Vec<Vec<Vec<usize>>> = by_dim
            .into_iter()
            .map(|set| {
                let mut v: Vec<Vec<usize>> = set.into_iter().collect();
                v.sort();
                v
            })
            .collect();
        let index = simplices
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let x = GSimplicialComplex { action, simplices, index };
        // the action must be simplicial: each group element maps simplices
        // to simplices (dimension is preserved automatically by bijectivity)
        for g in 0..x.action.group.order() {
            for d in 0..x.simplices.len() {
                for s in &x.simplices[d] {
                    let mut img: Vec<usize> = s.iter().map(|&v| x.action.apply(g, v)).collect();
                    img.sort_unstable();
                    if !x.index[d].contains_key(&img) {
                        return Err(Error::Invalid(format!(
                            "complex: action of {} maps {s:?} outside the complex",
                            x.action.group.names[g]
                        )));
                    }
                }
            }
        }
        Ok(x)
    }

    /// Largest simplex dimension, or None for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        if self.simplices.is_empty() { None } else { Some(self.simplices.len() - 1) }
    }

    pub fn n_simplices(&self, d: usize) -> usize {
        self.simplices.get(d).map_or(0, |v| v.len())
    }

    pub fn simplices_of_dim(&self, d: usize) -> &[Vec<usize>] {
        self.simplices.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn simplex_index(&self, s: &[usize]) -> Option<(usize, usize)> {
        let d = s.len().checked_sub(1)?;
        self.index.get(d)?.get(s).map(|&i| (d, i))
    }

    /// Image of a d-simplex under g as (index of image, orientation sign):
    /// the sign of the permutation that re-sorts the mapped vertex list.
    pub fn apply_signed(&self, g: usize, d: usize, idx: usize) -> (usize, i64) {
        let s = &self.simplices[d][idx];
        let img: Vec<usize> = s.iter().map(|&v| self.action.apply(g, v)).collect();
        let mut sign = 1i64;
        for i in 0..img.len() {
            for j in i + 1..img.len() {
                if img[i] > img[j] {
                    sign = -sign;
                }
            }
        }
        let mut sorted = img;
        sorted.sort_unstable();
        (self.index[d][&sorted], sign)
    }

    /// Boundary matrix ∂_d : C_d → C_{d−1} with the alternating-face signs;
    /// rows indexed by (d−1)-simplices, columns by d-simplices.
    pub fn boundary_matrix(&self, d: usize) -> IntMatrix {
        assert!(d >= 1);
        let rows = self.n_simplices(d - 1);
        let cols = self.n_simplices(d);
        let mut m = IntMatrix::zeros(rows, cols);
        for (j, s) in self.simplices_of_dim(d).iter().enumerate() {
            for i in 0..s.len() {
                let mut f = s.clone();
                f.remove(i);
                let r = self.index[d - 1][&f];
                let cur = m.get(r, j).clone();
                let sgn = if i % 2 == 0 { 1 } else { -1 };
                m.set(r, j, cur + BigInt::from(sgn));
            }
        }
        m
    }

    /// Rational Betti numbers b_0, …, b_dim.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let top = match self.dimension() {
            Some(d) => d,
            None => return vec![],
        };
        let ranks: Vec<usize> =
            (1..=top).map(|d| crate::matrix::rank(&self.boundary_matrix(d))).collect();
        (0..=top)
            .map(|d| {
                let rank_in = if d == 0 { 0 } else { ranks[d - 1] };
                let rank_out = if d == top { 0 } else { ranks[d] };
                self.n_simplices(d) - rank_in - rank_out
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..self.simplices.len())
            .map(|d| {
                let n = self.n_simplices(d) as i64;
                if d % 2 == 0 { n } else { -n }
            })
            .sum()
    }
}

/// Subcomplex of simplices fixed pointwise by `g` (every vertex fixed), with
/// the induced action of the centralizer C(g). Vertex indices are renumbered;
/// names are preserved.
pub fn fixed_subcomplex(x: &GSimplicialComplex, g: usize) -> Result<GSimplicialComplex> {
    let a = &x.action;
    let fixed: Vec<usize> = (0..a.n_points()).filter(|&v| a.apply(g, v) == v).collect();
    let pos: HashMap<usize, usize> = fixed.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let cg_elements = a.group.centralizer(g);
    let cg = a.group.subgroup(&cg_elements)?;
    let names: Vec<String> = fixed.iter().map(|&v| a.point_names[v].clone()).collect();
    let mut act = vec![0usize; cg.order() * fixed.len()];
    for (hi, &h) in cg_elements.iter().enumerate() {
        for (vi, &v) in fixed.iter().enumerate() {
            // h preserves X^g: g(hv) = h(gv) = hv
            act[hi * fixed.len() + vi] = pos[&a.apply(h, v)];
        }
    }
    let action = GroupAction::new(cg, names, act)?;
    let mut kept = Vec::new();
    for d in 0..x.simplices.len() {
        for s in x.simplices_of_dim(d) {
            if s.iter().all(|v| pos.contains_key(v)) {
                kept.push(s.iter().map(|v| pos[v]).collect());
            }
        }
    }
    GSimplicialComplex::new(action, &kept)
}

/// Barycentric subdivision: one vertex per simplex of `x`, one k-simplex per
/// strictly increasing chain of k+1 faces. The group action is induced.
pub fn barycentric_subdivision(x: &GSimplicialComplex) -> Result<GSimplicialComplex> {
    // flatten (dim, idx) -> new vertex id
    let mut id_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut names = Vec::new();
    for d in 0..x.simplices.len() {
        for (i, s) in x.simplices_of_dim(d).iter().enumerate() {
            id_of.insert((d, i), names.len());
            let label: Vec<String> =
                s.iter().map(|&v| x.action.point_names[v].clone()).collect();
            names.push(format!("b({})", label.join(",")));
        }
    }
    let nv = names.len();
    let group = x.action.group.clone();
    let mut act = vec![0usize; group.order() * nv];
    for g in 0..group.order() {
        for d in 0..x.simplices.len() {
            for i in 0..x.n_simplices(d) {
                let (img, _) = x.apply_signed(g, d, i);
                act[g * nv + id_of[&(d, i)]] = id_of[&(d, img)];
            }
        }
    }
    let action = GroupAction::new(group, names, act)?;

    // all chains σ_0 ⊊ σ_1 ⊊ … of simplices of x, as simplices on the
    // barycenter vertices; enumerate chains ending at each simplex
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut ending_at: HashMap<(usize, usize), Vec<Vec<usize>>> = HashMap::new();
    for d in 0..x.simplices.len() {
        for (i, s) in x.simplices_of_dim(d).iter().enumerate() {
            let v = id_of[&(d, i)];
            let mut here = vec![vec![v]];
            // proper faces = all nonempty proper subsets of s
            for mask in 1u64..(1 << s.len()) - 1 {
                let face: Vec<usize> =
                    (0..s.len()).filter(|&k| mask >> k & 1 == 1).map(|k| s[k]).collect();
                let (fd, fi) = x.simplex_index(&face).expect("closure");
                for chain in &ending_at[&(fd, fi)] {
                    let mut c = chain.clone();
                    c.push(v);
                    here.push(c);
                }
            }
            chains.extend(here.iter().cloned());
            ending_at.insert((d, i), here);
        }
    }
    GSimplicialComplex::new(action, &chains)
}

/// Dimension of the χ-twisted invariant subspace of H^degree(x; Q(ζ_m)):
/// the rank on cohomology of the averaging projector
/// P = (1/|C|) Σ_h χ(h)·h*, computed exactly over the cyclotomic field of
/// conductor `modulus`. `chi[h]` is the exponent of χ(h) mod `modulus`,
/// indexed by the elements of the acting group; χ must be a homomorphism.
pub fn twisted_invariant_dimension(
    x: &GSimplicialComplex,
    chi: &[BigInt],
    modulus: u64,
    degree: usize,
) -> Result<usize> {
    let group = &x.action.group;
    let n = group.order();
    if chi.len() != n || modulus == 0 {
        return Err(Error::Invalid("character: wrong length or zero modulus".into()));
    }
    let m = BigInt::from(modulus);
    if !chi[group.identity()].mod_floor(&m).is_zero_int() {
        return Err(Error::Invalid("character: nontrivial at the identity".into()));
    }
    for g in 0..n {
        for h in 0..n {
            let lhs = chi[group.mul(g, h)].mod_floor(&m);
            let rhs = (&chi[g] + &chi[h]).mod_floor(&m);
            if lhs != rhs {
                return Err(Error::Invalid(format!(
                    "character: not a homomorphism at ({}, {})",
                    group.names[g], group.names[h]
                )));
            }
        }
    }
    let nd = x.n_simplices(degree);
    if nd == 0 {
        return Ok(0);
    }

    let field = CycField::new(modulus);
    // averaging projector on degree-d cochains: (h*f)_σ = sign(h,σ)·f_{hσ}
    let mut p = CycMatrix::zeros(field.clone(), nd, nd);
    for h in 0..n {
        let zeta = field.from_exponent(&chi[h], modulus)?;
        for sigma in 0..nd {
            let (img, sign) = x.apply_signed(h, degree, sigma);
            let mut term = zeta.clone();
            if sign < 0 {
                term = field.neg(&term);
            }
            let v = field.add(p.get(sigma, img), &term);
            p.set(sigma, img, v);
        }
    }
    let inv_order = field.from_rational(BigRational::new(1.into(), BigInt::from(n)));
    let p = p.scale(&inv_order);
    if p.mul(&p) != p {
        return Err(Error::Integrity("averaging projector is not idempotent".into()));
    }

    // H^d = ker δ^d / im δ^{d−1}; δ^k = transpose of ∂_{k+1}
    let delta_out = if degree + 1 < x.simplices.len() {
        self_transpose(&x.boundary_matrix(degree + 1))
    } else {
        IntMatrix::zeros(0, nd)
    };
    let delta_in = if degree >= 1 {
        self_transpose(&x.boundary_matrix(degree))
    } else {
        IntMatrix::zeros(nd, 0)
    };
    let z = kernel_basis(&delta_out); // columns span ker δ^d over Q
    let zc = lift(&field, &z);
    let bc = lift(&field, &delta_in);
    // image of P on cohomology: (P·Z + B)/B
    let pz = p.mul(&zc);
    let rank_b = bc.rank();
    let rank_total = pz.hcat(&bc).rank();
    Ok(rank_total - rank_b)
}

fn self_transpose(m: &IntMatrix) -> IntMatrix {
    m.transpose()
}

fn lift(field: &CycField, m: &IntMatrix) -> CycMatrix {
    let mut out = CycMatrix::zeros(field.clone(), m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, field.from_rational(BigRational::from_integer(m.get(i, j).clone())));
        }
    }
    out
}

trait IsZeroInt {
    fn is_zero_int(&self) -> bool;
}

impl IsZeroInt for BigInt {
    fn is_zero_int(&self) -> bool {
        use num_traits::Zero;
        self.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn trivial_action_on(names: &[&str]) -> GroupAction {
        let g = FiniteGroup::trivial();
        let act: Vec<usize> = (0..names.len()).collect();
        GroupAction::new(g, names.iter().map(|s| s.to_string()).collect(), act).unwrap()
    }

    fn z2_action(names: &[&str], perm: &[usize]) -> GroupAction {
        let g = FiniteGroup::cyclic(2);
        let mut act: Vec<usize> = (0..names.len()).collect();
        act.extend_from_slice(perm);
        GroupAction::new(g, names.iter().map(|s| s.to_string()).collect(), act).unwrap()
    }

    fn circle() -> GSimplicialComplex {
        // square graph: 4 vertices, 4 edges
        let a = trivial_action_on(&["0", "1", "2", "3"]);
        GSimplicialComplex::new(
            a,
            &[
                vec![0],
                vec![1],
                vec![2],
                vec![3],
                vec![0, 1],
                vec![1, 2],
                vec![2, 3],
                vec![0, 3],
            ],
        )
        .unwrap()
    }

    #[test]
    fn closure_is_required() {
        let a = trivial_action_on(&["0", "1"]);
        assert!(GSimplicialComplex::new(a, &[vec![0, 1]]).is_err());
    }

    #[test]
    fn betti_of_circle_and_disk() {
        assert_eq!(circle().betti_numbers(), vec![1, 1]);
        assert_eq!(circle().euler_characteristic(), 0);
        let a = trivial_action_on(&["0", "1", "2"]);
        let disk = GSimplicialComplex::new(
            a,
            &[vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 2], vec![0, 1, 2]],
        )
        .unwrap();
        assert_eq!(disk.betti_numbers(), vec![1, 0, 0]);
        assert_eq!(disk.euler_characteristic(), 1);
    }

    #[test]
    fn antipodal_square_has_empty_fixed_complex() {
        // rotate the square graph by two steps: a free involution
        let a = z2_action(&["0", "1", "2", "3"], &[2, 3, 0, 1]);
        let x = GSimplicialComplex::new(
            a,
            &[
                vec![0],
                vec![1],
                vec![2],
                vec![3],
                vec![0, 1],
                vec![1, 2],
                vec![2, 3],
                vec![0, 3],
            ],
        )
        .unwrap();
        let f = fixed_subcomplex(&x, 1).unwrap();
        assert_eq!(f.dimension(), None);
        // identity fixes everything
        let f0 = fixed_subcomplex(&x, 0).unwrap();
        assert_eq!(f0.n_simplices(0), 4);
        assert_eq!(f0.n_simplices(1), 4);
    }

    #[test]
    fn reflected_interval_fixes_midpoint_after_subdivision() {
        let a = z2_action(&["0", "1"], &[1, 0]);
        let x = GSimplicialComplex::new(a, &[vec![0], vec![1], vec![0, 1]]).unwrap();
        // without subdivision nothing is fixed by the swap
        assert_eq!(fixed_subcomplex(&x, 1).unwrap().dimension(), None);
        let sd = barycentric_subdivision(&x).unwrap();
        assert_eq!(sd.n_simplices(0), 3);
        assert_eq!(sd.n_simplices(1), 2);
        assert_eq!(sd.betti_numbers(), vec![1, 0]);
        let f = fixed_subcomplex(&sd, 1).unwrap();
        assert_eq!(f.n_simplices(0), 1);
        assert_eq!(f.dimension(), Some(0));
        assert_eq!(f.action.point_names[0], "b(0,1)");
    }

    #[test]
    fn subdivision_preserves_betti_of_circle() {
        let sd = barycentric_subdivision(&circle()).unwrap();
        assert_eq!(sd.n_simplices(0), 8);
        assert_eq!(sd.n_simplices(1), 8);
        assert_eq!(sd.betti_numbers(), vec![1, 1]);
    }

    #[test]
    fn twisted_dimension_two_swapped_points() {
        // Z/2 swapping two disjoint vertices: C² = trivial ⊕ sign
        let a = z2_action(&["p", "q"], &[1, 0]);
        let x = GSimplicialComplex::new(a, &[vec![0], vec![1]]).unwrap();
        let trivial = [BigInt::from(0), BigInt::from(0)];
        let sign = [BigInt::from(0), BigInt::from(1)];
        assert_eq!(twisted_invariant_dimension(&x, &trivial, 2, 0).unwrap(), 1);
        assert_eq!(twisted_invariant_dimension(&x, &sign, 2, 0).unwrap(), 1);
        assert_eq!(twisted_invariant_dimension(&x, &trivial, 2, 1).unwrap(), 0);
    }

    #[test]
    fn twisted_dimension_trivial_action_on_point() {
        let a = z2_action(&["p"], &[0]);
        let x = GSimplicialComplex::new(a, &[vec![0]]).unwrap();
        let trivial = [BigInt::from(0), BigInt::from(0)];
        let sign = [BigInt::from(0), BigInt::from(1)];
        assert_eq!(twisted_invariant_dimension(&x, &trivial, 2, 0).unwrap(), 1);
        assert_eq!(twisted_invariant_dimension(&x, &sign, 2, 0).unwrap(), 0);
    }

    #[test]
    fn twisted_dimension_trivial_character_gives_betti() {
        let x = circle();
        let chi = [BigInt::from(0)];
        assert_eq!(twisted_invariant_dimension(&x, &chi, 1, 0).unwrap(), 1);
        assert_eq!(twisted_invariant_dimension(&x, &chi, 1, 1).unwrap(), 1);
    }

    #[test]
    fn rotation_action_on_circle_twisted_h1() {
        // Z/2 rotating the square by two steps acts trivially on H¹
        let a = z2_action(&["0", "1", "2", "3"], &[2, 3, 0, 1]);
        let x = GSimplicialComplex::new(
            a,
            &[
                vec![0],
                vec![1],
                vec![2],
                vec![3],
                vec![0, 1],
                vec![1, 2],
                vec![2, 3],
                vec![0, 3],
            ],
        )
        .unwrap();
        let trivial = [BigInt::from(0), BigInt::from(0)];
        let sign = [BigInt::from(0), BigInt::from(1)];
        assert_eq!(twisted_invariant_dimension(&x, &trivial, 2, 1).unwrap(), 1);
        assert_eq!(twisted_invariant_dimension(&x, &sign, 2, 1).unwrap(), 0);
        assert_eq!(twisted_invariant_dimension(&x, &trivial, 2, 0).unwrap(), 1);
        assert_eq!(twisted_invariant_dimension(&x, &sign, 2, 0).unwrap(), 0);
    }

    #[test]
    fn non_homomorphism_rejected() {
        let a = z2_action(&["p"], &[0]);
        let x = GSimplicialComplex::new(a, &[vec![0]]).unwrap();
        let bad = [BigInt::from(1), BigInt::from(0)];
        assert!(twisted_invariant_dimension(&x, &bad, 2, 0).is_err());
    }

    #[test]
    fn pullbacks_commute_with_coboundary() {
        // reflection of the circle across a diagonal: 0↔0, 1↔3, 2↔2
        let a = z2_action(&["0", "1", "2", "3"], &[0, 3, 2, 1]);
        let x = GSimplicialComplex::new(
            a,
            &[
                vec![0],
                vec![1],
                vec![2],
                vec![3],
                vec![0, 1],
                vec![1, 2],
                vec![2, 3],
                vec![0, 3],
            ],
        )
        .unwrap();
        // signed action matrices M_h on cochains commute with δ = ∂ᵀ
        let boundary = x.boundary_matrix(1);
        let delta = boundary.transpose(); // C⁰ → C¹
        for h in 0..2 {
            let m0 = action_matrix(&x, h, 0);
            let m1 = action_matrix(&x, h, 1);
            assert_eq!(m1.mul(&delta), delta.mul(&m0));
        }
        // reflection fixes two vertices, H⁰ invariant both ways
        let trivial = [BigInt::from(0), BigInt::from(0)];
        let sign = [BigInt::from(0), BigInt::from(1)];
        assert_eq!(twisted_invariant_dimension(&x, &trivial, 2, 1).unwrap(), 0);
        assert_eq!(twisted_invariant_dimension(&x, &sign, 2, 1).unwrap(), 1);
    }

    fn action_matrix(x: &GSimplicialComplex, h: usize, d: usize) -> IntMatrix {
        let nd = x.n_simplices(d);
        let mut m = IntMatrix::zeros(nd, nd);
        for sigma in 0..nd {
            let (img, sign) = x.apply_signed(h, d, sigma);
            m.set(sigma, img, BigInt::from(sign));
        }
        m
    }
}
