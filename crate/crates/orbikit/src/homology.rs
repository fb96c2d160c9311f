//! Chain-complex (co)homology over Z and Z/m via Smith normal form, and the
//! U(1)-coefficient variant realized with roots of unity of a refined
//! modulus.
//!
//! U(1) cohomology in degree n is computed as follows: cocycles are taken
//! with values in the m-th roots of unity (exponents mod m), while
//! coboundaries are allowed to come from cochains valued in the N-th roots,
//! N = m * e, where e annihilates every 1-cocycle on the object. If f is a
//! U(1) cochain with m * delta(f) = 0 then m * f is a 1-cocycle, so f takes
//! values in the (m*e)-th roots; this makes the finite computation agree
//! with the honest Q/Z answer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{
    column_echelon, kernel_basis, lattice_intersection, reduce_coset, smith_normal_form,
    solve_in_echelon, EchelonBasis, IntMatrix, Snf,
};

/// Finitely generated abelian group: free rank plus torsion coefficients in
/// divisibility order (each >= 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupPresentation {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupPresentation {
    pub fn trivial() -> Self {
        AbelianGroupPresentation { free_rank: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion.iter().product())
    }
}

impl std::fmt::Display for AbelianGroupPresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for _ in 0..self.free_rank {
            parts.push("Z".to_string());
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A bounded complex of free Z-modules. `ranks[k]` is the rank of the module
/// in degree k; `diffs[k]` maps degree k+1 to degree k when `cochain` is
/// false (boundary maps), and degree k to degree k+1 when true (cochain
/// differentials). Either way `diffs[k]` has shape compatible with
/// `ranks[k]` and `ranks[k+1]`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub ranks: Vec<usize>,
    pub diffs: Vec<IntMatrix>,
    pub cochain: bool,
}

impl ChainComplex {
    pub fn new(ranks: Vec<usize>, diffs: Vec<IntMatrix>, cochain: bool) -> Result<Self> {
        if ranks.is_empty() || diffs.len() + 1 != ranks.len() {
            return Err(Error::Invalid("complex: need ranks.len() == diffs.len() + 1".into()));
        }
        for (k, d) in diffs.iter().enumerate() {
            let (r, c) = if cochain { (ranks[k + 1], ranks[k]) } else { (ranks[k], ranks[k + 1]) };
            if d.rows() != r || d.cols() != c {
                return Err(Error::Invalid(format!(
                    "complex: differential {k} has shape {}x{}, expected {r}x{c}",
                    d.rows(),
                    d.cols()
                )));
            }
        }
        let cc = ChainComplex { ranks, diffs, cochain };
        cc.check_composites()?;
        Ok(cc)
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    fn check_composites(&self) -> Result<()> {
        for k in 0..self.diffs.len().saturating_sub(1) {
            let prod = if self.cochain {
                self.diffs[k + 1].mul(&self.diffs[k])
            } else {
                self.diffs[k].mul(&self.diffs[k + 1])
            };
            if !prod.is_zero() {
                return Err(Error::Invalid(format!("complex: d∘d != 0 at degree {k}")));
            }
        }
        Ok(())
    }

    /// Cochain differential out of degree n (possibly a zero map).
    fn delta_out(&self, n: usize) -> IntMatrix {
        assert!(self.cochain);
        if n < self.diffs.len() {
            self.diffs[n].clone()
        } else {
            IntMatrix::zeros(0, self.ranks[n])
        }
    }

    /// Cochain differential into degree n (possibly a zero map).
    fn delta_in(&self, n: usize) -> IntMatrix {
        assert!(self.cochain);
        if n == 0 {
            IntMatrix::zeros(self.ranks[0], 0)
        } else {
            self.diffs[n - 1].clone()
        }
    }

    /// View as a cochain complex (transpose boundary maps when needed).
    pub fn dualize(&self) -> ChainComplex {
        if self.cochain {
            self.clone()
        } else {
            ChainComplex {
                ranks: self.ranks.clone(),
                diffs: self.diffs.iter().map(|d| d.transpose()).collect(),
                cochain: true,
            }
        }
    }
}

/// Presentation of ker(out) / im(in) for integer matrices with
/// out ∘ in = 0 and ker(out) saturated.
fn subquotient(map_out: &IntMatrix, map_in: &IntMatrix) -> AbelianGroupPresentation {
    let kernel = kernel_basis(map_out);
    let basis = column_echelon(&kernel);
    quotient_in_basis(&basis, map_in).0
}

/// Quotient of the lattice spanned by `basis` by the sublattice generated by
/// the columns of `gens` (which must lie in the lattice). Also returns the
/// coordinate data used to locate classes.
fn quotient_in_basis(basis: &EchelonBasis, gens: &IntMatrix) -> (AbelianGroupPresentation, Snf) {
    let k = basis.rank();
    let mut cols = Vec::new();
    for j in 0..gens.cols() {
        let target = gens.column(j);
        let y = solve_in_echelon(basis, &target)
            .expect("generators must lie in the ambient lattice");
        cols.push(y);
    }
    let y = IntMatrix::from_columns(k, cols);
    let snf = smith_normal_form(&y);
    let mut torsion = Vec::new();
    let mut rank_y = 0usize;
    for d in snf.diagonal() {
        if d.is_zero() {
            continue;
        }
        rank_y += 1;
        if d > BigInt::one() {
            torsion.push(d);
        }
    }
    (AbelianGroupPresentation { free_rank: k - rank_y, torsion }, snf)
}

/// Homology ker(d_n)/im(d_{n+1}) of a chain complex (or cohomology of a
/// cochain complex) in degree n, over Z.
pub fn homology(c: &ChainComplex, n: usize) -> Result<AbelianGroupPresentation> {
    if n >= c.ranks.len() {
        return Err(Error::DegreeOutOfRange(n));
    }
    let (map_out, map_in) = if c.cochain {
        (c.delta_out(n), c.delta_in(n))
    } else {
        let out = if n == 0 {
            IntMatrix::zeros(0, c.ranks[0])
        } else {
            c.diffs[n - 1].clone()
        };
        let inn = if n < c.diffs.len() {
            c.diffs[n].clone()
        } else {
            IntMatrix::zeros(c.ranks[n], 0)
        };
        (out, inn)
    };
    Ok(subquotient(&map_out, &map_in))
}

/// Cohomology of the complex in degree n with Z/m coefficients (m = 0 means
/// Z). Chain complexes are dualized first.
pub fn cohomology_mod(c: &ChainComplex, n: usize, m: u64) -> Result<AbelianGroupPresentation> {
    let cc = c.dualize();
    if n >= cc.ranks.len() {
        return Err(Error::DegreeOutOfRange(n));
    }
    if m == 0 {
        return homology(&cc, n);
    }
    let b = cc.delta_out(n);
    let a = cc.delta_in(n);
    let dim = cc.ranks[n];
    let mbig = BigInt::from(m);

    // lattice of mod-m cocycles: projections of ker [B | m I]
    let basis = mod_kernel_lattice(&b, &mbig, dim);
    // mod-m coboundaries together with m Z^dim
    let gens = a.hcat(&IntMatrix::identity(dim).scale(&mbig));
    let (pres, _) = quotient_in_basis(&basis, &gens);
    Ok(pres)
}

/// Echelon basis of { x in Z^dim : B x = 0 (mod m) }.
fn mod_kernel_lattice(b: &IntMatrix, m: &BigInt, dim: usize) -> EchelonBasis {
    let aug = b.hcat(&IntMatrix::identity(b.rows()).scale(m));
    let ker = kernel_basis(&aug);
    let mut cols = Vec::new();
    for j in 0..ker.cols() {
        let x: Vec<BigInt> = (0..dim).map(|i| ker.get(i, j).clone()).collect();
        if x.iter().any(|v| !v.is_zero()) {
            cols.push(x);
        }
    }
    // make sure m Z^dim is included even if the kernel projection missed
    // directions (it cannot, but the extra generators are free)
    for i in 0..dim {
        let mut x = vec![BigInt::zero(); dim];
        x[i] = m.clone();
        cols.push(x);
    }
    column_echelon(&IntMatrix::from_columns(dim, cols))
}

/// Degree-n cohomology with U(1) coefficients realized on roots of unity:
/// classes of mu_m-valued cocycles modulo coboundaries of mu_{m*e}-valued
/// cochains. Provides class coordinates for concrete cocycles.
pub struct U1Cohomology {
    pub group: AbelianGroupPresentation,
    modulus: BigInt,
    scale: BigInt, // N / m
    cocycle_lattice: EchelonBasis,
    relations: EchelonBasis,
    snf: Snf,
    torsion_slots: Vec<(usize, BigInt)>, // (coordinate index in U*y, order)
}

impl U1Cohomology {
    /// `map_in`: cochain differential into degree n; `map_out`: out of degree
    /// n; `m`: value modulus; `e`: 1-cocycle annihilator (N = m * e).
    pub fn compute(map_in: &IntMatrix, map_out: &IntMatrix, m: u64, e: u64) -> Self {
        assert!(m >= 1 && e >= 1);
        let dim = map_out.cols();
        assert!(map_in.rows() == dim || map_in.cols() == 0);
        let mbig = BigInt::from(m);
        let nbig = BigInt::from(m) * BigInt::from(e);
        let scale = &nbig / &mbig;

        // Z' = (N/m) * { x : out x = 0 (mod m) }, inside exponents mod N
        let zm = mod_kernel_lattice(map_out, &mbig, dim);
        let z_cols: Vec<Vec<BigInt>> = zm
            .columns
            .iter()
            .map(|(_, c)| c.iter().map(|v| v * &scale).collect())
            .collect();
        let z_matrix = IntMatrix::from_columns(dim, z_cols);
        let cocycle_lattice = column_echelon(&z_matrix);

        // R' = (im(in) + N Z^dim) intersect Z'
        let r0 = map_in.hcat(&IntMatrix::identity(dim).scale(&nbig));
        let inter = lattice_intersection(&r0, &cocycle_lattice.as_matrix());
        let relations = column_echelon(&inter);

        let (group, snf) = quotient_in_basis(&cocycle_lattice, &relations.as_matrix());
        let mut torsion_slots = Vec::new();
        let diag = snf.diagonal();
        for (i, d) in diag.iter().enumerate() {
            if d > &BigInt::one() {
                torsion_slots.push((i, d.clone()));
            }
        }
        // free slots (d = 0) also carry coordinates
        for (i, d) in diag.iter().enumerate() {
            if d.is_zero() {
                torsion_slots.push((i, BigInt::zero()));
            }
        }
        for i in diag.len()..cocycle_lattice.rank() {
            torsion_slots.push((i, BigInt::zero()));
        }

        U1Cohomology {
            group,
            modulus: mbig,
            scale,
            cocycle_lattice,
            relations,
            snf,
            torsion_slots,
        }
    }

    /// Coordinates of the class of a mu_m-valued cocycle (exponent vector mod
    /// m), one per invariant-factor slot, plus the order of the class.
    pub fn class_of(&self, exponents: &[BigInt]) -> Result<U1Class> {
        let scaled: Vec<BigInt> = exponents.iter().map(|v| v * &self.scale).collect();
        let y = solve_in_echelon(&self.cocycle_lattice, &scaled).ok_or_else(|| {
            Error::Invalid("class_of: vector is not a cocycle of the given modulus".into())
        })?;
        // w = U y
        let k = self.cocycle_lattice.rank();
        let mut w = vec![BigInt::zero(); k];
        for i in 0..k {
            for j in 0..k {
                if !self.snf.u.get(i, j).is_zero() {
                    w[i] += self.snf.u.get(i, j) * &y[j];
                }
            }
        }
        let mut coords = Vec::new();
        let mut order = BigInt::one();
        for (slot, d) in &self.torsion_slots {
            let c = if d.is_zero() { w[*slot].clone() } else { w[*slot].mod_floor(d) };
            if !c.is_zero() {
                if d.is_zero() {
                    order = BigInt::zero(); // infinite order (cannot happen for finite H)
                } else {
                    let g = c.gcd(d);
                    order = order.lcm(&(d / &g));
                }
            }
            coords.push(c);
        }
        Ok(U1Class { coords, order })
    }

    /// Representative exponent vectors (mod m), one per class, in canonical
    /// coset-reduced form. Only available when the group is finite and small.
    pub fn enumerate_class_representatives(&self, cap: usize) -> Result<Vec<Vec<BigInt>>> {
        let order = self
            .group
            .order()
            .ok_or_else(|| Error::Invalid("infinite cohomology group".into()))?;
        if order > BigInt::from(cap) {
            return Err(Error::ResourceCap(format!(
                "cohomology group of order {order} exceeds enumeration cap {cap}"
            )));
        }
        // columns of U^{-1} indexed by torsion slots generate the quotient
        let u_inv = unimodular_inverse(&self.snf.u);
        let k = self.cocycle_lattice.rank();
        let gens: Vec<(Vec<BigInt>, BigInt)> = self
            .torsion_slots
            .iter()
            .filter(|(_, d)| d > &BigInt::one())
            .map(|(slot, d)| {
                let y: Vec<BigInt> = (0..k).map(|i| u_inv.get(i, *slot).clone()).collect();
                (y, d.clone())
            })
            .collect();
        let mut reps = Vec::new();
        let mut counters = vec![BigInt::zero(); gens.len()];
        loop {
            // assemble y = sum counters[i] * gens[i]
            let mut y = vec![BigInt::zero(); k];
            for (c, (gy, _)) in counters.iter().zip(&gens) {
                if c.is_zero() {
                    continue;
                }
                for (yi, gi) in y.iter_mut().zip(gy) {
                    *yi += c * gi;
                }
            }
            // x = basis * y, then divide by scale and reduce coset-canonically
            let mut x = vec![BigInt::zero(); self.cocycle_lattice.ambient_dim];
            for ((_, col), yi) in self.cocycle_lattice.columns.iter().zip(&y) {
                if yi.is_zero() {
                    continue;
                }
                for (xi, ci) in x.iter_mut().zip(col) {
                    *xi += yi * ci;
                }
            }
            let reduced = reduce_coset(&self.relations, &x);
            let rep: Vec<BigInt> = reduced
                .iter()
                .map(|v| {
                    debug_assert!((v % &self.scale).is_zero());
                    (v / &self.scale).mod_floor(&self.modulus)
                })
                .collect();
            reps.push(rep);
            // increment mixed-radix counter
            let mut i = 0;
            loop {
                if i >= counters.len() {
                    return Ok(reps);
                }
                counters[i] += 1;
                if counters[i] < gens[i].1 {
                    break;
                }
                counters[i] = BigInt::zero();
                i += 1;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct U1Class {
    pub coords: Vec<BigInt>,
    pub order: BigInt,
}

impl U1Class {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(u: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(u);
    // us * u * vs = I  =>  u^{-1} = vs * us
    debug_assert_eq!(snf.d, IntMatrix::identity(u.rows()));
    snf.v.mul(&snf.u)
}
