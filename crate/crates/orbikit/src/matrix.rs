//! Dense integer matrices over arbitrary-precision integers, Smith normal
//! form with unimodular transforms, integer kernels and lattice utilities.
//!
//! Pivot selection is by smallest nonzero absolute value, which keeps entry
//! growth tame on the small dense matrices that dominate this crate. Kernels
//! of the large, very sparse cochain differentials go through a sparse
//! column-reduction that never materializes the row transform.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>, // row-major
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(12) {
            let row: Vec<String> = (0..self.cols.min(12)).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<BigInt>>) -> IntMatrix {
        let mut out = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                out.set(i, j, v.clone());
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = &*v * k;
        }
        out
    }
}

/// Result of a Smith normal form computation: `u * m * v = d` with `u`, `v`
/// unimodular and `d` diagonal with a divisibility chain.
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Diagonal entries (nonnegative), including zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|v| !v.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let n = m.rows().min(m.cols());

    for t in 0..n {
        loop {
            // pick the smallest nonzero entry in the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..a.rows {
                for j in t..a.cols {
                    if !a.get(i, j).is_zero() {
                        match pivot {
                            None => pivot = Some((i, j)),
                            Some((pi, pj)) => {
                                if a.get(i, j).abs() < a.get(pi, pj).abs() {
                                    pivot = Some((i, j));
                                }
                            }
                        }
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            swap_rows(&mut a, &mut u, t, pi);
            swap_cols(&mut a, &mut v, t, pj);

            let mut clean = true;
            for i in t + 1..a.rows {
                if !a.get(i, t).is_zero() {
                    let q = div_round(a.get(i, t), a.get(t, t));
                    if !q.is_zero() {
                        row_sub(&mut a, &mut u, i, t, &q);
                    }
                    if !a.get(i, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..a.cols {
                if !a.get(t, j).is_zero() {
                    let q = div_round(a.get(t, j), a.get(t, t));
                    if !q.is_zero() {
                        col_sub(&mut a, &mut v, j, t, &q);
                    }
                    if !a.get(t, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                let below = (t + 1..a.rows).all(|i| a.get(i, t).is_zero());
                let right = (t + 1..a.cols).all(|j| a.get(t, j).is_zero());
                if below && right {
                    break;
                }
            }
        }
    }

    // normalize signs
    for t in 0..n {
        if a.get(t, t).is_negative() {
            negate_row(&mut a, &mut u, t);
        }
    }

    // enforce the divisibility chain
    loop {
        let mut dirty = false;
        for i in 0..n {
            for j in i + 1..n {
                let di = a.get(i, i).clone();
                let dj = a.get(j, j).clone();
                if di.is_zero() && dj.is_zero() {
                    continue;
                }
                if di.is_zero() {
                    // move the nonzero entry forward
                    swap_rows(&mut a, &mut u, i, j);
                    swap_cols(&mut a, &mut v, i, j);
                    dirty = true;
                    continue;
                }
                if (&dj % &di).is_zero() {
                    continue;
                }
                dirty = true;
                // row_i += row_j, then a 2x2 gcd step on columns (i, j)
                row_add(&mut a, &mut u, i, j);
                let egcd = di.extended_gcd(&dj);
                let (g, x, y) = (egcd.gcd, egcd.x, egcd.y);
                // unimodular column transform [[x, -dj/g], [y, di/g]]
                let c1 = a.column(i);
                let c2 = a.column(j);
                let m1: Vec<BigInt> = c1.iter().zip(&c2).map(|(p, q)| p * &x + q * &y).collect();
                let m2: Vec<BigInt> =
                    c1.iter().zip(&c2).map(|(p, q)| -(p * (&dj / &g)) + q * (&di / &g)).collect();
                set_col(&mut a, i, &m1);
                set_col(&mut a, j, &m2);
                let v1 = v.column(i);
                let v2 = v.column(j);
                let w1: Vec<BigInt> = v1.iter().zip(&v2).map(|(p, q)| p * &x + q * &y).collect();
                let w2: Vec<BigInt> =
                    v1.iter().zip(&v2).map(|(p, q)| -(p * (&dj / &g)) + q * (&di / &g)).collect();
                set_col(&mut v, i, &w1);
                set_col(&mut v, j, &w2);
                // clear the (j, i) entry left by the transform
                let q = a.get(j, i) / a.get(i, i);
                row_sub(&mut a, &mut u, j, i, &q);
                if a.get(i, i).is_negative() {
                    negate_row(&mut a, &mut u, i);
                }
                if a.get(j, j).is_negative() {
                    negate_row(&mut a, &mut u, j);
                }
            }
        }
        if !dirty {
            break;
        }
    }

    Snf { d: a, u, v }
}

fn swap_rows(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..a.cols {
        a.data.swap(i * a.cols + c, j * a.cols + c);
    }
    for c in 0..u.cols {
        u.data.swap(i * u.cols + c, j * u.cols + c);
    }
}

fn swap_cols(a: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..a.rows {
        a.data.swap(r * a.cols + i, r * a.cols + j);
    }
    for r in 0..v.rows {
        v.data.swap(r * v.cols + i, r * v.cols + j);
    }
}

fn row_sub(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
    for c in 0..a.cols {
        let val = a.get(i, c) - q * a.get(t, c);
        a.set(i, c, val);
    }
    for c in 0..u.cols {
        let val = u.get(i, c) - q * u.get(t, c);
        u.set(i, c, val);
    }
}

fn row_add(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize) {
    for c in 0..a.cols {
        let val = a.get(i, c) + a.get(j, c);
        a.set(i, c, val);
    }
    for c in 0..u.cols {
        let val = u.get(i, c) + u.get(j, c);
        u.set(i, c, val);
    }
}

fn col_sub(a: &mut IntMatrix, v: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    for r in 0..a.rows {
        let val = a.get(r, j) - q * a.get(r, t);
        a.set(r, j, val);
    }
    for r in 0..v.rows {
        let val = v.get(r, j) - q * v.get(r, t);
        v.set(r, j, val);
    }
}

fn negate_row(a: &mut IntMatrix, u: &mut IntMatrix, i: usize) {
    for c in 0..a.cols {
        let val = -a.get(i, c);
        a.set(i, c, val);
    }
    for c in 0..u.cols {
        let val = -u.get(i, c);
        u.set(i, c, val);
    }
}

fn set_col(a: &mut IntMatrix, j: usize, col: &[BigInt]) {
    for (i, v) in col.iter().enumerate() {
        a.set(i, j, v.clone());
    }
}

/// Rounded integer division, |a - q*b| <= |b|/2.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if &r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

// ---------------------------------------------------------------------------
// sparse column reduction: kernels of large differentials
// ---------------------------------------------------------------------------

type SparseCol = Vec<(usize, BigInt)>; // sorted by row index

fn sparse_get(col: &SparseCol, row: usize) -> Option<&BigInt> {
    col.binary_search_by_key(&row, |e| e.0).ok().map(|k| &col[k].1)
}

/// col_a -= q * col_b, merging sorted entry lists.
fn sparse_axpy(a: &SparseCol, b: &SparseCol, q: &BigInt) -> SparseCol {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let v = -(q * &b[j].1);
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 - q * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Basis of the integer kernel lattice of `m`, returned as matrix columns.
/// The returned lattice is saturated (it is the full kernel, not a finite-
/// index sublattice).
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let cols = sparse_columns(m);
    let (kernel_v, _rank) = column_reduce_kernel(cols, m.cols());
    IntMatrix::from_columns(
        m.cols(),
        kernel_v
            .into_iter()
            .map(|c| {
                let mut dense = vec![BigInt::zero(); m.cols()];
                for (r, v) in c {
                    dense[r] = v;
                }
                dense
            })
            .collect(),
    )
}

pub fn rank(m: &IntMatrix) -> usize {
    let cols = sparse_columns(m);
    let (_, r) = column_reduce_kernel(cols, m.cols());
    r
}

fn sparse_columns(m: &IntMatrix) -> Vec<SparseCol> {
    let mut cols: Vec<SparseCol> = vec![Vec::new(); m.cols()];
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m.get(i, j);
            if !v.is_zero() {
                cols[j].push((i, v.clone()));
            }
        }
    }
    cols
}

/// Unimodular column reduction. Returns the V-columns whose matrix columns
/// reduced to zero (a kernel basis) and the matrix rank.
fn column_reduce_kernel(mut mat: Vec<SparseCol>, ncols: usize) -> (Vec<SparseCol>, usize) {
    let mut v: Vec<SparseCol> = (0..ncols).map(|j| vec![(j, BigInt::one())]).collect();
    let mut active: Vec<usize> = (0..ncols).collect();
    let mut rank = 0usize;

    loop {
        // choose pivot: smallest |value|, ties broken by sparser column
        let mut best: Option<(usize, usize)> = None; // (col, row)
        for &c in &active {
            for (r, val) in &mat[c] {
                let better = match best {
                    None => true,
                    Some((bc, br)) => {
                        let bv = sparse_get(&mat[bc], br).unwrap();
                        match val.abs().cmp(&bv.abs()) {
                            std::cmp::Ordering::Less => true,
                            std::cmp::Ordering::Equal => mat[c].len() < mat[bc].len(),
                            std::cmp::Ordering::Greater => false,
                        }
                    }
                };
                if better {
                    best = Some((c, *r));
                }
            }
        }
        let Some((mut p, row)) = best else { break };

        // clear `row` in every other active column
        loop {
            let mut swapped = false;
            let others: Vec<usize> = active.iter().copied().filter(|&c| c != p).collect();
            for c in others {
                let Some(val) = sparse_get(&mat[c], row).cloned() else { continue };
                let pval = sparse_get(&mat[p], row).unwrap().clone();
                let q = div_round(&val, &pval);
                if !q.is_zero() {
                    mat[c] = sparse_axpy(&mat[c], &mat[p], &q);
                    v[c] = sparse_axpy(&v[c], &v[p], &q);
                }
                if sparse_get(&mat[c], row).is_some() {
                    // remainder survived; it is strictly smaller, take over as pivot
                    p = c;
                    swapped = true;
                    break;
                }
            }
            if !swapped {
                break;
            }
        }
        active.retain(|&c| c != p);
        rank += 1;
    }

    let kernel = active.into_iter().map(|c| std::mem::take(&mut v[c])).collect();
    (kernel, rank)
}

// ---------------------------------------------------------------------------
// lattice utilities
// ---------------------------------------------------------------------------

/// A lattice basis in column echelon form: pivot rows strictly increasing,
/// pivot entries positive, entries above each pivot reduced.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    pub ambient_dim: usize,
    /// (pivot_row, column) pairs in increasing pivot row order.
    pub columns: Vec<(usize, Vec<BigInt>)>,
}

impl EchelonBasis {
    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    pub fn as_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.ambient_dim, self.columns.iter().map(|(_, c)| c.clone()).collect())
    }
}

/// Column echelon form of the lattice spanned by the columns of `gens`.
/// Deterministic canonical basis (a Hermite-style normal form).
pub fn column_echelon(gens: &IntMatrix) -> EchelonBasis {
    let n = gens.rows();
    let mut cols: Vec<Vec<BigInt>> = (0..gens.cols()).map(|j| gens.column(j)).collect();
    cols.retain(|c| c.iter().any(|v| !v.is_zero()));
    let mut pivots: Vec<(usize, Vec<BigInt>)> = Vec::new();

    for row in 0..n {
        // gcd-combine columns with a nonzero entry at `row` into one
        loop {
            let mut idxs: Vec<usize> =
                (0..cols.len()).filter(|&j| !cols[j][row].is_zero()).collect();
            if idxs.len() <= 1 {
                break;
            }
            // smallest absolute entry leads
            idxs.sort_by_key(|&j| cols[j][row].abs());
            let lead = idxs[0];
            for &j in &idxs[1..] {
                let q = div_round(&cols[j][row].clone(), &cols[lead][row].clone());
                if !q.is_zero() {
                    for r in 0..n {
                        let val = &cols[j][r] - &q * &cols[lead][r];
                        cols[j][r] = val;
                    }
                }
            }
        }
        if let Some(j) = (0..cols.len()).find(|&j| !cols[j][row].is_zero()) {
            let mut pcol = cols.swap_remove(j);
            if pcol[row].is_negative() {
                for v in pcol.iter_mut() {
                    *v = -&*v;
                }
            }
            // reduce earlier pivot columns at this row for canonicity
            for (_, earlier) in pivots.iter_mut() {
                let q = earlier[row].div_floor(&pcol[row]);
                if !q.is_zero() {
                    for r in 0..n {
                        let val = &earlier[r] - &q * &pcol[r];
                        earlier[r] = val;
                    }
                }
            }
            pivots.push((row, pcol));
        }
        cols.retain(|c| c.iter().any(|v| !v.is_zero()));
        if cols.is_empty() {
            break;
        }
    }

    EchelonBasis { ambient_dim: n, columns: pivots }
}

/// Solve `basis * y = target` exactly over Z. Returns None when the target is
/// not in the lattice spanned by the basis.
pub fn solve_in_echelon(basis: &EchelonBasis, target: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut work = target.to_vec();
    let mut coeffs = Vec::with_capacity(basis.columns.len());
    for (row, col) in &basis.columns {
        let (q, r) = work[*row].div_rem(&col[*row]);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (w, c) in work.iter_mut().zip(col.iter()) {
                *w -= &q * c;
            }
        }
        coeffs.push(q);
    }
    if work.iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(coeffs)
}

/// Lexicographically smallest representative of `v + L` with nonnegative
/// coordinates at the pivot rows (coset canonical form).
pub fn reduce_coset(basis: &EchelonBasis, v: &[BigInt]) -> Vec<BigInt> {
    let mut work = v.to_vec();
    for (row, col) in &basis.columns {
        let q = work[*row].div_floor(&col[*row]);
        if !q.is_zero() {
            for (w, c) in work.iter_mut().zip(col.iter()) {
                *w -= &q * c;
            }
        }
    }
    work
}

/// Generators of the intersection of the lattices spanned by the columns of
/// `a` and `b` (both inside Z^n).
pub fn lattice_intersection(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.rows(), b.rows());
    // kernel of [a | -b]; the a-part of each kernel vector gives a point in both
    let neg_b = b.scale(&BigInt::from(-1));
    let stacked = a.hcat(&neg_b);
    let ker = kernel_basis(&stacked);
    let mut cols = Vec::new();
    for j in 0..ker.cols() {
        let coeff: Vec<BigInt> = (0..a.cols()).map(|i| ker.get(i, j).clone()).collect();
        let mut pt = vec![BigInt::zero(); a.rows()];
        for (i, c) in coeff.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for r in 0..a.rows() {
                pt[r] += c * a.get(r, i);
            }
        }
        cols.push(pt);
    }
    IntMatrix::from_columns(a.rows(), cols)
}

// ---------------------------------------------------------------------------
// modular linear systems
// ---------------------------------------------------------------------------

/// A solution of `A x = b (mod m)` together with generators of the space of
/// homogeneous solutions mod m.
#[derive(Debug, Clone)]
pub struct ModSolution {
    pub particular: Vec<BigInt>,
    pub homogeneous: Vec<Vec<BigInt>>,
    pub modulus: BigInt,
}

/// Decide `A x = b (mod m)` exactly via Smith normal form. `None` is a
/// definitive "no solution".
pub fn solve_mod(a: &IntMatrix, b: &[BigInt], m: &BigInt) -> Result<Option<ModSolution>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "solve_mod: {} rows vs rhs of length {}",
            a.rows(),
            b.len()
        )));
    }
    if m < &BigInt::from(2) {
        return Err(Error::Invalid("solve_mod: modulus must be >= 2".into()));
    }
    let snf = smith_normal_form(a);
    // c = U b
    let mut c = vec![BigInt::zero(); a.rows()];
    for i in 0..a.rows() {
        for j in 0..a.rows() {
            if !snf.u.get(i, j).is_zero() {
                c[i] += snf.u.get(i, j) * &b[j];
            }
        }
    }
    let n = a.rows().min(a.cols());
    let mut z = vec![BigInt::zero(); a.cols()];
    let mut homogeneous_z: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..a.cols() {
        let d = if i < n { snf.d.get(i, i).clone() } else { BigInt::zero() };
        if d.is_zero() {
            // free coordinate
            let mut h = vec![BigInt::zero(); a.cols()];
            h[i] = BigInt::one();
            homogeneous_z.push(h);
        } else {
            let g = d.gcd(m);
            let ci = if i < c.len() { c[i].mod_floor(m) } else { BigInt::zero() };
            if !(&ci % &g).is_zero() {
                return Ok(None);
            }
            // d/g * z = c/g (mod m/g), d/g invertible mod m/g
            let mg = m / &g;
            if mg > BigInt::one() {
                let dg = (&d / &g).mod_floor(&mg);
                let inv = mod_inverse(&dg, &mg)
                    .expect("d/g coprime to m/g by construction");
                z[i] = ((&ci / &g) * inv).mod_floor(&mg);
                let mut h = vec![BigInt::zero(); a.cols()];
                h[i] = mg.clone();
                homogeneous_z.push(h);
            } else {
                z[i] = BigInt::zero();
                let mut h = vec![BigInt::zero(); a.cols()];
                h[i] = BigInt::one();
                homogeneous_z.push(h);
            }
        }
    }
    // rows beyond the diagonal must vanish mod m
    for (i, ci) in c.iter().enumerate() {
        if i >= n || snf.d.get(i, i).is_zero() {
            if !ci.mod_floor(m).is_zero() {
                return Ok(None);
            }
        }
    }
    // x = V z mod m
    let to_x = |zv: &[BigInt]| -> Vec<BigInt> {
        let mut x = vec![BigInt::zero(); a.cols()];
        for i in 0..a.cols() {
            for j in 0..a.cols() {
                if !snf.v.get(i, j).is_zero() && !zv[j].is_zero() {
                    x[i] += snf.v.get(i, j) * &zv[j];
                }
            }
            x[i] = x[i].mod_floor(m);
        }
        x
    };
    let particular = to_x(&z);
    let homogeneous: Vec<Vec<BigInt>> = homogeneous_z
        .iter()
        .map(|h| to_x(h))
        .filter(|x| x.iter().any(|v| !v.is_zero()))
        .collect();
    // exact postcondition check
    for i in 0..a.rows() {
        let mut acc = BigInt::zero();
        for j in 0..a.cols() {
            acc += a.get(i, j) * &particular[j];
        }
        debug_assert!(((&acc - &b[i]).mod_floor(m)).is_zero());
    }
    Ok(Some(ModSolution { particular, homogeneous, modulus: m.clone() }))
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}
