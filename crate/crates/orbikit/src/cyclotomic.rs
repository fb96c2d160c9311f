//! Exact arithmetic in cyclotomic fields Q(ζ_m) = Q[x]/Φ_m(x) with rational
//! coefficients, and dense matrices over them (products, Kronecker products,
//! determinants, inverses and ranks by Gaussian elimination).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Monic cyclotomic polynomial Φ_m as a dense coefficient vector
/// (constant term first).
pub fn cyclotomic_polynomial(m: u64) -> Vec<Q> {
    assert!(m >= 1);
    // Φ_m = (x^m - 1) / Π_{d | m, d < m} Φ_d, computed recursively
    let mut num = vec![q(0); m as usize + 1];
    num[0] = q(-1);
    num[m as usize] = q(1);
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact polynomial division (remainder must vanish); divisor monic or not.
fn poly_div_exact(a: &[Q], b: &[Q]) -> Vec<Q> {
    let (mut quot, rem) = poly_div_rem(a, b);
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    while quot.len() > 1 && quot.last().map_or(false, |c| c.is_zero()) {
        quot.pop();
    }
    quot
}

fn poly_deg(a: &[Q]) -> Option<usize> {
    (0..a.len()).rev().find(|&i| !a[i].is_zero())
}

fn poly_div_rem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let db = poly_deg(b).expect("division by zero polynomial");
    let mut rem: Vec<Q> = a.to_vec();
    let mut quot = vec![q(0); a.len().saturating_sub(db) + 1];
    loop {
        let Some(dr) = poly_deg(&rem) else { break };
        if dr < db {
            break;
        }
        let c = &rem[dr] / &b[db];
        quot[dr - db] = c.clone();
        for i in 0..=db {
            let v = &rem[dr - db + i] - &c * &b[i];
            rem[dr - db + i] = v;
        }
    }
    (quot, rem)
}

/// The field Q(ζ_m): elements are coefficient vectors of length deg(Φ_m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycField {
    pub conductor: u64,
    phi: Vec<Q>,
}

/// An element of Q(ζ_m), reduced mod Φ_m.
pub type Cyc = Vec<Q>;

impl CycField {
    pub fn new(conductor: u64) -> CycField {
        CycField { conductor, phi: cyclotomic_polynomial(conductor) }
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn zero(&self) -> Cyc {
        vec![q(0); self.degree()]
    }

    pub fn one(&self) -> Cyc {
        self.from_rational(q(1))
    }

    pub fn from_rational(&self, r: Q) -> Cyc {
        let mut v = self.zero();
        if self.degree() > 0 {
            v[0] = r;
        }
        v
    }

    /// ζ_m^k.
    pub fn root_of_unity(&self, k: i64) -> Cyc {
        let m = self.conductor as i64;
        let e = k.rem_euclid(m) as usize;
        let mut poly = vec![q(0); e + 1];
        poly[e] = q(1);
        self.reduce(&poly)
    }

    /// Embed an exponent mod `modulus` (dividing the conductor) as a root of
    /// unity: exp(2πi e / modulus) = ζ_m^{e * m / modulus}.
    pub fn from_exponent(&self, e: &BigInt, modulus: u64) -> Result<Cyc> {
        if modulus == 0 || self.conductor % modulus != 0 {
            return Err(Error::Invalid(format!(
                "modulus {modulus} does not divide conductor {}",
                self.conductor
            )));
        }
        let scale = self.conductor / modulus;
        let em = e.mod_floor_u64(modulus);
        Ok(self.root_of_unity((em * scale) as i64))
    }

    /// Embed into a larger cyclotomic field: ζ_m ↦ ζ_M^{M/m}.
    pub fn embed(&self, target: &CycField, a: &Cyc) -> Result<Cyc> {
        if target.conductor % self.conductor != 0 {
            return Err(Error::Invalid(format!(
                "cannot embed conductor {} into conductor {}",
                self.conductor, target.conductor
            )));
        }
        let k = (target.conductor / self.conductor) as usize;
        let mut poly = vec![q(0); a.len() * k + 1];
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                poly[i * k] = c.clone();
            }
        }
        Ok(target.reduce(&poly))
    }

    fn reduce(&self, poly: &[Q]) -> Cyc {
        let (_, rem) = poly_div_rem(poly, &self.phi);
        let mut out = self.zero();
        for (i, c) in rem.into_iter().enumerate() {
            if i < out.len() {
                out[i] = c;
            }
        }
        out
    }

    pub fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &Cyc, b: &Cyc) -> Cyc {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &Cyc) -> Cyc {
        a.iter().map(|x| -x).collect()
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        let mut prod = vec![q(0); 2 * self.degree().max(1)];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    let v = &prod[i + j] + x * y;
                    prod[i + j] = v;
                }
            }
        }
        self.reduce(&prod)
    }

    pub fn is_zero(&self, a: &Cyc) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x];
    /// None for zero.
    pub fn inverse(&self, a: &Cyc) -> Option<Cyc> {
        if self.is_zero(a) {
            return None;
        }
        // r0 = Φ, r1 = a; maintain s only for a-coefficients
        let mut r0: Vec<Q> = self.phi.clone();
        let mut r1: Vec<Q> = a.clone();
        let mut s0: Vec<Q> = vec![];
        let mut s1: Vec<Q> = vec![q(1)];
        while poly_deg(&r1).map_or(false, |d| d > 0) {
            let (quot, rem) = poly_div_rem(&r0, &r1);
            let s_next = poly_sub(&s0, &poly_mul(&quot, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s_next;
        }
        let d = poly_deg(&r1)?;
        if d != 0 {
            return None; // not coprime with Φ_m (cannot happen for field input)
        }
        let c = r1[0].clone();
        let inv: Vec<Q> = s1.iter().map(|x| x / &c).collect();
        Some(self.reduce(&inv))
    }
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![q(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                let v = &out[i + j] + x * y;
                out[i + j] = v;
            }
        }
    }
    out
}

fn poly_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| q(0));
            let y = b.get(i).cloned().unwrap_or_else(|| q(0));
            x - y
        })
        .collect()
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, m: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, m: u64) -> u64 {
        use num_integer::Integer;
        let r = self.mod_floor(&BigInt::from(m));
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }
}

/// Dense matrix over Q(ζ_m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycMatrix {
    pub field: CycField,
    rows: usize,
    cols: usize,
    data: Vec<Cyc>, // row-major
}

impl CycMatrix {
    pub fn zeros(field: CycField, rows: usize, cols: usize) -> CycMatrix {
        let z = field.zero();
        CycMatrix { field, rows, cols, data: vec![z; rows * cols] }
    }

    pub fn identity(field: CycField, n: usize) -> CycMatrix {
        let mut m = CycMatrix::zeros(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
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
    pub fn get(&self, i: usize, j: usize) -> &Cyc {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Cyc) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.field, other.field);
        let f = &self.field;
        let mut out = CycMatrix::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !f.is_zero(b) {
                        let v = f.add(out.get(i, j), &f.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field.clone();
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        CycMatrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Cyc) -> CycMatrix {
        let f = self.field.clone();
        let data = self.data.iter().map(|a| f.mul(a, c)).collect();
        CycMatrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn kron(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.field, other.field);
        let f = self.field.clone();
        let mut out = CycMatrix::zeros(f.clone(), self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if f.is_zero(a) {
                    continue;
                }
                for p in 0..other.rows {
                    for r in 0..other.cols {
                        let v = f.mul(a, other.get(p, r));
                        out.set(i * other.rows + p, j * other.cols + r, v);
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.field, other.field);
        let mut out = CycMatrix::zeros(
            self.field.clone(),
            self.rows + other.rows,
            self.cols + other.cols,
        );
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Determinant by fraction-free-ish Gaussian elimination over the field.
    pub fn det(&self) -> Result<Cyc> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let f = self.field.clone();
        let n = self.rows;
        let mut a = self.clone();
        let mut det = f.one();
        let mut sign = false;
        for t in 0..n {
            let pivot = (t..n).find(|&i| !f.is_zero(a.get(i, t)));
            let Some(p) = pivot else { return Ok(f.zero()) };
            if p != t {
                for j in 0..n {
                    let x = a.get(p, j).clone();
                    let y = a.get(t, j).clone();
                    a.set(p, j, y);
                    a.set(t, j, x);
                }
                sign = !sign;
            }
            let pv = a.get(t, t).clone();
            det = f.mul(&det, &pv);
            let pinv = f.inverse(&pv).expect("nonzero pivot");
            for i in t + 1..n {
                let factor = f.mul(a.get(i, t), &pinv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in t..n {
                    let v = f.sub(a.get(i, j), &f.mul(&factor, a.get(t, j)));
                    a.set(i, j, v);
                }
            }
        }
        if sign {
            det = f.neg(&det);
        }
        Ok(det)
    }

    /// Inverse by Gauss–Jordan; None when singular.
    pub fn inverse(&self) -> Result<Option<CycMatrix>> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let f = self.field.clone();
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = CycMatrix::identity(f.clone(), n);
        for t in 0..n {
            let Some(p) = (t..n).find(|&i| !f.is_zero(a.get(i, t))) else {
                return Ok(None);
            };
            if p != t {
                for j in 0..n {
                    let (x, y) = (a.get(p, j).clone(), a.get(t, j).clone());
                    a.set(p, j, y);
                    a.set(t, j, x);
                    let (x, y) = (inv.get(p, j).clone(), inv.get(t, j).clone());
                    inv.set(p, j, y);
                    inv.set(t, j, x);
                }
            }
            let pinv = f.inverse(a.get(t, t)).expect("nonzero pivot");
            for j in 0..n {
                let v = f.mul(a.get(t, j), &pinv);
                a.set(t, j, v);
                let v = f.mul(inv.get(t, j), &pinv);
                inv.set(t, j, v);
            }
            for i in 0..n {
                if i == t || f.is_zero(a.get(i, t)) {
                    continue;
                }
                let factor = a.get(i, t).clone();
                for j in 0..n {
                    let v = f.sub(a.get(i, j), &f.mul(&factor, a.get(t, j)));
                    a.set(i, j, v);
                    let v = f.sub(inv.get(i, j), &f.mul(&factor, inv.get(t, j)));
                    inv.set(i, j, v);
                }
            }
        }
        Ok(Some(inv))
    }

    /// Rank by row elimination.
    pub fn rank(&self) -> usize {
        let f = self.field.clone();
        let mut a = self.clone();
        let mut rank = 0usize;
        let mut row = 0usize;
        for col in 0..self.cols {
            let Some(p) = (row..self.rows).find(|&i| !f.is_zero(a.get(i, col))) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    let (x, y) = (a.get(p, j).clone(), a.get(row, j).clone());
                    a.set(p, j, y);
                    a.set(row, j, x);
                }
            }
            let pinv = f.inverse(a.get(row, col)).expect("nonzero pivot");
            for i in row + 1..self.rows {
                let factor = f.mul(a.get(i, col), &pinv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in col..self.cols {
                    let v = f.sub(a.get(i, j), &f.mul(&factor, a.get(row, j)));
                    a.set(i, j, v);
                }
            }
            rank += 1;
            row += 1;
            if row == self.rows {
                break;
            }
        }
        rank
    }

    /// Indices of a column basis of the image (pivot columns).
    pub fn pivot_columns(&self) -> Vec<usize> {
        let f = self.field.clone();
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            let Some(p) = (row..self.rows).find(|&i| !f.is_zero(a.get(i, col))) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    let (x, y) = (a.get(p, j).clone(), a.get(row, j).clone());
                    a.set(p, j, y);
                    a.set(row, j, x);
                }
            }
            let pinv = f.inverse(a.get(row, col)).expect("nonzero pivot");
            for i in row + 1..self.rows {
                let factor = f.mul(a.get(i, col), &pinv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in col..self.cols {
                    let v = f.sub(a.get(i, j), &f.mul(&factor, a.get(row, j)));
                    a.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        pivots
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = CycMatrix::zeros(self.field.clone(), self.rows, self.cols + other.cols);
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| self.field.is_zero(c))
    }
}

/// Pretty printer used by reports: integer/rational when possible, else the
/// coefficient list in ζ.
pub fn cyc_to_string(f: &CycField, a: &Cyc) -> String {
    if f.is_zero(a) {
        return "0".to_string();
    }
    if a.iter().skip(1).all(|c| c.is_zero()) {
        return rational_to_string(&a[0]);
    }
    let mut parts = Vec::new();
    for (i, c) in a.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let coeff = rational_to_string(c);
        let term = match i {
            0 => coeff,
            1 => format!("{coeff}*z"),
            _ => format!("{coeff}*z^{i}"),
        };
        parts.push(term);
    }
    parts.join(" + ")
}

fn rational_to_string(r: &Q) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
