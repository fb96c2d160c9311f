//! Group cohomology via the (normalized) bar complex of the point groupoid:
//! Schur multipliers H²(G, U(1)), explicit normalized 2-cocycle
//! representatives, discrete-torsion phases, centralizer characters and
//! α-regular conjugacy classes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::{ConjugacyClass, FiniteGroup};
use crate::groupoid::point_groupoid;
use crate::homology::{AbelianGroupPresentation, ChainComplex, U1Class, U1Cohomology};
use crate::nerve::{nerve, NerveComplex, DEFAULT_NERVE_CAP};

/// Cap on the `enumerate all cocycle classes` path.
pub const MULTIPLIER_ENUM_CAP: usize = 4096;

/// The bar cochain complex of a finite group up to `max_degree`, over Z
/// (reduce with a modulus at cohomology time). Normalized mode uses only
/// tuples without identity entries (rank (|G|-1)^k instead of |G|^k).
pub fn bar_cochain_complex(
    g: &FiniteGroup,
    max_degree: usize,
    normalized: bool,
) -> Result<ChainComplex> {
    bar_nerve(g, max_degree)?.cochain_complex(normalized)
}

fn bar_nerve(g: &FiniteGroup, max_degree: usize) -> Result<NerveComplex> {
    nerve(&point_groupoid(g), max_degree, DEFAULT_NERVE_CAP)
}

/// Basis bookkeeping for normalized bar 1- and 2-cochains: positions of
/// nonidentity elements and of nonidentity pairs in the cochain bases.
pub struct BarBasis {
    pub group: FiniteGroup,
    /// Nonidentity elements in index order (basis of normalized C¹).
    pub deg1: Vec<usize>,
    /// Nonidentity pairs in the nerve enumeration order (basis of C²).
    pub deg2: Vec<(usize, usize)>,
}

impl BarBasis {
    pub fn new(g: &FiniteGroup) -> BarBasis {
        let e = g.identity();
        let deg1: Vec<usize> = (0..g.order()).filter(|&x| x != e).collect();
        // matches the nerve tuple order: extend tuples of degree 1 by arrows
        let mut deg2 = Vec::new();
        for &a in &deg1 {
            for b in 0..g.order() {
                if b != e {
                    deg2.push((a, b));
                }
            }
        }
        BarBasis { group: g.clone(), deg1, deg2 }
    }

    pub fn deg2_pos(&self, a: usize, b: usize) -> Option<usize> {
        let e = self.group.identity();
        if a == e || b == e {
            return None;
        }
        let n1 = self.group.order() - 1;
        let ai = self.deg1.iter().position(|&x| x == a)?;
        let bi = self.deg1.iter().position(|&x| x == b)?;
        Some(ai * n1 + bi)
    }

    /// Exponent vector (basis order) of a normalized cocycle table.
    pub fn vector_of_table(&self, table: &[BigInt]) -> Vec<BigInt> {
        let n = self.group.order();
        self.deg2.iter().map(|&(a, b)| table[a * n + b].clone()).collect()
    }

    /// Full G x G table (identity rows/columns zero) of a basis vector.
    pub fn table_of_vector(&self, v: &[BigInt]) -> Vec<BigInt> {
        let n = self.group.order();
        let mut table = vec![BigInt::zero(); n * n];
        for (&(a, b), val) in self.deg2.iter().zip(v) {
            table[a * n + b] = val.clone();
        }
        table
    }
}

/// H²(G, U(1)) with the machinery to classify and enumerate cocycles:
/// μ_m-valued 2-cocycles (m = |G|) modulo coboundaries of μ_{m·e}-valued
/// 1-cochains, e = exponent of G.
pub struct SchurMultiplier {
    pub group_presentation: AbelianGroupPresentation,
    pub modulus: u64,
    pub basis: BarBasis,
    cohomology: U1Cohomology,
}

pub fn schur_multiplier(g: &FiniteGroup) -> Result<SchurMultiplier> {
    let cc = bar_cochain_complex(g, 3, true)?;
    let delta1 = cc.diffs[1].clone(); // C¹ -> C²
    let delta2 = cc.diffs[2].clone(); // C² -> C³
    let m = g.order() as u64;
    let e = g.exponent() as u64;
    let cohomology = U1Cohomology::compute(&delta1, &delta2, m, e);
    Ok(SchurMultiplier {
        group_presentation: cohomology.group.clone(),
        modulus: m,
        basis: BarBasis::new(g),
        cohomology,
    })
}

impl SchurMultiplier {
    /// Class coordinates and order of a normalized 2-cocycle.
    pub fn class_of(&self, alpha: &TwoCocycle) -> Result<U1Class> {
        if alpha.modulus != self.modulus {
            return Err(Error::Invalid(format!(
                "cocycle modulus {} does not match multiplier modulus {}",
                alpha.modulus, self.modulus
            )));
        }
        let v = self.basis.vector_of_table(&alpha.table);
        self.cohomology.class_of(&v)
    }

    /// One normalized cocycle per cohomology class, deterministic.
    pub fn representatives(&self) -> Result<Vec<TwoCocycle>> {
        let reps = self.cohomology.enumerate_class_representatives(MULTIPLIER_ENUM_CAP)?;
        reps.into_iter()
            .map(|v| {
                let table = self.basis.table_of_vector(&v);
                TwoCocycle::new(self.basis.group.clone(), self.modulus, table)
            })
            .collect()
    }
}

/// One normalized cocycle representative per element of H²(G, U(1)).
pub fn cocycle_representatives(g: &FiniteGroup) -> Result<Vec<TwoCocycle>> {
    schur_multiplier(g)?.representatives()
}

/// A normalized U(1)-valued 2-cocycle on a finite group, stored as exponent
/// table mod m: α(g,h) = exp(2πi · table[g,h] / m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCocycle {
    pub group: FiniteGroup,
    pub modulus: u64,
    /// Row-major |G| x |G| exponents, each in [0, m).
    pub table: Vec<BigInt>,
}

impl TwoCocycle {
    /// Build and verify normalization and the cocycle law exhaustively.
    pub fn new(group: FiniteGroup, modulus: u64, table: Vec<BigInt>) -> Result<TwoCocycle> {
        if modulus == 0 {
            return Err(Error::Invalid("cocycle: modulus must be >= 1".into()));
        }
        let n = group.order();
        if table.len() != n * n {
            return Err(Error::Invalid("cocycle: table must be |G| x |G|".into()));
        }
        let m = BigInt::from(modulus);
        let table: Vec<BigInt> = table.iter().map(|v| v.mod_floor(&m)).collect();
        let c = TwoCocycle { group, modulus, table };
        c.validate()?;
        Ok(c)
    }

    pub fn zero(group: FiniteGroup, modulus: u64) -> TwoCocycle {
        let n = group.order();
        TwoCocycle { group, modulus, table: vec![BigInt::zero(); n * n] }
    }

    #[inline]
    pub fn get(&self, g: usize, h: usize) -> &BigInt {
        &self.table[g * self.group.order() + h]
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.group.order();
        let e = self.group.identity();
        let m = BigInt::from(self.modulus);
        for g in 0..n {
            if !self.get(e, g).is_zero() || !self.get(g, e).is_zero() {
                return Err(Error::Invalid(format!(
                    "cocycle: normalization fails at element {g}"
                )));
            }
        }
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                for k in 0..n {
                    let hk = self.group.mul(h, k);
                    // α(g,h) + α(gh,k) = α(g,hk) + α(h,k)  (mod m)
                    let lhs = self.get(g, h) + self.get(gh, k);
                    let rhs = self.get(g, hk) + self.get(h, k);
                    if !(lhs - rhs).mod_floor(&m).is_zero() {
                        return Err(Error::Invalid(format!(
                            "cocycle: law fails at triple ({g},{h},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Rescale exponents from modulus m to a multiple M (μ_m ⊂ μ_M).
    pub fn rescale(&self, new_modulus: u64) -> Result<TwoCocycle> {
        if new_modulus % self.modulus != 0 {
            return Err(Error::Invalid(format!(
                "cannot rescale modulus {} to non-multiple {}",
                self.modulus, new_modulus
            )));
        }
        let k = BigInt::from(new_modulus / self.modulus);
        Ok(TwoCocycle {
            group: self.group.clone(),
            modulus: new_modulus,
            table: self.table.iter().map(|v| v * &k).collect(),
        })
    }

    /// Pointwise sum (tensor product of the U(1) cocycles).
    pub fn add(&self, other: &TwoCocycle) -> Result<TwoCocycle> {
        if self.group != other.group || self.modulus != other.modulus {
            return Err(Error::Invalid("cocycle sum: group/modulus mismatch".into()));
        }
        let m = BigInt::from(self.modulus);
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a + b).mod_floor(&m))
            .collect();
        Ok(TwoCocycle { group: self.group.clone(), modulus: self.modulus, table })
    }

    /// Perturb by the coboundary of f: G -> Z/m with f(1) = 0:
    /// (δf)(g,h) = f(h) - f(gh) + f(g).
    pub fn add_coboundary(&self, f: &[BigInt]) -> Result<TwoCocycle> {
        let n = self.group.order();
        if f.len() != n {
            return Err(Error::Invalid("coboundary data must have |G| entries".into()));
        }
        if !f[self.group.identity()].is_zero() {
            return Err(Error::Invalid("coboundary data must vanish at the identity".into()));
        }
        let m = BigInt::from(self.modulus);
        let mut table = self.table.clone();
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                let v = &table[g * n + h] + &f[h] - &f[gh] + &f[g];
                table[g * n + h] = v.mod_floor(&m);
            }
        }
        Ok(TwoCocycle { group: self.group.clone(), modulus: self.modulus, table })
    }
}

/// Discrete-torsion phase γ(α)_{g,h} = α(g,h) · α(h,g)^{-1} as an exponent.
pub fn phase(alpha: &TwoCocycle, g: usize, h: usize) -> BigInt {
    let m = BigInt::from(alpha.modulus);
    (alpha.get(g, h) - alpha.get(h, g)).mod_floor(&m)
}

/// The character L^α_g = γ(α)_{g,·} on the centralizer C(g).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseCharacter {
    pub element: usize,
    pub modulus: u64,
    /// Parallel lists: centralizer elements and their exponents.
    pub centralizer: Vec<usize>,
    pub values: Vec<BigInt>,
}

impl PhaseCharacter {
    pub fn value(&self, h: usize) -> Option<&BigInt> {
        self.centralizer.iter().position(|&x| x == h).map(|i| &self.values[i])
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// A trivial character on the given subgroup.
    pub fn trivial(element: usize, modulus: u64, centralizer: Vec<usize>) -> PhaseCharacter {
        let values = vec![BigInt::zero(); centralizer.len()];
        PhaseCharacter { element, modulus, centralizer, values }
    }
}

/// Restrict the phase of α at g to C(g) and verify it is a homomorphism.
pub fn centralizer_character(alpha: &TwoCocycle, g: usize) -> Result<PhaseCharacter> {
    let grp = &alpha.group;
    let centralizer = grp.centralizer(g);
    let values: Vec<BigInt> = centralizer.iter().map(|&h| phase(alpha, g, h)).collect();
    let m = BigInt::from(alpha.modulus);
    // homomorphism check: value(h h') = value(h) + value(h')
    for (i, &h1) in centralizer.iter().enumerate() {
        for (j, &h2) in centralizer.iter().enumerate() {
            let prod = grp.mul(h1, h2);
            let k = centralizer
                .iter()
                .position(|&x| x == prod)
                .ok_or_else(|| Error::Integrity("centralizer not closed".into()))?;
            if !(&values[i] + &values[j] - &values[k]).mod_floor(&m).is_zero() {
                return Err(Error::Integrity(format!(
                    "phase character at element {g} is not a homomorphism: \
                     witnesses h={h1}, h'={h2}"
                )));
            }
        }
    }
    if !values[centralizer.iter().position(|&x| x == grp.identity()).unwrap()].is_zero() {
        return Err(Error::Integrity(format!(
            "phase character at element {g} is nonzero at the identity"
        )));
    }
    Ok(PhaseCharacter { element: g, modulus: alpha.modulus, centralizer, values })
}

/// The conjugacy classes on which L^α is the trivial character, with
/// conjugation-invariance verified across class members.
pub fn alpha_regular_classes(alpha: &TwoCocycle) -> Result<Vec<ConjugacyClass>> {
    let mut out = Vec::new();
    for class in alpha.group.conjugacy_classes() {
        let flags: Vec<bool> = class
            .members
            .iter()
            .map(|&g| centralizer_character(alpha, g).map(|c| c.is_trivial()))
            .collect::<Result<Vec<_>>>()?;
        if flags.iter().any(|&f| f != flags[0]) {
            return Err(Error::Integrity(format!(
                "alpha-regularity is not constant on the class of {}",
                class.representative
            )));
        }
        if flags[0] {
            out.push(class);
        }
    }
    Ok(out)
}
