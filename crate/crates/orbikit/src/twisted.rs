//! Twisted vector bundles over finite groupoids with exact cyclotomic
//! arithmetic, twisted equivariant K-theory ranks, degree-shifting numbers,
//! and twisted orbifold cohomology of finite G-simplicial complexes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::cohomology::{alpha_regular_classes, centralizer_character, TwoCocycle};
use crate::cyclotomic::{Cyc, CycField, CycMatrix};
use crate::error::{Error, Result};
use crate::gerbe::{is_trivial, tensor, Gerbe, TrivializingCochain};
use crate::group::FiniteGroup;
use crate::simplicial::{fixed_subcomplex, twisted_invariant_dimension, GSimplicialComplex};

/// An n-dimensional twisted bundle: an assignment of invertible n×n matrices
/// over Q(ζ_m) to arrows, multiplicative up to the gerbe's root-of-unity
/// twist.
#[derive(Clone, Debug)]
pub struct TwistedBundle {
    pub gerbe: Gerbe,
    pub dimension: usize,
    pub field: CycField,
    /// One matrix per arrow of the base groupoid.
    pub rho: Vec<CycMatrix>,
}

impl TwistedBundle {
    /// Build and fully validate (inverse law and twisted cocycle law).
    pub fn new(gerbe: Gerbe, dimension: usize, rho: Vec<CycMatrix>) -> Result<TwistedBundle> {
        let field = CycField::new(gerbe.modulus);
        let b = TwistedBundle { gerbe, dimension, field, rho };
        let report = validate_twisted_bundle(&b);
        if let Some(first) = report.first() {
            return Err(Error::Invalid(format!("twisted bundle: {first}")));
        }
        Ok(b)
    }
}

/// All law violations, as human-readable findings; empty iff the bundle is
/// valid.
pub fn validate_twisted_bundle(b: &TwistedBundle) -> Vec<String> {
    let mut report = Vec::new();
    let base = &b.gerbe.base;
    let n = base.n_arrows();
    if b.rho.len() != n {
        report.push(format!("expected {n} matrices, found {}", b.rho.len()));
        return report;
    }
    for (r, m) in b.rho.iter().enumerate() {
        if m.rows() != b.dimension || m.cols() != b.dimension {
            report.push(format!(
                "matrix at arrow {} is {}x{}, expected {}x{}",
                base.arrow_names[r],
                m.rows(),
                m.cols(),
                b.dimension,
                b.dimension
            ));
            return report;
        }
        if m.field != b.field {
            report.push(format!(
                "matrix at arrow {} lives in the wrong cyclotomic field",
                base.arrow_names[r]
            ));
            return report;
        }
    }
    let id = CycMatrix::identity(b.field.clone(), b.dimension);
    // twisted cocycle law: rho(r1)·rho(r2) = ζ^θ(r1,r2)·rho(r1∘r2)
    for (r1, r2) in base.composable_pairs() {
        let r12 = base.compose(r1, r2).expect("composable");
        let zeta = b
            .field
            .from_exponent(b.gerbe.theta(r1, r2), b.gerbe.modulus)
            .expect("conductor matches modulus");
        let rhs = b.rho[r12].scale(&zeta);
        if b.rho[r1].mul(&b.rho[r2]) != rhs {
            report.push(format!(
                "twisted cocycle law fails at composable pair ({}, {})",
                base.arrow_names[r1], base.arrow_names[r2]
            ));
        }
    }
    // twisted inverse law: rho(r)·rho(r⁻¹) = ζ^θ(r, r⁻¹)·Id, so that
    // rho(r⁻¹) is rho(r)⁻¹ up to the gerbe twist (the untwisted identity
    // rho(r⁻¹) = rho(r)⁻¹ holds exactly when θ vanishes on inverse pairs)
    for r in 0..n {
        let rinv = base.inverse(r);
        let zeta = b
            .field
            .from_exponent(b.gerbe.theta(r, rinv), b.gerbe.modulus)
            .expect("conductor matches modulus");
        if b.rho[r].mul(&b.rho[rinv]) != id.scale(&zeta) {
            report.push(format!(
                "inverse law fails at arrow {} (rho(r)·rho(r⁻¹) ≠ θ(r,r⁻¹)·Id)",
                base.arrow_names[r]
            ));
        }
    }
    report
}

/// Direct sum: block-diagonal matrices over the shared gerbe.
pub fn whitney_sum(b1: &TwistedBundle, b2: &TwistedBundle) -> Result<TwistedBundle> {
    if b1.gerbe != b2.gerbe {
        return Err(Error::Invalid("whitney sum: gerbes differ".into()));
    }
    let rho = b1.rho.iter().zip(&b2.rho).map(|(m1, m2)| m1.block_diag(m2)).collect();
    TwistedBundle::new(b1.gerbe.clone(), b1.dimension + b2.dimension, rho)
}

/// Tensor product: Kronecker-product matrices over the tensor gerbe. Gerbes
/// with different moduli are rescaled into μ_lcm first and the matrices
/// embedded into the common cyclotomic field.
pub fn tensor_twisted(b1: &TwistedBundle, b2: &TwistedBundle) -> Result<TwistedBundle> {
    if b1.gerbe.base != b2.gerbe.base {
        return Err(Error::Invalid("tensor: bundles live on different bases".into()));
    }
    let m = b1.gerbe.modulus.lcm(&b2.gerbe.modulus);
    let g1 = b1.gerbe.rescale(m)?;
    let g2 = b2.gerbe.rescale(m)?;
    let gerbe = tensor(&g1, &g2)?;
    let field = CycField::new(m);
    let r1 = embed_all(&b1.field, &field, &b1.rho)?;
    let r2 = embed_all(&b2.field, &field, &b2.rho)?;
    let rho = r1.iter().zip(&r2).map(|(a, b)| a.kron(b)).collect();
    TwistedBundle::new(gerbe, b1.dimension * b2.dimension, rho)
}

fn embed_all(from: &CycField, to: &CycField, ms: &[CycMatrix]) -> Result<Vec<CycMatrix>> {
    ms.iter()
        .map(|m| {
            let mut out = CycMatrix::zeros(to.clone(), m.rows(), m.cols());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    out.set(i, j, from.embed(to, m.get(i, j))?);
                }
            }
            Ok(out)
        })
        .collect()
}

/// Witness that θⁿ is a coboundary: the determinant line f = det ρ, verified
/// exhaustively to satisfy f(r₁)·f(r₂) = ζ^{n·θ(r₁,r₂)}·f(r₁∘r₂), together
/// with an independent trivialization of the n-th tensor power of the gerbe.
#[derive(Clone, Debug)]
pub struct DeterminantObstruction {
    /// det ρ(r) per arrow, in Q(ζ_m).
    pub determinants: Vec<Cyc>,
    /// Independent trivializing cochain for gerbe^⊗n.
    pub power_trivialization: TrivializingCochain,
}

pub fn determinant_obstruction(b: &TwistedBundle) -> Result<DeterminantObstruction> {
    let base = &b.gerbe.base;
    let f = &b.field;
    let dets: Vec<Cyc> = b.rho.iter().map(|m| m.det()).collect::<Result<Vec<_>>>()?;
    let n = BigInt::from(b.dimension);
    for (r1, r2) in base.composable_pairs() {
        let r12 = base.compose(r1, r2).expect("composable");
        let zeta = f.from_exponent(&(b.gerbe.theta(r1, r2) * &n), b.gerbe.modulus)?;
        let lhs = f.mul(&dets[r1], &dets[r2]);
        let rhs = f.mul(&zeta, &dets[r12]);
        if lhs != rhs {
            return Err(Error::Integrity(format!(
                "determinant identity δ(det ρ) = θⁿ fails at pair ({}, {})",
                base.arrow_names[r1], base.arrow_names[r2]
            )));
        }
    }
    let power = b.gerbe.power(b.dimension as u64);
    match is_trivial(&power)? {
        Some(w) => Ok(DeterminantObstruction { determinants: dets, power_trivialization: w }),
        None => Err(Error::Integrity(
            "determinant identity holds but the n-th gerbe power is not trivializable".into(),
        )),
    }
}

/// Recover the 2-cocycle of a projective representation: the scalar β(g,h)
/// with ρ(g)ρ(h) = ζ^β(g,h)·ρ(gh); errors when some scalar is not a root of
/// unity of the given modulus.
pub fn projective_cocycle(
    group: &FiniteGroup,
    rho: &[CycMatrix],
    modulus: u64,
) -> Result<TwoCocycle> {
    let n = group.order();
    if rho.len() != n {
        return Err(Error::Invalid("projective cocycle: one matrix per element".into()));
    }
    let field = &rho[0].field;
    if field.conductor % modulus != 0 {
        return Err(Error::Invalid("projective cocycle: modulus must divide conductor".into()));
    }
    let mut table = vec![BigInt::zero(); n * n];
    for g in 0..n {
        for h in 0..n {
            let prod = rho[g].mul(&rho[h]);
            let target = &rho[group.mul(g, h)];
            let k = (0..modulus)
                .find(|&k| {
                    let zeta = field.root_of_unity((k * (field.conductor / modulus)) as i64);
                    target.scale(&zeta) == prod
                })
                .ok_or_else(|| {
                    Error::Invalid(format!(
                        "matrices at ({}, {}) differ from rho(gh) by a non-root scalar",
                        group.names[g], group.names[h]
                    ))
                })?;
            table[g * n + h] = BigInt::from(k);
        }
    }
    TwoCocycle::new(group.clone(), modulus, table)
}

/// Rank of α-twisted equivariant K-theory of the point: the number of
/// α-regular conjugacy classes.
pub fn twisted_k_rank(alpha: &TwoCocycle) -> Result<usize> {
    Ok(alpha_regular_classes(alpha)?.len())
}

/// Degree-shifting data for one sector: the order m_g of the group element
/// and the eigenvalue exponents (m_{1,g}, …, m_{n,g}), 0 ≤ m_{j,g} < m_g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftEntry {
    pub element: usize,
    pub order: u64,
    pub exponents: Vec<u64>,
}

/// Degree-shifting data per sector representative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeShiftData {
    pub entries: Vec<ShiftEntry>,
}

impl DegreeShiftData {
    pub fn entry_for(&self, g: usize) -> Option<&ShiftEntry> {
        self.entries.iter().find(|e| e.element == g)
    }
}

/// The degree-shifting number ι_{(g)} = Σ_j m_{j,g} / m_g as an exact
/// rational.
pub fn degree_shift(data: &DegreeShiftData, g: usize) -> Result<BigRational> {
    let entry = data
        .entry_for(g)
        .ok_or_else(|| Error::Invalid(format!("no degree-shift data for element {g}")))?;
    shift_of_entry(entry)
}

pub fn shift_of_entry(entry: &ShiftEntry) -> Result<BigRational> {
    if entry.order == 0 {
        return Err(Error::Invalid("degree shift: order must be positive".into()));
    }
    if entry.exponents.iter().any(|&e| e >= entry.order) {
        return Err(Error::Invalid(format!(
            "degree shift: exponent out of range for order {}",
            entry.order
        )));
    }
    let sum: u64 = entry.exponents.iter().sum();
    Ok(BigRational::new(BigInt::from(sum), BigInt::from(entry.order)))
}

/// Exponents of the inverse element: m_{j,g} ↦ (m_g − m_{j,g}) mod m_g, so
/// that ι_{(g)} + ι_{(g⁻¹)} = #{j : m_{j,g} ≠ 0}.
pub fn inverse_exponents(entry: &ShiftEntry) -> Vec<u64> {
    entry.exponents.iter().map(|&e| if e == 0 { 0 } else { entry.order - e }).collect()
}

/// One twisted sector's contribution to orbifold cohomology.
#[derive(Clone, Debug)]
pub struct SectorContribution {
    pub representative: usize,
    /// Untwisted rational Betti numbers of the fixed complex X^g.
    pub betti: Vec<usize>,
    /// dim of the L^α_g-twisted C(g)-invariants of H^*(X^g), per degree.
    pub twisted_dimensions: Vec<usize>,
    /// Degree-shifting number ι_{(g)}.
    pub shift: BigRational,
}

#[derive(Clone, Debug)]
pub struct OrbifoldCohomologyResult {
    pub modulus: u64,
    /// Dimension per rational degree d = * + 2ι, sorted by degree.
    pub total: Vec<(BigRational, usize)>,
    pub sectors: Vec<SectorContribution>,
    /// Class representatives whose fixed complex is empty.
    pub empty_sectors: Vec<usize>,
}

impl OrbifoldCohomologyResult {
    pub fn total_dimension(&self) -> usize {
        self.total.iter().map(|(_, d)| d).sum()
    }
}

/// Twisted orbifold cohomology of a G-complex: per conjugacy class (g), the
/// L^α_g-twisted C(g)-invariant dimensions of H^*(X^g), reindexed by
/// d = * + 2ι_{(g)}. Shift data must cover every class with a nonempty
/// fixed complex (the identity defaults to ι = 0 when omitted).
pub fn orbifold_cohomology(
    x: &GSimplicialComplex,
    alpha: &TwoCocycle,
    shifts: &DegreeShiftData,
) -> Result<OrbifoldCohomologyResult> {
    if alpha.group != x.action.group {
        return Err(Error::Invalid(
            "orbifold cohomology: cocycle group differs from the acting group".into(),
        ));
    }
    let group = &x.action.group;
    let mut sectors = Vec::new();
    let mut empty_sectors = Vec::new();
    let mut total: Vec<(BigRational, usize)> = Vec::new();
    for class in group.conjugacy_classes() {
        let g = class.representative;
        let xg = fixed_subcomplex(x, g)?;
        let Some(dim) = xg.dimension() else {
            empty_sectors.push(g);
            continue;
        };
        let shift = match shifts.entry_for(g) {
            Some(entry) => shift_of_entry(entry)?,
            None if g == group.identity() => BigRational::zero(),
            None => {
                return Err(Error::Invalid(format!(
                    "missing degree-shift data for the class of {}",
                    group.names[g]
                )))
            }
        };
        let chi = centralizer_character(alpha, g)?;
        let mut twisted = Vec::new();
        for d in 0..=dim {
            twisted.push(twisted_invariant_dimension(&xg, &chi.values, alpha.modulus, d)?);
        }
        for (d, &t) in twisted.iter().enumerate() {
            if t == 0 {
                continue;
            }
            let degree = BigRational::from_integer(BigInt::from(d)) + &shift + &shift;
            match total.iter_mut().find(|(deg, _)| *deg == degree) {
                Some((_, acc)) => *acc += t,
                None => total.push((degree, t)),
            }
        }
        sectors.push(SectorContribution {
            representative: g,
            betti: xg.betti_numbers(),
            twisted_dimensions: twisted,
            shift,
        });
    }
    total.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(OrbifoldCohomologyResult { modulus: alpha.modulus, total, sectors, empty_sectors })
}
