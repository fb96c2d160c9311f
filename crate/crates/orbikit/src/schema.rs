//! JSON input documents for the CLI: named declarations of groups, actions,
//! complexes, cocycles, gerbes, bundles and degree-shift data, plus a
//! command block. Parsing, reference resolution and validation are separated
//! so failures map onto distinct exit codes.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use crate::cohomology::{cocycle_representatives, TwoCocycle};
use crate::cyclotomic::{CycField, CycMatrix};
use crate::error::Error;
use crate::gerbe::{gerbe_from_group_cocycle, Gerbe};
use crate::group::FiniteGroup;
use crate::groupoid::{action_groupoid, point_groupoid, FiniteGroupoid, GroupAction};
use crate::simplicial::GSimplicialComplex;
use crate::twisted::{DegreeShiftData, ShiftEntry, TwistedBundle};

/// Exit codes: 2 syntax, 3 unresolved reference, 4 validation,
/// 5 resource cap, 6 integrity.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn syntax(msg: impl Into<String>) -> CliError {
        CliError { code: 2, message: msg.into() }
    }
    pub fn reference(msg: impl Into<String>) -> CliError {
        CliError { code: 3, message: msg.into() }
    }
    pub fn validation(msg: impl Into<String>) -> CliError {
        CliError { code: 4, message: msg.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match &e {
            Error::ResourceCap(_) => 5,
            Error::Integrity(_) => 6,
            _ => 4,
        };
        CliError { code, message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    #[serde(default)]
    pub groups: BTreeMap<String, GroupDecl>,
    #[serde(default)]
    pub actions: BTreeMap<String, ActionDecl>,
    #[serde(default)]
    pub complexes: BTreeMap<String, ComplexDecl>,
    #[serde(default)]
    pub cocycles: BTreeMap<String, CocycleDecl>,
    #[serde(default)]
    pub gerbes: BTreeMap<String, GerbeDecl>,
    #[serde(default)]
    pub bundles: BTreeMap<String, BundleDecl>,
    #[serde(default)]
    pub shifts: BTreeMap<String, ShiftDecl>,
    #[serde(default)]
    pub command: CommandBlock,
}

/// A group, given as a full multiplication table, permutation generators
/// (expanded at parse time, order capped), or a named preset.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDecl {
    pub table: Option<Vec<Vec<usize>>>,
    pub names: Option<Vec<String>>,
    pub permutations: Option<Vec<Vec<usize>>>,
    pub preset: Option<String>,
}

/// table[g][x] = g · x, with g indexing the group's elements.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDecl {
    pub group: String,
    pub points: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDecl {
    pub action: String,
    pub simplices: Vec<Vec<usize>>,
}

/// A normalized 2-cocycle: an explicit |G|×|G| exponent table, or the k-th
/// entry of the deterministic representative enumeration of H²(G, U(1)).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleDecl {
    pub group: String,
    pub modulus: Option<u64>,
    pub table: Option<Vec<Vec<i64>>>,
    pub class_index: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GerbeDecl {
    /// Gerbe of a discrete-torsion cocycle on the point groupoid.
    pub cocycle: Option<String>,
    /// Trivial gerbe over the referenced groupoid.
    pub trivial_over: Option<GroupoidRef>,
    pub modulus: Option<u64>,
}

/// A groupoid named indirectly: the point groupoid of a declared group or
/// the action groupoid of a declared action.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidRef {
    pub group: Option<String>,
    pub action: Option<String>,
}

/// Cyclotomic matrix entry: [conductor, [rational coefficient strings]].
pub type CycEntry = (u64, Vec<String>);

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDecl {
    pub gerbe: String,
    pub dimension: usize,
    /// One matrix per arrow of the base groupoid, rows of entries.
    pub matrices: Vec<Vec<Vec<CycEntry>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftDecl {
    pub entries: Vec<ShiftEntryDecl>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftEntryDecl {
    pub element: usize,
    pub order: u64,
    pub exponents: Vec<u64>,
}

/// Arguments for the selected command; each command reads the fields it
/// needs.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandBlock {
    pub name: Option<String>,
    pub group: Option<String>,
    pub action: Option<String>,
    pub cocycle: Option<String>,
    pub gerbe: Option<String>,
    pub bundle: Option<String>,
    pub complex: Option<String>,
    pub shifts: Option<String>,
    pub target: Option<GroupoidRef>,
    pub left: Option<GroupoidRef>,
    pub right: Option<GroupoidRef>,
    pub max_degree: Option<usize>,
}

pub fn parse_input(text: &str) -> CliResult<InputDocument> {
    serde_json::from_str(text).map_err(|e| CliError::syntax(format!("input document: {e}")))
}

/// All declarations resolved and validated, ready for command dispatch.
pub struct Resolved {
    pub groups: BTreeMap<String, FiniteGroup>,
    pub actions: BTreeMap<String, GroupAction>,
    pub complexes: BTreeMap<String, GSimplicialComplex>,
    pub cocycles: BTreeMap<String, TwoCocycle>,
    pub gerbes: BTreeMap<String, Gerbe>,
    pub bundles: BTreeMap<String, TwistedBundle>,
    pub shifts: BTreeMap<String, DegreeShiftData>,
    pub command: CommandBlock,
}

fn preset_group(name: &str) -> CliResult<FiniteGroup> {
    if let Some(n) = name.strip_prefix('z').and_then(|s| s.parse::<usize>().ok()) {
        if (1..=16).contains(&n) {
            return Ok(FiniteGroup::cyclic(n));
        }
    }
    let g = match name {
        "trivial" => FiniteGroup::trivial(),
        "klein" => FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
        "s3" => FiniteGroup::symmetric(3)?,
        "s4" => FiniteGroup::symmetric(4)?,
        "d4" => FiniteGroup::dihedral(4),
        "q8" => FiniteGroup::quaternion8(),
        "a4" => FiniteGroup::alternating(4)?,
        other => {
            return Err(CliError::reference(format!("unknown group preset '{other}'")));
        }
    };
    Ok(g)
}

fn resolve_group(decl: &GroupDecl) -> CliResult<FiniteGroup> {
    let provided =
        [decl.table.is_some(), decl.permutations.is_some(), decl.preset.is_some()];
    if provided.iter().filter(|&&p| p).count() != 1 {
        return Err(CliError::validation(
            "group: exactly one of table, permutations, preset is required",
        ));
    }
    if let Some(table) = &decl.table {
        let names = match &decl.names {
            Some(ns) => ns.clone(),
            None => (0..table.len()).map(|i| format!("g{i}")).collect(),
        };
        return Ok(FiniteGroup::from_table(names, table.clone())?);
    }
    if let Some(perms) = &decl.permutations {
        return Ok(FiniteGroup::from_permutations(perms)?);
    }
    preset_group(decl.preset.as_deref().unwrap_or_default())
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, name: &str, kind: &str) -> CliResult<&'a T> {
    map.get(name)
        .ok_or_else(|| CliError::reference(format!("{kind} '{name}' is not declared")))
}

pub fn resolve_groupoid(r: &Resolved, gref: &GroupoidRef) -> CliResult<FiniteGroupoid> {
    match (&gref.group, &gref.action) {
        (Some(g), None) => Ok(point_groupoid(lookup(&r.groups, g, "group")?)),
        (None, Some(a)) => Ok(action_groupoid(lookup(&r.actions, a, "action")?)),
        _ => Err(CliError::validation(
            "groupoid reference: exactly one of group, action is required",
        )),
    }
}

fn parse_rational(s: &str) -> CliResult<BigRational> {
    BigRational::from_str(s)
        .or_else(|_| BigInt::from_str(s).map(BigRational::from_integer))
        .map_err(|_| CliError::syntax(format!("'{s}' is not a rational number")))
}

pub fn resolve(doc: InputDocument) -> CliResult<Resolved> {
    let mut groups = BTreeMap::new();
    for (name, decl) in &doc.groups {
        let g = resolve_group(decl)
            .map_err(|e| CliError { code: e.code, message: format!("group '{name}': {}", e.message) })?;
        groups.insert(name.clone(), g);
    }

    let mut actions = BTreeMap::new();
    for (name, decl) in &doc.actions {
        let g = lookup(&groups, &decl.group, "group")?.clone();
        if decl.table.len() != g.order() || decl.table.iter().any(|row| row.len() != decl.points.len())
        {
            return Err(CliError::validation(format!(
                "action '{name}': table must be |G| rows of |X| entries"
            )));
        }
        let flat: Vec<usize> = decl.table.iter().flatten().copied().collect();
        let a = GroupAction::new(g, decl.points.clone(), flat)
            .map_err(|e| CliError::validation(format!("action '{name}': {e}")))?;
        actions.insert(name.clone(), a);
    }

    let mut complexes = BTreeMap::new();
    for (name, decl) in &doc.complexes {
        let a = lookup(&actions, &decl.action, "action")?.clone();
        let x = GSimplicialComplex::new(a, &decl.simplices)
            .map_err(|e| CliError::validation(format!("complex '{name}': {e}")))?;
        complexes.insert(name.clone(), x);
    }

    let mut cocycles = BTreeMap::new();
    for (name, decl) in &doc.cocycles {
        let g = lookup(&groups, &decl.group, "group")?.clone();
        let alpha = match (&decl.table, decl.class_index) {
            (Some(table), None) => {
                let n = g.order();
                let modulus = decl.modulus.unwrap_or(n as u64);
                if table.len() != n || table.iter().any(|row| row.len() != n) {
                    return Err(CliError::validation(format!(
                        "cocycle '{name}': table must be |G| x |G|"
                    )));
                }
                let flat: Vec<BigInt> =
                    table.iter().flatten().map(|&v| BigInt::from(v)).collect();
                TwoCocycle::new(g, modulus, flat)
                    .map_err(|e| CliError::validation(format!("cocycle '{name}': {e}")))?
            }
            (None, Some(k)) => {
                let reps = cocycle_representatives(&g)?;
                reps.into_iter().nth(k).ok_or_else(|| {
                    CliError::reference(format!(
                        "cocycle '{name}': class index {k} out of range"
                    ))
                })?
            }
            _ => {
                return Err(CliError::validation(format!(
                    "cocycle '{name}': exactly one of table, class_index is required"
                )))
            }
        };
        cocycles.insert(name.clone(), alpha);
    }

    let mut shifts = BTreeMap::new();
    for (name, decl) in &doc.shifts {
        let entries = decl
            .entries
            .iter()
            .map(|e| ShiftEntry {
                element: e.element,
                order: e.order,
                exponents: e.exponents.clone(),
            })
            .collect();
        shifts.insert(name.clone(), DegreeShiftData { entries });
    }

    let mut partial = Resolved {
        groups,
        actions,
        complexes,
        cocycles,
        gerbes: BTreeMap::new(),
        bundles: BTreeMap::new(),
        shifts,
        command: doc.command,
    };

    for (name, decl) in &doc.gerbes {
        let gerbe = match (&decl.cocycle, &decl.trivial_over) {
            (Some(c), None) => {
                let alpha = lookup(&partial.cocycles, c, "cocycle")?;
                gerbe_from_group_cocycle(alpha)
                    .map_err(|e| CliError::validation(format!("gerbe '{name}': {e}")))?
            }
            (None, Some(gref)) => {
                let base = resolve_groupoid(&partial, gref)?;
                let modulus = decl.modulus.unwrap_or(1);
                Gerbe::trivial(base, modulus)
                    .map_err(|e| CliError::validation(format!("gerbe '{name}': {e}")))?
            }
            _ => {
                return Err(CliError::validation(format!(
                    "gerbe '{name}': exactly one of cocycle, trivial_over is required"
                )))
            }
        };
        partial.gerbes.insert(name.clone(), gerbe);
    }

    for (name, decl) in &doc.bundles {
        let gerbe = lookup(&partial.gerbes, &decl.gerbe, "gerbe")?.clone();
        let field = CycField::new(gerbe.modulus);
        let n_arrows = gerbe.base.n_arrows();
        if decl.matrices.len() != n_arrows {
            return Err(CliError::validation(format!(
                "bundle '{name}': expected {n_arrows} matrices"
            )));
        }
        let mut rho = Vec::new();
        for rows in &decl.matrices {
            let mut m = CycMatrix::zeros(field.clone(), decl.dimension, decl.dimension);
            if rows.len() != decl.dimension
                || rows.iter().any(|row| row.len() != decl.dimension)
            {
                return Err(CliError::validation(format!(
                    "bundle '{name}': matrices must be {0}x{0}",
                    decl.dimension
                )));
            }
            for (i, row) in rows.iter().enumerate() {
                for (j, (conductor, coeffs)) in row.iter().enumerate() {
                    let from = CycField::new(*conductor);
                    if coeffs.len() > from.degree().max(1) {
                        return Err(CliError::validation(format!(
                            "bundle '{name}': entry ({i},{j}) has too many coefficients"
                        )));
                    }
                    let mut v = from.zero();
                    for (k, c) in coeffs.iter().enumerate() {
                        v[k] = parse_rational(c)?;
                    }
                    let embedded = from.embed(&field, &v).map_err(|e| {
                        CliError::validation(format!("bundle '{name}': {e}"))
                    })?;
                    m.set(i, j, embedded);
                }
            }
            rho.push(m);
        }
        let b = TwistedBundle::new(gerbe, decl.dimension, rho)
            .map_err(|e| CliError::validation(format!("bundle '{name}': {e}")))?;
        partial.bundles.insert(name.clone(), b);
    }

    Ok(partial)
}
