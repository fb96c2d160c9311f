//! Finite groupoids as flat index tables: validation, point and action
//! groupoid constructors, morphisms, connected components, and the Morita
//! normal form (components plus automorphism groups) with certificates.
//!
//! Composition is diagrammatic: `compose(r, r')` is defined exactly when
//! `target(r) = source(r')`, reads "first r, then r'", and has the source of
//! r and the target of r'.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{group_isomorphism, FiniteGroup};

pub const UNDEFINED: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    pub object_names: Vec<String>,
    pub arrow_names: Vec<String>,
    source: Vec<usize>,
    target: Vec<usize>,
    identity: Vec<usize>, // per object
    inverse: Vec<usize>,  // per arrow
    compose: Vec<usize>,  // dense |R| x |R|, UNDEFINED where not composable
}

impl FiniteGroupoid {
    /// Assemble from raw tables. Index bounds are checked here; the groupoid
    /// axioms are checked separately by [`validate_groupoid`] so that broken
    /// tables can be inspected rather than rejected.
    pub fn from_tables(
        object_names: Vec<String>,
        arrow_names: Vec<String>,
        source: Vec<usize>,
        target: Vec<usize>,
        identity: Vec<usize>,
        inverse: Vec<usize>,
        compose: Vec<usize>,
    ) -> Result<Self> {
        let n_obj = object_names.len();
        let n_arr = arrow_names.len();
        if source.len() != n_arr || target.len() != n_arr || inverse.len() != n_arr {
            return Err(Error::Invalid("groupoid: arrow table length mismatch".into()));
        }
        if identity.len() != n_obj {
            return Err(Error::Invalid("groupoid: identity table length mismatch".into()));
        }
        if compose.len() != n_arr * n_arr {
            return Err(Error::Invalid("groupoid: compose table must be |R| x |R|".into()));
        }
        if source.iter().chain(&target).any(|&u| u >= n_obj) {
            return Err(Error::Invalid("groupoid: source/target index out of range".into()));
        }
        if identity.iter().chain(&inverse).any(|&r| r >= n_arr) {
            return Err(Error::Invalid("groupoid: identity/inverse index out of range".into()));
        }
        if compose.iter().any(|&r| r != UNDEFINED && r >= n_arr) {
            return Err(Error::Invalid("groupoid: compose index out of range".into()));
        }
        Ok(FiniteGroupoid { object_names, arrow_names, source, target, identity, inverse, compose })
    }

    pub fn n_objects(&self) -> usize {
        self.object_names.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrow_names.len()
    }

    #[inline]
    pub fn source(&self, r: usize) -> usize {
        self.source[r]
    }

    #[inline]
    pub fn target(&self, r: usize) -> usize {
        self.target[r]
    }

    #[inline]
    pub fn identity(&self, u: usize) -> usize {
        self.identity[u]
    }

    #[inline]
    pub fn inverse(&self, r: usize) -> usize {
        self.inverse[r]
    }

    pub fn is_identity_arrow(&self, r: usize) -> bool {
        self.identity[self.source[r]] == r
    }

    /// Composite "first r1, then r2"; None when not composable.
    #[inline]
    pub fn compose(&self, r1: usize, r2: usize) -> Option<usize> {
        let v = self.compose[r1 * self.n_arrows() + r2];
        if v == UNDEFINED {
            None
        } else {
            Some(v)
        }
    }

    pub fn composable(&self, r1: usize, r2: usize) -> bool {
        self.target[r1] == self.source[r2]
    }

    /// All composable pairs in lexicographic order.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n_arrows();
        let mut out = Vec::new();
        for r1 in 0..n {
            for r2 in 0..n {
                if self.composable(r1, r2) {
                    out.push((r1, r2));
                }
            }
        }
        out
    }

    /// Arrows from u to u.
    pub fn loops_at(&self, u: usize) -> Vec<usize> {
        (0..self.n_arrows()).filter(|&r| self.source[r] == u && self.target[r] == u).collect()
    }

    /// Connected components as sorted object lists, ordered by least object.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n_objects();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0usize;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut frontier = vec![start];
            while let Some(u) = frontier.pop() {
                for r in 0..self.n_arrows() {
                    for v in [self.source[r], self.target[r]] {
                        let other = if v == u {
                            if self.source[r] == u {
                                self.target[r]
                            } else {
                                self.source[r]
                            }
                        } else {
                            continue;
                        };
                        if comp[other] == usize::MAX {
                            comp[other] = next;
                            frontier.push(other);
                        }
                    }
                }
            }
            next += 1;
        }
        let mut out = vec![Vec::new(); next];
        for (u, &c) in comp.iter().enumerate() {
            out[c].push(u);
        }
        out
    }

    /// Automorphism group of an object: its loops under composition.
    pub fn automorphism_group(&self, u: usize) -> Result<FiniteGroup> {
        let loops = self.loops_at(u);
        let pos: HashMap<usize, usize> = loops.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut table = vec![vec![0usize; loops.len()]; loops.len()];
        for (i, &r1) in loops.iter().enumerate() {
            for (j, &r2) in loops.iter().enumerate() {
                let c = self
                    .compose(r1, r2)
                    .ok_or_else(|| Error::Invalid("loops must be composable".into()))?;
                table[i][j] = *pos
                    .get(&c)
                    .ok_or_else(|| Error::Invalid("loop composite escapes the object".into()))?;
            }
        }
        let names = loops.iter().map(|&r| self.arrow_names[r].clone()).collect();
        FiniteGroup::from_table(names, table)
    }

    /// The full subgroupoid on a subset of objects.
    pub fn full_subgroupoid(&self, objects: &[usize]) -> Result<(FiniteGroupoid, Vec<usize>)> {
        let obj_set: Vec<usize> = objects.to_vec();
        let obj_pos: HashMap<usize, usize> =
            obj_set.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let arrows: Vec<usize> = (0..self.n_arrows())
            .filter(|&r| obj_pos.contains_key(&self.source[r]) && obj_pos.contains_key(&self.target[r]))
            .collect();
        let arr_pos: HashMap<usize, usize> =
            arrows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let n_arr = arrows.len();
        let mut compose = vec![UNDEFINED; n_arr * n_arr];
        for (i, &r1) in arrows.iter().enumerate() {
            for (j, &r2) in arrows.iter().enumerate() {
                if let Some(c) = self.compose(r1, r2) {
                    compose[i * n_arr + j] = *arr_pos
                        .get(&c)
                        .ok_or_else(|| Error::Invalid("subgroupoid not closed".into()))?;
                }
            }
        }
        let g = FiniteGroupoid::from_tables(
            obj_set.iter().map(|&u| self.object_names[u].clone()).collect(),
            arrows.iter().map(|&r| self.arrow_names[r].clone()).collect(),
            arrows.iter().map(|&r| obj_pos[&self.source[r]]).collect(),
            arrows.iter().map(|&r| obj_pos[&self.target[r]]).collect(),
            obj_set
                .iter()
                .map(|&u| {
                    arr_pos.get(&self.identity[u]).copied().ok_or_else(|| {
                        Error::Invalid("subgroupoid misses an identity arrow".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?,
            arrows
                .iter()
                .map(|&r| {
                    arr_pos
                        .get(&self.inverse[r])
                        .copied()
                        .ok_or_else(|| Error::Invalid("subgroupoid misses an inverse".into()))
                })
                .collect::<Result<Vec<_>>>()?,
            compose,
        )?;
        Ok((g, arrows))
    }

    /// Relabel objects and arrows by the given permutations (testing aid).
    pub fn relabel(&self, obj_perm: &[usize], arr_perm: &[usize]) -> FiniteGroupoid {
        let n_obj = self.n_objects();
        let n_arr = self.n_arrows();
        assert_eq!(obj_perm.len(), n_obj);
        assert_eq!(arr_perm.len(), n_arr);
        let mut object_names = vec![String::new(); n_obj];
        let mut arrow_names = vec![String::new(); n_arr];
        let mut source = vec![0; n_arr];
        let mut target = vec![0; n_arr];
        let mut identity = vec![0; n_obj];
        let mut inverse = vec![0; n_arr];
        let mut compose = vec![UNDEFINED; n_arr * n_arr];
        for u in 0..n_obj {
            object_names[obj_perm[u]] = self.object_names[u].clone();
            identity[obj_perm[u]] = arr_perm[self.identity[u]];
        }
        for r in 0..n_arr {
            arrow_names[arr_perm[r]] = self.arrow_names[r].clone();
            source[arr_perm[r]] = obj_perm[self.source[r]];
            target[arr_perm[r]] = obj_perm[self.target[r]];
            inverse[arr_perm[r]] = arr_perm[self.inverse[r]];
        }
        for r1 in 0..n_arr {
            for r2 in 0..n_arr {
                if let Some(c) = self.compose(r1, r2) {
                    compose[arr_perm[r1] * n_arr + arr_perm[r2]] = arr_perm[c];
                }
            }
        }
        FiniteGroupoid { object_names, arrow_names, source, target, identity, inverse, compose }
    }
}

/// Axiom violations, empty when the groupoid is valid.
pub fn validate_groupoid(g: &FiniteGroupoid) -> Vec<String> {
    let mut report = Vec::new();
    let n_arr = g.n_arrows();

    for u in 0..g.n_objects() {
        let e = g.identity(u);
        if g.source(e) != u || g.target(e) != u {
            report.push(format!("identity arrow of object {u} is not a loop at {u}"));
        }
    }
    for r1 in 0..n_arr {
        for r2 in 0..n_arr {
            match g.compose(r1, r2) {
                Some(c) => {
                    if !g.composable(r1, r2) {
                        report.push(format!("compose({r1},{r2}) defined on non-composable pair"));
                    } else {
                        if g.source(c) != g.source(r1) || g.target(c) != g.target(r2) {
                            report.push(format!(
                                "compose({r1},{r2}) has wrong source/target"
                            ));
                        }
                    }
                }
                None => {
                    if g.composable(r1, r2) {
                        report.push(format!("compose({r1},{r2}) undefined on composable pair"));
                    }
                }
            }
        }
    }
    // associativity on all composable triples
    for r1 in 0..n_arr {
        for r2 in 0..n_arr {
            if !g.composable(r1, r2) {
                continue;
            }
            for r3 in 0..n_arr {
                if !g.composable(r2, r3) {
                    continue;
                }
                let left = g.compose(r1, r2).and_then(|c| g.compose(c, r3));
                let right = g.compose(r2, r3).and_then(|c| g.compose(r1, c));
                if left != right || left.is_none() {
                    report.push(format!("associativity fails on triple ({r1},{r2},{r3})"));
                }
            }
        }
    }
    // unit and inverse laws
    for r in 0..n_arr {
        let es = g.identity(g.source(r));
        let et = g.identity(g.target(r));
        if g.compose(es, r) != Some(r) || g.compose(r, et) != Some(r) {
            report.push(format!("unit law fails at arrow {r}"));
        }
        let i = g.inverse(r);
        if g.source(i) != g.target(r) || g.target(i) != g.source(r) {
            report.push(format!("inverse of arrow {r} has wrong endpoints"));
        }
        if g.inverse(i) != r {
            report.push(format!("inverse(inverse({r})) != {r}"));
        }
        if g.compose(r, i) != Some(es) || g.compose(i, r) != Some(et) {
            report.push(format!("inverse law fails at arrow {r}"));
        }
    }
    report
}

/// One-object groupoid of a group; composition is group multiplication.
pub fn point_groupoid(g: &FiniteGroup) -> FiniteGroupoid {
    let n = g.order();
    let mut compose = vec![UNDEFINED; n * n];
    for a in 0..n {
        for b in 0..n {
            compose[a * n + b] = g.mul(a, b);
        }
    }
    FiniteGroupoid {
        object_names: vec!["*".to_string()],
        arrow_names: g.names.clone(),
        source: vec![0; n],
        target: vec![0; n],
        identity: vec![g.identity()],
        inverse: (0..n).map(|a| g.inverse(a)).collect(),
        compose,
    }
}

/// A left action of a finite group on a finite indexed set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    pub group: FiniteGroup,
    pub point_names: Vec<String>,
    /// act[g * n_points + x] = g . x
    act: Vec<usize>,
}

impl GroupAction {
    pub fn new(group: FiniteGroup, point_names: Vec<String>, act: Vec<usize>) -> Result<Self> {
        let np = point_names.len();
        if act.len() != group.order() * np {
            return Err(Error::Invalid("action: table must be |G| x |X|".into()));
        }
        if act.iter().any(|&x| x >= np) {
            return Err(Error::Invalid("action: point index out of range".into()));
        }
        let a = GroupAction { group, point_names, act };
        for x in 0..np {
            if a.apply(a.group.identity(), x) != x {
                return Err(Error::Invalid(format!("action: identity moves point {x}")));
            }
        }
        for g in 0..a.group.order() {
            for h in 0..a.group.order() {
                let gh = a.group.mul(g, h);
                for x in 0..np {
                    if a.apply(g, a.apply(h, x)) != a.apply(gh, x) {
                        return Err(Error::Invalid(format!(
                            "action: compatibility fails at (g={g}, h={h}, x={x})"
                        )));
                    }
                }
            }
        }
        Ok(a)
    }

    pub fn n_points(&self) -> usize {
        self.point_names.len()
    }

    #[inline]
    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.act[g * self.n_points() + x]
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&g| self.apply(g, x) == x).collect()
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let np = self.n_points();
        let mut seen = vec![false; np];
        let mut out = Vec::new();
        for x in 0..np {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.group.order()).map(|g| self.apply(g, x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Left translation action of G on itself.
    pub fn translation(group: &FiniteGroup) -> GroupAction {
        let n = group.order();
        let act = (0..n).flat_map(|g| (0..n).map(move |x| (g, x))).map(|(g, x)| group.mul(g, x)).collect();
        GroupAction { group: group.clone(), point_names: group.names.clone(), act }
    }

    /// The trivial action on a single point.
    pub fn on_point(group: &FiniteGroup) -> GroupAction {
        GroupAction {
            group: group.clone(),
            point_names: vec!["*".to_string()],
            act: vec![0; group.order()],
        }
    }
}

/// Action groupoid [X/G]: objects X, arrows (g, x) from x to g.x. With
/// diagrammatic composition the composite of (g, x) and (h, g.x) is (hg, x).
pub fn action_groupoid(a: &GroupAction) -> FiniteGroupoid {
    let ng = a.group.order();
    let np = a.n_points();
    let n_arr = ng * np;
    let idx = |g: usize, x: usize| g * np + x;
    let mut source = vec![0; n_arr];
    let mut target = vec![0; n_arr];
    let mut inverse = vec![0; n_arr];
    let mut arrow_names = vec![String::new(); n_arr];
    for g in 0..ng {
        for x in 0..np {
            let r = idx(g, x);
            source[r] = x;
            target[r] = a.apply(g, x);
            inverse[r] = idx(a.group.inverse(g), a.apply(g, x));
            arrow_names[r] = format!("({},{})", a.group.names[g], a.point_names[x]);
        }
    }
    let mut compose = vec![UNDEFINED; n_arr * n_arr];
    for g in 0..ng {
        for x in 0..np {
            let r1 = idx(g, x);
            for h in 0..ng {
                let r2 = idx(h, a.apply(g, x));
                compose[r1 * n_arr + r2] = idx(a.group.mul(h, g), x);
            }
        }
    }
    let identity = (0..np).map(|x| idx(a.group.identity(), x)).collect();
    FiniteGroupoid {
        object_names: a.point_names.clone(),
        arrow_names,
        source,
        target,
        identity,
        inverse,
        compose,
    }
}

/// Disjoint union of groupoids (object and arrow indices shifted).
pub fn disjoint_union(parts: &[FiniteGroupoid]) -> FiniteGroupoid {
    let mut object_names = Vec::new();
    let mut arrow_names = Vec::new();
    let mut source = Vec::new();
    let mut target = Vec::new();
    let mut identity = Vec::new();
    let mut inverse = Vec::new();
    let total_arrows: usize = parts.iter().map(|p| p.n_arrows()).sum();
    let mut compose = vec![UNDEFINED; total_arrows * total_arrows];
    let mut obj_off = 0usize;
    let mut arr_off = 0usize;
    for (k, p) in parts.iter().enumerate() {
        for u in 0..p.n_objects() {
            object_names.push(format!("{k}:{}", p.object_names[u]));
            identity.push(arr_off + p.identity(u));
        }
        for r in 0..p.n_arrows() {
            arrow_names.push(format!("{k}:{}", p.arrow_names[r]));
            source.push(obj_off + p.source(r));
            target.push(obj_off + p.target(r));
            inverse.push(arr_off + p.inverse(r));
        }
        for r1 in 0..p.n_arrows() {
            for r2 in 0..p.n_arrows() {
                if let Some(c) = p.compose(r1, r2) {
                    compose[(arr_off + r1) * total_arrows + (arr_off + r2)] = arr_off + c;
                }
            }
        }
        obj_off += p.n_objects();
        arr_off += p.n_arrows();
    }
    FiniteGroupoid { object_names, arrow_names, source, target, identity, inverse, compose }
}

#[derive(Clone, Debug)]
pub struct GroupoidMorphism {
    pub object_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

/// Violations of the morphism axioms for f: dom -> cod; empty when valid.
pub fn validate_morphism(
    f: &GroupoidMorphism,
    dom: &FiniteGroupoid,
    cod: &FiniteGroupoid,
) -> Vec<String> {
    let mut report = Vec::new();
    if f.object_map.len() != dom.n_objects() || f.arrow_map.len() != dom.n_arrows() {
        report.push("map table lengths do not match the domain".into());
        return report;
    }
    if f.object_map.iter().any(|&u| u >= cod.n_objects())
        || f.arrow_map.iter().any(|&r| r >= cod.n_arrows())
    {
        report.push("map image index out of range".into());
        return report;
    }
    for r in 0..dom.n_arrows() {
        if cod.source(f.arrow_map[r]) != f.object_map[dom.source(r)] {
            report.push(format!("source square fails at arrow {r}"));
        }
        if cod.target(f.arrow_map[r]) != f.object_map[dom.target(r)] {
            report.push(format!("target square fails at arrow {r}"));
        }
        if f.arrow_map[dom.inverse(r)] != cod.inverse(f.arrow_map[r]) {
            report.push(format!("inverse square fails at arrow {r}"));
        }
    }
    for u in 0..dom.n_objects() {
        if f.arrow_map[dom.identity(u)] != cod.identity(f.object_map[u]) {
            report.push(format!("identity square fails at object {u}"));
        }
    }
    for r1 in 0..dom.n_arrows() {
        for r2 in 0..dom.n_arrows() {
            if let Some(c) = dom.compose(r1, r2) {
                match cod.compose(f.arrow_map[r1], f.arrow_map[r2]) {
                    Some(fc) if fc == f.arrow_map[c] => {}
                    _ => report.push(format!("composition square fails at pair ({r1},{r2})")),
                }
            }
        }
    }
    report
}

/// A groupoid isomorphism certificate: a morphism that is bijective on
/// objects and arrows, validated in both directions.
pub fn is_isomorphism(f: &GroupoidMorphism, dom: &FiniteGroupoid, cod: &FiniteGroupoid) -> bool {
    if !validate_morphism(f, dom, cod).is_empty() {
        return false;
    }
    let mut obj_hit = vec![false; cod.n_objects()];
    for &u in &f.object_map {
        if obj_hit[u] {
            return false;
        }
        obj_hit[u] = true;
    }
    let mut arr_hit = vec![false; cod.n_arrows()];
    for &r in &f.arrow_map {
        if arr_hit[r] {
            return false;
        }
        arr_hit[r] = true;
    }
    obj_hit.iter().all(|&b| b) && arr_hit.iter().all(|&b| b)
}

/// One entry per connected component: object count and the automorphism
/// group of the least object of the component.
#[derive(Clone, Debug)]
pub struct MoritaNormalForm {
    pub components: Vec<MoritaComponent>,
}

#[derive(Clone, Debug)]
pub struct MoritaComponent {
    pub objects: Vec<usize>,
    pub base_object: usize,
    pub automorphism_group: FiniteGroup,
}

pub fn morita_normal_form(g: &FiniteGroupoid) -> Result<MoritaNormalForm> {
    let mut components = Vec::new();
    for objects in g.components() {
        let base_object = objects[0];
        let automorphism_group = g.automorphism_group(base_object)?;
        components.push(MoritaComponent { objects, base_object, automorphism_group });
    }
    Ok(MoritaNormalForm { components })
}

/// Matching of components with explicit group isomorphisms when equivalent.
#[derive(Clone, Debug)]
pub struct MoritaCertificate {
    /// (component of g1, component of g2, element map between automorphism
    /// groups) triples.
    pub matching: Vec<(usize, usize, Vec<usize>)>,
}

/// Morita equivalence decided via the normal form: a bijection between
/// components carrying isomorphic automorphism groups (object counts are
/// immaterial). For finite groupoids this agrees with the span definition.
pub fn morita_equivalent(
    g1: &FiniteGroupoid,
    g2: &FiniteGroupoid,
) -> Result<Option<MoritaCertificate>> {
    let n1 = morita_normal_form(g1)?;
    let n2 = morita_normal_form(g2)?;
    if n1.components.len() != n2.components.len() {
        return Ok(None);
    }
    // greedy matching is complete because isomorphism is an equivalence
    let mut used = vec![false; n2.components.len()];
    let mut matching = Vec::new();
    for (i, c1) in n1.components.iter().enumerate() {
        let mut found = false;
        for (j, c2) in n2.components.iter().enumerate() {
            if used[j] {
                continue;
            }
            if let Some(map) = group_isomorphism(&c1.automorphism_group, &c2.automorphism_group) {
                used[j] = true;
                matching.push((i, j, map));
                found = true;
                break;
            }
        }
        if !found {
            return Ok(None);
        }
    }
    Ok(Some(MoritaCertificate { matching }))
}
