//! Finite groups as dense multiplication tables, the standard small-group
//! constructors, conjugacy data, and isomorphism testing by generator-image
//! backtracking (intended for |G| <= 64).

use std::collections::HashMap;

use crate::error::{Error, Result};

pub const GROUP_ORDER_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    /// Display names, one per element; index 0..n.
    pub names: Vec<String>,
    /// table[g * n + h] = g * h
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Build from a multiplication table, verifying all group axioms.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Invalid("group: empty element set".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("group: table must be n x n".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            for &v in row {
                if v >= n {
                    return Err(Error::Invalid(format!("group: table entry {v} out of range")));
                }
                flat.push(v);
            }
        }
        // locate two-sided identity
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| flat[e * n + g] == g && flat[g * n + e] == g))
            .ok_or_else(|| Error::Invalid("group: no identity element".into()))?;
        // inverses
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| flat[g * n + h] == identity && flat[h * n + g] == identity)
                .ok_or_else(|| Error::Invalid(format!("group: element {g} has no inverse")))?;
            inverse[g] = inv;
        }
        // associativity
        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b];
                for c in 0..n {
                    if flat[ab * n + c] != flat[a * n + flat[b * n + c]] {
                        return Err(Error::Invalid(format!(
                            "group: associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { names, table: flat, identity, inverse })
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order() + h]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn conjugate(&self, g: usize, by: usize) -> usize {
        // by^{-1} * g * by
        self.mul(self.mul(self.inverse(by), g), by)
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1usize;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1usize, |acc, g| num_integer::lcm(acc, self.element_order(g)))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|g| (g..n).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.order()).filter(|&h| self.mul(g, h) == self.mul(h, g)).collect()
    }

    /// The subgroup on the listed elements as a group in its own right;
    /// element i of the result is `elements[i]`.
    pub fn subgroup(&self, elements: &[usize]) -> Result<FiniteGroup> {
        let pos: std::collections::HashMap<usize, usize> =
            elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut table = vec![vec![0usize; elements.len()]; elements.len()];
        for (i, &x) in elements.iter().enumerate() {
            for (j, &y) in elements.iter().enumerate() {
                table[i][j] = *pos
                    .get(&self.mul(x, y))
                    .ok_or_else(|| Error::Invalid("subgroup: element set not closed".into()))?;
            }
        }
        FiniteGroup::from_table(elements.iter().map(|&x| self.names[x].clone()).collect(), table)
    }

    /// Conjugacy classes: (representative, members sorted) ordered by
    /// smallest member.
    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let mut members: Vec<usize> = (0..n).map(|h| self.conjugate(g, h)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                seen[m] = true;
            }
            classes.push(ConjugacyClass {
                representative: g,
                centralizer: self.centralizer(g),
                members,
            });
        }
        classes
    }

    /// Generating set found greedily (small but not necessarily minimal).
    pub fn generators(&self) -> Vec<usize> {
        let n = self.order();
        let mut gens: Vec<usize> = Vec::new();
        let mut span = self.closure(&gens);
        // prefer high-order elements to keep the generating set short
        let mut order_sorted: Vec<usize> = (0..n).collect();
        order_sorted.sort_by_key(|&g| std::cmp::Reverse(self.element_order(g)));
        for g in order_sorted {
            if span.len() == n {
                break;
            }
            if !span.contains(&g) {
                gens.push(g);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Subgroup generated by the given elements, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order()];
        in_set[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                for y in [self.mul(x, g), self.mul(g, x)] {
                    if !in_set[y] {
                        in_set[y] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        (0..self.order()).filter(|&i| in_set[i]).collect()
    }

    // --- constructors -------------------------------------------------------

    pub fn trivial() -> Self {
        FiniteGroup::from_table(vec!["e".into()], vec![vec![0]]).unwrap()
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n).map(|i| format!("g{i}")).collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroup::from_table(names, table).unwrap()
    }

    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let idx = |i: usize, j: usize| i * nb + j;
        let names = (0..na)
            .flat_map(|i| (0..nb).map(move |j| (i, j)))
            .map(|(i, j)| format!("({},{})", a.names[i], b.names[j]))
            .collect();
        let mut table = vec![vec![0usize; na * nb]; na * nb];
        for i1 in 0..na {
            for j1 in 0..nb {
                for i2 in 0..na {
                    for j2 in 0..nb {
                        table[idx(i1, j1)][idx(i2, j2)] = idx(a.mul(i1, i2), b.mul(j1, j2));
                    }
                }
            }
        }
        FiniteGroup::from_table(names, table).unwrap()
    }

    /// Dihedral group of order 2n (symmetries of the n-gon), n >= 1.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        // elements: r^i (0..n), then s r^i (n..2n); s r^i * s r^j = r^{j-i}
        let size = 2 * n;
        let names = (0..n)
            .map(|i| format!("r{i}"))
            .chain((0..n).map(|i| format!("sr{i}")))
            .collect();
        let mut table = vec![vec![0usize; size]; size];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = (i + j) % n; // r^i r^j
                table[i][n + j] = n + (j + n - i % n) % n; // r^i · s r^j = s r^{j-i}
                table[n + i][j] = n + (i + j) % n; // s r^i · r^j
                table[n + i][n + j] = (j + n - i % n) % n; // s r^i · s r^j = r^{j-i}
            }
        }
        FiniteGroup::from_table(names, table).unwrap()
    }

    /// Quaternion group {±1, ±i, ±j, ±k}.
    pub fn quaternion8() -> Self {
        // 0:1 1:-1 2:i 3:-i 4:j 5:-j 6:k 7:-k
        let names =
            ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
        let neg = |x: usize| x ^ 1;
        let base = |x: usize| x & !1;
        // products of the positive units i,j,k (indices 2,4,6)
        let unit_mul = |a: usize, b: usize| -> usize {
            match (a, b) {
                (0, x) => x,
                (x, 0) => x,
                (2, 2) | (4, 4) | (6, 6) => 1, // i²=j²=k²=-1
                (2, 4) => 6,                   // ij=k
                (4, 2) => 7,                   // ji=-k
                (4, 6) => 2,                   // jk=i
                (6, 4) => 3,                   // kj=-i
                (6, 2) => 4,                   // ki=j
                (2, 6) => 5,                   // ik=-j
                _ => unreachable!(),
            }
        };
        let mut table = vec![vec![0usize; 8]; 8];
        for a in 0..8usize {
            for b in 0..8usize {
                let mut p = unit_mul(base(a), base(b));
                if ((a & 1) ^ (b & 1)) == 1 {
                    p = neg(p);
                }
                table[a][b] = p;
            }
        }
        FiniteGroup::from_table(names, table).unwrap()
    }

    /// Symmetric group on n letters (n! <= GROUP_ORDER_CAP).
    pub fn symmetric(n: usize) -> Result<Self> {
        let perms = all_permutations(n);
        if perms.len() > GROUP_ORDER_CAP {
            return Err(Error::ResourceCap(format!(
                "S_{n} has order {} > cap {GROUP_ORDER_CAP}",
                perms.len()
            )));
        }
        Self::from_permutations_exact(perms)
    }

    /// Alternating group on n letters.
    pub fn alternating(n: usize) -> Result<Self> {
        let perms: Vec<Vec<usize>> =
            all_permutations(n).into_iter().filter(|p| permutation_sign(p) == 1).collect();
        if perms.len() > GROUP_ORDER_CAP {
            return Err(Error::ResourceCap(format!(
                "A_{n} has order {} > cap {GROUP_ORDER_CAP}",
                perms.len()
            )));
        }
        Self::from_permutations_exact(perms)
    }

    /// Group generated by permutations of {0..deg}; expanded to a full table,
    /// capped at order GROUP_ORDER_CAP.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<Self> {
        let deg = generators.first().map_or(0, |p| p.len());
        for p in generators {
            if p.len() != deg {
                return Err(Error::Invalid("permutations have mixed degrees".into()));
            }
            let mut seen = vec![false; deg];
            for &v in p {
                if v >= deg || seen[v] {
                    return Err(Error::Invalid("not a permutation".into()));
                }
                seen[v] = true;
            }
        }
        let id: Vec<usize> = (0..deg).collect();
        let mut elements: Vec<Vec<usize>> = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(id, 0);
        let mut frontier = vec![0usize];
        while let Some(i) = frontier.pop() {
            for g in generators {
                let prod = compose_perm(&elements[i], g);
                if !index.contains_key(&prod) {
                    if elements.len() >= GROUP_ORDER_CAP {
                        return Err(Error::ResourceCap(format!(
                            "permutation group exceeds order cap {GROUP_ORDER_CAP}"
                        )));
                    }
                    index.insert(prod.clone(), elements.len());
                    frontier.push(elements.len());
                    elements.push(prod);
                }
            }
        }
        Self::from_permutations_exact(elements)
    }

    /// Build a table from a closed set of permutations.
    fn from_permutations_exact(perms: Vec<Vec<usize>>) -> Result<Self> {
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        for (i, p) in perms.iter().enumerate() {
            index.insert(p.clone(), i);
        }
        let n = perms.len();
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod = compose_perm(&perms[i], &perms[j]);
                let k = *index
                    .get(&prod)
                    .ok_or_else(|| Error::Invalid("permutation set not closed".into()))?;
                table[i][j] = k;
            }
        }
        let names = perms.iter().map(|p| perm_name(p)).collect();
        Self::from_table(names, table)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub centralizer: Vec<usize>,
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut cur, &mut out);
    out.sort();
    out
}

fn heap_permute(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, cur, out);
        if k % 2 == 0 {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

fn permutation_sign(p: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// (p then q): result[x] = q[p[x]].
fn compose_perm(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&x| q[x]).collect()
}

fn perm_name(p: &[usize]) -> String {
    // cycle notation
    let n = p.len();
    let mut seen = vec![false; n];
    let mut parts = Vec::new();
    for start in 0..n {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cyc.push(x);
            x = p[x];
        }
        parts.push(format!(
            "({})",
            cyc.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
        ));
    }
    if parts.is_empty() {
        "e".to_string()
    } else {
        parts.join("")
    }
}

/// Search for an isomorphism a -> b by backtracking over images of a
/// generating set, pruning on element orders. Returns the full element map
/// when one exists.
pub fn group_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Vec<usize>> {
    if a.order() != b.order() {
        return None;
    }
    // coarse invariants: multiset of element orders
    let mut oa: Vec<usize> = (0..a.order()).map(|g| a.element_order(g)).collect();
    let mut ob: Vec<usize> = (0..b.order()).map(|g| b.element_order(g)).collect();
    let orders_a = oa.clone();
    let orders_b = ob.clone();
    oa.sort_unstable();
    ob.sort_unstable();
    if oa != ob {
        return None;
    }
    let gens = a.generators();
    let mut images = vec![usize::MAX; gens.len()];
    if backtrack(a, b, &gens, &orders_a, &orders_b, &mut images, 0) {
        // rebuild the full map from generator images by parallel closure
        build_map(a, b, &gens, &images)
    } else {
        None
    }
}

fn backtrack(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[usize],
    orders_a: &[usize],
    orders_b: &[usize],
    images: &mut Vec<usize>,
    k: usize,
) -> bool {
    if k == gens.len() {
        return build_map(a, b, gens, images).is_some();
    }
    for cand in 0..b.order() {
        if orders_b[cand] != orders_a[gens[k]] {
            continue;
        }
        images[k] = cand;
        // early consistency: partial map must already be single-valued
        if partial_consistent(a, b, &gens[..=k], &images[..=k]) {
            if backtrack(a, b, gens, orders_a, orders_b, images, k + 1) {
                return true;
            }
        }
    }
    images[k] = usize::MAX;
    false
}

/// Close the partial assignment and check for a multiplication conflict.
fn partial_consistent(a: &FiniteGroup, b: &FiniteGroup, gens: &[usize], images: &[usize]) -> bool {
    grow_map(a, b, gens, images).is_some()
}

fn build_map(a: &FiniteGroup, b: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let map = grow_map(a, b, gens, images)?;
    // must be total and bijective, and a homomorphism everywhere
    if map.iter().any(|&v| v == usize::MAX) {
        return None;
    }
    let mut hit = vec![false; b.order()];
    for &v in &map {
        if hit[v] {
            return None;
        }
        hit[v] = true;
    }
    for x in 0..a.order() {
        for y in 0..a.order() {
            if map[a.mul(x, y)] != b.mul(map[x], map[y]) {
                return None;
            }
        }
    }
    Some(map)
}

/// Propagate generator images through products; None on conflict.
fn grow_map(a: &FiniteGroup, b: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; a.order()];
    map[a.identity()] = b.identity();
    for (&g, &im) in gens.iter().zip(images) {
        if map[g] != usize::MAX && map[g] != im {
            return None;
        }
        map[g] = im;
    }
    let mut frontier: Vec<usize> = (0..a.order()).filter(|&x| map[x] != usize::MAX).collect();
    while let Some(x) = frontier.pop() {
        for (&g, &im) in gens.iter().zip(images) {
            for (p, q) in [(a.mul(x, g), b.mul(map[x], im)), (a.mul(g, x), b.mul(im, map[x]))] {
                if map[p] == usize::MAX {
                    map[p] = q;
                    frontier.push(p);
                } else if map[p] != q {
                    return None;
                }
            }
        }
    }
    Some(map)
}
