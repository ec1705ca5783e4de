//! Finite groups stored as dense Cayley tables.
//!
//! Elements are indices `0..order` and the identity is always index `0`.
//! Every other structure in the crate (cocycle tables, representation
//! tables, reports) indexes by these integers, so the element order produced
//! here is part of the output contract: it is deterministic for a given
//! input table or generator list.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};

pub mod named;

/// Order guard for exhaustive algorithms; `TBK_MAX_ORDER` overrides it.
pub const DEFAULT_MAX_ORDER: usize = 10_000;

/// Element bound used when closing a generator set.
pub const DEFAULT_CLOSURE_BOUND: usize = 1_000_000;

/// Orders up to this size get an exhaustive associativity check; above it
/// Light's test over a generating set is used.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 256;

pub fn max_order() -> usize {
    std::env::var("TBK_MAX_ORDER")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ORDER)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    generators: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Builds a group from a table that is already known to be a group with
    /// identity at index 0. Only inverses are derived.
    pub(crate) fn from_trusted_table(
        n: usize,
        mul: Vec<u32>,
        generators: Vec<usize>,
        labels: Option<Vec<String>>,
    ) -> Self {
        debug_assert_eq!(mul.len(), n * n);
        let mut inv = vec![0u32; n];
        for g in 0..n {
            let row = &mul[g * n..(g + 1) * n];
            inv[g] = row.iter().position(|&x| x == 0).expect("inverse exists") as u32;
        }
        FiniteGroup {
            n,
            mul,
            inv,
            generators,
            labels,
        }
    }

    /// Validates a Cayley table. The identity is moved to index 0 by swapping
    /// it with the element currently there; all other indices are kept.
    pub fn from_cayley(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup {
                reason: "empty table".into(),
                witness: vec![],
            });
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup {
                    reason: format!("row {i} has length {}, expected {n}", row.len()),
                    witness: vec![i],
                });
            }
            if let Some(j) = row.iter().position(|&x| x >= n) {
                return Err(Error::NotAGroup {
                    reason: format!("entry out of range at ({i}, {j})"),
                    witness: vec![i, j],
                });
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::NotAGroup {
                reason: "no two-sided identity".into(),
                witness: vec![],
            })?;
        // swap e <-> 0
        let relabel = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[relabel(a) * n + relabel(b)] = relabel(table[a][b]) as u32;
            }
        }
        let at = |a: usize, b: usize| mul[a * n + b] as usize;

        let mut inv = vec![0u32; n];
        for a in 0..n {
            match (0..n).find(|&b| at(a, b) == 0 && at(b, a) == 0) {
                Some(b) => inv[a] = b as u32,
                None => {
                    return Err(Error::NotAGroup {
                        reason: "missing two-sided inverse".into(),
                        witness: vec![relabel(a)],
                    })
                }
            }
        }

        let generators = greedy_generators(n, &|a, b| at(a, b));
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = at(a, b);
                    for c in 0..n {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(non_associative(relabel, a, b, c));
                        }
                    }
                }
            }
        } else {
            // Light's test: the set of right factors c with (ab)c = a(bc) for
            // all a, b is closed under products.
            let reached = right_closure(n, &generators, &|a, b| at(a, b));
            if reached.len() != n {
                return Err(Error::NotAGroup {
                    reason: "generating set does not reach every element".into(),
                    witness: vec![],
                });
            }
            for &c in &generators {
                for a in 0..n {
                    for b in 0..n {
                        if at(at(a, b), c) != at(a, at(b, c)) {
                            return Err(non_associative(relabel, a, b, c));
                        }
                    }
                }
            }
        }
        Ok(FiniteGroup {
            n,
            mul,
            inv,
            generators,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::malformed(
                "/labels",
                format!("expected {} labels, got {}", self.n, labels.len()),
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => format!("g{g}"),
        }
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// `[g, h] = g h g⁻¹ h⁻¹`.
    pub fn commutator(&self, g: usize, h: usize) -> usize {
        let gh = self.mul(g, h);
        self.mul(self.mul(gh, self.inv(g)), self.inv(h))
    }

    /// `t g t⁻¹`.
    pub fn conjugate(&self, t: usize, g: usize) -> usize {
        self.mul(self.mul(t, g), self.inv(t))
    }

    pub fn pow(&self, g: usize, k: u64) -> usize {
        let mut acc = 0;
        let mut base = g;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, g: usize) -> u64 {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        (0..self.n)
            .map(|g| self.element_order(g))
            .fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, &a)| {
            self.generators[i + 1..]
                .iter()
                .all(|&b| self.commutes(a, b))
        })
    }

    /// Breadth-first spanning tree of the right Cayley graph. Entry `g` is
    /// `(parent, k)` with `g = parent · generators[k]`, where the parent
    /// precedes `g` in [`FiniteGroup::bfs_order`]; the identity has no
    /// parent. Each generator hangs directly off the identity.
    pub fn spanning_tree(&self) -> Vec<Option<(usize, usize)>> {
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut order = vec![0usize];
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for (k, &s) in self.generators.iter().enumerate() {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, k));
                    order.push(y);
                }
            }
        }
        parent
    }

    /// Elements in the breadth-first order of [`FiniteGroup::spanning_tree`].
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut order = vec![0usize];
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &s in &self.generators {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    order.push(y);
                }
            }
        }
        order
    }

    pub fn conjugacy_classes(&self) -> ConjugacyClasses {
        let mut class_of = vec![usize::MAX; self.n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for g in 0..self.n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![g];
            class_of[g] = id;
            let mut head = 0;
            while head < members.len() {
                let x = members[head];
                head += 1;
                for &s in &self.generators {
                    let y = self.conjugate(s, x);
                    if class_of[y] == usize::MAX {
                        class_of[y] = id;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        ConjugacyClasses { classes, class_of }
    }

    pub fn centralizer(&self, g: usize) -> Subgroup {
        let elements: Vec<usize> = (0..self.n).filter(|&h| self.commutes(g, h)).collect();
        Subgroup::from_closed_set(self, elements)
    }

    pub fn center(&self) -> Subgroup {
        let elements: Vec<usize> = (0..self.n)
            .filter(|&h| self.generators.iter().all(|&s| self.commutes(s, h)))
            .collect();
        Subgroup::from_closed_set(self, elements)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.n).collect(),
            generators: self.generators.clone(),
        }
    }

    pub fn subgroup_generated(&self, set: &[usize]) -> Subgroup {
        let mut gens: Vec<usize> = Vec::new();
        for &s in set {
            if s != 0 && !gens.contains(&s) {
                gens.push(s);
            }
        }
        let mut elements = right_closure(self.n, &gens, &|a, b| self.mul(a, b));
        elements.sort_unstable();
        Subgroup {
            elements,
            generators: gens,
        }
    }

    /// Commuting pairs `(g, h)` with `g ≤ h`, in lexicographic order.
    pub fn commuting_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |g| {
            (g..self.n)
                .filter(move |&h| self.commutes(g, h))
                .map(move |h| (g, h))
        })
    }

    /// Checks that `map` (indexed by elements of `self`) is a homomorphism
    /// into `target`.
    pub fn check_homomorphism(&self, target: &FiniteGroup, map: &[usize]) -> Result<()> {
        if map.len() != self.n || map.iter().any(|&x| x >= target.order()) {
            return Err(Error::DimensionMismatch(
                "homomorphism table has the wrong shape".into(),
            ));
        }
        for g in 0..self.n {
            for h in 0..self.n {
                if map[self.mul(g, h)] != target.mul(map[g], map[h]) {
                    return Err(Error::NotAHomomorphism(g, h));
                }
            }
        }
        Ok(())
    }
}

fn non_associative(relabel: impl Fn(usize) -> usize, a: usize, b: usize, c: usize) -> Error {
    Error::NotAGroup {
        reason: "associativity fails".into(),
        witness: vec![relabel(a), relabel(b), relabel(c)],
    }
}

/// Elements reachable from the identity by right multiplication with `gens`,
/// in discovery order.
fn right_closure(n: usize, gens: &[usize], mul: &dyn Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut out = vec![0];
    let mut q = VecDeque::from([0usize]);
    while let Some(x) = q.pop_front() {
        for &s in gens {
            let y = mul(x, s);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
                q.push_back(y);
            }
        }
    }
    out
}

/// Small generating set: repeatedly add the element that enlarges the
/// generated subgroup the most (smallest index on ties). Above 512 elements
/// the first element outside the current subgroup is taken instead.
fn greedy_generators(n: usize, mul: &dyn Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    let mut current: BTreeSet<usize> = BTreeSet::from([0]);
    while current.len() < n {
        let pick = if n <= 512 {
            let mut best = (0usize, usize::MAX);
            for x in 0..n {
                if current.contains(&x) {
                    continue;
                }
                let mut trial = gens.clone();
                trial.push(x);
                let size = right_closure(n, &trial, mul).len();
                if size > best.0 {
                    best = (size, x);
                }
            }
            best.1
        } else {
            (0..n).find(|x| !current.contains(x)).unwrap()
        };
        gens.push(pick);
        current = right_closure(n, &gens, mul).into_iter().collect();
    }
    gens
}

/// Result of [`closure`]: the group, its elements in index order, and the
/// lookup from canonical key to index.
pub struct Closure<T, K> {
    pub group: FiniteGroup,
    pub elements: Vec<T>,
    pub index: HashMap<K, usize>,
}

/// Enumerates the group generated by `seed` inside some ambient monoid.
///
/// Elements are discovered breadth-first; each new layer is sorted by
/// `key`, so the numbering only depends on the seed and the key function.
/// The Cayley table is assembled from the right-multiplication maps, which
/// needs only `|G| · |seed|` calls to `multiply`.
pub fn closure<T, K>(
    identity: T,
    seed: &[T],
    multiply: impl Fn(&T, &T) -> T,
    key: impl Fn(&T) -> K,
    bound: usize,
) -> Result<Closure<T, K>>
where
    K: Ord + Hash + Clone,
{
    let mut index: HashMap<K, usize> = HashMap::new();
    index.insert(key(&identity), 0);
    let mut gens: Vec<&T> = Vec::new();
    {
        let mut seen: HashMap<K, ()> = HashMap::new();
        seen.insert(key(&identity), ());
        for s in seed {
            if seen.insert(key(s), ()).is_none() {
                gens.push(s);
            }
        }
    }
    let r = gens.len();
    let mut elements = vec![identity];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut right: Vec<u32> = Vec::new();
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut fresh: Vec<(K, T, usize, usize)> = Vec::new();
        let mut fresh_pos: HashMap<K, usize> = HashMap::new();
        let mut pending: Vec<(usize, usize, usize)> = Vec::new();
        for &x in &frontier {
            if right.len() < (x + 1) * r {
                right.resize((x + 1) * r, u32::MAX);
            }
            for (k, s) in gens.iter().enumerate() {
                let y = multiply(&elements[x], s);
                let ky = key(&y);
                if let Some(&j) = index.get(&ky) {
                    right[x * r + k] = j as u32;
                } else if let Some(&pos) = fresh_pos.get(&ky) {
                    pending.push((x, k, pos));
                } else {
                    fresh_pos.insert(ky.clone(), fresh.len());
                    pending.push((x, k, fresh.len()));
                    fresh.push((ky, y, x, k));
                }
            }
        }
        if elements.len() + fresh.len() > bound {
            return Err(Error::OrderBoundExceeded { bound });
        }
        let mut order: Vec<usize> = (0..fresh.len()).collect();
        order.sort_by(|&a, &b| fresh[a].0.cmp(&fresh[b].0));
        let mut new_index = vec![0usize; fresh.len()];
        let base = elements.len();
        for (rank, &pos) in order.iter().enumerate() {
            new_index[pos] = base + rank;
        }
        for (x, k, pos) in pending {
            right[x * r + k] = new_index[pos] as u32;
        }
        let mut slots: Vec<Option<(K, T, usize, usize)>> = fresh.into_iter().map(Some).collect();
        frontier = Vec::with_capacity(order.len());
        for &pos in &order {
            let (ky, y, px, pk) = slots[pos].take().unwrap();
            let idx = elements.len();
            index.insert(ky, idx);
            elements.push(y);
            parent.push(Some((px, pk)));
            frontier.push(idx);
        }
    }
    let n = elements.len();
    let mut mul = vec![0u32; n * n];
    for g in 0..n {
        mul[g * n] = g as u32;
        for h in 1..n {
            let (p, k) = parent[h].unwrap();
            let gp = mul[g * n + p] as usize;
            mul[g * n + h] = right[gp * r + k];
        }
    }
    let generators: Vec<usize> = gens.iter().map(|s| index[&key(s)]).collect();
    let group = FiniteGroup::from_trusted_table(n, mul, generators, None);
    Ok(Closure {
        group,
        elements,
        index,
    })
}

/// Partition of a group into conjugacy classes; each class is sorted and
/// classes are ordered by their smallest member, which is the representative.
#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
    generators: Vec<usize>,
}

impl Subgroup {
    /// Wraps a set already known to be a subgroup, picking witness
    /// generators greedily in index order.
    pub fn from_closed_set(g: &FiniteGroup, mut elements: Vec<usize>) -> Subgroup {
        elements.sort_unstable();
        elements.dedup();
        let mut gens = Vec::new();
        let mut covered: BTreeSet<usize> = BTreeSet::from([0]);
        for &x in &elements {
            if !covered.contains(&x) {
                gens.push(x);
                covered = right_closure(g.order(), &gens, &|a, b| g.mul(a, b))
                    .into_iter()
                    .collect();
            }
        }
        Subgroup {
            elements,
            generators: gens,
        }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    /// Position of `g` in the sorted element list, which is its index in
    /// [`Subgroup::to_group`].
    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }

    pub fn is_abelian(&self, g: &FiniteGroup) -> bool {
        self.abelian_witness(g).is_none()
    }

    fn abelian_witness(&self, g: &FiniteGroup) -> Option<(usize, usize)> {
        for (i, &a) in self.generators.iter().enumerate() {
            for &b in &self.generators[i + 1..] {
                if !g.commutes(a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// The subgroup as a group in its own right, elements re-indexed by
    /// their position in the sorted element list.
    pub fn to_group(&self, parent: &FiniteGroup) -> FiniteGroup {
        let n = self.order();
        let mut mul = vec![0u32; n * n];
        for (i, &a) in self.elements.iter().enumerate() {
            for (j, &b) in self.elements.iter().enumerate() {
                mul[i * n + j] = self.position(parent.mul(a, b)).expect("closed") as u32;
            }
        }
        let generators = self
            .generators
            .iter()
            .map(|&x| self.position(x).unwrap())
            .collect();
        let labels = parent
            .labels()
            .map(|l| self.elements.iter().map(|&x| l[x].clone()).collect());
        FiniteGroup::from_trusted_table(n, mul, generators, labels)
    }
}

/// Invariant-factor decomposition of a finite abelian group.
///
/// Factors are listed largest first, each dividing the one before it.
/// `dlog[i]` holds the exponent vector of the `i`-th element of the
/// subgroup (in sorted element order) with respect to `basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianStructure {
    pub invariant_factors: Vec<u64>,
    pub basis: Vec<usize>,
    pub dlog: Vec<Vec<u64>>,
}

impl AbelianStructure {
    pub fn is_bicyclic(&self) -> bool {
        self.invariant_factors.len() <= 2
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

pub fn abelian_structure(g: &FiniteGroup, h: &Subgroup) -> Result<AbelianStructure> {
    if let Some((a, b)) = h.abelian_witness(g) {
        return Err(Error::NotAbelian(a, b));
    }
    let order = h.order() as u64;
    let primes = prime_factors(order);
    // Per prime: cyclic factors (element, order) of the Sylow subgroup.
    let mut parts: Vec<(u64, Vec<(usize, u64)>)> = Vec::new();
    for &p in &primes {
        let sylow: Vec<usize> = h
            .elements()
            .iter()
            .copied()
            .filter(|&x| is_power_of(g.element_order(x), p))
            .collect();
        let mut known: HashMap<usize, Vec<u64>> = HashMap::from([(0usize, vec![])]);
        let mut basis: Vec<(usize, u64)> = Vec::new();
        while known.len() < sylow.len() {
            // element of largest order modulo the current span
            let mut best: Option<(u64, usize)> = None;
            for &y in &sylow {
                let mut k = 1u64;
                let mut z = y;
                while !known.contains_key(&z) {
                    z = g.mul(z, y);
                    k += 1;
                }
                if best.is_none_or(|(bk, _)| k > bk) {
                    best = Some((k, y));
                }
            }
            let (q, y) = best.unwrap();
            let z = g.pow(y, q);
            let coords = known[&z].clone();
            let mut y2 = y;
            for (i, &c) in coords.iter().enumerate() {
                assert!(c % q == 0, "span is not pure");
                let (xi, oi) = basis[i];
                let back = (oi - (c / q) % oi) % oi;
                y2 = g.mul(y2, g.pow(xi, back));
            }
            debug_assert_eq!(g.element_order(y2), q);
            let mut next: HashMap<usize, Vec<u64>> =
                HashMap::with_capacity(known.len() * q as usize);
            for (&x, v) in &known {
                let mut cur = x;
                for e in 0..q {
                    let mut w = v.clone();
                    w.push(e);
                    next.insert(cur, w);
                    cur = g.mul(cur, y2);
                }
            }
            for v in next.values_mut() {
                v.resize(basis.len() + 1, 0);
            }
            known = next;
            basis.push((y2, q));
        }
        basis.sort_by(|a, b| b.1.cmp(&a.1));
        parts.push((p, basis));
    }
    let rank = parts.iter().map(|(_, b)| b.len()).max().unwrap_or(0);
    let mut factors = Vec::with_capacity(rank);
    let mut basis = Vec::with_capacity(rank);
    for i in 0..rank {
        let mut d = 1u64;
        let mut x = 0usize;
        for (_, b) in &parts {
            if let Some(&(e, o)) = b.get(i) {
                d *= o;
                x = g.mul(x, e);
            }
        }
        factors.push(d);
        basis.push(x);
    }
    let mut dlog: Vec<Option<Vec<u64>>> = vec![None; h.order()];
    let mut exps = vec![0u64; rank];
    loop {
        let mut x = 0usize;
        for (i, &e) in exps.iter().enumerate() {
            x = g.mul(x, g.pow(basis[i], e));
        }
        let pos = h.position(x).expect("basis element outside subgroup");
        dlog[pos] = Some(exps.clone());
        // odometer
        let mut i = 0;
        while i < rank {
            exps[i] += 1;
            if exps[i] < factors[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
        if i == rank {
            break;
        }
    }
    let dlog: Vec<Vec<u64>> = dlog
        .into_iter()
        .map(|d| d.expect("basis does not span the subgroup"))
        .collect();
    Ok(AbelianStructure {
        invariant_factors: factors,
        basis,
        dlog,
    })
}

fn is_power_of(mut x: u64, p: u64) -> bool {
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `1 → N → G → Q → 1` with `N` central. The total group is the one passed
/// to [`quotient_by_central`]; it is not stored here.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    pub kernel: Subgroup,
    pub quotient: FiniteGroup,
    /// total element → quotient element
    pub projection: Vec<usize>,
    /// quotient element → smallest member of its coset
    pub section: Vec<usize>,
}

pub fn quotient_by_central(g: &FiniteGroup, n: &Subgroup) -> Result<CentralExtension> {
    for &k in n.elements() {
        if !g.generators().iter().all(|&s| g.commutes(s, k)) {
            return Err(Error::NonCentralSubgroup(k));
        }
    }
    let mut projection = vec![usize::MAX; g.order()];
    let mut section = Vec::new();
    for x in 0..g.order() {
        if projection[x] != usize::MAX {
            continue;
        }
        let q = section.len();
        section.push(x);
        for &k in n.elements() {
            projection[g.mul(x, k)] = q;
        }
    }
    let m = section.len();
    let mut mul = vec![0u32; m * m];
    for a in 0..m {
        for b in 0..m {
            mul[a * m + b] = projection[g.mul(section[a], section[b])] as u32;
        }
    }
    let mut generators = Vec::new();
    for &s in g.generators() {
        let q = projection[s];
        if q != 0 && !generators.contains(&q) {
            generators.push(q);
        }
    }
    let quotient = FiniteGroup::from_trusted_table(m, mul, generators, None);
    Ok(CentralExtension {
        kernel: n.clone(),
        quotient,
        projection,
        section,
    })
}

/// Homomorphism from a subgroup into `Z_m`, stored as exponents aligned with
/// the subgroup's sorted element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub modulus: u64,
    pub values: Vec<u64>,
}

impl Character {
    pub fn new(g: &FiniteGroup, domain: &Subgroup, modulus: u64, values: Vec<u64>) -> Result<Self> {
        if values.len() != domain.order() {
            return Err(Error::DimensionMismatch(format!(
                "character has {} values for a subgroup of order {}",
                values.len(),
                domain.order()
            )));
        }
        let chi = Character {
            modulus,
            values: values.into_iter().map(|v| v % modulus).collect(),
        };
        for (i, &a) in domain.elements().iter().enumerate() {
            for (j, &b) in domain.elements().iter().enumerate() {
                let ab = domain.position(g.mul(a, b)).unwrap();
                if (chi.values[i] + chi.values[j]) % modulus != chi.values[ab] {
                    return Err(Error::NotAHomomorphism(a, b));
                }
            }
        }
        Ok(chi)
    }

    pub fn value(&self, domain: &Subgroup, g: usize) -> Option<u64> {
        domain.position(g).map(|i| self.values[i])
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn brute_assoc(g: &FiniteGroup) -> bool {
        let n = g.order();
        (0..n)
            .all(|a| (0..n).all(|b| (0..n).all(|c| g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)))))
    }

    #[test]
    fn cyclic_table_round_trip() {
        let table: Vec<Vec<usize>> = (0..4)
            .map(|a| (0..4).map(|b| (a + b) % 4).collect())
            .collect();
        let g = FiniteGroup::from_cayley(&table).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.generators().len(), 1);
        assert_eq!(g.table(), table);
    }

    #[test]
    fn identity_is_relocated() {
        // Z_3 with identity stored at index 2
        let table = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = FiniteGroup::from_cayley(&table).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert!(brute_assoc(&g));
    }

    #[test]
    fn s3_from_table() {
        let s3 = symmetric(3);
        let g = FiniteGroup::from_cayley(&s3.table()).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert!(brute_assoc(&g));
    }

    #[test]
    fn corrupted_entry_is_rejected() {
        let mut table = symmetric(3).table();
        // swap two entries in one row keeps rows Latin but breaks columns/associativity
        table[2].swap(3, 4);
        let err = FiniteGroup::from_cayley(&table).unwrap_err();
        assert!(matches!(err, Error::NotAGroup { .. }), "{err:?}");
    }

    #[test]
    fn class_equation_q8_s3() {
        let q8 = quaternion();
        let cl = q8.conjugacy_classes();
        assert_eq!(cl.len(), 5);
        let s3 = symmetric(3);
        let mut sizes: Vec<usize> = s3
            .conjugacy_classes()
            .classes
            .iter()
            .map(|c| c.len())
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        for g in [&q8, &s3] {
            let cl = g.conjugacy_classes();
            for class in &cl.classes {
                assert_eq!(g.centralizer(class[0]).order() * class.len(), g.order());
            }
        }
    }

    #[test]
    fn centralizers_and_center() {
        let s3 = symmetric(3);
        let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        assert_eq!(s3.centralizer(t).order(), 2);
        let q8 = quaternion();
        assert_eq!(q8.center().order(), 2);
        let i = (0..8).find(|&x| q8.element_order(x) == 4).unwrap();
        let z = q8.centralizer(i);
        assert_eq!(z.order(), 4);
        assert_eq!(
            abelian_structure(&q8, &z).unwrap().invariant_factors,
            vec![4]
        );
        let c3 = (0..6).find(|&x| s3.element_order(x) == 3).unwrap();
        assert_eq!(s3.subgroup_generated(&[c3]).order(), 3);
    }

    #[test]
    fn klein_commuting_pairs() {
        let v = abelian(&[2, 2]);
        assert_eq!(v.commuting_pairs().count(), 10);
        let pairs: Vec<_> = v.commuting_pairs().collect();
        let mut sorted = pairs.clone();
        sorted.sort();
        assert_eq!(pairs, sorted);
    }

    #[test]
    fn abelian_invariants() {
        let z6 = cyclic(6);
        assert_eq!(
            abelian_structure(&z6, &z6.whole())
                .unwrap()
                .invariant_factors,
            vec![6]
        );
        let z24 = abelian(&[2, 4]);
        let s = abelian_structure(&z24, &z24.whole()).unwrap();
        assert_eq!(s.invariant_factors, vec![4, 2]);
        let d4 = dihedral(4);
        let klein = (0..8)
            .flat_map(|a| (0..8).map(move |b| (a, b)))
            .map(|(a, b)| d4.subgroup_generated(&[a, b]))
            .find(|h| h.order() == 4 && h.elements().iter().all(|&x| d4.element_order(x) <= 2))
            .unwrap();
        assert_eq!(
            abelian_structure(&d4, &klein).unwrap().invariant_factors,
            vec![2, 2]
        );
        assert!(matches!(
            abelian_structure(&d4, &d4.whole()),
            Err(Error::NotAbelian(..))
        ));
    }

    #[test]
    fn dlog_is_additive() {
        let g = abelian(&[2, 4, 3]);
        let h = g.whole();
        let s = abelian_structure(&g, &h).unwrap();
        assert_eq!(s.invariant_factors, vec![12, 2]);
        for x in 0..g.order() {
            for y in 0..g.order() {
                let xy = g.mul(x, y);
                for i in 0..s.rank() {
                    let d = s.invariant_factors[i];
                    assert_eq!((s.dlog[x][i] + s.dlog[y][i]) % d, s.dlog[xy][i]);
                }
            }
        }
    }

    #[test]
    fn central_quotients() {
        let z4 = cyclic(4);
        let n = z4.subgroup_generated(&[2]);
        let e = quotient_by_central(&z4, &n).unwrap();
        assert_eq!(e.quotient.order(), 2);
        let q8 = quaternion();
        let e = quotient_by_central(&q8, &q8.center()).unwrap();
        let q = &e.quotient;
        assert_eq!(
            abelian_structure(q, &q.whole()).unwrap().invariant_factors,
            vec![2, 2]
        );
        for x in 0..q.order() {
            assert_eq!(e.projection[e.section[x]], x);
        }
        let s3 = symmetric(3);
        let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let n = s3.subgroup_generated(&[t]);
        assert!(matches!(
            quotient_by_central(&s3, &n),
            Err(Error::NonCentralSubgroup(_))
        ));
    }

    #[test]
    fn character_homomorphism_check() {
        let z4 = cyclic(4);
        let h = z4.whole();
        assert!(Character::new(&z4, &h, 4, vec![0, 1, 2, 3]).is_ok());
        assert!(Character::new(&z4, &h, 4, vec![0, 1, 1, 3]).is_err());
    }

    #[test]
    fn spanning_tree_parents_precede() {
        let g = dihedral(5);
        let tree = g.spanning_tree();
        for (k, &s) in g.generators().iter().enumerate() {
            assert_eq!(tree[s], Some((0, k)));
        }
        assert!(tree.iter().skip(1).all(|p| p.is_some()));
    }
}
