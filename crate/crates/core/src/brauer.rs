//! Obstruction subgroups of `H²(G, ℂ*)` and twisted orbifold sums.
//!
//! Everything here is driven by the antisymmetrization
//! `β(g, h) = c(g, h) − c(h, g)` on commuting pairs, which only depends on
//! the class of `c`, is conjugation invariant and is additive in `c`.
//! Scans therefore run over conjugacy-class representatives `g` and their
//! centralizers.

use std::collections::{BTreeSet, HashSet};

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::cocycle::{
    beta, is_coboundary, require_cocycle, symmetric_on, CoboundarySense, Cocycle2,
};
use crate::cyclo::{CycloNumber, Subspace};
use crate::error::{Error, Result};
use crate::grp::{FiniteGroup, Subgroup};
use crate::rep::{meets_complement, LinearActionModel};
use crate::zmod::{quotient_structure, ZmMatrix};

/// `h ↦ β(g, h)` on the centralizer of `g`.
#[derive(Clone, Debug)]
pub struct LCharacter {
    pub base: usize,
    pub domain: Subgroup,
    pub modulus: u64,
    /// aligned with `domain.elements()`
    pub values: Vec<u64>,
}

impl LCharacter {
    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// First centralizer element with a nonzero value.
    pub fn first_nontrivial(&self) -> Option<usize> {
        self.values
            .iter()
            .position(|&v| v != 0)
            .map(|i| self.domain.elements()[i])
    }
}

fn check_group(g: &FiniteGroup, c: &Cocycle2) -> Result<()> {
    if g.order() != c.order() {
        return Err(Error::DimensionMismatch(format!(
            "cocycle on {} elements for a group of order {}",
            c.order(),
            g.order()
        )));
    }
    require_cocycle(g, c)
}

fn l_character_unchecked(g: &FiniteGroup, c: &Cocycle2, x: usize) -> Result<LCharacter> {
    let domain = g.centralizer(x);
    let values: Vec<u64> = domain.elements().iter().map(|&h| beta(c, x, h)).collect();
    let m = c.modulus();
    for &s in domain.generators() {
        let vs = values[domain.position(s).unwrap()];
        for (i, &h) in domain.elements().iter().enumerate() {
            let hs = domain.position(g.mul(h, s)).unwrap();
            if (values[i] + vs) % m != values[hs] {
                return Err(Error::NotAHomomorphism(h, s));
            }
        }
    }
    Ok(LCharacter {
        base: x,
        domain,
        modulus: m,
        values,
    })
}

/// The character of the centralizer `Z_g` through which it acts on the
/// twisted sector of `g`.
pub fn l_character(g: &FiniteGroup, c: &Cocycle2, x: usize) -> Result<LCharacter> {
    check_group(g, c)?;
    l_character_unchecked(g, c, x)
}

/// Outcome of a membership test; the witness is a commuting pair with
/// `β ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub witness: Option<(usize, usize)>,
}

fn scan_pairs(g: &FiniteGroup, c: &Cocycle2, active: impl Fn(usize) -> bool + Sync) -> Membership {
    let reps = g.conjugacy_classes().representatives();
    let witness = reps
        .par_iter()
        .filter(|&&x| active(x))
        .find_map_first(|&x| {
            (0..g.order())
                .filter(|&h| g.commutes(x, h))
                .find(|&h| beta(c, x, h) != 0)
                .map(|h| (x, h))
        });
    Membership {
        member: witness.is_none(),
        witness,
    }
}

/// `β(g, h) = 0` for every commuting pair: the class restricts trivially to
/// every abelian subgroup.
pub fn in_b0(g: &FiniteGroup, c: &Cocycle2) -> Result<Membership> {
    check_group(g, c)?;
    Ok(scan_pairs(g, c, |_| true))
}

/// `β(g, h) = 0` for every commuting pair with `U^g ≠ ∅`.
pub fn in_bg(model: &LinearActionModel, c: &Cocycle2) -> Result<Membership> {
    let g = model.group();
    check_group(g, c)?;
    Ok(scan_pairs(g, c, |x| model.meets(x)))
}

/// A bicyclic subgroup `A` with a subgroup `K`, `A/K` cyclic, whose fixed
/// space `W = V^K` meets `U`.
#[derive(Clone, Debug)]
pub struct BicyclicWitness {
    pub a: Subgroup,
    pub k: Subgroup,
    pub w: Subspace,
}

#[derive(Clone, Debug)]
pub struct BicyclicVerdict {
    pub member: bool,
    /// for a non-member: an `A` acting cyclically on some `V^K ∩ U` on which
    /// the class does not restrict trivially
    pub witness: Option<BicyclicWitness>,
    pub subgroups_examined: usize,
}

/// All subgroups of an abelian group given by its element list, each as a
/// sorted element list, ordered by size and then lexicographically.
fn subgroups_of_abelian(g: &FiniteGroup, a: &Subgroup) -> Vec<Subgroup> {
    let mut seen: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let el = a.elements();
    for (i, &u) in el.iter().enumerate() {
        for &v in &el[i..] {
            let s = g.subgroup_generated(&[u, v]);
            seen.insert((s.order(), s.elements().to_vec()));
        }
    }
    seen.into_iter()
        .map(|(_, e)| Subgroup::from_closed_set(g, e))
        .collect()
}

fn quotient_is_cyclic(g: &FiniteGroup, a: &Subgroup, k: &Subgroup) -> bool {
    let index = (a.order() / k.order()) as u64;
    a.elements().iter().any(|&x| {
        // order of xK in A/K
        let mut y = x;
        let mut j = 1;
        while !k.contains(y) {
            y = g.mul(y, x);
            j += 1;
        }
        j == index
    })
}

/// Bicyclic-subgroup form of the `B_G(U)` test: the class must restrict
/// trivially to every bicyclic `A` that acts cyclically on a nonempty
/// locus `V^K ∩ U`. Subgroups `A = ⟨g, h⟩` are enumerated with `g` a class
/// representative, which suffices by conjugation invariance.
pub fn in_bg_bicyclic(model: &LinearActionModel, c: &Cocycle2) -> Result<BicyclicVerdict> {
    let g = model.group();
    check_group(g, c)?;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut candidates = Vec::new();
    for x in g.conjugacy_classes().representatives() {
        for h in 0..g.order() {
            if g.commutes(x, h) {
                let a = g.subgroup_generated(&[x, h]);
                if seen.insert(a.elements().to_vec()) {
                    candidates.push(a);
                }
            }
        }
    }
    let examined = candidates.len();
    let found = candidates
        .par_iter()
        .map(|a| -> Result<Option<BicyclicWitness>> {
            if symmetric_on(c, a) {
                return Ok(None);
            }
            for k in subgroups_of_abelian(g, a) {
                if !quotient_is_cyclic(g, a, &k) {
                    continue;
                }
                let w = model.fixed_of_subgroup(&k)?;
                if meets_complement(&w, model.arrangement())? {
                    return Ok(Some(BicyclicWitness { a: a.clone(), k, w }));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    let witness = found.into_iter().flatten().next();
    Ok(BicyclicVerdict {
        member: witness.is_none(),
        witness,
        subgroups_examined: examined,
    })
}

/// Result of [`span_analysis`]. Coefficient vectors refer to the basis
/// order and live in `Z_m`.
#[derive(Clone, Debug, Default)]
pub struct SpanReport {
    pub modulus: u64,
    /// number of distinct `β`-conditions imposed
    pub conditions: usize,
    /// generators of the combinations satisfying every condition
    pub kernel: Vec<Vec<u64>>,
    /// whether each kernel generator is a coboundary in `ℂ*`
    pub kernel_trivial: Vec<bool>,
    /// generators of the combinations that are coboundaries in `ℂ*`
    pub trivial: Vec<Vec<u64>>,
    /// invariant factors of kernel modulo trivial combinations, largest first
    pub invariant_factors: Vec<u64>,
    /// one representative combination per invariant factor
    pub quotient_generators: Vec<Vec<u64>>,
}

/// `Σ xᵢ cᵢ` over the common modulus.
pub fn combine(basis: &[Cocycle2], x: &[u64]) -> Result<Cocycle2> {
    let m = basis[0].modulus();
    let n = basis[0].order();
    let mut out = Cocycle2::zero(n, m);
    for (c, &k) in basis.iter().zip(x) {
        if k % m != 0 {
            out = out.add(&c.scale(k))?;
        }
    }
    Ok(out)
}

/// Which integer combinations of the basis classes satisfy the `B₀`
/// conditions (or the `B_G(U)` conditions when a model is given), and
/// which of those are already trivial.
pub fn span_analysis(
    g: &FiniteGroup,
    basis: &[Cocycle2],
    model: Option<&LinearActionModel>,
) -> Result<SpanReport> {
    let Some(first) = basis.first() else {
        return Ok(SpanReport::default());
    };
    let m = first.modulus();
    for c in basis {
        if c.modulus() != m {
            return Err(Error::ModulusMismatch(m, c.modulus()));
        }
        check_group(g, c)?;
    }
    let k = basis.len();
    let reps = g.conjugacy_classes().representatives();
    let active: Vec<usize> = reps
        .into_iter()
        .filter(|&x| model.is_none_or(|md| md.meets(x)))
        .collect();
    let rows: BTreeSet<Vec<u64>> = active
        .par_iter()
        .flat_map_iter(|&x| {
            (0..g.order())
                .filter(move |&h| g.commutes(x, h))
                .map(move |h| basis.iter().map(|c| beta(c, x, h)).collect::<Vec<u64>>())
                .filter(|r| r.iter().any(|&v| v != 0))
        })
        .collect();
    let conditions = rows.len();
    let kernel = if rows.is_empty() {
        ZmMatrix::new(m, k, vec![])?.kernel()
    } else {
        ZmMatrix::new(m, k, rows.into_iter().collect())?.kernel()
    };
    let kernel: Vec<Vec<u64>> = kernel
        .rows()
        .iter()
        .filter(|r| r.iter().any(|&v| v != 0))
        .cloned()
        .collect();
    let trivial = trivial_combinations(g, basis)?;
    let kernel_trivial = kernel
        .iter()
        .map(|x| Ok(is_coboundary(g, &combine(basis, x)?, CoboundarySense::Torus)?.is_some()))
        .collect::<Result<Vec<bool>>>()?;
    let parts = quotient_structure(&kernel, &trivial, k, m)?;
    for (x, &t) in kernel.iter().zip(&kernel_trivial) {
        let in_span = quotient_structure(std::slice::from_ref(x), &trivial, k, m)?.is_empty();
        if in_span != t {
            return Err(Error::Disagreement(
                "coboundary solver and trivial-combination lattice disagree".into(),
            ));
        }
    }
    Ok(SpanReport {
        modulus: m,
        conditions,
        kernel,
        kernel_trivial,
        trivial,
        invariant_factors: parts.iter().map(|p| p.0).collect(),
        quotient_generators: parts.into_iter().map(|p| p.1).collect(),
    })
}

/// Generators (mod `m`) of the lattice of `x` with `Σ xᵢ cᵢ` a coboundary
/// in `ℂ*`.
///
/// Joint linear system over `Z_M`, `M = m · exp(G)`, in the unknowns
/// `(x, λ(s₁), …, λ(s_r))`: the values of `λ` are propagated along a
/// spanning tree and every non-tree edge `(y, s)` yields the equation
/// `λ(y) + λ(s) − λ(ys) = Σ xᵢ cᵢ(y, s)`.
fn trivial_combinations(g: &FiniteGroup, basis: &[Cocycle2]) -> Result<Vec<Vec<u64>>> {
    let m = basis[0].modulus();
    let big = m * g.exponent();
    let f = big / m;
    let k = basis.len();
    let gens = g.generators();
    let r = gens.len();
    let width = k + r;
    let tree = g.spanning_tree();
    let mut expr = vec![vec![0u64; width]; g.order()];
    for y in g.bfs_order().into_iter().skip(1) {
        let (p, j) = tree[y].unwrap();
        let s = gens[j];
        let mut e = expr[p].clone();
        e[k + j] = (e[k + j] + 1) % big;
        for (i, c) in basis.iter().enumerate() {
            e[i] = (e[i] + big - f * c.get(p, s) % big) % big;
        }
        expr[y] = e;
    }
    let mut rows: BTreeSet<Vec<u64>> = BTreeSet::new();
    for y in 0..g.order() {
        for (j, &s) in gens.iter().enumerate() {
            let ys = g.mul(y, s);
            if tree[ys] == Some((y, j)) {
                continue;
            }
            let mut row = expr[y].clone();
            row[k + j] = (row[k + j] + 1) % big;
            for (a, b) in row.iter_mut().zip(&expr[ys]) {
                *a = (*a + big - b) % big;
            }
            for (i, c) in basis.iter().enumerate() {
                row[i] = (row[i] + big - f * c.get(y, s) % big) % big;
            }
            if row.iter().any(|&v| v != 0) {
                rows.insert(row);
            }
        }
    }
    let ker = ZmMatrix::new(big, width, rows.into_iter().collect())?.kernel();
    let mut out: Vec<Vec<u64>> = ker
        .rows()
        .iter()
        .map(|row| row[..k].iter().map(|v| v % m).collect::<Vec<u64>>())
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Dimension data for the sector of one class: either the default scalar
/// mode, or the trace of `Z_g` on `H(U^g)` as a function on the centralizer.
#[derive(Clone, Debug)]
pub enum SectorData {
    /// `d_g = 1` when `U^g ≠ ∅`, trivial action
    Scalar,
    /// per class representative: values aligned with the sorted centralizer
    Characters(std::collections::BTreeMap<usize, Vec<CycloNumber>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassContribution {
    pub representative: usize,
    pub class_size: usize,
    pub meets_complement: bool,
    pub l_trivial: bool,
    pub supplied_dim: u64,
    pub twisted: u64,
    pub untwisted: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbifoldReport {
    pub classes: Vec<ClassContribution>,
    pub twisted_total: u64,
    pub untwisted_total: u64,
}

impl OrbifoldReport {
    pub fn termwise_equal(&self) -> bool {
        self.classes.iter().all(|c| c.twisted == c.untwisted)
    }
}

/// `(1/|Z_g|) Σ_{h ∈ Z_g} χ(h) ζ_m^{β(g,h)}` as a nonnegative integer.
fn invariant_dimension(class: usize, chi: Option<&[CycloNumber]>, l: &LCharacter) -> Result<u64> {
    let m = l.modulus as u32;
    let order = chi.map_or(m, |v| {
        v.iter().fold(m, |acc, x| num_integer::lcm(acc, x.order()))
    });
    let mut acc = CycloNumber::zero(order);
    for (i, &b) in l.values.iter().enumerate() {
        let z = CycloNumber::zeta_pow(m, b as i64);
        let term = match chi {
            Some(v) => &v[i] * &z,
            None => z,
        };
        acc = &acc + &term;
    }
    let n = CycloNumber::from_int(order, l.domain.order() as i64);
    let value = acc.checked_div(&n)?;
    let bad = || Error::NonIntegralDimension {
        class,
        value: value.to_string(),
    };
    let q = value.as_rational().ok_or_else(bad)?;
    if !q.is_integer() || q.is_negative() {
        return Err(bad());
    }
    q.to_integer().to_u64().ok_or_else(bad)
}

/// Per-class twisted and untwisted sector dimensions
/// `dim (H(U^g) ⊗ L_g)^{Z_g}`; classes with `U^g = ∅` contribute 0.
pub fn orbifold_dims(
    model: &LinearActionModel,
    c: &Cocycle2,
    data: &SectorData,
) -> Result<OrbifoldReport> {
    let g = model.group();
    check_group(g, c)?;
    let zero = Cocycle2::zero(g.order(), c.modulus());
    let classes = g.conjugacy_classes();
    let records = classes
        .classes
        .par_iter()
        .enumerate()
        .map(|(ci, cl)| -> Result<ClassContribution> {
            let x = cl[0];
            let l = l_character_unchecked(g, c, x)?;
            let l0 = l_character_unchecked(g, &zero, x)?;
            let meets = model.meets(x);
            let chi = match data {
                SectorData::Scalar => None,
                SectorData::Characters(map) => {
                    let v = map.get(&x).ok_or_else(|| {
                        Error::malformed(
                            format!("/characters/{x}"),
                            "missing sector data for class",
                        )
                    })?;
                    if v.len() != l.domain.order() {
                        return Err(Error::malformed(
                            format!("/characters/{x}"),
                            format!("expected {} values", l.domain.order()),
                        ));
                    }
                    Some(v.as_slice())
                }
            };
            let supplied = match chi {
                None => 1,
                Some(v) => v[0]
                    .as_rational()
                    .filter(|q| q.is_integer() && !q.is_negative())
                    .and_then(|q| q.to_integer().to_u64())
                    .ok_or_else(|| Error::NonIntegralDimension {
                        class: ci,
                        value: v[0].to_string(),
                    })?,
            };
            let (twisted, untwisted) = if meets {
                (
                    invariant_dimension(ci, chi, &l)?,
                    invariant_dimension(ci, chi, &l0)?,
                )
            } else {
                (0, 0)
            };
            Ok(ClassContribution {
                representative: x,
                class_size: cl.len(),
                meets_complement: meets,
                l_trivial: l.is_trivial(),
                supplied_dim: if meets { supplied } else { 0 },
                twisted,
                untwisted,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let twisted_total = records.iter().map(|r| r.twisted).sum();
    let untwisted_total = records.iter().map(|r| r.untwisted).sum();
    Ok(OrbifoldReport {
        classes: records,
        twisted_total,
        untwisted_total,
    })
}

/// Verdict on equality of twisted and untwisted sector dimensions.
#[derive(Clone, Debug)]
pub struct EqualityVerdict {
    pub in_bg: bool,
    /// every class with `U^g ≠ ∅` has trivial `L_g` on `Z_g`
    pub nonempty_sectors_untwisted: bool,
    pub termwise_equal: bool,
    /// a class with `U^g ≠ ∅` and nontrivial `L_g`, with a centralizer
    /// element where it is nontrivial
    pub witness: Option<(usize, usize)>,
    pub report: OrbifoldReport,
}

/// Checks that a class in `B_G(U)` has untwisted characters on every
/// nonempty sector and hence twisted and untwisted sector sums agree term
/// by term; for a non-member, locates the sector where this fails.
pub fn verify_cor53(model: &LinearActionModel, c: &Cocycle2) -> Result<EqualityVerdict> {
    let g = model.group();
    let membership = in_bg(model, c)?;
    let report = orbifold_dims(model, c, &SectorData::Scalar)?;
    let mut witness = None;
    for r in &report.classes {
        if r.meets_complement && !r.l_trivial {
            let l = l_character_unchecked(g, c, r.representative)?;
            witness = Some((r.representative, l.first_nontrivial().unwrap()));
            break;
        }
    }
    let untwisted = witness.is_none();
    if untwisted != membership.member {
        return Err(Error::Disagreement(
            "pair scan and sector characters disagree on B_G membership".into(),
        ));
    }
    if membership.member && !report.termwise_equal() {
        return Err(Error::Disagreement(
            "untwisted sectors but unequal dimensions".into(),
        ));
    }
    Ok(EqualityVerdict {
        in_bg: membership.member,
        nonempty_sectors_untwisted: untwisted,
        termwise_equal: report.termwise_equal(),
        witness,
        report,
    })
}
