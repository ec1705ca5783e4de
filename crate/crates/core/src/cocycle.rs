//! Normalized 2-cocycles with root-of-unity values.
//!
//! A [`Cocycle2`] with modulus `m` stores exponents: the entry `k` at
//! `(g, h)` stands for `ζ_m^k ∈ ℂ*`. Since `H²(G, ℂ*)` is torsion for a
//! finite group, every class has such a representative. Two notions of
//! "coboundary" are kept apart: with witnesses valued in `μ_m` only
//! ([`CoboundarySense::ModM`]) or anywhere in `ℂ*` ([`CoboundarySense::Torus`]).
//! For the latter the table is lifted to `μ_{m·e}`, `e` the exponent of `G`:
//! if `c = dλ` then `λ^m` is a character, so `λ` takes values in `μ_{m·e}`.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::grp::{
    abelian_structure, named, AbelianStructure, CentralExtension, Character, FiniteGroup, Subgroup,
};
use crate::zmod::{quotient_structure, ZmMatrix};

/// Groups up to this order get an exhaustive `|G|³` cocycle check; larger
/// groups are checked on triples whose last entry is a generator, which is
/// equivalent.
const EXHAUSTIVE_COCYCLE_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cocycle2 {
    order: usize,
    modulus: u64,
    table: Vec<u64>,
}

impl Cocycle2 {
    pub fn new(modulus: u64, table: Vec<Vec<u64>>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::malformed("/modulus", "modulus must be positive"));
        }
        let n = table.len();
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::malformed(
                    format!("/table/{i}"),
                    format!("expected {n} entries"),
                ));
            }
            for (j, v) in row.into_iter().enumerate() {
                if v >= modulus {
                    return Err(Error::malformed(
                        format!("/table/{i}/{j}"),
                        format!("exponent {v} outside [0, {modulus})"),
                    ));
                }
                flat.push(v);
            }
        }
        Ok(Cocycle2 {
            order: n,
            modulus,
            table: flat,
        })
    }

    pub(crate) fn from_flat(order: usize, modulus: u64, table: Vec<u64>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        Cocycle2 {
            order,
            modulus,
            table,
        }
    }

    pub fn zero(order: usize, modulus: u64) -> Self {
        Cocycle2 {
            order,
            modulus,
            table: vec![0; order * order],
        }
    }

    pub fn from_fn(order: usize, modulus: u64, f: impl Fn(usize, usize) -> u64) -> Self {
        let mut table = Vec::with_capacity(order * order);
        for g in 0..order {
            for h in 0..order {
                table.push(f(g, h) % modulus);
            }
        }
        Cocycle2 {
            order,
            modulus,
            table,
        }
    }

    #[inline]
    pub fn get(&self, g: usize, h: usize) -> u64 {
        self.table[g * self.order + h]
    }

    pub fn set(&mut self, g: usize, h: usize, v: u64) {
        self.table[g * self.order + h] = v % self.modulus;
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.table
            .chunks(self.order.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    /// First `(g, h)` with `g = 1` or `h = 1` and a nonzero entry.
    pub fn normalization_failure(&self) -> Option<(usize, usize)> {
        (0..self.order)
            .find(|&g| self.get(0, g) != 0)
            .map(|g| (0, g))
            .or_else(|| {
                (0..self.order)
                    .find(|&g| self.get(g, 0) != 0)
                    .map(|g| (g, 0))
            })
    }

    /// Same class written over `μ_target`, `modulus | target`.
    pub fn lift(&self, target: u64) -> Result<Self> {
        if !target.is_multiple_of(self.modulus) {
            return Err(Error::ModulusMismatch(self.modulus, target));
        }
        let f = target / self.modulus;
        Ok(Cocycle2 {
            order: self.order,
            modulus: target,
            table: self.table.iter().map(|&v| v * f).collect(),
        })
    }

    /// Pointwise product of the two cocycles, over the lcm of the moduli.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::DimensionMismatch(
                "cocycles on groups of different order".into(),
            ));
        }
        let m = num_integer::lcm(self.modulus, other.modulus);
        let (a, b) = (self.lift(m)?, other.lift(m)?);
        Ok(Cocycle2 {
            order: self.order,
            modulus: m,
            table: a
                .table
                .iter()
                .zip(&b.table)
                .map(|(x, y)| (x + y) % m)
                .collect(),
        })
    }

    pub fn scale(&self, k: u64) -> Self {
        Cocycle2 {
            order: self.order,
            modulus: self.modulus,
            table: self
                .table
                .iter()
                .map(|&v| (v * (k % self.modulus)) % self.modulus)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(self.modulus - 1)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|g| (g..self.order).all(|h| self.get(g, h) == self.get(h, g)))
    }
}

/// A normalized 1-cochain `G → Z_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain1 {
    pub modulus: u64,
    pub values: Vec<u64>,
}

impl Cochain1 {
    pub fn new(modulus: u64, values: Vec<u64>) -> Result<Self> {
        if values.first().copied().unwrap_or(0) % modulus != 0 {
            return Err(Error::NotNormalized(0, 0));
        }
        Ok(Cochain1 {
            modulus,
            values: values.into_iter().map(|v| v % modulus).collect(),
        })
    }
}

/// First triple `(g, h, k)` where `c(g,h) + c(gh,k) = c(h,k) + c(g,hk)` fails.
///
/// Above [`EXHAUSTIVE_COCYCLE_LIMIT`] only `k` ranging over the generators
/// is tested; together with normalization this forces the identity on all
/// triples by induction on the word length of `k`.
pub fn cocycle_failure(g: &FiniteGroup, c: &Cocycle2) -> Result<Option<(usize, usize, usize)>> {
    check_order(g, c)?;
    if let Some((a, b)) = c.normalization_failure() {
        return Err(Error::NotNormalized(a, b));
    }
    let n = g.order();
    let m = c.modulus;
    let holds = |a: usize, b: usize, k: usize| {
        let ab = g.mul(a, b);
        (c.get(a, b) + c.get(ab, k)) % m == (c.get(b, k) + c.get(a, g.mul(b, k))) % m
    };
    let third: Vec<usize> = if n <= EXHAUSTIVE_COCYCLE_LIMIT {
        (0..n).collect()
    } else {
        g.generators().to_vec()
    };
    for a in 0..n {
        for b in 0..n {
            for &k in &third {
                if !holds(a, b, k) {
                    return Ok(Some((a, b, k)));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_cocycle(g: &FiniteGroup, c: &Cocycle2) -> Result<bool> {
    Ok(cocycle_failure(g, c)?.is_none())
}

pub(crate) fn require_cocycle(g: &FiniteGroup, c: &Cocycle2) -> Result<()> {
    match cocycle_failure(g, c)? {
        None => Ok(()),
        Some((a, b, k)) => Err(Error::NotACocycle(a, b, k)),
    }
}

fn check_order(g: &FiniteGroup, c: &Cocycle2) -> Result<()> {
    if c.order != g.order() {
        return Err(Error::DimensionMismatch(format!(
            "cocycle on {} elements for a group of order {}",
            c.order,
            g.order()
        )));
    }
    Ok(())
}

/// `dλ(g, h) = λ(g) + λ(h) − λ(gh)`.
pub fn coboundary_of(g: &FiniteGroup, lambda: &Cochain1) -> Cocycle2 {
    let m = lambda.modulus;
    let v = &lambda.values;
    Cocycle2::from_fn(g.order(), m, |a, b| (v[a] + v[b] + m - v[g.mul(a, b)]) % m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoboundarySense {
    /// witnesses valued in `μ_m`
    ModM,
    /// witnesses valued anywhere in `ℂ*`
    Torus,
}

/// Modulus in which a torus-sense witness is sought.
pub fn torus_modulus(g: &FiniteGroup, c: &Cocycle2) -> u64 {
    c.modulus * g.exponent()
}

/// Affine form `coeffs·u + constant` over `Z_M`, in the unknowns attached
/// to the generators.
#[derive(Clone)]
struct Affine {
    coeffs: Vec<u64>,
    constant: u64,
}

/// Expresses a normalized 1-cochain through its values on the generators,
/// walking the spanning tree with `λ(p·s) = λ(p) + λ(s) − c(p, s)`.
fn tree_expressions(g: &FiniteGroup, c: Option<&Cocycle2>, m: u64) -> Vec<Affine> {
    let r = g.generators().len();
    let tree = g.spanning_tree();
    let mut expr = vec![
        Affine {
            coeffs: vec![0; r],
            constant: 0
        };
        g.order()
    ];
    for x in g.bfs_order().into_iter().skip(1) {
        let (p, k) = tree[x].unwrap();
        let mut e = expr[p].clone();
        e.coeffs[k] = (e.coeffs[k] + 1) % m;
        if let Some(c) = c {
            e.constant = (e.constant + m - c.get(p, g.generators()[k]) % m) % m;
        }
        expr[x] = e;
    }
    expr
}

/// Decides whether `c` is a coboundary, returning a witness `λ` with
/// `dλ = c` (over the lifted modulus in the torus sense).
///
/// Unknowns are the values of `λ` on the generators; the remaining values
/// follow along a spanning tree and the identities `dλ(g, s) = c(g, s)`
/// off the tree form the linear system, solved through Howell form. The
/// identities with `s` a generator suffice since `c − dλ` is a cocycle.
pub fn is_coboundary(
    g: &FiniteGroup,
    c: &Cocycle2,
    sense: CoboundarySense,
) -> Result<Option<Cochain1>> {
    require_cocycle(g, c)?;
    let target = match sense {
        CoboundarySense::ModM => c.modulus,
        CoboundarySense::Torus => torus_modulus(g, c),
    };
    let lifted = c.lift(target)?;
    let m = target;
    let gens = g.generators();
    let r = gens.len();
    let expr = tree_expressions(g, Some(&lifted), m);
    let tree = g.spanning_tree();
    let mut seen: HashSet<(Vec<u64>, u64)> = HashSet::new();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for x in 0..g.order() {
        for (k, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            if tree[y] == Some((x, k)) {
                continue;
            }
            let mut row = expr[x].coeffs.clone();
            row[k] = (row[k] + 1) % m;
            for (a, b) in row.iter_mut().zip(&expr[y].coeffs) {
                *a = (*a + m - b) % m;
            }
            let b = (lifted.get(x, s) + m - expr[x].constant + expr[y].constant) % m;
            if seen.insert((row.clone(), b)) {
                rows.push(row);
                rhs.push(b);
            }
        }
    }
    let lambda_gens = if rows.is_empty() {
        vec![0; r]
    } else {
        match ZmMatrix::new(m, r, rows)?.solve(&rhs)? {
            Some(sol) => sol.particular,
            None => return Ok(None),
        }
    };
    let values: Vec<u64> = expr
        .iter()
        .map(|e| {
            e.coeffs
                .iter()
                .zip(&lambda_gens)
                .fold(e.constant, |acc, (a, b)| (acc + a * b) % m)
        })
        .collect();
    let witness = Cochain1 { modulus: m, values };
    if coboundary_of(g, &witness) != lifted {
        return Err(Error::Disagreement(
            "coboundary witness does not reproduce the cocycle".into(),
        ));
    }
    Ok(Some(witness))
}

/// `c(g, h) = c(h, g)` for all `g, h ∈ A`.
pub fn symmetric_on(c: &Cocycle2, a: &Subgroup) -> bool {
    let el = a.elements();
    el.iter()
        .enumerate()
        .all(|(i, &x)| el[i..].iter().all(|&y| c.get(x, y) == c.get(y, x)))
}

/// Triviality of `c` restricted to a bicyclic subgroup, by the symmetry
/// criterion.
pub fn bicyclic_triviality(g: &FiniteGroup, c: &Cocycle2, a: &Subgroup) -> Result<bool> {
    let s = abelian_structure(g, a)?;
    if !s.is_bicyclic() {
        return Err(Error::NotBicyclic(s.rank()));
    }
    Ok(symmetric_on(c, a))
}

/// Restriction to `H`, indexed like [`Subgroup::to_group`].
pub fn restrict(c: &Cocycle2, h: &Subgroup) -> Cocycle2 {
    let el = h.elements();
    Cocycle2::from_fn(el.len(), c.modulus, |i, j| c.get(el[i], el[j]))
}

/// Pullback along `π: G → Q` given as an element map.
pub fn inflate(c: &Cocycle2, q: &FiniteGroup, g: &FiniteGroup, pi: &[usize]) -> Result<Cocycle2> {
    check_order(q, c)?;
    g.check_homomorphism(q, pi)?;
    Ok(Cocycle2::from_fn(g.order(), c.modulus, |a, b| {
        c.get(pi[a], pi[b])
    }))
}

/// `α(q₁, q₂) = ψ(s(q₁) s(q₂) s(q₁q₂)⁻¹)` for the extension's section `s`.
pub fn from_central_extension(
    total: &FiniteGroup,
    e: &CentralExtension,
    psi: &Character,
) -> Result<Cocycle2> {
    from_extension_with_section(total, e, &e.section, psi)
}

/// As [`from_central_extension`] with an explicit section (which must send
/// the identity to the identity).
pub fn from_extension_with_section(
    total: &FiniteGroup,
    e: &CentralExtension,
    section: &[usize],
    psi: &Character,
) -> Result<Cocycle2> {
    let q = &e.quotient;
    if section.len() != q.order() || section[0] != 0 {
        return Err(Error::DimensionMismatch(
            "section must fix the identity".into(),
        ));
    }
    let m = psi.modulus;
    let mut table = vec![0u64; q.order() * q.order()];
    for a in 0..q.order() {
        for b in 0..q.order() {
            let ab = q.mul(a, b);
            let defect = total.mul(total.mul(section[a], section[b]), total.inv(section[ab]));
            let v = psi
                .value(&e.kernel, defect)
                .ok_or(Error::DefectOutsideKernel(a, b))?;
            table[a * q.order() + b] = v;
        }
    }
    Ok(Cocycle2::from_flat(q.order(), m, table))
}

/// `x ↦ dlog(x)ᵀ B dlog(y)` on an abelian group.
#[derive(Clone, Debug)]
pub struct BilinearForm {
    pub structure: AbelianStructure,
    pub modulus: u64,
    pub matrix: Vec<Vec<u64>>,
}

impl BilinearForm {
    /// `structure` must describe the whole group (`dlog` indexed by element).
    pub fn new(structure: AbelianStructure, modulus: u64, matrix: Vec<Vec<u64>>) -> Result<Self> {
        let k = structure.rank();
        if matrix.len() != k || matrix.iter().any(|r| r.len() != k) {
            return Err(Error::IllDefinedForm(format!("matrix must be {k}x{k}")));
        }
        let d = &structure.invariant_factors;
        for i in 0..k {
            for j in 0..k {
                let b = matrix[i][j] % modulus;
                if !(b * d[i]).is_multiple_of(modulus) || !(b * d[j]).is_multiple_of(modulus) {
                    return Err(Error::IllDefinedForm(format!(
                        "entry ({i},{j}) = {b} is not killed by the factors {} and {} mod {modulus}",
                        d[i], d[j]
                    )));
                }
            }
        }
        Ok(BilinearForm {
            structure,
            modulus,
            matrix: matrix
                .iter()
                .map(|r| r.iter().map(|&b| b % modulus).collect())
                .collect(),
        })
    }

    pub fn value(&self, x: usize, y: usize) -> u64 {
        let dx = &self.structure.dlog[x];
        let dy = &self.structure.dlog[y];
        let mut acc = 0u64;
        for (i, &a) in dx.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in dy.iter().enumerate() {
                acc = (acc + a * self.matrix[i][j] % self.modulus * b) % self.modulus;
            }
        }
        acc
    }
}

pub fn from_bilinear_form(form: &BilinearForm) -> Cocycle2 {
    Cocycle2::from_fn(form.structure.dlog.len(), form.modulus, |x, y| {
        form.value(x, y)
    })
}

/// `β(g, h) = c(g, h) − c(h, g)` for commuting `g, h`.
pub fn antisym(g: &FiniteGroup, c: &Cocycle2, a: usize, b: usize) -> Result<u64> {
    if !g.commutes(a, b) {
        return Err(Error::NonCommutingPair(a, b));
    }
    Ok(beta(c, a, b))
}

#[inline]
pub(crate) fn beta(c: &Cocycle2, a: usize, b: usize) -> u64 {
    (c.get(a, b) + c.modulus - c.get(b, a)) % c.modulus
}

/// Invariant factors of a Schur multiplier with one representative cocycle
/// per factor.
#[derive(Clone, Debug)]
pub struct SchurMultiplier {
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<Cocycle2>,
}

impl SchurMultiplier {
    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

/// `H²(Z_{d₁} × Z_{d₂}, ℂ*) ≅ Z_gcd(d₁,d₂)`, generated by the pairing
/// `x₁y₂` over `μ_gcd`. The group is returned alongside, with the first
/// factor as the first coordinate.
pub fn schur_bicyclic(d1: u64, d2: u64) -> Result<(FiniteGroup, SchurMultiplier)> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::Infeasible { order: 0, cap: 0 });
    }
    let g = named::abelian(&[d1, d2]);
    let gcd = num_integer::gcd(d1, d2);
    if gcd == 1 {
        return Ok((
            g,
            SchurMultiplier {
                invariant_factors: vec![],
                generators: vec![],
            },
        ));
    }
    let c = Cocycle2::from_fn(g.order(), gcd, |x, y| {
        let x1 = x as u64 % d1;
        let y2 = y as u64 / d1;
        (x1 * y2) % gcd
    });
    Ok((
        g,
        SchurMultiplier {
            invariant_factors: vec![gcd],
            generators: vec![c],
        },
    ))
}

/// Default order cap for [`h2_small`].
pub const H2_DEFAULT_CAP: usize = 32;

/// Generators of `Hom(G, Z_m)`.
pub fn characters(g: &FiniteGroup, m: u64) -> Result<Vec<Cochain1>> {
    let r = g.generators().len();
    if r == 0 {
        return Ok(vec![]);
    }
    let expr = tree_expressions(g, None, m);
    let tree = g.spanning_tree();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut seen = HashSet::new();
    for x in 0..g.order() {
        for (k, &s) in g.generators().iter().enumerate() {
            let y = g.mul(x, s);
            if tree[y] == Some((x, k)) {
                continue;
            }
            let mut row = expr[x].coeffs.clone();
            row[k] = (row[k] + 1) % m;
            for (a, b) in row.iter_mut().zip(&expr[y].coeffs) {
                *a = (*a + m - b) % m;
            }
            if seen.insert(row.clone()) {
                rows.push(row);
            }
        }
    }
    let ker = ZmMatrix::new(m, r, rows)?.kernel();
    Ok(ker
        .rows()
        .iter()
        .map(|v| Cochain1 {
            modulus: m,
            values: expr
                .iter()
                .map(|e| {
                    e.coeffs
                        .iter()
                        .zip(v)
                        .fold(0, |acc, (a, b)| (acc + a * b) % m)
                })
                .collect(),
        })
        .collect())
}

/// `H²(G, ℂ*)` by brute force over `μ_{|G|}`.
///
/// Cocycles are parametrized by their values `u(g, k) = c(g, sₖ)` on
/// generators; the full table follows along a spanning tree and the
/// remaining cocycle identities become linear equations over `Z_m`. The
/// solution module is divided by coboundaries and by the classes `δχ`
/// coming from characters `χ: G → Z_m`, which are exactly the cocycles over
/// `μ_m` that become trivial in `ℂ*`.
pub fn h2_small(g: &FiniteGroup, cap: usize) -> Result<SchurMultiplier> {
    let n = g.order();
    if n > cap {
        return Err(Error::Infeasible { order: n, cap });
    }
    let m = n as u64;
    let gens = g.generators();
    let r = gens.len();
    if n == 1 || r == 0 {
        return Ok(SchurMultiplier {
            invariant_factors: vec![],
            generators: vec![],
        });
    }
    let unknowns = n * r;
    let uidx = |x: usize, k: usize| x * r + k;
    let tree = g.spanning_tree();
    let order = g.bfs_order();
    // expr[a][b]: c(a, b) as a linear form in u
    let mut expr: Vec<Vec<Vec<u64>>> = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        expr[a][0] = vec![0; unknowns];
        for &b in order.iter().skip(1) {
            let (p, k) = tree[b].unwrap();
            let mut v = expr[a][p].clone();
            let ap = g.mul(a, p);
            v[uidx(ap, k)] = (v[uidx(ap, k)] + 1) % m;
            v[uidx(p, k)] = (v[uidx(p, k)] + m - 1) % m;
            expr[a][b] = v;
        }
    }
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut seen = HashSet::new();
    for k in 0..r {
        let mut row = vec![0u64; unknowns];
        row[uidx(0, k)] = 1;
        rows.push(row);
    }
    for a in 0..n {
        for h in 0..n {
            for (k, &s) in gens.iter().enumerate() {
                let hs = g.mul(h, s);
                if tree[hs] == Some((h, k)) {
                    continue;
                }
                let ah = g.mul(a, h);
                let mut row = expr[a][h].clone();
                row[uidx(ah, k)] = (row[uidx(ah, k)] + 1) % m;
                row[uidx(h, k)] = (row[uidx(h, k)] + m - 1) % m;
                for (x, y) in row.iter_mut().zip(&expr[a][hs]) {
                    *x = (*x + m - y) % m;
                }
                if row.iter().any(|&x| x != 0) && seen.insert(row.clone()) {
                    rows.push(row);
                }
            }
        }
    }
    let cocycles = ZmMatrix::new(m, unknowns, rows)?.kernel();
    let restrict_u = |c: &Cocycle2| -> Vec<u64> {
        let mut v = vec![0u64; unknowns];
        for x in 0..n {
            for (k, &s) in gens.iter().enumerate() {
                v[uidx(x, k)] = c.get(x, s);
            }
        }
        v
    };
    let mut trivial: Vec<Vec<u64>> = Vec::new();
    for x in 1..n {
        let mut lam = vec![0u64; n];
        lam[x] = 1;
        trivial.push(restrict_u(&coboundary_of(
            g,
            &Cochain1 {
                modulus: m,
                values: lam,
            },
        )));
    }
    for chi in characters(g, m)? {
        let v = &chi.values;
        let bock = Cocycle2::from_fn(n, m, |a, b| (v[a] + v[b] - v[g.mul(a, b)]) / m);
        trivial.push(restrict_u(&bock));
    }
    let parts = quotient_structure(cocycles.rows(), &trivial, unknowns, m)?;
    let mut factors = Vec::new();
    let mut generators = Vec::new();
    for (d, u) in parts {
        factors.push(d);
        let table: Vec<u64> = (0..n)
            .flat_map(|a| {
                let e = &expr[a];
                let u = &u;
                (0..n).map(move |b| {
                    e[b].iter()
                        .zip(u)
                        .fold(0u64, |acc, (x, y)| (acc + x * y) % m)
                })
            })
            .collect();
        generators.push(Cocycle2::from_flat(n, m, table));
    }
    Ok(SchurMultiplier {
        invariant_factors: factors,
        generators,
    })
}

/// A finite left `G`-set, `action[g][x] = g·x`.
#[derive(Clone, Debug)]
pub struct GSet {
    points: usize,
    action: Vec<Vec<usize>>,
}

impl GSet {
    pub fn new(g: &FiniteGroup, action: Vec<Vec<usize>>) -> Result<Self> {
        if action.len() != g.order() {
            return Err(Error::ActionInvalid(format!(
                "{} permutations for a group of order {}",
                action.len(),
                g.order()
            )));
        }
        let points = action.first().map_or(0, |p| p.len());
        for (i, perm) in action.iter().enumerate() {
            let mut hit = vec![false; points];
            if perm.len() != points {
                return Err(Error::ActionInvalid(format!(
                    "permutation {i} has the wrong length"
                )));
            }
            for &x in perm {
                if x >= points || std::mem::replace(&mut hit[x], true) {
                    return Err(Error::ActionInvalid(format!(
                        "entry {i} is not a permutation"
                    )));
                }
            }
        }
        if action[0].iter().enumerate().any(|(i, &x)| i != x) {
            return Err(Error::ActionInvalid("identity acts nontrivially".into()));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                let ab = g.mul(a, b);
                if (0..points).any(|x| action[ab][x] != action[a][action[b][x]]) {
                    return Err(Error::ActionInvalid(format!(
                        "(g{a}·g{b})·x ≠ g{a}·(g{b}·x)"
                    )));
                }
            }
        }
        Ok(GSet { points, action })
    }

    pub fn point(g: &FiniteGroup) -> Self {
        GSet {
            points: 1,
            action: vec![vec![0]; g.order()],
        }
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }
}

/// Element `Σ r_g · g` of the twisted group algebra `R^c[G]`, where `R` is
/// the algebra of `Q(ζ)`-valued functions on a finite `G`-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedAlgebraElement {
    pub terms: BTreeMap<usize, Vec<CycloNumber>>,
}

impl TwistedAlgebraElement {
    pub fn zero() -> Self {
        TwistedAlgebraElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(g: usize, r: Vec<CycloNumber>) -> Self {
        let mut t = Self::zero();
        if r.iter().any(|x| !x.is_zero()) {
            t.terms.insert(g, r);
        }
        t
    }

    /// `1 · e`.
    pub fn unit(set: &GSet, order: u32) -> Self {
        Self::monomial(0, vec![CycloNumber::one(order); set.points()])
    }

    pub fn add_term(&mut self, g: usize, r: Vec<CycloNumber>) {
        let entry = self.terms.entry(g);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(r);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                for (a, b) in o.get_mut().iter_mut().zip(&r) {
                    *a = &*a + b;
                }
            }
        }
        if self
            .terms
            .get(&g)
            .is_some_and(|v| v.iter().all(|x| x.is_zero()))
        {
            self.terms.remove(&g);
        }
    }
}

/// `(r₁·g₁) * (r₂·g₂) = c(g₁, g₂) · (r₁ · g₁(r₂)) · g₁g₂`, with
/// `g(r)(x) = r(g⁻¹x)`, extended bilinearly.
pub fn twisted_product(
    g: &FiniteGroup,
    c: &Cocycle2,
    set: &GSet,
    u: &TwistedAlgebraElement,
    v: &TwistedAlgebraElement,
) -> TwistedAlgebraElement {
    let order = c.modulus as u32;
    let mut out = TwistedAlgebraElement::zero();
    for (&g1, r1) in &u.terms {
        let g1inv = g.inv(g1);
        for (&g2, r2) in &v.terms {
            let scalar = CycloNumber::zeta_pow(order, c.get(g1, g2) as i64);
            let coeff: Vec<CycloNumber> = (0..set.points())
                .map(|x| &(&r1[x] * &r2[set.act(g1inv, x)]) * &scalar)
                .collect();
            out.add_term(g.mul(g1, g2), coeff);
        }
    }
    out
}

/// Compares `(uv)w` with `u(vw)` on `trials` seeded pseudo-random triples of
/// full-support elements with small integer coefficient functions.
pub fn twisted_assoc_check(
    g: &FiniteGroup,
    c: &Cocycle2,
    set: &GSet,
    trials: usize,
) -> Result<bool> {
    check_order(g, c)?;
    if let Some((a, b)) = c.normalization_failure() {
        return Err(Error::NotNormalized(a, b));
    }
    let order = c.modulus as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7b6b_2c0c);
    let random_element = |rng: &mut ChaCha8Rng| {
        let mut e = TwistedAlgebraElement::zero();
        for x in 0..g.order() {
            let r: Vec<CycloNumber> = (0..set.points())
                .map(|_| CycloNumber::from_int(order, rng.gen_range(-3..=3)))
                .collect();
            e.add_term(x, r);
        }
        e
    };
    for _ in 0..trials {
        let u = random_element(&mut rng);
        let v = random_element(&mut rng);
        let w = random_element(&mut rng);
        let left = twisted_product(g, c, set, &twisted_product(g, c, set, &u, &v), &w);
        let right = twisted_product(g, c, set, &u, &twisted_product(g, c, set, &v, &w));
        if left != right {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::named::{abelian, cyclic, quaternion};
    use crate::grp::quotient_by_central;

    /// Every normalized table over `Z_2 × Z_2` with values in `Z_2`.
    fn all_normalized_tables() -> Vec<Cocycle2> {
        let cells: Vec<(usize, usize)> = (1..4).flat_map(|a| (1..4).map(move |b| (a, b))).collect();
        (0u32..1 << cells.len())
            .map(|mask| {
                let mut c = Cocycle2::zero(4, 2);
                for (i, &(a, b)) in cells.iter().enumerate() {
                    c.set(a, b, u64::from(mask >> i & 1));
                }
                c
            })
            .collect()
    }

    #[test]
    fn coboundaries_are_cocycles() {
        for g in [
            cyclic(4),
            abelian(&[2, 2]),
            quaternion(),
            crate::grp::named::symmetric(3),
        ] {
            let n = g.order();
            // exhaustive over λ: G → Z_2 normalized
            for mask in 0u32..1 << (n - 1) {
                let mut values = vec![0u64];
                values.extend((0..n - 1).map(|i| u64::from(mask >> i & 1)));
                let c = coboundary_of(&g, &Cochain1::new(2, values).unwrap());
                assert!(is_cocycle(&g, &c).unwrap());
            }
        }
    }

    #[test]
    fn heisenberg_cocycle() {
        let p = 3;
        let g = abelian(&[p, p]);
        let c = Cocycle2::from_fn(9, p, |x, y| ((x as u64 / p) * (y as u64 % p)) % p);
        assert!(is_cocycle(&g, &c).unwrap());
        let mut bad = c.clone();
        bad.set(4, 5, (c.get(4, 5) + 1) % p);
        assert!(cocycle_failure(&g, &bad).unwrap().is_some());
    }

    #[test]
    fn coboundary_examples() {
        let z2 = cyclic(2);
        let zero = coboundary_of(&z2, &Cochain1::new(2, vec![0, 0]).unwrap());
        assert_eq!(zero, Cocycle2::zero(2, 2));
        let c = coboundary_of(&z2, &Cochain1::new(2, vec![0, 1]).unwrap());
        assert_eq!(c.get(1, 1), 0);
        let z4 = cyclic(4);
        let c = coboundary_of(&z4, &Cochain1::new(4, vec![0, 1, 2, 3]).unwrap());
        for a in 0..4u64 {
            for b in 0..4u64 {
                assert_eq!(c.get(a as usize, b as usize), (a + b - (a + b) % 4) % 4);
            }
        }
    }

    #[test]
    fn senses_differ_on_z2() {
        let z2 = cyclic(2);
        let mut c = Cocycle2::zero(2, 2);
        c.set(1, 1, 1);
        let w = is_coboundary(&z2, &c, CoboundarySense::Torus)
            .unwrap()
            .unwrap();
        assert_eq!(w.modulus, 4);
        assert_eq!(w.values[1] % 2, 1);
        assert!(is_coboundary(&z2, &c, CoboundarySense::ModM)
            .unwrap()
            .is_none());
        // exhaustive oracle for the mod-2 sense
        for l in 0..2u64 {
            assert_ne!(
                coboundary_of(&z2, &Cochain1::new(2, vec![0, l]).unwrap()),
                c
            );
        }
    }

    #[test]
    fn pairing_on_klein_is_nontrivial() {
        let g = abelian(&[2, 2]);
        let s = abelian_structure(&g, &g.whole()).unwrap();
        let form = BilinearForm::new(s.clone(), 2, vec![vec![0, 1], vec![0, 0]]).unwrap();
        let c = from_bilinear_form(&form);
        assert!(is_cocycle(&g, &c).unwrap());
        assert!(is_coboundary(&g, &c, CoboundarySense::Torus)
            .unwrap()
            .is_none());
        assert!(!bicyclic_triviality(&g, &c, &g.whole()).unwrap());
        let sym = from_bilinear_form(
            &BilinearForm::new(s.clone(), 2, vec![vec![1, 0], vec![0, 0]]).unwrap(),
        );
        assert!(is_coboundary(&g, &sym, CoboundarySense::Torus)
            .unwrap()
            .is_some());
        assert!(bicyclic_triviality(&g, &sym, &g.whole()).unwrap());
        let zero =
            from_bilinear_form(&BilinearForm::new(s, 2, vec![vec![0, 0], vec![0, 0]]).unwrap());
        assert_eq!(zero, Cocycle2::zero(4, 2));
    }

    #[test]
    fn ill_defined_forms_are_rejected() {
        let g = abelian(&[2, 3]);
        let s = abelian_structure(&g, &g.whole()).unwrap();
        assert_eq!(s.invariant_factors, vec![6]);
        assert!(matches!(
            BilinearForm::new(s, 4, vec![vec![1]]),
            Err(Error::IllDefinedForm(_))
        ));
    }

    #[test]
    fn symmetry_criterion_exhaustive_klein() {
        let g = abelian(&[2, 2]);
        let mut n_cocycles = 0;
        for c in all_normalized_tables() {
            if !is_cocycle(&g, &c).unwrap() {
                continue;
            }
            n_cocycles += 1;
            let cob = is_coboundary(&g, &c, CoboundarySense::Torus)
                .unwrap()
                .is_some();
            assert_eq!(cob, c.is_symmetric());
        }
        assert!(n_cocycles > 0);
    }

    #[test]
    fn cyclic_restriction_is_trivial() {
        let g = abelian(&[2, 2]);
        let c = Cocycle2::from_fn(4, 2, |x, y| ((x % 2) * (y / 2)) as u64);
        for x in 0..4 {
            let a = g.subgroup_generated(&[x]);
            assert!(bicyclic_triviality(&g, &c, &a).unwrap());
            let h = a.to_group(&g);
            let r = restrict(&c, &a);
            assert!(is_coboundary(&h, &r, CoboundarySense::Torus)
                .unwrap()
                .is_some());
        }
    }

    #[test]
    fn inflation_examples() {
        let g = abelian(&[2, 2]);
        let c = Cocycle2::from_fn(4, 2, |x, y| ((x % 2) * (y / 2)) as u64);
        let id: Vec<usize> = (0..4).collect();
        assert_eq!(inflate(&c, &g, &g, &id).unwrap(), c);
        let triv = cyclic(1);
        let c1 = Cocycle2::zero(1, 2);
        assert_eq!(
            inflate(&c1, &triv, &g, &[0; 4]).unwrap(),
            Cocycle2::zero(4, 2)
        );
        let bad = vec![0, 1, 1, 1];
        assert!(matches!(
            inflate(&c, &g, &g, &bad),
            Err(Error::NotAHomomorphism(..))
        ));
    }

    #[test]
    fn extension_cocycles() {
        // 1 → Z_2 → Z_4 → Z_2 → 1 with ψ faithful
        let z4 = cyclic(4);
        let n = z4.subgroup_generated(&[2]);
        let e = quotient_by_central(&z4, &n).unwrap();
        let psi = Character::new(&z4, &n, 2, vec![0, 1]).unwrap();
        let c = from_central_extension(&z4, &e, &psi).unwrap();
        assert_eq!(c.get(1, 1), 1);
        let q = &e.quotient;
        assert!(is_coboundary(q, &c, CoboundarySense::Torus)
            .unwrap()
            .is_some());
        let triv = Character::new(&z4, &n, 2, vec![0, 0]).unwrap();
        assert_eq!(
            from_central_extension(&z4, &e, &triv).unwrap(),
            Cocycle2::zero(2, 2)
        );
    }

    #[test]
    fn heisenberg_extension_class() {
        let p = 3u64;
        // Heisenberg group as upper unitriangular (a, b, z)
        let mulh = |x: &(u64, u64, u64), y: &(u64, u64, u64)| {
            (
                (x.0 + y.0) % p,
                (x.1 + y.1) % p,
                (x.2 + y.2 + x.0 * y.1) % p,
            )
        };
        let cl =
            crate::grp::closure((0, 0, 0), &[(1, 0, 0), (0, 1, 0)], mulh, |x| *x, 1000).unwrap();
        let h = cl.group;
        assert_eq!(h.order(), 27);
        let z = h.center();
        let e = quotient_by_central(&h, &z).unwrap();
        let zvals: Vec<u64> = z.elements().iter().map(|&i| cl.elements[i].2).collect();
        let psi = Character::new(&h, &z, p, zvals).unwrap();
        let c = from_central_extension(&h, &e, &psi).unwrap();
        let q = &e.quotient;
        assert!(is_cocycle(q, &c).unwrap());
        assert!(is_coboundary(q, &c, CoboundarySense::Torus)
            .unwrap()
            .is_none());
        let asym = (0..9)
            .flat_map(|a| (0..9).map(move |b| (a, b)))
            .any(|(a, b)| antisym(q, &c, a, b).unwrap() != 0);
        assert!(asym);
        // another section gives a cohomologous cocycle
        let mut section = e.section.clone();
        for (i, s) in section.iter_mut().enumerate().skip(1) {
            let k = z.elements()[i % z.order()];
            *s = h.mul(*s, k);
        }
        let c2 = from_extension_with_section(&h, &e, &section, &psi).unwrap();
        let diff = c.add(&c2.neg()).unwrap();
        assert!(is_coboundary(q, &diff, CoboundarySense::Torus)
            .unwrap()
            .is_some());
    }

    #[test]
    fn antisym_basics() {
        let g = abelian(&[2, 2]);
        let c = Cocycle2::from_fn(4, 2, |x, y| ((x % 2) * (y / 2)) as u64);
        assert_eq!(antisym(&g, &c, 1, 2).unwrap(), 1);
        assert_eq!(antisym(&g, &c, 3, 3).unwrap(), 0);
        let s3 = crate::grp::named::symmetric(3);
        let z = Cocycle2::zero(6, 2);
        let pair = (0..6)
            .flat_map(|a| (0..6).map(move |b| (a, b)))
            .find(|&(a, b)| !s3.commutes(a, b))
            .unwrap();
        assert!(matches!(
            antisym(&s3, &z, pair.0, pair.1),
            Err(Error::NonCommutingPair(..))
        ));
    }

    #[test]
    fn bicyclic_multipliers() {
        for (d1, d2, want) in [(2, 2, vec![2]), (3, 4, vec![]), (4, 6, vec![2])] {
            let (g, s) = schur_bicyclic(d1, d2).unwrap();
            assert_eq!(s.invariant_factors, want);
            for c in &s.generators {
                assert!(is_cocycle(&g, c).unwrap());
                assert!(is_coboundary(&g, c, CoboundarySense::Torus)
                    .unwrap()
                    .is_none());
            }
        }
    }

    #[test]
    fn h2_of_small_groups() {
        assert!(h2_small(&cyclic(6), 32).unwrap().is_trivial());
        let s = h2_small(&abelian(&[2, 4]), 32).unwrap();
        assert_eq!(s.invariant_factors, vec![2]);
        let g = abelian(&[2, 4]);
        for c in &s.generators {
            assert!(is_cocycle(&g, c).unwrap());
            assert!(is_coboundary(&g, c, CoboundarySense::Torus)
                .unwrap()
                .is_none());
        }
        assert!(h2_small(&quaternion(), 32).unwrap().is_trivial());
        assert!(matches!(
            h2_small(&cyclic(40), 32),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn characters_of_klein() {
        let g = abelian(&[2, 2]);
        let chars = characters(&g, 4).unwrap();
        // Hom(Z_2², Z_4) ≅ Z_2²: the generators span 4 distinct maps
        let mut span = std::collections::BTreeSet::new();
        for a in 0..4u64 {
            for b in 0..4u64 {
                let v: Vec<u64> = (0..4)
                    .map(|x| {
                        (a * chars[0].values[x] + b * chars.get(1).map_or(0, |c| c.values[x])) % 4
                    })
                    .collect();
                span.insert(v);
            }
        }
        assert_eq!(span.len(), 4);
    }

    #[test]
    fn twisted_algebra_rules() {
        let z2 = cyclic(2);
        let mut c = Cocycle2::zero(2, 2);
        c.set(1, 1, 1);
        let pt = GSet::point(&z2);
        let g1 = TwistedAlgebraElement::monomial(1, vec![CycloNumber::one(2)]);
        let sq = twisted_product(&z2, &c, &pt, &g1, &g1);
        assert_eq!(
            sq,
            TwistedAlgebraElement::monomial(0, vec![CycloNumber::from_int(2, -1)])
        );
        let one = TwistedAlgebraElement::unit(&pt, 2);
        let r = TwistedAlgebraElement::monomial(1, vec![CycloNumber::from_int(2, 5)]);
        assert_eq!(twisted_product(&z2, &c, &pt, &one, &r), r);
        assert_eq!(twisted_product(&z2, &c, &pt, &r, &one), r);
        assert!(twisted_assoc_check(&z2, &c, &pt, 5).unwrap());
    }

    #[test]
    fn invalid_actions() {
        let z2 = cyclic(2);
        assert!(GSet::new(&z2, vec![vec![1, 0], vec![1, 0]]).is_err());
        assert!(GSet::new(&z2, vec![vec![0, 1], vec![0, 0]]).is_err());
        assert!(GSet::new(&z2, vec![vec![0, 1], vec![1, 0]]).is_ok());
    }
}
