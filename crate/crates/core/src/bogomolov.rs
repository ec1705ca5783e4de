//! The central extension `1 → Z_p³ → G → Z_p⁴ → 1` with commutator relations
//! `[x₁,x₂] = [x₃,x₄] = a`, `[x₁,x₃] = [x₁,x₄] = 1`, `[x₂,x₄] = b`,
//! `[x₂,x₃] = c`, realized on `V = (ℂ^p ⊗ ℂ^p) ⊕ ℂ^p ⊕ ℂ^p`, together with
//! its linear action model and a catalog of classes inflated from `Z_p⁴`.

use std::fmt;

use crate::cocycle::{from_central_extension, inflate, Cocycle2};
use crate::cyclo::{CycloMatrix, CycloNumber, RootOfUnity};
use crate::error::{Error, Result};
use crate::grp::{
    named, quotient_by_central, Character, FiniteGroup, Subgroup, DEFAULT_CLOSURE_BOUND,
};
use crate::rep::{build_model, matrix_closure, LinearActionModel};

/// Largest prime accepted unless the caller opts out of the guard.
pub const DEFAULT_MAX_PRIME: u64 = 3;

/// Choice of the `2 × 2` pair `(P, Q)` when `p = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `P = σ_x`, `Q = σ_z`: real involutions, `[P, Q] = −I`
    Involution,
    /// `P = [[0,1],[−1,0]]`, `Q = [[0,i],[i,0]]`
    Literal,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Involution => "involution",
            Convention::Literal => "literal",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "involution" => Ok(Convention::Involution),
            "literal" => Ok(Convention::Literal),
            other => Err(Error::malformed(
                "/convention",
                format!("unknown convention {other:?}"),
            )),
        }
    }
}

/// Caveat attached to every report about the labels of the two central
/// fixed spaces.
pub const LABEL_CAVEAT: &str = "b scales the second C^p summand and c the third, so the fixed space of b is \
(C^p (x) C^p) + 0 + C^p and that of c is (C^p (x) C^p) + C^p + 0; comparisons use the unordered pair";

/// Named generators of the example group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generators {
    pub x: [usize; 4],
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

/// A class of the catalog, stored as a cocycle on `Z_p⁴` (standard
/// coordinates, see [`named::abelian`]) to be inflated along the
/// abelianization.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: EntryKind,
    pub base: Cocycle2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryKind {
    /// `c(x, y) = xᵢ yⱼ`, `i < j` (zero-based coordinates)
    Form(usize, usize),
    /// extension class of `G/N' → Z_p⁴` for an index-`p` subgroup `N'` of
    /// the center-part `⟨a,b,c⟩` and a faithful character of `N/N'`
    Extension,
}

/// The example group with its representation, model and catalog.
#[derive(Clone, Debug)]
pub struct ExampleBundle {
    pub p: u64,
    pub convention: Option<Convention>,
    /// `[P, Q] = ζ_p^k` for this exponent `k`
    pub commutator_exponent: u64,
    pub model: LinearActionModel,
    pub named: Generators,
    /// element → coordinates in `Z_p⁴` (normal-form exponents of `x₁..x₄`)
    pub abelianization: Vec<[u64; 4]>,
    /// standard `Z_p⁴`, the target of [`Self::abelianization_map`]
    pub quotient: FiniteGroup,
    pub catalog: Vec<CatalogEntry>,
}

fn int(order: u32, v: i64) -> CycloNumber {
    CycloNumber::from_int(order, v)
}

/// The pair `(P, Q)` and the cyclotomic order that hosts it.
pub fn pauli_pair(p: u64, convention: Convention) -> (CycloMatrix, CycloMatrix, u32) {
    if p == 2 {
        let n = 4;
        let m = |v: [[i64; 2]; 2]| CycloMatrix::from_fn(2, 2, n, |i, j| int(n, v[i][j]));
        match convention {
            Convention::Involution => (m([[0, 1], [1, 0]]), m([[1, 0], [0, -1]]), n),
            Convention::Literal => {
                let i = CycloNumber::zeta_pow(n, 1);
                let z = CycloNumber::zero(n);
                let q = CycloMatrix::new(2, 2, n, vec![z.clone(), i.clone(), i, z]).unwrap();
                (m([[0, 1], [-1, 0]]), q, n)
            }
        }
    } else {
        let n = p as u32;
        let d = p as usize;
        // v_i ↦ v_{i+1}: column i carries a 1 in row i+1
        let shift = CycloMatrix::from_fn(d, d, n, |i, j| int(n, i64::from((j + 1) % d == i)));
        let clock = CycloMatrix::from_fn(d, d, n, |i, j| {
            if i == j {
                CycloNumber::zeta_pow(n, i as i64)
            } else {
                CycloNumber::zero(n)
            }
        });
        (shift, clock, n)
    }
}

fn commutator(x: &CycloMatrix, y: &CycloMatrix) -> Result<CycloMatrix> {
    x.mul(y)?.mul(&x.inverse()?)?.mul(&y.inverse()?)
}

/// Images of `x₁, x₂, x₃, x₄` and of `a, b, c` on `V`, plus the exponent
/// `k` with `[P, Q] = ζ_p^k`.
pub fn generator_matrices(
    p: u64,
    convention: Convention,
) -> Result<(Vec<CycloMatrix>, Vec<CycloMatrix>, u64)> {
    let (pm, qm, n) = pauli_pair(p, convention);
    let d = p as usize;
    let id = CycloMatrix::identity(d, n);
    let scalar = commutator(&pm, &qm)?
        .as_scalar()
        .ok_or_else(|| Error::Disagreement("[P, Q] is not a scalar matrix".into()))?;
    let k = (0..p)
        .find(|&k| CycloNumber::zeta_pow(n, (k * u64::from(n) / p) as i64) == scalar)
        .ok_or_else(|| Error::Disagreement("[P, Q] is not a p-th root of unity".into()))?;
    let eps = RootOfUnity::new(p, k as i64).to_cyclo(n)?;
    let block = |t: CycloMatrix, u: &CycloMatrix, v: &CycloMatrix| {
        CycloMatrix::direct_sum(&[t, u.clone(), v.clone()])
    };
    let x1 = block(pm.kron(&id), &id, &id);
    let x2 = block(qm.kron(&id), &pm, &pm);
    let x3 = block(id.kron(&pm), &id, &qm);
    let x4 = block(id.kron(&qm), &qm, &id);
    let e = CycloMatrix::scalar(d, &eps);
    let a = block(CycloMatrix::scalar(d * d, &eps), &id, &id);
    let b = block(id.kron(&id), &e, &id);
    let c = block(id.kron(&id), &id, &e);
    Ok((vec![x1, x2, x3, x4], vec![a, b, c], k))
}

/// Builds the example for a prime `p ≤ max_prime`. The convention only
/// matters for `p = 2`.
pub fn bogomolov_example(p: u64, convention: Convention, max_prime: u64) -> Result<ExampleBundle> {
    if p < 2 || crate::grp::prime_factors(p) != [p] {
        return Err(Error::malformed("/p", format!("{p} is not a prime")));
    }
    if p > max_prime {
        return Err(Error::Infeasible {
            order: p.pow(7) as usize,
            cap: max_prime.pow(7) as usize,
        });
    }
    let (xs, centrals, k) = generator_matrices(p, convention)?;
    let n = xs[0].order();
    let mut rep = matrix_closure(&xs, n, DEFAULT_CLOSURE_BOUND.min(crate::grp::max_order()))?;
    let g = rep.group();
    let find = |m: &CycloMatrix| {
        rep.find(m)
            .ok_or_else(|| Error::Disagreement("central generator missing from the closure".into()))
    };
    let x = [find(&xs[0])?, find(&xs[1])?, find(&xs[2])?, find(&xs[3])?];
    let (a, b, c) = (
        find(&centrals[0])?,
        find(&centrals[1])?,
        find(&centrals[2])?,
    );
    let named_gens = Generators { x, a, b, c };
    // normal forms x₁^e₁ x₂^e₂ x₃^e₃ x₄^e₄ a^f₁ b^f₂ c^f₃
    let order = g.order();
    let mut abelianization = vec![[u64::MAX; 4]; order];
    let mut labels = vec![String::new(); order];
    let factors = [x[0], x[1], x[2], x[3], a, b, c];
    let names = ["x1", "x2", "x3", "x4", "a", "b", "c"];
    let total = p.pow(7);
    for code in 0..total {
        let mut exps = [0u64; 7];
        let mut t = code;
        for e in exps.iter_mut() {
            *e = t % p;
            t /= p;
        }
        let mut el = 0;
        for (f, &e) in factors.iter().zip(&exps) {
            el = g.mul(el, g.pow(*f, e));
        }
        if abelianization[el][0] != u64::MAX {
            return Err(Error::Disagreement("normal forms are not unique".into()));
        }
        abelianization[el] = [exps[0], exps[1], exps[2], exps[3]];
        let word: Vec<String> = names
            .iter()
            .zip(&exps)
            .filter(|(_, &e)| e > 0)
            .map(|(s, &e)| {
                if e == 1 {
                    s.to_string()
                } else {
                    format!("{s}^{e}")
                }
            })
            .collect();
        labels[el] = if word.is_empty() {
            "1".into()
        } else {
            word.join("*")
        };
    }
    if order as u64 != total {
        return Err(Error::Disagreement(format!(
            "closure has order {order}, expected {total}"
        )));
    }
    rep.relabel(labels)?;
    let quotient = named::abelian(&[p; 4]);
    let model = build_model(rep, p as usize + 1)?;
    let mut bundle = ExampleBundle {
        p,
        convention: (p == 2).then_some(convention),
        commutator_exponent: k,
        model,
        named: named_gens,
        abelianization,
        quotient,
        catalog: vec![],
    };
    bundle.catalog = bundle.build_catalog()?;
    Ok(bundle)
}

impl ExampleBundle {
    pub fn group(&self) -> &FiniteGroup {
        self.model.group()
    }

    /// Index of a `Z_p⁴` coordinate vector in [`Self::quotient`].
    pub fn quotient_index(&self, v: &[u64; 4]) -> usize {
        v.iter().rev().fold(0u64, |acc, &e| acc * self.p + e) as usize
    }

    pub fn abelianization_map(&self) -> Vec<usize> {
        self.abelianization
            .iter()
            .map(|v| self.quotient_index(v))
            .collect()
    }

    /// Upper-triangular representative `xᵢ yⱼ` of the form `eᵢ* ∧ eⱼ*`.
    pub fn form(&self, i: usize, j: usize) -> Cocycle2 {
        let p = self.p as usize;
        let coord = |x: usize, t: usize| (x / p.pow(t as u32)) % p;
        Cocycle2::from_fn(self.quotient.order(), self.p, |x, y| {
            (coord(x, i) * coord(y, j)) as u64
        })
    }

    /// The six forms `eᵢ* ∧ eⱼ*`, `i < j`, in lexicographic order.
    pub fn form_pairs() -> Vec<(usize, usize)> {
        (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .collect()
    }

    fn build_catalog(&self) -> Result<Vec<CatalogEntry>> {
        let mut out: Vec<CatalogEntry> = Self::form_pairs()
            .into_iter()
            .map(|(i, j)| CatalogEntry {
                name: format!("e{}e{}", i + 1, j + 1),
                kind: EntryKind::Form(i, j),
                base: self.form(i, j),
            })
            .collect();
        let g = self.group();
        let p = self.p;
        let central = g.subgroup_generated(&[self.named.a, self.named.b, self.named.c]);
        // index-p subgroups of Z_p³ = kernels of nonzero functionals up to scaling
        let mut functionals = Vec::new();
        for code in 1..p.pow(3) {
            let f = [code % p, (code / p) % p, code / (p * p)];
            let lead = *f.iter().find(|&&v| v != 0).unwrap();
            if lead == 1 {
                functionals.push(f);
            }
        }
        let central_coords = |z: usize| -> [u64; 3] {
            let (a, b, c) = (self.named.a, self.named.b, self.named.c);
            for e1 in 0..p {
                for e2 in 0..p {
                    for e3 in 0..p {
                        let w = g.mul(g.mul(g.pow(a, e1), g.pow(b, e2)), g.pow(c, e3));
                        if w == z {
                            return [e1, e2, e3];
                        }
                    }
                }
            }
            unreachable!("element outside the central subgroup")
        };
        let coords: Vec<[u64; 3]> = central
            .elements()
            .iter()
            .map(|&z| central_coords(z))
            .collect();
        let pi = self.abelianization_map();
        for f in functionals {
            let value = |v: &[u64; 3]| (f[0] * v[0] + f[1] * v[1] + f[2] * v[2]) % p;
            let kernel: Vec<usize> = central
                .elements()
                .iter()
                .zip(&coords)
                .filter(|(_, v)| value(v) == 0)
                .map(|(&z, _)| z)
                .collect();
            let kernel = Subgroup::from_closed_set(g, kernel);
            let small = quotient_by_central(g, &kernel)?;
            let h = &small.quotient;
            let image = Subgroup::from_closed_set(
                h,
                central
                    .elements()
                    .iter()
                    .map(|&z| small.projection[z])
                    .collect(),
            );
            let ext = quotient_by_central(h, &image)?;
            // value of the functional on each element of N/N'
            let on_image: Vec<u64> = image
                .elements()
                .iter()
                .map(|&q| {
                    let z = central
                        .elements()
                        .iter()
                        .position(|&z| small.projection[z] == q)
                        .unwrap();
                    value(&coords[z])
                })
                .collect();
            for s in 1..p {
                let psi =
                    Character::new(h, &image, p, on_image.iter().map(|v| v * s % p).collect())?;
                let c = from_central_extension(h, &ext, &psi)?;
                // re-index the quotient by standard coordinates
                let mut to_std = vec![0usize; ext.quotient.order()];
                for (x, &px) in pi.iter().enumerate() {
                    to_std[ext.projection[small.projection[x]]] = px;
                }
                let mut from_std = vec![0usize; to_std.len()];
                for (q, &s) in to_std.iter().enumerate() {
                    from_std[s] = q;
                }
                let base =
                    Cocycle2::from_fn(to_std.len(), p, |u, v| c.get(from_std[u], from_std[v]));
                out.push(CatalogEntry {
                    name: format!("ext[{},{},{}]*{}", f[0], f[1], f[2], s),
                    kind: EntryKind::Extension,
                    base,
                });
            }
        }
        Ok(out)
    }

    /// Pullback of a `Z_p⁴` cocycle to `G`.
    pub fn inflate(&self, base: &Cocycle2) -> Result<Cocycle2> {
        inflate(
            base,
            &self.quotient,
            self.group(),
            &self.abelianization_map(),
        )
    }

    pub fn entry(&self, name: &str) -> Option<&CatalogEntry> {
        self.catalog.iter().find(|e| e.name == name)
    }

    /// Every defining relation checked as an exact matrix identity and in
    /// the group table. Returns the failing relation names.
    pub fn relation_failures(&self) -> Vec<String> {
        let g = self.group();
        let Generators { x, a, b, c } = self.named;
        let checks = [
            ("[x1,x2]=a", g.commutator(x[0], x[1]), a),
            ("[x3,x4]=a", g.commutator(x[2], x[3]), a),
            ("[x1,x3]=1", g.commutator(x[0], x[2]), 0),
            ("[x1,x4]=1", g.commutator(x[0], x[3]), 0),
            ("[x2,x4]=b", g.commutator(x[1], x[3]), b),
            ("[x2,x3]=c", g.commutator(x[1], x[2]), c),
        ];
        let rep = self.model.rep();
        let mut failures = Vec::new();
        for (name, got, want) in checks {
            let (i, j) = match name {
                "[x1,x2]=a" => (0, 1),
                "[x3,x4]=a" => (2, 3),
                "[x1,x3]=1" => (0, 2),
                "[x1,x4]=1" => (0, 3),
                "[x2,x4]=b" => (1, 3),
                _ => (1, 2),
            };
            let matrix_ok = commutator(rep.matrix(x[i]), rep.matrix(x[j]))
                .map(|m| &m == rep.matrix(want))
                .unwrap_or(false);
            if got != want || !matrix_ok {
                failures.push(name.to_string());
            }
        }
        failures
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_commutators() {
        for (p, conv) in [
            (2, Convention::Involution),
            (2, Convention::Literal),
            (3, Convention::Involution),
            (5, Convention::Involution),
        ] {
            let (pm, qm, _) = pauli_pair(p, conv);
            let s = commutator(&pm, &qm).unwrap().as_scalar().unwrap();
            let (_, _, k) = generator_matrices(p, conv).unwrap();
            assert_ne!(k, 0);
            assert_eq!(
                s,
                RootOfUnity::new(p, k as i64).to_cyclo(s.order()).unwrap()
            );
        }
    }

    #[test]
    fn guard_and_primality() {
        assert!(matches!(
            bogomolov_example(5, Convention::Involution, 3),
            Err(Error::Infeasible { .. })
        ));
        assert!(bogomolov_example(4, Convention::Involution, 3).is_err());
    }

    #[test]
    fn order_two_example() {
        let e = bogomolov_example(2, Convention::Involution, 3).unwrap();
        assert_eq!(e.group().order(), 128);
        assert_eq!(e.model.rep().degree(), 8);
        assert!(e.relation_failures().is_empty());
        assert_eq!(e.catalog.len(), 6 + 7);
        assert_eq!(e.group().label(e.named.x[0]), "x1");
    }
}
