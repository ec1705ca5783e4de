//! Matrix groups over cyclotomic fields, fixed subspaces and linear action
//! models `U = V ∖ Z`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::cyclo::{CycloMatrix, CycloNumber, RootOfUnity, Subspace};
use crate::error::{Error, Result};
use crate::grp::{closure, FiniteGroup, Subgroup};

/// Groups up to this order get an exhaustive homomorphism check.
const EXHAUSTIVE_HOM_LIMIT: usize = 256;

/// A representation `ρ: G → GL_d(Q(ζ_n))`, one matrix per element index.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    group: FiniteGroup,
    degree: usize,
    order: u32,
    matrices: Vec<CycloMatrix>,
    lookup: HashMap<CycloMatrix, usize>,
}

impl MatrixRep {
    /// Checks `ρ(1) = I` and `ρ(g)ρ(h) = ρ(gh)`, on all pairs for small
    /// groups and on `(g, s)` with `s` a generator otherwise.
    pub fn new(group: FiniteGroup, matrices: Vec<CycloMatrix>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for a group of order {}",
                matrices.len(),
                group.order()
            )));
        }
        let degree = matrices[0].rows();
        let order = matrices
            .iter()
            .fold(1u32, |acc, m| num_integer::lcm(acc, m.order()));
        let matrices = matrices
            .into_iter()
            .map(|m| {
                if m.rows() != degree || m.cols() != degree {
                    return Err(Error::DimensionMismatch(
                        "matrices of different sizes".into(),
                    ));
                }
                m.embed(order)
            })
            .collect::<Result<Vec<_>>>()?;
        if !matrices[0].is_identity() {
            return Err(Error::NotAHomomorphism(0, 0));
        }
        let n = group.order();
        let second: Vec<usize> = if n <= EXHAUSTIVE_HOM_LIMIT {
            (0..n).collect()
        } else {
            group.generators().to_vec()
        };
        let bad = (0..n).into_par_iter().find_map_first(|a| {
            for &b in &second {
                if matrices[a].mul(&matrices[b]).ok().as_ref() != Some(&matrices[group.mul(a, b)]) {
                    return Some((a, b));
                }
            }
            None
        });
        if let Some((a, b)) = bad {
            return Err(Error::NotAHomomorphism(a, b));
        }
        let lookup = matrices
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        Ok(MatrixRep {
            group,
            degree,
            order,
            matrices,
            lookup,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Cyclotomic order of the matrix entries.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn matrix(&self, g: usize) -> &CycloMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CycloMatrix] {
        &self.matrices
    }

    /// Element represented by `m`, if any.
    pub fn find(&self, m: &CycloMatrix) -> Option<usize> {
        let m = m.embed(self.order).ok()?;
        self.lookup.get(&m).copied()
    }

    /// Replaces the group's element labels.
    pub fn relabel(&mut self, labels: Vec<String>) -> Result<()> {
        let g = std::mem::replace(&mut self.group, FiniteGroup::from_cayley(&[vec![0]])?);
        self.group = g.with_labels(labels)?;
        Ok(())
    }
}

/// Closes a finite set of invertible matrices under multiplication.
pub fn matrix_closure(generators: &[CycloMatrix], order: u32, bound: usize) -> Result<MatrixRep> {
    let degree = generators.first().map_or(0, |m| m.rows());
    let mut gens = Vec::with_capacity(generators.len());
    for (i, m) in generators.iter().enumerate() {
        if !m.is_square() || m.rows() != degree {
            return Err(Error::DimensionMismatch(format!(
                "generator {i} has the wrong shape"
            )));
        }
        let m = m.embed(order)?;
        if m.rank() != degree {
            return Err(Error::NonInvertibleGenerator(i));
        }
        gens.push(m);
    }
    let cl = closure(
        CycloMatrix::identity(degree, order),
        &gens,
        |a, b| a.mul(b).expect("aligned matrices"),
        |m| m.clone(),
        bound,
    )?;
    let lookup = cl.index;
    Ok(MatrixRep {
        group: cl.group,
        degree,
        order,
        matrices: cl.elements,
        lookup,
    })
}

/// `V^g = ker(ρ(g) − I)`.
pub fn fixed_space(rep: &MatrixRep, g: usize) -> Subspace {
    let m = rep.matrix(g);
    m.sub(&CycloMatrix::identity(rep.degree, rep.order))
        .expect("same shape")
        .kernel()
}

/// Fixed space of every element, computed in parallel.
pub fn all_fixed_spaces(rep: &MatrixRep) -> Vec<Subspace> {
    (0..rep.group.order())
        .into_par_iter()
        .map(|g| fixed_space(rep, g))
        .collect()
}

/// Spectrum of one element: distinct eigenvalues with eigenspace dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementSpectrum {
    pub element: usize,
    pub eigenvalues: Vec<(RootOfUnity, usize)>,
}

impl ElementSpectrum {
    pub fn is_scalar(&self) -> bool {
        self.eigenvalues.len() == 1
    }
}

/// Spectra of the non-scalar elements of `h`.
///
/// Elements have finite order `k`, so they are diagonalizable with
/// eigenvalues among the `k`-th roots of unity; each candidate is tested.
pub fn eigen_survey(rep: &MatrixRep, h: &Subgroup) -> Result<Vec<ElementSpectrum>> {
    let g = &rep.group;
    let out = h
        .elements()
        .par_iter()
        .filter(|&&x| rep.matrix(x).as_scalar().is_none())
        .map(|&x| {
            let k = g.element_order(x);
            let mut eigenvalues = Vec::new();
            for j in 0..k {
                let lambda = RootOfUnity::new(k, j as i64);
                let dim = rep.matrix(x).eigenspace(lambda)?.dim();
                if dim > 0 {
                    eigenvalues.push((lambda.reduced(), dim));
                }
            }
            eigenvalues.sort();
            Ok(ElementSpectrum {
                element: x,
                eigenvalues,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(out)
}

/// `{g : ρ(g)w = w for all w ∈ W}`.
pub fn pointwise_stabilizer(rep: &MatrixRep, w: &Subspace) -> Result<Subgroup> {
    check_ambient(rep, w)?;
    let w = w.embed(num_integer::lcm(rep.order, w.order()))?;
    let members: Vec<usize> = (0..rep.group.order())
        .into_par_iter()
        .filter(|&g| {
            let m = rep.matrix(g).embed(w.order()).unwrap();
            w.basis().iter().all(|v| m.apply(v).unwrap() == *v)
        })
        .collect();
    Ok(Subgroup::from_closed_set(&rep.group, members))
}

/// `{g : ρ(g)v ∈ span(v)}`.
pub fn line_stabilizer(rep: &MatrixRep, v: &[CycloNumber]) -> Result<Subgroup> {
    if v.len() != rep.degree {
        return Err(Error::DimensionMismatch("vector length".into()));
    }
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let line = Subspace::from_spanning(
        rep.degree,
        v.iter()
            .fold(rep.order, |acc, x| num_integer::lcm(acc, x.order())),
        vec![v.to_vec()],
    );
    let members: Vec<usize> = (0..rep.group.order())
        .into_par_iter()
        .filter(|&g| {
            line.image(rep.matrix(g))
                .map(|im| im == line)
                .unwrap_or(false)
        })
        .collect();
    Ok(Subgroup::from_closed_set(&rep.group, members))
}

fn check_ambient(rep: &MatrixRep, w: &Subspace) -> Result<()> {
    if w.ambient() != rep.degree {
        return Err(Error::DimensionMismatch(format!(
            "subspace of C^{} for a degree {} representation",
            w.ambient(),
            rep.degree
        )));
    }
    Ok(())
}

/// `W₁ ⊆ W₂`.
pub fn contained(w1: &Subspace, w2: &Subspace) -> Result<bool> {
    if w1.ambient() != w2.ambient() {
        return Err(Error::DimensionMismatch(
            "subspaces of different ambient spaces".into(),
        ));
    }
    w2.contains(w1)
}

/// Whether `W` meets `V ∖ ⋃ Zᵢ`. Over an infinite field a subspace lies
/// in a finite union of subspaces only if it lies in one of them.
pub fn meets_complement(w: &Subspace, arrangement: &[Subspace]) -> Result<bool> {
    for z in arrangement {
        if w.dim() <= z.dim() && contained(w, z)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A representation with a `G`-stable arrangement of proper subspaces.
#[derive(Clone, Debug)]
pub struct LinearActionModel {
    rep: MatrixRep,
    arrangement: Vec<Subspace>,
    threshold: Option<usize>,
    fixed: Vec<Subspace>,
    /// `U^g ≠ ∅`, per element
    meets: Vec<bool>,
}

/// `Z` = the distinct fixed spaces `V^g`, `g ≠ 1`, of codimension at least
/// `threshold`.
pub fn build_model(rep: MatrixRep, threshold: usize) -> Result<LinearActionModel> {
    if threshold == 0 {
        return Err(Error::DimensionMismatch(
            "threshold must be at least 1".into(),
        ));
    }
    let fixed = all_fixed_spaces(&rep);
    let arrangement: Vec<Subspace> = fixed
        .iter()
        .skip(1)
        .filter(|v| v.codim() >= threshold)
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    LinearActionModel::assemble(rep, arrangement, Some(threshold), fixed)
}

impl LinearActionModel {
    /// Model with an explicit arrangement, checked to be `G`-stable and to
    /// consist of proper subspaces.
    pub fn with_arrangement(rep: MatrixRep, arrangement: Vec<Subspace>) -> Result<Self> {
        let fixed = all_fixed_spaces(&rep);
        let order = rep.order;
        let arrangement = arrangement
            .into_iter()
            .map(|z| {
                check_ambient(&rep, &z)?;
                z.embed(num_integer::lcm(order, z.order()))
            })
            .collect::<Result<BTreeSet<_>>>()?
            .into_iter()
            .collect();
        Self::assemble(rep, arrangement, None, fixed)
    }

    fn assemble(
        rep: MatrixRep,
        arrangement: Vec<Subspace>,
        threshold: Option<usize>,
        fixed: Vec<Subspace>,
    ) -> Result<Self> {
        let set: BTreeSet<&Subspace> = arrangement.iter().collect();
        for (i, z) in arrangement.iter().enumerate() {
            if z.codim() == 0 {
                return Err(Error::ActionInvalid(format!(
                    "arrangement member {i} is the whole space"
                )));
            }
            for &s in rep.group.generators() {
                let image = z.image(rep.matrix(s))?;
                if !set.contains(&image) {
                    return Err(Error::ActionInvalid(format!(
                        "arrangement is not stable: generator {s} moves member {i} outside"
                    )));
                }
            }
        }
        let classes = rep.group.conjugacy_classes();
        let reps = classes.representatives();
        let flags = reps
            .par_iter()
            .map(|&g| meets_complement(&fixed[g], &arrangement))
            .collect::<Result<Vec<bool>>>()?;
        let meets = (0..rep.group.order())
            .map(|g| flags[classes.class_of[g]])
            .collect();
        Ok(LinearActionModel {
            rep,
            arrangement,
            threshold,
            fixed,
            meets,
        })
    }

    pub fn rep(&self) -> &MatrixRep {
        &self.rep
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.rep.group
    }

    pub fn arrangement(&self) -> &[Subspace] {
        &self.arrangement
    }

    pub fn threshold(&self) -> Option<usize> {
        self.threshold
    }

    pub fn fixed(&self, g: usize) -> &Subspace {
        &self.fixed[g]
    }

    /// `U^g ≠ ∅`.
    pub fn meets(&self, g: usize) -> bool {
        self.meets[g]
    }

    /// Same representation with `Z = ∅`, that is `U = V`.
    pub fn without_arrangement(&self) -> Self {
        LinearActionModel {
            rep: self.rep.clone(),
            arrangement: vec![],
            threshold: None,
            fixed: self.fixed.clone(),
            meets: vec![true; self.meets.len()],
        }
    }

    /// Same representation with the arrangement rebuilt at another threshold.
    pub fn with_threshold(&self, threshold: usize) -> Result<Self> {
        let arrangement: Vec<Subspace> = self
            .fixed
            .iter()
            .skip(1)
            .filter(|v| v.codim() >= threshold.max(1))
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Self::assemble(
            self.rep.clone(),
            arrangement,
            Some(threshold),
            self.fixed.clone(),
        )
    }

    /// `V^K = ⋂_{k ∈ K} V^k`, computed from the generators of `K`.
    pub fn fixed_of_subgroup(&self, k: &Subgroup) -> Result<Subspace> {
        let mut w = Subspace::full(self.rep.degree, self.rep.order);
        for &x in k.generators() {
            w = w.intersection(&self.fixed[x])?;
        }
        Ok(w)
    }
}

#[derive(Clone, Debug)]
pub struct FixedLocusRecord {
    pub representative: usize,
    pub class_size: usize,
    pub fixed: Subspace,
    pub codim: usize,
    pub meets_complement: bool,
}

#[derive(Clone, Debug)]
pub struct FixedLocusSurvey {
    pub records: Vec<FixedLocusRecord>,
    /// distinct fixed spaces of all elements, grouped by codimension
    pub by_codim: BTreeMap<usize, Vec<Subspace>>,
}

impl FixedLocusSurvey {
    pub fn distinct_of_codim(&self, c: usize) -> &[Subspace] {
        self.by_codim.get(&c).map_or(&[], |v| v.as_slice())
    }

    /// Smallest codimension of a nontrivial element's fixed space.
    pub fn min_nontrivial_codim(&self) -> Option<usize> {
        self.records.iter().skip(1).map(|r| r.codim).min()
    }
}

pub fn fixed_locus_survey(model: &LinearActionModel) -> FixedLocusSurvey {
    let g = model.group();
    let classes = g.conjugacy_classes();
    let records = classes
        .classes
        .iter()
        .map(|cl| {
            let r = cl[0];
            FixedLocusRecord {
                representative: r,
                class_size: cl.len(),
                fixed: model.fixed[r].clone(),
                codim: model.fixed[r].codim(),
                meets_complement: model.meets[r],
            }
        })
        .collect();
    let mut by_codim: BTreeMap<usize, BTreeSet<Subspace>> = BTreeMap::new();
    for v in &model.fixed {
        by_codim.entry(v.codim()).or_default().insert(v.clone());
    }
    FixedLocusSurvey {
        records,
        by_codim: by_codim
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().collect()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(order: u32, rows: &[&[i64]]) -> CycloMatrix {
        CycloMatrix::from_fn(rows.len(), rows[0].len(), order, |i, j| {
            CycloNumber::from_int(order, rows[i][j])
        })
    }

    fn sigma_x() -> CycloMatrix {
        int_matrix(1, &[&[0, 1], &[1, 0]])
    }

    #[test]
    fn closure_of_a_reflection() {
        let rep = matrix_closure(&[sigma_x()], 1, 100).unwrap();
        assert_eq!(rep.group().order(), 2);
        assert!(rep.matrix(0).is_identity());
        let again = MatrixRep::new(rep.group().clone(), rep.matrices().to_vec()).unwrap();
        assert_eq!(again.degree(), 2);
    }

    #[test]
    fn literal_pair_gives_order_eight() {
        let i = CycloNumber::zeta_pow(4, 1);
        let z = CycloNumber::zero(4);
        let p = int_matrix(4, &[&[0, 1], &[-1, 0]]);
        let q = CycloMatrix::new(2, 2, 4, vec![z.clone(), i.clone(), i, z]).unwrap();
        let rep = matrix_closure(&[p.clone(), q.clone()], 4, 100).unwrap();
        assert_eq!(rep.group().order(), 8);
        let minus = CycloMatrix::scalar(2, &CycloNumber::from_int(4, -1));
        assert_eq!(p.mul(&p).unwrap(), minus);
        assert_eq!(q.mul(&q).unwrap(), minus);
    }

    #[test]
    fn singular_generator_is_rejected() {
        let m = int_matrix(1, &[&[1, 0], &[0, 0]]);
        assert!(matches!(
            matrix_closure(&[m], 1, 10),
            Err(Error::NonInvertibleGenerator(0))
        ));
        let shear = int_matrix(1, &[&[1, 1], &[0, 1]]);
        assert!(matches!(
            matrix_closure(&[shear], 1, 50),
            Err(Error::OrderBoundExceeded { .. })
        ));
    }

    #[test]
    fn fixed_spaces_and_stabilizers() {
        let rep = matrix_closure(&[sigma_x()], 1, 10).unwrap();
        assert_eq!(fixed_space(&rep, 0).dim(), 2);
        assert_eq!(fixed_space(&rep, 1).dim(), 1);
        let zero = Subspace::zero(2, 1);
        assert_eq!(pointwise_stabilizer(&rep, &zero).unwrap().order(), 2);
        let full = Subspace::full(2, 1);
        assert_eq!(pointwise_stabilizer(&rep, &full).unwrap().order(), 1);
        let e1 = vec![CycloNumber::one(1), CycloNumber::zero(1)];
        assert_eq!(line_stabilizer(&rep, &e1).unwrap().order(), 1);
        let diag = vec![CycloNumber::one(1), CycloNumber::one(1)];
        assert_eq!(line_stabilizer(&rep, &diag).unwrap().order(), 2);
        let z = vec![CycloNumber::zero(1); 2];
        assert!(matches!(line_stabilizer(&rep, &z), Err(Error::ZeroVector)));
    }

    #[test]
    fn complement_tests() {
        let e1 = Subspace::coordinate(2, 1, [0]);
        let e2 = Subspace::coordinate(2, 1, [1]);
        let diag =
            Subspace::from_spanning(2, 1, vec![vec![CycloNumber::one(1), CycloNumber::one(1)]]);
        assert!(contained(&e1, &e1).unwrap());
        assert!(meets_complement(&diag, &[e1.clone(), e2.clone()]).unwrap());
        assert!(!meets_complement(&e1, &[e1.clone(), e2]).unwrap());
        assert!(contained(&e1, &Subspace::zero(3, 1)).is_err());
    }

    #[test]
    fn model_thresholds() {
        let rep = matrix_closure(&[sigma_x()], 1, 10).unwrap();
        let m = build_model(rep.clone(), 3).unwrap();
        assert!(m.arrangement().is_empty());
        let m1 = build_model(rep.clone(), 1).unwrap();
        assert_eq!(m1.arrangement().len(), 1);
        assert!(m1.meets(0));
        assert!(!m1.meets(1));
        let s = fixed_locus_survey(&m1);
        assert_eq!(s.records[0].codim, 0);
        assert!(s.records[0].meets_complement);
        let bad = LinearActionModel::with_arrangement(rep, vec![Subspace::coordinate(2, 1, [0])]);
        assert!(matches!(bad, Err(Error::ActionInvalid(_))));
    }

    #[test]
    fn spectra_of_a_clock() {
        let z3 = CycloNumber::zeta_pow(3, 1);
        let q = CycloMatrix::from_fn(3, 3, 3, |i, j| {
            if i == j {
                CycloNumber::zeta_pow(3, i as i64)
            } else {
                CycloNumber::zero(3)
            }
        });
        let rep = matrix_closure(&[q, CycloMatrix::scalar(3, &z3)], 3, 100).unwrap();
        let s = eigen_survey(&rep, &rep.group().whole()).unwrap();
        assert_eq!(s.len(), 6);
        assert!(s
            .iter()
            .all(|e| e.eigenvalues.len() == 3 && e.eigenvalues.iter().all(|x| x.1 == 1)));
    }
}
