//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero if any failed. All comparisons are exact.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tbk::bogomolov::{bogomolov_example, pauli_pair, Convention, ExampleBundle};
use tbk::brauer::{
    in_b0, in_bg, in_bg_bicyclic, l_character, orbifold_dims, span_analysis, verify_cor53,
    SectorData,
};
use tbk::cocycle::{
    coboundary_of, from_bilinear_form, h2_small, is_coboundary, is_cocycle, schur_bicyclic,
    twisted_assoc_check, BilinearForm, CoboundarySense, Cochain1, Cocycle2, GSet,
};
use tbk::cyclo::{CycloMatrix, CycloNumber, RootOfUnity, Subspace};
use tbk::grp::{abelian_structure, named, FiniteGroup};
use tbk::rep::{eigen_survey, fixed_locus_survey, matrix_closure, pointwise_stabilizer, MatrixRep};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn bundle(p: u64, convention: Convention) -> &'static ExampleBundle {
    static TWO_INV: OnceLock<ExampleBundle> = OnceLock::new();
    static TWO_LIT: OnceLock<ExampleBundle> = OnceLock::new();
    static THREE: OnceLock<ExampleBundle> = OnceLock::new();
    let cell = match (p, convention) {
        (2, Convention::Involution) => &TWO_INV,
        (2, Convention::Literal) => &TWO_LIT,
        (3, _) => &THREE,
        _ => unreachable!(),
    };
    cell.get_or_init(|| bogomolov_example(p, convention, 3).expect("example builds"))
}

fn forms(b: &ExampleBundle) -> Vec<Cocycle2> {
    b.catalog[..6]
        .iter()
        .map(|e| b.inflate(&e.base).unwrap())
        .collect()
}

/// Every normalized `Z_2`-valued table on `Z_2 × Z_2`.
fn klein_tables() -> Vec<Cocycle2> {
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

fn symmetry_criterion() -> Check {
    let g = named::abelian(&[2, 2]);
    let mut cocycles = 0;
    for c in klein_tables() {
        if !is_cocycle(&g, &c).map_err(err)? {
            continue;
        }
        cocycles += 1;
        let cob = is_coboundary(&g, &c, CoboundarySense::Torus)
            .map_err(err)?
            .is_some();
        ensure(
            cob == c.is_symmetric(),
            format!("mismatch on {:?}", c.rows()),
        )?;
    }
    Ok(format!(
        "512 tables, {cocycles} cocycles, coboundary <=> symmetric on all"
    ))
}

fn bicyclic_multipliers() -> Check {
    for (d1, d2) in [(2u64, 2u64), (2, 4), (3, 3), (4, 6)] {
        let g = named::abelian(&[d1, d2]);
        let want: Vec<u64> = match num_integer::gcd(d1, d2) {
            1 => vec![],
            d => vec![d],
        };
        let got = h2_small(&g, 32).map_err(err)?.invariant_factors;
        ensure(
            got == want,
            format!("Z{d1} x Z{d2}: got {got:?}, want {want:?}"),
        )?;
        let (_, s) = schur_bicyclic(d1, d2).map_err(err)?;
        ensure(s.invariant_factors == want, "closed form disagrees")?;
    }
    for n in 1..=12u64 {
        let s = h2_small(&named::cyclic(n), 32).map_err(err)?;
        ensure(
            s.is_trivial(),
            format!("Z{n} has factors {:?}", s.invariant_factors),
        )?;
    }
    Ok("gcd formula on 4 bicyclic groups, cyclic Z1..Z12 trivial".into())
}

/// `β(x, y) = c(x, y) − c(y, x)` as a table over commuting pairs.
fn beta_signature(g: &FiniteGroup, c: &Cocycle2) -> Vec<u64> {
    let m = c.modulus();
    (0..g.order())
        .flat_map(|x| (0..g.order()).map(move |y| (x, y)))
        .filter(|&(x, y)| g.commutes(x, y))
        .map(|(x, y)| (c.get(x, y) + m - c.get(y, x)) % m)
        .collect()
}

fn elementary_and_quaternion() -> Check {
    let g = named::abelian(&[2, 2, 2]);
    let s = h2_small(&g, 32).map_err(err)?;
    ensure(
        s.invariant_factors == vec![2, 2, 2],
        format!("Z2^3: {:?}", s.invariant_factors),
    )?;
    // brute force: all 512 bilinear forms xᵀBy over Z_2
    let st = abelian_structure(&g, &g.whole()).map_err(err)?;
    let mut signatures = BTreeSet::new();
    for mask in 0u32..512 {
        let b: Vec<Vec<u64>> = (0..3)
            .map(|i| (0..3).map(|j| u64::from(mask >> (3 * i + j) & 1)).collect())
            .collect();
        let c = from_bilinear_form(&BilinearForm::new(st.clone(), 2, b).map_err(err)?);
        let c = c.lift(8).map_err(err)?;
        signatures.insert(beta_signature(&g, &c));
    }
    ensure(
        signatures.len() == 8,
        format!("{} signatures for Z2^3", signatures.len()),
    )?;
    // the generators, valued in Z_8, realize all 8 signatures
    let mut from_generators = BTreeSet::new();
    for mask in 0u32..8 {
        let mut c = Cocycle2::zero(8, 8);
        for (i, gen) in s.generators.iter().enumerate() {
            if mask >> i & 1 == 1 {
                c = c.add(gen).map_err(err)?;
            }
        }
        from_generators.insert(beta_signature(&g, &c));
    }
    ensure(
        from_generators == signatures,
        "generator span misses signatures",
    )?;
    let q = named::quaternion();
    ensure(
        h2_small(&q, 32).map_err(err)?.is_trivial(),
        "Q8 not trivial",
    )?;
    // every abelian subgroup of Q8 is cyclic, so the only signature is zero
    for x in 0..8 {
        for y in 0..8 {
            if q.commutes(x, y) {
                let a = q.subgroup_generated(&[x, y]);
                let st = abelian_structure(&q, &a).map_err(err)?;
                ensure(st.rank() <= 1, "Q8 has a non-cyclic abelian subgroup")?;
            }
        }
    }
    Ok("Z2^3 -> [2,2,2] with 8 brute-force signatures; Q8 trivial with 1".into())
}

fn twisted_associativity() -> Check {
    let g = named::abelian(&[2, 2]);
    // first coordinate swaps points 0 and 1, point 2 is fixed
    let action: Vec<Vec<usize>> = (0..4)
        .map(|x| {
            if x % 2 == 1 {
                vec![1, 0, 2]
            } else {
                vec![0, 1, 2]
            }
        })
        .collect();
    let set = GSet::new(&g, action).map_err(err)?;
    let tables = klein_tables();
    let mut cocycles = Vec::new();
    for c in &tables {
        if is_cocycle(&g, c).map_err(err)? {
            cocycles.push(c.clone());
        }
    }
    for c in &cocycles {
        ensure(
            twisted_assoc_check(&g, c, &set, 3).map_err(err)?,
            format!("cocycle {:?} failed", c.rows()),
        )?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut perturbed = 0;
    while perturbed < 50 {
        let mut c = cocycles[rng.gen_range(0..cocycles.len())].clone();
        let (a, b) = (rng.gen_range(1..4), rng.gen_range(1..4));
        c.set(a, b, (c.get(a, b) + 1) % 2);
        if is_cocycle(&g, &c).map_err(err)? {
            continue;
        }
        perturbed += 1;
        ensure(
            !twisted_assoc_check(&g, &c, &set, 3).map_err(err)?,
            format!("non-cocycle {:?} passed", c.rows()),
        )?;
    }
    Ok(format!(
        "{} cocycles associative, 50 perturbed non-cocycles rejected",
        cocycles.len()
    ))
}

fn construction() -> Check {
    let mut notes = Vec::new();
    for (p, conv) in [
        (2, Convention::Involution),
        (2, Convention::Literal),
        (3, Convention::Involution),
    ] {
        let start = Instant::now();
        let b = bundle(p, conv);
        let elapsed = start.elapsed();
        let want = p.pow(7) as usize;
        ensure(
            b.group().order() == want,
            format!("p={p}: order {}", b.group().order()),
        )?;
        let failures = b.relation_failures();
        ensure(
            failures.is_empty(),
            format!("p={p} {conv}: relations {failures:?} fail"),
        )?;
        let (pm, qm, _) = pauli_pair(p, conv);
        let comm = pm
            .mul(&qm)
            .and_then(|x| x.mul(&pm.inverse()?))
            .and_then(|x| x.mul(&qm.inverse()?))
            .map_err(err)?;
        let s = comm.as_scalar().ok_or("[P,Q] is not scalar")?;
        let one = CycloNumber::one(s.order());
        let mut pow = one.clone();
        let mut order = 0;
        for k in 1..=p {
            pow = &pow * &s;
            if pow == one {
                order = k;
                break;
            }
        }
        ensure(order == p, format!("p={p}: [P,Q] has order {order}"))?;
        let budget = if p == 2 {
            Duration::from_secs(30)
        } else {
            Duration::from_secs(600)
        };
        ensure(elapsed <= budget, format!("p={p}: {elapsed:?} over budget"))?;
        notes.push(format!(
            "p={p} {conv} order {want} in {:.1}s",
            elapsed.as_secs_f64()
        ));
    }
    Ok(notes.join("; "))
}

/// `(ℂ^p ⊗ ℂ^p) ⊕ ℂ^p ⊕ 0` and `(ℂ^p ⊗ ℂ^p) ⊕ 0 ⊕ ℂ^p`.
fn central_fixed_spaces(p: usize, order: u32) -> BTreeSet<Subspace> {
    let d = p * p + 2 * p;
    let first = Subspace::coordinate(d, order, (0..p * p).chain(p * p..p * p + p));
    let second = Subspace::coordinate(d, order, (0..p * p).chain(p * p + p..d));
    BTreeSet::from([first, second])
}

fn fixed_locus() -> Check {
    let mut notes = Vec::new();
    let mut problems = Vec::new();
    for (p, conv) in [(3u64, Convention::Involution), (2, Convention::Involution)] {
        let b = bundle(p, conv);
        let pu = p as usize;
        let model = &b.model;
        let order = model.rep().order();
        let survey = fixed_locus_survey(model);
        let min = survey.min_nontrivial_codim().unwrap();
        ensure(min >= pu, format!("p={p}: an element has codim {min}"))?;
        for g in 0..b.group().order() {
            let codim = model.fixed(g).codim();
            ensure(
                model.meets(g) == (codim <= pu),
                format!("p={p}: U^g flag wrong at {}", b.group().label(g)),
            )?;
        }
        let got: BTreeSet<Subspace> = survey.distinct_of_codim(pu).iter().cloned().collect();
        let mut want = central_fixed_spaces(pu, order);
        if p == 2 {
            // V' = +1-eigenspace of P ⊗ 1 with P = σ_x: span(e₀₀ + e₁₀, e₀₁ + e₁₁)
            let one = CycloNumber::one(order);
            let zero = CycloNumber::zero(order);
            let mut v1 = vec![zero.clone(); 8];
            let mut v2 = vec![zero; 8];
            v1[0] = one.clone();
            v1[2] = one.clone();
            v2[1] = one.clone();
            v2[3] = one.clone();
            let mut basis = vec![v1, v2];
            for i in 4..8 {
                let mut e = vec![CycloNumber::zero(order); 8];
                e[i] = one.clone();
                basis.push(e);
            }
            want.insert(Subspace::from_spanning(8, order, basis));
        }
        if got == want {
            notes.push(format!(
                "p={p}: {} codim-{p} fixed spaces as expected",
                got.len()
            ));
        } else {
            let extra: Vec<String> = got
                .difference(&want)
                .map(|s| tbk::io::display_subspace(s).to_string())
                .collect();
            let missing = want.difference(&got).count();
            problems.push(format!(
                "p={p}: {} codim-{p} fixed spaces, expected {}; {missing} missing, unexpected {}",
                got.len(),
                want.len(),
                extra.join(" ")
            ));
        }
    }
    if problems.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{} | {}", problems.join("; "), notes.join("; ")))
    }
}

fn eigen_and_stabilizers() -> Check {
    let (pm, qm, n) = pauli_pair(3, Convention::Involution);
    let h1 = matrix_closure(&[pm.clone(), qm.clone()], n, 1000).map_err(err)?;
    ensure(h1.group().order() == 27, "H1 order")?;
    let expected: Vec<RootOfUnity> = {
        let mut v: Vec<RootOfUnity> = (0..3).map(|k| RootOfUnity::new(3, k).reduced()).collect();
        v.sort();
        v
    };
    let spectra = eigen_survey(&h1, &h1.group().whole()).map_err(err)?;
    ensure(
        spectra.len() == 24,
        format!("{} non-scalar elements in H1", spectra.len()),
    )?;
    for s in &spectra {
        let vals: Vec<RootOfUnity> = s.eigenvalues.iter().map(|e| e.0).collect();
        ensure(
            vals == expected && s.eigenvalues.iter().all(|e| e.1 == 1),
            "H1 spectrum",
        )?;
        for &(lambda, _) in &s.eigenvalues {
            let line = h1.matrix(s.element).eigenspace(lambda).map_err(err)?;
            let stab = pointwise_stabilizer(&h1, &line).map_err(err)?;
            let st = abelian_structure(h1.group(), &stab).map_err(err)?;
            ensure(
                st.invariant_factors == vec![3],
                format!("stabilizer factors {:?}", st.invariant_factors),
            )?;
        }
    }
    let id = CycloMatrix::identity(3, n);
    let h2_gens = [pm.kron(&id), qm.kron(&id), id.kron(&pm), id.kron(&qm)];
    let h2 = matrix_closure(&h2_gens, n, 10_000).map_err(err)?;
    ensure(h2.group().order() == 243, "H2 order")?;
    let spectra2 = eigen_survey(&h2, &h2.group().whole()).map_err(err)?;
    for s in &spectra2 {
        let vals: Vec<RootOfUnity> = s.eigenvalues.iter().map(|e| e.0).collect();
        ensure(
            vals == expected && s.eigenvalues.iter().all(|e| e.1 == 3),
            "H2 spectrum",
        )?;
    }
    Ok(format!(
        "H1: 24 non-scalar elements, 3 simple eigenvalues, stabilizers Z3; H2: {} non-scalar, eigenspaces of dim 3",
        spectra2.len()
    ))
}

fn b0_lower_bound() -> Check {
    let mut notes = Vec::new();
    for p in [2u64, 3] {
        let start = Instant::now();
        let b = bundle(p, Convention::Involution);
        let g = b.group();
        let fs = forms(b);
        let e12 = &fs[0];
        ensure(is_cocycle(g, e12).map_err(err)?, "e12 not a cocycle")?;
        ensure(
            is_coboundary(g, e12, CoboundarySense::Torus)
                .map_err(err)?
                .is_none(),
            "e12 is a coboundary",
        )?;
        ensure(in_b0(g, e12).map_err(err)?.member, "e12 not in B0")?;
        let r = span_analysis(g, &fs, None).map_err(err)?;
        ensure(
            r.invariant_factors == vec![p],
            format!("p={p}: span factors {:?}", r.invariant_factors),
        )?;
        let sum = e12.add(&fs[5]).map_err(err)?;
        ensure(
            is_coboundary(g, &sum, CoboundarySense::Torus)
                .map_err(err)?
                .is_some(),
            "e12 + e34 not a coboundary",
        )?;
        let budget = if p == 2 {
            Duration::from_secs(60)
        } else {
            Duration::from_secs(900)
        };
        ensure(start.elapsed() <= budget, format!("p={p} over budget"))?;
        notes.push(format!(
            "p={p}: span [{p}], {:.1}s",
            start.elapsed().as_secs_f64()
        ));
    }
    Ok(notes.join("; "))
}

fn bg_cross_validation() -> Check {
    let b = bundle(2, Convention::Involution);
    let g = b.group();
    let open = b.model.without_arrangement();
    let fs = forms(b);
    for (c, e) in fs.iter().zip(&b.catalog) {
        for model in [&b.model, &open] {
            let pairs = in_bg(model, c).map_err(err)?.member;
            let bic = in_bg_bicyclic(model, c).map_err(err)?.member;
            ensure(
                pairs == bic,
                format!("{}: pair scan {pairs}, bicyclic {bic}", e.name),
            )?;
        }
    }
    for e in &b.catalog {
        let c = b.inflate(&e.base).map_err(err)?;
        let a = in_bg(&open, &c).map_err(err)?.member;
        let z = in_b0(g, &c).map_err(err)?.member;
        ensure(a == z, format!("{}: U = V gives {a}, B0 gives {z}", e.name))?;
    }
    Ok(format!(
        "6 forms x 2 models agree; U = V matches B0 on {} classes",
        b.catalog.len()
    ))
}

fn equal_dimensions() -> Check {
    let b = bundle(2, Convention::Involution);
    let g = b.group();
    let fs = forms(b);
    let v = verify_cor53(&b.model, &fs[0]).map_err(err)?;
    ensure(v.in_bg, "e12 not in B_G")?;
    for r in &v.report.classes {
        if r.meets_complement {
            let l = l_character(g, &fs[0], r.representative).map_err(err)?;
            ensure(
                l.is_trivial(),
                format!("nontrivial L at {}", g.label(r.representative)),
            )?;
        }
    }
    ensure(
        v.report.twisted_total == v.report.untwisted_total && v.termwise_equal,
        "twisted and untwisted totals differ",
    )?;
    let w = verify_cor53(&b.model, &fs[1]).map_err(err)?;
    let (class, h) = w.witness.ok_or("no witness for e13")?;
    ensure(b.model.meets(class), "witness class has empty fixed locus")?;
    let l = l_character(g, &fs[1], class).map_err(err)?;
    ensure(!l.is_trivial(), "witness character is trivial")?;
    Ok(format!(
        "e12: totals {} = {}; e13: witness class {} (via {})",
        v.report.twisted_total,
        v.report.untwisted_total,
        g.label(class),
        g.label(h)
    ))
}

fn class_invariance() -> Check {
    let b = bundle(2, Convention::Involution);
    let g = b.group();
    let reps = g.conjugacy_classes().representatives();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let signature = |c: &Cocycle2| -> std::result::Result<(bool, bool, Vec<bool>, u64), String> {
        let b0 = in_b0(g, c).map_err(err)?.member;
        let bg = in_bg(&b.model, c).map_err(err)?.member;
        let ls = reps
            .iter()
            .map(|&x| l_character(g, c, x).map(|l| l.is_trivial()))
            .collect::<tbk::Result<Vec<_>>>()
            .map_err(err)?;
        let total = orbifold_dims(&b.model, c, &SectorData::Scalar)
            .map_err(err)?
            .twisted_total;
        Ok((b0, bg, ls, total))
    };
    for e in &b.catalog {
        let c = b.inflate(&e.base).map_err(err)?;
        let base = signature(&c)?;
        for _ in 0..20 {
            let mut values: Vec<u64> = (0..g.order())
                .map(|_| rng.gen_range(0..c.modulus()))
                .collect();
            values[0] = 0;
            let shift = coboundary_of(g, &Cochain1::new(c.modulus(), values).map_err(err)?);
            let shifted = c.add(&shift).map_err(err)?;
            ensure(
                signature(&shifted)? == base,
                format!("{} changed under a coboundary shift", e.name),
            )?;
        }
    }
    Ok(format!("{} classes x 20 shifts unchanged", b.catalog.len()))
}

fn small_twisted_dimension() -> Check {
    let g = named::abelian(&[3, 3]);
    let matrices: Vec<CycloMatrix> = (0..9)
        .map(|x| {
            CycloMatrix::from_fn(2, 2, 3, |i, j| match (i, j) {
                (0, 0) => CycloNumber::zeta_pow(3, (x % 3) as i64),
                (1, 1) => CycloNumber::zeta_pow(3, (x / 3) as i64),
                _ => CycloNumber::zero(3),
            })
        })
        .collect();
    let rep = MatrixRep::new(g, matrices).map_err(err)?;
    let model = tbk::rep::LinearActionModel::with_arrangement(rep, vec![]).map_err(err)?;
    let c = Cocycle2::from_fn(9, 3, |x, y| ((x % 3) * (y / 3)) as u64);
    let r = orbifold_dims(&model, &c, &SectorData::Scalar).map_err(err)?;
    ensure(
        r.twisted_total == 1 && r.untwisted_total == 9,
        format!("{} vs {}", r.twisted_total, r.untwisted_total),
    )?;
    Ok("twisted 1 vs untwisted 9".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        (
            "symmetric <=> coboundary on Z2xZ2",
            Duration::from_secs(5),
            symmetry_criterion,
        ),
        (
            "bicyclic Schur multipliers",
            Duration::from_secs(60),
            bicyclic_multipliers,
        ),
        (
            "Z2^3 and Q8 multipliers",
            Duration::from_secs(60),
            elementary_and_quaternion,
        ),
        (
            "twisted algebra associativity",
            Duration::from_secs(10),
            twisted_associativity,
        ),
        (
            "order p^7 matrix construction",
            Duration::from_secs(630),
            construction,
        ),
        ("fixed-locus survey", Duration::from_secs(630), fixed_locus),
        (
            "eigenvalues and stabilizers (p=3)",
            Duration::from_secs(60),
            eigen_and_stabilizers,
        ),
        ("B0 lower bound", Duration::from_secs(960), b0_lower_bound),
        (
            "B_G pair scan vs bicyclic subgroups",
            Duration::from_secs(300),
            bg_cross_validation,
        ),
        (
            "twisted = untwisted sector sums",
            Duration::from_secs(300),
            equal_dimensions,
        ),
        (
            "class invariance under coboundaries",
            Duration::from_secs(120),
            class_invariance,
        ),
        (
            "Z3xZ3 twisted dimension",
            Duration::from_secs(1),
            small_twisted_dimension,
        ),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > *budget => {
                Err(format!("{msg}; took {elapsed:?}, budget {budget:?}"))
            }
            other => other,
        };
        match outcome {
            Ok(msg) => println!(
                "criterion {:2} PASS  {name}: {msg} [{:.2}s]",
                i + 1,
                elapsed.as_secs_f64()
            ),
            Err(msg) => {
                failed += 1;
                println!(
                    "criterion {:2} FAIL  {name}: {msg} [{:.2}s]",
                    i + 1,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
