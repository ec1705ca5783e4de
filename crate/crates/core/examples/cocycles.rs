//! Cocycles on small groups: coboundary tests, Schur multipliers and
//! cocycles coming from a central extension.

use tbk::cocycle::{
    from_central_extension, h2_small, is_coboundary, schur_bicyclic, CoboundarySense, Cocycle2,
};
use tbk::grp::{named, quotient_by_central, Character};

fn main() -> tbk::Result<()> {
    let klein = named::abelian(&[2, 2]);
    // c(x, y) = x₁·y₂, the basic antisymmetric class on Z_2 × Z_2
    let c = Cocycle2::from_fn(4, 2, |x, y| ((x % 2) * (y / 2)) as u64);
    for sense in [CoboundarySense::ModM, CoboundarySense::Torus] {
        let verdict = is_coboundary(&klein, &c, sense)?;
        println!(
            "x1*y2 on Z2xZ2, {sense:?}: coboundary = {}",
            verdict.is_some()
        );
    }
    let sym = c.add(&Cocycle2::from_fn(4, 2, |x, y| ((x / 2) * (y % 2)) as u64))?;
    let witness = is_coboundary(&klein, &sym, CoboundarySense::Torus)?;
    println!("symmetrized table is a coboundary: {}", witness.is_some());

    for (d1, d2) in [(2, 2), (4, 6), (3, 9)] {
        let (_, s) = schur_bicyclic(d1, d2)?;
        println!("H2(Z{d1} x Z{d2}) = {:?}", s.invariant_factors);
    }
    for (name, g) in [
        ("Z2^3", named::abelian(&[2, 2, 2])),
        ("Q8", named::quaternion()),
        ("D4", named::dihedral(4)),
        ("S3", named::symmetric(3)),
    ] {
        println!("H2({name}) = {:?}", h2_small(&g, 32)?.invariant_factors);
    }

    // Q8 → Q8 / {±1} ≅ Z_2 × Z_2, pushed out along the faithful character of {±1}
    let q8 = named::quaternion();
    let center = q8.center();
    let ext = quotient_by_central(&q8, &center)?;
    let psi = Character::new(&q8, &center, 2, vec![0, 1])?;
    let alpha = from_central_extension(&q8, &ext, &psi)?;
    let trivial = is_coboundary(&ext.quotient, &alpha, CoboundarySense::Torus)?.is_some();
    println!(
        "Q8 extension class on Z2xZ2: symmetric = {}, coboundary = {trivial}",
        alpha.is_symmetric()
    );
    Ok(())
}
