//! Twisted versus untwisted orbifold dimension sums.

use tbk::bogomolov::{bogomolov_example, Convention};
use tbk::brauer::{orbifold_dims, verify_cor53, SectorData};
use tbk::cocycle::Cocycle2;
use tbk::cyclo::{CycloMatrix, CycloNumber};
use tbk::grp::named;
use tbk::rep::{LinearActionModel, MatrixRep};

fn main() -> tbk::Result<()> {
    // Z_3 × Z_3 acting diagonally on C^2, twisted by the nondegenerate pairing
    let g = named::abelian(&[3, 3]);
    let matrices = (0..9)
        .map(|x| {
            CycloMatrix::from_fn(2, 2, 3, |i, j| match (i, j) {
                (0, 0) => CycloNumber::zeta_pow(3, (x % 3) as i64),
                (1, 1) => CycloNumber::zeta_pow(3, (x / 3) as i64),
                _ => CycloNumber::zero(3),
            })
        })
        .collect();
    let model = LinearActionModel::with_arrangement(MatrixRep::new(g, matrices)?, vec![])?;
    let c = Cocycle2::from_fn(9, 3, |x, y| ((x % 3) * (y / 3)) as u64);
    let r = orbifold_dims(&model, &c, &SectorData::Scalar)?;
    println!(
        "Z3xZ3: twisted {} vs untwisted {}",
        r.twisted_total, r.untwisted_total
    );

    let bundle = bogomolov_example(2, Convention::Involution, 2)?;
    let grp = bundle.group();
    for name in ["e1e2", "e1e3"] {
        let c = bundle.inflate(&bundle.entry(name).expect("catalog entry").base)?;
        let v = verify_cor53(&bundle.model, &c)?;
        let witness = v.witness.map_or("none".to_string(), |(x, h)| {
            format!("{} via {}", grp.label(x), grp.label(h))
        });
        println!(
            "{name}: in B_G {}, sums {} vs {}, termwise equal {}, witness {witness}",
            v.in_bg, v.report.twisted_total, v.report.untwisted_total, v.termwise_equal
        );
    }
    Ok(())
}
