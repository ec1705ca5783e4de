//! Twisted group algebra over functions on a finite G-set.

use tbk::cocycle::{twisted_assoc_check, twisted_product, Cocycle2, GSet, TwistedAlgebraElement};
use tbk::cyclo::CycloNumber;
use tbk::grp::named;

fn main() -> tbk::Result<()> {
    let g = named::abelian(&[2, 2]);
    // the first factor swaps points 0 and 1
    let action = (0..4)
        .map(|x| {
            if x % 2 == 1 {
                vec![1, 0, 2]
            } else {
                vec![0, 1, 2]
            }
        })
        .collect();
    let set = GSet::new(&g, action)?;
    let c = Cocycle2::from_fn(4, 2, |x, y| ((x % 2) * (y / 2)) as u64);

    let r = |v: [i64; 3]| {
        v.iter()
            .map(|&k| CycloNumber::from_int(2, k))
            .collect::<Vec<_>>()
    };
    let u = TwistedAlgebraElement::monomial(1, r([1, 2, 0]));
    let v = TwistedAlgebraElement::monomial(2, r([0, 1, 1]));
    let uv = twisted_product(&g, &c, &set, &u, &v);
    let vu = twisted_product(&g, &c, &set, &v, &u);
    let show = |e: &TwistedAlgebraElement| {
        e.terms
            .iter()
            .map(|(k, f)| {
                format!(
                    "{}·[{}]",
                    g.label(*k),
                    f.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    println!("u*v = {}", show(&uv));
    println!("v*u = {}", show(&vu));
    println!(
        "associative for the cocycle: {}",
        twisted_assoc_check(&g, &c, &set, 5)?
    );

    let mut broken = c.clone();
    broken.set(1, 1, 1);
    println!(
        "associative after breaking one entry: {}",
        twisted_assoc_check(&g, &broken, &set, 5)?
    );
    Ok(())
}
