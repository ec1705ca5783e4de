//! Membership of the catalog classes of the p = 2 example in B_0 and B_G,
//! with witnesses, and the span they generate modulo coboundaries.

use tbk::bogomolov::{bogomolov_example, Convention};
use tbk::brauer::{in_b0, in_bg, in_bg_bicyclic, span_analysis};

fn main() -> tbk::Result<()> {
    let bundle = bogomolov_example(2, Convention::Involution, 2)?;
    let g = bundle.group();
    let open = bundle.model.without_arrangement();
    let mut forms = Vec::new();
    for entry in &bundle.catalog {
        let c = bundle.inflate(&entry.base)?;
        let b0 = in_b0(g, &c)?;
        let bg = in_bg(&bundle.model, &c)?;
        let bic = in_bg_bicyclic(&bundle.model, &c)?;
        let witness = bg.witness.map_or(String::new(), |(x, y)| {
            format!(" witness ({}, {})", g.label(x), g.label(y))
        });
        println!(
            "{:<14} B0 {:<5} B_G {:<5} (bicyclic {:<5}, U = V {:<5}){witness}",
            entry.name,
            b0.member,
            bg.member,
            bic.member,
            in_bg(&open, &c)?.member
        );
        if forms.len() < 6 {
            forms.push(c);
        }
    }
    let span = span_analysis(g, &forms, Some(&bundle.model))?;
    println!(
        "span of the six forms modulo coboundaries: {:?}",
        span.invariant_factors
    );
    Ok(())
}
