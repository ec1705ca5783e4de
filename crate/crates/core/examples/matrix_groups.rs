//! Closing a matrix group over a cyclotomic field, then reading off
//! eigenvalues, stabilizers and fixed loci.

use tbk::bogomolov::{pauli_pair, Convention};
use tbk::cyclo::CycloMatrix;
use tbk::rep::{
    build_model, eigen_survey, fixed_locus_survey, line_stabilizer, matrix_closure,
    pointwise_stabilizer,
};

fn main() -> tbk::Result<()> {
    let (p, q, n) = pauli_pair(3, Convention::Involution);
    let h = matrix_closure(&[p.clone(), q.clone()], n, 1000)?;
    println!(
        "<P, Q> in GL(3, Q(zeta_{n})) has order {}",
        h.group().order()
    );

    let spectra = eigen_survey(&h, &h.group().whole())?;
    let first = &spectra[0];
    let shown: Vec<String> = first
        .eigenvalues
        .iter()
        .map(|(l, k)| format!("{l} (x{k})"))
        .collect();
    println!(
        "{} non-scalar elements; element {} has eigenvalues {}",
        spectra.len(),
        first.element,
        shown.join(", ")
    );
    for &(lambda, _) in &first.eigenvalues {
        let line = h.matrix(first.element).eigenspace(lambda)?;
        let fixing = pointwise_stabilizer(&h, &line)?;
        let preserving = line_stabilizer(&h, &line.basis()[0])?;
        println!(
            "  eigenline for {lambda}: fixed pointwise by {} elements, preserved by {}",
            fixing.order(),
            preserving.order()
        );
    }

    // P ⊕ 1 and Q ⊕ 1 acting on C^3 ⊕ C^2: fixed loci by codimension
    let id = CycloMatrix::identity(2, n);
    let gens = [
        CycloMatrix::direct_sum(&[p, id.clone()]),
        CycloMatrix::direct_sum(&[q, id]),
    ];
    let rep = matrix_closure(&gens, n, 1000)?;
    let model = build_model(rep, 3)?;
    let survey = fixed_locus_survey(&model);
    for (codim, spaces) in &survey.by_codim {
        println!("codim {codim}: {} distinct fixed subspaces", spaces.len());
    }
    println!(
        "smallest nontrivial codimension: {:?}",
        survey.min_nontrivial_codim()
    );
    Ok(())
}
