//! The order-p^7 example: builds the group, its linear action model and
//! the class catalog, then prints the full JSON report.
//!
//! `cargo run --release --example bogomolov -- 3 literal`

use tbk::bogomolov::{bogomolov_example, Convention, DEFAULT_MAX_PRIME};

fn main() -> tbk::Result<()> {
    let mut args = std::env::args().skip(1);
    let p: u64 = args.next().map_or(2, |s| s.parse().expect("prime"));
    let convention: Convention = args
        .next()
        .map_or(Convention::Involution, |s| s.parse().expect("convention"));
    let bundle = bogomolov_example(p, convention, DEFAULT_MAX_PRIME)?;
    eprintln!(
        "built a group of order {} acting in degree {}",
        bundle.group().order(),
        bundle.model.rep().degree()
    );
    let report = tbk::cli::example_report(&bundle)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("serializable")
    );
    Ok(())
}
