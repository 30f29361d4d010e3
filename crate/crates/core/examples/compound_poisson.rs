//! Building a compound Poisson law from its increment and reading it back.

use sizebias::inf_div::{compound_poisson_from_increment, extract_increment, pmf_recursion};
use sizebias::DiscreteDist;

fn main() -> sizebias::Result<()> {
    let y = DiscreteDist::new(vec![(1.0, 0.6), (2.0, 0.3), (4.0, 0.1)])?;
    let levy = compound_poisson_from_increment(&y, 2.0)?;
    println!("jump rates: {:?}", levy.jumps());
    let fx = pmf_recursion(&levy, 80)?;
    for (k, p) in fx.atoms().iter().take(8) {
        println!("  P(X = {k}) = {p:.8}");
    }
    let back = extract_increment(&fx)?;
    println!(
        "recovered increment: {:?}",
        back.increment.map(|d| d.atoms().to_vec())
    );
    Ok(())
}
