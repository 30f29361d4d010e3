//! Biasing one summand, every factor, or the mixing weights.

use sizebias::dist::size_bias_discrete;
use sizebias::sum_bias::{
    index_distribution, size_bias_mixture, size_biased_product_pmf, size_biased_sum_pmf,
    IndependentSum,
};
use sizebias::DiscreteDist;

fn main() -> sizebias::Result<()> {
    let terms = vec![
        DiscreteDist::new(vec![(0.0, 0.5), (1.0, 0.5)])?,
        DiscreteDist::new(vec![(1.0, 0.2), (2.0, 0.8)])?,
        DiscreteDist::new(vec![(0.0, 0.9), (5.0, 0.1)])?,
    ];
    let s = IndependentSum::new(terms.clone())?;
    println!("P(I = i) = {:?}", index_distribution(&s)?.probs);
    let via_index = size_biased_sum_pmf(&s)?;
    let direct = size_bias_discrete(&s.law()?)?;
    println!("S* via one biased term: {:?}", via_index.atoms());
    println!(
        "largest gap to direct:  {:e}",
        sizebias::dist::max_atom_diff(&via_index, &direct)
    );

    let factors = vec![
        DiscreteDist::new(vec![(1.0, 0.5), (2.0, 0.5)])?,
        DiscreteDist::new(vec![(0.5, 0.5), (3.0, 0.5)])?,
    ];
    println!("\n(XY)* = {:?}", size_biased_product_pmf(&factors)?.atoms());

    let (mix, w) = size_bias_mixture(&terms, &[0.2, 0.3, 0.5])?;
    println!("\nmixture weights after biasing: {w:?}");
    println!("biased mixture mean: {:.6}", mix.mean());
    Ok(())
}
