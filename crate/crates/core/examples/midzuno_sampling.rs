//! Midzuno sampling from a CSV population: one draw, then the exact
//! expectation by enumeration against a uniform subset.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sizebias::midzuno::{
    exact_expectation, midzuno_sample, naive_expectation, ratio_estimate, Population,
};

fn main() -> sizebias::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/pop.csv");
    let pop = Population::from_csv(std::fs::File::open(path).expect("bundled data"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let r = midzuno_sample(&pop, 3, &mut rng)?;
    println!("subset {r:?}, estimate {:.6}", ratio_estimate(&pop, &r)?);
    println!("target ratio        {:.12}", pop.ratio());
    println!("Midzuno expectation {:.12}", exact_expectation(&pop, 3)?);
    println!("uniform expectation {:.12}", naive_expectation(&pop, 3)?);
    Ok(())
}
