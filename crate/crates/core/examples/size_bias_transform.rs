//! Size bias of named families and of an explicit table.

use sizebias::dist::{
    closed_form_size_bias, dominance_check, inverse_size_bias, size_bias_discrete,
};
use sizebias::{DiscreteDist, NamedDist};

fn main() -> sizebias::Result<()> {
    for spec in [
        "poisson:2",
        "binomial:6,0.3",
        "exponential",
        "gamma:2.5",
        "lognormal:0,0.5",
        "uniform",
    ] {
        let d: NamedDist = spec.parse()?;
        println!("{d:<22} -> {}", closed_form_size_bias(&d)?);
    }

    let d = DiscreteDist::new(vec![(1.0, 0.5), (2.0, 0.25), (10.0, 0.25)])?;
    let b = size_bias_discrete(&d)?;
    println!("\nX  = {:?}", d.atoms());
    println!("X* = {:?}", b.atoms());
    println!(
        "E X* = {:.6} = E X^2 / E X = {:.6}",
        b.mean(),
        d.moment(2)? / d.mean()
    );
    println!("X* stochastically dominates X: {}", dominance_check(&d)?);
    println!("inverse recovers X: {:?}", inverse_size_bias(&b)?.atoms());
    Ok(())
}
