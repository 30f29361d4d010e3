//! Testing laws on the integers for infinite divisibility.

use sizebias::inf_div::{extract_increment, log_convexity_check};
use sizebias::{DiscreteDist, NamedDist};

fn report(name: &str, d: &DiscreteDist) -> sizebias::Result<()> {
    let r = extract_increment(d)?;
    match r.witness {
        Some((k, m)) => println!("{name:<18} not ID: f_Y({k}) = {m:.6}"),
        None => println!(
            "{name:<18} ID, first increments {:?}",
            &r.raw[..r.raw.len().min(4)]
        ),
    }
    Ok(())
}

fn main() -> sizebias::Result<()> {
    report(
        "Binomial(2, 1/2)",
        &DiscreteDist::from_pmf(&[0.25, 0.5, 0.25])?,
    )?;
    report("Poisson(3)", &NamedDist::Poisson(3.0).tabulate()?)?;
    report("Geometric(0.4)", &NamedDist::Geometric(0.4).tabulate()?)?;

    let zeta: Vec<f64> = (1..2000).map(|k| (k as f64).powi(-3)).collect();
    let total: f64 = zeta.iter().sum();
    let z = DiscreteDist::from_pmf(&zeta.iter().map(|p| p / total).collect::<Vec<_>>())?;
    println!("zeta(3) shifted: log-convex {}", log_convexity_check(&z)?);
    report("zeta(3) shifted", &z)?;
    Ok(())
}
