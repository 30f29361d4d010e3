//! The interval covering an inspection time is size biased.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sizebias::stats::mean_se;
use sizebias::stochastic::{simulate_renewal_inspection, Interarrival};
use sizebias::{DiscreteDist, NamedDist};

fn main() -> sizebias::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let laws = [
        ("Exp(1)", Interarrival::Named(NamedDist::Exponential)),
        (
            "{1, 5} equally",
            Interarrival::Discrete(DiscreteDist::new(vec![(1.0, 0.5), (5.0, 0.5)])?),
        ),
    ];
    for (name, law) in laws {
        let s = simulate_renewal_inspection(&law, 500.0, 50_000, &mut rng)?;
        let (l, lse) = mean_se(&s.iter().map(|x| x.covering_length).collect::<Vec<_>>());
        let (w, wse) = mean_se(&s.iter().map(|x| x.residual_wait).collect::<Vec<_>>());
        println!(
            "{name:<15} mean gap {:.3}, covering {l:.3} +- {lse:.3}, wait {w:.3} +- {wse:.3}",
            law.mean()
        );
    }
    Ok(())
}
