//! Poisson approximation and tail bounds from size-bias couplings.

use sizebias::bounds::{
    binomial_poisson_check, concentration_lower, concentration_upper, poisson_lower_tail,
    poisson_upper_tail, tail_iteration, ConcentrationParams,
};

fn main() -> sizebias::Result<()> {
    for (n, p) in [(10, 0.1), (100, 0.02), (20, 0.3)] {
        let (bound, tv) = binomial_poisson_check(n, p)?;
        println!("Bin({n}, {p}) vs Poisson: tv {tv:.6} <= bound {bound:.6}");
    }
    let a = 4.0;
    for x in [6.0, 8.0, 12.0] {
        let cp = ConcentrationParams::new(a, 1.0, x)?;
        let (tight, gauss) = concentration_upper(&cp)?;
        println!(
            "P(X >= {x}): exact {:.3e}, tight {tight:.3e}, gaussian {gauss:.3e}, iterated {:.3e}",
            poisson_upper_tail(a, x),
            tail_iteration(&cp)?
        );
    }
    let (tight, gauss) = concentration_lower(&ConcentrationParams::new(a, 1.0, 1.0)?)?;
    println!(
        "P(X <= 1): exact {:.3e}, tight {tight:.3e}, gaussian {gauss:.3e}",
        poisson_lower_tail(a, 1.0)
    );
    Ok(())
}
