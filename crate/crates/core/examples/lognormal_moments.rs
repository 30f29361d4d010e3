//! Laws sharing every moment with the lognormal, and the one that also
//! shares its size-bias scaling.

use std::f64::consts::E;

use sizebias::lognormal::{
    berg_pmf, mixture_reconstruction_check, orbit_moment, orbit_pmf, orbit_size_bias_check,
    size_bias_scaling_check, LognormalMixture, StieltjesDensity,
};

fn main() -> sizebias::Result<()> {
    let o = orbit_pmf(1.3, E, 12)?;
    for k in 1..=3 {
        println!(
            "orbit E X^{k} = {:.10}, lognormal {:.10}",
            orbit_moment(&o, k)?,
            (f64::from(k * k) / 2.0).exp()
        );
    }
    println!("orbit satisfies X* = cX: {}", orbit_size_bias_check(&o)?);

    let berg = berg_pmf(1, E, 12)?;
    println!(
        "Berg E X^2 = {:.10}, satisfies X* = cX: {}",
        berg.moment(2)?,
        size_bias_scaling_check(&berg, E)?
    );

    let s = StieltjesDensity::new(1, 0.5, 1.0)?;
    println!(
        "perturbed density E X^3 = {:.8} vs {:.8}",
        s.moment(3)?,
        4.5f64.exp()
    );

    let mix = LognormalMixture::new(E)?;
    println!("k_c = {:.12}", mix.k_c());
    println!(
        "reconstruction error {:e}",
        mixture_reconstruction_check(E, &[0.3, 1.0, 2.5, 6.0])?
    );
    Ok(())
}
