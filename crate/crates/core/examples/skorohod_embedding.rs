//! An exit interval for Brownian motion whose exit law is a given
//! mean-zero distribution.

use sizebias::stochastic::{expected_exit_time, skorohod_coupling, skorohod_exit_pmf};
use sizebias::DiscreteDist;

fn main() -> sizebias::Result<()> {
    let x = DiscreteDist::signed(vec![
        (-3.0, 0.2),
        (-1.0, 0.2),
        (0.0, 0.2),
        (1.0, 0.2),
        (3.0, 0.2),
    ])?;
    let sc = skorohod_coupling(&x)?;
    println!(
        "P(X>0) {:.2}, P(X=0) {:.2}, P(X<0) {:.2}",
        sc.p_plus, sc.p_zero, sc.p_minus
    );
    for (u, v, p) in &sc.uv_atoms {
        println!("  [-{u}, {v}] with probability {p:.4}");
    }
    println!("exit law {:?}", skorohod_exit_pmf(&sc)?.atoms());
    println!(
        "E T = {:.6}, E X^2 = {:.6}",
        expected_exit_time(&sc),
        x.moment(2)?
    );
    Ok(())
}
