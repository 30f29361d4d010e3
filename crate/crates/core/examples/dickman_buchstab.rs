//! Laws fixed by adding a uniform: Dickman and Buchstab densities.

use sizebias::inf_div::{buchstab_solve, dickman_solve};

fn main() -> sizebias::Result<()> {
    let g = dickman_solve(1.0, 1e-3, 12.0)?;
    let gamma = 0.577_215_664_901_532_9_f64;
    for x in [0.5, 1.0, 1.5, 2.0, 3.0, 4.0] {
        println!("rho({x}) ~ {:.6}", g.value_at(x) * gamma.exp());
    }
    println!("mass {:.8}, mean {:.8}", g.total_mass(), g.mean());

    let b = buchstab_solve(1.0, 0.5, 1e-3, 15.0)?;
    println!(
        "\nBuchstab a = 1, b = 1/2: atom {:.4}, total mass {:.6}, mean {:.6}",
        b.atom0(),
        b.total_mass(),
        b.mean()
    );
    Ok(())
}
