//! A squeezed packet: the width breathes at twice the trap frequency while
//! the Ermakov invariant and the uncertainty identity hold.

use gaussian_riccati::observables::invariant_series;
use gaussian_riccati::*;

fn main() -> Result<()> {
    let k = PhysicalConstants::natural();
    let model = Model::conservative(k, FrequencyProfile::constant(1.0)?)?;
    let init = SystemState::new(0.0, ClassicalState::new(1.0, 0.0), RiccatiVar::new(0.0, 4.0), 0.0);
    let opts = IntegratorOptions { stride: 500, ..Default::default() };
    let run = integrate_with(&model, init, 2.0 * std::f64::consts::PI, 1e-3, &opts)?;
    println!("{:>8} {:>12} {:>12} {:>12}", "t", "alpha", "u_product", "sr_residual");
    for s in run.states() {
        let u = uncertainties(k, s.riccati)?;
        println!("{:8.3} {:12.6} {:12.6} {:12.3e}", s.t, s.alpha()?, u.u_product, u.sr_residual(k.hbar()));
    }
    println!("invariant drift {:.3e}", invariant_drift(&invariant_series(&run)?));
    Ok(())
}
