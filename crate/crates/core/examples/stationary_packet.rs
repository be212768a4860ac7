//! A packet with `c = iω` in a constant oscillator keeps its width forever.

use gaussian_riccati::*;

fn main() -> Result<()> {
    let k = PhysicalConstants::natural();
    let omega = 1.5;
    let model = Model::conservative(k, FrequencyProfile::constant(omega)?)?;
    let c0 = RiccatiVar::new(0.0, omega);
    let run = integrate(&model, SystemState::new(0.0, ClassicalState::new(0.0, 0.0), c0, 0.0), 10.0, 1e-3)?;
    let worst = run.states().iter().map(|s| (s.riccati.0 - c0.0).norm()).fold(0.0, f64::max);
    let u = uncertainties(k, c0)?;
    println!("max |c(t) - c0| = {worst:.3e}");
    println!("var_x = {:.6}, var_p = {:.6}, u_product = {:.6}", u.var_x, u.var_p, u.u_product);
    println!("phase at t = 10: {:.6} (expected {:.6})", run.last().phase, omega * 10.0);
    Ok(())
}
