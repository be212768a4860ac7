//! A sudden frequency jump and a sampled ramp; the conservative invariant
//! survives both, and so does the phase-adjusted eigenvalue.

use gaussian_riccati::observables::invariant_series;
use gaussian_riccati::*;

fn report(name: &str, omega: FrequencyProfile) -> Result<()> {
    let k = PhysicalConstants::natural();
    let model = Model::conservative(k, omega)?;
    let init = SystemState::new(0.0, ClassicalState::new(0.5, 0.2), RiccatiVar::new(0.0, 1.0), 0.0);
    let opts = IntegratorOptions { stride: 100, ..Default::default() };
    let run = integrate_with(&model, init, 10.0, 1e-4, &opts)?;
    let constancy = phase_adjusted_constancy(&run)?;
    println!(
        "{name:>8}: final alpha {:.6}, invariant drift {:.3e}, z drift {:.3e}",
        run.last().alpha()?,
        invariant_drift(&invariant_series(&run)?),
        constancy.max_drift
    );
    Ok(())
}

fn main() -> Result<()> {
    report("jump", FrequencyProfile::piecewise(vec![5.0], vec![1.0, 2.0])?)?;
    let times: Vec<f64> = (0..=100).map(|k| 0.1 * k as f64).collect();
    let values = times.iter().map(|t| 1.0 + 0.1 * t).collect();
    report("ramp", FrequencyProfile::sampled(times, values)?)?;
    Ok(())
}
