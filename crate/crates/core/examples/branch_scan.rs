//! Classify the stationary width branches over a small (ω, γ) grid.

use gaussian_riccati::*;

fn main() -> Result<()> {
    let k = PhysicalConstants::natural();
    println!("{:>6} {:>6} {:>20} {:>24} {:>8}", "omega", "gamma", "class", "A+", "alpha_eq");
    for omega in [0.0, 0.25, 1.0] {
        for gamma in [0.0, 0.5, 3.0] {
            let model = Model::log_nlse(k, gamma, FrequencyProfile::constant(omega)?)?;
            let r = classify_branch(&model)?;
            let [a, _] = r.a_values();
            let eq = r.equilibrium_alpha.map_or("-".to_string(), |v| format!("{v:.4}"));
            println!("{omega:6.2} {gamma:6.2} {:>20} {:>24} {eq:>8}", r.class.name(), format!("{:.4}{:+.4}i", a.re, a.im));
        }
    }
    Ok(())
}
