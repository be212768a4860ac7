//! Coherent states from the eigenvalue `z`: closed form, displacement
//! series and the ladder action agree.

use gaussian_riccati::*;

fn main() -> Result<()> {
    let k = PhysicalConstants::natural();
    let model = Model::conservative(k, FrequencyProfile::constant(1.0)?)?;
    let c = RiccatiVar::new(0.3, 2.0);
    let cls = ClassicalState::new(0.8, -0.4);
    let z = z_eigenvalue(&model, cls, c, 0.0, ZLevel::Physical)?;
    println!("z = {:.6} {:+.6}i", z.re(), z.im());

    let psi = coherent_state(k, z, c, 0.0)?;
    let ops = LadderOperators::new(k, c)?;
    let a_psi = ops.annihilate(&psi)?;
    println!("|a psi - z psi| = {:.3e}", a_psi.coefficient_distance(&psi.scale(z.z))?);

    let series = displacement_series(k, z, c, 0.0, 40)?;
    let grid: Vec<f64> = (0..=16).map(|j| -4.0 + 0.5 * j as f64).collect();
    let closed = coherent_closed_form(k, z, c, 0.0, &grid)?;
    let worst = grid.iter().zip(&closed).map(|(&x, v)| (series.state.evaluate(x) - v).norm()).fold(0.0, f64::max);
    println!("max |series - closed form| on grid = {worst:.3e} (tail bound {:.3e})", series.tail_bound);
    for (x, v) in grid.iter().zip(&closed).step_by(2) {
        println!("psi({x:+.1}) = {:+.6e} {:+.6e}i", v.re, v.im);
    }
    Ok(())
}
