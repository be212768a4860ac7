//! One damped packet in three descriptions: the log-NLSE physical frame, the
//! Caldirola-Kanai canonical frame and expanding coordinates.

use gaussian_riccati::transforms::{nl_to_ck_riccati, nl_to_expanding_riccati, physical_to_expanding};
use gaussian_riccati::*;

fn main() -> Result<()> {
    let k = PhysicalConstants::natural();
    let gamma = 0.5;
    let omega = FrequencyProfile::constant(1.0)?;
    let nl = Model::log_nlse(k, gamma, omega.clone())?;
    let ck = Model::caldirola_kanai(k, gamma, omega.clone())?;
    let ex = Model::expanding(k, gamma, omega)?;

    let cls = ClassicalState::new(1.0, 0.0);
    let c = RiccatiVar::new(0.0, 1.0);
    let c_ck = nl_to_ck_riccati(c, 0.0, gamma)?.into_value();
    let c_ex = nl_to_expanding_riccati(c, gamma)?.into_value();
    let q = physical_to_expanding(cls, 0.0, gamma).into_value();

    let i_nl = invariant_from_riccati(&nl, 0.0, cls, c)?.value;
    let i_ck = invariant_from_riccati(&ck, 0.0, cls, c_ck)?.value;
    let i_ex = invariant_from_riccati(&ex, 0.0, q, c_ex)?.value;
    println!("invariants: nl {i_nl:.12} ck {i_ck:.12} expanding {i_ex:.12}");

    let run = integrate(&ck, SystemState::new(0.0, cls, c_ck, 0.0), 20.0, 1e-3)?;
    let u = gaussian_riccati::observables::ck_uncertainty_product(&run)?;
    println!("canonical uncertainty product at t = 20: {:.3e} (hbar^2/4 = 0.25)", u[u.len() - 1]);
    Ok(())
}
