//! Prepare-and-measure scenarios: witnesses, strategies and classical bounds.

mod classical;
mod strategy;
mod witness;

pub use classical::{
    classical_bound, classical_optimum, enumeration_branches, ClassicalOptimum, ENUMERATION_BUDGET,
};
pub use strategy::{example2_ideal_states, rac2_ideal_states, Strategy, StrategyDoc};
pub use witness::{rac_bit, Witness, WitnessDoc, MAX_RAC_BITS};

use crate::error::{Error, Result};

pub fn make_rac_witness(n: usize) -> Result<Witness> {
    Witness::rac(n)
}

pub fn make_biased_rac_witness(q: f64) -> Result<Witness> {
    Witness::biased_rac(q)
}

pub fn make_example2_witness() -> Witness {
    Witness::example2()
}

pub fn probability(strategy: &Strategy, x: usize, y: usize, b: usize) -> Result<f64> {
    strategy.probability(x, y, b)
}

/// A = Σ α_{xyb} P(b|x,y)
pub fn witness_value(w: &Witness, strategy: &Strategy) -> Result<f64> {
    if w.nx() != strategy.nx() || w.ny() != strategy.ny() {
        return Err(Error::Shape(format!(
            "witness is {}x{}, strategy is {}x{}",
            w.nx(),
            w.ny(),
            strategy.nx(),
            strategy.ny()
        )));
    }
    let mut total = 0.0;
    for (y, povm) in strategy.measurements().iter().enumerate() {
        if povm.n_outcomes() != w.nb() {
            return Err(Error::Shape(format!(
                "measurement {y} has {} outcomes, witness expects {}",
                povm.n_outcomes(),
                w.nb()
            )));
        }
        for (x, state) in strategy.states().iter().enumerate() {
            for (b, effect) in povm.effects().iter().enumerate() {
                let a = w.coeff(x, y, b);
                if a != 0.0 {
                    total += a * effect.trace_with(state.rho());
                }
            }
        }
    }
    Ok(total)
}
