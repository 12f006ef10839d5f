use super::is_identity_multiple;
use crate::error::{Error, Result};
use crate::linalg::{c, eig_hermitian, HermitianOperator, C64};
use crate::quantum::{Povm, State};
use crate::scenario::Witness;

const TIE_TOL: f64 = 1e-12;

/// For each x, the projector onto a top eigenvector of G_x = Σ_{y,b} α_{xyb} M_y^b.
/// If G_x is a multiple of the identity the first computational basis state is returned.
pub fn optimal_states_for_measurements(w: &Witness, povms: &[Povm]) -> Result<Vec<State>> {
    if povms.len() != w.ny() {
        return Err(Error::Shape(format!(
            "{} measurements for ny = {}",
            povms.len(),
            w.ny()
        )));
    }
    let d = povms
        .first()
        .map(Povm::dim)
        .ok_or_else(|| Error::Shape("no measurements".into()))?;
    for p in povms {
        if p.n_outcomes() != w.nb() {
            return Err(Error::Shape(format!(
                "measurement has {} outcomes, nb = {}",
                p.n_outcomes(),
                w.nb()
            )));
        }
    }
    (0..w.nx())
        .map(|x| {
            let mut g = HermitianOperator::zeros(d);
            for (y, p) in povms.iter().enumerate() {
                for (b, e) in p.effects().iter().enumerate() {
                    let a = w.coeff(x, y, b);
                    if a != 0.0 {
                        g = g.try_add(&e.scale(a))?;
                    }
                }
            }
            if is_identity_multiple(&g, TIE_TOL) {
                let mut e0 = vec![c(0.0, 0.0); d];
                e0[0] = c(1.0, 0.0);
                return State::pure(&e0);
            }
            let eig = eig_hermitian(&g)?;
            State::pure(&eig.vectors[0])
        })
        .collect()
}

/// Projective best response: each eigenvector v of the outcome contrast goes to
/// argmax_b Σ_x α_{xyb} ⟨v|ρ_x|v⟩, ties to the smaller b.
pub fn optimal_measurements_for_states(w: &Witness, states: &[State]) -> Result<Vec<Povm>> {
    best_response_measurements(w, states, None)
}

/// As [`optimal_measurements_for_states`]; with more than two outcomes the greedy candidate
/// is only adopted if it beats `previous`.
pub(crate) fn best_response_measurements(
    w: &Witness,
    states: &[State],
    previous: Option<&[Povm]>,
) -> Result<Vec<Povm>> {
    if states.len() != w.nx() {
        return Err(Error::Shape(format!(
            "{} states for nx = {}",
            states.len(),
            w.nx()
        )));
    }
    let d = states[0].dim();
    (0..w.ny())
        .map(|y| {
            let h: Vec<HermitianOperator> = (0..w.nb())
                .map(|b| {
                    let mut acc = HermitianOperator::zeros(d);
                    for (x, s) in states.iter().enumerate() {
                        let a = w.coeff(x, y, b);
                        if a != 0.0 {
                            acc = acc.try_add(&s.rho().scale(a))?;
                        }
                    }
                    Ok(acc)
                })
                .collect::<Result<_>>()?;
            if w.nb() == 2 {
                let basis = eig_hermitian(&h[0].sub(&h[1]))?.vectors;
                return Ok(assign(&basis, &h).0);
            }
            let mut best: Option<(Povm, f64)> = None;
            for contrast in contrasts(&h) {
                let basis = eig_hermitian(&contrast)?.vectors;
                let (povm, value) = assign(&basis, &h);
                if best.as_ref().is_none_or(|(_, v)| value > *v + TIE_TOL) {
                    best = Some((povm, value));
                }
            }
            let (povm, value) = best.expect("at least one contrast");
            if let Some(prev) = previous.and_then(|p| p.get(y)) {
                let old: f64 = prev
                    .effects()
                    .iter()
                    .zip(&h)
                    .map(|(e, hb)| e.trace_with(hb))
                    .sum();
                if old >= value {
                    return Ok(prev.clone());
                }
            }
            Ok(povm)
        })
        .collect()
}

/// H_b for each b and H_b − H_c for b < c.
fn contrasts(h: &[HermitianOperator]) -> Vec<HermitianOperator> {
    let mut out: Vec<HermitianOperator> = h.to_vec();
    for b in 0..h.len() {
        for c in b + 1..h.len() {
            out.push(h[b].sub(&h[c]));
        }
    }
    out
}

fn assign(basis: &[Vec<C64>], h: &[HermitianOperator]) -> (Povm, f64) {
    let mut total = 0.0;
    let outcome: Vec<usize> = basis
        .iter()
        .map(|v| {
            let mut best = (0, h[0].expectation(v));
            for (b, hb) in h.iter().enumerate().skip(1) {
                let e = hb.expectation(v);
                if e > best.1 + TIE_TOL {
                    best = (b, e);
                }
            }
            total += best.1;
            best.0
        })
        .collect();
    (Povm::from_basis_assignment(basis, &outcome, h.len()), total)
}
