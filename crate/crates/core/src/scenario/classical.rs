use super::Witness;
use crate::error::{Error, Result};
use crate::exec::Exec;

pub const ENUMERATION_BUDGET: f64 = 1e8;

const CHUNK: usize = 1 << 12;

/// Best deterministic classical strategy with messages in 0..d.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalOptimum {
    pub value: f64,
    /// Message sent for each input x.
    pub encoding: Vec<usize>,
    /// Outcome for each (message, y), flattened as m·ny + y.
    pub decoding: Vec<usize>,
}

/// Branch count d^nx · nb^(d·ny) of the naive enumeration; checked against the budget.
pub fn enumeration_branches(w: &Witness, d: usize) -> f64 {
    (d as f64).powi(w.nx() as i32) * (w.nb() as f64).powi((d * w.ny()) as i32)
}

/// C_d: the exact maximum over deterministic encodings and decodings.
pub fn classical_bound(w: &Witness, d: usize) -> Result<f64> {
    classical_optimum(w, d, Exec::default()).map(|o| o.value)
}

/// Enumerates every encoding; for a fixed encoding the optimal decoding is a per-(message, y) argmax.
/// The result (including tie-breaking to the lowest encoding index) does not depend on `exec`.
pub fn classical_optimum(w: &Witness, d: usize, exec: Exec) -> Result<ClassicalOptimum> {
    if d == 0 {
        return Err(Error::Domain {
            name: "d",
            value: 0.0,
        });
    }
    let branches = enumeration_branches(w, d);
    if branches > ENUMERATION_BUDGET {
        return Err(Error::Budget {
            branches,
            budget: ENUMERATION_BUDGET,
        });
    }
    let total = d.pow(w.nx() as u32);
    let n_chunks = total.div_ceil(CHUNK);
    let best = exec
        .map(n_chunks, |k| {
            let mut scratch = vec![0.0; d * w.ny() * w.nb()];
            let mut best = (f64::NEG_INFINITY, 0usize);
            for e in k * CHUNK..((k + 1) * CHUNK).min(total) {
                let v = encoding_value(w, d, e, &mut scratch);
                if v > best.0 {
                    best = (v, e);
                }
            }
            best
        })
        .into_iter()
        .fold((f64::NEG_INFINITY, 0usize), |acc, b| {
            if b.0 > acc.0 {
                b
            } else {
                acc
            }
        });

    let encoding = digits(best.1, d, w.nx());
    let mut scratch = vec![0.0; d * w.ny() * w.nb()];
    accumulate(w, d, &encoding, &mut scratch);
    let decoding = (0..d * w.ny())
        .map(|my| argmax(&scratch[my * w.nb()..(my + 1) * w.nb()]))
        .collect();
    Ok(ClassicalOptimum {
        value: best.0,
        encoding,
        decoding,
    })
}

fn digits(mut e: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = e % d;
        e /= d;
    }
    out
}

fn accumulate(w: &Witness, d: usize, encoding: &[usize], acc: &mut [f64]) {
    let (ny, nb) = (w.ny(), w.nb());
    debug_assert_eq!(acc.len(), d * ny * nb);
    acc.fill(0.0);
    for (x, &m) in encoding.iter().enumerate() {
        for y in 0..ny {
            for b in 0..nb {
                acc[(m * ny + y) * nb + b] += w.coeff(x, y, b);
            }
        }
    }
}

fn encoding_value(w: &Witness, d: usize, e: usize, scratch: &mut [f64]) -> f64 {
    let encoding = digits(e, d, w.nx());
    accumulate(w, d, &encoding, scratch);
    scratch
        .chunks(w.nb())
        .map(|row| row.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .sum()
}

fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate() {
        if v > row[best] {
            best = i;
        }
    }
    best
}
