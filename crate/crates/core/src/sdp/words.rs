use std::collections::HashMap;

use crate::error::{Error, Result};

/// Letter of an operator word: a (pure) preparation ρ_x or a ±1-valued observable B_y.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    State(usize),
    Obs(usize),
}

pub type Word = Vec<Letter>;

/// Every letter is Hermitian, so the adjoint reverses the word.
pub fn adjoint(w: &[Letter]) -> Word {
    w.iter().rev().copied().collect()
}

/// Canonical form of Tr(w) under B² = 1, ρ² = ρ and cyclicity: the reduced cyclic word's
/// lexicographically smallest rotation.
pub fn trace_canonical(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        push_reduced(&mut out, l);
    }
    // cyclic reduction: the last letter meets the first under the trace
    while out.len() >= 2 && out[0] == out[out.len() - 1] {
        let l = out.pop().expect("len >= 2");
        if matches!(l, Letter::Obs(_)) {
            out.remove(0);
            if out.is_empty() {
                break;
            }
        }
    }
    if out.len() == 2 && out[0] == out[1] {
        if let Letter::Obs(_) = out[0] {
            out.clear();
        } else {
            out.pop();
        }
    }
    min_rotation(out)
}

fn push_reduced(out: &mut Word, l: Letter) {
    match (out.last(), l) {
        (Some(&Letter::Obs(a)), Letter::Obs(b)) if a == b => {
            out.pop();
        }
        (Some(&Letter::State(a)), Letter::State(b)) if a == b => {}
        _ => out.push(l),
    }
}

fn min_rotation(w: Word) -> Word {
    let n = w.len();
    (0..n.max(1))
        .map(|k| {
            let mut r = w[k.min(n)..].to_vec();
            r.extend_from_slice(&w[..k.min(n)]);
            r
        })
        .min()
        .unwrap_or_default()
}

/// Word list indexing the moment matrix χ_ab = Tr(w_a† w_b).
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchySpec {
    pub nx: usize,
    pub ny: usize,
    pub words: Vec<Word>,
}

impl HierarchySpec {
    /// Products Q_i R_j with Q = (1, B₀, B₁, B₀B₁, B₁B₀) and R = (1, ρ_0, …, ρ_{nx−1}); index i·(nx+1) + j.
    pub fn products(nx: usize) -> Self {
        use Letter::*;
        let q: Vec<Word> = vec![
            vec![],
            vec![Obs(0)],
            vec![Obs(1)],
            vec![Obs(0), Obs(1)],
            vec![Obs(1), Obs(0)],
        ];
        let r: Vec<Word> = std::iter::once(vec![])
            .chain((0..nx).map(|x| vec![State(x)]))
            .collect();
        let words = q
            .iter()
            .flat_map(|qi| {
                r.iter().map(move |rj| {
                    let mut w = qi.clone();
                    w.extend_from_slice(rj);
                    w
                })
            })
            .collect();
        Self { nx, ny: 2, words }
    }

    /// The "1 + AB + BB + BBA" level: 1, ρ_x, B_y, ρ_x B_y, B_y B_y' and B_y B_y' ρ_x (y ≠ y').
    pub fn one_ab_bb_bba(nx: usize) -> Self {
        use Letter::*;
        let mut words: Vec<Word> = vec![vec![]];
        words.extend((0..nx).map(|x| vec![State(x)]));
        words.extend((0..2).map(|y| vec![Obs(y)]));
        for x in 0..nx {
            for y in 0..2 {
                words.push(vec![State(x), Obs(y)]);
            }
        }
        words.push(vec![Obs(0), Obs(1)]);
        words.push(vec![Obs(1), Obs(0)]);
        for (y, z) in [(0, 1), (1, 0)] {
            for x in 0..nx {
                words.push(vec![Obs(y), Obs(z), State(x)]);
            }
        }
        Self { nx, ny: 2, words }
    }

    /// Default level: Q×R for four preparations, the 20-word level for three.
    pub fn for_shape(nx: usize, ny: usize) -> Result<Self> {
        if ny != 2 {
            return Err(Error::Shape(format!(
                "swap hierarchy needs two measurements, got {ny}"
            )));
        }
        match nx {
            3 => Ok(Self::one_ab_bb_bba(3)),
            1..=5 => Ok(Self::products(nx)),
            _ => Err(Error::Shape(format!(
                "no hierarchy level for {nx} preparations"
            ))),
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Map from canonical trace monomial to the first (a, b) with Tr(w_a† w_b) equal to it.
    pub fn monomial_index(&self) -> HashMap<Word, (usize, usize)> {
        let mut map = HashMap::new();
        for (a, wa) in self.words.iter().enumerate() {
            for (b, wb) in self.words.iter().enumerate() {
                let mut w = adjoint(wa);
                w.extend_from_slice(wb);
                map.entry(trace_canonical(&w)).or_insert((a, b));
            }
        }
        map
    }

    /// Entry (a, b) with χ_ab = Tr(target).
    pub fn locate(
        &self,
        index: &HashMap<Word, (usize, usize)>,
        target: &[Letter],
    ) -> Result<(usize, usize)> {
        index
            .get(&trace_canonical(target))
            .copied()
            .ok_or_else(|| Error::Shape(format!("moment {target:?} is not in the hierarchy level")))
    }
}

#[cfg(test)]
mod tests {
    use super::Letter::*;
    use super::*;

    #[test]
    fn reductions() {
        assert_eq!(trace_canonical(&[Obs(0), Obs(0)]), vec![]);
        assert_eq!(
            trace_canonical(&[State(1), State(1), Obs(0)]),
            vec![State(1), Obs(0)]
        );
        // cyclic: Tr(B0 ρ B0) = Tr(ρ)
        assert_eq!(trace_canonical(&[Obs(0), State(2), Obs(0)]), vec![State(2)]);
        // Tr(ρ B ρ) = Tr(ρ B) for a projector ρ
        assert_eq!(
            trace_canonical(&[State(0), Obs(1), State(0)]),
            vec![State(0), Obs(1)]
        );
        assert_eq!(
            trace_canonical(&[Obs(1), State(0)]),
            trace_canonical(&[State(0), Obs(1)])
        );
        assert_ne!(
            trace_canonical(&[Obs(0), Obs(1), State(0)]),
            trace_canonical(&[Obs(1), Obs(0), State(0)])
        );
    }

    #[test]
    fn level_sizes() {
        assert_eq!(HierarchySpec::products(4).len(), 25);
        assert_eq!(HierarchySpec::one_ab_bb_bba(3).len(), 20);
        assert!(HierarchySpec::for_shape(4, 3).is_err());
    }

    #[test]
    fn swap_moments_are_present() {
        for spec in [HierarchySpec::products(4), HierarchySpec::one_ab_bb_bba(3)] {
            let idx = spec.monomial_index();
            for x in 0..spec.nx {
                for w in [
                    vec![State(x)],
                    vec![Obs(0), State(x)],
                    vec![Obs(1), State(x)],
                    vec![Obs(0), Obs(1), State(x)],
                    vec![Obs(1), Obs(0), State(x)],
                    vec![Obs(0), Obs(1), Obs(0), State(x)],
                ] {
                    assert!(spec.locate(&idx, &w).is_ok(), "{w:?}");
                }
            }
        }
    }
}
