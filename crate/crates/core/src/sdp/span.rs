use crate::error::{Error, Result};
use crate::exec::Exec;

/// offset + span{basis}, with an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSpan {
    pub offset: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
    /// Samples consumed while growing the span.
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpanOptions {
    /// Stop once this many consecutive samples leave the rank unchanged.
    pub stable_window: usize,
    pub budget: usize,
    /// Residual norm below which a sample counts as dependent.
    pub tol: f64,
    /// Samples generated per parallel batch.
    pub batch: usize,
    pub exec: Exec,
}

impl Default for SpanOptions {
    fn default() -> Self {
        Self {
            stable_window: 20,
            budget: 2000,
            tol: 1e-9,
            batch: 64,
            exec: Exec::default(),
        }
    }
}

impl AffineSpan {
    fn new(offset: Vec<f64>) -> Self {
        Self {
            offset,
            basis: Vec::new(),
            samples: 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.offset.len()
    }

    /// Residual of v − offset after projection onto the basis (two Gram-Schmidt passes).
    fn residual(&self, v: &[f64]) -> Vec<f64> {
        let mut r: Vec<f64> = v.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        for _ in 0..2 {
            for q in &self.basis {
                let p: f64 = q.iter().zip(&r).map(|(a, b)| a * b).sum();
                r.iter_mut().zip(q).for_each(|(ri, qi)| *ri -= p * qi);
            }
        }
        r
    }

    /// Adds v; returns whether the dimension grew.
    fn push(&mut self, v: &[f64], tol: f64) -> bool {
        self.samples += 1;
        let mut r = self.residual(v);
        let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= tol {
            return false;
        }
        r.iter_mut().for_each(|x| *x /= norm);
        self.basis.push(r);
        true
    }

    /// Distance from v to the affine span.
    pub fn distance(&self, v: &[f64]) -> f64 {
        self.residual(v).iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// offset + Σ_i y_i basis_i
    pub fn point(&self, y: &[f64]) -> Vec<f64> {
        let mut p = self.offset.clone();
        for (yi, q) in y.iter().zip(&self.basis) {
            p.iter_mut().zip(q).for_each(|(pi, qi)| *pi += yi * qi);
        }
        p
    }

    /// Affine span of a fixed sample list (the first sample is the offset).
    pub fn of(samples: &[Vec<f64>], tol: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Precondition(
                "affine span needs at least two samples".into(),
            ));
        }
        let mut span = Self::new(samples[0].clone());
        for s in &samples[1..] {
            if s.len() != span.ambient_dim() {
                return Err(Error::DimensionMismatch {
                    expected: span.ambient_dim(),
                    got: s.len(),
                });
            }
            span.push(s, tol);
        }
        Ok(span)
    }

    /// Grows the span from `sample(k)`, k = 0, 1, …, until the rank has been stable for the
    /// configured window. Samples are generated in parallel batches and added in index order.
    /// `inspect` sees every sample in that order.
    pub fn grow<F, G>(sample: F, mut inspect: G, opts: &SpanOptions) -> Result<Self>
    where
        F: Fn(usize) -> Result<Vec<f64>> + Sync + Send,
        G: FnMut(&[f64]),
    {
        if opts.budget < 2 || opts.stable_window < 1 {
            return Err(Error::Precondition(
                "span budget must allow two samples and a window".into(),
            ));
        }
        let mut span: Option<Self> = None;
        let mut stable = 0;
        let mut next = 0;
        while next < opts.budget {
            let n = opts.batch.max(1).min(opts.budget - next);
            let batch = opts.exec.map(n, |k| sample(next + k));
            next += n;
            for v in batch {
                let v = v?;
                inspect(&v);
                match span.as_mut() {
                    None => span = Some(Self::new(v)),
                    Some(s) => {
                        if s.push(&v, opts.tol) {
                            stable = 0;
                        } else {
                            stable += 1;
                            if stable >= opts.stable_window {
                                return Ok(span.expect("initialised"));
                            }
                        }
                    }
                }
            }
        }
        Err(Error::SpanBudget(opts.budget))
    }
}
