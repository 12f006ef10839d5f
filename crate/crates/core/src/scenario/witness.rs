use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Linear functional A = Σ α_{xyb} P(b|x,y) over a finite prepare-and-measure alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    nx: usize,
    ny: usize,
    nb: usize,
    alpha: Vec<f64>,
}

/// On-disk form: `{"nx":…, "ny":…, "nb":…, "alpha": [[[...]]]}` indexed `alpha[x][y][b]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub nx: usize,
    pub ny: usize,
    pub nb: usize,
    pub alpha: Vec<Vec<Vec<f64>>>,
}

pub const MAX_RAC_BITS: usize = 8;

impl Witness {
    pub fn new(nx: usize, ny: usize, nb: usize, alpha: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 || nb == 0 {
            return Err(Error::Shape("alphabet sizes must be at least 1".into()));
        }
        if alpha.len() != nx * ny * nb {
            return Err(Error::Shape(format!(
                "coefficient table has {} entries, expected {}",
                alpha.len(),
                nx * ny * nb
            )));
        }
        if let Some(v) = alpha.iter().find(|v| !v.is_finite()) {
            return Err(Error::Shape(format!("non-finite coefficient {v}")));
        }
        Ok(Self { nx, ny, nb, alpha })
    }

    pub fn from_doc(doc: &WitnessDoc) -> Result<Self> {
        if doc.alpha.len() != doc.nx {
            return Err(Error::Shape(format!(
                "alpha has {} rows, nx = {}",
                doc.alpha.len(),
                doc.nx
            )));
        }
        let mut flat = Vec::with_capacity(doc.nx * doc.ny * doc.nb);
        for (x, per_x) in doc.alpha.iter().enumerate() {
            if per_x.len() != doc.ny {
                return Err(Error::Shape(format!(
                    "alpha[{x}] has {} entries, ny = {}",
                    per_x.len(),
                    doc.ny
                )));
            }
            for (y, per_y) in per_x.iter().enumerate() {
                if per_y.len() != doc.nb {
                    return Err(Error::Shape(format!(
                        "alpha[{x}][{y}] has {} entries, nb = {}",
                        per_y.len(),
                        doc.nb
                    )));
                }
                flat.extend_from_slice(per_y);
            }
        }
        Self::new(doc.nx, doc.ny, doc.nb, flat)
    }

    pub fn to_doc(&self) -> WitnessDoc {
        WitnessDoc {
            nx: self.nx,
            ny: self.ny,
            nb: self.nb,
            alpha: (0..self.nx)
                .map(|x| {
                    (0..self.ny)
                        .map(|y| (0..self.nb).map(|b| self.coeff(x, y, b)).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: WitnessDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn nb(&self) -> usize {
        self.nb
    }

    #[inline]
    pub fn coeff(&self, x: usize, y: usize, b: usize) -> f64 {
        self.alpha[(x * self.ny + y) * self.nb + b]
    }

    /// N→1 random access code: 1/(N 2^N) on b = x_y, x_y being bit y of x (most significant first).
    pub fn rac(n: usize) -> Result<Self> {
        if !(2..=MAX_RAC_BITS).contains(&n) {
            return Err(Error::Domain {
                name: "N",
                value: n as f64,
            });
        }
        let nx = 1usize << n;
        let w = 1.0 / (n as f64 * nx as f64);
        let mut alpha = vec![0.0; nx * n * 2];
        for x in 0..nx {
            for y in 0..n {
                alpha[(x * n + y) * 2 + rac_bit(x, y, n)] = w;
            }
        }
        Self::new(nx, n, 2, alpha)
    }

    /// Biased 2→1 RAC: score q/2 for x₀⊕x₁ = 0 and (1−q)/2 otherwise, times the 1/2 from uniform y.
    pub fn biased_rac(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::Domain {
                name: "q",
                value: q,
            });
        }
        let mut alpha = vec![0.0; 4 * 2 * 2];
        for x in 0..4 {
            let r = if rac_bit(x, 0, 2) == rac_bit(x, 1, 2) {
                q / 2.0
            } else {
                (1.0 - q) / 2.0
            };
            for y in 0..2 {
                alpha[(x * 2 + y) * 2 + rac_bit(x, y, 2)] = 0.5 * r;
            }
        }
        Self::new(4, 2, 2, alpha)
    }

    /// Three-preparation qubit witness Σ c_{xy} E(x,y) with c_{·0} = [1, 1, −1], c_{·1} = [√3, −√3, 0].
    pub fn example2() -> Self {
        let s3 = 3f64.sqrt();
        let corr = [[1.0, s3], [1.0, -s3], [-1.0, 0.0]];
        Self::from_correlators(&corr.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .expect("static table")
    }

    /// Correlator form Σ c_{xy} (P(0|x,y) − P(1|x,y)) expanded to α_{xyb} = c_{xy} (−1)^b.
    pub fn from_correlators(c: &[Vec<f64>]) -> Result<Self> {
        let nx = c.len();
        let ny = c.first().map_or(0, Vec::len);
        let mut alpha = Vec::with_capacity(nx * ny * 2);
        for row in c {
            if row.len() != ny {
                return Err(Error::Shape("ragged correlator table".into()));
            }
            for &v in row {
                alpha.push(v);
                alpha.push(-v);
            }
        }
        Self::new(nx, ny, 2, alpha)
    }

    /// Builtin registry: `rac2`, `rac3`, `racN`, `biased:q` (or `biased(q)`), `example2`.
    pub fn builtin(name: &str) -> Result<Self> {
        let name = name.strip_prefix("builtin:").unwrap_or(name).trim();
        if name == "example2" {
            return Ok(Self::example2());
        }
        if let Some(rest) = name.strip_prefix("biased") {
            let q = rest
                .trim_start_matches([':', '(', '='])
                .trim_end_matches(')')
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad biased witness `{name}`")))?;
            return Self::biased_rac(q);
        }
        if let Some(rest) = name.strip_prefix("rac") {
            let n = rest
                .trim_start_matches(':')
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad RAC witness `{name}`")))?;
            return Self::rac(n);
        }
        Err(Error::Parse(format!("unknown builtin witness `{name}`")))
    }
}

/// Bit y of the N-bit input x, most significant bit first (x = 2x₀ + x₁ for N = 2).
#[inline]
pub fn rac_bit(x: usize, y: usize, n: usize) -> usize {
    (x >> (n - 1 - y)) & 1
}
