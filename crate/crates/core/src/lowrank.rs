//! Singular value decomposition of chrominance planes and rank-truncated
//! reconstruction.

use faer::Mat;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `plane = u * diag(s) * v^T` with `s` sorted non-increasing.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    /// `h x r`, orthonormal columns.
    pub u: DMatrix<f64>,
    pub s: DVector<f64>,
    /// `w x r`, orthonormal columns.
    pub v: DMatrix<f64>,
}

impl SvdFactors {
    pub fn rows(&self) -> usize {
        self.u.nrows()
    }

    pub fn cols(&self) -> usize {
        self.v.nrows()
    }

    /// Number of singular triplets held (`min(h, w)`).
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Default numerical-rank tolerance, `max(h, w) * eps`.
    pub fn default_tolerance(&self) -> f64 {
        self.rows().max(self.cols()) as f64 * f64::EPSILON
    }
}

/// How many singular triplets [`reconstruct`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum RankPolicy {
    /// Every singular value above `tol * s[0]`; `tol = None` means
    /// `max(h, w) * eps`.
    FullNumericalRank {
        tol: Option<f64>,
    },
    FixedK {
        k: usize,
    },
    /// Smallest `k` whose leading squared singular values reach `energy` of
    /// the total.
    EnergyFraction {
        energy: f64,
    },
}

impl Default for RankPolicy {
    fn default() -> Self {
        RankPolicy::FullNumericalRank { tol: None }
    }
}

impl RankPolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RankPolicy::FullNumericalRank { tol: Some(t) } if !(t > 0.0 && t.is_finite()) => Err(
                Error::InvalidConfig(format!("rank tolerance must be positive, got {t}")),
            ),
            RankPolicy::FixedK { k: 0 } => Err(Error::InvalidConfig(
                "fixed rank k must be at least 1".into(),
            )),
            RankPolicy::EnergyFraction { energy } if !(energy > 0.0 && energy <= 1.0) => Err(
                Error::InvalidConfig(format!("energy fraction must be in (0, 1], got {energy}")),
            ),
            _ => Ok(()),
        }
    }

    /// Number of triplets this policy retains from `f`.
    pub fn retained_rank(&self, f: &SvdFactors) -> usize {
        match *self {
            RankPolicy::FullNumericalRank { tol } => {
                numerical_rank(f, tol.unwrap_or_else(|| f.default_tolerance()))
            }
            RankPolicy::FixedK { k } => k.min(f.len()),
            RankPolicy::EnergyFraction { energy } => {
                let total: f64 = f.s.iter().map(|s| s * s).sum();
                if total == 0.0 {
                    return 0;
                }
                let target = energy * total;
                let mut acc = 0.0;
                for (i, s) in f.s.iter().enumerate() {
                    acc += s * s;
                    if acc >= target {
                        return i + 1;
                    }
                }
                f.len()
            }
        }
    }
}

impl std::fmt::Display for RankPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RankPolicy::FullNumericalRank { tol: None } => write!(f, "full"),
            RankPolicy::FullNumericalRank { tol: Some(t) } => write!(f, "full:{t}"),
            RankPolicy::FixedK { k } => write!(f, "k={k}"),
            RankPolicy::EnergyFraction { energy } => write!(f, "energy={energy}"),
        }
    }
}

impl std::str::FromStr for RankPolicy {
    type Err = Error;

    /// Parses `full`, `k=<n>` or `energy=<f>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("unrecognized rank policy {s:?}"));
        let policy = match s.trim() {
            "full" => RankPolicy::FullNumericalRank { tol: None },
            other => match other.split_once('=') {
                Some(("k", n)) => RankPolicy::FixedK {
                    k: n.trim().parse().map_err(|_| bad())?,
                },
                Some(("energy", e)) => RankPolicy::EnergyFraction {
                    energy: e.trim().parse().map_err(|_| bad())?,
                },
                _ => return Err(bad()),
            },
        };
        policy.validate()?;
        Ok(policy)
    }
}

/// Full thin SVD of `plane`.
pub fn svd_decompose(plane: &DMatrix<f64>) -> Result<SvdFactors> {
    if plane.is_empty() {
        return Err(Error::InvalidImage("empty plane".into()));
    }
    if plane.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("plane passed to svd_decompose"));
    }
    let (h, w) = plane.shape();
    let m = Mat::<f64>::from_fn(h, w, |i, j| plane[(i, j)]);
    let svd = m.thin_svd().map_err(|_| Error::SvdNotConverged)?;
    let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
    let r = s.nrows();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    Ok(SvdFactors {
        u: DMatrix::from_fn(h, r, |i, k| u[(i, order[k])]),
        s: DVector::from_fn(r, |k, _| s[order[k]].max(0.0)),
        v: DMatrix::from_fn(w, r, |j, k| v[(j, order[k])]),
    })
}

/// Count of singular values strictly above `tol * s[0]`.
pub fn numerical_rank(f: &SvdFactors, tol: f64) -> usize {
    let Some(&largest) = f.s.iter().next() else {
        return 0;
    };
    if largest <= 0.0 {
        return 0;
    }
    let threshold = tol * largest;
    f.s.iter().filter(|&&s| s > threshold).count()
}

/// Sum of the leading rank-1 terms selected by `policy`.
pub fn reconstruct(f: &SvdFactors, policy: &RankPolicy) -> DMatrix<f64> {
    let k = policy.retained_rank(f);
    truncated(f, k)
}

/// Sum of the first `k` rank-1 terms.
pub fn truncated(f: &SvdFactors, k: usize) -> DMatrix<f64> {
    let k = k.min(f.len());
    if k == 0 {
        return DMatrix::zeros(f.rows(), f.cols());
    }
    let mut us = f.u.columns(0, k).into_owned();
    for (j, mut col) in us.column_iter_mut().enumerate() {
        col *= f.s[j];
    }
    us * f.v.columns(0, k).transpose()
}

/// Row-major plane into a matrix with `height` rows.
pub fn plane_to_matrix(width: usize, height: usize, plane: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(height, width, plane)
}

/// Matrix back to a row-major plane.
pub fn matrix_to_plane(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}
