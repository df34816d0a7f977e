//! Monte Carlo estimation of the invariant measure of a window on the
//! unit level set, via the shell construction
//!
//!   μ(Ω) = lim_{ε→0} (1/ε) · Leb{ x : f(x) ∈ [1, 1+ε], f(x)^{−1/d}·x ∈ Ω }.
//!
//! The group actions of all three families preserve ambient Lebesgue
//! measure and f, so the shell measure is invariant; the value is only
//! meaningful up to the global normalisation, and every downstream test
//! consumes ratios.
//!
//! Sampling is counter-based: sample i draws from a stream keyed by
//! (seed, i), so estimates are bit-for-bit identical across thread counts.

use crate::enumeration::Window;
use crate::error::{Error, Result};
use crate::intmat::IntMat;
use crate::rng::SplitMix64;
use crate::varieties::{upper_index, PolynomialFamily, QuadraticForm};
use serde::{Deserialize, Serialize};

/// Minimum sample count accepted by the estimator.
pub const MIN_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy)]
pub struct MeasureParams {
    pub epsilon: f64,
    pub samples: u64,
    pub seed: u64,
    pub threads: usize,
}

impl Default for MeasureParams {
    fn default() -> Self {
        MeasureParams {
            epsilon: 0.01,
            samples: 1_000_000,
            seed: 1,
            threads: 1,
        }
    }
}

/// Shell-normalised measure estimate with its sampling error.
/// `std_error` is √(p(1−p)/samples)·vol(B)/ε and is absent when no sample
/// hit the shell (the `no_hits` flag is set instead).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub value: f64,
    pub std_error: Option<f64>,
    pub hits: u64,
    pub samples: u64,
    pub epsilon: f64,
    pub seed: u64,
    pub no_hits: bool,
}

impl MeasureEstimate {
    /// Combined standard error of a difference of two estimates.
    pub fn combined_std_error(&self, other: &MeasureEstimate) -> Option<f64> {
        match (self.std_error, other.std_error) {
            (Some(a), Some(b)) => Some((a * a + b * b).sqrt()),
            _ => None,
        }
    }
}

fn shell_scale(epsilon: f64, degree: u32) -> f64 {
    (1.0 + epsilon).powf(1.0 / degree as f64)
}

/// Minimal axis-aligned box containing {t·w : w ∈ box, t ∈ [1, T]}.
fn shell_box(bounds: &[(f64, f64)], t: f64) -> Vec<(f64, f64)> {
    bounds
        .iter()
        .map(|&(lo, hi)| ((lo).min(t * lo), (hi).max(t * hi)))
        .collect()
}

fn validate(family: &PolynomialFamily, window: &Window, params: &MeasureParams) -> Result<()> {
    if window.dim() != family.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: family.ambient_dim(),
            got: window.dim(),
        });
    }
    if !params.epsilon.is_finite() || params.epsilon <= 0.0 {
        return Err(Error::invalid_argument("epsilon must be positive"));
    }
    if params.samples < MIN_SAMPLES {
        return Err(Error::invalid_argument(format!(
            "samples must be at least {MIN_SAMPLES}"
        )));
    }
    Ok(())
}

/// Core sampler: draw points in `sample_box`, keep those whose f-value is
/// in [1, 1+ε] and whose radial projection satisfies `member`.
fn estimate_shell(
    family: &PolynomialFamily,
    sample_box: &[(f64, f64)],
    member: &(dyn Fn(&[f64]) -> bool + Sync),
    params: &MeasureParams,
) -> Result<MeasureEstimate> {
    let volume: f64 = sample_box.iter().map(|(lo, hi)| hi - lo).product();
    if !volume.is_finite() || volume <= 0.0 {
        return Err(Error::DegenerateWindow);
    }
    let dim = sample_box.len();
    let inv_degree = 1.0 / family.degree() as f64;
    let fmax = 1.0 + params.epsilon;

    let count_chunk = |lo: u64, hi: u64| -> Result<u64> {
        let mut hits = 0u64;
        let mut point = vec![0.0f64; dim];
        let mut proj = vec![0.0f64; dim];
        for i in lo..hi {
            let mut stream = SplitMix64::stream(params.seed, i);
            for (k, &(blo, bhi)) in sample_box.iter().enumerate() {
                point[k] = stream.next_in_range(blo, bhi);
            }
            let v = family.eval_real(&point)?;
            if v < 1.0 || v > fmax {
                continue;
            }
            let scale = v.powf(-inv_degree);
            for k in 0..dim {
                proj[k] = point[k] * scale;
            }
            if member(&proj) {
                hits += 1;
            }
        }
        Ok(hits)
    };

    let threads = params.threads.max(1).min(params.samples as usize);
    let hits = if threads == 1 {
        count_chunk(0, params.samples)?
    } else {
        let chunk = params.samples.div_ceil(threads as u64);
        let ranges: Vec<(u64, u64)> = (0..threads as u64)
            .map(|t| (t * chunk, ((t + 1) * chunk).min(params.samples)))
            .filter(|(lo, hi)| lo < hi)
            .collect();
        let partials: Vec<Result<u64>> = std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&(lo, hi)| scope.spawn(move || count_chunk(lo, hi)))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let mut total = 0u64;
        for p in partials {
            total += p?;
        }
        total
    };

    let n = params.samples as f64;
    let p = hits as f64 / n;
    let scale = volume / params.epsilon;
    let (std_error, no_hits) = if hits == 0 {
        (None, true)
    } else {
        (Some((p * (1.0 - p) / n).sqrt() * scale), false)
    };
    Ok(MeasureEstimate {
        value: p * scale,
        std_error,
        hits,
        samples: params.samples,
        epsilon: params.epsilon,
        seed: params.seed,
        no_hits,
    })
}

/// Shell-measure estimate of a window.
pub fn estimate_measure(
    family: &PolynomialFamily,
    window: &Window,
    params: &MeasureParams,
) -> Result<MeasureEstimate> {
    validate(family, window, params)?;
    let t = shell_scale(params.epsilon, family.degree());
    let sample_box = shell_box(window.bounds(), t);
    estimate_shell(family, &sample_box, &|proj| window.contains(proj), params)
}

/// Shell-measure estimate of the image g(Ω) of a window under a
/// measure-preserving group element, with exact membership testing via
/// g⁻¹ (the image of a box is generally not a box, so rejection sampling
/// over its bounding box is used).
pub fn estimate_measure_transformed(
    family: &PolynomialFamily,
    window: &Window,
    g: &GroupElement,
    params: &MeasureParams,
) -> Result<MeasureEstimate> {
    validate(family, window, params)?;
    let ginv = g.inverse()?;
    let enclosing = transform_window(family, window, g)?;
    let t = shell_scale(params.epsilon, family.degree());
    let sample_box = shell_box(enclosing.bounds(), t);
    let dim = window.dim();
    let member = move |proj: &[f64]| {
        let mut buf = vec![0.0f64; dim];
        ginv.apply_real(proj, &mut buf);
        window.contains(&buf)
    };
    estimate_shell(family, &sample_box, &member, params)
}

/// A level-set symmetry of one family:
/// a pair (A, B) acting by X ↦ A·X·B on the determinant family,
/// a congruence X ↦ Aᵀ·X·A on the Pfaffian family, or a signed coordinate
/// permutation preserving the quadratic form.
#[derive(Debug, Clone)]
pub enum GroupElement {
    DetPair { a: IntMat, b: IntMat },
    PffCongruence { a: IntMat },
    QuadSignedPerm { perm: Vec<usize>, signs: Vec<i8> },
}

impl GroupElement {
    /// X ↦ A·X·B with det A = det B = 1.
    pub fn det_pair(a: IntMat, b: IntMat) -> Result<Self> {
        if a.det()? != 1 || b.det()? != 1 {
            return Err(Error::invalid_argument(
                "determinant-family element needs det A = det B = 1",
            ));
        }
        Ok(GroupElement::DetPair { a, b })
    }

    /// X ↦ Aᵀ·X·A with det A = 1.
    pub fn pff_congruence(a: IntMat) -> Result<Self> {
        if a.det()? != 1 {
            return Err(Error::invalid_argument(
                "pfaffian-family element needs det A = 1",
            ));
        }
        Ok(GroupElement::PffCongruence { a })
    }

    /// (g·x)_i = signs[i] · x_{perm[i]}; must preserve the form.
    pub fn quad_signed_perm(
        form: &QuadraticForm,
        perm: Vec<usize>,
        signs: Vec<i8>,
    ) -> Result<Self> {
        let n = form.dim();
        if perm.len() != n || signs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: perm.len().max(signs.len()),
            });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::invalid_argument("not a permutation"));
            }
            seen[p] = true;
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::invalid_argument("signs must be ±1"));
        }
        // Q(g·x) must equal Q(x): transform coefficients exactly.
        let mut transformed = vec![0i64; n * (n + 1) / 2];
        for i in 0..n {
            for j in i..n {
                let q = form.coeff(i, j);
                if q == 0 {
                    continue;
                }
                // x_i x_j picks up s_i s_j and lands on pair (perm i, perm j).
                let (pi, pj) = (perm[i], perm[j]);
                let (lo, hi) = if pi <= pj { (pi, pj) } else { (pj, pi) };
                let s = (signs[i] * signs[j]) as i64;
                transformed[crate::varieties::coeff_index(n, lo, hi)] += q * s;
            }
        }
        if transformed != form.coeffs() {
            return Err(Error::invalid_argument(
                "signed permutation does not preserve the form",
            ));
        }
        Ok(GroupElement::QuadSignedPerm { perm, signs })
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        match self {
            GroupElement::DetPair { a, b } => Ok(GroupElement::DetPair {
                a: a.inverse_unimodular()?,
                b: b.inverse_unimodular()?,
            }),
            GroupElement::PffCongruence { a } => Ok(GroupElement::PffCongruence {
                a: a.inverse_unimodular()?,
            }),
            GroupElement::QuadSignedPerm { perm, signs } => {
                let n = perm.len();
                let mut iperm = vec![0usize; n];
                let mut isigns = vec![1i8; n];
                for i in 0..n {
                    iperm[perm[i]] = i;
                    isigns[perm[i]] = signs[i];
                }
                Ok(GroupElement::QuadSignedPerm {
                    perm: iperm,
                    signs: isigns,
                })
            }
        }
    }

    /// Apply the linear map to a real ambient vector.
    pub fn apply_real(&self, x: &[f64], out: &mut [f64]) {
        match self {
            GroupElement::DetPair { a, b } => {
                let n = a.size();
                debug_assert_eq!(x.len(), n * n);
                // out = A · X · B
                let mut ax = vec![0.0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = 0.0;
                        for k in 0..n {
                            acc += a[(i, k)] as f64 * x[k * n + j];
                        }
                        ax[i * n + j] = acc;
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = 0.0;
                        for k in 0..n {
                            acc += ax[i * n + k] * b[(k, j)] as f64;
                        }
                        out[i * n + j] = acc;
                    }
                }
            }
            GroupElement::PffCongruence { a } => {
                let k = a.size();
                // Expand the upper triangle, conjugate, re-extract.
                let mut full = vec![0.0; k * k];
                for i in 0..k {
                    for j in i + 1..k {
                        let v = x[upper_index(k, i, j)];
                        full[i * k + j] = v;
                        full[j * k + i] = -v;
                    }
                }
                let mut atx = vec![0.0; k * k];
                for i in 0..k {
                    for j in 0..k {
                        let mut acc = 0.0;
                        for l in 0..k {
                            acc += a[(l, i)] as f64 * full[l * k + j];
                        }
                        atx[i * k + j] = acc;
                    }
                }
                for i in 0..k {
                    for j in i + 1..k {
                        let mut acc = 0.0;
                        for l in 0..k {
                            acc += atx[i * k + l] * a[(l, j)] as f64;
                        }
                        out[upper_index(k, i, j)] = acc;
                    }
                }
            }
            GroupElement::QuadSignedPerm { perm, signs } => {
                for i in 0..perm.len() {
                    out[i] = signs[i] as f64 * x[perm[i]];
                }
            }
        }
    }

    fn expects_dim(&self) -> usize {
        match self {
            GroupElement::DetPair { a, .. } => a.size() * a.size(),
            GroupElement::PffCongruence { a } => {
                let k = a.size();
                k * (k - 1) / 2
            }
            GroupElement::QuadSignedPerm { perm, .. } => perm.len(),
        }
    }
}

/// Minimal axis-aligned bounding box of the image of a window under a
/// group element. Exact for maps sending boxes to boxes (signed
/// permutations); an enclosing box otherwise, in which case invariance
/// tests must rejection-sample via `estimate_measure_transformed`.
pub fn transform_window(
    family: &PolynomialFamily,
    window: &Window,
    g: &GroupElement,
) -> Result<Window> {
    let n = family.ambient_dim();
    if window.dim() != n || g.expects_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: window.dim(),
        });
    }
    let kind_ok = matches!(
        (family, g),
        (
            PolynomialFamily::Determinant { .. },
            GroupElement::DetPair { .. }
        ) | (
            PolynomialFamily::Pfaffian { .. },
            GroupElement::PffCongruence { .. }
        ) | (
            PolynomialFamily::Quadratic(_),
            GroupElement::QuadSignedPerm { .. }
        )
    );
    if !kind_ok {
        return Err(Error::invalid_argument(
            "group element kind does not match the family",
        ));
    }
    // Column i of the matrix of g is g(e_i); accumulate interval images.
    let mut lo = vec![0.0f64; n];
    let mut hi = vec![0.0f64; n];
    let mut basis = vec![0.0f64; n];
    let mut col = vec![0.0f64; n];
    for j in 0..n {
        basis.iter_mut().for_each(|v| *v = 0.0);
        basis[j] = 1.0;
        g.apply_real(&basis, &mut col);
        let (wlo, whi) = window.bounds()[j];
        for i in 0..n {
            let (a, b) = (col[i] * wlo, col[i] * whi);
            lo[i] += a.min(b);
            hi[i] += a.max(b);
        }
    }
    Window::new(lo.into_iter().zip(hi).collect())
}
