//! Entanglement criteria: the su(d)-squeezing parameter and its inequality
//! family, the spin-squeezing inequalities, PPT, CCNR and the Werner-state
//! condition.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::basis::{lambda_max, swap_matrix, GeneratorBasis, SpinOperators};
use crate::correlations::{collective_moments, two_body_bundle, two_body_moments, CollectiveBundle};
use crate::error::{Error, Result};
use crate::linalg::{eig_symmetric, eigvals_hermitian, has_eigenvalue_below, trace_norm, ComplexMatrix, RealMatrix};
use crate::many_body::{is_permutation_invariant, partial_transpose_matrix, NQuditState};

/// Absolute detection threshold on criterion values.
pub const DETECTION_TOL: f64 = 1e-9;

/// Relative eigenvalue cutoff for the sign split of 𝔘.
pub const EIG_RTOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub name: String,
    pub value: f64,
    pub detected: bool,
    /// |value| ≤ tol: the state saturates the criterion.
    pub boundary: bool,
    pub eigenvalues: Vec<f64>,
    pub details: BTreeMap<String, f64>,
}

impl CriterionReport {
    pub fn new(name: &str, value: f64, eigenvalues: Vec<f64>) -> Self {
        let mut r = Self {
            name: name.to_string(),
            value,
            detected: false,
            boundary: false,
            eigenvalues,
            details: BTreeMap::new(),
        };
        r.set_tolerance(DETECTION_TOL);
        r
    }

    /// Recomputes the verdict for another threshold.
    pub fn set_tolerance(&mut self, tol: f64) {
        self.detected = self.value < -tol;
        self.boundary = self.value.abs() <= tol;
    }

    fn detail(mut self, key: &str, v: f64) -> Self {
        self.details.insert(key.to_string(), v);
        self
    }
}

/// Sum of eigenvalues above `tol`, sum below `−tol`, and their counts.
fn sign_split(values: &[f64], tol: f64) -> (f64, f64, usize, usize) {
    let mut out = (0.0, 0.0, 0, 0);
    for &v in values {
        if v > tol {
            out.0 += v;
            out.2 += 1;
        } else if v < -tol {
            out.1 += v;
            out.3 += 1;
        }
    }
    out
}

fn eig_cutoff(values: &[f64]) -> f64 {
    let norm = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    EIG_RTOL * norm.max(1.0)
}

fn require_su(bundle: &CollectiveBundle) -> Result<()> {
    if bundle.dim() != bundle.d * bundle.d - 1 {
        return Err(Error::UnsupportedInput(
            "the squeezing parameter is defined on an su(d) bundle".into(),
        ));
    }
    Ok(())
}

/// ξ = Tr γ − Σ_{λ>0} λ(𝔘) − 2N(d−1), cross-checked against
/// Σ_{λ<0} λ(𝔘) + N(N+d)Λ_max/(N−1) − Tr C/(N−1).
pub fn xi_sud_collective(bundle: &CollectiveBundle) -> Result<CriterionReport> {
    require_su(bundle)?;
    let (n, d) = (bundle.n as f64, bundle.d as f64);
    let values = eig_symmetric(&bundle.u).values;
    let tol = eig_cutoff(&values);
    let (pos, neg, npos, nneg) = sign_split(&values, tol);
    let tr_gamma = bundle.gamma.trace();
    let tr_c = bundle.c.trace();
    let form_pos = tr_gamma - pos - 2.0 * n * (d - 1.0);
    let form_neg = neg + n * (n + d) * lambda_max(bundle.d) / (n - 1.0) - tr_c / (n - 1.0);
    Ok(CriterionReport::new("xi_sud", form_pos, values)
        .detail("form_positive", form_pos)
        .detail("form_negative", form_neg)
        .detail("form_residual", (form_pos - form_neg).abs())
        .detail("trace_gamma", tr_gamma)
        .detail("trace_c", tr_c)
        .detail("n_positive", npos as f64)
        .detail("n_negative", nneg as f64))
}

/// ξ = N²(Σ_{λ<0} λ(γ_av2) + (2/N)(1 − ⟨F⟩)) from a two-site matrix.
pub fn xi_sud_two_body(rho_av2: &NQuditState, n: usize, basis: &GeneratorBasis) -> Result<CriterionReport> {
    if n < 2 {
        return Err(Error::TooFewSites { needed: 2, got: n });
    }
    let tb = two_body_bundle(rho_av2, basis)?;
    let nf = n as f64;
    let values = eig_symmetric(&tb.gamma_av2).values;
    let scaled: Vec<f64> = values.iter().map(|v| v * nf * nf).collect();
    let tol = eig_cutoff(&scaled) / (nf * nf);
    let (_, neg, _, nneg) = sign_split(&values, tol);
    let value = nf * nf * (neg + 2.0 / nf * (1.0 - tb.fexp));
    Ok(CriterionReport::new("xi_sud_two_body", value, values)
        .detail("flip_expectation", tb.fexp)
        .detail("n_negative", nneg as f64))
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityMargin {
    /// Tr γ − Σ_{k∈I} 𝔘_kk − 2N(d−1)
    pub margin: f64,
    /// Σ_{k∉I} 𝔘_kk + N(N+d)Λ_max/(N−1) − Tr C/(N−1)
    pub margin_alt: f64,
    pub residual: f64,
}

/// One member of the su(d) inequality family, selected by the index set I.
pub fn sud_inequality_set(bundle: &CollectiveBundle, subset: &[usize]) -> Result<InequalityMargin> {
    require_su(bundle)?;
    let m = bundle.dim();
    if let Some(&k) = subset.iter().find(|&&k| k >= m) {
        return Err(Error::IndexOutOfRange { index: k, len: m });
    }
    let mut inside = vec![false; m];
    for &k in subset {
        inside[k] = true;
    }
    let (n, d) = (bundle.n as f64, bundle.d as f64);
    let sum_in: f64 = (0..m).filter(|&k| inside[k]).map(|k| bundle.u[(k, k)]).sum();
    let sum_out: f64 = (0..m).filter(|&k| !inside[k]).map(|k| bundle.u[(k, k)]).sum();
    let margin = bundle.gamma.trace() - sum_in - 2.0 * n * (d - 1.0);
    let margin_alt = sum_out + n * (n + d) * lambda_max(bundle.d) / (n - 1.0) - bundle.c.trace() / (n - 1.0);
    Ok(InequalityMargin {
        margin,
        margin_alt,
        residual: (margin - margin_alt).abs(),
    })
}

/// Minimum of the inequality margin over all 2^(d²−1) index sets, evaluated
/// in the frame that diagonalizes 𝔘. Only for d ≤ 3.
pub fn min_margin_enumerated(bundle: &CollectiveBundle) -> Result<(f64, Vec<usize>)> {
    require_su(bundle)?;
    if bundle.d > 3 {
        return Err(Error::UnsupportedInput(
            "explicit facet enumeration is limited to d <= 3".into(),
        ));
    }
    let o = crate::polytope::eigenframe(&bundle.u);
    let rotated = bundle.rotated(&o);
    let m = rotated.dim();
    let mut best = (f64::INFINITY, Vec::new());
    for mask in 0u32..(1 << m) {
        let subset: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 1).collect();
        let margin = sud_inequality_set(&rotated, &subset)?.margin;
        if margin < best.0 {
            best = (margin, subset);
        }
    }
    Ok(best)
}

/// Spin-j moments of an N-site state: (C^J, γ^J, 𝔘^J) with Q₀^J = j(j+1)/3.
pub struct SpinBundle {
    pub n: usize,
    pub j: f64,
    pub jexp: Vec<f64>,
    pub c: RealMatrix,
    pub gamma: RealMatrix,
    pub u: RealMatrix,
}

pub fn spin_bundle(state: &NQuditState, spin: &SpinOperators) -> Result<SpinBundle> {
    if spin.d != state.d() {
        return Err(Error::DimensionMismatch("spin operators do not match d".into()));
    }
    let n = state.n_sites();
    if n < 2 {
        return Err(Error::TooFewSites { needed: 2, got: n });
    }
    let gens: Vec<ComplexMatrix> = spin.components().into_iter().cloned().collect();
    let (jexp, c, raw) = collective_moments(state, &gens);
    let gamma = &c - &RealMatrix::outer(&jexp, &jexp);
    let nf = n as f64;
    // Q + Q₀𝟙 is the raw single-site moment average
    let u = (&(&gamma + &c.scale(1.0 / (nf - 1.0))) - &raw.scale(nf * nf / (nf - 1.0))).symmetrized();
    Ok(SpinBundle {
        n,
        j: spin.j(),
        jexp,
        c,
        gamma,
        u,
    })
}

/// The four generalized spin-squeezing inequalities, reported as margins
/// that are nonnegative for separable states.
pub fn spin_squeezing_set(state: &NQuditState, spin: &SpinOperators) -> Result<CriterionReport> {
    let b = spin_bundle(state, spin)?;
    let nf = b.n as f64;
    let nj = nf * b.j;
    let values = eig_symmetric(&b.u).values;
    let (lmin, lmax) = (values[0], values[values.len() - 1]);
    let tr_c = b.c.trace();
    let tr_g = b.gamma.trace();
    let margins = [
        nj * (nj + 1.0) - tr_c,
        tr_g - nj,
        (nf - 1.0) * lmin - tr_c + nj * (nj + 1.0),
        tr_g - nj - lmax,
    ];
    let value = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let mut r = CriterionReport::new("spin_squeezing", value, values);
    for (i, m) in margins.iter().enumerate() {
        r.details.insert(format!("margin_{}", i + 1), *m);
    }
    Ok(r)
}

/// ξ_J = N²(Σ_{λ<0} λ(γ_av2^J) − (1/N)[Tr(C_av2^J) − j²]).
pub fn xi_spin(rho_av2: &NQuditState, n: usize, spin: &SpinOperators) -> Result<CriterionReport> {
    if rho_av2.n_sites() != 2 || rho_av2.d() != spin.d {
        return Err(Error::DimensionMismatch("xi_spin needs a two-site matrix of matching d".into()));
    }
    let gens: Vec<ComplexMatrix> = spin.components().into_iter().cloned().collect();
    let (jexp, cav2) = two_body_moments(rho_av2.rho(), &gens);
    let gamma = &cav2 - &RealMatrix::outer(&jexp, &jexp);
    let nf = n as f64;
    let values = eig_symmetric(&gamma).values;
    let scaled: Vec<f64> = values.iter().map(|v| v * nf * nf).collect();
    let tol = eig_cutoff(&scaled) / (nf * nf);
    let (_, neg, _, _) = sign_split(&values, tol);
    let j = spin.j();
    let value = nf * nf * (neg - (cav2.trace() - j * j) / nf);
    Ok(CriterionReport::new("xi_spin", value, values).detail("trace_cav2", cav2.trace()))
}

/// One representative subset per bipartition {S, S̄}; S never contains the
/// last site. For permutation-invariant states one subset per size suffices.
pub fn bipartitions(n_sites: usize, permutation_invariant: bool) -> Vec<Vec<usize>> {
    if permutation_invariant {
        return (1..=n_sites / 2).map(|k| (0..k).collect()).collect();
    }
    (1u32..(1 << (n_sites - 1)))
        .map(|mask| (0..n_sites - 1).filter(|s| mask >> s & 1 == 1).collect())
        .collect()
}

/// Minimum eigenvalue of ρ^{T_S} over all bipartitions.
pub fn ppt_all_bipartitions(state: &NQuditState) -> Result<CriterionReport> {
    let n = state.n_sites();
    if n < 2 {
        return Err(Error::TooFewSites { needed: 2, got: n });
    }
    let symmetric = is_permutation_invariant(state);
    let parts = bipartitions(n, symmetric);
    let mut value = f64::INFINITY;
    let mut per_cut = Vec::with_capacity(parts.len());
    for s in &parts {
        let pt = partial_transpose_matrix(state.rho(), state.d(), n, s);
        let lmin = eigvals_hermitian(&pt)?[0];
        per_cut.push(lmin);
        value = value.min(lmin);
    }
    Ok(CriterionReport::new("ppt", value, per_cut)
        .detail("bipartitions_evaluated", parts.len() as f64)
        .detail("permutation_invariant", if symmetric { 1.0 } else { 0.0 }))
}

/// Detection-only PPT test via Cholesky factorization; much cheaper than a
/// full spectrum when only the verdict is needed.
pub fn ppt_detects(state: &NQuditState, tol: f64) -> bool {
    let n = state.n_sites();
    let parts = bipartitions(n, is_permutation_invariant(state));
    parts
        .iter()
        .any(|s| has_eigenvalue_below(&partial_transpose_matrix(state.rho(), state.d(), n, s), -tol))
}

/// R[(i,j),(k,l)] = ρ[(i,k),(j,l)].
pub fn realign_reshuffle(rho: &ComplexMatrix, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, |r, c| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (c / d, c % d);
        rho[(i * d + k, j * d + l)]
    })
}

/// R = (ρF)^{T_b} F.
pub fn realign_flip(rho: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let f = swap_matrix(d);
    partial_transpose_matrix(&rho.matmul(&f), d, 2, &[1]).matmul(&f)
}

/// 1 − Tr|R(ρ)|.
pub fn ccnr(rho2: &NQuditState) -> Result<CriterionReport> {
    if rho2.n_sites() != 2 {
        return Err(Error::DimensionMismatch("CCNR needs a two-site state".into()));
    }
    let d = rho2.d();
    let r = realign_reshuffle(rho2.rho(), d);
    let residual = r.max_abs_diff(&realign_flip(rho2.rho(), d));
    let tn = trace_norm(&r);
    Ok(CriterionReport::new("ccnr", 1.0 - tn, Vec::new())
        .detail("trace_norm", tn)
        .detail("realignment_residual", residual))
}

/// (N−d)/(d(N−1)).
pub fn werner_threshold(n: usize, d: usize) -> f64 {
    let (n, d) = (n as f64, d as f64);
    (n - d) / (d * (n - 1.0))
}

/// ⟨F⟩ − (N−d)/(d(N−1)) for a Werner-type two-body marginal.
pub fn werner_criterion(fexp: f64, n: usize, d: usize) -> CriterionReport {
    let threshold = werner_threshold(n, d);
    CriterionReport::new("werner", fexp - threshold, Vec::new())
        .detail("threshold", threshold)
        .detail("flip_expectation", fexp)
}
