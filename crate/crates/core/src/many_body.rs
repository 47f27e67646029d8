//! Dense N-qudit states and the operations on them: site embedding,
//! collective operators, partial trace and transpose, the average two-body
//! marginal and permutation-symmetry predicates.
//!
//! Site 0 is the leftmost tensor factor, so the computational index is
//! Σ_s a_s d^(N−1−s).

use serde::{Deserialize, Serialize};

use crate::basis::GeneratorBasis;
use crate::error::{Error, Result};
use crate::io::MatrixJson;
use crate::linalg::{kron, min_eigenvalue, ComplexMatrix, C64, ZERO};

pub const STATE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Largest Hilbert-space dimension accepted for a dense state.
pub const MAX_DIM: usize = 2187;

/// A unit-trace Hermitian matrix on (C^d)^⊗N. Positivity is only guaranteed
/// when `is_physical()` is true.
#[derive(Clone, Debug)]
pub struct NQuditState {
    d: usize,
    n_sites: usize,
    rho: ComplexMatrix,
    physical: bool,
}

pub fn hilbert_dim(d: usize, n: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let dim = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(d));
    match dim {
        Some(x) if x <= MAX_DIM && n >= 1 => Ok(x),
        _ => Err(Error::UnsupportedInput(format!(
            "d={d}, N={n} exceeds the dense limit of {MAX_DIM}"
        ))),
    }
}

impl NQuditState {
    /// Validates dimension, Hermiticity and unit trace. The result is a
    /// pseudo-state until [`NQuditState::check_physical`] succeeds.
    pub fn new(d: usize, n_sites: usize, rho: ComplexMatrix) -> Result<Self> {
        let dim = hilbert_dim(d, n_sites)?;
        if rho.dim() != dim {
            return Err(Error::InvariantViolation {
                quantity: "dimension".into(),
                detail: format!("matrix is {0}x{0}, expected {dim} = {d}^{n_sites}", rho.dim()),
            });
        }
        let norm = rho.frobenius_norm();
        let defect = rho.hermiticity_defect();
        if defect > STATE_TOL * norm.max(1.0) {
            return Err(Error::InvariantViolation {
                quantity: "hermiticity".into(),
                detail: format!("defect {defect:.3e}"),
            });
        }
        let tr = rho.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvariantViolation {
                quantity: "trace".into(),
                detail: format!("Tr(rho) = {:.12}{:+.3e}i", tr.re, tr.im),
            });
        }
        Ok(Self {
            d,
            n_sites,
            rho: rho.hermitian_part(),
            physical: false,
        })
    }

    /// Like [`NQuditState::new`], additionally requiring λ_min ≥ −1e-9.
    pub fn new_physical(d: usize, n_sites: usize, rho: ComplexMatrix) -> Result<Self> {
        Self::new(d, n_sites, rho)?.check_physical()
    }

    /// Normalizes a Hermitian matrix with nonzero trace.
    pub fn normalized(d: usize, n_sites: usize, rho: ComplexMatrix) -> Result<Self> {
        let tr = rho.trace().re;
        if tr.abs() < 1e-300 {
            return Err(Error::InvariantViolation {
                quantity: "trace".into(),
                detail: "cannot normalize a traceless matrix".into(),
            });
        }
        Self::new(d, n_sites, rho.scale(1.0 / tr))
    }

    pub fn check_physical(mut self) -> Result<Self> {
        let lmin = min_eigenvalue(&self.rho)?;
        if lmin < -POSITIVITY_TOL {
            return Err(Error::InvariantViolation {
                quantity: "positivity".into(),
                detail: format!("minimum eigenvalue {lmin:.3e}"),
            });
        }
        self.physical = true;
        Ok(self)
    }

    /// Skips validation; for constructions that are correct by design.
    pub(crate) fn trusted(d: usize, n_sites: usize, rho: ComplexMatrix, physical: bool) -> Self {
        debug_assert_eq!(rho.dim(), d.pow(n_sites as u32));
        Self {
            d,
            n_sites,
            rho,
            physical,
        }
    }

    pub fn pure(d: usize, n_sites: usize, psi: &[C64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm2 <= 0.0 {
            return Err(Error::InvariantViolation {
                quantity: "norm".into(),
                detail: "zero vector".into(),
            });
        }
        let dim = hilbert_dim(d, n_sites)?;
        if psi.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: psi.len(),
            });
        }
        let rho = ComplexMatrix::projector(psi).scale(1.0 / norm2);
        Ok(Self::trusted(d, n_sites, rho, true))
    }

    /// ρ_1 ⊗ … ⊗ ρ_N of single-site matrices (each validated).
    pub fn product(factors: &[ComplexMatrix]) -> Result<Self> {
        let first = factors.first().ok_or(Error::TooFewSites { needed: 1, got: 0 })?;
        let d = first.dim();
        let mut physical = true;
        let mut rho = ComplexMatrix::identity(1);
        for f in factors {
            let s = NQuditState::new(d, 1, f.clone())?;
            physical &= min_eigenvalue(&s.rho)? >= -POSITIVITY_TOL;
            rho = kron(&rho, &s.rho);
        }
        Ok(Self::trusted(d, factors.len(), rho, physical))
    }

    pub fn maximally_mixed(d: usize, n_sites: usize) -> Result<Self> {
        let dim = hilbert_dim(d, n_sites)?;
        Ok(Self::trusted(
            d,
            n_sites,
            ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
            true,
        ))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_rho(self) -> ComplexMatrix {
        self.rho
    }

    pub fn is_physical(&self) -> bool {
        self.physical
    }

    pub fn expectation(&self, op: &ComplexMatrix) -> f64 {
        self.rho.expectation(op)
    }

    /// Conjugates every site with the same unitary: U^⊗N ρ U^⊗N†.
    pub fn local_unitary(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != self.d {
            return Err(Error::DimensionMismatch("unitary does not match d".into()));
        }
        let mut rho = self.rho.clone();
        let ud = u.adjoint();
        for site in 0..self.n_sites {
            rho = apply_local_left(u, site, self.n_sites, &rho);
            rho = apply_local_right(&ud, site, self.n_sites, &rho);
        }
        Ok(Self::trusted(self.d, self.n_sites, rho.hermitian_part(), self.physical))
    }

    /// Mixture Σ w_i ρ_i; weights must be nonnegative and sum to one.
    pub fn mixture(states: &[NQuditState], weights: &[f64]) -> Result<Self> {
        let first = states.first().ok_or(Error::TooFewSites { needed: 1, got: 0 })?;
        if weights.len() != states.len() {
            return Err(Error::LengthMismatch {
                expected: states.len(),
                got: weights.len(),
            });
        }
        if weights.iter().any(|&w| w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange("mixture weights must be a probability vector".into()));
        }
        let mut rho = ComplexMatrix::zeros(first.dim());
        let mut physical = true;
        for (s, &w) in states.iter().zip(weights) {
            if s.d != first.d || s.n_sites != first.n_sites {
                return Err(Error::DimensionMismatch("mixture of unequal shapes".into()));
            }
            physical &= s.physical;
            rho.add_scaled(w, &s.rho);
        }
        Ok(Self::trusted(first.d, first.n_sites, rho, physical))
    }

    pub fn to_json(&self) -> Result<String> {
        let j = StateJson {
            d: self.d,
            n: self.n_sites,
            rho: MatrixJson::from(&self.rho),
        };
        crate::io::to_sorted_json(&j)
    }

    /// Parses the `{"d","n","rho"}` format and enforces the state invariants.
    pub fn from_json(text: &str) -> Result<Self> {
        let j: StateJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let rho = j.rho.into_matrix()?;
        Self::new(j.d, j.n, rho)
    }
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    d: usize,
    n: usize,
    rho: MatrixJson,
}

fn digit(index: usize, site: usize, d: usize, n: usize) -> usize {
    (index / d.pow((n - 1 - site) as u32)) % d
}

/// op acting on `site`, identity elsewhere.
pub fn embed_at_site(op: &ComplexMatrix, site: usize, n_sites: usize) -> Result<ComplexMatrix> {
    if site >= n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    let d = op.dim();
    hilbert_dim(d, n_sites)?;
    let left = ComplexMatrix::identity(d.pow(site as u32));
    let right = ComplexMatrix::identity(d.pow((n_sites - site - 1) as u32));
    Ok(kron(&kron(&left, op), &right))
}

/// G_k = Σ_n g_k^(n).
pub fn collective_operator(basis: &GeneratorBasis, k: usize, n_sites: usize) -> Result<ComplexMatrix> {
    let g = basis.get(k)?;
    collective_from_single(g, n_sites)
}

pub fn collective_from_single(g: &ComplexMatrix, n_sites: usize) -> Result<ComplexMatrix> {
    let mut out = embed_at_site(g, 0, n_sites)?;
    for site in 1..n_sites {
        out.add_scaled(1.0, &embed_at_site(g, site, n_sites)?);
    }
    Ok(out)
}

/// (op^(site)) m without forming the embedded operator.
pub fn apply_local_left(op: &ComplexMatrix, site: usize, n_sites: usize, m: &ComplexMatrix) -> ComplexMatrix {
    let d = op.dim();
    let dim = m.dim();
    let stride = d.pow((n_sites - 1 - site) as u32);
    let mut out = ComplexMatrix::zeros(dim);
    let src = m.as_slice();
    let dst = out.as_mut_slice();
    for i in 0..dim {
        let a = (i / stride) % d;
        let base = i - a * stride;
        let orow = &mut dst[i * dim..(i + 1) * dim];
        for b in 0..d {
            let c = op[(a, b)];
            if c == ZERO {
                continue;
            }
            let r = base + b * stride;
            for (o, x) in orow.iter_mut().zip(&src[r * dim..(r + 1) * dim]) {
                *o += c * x;
            }
        }
    }
    out
}

/// m (op^(site)).
pub fn apply_local_right(op: &ComplexMatrix, site: usize, n_sites: usize, m: &ComplexMatrix) -> ComplexMatrix {
    // m op = (op† m†)†
    apply_local_left(&op.adjoint(), site, n_sites, &m.adjoint()).adjoint()
}

/// Tr(op^(site) m) in O(d·dim).
pub fn trace_local(op: &ComplexMatrix, site: usize, n_sites: usize, m: &ComplexMatrix) -> C64 {
    let d = op.dim();
    let dim = m.dim();
    let stride = d.pow((n_sites - 1 - site) as u32);
    let mut acc = ZERO;
    for i in 0..dim {
        let a = (i / stride) % d;
        let base = i - a * stride;
        for b in 0..d {
            acc += op[(a, b)] * m[(base + b * stride, i)];
        }
    }
    acc
}

fn check_sites(sites: &[usize], n_sites: usize) -> Result<()> {
    let mut seen = vec![false; n_sites];
    for &s in sites {
        if s >= n_sites {
            return Err(Error::SiteOutOfRange { site: s, n_sites });
        }
        if seen[s] {
            return Err(Error::InvalidSubset(format!("site {s} listed twice")));
        }
        seen[s] = true;
    }
    Ok(())
}

/// Reduced matrix on `keep`. The kept sites appear in the order given, so
/// `[1, 0]` returns the marginal with its factors swapped.
pub fn partial_trace(state: &NQuditState, keep: &[usize]) -> Result<NQuditState> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    check_sites(keep, state.n_sites)?;
    let rho = partial_trace_matrix(&state.rho, state.d, state.n_sites, keep);
    Ok(NQuditState::trusted(state.d, keep.len(), rho, state.physical))
}

pub(crate) fn partial_trace_matrix(rho: &ComplexMatrix, d: usize, n: usize, keep: &[usize]) -> ComplexMatrix {
    let traced: Vec<usize> = (0..n).filter(|s| !keep.contains(s)).collect();
    let weight = |s: usize| d.pow((n - 1 - s) as u32);
    let compose = |sites: &[usize], idx: usize| -> usize {
        let k = sites.len();
        (0..k)
            .map(|p| ((idx / d.pow((k - 1 - p) as u32)) % d) * weight(sites[p]))
            .sum()
    };
    let dk = d.pow(keep.len() as u32);
    let dt = d.pow(traced.len() as u32);
    let kept_off: Vec<usize> = (0..dk).map(|i| compose(keep, i)).collect();
    let traced_off: Vec<usize> = (0..dt).map(|t| compose(&traced, t)).collect();
    let mut out = ComplexMatrix::zeros(dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = ZERO;
            for &t in &traced_off {
                acc += rho[(kept_off[i] + t, kept_off[j] + t)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Transposes the factors on `subset`.
pub fn partial_transpose(state: &NQuditState, subset: &[usize]) -> Result<ComplexMatrix> {
    if subset.is_empty() || subset.len() >= state.n_sites {
        return Err(Error::InvalidSubset(
            "partial transpose needs a proper nonempty subset".into(),
        ));
    }
    check_sites(subset, state.n_sites)?;
    Ok(partial_transpose_matrix(&state.rho, state.d, state.n_sites, subset))
}

pub(crate) fn partial_transpose_matrix(rho: &ComplexMatrix, d: usize, n: usize, subset: &[usize]) -> ComplexMatrix {
    let dim = rho.dim();
    let part: Vec<usize> = (0..dim)
        .map(|i| {
            subset
                .iter()
                .map(|&s| digit(i, s, d, n) * d.pow((n - 1 - s) as u32))
                .sum()
        })
        .collect();
    ComplexMatrix::from_fn(dim, |i, j| {
        let (si, sj) = (part[i], part[j]);
        rho[(i - si + sj, j - sj + si)]
    })
}

/// Index permutation of the swap of sites a and b.
pub fn swap_permutation(d: usize, n_sites: usize, a: usize, b: usize) -> Vec<usize> {
    let dim = d.pow(n_sites as u32);
    let (wa, wb) = (d.pow((n_sites - 1 - a) as u32), d.pow((n_sites - 1 - b) as u32));
    (0..dim)
        .map(|i| {
            let (da, db) = ((i / wa) % d, (i / wb) % d);
            i - da * wa - db * wb + db * wa + da * wb
        })
        .collect()
}

/// ρ_av2 = (1/(N(N−1))) Σ_{i≠j} ρ_ij, summed pair by pair.
pub fn avg_two_body(state: &NQuditState) -> Result<NQuditState> {
    let n = state.n_sites;
    if n < 2 {
        return Err(Error::TooFewSites { needed: 2, got: n });
    }
    let d = state.d;
    let swap = swap_permutation(d, 2, 0, 1);
    let mut acc = ComplexMatrix::zeros(d * d);
    for i in 0..n {
        for j in i + 1..n {
            let m = partial_trace_matrix(&state.rho, d, n, &[i, j]);
            acc.add_scaled(1.0, &m);
            acc.add_scaled(1.0, &m.permute_indices(&swap));
        }
    }
    let rho = acc.scale(1.0 / (n * (n - 1)) as f64);
    Ok(NQuditState::trusted(d, 2, rho.hermitian_part(), state.physical))
}

/// V ρ = ρ for every adjacent transposition V.
pub fn is_bosonic(state: &NQuditState) -> bool {
    let (d, n) = (state.d, state.n_sites);
    let dim = state.dim();
    (0..n.saturating_sub(1)).all(|a| {
        let p = swap_permutation(d, n, a, a + 1);
        (0..dim).all(|i| {
            let (r, s) = (state.rho.row(p[i]), state.rho.row(i));
            r.iter().zip(s).all(|(x, y)| (x - y).norm() <= STATE_TOL)
        })
    })
}

/// V ρ V† = ρ for every adjacent transposition V.
pub fn is_permutation_invariant(state: &NQuditState) -> bool {
    is_matrix_permutation_invariant(&state.rho, state.d, state.n_sites, STATE_TOL)
}

pub fn is_matrix_permutation_invariant(m: &ComplexMatrix, d: usize, n: usize, tol: f64) -> bool {
    (0..n.saturating_sub(1)).all(|a| {
        let p = swap_permutation(d, n, a, a + 1);
        m.permute_indices(&p).max_abs_diff(m) <= tol
    })
}

/// Orthogonal projector onto the symmetric subspace of (C^d)^⊗N.
pub fn symmetric_projector(d: usize, n_sites: usize) -> Result<ComplexMatrix> {
    let dim = hilbert_dim(d, n_sites)?;
    let key = |i: usize| {
        let mut digits: Vec<usize> = (0..n_sites).map(|s| digit(i, s, d, n_sites)).collect();
        digits.sort_unstable();
        digits
    };
    let mut classes: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
    for i in 0..dim {
        classes.entry(key(i)).or_default().push(i);
    }
    let mut p = ComplexMatrix::zeros(dim);
    for members in classes.values() {
        let w = C64::new(1.0 / members.len() as f64, 0.0);
        for &i in members {
            for &j in members {
                p[(i, j)] = w;
            }
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{flip_operator, gellmann_basis, swap_matrix};
    use crate::linalg::{eigvals_hermitian, ONE};

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    }

    fn random_state(d: usize, n: usize, seed: u64) -> NQuditState {
        let dim = d.pow(n as u32);
        let mut s = seed;
        let a = ComplexMatrix::from_fn(dim, |_, _| C64::new(lcg(&mut s), lcg(&mut s)));
        NQuditState::normalized(d, n, a.matmul(&a.adjoint())).unwrap()
    }

    fn singlet_qubits() -> NQuditState {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [ZERO, C64::new(r, 0.0), C64::new(-r, 0.0), ZERO];
        NQuditState::pure(2, 2, &psi).unwrap()
    }

    #[test]
    fn embedding() {
        let sz = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert_eq!(embed_at_site(&sz, 0, 1).unwrap(), sz);
        let e = embed_at_site(&sz, 0, 2).unwrap();
        assert_eq!(e, kron(&sz, &ComplexMatrix::identity(2)));
        let op = ComplexMatrix::from_fn(3, |i, j| C64::new((i * 3 + j) as f64, 0.0));
        let e = embed_at_site(&op, 1, 3).unwrap();
        assert!((e.trace().re - op.trace().re * 9.0).abs() < 1e-12);
        assert!(matches!(
            embed_at_site(&op, 3, 3),
            Err(Error::SiteOutOfRange { site: 3, n_sites: 3 })
        ));
    }

    #[test]
    fn collective_spectrum() {
        let b = gellmann_basis(2).unwrap();
        assert_eq!(collective_operator(&b, 2, 1).unwrap(), b.generators()[2]);
        let gz = collective_operator(&b, 2, 2).unwrap();
        let ev = eigvals_hermitian(&gz).unwrap();
        let want = [-2.0, 0.0, 0.0, 2.0];
        // σ_z normalization: eigenvalues of σz⊗1 + 1⊗σz
        for (a, w) in ev.iter().zip(want) {
            assert!((a - w).abs() < 1e-12);
        }
        assert!(collective_operator(&b, 3, 2).is_err());
    }

    #[test]
    fn second_moment_bound() {
        let b = gellmann_basis(3).unwrap();
        let gs: Vec<_> = (0..8).map(|k| collective_operator(&b, k, 3).unwrap()).collect();
        let bound = 3.0 * 6.0 * crate::basis::lambda_max(3);
        for seed in 0..100 {
            let s = random_state(3, 3, seed);
            let total: f64 = gs.iter().map(|g| s.expectation(&g.matmul(g))).sum();
            assert!(total <= bound + 1e-9);
        }
    }

    #[test]
    fn local_application_matches_embedding() {
        let s = random_state(3, 3, 7);
        let mut seed = 99;
        let op = ComplexMatrix::from_fn(3, |_, _| C64::new(lcg(&mut seed), lcg(&mut seed)));
        for site in 0..3 {
            let e = embed_at_site(&op, site, 3).unwrap();
            let direct = e.matmul(s.rho());
            assert!(apply_local_left(&op, site, 3, s.rho()).max_abs_diff(&direct) < 1e-12);
            let right = s.rho().matmul(&e);
            assert!(apply_local_right(&op, site, 3, s.rho()).max_abs_diff(&right) < 1e-12);
            assert!((trace_local(&op, site, 3, s.rho()) - direct.trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_cases() {
        let s = random_state(3, 3, 1);
        let all = partial_trace(&s, &[0, 1, 2]).unwrap();
        assert!(all.rho().max_abs_diff(s.rho()) < 1e-15);
        for keep in [&[0][..], &[2], &[0, 2], &[2, 1]] {
            let r = partial_trace(&s, keep).unwrap();
            assert!((r.rho().trace() - ONE).norm() < 1e-12);
            assert!(r.rho().hermiticity_defect() < 1e-12);
        }
        let mut seed = 3;
        let mut pos = |d: usize| {
            let a = ComplexMatrix::from_fn(d, |_, _| C64::new(lcg(&mut seed), lcg(&mut seed)));
            let m = a.matmul(&a.adjoint());
            m.scale(1.0 / m.trace().re)
        };
        let (ra, rb) = (pos(3), pos(3));
        let p = NQuditState::product(&[ra.clone(), rb.clone()]).unwrap();
        assert!(partial_trace(&p, &[0]).unwrap().rho().max_abs_diff(&ra) < 1e-14);
        assert!(partial_trace(&p, &[1]).unwrap().rho().max_abs_diff(&rb) < 1e-14);
        let swapped = partial_trace(&p, &[1, 0]).unwrap();
        assert!(swapped.rho().max_abs_diff(&kron(&rb, &ra)) < 1e-14);
        assert!(matches!(partial_trace(&p, &[]), Err(Error::EmptyKeepSet)));
    }

    #[test]
    fn partial_transpose_cases() {
        let s = singlet_qubits();
        let pt = partial_transpose(&s, &[0]).unwrap();
        let ev = eigvals_hermitian(&pt).unwrap();
        assert!((ev[0] + 0.5).abs() < 1e-12);

        let mut seed = 11;
        let mut pos = || {
            let a = ComplexMatrix::from_fn(3, |_, _| C64::new(lcg(&mut seed), lcg(&mut seed)));
            let m = a.matmul(&a.adjoint());
            m.scale(1.0 / m.trace().re)
        };
        let sep = NQuditState::product(&[pos(), pos()]).unwrap();
        let pt = partial_transpose(&sep, &[1]).unwrap();
        assert!(eigvals_hermitian(&pt).unwrap()[0] >= -1e-10);

        let r = random_state(3, 2, 5);
        let once = partial_transpose(&r, &[0]).unwrap();
        let twice = partial_transpose(&NQuditState::trusted(3, 2, once, false), &[0]).unwrap();
        assert!(twice.max_abs_diff(r.rho()) < 1e-15);

        let r4 = random_state(3, 4, 6);
        for mask in 1u32..15 {
            let subset: Vec<usize> = (0..4).filter(|s| mask >> s & 1 == 1).collect();
            let pt = partial_transpose(&r4, &subset).unwrap();
            assert!((pt.trace() - ONE).norm() < 1e-12);
            assert!(pt.hermiticity_defect() < 1e-12);
        }
        assert!(partial_transpose(&r4, &[0, 1, 2, 3]).is_err());
        assert!(partial_transpose(&r4, &[]).is_err());
    }

    #[test]
    fn two_body_average_of_product() {
        let mut seed = 21;
        let a = ComplexMatrix::from_fn(3, |_, _| C64::new(lcg(&mut seed), lcg(&mut seed)));
        let r0 = a.matmul(&a.adjoint());
        let r0 = r0.scale(1.0 / r0.trace().re);
        let p = NQuditState::product(&[r0.clone(), r0.clone(), r0.clone()]).unwrap();
        let av = avg_two_body(&p).unwrap();
        assert!(av.rho().max_abs_diff(&kron(&r0, &r0)) < 1e-13);
    }

    #[test]
    fn two_body_average_brute_force() {
        let s = random_state(3, 4, 17);
        let av = avg_two_body(&s).unwrap();
        let mut acc = ComplexMatrix::zeros(9);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    acc.add_scaled(1.0, partial_trace(&s, &[i, j]).unwrap().rho());
                }
            }
        }
        assert!(av.rho().max_abs_diff(&acc.scale(1.0 / 12.0)) < 1e-13);
        let f = swap_matrix(3);
        assert!(f.matmul(av.rho()).matmul(&f).max_abs_diff(av.rho()) < 1e-13);
        assert!(matches!(
            avg_two_body(&random_state(3, 1, 1)),
            Err(Error::TooFewSites { .. })
        ));
    }

    #[test]
    fn bosonic_predicates() {
        let psi0 = [ONE, ZERO, ZERO];
        let r0 = ComplexMatrix::projector(&psi0);
        let p = NQuditState::product(&[r0.clone(), r0.clone(), r0]).unwrap();
        assert!(is_bosonic(&p));
        assert!(!is_bosonic(&singlet_qubits()));
        assert!(is_permutation_invariant(&singlet_qubits()));

        // |D_4^(2)⟩
        let mut psi = vec![ZERO; 16];
        for (i, amp) in psi.iter_mut().enumerate() {
            if i.count_ones() == 2 {
                *amp = ONE;
            }
        }
        let dk = NQuditState::pure(2, 4, &psi).unwrap();
        assert!(is_bosonic(&dk));
        let av = avg_two_body(&dk).unwrap();
        assert!((av.expectation(&flip_operator(2).unwrap()) - 1.0).abs() < 1e-12);

        let r = random_state(3, 3, 2);
        assert!(!is_bosonic(&r));
        let f = av.expectation(&flip_operator(2).unwrap());
        assert!(f <= 1.0 + 1e-12);
    }

    #[test]
    fn symmetric_projector_properties() {
        let p = symmetric_projector(3, 3).unwrap();
        assert!(p.matmul(&p).max_abs_diff(&p) < 1e-13);
        assert!((p.trace().re - 10.0).abs() < 1e-12);
        let s = random_state(3, 3, 4);
        let sym = p.matmul(s.rho()).matmul(&p);
        let sym = NQuditState::normalized(3, 3, sym).unwrap();
        assert!(is_bosonic(&sym));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let s = random_state(2, 2, 9);
        let text = s.to_json().unwrap();
        let back = NQuditState::from_json(&text).unwrap();
        assert!(back.rho().max_abs_diff(s.rho()) < 1e-15);

        let bad = r#"{"d":2,"n":1,"rho":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}"#;
        match NQuditState::from_json(bad) {
            Err(Error::InvariantViolation { quantity, .. }) => assert_eq!(quantity, "trace"),
            other => panic!("unexpected {other:?}"),
        }
        let nonherm = r#"{"d":2,"n":1,"rho":[[[0.5,0.0],[0.3,0.0]],[[0.0,0.0],[0.5,0.0]]]}"#;
        match NQuditState::from_json(nonherm) {
            Err(Error::InvariantViolation { quantity, .. }) => assert_eq!(quantity, "hermiticity"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(NQuditState::from_json("{"), Err(Error::Parse(_))));
    }
}
