//! Collective correlation matrices C, γ, Q, 𝔘 and the average two-body
//! bundle C_av2, γ_av2, ⟨F⟩.

use serde::Serialize;

use crate::basis::{flip_from_basis, GeneratorBasis};
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, RealMatrix};
use crate::many_body::{apply_local_left, avg_two_body, partial_trace_matrix, trace_local, NQuditState};

/// Q₀ = 2/d, the single-site second moment offset.
pub fn q0(d: usize) -> f64 {
    2.0 / d as f64
}

#[derive(Clone, Debug)]
pub struct CollectiveBundle {
    pub n: usize,
    pub d: usize,
    pub gexp: Vec<f64>,
    pub c: RealMatrix,
    pub gamma: RealMatrix,
    pub q: RealMatrix,
    pub u: RealMatrix,
}

#[derive(Clone, Debug)]
pub struct TwoBodyBundle {
    pub d: usize,
    pub gexp: Vec<f64>,
    pub cav2: RealMatrix,
    pub gamma_av2: RealMatrix,
    pub fexp: f64,
}

fn outer_sub(c: &RealMatrix, g: &[f64]) -> RealMatrix {
    c - &RealMatrix::outer(g, g)
}

/// 𝔘 = γ + C/(N−1) − N²/(N−1)(Q + Q₀𝟙).
pub fn u_matrix(n: usize, d: usize, c: &RealMatrix, gamma: &RealMatrix, q: &RealMatrix) -> RealMatrix {
    let nf = n as f64;
    let m = nf - 1.0;
    let mut u = gamma + &c.scale(1.0 / m);
    u = &u - &q.add_identity(q0(d)).scale(nf * nf / m);
    u.symmetrized()
}

impl CollectiveBundle {
    /// Builds a bundle from already known matrices; 𝔘 is derived.
    pub fn from_parts(n: usize, d: usize, gexp: Vec<f64>, c: RealMatrix, q: RealMatrix) -> Self {
        let gamma = outer_sub(&c, &gexp);
        let u = u_matrix(n, d, &c, &gamma, &q);
        Self {
            n,
            d,
            gexp,
            c,
            gamma,
            q,
            u,
        }
    }

    pub fn dim(&self) -> usize {
        self.gexp.len()
    }

    /// Bundle in the rotated basis g′_k = Σ_l O_kl g_l: X ↦ O X Oᵀ.
    pub fn rotated(&self, o: &RealMatrix) -> CollectiveBundle {
        let conj = |x: &RealMatrix| o.matmul(x).matmul(&o.transpose()).symmetrized();
        let gexp = (0..self.dim())
            .map(|k| (0..self.dim()).map(|l| o[(k, l)] * self.gexp[l]).sum())
            .collect();
        CollectiveBundle {
            n: self.n,
            d: self.d,
            gexp,
            c: conj(&self.c),
            gamma: conj(&self.gamma),
            q: conj(&self.q),
            u: conj(&self.u),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct J {
            n: usize,
            d: usize,
            gexp: Vec<f64>,
            c: Vec<Vec<f64>>,
            gamma: Vec<Vec<f64>>,
            q: Vec<Vec<f64>>,
            u: Vec<Vec<f64>>,
        }
        serde_json::to_value(J {
            n: self.n,
            d: self.d,
            gexp: self.gexp.clone(),
            c: self.c.rows(),
            gamma: self.gamma.rows(),
            q: self.q.rows(),
            u: self.u.rows(),
        })
        .expect("plain numbers serialize")
    }
}

fn check_basis(state_d: usize, basis: &GeneratorBasis) -> Result<()> {
    if basis.d() != state_d {
        return Err(Error::DimensionMismatch(format!(
            "basis has d={}, state has d={state_d}",
            basis.d()
        )));
    }
    Ok(())
}

/// C_kl = ½⟨{G_k,G_l}⟩, γ = C − ⟨G⟩⟨G⟩ᵀ, Q_kl = (1/N)Σ_n(½⟨{g_k,g_l}⁽ⁿ⁾⟩ − Q₀δ_kl)
/// and 𝔘. Works with either basis kind.
pub fn collective_bundle(state: &NQuditState, basis: &GeneratorBasis) -> Result<CollectiveBundle> {
    check_basis(state.d(), basis)?;
    let n = state.n_sites();
    if n < 2 {
        return Err(Error::TooFewSites { needed: 2, got: n });
    }
    let d = state.d();
    let (gexp, c, raw) = collective_moments(state, basis.generators());
    let q = raw.add_identity(-q0(d));
    Ok(CollectiveBundle::from_parts(n, d, gexp, c, q))
}

/// First and second collective moments for an arbitrary operator list:
/// (⟨G_k⟩, ½⟨{G_k,G_l}⟩, (1/N)Σ_n ½⟨{g_k,g_l}⁽ⁿ⁾⟩).
pub fn collective_moments(state: &NQuditState, gens: &[ComplexMatrix]) -> (Vec<f64>, RealMatrix, RealMatrix) {
    let n = state.n_sites();
    let d = state.d();
    let rho = state.rho();
    let m = gens.len();
    let mut gexp = vec![0.0; m];
    let mut c = RealMatrix::zeros(m);
    for (k, gk) in gens.iter().enumerate() {
        // X_k = G_k ρ, then Tr(G_l X_k) one site at a time
        let mut x = apply_local_left(gk, 0, n, rho);
        for site in 1..n {
            x.add_scaled(1.0, &apply_local_left(gk, site, n, rho));
        }
        gexp[k] = x.trace().re;
        for (l, gl) in gens.iter().enumerate().skip(k) {
            let v: f64 = (0..n).map(|site| trace_local(gl, site, n, &x).re).sum();
            c[(k, l)] = v;
            c[(l, k)] = v;
        }
    }
    let mut q = RealMatrix::zeros(m);
    for site in 0..n {
        let r1 = partial_trace_matrix(rho, d, n, &[site]);
        for k in 0..m {
            let rg = r1.matmul(&gens[k]);
            for l in k..m {
                let v = rg.trace_product(&gens[l]).re;
                q[(k, l)] += v;
                if l != k {
                    q[(l, k)] += v;
                }
            }
        }
    }
    (gexp, c, q.scale(1.0 / n as f64))
}

/// Moments of a two-site matrix: ⟨g_k⊗𝟙⟩, ⟨g_k⊗g_l⟩ and ⟨F⟩.
pub fn two_body_bundle(rho2: &NQuditState, basis: &GeneratorBasis) -> Result<TwoBodyBundle> {
    check_basis(rho2.d(), basis)?;
    if rho2.n_sites() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "two-body bundle needs a 2-site matrix, got {} sites",
            rho2.n_sites()
        )));
    }
    let d = rho2.d();
    let rho = rho2.rho();
    let swap = crate::many_body::swap_permutation(d, 2, 0, 1);
    let asym = rho.permute_indices(&swap).max_abs_diff(rho);
    if asym > 1e-9 {
        log::warn!("two-body matrix is not swap symmetric (defect {asym:.2e}); moments are symmetrized");
    }
    let (gexp, cav2) = two_body_moments(rho, basis.generators());
    let gamma_av2 = outer_sub(&cav2, &gexp);
    let fexp = rho.expectation(&flip_from_basis(basis));
    Ok(TwoBodyBundle {
        d,
        gexp,
        cav2,
        gamma_av2,
        fexp,
    })
}

/// (⟨g_k⊗𝟙⟩, ⟨g_k⊗g_l⟩) symmetrized over the two sites, for any operator list.
pub fn two_body_moments(rho: &ComplexMatrix, gens: &[ComplexMatrix]) -> (Vec<f64>, RealMatrix) {
    let d = gens[0].dim();
    let m = gens.len();
    let id = ComplexMatrix::identity(d);
    let gexp: Vec<f64> = gens
        .iter()
        .map(|g| 0.5 * (rho.expectation(&kron(g, &id)) + rho.expectation(&kron(&id, g))))
        .collect();
    let mut cav2 = RealMatrix::zeros(m);
    for k in 0..m {
        for l in k..m {
            let v = 0.5 * (rho.expectation(&kron(&gens[k], &gens[l])) + rho.expectation(&kron(&gens[l], &gens[k])));
            cav2[(k, l)] = v;
            cav2[(l, k)] = v;
        }
    }
    (gexp, cav2)
}

/// 𝔛 = (N−1)𝔘 + N²Q₀𝟙.
pub fn chi_matrix(bundle: &CollectiveBundle) -> RealMatrix {
    let nf = bundle.n as f64;
    bundle.u.scale(nf - 1.0).add_identity(nf * nf * q0(bundle.d))
}

/// 𝔛 = (N−1)γ + C − N²Q, evaluated directly.
pub fn chi_matrix_direct(bundle: &CollectiveBundle) -> RealMatrix {
    let nf = bundle.n as f64;
    &(&bundle.gamma.scale(nf - 1.0) + &bundle.c) - &bundle.q.scale(nf * nf)
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    /// max |𝔘 − N²γ_av2|
    pub u_vs_gamma_av2: f64,
    /// [(N+d)Λ_max − Tr(C)/N]/(N(N−1)), from the collective side.
    pub bosonic_defect_collective: f64,
    /// (2/N)(1 − ⟨F⟩_av2), from the two-body side.
    pub bosonic_defect_two_body: f64,
    pub bosonic_defect_residual: f64,
    /// max |Σ_{n≠m}⟨g_k⁽ⁿ⁾g_l⁽ᵐ⁾⟩ − N(N−1)C_av2|
    pub cross_correlation_residual: f64,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.u_vs_gamma_av2
            .max(self.bosonic_defect_residual)
            .max(self.cross_correlation_residual)
    }
}

/// Residuals of the identities tying the collective matrices to ρ_av2.
pub fn check_identities(state: &NQuditState, basis: &GeneratorBasis) -> Result<IdentityReport> {
    let cb = collective_bundle(state, basis)?;
    let tb = two_body_bundle(&avg_two_body(state)?, basis)?;
    let (n, d) = (cb.n as f64, cb.d as f64);
    let lmax = crate::basis::lambda_max(cb.d);
    let u_vs = cb.u.max_abs_diff(&tb.gamma_av2.scale(n * n));
    let lhs = ((n + d) * lmax - cb.c.trace() / n) / (n * (n - 1.0));
    let rhs = 2.0 / n * (1.0 - tb.fexp);
    let cross = &cb.c - &cb.q.add_identity(q0(cb.d)).scale(n);
    let cross_res = cross.max_abs_diff(&tb.cav2.scale(n * (n - 1.0)));
    Ok(IdentityReport {
        u_vs_gamma_av2: u_vs,
        bosonic_defect_collective: lhs,
        bosonic_defect_two_body: rhs,
        bosonic_defect_residual: (lhs - rhs).abs(),
        cross_correlation_residual: cross_res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{anticomm_basis_d3, gellmann_basis};
    use crate::linalg::C64;
    use crate::many_body::collective_operator;

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

    #[test]
    fn maximally_mixed_pair() {
        let b = gellmann_basis(3).unwrap();
        let s = NQuditState::maximally_mixed(3, 2).unwrap();
        let cb = collective_bundle(&s, &b).unwrap();
        assert!(cb.gexp.iter().all(|x| x.abs() < 1e-14));
        assert!(cb.gamma.max_abs_diff(&cb.c) < 1e-14);
        assert!(cb.u.max_abs() < 1e-13);
        let chi = chi_matrix(&cb);
        assert!(chi.max_abs_diff(&RealMatrix::identity(8).scale(8.0 / 3.0)) < 1e-12);
    }

    #[test]
    fn brute_force_collective_moments() {
        let b = anticomm_basis_d3();
        let s = random_state(3, 3, 4);
        let cb = collective_bundle(&s, &b).unwrap();
        let gs: Vec<_> = (0..8).map(|k| collective_operator(&b, k, 3).unwrap()).collect();
        for k in 0..8 {
            assert!((s.expectation(&gs[k]) - cb.gexp[k]).abs() < 1e-12);
            for l in 0..8 {
                let v = 0.5 * s.expectation(&gs[k].anticommutator(&gs[l]));
                assert!((v - cb.c[(k, l)]).abs() < 1e-11);
            }
        }
        assert!(cb.q.trace().abs() < 1e-9);
        assert!(cb.u.asymmetry() < 1e-12);
        assert!(cb.gamma.max_abs_diff(&(&cb.c - &RealMatrix::outer(&cb.gexp, &cb.gexp))) < 1e-12);
    }

    #[test]
    fn u_equals_scaled_gamma_av2() {
        let b = gellmann_basis(3).unwrap();
        for seed in 0..4 {
            let s = random_state(3, 3, seed);
            let cb = collective_bundle(&s, &b).unwrap();
            let tb = two_body_bundle(&avg_two_body(&s).unwrap(), &b).unwrap();
            assert!(cb.u.max_abs_diff(&tb.gamma_av2.scale(9.0)) < 1e-9);
            let rep = check_identities(&s, &b).unwrap();
            assert!(rep.max_residual() < 1e-8, "{rep:?}");
            assert!(chi_matrix(&cb).max_abs_diff(&chi_matrix_direct(&cb)) < 1e-9);
        }
    }

    #[test]
    fn identities_four_qutrits() {
        let b = gellmann_basis(3).unwrap();
        let s = random_state(3, 4, 8);
        assert!(check_identities(&s, &b).unwrap().max_residual() < 1e-8);
    }

    #[test]
    fn pure_product_two_body() {
        let b = gellmann_basis(3).unwrap();
        let psi = [C64::new(0.6, 0.0), C64::new(0.0, 0.8), C64::new(0.0, 0.0)];
        let r0 = ComplexMatrix::projector(&psi);
        let p = NQuditState::product(&[r0.clone(), r0.clone()]).unwrap();
        let tb = two_body_bundle(&p, &b).unwrap();
        assert!(tb.gamma_av2.max_abs() < 1e-13);
        // ⟨F⟩ on ρ₀⊗ρ₀ is the purity Tr(ρ₀²) = 1
        assert!((tb.fexp - 1.0).abs() < 1e-13);
        assert!((tb.cav2.trace() - 2.0 * (tb.fexp - 1.0 / 3.0)).abs() < 1e-12);
        let cb = collective_bundle(&p, &b).unwrap();
        for k in 0..8 {
            assert!(cb.u[(k, k)] <= 1e-9);
        }
    }

    #[test]
    fn basis_covariance() {
        let b = gellmann_basis(3).unwrap();
        let s = random_state(3, 3, 12);
        let cb = collective_bundle(&s, &b).unwrap();
        // an orthogonal matrix from the eigenvectors of a random symmetric one
        let mut seed = 5;
        let r = RealMatrix::from_fn(8, |_, _| lcg(&mut seed)).symmetrized();
        let o = crate::linalg::eig_symmetric(&r).vectors.transpose();
        let rotated = collective_bundle(&s, &b.apply_orthogonal(&o).unwrap()).unwrap();
        let conj = |x: &RealMatrix| o.matmul(x).matmul(&o.transpose());
        assert!(rotated.c.max_abs_diff(&conj(&cb.c)) < 1e-9);
        assert!(rotated.gamma.max_abs_diff(&conj(&cb.gamma)) < 1e-9);
        assert!(rotated.q.max_abs_diff(&conj(&cb.q)) < 1e-9);
        assert!(rotated.u.max_abs_diff(&conj(&cb.u)) < 1e-9);
    }

    #[test]
    fn extended_basis_zero_row() {
        let b = gellmann_basis(3).unwrap().extend_ud().unwrap();
        let s = random_state(3, 3, 3);
        let cb = collective_bundle(&s, &b).unwrap();
        for k in 0..9 {
            assert!(cb.u[(0, k)].abs() < 1e-10);
            assert!(cb.u[(k, 0)].abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_mismatched_basis() {
        let s = random_state(2, 2, 1);
        let b = gellmann_basis(3).unwrap();
        assert!(matches!(collective_bundle(&s, &b), Err(Error::DimensionMismatch(_))));
    }
}
