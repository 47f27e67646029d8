//! Hamiltonians, thermal states and the named state families: su(d)
//! singlets, noisy singlets, Werner states, ρ_PS3, polytope vertex states and
//! Dicke states. Also the seeded random samplers used by tests and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::basis::{gellmann_basis, lambda_max, spin_matrices, swap_matrix, GeneratorBasis, SpinOperators};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, kron, kron_all, min_eigenvalue, weighted_gram, ComplexMatrix, HermitianEigen, RealMatrix, C64, ONE, ZERO};
use crate::many_body::{apply_local_left, collective_from_single, hilbert_dim, symmetric_projector, NQuditState};

/// G² for the collective operator of a single-site g, built by local
/// application instead of a dense product.
pub fn collective_square(g: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    let big = collective_from_single(g, n)?;
    let mut out = apply_local_left(g, 0, n, &big);
    for site in 1..n {
        out.add_scaled(1.0, &apply_local_left(g, site, n, &big));
    }
    Ok(out)
}

/// H = (1/N) Σ_k G_k².
pub fn hamiltonian_sud_singlet(n: usize, basis: &GeneratorBasis) -> Result<ComplexMatrix> {
    let ones = vec![1.0; basis.len()];
    hamiltonian_random_collective(n, basis, &ones)
}

/// H = (1/N) Σ_k c_k G_k².
pub fn hamiltonian_random_collective(n: usize, basis: &GeneratorBasis, c: &[f64]) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::TooFewSites { needed: 2, got: n });
    }
    if c.len() != basis.len() {
        return Err(Error::LengthMismatch {
            expected: basis.len(),
            got: c.len(),
        });
    }
    let dim = hilbert_dim(basis.d(), n)?;
    let mut h = ComplexMatrix::zeros(dim);
    for (g, &ck) in basis.generators().iter().zip(c) {
        if ck != 0.0 {
            h.add_scaled(ck / n as f64, &collective_square(g, n)?);
        }
    }
    Ok(h.hermitian_part())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpinSign {
    /// +(1/N)(Jx² + Jy² + γJz²)
    Antiferro,
    /// −(1/N)(Jx² + Jy² + γJz²)
    Ferro,
}

/// ±(1/N)(Jx² + Jy² + γ Jz²).
pub fn hamiltonian_spin(n: usize, gamma: f64, sign: SpinSign, spin: &SpinOperators) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::TooFewSites { needed: 2, got: n });
    }
    let s = match sign {
        SpinSign::Antiferro => 1.0,
        SpinSign::Ferro => -1.0,
    } / n as f64;
    let mut h = collective_square(&spin.jx, n)?.scale(s);
    h.add_scaled(s, &collective_square(&spin.jy, n)?);
    if gamma != 0.0 {
        h.add_scaled(s * gamma, &collective_square(&spin.jz, n)?);
    }
    Ok(h.hermitian_part())
}

/// Relative energy window that counts as degenerate.
pub const DEGENERACY_RTOL: f64 = 1e-9;

/// Eigendecomposition of H, reused for every temperature.
#[derive(Clone, Debug)]
pub struct ThermalFamily {
    d: usize,
    n: usize,
    eig: HermitianEigen,
}

/// A block of degenerate eigenvectors [start, end) with its energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyLevel {
    pub energy: f64,
    pub start: usize,
    pub end: usize,
}

impl ThermalFamily {
    pub fn new(h: &ComplexMatrix, d: usize, n: usize) -> Result<Self> {
        if h.dim() != hilbert_dim(d, n)? {
            return Err(Error::DimensionMismatch("Hamiltonian does not match d^N".into()));
        }
        Ok(Self {
            d,
            n,
            eig: eig_hermitian(h)?,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eig
    }

    pub fn ground_energy(&self) -> f64 {
        self.eig.values[0]
    }

    /// Eigenvalues grouped into degenerate levels, ascending.
    pub fn levels(&self) -> Vec<EnergyLevel> {
        let v = &self.eig.values;
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=v.len() {
            let split = i == v.len() || v[i] - v[start] > DEGENERACY_RTOL * v[start].abs().max(1.0);
            if split {
                let energy = v[start..i].iter().sum::<f64>() / (i - start) as f64;
                out.push(EnergyLevel { energy, start, end: i });
                start = i;
            }
        }
        out
    }

    pub fn ground_degeneracy(&self) -> usize {
        self.levels()[0].end
    }

    /// Boltzmann weights per eigenvector; T = 0 mixes the ground level
    /// equally. Weights below 1e-18 of the largest are dropped.
    pub fn weights(&self, t: f64) -> Vec<f64> {
        let v = &self.eig.values;
        let e0 = v[0];
        let mut w: Vec<f64> = if t <= 0.0 {
            let g = self.ground_degeneracy();
            (0..v.len()).map(|i| if i < g { 1.0 } else { 0.0 }).collect()
        } else {
            v.iter().map(|e| (-(e - e0) / t).exp()).collect()
        };
        for x in w.iter_mut() {
            if *x < 1e-18 {
                *x = 0.0;
            }
        }
        let z: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= z);
        w
    }

    pub fn state(&self, t: f64) -> NQuditState {
        let rho = weighted_gram(&self.eig.vectors, &self.weights(t));
        NQuditState::trusted(self.d, self.n, rho, true)
    }
}

/// exp(−H/T)/Z; T = 0 gives the equal mixture over the ground space.
pub fn thermal_state(h: &ComplexMatrix, d: usize, n: usize, t: f64) -> Result<NQuditState> {
    if !(t >= 0.0) {
        return Err(Error::OutOfRange(format!("temperature {t} must be >= 0")));
    }
    Ok(ThermalFamily::new(h, d, n)?.state(t))
}

/// The su(d) singlet: the equal mixture over the zero-energy ground space of
/// (1/N)ΣG_k². It exists only when d divides N.
pub fn sud_singlet(n: usize, d: usize) -> Result<NQuditState> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if n < d || !n.is_multiple_of(d) {
        return Err(Error::SingletNonexistent { d, n });
    }
    let basis = gellmann_basis(d)?;
    let fam = ThermalFamily::new(&hamiltonian_sud_singlet(n, &basis)?, d, n)?;
    let e0 = fam.ground_energy();
    if e0.abs() > 1e-8 {
        return Err(Error::SingletNonexistent { d, n });
    }
    Ok(fam.state(0.0))
}

/// (1−p)ρ_singlet + p𝟙/d^N.
pub fn noisy_singlet(n: usize, d: usize, p_noise: f64) -> Result<NQuditState> {
    check_probability(p_noise)?;
    let s = sud_singlet(n, d)?;
    let dim = s.dim();
    let mut rho = s.into_rho().scale(1.0 - p_noise);
    rho.add_scaled(p_noise / dim as f64, &ComplexMatrix::identity(dim));
    Ok(NQuditState::trusted(d, n, rho, true))
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("noise level {p} not in [0, 1]")));
    }
    Ok(())
}

/// Closed form of the noisy singlet's average two-body matrix:
/// 𝟙⊗𝟙/d² − (1−p)/(2d(N−1)) Σ_k g_k⊗g_k.
pub fn noisy_singlet_marginal(n: usize, d: usize, p_noise: f64) -> Result<NQuditState> {
    check_probability(p_noise)?;
    if n < 2 {
        return Err(Error::TooFewSites { needed: 2, got: n });
    }
    let basis = gellmann_basis(d)?;
    let mut rho = ComplexMatrix::identity(d * d).scale(1.0 / (d * d) as f64);
    let s = -(1.0 - p_noise) / (2.0 * d as f64 * (n as f64 - 1.0));
    for g in basis.generators() {
        rho.add_scaled(s, &kron(g, g));
    }
    let physical = min_eigenvalue(&rho)? >= -1e-10;
    Ok(NQuditState::trusted(d, 2, rho, physical))
}

/// ⟨F⟩ of the noisy singlet marginal, [N − d² + p(d²−1)]/[d(N−1)].
pub fn noisy_singlet_flip(n: usize, d: usize, p_noise: f64) -> f64 {
    let (n, d) = (n as f64, d as f64);
    (n - d * d + p_noise * (d * d - 1.0)) / (d * (n - 1.0))
}

/// Noise level above which the noisy singlet marginal is separable,
/// (d²−N)/(d²−1); nonpositive when N ≥ d².
pub fn marginal_separability_noise(n: usize, d: usize) -> f64 {
    let (n, d) = (n as f64, d as f64);
    (d * d - n) / (d * d - 1.0)
}

/// Noise level at which the squeezing parameter of the noisy singlet
/// crosses zero, d/(d+1).
pub fn singlet_noise_tolerance(d: usize) -> f64 {
    d as f64 / (d as f64 + 1.0)
}

/// [(d−⟨F⟩)𝟙 + (d⟨F⟩−1)F]/(d³−d).
pub fn werner_two_qudit(fexp: f64, d: usize) -> Result<NQuditState> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if !(-1.0..=1.0).contains(&fexp) {
        return Err(Error::OutOfRange(format!("<F> = {fexp} not in [-1, 1]")));
    }
    let df = d as f64;
    let norm = df * df * df - df;
    let mut rho = ComplexMatrix::identity(d * d).scale((df - fexp) / norm);
    rho.add_scaled((df * fexp - 1.0) / norm, &swap_matrix(d));
    Ok(NQuditState::trusted(d, 2, rho, true))
}

/// The two-qutrit state built from ±g_k/√3 Bloch vectors over the eight
/// Gell-Mann directions, normalized to unit trace.
pub fn rho_ps3() -> NQuditState {
    let basis = gellmann_basis(3).expect("d=3 is valid");
    let id3 = ComplexMatrix::identity(3).scale(1.0 / 3.0);
    let s = 1.0 / 3f64.sqrt();
    let mut rho = ComplexMatrix::zeros(9);
    for g in basis.generators() {
        let mut plus = id3.clone();
        plus.add_scaled(s, g);
        let mut minus = id3.clone();
        minus.add_scaled(-s, g);
        rho.add_scaled(1.0, &kron(&plus, &minus));
        rho.add_scaled(1.0, &kron(&minus, &plus));
    }
    let rho = rho.scale(1.0 / 16.0);
    let physical = min_eigenvalue(&rho).map(|l| l >= -1e-10).unwrap_or(false);
    NQuditState::trusted(3, 2, rho, physical)
}

/// Single-particle factors ρ_±,k of the polytope vertex states and the
/// mixing data derived from ⟨G⟩.
#[derive(Clone, Debug)]
pub struct VertexFactors {
    pub k: usize,
    pub rho_plus: ComplexMatrix,
    pub rho_minus: ComplexMatrix,
    /// c_k = √(Λ_max − Σ_{r≠k} ⟨G_r⟩²/N²)
    pub c_k: f64,
    /// Λ = Λ_max − |⟨G⟩|²/N²
    pub lambda: f64,
    pub kappa: f64,
    /// Solves 4p(1−p) = κ.
    pub p: f64,
    /// N·p
    pub n_plus_exact: f64,
    /// ⌊N·p⌋
    pub n_plus: usize,
    /// N·p − ⌊N·p⌋
    pub epsilon: f64,
    /// Both factors positive semidefinite.
    pub physical: bool,
}

pub fn feasibility(gexp: &[f64], n: usize, d: usize) -> Result<f64> {
    let norm2 = gexp.iter().map(|g| g * g).sum::<f64>() / (n * n) as f64;
    let max = lambda_max(d);
    if norm2 > max * (1.0 + 1e-12) {
        return Err(Error::InfeasibleGexp { norm2, max });
    }
    Ok((max - norm2).max(0.0))
}

/// ρ_±,k = 𝟙/d ± (c_k/2)g_k + ½Σ_{r≠k}(⟨G_r⟩/N)g_r.
pub fn vertex_factors(k: usize, basis: &GeneratorBasis, gexp: &[f64], n: usize) -> Result<VertexFactors> {
    let d = basis.d();
    let m = basis.len();
    if gexp.len() != m {
        return Err(Error::LengthMismatch { expected: m, got: gexp.len() });
    }
    if k >= m {
        return Err(Error::IndexOutOfRange { index: k, len: m });
    }
    if n < 2 {
        return Err(Error::TooFewSites { needed: 2, got: n });
    }
    let lambda = feasibility(gexp, n, d)?;
    let nf = n as f64;
    let lmax = lambda_max(d);
    let others: f64 = (0..m).filter(|&r| r != k).map(|r| (gexp[r] / nf).powi(2)).sum();
    let c_k = (lmax - others).max(0.0).sqrt();
    let kappa = lambda / lmax;
    let root = (1.0 - kappa).max(0.0).sqrt();
    let p = if gexp[k] < 0.0 { (1.0 - root) / 2.0 } else { (1.0 + root) / 2.0 };
    let n_plus_exact = nf * p;
    let n_plus = (n_plus_exact + 1e-9).floor() as usize;
    let epsilon = (n_plus_exact - n_plus as f64).max(0.0);

    let mut common = ComplexMatrix::identity(d).scale(1.0 / d as f64);
    for r in (0..m).filter(|&r| r != k) {
        common.add_scaled(0.5 * gexp[r] / nf, &basis.generators()[r]);
    }
    let mut rho_plus = common.clone();
    rho_plus.add_scaled(0.5 * c_k, &basis.generators()[k]);
    let mut rho_minus = common;
    rho_minus.add_scaled(-0.5 * c_k, &basis.generators()[k]);
    let physical = min_eigenvalue(&rho_plus)? >= -1e-10 && min_eigenvalue(&rho_minus)? >= -1e-10;
    Ok(VertexFactors {
        k,
        rho_plus,
        rho_minus,
        c_k,
        lambda,
        kappa,
        p,
        n_plus_exact,
        n_plus,
        epsilon,
        physical,
    })
}

fn power(m: &ComplexMatrix, times: usize) -> ComplexMatrix {
    (0..times).fold(ComplexMatrix::identity(1), |acc, _| kron(&acc, m))
}

/// p ρ₊^⊗N + (1−p) ρ₋^⊗N.
pub fn vertex_state_a(k: usize, basis: &GeneratorBasis, gexp: &[f64], n: usize) -> Result<(NQuditState, VertexFactors)> {
    let f = vertex_factors(k, basis, gexp, n)?;
    hilbert_dim(basis.d(), n)?;
    let mut rho = power(&f.rho_plus, n).scale(f.p);
    rho.add_scaled(1.0 - f.p, &power(&f.rho_minus, n));
    Ok((NQuditState::trusted(basis.d(), n, rho, f.physical), f))
}

/// ρ₊^⊗N₊ ⊗ ρ₋^⊗(N−N₊) with N₊ = ⌊Np⌋; the rounding is recorded in ε.
pub fn vertex_state_b(k: usize, basis: &GeneratorBasis, gexp: &[f64], n: usize) -> Result<(NQuditState, VertexFactors)> {
    let f = vertex_factors(k, basis, gexp, n)?;
    hilbert_dim(basis.d(), n)?;
    let rho = kron(&power(&f.rho_plus, f.n_plus), &power(&f.rho_minus, n - f.n_plus));
    Ok((NQuditState::trusted(basis.d(), n, rho, f.physical), f))
}

/// Symmetric N-qubit Dicke state with m excitations (|1⟩ = index 1).
pub fn dicke_state(n: usize, m: usize) -> Result<NQuditState> {
    if m > n {
        return Err(Error::OutOfRange(format!("m = {m} exceeds N = {n}")));
    }
    let dim = hilbert_dim(2, n)?;
    let psi: Vec<C64> = (0..dim)
        .map(|i| if i.count_ones() as usize == m { ONE } else { ZERO })
        .collect();
    NQuditState::pure(2, n, &psi)
}

/// Maps each qubit pair to spin 1: |11⟩→|+1⟩, (|01⟩+|10⟩)/√2→|0⟩, |00⟩→|−1⟩.
pub fn spin1_map(state: &NQuditState) -> Result<NQuditState> {
    if state.d() != 2 || !state.n_sites().is_multiple_of(2) {
        return Err(Error::UnsupportedInput("spin-1 map needs an even number of qubits".into()));
    }
    let n = state.n_sites() / 2;
    let out_dim = hilbert_dim(3, n)?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    // pair index (2 qubits) entries of the isometry column for m = +1, 0, −1
    let local: [Vec<(usize, f64)>; 3] = [vec![(3, 1.0)], vec![(1, r), (2, r)], vec![(0, 1.0)]];
    let columns: Vec<Vec<(usize, f64)>> = (0..out_dim)
        .map(|a| {
            let mut col = vec![(0usize, 1.0f64)];
            for s in 0..n {
                let digit = (a / 3usize.pow((n - 1 - s) as u32)) % 3;
                col = col
                    .iter()
                    .flat_map(|&(i, w)| local[digit].iter().map(move |&(j, v)| (i * 4 + j, w * v)))
                    .collect();
            }
            col
        })
        .collect();
    let rho = state.rho();
    let mapped = ComplexMatrix::from_fn(out_dim, |a, b| {
        let mut acc = ZERO;
        for &(i, wi) in &columns[a] {
            for &(j, wj) in &columns[b] {
                acc += rho[(i, j)] * (wi * wj);
            }
        }
        acc
    });
    let lost = (state.rho().trace().re - mapped.trace().re).abs();
    if lost > 1e-9 {
        return Err(Error::UnsupportedInput(format!(
            "state has weight {lost:.3e} outside the symmetric pair subspace"
        )));
    }
    Ok(NQuditState::trusted(3, n, mapped, state.is_physical()))
}

/// Seeded random generator used across the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_gaussian<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Haar-random unit vector.
pub fn random_pure_vector<R: Rng>(dim: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Ginibre-induced random density matrix of the given rank.
pub fn random_density_matrix<R: Rng>(dim: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let rank = rank.clamp(1, dim);
    let mut a = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..rank {
            a[(i, j)] = complex_gaussian(rng);
        }
    }
    let m = a.matmul(&a.adjoint());
    m.scale(1.0 / m.trace().re)
}

pub fn random_state<R: Rng>(d: usize, n: usize, rng: &mut R) -> Result<NQuditState> {
    let dim = hilbert_dim(d, n)?;
    Ok(NQuditState::trusted(d, n, random_density_matrix(dim, dim, rng), true))
}

/// Product of Haar-random pure single-site states.
pub fn random_pure_product<R: Rng>(d: usize, n: usize, rng: &mut R) -> Result<NQuditState> {
    hilbert_dim(d, n)?;
    let factors: Vec<ComplexMatrix> = (0..n)
        .map(|_| ComplexMatrix::projector(&random_pure_vector(d, rng)))
        .collect();
    Ok(NQuditState::trusted(d, n, kron_all(&factors), true))
}

/// Mixture of 1…max_terms random pure products with flat Dirichlet weights.
pub fn random_separable<R: Rng>(d: usize, n: usize, max_terms: usize, rng: &mut R) -> Result<NQuditState> {
    let terms = rng.random_range(1..=max_terms.max(1));
    let raw: Vec<f64> = (0..terms).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    let dim = hilbert_dim(d, n)?;
    let mut rho = ComplexMatrix::zeros(dim);
    for w in raw {
        rho.add_scaled(w / total, random_pure_product(d, n, rng)?.rho());
    }
    Ok(NQuditState::trusted(d, n, rho, true))
}

/// Random state projected onto the symmetric subspace and renormalized.
pub fn random_bosonic<R: Rng>(d: usize, n: usize, rank: usize, rng: &mut R) -> Result<NQuditState> {
    let p = symmetric_projector(d, n)?;
    let dim = p.dim();
    let rho = random_density_matrix(dim, rank, rng);
    let sym = p.matmul(&rho).matmul(&p);
    let tr = sym.trace().re;
    Ok(NQuditState::trusted(d, n, sym.scale(1.0 / tr).hermitian_part(), true))
}

/// Haar-random unitary via Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        for c in &cols {
            let dot: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            v.iter_mut().zip(c).for_each(|(x, y)| *x -= dot * y);
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Random orthogonal matrix via Gram-Schmidt on a Gaussian matrix.
pub fn random_orthogonal<R: Rng>(dim: usize, rng: &mut R) -> RealMatrix {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while rows.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        for r in &rows {
            let dot: f64 = r.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(r).for_each(|(x, y)| *x -= dot * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            rows.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    RealMatrix::from_fn(dim, |i, j| rows[i][j])
}

/// Coefficients uniform on [−1, 1].
pub fn random_coefficients<R: Rng>(len: usize, rng: &mut R) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "sud-singlet")]
    SudSinglet,
    #[serde(rename = "random-collective")]
    RandomCollective,
    #[serde(rename = "spin")]
    Spin,
    #[serde(rename = "spin-ferro")]
    SpinFerro,
}

impl std::str::FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::InvalidConfig(format!("unknown model '{s}'")))
    }
}

/// Hamiltonian description shared by the CLI and the scan code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub model: ModelKind,
    #[serde(rename = "N")]
    pub n: usize,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl HamiltonianSpec {
    pub fn new(model: ModelKind, n: usize, d: usize) -> Self {
        Self {
            model,
            n,
            d,
            gamma: None,
            c: None,
            seed: None,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }

    /// Coefficients for the random-collective model: given, or drawn from the seed.
    pub fn coefficients(&self) -> Result<Vec<f64>> {
        let m = self.d * self.d - 1;
        match &self.c {
            Some(c) if c.len() != m => Err(Error::ModelBuild(format!(
                "expected {m} coefficients, got {}",
                c.len()
            ))),
            Some(c) => Ok(c.clone()),
            None => Ok(random_coefficients(m, &mut rng_from_seed(self.seed.unwrap_or(0)))),
        }
    }

    pub fn build(&self) -> Result<ComplexMatrix> {
        let wrap = |e: Error| Error::ModelBuild(e.to_string());
        hilbert_dim(self.d, self.n).map_err(wrap)?;
        match self.model {
            ModelKind::SudSinglet => {
                let b = gellmann_basis(self.d).map_err(wrap)?;
                hamiltonian_sud_singlet(self.n, &b).map_err(wrap)
            }
            ModelKind::RandomCollective => {
                let b = gellmann_basis(self.d).map_err(wrap)?;
                hamiltonian_random_collective(self.n, &b, &self.coefficients()?).map_err(wrap)
            }
            ModelKind::Spin | ModelKind::SpinFerro => {
                let gamma = self
                    .gamma
                    .ok_or_else(|| Error::ModelBuild("spin models need gamma".into()))?;
                let sign = if self.model == ModelKind::Spin {
                    SpinSign::Antiferro
                } else {
                    SpinSign::Ferro
                };
                let spin = spin_matrices(self.d).map_err(wrap)?;
                hamiltonian_spin(self.n, gamma, sign, &spin).map_err(wrap)
            }
        }
    }
}
