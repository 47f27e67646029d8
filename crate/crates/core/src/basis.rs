//! Single-particle operator bases: generalized Gell-Mann matrices, spin-j
//! matrices, the anticommutator basis for qutrits, the flip operator and the
//! u(d) extension.
//!
//! All generators are normalized as Tr(g_k g_l) = 2 δ_kl.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::MatrixJson;
use crate::linalg::{kron, ComplexMatrix, RealMatrix, C64, ONE};

/// Tolerance used when validating constructed bases.
pub const BASIS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisKind {
    /// d²−1 traceless generators.
    #[serde(rename = "su")]
    Su,
    /// d² generators, the first one proportional to the identity.
    #[serde(rename = "u")]
    ExtendedU,
}

#[derive(Clone, Debug)]
pub struct GeneratorBasis {
    d: usize,
    kind: BasisKind,
    generators: Vec<ComplexMatrix>,
}

/// Largest squared length of the Bloch vector ⟨g⟩ for a d-level system.
pub fn lambda_max(d: usize) -> f64 {
    2.0 * (d as f64 - 1.0) / d as f64
}

/// Named failure of one of the basis invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisDefect {
    pub invariant: &'static str,
    pub residual: f64,
}

impl std::fmt::Display for BasisDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} violated (residual {:.3e})", self.invariant, self.residual)
    }
}

impl GeneratorBasis {
    /// Wraps an arbitrary list of generators without validating it; see
    /// [`GeneratorBasis::validate`].
    pub fn from_generators(d: usize, kind: BasisKind, generators: Vec<ComplexMatrix>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let expected = match kind {
            BasisKind::Su => d * d - 1,
            BasisKind::ExtendedU => d * d,
        };
        if generators.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: generators.len(),
            });
        }
        if let Some(g) = generators.iter().find(|g| g.dim() != d) {
            return Err(Error::DimensionMismatch(format!(
                "generator of dimension {} in a d={d} basis",
                g.dim()
            )));
        }
        Ok(Self { d, kind, generators })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn get(&self, k: usize) -> Result<&ComplexMatrix> {
        self.generators.get(k).ok_or(Error::IndexOutOfRange {
            index: k,
            len: self.generators.len(),
        })
    }

    /// Gram matrix (1/2) Tr(g_k g_l); the identity for a valid basis.
    pub fn half_gram(&self) -> RealMatrix {
        let n = self.len();
        RealMatrix::from_fn(n, |k, l| 0.5 * self.generators[k].trace_product(&self.generators[l]).re)
    }

    /// (1/2) Tr(g_k g′_l) between two bases of the same size.
    pub fn overlap(&self, other: &GeneratorBasis) -> Result<RealMatrix> {
        if self.len() != other.len() || self.d != other.d {
            return Err(Error::DimensionMismatch("bases differ in size".into()));
        }
        Ok(RealMatrix::from_fn(self.len(), |k, l| {
            0.5 * self.generators[k].trace_product(&other.generators[l]).re
        }))
    }

    /// Checks Hermiticity, orthonormality, tracelessness (su kind), the
    /// identity generator (extended kind) and Σ g_k² = (d+1)Λ_max·𝟙.
    pub fn validate(&self) -> std::result::Result<(), BasisDefect> {
        let d = self.d;
        let herm = self
            .generators
            .iter()
            .map(|g| g.hermiticity_defect())
            .fold(0.0, f64::max);
        if herm > BASIS_TOL {
            return Err(BasisDefect {
                invariant: "hermiticity",
                residual: herm,
            });
        }
        let gram = self.half_gram();
        let ortho = gram.max_abs_diff(&RealMatrix::identity(self.len()));
        if ortho > BASIS_TOL {
            return Err(BasisDefect {
                invariant: "orthonormality Tr(g_k g_l) = 2δ_kl",
                residual: 2.0 * ortho,
            });
        }
        let su_part = match self.kind {
            BasisKind::Su => &self.generators[..],
            BasisKind::ExtendedU => {
                let g0 = ComplexMatrix::identity(d).scale((2.0 / d as f64).sqrt());
                let dev = self.generators[0].max_abs_diff(&g0);
                if dev > BASIS_TOL {
                    return Err(BasisDefect {
                        invariant: "g_0 = sqrt(2/d) identity",
                        residual: dev,
                    });
                }
                &self.generators[1..]
            }
        };
        let tr = su_part.iter().map(|g| g.trace().norm()).fold(0.0, f64::max);
        if tr > BASIS_TOL {
            return Err(BasisDefect {
                invariant: "traceless generators",
                residual: tr,
            });
        }
        let mut casimir = ComplexMatrix::zeros(d);
        for g in su_part {
            casimir.add_scaled(1.0, &g.matmul(g));
        }
        let target = ComplexMatrix::identity(d).scale((d as f64 + 1.0) * lambda_max(d));
        let dev = casimir.max_abs_diff(&target);
        if dev > BASIS_TOL {
            return Err(BasisDefect {
                invariant: "sum of squares = (d+1) Lambda_max identity",
                residual: dev,
            });
        }
        Ok(())
    }

    /// Returns the basis g′_k = Σ_l O_kl g_l.
    pub fn apply_orthogonal(&self, o: &RealMatrix) -> Result<GeneratorBasis> {
        if o.dim() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "orthogonal matrix of size {} for a basis of {} generators",
                o.dim(),
                self.len()
            )));
        }
        let defect = o.orthogonality_defect();
        if defect > 1e-10 {
            return Err(Error::NotOrthogonal(defect));
        }
        let generators = (0..self.len())
            .map(|k| {
                let mut g = ComplexMatrix::zeros(self.d);
                for (l, gl) in self.generators.iter().enumerate() {
                    g.add_scaled(o[(k, l)], gl);
                }
                g
            })
            .collect();
        Ok(GeneratorBasis {
            d: self.d,
            kind: self.kind,
            generators,
        })
    }

    /// Prepends g_0 = √(2/d)·𝟙, turning an su(d) basis into a u(d) one.
    pub fn extend_ud(&self) -> Result<GeneratorBasis> {
        if self.kind == BasisKind::ExtendedU {
            return Err(Error::AlreadyExtended);
        }
        let mut generators = Vec::with_capacity(self.len() + 1);
        generators.push(ComplexMatrix::identity(self.d).scale((2.0 / self.d as f64).sqrt()));
        generators.extend(self.generators.iter().cloned());
        Ok(GeneratorBasis {
            d: self.d,
            kind: BasisKind::ExtendedU,
            generators,
        })
    }

    /// Bloch vector ⟨g_k⟩ of a single-particle matrix.
    pub fn bloch_vector(&self, rho: &ComplexMatrix) -> Vec<f64> {
        self.generators.iter().map(|g| rho.expectation(g)).collect()
    }

    /// 𝟙/d + (1/2) Σ_k a_k g_k.
    pub fn from_bloch_vector(&self, a: &[f64]) -> Result<ComplexMatrix> {
        if self.kind != BasisKind::Su {
            return Err(Error::UnsupportedInput("Bloch vectors need an su(d) basis".into()));
        }
        if a.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: a.len(),
            });
        }
        let mut m = ComplexMatrix::identity(self.d).scale(1.0 / self.d as f64);
        for (ak, g) in a.iter().zip(&self.generators) {
            m.add_scaled(0.5 * ak, g);
        }
        Ok(m)
    }
}

/// Generalized Gell-Mann matrices: symmetric off-diagonal, antisymmetric
/// off-diagonal, then diagonal generators, each group in lexicographic order.
pub fn gellmann_basis(d: usize) -> Result<GeneratorBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut generators = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            let mut m = ComplexMatrix::zeros(d);
            m[(j, k)] = ONE;
            m[(k, j)] = ONE;
            generators.push(m);
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut m = ComplexMatrix::zeros(d);
            m[(j, k)] = C64::new(0.0, -1.0);
            m[(k, j)] = C64::new(0.0, 1.0);
            generators.push(m);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        diag[..l].iter_mut().for_each(|x| *x = norm);
        diag[l] = -(l as f64) * norm;
        generators.push(ComplexMatrix::from_real_diag(&diag));
    }
    GeneratorBasis::from_generators(d, BasisKind::Su, generators)
}

/// Spin-j matrices for j = (d−1)/2, basis |j,m⟩ with m = j … −j.
#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub d: usize,
    pub jx: ComplexMatrix,
    pub jy: ComplexMatrix,
    pub jz: ComplexMatrix,
}

impl SpinOperators {
    pub fn j(&self) -> f64 {
        (self.d as f64 - 1.0) / 2.0
    }

    pub fn components(&self) -> [&ComplexMatrix; 3] {
        [&self.jx, &self.jy, &self.jz]
    }

    /// Worst residual of [jx,jy]=i jz (cyclic) and j² = j(j+1)𝟙.
    pub fn algebra_residual(&self) -> f64 {
        let i = C64::new(0.0, 1.0);
        let c = [
            self.jx.commutator(&self.jy).max_abs_diff(&self.jz.scale_complex(i)),
            self.jy.commutator(&self.jz).max_abs_diff(&self.jx.scale_complex(i)),
            self.jz.commutator(&self.jx).max_abs_diff(&self.jy.scale_complex(i)),
        ];
        let mut j2 = self.jx.matmul(&self.jx);
        j2.add_scaled(1.0, &self.jy.matmul(&self.jy));
        j2.add_scaled(1.0, &self.jz.matmul(&self.jz));
        let j = self.j();
        let cas = j2.max_abs_diff(&ComplexMatrix::identity(self.d).scale(j * (j + 1.0)));
        c.into_iter().fold(cas, f64::max)
    }
}

pub fn spin_matrices(d: usize) -> Result<SpinOperators> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let j = (d as f64 - 1.0) / 2.0;
    let m = |a: usize| j - a as f64;
    // raising operator: J+ |m⟩ = sqrt(j(j+1) − m(m+1)) |m+1⟩; |m+1⟩ sits at index a−1
    let mut jp = ComplexMatrix::zeros(d);
    for a in 1..d {
        let ma = m(a);
        jp[(a - 1, a)] = C64::new((j * (j + 1.0) - ma * (ma + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm).scale(0.5);
    let jy = (&jp - &jm).scale_complex(C64::new(0.0, -0.5));
    let jz = ComplexMatrix::from_real_diag(&(0..d).map(m).collect::<Vec<_>>());
    Ok(SpinOperators { d, jx, jy, jz })
}

/// Qutrit basis built from spin-1 operators:
/// {jx, jy, jz, {jx,jy}, {jy,jz}, {jx,jz}, jx²−jy², √3 jz² − (2/√3)𝟙}.
pub fn anticomm_basis_d3() -> GeneratorBasis {
    let s = spin_matrices(3).expect("d=3 is valid");
    let (jx, jy, jz) = (&s.jx, &s.jy, &s.jz);
    let sqrt3 = 3f64.sqrt();
    let mut last = jz.matmul(jz).scale(sqrt3);
    last.add_scaled(-2.0 / sqrt3, &ComplexMatrix::identity(3));
    let generators = vec![
        jx.clone(),
        jy.clone(),
        jz.clone(),
        jx.anticommutator(jy),
        jy.anticommutator(jz),
        jx.anticommutator(jz),
        &jx.matmul(jx) - &jy.matmul(jy),
        last,
    ];
    GeneratorBasis::from_generators(3, BasisKind::Su, generators).expect("eight 3x3 generators")
}

/// Flip operator from the generator expansion F = 𝟙⊗𝟙/d + (1/2)Σ g_k⊗g_k.
pub fn flip_operator(d: usize) -> Result<ComplexMatrix> {
    let basis = gellmann_basis(d)?;
    Ok(flip_from_basis(&basis))
}

pub fn flip_from_basis(basis: &GeneratorBasis) -> ComplexMatrix {
    let d = basis.d();
    let mut f = ComplexMatrix::identity(d * d).scale(1.0 / d as f64);
    let su = match basis.kind() {
        BasisKind::Su => basis.generators(),
        BasisKind::ExtendedU => &basis.generators()[1..],
    };
    for g in su {
        f.add_scaled(0.5, &kron(g, g));
    }
    f
}

/// Swap operator built directly as a permutation matrix.
pub fn swap_matrix(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d * d);
    for a in 0..d {
        for b in 0..d {
            f[(b * d + a, a * d + b)] = ONE;
        }
    }
    f
}

#[derive(Serialize, Deserialize)]
struct BasisJson {
    d: usize,
    kind: BasisKind,
    generators: Vec<MatrixJson>,
}

impl Serialize for GeneratorBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BasisJson {
            d: self.d,
            kind: self.kind,
            generators: self.generators.iter().map(MatrixJson::from).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneratorBasis {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = BasisJson::deserialize(de)?;
        let generators = raw
            .generators
            .into_iter()
            .map(|m| m.into_matrix())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        GeneratorBasis::from_generators(raw.d, raw.kind, generators).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;

    #[test]
    fn d2_is_pauli() {
        let b = gellmann_basis(2).unwrap();
        let i = C64::new(0.0, 1.0);
        let sx = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap();
        let sy = ComplexMatrix::from_rows(&[vec![ZERO, -i], vec![i, ZERO]]).unwrap();
        let sz = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert_eq!(b.generators()[0], sx);
        assert_eq!(b.generators()[1], sy);
        assert!(b.generators()[2].max_abs_diff(&sz) < 1e-15);
    }

    #[test]
    fn invariants_for_small_d() {
        for d in 2..=5 {
            let b = gellmann_basis(d).unwrap();
            assert_eq!(b.len(), d * d - 1);
            b.validate().unwrap();
        }
    }

    #[test]
    fn d3_casimir_value() {
        let b = gellmann_basis(3).unwrap();
        let mut s = ComplexMatrix::zeros(3);
        for g in b.generators() {
            s.add_scaled(1.0, &g.matmul(g));
        }
        assert!(s.max_abs_diff(&ComplexMatrix::identity(3).scale(16.0 / 3.0)) < 1e-12);
    }

    #[test]
    fn d4_gram_is_twice_identity() {
        let b = gellmann_basis(4).unwrap();
        for (k, gk) in b.generators().iter().enumerate() {
            for (l, gl) in b.generators().iter().enumerate() {
                let want = if k == l { 2.0 } else { 0.0 };
                assert!((gk.trace_product(gl).re - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_small_d() {
        assert!(matches!(gellmann_basis(1), Err(Error::InvalidDimension(1))));
        assert!(matches!(spin_matrices(0), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn spin_conventions() {
        let s2 = spin_matrices(2).unwrap();
        assert_eq!(s2.jz, ComplexMatrix::from_real_diag(&[0.5, -0.5]));
        let s3 = spin_matrices(3).unwrap();
        assert_eq!(s3.jz, ComplexMatrix::from_real_diag(&[1.0, 0.0, -1.0]));
        for d in 2..=6 {
            assert!(spin_matrices(d).unwrap().algebra_residual() < 1e-12);
        }
        let mut j2 = s3.jx.matmul(&s3.jx);
        j2.add_scaled(1.0, &s3.jy.matmul(&s3.jy));
        j2.add_scaled(1.0, &s3.jz.matmul(&s3.jz));
        assert!(j2.max_abs_diff(&ComplexMatrix::identity(3).scale(2.0)) < 1e-12);
    }

    #[test]
    fn anticommutator_basis() {
        let b = anticomm_basis_d3();
        b.validate().unwrap();
        let s = spin_matrices(3).unwrap();
        assert_eq!(b.generators()[2], s.jz);
        assert!((b.generators()[2].trace_product(&b.generators()[2]).re - 2.0).abs() < 1e-14);
        assert!(b.generators()[7].trace().norm() < 1e-14);
        assert!(b.half_gram().max_abs_diff(&RealMatrix::identity(8)) < 1e-12);
        // same real span as Gell-Mann: overlap matrix is orthogonal
        let o = b.overlap(&gellmann_basis(3).unwrap()).unwrap();
        assert!(o.orthogonality_defect() < 1e-10);
    }

    #[test]
    fn flip_properties() {
        let f2 = flip_operator(2).unwrap();
        // |01⟩ = index 1, |10⟩ = index 2
        assert!((f2[(2, 1)] - ONE).norm() < 1e-14);
        for d in 2..=4 {
            let f = flip_operator(d).unwrap();
            assert!(f.max_abs_diff(&swap_matrix(d)) < 1e-12);
            assert!(f.matmul(&f).max_abs_diff(&ComplexMatrix::identity(d * d)) < 1e-12);
            assert!((f.trace().re - d as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_change() {
        let b = gellmann_basis(3).unwrap();
        let same = b.apply_orthogonal(&RealMatrix::identity(8)).unwrap();
        for (x, y) in same.generators().iter().zip(b.generators()) {
            assert!(x.max_abs_diff(y) < 1e-15);
        }
        let mut perm = RealMatrix::zeros(8);
        for k in 0..8 {
            perm[(k, (k + 3) % 8)] = 1.0;
        }
        let p = b.apply_orthogonal(&perm).unwrap();
        assert!(p.generators()[0].max_abs_diff(&b.generators()[3]) < 1e-15);
        let bad = RealMatrix::identity(8).scale(2.0);
        assert!(matches!(b.apply_orthogonal(&bad), Err(Error::NotOrthogonal(_))));
    }

    #[test]
    fn ud_extension() {
        let b2 = gellmann_basis(2).unwrap().extend_ud().unwrap();
        assert_eq!(b2.len(), 4);
        assert!(b2.generators()[0].max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        b2.validate().unwrap();
        let b3 = gellmann_basis(3).unwrap().extend_ud().unwrap();
        let g0 = ComplexMatrix::identity(3).scale((2.0f64 / 3.0).sqrt());
        assert!(b3.generators()[0].max_abs_diff(&g0) < 1e-15);
        assert!(b3.half_gram().max_abs_diff(&RealMatrix::identity(9)) < 1e-12);
        assert!(matches!(b3.extend_ud(), Err(Error::AlreadyExtended)));
    }

    #[test]
    fn json_round_trip() {
        let b = anticomm_basis_d3();
        let s = serde_json::to_string(&b).unwrap();
        let back: GeneratorBasis = serde_json::from_str(&s).unwrap();
        assert_eq!(back.kind(), BasisKind::Su);
        for (x, y) in back.generators().iter().zip(b.generators()) {
            assert!(x.max_abs_diff(y) < 1e-15);
        }
    }
}
