//! The polytope picture of the su(d) inequalities. A state maps to the point
//! x_k = 𝔘_kk/N² (k < d²−1) plus x_{d²}, which always lies on the hyperplane
//! N·x_{d²} + Σ_k x_k = Λ. Separable states lie inside the polytope cut out
//! by the facets N²(x_{d²} + Σ_{k∈I} x_k) ≥ 0.

use serde::Serialize;

use crate::basis::{lambda_max, GeneratorBasis};
use crate::correlations::{collective_bundle, CollectiveBundle};
use crate::error::{Error, Result};
use crate::linalg::{eig_symmetric, RealMatrix};
use crate::models::{feasibility, vertex_state_a, vertex_state_b, VertexFactors};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolytopePoint {
    pub d: usize,
    /// x₁ … x_{d²−1}, then x_{d²}.
    pub coords: Vec<f64>,
}

impl PolytopePoint {
    pub fn new(d: usize, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != d * d {
            return Err(Error::LengthMismatch {
                expected: d * d,
                got: coords.len(),
            });
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvariantViolation {
                quantity: "polytope point".into(),
                detail: "non-finite coordinate".into(),
            });
        }
        Ok(Self { d, coords })
    }

    /// x₁ … x_{d²−1}
    pub fn x(&self) -> &[f64] {
        &self.coords[..self.coords.len() - 1]
    }

    /// x_{d²}
    pub fn last(&self) -> f64 {
        self.coords[self.coords.len() - 1]
    }

    /// N·x_{d²} + Σ x_k, which should equal Λ.
    pub fn constraint_value(&self, n: usize) -> f64 {
        n as f64 * self.last() + self.x().iter().sum::<f64>()
    }

    pub fn distance(&self, other: &PolytopePoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Λ = Λ_max − |⟨G⟩|²/N².
pub fn lambda_of(gexp: &[f64], n: usize, d: usize) -> f64 {
    lambda_max(d) - gexp.iter().map(|g| g * g).sum::<f64>() / (n * n) as f64
}

/// Coordinates of a bundle in the frame of its own basis.
pub fn coordinates(bundle: &CollectiveBundle) -> PolytopePoint {
    let (n, d) = (bundle.n as f64, bundle.d);
    let m = bundle.dim();
    let mut coords: Vec<f64> = (0..m).map(|k| bundle.u[(k, k)] / (n * n)).collect();
    coords.resize(d * d - 1, 0.0);
    let last = ((n + d as f64) * lambda_max(d) - bundle.c.trace() / n) / (n * (n - 1.0));
    coords.push(last);
    PolytopePoint { d, coords }
}

/// Coordinates after rotating the basis so that 𝔘 is diagonal.
pub fn diagonal_coordinates(bundle: &CollectiveBundle) -> (PolytopePoint, CollectiveBundle) {
    let rotated = bundle.rotated(&eigenframe(&bundle.u));
    (coordinates(&rotated), rotated)
}

/// |Λ − (N·x_{d²} + Σx_k)|.
pub fn constraint_residual(point: &PolytopePoint, gexp: &[f64], n: usize) -> f64 {
    (lambda_of(gexp, n, point.d) - point.constraint_value(n)).abs()
}

/// Orthogonal O whose rows are eigenvectors of the symmetric `u`, ordered by
/// descending eigenvalue, each with its first non-negligible component
/// positive. O·u·Oᵀ is diagonal.
pub fn eigenframe(u: &RealMatrix) -> RealMatrix {
    let eig = eig_symmetric(&u.symmetrized());
    let m = u.dim();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.values[b].total_cmp(&eig.values[a]));
    let mut o = RealMatrix::zeros(m);
    for (row, &col) in order.iter().enumerate() {
        let v: Vec<f64> = (0..m).map(|i| eig.vectors[(i, col)]).collect();
        let sign = v.iter().find(|x| x.abs() > 1e-12).map_or(1.0, |x| x.signum());
        for i in 0..m {
            o[(row, i)] = sign * v[i];
        }
    }
    o
}

/// N²(x_{d²} + Σ_{k∈I} x_k); negative means the point violates facet I.
pub fn facet_margin(point: &PolytopePoint, subset: &[usize], n: usize) -> Result<f64> {
    let x = point.x();
    let mut s = point.last();
    for &k in subset {
        s += *x.get(k).ok_or(Error::IndexOutOfRange { index: k, len: x.len() })?;
    }
    Ok((n * n) as f64 * s)
}

/// Signed distance Σ(x_i − y_i) between two points.
pub fn signed_distance(a: &PolytopePoint, b: &PolytopePoint) -> f64 {
    a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).sum()
}

/// N²(x_{d²} + Σ_{x_k<0} x_k), the margin of the most violated facet.
/// The point must be given in the frame where 𝔘 is diagonal.
pub fn xi_from_point(point: &PolytopePoint, n: usize) -> f64 {
    let neg: f64 = point.x().iter().filter(|&&x| x < 0.0).sum();
    (n * n) as f64 * (point.last() + neg)
}

/// Minimum facet margin over all 2^(d²−1) index sets (d ≤ 3).
pub fn min_facet_margin(point: &PolytopePoint, n: usize) -> Result<(f64, Vec<usize>)> {
    if point.d > 3 {
        return Err(Error::UnsupportedInput(
            "explicit facet enumeration is limited to d <= 3".into(),
        ));
    }
    let m = point.x().len();
    let mut best = (f64::INFINITY, Vec::new());
    for mask in 0u32..(1 << m) {
        let subset: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 1).collect();
        let v = facet_margin(point, &subset, n)?;
        if v < best.0 {
            best = (v, subset);
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, Serialize)]
pub struct PolytopeSpec {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub gexp: Vec<f64>,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    pub kappa: f64,
    pub a: Vec<PolytopePoint>,
    pub b: Vec<PolytopePoint>,
}

impl PolytopeSpec {
    /// Constraint residual of every vertex, A first.
    pub fn constraint_residuals(&self) -> Vec<f64> {
        self.a
            .iter()
            .chain(&self.b)
            .map(|p| (self.lambda - p.constraint_value(self.n)).abs())
            .collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.d,
            "N": self.n,
            "Lambda": self.lambda,
            "kappa": self.kappa,
            "vertices": {
                "A": self.a.iter().map(|p| &p.coords).collect::<Vec<_>>(),
                "B": self.b.iter().map(|p| &p.coords).collect::<Vec<_>>(),
            },
            "constraint_residuals": self.constraint_residuals(),
        })
    }
}

/// Vertices A_k and B_k of the polytope for a given ⟨G⟩.
pub fn vertices(gexp: &[f64], n: usize, d: usize) -> Result<PolytopeSpec> {
    let m = d * d - 1;
    if gexp.len() != m {
        return Err(Error::LengthMismatch { expected: m, got: gexp.len() });
    }
    if n < 2 {
        return Err(Error::TooFewSites { needed: 2, got: n });
    }
    let lambda = feasibility(gexp, n, d)?;
    let kappa = lambda / lambda_max(d);
    let nn = (n * n) as f64;
    let scale = -1.0 / (n as f64 - 1.0);
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for k in 0..m {
        let mut coords: Vec<f64> = gexp.iter().map(|g| kappa * g * g / nn).collect();
        coords[k] = kappa * (lambda + gexp[k] * gexp[k] / nn);
        coords.push(0.0);
        let mut bc: Vec<f64> = coords.iter().map(|x| scale * x).collect();
        bc[m] = -scale * lambda;
        a.push(PolytopePoint { d, coords });
        b.push(PolytopePoint { d, coords: bc });
    }
    Ok(PolytopeSpec {
        d,
        n,
        gexp: gexp.to_vec(),
        lambda,
        kappa,
        a,
        b,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexCheck {
    pub k: usize,
    pub p: f64,
    pub n_plus_exact: f64,
    pub n_plus: usize,
    pub epsilon: f64,
    pub factors_physical: bool,
    pub a_expected: Vec<f64>,
    pub a_state: Vec<f64>,
    pub a_error: f64,
    pub b_expected: Vec<f64>,
    pub b_state: Vec<f64>,
    /// ‖B_k − B_k′‖ between the formula and the vertex state.
    pub b_displacement: f64,
    /// ‖B_k − B_l‖ for a neighbouring vertex l, the scale of an edge.
    pub b_edge: f64,
    pub b_ratio: f64,
    pub a_exact: bool,
    /// Only meaningful when N·p is an integer.
    pub b_exact: bool,
}

/// Builds the vertex states for direction k and compares their coordinates
/// with the vertex formulas.
pub fn vertex_correspondence_check(basis: &GeneratorBasis, gexp: &[f64], n: usize, k: usize) -> Result<VertexCheck> {
    let d = basis.d();
    let spec = vertices(gexp, n, d)?;
    if k >= spec.a.len() {
        return Err(Error::IndexOutOfRange { index: k, len: spec.a.len() });
    }
    let (state_a, f): (_, VertexFactors) = vertex_state_a(k, basis, gexp, n)?;
    let (state_b, _) = vertex_state_b(k, basis, gexp, n)?;
    let pa = coordinates(&collective_bundle(&state_a, basis)?);
    let pb = coordinates(&collective_bundle(&state_b, basis)?);
    let a_error = pa.distance(&spec.a[k]);
    let b_displacement = pb.distance(&spec.b[k]);
    let l = (k + 1) % spec.b.len();
    let b_edge = spec.b[k].distance(&spec.b[l]);
    let integer = f.epsilon < 1e-9;
    Ok(VertexCheck {
        k,
        p: f.p,
        n_plus_exact: f.n_plus_exact,
        n_plus: f.n_plus,
        epsilon: f.epsilon,
        factors_physical: f.physical,
        a_expected: spec.a[k].coords.clone(),
        a_state: pa.coords,
        a_error,
        b_expected: spec.b[k].coords.clone(),
        b_state: pb.coords,
        b_displacement,
        b_edge,
        b_ratio: if b_edge > 0.0 { b_displacement / b_edge } else { 0.0 },
        a_exact: a_error <= 1e-9,
        b_exact: integer && b_displacement <= 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::gellmann_basis;
    use crate::criteria::xi_sud_collective;
    use crate::many_body::{avg_two_body, NQuditState};
    use crate::models::{random_bosonic, random_pure_product, random_state, rng_from_seed, sud_singlet};

    #[test]
    fn vertices_at_zero_polarization() {
        let s = vertices(&[0.0; 8], 4, 3).unwrap();
        assert!((s.lambda - 4.0 / 3.0).abs() < 1e-15);
        assert!((s.kappa - 1.0).abs() < 1e-15);
        for k in 0..8 {
            for r in 0..8 {
                let (ea, eb) = if r == k { (4.0 / 3.0, -4.0 / 9.0) } else { (0.0, 0.0) };
                assert!((s.a[k].coords[r] - ea).abs() < 1e-14);
                assert!((s.b[k].coords[r] - eb).abs() < 1e-14);
            }
            assert_eq!(s.a[k].last(), 0.0);
            assert!((s.b[k].last() - 4.0 / 9.0).abs() < 1e-14);
        }
        assert!(s.constraint_residuals().iter().all(|r| *r < 1e-12));
    }

    #[test]
    fn saturated_polarization_collapses() {
        let mut g = vec![0.0; 8];
        g[2] = 0.6 * 5.0 * lambda_max(3).sqrt();
        g[7] = 0.8 * 5.0 * lambda_max(3).sqrt();
        let s = vertices(&g, 5, 3).unwrap();
        assert!(s.lambda.abs() < 1e-12);
        for p in s.a.iter().chain(&s.b) {
            assert!(p.coords.iter().all(|x| x.abs() < 1e-12));
        }
        let mut bad = g.clone();
        bad[0] = 1.0;
        assert!(matches!(vertices(&bad, 5, 3), Err(Error::InfeasibleGexp { .. })));
    }

    #[test]
    fn vertex_facet_membership() {
        let s = vertices(&[0.0; 8], 4, 3).unwrap();
        for mask in 0u32..256 {
            let subset: Vec<usize> = (0..8).filter(|k| mask >> k & 1 == 1).collect();
            for k in 0..8 {
                let m_a = facet_margin(&s.a[k], &subset, 4).unwrap();
                let m_b = facet_margin(&s.b[k], &subset, 4).unwrap();
                assert!(m_a >= -1e-10 && m_b >= -1e-10);
                if subset.contains(&k) {
                    assert!(m_b.abs() < 1e-10, "B_{k} not on facet {subset:?}");
                } else {
                    assert!(m_a.abs() < 1e-10, "A_{k} not on facet {subset:?}");
                }
            }
        }
    }

    #[test]
    fn polarized_vertices_stay_inside() {
        let mut rng = rng_from_seed(5);
        let g: Vec<f64> = (0..8).map(|_| rand::Rng::random_range(&mut rng, -2.0..2.0)).collect();
        let s = vertices(&g, 4, 3).unwrap();
        assert!(s.constraint_residuals().iter().all(|r| *r < 1e-10));
        let all: Vec<usize> = (0..8).collect();
        for mask in 0u32..256 {
            let subset: Vec<usize> = (0..8).filter(|k| mask >> k & 1 == 1).collect();
            for k in 0..8 {
                assert!(facet_margin(&s.a[k], &subset, 4).unwrap() >= -1e-10);
                assert!(facet_margin(&s.b[k], &subset, 4).unwrap() >= -1e-10);
            }
        }
        for k in 0..8 {
            assert!(facet_margin(&s.a[k], &[], 4).unwrap().abs() < 1e-10);
            assert!(facet_margin(&s.b[k], &all, 4).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn coordinates_satisfy_constraint() {
        let b = gellmann_basis(3).unwrap();
        let mut rng = rng_from_seed(11);
        for n in [3usize, 4, 5] {
            for _ in 0..3 {
                let st = random_state(3, n, &mut rng).unwrap();
                let bundle = collective_bundle(&st, &b).unwrap();
                let p = coordinates(&bundle);
                assert!(constraint_residual(&p, &bundle.gexp, n) < 1e-9);
            }
        }
    }

    #[test]
    fn bosonic_and_product_points() {
        let b = gellmann_basis(3).unwrap();
        let mut rng = rng_from_seed(3);
        let bos = random_bosonic(3, 3, 3, &mut rng).unwrap();
        let p = coordinates(&collective_bundle(&bos, &b).unwrap());
        assert!(p.last().abs() < 1e-10);
        let prod = random_pure_product(3, 3, &mut rng).unwrap();
        let bundle = collective_bundle(&prod, &b).unwrap();
        let (p, _) = diagonal_coordinates(&bundle);
        assert!(p.x().iter().all(|x| *x <= 1e-10));
        let all: Vec<usize> = (0..8).collect();
        assert!(facet_margin(&p, &all, 3).unwrap().abs() < 1e-9);
        assert!(constraint_residual(&p, &bundle.gexp, 3) < 1e-9);
    }

    #[test]
    fn singlet_point() {
        let b = gellmann_basis(3).unwrap();
        let s = sud_singlet(3, 3).unwrap();
        let p = coordinates(&collective_bundle(&s, &b).unwrap());
        for x in p.x() {
            assert!((x + 1.0 / 3.0).abs() < 1e-10);
        }
        assert!((p.constraint_value(3) - 4.0 / 3.0).abs() < 1e-10);
        assert!((xi_from_point(&p, 3) + 12.0).abs() < 1e-9);
        let origin = PolytopePoint::new(3, vec![0.0; 9]).unwrap();
        assert_eq!(facet_margin(&origin, &[0, 4], 3).unwrap(), 0.0);
        assert!(signed_distance(&p, &origin) < 0.0);
    }

    #[test]
    fn xi_from_point_matches_criterion() {
        let b = gellmann_basis(3).unwrap();
        let mut rng = rng_from_seed(21);
        for i in 0..50 {
            let n = 3 + i % 2;
            let st = random_state(3, n, &mut rng).unwrap();
            let bundle = collective_bundle(&st, &b).unwrap();
            let (p, _) = diagonal_coordinates(&bundle);
            let xi = xi_sud_collective(&bundle).unwrap().value;
            assert!((xi_from_point(&p, n) - xi).abs() < 1e-8);
            if i < 5 {
                let (best, _) = min_facet_margin(&p, n).unwrap();
                assert!((best - xi).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn eigenframe_diagonalizes() {
        let mut rng = rng_from_seed(2);
        let o = crate::models::random_orthogonal(8, &mut rng);
        let diag = RealMatrix::from_diag(&[3.0, -1.0, 2.0, 2.0, 0.0, -5.0, 1.0, 0.5]);
        let u = o.matmul(&diag).matmul(&o.transpose());
        let f = eigenframe(&u);
        assert!(f.orthogonality_defect() < 1e-10);
        let rotated = f.matmul(&u).matmul(&f.transpose());
        let d = rotated.diag();
        assert!(d.windows(2).all(|w| w[0] >= w[1] - 1e-10));
        assert!((rotated.max_abs() - 5.0).abs() < 1e-10);
        let off = rotated.max_abs_diff(&RealMatrix::from_diag(&d));
        assert!(off < 1e-10);
    }

    #[test]
    fn vertex_states_at_zero_polarization() {
        let b = gellmann_basis(3).unwrap();
        let c4 = vertex_correspondence_check(&b, &[0.0; 8], 4, 0).unwrap();
        assert!(c4.a_exact, "{}", c4.a_error);
        assert!(c4.b_exact, "{}", c4.b_displacement);
        let c5 = vertex_correspondence_check(&b, &[0.0; 8], 5, 3).unwrap();
        assert!(c5.a_exact);
        assert!(!c5.b_exact);
        assert!(c5.b_ratio > 0.0 && c5.b_ratio < 1.0);
    }

    #[test]
    fn vertex_state_along_its_direction() {
        let b = gellmann_basis(3).unwrap();
        let mut g = vec![0.0; 8];
        g[2] = 2.0;
        let c = vertex_correspondence_check(&b, &g, 4, 2).unwrap();
        assert!(c.a_exact, "{}", c.a_error);
    }

    #[test]
    fn two_body_and_collective_points_agree() {
        let b = gellmann_basis(3).unwrap();
        let st = random_state(3, 3, &mut rng_from_seed(8)).unwrap();
        let bundle = collective_bundle(&st, &b).unwrap();
        let av: NQuditState = avg_two_body(&st).unwrap();
        let p = coordinates(&bundle);
        let tb = crate::correlations::two_body_bundle(&av, &b).unwrap();
        for k in 0..8 {
            assert!((p.x()[k] - tb.gamma_av2[(k, k)]).abs() < 1e-10);
        }
    }
}
