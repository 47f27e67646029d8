//! Full criterion report for one state, and the seeded self-test suite.

use serde::Serialize;
use serde_json::{json, Value};

use crate::basis::{anticomm_basis_d3, flip_operator, gellmann_basis, spin_matrices, GeneratorBasis};
use crate::correlations::{check_identities, collective_bundle};
use crate::criteria::{
    ccnr, ppt_all_bipartitions, spin_squeezing_set, werner_criterion, werner_threshold, xi_spin, xi_sud_collective,
    xi_sud_two_body, CriterionReport, DETECTION_TOL,
};
use crate::error::Result;
use crate::linalg::{eig_hermitian, has_eigenvalue_below, min_eigenvalue};
use crate::many_body::{avg_two_body, partial_trace, NQuditState};
use crate::models::{
    noisy_singlet_marginal, random_density_matrix, random_separable, random_state, rho_ps3, rng_from_seed, sud_singlet,
    thermal_state, werner_two_qudit, HamiltonianSpec, ModelKind,
};
use crate::polytope::{constraint_residual, diagonal_coordinates, vertex_correspondence_check, xi_from_point};

#[derive(Clone, Debug)]
pub struct EvaluateOptions {
    /// Detection threshold applied to every criterion value.
    pub tol: f64,
    pub ppt: bool,
}

impl Default for EvaluateOptions {
    fn default() -> Self {
        Self { tol: DETECTION_TOL, ppt: true }
    }
}

fn with_tol(mut r: CriterionReport, tol: f64) -> CriterionReport {
    r.set_tolerance(tol);
    r
}

/// Evaluates every criterion on a state and returns the report as JSON.
pub fn evaluate(state: &NQuditState, options: &EvaluateOptions) -> Result<Value> {
    let (d, n) = (state.d(), state.n_sites());
    let basis = gellmann_basis(d)?;
    let spin = spin_matrices(d)?;
    let tol = options.tol;

    let mut out = serde_json::Map::new();
    out.insert(
        "state".into(),
        json!({
            "d": d,
            "N": n,
            "physical": state.is_physical(),
            "min_eigenvalue": min_eigenvalue(state.rho())?,
        }),
    );
    if n >= 2 {
        let bundle = collective_bundle(state, &basis)?;
        let av2 = avg_two_body(state)?;
        out.insert("xi_sud".into(), serde_json::to_value(with_tol(xi_sud_collective(&bundle)?, tol))?);
        out.insert(
            "xi_sud_two_body".into(),
            serde_json::to_value(with_tol(xi_sud_two_body(&av2, n, &basis)?, tol))?,
        );
        out.insert("xi_spin".into(), serde_json::to_value(with_tol(xi_spin(&av2, n, &spin)?, tol))?);
        out.insert(
            "spin_squeezing".into(),
            serde_json::to_value(with_tol(spin_squeezing_set(state, &spin)?, tol))?,
        );
        if options.ppt {
            out.insert("ppt".into(), serde_json::to_value(with_tol(ppt_all_bipartitions(state)?, tol))?);
        }
        let two = if n == 2 { state.clone() } else { av2.clone() };
        let mut c = with_tol(ccnr(&two)?, tol);
        c.details.insert("on_average_two_body".into(), if n == 2 { 0.0 } else { 1.0 });
        out.insert("ccnr".into(), serde_json::to_value(c)?);
        let fexp = av2.expectation(&flip_operator(d)?);
        out.insert("werner".into(), serde_json::to_value(with_tol(werner_criterion(fexp, n, d), tol))?);

        let (point, rotated) = diagonal_coordinates(&bundle);
        out.insert(
            "polytope".into(),
            json!({
                "frame": "U-diagonal",
                "coordinates": point.coords,
                "constraint_residual": constraint_residual(&point, &rotated.gexp, n),
                "xi_from_point": xi_from_point(&point, n),
            }),
        );
        out.insert("correlations".into(), bundle.to_json_value());
    }
    Ok(Value::Object(out))
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
        }
        let failed = self.failures().count();
        s.push_str(&format!("{} checks, {} failed (seed {})\n", self.checks.len(), failed, self.seed));
        s
    }
}

/// Deliberate corruption used to verify that the self-test can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Rescales one Gell-Mann generator by 1.01.
    BasisNormalization,
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn record(&mut self, name: &str, outcome: Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    /// Passes when `residual` ≤ `tol`.
    fn residual(&mut self, name: &str, outcome: Result<f64>, tol: f64) {
        self.record(name, outcome.map(|r| (r <= tol, format!("residual {r:.3e} (tol {tol:.0e})"))));
    }
}

fn basis_under_test(d: usize, fault: Option<Fault>) -> Result<GeneratorBasis> {
    let b = gellmann_basis(d)?;
    match fault {
        Some(Fault::BasisNormalization) => {
            let mut gens = b.generators().to_vec();
            gens[0] = gens[0].scale(1.01);
            GeneratorBasis::from_generators(d, b.kind(), gens)
        }
        None => Ok(b),
    }
}

/// Runs the invariant suite of every module. Deterministic for a given seed.
pub fn selftest(seed: u64, fault: Option<Fault>) -> SelftestReport {
    let mut s = Suite { checks: Vec::new() };
    let mut rng = rng_from_seed(seed);

    for d in 2..=5 {
        let outcome = basis_under_test(d, fault).map(|b| match b.validate() {
            Ok(()) => (true, format!("d={d} generators valid")),
            Err(defect) => (false, format!("d={d}: {defect}")),
        });
        s.record(&format!("basis d={d}"), outcome);
    }
    s.record(
        "basis anticommuting d=3",
        Ok(match anticomm_basis_d3().validate() {
            Ok(()) => (true, "valid".into()),
            Err(defect) => (false, defect.to_string()),
        }),
    );
    s.residual("spin algebra d=3", spin_matrices(3).map(|sp| sp.algebra_residual()), 1e-12);

    let h = random_density_matrix(30, 30, &mut rng);
    s.residual(
        "hermitian eigendecomposition",
        eig_hermitian(&h).map(|e| e.reconstruct().max_abs_diff(&h)),
        1e-10,
    );
    s.record(
        "cholesky threshold",
        min_eigenvalue(&h).map(|l| {
            let ok = has_eigenvalue_below(&h, l + 1e-8) && !has_eigenvalue_below(&h, l - 1e-8);
            (ok, format!("min eigenvalue {l:.3e}"))
        }),
    );

    let st = random_state(3, 3, &mut rng);
    s.residual(
        "partial trace keeps unit trace",
        st.as_ref()
            .map_err(|e| crate::Error::InvalidConfig(e.to_string()))
            .and_then(|st| partial_trace(st, &[2, 0]))
            .map(|m| (m.rho().trace().re - 1.0).abs()),
        1e-12,
    );
    let basis = || basis_under_test(3, fault);
    s.residual(
        "correlation identities N=3",
        st.and_then(|st| Ok(check_identities(&st, &basis()?)?.max_residual())),
        1e-9,
    );

    let cross = (|| -> Result<f64> {
        let basis = basis()?;
        let mut worst = 0.0f64;
        for n in [3usize, 4] {
            let st = random_state(3, n, &mut rng)?;
            let bundle = collective_bundle(&st, &basis)?;
            let r = xi_sud_collective(&bundle)?;
            let two = xi_sud_two_body(&avg_two_body(&st)?, n, &basis)?;
            let (point, _) = diagonal_coordinates(&bundle);
            worst = worst
                .max(r.details["form_residual"])
                .max((r.value - two.value).abs())
                .max((xi_from_point(&point, n) - r.value).abs());
        }
        Ok(worst)
    })();
    s.residual("su(d) parameter forms agree", cross, 1e-8);

    let sound = (|| -> Result<f64> {
        let basis = basis()?;
        let spin = spin_matrices(3)?;
        let mut lowest = f64::INFINITY;
        for _ in 0..20 {
            let st = random_separable(3, 3, 5, &mut rng)?;
            lowest = lowest.min(xi_sud_collective(&collective_bundle(&st, &basis)?)?.value);
            lowest = lowest.min(spin_squeezing_set(&st, &spin)?.value);
        }
        Ok(lowest)
    })();
    s.record(
        "separable states undetected",
        sound.map(|v| (v >= -1e-9, format!("lowest criterion value {v:.3e}"))),
    );

    s.record(
        "singlet detected",
        (|| {
            let st = sud_singlet(3, 3)?;
            let v = xi_sud_collective(&collective_bundle(&st, &basis()?)?)?.value;
            Ok(((v + 12.0).abs() < 1e-8, format!("xi = {v}")))
        })(),
    );
    s.record(
        "maximally mixed undetected",
        (|| {
            let st = NQuditState::maximally_mixed(3, 3)?;
            let v = xi_sud_collective(&collective_bundle(&st, &basis()?)?)?.value;
            let ppt = ppt_all_bipartitions(&st)?.value;
            Ok((v > 0.0 && ppt > 0.0, format!("xi = {v}, ppt min eigenvalue = {ppt:.3e}")))
        })(),
    );
    s.record(
        "rho_PS3 bound entanglement",
        (|| {
            let st = rho_ps3();
            let v = xi_sud_two_body(&st, 2, &basis()?)?.value;
            let ppt = ppt_all_bipartitions(&st)?.value;
            Ok((st.is_physical() && v.abs() < 1e-9 && ppt < -1e-6, format!("xi = {v:.3e}, ppt = {ppt:.3e}")))
        })(),
    );
    s.record(
        "werner thresholds",
        (|| {
            let w = werner_two_qudit(0.1, 3)?;
            let fexp = w.expectation(&flip_operator(3)?);
            let thr = werner_threshold(6, 3);
            let ok = (fexp - 0.1).abs() < 1e-12 && (thr - 0.2).abs() < 1e-12 && werner_criterion(fexp, 6, 3).detected;
            let marg = noisy_singlet_marginal(10, 3, 0.0)?;
            Ok((ok && marg.is_physical(), format!("<F> = {fexp}, threshold = {thr}")))
        })(),
    );
    s.record(
        "thermal state valid",
        (|| {
            let h = HamiltonianSpec::new(ModelKind::SudSinglet, 3, 3).build()?;
            let st = thermal_state(&h, 3, 3, 0.7)?;
            let tr = (st.rho().trace().re - 1.0).abs();
            let lmin = min_eigenvalue(st.rho())?;
            Ok((tr < 1e-10 && lmin > -1e-10, format!("trace error {tr:.1e}, min eigenvalue {lmin:.3e}")))
        })(),
    );
    s.residual(
        "polytope constraint",
        (|| {
            let st = random_state(3, 4, &mut rng)?;
            let bundle = collective_bundle(&st, &basis()?)?;
            let (p, rotated) = diagonal_coordinates(&bundle);
            Ok(constraint_residual(&p, &rotated.gexp, 4))
        })(),
        1e-9,
    );
    s.record(
        "vertex states",
        (|| {
            let c = vertex_correspondence_check(&basis()?, &[0.0; 8], 4, 0)?;
            Ok((c.a_exact && c.b_exact, format!("A error {:.1e}, B error {:.1e}", c.a_error, c.b_displacement)))
        })(),
    );
    SelftestReport { seed, checks: s.checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes_for_several_seeds() {
        for seed in 0..5 {
            let r = selftest(seed, None);
            assert!(r.passed(), "{}", r.summary());
        }
    }

    #[test]
    fn injected_fault_is_named() {
        let r = selftest(1, Some(Fault::BasisNormalization));
        assert!(!r.passed());
        let first = r.failures().next().unwrap();
        assert!(first.detail.contains("orthonormality"), "{}", first.detail);
    }

    #[test]
    fn evaluate_known_states() {
        let singlet = sud_singlet(3, 3).unwrap();
        let v = evaluate(&singlet, &EvaluateOptions::default()).unwrap();
        assert!((v["xi_sud"]["value"].as_f64().unwrap() + 12.0).abs() < 1e-8);
        assert_eq!(v["xi_sud"]["detected"], true);

        let mixed = NQuditState::maximally_mixed(3, 3).unwrap();
        let v = evaluate(&mixed, &EvaluateOptions::default()).unwrap();
        for key in ["xi_sud", "xi_sud_two_body", "xi_spin", "spin_squeezing", "ppt", "ccnr", "werner"] {
            assert_eq!(v[key]["detected"], false, "{key}");
        }

        let v = evaluate(&rho_ps3(), &EvaluateOptions::default()).unwrap();
        assert!(v["xi_sud"]["value"].as_f64().unwrap().abs() < 1e-9);
        assert_eq!(v["ppt"]["detected"], true);
        assert_eq!(v["ccnr"]["boundary"], true);
        assert!((v["ccnr"]["details"]["trace_norm"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    }
}
