//! Limit-temperature scans over thermal states of collective Hamiltonians,
//! and the tables and figure data built from them.
//!
//! Every supported Hamiltonian commutes with site permutations, so its
//! thermal states are permutation invariant: the average two-body matrix is
//! the marginal of sites (0, 1), and PPT only needs one cut per subset size.
//! Both are assembled per temperature from quantities precomputed once per
//! energy level.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::basis::{anticomm_basis_d3, gellmann_basis, spin_matrices, GeneratorBasis, SpinOperators};
use crate::correlations::collective_bundle;
use crate::criteria::{bipartitions, xi_spin, xi_sud_two_body, DETECTION_TOL};
use crate::error::{Error, Result};
use crate::io::sig6;
use crate::linalg::{eigvals_hermitian, has_eigenvalue_below, ComplexMatrix, ZERO};
use crate::many_body::{avg_two_body, is_matrix_permutation_invariant, partial_transpose_matrix, NQuditState};
use crate::models::{EnergyLevel, HamiltonianSpec, ModelKind, ThermalFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionTag {
    Sud,
    Spin,
    Ppt,
}

impl FromStr for CriterionTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sud" => Ok(Self::Sud),
            "spin" => Ok(Self::Spin),
            "ppt" => Ok(Self::Ppt),
            _ => Err(Error::InvalidConfig(format!("unknown criterion '{s}'"))),
        }
    }
}

impl fmt::Display for CriterionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Sud => "sud",
            Self::Spin => "spin",
            Self::Ppt => "ppt",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub model: HamiltonianSpec,
    pub criterion: CriterionTag,
    pub tmin: f64,
    pub tmax: f64,
    pub grid: usize,
    pub tol: f64,
}

impl ScanConfig {
    pub fn new(model: HamiltonianSpec, criterion: CriterionTag) -> Self {
        Self {
            model,
            criterion,
            tmin: 1e-3,
            tmax: 20.0,
            grid: 200,
            tol: 1e-3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tmin > 0.0 && self.tmin < self.tmax && self.tmax.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < tmin < tmax, got tmin={} tmax={}",
                self.tmin, self.tmax
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.grid < 2 {
            return Err(Error::InvalidConfig("grid needs at least 2 points".into()));
        }
        Ok(())
    }

    /// Geometric temperature grid from tmin to tmax.
    pub fn temperatures(&self) -> Vec<f64> {
        let ratio = (self.tmax / self.tmin).ln();
        (0..self.grid)
            .map(|i| self.tmin * (ratio * i as f64 / (self.grid - 1) as f64).exp())
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub criterion: CriterionTag,
    pub limit_temperature: f64,
    /// Detected at every grid point up to and including tmax.
    pub detected_at_tmax: bool,
    /// Grid intervals (T_i, T_{i+1}) where detection switches back on.
    pub non_monotone: Vec<(f64, f64)>,
    pub evaluations: usize,
}

/// Cached spectral data of one Hamiltonian.
pub struct ThermalScanner {
    family: ThermalFamily,
    levels: Vec<EnergyLevel>,
    symmetric: bool,
    /// Σ over each level of the (0,1) marginal of |v⟩⟨v|.
    pair_marginals: Vec<ComplexMatrix>,
    /// Σ over each level of |v⟩⟨v|, only kept when small enough.
    projectors: Option<Vec<ComplexMatrix>>,
    basis: GeneratorBasis,
    spin: SpinOperators,
}

/// Memory allowed for cached level projectors.
const PROJECTOR_BUDGET_BYTES: usize = 1 << 29;

fn pair_marginal_of_vector(v: &[crate::linalg::C64], d: usize, dim: usize) -> ComplexMatrix {
    let rows = d * d;
    let cols = dim / rows;
    ComplexMatrix::from_fn(rows, |i, j| {
        let (a, b) = (&v[i * cols..(i + 1) * cols], &v[j * cols..(j + 1) * cols]);
        a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x * y.conj())
    })
}

impl ThermalScanner {
    pub fn new(h: &ComplexMatrix, d: usize, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewSites { needed: 2, got: n });
        }
        let family = ThermalFamily::new(h, d, n)?;
        let levels = family.levels();
        let symmetric = is_matrix_permutation_invariant(h, d, n, 1e-9);
        let dim = h.dim();
        let eig = family.eigen();
        let mut pair_marginals = Vec::with_capacity(levels.len());
        for lv in &levels {
            let mut acc = ComplexMatrix::zeros(d * d);
            for i in lv.start..lv.end {
                acc.add_scaled(1.0, &pair_marginal_of_vector(&eig.vector(i), d, dim));
            }
            pair_marginals.push(acc);
        }
        let projectors = (levels.len() * dim * dim * 16 <= PROJECTOR_BUDGET_BYTES).then(|| {
            levels
                .iter()
                .map(|lv| {
                    let w: Vec<f64> = (0..dim).map(|i| if (lv.start..lv.end).contains(&i) { 1.0 } else { 0.0 }).collect();
                    crate::linalg::weighted_gram(&eig.vectors, &w)
                })
                .collect()
        });
        Ok(Self {
            family,
            levels,
            symmetric,
            pair_marginals,
            projectors,
            basis: gellmann_basis(d)?,
            spin: spin_matrices(d)?,
        })
    }

    pub fn from_spec(spec: &HamiltonianSpec) -> Result<Self> {
        Self::new(&spec.build()?, spec.d, spec.n)
    }

    pub fn family(&self) -> &ThermalFamily {
        &self.family
    }

    pub fn is_permutation_invariant(&self) -> bool {
        self.symmetric
    }

    /// Weight of each level (already multiplied by its degeneracy), summing to 1.
    fn level_weights(&self, t: f64) -> Vec<f64> {
        let e0 = self.levels[0].energy;
        let mut w: Vec<f64> = self
            .levels
            .iter()
            .enumerate()
            .map(|(i, lv)| {
                if t <= 0.0 {
                    if i == 0 { 1.0 } else { 0.0 }
                } else {
                    (lv.end - lv.start) as f64 * (-(lv.energy - e0) / t).exp()
                }
            })
            .collect();
        let z: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= z);
        w
    }

    pub fn state(&self, t: f64) -> NQuditState {
        let (d, n) = (self.family.d(), self.family.n_sites());
        match &self.projectors {
            Some(ps) => {
                let mut rho = ComplexMatrix::zeros(ps[0].dim());
                for ((p, w), lv) in ps.iter().zip(self.level_weights(t)).zip(&self.levels) {
                    if w > 1e-18 {
                        rho.add_scaled(w / (lv.end - lv.start) as f64, p);
                    }
                }
                NQuditState::trusted(d, n, rho, true)
            }
            None => self.family.state(t),
        }
    }

    /// Average two-body matrix of the thermal state at temperature t.
    pub fn two_body(&self, t: f64) -> Result<NQuditState> {
        let d = self.family.d();
        if !self.symmetric {
            return avg_two_body(&self.state(t));
        }
        let mut rho = ComplexMatrix::zeros(d * d);
        for ((m, w), lv) in self.pair_marginals.iter().zip(self.level_weights(t)).zip(&self.levels) {
            if w > 1e-18 {
                rho.add_scaled(w / (lv.end - lv.start) as f64, m);
            }
        }
        Ok(NQuditState::trusted(d, 2, rho.hermitian_part(), true))
    }

    /// Criterion value at temperature t; negative means detected.
    pub fn value(&self, tag: CriterionTag, t: f64) -> Result<f64> {
        let n = self.family.n_sites();
        match tag {
            CriterionTag::Sud => Ok(xi_sud_two_body(&self.two_body(t)?, n, &self.basis)?.value),
            CriterionTag::Spin => Ok(xi_spin(&self.two_body(t)?, n, &self.spin)?.value),
            CriterionTag::Ppt => {
                let st = self.state(t);
                let mut best = f64::INFINITY;
                for cut in bipartitions(n, self.symmetric) {
                    let pt = partial_transpose_matrix(st.rho(), st.d(), n, &cut);
                    best = best.min(eigvals_hermitian(&pt)?[0]);
                }
                Ok(best)
            }
        }
    }

    pub fn detected(&self, tag: CriterionTag, t: f64) -> Result<bool> {
        match tag {
            CriterionTag::Ppt => {
                let st = self.state(t);
                let n = st.n_sites();
                Ok(bipartitions(n, self.symmetric).iter().any(|cut| {
                    let pt = partial_transpose_matrix(st.rho(), st.d(), n, cut);
                    has_eigenvalue_below(&pt, -DETECTION_TOL)
                }))
            }
            _ => Ok(self.value(tag, t)? < -DETECTION_TOL),
        }
    }

    /// Grid scan followed by bisection on the last detected-to-undetected step.
    pub fn limit_temperature(&self, tag: CriterionTag, config: &ScanConfig) -> Result<ScanResult> {
        config.validate()?;
        let ts = config.temperatures();
        let det: Vec<bool> = ts.iter().map(|&t| self.detected(tag, t)).collect::<Result<_>>()?;
        let mut evaluations = ts.len();
        let non_monotone: Vec<(f64, f64)> = (0..ts.len() - 1)
            .filter(|&i| !det[i] && det[i + 1])
            .map(|i| (ts[i], ts[i + 1]))
            .collect();
        if !non_monotone.is_empty() {
            log::warn!("{tag}: detection switches back on in {} grid interval(s): {non_monotone:?}", non_monotone.len());
        }
        let last_step = (0..ts.len() - 1).rev().find(|&i| det[i] && !det[i + 1]);
        let (limit, at_max) = if det[ts.len() - 1] {
            log::warn!("{tag}: still detected at tmax = {}", config.tmax);
            (config.tmax, true)
        } else if let Some(i) = last_step {
            let (mut a, mut b) = (ts[i], ts[i + 1]);
            while b - a > config.tol {
                let m = 0.5 * (a + b);
                evaluations += 1;
                if self.detected(tag, m)? {
                    a = m;
                } else {
                    b = m;
                }
            }
            (0.5 * (a + b), false)
        } else {
            (0.0, false)
        };
        Ok(ScanResult {
            criterion: tag,
            limit_temperature: limit,
            detected_at_tmax: at_max,
            non_monotone,
            evaluations,
        })
    }
}

pub fn limit_temperature(config: &ScanConfig) -> Result<ScanResult> {
    config.validate()?;
    ThermalScanner::from_spec(&config.model)?.limit_temperature(config.criterion, config)
}

fn table_config(model: HamiltonianSpec) -> ScanConfig {
    ScanConfig::new(model, CriterionTag::Sud)
}

/// One table as rows of (parameter, limit temperatures in column order).
#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub id: u8,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(|x| sig6(*x)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

/// Table 1: su(d) singlet Hamiltonian, d = 3, N = 2…n_max.
pub fn table1(n_max: usize) -> Result<Table> {
    let mut rows = Vec::new();
    for n in 2..=n_max {
        let spec = HamiltonianSpec::new(ModelKind::SudSinglet, n, 3);
        let scanner = ThermalScanner::from_spec(&spec)?;
        let cfg = table_config(spec);
        let mut row = vec![n as f64];
        for tag in [CriterionTag::Sud, CriterionTag::Spin, CriterionTag::Ppt] {
            row.push(scanner.limit_temperature(tag, &cfg)?.limit_temperature);
        }
        log::info!("table 1 row N={n}: {row:?}");
        rows.push(row);
    }
    Ok(Table {
        id: 1,
        header: ["N", "T_sud", "T_spin", "T_ppt"].map(String::from).to_vec(),
        rows,
    })
}

fn spin_table(id: u8, model: ModelKind, gammas: &[f64]) -> Result<Table> {
    let mut rows = Vec::new();
    for &g in gammas {
        let spec = HamiltonianSpec::new(model, 6, 3).with_gamma(g);
        let scanner = ThermalScanner::from_spec(&spec)?;
        let cfg = table_config(spec);
        let t_spin = scanner.limit_temperature(CriterionTag::Spin, &cfg)?.limit_temperature;
        let t_sud = scanner.limit_temperature(CriterionTag::Sud, &cfg)?.limit_temperature;
        log::info!("table {id} row gamma={g}: spin {t_spin}, sud {t_sud}");
        rows.push(vec![g, t_spin, t_sud]);
    }
    Ok(Table {
        id,
        header: ["gamma", "T_spin", "T_sud"].map(String::from).to_vec(),
        rows,
    })
}

/// Table 2: +(1/N)(Jx² + Jy² + γJz²), N = 6, d = 3.
pub fn table2() -> Result<Table> {
    spin_table(2, ModelKind::Spin, &[0.0, 0.5, 1.0])
}

/// Table 3: −(1/N)(Jx² + Jy² + γJz²), N = 6, d = 3.
pub fn table3() -> Result<Table> {
    spin_table(3, ModelKind::SpinFerro, &[0.0, 0.25, 0.5, 0.75])
}

pub fn table(id: u8) -> Result<Table> {
    match id {
        1 => table1(6),
        2 => table2(),
        3 => table3(),
        _ => Err(Error::InvalidConfig(format!("no table {id}; expected 1, 2 or 3"))),
    }
}

/// Diagonal of 𝔘 for one thermal state, in the anticommuting d = 3 basis.
#[derive(Clone, Debug, Serialize)]
pub struct Fig3Series {
    pub label: String,
    pub temperature: f64,
    pub u_diag: Vec<f64>,
}

/// The three N = 4 qutrit thermal states of the figure.
pub fn fig3_data() -> Result<Vec<Fig3Series>> {
    let basis = anticomm_basis_d3();
    let cases = [
        ("sud-singlet", HamiltonianSpec::new(ModelKind::SudSinglet, 4, 3), 1.0),
        ("spin-gamma1", HamiltonianSpec::new(ModelKind::Spin, 4, 3).with_gamma(1.0), 0.5),
        ("spin-ferro-gamma0", HamiltonianSpec::new(ModelKind::SpinFerro, 4, 3).with_gamma(0.0), 0.5),
    ];
    cases
        .into_iter()
        .map(|(label, spec, t)| {
            let state = ThermalFamily::new(&spec.build()?, 3, 4)?.state(t);
            let bundle = collective_bundle(&state, &basis)?;
            Ok(Fig3Series {
                label: label.to_string(),
                temperature: t,
                u_diag: bundle.u.diag(),
            })
        })
        .collect()
}

/// Checks the sign pattern of the figure data; returns the violations.
pub fn fig3_sign_violations(series: &[Fig3Series]) -> Vec<String> {
    let rules: [(&str, &[usize], bool); 3] = [
        ("sud-singlet", &[0, 1, 2, 3, 4, 5, 6, 7], false),
        ("spin-gamma1", &[0, 1, 2], false),
        ("spin-ferro-gamma0", &[0, 1], true),
    ];
    let mut out = Vec::new();
    for (label, ks, positive) in rules {
        let Some(s) = series.iter().find(|s| s.label == label) else {
            out.push(format!("{label}: missing"));
            continue;
        };
        for &k in ks {
            let v = s.u_diag[k];
            if (positive && v <= 0.0) || (!positive && v >= 0.0) {
                out.push(format!("{label}: U_{} = {v} has the wrong sign", k + 1));
            }
        }
    }
    out
}

pub fn fig3_csv(series: &[Fig3Series]) -> String {
    let mut out = String::from("state,T,k,U_kk\n");
    for s in series {
        for (k, v) in s.u_diag.iter().enumerate() {
            out.push_str(&format!("{},{},{},{}\n", s.label, sig6(s.temperature), k + 1, sig6(*v)));
        }
    }
    out
}
