//! Herring-Flicker coupling, the two-spin Hamiltonian, and thermal states.
//!
//! Two thermal-state constructions are provided. [`thermal_state_paper`]
//! evaluates the closed-form X matrix with partition denominator
//! `e^{-(J-2B)/2KT} + e^{-(2B+J)/2KT} + 2e^{-J/2KT} + 2e^{3J/2KT}`;
//! this is the default for every downstream quantity. [`thermal_state_gibbs`]
//! exponentiates a Hamiltonian exactly and is kept for cross-checks. The two
//! agree on the X-form sparsity pattern but not on values once `J > 0`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix, IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z};

/// Prefactor of the leading Herring-Flicker term.
pub const HF_PREFACTOR: f64 = 1.642;

/// Distance at which `e^{-2R} R^{5/2}` peaks.
pub const HF_PEAK_DISTANCE: f64 = 1.25;

/// One physical configuration: coupling distance, field and temperature
/// (all dimensionless, `KT` is temperature times the Boltzmann constant).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    r: f64,
    b: f64,
    kt: f64,
}

impl ModelParams {
    pub fn new(r: f64, b: f64, kt: f64) -> Result<Self> {
        if !(r.is_finite() && b.is_finite() && kt.is_finite()) {
            return Err(Error::Domain(format!(
                "parameters must be finite (R={r}, B={b}, KT={kt})"
            )));
        }
        if r < 0.0 {
            return Err(Error::Domain(format!("R must be nonnegative, got {r}")));
        }
        if kt <= 0.0 {
            return Err(Error::Domain(format!("KT must be positive, got {kt}")));
        }
        Ok(Self { r, b, kt })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn kt(&self) -> f64 {
        self.kt
    }

    pub fn coupling(&self) -> CouplingStrength {
        CouplingStrength(hf_value(self.r))
    }
}

/// Exchange energy `J(R) ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct CouplingStrength(f64);

impl CouplingStrength {
    pub fn value(self) -> f64 {
        self.0
    }
}

fn hf_value(r: f64) -> f64 {
    HF_PREFACTOR * (-2.0 * r).exp() * r.powf(2.5)
}

/// Leading Herring-Flicker term `1.642 e^{-2R} R^{5/2}`; the `O(R^2 e^{-2R})`
/// remainder has no published coefficient and is omitted.
pub fn hf_coupling(r: f64) -> Result<CouplingStrength> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::Domain(format!(
            "coupling distance must be finite and nonnegative, got {r}"
        )));
    }
    Ok(CouplingStrength(hf_value(r)))
}

/// How the field term enters the Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    /// `J(R)[σxσx + σyσy + σzσz + B(σz⊗I + I⊗σz)]`, the field scaled by `J`.
    Eq3AsPrinted,
    /// `(J/2)(σxσx + σyσy + σzσz) + (B/2)(σz⊗I + I⊗σz)`, whose Boltzmann
    /// weights carry the exponents used by the closed-form X matrix.
    #[default]
    Reconciled,
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq3" | "eq3-as-printed" => Ok(Self::Eq3AsPrinted),
            "reconciled" => Ok(Self::Reconciled),
            other => Err(Error::InvalidInput(format!(
                "unknown convention '{other}' (expected 'reconciled' or 'eq3')"
            ))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Eq3AsPrinted => "eq3",
            Self::Reconciled => "reconciled",
        })
    }
}

/// Which thermal-state construction feeds the correlation measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Construction {
    #[default]
    Paper,
    Gibbs(Convention),
}

impl Construction {
    pub fn density_matrix(self, p: &ModelParams) -> Result<ComplexMatrix> {
        match self {
            Self::Paper => thermal_state_paper(p).to_matrix(),
            Self::Gibbs(c) => thermal_state_gibbs(p, c),
        }
    }
}

fn exchange_operator() -> ComplexMatrix {
    let xx = SIGMA_X.kron(&SIGMA_X).expect("2x2 factors");
    let yy = SIGMA_Y.kron(&SIGMA_Y).expect("2x2 factors");
    let zz = SIGMA_Z.kron(&SIGMA_Z).expect("2x2 factors");
    &(&xx + &yy) + &zz
}

fn field_operator() -> ComplexMatrix {
    let za = SIGMA_Z.kron(&IDENTITY_2).expect("2x2 factors");
    let zb = IDENTITY_2.kron(&SIGMA_Z).expect("2x2 factors");
    &za + &zb
}

pub fn build_hamiltonian(p: &ModelParams, convention: Convention) -> ComplexMatrix {
    let j = p.coupling().value();
    let exchange = exchange_operator();
    let field = field_operator();
    match convention {
        Convention::Eq3AsPrinted => (&exchange + &field.scale(p.b)).scale(j),
        Convention::Reconciled => &exchange.scale(0.5 * j) + &field.scale(0.5 * p.b),
    }
}

/// The five independent entries of the X-form thermal matrix
///
/// ```text
/// [ a11   0    0    0  ]
/// [  0   a22  a23   0  ]
/// [  0   a23  a33   0  ]
/// [  0    0    0   a44 ]
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalStateX {
    pub a11: f64,
    pub a22: f64,
    pub a23: f64,
    pub a33: f64,
    pub a44: f64,
}

impl ThermalStateX {
    pub fn trace(&self) -> f64 {
        self.a11 + self.a22 + self.a33 + self.a44
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let mut m = ComplexMatrix::from_real_diagonal(&[self.a11, self.a22, self.a33, self.a44])?;
        m[(1, 2)] = Complex64::new(self.a23, 0.0);
        m[(2, 1)] = Complex64::new(self.a23, 0.0);
        Ok(m)
    }

    /// Reads the five entries back from a matrix laid out as above.
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::InvalidInput("X-form state must be 4x4".into()));
        }
        Ok(Self {
            a11: m[(0, 0)].re,
            a22: m[(1, 1)].re,
            a23: m[(1, 2)].re,
            a33: m[(2, 2)].re,
            a44: m[(3, 3)].re,
        })
    }
}

/// Closed-form X-form thermal matrix.
///
/// All exponents are shifted by their maximum before exponentiation so the
/// entries stay finite at very low `KT`.
pub fn thermal_state_paper(p: &ModelParams) -> ThermalStateX {
    let j = p.coupling().value();
    let two_kt = 2.0 * p.kt;
    let x_up = -(2.0 * p.b + j) / two_kt; // a11
    let x_down = -(j - 2.0 * p.b) / two_kt; // a44
    let x_t = -j / two_kt;
    let x_s = 3.0 * j / two_kt;
    let shift = x_up.max(x_down).max(x_t).max(x_s);
    let w_up = (x_up - shift).exp();
    let w_down = (x_down - shift).exp();
    let w_t = (x_t - shift).exp();
    let w_s = (x_s - shift).exp();
    let z = w_down + w_up + 2.0 * w_t + 2.0 * w_s;
    let center = (w_t + w_s) / z;
    ThermalStateX {
        a11: w_up / z,
        a22: center,
        a23: (w_t - w_s) / z,
        a33: center,
        a44: w_down / z,
    }
}

/// `e^{-H/KT} / Tr e^{-H/KT}` via eigendecomposition of the Hamiltonian.
pub fn thermal_state_gibbs(p: &ModelParams, convention: Convention) -> Result<ComplexMatrix> {
    let h = build_hamiltonian(p, convention);
    let eig = hermitian_eigen(&h)?;
    let e_min = eig.values.values()[0];
    let z: f64 = eig
        .values
        .values()
        .iter()
        .map(|&e| (-(e - e_min) / p.kt).exp())
        .sum();
    let rho = eig.apply(|e| (-(e - e_min) / p.kt).exp() / z);
    Ok(rho.hermitian_part())
}
