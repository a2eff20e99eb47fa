//! Concurrence and quantum discord of two-qubit states.
//!
//! Discord is minimised over rank-1 projective measurements `{Π+, Π-}` on
//! qubit A, with `Π± = (I ± n·σ)/2` and `n` parameterised by Bloch angles.
//! The search is a uniform angle grid followed by golden-section refinement,
//! so results are bit-reproducible.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    binary_entropy, clamp_state_spectrum, entropy_of_spectrum, hermitian_eigen,
    hermitian_eigenvalues, partial_trace, validate_state, von_neumann_entropy, ComplexMatrix,
    Subsystem, IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z, STATE_CLAMP,
};
use crate::model::ThermalStateX;
use crate::optimize::golden_section;

/// Outcome probabilities below this are treated as impossible branches.
pub const BRANCH_PROBABILITY_FLOOR: f64 = 1e-14;
/// Discord values in `[-DISCORD_CLAMP, 0)` are reported as zero.
pub const DISCORD_CLAMP: f64 = 1e-9;

const TIE_EPS: f64 = 1e-14;
const SYMMETRY_TOL: f64 = 1e-14;

/// Bloch angles of the measurement axis `n = (sinθ cosφ, sinθ sinφ, cosθ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::Domain(format!(
                "Bloch angles out of range: theta={theta}, phi={phi}"
            )));
        }
        Ok(Self { theta, phi })
    }

    pub fn axis(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// `(Π+, Π-)` on a single qubit.
    pub fn projectors(&self) -> (ComplexMatrix, ComplexMatrix) {
        let [x, y, z] = self.axis();
        let n_sigma = &(&SIGMA_X.scale(x) + &SIGMA_Y.scale(y)) + &SIGMA_Z.scale(z);
        let plus = (&IDENTITY_2 + &n_sigma).scale(0.5);
        let minus = (&IDENTITY_2 - &n_sigma).scale(0.5);
        (plus, minus)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Square roots of the eigenvalues of `ρ ρ̃`, descending `(p, q, r, s)`.
    pub sqrt_eigenvalues: [f64; 4],
}

impl ConcurrenceResult {
    fn from_sqrt(mut roots: [f64; 4]) -> Self {
        roots.sort_by(|a, b| b.total_cmp(a));
        let signed = roots[0] - roots[1] - roots[2] - roots[3];
        Self {
            value: signed.max(0.0),
            sqrt_eigenvalues: roots,
        }
    }

    /// `p - q - r - s` before the clamp at zero; positive iff entangled.
    pub fn signed(&self) -> f64 {
        let [p, q, r, s] = self.sqrt_eigenvalues;
        p - q - r - s
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscordResult {
    pub value: f64,
    pub s_a: f64,
    pub s_ab: f64,
    pub min_conditional_entropy: f64,
    pub optimal_basis: MeasurementBasis,
    pub evaluations: usize,
}

/// Grid resolution and refinement width for the measurement search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimizerOptions {
    pub grid_n: usize,
    pub tol: f64,
}

impl Default for MinimizerOptions {
    fn default() -> Self {
        Self {
            grid_n: 181,
            tol: 1e-9,
        }
    }
}

impl MinimizerOptions {
    pub fn validate(&self) -> Result<()> {
        if self.grid_n < 2 {
            return Err(Error::InvalidInput(format!(
                "grid size must be at least 2, got {}",
                self.grid_n
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalEntropyMinimum {
    pub value: f64,
    pub basis: MeasurementBasis,
    pub evaluations: usize,
}

/// One measurement outcome on A: its probability and B's post-measurement state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalBranch {
    pub probability: f64,
    pub state: ComplexMatrix,
}

fn sigma_yy() -> ComplexMatrix {
    SIGMA_Y.kron(&SIGMA_Y).expect("2x2 factors")
}

/// `(σy⊗σy) ρ* (σy⊗σy)`.
pub fn spin_flip(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(Error::InvalidInput("spin flip needs a 4x4 matrix".into()));
    }
    let yy = sigma_yy();
    Ok(&(&yy * &rho.conj()) * &yy)
}

/// Concurrence from the eigenvalues of `ρ ρ̃`.
///
/// X-form inputs use the block closed form; everything else goes through
/// [`concurrence_general`].
pub fn concurrence(rho: &ComplexMatrix) -> Result<ConcurrenceResult> {
    validate_state(rho)?;
    if rho.is_x_form() {
        Ok(concurrence_x_matrix(rho))
    } else {
        concurrence_from_product(rho)
    }
}

/// Concurrence through the numeric eigenvalues of `√ρ ρ̃ √ρ`, which shares its
/// spectrum with `ρ ρ̃` but is Hermitian.
pub fn concurrence_general(rho: &ComplexMatrix) -> Result<ConcurrenceResult> {
    validate_state(rho)?;
    concurrence_from_product(rho)
}

fn concurrence_from_product(rho: &ComplexMatrix) -> Result<ConcurrenceResult> {
    let sqrt_rho = hermitian_eigen(rho)?.apply(|l| l.max(0.0).sqrt());
    let flipped = spin_flip(rho)?;
    let product = (&(&sqrt_rho * &flipped) * &sqrt_rho).hermitian_part();
    let lambdas = clamp_state_spectrum(hermitian_eigenvalues(&product)?.values())?;
    let mut roots = [0.0; 4];
    for (r, l) in roots.iter_mut().zip(lambdas) {
        *r = l.sqrt();
    }
    Ok(ConcurrenceResult::from_sqrt(roots))
}

fn concurrence_x_matrix(rho: &ComplexMatrix) -> ConcurrenceResult {
    let outer = (rho[(0, 0)].re * rho[(3, 3)].re).max(0.0).sqrt();
    let outer_coh = rho[(0, 3)].norm();
    let inner = (rho[(1, 1)].re * rho[(2, 2)].re).max(0.0).sqrt();
    let inner_coh = rho[(1, 2)].norm();
    ConcurrenceResult::from_sqrt([
        outer + outer_coh,
        (outer - outer_coh).abs(),
        inner + inner_coh,
        (inner - inner_coh).abs(),
    ])
}

/// `2 max(0, |a23| - sqrt(a11 a44))`.
pub fn concurrence_xstate(s: &ThermalStateX) -> f64 {
    2.0 * (s.a23.abs() - (s.a11 * s.a44).max(0.0).sqrt()).max(0.0)
}

/// Measures `Π±` on A and returns both outcomes. Branches with probability
/// below `1e-14` carry the maximally mixed qubit as a placeholder state.
pub fn measure_conditional_states(
    rho: &ComplexMatrix,
    basis: &MeasurementBasis,
) -> Result<[ConditionalBranch; 2]> {
    if rho.dim() != 4 {
        return Err(Error::InvalidInput(
            "conditional states need a 4x4 two-qubit state".into(),
        ));
    }
    let (plus, minus) = basis.projectors();
    let branch = |proj: &ComplexMatrix| -> Result<ConditionalBranch> {
        let lifted = proj.kron(&IDENTITY_2)?;
        let post = &(&lifted * rho) * &lifted;
        let probability = post.trace().re;
        let state = if probability < BRANCH_PROBABILITY_FLOOR {
            ComplexMatrix::maximally_mixed(2)?
        } else {
            partial_trace(&post, Subsystem::B)?
                .scale(1.0 / probability)
                .hermitian_part()
        };
        Ok(ConditionalBranch { probability, state })
    };
    Ok([branch(&plus)?, branch(&minus)?])
}

/// `Σ_k p_k S(ρ_B|k)` for the measurement along `basis`.
pub fn conditional_entropy(rho: &ComplexMatrix, basis: &MeasurementBasis) -> Result<f64> {
    let mut total = 0.0;
    for br in measure_conditional_states(rho, basis)? {
        if br.probability >= BRANCH_PROBABILITY_FLOOR {
            total += br.probability * von_neumann_entropy(&br.state)?;
        }
    }
    Ok(total)
}

/// True when ρ only couples basis states with equal total `σz`, i.e. ρ is
/// invariant under `e^{-iφσz/2} ⊗ e^{-iφσz/2}`. For such states the measured
/// conditional entropy is independent of φ and symmetric under θ → π - θ.
fn conserves_total_sz(rho: &ComplexMatrix) -> bool {
    const TOTAL_SZ: [i32; 4] = [2, 0, 0, -2];
    (0..4).all(|r| (0..4).all(|c| TOTAL_SZ[r] == TOTAL_SZ[c] || rho[(r, c)].norm() <= SYMMETRY_TOL))
}

struct SearchTracker<'a> {
    rho: &'a ComplexMatrix,
    min_value: f64,
    basis_value: f64,
    basis: (f64, f64),
    evaluations: usize,
    error: Option<Error>,
}

impl<'a> SearchTracker<'a> {
    fn new(rho: &'a ComplexMatrix) -> Self {
        Self {
            rho,
            min_value: f64::INFINITY,
            basis_value: f64::INFINITY,
            basis: (0.0, 0.0),
            evaluations: 0,
            error: None,
        }
    }

    fn eval(&mut self, theta: f64, phi: f64) -> f64 {
        self.evaluations += 1;
        let basis = MeasurementBasis { theta, phi };
        let v = match conditional_entropy(self.rho, &basis) {
            Ok(v) => v,
            Err(e) => {
                self.error.get_or_insert(e);
                return f64::INFINITY;
            }
        };
        self.min_value = self.min_value.min(v);
        let better = v < self.basis_value - TIE_EPS
            || ((v - self.basis_value).abs() <= TIE_EPS && (theta, phi) < self.basis);
        if better {
            self.basis_value = v;
            self.basis = (theta, phi);
        }
        v
    }
}

fn grid(lo: f64, hi: f64, n: usize, include_end: bool) -> Vec<f64> {
    let denom = if include_end { n - 1 } else { n } as f64;
    (0..n).map(|i| lo + (hi - lo) * i as f64 / denom).collect()
}

fn neighbours(points: &[f64], i: usize) -> (f64, f64) {
    let step = if points.len() > 1 {
        points[1] - points[0]
    } else {
        0.0
    };
    let lo = if i > 0 { points[i - 1] } else { points[0] };
    let hi = points.get(i + 1).copied().unwrap_or(points[i] + step);
    (lo, hi)
}

/// Minimum of the measured conditional entropy of B over projective
/// measurements on A.
///
/// States conserving total `σz` (every state of the thermal family) are
/// searched over `θ ∈ [0, π/2]` at `φ = 0`. Other states are searched over
/// `θ ∈ [0, π] × φ ∈ [0, π)`, which covers every measurement axis up to sign,
/// followed by alternating θ/φ refinement.
pub fn min_conditional_entropy(
    rho: &ComplexMatrix,
    opts: &MinimizerOptions,
) -> Result<ConditionalEntropyMinimum> {
    opts.validate()?;
    validate_state(rho)?;
    let mut t = SearchTracker::new(rho);

    if conserves_total_sz(rho) {
        let thetas = grid(0.0, FRAC_PI_2, opts.grid_n, true);
        let mut best = (f64::INFINITY, 0);
        for (i, &th) in thetas.iter().enumerate() {
            let v = t.eval(th, 0.0);
            if v < best.0 {
                best = (v, i);
            }
        }
        let (lo, hi) = neighbours(&thetas, best.1);
        golden_section(|th| t.eval(th, 0.0), lo, hi.min(FRAC_PI_2), opts.tol);
    } else {
        let thetas = grid(0.0, PI, opts.grid_n, true);
        let phis = grid(0.0, PI, opts.grid_n, false);
        let mut best = (f64::INFINITY, 0, 0);
        for (j, &ph) in phis.iter().enumerate() {
            for (i, &th) in thetas.iter().enumerate() {
                let v = t.eval(th, ph);
                if v < best.0 {
                    best = (v, i, j);
                }
            }
        }
        let (th_lo, th_hi) = neighbours(&thetas, best.1);
        let th_hi = th_hi.min(PI);
        let (ph_lo, ph_hi) = neighbours(&phis, best.2);
        let mut phi = phis[best.2];
        let theta = golden_section(|th| t.eval(th, phi), th_lo, th_hi, opts.tol);
        phi = golden_section(|ph| t.eval(theta, ph), ph_lo, ph_hi, opts.tol);
        golden_section(|th| t.eval(th, phi), th_lo, th_hi, opts.tol);
    }

    if let Some(e) = t.error {
        return Err(e);
    }
    let (theta, phi) = t.basis;
    Ok(ConditionalEntropyMinimum {
        value: t.min_value,
        basis: MeasurementBasis {
            theta: theta.clamp(0.0, PI),
            phi: phi.rem_euclid(2.0 * PI),
        },
        evaluations: t.evaluations,
    })
}

/// `Q = S(ρ_A) - S(ρ_AB) + min S(B|{Π_k})`, in bits.
pub fn quantum_discord(rho: &ComplexMatrix, opts: &MinimizerOptions) -> Result<DiscordResult> {
    validate_state(rho)?;
    let s_a = von_neumann_entropy(&partial_trace(rho, Subsystem::A)?)?;
    let s_ab = von_neumann_entropy(rho)?;
    let min = min_conditional_entropy(rho, opts)?;
    let mut value = s_a - s_ab + min.value;
    if (-DISCORD_CLAMP..0.0).contains(&value) {
        value = 0.0;
    }
    Ok(DiscordResult {
        value,
        s_a,
        s_ab,
        min_conditional_entropy: min.value,
        optimal_basis: min.basis,
        evaluations: min.evaluations,
    })
}

/// Closed-form discord of a Bell-diagonal member of the thermal family
/// (`a11 = a44`, `a22 = a33`), using correlation coefficients
/// `c1 = c2 = 2 a23`, `c3 = 4 a11 - 1` and `min S(B|A) = H2((1 + c)/2)` with
/// `c = max(|c1|, |c3|)`. Shares no code path with the numeric minimiser.
pub fn discord_bell_diagonal_oracle(s: &ThermalStateX) -> Result<f64> {
    if (s.a11 - s.a44).abs() > 1e-12 || (s.a22 - s.a33).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "Bell-diagonal closed form needs a11 = a44 and a22 = a33, got {s:?}"
        )));
    }
    let c1 = 2.0 * s.a23;
    let c3 = 4.0 * s.a11 - 1.0;
    let c = c1.abs().max(c3.abs());
    let s_a = binary_entropy(s.a11 + s.a22);
    let half_gap = 0.5 * (s.a22 - s.a33);
    let radius = (half_gap * half_gap + s.a23 * s.a23).sqrt();
    let mid = 0.5 * (s.a22 + s.a33);
    let spectrum = [s.a11, s.a44, mid + radius, mid - radius];
    for &l in &spectrum {
        if l < -STATE_CLAMP {
            return Err(Error::NotAState(l));
        }
    }
    let s_ab = entropy_of_spectrum(&spectrum.map(|l| l.max(0.0)));
    Ok(s_a - s_ab + binary_entropy(0.5 * (1.0 + c)))
}

/// `S(ρ_A) + S(ρ_B) - S(ρ_AB)`, clamped at zero.
pub fn mutual_information(rho: &ComplexMatrix) -> Result<f64> {
    validate_state(rho)?;
    let s_a = von_neumann_entropy(&partial_trace(rho, Subsystem::A)?)?;
    let s_b = von_neumann_entropy(&partial_trace(rho, Subsystem::B)?)?;
    let s_ab = von_neumann_entropy(rho)?;
    Ok((s_a + s_b - s_ab).max(0.0))
}

/// Bell singlet `|ψ-⟩⟨ψ-|`.
pub fn singlet() -> ComplexMatrix {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    ComplexMatrix::projector(&[zero, h, -h, zero]).expect("4-vector")
}
