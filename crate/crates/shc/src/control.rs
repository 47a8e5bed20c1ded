//! Truncated moment-method synthesis of internal and boundary null controls.
//!
//! The heat dynamics f_t + A f = source diagonalizes on the eigenbasis, so
//! driving the first N modes of f(T) to zero reduces to moment equations on
//! the exponential family (e^{−λ_n t})_{n<N}. The minimal-norm biorthogonal
//! family on (0,T) is obtained by inverting the exponential Gram matrix
//!
//! G_{jk} = ∫₀ᵀ e^{−λ_j t} e^{−λ_k t} dt = (1 − e^{−(λ_j+λ_k)T})/(λ_j+λ_k),
//!
//! in closed form — no time discretization enters anywhere in this module.
//!
//! Internal control: u(t,x) = −Σ ⟨f⁰,φ_n⟩ e^{−λ_n T} q_n(T−t) 1_ω φ_n(x)/∫_ω φ_n².
//! Boundary control (right endpoint): the spectrum is shifted by +1 (working
//! on e^t f) and u(t) = −Σ ⟨f⁰,φ_n⟩ e^{−(λ_n+1)T} q_n(T−t)/b_n with
//! b_n = −φ_n′(1)/√(1+λ_n), which is bounded away from 0 and ∞.
//!
//! Certificates report the exact (closed-form in time, quadrature in space)
//! final spectral coefficients, the control norm, the Gram condition number
//! and the biorthogonality residual.

use crate::quad::{self, IntervalUnion};
use crate::spectrum::SpectralBasis;
use crate::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Hard cap on the number of simultaneously controlled modes; beyond this the
/// exponential Gram matrix cannot be trusted in double precision.
pub const MODE_CAP: usize = 24;
/// Refusal threshold on the Gram condition number.
pub const CONDITION_CAP: f64 = 1e13;

/// Where the control acts.
#[derive(Debug, Clone)]
pub enum ControlRegion {
    /// Distributed control supported on a finite union of intervals.
    Internal(IntervalUnion),
    /// Scalar control through the right endpoint x = 1.
    Boundary,
}

/// A null-control problem: horizon, actuation region, initial spectral data
/// and the number of targeted modes.
#[derive(Debug, Clone)]
pub struct ControlProblem {
    /// Time horizon T > 0.
    pub horizon_t: f64,
    pub region: ControlRegion,
    /// Sparse initial coefficients ⟨f⁰, φ_n⟩.
    pub initial_modes: Vec<(usize, f64)>,
    /// Number of targeted modes N ≥ 1 (modes 0..N are driven to zero).
    pub mode_count: usize,
}

/// Serialized form of a control problem:
/// `{ "nu": .., "T": .., "omega": [[a,b],..] | "boundary", "f0_modes": [[n,c],..], "N": .. }`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ControlProblemFile {
    pub nu: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub omega: OmegaSpec,
    pub f0_modes: Vec<(usize, f64)>,
    #[serde(rename = "N")]
    pub n: usize,
}

/// The `omega` field: interval list or the literal string "boundary".
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OmegaSpec {
    Keyword(String),
    Intervals(Vec<[f64; 2]>),
}

impl ControlProblemFile {
    /// Validate and convert into a [`ControlProblem`]; returns (ν, problem).
    pub fn into_problem(self) -> Result<(f64, ControlProblem)> {
        if self.t <= 0.0 {
            return Err(Error::InvalidArgument(format!("T must be > 0, got {}", self.t)));
        }
        if self.n == 0 {
            return Err(Error::InvalidArgument("N must be >= 1".into()));
        }
        let region = match self.omega {
            OmegaSpec::Keyword(ref s) if s == "boundary" => ControlRegion::Boundary,
            OmegaSpec::Keyword(ref s) => {
                return Err(Error::InvalidArgument(format!(
                    "omega must be \"boundary\" or an interval list, got \"{s}\""
                )))
            }
            OmegaSpec::Intervals(ref iv) => {
                let pairs: Vec<(f64, f64)> = iv.iter().map(|p| (p[0], p[1])).collect();
                ControlRegion::Internal(IntervalUnion::new(&pairs)?)
            }
        };
        Ok((
            self.nu,
            ControlProblem {
                horizon_t: self.t,
                region,
                initial_modes: self.f0_modes,
                mode_count: self.n,
            },
        ))
    }
}

/// Minimal-norm biorthogonal family for (e^{−λ_j t})_{j<N} on (0,T):
/// q_k(t) = Σ_j Q_{kj} e^{−λ_j t} with ∫₀ᵀ q_k e^{−λ_j t} dt = δ_{kj}.
#[derive(Debug, Clone)]
pub struct BiorthogonalFamily {
    pub lambdas: Vec<f64>,
    pub horizon_t: f64,
    /// Q = G⁻¹ (iteratively refined).
    pub coefficient_matrix: DMatrix<f64>,
    /// Spectral condition number of G.
    pub gram_condition: f64,
    /// max_{k,j} |∫₀ᵀ q_k e^{−λ_j t} dt − δ_{kj}|, measured with compensated
    /// dot products so the report is not limited by naive f64 accumulation.
    pub residual: f64,
    gram: DMatrix<f64>,
}

/// Closed-form pairwise integral ∫₀ᵀ e^{−a t} e^{−b t} dt.
fn exp_pair_integral(a: f64, b: f64, t: f64) -> f64 {
    let s = a + b;
    if s == 0.0 {
        t
    } else {
        (-(-s * t).exp_m1()) / s
    }
}

/// Exponential Gram matrix G_{jk} = ∫₀ᵀ e^{−λ_j t}e^{−λ_k t} dt. Exponents
/// must be distinct and ≥ 0.
pub fn exp_gram(lambdas: &[f64], t: f64) -> Result<DMatrix<f64>> {
    let n = lambdas.len();
    for (i, &li) in lambdas.iter().enumerate() {
        if li < 0.0 {
            return Err(Error::InvalidArgument(format!("negative exponent {li}")));
        }
        for &lj in &lambdas[i + 1..] {
            if li == lj {
                return Err(Error::InvalidArgument(format!("duplicate exponent {li}")));
            }
        }
    }
    Ok(DMatrix::from_fn(n, n, |j, k| exp_pair_integral(lambdas[j], lambdas[k], t)))
}

/// Compensated dot product: products via fused multiply-add error capture,
/// accumulation via Neumaier summation. Used to *measure* residuals below the
/// naive f64 accumulation floor.
fn dot_compensated(a: impl Iterator<Item = f64>, b: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for (x, y) in a.zip(b) {
        let p = x * y;
        let perr = x.mul_add(y, -p);
        // Neumaier step for p.
        let t = sum + p;
        comp += if sum.abs() >= p.abs() { (sum - t) + p } else { (p - t) + sum };
        sum = t;
        comp += perr;
    }
    sum + comp
}

/// Build the minimal-norm biorthogonal family by Gram inversion with one
/// Newton refinement pass (Q ← Q(2I − GQ)) using compensated residuals.
pub fn biorthogonal_family(lambdas: &[f64], t: f64) -> Result<BiorthogonalFamily> {
    let n = lambdas.len();
    if n == 0 || n > MODE_CAP {
        return Err(Error::InvalidArgument(format!(
            "mode count {n} outside 1..={MODE_CAP}"
        )));
    }
    let g = exp_gram(lambdas, t)?;
    let eig = g.clone().symmetric_eigen();
    let emax = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    let emin = eig.eigenvalues.iter().cloned().fold(f64::MAX, f64::min);
    if emin <= 0.0 {
        return Err(Error::IllConditioned { condition: f64::INFINITY, cap: CONDITION_CAP });
    }
    let condition = emax / emin;
    if condition > CONDITION_CAP {
        return Err(Error::IllConditioned { condition, cap: CONDITION_CAP });
    }
    let mut q = g.clone().try_inverse().ok_or(Error::IllConditioned {
        condition,
        cap: CONDITION_CAP,
    })?;
    // Newton refinement: squares the inversion residual (two passes are ample).
    for _ in 0..2 {
        let mut gq = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                gq[(i, j)] = dot_compensated(g.row(i).iter().cloned(), q.column(j).iter().cloned());
            }
        }
        let correction = &q * (DMatrix::identity(n, n) - gq);
        q += correction;
    }
    let mut residual = 0.0f64;
    for k in 0..n {
        for j in 0..n {
            let v = dot_compensated(q.row(k).iter().cloned(), g.column(j).iter().cloned());
            let target = if k == j { 1.0 } else { 0.0 };
            residual = residual.max((v - target).abs());
        }
    }
    Ok(BiorthogonalFamily {
        lambdas: lambdas.to_vec(),
        horizon_t: t,
        coefficient_matrix: q,
        gram_condition: condition,
        residual,
        gram: g,
    })
}

impl BiorthogonalFamily {
    /// q_k(t) evaluated directly from the exponential representation.
    pub fn q(&self, k: usize, t: f64) -> f64 {
        self.lambdas
            .iter()
            .enumerate()
            .map(|(j, &l)| self.coefficient_matrix[(k, j)] * (-l * t).exp())
            .sum()
    }

    /// ‖q_k‖²_{L²(0,T)} = (Q G Qᵀ)_{kk}.
    pub fn q_norm_sq(&self, k: usize) -> f64 {
        let row = self.coefficient_matrix.row(k);
        let gq = &self.gram * row.transpose();
        (row * gq)[(0, 0)]
    }

    /// Σ_j Q_{kj} ∫₀ᵀ e^{−λ_j(T−s)} e^{−μ(T−s)} ds — the closed-form time
    /// integral of q_k(T−t) against the decaying mode μ. Equals δ (by
    /// biorthogonality) when μ is one of the family exponents.
    pub fn moment_against(&self, k: usize, mu: f64) -> f64 {
        self.lambdas
            .iter()
            .enumerate()
            .map(|(j, &l)| {
                self.coefficient_matrix[(k, j)] * exp_pair_integral(l, mu, self.horizon_t)
            })
            .sum()
    }
}

/// ∫_region φ_n² by adaptive quadrature.
pub fn observability_mass(basis: &SpectralBasis, region: &IntervalUnion, n: usize) -> Result<f64> {
    let rec = &basis.records[n];
    let param = basis.param;
    let f = |x: f64| {
        let v = rec.phi(&param, x);
        v * v
    };
    quad::integrate(&f, region, &basis.quad_cfg)
}

/// A synthesized distributed control
/// u(t,x) = Σ_{n<N} amp_n q_n(T−t) 1_ω φ_n(x)/mass_n.
#[derive(Debug, Clone)]
pub struct InternalControl {
    pub family: BiorthogonalFamily,
    /// amp_n = −⟨f⁰,φ_n⟩ e^{−λ_n T}.
    pub amplitudes: Vec<f64>,
    /// Observability masses ∫_ω φ_n².
    pub masses: Vec<f64>,
    pub region: IntervalUnion,
    /// ‖u‖_{L²((0,T)×(−1,1))}.
    pub control_norm: f64,
}

/// Dense initial coefficient vector up to `len` from the sparse problem data.
fn dense_f0(problem: &ControlProblem, len: usize) -> Vec<f64> {
    let mut f0 = vec![0.0; len];
    for &(n, c) in &problem.initial_modes {
        if n < len {
            f0[n] += c;
        }
    }
    f0
}

/// Synthesize the internal null control for the first N modes.
pub fn synthesize_internal_control(
    basis: &SpectralBasis,
    problem: &ControlProblem,
) -> Result<InternalControl> {
    let n_modes = problem.mode_count;
    assert!(basis.count() >= n_modes, "basis too short for the requested mode count");
    let region = match &problem.region {
        ControlRegion::Internal(r) => r.clone(),
        ControlRegion::Boundary => {
            return Err(Error::InvalidArgument(
                "internal synthesis called on a boundary problem".into(),
            ))
        }
    };
    let lambdas: Vec<f64> = basis.lambdas()[..n_modes].to_vec();
    let family = biorthogonal_family(&lambdas, problem.horizon_t)?;
    let mut masses = Vec::with_capacity(n_modes);
    for n in 0..n_modes {
        let m = observability_mass(basis, &region, n)?;
        if m <= 1e-14 {
            return Err(Error::ZeroMass { mode: n, mass: m });
        }
        masses.push(m);
    }
    let f0 = dense_f0(problem, n_modes);
    let amplitudes: Vec<f64> = (0..n_modes)
        .map(|n| -f0[n] * (-lambdas[n] * problem.horizon_t).exp())
        .collect();

    // ‖u‖² = Σ_{n,m} amp_n amp_m (QGQᵀ)_{nm} ∫_ω φ_nφ_m / (mass_n mass_m).
    let (xs, ws) = quad::fixed_grid(&region, &basis.quad_cfg);
    let samples: Vec<Vec<f64>> = (0..n_modes)
        .map(|n| xs.iter().map(|&x| basis.records[n].phi(&basis.param, x)).collect())
        .collect();
    let q = &family.coefficient_matrix;
    let qgq = q * &family.gram * q.transpose();
    let mut norm_sq = 0.0;
    for n in 0..n_modes {
        for m in 0..n_modes {
            let mut spatial = 0.0;
            for i in 0..xs.len() {
                spatial += ws[i] * samples[n][i] * samples[m][i];
            }
            norm_sq += amplitudes[n] * amplitudes[m] * qgq[(n, m)] * spatial
                / (masses[n] * masses[m]);
        }
    }
    Ok(InternalControl {
        family,
        amplitudes,
        masses,
        region,
        control_norm: norm_sq.max(0.0).sqrt(),
    })
}

/// Final spectral coefficients ⟨f(T), φ_p⟩ for p < report_to under the given
/// internal control (pass `report_to ≥ N` to see the free spillover):
///
/// ⟨f(T),φ_p⟩ = e^{−λ_p T}⟨f⁰,φ_p⟩
///              + Σ_{n<N} (∫_ω φ_p φ_n)/mass_n · amp_n · Σ_j Q_{nj}∫₀ᵀe^{−λ_p(T−s)}e^{−λ_j(T−s)}ds.
pub fn simulate_final_modes(
    basis: &SpectralBasis,
    problem: &ControlProblem,
    control: &InternalControl,
    report_to: usize,
) -> Vec<(usize, f64)> {
    let n_modes = problem.mode_count;
    assert!(basis.count() >= report_to);
    let f0 = dense_f0(problem, report_to.max(n_modes));
    let (xs, ws) = quad::fixed_grid(&control.region, &basis.quad_cfg);
    let samples: Vec<Vec<f64>> = (0..report_to.max(n_modes))
        .map(|n| xs.iter().map(|&x| basis.records[n].phi(&basis.param, x)).collect())
        .collect();
    let mut out = Vec::with_capacity(report_to);
    for p in 0..report_to {
        let lp = basis.records[p].lambda;
        let mut coeff = (-lp * problem.horizon_t).exp() * f0[p];
        for n in 0..n_modes {
            let mut spatial = 0.0;
            for i in 0..xs.len() {
                spatial += ws[i] * samples[p][i] * samples[n][i];
            }
            coeff += spatial / control.masses[n]
                * control.amplitudes[n]
                * control.family.moment_against(n, lp);
        }
        out.push((p, coeff));
    }
    out
}

/// Free evolution (u = 0): ⟨f(T), φ_p⟩ = e^{−λ_p T} ⟨f⁰, φ_p⟩.
pub fn free_final_modes(
    basis: &SpectralBasis,
    problem: &ControlProblem,
    report_to: usize,
) -> Vec<(usize, f64)> {
    let f0 = dense_f0(problem, report_to);
    (0..report_to)
        .map(|p| (p, (-basis.records[p].lambda * problem.horizon_t).exp() * f0[p]))
        .collect()
}

/// Endpoint derivatives and moment coefficients for boundary control.
#[derive(Debug, Clone)]
pub struct BoundaryCoefficients {
    /// (n, φ_n′(1)).
    pub derivs: Vec<(usize, f64)>,
    /// (n, b_n = −φ_n′(1)/√(1+λ_n)).
    pub b: Vec<(usize, f64)>,
}

/// φ_n′(1), analytically from the Bessel representation.
pub fn boundary_derivative(basis: &SpectralBasis, n: usize) -> f64 {
    basis.records[n].phi_prime_at_one(&basis.param)
}

/// Derivatives and b-coefficients for n = 0..upto.
pub fn boundary_coefficients(basis: &SpectralBasis, upto: usize) -> BoundaryCoefficients {
    let derivs: Vec<(usize, f64)> =
        (0..upto).map(|n| (n, boundary_derivative(basis, n))).collect();
    let b = derivs
        .iter()
        .map(|&(n, d)| (n, -d / (1.0 + basis.records[n].lambda).sqrt()))
        .collect();
    BoundaryCoefficients { derivs, b }
}

/// A synthesized scalar boundary control on the +1-shifted spectrum:
/// u(t) = Σ_{n<N} amp_n q_n(T−t), with q_n biorthogonal to e^{−(λ_n+1)t}.
#[derive(Debug, Clone)]
pub struct BoundaryControl {
    pub family: BiorthogonalFamily,
    /// amp_n = −⟨f⁰,φ_n⟩ e^{−(λ_n+1)T} / b_n.
    pub amplitudes: Vec<f64>,
    /// b_n for all reported modes.
    pub coefficients: BoundaryCoefficients,
    /// ‖u‖_{L²(0,T)}.
    pub control_norm: f64,
}

/// Synthesize the boundary null control for the first N modes.
pub fn synthesize_boundary_control(
    basis: &SpectralBasis,
    problem: &ControlProblem,
) -> Result<BoundaryControl> {
    if !matches!(problem.region, ControlRegion::Boundary) {
        return Err(Error::InvalidArgument(
            "boundary synthesis called on an internal problem".into(),
        ));
    }
    let n_modes = problem.mode_count;
    assert!(basis.count() >= n_modes);
    // Shifted exponents μ_n = λ_n + 1 (the gauge g = e^t f).
    let mus: Vec<f64> = basis.lambdas()[..n_modes].iter().map(|l| l + 1.0).collect();
    let family = biorthogonal_family(&mus, problem.horizon_t)?;
    let coefficients = boundary_coefficients(basis, n_modes);
    let f0 = dense_f0(problem, n_modes);
    let amplitudes: Vec<f64> = (0..n_modes)
        .map(|n| {
            let b = coefficients.b[n].1;
            -f0[n] * (-mus[n] * problem.horizon_t).exp() / b
        })
        .collect();
    let q = &family.coefficient_matrix;
    let qgq = q * &family.gram * q.transpose();
    let mut norm_sq = 0.0;
    for n in 0..n_modes {
        for m in 0..n_modes {
            norm_sq += amplitudes[n] * amplitudes[m] * qgq[(n, m)];
        }
    }
    Ok(BoundaryControl {
        family,
        amplitudes,
        coefficients,
        control_norm: norm_sq.max(0.0).sqrt(),
    })
}

/// Final shifted-mode coefficients for p < report_to under a boundary control:
///
/// m_p = e^{−μ_p T}⟨f⁰,φ_p⟩ + b_p Σ_{n<N} amp_n Σ_j Q_{nj} ∫₀ᵀ e^{−μ_p(T−s)}e^{−μ_j(T−s)} ds.
pub fn simulate_boundary_final_modes(
    basis: &SpectralBasis,
    problem: &ControlProblem,
    control: &BoundaryControl,
    report_to: usize,
) -> Vec<(usize, f64)> {
    let n_modes = problem.mode_count;
    assert!(basis.count() >= report_to);
    let coefs = boundary_coefficients(basis, report_to.max(n_modes));
    let f0 = dense_f0(problem, report_to.max(n_modes));
    let mut out = Vec::with_capacity(report_to);
    for p in 0..report_to {
        let mu_p = basis.records[p].lambda + 1.0;
        let bp = coefs.b[p].1;
        let mut coeff = (-mu_p * problem.horizon_t).exp() * f0[p];
        for n in 0..n_modes {
            coeff += bp * control.amplitudes[n] * control.family.moment_against(n, mu_p);
        }
        out.push((p, coeff));
    }
    out
}

/// Machine-readable control certificate.
#[derive(Debug, Serialize, Deserialize)]
pub struct Certificate {
    /// (n, ⟨f(T), φ_n⟩) for all reported modes; targeted modes come first.
    pub final_modes: Vec<(usize, f64)>,
    pub control_norm: f64,
    pub gram_condition: f64,
    pub biorth_residual: f64,
}

/// Run a full problem (internal or boundary) and produce its certificate,
/// reporting `report_to` final modes (≥ N shows spillover).
pub fn certify(
    basis: &SpectralBasis,
    problem: &ControlProblem,
    report_to: usize,
) -> Result<Certificate> {
    match problem.region {
        ControlRegion::Internal(_) => {
            let control = synthesize_internal_control(basis, problem)?;
            let final_modes = simulate_final_modes(basis, problem, &control, report_to);
            Ok(Certificate {
                final_modes,
                control_norm: control.control_norm,
                gram_condition: control.family.gram_condition,
                biorth_residual: control.family.residual,
            })
        }
        ControlRegion::Boundary => {
            let control = synthesize_boundary_control(basis, problem)?;
            let final_modes = simulate_boundary_final_modes(basis, problem, &control, report_to);
            Ok(Certificate {
                final_modes,
                control_norm: control.control_norm,
                gram_condition: control.family.gram_condition,
                biorth_residual: control.family.residual,
            })
        }
    }
}
