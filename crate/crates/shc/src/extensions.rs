//! Self-adjoint extension classification under Dirichlet endpoint conditions,
//! and the ill-posedness demonstration for c < −1/4.
//!
//! Near x = 0 every domain element splits into a regular part and a singular
//! part c₁^± |x|^{ν+1/2} + c₂^± |x|^{−ν+1/2} (one coefficient pair per side of
//! 0). The boundary data of the extension theory are the combinations
//!
//! α^± = c₁^± + c₂^±,     β^± = (ν+1/2) c₁^± + (−ν+1/2) c₂^±,
//!
//! and with Dirichlet conditions at ±1 fixed, a self-adjoint extension is a
//! pair of 2×2 matrices (M₂, M₃) acting by M₂ (α⁻, −β⁻)ᵀ + M₃ (α⁺, β⁺)ᵀ = 0,
//! subject to rank(M₂ M₃) = 2 and det M₂ = det M₃. Nonzero determinants give
//! the *coupled* extensions, parameterized by the unique unimodular
//! M = M₂⁻¹M₃; vanishing determinants give *decoupled* extensions (one linear
//! relation per side). The operator studied by the rest of this crate is the
//! coupled extension M = I₂, i.e. α⁻ = −α⁺ and β⁻ = β⁺.

use crate::spectrum::{EigenRecord, SpectralParameter};
use crate::{Error, Result};
use nalgebra::{Matrix2, Matrix4, RowVector2, SMatrix, Vector2};
use serde::{Deserialize, Serialize};

/// Relative singular-value threshold for rank decisions.
const RANK_TOL: f64 = 1e-10;

/// Coefficients of the singular profiles |x|^{ν+1/2} (c₁) and |x|^{−ν+1/2}
/// (c₂) on each side of 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularCoefficients {
    pub c1_minus: f64,
    pub c2_minus: f64,
    pub c1_plus: f64,
    pub c2_plus: f64,
}

/// Boundary data (α^±, β^±) of the extension theory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCoefficientsAB {
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub beta_plus: f64,
    pub beta_minus: f64,
}

/// Linear map from singular coefficients to (α, β) data; invertible for every
/// ν ∈ (0,1) since its determinant per side is (−ν+1/2) − (ν+1/2) = −2ν ≠ 0.
pub fn coeffs_to_alphabeta(
    param: &SpectralParameter,
    c: &SingularCoefficients,
) -> BoundaryCoefficientsAB {
    let p = param.nu + 0.5;
    let m = -param.nu + 0.5;
    BoundaryCoefficientsAB {
        alpha_plus: c.c1_plus + c.c2_plus,
        alpha_minus: c.c1_minus + c.c2_minus,
        beta_plus: p * c.c1_plus + m * c.c2_plus,
        beta_minus: p * c.c1_minus + m * c.c2_minus,
    }
}

/// Inverse of [`coeffs_to_alphabeta`] (round-trips to 1e-12).
pub fn alphabeta_to_coeffs(
    param: &SpectralParameter,
    ab: &BoundaryCoefficientsAB,
) -> SingularCoefficients {
    let p = param.nu + 0.5;
    let m = -param.nu + 0.5;
    let det = m - p; // = −2ν
    // Solve [1 1; p m] (c1, c2)ᵀ = (α, β)ᵀ per side.
    let solve = |alpha: f64, beta: f64| {
        let c1 = (m * alpha - beta) / det;
        let c2 = (beta - p * alpha) / det;
        (c1, c2)
    };
    let (c1_plus, c2_plus) = solve(ab.alpha_plus, ab.beta_plus);
    let (c1_minus, c2_minus) = solve(ab.alpha_minus, ab.beta_minus);
    SingularCoefficients { c1_minus, c2_minus, c1_plus, c2_plus }
}

/// Singular coefficients of an eigenfunction ψ_n, read off the small-argument
/// behavior √|x| J_{±ν}(√λ|x|) = (√λ/2)^{±ν}/Γ(1±ν) · |x|^{±ν+1/2} (1+O(x²)).
pub fn eigenfunction_singular_coeffs(
    param: &SpectralParameter,
    rec: &EigenRecord,
) -> SingularCoefficients {
    if rec.index == 0 {
        // ψ₀ is its own singular part.
        return SingularCoefficients {
            c1_minus: rec.coeff_nu_minus,
            c2_minus: rec.coeff_minus_nu_minus,
            c1_plus: rec.coeff_nu_plus,
            c2_plus: rec.coeff_minus_nu_plus,
        };
    }
    let r2 = 0.5 * rec.lambda.sqrt();
    let scale_pos = r2.powf(param.nu) / crate::special::gamma(1.0 + param.nu);
    let scale_neg = r2.powf(-param.nu) / crate::special::gamma(1.0 - param.nu);
    SingularCoefficients {
        c1_minus: rec.coeff_nu_minus * scale_pos,
        c2_minus: rec.coeff_minus_nu_minus * scale_neg,
        c1_plus: rec.coeff_nu_plus * scale_pos,
        c2_plus: rec.coeff_minus_nu_plus * scale_neg,
    }
}

/// The symplectic form E = [[0, −1], [1, 0]] of the boundary pairing.
pub fn symplectic_form() -> Matrix2<f64> {
    Matrix2::new(0.0, -1.0, 1.0, 0.0)
}

/// Self-adjointness test for a quadruple of 4×2 boundary matrices:
/// N₁EN₁ᵀ − N₂EN₂ᵀ + N₃EN₃ᵀ − N₄EN₄ᵀ = 0 (to 1e-12, scaled) and the 4×8
/// concatenation (N₁ N₂ N₃ N₄) has full rank 4.
pub fn check_quadruple(
    n1: &SMatrix<f64, 4, 2>,
    n2: &SMatrix<f64, 4, 2>,
    n3: &SMatrix<f64, 4, 2>,
    n4: &SMatrix<f64, 4, 2>,
) -> bool {
    let e = symplectic_form();
    let sym: Matrix4<f64> =
        n1 * e * n1.transpose() - n2 * e * n2.transpose() + n3 * e * n3.transpose()
            - n4 * e * n4.transpose();
    let mut concat = SMatrix::<f64, 4, 8>::zeros();
    concat.fixed_view_mut::<4, 2>(0, 0).copy_from(n1);
    concat.fixed_view_mut::<4, 2>(0, 2).copy_from(n2);
    concat.fixed_view_mut::<4, 2>(0, 4).copy_from(n3);
    concat.fixed_view_mut::<4, 2>(0, 6).copy_from(n4);
    let svd = concat.svd(false, false);
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return false;
    }
    let rank = svd.singular_values.iter().filter(|&&s| s > RANK_TOL * smax).count();
    let scale = [n1, n2, n3, n4].iter().map(|m| m.norm()).fold(1.0f64, f64::max);
    rank == 4 && sym.norm() <= 1e-12 * scale * scale
}

/// Outcome of classifying an extension pair (M₂, M₃).
#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    /// det M₂ = det M₃ ≠ 0: transmission (α⁻, −β⁻)ᵀ + M (α⁺, β⁺)ᵀ = 0 with
    /// the unique unimodular M = M₂⁻¹M₃ (det M = det M₃/det M₂ = +1 by the
    /// determinant-equality condition, so M needs no sign convention).
    Coupled(Matrix2<f64>),
    /// det M₂ = det M₃ = 0 with overall rank 2: one linear relation per side,
    /// ℓ⁻·(α⁻, −β⁻) = 0 and ℓ⁺·(α⁺, β⁺) = 0.
    Decoupled { l_minus: RowVector2<f64>, l_plus: RowVector2<f64> },
    /// The pair violates rank(M₂ M₃) = 2 or det M₂ = det M₃.
    Invalid,
}

/// A classified extension specification.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionSpec {
    pub m2: Matrix2<f64>,
    pub m3: Matrix2<f64>,
    pub classification: Classification,
}

/// Classify an extension pair per the rank/determinant conditions.
pub fn classify_extension(m2: &Matrix2<f64>, m3: &Matrix2<f64>) -> ExtensionSpec {
    let spec = |classification| ExtensionSpec { m2: *m2, m3: *m3, classification };
    let scale = m2.norm().max(m3.norm());
    if scale == 0.0 {
        return spec(Classification::Invalid);
    }
    // rank(M₂ M₃) over the 2×4 concatenation.
    let mut concat = SMatrix::<f64, 2, 4>::zeros();
    concat.fixed_view_mut::<2, 2>(0, 0).copy_from(m2);
    concat.fixed_view_mut::<2, 2>(0, 2).copy_from(m3);
    let svd = concat.svd(false, false);
    let smax = svd.singular_values.max();
    let rank = svd.singular_values.iter().filter(|&&s| s > RANK_TOL * smax).count();
    if rank != 2 {
        return spec(Classification::Invalid);
    }
    let (d2, d3) = (m2.determinant(), m3.determinant());
    if (d2 - d3).abs() > RANK_TOL * scale * scale {
        return spec(Classification::Invalid);
    }
    if d2.abs() <= RANK_TOL * scale * scale {
        // Decoupled: both matrices are rank ≤ 1; take the dominant row of each
        // as the per-side relation.
        let dominant_row = |m: &Matrix2<f64>| -> Option<RowVector2<f64>> {
            let r0 = m.row(0).into_owned();
            let r1 = m.row(1).into_owned();
            let pick = if r0.amax() >= r1.amax() { r0 } else { r1 };
            if pick.amax() <= RANK_TOL * scale {
                None
            } else {
                Some(pick)
            }
        };
        return match (dominant_row(m2), dominant_row(m3)) {
            (Some(l_minus), Some(l_plus)) => spec(Classification::Decoupled { l_minus, l_plus }),
            // A zero matrix on either side cannot reach overall rank 2 with
            // rank-1 partners; flag as invalid defensively.
            _ => spec(Classification::Invalid),
        };
    }
    let m = m2.try_inverse().expect("nonzero determinant") * m3;
    // det M = det M₃ / det M₂ = +1 by the determinant-equality condition, so M
    // is the unique representative; dividing by √det only absorbs roundoff.
    // (No sign normalization: −M would define a different subspace.)
    let det = m.determinant();
    if det <= 0.0 {
        return spec(Classification::Invalid);
    }
    spec(Classification::Coupled(m / det.sqrt()))
}

impl ExtensionSpec {
    /// Membership residual of boundary data in the extension:
    /// coupled — max-norm of (α⁻, −β⁻)ᵀ + M (α⁺, β⁺)ᵀ;
    /// decoupled — max of the two per-side relation values.
    pub fn transmission_residual(&self, ab: &BoundaryCoefficientsAB) -> Result<f64> {
        let minus = Vector2::new(ab.alpha_minus, -ab.beta_minus);
        let plus = Vector2::new(ab.alpha_plus, ab.beta_plus);
        match &self.classification {
            Classification::Coupled(m) => Ok((minus + m * plus).amax()),
            Classification::Decoupled { l_minus, l_plus } => {
                Ok((l_minus * minus).amax().max((l_plus * plus).amax()))
            }
            Classification::Invalid => {
                Err(Error::InvalidArgument("residual of an invalid extension".into()))
            }
        }
    }
}

/// Boundary contribution −α⁺β⁺ − α⁻β⁻ to the quadratic form ⟨Af, f⟩; it
/// vanishes identically on the constraint subspaces of M = ±I₂.
pub fn boundary_quadratic_term(ab: &BoundaryCoefficientsAB) -> f64 {
    -ab.alpha_plus * ab.beta_plus - ab.alpha_minus * ab.beta_minus
}

/// JSON input for the classifier: `{"M2": [[..],[..]], "M3": [[..],[..]]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ExtensionSpecFile {
    #[serde(rename = "M2")]
    pub m2: [[f64; 2]; 2],
    #[serde(rename = "M3")]
    pub m3: [[f64; 2]; 2],
}

/// JSON output of the classifier.
#[derive(Debug, Serialize, Deserialize)]
pub struct ClassificationReport {
    /// "coupled" | "decoupled" | "invalid".
    pub class: String,
    /// Unimodular transmission matrix (coupled only).
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(rename = "M")]
    pub m: Option<[[f64; 2]; 2]>,
    /// Per-side relations (decoupled only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_minus: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_plus: Option<[f64; 2]>,
}

/// Classify a deserialized spec file into a serializable report.
pub fn classify_file(file: &ExtensionSpecFile) -> ClassificationReport {
    let to_m2 = |a: &[[f64; 2]; 2]| Matrix2::new(a[0][0], a[0][1], a[1][0], a[1][1]);
    let spec = classify_extension(&to_m2(&file.m2), &to_m2(&file.m3));
    match spec.classification {
        Classification::Coupled(m) => ClassificationReport {
            class: "coupled".into(),
            m: Some([[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]),
            l_minus: None,
            l_plus: None,
        },
        Classification::Decoupled { l_minus, l_plus } => ClassificationReport {
            class: "decoupled".into(),
            m: None,
            l_minus: Some([l_minus[0], l_minus[1]]),
            l_plus: Some([l_plus[0], l_plus[1]]),
        },
        Classification::Invalid => ClassificationReport {
            class: "invalid".into(),
            m: None,
            l_minus: None,
            l_plus: None,
        },
    }
}

/// Closed-form data of the blow-up test profile f = x^{1/2+ε}(1−x) on (0,1):
/// the three integrals and the Rayleigh-type quotient
/// (−∫f′² − c∫f²/x²)/∫f². The numerator behaves like (−1/8 − c/2)/ε as
/// ε → 0 (and ∫f² → 1/12, so the quotient grows like 12(−1/8 − c/2)/ε);
/// it blows up to +∞ exactly when c < −1/4.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IllposednessProfile {
    pub c: f64,
    pub eps: f64,
    /// ∫₀¹ f² = 1/(4ε³ + 18ε² + 26ε + 12).
    pub int_f_sq: f64,
    /// ∫₀¹ f²/x² = 1/(4ε³ + 6ε² + 2ε).
    pub int_f_sq_over_x_sq: f64,
    /// ∫₀¹ f′² = (2ε+1)/(8ε² + 8ε).
    pub int_f_prime_sq: f64,
    /// (−∫f′² − c ∫f²/x²)/∫f².
    pub rayleigh_quotient: f64,
}

/// Evaluate the ill-posedness profile for c < 0 and ε ∈ (0, 1].
pub fn illposedness_profile(c: f64, eps: f64) -> Result<IllposednessProfile> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidArgument(format!("eps must be in (0,1], got {eps}")));
    }
    let int_f_sq = 1.0 / (4.0 * eps.powi(3) + 18.0 * eps * eps + 26.0 * eps + 12.0);
    let int_f_sq_over_x_sq = 1.0 / (4.0 * eps.powi(3) + 6.0 * eps * eps + 2.0 * eps);
    let int_f_prime_sq = (2.0 * eps + 1.0) / (8.0 * eps * eps + 8.0 * eps);
    let rayleigh_quotient = (-int_f_prime_sq - c * int_f_sq_over_x_sq) / int_f_sq;
    Ok(IllposednessProfile {
        c,
        eps,
        int_f_sq,
        int_f_sq_over_x_sq,
        int_f_prime_sq,
        rayleigh_quotient,
    })
}
