//! Certified nuclear-norm and spectral-norm bounds.
//!
//! Upper bounds on the spectral norm come from the Frobenius norm,
//! flattening spectral norms, and the analytic overrides registered for the
//! canonical tensors. Lower bounds on the nuclear norm come from the gram
//! route `||T||^2 / [T]`, from pairing a tuple with a certified measure,
//! and from orthogonal decompositions. Certification is tracked per bound
//! side; a heuristic lower estimate of `[S]_alpha` is never divided into a
//! pairing bound without being flagged uncertified.

use crate::canonical::{hadamard_spectral_override, identify, CanonicalKind, PermutationTensorKind};
use crate::decomposition::{
    assemble, dense_pure_inner, normalize, Decomposition, PureTensor, PureTuple,
};
use crate::error::{Error, Result};
use crate::orthogonality::{
    bracket_alpha_dense, coherence_mu, try_certify_modewise_orthogonal, MeasureEstimate,
    OptimizerSettings,
};
use crate::tensor::{flattening_spectral_norm, frobenius_norm, DenseTensor};

/// One side of a two-sided bound, with provenance.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BoundSide {
    pub value: f64,
    pub certified: bool,
    pub route: String,
}

/// Two-sided spectral-norm bracket; the lower side is an exact evaluation
/// at the stored witness.
#[derive(Clone, Debug)]
pub struct SpectralBounds {
    pub lower: BoundSide,
    pub upper: BoundSide,
    pub witness: Option<PureTensor>,
}

/// Certified nuclear-norm interval.
#[derive(Clone, Debug)]
pub struct NuclearInterval {
    pub lower: BoundSide,
    pub upper: BoundSide,
}

/// Certified upper bound on the spectral norm: minimum of the Frobenius
/// norm, the single-mode flattening spectral norms, and any analytic
/// override recognized for the tensor.
pub fn spectral_upper_certified(t: &DenseTensor) -> Result<BoundSide> {
    let mut candidates: Vec<(f64, String)> = Vec::new();
    if let Some(kind) = identify(t) {
        let (value, name) = match kind {
            CanonicalKind::Determinant(n) => (
                hadamard_spectral_override(PermutationTensorKind::Determinant, n)?,
                format!("analytic override: determinant Hadamard bound (n = {n})"),
            ),
            CanonicalKind::Permanent(n) => (
                hadamard_spectral_override(PermutationTensorKind::Permanent, n)?,
                format!("analytic override: permanent Hadamard analog (n = {n})"),
            ),
            CanonicalKind::GroupAlgebra(n) => (
                (n as f64).sqrt(),
                format!("analytic override: group multiplication tensor (n = {n})"),
            ),
            CanonicalKind::MatrixMultiplication(p, q, r) => (
                1.0,
                format!("analytic override: matrix multiplication tensor ({p}, {q}, {r})"),
            ),
        };
        candidates.push((value, name));
    }
    let d = t.space().order();
    if d >= 2 {
        for mode in 0..d {
            candidates.push((
                flattening_spectral_norm(t, &[mode])?,
                format!("flattening spectral norm, mode {mode}"),
            ));
        }
    }
    candidates.push((frobenius_norm(t), "frobenius norm".into()));
    let (value, route) = candidates
        .into_iter()
        .reduce(|best, cand| if cand.0 < best.0 { cand } else { best })
        .expect("frobenius route always applies");
    Ok(BoundSide {
        value,
        certified: true,
        route,
    })
}

/// Brackets the spectral norm: heuristic witness below, certified routes
/// above.
pub fn spectral_bounds(t: &DenseTensor, opts: &OptimizerSettings) -> Result<SpectralBounds> {
    if t.is_zero() {
        return Err(Error::DegenerateInput(
            "spectral bounds of the zero tensor".into(),
        ));
    }
    let est = bracket_alpha_dense(std::slice::from_ref(t), 2.0, opts)?;
    let upper = spectral_upper_certified(t)?;
    Ok(SpectralBounds {
        lower: BoundSide {
            value: est.value,
            certified: true,
            route: "witness evaluation (multi-start ascent)".into(),
        },
        upper,
        witness: est.witness,
    })
}

/// Pairing lower bound on the nuclear norm:
/// `||T||_* >= (sum_i |<T, S_i>|^alpha)^(1/alpha) / [S]_alpha`, sound for
/// `alpha >= 1`; certified only when the supplied measure is certified.
pub fn nuclear_lower_pairing(
    t: &DenseTensor,
    s: &PureTuple,
    alpha: f64,
    s_measure: &MeasureEstimate,
) -> Result<BoundSide> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(
            "the pairing bound needs alpha >= 1".into(),
        ));
    }
    if (s_measure.alpha - alpha).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "measure was taken at alpha = {}, pairing runs at alpha = {alpha}",
            s_measure.alpha
        )));
    }
    if s_measure.value.is_nan() || s_measure.value <= 0.0 {
        return Err(Error::InvalidArgument(
            "the tuple measure must be positive".into(),
        ));
    }
    let mut acc = 0.0f64;
    for member in s.members() {
        acc += dense_pure_inner(t, member)?.norm().powf(alpha);
    }
    let value = acc.powf(1.0 / alpha) / s_measure.value;
    Ok(BoundSide {
        value,
        certified: s_measure.is_certified(),
        route: format!(
            "pairing with a {}-member tuple at alpha = {alpha} ({})",
            s.len(),
            s_measure.route
        ),
    })
}

/// Orthogonal-decomposition lower bound:
/// `||T||_* >= (lambda_1 + ... + lambda_k) / [w^[k]]_1` for an orthogonal
/// tuple `w` with nonincreasing weights.
pub fn nuclear_lower_orthogonal(
    dec: &Decomposition,
    k: usize,
    head_measure: &MeasureEstimate,
) -> Result<BoundSide> {
    let normalized = normalize(dec).decomposition;
    if normalized.is_empty() {
        return Err(Error::DegenerateInput("empty decomposition".into()));
    }
    if k == 0 || k > normalized.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} out of range for {} terms",
            normalized.len()
        )));
    }
    let tuple = normalized.tuple()?;
    let mu = coherence_mu(&tuple)?;
    if mu > 1e-9 {
        return Err(Error::Precondition(format!(
            "tuple is not orthogonal: coherence {mu:.3e}"
        )));
    }
    if (head_measure.alpha - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(
            "the head measure must be taken at alpha = 1".into(),
        ));
    }
    if head_measure.value.is_nan() || head_measure.value <= 0.0 {
        return Err(Error::InvalidArgument(
            "the head measure must be positive".into(),
        ));
    }
    let head_sum: f64 = normalized.terms()[..k].iter().map(|t| t.coeff.re).sum();
    Ok(BoundSide {
        value: head_sum / head_measure.value,
        certified: head_measure.is_certified(),
        route: format!(
            "orthogonal head sum, k = {k} ({})",
            head_measure.route
        ),
    })
}

fn structural_measure(alpha: f64, rule: &str) -> MeasureEstimate {
    MeasureEstimate {
        alpha,
        value: 1.0,
        witness: None,
        status: crate::orthogonality::MeasureStatus::ExactStructural,
        route: format!("structural certificate: {rule}"),
    }
}

/// Aggregated nuclear-norm interval. The upper side is the cheapest known
/// decomposition cost (the basis expansion when none is supplied); the
/// lower side is the best of the Frobenius, gram, pairing, and orthogonal
/// routes. Both sides are certified.
pub fn nuclear_interval(
    t: &DenseTensor,
    known_dec: Option<&Decomposition>,
    _opts: &OptimizerSettings,
) -> Result<NuclearInterval> {
    if t.is_zero() {
        return Err(Error::DegenerateInput(
            "nuclear interval of the zero tensor".into(),
        ));
    }

    // Upper side.
    let one_norm: f64 = t.entries().iter().map(|z| z.norm()).sum();
    let mut upper = BoundSide {
        value: one_norm,
        certified: true,
        route: "entrywise one-norm (basis expansion)".into(),
    };
    let mut normalized_dec = None;
    if let Some(dec) = known_dec {
        let rebuilt = assemble(dec);
        let err = frobenius_norm(&rebuilt.sub(t)?);
        if err > 1e-9 * frobenius_norm(t).max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "supplied decomposition does not assemble to the tensor (error {err:.3e})"
            )));
        }
        let cost = crate::decomposition::nuclear_cost(dec);
        if cost < upper.value {
            upper = BoundSide {
                value: cost,
                certified: true,
                route: format!("decomposition cost ({} terms)", dec.len()),
            };
        }
        normalized_dec = Some(normalize(dec).decomposition);
    }

    // Lower side.
    let mut lower = BoundSide {
        value: frobenius_norm(t),
        certified: true,
        route: "frobenius norm".into(),
    };
    let mut consider = |cand: BoundSide| {
        if cand.value > lower.value {
            lower = cand;
        }
    };

    let spectral_upper = spectral_upper_certified(t)?;
    if spectral_upper.value > 0.0 {
        let fro = frobenius_norm(t);
        consider(BoundSide {
            value: fro * fro / spectral_upper.value,
            certified: true,
            route: format!("gram route ||T||^2 / [T] ({})", spectral_upper.route),
        });
    }

    if let Some(dec) = normalized_dec.as_ref().filter(|d| !d.is_empty()) {
        let tuple = dec.tuple()?;
        let cert = tuple
            .cert()
            .cloned()
            .or_else(|| try_certify_modewise_orthogonal(&tuple, 1e-9));
        if let Some(cert) = cert {
            // Pairing route: the certificate pins [S]_alpha = 1 for every
            // alpha >= 2/t, and the pairing bound needs alpha >= 1.
            let alpha = (2.0 / cert.t()).max(1.0);
            let measure = structural_measure(alpha, cert.rule());
            if let Ok(cand) = nuclear_lower_pairing(t, &tuple, alpha, &measure) {
                consider(cand);
            }
            // Orthogonal route with the full head: valid once the tuple is
            // 2-orthogonal, where [w^[r]]_1 = 1.
            if cert.t() + 1e-12 >= 2.0 {
                let head = structural_measure(1.0, cert.rule());
                if let Ok(cand) = nuclear_lower_orthogonal(dec, dec.len(), &head) {
                    consider(cand);
                }
            }
        }
        // A merely orthogonal tuple still gives the k = 1 bound, since a
        // single unit pure tensor has measure one.
        if coherence_mu(&tuple).map(|mu| mu <= 1e-9).unwrap_or(false) {
            let head = structural_measure(1.0, "single unit pure tensor");
            if let Ok(cand) = nuclear_lower_orthogonal(dec, 1, &head) {
                consider(cand);
            }
        }
    }

    Ok(NuclearInterval { lower, upper })
}

/// Both sides of the head-sum inequality relating two decompositions of the
/// same tensor, with the zero-padding conventions for indices past the end.
#[derive(Clone, Debug)]
pub struct MainInequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub delta: f64,
    pub holds: bool,
}

fn check_sorted_positive(name: &str, values: &[f64]) -> Result<()> {
    if values.iter().any(|&v| v.is_nan() || v <= 0.0 || !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "{name} must be positive and finite"
        )));
    }
    if values.windows(2).any(|w| w[0] < w[1] - 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "{name} must be nonincreasing"
        )));
    }
    Ok(())
}

/// Checks `[w^[k]]_1 (sigma_1 + ... + sigma_l) + delta sigma_(l+1) >=
/// (1 - mu_1(w)) (lambda_1 + ... + lambda_k)` where
/// `delta = k [v]_1 - l [w^[k]]_1`, for two decompositions
/// `sum lambda_i w_i = sum sigma_j v_j` with nonincreasing positive
/// weights. Requires `0 <= delta <= [w^[k]]_1`; outside that range the
/// hypothesis fails and the check is inapplicable rather than refuted.
#[allow(clippy::too_many_arguments)]
pub fn check_main_inequality(
    lam: &[f64],
    sig: &[f64],
    k: usize,
    l: usize,
    v_measure1: f64,
    wk_measure1: f64,
    mu1_w: f64,
) -> Result<MainInequalityReport> {
    check_sorted_positive("lambda", lam)?;
    check_sorted_positive("sigma", sig)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if !(v_measure1 > 0.0 && wk_measure1 > 0.0) {
        return Err(Error::InvalidArgument("measures must be positive".into()));
    }
    if !(0.0..).contains(&mu1_w) {
        return Err(Error::InvalidArgument("mu_1(w) must be nonnegative".into()));
    }
    let delta = k as f64 * v_measure1 - l as f64 * wk_measure1;
    if delta < -1e-9 || delta > wk_measure1 + 1e-9 {
        return Err(Error::Inapplicable(format!(
            "delta = {delta} outside [0, {wk_measure1}]"
        )));
    }
    let delta = delta.clamp(0.0, wk_measure1);
    let pad = |vals: &[f64], i: usize| vals.get(i).copied().unwrap_or(0.0);
    let head_sig: f64 = (0..l).map(|j| pad(sig, j)).sum();
    let head_lam: f64 = (0..k).map(|i| pad(lam, i)).sum();
    let lhs = wk_measure1 * head_sig + delta * pad(sig, l);
    let rhs = (1.0 - mu1_w) * head_lam;
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    Ok(MainInequalityReport {
        lhs,
        rhs,
        delta,
        holds: lhs >= rhs - 1e-9 * scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{
        dft_decomposition, glynn_decomposition, group_tensor, matmul_tensor, permanent_tensor,
        GroupTable,
    };
    use crate::tensor::TensorSpace;
    use approx::assert_relative_eq;
    use num_complex::Complex64 as C64;

    fn opts() -> OptimizerSettings {
        OptimizerSettings {
            restarts: 16,
            ..OptimizerSettings::default()
        }
    }

    #[test]
    fn spectral_bounds_of_matmul_pin_one() {
        let (m, _) = matmul_tensor(2, 2, 2).unwrap();
        let b = spectral_bounds(&m, &opts()).unwrap();
        assert_relative_eq!(b.lower.value, 1.0, epsilon = 1e-6);
        assert_relative_eq!(b.upper.value, 1.0, epsilon = 1e-12);
        assert!(b.upper.route.contains("override"));
        assert!(b.lower.value <= b.upper.value + 1e-9);
    }

    #[test]
    fn spectral_bounds_of_cyclic_group_tensor() {
        let t = group_tensor(&GroupTable::cyclic(3).unwrap()).unwrap();
        let b = spectral_bounds(&t, &opts()).unwrap();
        let s3 = 3.0f64.sqrt();
        assert_relative_eq!(b.lower.value, s3, epsilon = 1e-6);
        assert_relative_eq!(b.upper.value, s3, epsilon = 1e-9);
    }

    #[test]
    fn spectral_bounds_of_small_permanent() {
        let t = permanent_tensor(2).unwrap();
        let b = spectral_bounds(&t, &opts()).unwrap();
        assert_relative_eq!(b.lower.value, 1.0, epsilon = 1e-6);
        assert_relative_eq!(b.upper.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pairing_bound_on_matmul() {
        let (m, dec) = matmul_tensor(2, 2, 2).unwrap();
        let tuple = dec.tuple().unwrap();
        let measure = structural_measure(1.0, "matmul tuple");
        let side = nuclear_lower_pairing(&m, &tuple, 1.0, &measure).unwrap();
        assert_relative_eq!(side.value, 8.0, epsilon = 1e-12);
        assert!(side.certified);
    }

    #[test]
    fn orthogonal_bound_on_dft() {
        let dec = dft_decomposition(4).unwrap();
        let head = structural_measure(1.0, "dft tuple");
        let side = nuclear_lower_orthogonal(&dec, 4, &head).unwrap();
        assert_relative_eq!(side.value, 8.0, epsilon = 1e-12);
        // k = 1 with a singleton head measure gives lambda_1.
        let side1 = nuclear_lower_orthogonal(&dec, 1, &head).unwrap();
        assert_relative_eq!(side1.value, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn orthogonal_bound_rejects_coherent_tuples() {
        let dec = glynn_decomposition(3).unwrap();
        let head = structural_measure(1.0, "bogus");
        assert!(matches!(
            nuclear_lower_orthogonal(&dec, 1, &head),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn nuclear_interval_collapses_on_canonical_tensors() {
        let (m, dec) = matmul_tensor(2, 2, 2).unwrap();
        let iv = nuclear_interval(&m, Some(&dec), &opts()).unwrap();
        assert_relative_eq!(iv.lower.value, 8.0, epsilon = 1e-9);
        assert_relative_eq!(iv.upper.value, 8.0, epsilon = 1e-9);

        let per3 = permanent_tensor(3).unwrap();
        let glynn = glynn_decomposition(3).unwrap();
        let iv = nuclear_interval(&per3, Some(&glynn), &opts()).unwrap();
        let expected = 3.0f64.powf(1.5);
        assert_relative_eq!(iv.lower.value, expected, epsilon = 1e-9);
        assert_relative_eq!(iv.upper.value, expected, epsilon = 1e-9);

        let det3 = crate::canonical::determinant_tensor(3).unwrap();
        let iv = nuclear_interval(&det3, None, &opts()).unwrap();
        assert_relative_eq!(iv.lower.value, 6.0, epsilon = 1e-9);
        assert_relative_eq!(iv.upper.value, 6.0, epsilon = 1e-9);
    }

    #[test]
    fn nuclear_interval_rejects_mismatched_decomposition() {
        let (m, _) = matmul_tensor(2, 2, 2).unwrap();
        let wrong = glynn_decomposition(2).unwrap();
        assert!(nuclear_interval(&m, Some(&wrong), &opts()).is_err());
    }

    #[test]
    fn main_inequality_on_matmul_dsvd() {
        let lam = vec![1.0; 8];
        let sig = vec![1.0; 8];
        let report = check_main_inequality(&lam, &sig, 8, 8, 1.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(report.lhs, 8.0);
        assert_relative_eq!(report.rhs, 8.0);
        assert!(report.holds);
    }

    #[test]
    fn main_inequality_on_cyclic_head() {
        let s3 = 3.0f64.sqrt();
        let lam = vec![s3; 3];
        let sig = vec![s3; 3];
        let report = check_main_inequality(&lam, &sig, 1, 1, 1.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(report.lhs, s3);
        assert_relative_eq!(report.rhs, s3);
        assert!(report.holds);
    }

    #[test]
    fn main_inequality_rejects_out_of_range_delta() {
        let lam = vec![1.0];
        let sig = vec![1.0];
        // delta = 2*2 - 0 = 4 > 1.
        assert!(matches!(
            check_main_inequality(&lam, &sig, 2, 0, 2.0, 1.0, 0.0),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn gram_route_improves_with_sharper_spectral_upper() {
        // Monotonicity: a smaller certified [T] bound can only raise the
        // gram lower bound ||T||^2 / [T].
        let t = permanent_tensor(3).unwrap();
        let fro = frobenius_norm(&t);
        let loose = fro * fro / fro; // [T] <= ||T||
        let sharp = fro * fro / spectral_upper_certified(&t).unwrap().value;
        assert!(sharp >= loose - 1e-12);
    }

    #[test]
    fn d2_interval_brackets_trace_norm() {
        // Small complex matrix; oracle trace norm from the direct SVD.
        let space = TensorSpace::new(vec![3, 3]).unwrap();
        let t = DenseTensor::from_fn(space, |idx| {
            C64::new(
                ((idx[0] * 3 + idx[1]) as f64 * 0.7).sin(),
                ((idx[0] + 2 * idx[1]) as f64 * 0.4).cos() * 0.5,
            )
        });
        let f = crate::tensor::flatten(&t, &[0]).unwrap();
        let trace_norm: f64 = f.matrix.clone().singular_values().iter().sum();
        let iv = nuclear_interval(&t, None, &opts()).unwrap();
        assert!(iv.lower.value <= trace_norm + 1e-9);
        assert!(iv.upper.value >= trace_norm - 1e-9);
    }
}
