//! Choi representations of processes, combs and testers.
//!
//! A `T`-step process is carried by a single Hermitian matrix on the space
//! `W_T ⊗ V_T ⊗ ... ⊗ W_1 ⊗ V_1`. Combs are the PSD matrices whose marginals
//! satisfy the causal chain: tracing out the last output leaves an identity
//! on the last input tensored with a shorter comb. Testers are the dual
//! objects: PSD blocks whose sum lies in a normalization set determined by a
//! [`TesterSetDescriptor`].

use num_complex::Complex64;

use crate::cmatrix::ComplexMatrix;
use crate::eig::min_eig;
use crate::error::{Error, Result};
use crate::herm::{kron_identity_left, partial_trace, permute_factors, HermitianMatrix, SystemLayout};

/// Default residual tolerance for comb/tester validation: the solver emits
/// ~1e-9-feasible iterates, one order of headroom.
pub const VALIDATION_TOL: f64 = 1e-8;

/// Validation state claimed for a [`ProcessChoi`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoiKind {
    /// Any Hermitian matrix on the layout space.
    Hermitian,
    /// Completely positive: PSD matrix.
    CompletelyPositive,
    /// Deterministic process: PSD plus the marginal chain conditions.
    Comb,
}

/// Choi matrix of a (multi-step) process together with its layout.
#[derive(Debug, Clone)]
pub struct ProcessChoi {
    pub layout: SystemLayout,
    pub matrix: HermitianMatrix,
    pub kind: ChoiKind,
}

impl ProcessChoi {
    pub fn new(layout: SystemLayout, matrix: HermitianMatrix, kind: ChoiKind) -> Result<Self> {
        if matrix.dim() != layout.total_dim() {
            return Err(Error::DimMismatch(format!(
                "matrix dim {} != layout dim {}",
                matrix.dim(),
                layout.total_dim()
            )));
        }
        let c = Self { layout, matrix, kind };
        match kind {
            ChoiKind::Hermitian => {}
            ChoiKind::CompletelyPositive => {
                let lam = min_eig(&c.matrix)?;
                if lam < -1e-9 * c.matrix.frob_norm().max(1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not PSD (min eigenvalue {lam:.3e})"
                    )));
                }
            }
            ChoiKind::Comb => {
                let report = validate_comb(&c, VALIDATION_TOL)?;
                if !report.valid {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not a comb (residuals {:?}, psd {:.3e})",
                        report.level_residuals, report.psd_residual
                    )));
                }
            }
        }
        Ok(c)
    }

    pub fn hermitian(layout: SystemLayout, matrix: HermitianMatrix) -> Result<Self> {
        Self::new(layout, matrix, ChoiKind::Hermitian)
    }

    pub fn comb(layout: SystemLayout, matrix: HermitianMatrix) -> Result<Self> {
        Self::new(layout, matrix, ChoiKind::Comb)
    }

    /// Re-validate and upgrade the kind tag to `Comb`.
    pub fn into_comb(self) -> Result<Self> {
        Self::new(self.layout, self.matrix, ChoiKind::Comb)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Normalization set for the sum of tester elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TesterSetDescriptor {
    /// All adaptive testers: the sum is `I_{W_T} ⊗ τ` with `τ` running over
    /// the comb set of the input-side layout.
    General,
    /// Testers built from maximally entangled pure input states: the sum is
    /// the single scaled identity `I / prod_t N_{V_t}`.
    FixedEntangled,
    /// Two-step testers with both inputs prepared up front (`T = 2` only):
    /// the sum is the factor-reordered `I_{W_2 ⊗ W_1} ⊗ ρ`, `ρ` a density
    /// matrix on `V_2 ⊗ V_1`.
    Nonadaptive,
}

/// Measurement side of a discrimination strategy: PSD blocks, one per
/// outcome, whose sum lies in the descriptor's normalization set.
#[derive(Debug, Clone)]
pub struct Tester {
    pub layout: SystemLayout,
    pub elements: Vec<HermitianMatrix>,
    pub descriptor: TesterSetDescriptor,
}

impl Tester {
    pub fn new(
        layout: SystemLayout,
        elements: Vec<HermitianMatrix>,
        descriptor: TesterSetDescriptor,
    ) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidArgument("tester needs at least one element".into()));
        }
        let d = layout.total_dim();
        if elements.iter().any(|e| e.dim() != d) {
            return Err(Error::DimMismatch("tester element dims".into()));
        }
        Ok(Self {
            layout,
            elements,
            descriptor,
        })
    }

    pub fn outcome_count(&self) -> usize {
        self.elements.len()
    }

    pub fn element_sum(&self) -> HermitianMatrix {
        let mut acc = HermitianMatrix::zeros(self.layout.total_dim());
        for e in &self.elements {
            acc = acc.add(e).unwrap();
        }
        acc
    }
}

/// Marginal chain of a (would-be) comb: one matrix per level `t = T-1 .. 0`,
/// level 0 being a 1x1 scalar.
#[derive(Debug, Clone)]
pub struct MarginalChain {
    /// `levels[k]` is the level `T-1-k` marginal; the last entry is 1x1.
    pub levels: Vec<HermitianMatrix>,
}

impl MarginalChain {
    /// The level-`t` marginal (`t = 0` is the scalar).
    pub fn level(&self, t: usize) -> &HermitianMatrix {
        &self.levels[self.levels.len() - 1 - t]
    }

    pub fn scalar(&self) -> f64 {
        self.level(0).get(0, 0).re
    }
}

/// Unnormalized maximally entangled Choi matrix `|I_n>><<I_n|` (trace `n`);
/// dividing by `n` gives the generalized Bell state.
pub fn max_entangled_choi(n: usize) -> HermitianMatrix {
    let mut v = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::ONE;
    }
    HermitianMatrix::outer(&v)
}

/// Choi matrix of the map with the given Kraus operators (`n_w x n_v` each),
/// on the single-step layout `W ⊗ V`.
pub fn choi_from_kraus(kraus: &[ComplexMatrix]) -> Result<ProcessChoi> {
    let first = kraus
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty Kraus list".into()))?;
    let (n_w, n_v) = (first.rows(), first.cols());
    if kraus.iter().any(|k| k.rows() != n_w || k.cols() != n_v) {
        return Err(Error::DimMismatch("inconsistent Kraus shapes".into()));
    }
    let dim = n_w * n_v;
    let mut m = HermitianMatrix::zeros(dim);
    for i in 0..dim {
        let (w, v) = (i / n_v, i % n_v);
        for j in i..dim {
            let (w2, v2) = (j / n_v, j % n_v);
            let mut acc = Complex64::ZERO;
            for k in kraus {
                acc += k.get(w, v) * k.get(w2, v2).conj();
            }
            m.set_sym(i, j, acc);
        }
    }
    ProcessChoi::new(
        SystemLayout::single(n_v, n_w),
        m,
        ChoiKind::CompletelyPositive,
    )
}

/// Choi matrix of the unitary channel `rho -> U rho U†`.
pub fn choi_from_unitary(u: &ComplexMatrix) -> Result<ProcessChoi> {
    choi_from_kraus(std::slice::from_ref(u))?.into_comb()
}

/// Memoryless multi-step process from single-step parts given in time order
/// (`steps[0]` acts first). The flattened matrix is the Kronecker product
/// with the last step slowest.
pub fn link_tensor(steps: &[ProcessChoi]) -> Result<ProcessChoi> {
    if steps.is_empty() {
        return Err(Error::InvalidArgument("empty step list".into()));
    }
    if steps.iter().any(|s| s.layout.t_count() != 1) {
        return Err(Error::InvalidArgument(
            "link_tensor takes single-step processes".into(),
        ));
    }
    let total: usize = steps.iter().map(|s| s.dim()).product();
    if total > 1 << 20 {
        return Err(Error::InvalidArgument(format!("dimension overflow: {total}")));
    }
    let mut matrix = steps.last().unwrap().matrix.clone();
    for s in steps.iter().rev().skip(1) {
        matrix = matrix.kron(&s.matrix);
    }
    let layout = SystemLayout::new(
        steps
            .iter()
            .map(|s| (s.layout.n_v(1), s.layout.n_w(1)))
            .collect(),
    )?;
    let kind = if steps.iter().all(|s| s.kind == ChoiKind::Comb) {
        ChoiKind::Comb
    } else if steps.iter().all(|s| s.kind != ChoiKind::Hermitian) {
        ChoiKind::CompletelyPositive
    } else {
        ChoiKind::Hermitian
    };
    ProcessChoi::new(layout, matrix, kind)
}

/// Pairwise link product: compose maps sequentially through a shared system.
///
/// `later` is the Choi of a map `C -> X` on `X ⊗ C`, `earlier` the Choi of a
/// map `Y -> C` on `C ⊗ Y`; the result is the Choi of the composition
/// `Y -> X` on `X ⊗ Y`. With a trivial connecting system this degenerates to
/// the plain Kronecker product. The contraction formula is the standard
/// partial-transpose one from the network-composition literature; here it is
/// exercised only as a cross-check against `link_tensor`.
pub fn link_product(later: &ProcessChoi, earlier: &ProcessChoi) -> Result<ProcessChoi> {
    if later.layout.t_count() != 1 || earlier.layout.t_count() != 1 {
        return Err(Error::InvalidArgument("link_product takes single-step processes".into()));
    }
    let (n_mid, n_x) = (later.layout.n_v(1), later.layout.n_w(1));
    let (n_y, n_mid2) = (earlier.layout.n_v(1), earlier.layout.n_w(1));
    if n_mid != n_mid2 {
        return Err(Error::DimMismatch(format!(
            "connecting system: {n_mid} vs {n_mid2}"
        )));
    }
    let a = &later.matrix;
    let b = &earlier.matrix;
    let dim = n_x * n_y;
    let mut out = HermitianMatrix::zeros(dim);
    for i in 0..dim {
        let (x, y) = (i / n_y, i % n_y);
        for j in i..dim {
            let (x2, y2) = (j / n_y, j % n_y);
            let mut acc = Complex64::ZERO;
            for m in 0..n_mid {
                for m2 in 0..n_mid {
                    acc += a.get(x * n_mid + m, x2 * n_mid + m2)
                        * b.get(m * n_y + y, m2 * n_y + y2);
                }
            }
            out.set_sym(i, j, acc);
        }
    }
    let kind = match (later.kind, earlier.kind) {
        (ChoiKind::Comb, ChoiKind::Comb) => ChoiKind::Comb,
        (ChoiKind::Hermitian, _) | (_, ChoiKind::Hermitian) => ChoiKind::Hermitian,
        _ => ChoiKind::CompletelyPositive,
    };
    ProcessChoi::new(SystemLayout::single(n_y, n_x), out, kind)
}

/// Result of [`validate_comb`].
#[derive(Debug, Clone)]
pub struct CombReport {
    pub valid: bool,
    pub chain: MarginalChain,
    /// `level_residuals[k]` is the marginal residual at level `T-k`
    /// (Frobenius norm), ending with the level-1 residual against the bare
    /// identity.
    pub level_residuals: Vec<f64>,
    /// Magnitude of the most negative eigenvalue, 0 when PSD.
    pub psd_residual: f64,
}

fn forced_chain(x: &HermitianMatrix, layout: &SystemLayout) -> Result<Vec<HermitianMatrix>> {
    // Level-t marginals for t = T-1 .. 0, each the scaled double trace of the
    // level above.
    let t_count = layout.t_count();
    let mut levels = Vec::with_capacity(t_count);
    let mut current = x.clone();
    for t in (1..=t_count).rev() {
        let dims = layout.level_dims(t);
        let next = partial_trace(&current, &dims, &[0, 1])?.scale(1.0 / layout.n_v(t) as f64);
        levels.push(next.clone());
        current = next;
    }
    Ok(levels)
}

fn chain_residuals(
    x: &HermitianMatrix,
    layout: &SystemLayout,
    levels: &[HermitianMatrix],
    scalar_target: Option<f64>,
) -> Result<Vec<f64>> {
    // Residual at level t: || Tr_{W_t} c_t - I_{V_t} ⊗ c_{t-1} ||_F.
    let t_count = layout.t_count();
    let mut residuals = Vec::with_capacity(t_count);
    for t in (1..=t_count).rev() {
        let level_t = if t == t_count { x } else { &levels[t_count - 1 - t] };
        let dims = layout.level_dims(t);
        let traced = partial_trace(level_t, &dims, &[0])?;
        let below = if t == 1 {
            HermitianMatrix::diag(&[scalar_target
                .unwrap_or_else(|| levels.last().unwrap().get(0, 0).re)])
        } else {
            levels[t_count - t].clone()
        };
        let expect = kron_identity_left(layout.n_v(t), &below);
        residuals.push(traced.sub(&expect)?.frob_norm());
    }
    Ok(residuals)
}

/// Check the comb marginal chain and positive semidefiniteness; reports
/// residuals rather than throwing on invalid combs.
pub fn validate_comb(c: &ProcessChoi, tol: f64) -> Result<CombReport> {
    let levels = forced_chain(&c.matrix, &c.layout)?;
    // Combs must normalize: the bottom of the chain is exactly 1.
    let level_residuals = chain_residuals(&c.matrix, &c.layout, &levels, Some(1.0))?;
    let lam = min_eig(&c.matrix)?;
    let psd_residual = (-lam).max(0.0);
    let valid = level_residuals.iter().all(|r| *r <= tol) && psd_residual <= tol;
    Ok(CombReport {
        valid,
        chain: MarginalChain { levels },
        level_residuals,
        psd_residual,
    })
}

/// Membership of an arbitrary Hermitian matrix in the linear span of combs:
/// the forced chain must satisfy every marginal equality (PSD not required,
/// and the bottom scalar is free).
pub fn lin_chn_membership(
    x: &HermitianMatrix,
    layout: &SystemLayout,
    tol: f64,
) -> Result<(bool, MarginalChain)> {
    if x.dim() != layout.total_dim() {
        return Err(Error::DimMismatch("lin_chn_membership".into()));
    }
    let levels = forced_chain(x, layout)?;
    let residuals = chain_residuals(x, layout, &levels, None)?;
    let ok = residuals.iter().all(|r| *r <= tol);
    Ok((ok, MarginalChain { levels }))
}

/// Result of [`validate_tester`].
#[derive(Debug, Clone)]
pub struct TesterReport {
    pub valid: bool,
    /// Most negative eigenvalue magnitude per element.
    pub psd_residuals: Vec<f64>,
    /// Distance of the element sum from the descriptor's normalization set.
    pub s_residual: f64,
}

/// The input-side chain of a general tester: the element sum must be
/// `I_{W_T} ⊗ τ_T` with `τ_T` obeying the flipped marginal chain
/// (inputs play the output role) down to `Tr τ_1 = 1`.
fn general_s_residual(sum: &HermitianMatrix, layout: &SystemLayout) -> Result<f64> {
    let t_count = layout.t_count();
    let mut worst: f64 = 0.0;

    // Dimensions of the tau_t space: V_t, W_{t-1}, V_{t-1}, ..., W_1, V_1.
    let tau_dims = |t: usize| -> Vec<usize> {
        let mut dims = vec![layout.n_v(t)];
        for s in (1..t).rev() {
            dims.push(layout.n_w(s));
            dims.push(layout.n_v(s));
        }
        dims
    };

    // Peel off I_{W_T}.
    let full_dims = {
        let mut d = vec![layout.n_w(t_count)];
        d.extend(tau_dims(t_count));
        d
    };
    let mut tau = partial_trace(sum, &full_dims, &[0])?.scale(1.0 / layout.n_w(t_count) as f64);
    worst = worst.max(
        sum.sub(&kron_identity_left(layout.n_w(t_count), &tau))?
            .frob_norm(),
    );

    for t in (2..=t_count).rev() {
        let dims = tau_dims(t);
        let below = partial_trace(&tau, &dims, &[0, 1])?.scale(1.0 / layout.n_w(t - 1) as f64);
        let traced = partial_trace(&tau, &dims, &[0])?;
        let expect = kron_identity_left(layout.n_w(t - 1), &below);
        worst = worst.max(traced.sub(&expect)?.frob_norm());
        tau = below;
    }
    worst = worst.max((tau.trace() - 1.0).abs());
    Ok(worst)
}

fn nonadaptive_s_residual(sum: &HermitianMatrix, layout: &SystemLayout) -> Result<f64> {
    if layout.t_count() != 2 {
        return Err(Error::Unsupported(
            "nonadaptive descriptor is defined for T = 2 only".into(),
        ));
    }
    let dims = layout.factor_dims(); // [W2, V2, W1, V1]
    let (w2, v2, w1, v1) = (dims[0], dims[1], dims[2], dims[3]);
    // Reorder to W2, W1, V2, V1, peel off I_{W2 ⊗ W1}.
    let reordered = permute_factors(sum, &dims, &[0, 2, 1, 3])?;
    let rho = partial_trace(&reordered, &[w2, w1, v2, v1], &[0, 1])?.scale(1.0 / (w2 * w1) as f64);
    let expect = kron_identity_left(w2 * w1, &rho);
    let mut worst = reordered.sub(&expect)?.frob_norm();
    worst = worst.max((rho.trace() - 1.0).abs());
    worst = worst.max((-min_eig(&rho)?).max(0.0));
    Ok(worst)
}

/// Distance of an element sum from the descriptor's normalization set.
pub fn s_membership_residual(
    sum: &HermitianMatrix,
    layout: &SystemLayout,
    descriptor: TesterSetDescriptor,
) -> Result<f64> {
    match descriptor {
        TesterSetDescriptor::General => general_s_residual(sum, layout),
        TesterSetDescriptor::FixedEntangled => {
            let target = HermitianMatrix::identity(layout.total_dim())
                .scale(1.0 / layout.input_dim_product() as f64);
            Ok(sum.sub(&target)?.frob_norm())
        }
        TesterSetDescriptor::Nonadaptive => nonadaptive_s_residual(sum, layout),
    }
}

/// Check PSD of every element and membership of the element sum in the
/// descriptor's normalization set. Report-based; never throws on an invalid
/// tester.
pub fn validate_tester(t: &Tester, tol: f64) -> Result<TesterReport> {
    let mut psd_residuals = Vec::with_capacity(t.elements.len());
    for e in &t.elements {
        psd_residuals.push((-min_eig(e)?).max(0.0));
    }
    let s_residual = s_membership_residual(&t.element_sum(), &t.layout, t.descriptor)?;
    let valid = psd_residuals.iter().all(|r| *r <= tol) && s_residual <= tol;
    Ok(TesterReport {
        valid,
        psd_residuals,
        s_residual,
    })
}

/// Outcome probabilities `p_m = <Φ_m, c>` of running the tester on a comb.
pub fn outcome_probs(t: &Tester, c: &ProcessChoi) -> Result<Vec<f64>> {
    if t.layout != c.layout {
        return Err(Error::DimMismatch("tester and process layouts differ".into()));
    }
    t.elements.iter().map(|e| e.inner(&c.matrix)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn identity_channel(n: usize) -> ProcessChoi {
        choi_from_unitary(&ComplexMatrix::identity(n)).unwrap()
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![
            vec![c64(0.0, 0.0), c64(1.0, 0.0)],
            vec![c64(1.0, 0.0), c64(0.0, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn max_entangled_entries() {
        let m = max_entangled_choi(2);
        assert_eq!(m.dim(), 4);
        for (i, j, v) in [
            (0, 0, 1.0),
            (0, 3, 1.0),
            (3, 0, 1.0),
            (3, 3, 1.0),
            (1, 1, 0.0),
            (0, 1, 0.0),
        ] {
            assert!((m.get(i, j) - c64(v, 0.0)).norm() < 1e-15);
        }
        assert!((m.trace() - 2.0).abs() < 1e-15);

        assert_eq!(max_entangled_choi(1), HermitianMatrix::diag(&[1.0]));
        let m3 = max_entangled_choi(3);
        assert!((m3.trace() - 3.0).abs() < 1e-15);
        // Rank one: ||M||_F^2 == (Tr M)^2 for a PSD rank-1 matrix.
        assert!((m3.frob_norm().powi(2) - 9.0).abs() < 1e-12);
    }

    #[test]
    fn kraus_identity_and_damping() {
        let id = identity_channel(2);
        assert!(id.matrix.sub(&max_entangled_choi(2)).unwrap().frob_norm() < 1e-14);

        // Full amplitude damping: everything collapses onto |0>.
        let k0 = ComplexMatrix::from_rows(vec![
            vec![c64(1.0, 0.0), c64(0.0, 0.0)],
            vec![c64(0.0, 0.0), c64(0.0, 0.0)],
        ])
        .unwrap();
        let k1 = ComplexMatrix::from_rows(vec![
            vec![c64(0.0, 0.0), c64(1.0, 0.0)],
            vec![c64(0.0, 0.0), c64(0.0, 0.0)],
        ])
        .unwrap();
        let ad = choi_from_kraus(&[k0, k1]).unwrap().into_comb().unwrap();
        // |0><0|_W (x) I_V
        let expect = HermitianMatrix::diag(&[1.0, 1.0, 0.0, 0.0]);
        assert!(ad.matrix.sub(&expect).unwrap().frob_norm() < 1e-14);

        // Unitary channel: corner Choi conjugated by X (x) I.
        let xchoi = choi_from_unitary(&pauli_x()).unwrap();
        let xi = pauli_x().kron(&ComplexMatrix::identity(2));
        let expect = max_entangled_choi(2).conjugate_by(&xi, false).unwrap();
        assert!(xchoi.matrix.sub(&expect).unwrap().frob_norm() < 1e-14);
    }

    #[test]
    fn comb_validation() {
        let id = identity_channel(2);
        let report = validate_comb(&id, VALIDATION_TOL).unwrap();
        assert!(report.valid);
        assert!(report.level_residuals.iter().all(|r| *r < 1e-12));

        // Tr_W = diag(1.5, 0.5) != I: not a comb.
        let bad = ProcessChoi::hermitian(
            SystemLayout::single(2, 2),
            HermitianMatrix::diag(&[1.5, 0.5, 0.0, 0.0]),
        )
        .unwrap();
        let report = validate_comb(&bad, VALIDATION_TOL).unwrap();
        assert!(!report.valid);
    }

    #[test]
    fn link_tensor_of_channels_is_comb() {
        let id = identity_channel(2);
        let two = link_tensor(&[id.clone(), id.clone()]).unwrap();
        assert_eq!(two.dim(), 16);
        assert_eq!(two.kind, ChoiKind::Comb);
        assert!(validate_comb(&two, VALIDATION_TOL).unwrap().valid);

        let single = link_tensor(std::slice::from_ref(&id)).unwrap();
        assert!(single.matrix.sub(&id.matrix).unwrap().frob_norm() < 1e-14);
    }

    #[test]
    fn link_product_composes_channels() {
        // X then X = identity.
        let x = choi_from_unitary(&pauli_x()).unwrap();
        let xx = link_product(&x, &x).unwrap();
        assert!(xx.matrix.sub(&identity_channel(2).matrix).unwrap().frob_norm() < 1e-13);

        // Linking over a trivial connecting system rebuilds the memoryless
        // comb produced by link_tensor.
        let id = identity_channel(2);
        let direct = link_tensor(&[id.clone(), x.clone()]).unwrap();
        let later = ProcessChoi::hermitian(SystemLayout::single(1, 4), x.matrix.clone()).unwrap();
        let earlier =
            ProcessChoi::hermitian(SystemLayout::single(4, 1), id.matrix.clone()).unwrap();
        let rebuilt = link_product(&later, &earlier).unwrap();
        assert!(rebuilt.matrix.sub(&direct.matrix).unwrap().frob_norm() < 1e-13);
    }

    #[test]
    fn tester_validation_per_descriptor() {
        // T = 1, trivial input: a POVM.
        let layout = SystemLayout::single(1, 2);
        let povm = Tester::new(
            layout.clone(),
            vec![HermitianMatrix::diag(&[1.0, 0.0]), HermitianMatrix::diag(&[0.0, 1.0])],
            TesterSetDescriptor::General,
        )
        .unwrap();
        assert!(validate_tester(&povm, VALIDATION_TOL).unwrap().valid);

        // Elements summing to I/2 on W (x) V: a Bell-input tester, valid under
        // both the fixed-entangled and the general descriptor.
        let layout = SystemLayout::single(2, 2);
        let half = HermitianMatrix::identity(4).scale(0.125);
        let elems = vec![half.clone(), half.clone(), half.clone(), half];
        let bell = Tester::new(layout.clone(), elems.clone(), TesterSetDescriptor::FixedEntangled)
            .unwrap();
        assert!(validate_tester(&bell, VALIDATION_TOL).unwrap().valid);
        let general = Tester::new(layout.clone(), elems, TesterSetDescriptor::General).unwrap();
        assert!(validate_tester(&general, VALIDATION_TOL).unwrap().valid);

        // Sum I (trace-2 input marginal) is not a valid general tester when V
        // is nontrivial.
        let quarter = HermitianMatrix::identity(4).scale(0.25);
        let bad = Tester::new(
            layout,
            vec![quarter.clone(), quarter.clone(), quarter.clone(), quarter],
            TesterSetDescriptor::General,
        )
        .unwrap();
        assert!(!validate_tester(&bad, VALIDATION_TOL).unwrap().valid);
    }

    #[test]
    fn probabilities_identity_vs_x() {
        // Bell-input tester measuring in the Bell basis distinguishes the
        // identity and X channels with certainty.
        let layout = SystemLayout::single(2, 2);
        let id = identity_channel(2);
        let phi0 = max_entangled_choi(2).scale(0.25);
        let xi = pauli_x().kron(&ComplexMatrix::identity(2));
        let phi1 = phi0.conjugate_by(&xi, false).unwrap();
        let rest = HermitianMatrix::identity(4)
            .scale(0.5)
            .sub(&phi0)
            .unwrap()
            .sub(&phi1)
            .unwrap();
        let t = Tester::new(
            layout,
            vec![phi0, phi1, rest],
            TesterSetDescriptor::FixedEntangled,
        )
        .unwrap();
        assert!(validate_tester(&t, VALIDATION_TOL).unwrap().valid);
        let p = outcome_probs(&t, &id).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12);
        assert!(p[1].abs() < 1e-12);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lin_chn_examples() {
        let layout = SystemLayout::single(2, 2);
        // I/n_w is proportional to a comb.
        let x = HermitianMatrix::identity(4).scale(0.5);
        let (ok, chain) = lin_chn_membership(&x, &layout, VALIDATION_TOL).unwrap();
        assert!(ok);
        assert!((chain.scalar() - 1.0).abs() < 1e-12);

        let bad = HermitianMatrix::diag(&[1.0, 0.0, 0.0, 0.0]);
        let (ok, _) = lin_chn_membership(&bad, &layout, VALIDATION_TOL).unwrap();
        assert!(!ok);

        // Every valid comb is in the span.
        let id = identity_channel(2);
        let (ok, _) = lin_chn_membership(&id.matrix, &id.layout, VALIDATION_TOL).unwrap();
        assert!(ok);
    }
}
