//! Canonical problem construction.
//!
//! Every supported strategy is lowered to the same canonical data: maximize
//! `sum_m <Φ_m, c_m>` over testers `Φ` subject to
//! `sum_m <Φ_m, a_{j,m}> <= b_j`. Builders for minimum-error, inconclusive,
//! unambiguous and Neyman-Pearson discrimination live here, along with the
//! change-point and channel-comparison instance constructors.

use crate::choi::{link_tensor, ChoiKind, ProcessChoi, Tester, TesterSetDescriptor};
use crate::error::{Error, Result};
use crate::herm::{HermitianMatrix, SystemLayout};

/// Prior probabilities over hypotheses.
#[derive(Debug, Clone)]
pub struct PriorWeights {
    p: Vec<f64>,
}

impl PriorWeights {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() || p.iter().any(|&x| x < 0.0) {
            return Err(Error::InvalidArgument("priors must be nonnegative".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "priors sum to {total}, expected 1"
            )));
        }
        Ok(Self { p })
    }

    pub fn uniform(r: usize) -> Self {
        Self {
            p: vec![1.0 / r as f64; r],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// Canonical form of a discrimination problem: payoff matrices `c_m`,
/// inequality data `(a_{j,m}, b_j)` and the tester normalization set.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub layout: SystemLayout,
    /// Outcome count `M`.
    pub m_count: usize,
    /// Constraint count `J`.
    pub j_count: usize,
    /// `c[m]`: payoff matrix for outcome `m`.
    pub c: Vec<HermitianMatrix>,
    /// `a[j][m]`: constraint matrices.
    pub a: Vec<Vec<HermitianMatrix>>,
    /// `b[j]`: constraint bounds.
    pub b: Vec<f64>,
    pub descriptor: TesterSetDescriptor,
}

impl ProblemSpec {
    pub fn new(
        layout: SystemLayout,
        c: Vec<HermitianMatrix>,
        a: Vec<Vec<HermitianMatrix>>,
        b: Vec<f64>,
        descriptor: TesterSetDescriptor,
    ) -> Result<Self> {
        let m_count = c.len();
        let j_count = a.len();
        if m_count == 0 {
            return Err(Error::InvalidArgument("need at least one outcome".into()));
        }
        if b.len() != j_count {
            return Err(Error::DimMismatch("constraint bound count".into()));
        }
        let d = layout.total_dim();
        if c.iter().any(|m| m.dim() != d)
            || a.iter().any(|row| row.len() != m_count || row.iter().any(|m| m.dim() != d))
        {
            return Err(Error::DimMismatch("payoff/constraint matrix dims".into()));
        }
        Ok(Self {
            layout,
            m_count,
            j_count,
            c,
            a,
            b,
            descriptor,
        })
    }

    /// Objective value `P(Φ) = sum_m <Φ_m, c_m>`.
    pub fn objective(&self, tester: &Tester) -> Result<f64> {
        if tester.outcome_count() != self.m_count {
            return Err(Error::DimMismatch("tester outcome count".into()));
        }
        let mut acc = 0.0;
        for (e, cm) in tester.elements.iter().zip(self.c.iter()) {
            acc += e.inner(cm)?;
        }
        Ok(acc)
    }
}

fn check_combs(combs: &[ProcessChoi]) -> Result<&SystemLayout> {
    let first = combs
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty comb list".into()))?;
    if combs.iter().any(|c| c.layout != first.layout) {
        return Err(Error::DimMismatch("combs on different layouts".into()));
    }
    Ok(&first.layout)
}

/// Minimum-error discrimination: `M = R`, no constraints, `c_r = p_r E_r`.
pub fn build_min_error(combs: &[ProcessChoi], priors: &PriorWeights) -> Result<ProblemSpec> {
    let layout = check_combs(combs)?.clone();
    if priors.len() != combs.len() {
        return Err(Error::DimMismatch("prior count".into()));
    }
    let c = combs
        .iter()
        .zip(priors.weights())
        .map(|(e, p)| e.matrix.scale(*p))
        .collect();
    ProblemSpec::new(layout, c, vec![], vec![], TesterSetDescriptor::General)
}

/// Maximum success probability with the average inconclusive probability
/// pinned to `p_inc`. Outcome `R` is the inconclusive answer; the equality is
/// encoded as the single inequality `-P_I <= -p_inc` (any optimum saturates
/// it).
pub fn build_inconclusive(
    combs: &[ProcessChoi],
    priors: &PriorWeights,
    p_inc: f64,
) -> Result<ProblemSpec> {
    let layout = check_combs(combs)?.clone();
    if priors.len() != combs.len() {
        return Err(Error::DimMismatch("prior count".into()));
    }
    if !(0.0..=1.0).contains(&p_inc) {
        return Err(Error::InvalidArgument(format!("p_inc = {p_inc} out of [0, 1]")));
    }
    let r = combs.len();
    let d = layout.total_dim();
    let mut c: Vec<HermitianMatrix> = combs
        .iter()
        .zip(priors.weights())
        .map(|(e, p)| e.matrix.scale(*p))
        .collect();
    c.push(HermitianMatrix::zeros(d));

    let avg = average_comb(combs, priors)?;
    let mut a_row = vec![HermitianMatrix::zeros(d); r];
    a_row.push(avg.scale(-1.0));
    ProblemSpec::new(
        layout,
        c,
        vec![a_row],
        vec![-p_inc],
        TesterSetDescriptor::General,
    )
}

/// Error-free discrimination maximizing the success probability, via the
/// equality `P_S + P_I = 1` encoded as `-(P_S + P_I) <= -1`.
pub fn build_unambiguous(combs: &[ProcessChoi], priors: &PriorWeights) -> Result<ProblemSpec> {
    let layout = check_combs(combs)?.clone();
    if priors.len() != combs.len() {
        return Err(Error::DimMismatch("prior count".into()));
    }
    let d = layout.total_dim();
    let mut c: Vec<HermitianMatrix> = combs
        .iter()
        .zip(priors.weights())
        .map(|(e, p)| e.matrix.scale(*p))
        .collect();
    c.push(HermitianMatrix::zeros(d));

    let avg = average_comb(combs, priors)?;
    let mut a_row: Vec<HermitianMatrix> = combs
        .iter()
        .zip(priors.weights())
        .map(|(e, p)| e.matrix.scale(-p))
        .collect();
    a_row.push(avg.scale(-1.0));
    ProblemSpec::new(
        layout,
        c,
        vec![a_row],
        vec![-1.0],
        TesterSetDescriptor::General,
    )
}

/// Neyman-Pearson strategy for two hypotheses: maximize the detection
/// probability subject to a false-alarm bound `p_np`.
pub fn build_neyman_pearson(
    c0: &ProcessChoi,
    c1: &ProcessChoi,
    p_np: f64,
) -> Result<ProblemSpec> {
    if c0.layout != c1.layout {
        return Err(Error::DimMismatch("hypothesis layouts".into()));
    }
    if !(0.0..=1.0).contains(&p_np) {
        return Err(Error::InvalidArgument(format!("p_np = {p_np} out of [0, 1]")));
    }
    let d = c0.dim();
    let c = vec![HermitianMatrix::zeros(d), c1.matrix.clone()];
    let a_row = vec![HermitianMatrix::zeros(d), c0.matrix.clone()];
    ProblemSpec::new(
        c0.layout.clone(),
        c,
        vec![a_row],
        vec![p_np],
        TesterSetDescriptor::General,
    )
}

fn average_comb(combs: &[ProcessChoi], priors: &PriorWeights) -> Result<HermitianMatrix> {
    let terms: Vec<(f64, &HermitianMatrix)> = combs
        .iter()
        .zip(priors.weights())
        .map(|(e, p)| (*p, &e.matrix))
        .collect();
    HermitianMatrix::lincomb(&terms)
}

/// Change-point instance: channel `l0` runs until an unknown step `r`, after
/// which `l1` runs. Returns the `T + 1` memoryless hypothesis combs (in
/// change-point order `r = 0..T`) and the uniform-prior minimum-error spec.
pub fn build_change_point(
    l0: &ProcessChoi,
    l1: &ProcessChoi,
    t_steps: usize,
) -> Result<(Vec<ProcessChoi>, ProblemSpec)> {
    if l0.layout != l1.layout || l0.layout.t_count() != 1 {
        return Err(Error::DimMismatch(
            "change point needs two single-step channels on equal dims".into(),
        ));
    }
    if t_steps == 0 {
        return Err(Error::InvalidArgument("need at least one step".into()));
    }
    let r_count = t_steps + 1;
    let mut combs = Vec::with_capacity(r_count);
    for r in 0..r_count {
        let steps: Vec<ProcessChoi> = (1..=t_steps)
            .map(|t| if t > r { l1.clone() } else { l0.clone() })
            .collect();
        combs.push(link_tensor(&steps)?);
    }
    let spec = build_min_error(&combs, &PriorWeights::uniform(r_count))?;
    Ok((combs, spec))
}

/// Discrimination of the order in which `T` given channels are applied, one
/// hypothesis per permutation. Factorial growth; capped at `T <= 3`.
pub fn build_permutation_order(channels: &[ProcessChoi]) -> Result<(Vec<ProcessChoi>, ProblemSpec)> {
    let t = channels.len();
    if t == 0 || t > 3 {
        return Err(Error::Unsupported(
            "permutation-order discrimination is provided for T <= 3".into(),
        ));
    }
    if channels.iter().any(|c| c.layout != channels[0].layout || c.layout.t_count() != 1) {
        return Err(Error::DimMismatch("channels on different layouts".into()));
    }
    let mut perms: Vec<Vec<usize>> = vec![];
    let mut idx: Vec<usize> = (0..t).collect();
    permutations(&mut idx, 0, &mut perms);
    perms.sort();
    let mut combs = Vec::with_capacity(perms.len());
    for perm in &perms {
        let steps: Vec<ProcessChoi> = perm.iter().map(|&i| channels[i].clone()).collect();
        combs.push(link_tensor(&steps)?);
    }
    let spec = build_min_error(&combs, &PriorWeights::uniform(combs.len()))?;
    Ok((combs, spec))
}

fn permutations(idx: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == idx.len() {
        out.push(idx.clone());
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permutations(idx, k + 1, out);
        idx.swap(k, i);
    }
}

/// Outcome of [`build_comparison`].
#[derive(Debug)]
pub struct ComparisonInstance {
    /// Hypothesis "all K uses are the same channel".
    pub identical: ProcessChoi,
    /// Hypothesis "not all uses are the same".
    pub different: ProcessChoi,
    /// Prior of the identical hypothesis, `p0 = sum_l u_l^K`.
    pub p0: f64,
    pub spec: ProblemSpec,
}

/// Channel comparison: `K` uses, each drawn from `channels` with weights `u`;
/// decide whether all uses are identical. Reduces to binary discrimination of
/// the two mixture combs. `L = 1` is degenerate (`p1 = 0`) and rejected as a
/// trivially-identical instance.
pub fn build_comparison(
    channels: &[ProcessChoi],
    u: &[f64],
    k_uses: usize,
) -> Result<ComparisonInstance> {
    let layout = check_combs(channels)?.clone();
    if layout.t_count() != 1 {
        return Err(Error::InvalidArgument("comparison takes single-step channels".into()));
    }
    if u.len() != channels.len() || u.iter().any(|&x| x < 0.0) {
        return Err(Error::InvalidArgument("weights must be nonnegative, one per channel".into()));
    }
    if (u.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument("weights must sum to 1".into()));
    }
    if k_uses < 2 {
        return Err(Error::InvalidArgument("comparison needs K >= 2".into()));
    }
    let p0: f64 = u.iter().map(|x| x.powi(k_uses as i32)).sum();
    let p1 = 1.0 - p0;
    if p1 <= 1e-12 {
        return Err(Error::InvalidArgument(
            "trivially-identical instance: a single channel can only agree with itself".into(),
        ));
    }

    // sum_l u_l^K Λ_l^(x)K and (sum_l u_l Λ_l)^(x)K as K-step memoryless combs.
    let mut same_sum = HermitianMatrix::zeros(layout.total_dim().pow(k_uses as u32));
    for (ch, w) in channels.iter().zip(u) {
        let power = link_tensor(&vec![ch.clone(); k_uses])?;
        same_sum = same_sum.add(&power.matrix.scale(w.powi(k_uses as i32)))?;
    }
    let mix_matrix = average_comb(channels, &PriorWeights::new(u.to_vec())?)?;
    let mix = ProcessChoi::new(layout.clone(), mix_matrix, ChoiKind::Comb)?;
    let mix_power = link_tensor(&vec![mix; k_uses])?;

    let big_layout = mix_power.layout.clone();
    let identical = ProcessChoi::comb(big_layout.clone(), same_sum.scale(1.0 / p0))?;
    let different = ProcessChoi::comb(
        big_layout,
        mix_power.matrix.sub(&same_sum)?.scale(1.0 / p1),
    )?;
    let spec = build_min_error(
        &[identical.clone(), different.clone()],
        &PriorWeights::new(vec![p0, p1])?,
    )?;
    Ok(ComparisonInstance {
        identical,
        different,
        p0,
        spec,
    })
}

/// Constraint slacks `η_j(Φ) = sum_m <Φ_m, a_{j,m}> - b_j`; the tester is
/// feasible when every entry is `<= 0`.
pub fn eta(tester: &Tester, spec: &ProblemSpec) -> Result<Vec<f64>> {
    if tester.layout != spec.layout || tester.outcome_count() != spec.m_count {
        return Err(Error::DimMismatch("tester does not match spec".into()));
    }
    let mut out = Vec::with_capacity(spec.j_count);
    for j in 0..spec.j_count {
        let mut acc = -spec.b[j];
        for (e, am) in tester.elements.iter().zip(spec.a[j].iter()) {
            acc += e.inner(am)?;
        }
        out.push(acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::{choi_from_unitary, validate_comb, VALIDATION_TOL};
    use crate::cmatrix::ComplexMatrix;
    use num_complex::Complex64;

    fn identity_channel() -> ProcessChoi {
        choi_from_unitary(&ComplexMatrix::identity(2)).unwrap()
    }

    fn x_channel() -> ProcessChoi {
        let x = ComplexMatrix::from_rows(vec![
            vec![Complex64::ZERO, Complex64::ONE],
            vec![Complex64::ONE, Complex64::ZERO],
        ])
        .unwrap();
        choi_from_unitary(&x).unwrap()
    }

    #[test]
    fn min_error_shape() {
        let spec = build_min_error(
            &[identity_channel(), x_channel()],
            &PriorWeights::uniform(2),
        )
        .unwrap();
        assert_eq!(spec.m_count, 2);
        assert_eq!(spec.j_count, 0);
        assert!((spec.c[0].trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inconclusive_shape_and_eta() {
        let combs = [identity_channel(), x_channel()];
        let spec = build_inconclusive(&combs, &PriorWeights::uniform(2), 0.3).unwrap();
        assert_eq!(spec.m_count, 3);
        assert_eq!(spec.j_count, 1);
        assert_eq!(spec.b[0], -0.3);

        // eta_0 = -P_I + p_inc: a tester putting everything on the
        // inconclusive outcome has P_I = 1.
        let layout = SystemLayout::single(2, 2);
        let zero = HermitianMatrix::zeros(4);
        let all = HermitianMatrix::identity(4).scale(0.5);
        let t = Tester::new(
            layout,
            vec![zero.clone(), zero, all],
            TesterSetDescriptor::General,
        )
        .unwrap();
        let etas = eta(&t, &spec).unwrap();
        assert!((etas[0] - (-1.0 + 0.3)).abs() < 1e-10);

        assert!(build_inconclusive(&combs, &PriorWeights::uniform(2), 1.5).is_err());
    }

    #[test]
    fn neyman_pearson_shape() {
        let spec = build_neyman_pearson(&identity_channel(), &x_channel(), 0.25).unwrap();
        assert_eq!(spec.m_count, 2);
        assert_eq!(spec.j_count, 1);
        assert_eq!(spec.b[0], 0.25);
        // With Φ_1 = 0 the slack is -p_np.
        let layout = SystemLayout::single(2, 2);
        let t = Tester::new(
            layout,
            vec![HermitianMatrix::identity(4).scale(0.5), HermitianMatrix::zeros(4)],
            TesterSetDescriptor::General,
        )
        .unwrap();
        let etas = eta(&t, &spec).unwrap();
        assert!((etas[0] + 0.25).abs() < 1e-12);
    }

    #[test]
    fn change_point_structure() {
        let (combs, spec) = build_change_point(&identity_channel(), &x_channel(), 2).unwrap();
        assert_eq!(combs.len(), 3);
        assert_eq!(spec.m_count, 3);
        for c in &combs {
            assert!(validate_comb(c, VALIDATION_TOL).unwrap().valid);
        }
        // r = 0 means the change already happened: both steps are the X channel.
        let xx = link_tensor(&[x_channel(), x_channel()]).unwrap();
        assert!(combs[0].matrix.sub(&xx.matrix).unwrap().frob_norm() < 1e-13);

        let (combs1, _) = build_change_point(&identity_channel(), &x_channel(), 1).unwrap();
        assert_eq!(combs1.len(), 2);
    }

    #[test]
    fn comparison_structure() {
        let chans = [identity_channel(), x_channel()];
        let inst = build_comparison(&chans, &[0.5, 0.5], 2).unwrap();
        assert!((inst.p0 - 0.5).abs() < 1e-12);
        assert!(validate_comb(&inst.identical, VALIDATION_TOL).unwrap().valid);
        assert!(validate_comb(&inst.different, VALIDATION_TOL).unwrap().valid);

        // p0 * identical + p1 * different reconstructs the mixture power.
        let mix = HermitianMatrix::lincomb(&[
            (0.5, &inst.identical.matrix),
            (0.5, &inst.different.matrix),
        ])
        .unwrap();
        let avg = HermitianMatrix::lincomb(&[
            (0.5, &identity_channel().matrix),
            (0.5, &x_channel().matrix),
        ])
        .unwrap();
        let avg_choi = ProcessChoi::comb(SystemLayout::single(2, 2), avg).unwrap();
        let expect = link_tensor(&[avg_choi.clone(), avg_choi]).unwrap();
        assert!(mix.sub(&expect.matrix).unwrap().frob_norm() < 1e-10);

        assert!(build_comparison(&chans[..1], &[1.0], 2).is_err());
    }

    #[test]
    fn permutation_order_count() {
        let (combs, spec) = build_permutation_order(&[identity_channel(), x_channel()]).unwrap();
        assert_eq!(combs.len(), 2);
        assert_eq!(spec.m_count, 2);
    }
}
