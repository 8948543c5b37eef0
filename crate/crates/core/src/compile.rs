//! Lowering canonical problems to standard-form conic programs.
//!
//! The primal introduces one PSD block per tester element plus the
//! descriptor's normalization variables (the input-side chain `τ_t` for
//! general testers, a density block for nonadaptive ones) and one
//! nonnegative slack per inequality. The dual introduces a free Hermitian
//! `χ`, nonnegative multipliers `q`, one PSD slack per outcome for
//! `χ - z_m(q) ⪰ 0`, and, for general testers, the epigraph chain `ω_t`
//! that evaluates the support function of the normalization set.
//!
//! Primal and dual are solved independently; the duality gap between the two
//! reported values doubles as a correctness check.

use crate::certify::{kkt_residuals, lambda_s, DualCertificate};
use crate::choi::{MarginalChain, Tester, TesterSetDescriptor};
use crate::error::{Error, Result};
use crate::herm::{
    kron_identity_left, partial_trace, permute_factors, HermitianMatrix, SystemLayout,
};
use crate::problems::ProblemSpec;
use crate::solver::{
    herm_basis_element, solve, vec_herm, BlockKind, ConicProgram, Sense, SolveOptions,
    SolveReport, Status,
};

/// Gap bound required to call a primal/dual pair optimal (strong duality).
pub const STRONG_DUALITY_TOL: f64 = 1e-4;

type MatOp<'a> = Box<dyn Fn(&HermitianMatrix) -> Result<HermitianMatrix> + 'a>;

enum Term<'a> {
    /// Linear image of a Hermitian block.
    Mat { block: usize, op: MatOp<'a> },
    /// `x[block][index] * matrix` contribution of one scalar variable.
    Scalar {
        block: usize,
        index: usize,
        matrix: HermitianMatrix,
    },
}

struct Builder {
    blocks: Vec<BlockKind>,
    offsets: Vec<usize>,
    n: usize,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl Builder {
    fn new() -> Self {
        Self {
            blocks: vec![],
            offsets: vec![],
            n: 0,
            rows: vec![],
            rhs: vec![],
        }
    }

    fn add_block(&mut self, kind: BlockKind) -> usize {
        self.blocks.push(kind);
        self.offsets.push(self.n);
        self.n += kind.vec_len();
        self.blocks.len() - 1
    }

    fn block_dim(&self, idx: usize) -> usize {
        match self.blocks[idx] {
            BlockKind::Psd { dim } | BlockKind::FreeHerm { dim } => dim,
            _ => panic!("not a matrix block"),
        }
    }

    /// Equality between Hermitian matrices on a `space_dim` space: one row
    /// per vectorization coordinate.
    fn add_matrix_eq(
        &mut self,
        space_dim: usize,
        terms: &[Term],
        rhs: Option<&HermitianMatrix>,
    ) -> Result<()> {
        let n_rows = space_dim * space_dim;
        let start = self.rows.len();
        for _ in 0..n_rows {
            self.rows.push(vec![0.0; self.n]);
        }
        for term in terms {
            match term {
                Term::Mat { block, op } => {
                    let d = self.block_dim(*block);
                    let off = self.offsets[*block];
                    for k in 0..d * d {
                        let img = op(&herm_basis_element(d, k))?;
                        if img.dim() != space_dim {
                            return Err(Error::DimMismatch("constraint operator image".into()));
                        }
                        let col = vec_herm(&img);
                        for (r, cv) in col.iter().enumerate() {
                            if *cv != 0.0 {
                                self.rows[start + r][off + k] += cv;
                            }
                        }
                    }
                }
                Term::Scalar { block, index, matrix } => {
                    let off = self.offsets[*block];
                    let col = vec_herm(matrix);
                    for (r, cv) in col.iter().enumerate() {
                        if *cv != 0.0 {
                            self.rows[start + r][off + index] += cv;
                        }
                    }
                }
            }
        }
        let rhs_vec = match rhs {
            Some(m) => vec_herm(m),
            None => vec![0.0; n_rows],
        };
        self.rhs.extend(rhs_vec);
        Ok(())
    }

    /// Scalar equality `sum <F_i, X_i> + sum coeff_i x_i = rhs`.
    fn add_scalar_eq(
        &mut self,
        mat_terms: &[(usize, &HermitianMatrix)],
        scalar_terms: &[(usize, usize, f64)],
        rhs: f64,
    ) {
        let mut row = vec![0.0; self.n];
        for (block, f) in mat_terms {
            let off = self.offsets[*block];
            for (k, cv) in vec_herm(f).iter().enumerate() {
                row[off + k] += cv;
            }
        }
        for (block, index, coeff) in scalar_terms {
            row[self.offsets[*block] + index] += coeff;
        }
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    fn finish(self, obj_terms: Vec<(usize, Vec<f64>)>, sense: Sense) -> ConicProgram {
        let mut obj = vec![0.0; self.n];
        for (block, coeffs) in obj_terms {
            let off = self.offsets[block];
            for (k, c) in coeffs.into_iter().enumerate() {
                obj[off + k] += c;
            }
        }
        let rows = self.rows.len();
        let mut a = Vec::with_capacity(rows * self.n);
        for r in self.rows {
            a.extend(r);
        }
        ConicProgram {
            blocks: self.blocks,
            a,
            rows,
            rhs: self.rhs,
            obj,
            sense,
        }
    }
}

/// Dimensions of the input-side chain variable `τ_t`
/// (`V_t ⊗ W_{t-1} ⊗ V_{t-1} ⊗ ... ⊗ W_1 ⊗ V_1`).
fn tau_dims(layout: &SystemLayout, t: usize) -> Vec<usize> {
    let mut dims = vec![layout.n_v(t)];
    for s in (1..t).rev() {
        dims.push(layout.n_w(s));
        dims.push(layout.n_v(s));
    }
    dims
}

/// Compiled primal with enough structure to unpack iterates.
pub struct CompiledPrimal {
    pub program: ConicProgram,
    layout: SystemLayout,
    descriptor: TesterSetDescriptor,
    m_count: usize,
}

impl CompiledPrimal {
    pub fn tester(&self, x: &[f64]) -> Result<Tester> {
        let elements = (0..self.m_count)
            .map(|m| self.program.block_matrix(x, m))
            .collect();
        Tester::new(self.layout.clone(), elements, self.descriptor)
    }
}

/// Lower the primal problem. Tester elements become PSD blocks; the element
/// sum is pinned into the descriptor's normalization set by equality rows;
/// every inequality gets a nonnegative slack.
pub fn compile_primal(spec: &ProblemSpec) -> Result<CompiledPrimal> {
    let layout = &spec.layout;
    let d = layout.total_dim();
    let t_count = layout.t_count();
    let mut b = Builder::new();

    let phi: Vec<usize> = (0..spec.m_count)
        .map(|_| b.add_block(BlockKind::Psd { dim: d }))
        .collect();

    match spec.descriptor {
        TesterSetDescriptor::General => {
            let tau: Vec<usize> = (1..=t_count)
                .map(|t| {
                    b.add_block(BlockKind::Psd {
                        dim: tau_dims(layout, t).iter().product(),
                    })
                })
                .collect();
            // sum_m Φ_m = I_{W_T} ⊗ τ_T
            let mut terms: Vec<Term> = phi
                .iter()
                .map(|&blk| Term::Mat {
                    block: blk,
                    op: Box::new(|h| Ok(h.clone())),
                })
                .collect();
            let n_w_top = layout.n_w(t_count);
            terms.push(Term::Mat {
                block: tau[t_count - 1],
                op: Box::new(move |h| Ok(kron_identity_left(n_w_top, h).scale(-1.0))),
            });
            b.add_matrix_eq(d, &terms, None)?;
            // Tr_{V_t} τ_t = I_{W_{t-1}} ⊗ τ_{t-1}
            for t in (2..=t_count).rev() {
                let dims = tau_dims(layout, t);
                let space: usize = dims.iter().skip(1).product();
                let n_w_below = layout.n_w(t - 1);
                let terms = vec![
                    Term::Mat {
                        block: tau[t - 1],
                        op: Box::new(move |h| partial_trace(h, &dims, &[0])),
                    },
                    Term::Mat {
                        block: tau[t - 2],
                        op: Box::new(move |h| Ok(kron_identity_left(n_w_below, h).scale(-1.0))),
                    },
                ];
                b.add_matrix_eq(space, &terms, None)?;
            }
            // Tr τ_1 = 1
            let eye = HermitianMatrix::identity(layout.n_v(1));
            b.add_scalar_eq(&[(tau[0], &eye)], &[], 1.0);
        }
        TesterSetDescriptor::FixedEntangled => {
            let terms: Vec<Term> = phi
                .iter()
                .map(|&blk| Term::Mat {
                    block: blk,
                    op: Box::new(|h| Ok(h.clone())),
                })
                .collect();
            let target = HermitianMatrix::identity(d)
                .scale(1.0 / layout.input_dim_product() as f64);
            b.add_matrix_eq(d, &terms, Some(&target))?;
        }
        TesterSetDescriptor::Nonadaptive => {
            if t_count != 2 {
                return Err(Error::Unsupported(
                    "nonadaptive descriptor is defined for T = 2 only".into(),
                ));
            }
            let dims = layout.factor_dims(); // [W2, V2, W1, V1]
            let (w2, v2, w1, v1) = (dims[0], dims[1], dims[2], dims[3]);
            let rho = b.add_block(BlockKind::Psd { dim: v2 * v1 });
            let mut terms: Vec<Term> = phi
                .iter()
                .map(|&blk| Term::Mat {
                    block: blk,
                    op: Box::new(|h| Ok(h.clone())),
                })
                .collect();
            terms.push(Term::Mat {
                block: rho,
                op: Box::new(move |h| {
                    let emb = kron_identity_left(w2 * w1, h);
                    Ok(permute_factors(&emb, &[w2, w1, v2, v1], &[0, 2, 1, 3])?.scale(-1.0))
                }),
            });
            b.add_matrix_eq(d, &terms, None)?;
            let eye = HermitianMatrix::identity(v2 * v1);
            b.add_scalar_eq(&[(rho, &eye)], &[], 1.0);
        }
    }

    if spec.j_count > 0 {
        let slack = b.add_block(BlockKind::NonNeg { len: spec.j_count });
        for j in 0..spec.j_count {
            let mats: Vec<(usize, &HermitianMatrix)> = phi
                .iter()
                .enumerate()
                .map(|(m, &blk)| (blk, &spec.a[j][m]))
                .collect();
            b.add_scalar_eq(&mats, &[(slack, j, 1.0)], spec.b[j]);
        }
    }

    let obj = phi
        .iter()
        .enumerate()
        .map(|(m, &blk)| (blk, vec_herm(&spec.c[m])))
        .collect();
    Ok(CompiledPrimal {
        program: b.finish(obj, Sense::Maximize),
        layout: spec.layout.clone(),
        descriptor: spec.descriptor,
        m_count: spec.m_count,
    })
}

/// Compiled dual with enough structure to unpack iterates.
pub struct CompiledDual {
    pub program: ConicProgram,
    layout: SystemLayout,
    descriptor: TesterSetDescriptor,
    j_count: usize,
    chi_block: usize,
    q_block: Option<usize>,
    omega_blocks: Vec<usize>,
}

impl CompiledDual {
    pub fn certificate(&self, x: &[f64]) -> Result<DualCertificate> {
        let chi = self.program.block_matrix(x, self.chi_block);
        let q = match self.q_block {
            Some(blk) => self.program.block_scalars(x, blk).to_vec(),
            None => vec![],
        };
        let chain = if self.omega_blocks.is_empty() {
            None
        } else {
            // Levels are stored t = T-1 .. 0.
            let levels: Vec<HermitianMatrix> = self
                .omega_blocks
                .iter()
                .rev()
                .map(|&blk| match self.program.blocks[blk] {
                    BlockKind::FreeHerm { .. } => self.program.block_matrix(x, blk),
                    _ => HermitianMatrix::diag(&[self.program.block_scalars(x, blk)[0]]),
                })
                .collect();
            Some(MarginalChain { levels })
        };
        // Recompute the support function exactly from chi.
        let (lambda_value, _) = lambda_s(&chi, self.descriptor, &self.layout, None)?;
        Ok(DualCertificate {
            chi,
            q,
            lambda_value,
            chain,
            residuals: None,
        })
    }

    pub fn j_count(&self) -> usize {
        self.j_count
    }
}

/// Lower the dual problem. Unsupported for the nonadaptive descriptor (no
/// dual form for its normalization set is implemented).
pub fn compile_dual(spec: &ProblemSpec) -> Result<CompiledDual> {
    let layout = &spec.layout;
    let d = layout.total_dim();
    let t_count = layout.t_count();
    if spec.descriptor == TesterSetDescriptor::Nonadaptive {
        return Err(Error::Unsupported(
            "dual compilation for the nonadaptive descriptor".into(),
        ));
    }
    let mut b = Builder::new();

    let chi_block = b.add_block(BlockKind::FreeHerm { dim: d });
    let q_block = if spec.j_count > 0 {
        Some(b.add_block(BlockKind::NonNeg { len: spec.j_count }))
    } else {
        None
    };
    let s_blocks: Vec<usize> = (0..spec.m_count)
        .map(|_| b.add_block(BlockKind::Psd { dim: d }))
        .collect();

    // χ + sum_j q_j a_{j,m} - S_m = c_m for every outcome.
    for m in 0..spec.m_count {
        let mut terms = vec![
            Term::Mat {
                block: chi_block,
                op: Box::new(|h: &HermitianMatrix| Ok(h.clone())),
            },
            Term::Mat {
                block: s_blocks[m],
                op: Box::new(|h: &HermitianMatrix| Ok(h.scale(-1.0))),
            },
        ];
        if let Some(qb) = q_block {
            for j in 0..spec.j_count {
                terms.push(Term::Scalar {
                    block: qb,
                    index: j,
                    matrix: spec.a[j][m].clone(),
                });
            }
        }
        b.add_matrix_eq(d, &terms, Some(&spec.c[m]))?;
    }

    let mut omega_blocks = vec![];
    let mut obj_terms: Vec<(usize, Vec<f64>)> = vec![];
    match spec.descriptor {
        TesterSetDescriptor::General => {
            // omega_0 scalar, omega_t Hermitian on the level-t space.
            omega_blocks.push(b.add_block(BlockKind::FreeScalar { len: 1 }));
            for t in 1..t_count {
                omega_blocks.push(b.add_block(BlockKind::FreeHerm {
                    dim: layout.level_dim(t),
                }));
            }
            add_support_chain_rows(&mut b, layout, Some(chi_block), &omega_blocks, None)?;
            obj_terms.push((omega_blocks[0], vec![1.0]));
        }
        TesterSetDescriptor::FixedEntangled => {
            let scaled_eye =
                HermitianMatrix::identity(d).scale(1.0 / layout.input_dim_product() as f64);
            obj_terms.push((chi_block, vec_herm(&scaled_eye)));
        }
        TesterSetDescriptor::Nonadaptive => unreachable!(),
    }
    if let Some(qb) = q_block {
        obj_terms.push((qb, spec.b.clone()));
    }

    Ok(CompiledDual {
        program: b.finish(obj_terms, Sense::Minimize),
        layout: spec.layout.clone(),
        descriptor: spec.descriptor,
        j_count: spec.j_count,
        chi_block,
        q_block,
        omega_blocks,
    })
}

/// Rows of the support-function epigraph: for `t = 1..T`,
/// `I_{V_t} ⊗ ω_{t-1} - Tr_{W_t}(level above) - R_t = rhs_t`, where the level
/// above is `χ` (variable or constant) at the top and `ω_t` below it.
fn add_support_chain_rows(
    b: &mut Builder,
    layout: &SystemLayout,
    chi_block: Option<usize>,
    omega_blocks: &[usize],
    chi_constant: Option<&HermitianMatrix>,
) -> Result<()> {
    let t_count = layout.t_count();
    for t in (1..=t_count).rev() {
        let space = layout.n_v(t) * layout.level_dim(t - 1);
        let r_t = b.add_block(BlockKind::Psd { dim: space });
        let mut terms = vec![Term::Mat {
            block: r_t,
            op: Box::new(|h: &HermitianMatrix| Ok(h.scale(-1.0))) as MatOp,
        }];
        let n_v_t = layout.n_v(t);
        if t == 1 {
            terms.push(Term::Scalar {
                block: omega_blocks[0],
                index: 0,
                matrix: HermitianMatrix::identity(layout.n_v(1)),
            });
        } else {
            terms.push(Term::Mat {
                block: omega_blocks[t - 1],
                op: Box::new(move |h| Ok(kron_identity_left(n_v_t, h))),
            });
        }
        let mut rhs_mat = None;
        if t == t_count {
            match (chi_block, chi_constant) {
                (Some(cb), None) => {
                    let dims = layout.level_dims(t_count);
                    terms.push(Term::Mat {
                        block: cb,
                        op: Box::new(move |h| Ok(partial_trace(h, &dims, &[0])?.scale(-1.0))),
                    });
                }
                (None, Some(chi)) => {
                    let dims = layout.level_dims(t_count);
                    rhs_mat = Some(partial_trace(chi, &dims, &[0])?);
                }
                _ => unreachable!(),
            }
        } else {
            let dims = layout.level_dims(t);
            terms.push(Term::Mat {
                block: omega_blocks[t],
                op: Box::new(move |h| Ok(partial_trace(h, &dims, &[0])?.scale(-1.0))),
            });
        }
        b.add_matrix_eq(space, &terms, rhs_mat.as_ref())?;
    }
    Ok(())
}

/// Nested evaluation of the general-tester support function for a fixed `χ`:
/// minimize the bottom scalar of the marginal-dominance chain.
pub fn support_value_nested(
    chi: &HermitianMatrix,
    layout: &SystemLayout,
    opts: &SolveOptions,
) -> Result<(f64, MarginalChain, SolveReport)> {
    if chi.dim() != layout.total_dim() {
        return Err(Error::DimMismatch("support_value_nested".into()));
    }
    let t_count = layout.t_count();
    let mut b = Builder::new();
    let mut omega_blocks = vec![b.add_block(BlockKind::FreeScalar { len: 1 })];
    for t in 1..t_count {
        omega_blocks.push(b.add_block(BlockKind::FreeHerm {
            dim: layout.level_dim(t),
        }));
    }
    add_support_chain_rows(&mut b, layout, None, &omega_blocks, Some(chi))?;
    let program = b.finish(vec![(omega_blocks[0], vec![1.0])], Sense::Minimize);
    let report = solve(&program, opts)?;
    let levels: Vec<HermitianMatrix> = omega_blocks
        .iter()
        .rev()
        .map(|&blk| match program.blocks[blk] {
            BlockKind::FreeHerm { .. } => program.block_matrix(&report.x, blk),
            _ => HermitianMatrix::diag(&[program.block_scalars(&report.x, blk)[0]]),
        })
        .collect();
    Ok((report.objective, MarginalChain { levels }, report))
}

/// Joint primal/dual solution of a canonical problem.
#[derive(Debug, Clone)]
pub struct PrimalDualSolution {
    pub tester: Tester,
    pub certificate: DualCertificate,
    /// `|P(Φ) - D_S(χ, q)|`, both recomputed from the repackaged iterates.
    pub gap: f64,
    pub primal_value: f64,
    pub dual_value: f64,
    pub primal: SolveReport,
    pub dual: SolveReport,
    /// Both solves converged and the gap meets [`STRONG_DUALITY_TOL`].
    pub optimal: bool,
}

/// Solve primal and dual independently and cross-check the duality gap.
pub fn solve_primal_dual(spec: &ProblemSpec, opts: &SolveOptions) -> Result<PrimalDualSolution> {
    let primal = compile_primal(spec)?;
    let dual = compile_dual(spec)?;
    let p_report = solve(&primal.program, opts)?;
    let d_report = solve(&dual.program, opts)?;

    let tester = primal.tester(&p_report.x)?;
    let mut certificate = dual.certificate(&d_report.x)?;

    let primal_value = spec.objective(&tester)?;
    let dual_value = certificate.dual_objective(&spec.b);
    let gap = (primal_value - dual_value).abs();
    certificate.residuals = Some(kkt_residuals(&tester, &certificate, spec, None)?);

    let optimal = p_report.status == Status::Optimal
        && d_report.status == Status::Optimal
        && gap <= STRONG_DUALITY_TOL;
    if !optimal {
        log::warn!(
            "primal/dual disagreement or non-convergence: P = {primal_value:.8}, D = {dual_value:.8}, gap = {gap:.3e}"
        );
    }
    Ok(PrimalDualSolution {
        tester,
        certificate,
        gap,
        primal_value,
        dual_value,
        primal: p_report,
        dual: d_report,
        optimal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::{choi_from_unitary, validate_tester};
    use crate::cmatrix::ComplexMatrix;
    use crate::problems::{build_inconclusive, build_min_error, PriorWeights};
    use num_complex::Complex64;

    fn qubit_state(matrix: HermitianMatrix) -> crate::choi::ProcessChoi {
        // A state is a single-step process with trivial input.
        crate::choi::ProcessChoi::comb(SystemLayout::single(1, 2), matrix).unwrap()
    }

    #[test]
    fn primal_shapes() {
        let rho0 = qubit_state(HermitianMatrix::diag(&[1.0, 0.0]));
        let rho1 = qubit_state(HermitianMatrix::diag(&[0.0, 1.0]));
        let spec = build_min_error(&[rho0, rho1], &PriorWeights::uniform(2)).unwrap();
        let compiled = compile_primal(&spec).unwrap();
        // 2 PSD 2x2 blocks plus the scalar input-side block.
        assert_eq!(compiled.program.blocks.len(), 3);
        assert_eq!(compiled.program.rows, 4 + 1);
    }

    #[test]
    fn helstrom_orthogonal_states() {
        let rho0 = qubit_state(HermitianMatrix::diag(&[1.0, 0.0]));
        let rho1 = qubit_state(HermitianMatrix::diag(&[0.0, 1.0]));
        let spec = build_min_error(&[rho0, rho1], &PriorWeights::uniform(2)).unwrap();
        let sol = solve_primal_dual(&spec, &SolveOptions::default()).unwrap();
        assert!(sol.optimal);
        assert!((sol.primal_value - 1.0).abs() < 1e-6);
        assert!(sol.gap < 1e-6);
        assert!(validate_tester(&sol.tester, 1e-6).unwrap().valid);
    }

    #[test]
    fn helstrom_zero_plus() {
        // |0> vs |+> at equal priors: (1 + 1/sqrt(2)) / 2.
        let rho0 = qubit_state(HermitianMatrix::diag(&[1.0, 0.0]));
        let plus = HermitianMatrix::from_entries(
            2,
            vec![
                Complex64::new(0.5, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        )
        .unwrap();
        let rho1 = qubit_state(plus);
        let spec = build_min_error(&[rho0, rho1], &PriorWeights::uniform(2)).unwrap();
        let sol = solve_primal_dual(&spec, &SolveOptions::default()).unwrap();
        let expect = 0.5 * (1.0 + std::f64::consts::FRAC_1_SQRT_2);
        assert!(sol.optimal);
        assert!((sol.primal_value - expect).abs() < 1e-5);
    }

    #[test]
    fn identity_vs_x_channels() {
        let id = choi_from_unitary(&ComplexMatrix::identity(2)).unwrap();
        let x = choi_from_unitary(
            &ComplexMatrix::from_rows(vec![
                vec![Complex64::ZERO, Complex64::ONE],
                vec![Complex64::ONE, Complex64::ZERO],
            ])
            .unwrap(),
        )
        .unwrap();
        let spec = build_min_error(&[id, x], &PriorWeights::uniform(2)).unwrap();
        let sol = solve_primal_dual(&spec, &SolveOptions::default()).unwrap();
        assert!(sol.optimal);
        assert!((sol.primal_value - 1.0).abs() < 1e-5);
        assert!((sol.dual_value - 1.0).abs() < 1e-5);
    }

    #[test]
    fn inconclusive_adds_one_slack() {
        let rho0 = qubit_state(HermitianMatrix::diag(&[1.0, 0.0]));
        let rho1 = qubit_state(HermitianMatrix::diag(&[0.0, 1.0]));
        let spec =
            build_inconclusive(&[rho0, rho1], &PriorWeights::uniform(2), 0.25).unwrap();
        let compiled = compile_primal(&spec).unwrap();
        let nonneg: Vec<_> = compiled
            .program
            .blocks
            .iter()
            .filter(|b| matches!(b, BlockKind::NonNeg { .. }))
            .collect();
        assert_eq!(nonneg.len(), 1);

        // Orthogonal states with P_I pinned to 0.25 leave 0.75 success.
        let sol = solve_primal_dual(&spec, &SolveOptions::default()).unwrap();
        assert!(sol.optimal);
        assert!((sol.primal_value - 0.75).abs() < 1e-5);
    }
}
