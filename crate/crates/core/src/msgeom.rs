//! Multisymplectic structures: closedness/nondegeneracy verification,
//! Hamiltonian vector-field solving, and the bracket of Hamiltonian forms.
//!
//! A structure form of degree `k+1` induces the contraction map sending a
//! vector field to the `k`-form `i(X)Ω`; its `C(m,k) × m` coefficient
//! matrix over the expression field drives both the nondegeneracy rank
//! check and the Hamiltonian solver for `i(X)Ω = dζ`.
//!
//! The bracket is `{ζ₁, ζ₂} := −i(X₁) i(X₂) Ω`. On the symplectic plane
//! this gives `{q, p} = 1`. The closure identity is reported under both
//! index orders (`d{ζ₁,ζ₂}` against `i([X₁,X₂])Ω` and `i([X₂,X₁])Ω`)
//! because the two appear interchangeably in the literature; the one that
//! is a theorem for this bracket convention is the swapped order.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exterior::{
    bracket as vf_bracket, interior_product, k_subsets, lie_derivative, DifferentialForm,
    MultiIndex, MultivectorField,
};
use crate::linalg::{self, Certainty, RfMatrix, SolveOutcome};
use crate::report::Tri;
use crate::symexpr::ratfn::{ratfn_to_expr, to_ratfn, RatFn};
use crate::symexpr::{is_zero_with_witness, NonZeroWitness, ScalarExpr, ZeroCtx, ZeroVerdict};

/// A chart together with a certified-closed structure form of degree
/// `k+1 <= m`, and optionally a potential with `dθ = Ω`.
#[derive(Debug, Clone)]
pub struct MultisymplecticStructure {
    chart: Chart,
    omega: DifferentialForm,
    theta: Option<DifferentialForm>,
}

impl MultisymplecticStructure {
    pub fn new(
        omega: DifferentialForm,
        theta: Option<DifferentialForm>,
        ctx: &ZeroCtx,
    ) -> Result<MultisymplecticStructure> {
        let chart = omega.chart().clone();
        if omega.degree() < 2 {
            return Err(Error::Degree(format!(
                "structure form must have degree >= 2, got {}",
                omega.degree()
            )));
        }
        if omega.degree() > chart.dim() {
            return Err(Error::Degree(format!(
                "structure degree {} exceeds chart dimension {}",
                omega.degree(),
                chart.dim()
            )));
        }
        match omega.d()?.zero_verdict(ctx)? {
            ZeroVerdict::Zero => {}
            v => {
                return Err(Error::NotClosed(format!(
                    "dΩ is {v}, cannot certify closedness"
                )))
            }
        }
        if let Some(t) = &theta {
            chart.expect_same(t.chart())?;
            if t.degree() + 1 != omega.degree() {
                return Err(Error::Degree(
                    "potential degree must be one below the structure degree".to_string(),
                ));
            }
            match t.d()?.sub(&omega)?.zero_verdict(ctx)? {
                ZeroVerdict::Zero => {}
                v => {
                    return Err(Error::invalid(
                        "potential",
                        format!("dθ − Ω is {v}, cannot certify the potential"),
                    ))
                }
            }
        }
        Ok(MultisymplecticStructure {
            chart,
            omega,
            theta,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn omega(&self) -> &DifferentialForm {
        &self.omega
    }

    pub fn theta(&self) -> Option<&DifferentialForm> {
        self.theta.as_ref()
    }

    /// `k` where the structure form has degree `k+1`.
    pub fn k(&self) -> usize {
        self.omega.degree() - 1
    }

    /// Rows of the contraction map: the coefficient of `dx^J` in `i(∂_j)Ω`
    /// at row `J`, column `j`.
    pub fn contraction_matrix(&self) -> Result<(Vec<MultiIndex>, RfMatrix)> {
        let m = self.chart.dim();
        let k = self.k();
        let row_index = k_subsets(m as u32, k);
        let mut rows = vec![vec![RatFn::zero(); m]; row_index.len()];
        let positions: std::collections::BTreeMap<&MultiIndex, usize> =
            row_index.iter().enumerate().map(|(i, j)| (j, i)).collect();
        for j in 0..m {
            let basis = MultivectorField::basis_vector(&self.chart, j as u32 + 1)?;
            let contracted = interior_product(&basis, &self.omega)?;
            for (idx, coeff) in contracted.terms() {
                let row = positions[idx];
                rows[row][j] = to_ratfn(coeff)?;
            }
        }
        Ok((row_index, RfMatrix::from_rows(rows)))
    }
}

/// Report of the closedness and 1-nondegeneracy checks.
#[derive(Debug, Clone)]
pub struct MsCheckReport {
    pub closed: ZeroVerdict,
    pub nondegenerate: Tri,
    pub certainty: Certainty,
    pub structural_rank: usize,
    pub sampled_rank: Option<usize>,
    pub sample_points: Vec<std::collections::BTreeMap<std::sync::Arc<str>, num::BigRational>>,
    /// Basis of the kernel distribution when degenerate.
    pub kernel_basis: Vec<MultivectorField>,
}

/// Check closedness and 1-nondegeneracy of a candidate structure form.
pub fn check_multisymplectic(omega: &DifferentialForm, ctx: &ZeroCtx) -> Result<MsCheckReport> {
    if omega.degree() < 2 {
        return Err(Error::Degree(
            "a multisymplectic candidate needs degree >= 2".to_string(),
        ));
    }
    let closed = omega.d()?.zero_verdict(ctx)?;
    let probe = MultisymplecticStructure {
        chart: omega.chart().clone(),
        omega: omega.clone(),
        theta: None,
    };
    let m = omega.chart().dim();
    let (_, matrix) = probe.contraction_matrix()?;
    let rank_report = linalg::rank(&matrix, ctx)?;
    let (nondegenerate, certainty) = if rank_report.certainty == Certainty::Exact {
        (
            if rank_report.free_rank == m { Tri::Yes } else { Tri::No },
            Certainty::Exact,
        )
    } else if rank_report.sampled_rank == Some(m) {
        // A full-rank sample certifies full rank at generic points.
        (Tri::Yes, Certainty::Sampled)
    } else if rank_report.free_rank < m {
        // Structural rank bounds the functional rank from above.
        (Tri::No, Certainty::Exact)
    } else {
        (Tri::Undecided, Certainty::Sampled)
    };
    let mut kernel_basis = Vec::new();
    if nondegenerate == Tri::No {
        for v in linalg::nullspace(&matrix, ctx)? {
            kernel_basis.push(field_from_solution(omega.chart(), &v)?);
        }
    }
    Ok(MsCheckReport {
        closed,
        nondegenerate,
        certainty,
        structural_rank: rank_report.free_rank,
        sampled_rank: rank_report.sampled_rank,
        sample_points: rank_report.points,
        kernel_basis,
    })
}

/// Rebuild a degree-1 field from solver components, clearing denominators
/// so the kernel basis prints as polynomial fields when possible.
fn field_from_solution(chart: &Chart, v: &[RatFn]) -> Result<MultivectorField> {
    let mut denom = crate::symexpr::poly::Poly::one();
    for rf in v {
        let g = crate::symexpr::poly::gcd(&denom, rf.den());
        denom = denom.mul_raw(&rf.den().exact_div(&g).expect("gcd divides"));
    }
    let comps: Vec<ScalarExpr> = v
        .iter()
        .map(|rf| {
            let factor = denom.exact_div(rf.den()).expect("lcm divisible");
            ratfn_to_expr(&RatFn::from_poly(rf.num().mul(&factor)))
        })
        .collect();
    MultivectorField::from_components(chart, &comps)
}

/// Outcome of solving `i(X)Ω = dζ`.
#[derive(Debug, Clone)]
pub enum HvfOutcome {
    Solved {
        field: MultivectorField,
        unique: Tri,
        certainty: Certainty,
    },
    Unsolvable {
        /// A reduced equation `0 = residual` proving the right side lies
        /// outside the image of the contraction map.
        residual: ScalarExpr,
        witness: Option<NonZeroWitness>,
    },
    Undecided {
        reason: String,
    },
}

impl HvfOutcome {
    pub fn field(&self) -> Option<&MultivectorField> {
        match self {
            HvfOutcome::Solved { field, .. } => Some(field),
            _ => None,
        }
    }
}

/// Solve `i(X)Ω = dζ` for a degree-1 field `X`; sound: a returned field is
/// re-certified coefficientwise before it is reported.
pub fn hamiltonian_vector_field(
    ms: &MultisymplecticStructure,
    zeta: &DifferentialForm,
    ctx: &ZeroCtx,
) -> Result<HvfOutcome> {
    ms.chart().expect_same(zeta.chart())?;
    let k = ms.k();
    if zeta.degree() + 1 != k {
        return Err(Error::Degree(format!(
            "Hamiltonian form must have degree {} for a structure of degree {}",
            k.saturating_sub(1),
            k + 1
        )));
    }
    let (row_index, matrix) = ms.contraction_matrix()?;
    let dzeta = zeta.d()?;
    let rhs: Vec<RatFn> = row_index
        .iter()
        .map(|idx| to_ratfn(&dzeta.coeff(idx)))
        .collect::<Result<Vec<_>>>()?;
    match linalg::solve(&matrix, &rhs, ctx)? {
        SolveOutcome::Solution {
            particular,
            nullspace,
            certainty,
        } => {
            let field = field_components(ms.chart(), &particular)?;
            // Post-hoc certification, never assumed.
            let residual = interior_product(&field, ms.omega())?.sub(&dzeta)?;
            match residual.zero_verdict(ctx)? {
                ZeroVerdict::Zero => {}
                ZeroVerdict::NonZero => {
                    return Ok(HvfOutcome::Undecided {
                        reason: "solver output failed certification".to_string(),
                    })
                }
                ZeroVerdict::Undecided => {
                    return Ok(HvfOutcome::Undecided {
                        reason: "certification of i(X)Ω − dζ was undecided".to_string(),
                    })
                }
            }
            let unique = if nullspace.is_empty() { Tri::Yes } else { Tri::No };
            Ok(HvfOutcome::Solved {
                field,
                unique,
                certainty,
            })
        }
        SolveOutcome::Inconsistent { residual } => {
            let (_, witness) = is_zero_with_witness(&residual, ctx)?;
            Ok(HvfOutcome::Unsolvable { residual, witness })
        }
        SolveOutcome::Undecided { reason } => Ok(HvfOutcome::Undecided { reason }),
    }
}

fn field_components(chart: &Chart, v: &[RatFn]) -> Result<MultivectorField> {
    let comps: Vec<ScalarExpr> = v.iter().map(ratfn_to_expr).collect();
    MultivectorField::from_components(chart, &comps)
}

/// Locally Hamiltonian test: `d(i(X)Ω) = 0`, cross-checked against the Lie
/// derivative criterion `L(X)Ω = 0` (they agree when `dΩ = 0`).
pub fn is_locally_hamiltonian(
    ms: &MultisymplecticStructure,
    x: &MultivectorField,
    ctx: &ZeroCtx,
) -> Result<Tri> {
    ms.chart().expect_same(x.chart())?;
    if x.degree() != 1 {
        return Err(Error::Degree(
            "locally Hamiltonian test needs a degree-1 field".to_string(),
        ));
    }
    let di = interior_product(x, ms.omega())?.d()?.zero_verdict(ctx)?;
    let lie = lie_derivative(x, ms.omega())?.zero_verdict(ctx)?;
    let a = zero_to_tri(di);
    let b = zero_to_tri(lie);
    // Equal whenever both are decided; keep the stronger verdict otherwise.
    Ok(match (a, b) {
        (Tri::Undecided, v) | (v, Tri::Undecided) => v,
        (x, y) if x == y => x,
        _ => Tri::Undecided,
    })
}

pub(crate) fn zero_to_tri(v: ZeroVerdict) -> Tri {
    match v {
        ZeroVerdict::Zero => Tri::Yes,
        ZeroVerdict::NonZero => Tri::No,
        ZeroVerdict::Undecided => Tri::Undecided,
    }
}

/// A Hamiltonian class: a representative `(k−1)`-form, understood modulo
/// closed forms.
#[derive(Debug, Clone)]
pub struct HamiltonianClass {
    representative: DifferentialForm,
}

impl HamiltonianClass {
    pub fn new(representative: DifferentialForm) -> HamiltonianClass {
        HamiltonianClass { representative }
    }

    pub fn representative(&self) -> &DifferentialForm {
        &self.representative
    }

    /// Class equality: the difference of representatives is closed.
    pub fn eq_mod_closed(&self, other: &HamiltonianClass, ctx: &ZeroCtx) -> Result<Tri> {
        let d = self
            .representative
            .sub(&other.representative)?
            .d()?
            .zero_verdict(ctx)?;
        Ok(zero_to_tri(d))
    }
}

/// The bracket of Hamiltonian forms together with its solver byproducts.
#[derive(Debug, Clone)]
pub struct BracketResult {
    pub value: HamiltonianClass,
    pub field1: MultivectorField,
    pub field2: MultivectorField,
}

/// `{ζ₁, ζ₂} := −i(X_{ζ₁}) i(X_{ζ₂}) Ω`.
pub fn bracket(
    ms: &MultisymplecticStructure,
    zeta1: &DifferentialForm,
    zeta2: &DifferentialForm,
    ctx: &ZeroCtx,
) -> Result<BracketResult> {
    let x1 = solve_or_fail(ms, zeta1, ctx)?;
    let x2 = solve_or_fail(ms, zeta2, ctx)?;
    let value = interior_product(&x1, &interior_product(&x2, ms.omega())?)?.neg();
    Ok(BracketResult {
        value: HamiltonianClass::new(value),
        field1: x1,
        field2: x2,
    })
}

fn solve_or_fail(
    ms: &MultisymplecticStructure,
    zeta: &DifferentialForm,
    ctx: &ZeroCtx,
) -> Result<MultivectorField> {
    match hamiltonian_vector_field(ms, zeta, ctx)? {
        HvfOutcome::Solved { field, .. } => Ok(field),
        HvfOutcome::Unsolvable { .. } => Err(Error::NotHamiltonian(zeta.to_string())),
        HvfOutcome::Undecided { reason } => Err(Error::Uncertifiable(reason)),
    }
}

/// The closure identity `d{ζ₁,ζ₂} = i([X?,X?])Ω`, reported under both
/// argument orders. For the implemented bracket convention the swapped
/// order `[X₂,X₁]` is the identity that holds.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    /// `d{ζ₁,ζ₂} − i([X₁,X₂])Ω ≡ 0`
    pub as_printed: Tri,
    /// `d{ζ₁,ζ₂} − i([X₂,X₁])Ω ≡ 0`
    pub swapped: Tri,
}

pub fn bracket_closure(
    ms: &MultisymplecticStructure,
    zeta1: &DifferentialForm,
    zeta2: &DifferentialForm,
    ctx: &ZeroCtx,
) -> Result<ClosureReport> {
    let br = bracket(ms, zeta1, zeta2, ctx)?;
    let d_br = br.value.representative().d()?;
    let commutator = vf_bracket(&br.field1, &br.field2)?;
    let printed = d_br
        .sub(&interior_product(&commutator, ms.omega())?)?
        .zero_verdict(ctx)?;
    let swapped = d_br
        .add(&interior_product(&commutator, ms.omega())?)?
        .zero_verdict(ctx)?;
    Ok(ClosureReport {
        as_printed: zero_to_tri(printed),
        swapped: zero_to_tri(swapped),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse;

    fn ctx() -> ZeroCtx {
        ZeroCtx::default()
    }

    fn symplectic_plane() -> MultisymplecticStructure {
        let m = Chart::new("M", &["q", "p"]).unwrap();
        let omega = DifferentialForm::basis(&m, &[1, 2]).unwrap();
        MultisymplecticStructure::new(omega, None, &ctx()).unwrap()
    }

    fn r5_degree3() -> MultisymplecticStructure {
        let m = Chart::new("R5", &["x", "y", "z", "u", "v"]).unwrap();
        let omega = DifferentialForm::new(
            &m,
            3,
            vec![
                (vec![1, 2, 3], ScalarExpr::one()),
                (vec![1, 4, 5], ScalarExpr::one()),
            ],
        )
        .unwrap();
        MultisymplecticStructure::new(omega, None, &ctx()).unwrap()
    }

    #[test]
    fn plane_is_multisymplectic() {
        let ms = symplectic_plane();
        let rep = check_multisymplectic(ms.omega(), &ctx()).unwrap();
        assert_eq!(rep.closed, ZeroVerdict::Zero);
        assert_eq!(rep.nondegenerate, Tri::Yes);
        assert_eq!(rep.certainty, Certainty::Exact);
    }

    #[test]
    fn r5_sum_form_is_nondegenerate() {
        let ms = r5_degree3();
        let rep = check_multisymplectic(ms.omega(), &ctx()).unwrap();
        assert_eq!(rep.closed, ZeroVerdict::Zero);
        assert_eq!(rep.nondegenerate, Tri::Yes);
        assert_eq!(rep.structural_rank, 5);
    }

    #[test]
    fn volume_form_on_r4_is_degenerate_with_kernel() {
        let m = Chart::new("R4", &["x", "y", "z", "w"]).unwrap();
        let omega = DifferentialForm::basis(&m, &[1, 2, 3]).unwrap();
        let rep = check_multisymplectic(&omega, &ctx()).unwrap();
        assert_eq!(rep.closed, ZeroVerdict::Zero);
        assert_eq!(rep.nondegenerate, Tri::No);
        assert_eq!(rep.kernel_basis.len(), 1);
        let expected = MultivectorField::basis_vector(&m, 4).unwrap();
        assert!(rep.kernel_basis[0].sub(&expected).unwrap().is_zero_field());
    }

    #[test]
    fn kernel_bearing_structure_uses_sampled_rank() {
        // Ω = (2 + sin x) dx∧dy on R²: top degree, closed; nondegeneracy
        // is decided at sampled points since the entries carry a kernel.
        let m = Chart::new("M", &["x", "y"]).unwrap();
        let omega = DifferentialForm::new(
            &m,
            2,
            vec![(vec![1, 2], parse("2 + sin(x)", &m).unwrap())],
        )
        .unwrap();
        let rep = check_multisymplectic(&omega, &ctx()).unwrap();
        assert_eq!(rep.closed, ZeroVerdict::Zero);
        assert_eq!(rep.nondegenerate, Tri::Yes);
        assert_eq!(rep.certainty, Certainty::Sampled);
        assert!(!rep.sample_points.is_empty());

        // Structural degeneracy is certified even with kernels present:
        // the z-contraction of (2 + sin x) dx∧dy on R³ vanishes identically.
        let r3 = Chart::new("R3", &["x", "y", "z"]).unwrap();
        let omega3 = DifferentialForm::new(
            &r3,
            2,
            vec![(vec![1, 2], parse("2 + sin(x)", &r3).unwrap())],
        )
        .unwrap();
        let rep = check_multisymplectic(&omega3, &ctx()).unwrap();
        assert_eq!(rep.nondegenerate, Tri::No);
        assert_eq!(rep.kernel_basis.len(), 1);
        let expected = MultivectorField::basis_vector(&r3, 3).unwrap();
        assert!(rep.kernel_basis[0].sub(&expected).unwrap().is_zero_field());
    }

    #[test]
    fn kernel_bearing_hamiltonian_is_solved_and_recertified() {
        // ζ = sin q on the symplectic plane: dζ = cos(q) dq, X = −cos(q) ∂p.
        let ms = symplectic_plane();
        let m = ms.chart().clone();
        let zeta = DifferentialForm::from_scalar(&m, &parse("sin(q)", &m).unwrap()).unwrap();
        match hamiltonian_vector_field(&ms, &zeta, &ctx()).unwrap() {
            HvfOutcome::Solved {
                field, certainty, ..
            } => {
                assert_eq!(certainty, Certainty::Sampled);
                let expected = MultivectorField::new(
                    &m,
                    1,
                    vec![(vec![2], parse("-cos(q)", &m).unwrap())],
                )
                .unwrap();
                assert!(field.sub(&expected).unwrap().is_zero_field());
            }
            other => panic!("expected a certified solution, got {other:?}"),
        }
    }

    #[test]
    fn rotation_field_solves_the_plane_oscillator() {
        let ms = symplectic_plane();
        let m = ms.chart().clone();
        let zeta =
            DifferentialForm::from_scalar(&m, &parse("(q^2+p^2)/2", &m).unwrap()).unwrap();
        match hamiltonian_vector_field(&ms, &zeta, &ctx()).unwrap() {
            HvfOutcome::Solved { field, unique, .. } => {
                let expected = MultivectorField::from_components(
                    &m,
                    &[parse("p", &m).unwrap(), parse("-q", &m).unwrap()],
                )
                .unwrap();
                assert!(field.sub(&expected).unwrap().is_zero_field());
                assert_eq!(unique, Tri::Yes);
            }
            other => panic!("expected solution, got {other:?}"),
        }
    }

    #[test]
    fn volume_form_example_on_r3() {
        let m = Chart::new("R3", &["x", "y", "z"]).unwrap();
        let omega = DifferentialForm::basis(&m, &[1, 2, 3]).unwrap();
        let ms = MultisymplecticStructure::new(omega, None, &ctx()).unwrap();
        let zeta =
            DifferentialForm::new(&m, 1, vec![(vec![2], parse("x", &m).unwrap())]).unwrap();
        match hamiltonian_vector_field(&ms, &zeta, &ctx()).unwrap() {
            HvfOutcome::Solved { field, .. } => {
                let expected = MultivectorField::basis_vector(&m, 3).unwrap();
                assert!(field.sub(&expected).unwrap().is_zero_field());
            }
            other => panic!("expected ∂z, got {other:?}"),
        }
    }

    #[test]
    fn r5_outside_image_is_unsolvable_with_certificate() {
        let ms = r5_degree3();
        let m = ms.chart().clone();
        // ζ = y du: dζ = dy∧du is outside the image of the contraction map.
        let zeta =
            DifferentialForm::new(&m, 1, vec![(vec![4], parse("y", &m).unwrap())]).unwrap();
        match hamiltonian_vector_field(&ms, &zeta, &ctx()).unwrap() {
            HvfOutcome::Unsolvable { residual, .. } => {
                assert!(!residual.is_zero_literal());
            }
            other => panic!("expected unsolvable, got {other:?}"),
        }
    }

    #[test]
    fn locally_hamiltonian_examples() {
        let ms = symplectic_plane();
        let m = ms.chart().clone();
        let c = ctx();
        let dq = MultivectorField::basis_vector(&m, 1).unwrap();
        assert_eq!(is_locally_hamiltonian(&ms, &dq, &c).unwrap(), Tri::Yes);

        let scaling =
            MultivectorField::from_components(&m, &[parse("q", &m).unwrap(), ScalarExpr::zero()])
                .unwrap();
        assert_eq!(is_locally_hamiltonian(&ms, &scaling, &c).unwrap(), Tri::No);

        let rotation = MultivectorField::from_components(
            &m,
            &[parse("p", &m).unwrap(), parse("-q", &m).unwrap()],
        )
        .unwrap();
        assert_eq!(is_locally_hamiltonian(&ms, &rotation, &c).unwrap(), Tri::Yes);
    }

    #[test]
    fn plane_bracket_of_coordinates_is_one() {
        let ms = symplectic_plane();
        let m = ms.chart().clone();
        let q = DifferentialForm::from_scalar(&m, &parse("q", &m).unwrap()).unwrap();
        let p = DifferentialForm::from_scalar(&m, &parse("p", &m).unwrap()).unwrap();
        let br = bracket(&ms, &q, &p, &ctx()).unwrap();
        assert_eq!(br.value.representative().scalar_part(), ScalarExpr::one());
        // X_q = −∂p, X_p = ∂q
        let neg_dp = MultivectorField::basis_vector(&m, 2).unwrap().neg();
        assert!(br.field1.sub(&neg_dp).unwrap().is_zero_field());
    }

    #[test]
    fn bracket_is_antisymmetric_on_the_diagonal() {
        let ms = symplectic_plane();
        let m = ms.chart().clone();
        let zeta =
            DifferentialForm::from_scalar(&m, &parse("q^2*p + p^3/3", &m).unwrap()).unwrap();
        let br = bracket(&ms, &zeta, &zeta, &ctx()).unwrap();
        assert!(br.value.representative().is_zero_form());
    }

    #[test]
    fn r3_bracket_by_iterated_contraction() {
        // Ω = dx∧dy∧dz, ζ₁ = x dy (X₁ = ∂z), ζ₂ = y dz (X₂ = ∂x):
        // {ζ₁,ζ₂} = −i(∂z) i(∂x) Ω = −i(∂z)(dy∧dz) = dy.
        let m = Chart::new("R3", &["x", "y", "z"]).unwrap();
        let omega = DifferentialForm::basis(&m, &[1, 2, 3]).unwrap();
        let ms = MultisymplecticStructure::new(omega, None, &ctx()).unwrap();
        let z1 = DifferentialForm::new(&m, 1, vec![(vec![2], parse("x", &m).unwrap())]).unwrap();
        let z2 = DifferentialForm::new(&m, 1, vec![(vec![3], parse("y", &m).unwrap())]).unwrap();
        let br = bracket(&ms, &z1, &z2, &ctx()).unwrap();
        let dy = DifferentialForm::basis(&m, &[2]).unwrap();
        assert!(br.value.representative().sub(&dy).unwrap().is_zero_form());
    }

    #[test]
    fn closure_identity_holds_in_the_swapped_order() {
        let ms = symplectic_plane();
        let m = ms.chart().clone();
        let z1 = DifferentialForm::from_scalar(&m, &parse("q^2/2", &m).unwrap()).unwrap();
        let z2 = DifferentialForm::from_scalar(&m, &parse("p^2/2", &m).unwrap()).unwrap();
        let rep = bracket_closure(&ms, &z1, &z2, &ctx()).unwrap();
        assert_eq!(rep.swapped, Tri::Yes);
        assert_eq!(rep.as_printed, Tri::No);
    }

    #[test]
    fn coordinate_brackets_on_symplectic_r4_are_kronecker() {
        // {q_i, p_j} = δ_ij with Ω = Σ dq_i ∧ dp_i.
        let m = Chart::new("T2", &["r1", "r2", "s1", "s2"]).unwrap();
        let omega = DifferentialForm::new(
            &m,
            2,
            vec![
                (vec![1, 3], ScalarExpr::one()),
                (vec![2, 4], ScalarExpr::one()),
            ],
        )
        .unwrap();
        let ms = MultisymplecticStructure::new(omega, None, &ctx()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let q = DifferentialForm::from_scalar(
                    &m,
                    &ScalarExpr::sym_arc(m.coord(i).clone()),
                )
                .unwrap();
                let p = DifferentialForm::from_scalar(
                    &m,
                    &ScalarExpr::sym_arc(m.coord(2 + j).clone()),
                )
                .unwrap();
                let br = bracket(&ms, &q, &p, &ctx()).unwrap();
                let expected = if i == j {
                    ScalarExpr::one()
                } else {
                    ScalarExpr::zero()
                };
                assert_eq!(br.value.representative().scalar_part(), expected);
            }
        }
    }

    #[test]
    fn class_equality_modulo_closed_forms() {
        let m = Chart::new("R3", &["x", "y", "z"]).unwrap();
        let z1 = DifferentialForm::new(&m, 1, vec![(vec![2], parse("x", &m).unwrap())]).unwrap();
        // differ by the closed form d(xy) = y dx + x dy
        let closed = DifferentialForm::new(
            &m,
            1,
            vec![
                (vec![1], parse("y", &m).unwrap()),
                (vec![2], parse("x", &m).unwrap()),
            ],
        )
        .unwrap();
        let z2 = z1.add(&closed).unwrap();
        let c1 = HamiltonianClass::new(z1);
        let c2 = HamiltonianClass::new(z2);
        assert_eq!(c1.eq_mod_closed(&c2, &ctx()).unwrap(), Tri::Yes);
    }
}
