//! Momentum-type submanifolds: the checkable integral-submanifold
//! conditions, the binomial dimension classification, characteristic
//! kernels, and the reduction identity `π*ω̃ = ω`.
//!
//! Quotients are user-declared charts with a projection and a section; the
//! engine verifies the algebraic content (basicness, the pullback identity,
//! closedness) rather than constructing quotient manifolds. Maximality is
//! replaced by the reportable dimension classification.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::action::LieAlgebraAction;
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exterior::{binomial, interior_product, k_subsets, lie_derivative};
use crate::exterior::{DifferentialForm, MultivectorField, SmoothMap};
use crate::linalg::{self, RfMatrix, SolveOutcome};
use crate::msgeom::zero_to_tri;
use crate::report::Tri;
use crate::symexpr::ratfn::to_ratfn;
use crate::symexpr::{evaluate, evaluate_rational, ScalarExpr, ZeroCtx, ZeroVerdict};

pub type SamplePoint = BTreeMap<Arc<str>, BigRational>;

/// An embedded submanifold: a source chart and an embedding map whose
/// Jacobian has full rank at the seeded sample points (reported).
#[derive(Debug, Clone)]
pub struct Submanifold {
    source: Chart,
    embedding: SmoothMap,
    immersion_points: Vec<SamplePoint>,
}

/// Number of seeded sample points per rank check.
pub const SUBMANIFOLD_SAMPLE_POINTS: usize = 8;

impl Submanifold {
    pub fn new(embedding: SmoothMap, ctx: &ZeroCtx) -> Result<Submanifold> {
        let source = embedding.source().clone();
        let s = source.dim();
        if embedding.target().dim() < s {
            return Err(Error::invalid(
                "submanifold",
                "source dimension exceeds the ambient dimension",
            ));
        }
        let jac = embedding.jacobian()?;
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0x7375626d);
        let symbols: Vec<Arc<str>> = source.coords().to_vec();
        let mut points = Vec::new();
        let mut attempts = 0;
        while points.len() < SUBMANIFOLD_SAMPLE_POINTS
            && attempts < SUBMANIFOLD_SAMPLE_POINTS * 40
        {
            attempts += 1;
            let point = ctx.draw_point(&mut rng, &symbols);
            match matrix_rank_at(&jac, &point, ctx) {
                Ok(rank) if rank == s => points.push(point),
                _ => {}
            }
        }
        if points.is_empty() {
            return Err(Error::invalid(
                "submanifold",
                "immersion check failed: the Jacobian is rank-deficient at every sampled point",
            ));
        }
        Ok(Submanifold {
            source,
            embedding,
            immersion_points: points,
        })
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn ambient(&self) -> &Chart {
        self.embedding.target()
    }

    pub fn embedding(&self) -> &SmoothMap {
        &self.embedding
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn immersion_points(&self) -> &[SamplePoint] {
        &self.immersion_points
    }

    /// Decide whether an ambient field is tangent along the submanifold by
    /// solving `Jac(j_S) · w = ξ̃ ∘ j_S` over the source chart; a solution
    /// is the induced field with `j_{S*} w = ξ̃|_S`.
    pub fn tangency(
        &self,
        field: &MultivectorField,
        ctx: &ZeroCtx,
    ) -> Result<TangencyOutcome> {
        self.ambient().expect_same(field.chart())?;
        if field.degree() != 1 {
            return Err(Error::Degree("tangency needs a degree-1 field".to_string()));
        }
        let jac = self.embedding.jacobian()?;
        let rows = jac
            .iter()
            .map(|row| row.iter().map(to_ratfn).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let matrix = RfMatrix::from_rows(rows);
        let comps = field.components()?;
        let rhs = comps
            .iter()
            .map(|c| to_ratfn(&self.embedding.apply_scalar(c)?))
            .collect::<Result<Vec<_>>>()?;
        match linalg::solve(&matrix, &rhs, ctx)? {
            SolveOutcome::Solution { particular, .. } => {
                let comps: Vec<ScalarExpr> = particular
                    .iter()
                    .map(crate::symexpr::ratfn::ratfn_to_expr)
                    .collect();
                let induced = MultivectorField::from_components(&self.source, &comps)?;
                Ok(TangencyOutcome::Tangent { induced })
            }
            SolveOutcome::Inconsistent { residual } => {
                Ok(TangencyOutcome::NotTangent { residual })
            }
            SolveOutcome::Undecided { reason } => Ok(TangencyOutcome::Undecided { reason }),
        }
    }
}

#[derive(Debug, Clone)]
pub enum TangencyOutcome {
    Tangent { induced: MultivectorField },
    NotTangent { residual: ScalarExpr },
    Undecided { reason: String },
}

/// Evaluate a matrix of expressions at a rational point and compute its
/// rank: exactly when every entry evaluates rationally, numerically with
/// the configured tolerance otherwise.
fn matrix_rank_at(
    entries: &[Vec<ScalarExpr>],
    point: &SamplePoint,
    ctx: &ZeroCtx,
) -> Result<usize> {
    let rational: std::result::Result<Vec<Vec<BigRational>>, Error> = entries
        .iter()
        .map(|row| row.iter().map(|e| evaluate_rational(e, point)).collect())
        .collect();
    match rational {
        Ok(rows) => Ok(linalg::rational_rank(rows)),
        Err(_) => {
            let rows: Vec<Vec<f64>> = entries
                .iter()
                .map(|row| row.iter().map(|e| evaluate(e, point)).collect())
                .collect::<Result<_>>()?;
            Ok(linalg::f64_rank(rows, ctx.tolerance))
        }
    }
}

/// Dimension classification for integral submanifolds of the system
/// `{i(ξ̃)Ω}`: admissibility `C(s,k) <= C(m,k) − n`, the optimal dimension
/// (the largest admissible `q <= m`), and the maximal (equality) case.
///
/// For `k = 1` the equality case reduces to `s = m − n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionReport {
    pub admissible: bool,
    pub optimal_s: Option<u64>,
    pub maximal: bool,
}

pub fn classify_dimension(m: u64, k: u64, n: u64, s: u64) -> Result<DimensionReport> {
    if k >= m {
        return Err(Error::Domain(format!(
            "need 1 <= k+1 <= m, got k = {k}, m = {m}"
        )));
    }
    if s > m {
        return Err(Error::Domain(format!("need 0 <= s <= m, got s = {s}")));
    }
    let budget = binomial(m, k) as i128 - n as i128;
    let admissible = (binomial(s, k) as i128) <= budget;
    let optimal_s = (0..=m).rev().find(|q| (binomial(*q, k) as i128) <= budget);
    let maximal = (binomial(s, k) as i128) == budget;
    Ok(DimensionReport {
        admissible,
        optimal_s,
        maximal,
    })
}

/// Verdict for one generator of the exterior differential system.
#[derive(Debug, Clone)]
pub struct GeneratorCondition {
    /// `j_S* i(ξ̃)Ω = 0`.
    pub pullback_vanishes: Tri,
    pub tangent: Tri,
    pub induced: Option<MultivectorField>,
    /// For tangent generators: `i(ξ̃_S)(j_S*Ω) = 0`.
    pub induced_contraction_vanishes: Option<Tri>,
}

#[derive(Debug, Clone)]
pub struct MomentumTypeReport {
    pub per_generator: Vec<GeneratorCondition>,
    /// Condition 2 of the definition over the whole algebra.
    pub momentum_type: Tri,
    pub isotropy_indices: Vec<usize>,
    pub dimension: DimensionReport,
}

/// Check the integral-submanifold condition `j_S* i(ξ̃_i)Ω = 0` for every
/// generator, compute the isotropy subalgebra (generators tangent to `S`
/// with their induced fields), and attach the dimension classification.
/// Closedness of `S` is declared by construction; maximality is reported
/// only through the dimension classification.
pub fn is_momentum_type(
    sub: &Submanifold,
    action: &LieAlgebraAction,
    ctx: &ZeroCtx,
) -> Result<MomentumTypeReport> {
    sub.ambient().expect_same(action.chart())?;
    let omega = action.ms().omega();
    let omega_s = sub.embedding().pullback(omega)?;
    let mut per_generator = Vec::new();
    let mut isotropy_indices = Vec::new();
    for (i, gen) in action.generators().iter().enumerate() {
        let pulled = sub.embedding().pullback(&interior_product(gen, omega)?)?;
        let pullback_vanishes = zero_to_tri(pulled.zero_verdict(ctx)?);
        let (tangent, induced) = match sub.tangency(gen, ctx)? {
            TangencyOutcome::Tangent { induced } => (Tri::Yes, Some(induced)),
            TangencyOutcome::NotTangent { .. } => (Tri::No, None),
            TangencyOutcome::Undecided { .. } => (Tri::Undecided, None),
        };
        let induced_contraction_vanishes = match &induced {
            Some(v) if omega_s.degree() >= 1 => {
                Some(zero_to_tri(interior_product(v, &omega_s)?.zero_verdict(ctx)?))
            }
            _ => None,
        };
        if tangent == Tri::Yes {
            isotropy_indices.push(i);
        }
        per_generator.push(GeneratorCondition {
            pullback_vanishes,
            tangent,
            induced,
            induced_contraction_vanishes,
        });
    }
    let momentum_type = Tri::all(per_generator.iter().map(|g| g.pullback_vanishes));
    let dimension = classify_dimension(
        sub.ambient().dim() as u64,
        action.ms().k() as u64,
        action.n() as u64,
        sub.dim() as u64,
    )?;
    Ok(MomentumTypeReport {
        per_generator,
        momentum_type,
        isotropy_indices,
        dimension,
    })
}

#[derive(Debug, Clone)]
pub struct CharacteristicKernelReport {
    pub omega_s: DifferentialForm,
    /// `dim S < k+1`: the restricted form vanishes identically.
    pub trivial_by_dimension: bool,
    pub kernel_rank_at_samples: Vec<(SamplePoint, usize)>,
    /// Kernel basis at the first sample point (coefficients of `∂_{y_t}`).
    pub kernel_basis_at_first_sample: Vec<Vec<BigRational>>,
    /// Every induced isotropy field lies in the kernel of `ω_S`.
    pub isotropy_contained: Tri,
}

/// The characteristic distribution of `ω_S = j_S*Ω` at sampled points, and
/// the verification that induced isotropy fields lie inside it.
pub fn characteristic_kernel(
    sub: &Submanifold,
    action: &LieAlgebraAction,
    ctx: &ZeroCtx,
) -> Result<CharacteristicKernelReport> {
    sub.ambient().expect_same(action.chart())?;
    let omega = action.ms().omega();
    let k = action.ms().k();
    let s = sub.dim();
    let omega_s = sub.embedding().pullback(omega)?;
    let trivial = s < k + 1;

    let mut kernel_rank_at_samples = Vec::new();
    let mut kernel_basis_at_first_sample = Vec::new();
    if !trivial {
        // rows: contraction i(∂_t)ω_S expanded over k-subsets of the source.
        let cols = k_subsets(s as u32, k);
        let mut entry_exprs: Vec<Vec<ScalarExpr>> = Vec::with_capacity(s);
        for t in 0..s {
            let basis = MultivectorField::basis_vector(sub.source(), t as u32 + 1)?;
            let contracted = interior_product(&basis, &omega_s)?;
            entry_exprs.push(cols.iter().map(|j| contracted.coeff(j)).collect());
        }
        for point in sub.immersion_points() {
            let rational: std::result::Result<Vec<Vec<BigRational>>, Error> = entry_exprs
                .iter()
                .map(|row| row.iter().map(|e| evaluate_rational(e, point)).collect())
                .collect();
            match rational {
                Ok(rows) => {
                    let rank = linalg::rational_rank(rows.clone());
                    kernel_rank_at_samples.push((point.clone(), s - rank));
                    if kernel_basis_at_first_sample.is_empty() {
                        // kernel of X ↦ i(X)ω_S: nullspace of the transpose
                        let cols_n = rows.first().map(|r| r.len()).unwrap_or(0);
                        let transpose: Vec<Vec<BigRational>> = (0..cols_n)
                            .map(|j| rows.iter().map(|r| r[j].clone()).collect())
                            .collect();
                        kernel_basis_at_first_sample = linalg::rational_nullspace(transpose);
                    }
                }
                Err(_) => {
                    let rows: Vec<Vec<f64>> = entry_exprs
                        .iter()
                        .map(|row| row.iter().map(|e| evaluate(e, point)).collect())
                        .collect::<Result<_>>()?;
                    let rank = linalg::f64_rank(rows, ctx.tolerance);
                    kernel_rank_at_samples.push((point.clone(), s - rank));
                }
            }
        }
    }

    let mut isotropy_contained = Tri::Yes;
    for gen in action.generators() {
        if let TangencyOutcome::Tangent { induced } = sub.tangency(gen, ctx)? {
            if omega_s.degree() >= 1 {
                let v = zero_to_tri(interior_product(&induced, &omega_s)?.zero_verdict(ctx)?);
                isotropy_contained = isotropy_contained.and(v);
            }
        }
    }
    Ok(CharacteristicKernelReport {
        omega_s,
        trivial_by_dimension: trivial,
        kernel_rank_at_samples,
        kernel_basis_at_first_sample,
        isotropy_contained,
    })
}

/// User-declared reduction data: the submanifold, which action generators
/// form the vertical (isotropy) directions, and a quotient chart with a
/// projection and a local section.
#[derive(Debug, Clone)]
pub struct ReductionData {
    pub sub: Submanifold,
    pub isotropy: Vec<usize>,
    pub quotient: Chart,
    pub projection: SmoothMap,
    pub section: SmoothMap,
}

impl ReductionData {
    pub fn new(
        sub: Submanifold,
        isotropy: Vec<usize>,
        quotient: Chart,
        projection: SmoothMap,
        section: SmoothMap,
        ctx: &ZeroCtx,
    ) -> Result<ReductionData> {
        projection.source().expect_same(sub.source())?;
        projection.target().expect_same(&quotient)?;
        section.source().expect_same(&quotient)?;
        section.target().expect_same(sub.source())?;
        // projection ∘ section = identity on the quotient
        let round_trip = projection.compose(&section)?;
        for (comp, name) in round_trip.components().iter().zip(quotient.coords()) {
            let diff = comp.sub(&ScalarExpr::sym_arc(name.clone()));
            match crate::symexpr::is_zero(&diff, ctx)? {
                ZeroVerdict::Zero => {}
                v => {
                    return Err(Error::SectionMismatch(format!(
                        "projection∘section − id is {v} in component `{name}`"
                    )))
                }
            }
        }
        // projection is a submersion at the sampled points
        let jac = projection.jacobian()?;
        let mut ok = false;
        for point in sub.immersion_points() {
            if matrix_rank_at(&jac, point, ctx)? == quotient.dim() {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::invalid(
                "reduction",
                "projection is not a submersion at any sampled point",
            ));
        }
        Ok(ReductionData {
            sub,
            isotropy,
            quotient,
            projection,
            section,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ReduceReport {
    pub omega_tilde: DifferentialForm,
    pub trivial_by_dimension: bool,
    /// Vertical contractions and vertical Lie derivatives of `ω_S` vanish.
    pub basic_certified: Tri,
    /// `π*ω̃ − j_S*Ω = 0`.
    pub pullback_identity: Tri,
    /// `dω̃ = 0`.
    pub d_closed: Tri,
    /// Uniqueness follows from the certified identity plus the submersion
    /// rank (injectivity of `π*`); recorded as a note, not a new check.
    pub uniqueness_note: String,
}

/// The reduction step: certify that `ω_S` is basic for the declared
/// vertical directions, transport it through the section, and certify the
/// defining identity `π*ω̃ = ω_S` together with `dω̃ = 0`.
pub fn reduce(
    rd: &ReductionData,
    action: &LieAlgebraAction,
    ctx: &ZeroCtx,
) -> Result<ReduceReport> {
    rd.sub.ambient().expect_same(action.chart())?;
    let mt = is_momentum_type(&rd.sub, action, ctx)?;
    if mt.momentum_type == Tri::No {
        return Err(Error::invalid(
            "reduction",
            "the submanifold is not momentum-type: a pullback condition fails",
        ));
    }
    let k = action.ms().k();
    let omega_s = rd.sub.embedding().pullback(action.ms().omega())?;
    let trivial = rd.sub.dim() < k + 1;

    let mut basic = Tri::Yes;
    for &i in &rd.isotropy {
        let gen = action.generators().get(i).ok_or_else(|| {
            Error::invalid("reduction", format!("isotropy index {i} out of range"))
        })?;
        let induced = match rd.sub.tangency(gen, ctx)? {
            TangencyOutcome::Tangent { induced } => induced,
            TangencyOutcome::NotTangent { .. } => {
                return Err(Error::invalid(
                    "reduction",
                    format!("declared isotropy generator {i} is not tangent to the submanifold"),
                ))
            }
            TangencyOutcome::Undecided { reason } => return Err(Error::Uncertifiable(reason)),
        };
        if omega_s.degree() >= 1 {
            match interior_product(&induced, &omega_s)?.zero_verdict(ctx)? {
                ZeroVerdict::Zero => {}
                ZeroVerdict::NonZero => {
                    return Err(Error::NotBasic(format!(
                        "i(ξ̃_S)ω_S ≠ 0 for generator {i}: {}",
                        interior_product(&induced, &omega_s)?
                    )))
                }
                ZeroVerdict::Undecided => basic = basic.and(Tri::Undecided),
            }
            match lie_derivative(&induced, &omega_s)?.zero_verdict(ctx)? {
                ZeroVerdict::Zero => {}
                ZeroVerdict::NonZero => {
                    return Err(Error::NotBasic(format!(
                        "L(ξ̃_S)ω_S ≠ 0 for generator {i}"
                    )))
                }
                ZeroVerdict::Undecided => basic = basic.and(Tri::Undecided),
            }
        }
    }

    let omega_tilde = rd.section.pullback(&omega_s)?;
    let pullback_identity =
        zero_to_tri(rd.projection.pullback(&omega_tilde)?.sub(&omega_s)?.zero_verdict(ctx)?);
    let d_closed = zero_to_tri(omega_tilde.d()?.zero_verdict(ctx)?);
    Ok(ReduceReport {
        omega_tilde,
        trivial_by_dimension: trivial,
        basic_certified: basic,
        pullback_identity,
        d_closed,
        uniqueness_note:
            "unique: π*ω̃ = ω_S is certified and π is a sampled submersion, so π* is injective"
                .to_string(),
    })
}

#[derive(Debug, Clone)]
pub struct SpanCheckReport {
    /// Every `i(ξ̃_i)Ω` annihilates all tangent k-vectors at the samples.
    pub inclusion: Tri,
    pub span_dims: Vec<(SamplePoint, usize)>,
    pub codimension_budget: u128,
    /// Span dimension equals `C(m,k) − C(s,k)` at every sample (the
    /// equality case of the dimension condition).
    pub equality: Tri,
}

/// Pointwise annihilator check: at sampled points of `S`, every generator
/// form `i(ξ̃_i)Ω` must pair to zero with every k-vector tangent to `S`,
/// and the span of the generator forms is compared against the codimension
/// count `C(m,k) − C(s,k)`.
pub fn momentum_eds_span_check(
    sub: &Submanifold,
    action: &LieAlgebraAction,
    ctx: &ZeroCtx,
) -> Result<SpanCheckReport> {
    sub.ambient().expect_same(action.chart())?;
    let k = action.ms().k();
    if sub.dim() < k {
        return Err(Error::Domain(format!(
            "the annihilator check needs dim S >= k = {k}"
        )));
    }
    let m = sub.ambient().dim();
    let omega = action.ms().omega();
    let ambient_subsets = k_subsets(m as u32, k);

    // Pairing with tangent k-vectors is the pullback coefficientwise.
    let mut inclusion = Tri::Yes;
    let mut pulled_forms = Vec::new();
    for gen in action.generators() {
        pulled_forms.push(sub.embedding().pullback(&interior_product(gen, omega)?)?);
    }
    for point in sub.immersion_points() {
        for pulled in &pulled_forms {
            for (_, coeff) in pulled.terms() {
                let v = evaluate(coeff, point).map(|x| x.abs() <= ctx.tolerance);
                match v {
                    Ok(true) => {}
                    Ok(false) => inclusion = inclusion.and(Tri::No),
                    Err(_) => inclusion = inclusion.and(Tri::Undecided),
                }
            }
        }
    }

    // Span of { i(ξ̃_i)Ω |_x } against the codimension budget.
    let budget = binomial(m as u64, k as u64) - binomial(sub.dim() as u64, k as u64);
    let mut span_dims = Vec::new();
    let mut equality = Tri::Yes;
    for point in sub.immersion_points() {
        let ambient_point = sub.embedding().apply_point(point).map_err(|_| {
            Error::Evaluation("embedding not rational at sample point".to_string())
        });
        let Ok(ambient_point) = ambient_point else {
            equality = equality.and(Tri::Undecided);
            continue;
        };
        let mut rows = Vec::new();
        for gen in action.generators() {
            let form = interior_product(gen, omega)?;
            let row: Result<Vec<f64>> = ambient_subsets
                .iter()
                .map(|j| evaluate(&form.coeff(j), &ambient_point))
                .collect();
            match row {
                Ok(r) => rows.push(r),
                Err(_) => {
                    equality = equality.and(Tri::Undecided);
                    continue;
                }
            }
        }
        let dim = linalg::f64_rank(rows, ctx.tolerance);
        if dim as u128 != budget {
            equality = equality.and(Tri::No);
        }
        span_dims.push((point.clone(), dim));
    }
    Ok(SpanCheckReport {
        inclusion,
        span_dims,
        codimension_budget: budget,
        equality,
    })
}
