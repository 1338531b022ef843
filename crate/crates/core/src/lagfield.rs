//! First-order Lagrangian field theory on trivial bundles with global
//! coordinates: jet charts, Poincaré-Cartan forms, regularity,
//! Euler-Lagrange residuals, Noether currents, and Noether-type
//! submanifold verification.
//!
//! Conventions, fixed once and validated against the mechanics case:
//!
//! * jet chart order: base `x^1..x^k`, fibers `u^1..u^f`, then velocities
//!   `u^a_μ` grouped by fiber (names `"{fiber}_{base}"`);
//! * volume form `ω_vol = dx^1 ∧ … ∧ dx^k`;
//! * `Θ_L = Σ_{a,μ} (∂£/∂u^a_μ)(du^a − Σ_ν u^a_ν dx^ν) ∧ i(∂_{x^μ}) ω_vol
//!   + £ ω_vol` and `Ω_L = −dΘ_L`;
//! * Euler-Lagrange residual `(∂£/∂u^a − Σ_μ d/dx^μ ∂£/∂u^a_μ)` along the
//!   prolonged section (so the flat-space residual of `£ = Σ u_μ²/2` is
//!   minus the Laplacian);
//! * Noether currents are `i(ξ̃)Θ_L`, which makes the mechanics energy
//!   current come out as `−u_t²/2`, the classical energy up to sign.

use crate::action::LieAlgebraAction;
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exterior::{interior_product, lie_derivative, DifferentialForm, MultivectorField, SmoothMap};
use crate::msgeom::{check_multisymplectic, zero_to_tri, MultisymplecticStructure};
use crate::report::Tri;
use crate::submfd::{is_momentum_type, MomentumTypeReport, Submanifold};
use crate::symexpr::ratfn::{ratfn_to_expr, to_ratfn, RatFn};
use crate::symexpr::{is_zero, ScalarExpr, ZeroCtx};

/// A first-order Lagrangian system on the trivial bundle
/// `R^k × R^f -> R^k`, carried by its first jet chart.
#[derive(Debug, Clone)]
pub struct LagrangianSystem {
    base: Chart,
    jet: Chart,
    k: usize,
    f: usize,
    lagrangian: ScalarExpr,
    theta: DifferentialForm,
    omega: DifferentialForm,
    ms: MultisymplecticStructure,
}

impl LagrangianSystem {
    pub fn new<S: AsRef<str>>(
        name: &str,
        base_names: &[S],
        fiber_names: &[S],
        lagrangian_text: &str,
        ctx: &ZeroCtx,
    ) -> Result<LagrangianSystem> {
        let k = base_names.len();
        let f = fiber_names.len();
        if k == 0 || f == 0 {
            return Err(Error::invalid(
                "lagrangian system",
                "need at least one base and one fiber coordinate",
            ));
        }
        let mut jet_coords: Vec<String> = Vec::with_capacity(k + f + k * f);
        jet_coords.extend(base_names.iter().map(|s| s.as_ref().to_string()));
        jet_coords.extend(fiber_names.iter().map(|s| s.as_ref().to_string()));
        for a in fiber_names {
            for mu in base_names {
                jet_coords.push(format!("{}_{}", a.as_ref(), mu.as_ref()));
            }
        }
        let base = Chart::new(&format!("{name}_base"), base_names)?;
        let jet = Chart::new(&format!("{name}_jet"), &jet_coords)?;
        let lagrangian = crate::symexpr::parse(lagrangian_text, &jet)?;
        Self::from_parts(base, jet, k, f, lagrangian, ctx)
    }

    pub fn from_parts(
        base: Chart,
        jet: Chart,
        k: usize,
        f: usize,
        lagrangian: ScalarExpr,
        ctx: &ZeroCtx,
    ) -> Result<LagrangianSystem> {
        jet.check_expr(&lagrangian)?;
        let theta = poincare_cartan_theta(&jet, k, f, &lagrangian)?;
        let omega = theta.d()?.neg();
        // Ω_L = d(−Θ_L), so −Θ_L is the potential of the structure.
        let ms = MultisymplecticStructure::new(omega.clone(), Some(theta.neg()), ctx)?;
        Ok(LagrangianSystem {
            base,
            jet,
            k,
            f,
            lagrangian,
            theta,
            omega,
            ms,
        })
    }

    pub fn base_chart(&self) -> &Chart {
        &self.base
    }

    pub fn jet_chart(&self) -> &Chart {
        &self.jet
    }

    pub fn base_dim(&self) -> usize {
        self.k
    }

    pub fn fiber_dim(&self) -> usize {
        self.f
    }

    pub fn lagrangian(&self) -> &ScalarExpr {
        &self.lagrangian
    }

    /// The Poincaré-Cartan forms `(Θ_L, Ω_L)`.
    pub fn poincare_cartan(&self) -> (&DifferentialForm, &DifferentialForm) {
        (&self.theta, &self.omega)
    }

    pub fn ms(&self) -> &MultisymplecticStructure {
        &self.ms
    }

    /// 0-based jet-chart position of the velocity `u^a_μ`.
    pub fn vel_index(&self, a: usize, mu: usize) -> usize {
        self.k + self.f + a * self.k + mu
    }

    fn jet_coord(&self, i: usize) -> &std::sync::Arc<str> {
        self.jet.coord(i)
    }
}

/// The adopted coordinate formula for `Θ_L`.
fn poincare_cartan_theta(
    jet: &Chart,
    k: usize,
    f: usize,
    lagrangian: &ScalarExpr,
) -> Result<DifferentialForm> {
    let vol_indices: Vec<u32> = (1..=k as u32).collect();
    let vol = DifferentialForm::basis(jet, &vol_indices)?;
    let mut theta = vol.scale(lagrangian)?;
    for a in 0..f {
        // du^a − Σ_ν u^a_ν dx^ν  (the contact form of fiber a)
        let mut contact_terms: Vec<(Vec<u32>, ScalarExpr)> =
            vec![(vec![(k + a + 1) as u32], ScalarExpr::one())];
        for nu in 0..k {
            let vel = jet.coord(k + f + a * k + nu);
            contact_terms.push((
                vec![(nu + 1) as u32],
                ScalarExpr::sym_arc(vel.clone()).neg(),
            ));
        }
        let contact = DifferentialForm::new(jet, 1, contact_terms)?;
        for mu in 0..k {
            let dldv = lagrangian.differentiate(jet.coord(k + f + a * k + mu))?;
            if dldv.is_zero_literal() {
                continue;
            }
            let mu_vec = MultivectorField::basis_vector(jet, mu as u32 + 1)?;
            let slot = interior_product(&mu_vec, &vol)?;
            theta = theta.add(&contact.wedge(&slot)?.scale(&dldv)?)?;
        }
    }
    Ok(theta)
}

/// A field section: one component per fiber coordinate, on the base chart.
#[derive(Debug, Clone)]
pub struct FieldSection {
    components: Vec<ScalarExpr>,
}

impl FieldSection {
    pub fn new(ls: &LagrangianSystem, components: Vec<ScalarExpr>) -> Result<FieldSection> {
        if components.len() != ls.fiber_dim() {
            return Err(Error::invalid(
                "field section",
                format!("expected {} components", ls.fiber_dim()),
            ));
        }
        for c in &components {
            ls.base_chart().check_expr(c)?;
        }
        Ok(FieldSection { components })
    }

    pub fn components(&self) -> &[ScalarExpr] {
        &self.components
    }
}

/// The first-jet prolongation `j¹φ: base -> jet`,
/// `x ↦ (x, φ^a(x), ∂φ^a/∂x^μ)`.
pub fn prolong(ls: &LagrangianSystem, phi: &FieldSection) -> Result<SmoothMap> {
    let mut comps: Vec<ScalarExpr> = Vec::with_capacity(ls.jet_chart().dim());
    for name in ls.base_chart().coords() {
        comps.push(ScalarExpr::sym_arc(name.clone()));
    }
    comps.extend(phi.components().iter().cloned());
    for a in 0..ls.fiber_dim() {
        for mu in 0..ls.base_dim() {
            comps.push(phi.components()[a].differentiate(ls.base_chart().coord(mu))?);
        }
    }
    SmoothMap::new(ls.base_chart(), ls.jet_chart(), comps)
}

#[derive(Debug, Clone)]
pub struct RegularityReport {
    /// 1-nondegeneracy of `Ω_L`.
    pub omega_nondegenerate: Tri,
    /// `det(∂²£/∂u^a_μ ∂u^b_ν) ≠ 0`.
    pub hessian_nondegenerate: Tri,
    /// The two criteria returned the same verdict.
    pub agree: Tri,
}

/// Regularity: 1-nondegeneracy of `Ω_L`, cross-checked against the
/// velocity Hessian criterion.
pub fn regularity(ls: &LagrangianSystem, ctx: &ZeroCtx) -> Result<RegularityReport> {
    let report = check_multisymplectic(ls.ms().omega(), ctx)?;
    let omega_nondegenerate = report.nondegenerate;

    let n = ls.base_dim() * ls.fiber_dim();
    let mut hessian: Vec<Vec<RatFn>> = vec![vec![RatFn::zero(); n]; n];
    for a in 0..ls.fiber_dim() {
        for mu in 0..ls.base_dim() {
            let row = a * ls.base_dim() + mu;
            let first = ls
                .lagrangian()
                .differentiate(ls.jet_coord(ls.vel_index(a, mu)))?;
            for b in 0..ls.fiber_dim() {
                for nu in 0..ls.base_dim() {
                    let col = b * ls.base_dim() + nu;
                    let second = first.differentiate(ls.jet_coord(ls.vel_index(b, nu)))?;
                    hessian[row][col] = to_ratfn(&second)?;
                }
            }
        }
    }
    let det = det_ratfn(&hessian)?;
    let hessian_nondegenerate = zero_to_tri(is_zero(&ratfn_to_expr(&det), ctx)?).negate();
    let agree = match (omega_nondegenerate, hessian_nondegenerate) {
        (Tri::Undecided, _) | (_, Tri::Undecided) => Tri::Undecided,
        (x, y) if x == y => Tri::Yes,
        _ => Tri::No,
    };
    Ok(RegularityReport {
        omega_nondegenerate,
        hessian_nondegenerate,
        agree,
    })
}

/// Cofactor determinant; matrices here are small (k·f square).
fn det_ratfn(m: &[Vec<RatFn>]) -> Result<RatFn> {
    let n = m.len();
    if n == 0 {
        return Ok(RatFn::one());
    }
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut det = RatFn::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<RatFn>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|c| *c != j)
                    .map(|c| m[i][c].clone())
                    .collect()
            })
            .collect();
        let mut term = m[0][j].mul(&det_ratfn(&minor)?);
        if j % 2 == 1 {
            term = term.neg();
        }
        det = det.add(&term);
    }
    Ok(det)
}

#[derive(Debug, Clone)]
pub struct EulerLagrangeReport {
    /// One residual per fiber coordinate, evaluated along the prolongation.
    pub residuals: Vec<ScalarExpr>,
    pub is_solution: Tri,
    /// `(j¹φ)* i(X)Ω_L = 0` over the coordinate fields `X`.
    pub intrinsic: Tri,
    /// A coordinate direction witnessing failure, when one exists.
    pub violating_direction: Option<String>,
    /// The coordinate residuals and the intrinsic criterion agree.
    pub formulations_agree: Tri,
}

/// Euler-Lagrange residuals along a section, with the intrinsic pullback
/// criterion checked against the coordinate formulation.
pub fn euler_lagrange_residual(
    ls: &LagrangianSystem,
    phi: &FieldSection,
    ctx: &ZeroCtx,
) -> Result<EulerLagrangeReport> {
    let j1 = prolong(ls, phi)?;
    let mut residuals = Vec::with_capacity(ls.fiber_dim());
    for a in 0..ls.fiber_dim() {
        let mut acc = to_ratfn(&j1.apply_scalar(
            &ls.lagrangian().differentiate(ls.jet_coord(ls.base_dim() + a))?,
        )?)?;
        for mu in 0..ls.base_dim() {
            let momentum = ls
                .lagrangian()
                .differentiate(ls.jet_coord(ls.vel_index(a, mu)))?;
            let along = j1.apply_scalar(&momentum)?;
            let total = along.differentiate(ls.base_chart().coord(mu))?;
            acc = acc.sub(&to_ratfn(&total)?);
        }
        residuals.push(ratfn_to_expr(&acc));
    }
    let mut is_solution = Tri::Yes;
    for r in &residuals {
        is_solution = is_solution.and(zero_to_tri(is_zero(r, ctx)?));
    }
    // Intrinsic criterion over the spanning coordinate fields.
    let mut intrinsic = Tri::Yes;
    let mut violating_direction = None;
    for i in 0..ls.jet_chart().dim() {
        let x = MultivectorField::basis_vector(ls.jet_chart(), i as u32 + 1)?;
        let pulled = j1.pullback(&interior_product(&x, ls.ms().omega())?)?;
        let v = zero_to_tri(pulled.zero_verdict(ctx)?);
        if v == Tri::No && violating_direction.is_none() {
            violating_direction = Some(ls.jet_coord(i).to_string());
        }
        intrinsic = intrinsic.and(v);
    }
    let formulations_agree = match (is_solution, intrinsic) {
        (Tri::Undecided, _) | (_, Tri::Undecided) => Tri::Undecided,
        (x, y) if x == y => Tri::Yes,
        _ => Tri::No,
    };
    Ok(EulerLagrangeReport {
        residuals,
        is_solution,
        intrinsic,
        violating_direction,
        formulations_agree,
    })
}

#[derive(Debug, Clone)]
pub struct SymmetryReport {
    /// `L(ξ̃)Θ_L = 0`.
    pub theta_invariant: Tri,
    /// Strict invariance `ξ̃(£) = 0` plus vanishing divergence of the base
    /// components (the recorded convention).
    pub lagrangian_invariant: Tri,
}

pub fn symmetry_check(
    ls: &LagrangianSystem,
    xi: &MultivectorField,
    ctx: &ZeroCtx,
) -> Result<SymmetryReport> {
    ls.jet_chart().expect_same(xi.chart())?;
    let theta_invariant = zero_to_tri(lie_derivative(xi, &ls.theta)?.zero_verdict(ctx)?);
    let applied = xi.apply_to_scalar(ls.lagrangian())?;
    let mut lagrangian_invariant = zero_to_tri(is_zero(&applied, ctx)?);
    let comps = xi.components()?;
    let mut div = RatFn::zero();
    for mu in 0..ls.base_dim() {
        div = div.add(&to_ratfn(&comps[mu].differentiate(ls.base_chart().coord(mu))?)?);
    }
    lagrangian_invariant =
        lagrangian_invariant.and(zero_to_tri(is_zero(&ratfn_to_expr(&div), ctx)?));
    Ok(SymmetryReport {
        theta_invariant,
        lagrangian_invariant,
    })
}

/// The Noether current `i(ξ̃)Θ_L`, with the symmetry report attached (a
/// warning rather than an error when the check does not pass).
pub fn noether_current(
    ls: &LagrangianSystem,
    xi: &MultivectorField,
    ctx: &ZeroCtx,
) -> Result<(DifferentialForm, SymmetryReport)> {
    let report = symmetry_check(ls, xi, ctx)?;
    Ok((interior_product(xi, &ls.theta)?, report))
}

#[derive(Debug, Clone)]
pub struct ConservationReport {
    pub conserved: Tri,
    /// `(j¹φ)* i(ξ̃)Θ_L`, the current restricted to the base.
    pub current_on_base: DifferentialForm,
    /// Its exterior derivative, the diagnostic when not conserved.
    pub d_current: DifferentialForm,
}

/// Noether conservation along a section: `d((j¹φ)* i(ξ̃)Θ_L) = 0` for
/// solutions of the field equations.
pub fn noether_conservation(
    ls: &LagrangianSystem,
    xi: &MultivectorField,
    phi: &FieldSection,
    ctx: &ZeroCtx,
) -> Result<ConservationReport> {
    let (current, _) = noether_current(ls, xi, ctx)?;
    let j1 = prolong(ls, phi)?;
    let current_on_base = j1.pullback(&current)?;
    let d_current = current_on_base.d()?;
    let conserved = zero_to_tri(d_current.zero_verdict(ctx)?);
    Ok(ConservationReport {
        conserved,
        current_on_base,
        d_current,
    })
}

/// First-jet prolongation of a projectable vector field with base
/// components `ξ^μ(x)` and fiber components `ξ^a(x, u)`:
/// the velocity component is `D_μ ξ^a − Σ_ν u^a_ν ∂_μ ξ^ν` with
/// `D_μ = ∂_μ + Σ_b u^b_μ ∂_{u^b}`.
pub fn prolong_vector(
    ls: &LagrangianSystem,
    base_components: &[ScalarExpr],
    fiber_components: &[ScalarExpr],
) -> Result<MultivectorField> {
    if base_components.len() != ls.base_dim() || fiber_components.len() != ls.fiber_dim() {
        return Err(Error::invalid(
            "prolongation",
            "component counts must match base and fiber dimensions",
        ));
    }
    let jet = ls.jet_chart().clone();
    for c in base_components {
        ls.base_chart().check_expr(c)?;
    }
    for c in fiber_components {
        for s in c.symbols() {
            let i = jet.coord_index(&s).ok_or_else(|| Error::UnknownSymbol(s.to_string()))?;
            if i >= ls.base_dim() + ls.fiber_dim() {
                return Err(Error::invalid(
                    "prolongation",
                    "fiber components may depend on base and fiber coordinates only",
                ));
            }
        }
    }
    let mut comps: Vec<ScalarExpr> = Vec::with_capacity(jet.dim());
    comps.extend(base_components.iter().cloned());
    comps.extend(fiber_components.iter().cloned());
    for a in 0..ls.fiber_dim() {
        for mu in 0..ls.base_dim() {
            // D_μ ξ^a
            let mut acc = to_ratfn(&fiber_components[a].differentiate(ls.base_chart().coord(mu))?)?;
            for b in 0..ls.fiber_dim() {
                let dua = fiber_components[a].differentiate(jet.coord(ls.base_dim() + b))?;
                if dua.is_zero_literal() {
                    continue;
                }
                let vel = ScalarExpr::sym_arc(jet.coord(ls.vel_index(b, mu)).clone());
                acc = acc.add(&to_ratfn(&vel.mul(&dua))?);
            }
            // − Σ_ν u^a_ν ∂_μ ξ^ν
            for nu in 0..ls.base_dim() {
                let dxi = base_components[nu].differentiate(ls.base_chart().coord(mu))?;
                if dxi.is_zero_literal() {
                    continue;
                }
                let vel = ScalarExpr::sym_arc(jet.coord(ls.vel_index(a, nu)).clone());
                acc = acc.sub(&to_ratfn(&vel.mul(&dxi))?);
            }
            comps.push(ratfn_to_expr(&acc));
        }
    }
    MultivectorField::from_components(&jet, &comps)
}

#[derive(Debug, Clone)]
pub struct NoetherSubmanifoldReport {
    /// The section satisfies the field equations (intrinsic certificate).
    pub solution_certified: Tri,
    /// Momentum-type verification of `Im j¹φ` inside the jet chart.
    pub image: MomentumTypeReport,
    /// Whether the momentum-type claim for prolonged solutions applies.
    pub applicable: bool,
    /// For a second section agreeing on a declared Cauchy submanifold.
    pub second: Option<SecondSolutionReport>,
}

#[derive(Debug, Clone)]
pub struct SecondSolutionReport {
    pub matches_on_cauchy: Tri,
    pub second_solution_certified: Tri,
    pub second_image_momentum_type: Tri,
}

/// Verify that the image of a prolonged solution is a momentum-type
/// submanifold for a symmetry algebra on the jet chart, and optionally that
/// a second solution with the same prolonged values on a declared Cauchy
/// submanifold satisfies the same pullback conditions. No uniqueness claim
/// is made.
pub fn noether_submanifold_check(
    ls: &LagrangianSystem,
    action: &LieAlgebraAction,
    phi: &FieldSection,
    second: Option<(&FieldSection, &SmoothMap)>,
    ctx: &ZeroCtx,
) -> Result<NoetherSubmanifoldReport> {
    ls.jet_chart().expect_same(action.chart())?;
    let el = euler_lagrange_residual(ls, phi, ctx)?;
    let j1 = prolong(ls, phi)?;
    let sub = Submanifold::new(j1.clone(), ctx)?;
    let image = is_momentum_type(&sub, action, ctx)?;
    let second = match second {
        None => None,
        Some((psi, cauchy)) => {
            cauchy.target().expect_same(ls.base_chart())?;
            let j1_psi = prolong(ls, psi)?;
            let through_phi = j1.compose(cauchy)?;
            let through_psi = j1_psi.compose(cauchy)?;
            let mut matches_on_cauchy = Tri::Yes;
            for (a, b) in through_phi
                .components()
                .iter()
                .zip(through_psi.components())
            {
                matches_on_cauchy =
                    matches_on_cauchy.and(zero_to_tri(is_zero(&a.sub(b), ctx)?));
            }
            let el2 = euler_lagrange_residual(ls, psi, ctx)?;
            let sub2 = Submanifold::new(j1_psi, ctx)?;
            let image2 = is_momentum_type(&sub2, action, ctx)?;
            Some(SecondSolutionReport {
                matches_on_cauchy,
                second_solution_certified: el2.is_solution,
                second_image_momentum_type: image2.momentum_type,
            })
        }
    };
    Ok(NoetherSubmanifoldReport {
        solution_certified: el.intrinsic,
        applicable: el.intrinsic == Tri::Yes,
        image,
        second,
    })
}
