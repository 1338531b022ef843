//! Lie-algebra actions on a multisymplectic chart: classification,
//! comomentum and momentum maps, the Poissonian defect, and equivariance
//! checks against supplied group-element samples.
//!
//! Groups enter only through (i) Lie-algebra data — a basis of fundamental
//! vector fields with structure constants — and (ii) optional finite samples
//! `(Φ_g, Ad_g)`. The structure constants satisfy
//! `[ξ̃_i, ξ̃_j] = σ · Σ_l c^l_{ij} ξ̃_l` with a declared sign `σ ∈ {+1, −1}`;
//! the default `σ = −1` is the usual anti-homomorphism convention for
//! fundamental fields of a left action, under which the sample convention
//! is `TΦ_g ∘ ξ̃_i = (Ad_g ξ_i)~ ∘ Φ_g`.
//!
//! Exactness detection is constructive only: a potential contraction
//! `ζ = −i(ξ̃)θ` when the generator preserves a supplied potential, else the
//! radial homotopy operator on the star-shaped chart. `Undecided` is a
//! legitimate outcome.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigRational, Zero};

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exterior::{
    bracket as vf_bracket, interior_product, lie_derivative, DifferentialForm, MultivectorField,
    SmoothMap,
};
use crate::msgeom::{zero_to_tri, MultisymplecticStructure};
use crate::report::Tri;
use crate::symexpr::poly::Atom;
use crate::symexpr::ratfn::{ratfn_to_expr, to_ratfn, RatFn};
use crate::symexpr::{ScalarExpr, ZeroCtx, ZeroVerdict};

/// Structure constants `c^l_{ij}`, stored for `i < j` and extended by
/// antisymmetry. Indices are 0-based.
#[derive(Debug, Clone, Default)]
pub struct StructureConstants {
    n: usize,
    table: BTreeMap<(usize, usize, usize), BigRational>,
}

impl StructureConstants {
    pub fn zero(n: usize) -> StructureConstants {
        StructureConstants {
            n,
            table: BTreeMap::new(),
        }
    }

    /// Build from `(i, j, l, c)` entries with `c^l_{ij} = c`.
    pub fn new(n: usize, entries: Vec<(usize, usize, usize, BigRational)>) -> Result<StructureConstants> {
        let mut table = BTreeMap::new();
        for (i, j, l, c) in entries {
            if i >= n || j >= n || l >= n {
                return Err(Error::invalid(
                    "structure constants",
                    format!("index out of range in c^{l}_({i},{j}) for n = {n}"),
                ));
            }
            if i == j {
                if !c.is_zero() {
                    return Err(Error::invalid(
                        "structure constants",
                        "c^l_(i,i) must vanish",
                    ));
                }
                continue;
            }
            let (key, value) = if i < j { ((i, j, l), c) } else { ((j, i, l), -c) };
            if table.insert(key, value.clone()).is_some_and(|old| old != value) {
                return Err(Error::invalid(
                    "structure constants",
                    "conflicting duplicate entry",
                ));
            }
        }
        table.retain(|_, c: &mut BigRational| !c.is_zero());
        Ok(StructureConstants { n, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `c^l_{ij}` with antisymmetry applied.
    pub fn get(&self, i: usize, j: usize, l: usize) -> BigRational {
        if i == j {
            return BigRational::zero();
        }
        if i < j {
            self.table.get(&(i, j, l)).cloned().unwrap_or_else(BigRational::zero)
        } else {
            -self.table.get(&(j, i, l)).cloned().unwrap_or_else(BigRational::zero)
        }
    }

    /// Jacobi identity on the constants.
    pub fn jacobi_holds(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for m in 0..n {
                        let mut acc = BigRational::zero();
                        for l in 0..n {
                            acc += self.get(i, j, l) * self.get(l, k, m);
                            acc += self.get(j, k, l) * self.get(l, i, m);
                            acc += self.get(k, i, l) * self.get(l, j, m);
                        }
                        if !acc.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// One sampled group element: the chart map it acts by and the matrix of
/// `Ad_g` on the chosen basis (columns are images of basis vectors).
#[derive(Debug, Clone)]
pub struct GroupSample {
    pub label: String,
    pub map: SmoothMap,
    pub ad: Vec<Vec<BigRational>>,
}

/// Per-invariant verdicts collected while constructing an action. Anything
/// `No` is rejected at construction; `Undecided` entries are retained for
/// the caller to surface.
#[derive(Debug, Clone, Default)]
pub struct ActionValidation {
    pub closure: Vec<((usize, usize), Tri)>,
    pub sample_invariance: Vec<(String, Tri)>,
}

/// A Lie-algebra action: fundamental vector fields on a multisymplectic
/// chart plus structure constants and optional group samples.
#[derive(Debug, Clone)]
pub struct LieAlgebraAction {
    ms: MultisymplecticStructure,
    generators: Vec<MultivectorField>,
    constants: StructureConstants,
    sigma: i8,
    samples: Vec<GroupSample>,
    validation: ActionValidation,
}

impl LieAlgebraAction {
    pub fn new(
        ms: MultisymplecticStructure,
        generators: Vec<MultivectorField>,
        constants: StructureConstants,
        sigma: i8,
        samples: Vec<GroupSample>,
        ctx: &ZeroCtx,
    ) -> Result<LieAlgebraAction> {
        if sigma != 1 && sigma != -1 {
            return Err(Error::invalid("action", "sign flag must be +1 or -1"));
        }
        if constants.n() != generators.len() {
            return Err(Error::invalid(
                "action",
                "structure constants do not match the generator count",
            ));
        }
        for g in &generators {
            ms.chart().expect_same(g.chart())?;
            if g.degree() != 1 {
                return Err(Error::Degree("generators must be degree-1 fields".to_string()));
            }
        }
        if !constants.jacobi_holds() {
            return Err(Error::invalid(
                "structure constants",
                "Jacobi identity fails",
            ));
        }
        let mut validation = ActionValidation::default();
        // Bracket closure: [ξ_i, ξ_j] = σ Σ_l c^l_{ij} ξ_l.
        let n = generators.len();
        for i in 0..n {
            for j in i + 1..n {
                let lie = vf_bracket(&generators[i], &generators[j])?;
                let mut combo = MultivectorField::zero(ms.chart(), 1);
                for (l, gen) in generators.iter().enumerate() {
                    let c = constants.get(i, j, l);
                    if c.is_zero() {
                        continue;
                    }
                    let coeff = if sigma < 0 { -c } else { c };
                    combo = combo.add(&gen.scale(&ScalarExpr::constant(coeff))?)?;
                }
                let verdict = lie.sub(&combo)?.zero_verdict(ctx)?;
                match verdict {
                    ZeroVerdict::Zero => validation.closure.push(((i, j), Tri::Yes)),
                    ZeroVerdict::NonZero => {
                        return Err(Error::invalid(
                            "action",
                            format!("bracket closure fails for generators {i} and {j}"),
                        ))
                    }
                    ZeroVerdict::Undecided => validation.closure.push(((i, j), Tri::Undecided)),
                }
            }
        }
        // Definition of a multisymplectic sample: the map preserves Ω.
        for s in &samples {
            s.map.source().expect_same(ms.chart())?;
            s.map.target().expect_same(ms.chart())?;
            if s.ad.len() != n || s.ad.iter().any(|row| row.len() != n) {
                return Err(Error::invalid(
                    "group sample",
                    format!("Ad matrix of `{}` must be {n}x{n}", s.label),
                ));
            }
            let verdict = s.map.pullback(ms.omega())?.sub(ms.omega())?.zero_verdict(ctx)?;
            match verdict {
                ZeroVerdict::Zero => validation
                    .sample_invariance
                    .push((s.label.clone(), Tri::Yes)),
                ZeroVerdict::NonZero => {
                    return Err(Error::invalid(
                        "group sample",
                        format!("`{}` is not a multisymplectomorphism: Φ*Ω ≠ Ω", s.label),
                    ))
                }
                ZeroVerdict::Undecided => validation
                    .sample_invariance
                    .push((s.label.clone(), Tri::Undecided)),
            }
        }
        Ok(LieAlgebraAction {
            ms,
            generators,
            constants,
            sigma,
            samples,
            validation,
        })
    }

    pub fn ms(&self) -> &MultisymplecticStructure {
        &self.ms
    }

    pub fn chart(&self) -> &Chart {
        self.ms.chart()
    }

    pub fn generators(&self) -> &[MultivectorField] {
        &self.generators
    }

    pub fn n(&self) -> usize {
        self.generators.len()
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn sigma(&self) -> i8 {
        self.sigma
    }

    pub fn samples(&self) -> &[GroupSample] {
        &self.samples
    }

    pub fn validation(&self) -> &ActionValidation {
        &self.validation
    }
}

/// How a Hamiltonian form for a generator was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaRoute {
    ThetaContraction,
    Homotopy,
}

#[derive(Debug, Clone)]
pub struct GeneratorClassification {
    pub locally_hamiltonian: Tri,
    pub theta_invariant: Option<Tri>,
    pub strongly_hamiltonian: Tri,
    pub route: Option<ZetaRoute>,
    pub hamiltonian_form: Option<DifferentialForm>,
}

/// Classification of the whole action. At the infinitesimal level the
/// multisymplectic and locally-Hamiltonian conditions coincide: both are
/// `L(ξ̃)Ω = 0` per generator.
#[derive(Debug, Clone)]
pub struct ActionClassification {
    pub per_generator: Vec<GeneratorClassification>,
    pub multisymplectic: Tri,
    pub locally_hamiltonian: Tri,
    pub strongly_hamiltonian: Tri,
    pub exact: Tri,
}

pub fn classify_action(action: &LieAlgebraAction, ctx: &ZeroCtx) -> Result<ActionClassification> {
    let ms = action.ms();
    let theta = ms.theta();
    let mut per_generator = Vec::new();
    for gen in action.generators() {
        let lh = zero_to_tri(lie_derivative(gen, ms.omega())?.zero_verdict(ctx)?);
        let theta_invariant = match theta {
            Some(t) => Some(zero_to_tri(lie_derivative(gen, t)?.zero_verdict(ctx)?)),
            None => None,
        };
        let mut route = None;
        let mut zeta = None;
        let strongly;
        if lh == Tri::No {
            strongly = Tri::No;
        } else {
            if let (Some(t), Some(Tri::Yes)) = (theta, theta_invariant) {
                let candidate = interior_product(gen, t)?.neg();
                if certify_zeta(ms, gen, &candidate, ctx)? == Tri::Yes {
                    route = Some(ZetaRoute::ThetaContraction);
                    zeta = Some(candidate);
                }
            }
            if zeta.is_none() {
                let contracted = interior_product(gen, ms.omega())?;
                match poincare_antiderivative(&contracted, &[], ctx)? {
                    HomotopyOutcome::Antiderivative(beta) => {
                        if certify_zeta(ms, gen, &beta, ctx)? == Tri::Yes {
                            route = Some(ZetaRoute::Homotopy);
                            zeta = Some(beta);
                        }
                    }
                    HomotopyOutcome::Undecided(_) => {}
                }
            }
            strongly = if zeta.is_some() {
                Tri::Yes
            } else if lh == Tri::Undecided {
                Tri::Undecided
            } else {
                // Locally Hamiltonian but no constructive antiderivative.
                Tri::Undecided
            };
        }
        per_generator.push(GeneratorClassification {
            locally_hamiltonian: lh,
            theta_invariant,
            strongly_hamiltonian: strongly,
            route,
            hamiltonian_form: zeta,
        });
    }
    let locally = Tri::all(per_generator.iter().map(|g| g.locally_hamiltonian));
    let strongly = Tri::all(per_generator.iter().map(|g| g.strongly_hamiltonian));
    let exact = match theta {
        None => Tri::Undecided,
        Some(_) => Tri::all(
            per_generator
                .iter()
                .map(|g| g.theta_invariant.unwrap_or(Tri::Undecided)),
        ),
    };
    Ok(ActionClassification {
        per_generator,
        multisymplectic: locally,
        locally_hamiltonian: locally,
        strongly_hamiltonian: strongly,
        exact,
    })
}

fn certify_zeta(
    ms: &MultisymplecticStructure,
    gen: &MultivectorField,
    zeta: &DifferentialForm,
    ctx: &ZeroCtx,
) -> Result<Tri> {
    let residual = interior_product(gen, ms.omega())?.sub(&zeta.d()?)?;
    Ok(zero_to_tri(residual.zero_verdict(ctx)?))
}

#[derive(Debug, Clone)]
pub enum HomotopyOutcome {
    Antiderivative(DifferentialForm),
    Undecided(String),
}

/// Radial homotopy operator on a star-shaped chart:
/// `K(α) = Σ_I Σ_t (−1)^{t−1} (x_{i_t} − b_{i_t}) [∫₀¹ s^{p−1} a_I(b + s(x−b)) ds] dx^{I∖i_t}`.
/// The integral is evaluated in closed form when the rescaled coefficient is
/// polynomial in the radial parameter; otherwise the outcome is undecided.
/// `base` is the center `b` (defaults to the origin when empty).
pub fn poincare_antiderivative(
    alpha: &DifferentialForm,
    base: &[BigRational],
    ctx: &ZeroCtx,
) -> Result<HomotopyOutcome> {
    let chart = alpha.chart().clone();
    let p = alpha.degree();
    if p == 0 {
        return Err(Error::Degree(
            "the homotopy operator applies to forms of degree >= 1".to_string(),
        ));
    }
    match alpha.d()?.zero_verdict(ctx)? {
        ZeroVerdict::Zero => {}
        ZeroVerdict::NonZero => {
            return Err(Error::NotClosed(format!("dα ≠ 0 for α = {alpha}")))
        }
        ZeroVerdict::Undecided => {
            return Ok(HomotopyOutcome::Undecided(
                "closedness of the input could not be certified".to_string(),
            ))
        }
    }
    let m = chart.dim();
    let base: Vec<BigRational> = if base.is_empty() {
        vec![BigRational::zero(); m]
    } else if base.len() == m {
        base.to_vec()
    } else {
        return Err(Error::Domain(format!(
            "base point needs {m} coordinates, got {}",
            base.len()
        )));
    };

    // x_i -> b_i + s (x_i - b_i)
    let s_sym: Arc<str> = Arc::from("$s");
    let s_atom = Atom::Coord(s_sym.clone());
    let mut subst: BTreeMap<Arc<str>, ScalarExpr> = BTreeMap::new();
    for (i, name) in chart.coords().iter().enumerate() {
        let b = ScalarExpr::constant(base[i].clone());
        let radial = b.add(
            &ScalarExpr::sym_arc(s_sym.clone()).mul(&ScalarExpr::sym_arc(name.clone()).sub(&b)),
        );
        subst.insert(name.clone(), radial);
    }

    let mut acc: BTreeMap<crate::exterior::MultiIndex, RatFn> = BTreeMap::new();
    for (idx, coeff) in alpha.terms() {
        let rescaled = to_ratfn(&coeff.substitute(&subst))?;
        if rescaled.den().degree_in(&s_atom) > 0 {
            return Ok(HomotopyOutcome::Undecided(format!(
                "coefficient {coeff} is not polynomial along the radial rescaling"
            )));
        }
        // ∫₀¹ s^(p-1) Σ_d c_d s^d ds = Σ_d c_d / (p + d)
        let mut integral = RatFn::zero();
        let den = RatFn::from_poly(rescaled.den().clone());
        for (d, c_poly) in rescaled.num().coeffs_in(&s_atom) {
            let weight = BigRational::new(1.into(), (p as i64 + d as i64).into());
            integral = integral.add(
                &RatFn::from_poly(c_poly)
                    .div(&den)?
                    .scale(&weight),
            );
        }
        for (t, i) in idx.indices().iter().enumerate() {
            let name = chart.coord(*i as usize - 1).clone();
            let factor = ScalarExpr::sym_arc(name).sub(&ScalarExpr::constant(
                base[*i as usize - 1].clone(),
            ));
            let mut piece = integral.mul(&to_ratfn(&factor)?);
            if t % 2 == 1 {
                piece = piece.neg();
            }
            crate::exterior::form::merge_term(&mut acc, idx.remove_at(t), piece);
        }
    }
    let beta = DifferentialForm::from_ratfn(&chart, p - 1, acc);
    // Post-hoc certification of dβ = α.
    match beta.d()?.sub(alpha)?.zero_verdict(ctx)? {
        ZeroVerdict::Zero => Ok(HomotopyOutcome::Antiderivative(beta)),
        v => Ok(HomotopyOutcome::Undecided(format!(
            "certification of dβ − α returned {v}"
        ))),
    }
}

/// A comomentum map: one certified Hamiltonian form per generator,
/// extended linearly.
#[derive(Debug, Clone)]
pub struct ComomentumMap {
    zetas: Vec<DifferentialForm>,
    routes: Vec<ZetaRoute>,
}

impl ComomentumMap {
    pub fn zetas(&self) -> &[DifferentialForm] {
        &self.zetas
    }

    pub fn zeta(&self, i: usize) -> &DifferentialForm {
        &self.zetas[i]
    }

    pub fn routes(&self) -> &[ZetaRoute] {
        &self.routes
    }

    pub fn n(&self) -> usize {
        self.zetas.len()
    }

    /// Linear extension to an arbitrary algebra element given by basis
    /// coefficients.
    pub fn apply(&self, coeffs: &[BigRational], chart: &Chart, degree: usize) -> Result<DifferentialForm> {
        let mut out = DifferentialForm::zero(chart, degree);
        for (c, z) in coeffs.iter().zip(&self.zetas) {
            if c.is_zero() {
                continue;
            }
            out = out.add(&z.scale(&ScalarExpr::constant(c.clone()))?)?;
        }
        Ok(out)
    }

    /// The comomentum perturbed by closed forms, one per generator — the
    /// parametrization of comomentum maps by linear maps into closed forms.
    pub fn perturbed(&self, closed: &[DifferentialForm]) -> Result<ComomentumMap> {
        if closed.len() != self.zetas.len() {
            return Err(Error::invalid(
                "perturbation",
                "need one closed form per generator",
            ));
        }
        let zetas = self
            .zetas
            .iter()
            .zip(closed)
            .map(|(z, f)| z.add(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(ComomentumMap {
            zetas,
            routes: self.routes.clone(),
        })
    }

    /// Momentum-map evaluation: the value of `J(x)(ξ)` is the representative
    /// form of `J*(ξ)` with coordinates substituted by the point.
    pub fn momentum_at(
        &self,
        coeffs: &[BigRational],
        point: &BTreeMap<Arc<str>, BigRational>,
        chart: &Chart,
        degree: usize,
    ) -> Result<Vec<(Vec<u32>, BigRational)>> {
        let form = self.apply(coeffs, chart, degree)?;
        let mut out = Vec::new();
        for (idx, coeff) in form.terms() {
            out.push((
                idx.indices().to_vec(),
                crate::symexpr::evaluate_rational(coeff, point)?,
            ));
        }
        Ok(out)
    }
}

/// Build a comomentum map: the potential contraction when the generator
/// preserves a supplied potential, the homotopy antiderivative otherwise.
/// Every output satisfies `i(ξ̃_i)Ω = dζ_i`, re-certified after
/// construction.
pub fn build_comomentum(action: &LieAlgebraAction, ctx: &ZeroCtx) -> Result<ComomentumMap> {
    let classification = classify_action(action, ctx)?;
    let mut zetas = Vec::new();
    let mut routes = Vec::new();
    for (i, gen_class) in classification.per_generator.iter().enumerate() {
        match (&gen_class.hamiltonian_form, gen_class.route) {
            (Some(z), Some(r)) => {
                zetas.push(z.clone());
                routes.push(r);
            }
            _ => {
                return Err(Error::NotStronglyHamiltonian(format!(
                    "no certified Hamiltonian form for generator {i} (strongly Hamiltonian: {})",
                    gen_class.strongly_hamiltonian
                )))
            }
        }
    }
    // Re-certify the defining equation per generator.
    for (gen, z) in action.generators().iter().zip(&zetas) {
        if certify_zeta(action.ms(), gen, z, ctx)? != Tri::Yes {
            return Err(Error::Uncertifiable(
                "comomentum certification failed".to_string(),
            ));
        }
    }
    Ok(ComomentumMap { zetas, routes })
}

/// The bracket `{ζ_i, ζ_j} = −i(ξ̃_i) i(ξ̃_j) Ω`, using the generators as
/// the Hamiltonian fields of their own comomentum forms.
fn comomentum_bracket(
    action: &LieAlgebraAction,
    i: usize,
    j: usize,
) -> Result<DifferentialForm> {
    let omega = action.ms().omega();
    Ok(interior_product(
        &action.generators()[i],
        &interior_product(&action.generators()[j], omega)?,
    )?
    .neg())
}

/// The Poissonian defect `γ_{ij} = {ζ_i, ζ_j} − ζ_{[j,i]}` with
/// `ζ_{[j,i]} = Σ_l σ c^l_{ji} ζ_l`, reported under both index orders of
/// the subtracted term (`alt` subtracts `Σ_l σ c^l_{ij} ζ_l`).
#[derive(Debug, Clone)]
pub struct DefectReport {
    pub gamma: Vec<Vec<DifferentialForm>>,
    pub gamma_alt: Vec<Vec<DifferentialForm>>,
    /// `dγ_{ij} = 0` per pair.
    pub closed: Vec<Vec<Tri>>,
    pub antisymmetric: Tri,
    /// All `γ_{ij}` vanish as forms.
    pub poissonian: Tri,
    pub poissonian_alt: Tri,
}

pub fn poissonian_defect(
    action: &LieAlgebraAction,
    comomentum: &ComomentumMap,
    ctx: &ZeroCtx,
) -> Result<DefectReport> {
    let n = action.n();
    let chart = action.chart().clone();
    let degree = action.ms().k().saturating_sub(1);
    let sigma = BigRational::from_integer(action.sigma().into());
    let mut gamma = vec![vec![DifferentialForm::zero(&chart, degree); n]; n];
    let mut gamma_alt = gamma.clone();
    let mut closed = vec![vec![Tri::Yes; n]; n];
    let mut zero = vec![vec![Tri::Yes; n]; n];
    let mut zero_alt = vec![vec![Tri::Yes; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let br = comomentum_bracket(action, i, j)?;
            let mut combo_ji = DifferentialForm::zero(&chart, degree);
            let mut combo_ij = DifferentialForm::zero(&chart, degree);
            for l in 0..n {
                let c_ji = action.constants().get(j, i, l) * &sigma;
                if !c_ji.is_zero() {
                    combo_ji = combo_ji
                        .add(&comomentum.zeta(l).scale(&ScalarExpr::constant(c_ji))?)?;
                }
                let c_ij = action.constants().get(i, j, l) * &sigma;
                if !c_ij.is_zero() {
                    combo_ij = combo_ij
                        .add(&comomentum.zeta(l).scale(&ScalarExpr::constant(c_ij))?)?;
                }
            }
            let g = br.sub(&combo_ji)?;
            let g_alt = br.sub(&combo_ij)?;
            closed[i][j] = zero_to_tri(g.d()?.zero_verdict(ctx)?);
            zero[i][j] = zero_to_tri(g.zero_verdict(ctx)?);
            zero_alt[i][j] = zero_to_tri(g_alt.zero_verdict(ctx)?);
            gamma[i][j] = g;
            gamma_alt[i][j] = g_alt;
        }
    }
    // γ_{ij} + γ_{ji} = 0 as forms.
    let mut antisymmetric = Tri::Yes;
    for i in 0..n {
        for j in i + 1..n {
            let v = zero_to_tri(gamma[i][j].add(&gamma[j][i])?.zero_verdict(ctx)?);
            antisymmetric = antisymmetric.and(v);
        }
    }
    let poissonian = Tri::all(zero.iter().flatten().copied());
    let poissonian_alt = Tri::all(zero_alt.iter().flatten().copied());
    Ok(DefectReport {
        gamma,
        gamma_alt,
        closed,
        antisymmetric,
        poissonian,
        poissonian_alt,
    })
}

/// Equivariance of the momentum map on the supplied samples.
///
/// Two checks per `(g, i)`:
/// * consistency of the sample data with the generators:
///   `TΦ_g ∘ ξ̃_i = (Ad_g ξ_i)~ ∘ Φ_g` componentwise;
/// * the coadjoint-equivariance identity in pullback form:
///   `Φ_g*( J*(Ad_g ξ_i) ) = J*(ξ_i)`.
#[derive(Debug, Clone)]
pub struct SampleEquivariance {
    pub label: String,
    pub ad_consistent: Tri,
    pub identity: Vec<Tri>,
}

#[derive(Debug, Clone)]
pub struct EquivarianceReport {
    pub per_sample: Vec<SampleEquivariance>,
    pub all_hold: Tri,
}

pub fn check_equivariance(
    action: &LieAlgebraAction,
    comomentum: &ComomentumMap,
    ctx: &ZeroCtx,
) -> Result<EquivarianceReport> {
    if action.samples().is_empty() {
        return Err(Error::MissingSamples);
    }
    let chart = action.chart().clone();
    let n = action.n();
    let degree = action.ms().k().saturating_sub(1);
    let mut per_sample = Vec::new();
    for sample in action.samples() {
        let jac = sample.map.jacobian()?;
        let mut ad_consistent = Tri::Yes;
        for i in 0..n {
            let gen_comps = action.generators()[i].components()?;
            // image field Σ_j Ad_{ji} ξ̃_j, then composed with Φ
            for t in 0..chart.dim() {
                let mut pushed = RatFn::zero();
                for (s, comp) in gen_comps.iter().enumerate() {
                    pushed = pushed.add(&to_ratfn(&jac[t][s])?.mul(&to_ratfn(comp)?));
                }
                let mut image_comp = RatFn::zero();
                for j in 0..n {
                    let a = &sample.ad[j][i];
                    if a.is_zero() {
                        continue;
                    }
                    let comp_j = action.generators()[j].components()?[t].clone();
                    image_comp = image_comp
                        .add(&to_ratfn(&sample.map.apply_scalar(&comp_j)?)?.scale(a));
                }
                let residual = ratfn_to_expr(&pushed.sub(&image_comp));
                ad_consistent =
                    ad_consistent.and(zero_to_tri(crate::symexpr::is_zero(&residual, ctx)?));
            }
        }
        let mut identity = Vec::new();
        for i in 0..n {
            let coeffs: Vec<BigRational> = (0..n).map(|j| sample.ad[j][i].clone()).collect();
            let j_ad = comomentum.apply(&coeffs, &chart, degree)?;
            let lhs = sample.map.pullback(&j_ad)?;
            let residual = lhs.sub(comomentum.zeta(i))?.zero_verdict(ctx)?;
            identity.push(zero_to_tri(residual));
        }
        per_sample.push(SampleEquivariance {
            label: sample.label.clone(),
            ad_consistent,
            identity,
        });
    }
    let all_hold = Tri::all(
        per_sample
            .iter()
            .flat_map(|s| s.identity.iter().copied().chain([s.ad_consistent])),
    );
    Ok(EquivarianceReport {
        per_sample,
        all_hold,
    })
}
