//! Command implementations: each produces an ordered list of check records.

use anyhow::{anyhow, Result};
use rayon::prelude::*;

use multisym::action::{
    build_comomentum, check_equivariance, classify_action, poissonian_defect, LieAlgebraAction,
};
use multisym::lagfield::{
    euler_lagrange_residual, noether_conservation, noether_current, noether_submanifold_check,
    regularity, symmetry_check,
};
use multisym::msgeom::{bracket, bracket_closure, check_multisymplectic, hamiltonian_vector_field, HvfOutcome};
use multisym::submfd::{
    characteristic_kernel, classify_dimension, is_momentum_type, momentum_eds_span_check, reduce,
};
use multisym::{Tri, ZeroCtx};

use crate::report::{CheckRecord, Verdict};
use crate::scene::{LagrangianEntry, Scene};

pub fn cmd_check_ms(scene: &Scene, name: Option<&str>) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    let targets: Vec<&String> = match name {
        Some(n) => {
            scene.msstruct(n)?;
            scene.msstructs.keys().filter(|k| k.as_str() == n).collect()
        }
        None => scene.msstructs.keys().collect(),
    };
    if targets.is_empty() {
        return Err(anyhow!("no multisymplectic structures declared"));
    }
    for n in targets {
        let ms = &scene.msstructs[n];
        let rep = check_multisymplectic(ms.omega(), &scene.settings)?;
        records.push(
            CheckRecord::new(format!("check-ms/{n}/closed"), &[n], rep.closed.into())
                .cert(format!("dΩ is {}", rep.closed)),
        );
        let mut nd = CheckRecord::new(
            format!("check-ms/{n}/nondegenerate"),
            &[n],
            rep.nondegenerate.into(),
        )
        .cert(format!(
            "structural rank {} of {} ({})",
            rep.structural_rank,
            ms.chart().dim(),
            rep.certainty
        ));
        for p in &rep.sample_points {
            nd = nd.cert(format!("sample point {}", format_point(p)));
        }
        for k in &rep.kernel_basis {
            nd = nd.cert(format!("kernel field {k}"));
        }
        records.push(nd);
    }
    Ok(records)
}

fn format_point(p: &std::collections::BTreeMap<std::sync::Arc<str>, num::BigRational>) -> String {
    let parts: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
    parts.join(", ")
}

pub fn cmd_hvf(scene: &Scene, ms_name: &str, zeta_name: &str) -> Result<Vec<CheckRecord>> {
    let ms = scene.msstruct(ms_name)?;
    let zeta = scene.form(zeta_name)?;
    let id = format!("hvf/{ms_name}/{zeta_name}");
    let record = match hamiltonian_vector_field(ms, zeta, &scene.settings)? {
        HvfOutcome::Solved {
            field,
            unique,
            certainty,
        } => CheckRecord::new(id, &[ms_name, zeta_name], Verdict::Pass)
            .cert(format!("X = {field}"))
            .cert(format!("unique: {unique} ({certainty})")),
        HvfOutcome::Unsolvable { residual, witness } => {
            let mut r = CheckRecord::new(id, &[ms_name, zeta_name], Verdict::Fail)
                .cert(format!("outside the image: reduced equation 0 = {residual}"));
            if let Some(w) = witness {
                let pt: Vec<String> =
                    w.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let loc = if pt.is_empty() {
                    "(constant)".to_string()
                } else {
                    pt.join(", ")
                };
                r = r.cert(format!("witness point {loc} gives residual {}", w.value));
            }
            r
        }
        HvfOutcome::Undecided { reason } => {
            CheckRecord::new(id, &[ms_name, zeta_name], Verdict::Undecided).cert(reason)
        }
    };
    Ok(vec![record])
}

pub fn cmd_bracket(
    scene: &Scene,
    ms_name: &str,
    z1_name: &str,
    z2_name: &str,
) -> Result<Vec<CheckRecord>> {
    let ms = scene.msstruct(ms_name)?;
    let z1 = scene.form(z1_name)?;
    let z2 = scene.form(z2_name)?;
    let ctx = &scene.settings;
    let mut records = Vec::new();
    let br = bracket(ms, z1, z2, ctx)?;
    records.push(
        CheckRecord::new(
            format!("bracket/{ms_name}/{z1_name}/{z2_name}/value"),
            &[ms_name, z1_name, z2_name],
            Verdict::Pass,
        )
        .cert(format!("{{ζ1, ζ2}} = {}", br.value.representative()))
        .cert(format!("X1 = {}", br.field1))
        .cert(format!("X2 = {}", br.field2)),
    );
    let anti = br
        .value
        .representative()
        .add(bracket(ms, z2, z1, ctx)?.value.representative())?
        .zero_verdict(ctx)?;
    records.push(CheckRecord::new(
        format!("bracket/{ms_name}/{z1_name}/{z2_name}/antisymmetry"),
        &[ms_name, z1_name, z2_name],
        anti.into(),
    ));
    let closure = bracket_closure(ms, z1, z2, ctx)?;
    records.push(
        CheckRecord::new(
            format!("bracket/{ms_name}/{z1_name}/{z2_name}/closure"),
            &[ms_name, z1_name, z2_name],
            closure.swapped.into(),
        )
        .cert(format!(
            "d{{ζ1,ζ2}} = i([X2,X1])Ω: {}; printed order i([X1,X2])Ω: {}",
            closure.swapped, closure.as_printed
        )),
    );
    Ok(records)
}

pub fn cmd_classify_action(scene: &Scene, name: &str) -> Result<Vec<CheckRecord>> {
    let action = scene.action(name)?;
    classify_records(name, action, &scene.settings)
}

fn classify_records(
    name: &str,
    action: &LieAlgebraAction,
    ctx: &ZeroCtx,
) -> Result<Vec<CheckRecord>> {
    let rep = classify_action(action, ctx)?;
    let mut records = Vec::new();
    for (i, g) in rep.per_generator.iter().enumerate() {
        let mut r = CheckRecord::new(
            format!("classify-action/{name}/generator-{}/locally-hamiltonian", i + 1),
            &[name],
            g.locally_hamiltonian.into(),
        );
        if let Some(t) = g.theta_invariant {
            r = r.cert(format!("θ-invariant: {t}"));
        }
        records.push(r);
        let mut s = CheckRecord::new(
            format!("classify-action/{name}/generator-{}/strongly-hamiltonian", i + 1),
            &[name],
            g.strongly_hamiltonian.into(),
        );
        if let Some(route) = g.route {
            s = s.cert(format!("route: {route:?}"));
        }
        if let Some(z) = &g.hamiltonian_form {
            s = s.cert(format!("ζ = {z}"));
        }
        records.push(s);
    }
    records.push(
        CheckRecord::new(
            format!("classify-action/{name}/multisymplectic"),
            &[name],
            rep.multisymplectic.into(),
        )
        .cert("infinitesimally, multisymplectic and locally Hamiltonian coincide"),
    );
    records.push(CheckRecord::new(
        format!("classify-action/{name}/strongly-hamiltonian"),
        &[name],
        rep.strongly_hamiltonian.into(),
    ));
    records.push(CheckRecord::new(
        format!("classify-action/{name}/exact"),
        &[name],
        rep.exact.into(),
    ));
    Ok(records)
}

pub fn cmd_comomentum(scene: &Scene, name: &str) -> Result<Vec<CheckRecord>> {
    let action = scene.action(name)?;
    let j = build_comomentum(action, &scene.settings)?;
    let mut records = Vec::new();
    for (i, z) in j.zetas().iter().enumerate() {
        records.push(
            CheckRecord::new(
                format!("comomentum/{name}/generator-{}", i + 1),
                &[name],
                Verdict::Pass,
            )
            .cert(format!("ζ = {z}"))
            .cert(format!("route: {:?}", j.routes()[i])),
        );
    }
    if j.n() == 0 {
        records.push(
            CheckRecord::new(format!("comomentum/{name}/empty"), &[name], Verdict::Pass)
                .cert("trivial algebra: empty comomentum map"),
        );
    }
    Ok(records)
}

pub fn cmd_defect(scene: &Scene, name: &str) -> Result<Vec<CheckRecord>> {
    let action = scene.action(name)?;
    let ctx = &scene.settings;
    let j = build_comomentum(action, ctx)?;
    let rep = poissonian_defect(action, &j, ctx)?;
    let mut records = Vec::new();
    records.push(
        CheckRecord::new(format!("defect/{name}/poissonian"), &[name], rep.poissonian.into())
            .cert(format!(
                "γ_ij = {{ζ_i,ζ_j}} − Σ σ c^l_ji ζ_l; alternative order verdict: {}",
                rep.poissonian_alt
            )),
    );
    records.push(CheckRecord::new(
        format!("defect/{name}/antisymmetric"),
        &[name],
        rep.antisymmetric.into(),
    ));
    let n = action.n();
    for i in 0..n {
        for jdx in (i + 1)..n {
            records.push(
                CheckRecord::new(
                    format!("defect/{name}/gamma-{}-{}", i + 1, jdx + 1),
                    &[name],
                    rep.closed[i][jdx].into(),
                )
                .cert(format!("γ = {}", rep.gamma[i][jdx]))
                .cert(format!("dγ = 0: {}", rep.closed[i][jdx])),
            );
        }
    }
    Ok(records)
}

pub fn cmd_equivariance(scene: &Scene, name: &str) -> Result<Vec<CheckRecord>> {
    let action = scene.action(name)?;
    let ctx = &scene.settings;
    let j = build_comomentum(action, ctx)?;
    let rep = check_equivariance(action, &j, ctx)?;
    let mut records = Vec::new();
    for s in &rep.per_sample {
        records.push(CheckRecord::new(
            format!("equivariance/{name}/{}/ad-consistency", s.label),
            &[name, &s.label],
            s.ad_consistent.into(),
        ));
        for (i, v) in s.identity.iter().enumerate() {
            records.push(
                CheckRecord::new(
                    format!("equivariance/{name}/{}/generator-{}", s.label, i + 1),
                    &[name, &s.label],
                    (*v).into(),
                )
                .cert("Φ_g*(J*(Ad_g ξ)) = J*(ξ)"),
            );
        }
    }
    Ok(records)
}

pub fn cmd_submanifold(scene: &Scene, sub_name: &str, action_name: &str) -> Result<Vec<CheckRecord>> {
    let sub = scene.submanifold(sub_name)?;
    let action = scene.action(action_name)?;
    let ctx = &scene.settings;
    let rep = is_momentum_type(sub, action, ctx)?;
    let mut records = Vec::new();
    for (i, g) in rep.per_generator.iter().enumerate() {
        let mut r = CheckRecord::new(
            format!("submanifold/{sub_name}/{action_name}/generator-{}/pullback", i + 1),
            &[sub_name, action_name],
            g.pullback_vanishes.into(),
        )
        .cert(format!("tangent: {}", g.tangent));
        if let Some(v) = &g.induced {
            r = r.cert(format!("induced field {v}"));
        }
        records.push(r);
    }
    records.push(CheckRecord::new(
        format!("submanifold/{sub_name}/{action_name}/momentum-type"),
        &[sub_name, action_name],
        rep.momentum_type.into(),
    ));
    records.push(
        CheckRecord::new(
            format!("submanifold/{sub_name}/{action_name}/dimension"),
            &[sub_name, action_name],
            if rep.dimension.admissible {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        )
        .cert(format!(
            "admissible={} optimal_s={} maximal={}",
            rep.dimension.admissible,
            rep.dimension
                .optimal_s
                .map(|q| q.to_string())
                .unwrap_or_else(|| "none".to_string()),
            rep.dimension.maximal
        )),
    );
    let ck = characteristic_kernel(sub, action, ctx)?;
    let mut ck_record = CheckRecord::new(
        format!("submanifold/{sub_name}/{action_name}/characteristic-kernel"),
        &[sub_name, action_name],
        ck.isotropy_contained.into(),
    )
    .cert(format!("ω_S = {}", ck.omega_s));
    if ck.trivial_by_dimension {
        ck_record = ck_record.cert("dim S < k+1: ω_S vanishes identically");
    }
    for (point, kdim) in ck.kernel_rank_at_samples.iter().take(2) {
        ck_record = ck_record.cert(format!(
            "kernel dimension {kdim} at {}",
            format_point(point)
        ));
    }
    records.push(ck_record);
    if sub.dim() >= action.ms().k() {
        let span = momentum_eds_span_check(sub, action, ctx)?;
        records.push(
            CheckRecord::new(
                format!("submanifold/{sub_name}/{action_name}/span/inclusion"),
                &[sub_name, action_name],
                span.inclusion.into(),
            )
            .cert(format!("codimension budget {}", span.codimension_budget)),
        );
        records.push(CheckRecord::new(
            format!("submanifold/{sub_name}/{action_name}/span/equality"),
            &[sub_name, action_name],
            span.equality.into(),
        ));
    }
    Ok(records)
}

pub fn cmd_dims(m: u64, k: u64, n: u64, s: u64) -> Result<Vec<CheckRecord>> {
    let rep = classify_dimension(m, k, n, s)?;
    Ok(vec![CheckRecord::new(
        format!("dims/{m}-{k}-{n}-{s}"),
        &[],
        if rep.admissible { Verdict::Pass } else { Verdict::Fail },
    )
    .cert(format!(
        "admissible={} optimal_s={} maximal={}",
        rep.admissible,
        rep.optimal_s
            .map(|q| q.to_string())
            .unwrap_or_else(|| "none".to_string()),
        rep.maximal
    ))])
}

pub fn cmd_reduce(scene: &Scene, name: &str) -> Result<Vec<CheckRecord>> {
    let (action_name, rd) = scene.reduction(name)?;
    let action = scene.action(action_name)?;
    let rep = reduce(rd, action, &scene.settings)?;
    let mut records = Vec::new();
    records.push(
        CheckRecord::new(format!("reduce/{name}/basic"), &[name], rep.basic_certified.into())
            .cert("vertical contractions and Lie derivatives of ω_S vanish"),
    );
    records.push(
        CheckRecord::new(
            format!("reduce/{name}/pullback-identity"),
            &[name],
            rep.pullback_identity.into(),
        )
        .cert(format!("ω̃ = {}", rep.omega_tilde))
        .cert(rep.uniqueness_note.clone()),
    );
    records.push(CheckRecord::new(
        format!("reduce/{name}/closed"),
        &[name],
        rep.d_closed.into(),
    ));
    if rep.trivial_by_dimension {
        records.push(
            CheckRecord::new(format!("reduce/{name}/trivial"), &[name], Verdict::Pass)
                .cert("dim S < k+1: ω_S = 0 and the reduction is trivial"),
        );
    }
    Ok(records)
}

pub fn cmd_lagrangian(scene: &Scene, name: &str) -> Result<Vec<CheckRecord>> {
    let entry = scene.lagrangian(name)?;
    lagrangian_records(name, entry, &scene.settings)
}

fn lagrangian_records(
    name: &str,
    entry: &LagrangianEntry,
    ctx: &ZeroCtx,
) -> Result<Vec<CheckRecord>> {
    let ls = &entry.system;
    let mut records = Vec::new();
    let reg = regularity(ls, ctx)?;
    records.push(
        CheckRecord::new(format!("lagrangian/{name}/regular"), &[name], reg.omega_nondegenerate.into())
            .cert(format!(
                "Hessian criterion: {}; criteria agree: {}",
                reg.hessian_nondegenerate, reg.agree
            )),
    );
    for (sym_name, field) in &entry.symmetries {
        let sym = symmetry_check(ls, field, ctx)?;
        records.push(
            CheckRecord::new(
                format!("lagrangian/{name}/symmetry-{sym_name}"),
                &[name, sym_name],
                sym.theta_invariant.and(sym.lagrangian_invariant).into(),
            )
            .cert(format!(
                "θ_L-invariant: {}; lagrangian-invariant: {}",
                sym.theta_invariant, sym.lagrangian_invariant
            )),
        );
        let (current, _) = noether_current(ls, field, ctx)?;
        records.push(
            CheckRecord::new(
                format!("lagrangian/{name}/current-{sym_name}"),
                &[name, sym_name],
                Verdict::Pass,
            )
            .cert(format!("i(ξ̃)Θ_L = {current}")),
        );
    }
    for (sec_name, section) in &entry.sections {
        let el = euler_lagrange_residual(ls, section, ctx)?;
        let residuals: Vec<String> = el.residuals.iter().map(|r| r.to_string()).collect();
        records.push(
            CheckRecord::new(
                format!("lagrangian/{name}/section-{sec_name}/euler-lagrange"),
                &[name, sec_name],
                el.is_solution.into(),
            )
            .cert(format!("residuals: [{}]", residuals.join(", ")))
            .cert(format!(
                "intrinsic criterion: {}; formulations agree: {}",
                el.intrinsic, el.formulations_agree
            )),
        );
        for (sym_name, field) in &entry.symmetries {
            let cons = noether_conservation(ls, field, section, ctx)?;
            let mut r = CheckRecord::new(
                format!("lagrangian/{name}/section-{sec_name}/conservation-{sym_name}"),
                &[name, sec_name, sym_name],
                cons.conserved.into(),
            );
            if cons.conserved == Tri::No {
                r = r.cert(format!("d of the pulled-back current: {}", cons.d_current));
            }
            records.push(r);
        }
        if el.is_solution == Tri::Yes && !entry.symmetries.is_empty() {
            let noe = noether_submanifold_check(ls, &entry.action, section, None, ctx)?;
            records.push(
                CheckRecord::new(
                    format!("lagrangian/{name}/section-{sec_name}/momentum-type-image"),
                    &[name, sec_name],
                    noe.image.momentum_type.into(),
                )
                .cert(format!(
                    "dimension: admissible={} optimal_s={}",
                    noe.image.dimension.admissible,
                    noe.image
                        .dimension
                        .optimal_s
                        .map(|q| q.to_string())
                        .unwrap_or_else(|| "none".to_string())
                )),
            );
        }
    }
    Ok(records)
}

/// Run every check derivable from the scene; independent targets run in
/// parallel and the records are ordered deterministically by id.
pub fn cmd_all(scene: &Scene) -> Result<Vec<CheckRecord>> {
    enum Job<'a> {
        Ms(&'a String),
        Action(&'a String),
        Sub(&'a String, &'a String),
        Reduction(&'a String),
        Lagrangian(&'a String),
    }
    let mut jobs: Vec<Job> = Vec::new();
    jobs.extend(scene.msstructs.keys().map(Job::Ms));
    jobs.extend(scene.actions.keys().map(Job::Action));
    for s in scene.submanifolds.keys() {
        for a in scene.actions.keys() {
            if scene.submanifolds[s].ambient() == scene.actions[a].chart() {
                jobs.push(Job::Sub(s, a));
            }
        }
    }
    jobs.extend(scene.reductions.keys().map(Job::Reduction));
    jobs.extend(scene.lagrangians.keys().map(Job::Lagrangian));

    let results: Result<Vec<Vec<CheckRecord>>> = jobs
        .par_iter()
        .map(|job| match job {
            Job::Ms(n) => cmd_check_ms(scene, Some(n)),
            Job::Action(n) => {
                let mut records = cmd_classify_action(scene, n)?;
                match build_comomentum(scene.action(n)?, &scene.settings) {
                    Ok(_) => {
                        records.extend(cmd_comomentum(scene, n)?);
                        records.extend(cmd_defect(scene, n)?);
                        if !scene.action(n)?.samples().is_empty() {
                            records.extend(cmd_equivariance(scene, n)?);
                        }
                    }
                    Err(_) => {
                        records.push(
                            CheckRecord::new(
                                format!("comomentum/{n}/buildable"),
                                &[n],
                                Verdict::Undecided,
                            )
                            .cert("no certified comomentum map; defect and equivariance skipped"),
                        );
                    }
                }
                Ok(records)
            }
            Job::Sub(s, a) => cmd_submanifold(scene, s, a),
            Job::Reduction(n) => cmd_reduce(scene, n),
            Job::Lagrangian(n) => cmd_lagrangian(scene, n),
        })
        .collect();
    let mut records: Vec<CheckRecord> = results?.into_iter().flatten().collect();
    records.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(records)
}
