//! Scene files: a line-oriented declarative format with stanza headers and
//! the engine's expression grammar inside.
//!
//! ```text
//! settings { seed 42
//!            samples 16
//!            box -2 2
//!            tolerance 1e-9 }
//! const c = 3/2
//! chart M { coords q p }
//! form Omega on M degree 2 { term [1 2] 1 }
//! multivector X on M degree 1 { term [1] p
//!                               term [2] -q }
//! map Phi from M to M { comp 2*q
//!                       comp p/2 }
//! msstruct MS { omega Omega
//!               theta Theta }
//! action A on MS { sign -1
//!                  generators X1 X2
//!                  bracket 1 2 = 2:-1
//!                  sample g { map Phi
//!                             ad [1 0; 0 1/2] } }
//! submanifold S { source C
//!                 embed J }
//! reduction R { sub S
//!               action A
//!               isotropy 1
//!               quotient Q
//!               projection P
//!               section Sec }
//! lagrangian L { base x y
//!                fiber u
//!                density (u_x^2 + u_y^2)/2
//!                section phi = x*y
//!                symmetry tx { base 1; 0
//!                              fiber 0 }
//!                symmetry rot jet Xrot }
//! ```
//!
//! Declarations are define-before-use; `#` starts a comment; generator and
//! isotropy indices are 1-based in scene files.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use num::BigRational;

use multisym::action::{GroupSample, LieAlgebraAction, StructureConstants};
use multisym::lagfield::{prolong_vector, FieldSection, LagrangianSystem};
use multisym::msgeom::MultisymplecticStructure;
use multisym::submfd::{ReductionData, Submanifold};
use multisym::symexpr::parse_with_constants;
use multisym::{Chart, DifferentialForm, MultivectorField, ScalarExpr, SmoothMap, ZeroCtx};

#[derive(Debug)]
pub struct LagrangianEntry {
    pub system: LagrangianSystem,
    pub sections: Vec<(String, FieldSection)>,
    pub symmetries: Vec<(String, MultivectorField)>,
    /// Jet-chart action generated by the symmetries (for momentum-type
    /// verification of prolonged solutions).
    pub action: LieAlgebraAction,
}

#[derive(Debug, Default)]
pub struct Scene {
    pub settings: ZeroCtx,
    pub constants: BTreeMap<String, BigRational>,
    pub charts: BTreeMap<String, Chart>,
    pub forms: BTreeMap<String, DifferentialForm>,
    pub multivectors: BTreeMap<String, MultivectorField>,
    pub maps: BTreeMap<String, SmoothMap>,
    pub msstructs: BTreeMap<String, MultisymplecticStructure>,
    pub actions: BTreeMap<String, LieAlgebraAction>,
    pub submanifolds: BTreeMap<String, Submanifold>,
    pub reductions: BTreeMap<String, (String, ReductionData)>,
    pub lagrangians: BTreeMap<String, LagrangianEntry>,
}

impl Scene {
    pub fn chart(&self, name: &str) -> Result<&Chart> {
        self.charts
            .get(name)
            .ok_or_else(|| anyhow!("unknown chart `{name}`"))
    }

    pub fn form(&self, name: &str) -> Result<&DifferentialForm> {
        self.forms
            .get(name)
            .ok_or_else(|| anyhow!("unknown form `{name}`"))
    }

    pub fn multivector(&self, name: &str) -> Result<&MultivectorField> {
        self.multivectors
            .get(name)
            .ok_or_else(|| anyhow!("unknown multivector `{name}`"))
    }

    pub fn map(&self, name: &str) -> Result<&SmoothMap> {
        self.maps
            .get(name)
            .ok_or_else(|| anyhow!("unknown map `{name}`"))
    }

    pub fn msstruct(&self, name: &str) -> Result<&MultisymplecticStructure> {
        self.msstructs
            .get(name)
            .ok_or_else(|| anyhow!("unknown multisymplectic structure `{name}`"))
    }

    pub fn action(&self, name: &str) -> Result<&LieAlgebraAction> {
        self.actions
            .get(name)
            .ok_or_else(|| anyhow!("unknown action `{name}`"))
    }

    pub fn submanifold(&self, name: &str) -> Result<&Submanifold> {
        self.submanifolds
            .get(name)
            .ok_or_else(|| anyhow!("unknown submanifold `{name}`"))
    }

    pub fn reduction(&self, name: &str) -> Result<&(String, ReductionData)> {
        self.reductions
            .get(name)
            .ok_or_else(|| anyhow!("unknown reduction `{name}`"))
    }

    pub fn lagrangian(&self, name: &str) -> Result<&LagrangianEntry> {
        self.lagrangians
            .get(name)
            .ok_or_else(|| anyhow!("unknown lagrangian `{name}`"))
    }
}

struct Line {
    number: usize,
    text: String,
}

enum Item {
    Line(Line),
    Block(Block),
}

struct Block {
    header: Line,
    items: Vec<Item>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Group the raw lines into (possibly nested) brace blocks.
fn parse_blocks(lines: &mut std::iter::Peekable<impl Iterator<Item = Line>>, depth: usize) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    while let Some(line) = lines.next() {
        let text = line.text.trim();
        if text.is_empty() {
            continue;
        }
        if text == "}" {
            if depth == 0 {
                bail!("line {}: unmatched `}}`", line.number);
            }
            return Ok(items);
        }
        if let Some(header) = text.strip_suffix('{') {
            let header = Line {
                number: line.number,
                text: header.trim().to_string(),
            };
            let inner = parse_blocks(lines, depth + 1)?;
            items.push(Item::Block(Block {
                header,
                items: inner,
            }));
        } else {
            items.push(Item::Line(Line {
                number: line.number,
                text: text.to_string(),
            }));
        }
    }
    if depth != 0 {
        bail!("unexpected end of file inside a block");
    }
    Ok(items)
}

fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: i128 = n.trim().parse().context("rational numerator")?;
        let d: i128 = d.trim().parse().context("rational denominator")?;
        if d == 0 {
            bail!("rational with zero denominator");
        }
        Ok(BigRational::new(n.into(), d.into()))
    } else {
        let n: i128 = text.parse().with_context(|| format!("expected a rational, got `{text}`"))?;
        Ok(BigRational::from_integer(n.into()))
    }
}

pub fn parse_scene(source: &str, path: &str) -> Result<Scene> {
    parse_scene_with_overrides(source, path, None, None)
}

/// Parse with command-line overrides applied before any declaration is
/// validated, so the whole scene sees one consistent configuration.
pub fn parse_scene_with_overrides(
    source: &str,
    path: &str,
    seed: Option<u64>,
    samples: Option<u32>,
) -> Result<Scene> {
    let lines = source.lines().enumerate().map(|(i, l)| Line {
        number: i + 1,
        text: strip_comment(l).to_string(),
    });
    let items = parse_blocks(&mut lines.peekable(), 0)
        .with_context(|| format!("{path}: malformed block structure"))?;

    let mut scene = Scene::default();

    // settings first: they steer every later validation
    for item in &items {
        if let Item::Block(block) = item {
            if block.header.text.trim() == "settings" {
                apply_settings(&mut scene.settings, block)
                    .with_context(|| format!("{path}:{}", block.header.number))?;
            }
        }
    }
    if let Some(seed) = seed {
        scene.settings.seed = seed;
    }
    if let Some(samples) = samples {
        scene.settings.samples = samples;
    }

    for item in &items {
        match item {
            Item::Line(line) => {
                declare_line(&mut scene, line)
                    .with_context(|| format!("{path}:{}", line.number))?;
            }
            Item::Block(block) => {
                declare_block(&mut scene, block)
                    .with_context(|| format!("{path}:{}", block.header.number))?;
            }
        }
    }
    Ok(scene)
}

pub fn load_scene(path: &std::path::Path) -> Result<Scene> {
    load_scene_with_overrides(path, None, None)
}

pub fn load_scene_with_overrides(
    path: &std::path::Path,
    seed: Option<u64>,
    samples: Option<u32>,
) -> Result<Scene> {
    let source = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read scene `{}`", path.display()))?;
    parse_scene_with_overrides(&source, &path.display().to_string(), seed, samples)
}

fn apply_settings(ctx: &mut ZeroCtx, block: &Block) -> Result<()> {
    for item in &block.items {
        let Item::Line(line) = item else {
            bail!("settings does not contain nested blocks");
        };
        let tokens: Vec<&str> = line.text.split_whitespace().collect();
        match tokens.as_slice() {
            ["seed", v] => ctx.seed = v.parse().context("seed")?,
            ["samples", v] => ctx.samples = v.parse().context("samples")?,
            ["box", lo, hi] => {
                ctx.box_lo = lo.parse().context("box lower bound")?;
                ctx.box_hi = hi.parse().context("box upper bound")?;
            }
            ["tolerance", v] => ctx.tolerance = v.parse().context("tolerance")?,
            other => bail!("line {}: unknown setting {:?}", line.number, other),
        }
    }
    Ok(())
}

fn declare_line(scene: &mut Scene, line: &Line) -> Result<()> {
    let tokens: Vec<&str> = line.text.split_whitespace().collect();
    match tokens.as_slice() {
        ["const", name, "=", ..] => {
            let value = line.text.split_once('=').unwrap().1;
            scene
                .constants
                .insert(name.to_string(), parse_rational(value)?);
            Ok(())
        }
        _ => {
            if line.text.contains('{') {
                bail!(
                    "unknown declaration `{}` (blocks open with a line ending in `{{`)",
                    line.text
                );
            }
            bail!("unknown declaration `{}`", line.text)
        }
    }
}

fn expr(scene: &Scene, chart: &Chart, text: &str) -> Result<ScalarExpr> {
    parse_with_constants(text.trim(), chart, Some(&scene.constants))
        .map_err(|e| anyhow!("in `{}`: {e}", text.trim()))
}

fn expr_list(scene: &Scene, chart: &Chart, text: &str) -> Result<Vec<ScalarExpr>> {
    text.split(';').map(|part| expr(scene, chart, part)).collect()
}

/// `term [1 2] <expr>` -> indices and the coefficient text.
fn parse_term_line(text: &str) -> Result<(Vec<u32>, &str)> {
    let rest = text
        .strip_prefix("term")
        .ok_or_else(|| anyhow!("expected `term [indices] expr`"))?;
    let open = rest.find('[').ok_or_else(|| anyhow!("expected `[`"))?;
    let close = rest.find(']').ok_or_else(|| anyhow!("expected `]`"))?;
    let indices = rest[open + 1..close]
        .split_whitespace()
        .map(|t| t.parse::<u32>().context("index"))
        .collect::<Result<Vec<_>>>()?;
    Ok((indices, &rest[close + 1..]))
}

fn body_lines(block: &Block) -> impl Iterator<Item = &Line> {
    block.items.iter().filter_map(|i| match i {
        Item::Line(l) => Some(l),
        Item::Block(_) => None,
    })
}

fn body_blocks(block: &Block) -> impl Iterator<Item = &Block> {
    block.items.iter().filter_map(|i| match i {
        Item::Block(b) => Some(b),
        Item::Line(_) => None,
    })
}

fn declare_block(scene: &mut Scene, block: &Block) -> Result<()> {
    let header: Vec<&str> = block.header.text.split_whitespace().collect();
    match header.as_slice() {
        ["settings"] => Ok(()), // handled in the first pass
        ["chart", name] => {
            let mut coords: Vec<String> = Vec::new();
            for line in body_lines(block) {
                let tokens: Vec<&str> = line.text.split_whitespace().collect();
                match tokens.split_first() {
                    Some((&"coords", rest)) => {
                        coords.extend(rest.iter().map(|s| s.to_string()))
                    }
                    _ => bail!("line {}: expected `coords ...`", line.number),
                }
            }
            let chart = Chart::new(name, &coords)?;
            scene.charts.insert(name.to_string(), chart);
            Ok(())
        }
        ["form", name, "on", chart_name, "degree", degree] => {
            let chart = scene.chart(chart_name)?.clone();
            let degree: usize = degree.parse().context("degree")?;
            let mut terms = Vec::new();
            for line in body_lines(block) {
                let (indices, coeff) = parse_term_line(&line.text)
                    .with_context(|| format!("line {}", line.number))?;
                terms.push((indices, expr(scene, &chart, coeff)?));
            }
            let form = DifferentialForm::new(&chart, degree, terms)?;
            scene.forms.insert(name.to_string(), form);
            Ok(())
        }
        ["multivector", name, "on", chart_name, "degree", degree] => {
            let chart = scene.chart(chart_name)?.clone();
            let degree: usize = degree.parse().context("degree")?;
            let mut terms = Vec::new();
            for line in body_lines(block) {
                let (indices, coeff) = parse_term_line(&line.text)
                    .with_context(|| format!("line {}", line.number))?;
                terms.push((indices, expr(scene, &chart, coeff)?));
            }
            let mv = MultivectorField::new(&chart, degree, terms)?;
            scene.multivectors.insert(name.to_string(), mv);
            Ok(())
        }
        ["map", name, "from", src, "to", tgt] => {
            let source = scene.chart(src)?.clone();
            let target = scene.chart(tgt)?.clone();
            let mut comps = Vec::new();
            for line in body_lines(block) {
                let rest = line
                    .text
                    .strip_prefix("comp")
                    .ok_or_else(|| anyhow!("line {}: expected `comp <expr>`", line.number))?;
                comps.push(expr(scene, &source, rest)?);
            }
            let map = SmoothMap::new(&source, &target, comps)?;
            scene.maps.insert(name.to_string(), map);
            Ok(())
        }
        ["msstruct", name] => {
            let mut omega = None;
            let mut theta = None;
            for line in body_lines(block) {
                let tokens: Vec<&str> = line.text.split_whitespace().collect();
                match tokens.as_slice() {
                    ["omega", f] => omega = Some(scene.form(f)?.clone()),
                    ["theta", f] => theta = Some(scene.form(f)?.clone()),
                    other => bail!("line {}: unknown msstruct field {:?}", line.number, other),
                }
            }
            let omega = omega.ok_or_else(|| anyhow!("msstruct `{name}` needs an omega"))?;
            let ms = MultisymplecticStructure::new(omega, theta, &scene.settings)?;
            scene.msstructs.insert(name.to_string(), ms);
            Ok(())
        }
        ["action", name, "on", ms_name] => {
            let ms = scene.msstruct(ms_name)?.clone();
            let mut sign: i8 = -1;
            let mut generators: Vec<MultivectorField> = Vec::new();
            let mut brackets: Vec<(usize, usize, usize, BigRational)> = Vec::new();
            for line in body_lines(block) {
                let tokens: Vec<&str> = line.text.split_whitespace().collect();
                match tokens.split_first() {
                    Some((&"sign", [v])) => {
                        sign = v.parse().context("sign")?;
                    }
                    Some((&"generators", names)) => {
                        for n in names {
                            generators.push(scene.multivector(n)?.clone());
                        }
                    }
                    Some((&"bracket", rest)) => {
                        // bracket i j = l:c [l:c ...]   (1-based)
                        let [i, j, eq, ..] = rest else {
                            bail!("line {}: malformed bracket", line.number);
                        };
                        if *eq != "=" {
                            bail!("line {}: expected `=` in bracket", line.number);
                        }
                        let i: usize = i.parse().context("bracket index")?;
                        let j: usize = j.parse().context("bracket index")?;
                        for entry in &rest[3..] {
                            let (l, c) = entry
                                .split_once(':')
                                .ok_or_else(|| anyhow!("line {}: expected `l:c`", line.number))?;
                            let l: usize = l.parse().context("bracket target index")?;
                            brackets.push((i - 1, j - 1, l - 1, parse_rational(c)?));
                        }
                    }
                    other => bail!("line {}: unknown action field {:?}", line.number, other),
                }
            }
            let mut samples = Vec::new();
            for sub in body_blocks(block) {
                let sub_header: Vec<&str> = sub.header.text.split_whitespace().collect();
                let ["sample", label] = sub_header.as_slice() else {
                    bail!(
                        "line {}: unknown action sub-block `{}`",
                        sub.header.number,
                        sub.header.text
                    );
                };
                let mut map = None;
                let mut ad: Option<Vec<Vec<BigRational>>> = None;
                for line in body_lines(sub) {
                    let tokens: Vec<&str> = line.text.split_whitespace().collect();
                    match tokens.split_first() {
                        Some((&"map", [m])) => map = Some(scene.map(m)?.clone()),
                        Some((&"ad", _)) => {
                            let open = line.text.find('[').ok_or_else(|| {
                                anyhow!("line {}: expected `[rows; ...]`", line.number)
                            })?;
                            let close = line.text.rfind(']').unwrap_or(line.text.len());
                            let body = &line.text[open + 1..close];
                            let rows = body
                                .split(';')
                                .map(|row| {
                                    row.split_whitespace().map(parse_rational).collect()
                                })
                                .collect::<Result<Vec<Vec<_>>>>()?;
                            ad = Some(rows);
                        }
                        other => {
                            bail!("line {}: unknown sample field {:?}", line.number, other)
                        }
                    }
                }
                samples.push(GroupSample {
                    label: label.to_string(),
                    map: map.ok_or_else(|| anyhow!("sample `{label}` needs a map"))?,
                    ad: ad.ok_or_else(|| anyhow!("sample `{label}` needs an ad matrix"))?,
                });
            }
            let constants = StructureConstants::new(generators.len(), brackets)?;
            let action =
                LieAlgebraAction::new(ms, generators, constants, sign, samples, &scene.settings)?;
            scene.actions.insert(name.to_string(), action);
            Ok(())
        }
        ["submanifold", name] => {
            let mut embed = None;
            for line in body_lines(block) {
                let tokens: Vec<&str> = line.text.split_whitespace().collect();
                match tokens.as_slice() {
                    ["source", _] => {} // implied by the embedding map
                    ["embed", m] => embed = Some(scene.map(m)?.clone()),
                    other => bail!("line {}: unknown submanifold field {:?}", line.number, other),
                }
            }
            let embed = embed.ok_or_else(|| anyhow!("submanifold `{name}` needs an embedding"))?;
            let sub = Submanifold::new(embed, &scene.settings)?;
            scene.submanifolds.insert(name.to_string(), sub);
            Ok(())
        }
        ["reduction", name] => {
            let mut sub = None;
            let mut action_name = None;
            let mut isotropy = Vec::new();
            let mut quotient = None;
            let mut projection = None;
            let mut section = None;
            for line in body_lines(block) {
                let tokens: Vec<&str> = line.text.split_whitespace().collect();
                match tokens.split_first() {
                    Some((&"sub", [s])) => sub = Some(scene.submanifold(s)?.clone()),
                    Some((&"action", [a])) => {
                        scene.action(a)?;
                        action_name = Some(a.to_string());
                    }
                    Some((&"isotropy", rest)) => {
                        for r in rest {
                            let i: usize = r.parse().context("isotropy index")?;
                            isotropy.push(i - 1);
                        }
                    }
                    Some((&"quotient", [q])) => quotient = Some(scene.chart(q)?.clone()),
                    Some((&"projection", [p])) => projection = Some(scene.map(p)?.clone()),
                    Some((&"section", [s])) => section = Some(scene.map(s)?.clone()),
                    other => bail!("line {}: unknown reduction field {:?}", line.number, other),
                }
            }
            let rd = ReductionData::new(
                sub.ok_or_else(|| anyhow!("reduction `{name}` needs a submanifold"))?,
                isotropy,
                quotient.ok_or_else(|| anyhow!("reduction `{name}` needs a quotient chart"))?,
                projection.ok_or_else(|| anyhow!("reduction `{name}` needs a projection"))?,
                section.ok_or_else(|| anyhow!("reduction `{name}` needs a section"))?,
                &scene.settings,
            )?;
            let action_name =
                action_name.ok_or_else(|| anyhow!("reduction `{name}` needs an action"))?;
            scene
                .reductions
                .insert(name.to_string(), (action_name, rd));
            Ok(())
        }
        ["lagrangian", name] => declare_lagrangian(scene, name, block),
        other => bail!("unknown stanza {:?}", other),
    }
}

fn declare_lagrangian(scene: &mut Scene, name: &str, block: &Block) -> Result<()> {
    let mut base: Vec<String> = Vec::new();
    let mut fiber: Vec<String> = Vec::new();
    let mut density = None;
    let mut sign: i8 = -1;
    let mut section_lines: Vec<(String, String)> = Vec::new();
    let mut jet_symmetries: Vec<(String, String)> = Vec::new();
    let mut brackets: Vec<(usize, usize, usize, BigRational)> = Vec::new();
    for line in body_lines(block) {
        let tokens: Vec<&str> = line.text.split_whitespace().collect();
        match tokens.split_first() {
            Some((&"base", rest)) => base.extend(rest.iter().map(|s| s.to_string())),
            Some((&"fiber", rest)) => fiber.extend(rest.iter().map(|s| s.to_string())),
            Some((&"density", _)) => {
                density = Some(line.text.strip_prefix("density").unwrap().trim().to_string())
            }
            Some((&"section", rest)) => {
                let [sec_name, ..] = rest else {
                    bail!("line {}: malformed section", line.number);
                };
                let value = line
                    .text
                    .split_once('=')
                    .ok_or_else(|| anyhow!("line {}: expected `section name = expr`", line.number))?
                    .1;
                section_lines.push((sec_name.to_string(), value.to_string()));
            }
            Some((&"symmetry", [sym_name, "jet", mv])) => {
                jet_symmetries.push((sym_name.to_string(), mv.to_string()));
            }
            Some((&"sign", [v])) => sign = v.parse().context("sign")?,
            Some((&"bracket", rest)) => {
                let [i, j, eq, ..] = rest else {
                    bail!("line {}: malformed bracket", line.number);
                };
                if *eq != "=" {
                    bail!("line {}: expected `=` in bracket", line.number);
                }
                let i: usize = i.parse().context("bracket index")?;
                let j: usize = j.parse().context("bracket index")?;
                for entry in &rest[3..] {
                    let (l, c) = entry
                        .split_once(':')
                        .ok_or_else(|| anyhow!("line {}: expected `l:c`", line.number))?;
                    brackets.push((i - 1, j - 1, l.parse::<usize>()? - 1, parse_rational(c)?));
                }
            }
            other => bail!("line {}: unknown lagrangian field {:?}", line.number, other),
        }
    }
    let density = density.ok_or_else(|| anyhow!("lagrangian `{name}` needs a density"))?;
    // The jet chart is built first so the density parses with constants.
    let system = LagrangianSystem::new(
        name,
        &base.iter().map(String::as_str).collect::<Vec<_>>(),
        &fiber.iter().map(String::as_str).collect::<Vec<_>>(),
        "0",
        &scene.settings,
    )?;
    let density_expr = expr(scene, system.jet_chart(), &density)?;
    let system = LagrangianSystem::from_parts(
        system.base_chart().clone(),
        system.jet_chart().clone(),
        base.len(),
        fiber.len(),
        density_expr,
        &scene.settings,
    )?;

    let mut sections = Vec::new();
    for (sec_name, value) in section_lines {
        let comps = expr_list(scene, system.base_chart(), &value)?;
        sections.push((sec_name, FieldSection::new(&system, comps)?));
    }

    let mut symmetries: Vec<(String, MultivectorField)> = Vec::new();
    for sub in body_blocks(block) {
        let sub_header: Vec<&str> = sub.header.text.split_whitespace().collect();
        let ["symmetry", sym_name] = sub_header.as_slice() else {
            bail!(
                "line {}: unknown lagrangian sub-block `{}`",
                sub.header.number,
                sub.header.text
            );
        };
        let mut base_comps = None;
        let mut fiber_comps = None;
        for line in body_lines(sub) {
            match line.text.split_whitespace().next() {
                Some("base") => {
                    base_comps = Some(expr_list(
                        scene,
                        system.base_chart(),
                        line.text.strip_prefix("base").unwrap(),
                    )?)
                }
                Some("fiber") => {
                    fiber_comps = Some(expr_list(
                        scene,
                        system.jet_chart(),
                        line.text.strip_prefix("fiber").unwrap(),
                    )?)
                }
                _ => bail!("line {}: expected `base` or `fiber` components", line.number),
            }
        }
        let field = prolong_vector(
            &system,
            &base_comps.ok_or_else(|| anyhow!("symmetry `{sym_name}` needs base components"))?,
            &fiber_comps.ok_or_else(|| anyhow!("symmetry `{sym_name}` needs fiber components"))?,
        )?;
        symmetries.push((sym_name.to_string(), field));
    }
    for (sym_name, mv) in jet_symmetries {
        symmetries.push((sym_name, scene.multivector(&mv)?.clone()));
    }

    let constants = StructureConstants::new(symmetries.len(), brackets)?;
    let action = LieAlgebraAction::new(
        system.ms().clone(),
        symmetries.iter().map(|(_, f)| f.clone()).collect(),
        constants,
        sign,
        vec![],
        &scene.settings,
    )?;
    scene.lagrangians.insert(
        name.to_string(),
        LagrangianEntry {
            system,
            sections,
            symmetries,
            action,
        },
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_minimal_scene() {
        let text = r#"
# minimal
settings {
  seed 7
  samples 8
}
const half = 1/2
chart M {
  coords q p
}
form Omega on M degree 2 {
  term [1 2] 1
}
form H on M degree 0 {
  term [] half*(q^2 + p^2)
}
msstruct MS {
  omega Omega
}
"#;
        let scene = parse_scene(text, "inline").unwrap();
        assert_eq!(scene.settings.seed, 7);
        assert_eq!(scene.settings.samples, 8);
        assert_eq!(scene.chart("M").unwrap().dim(), 2);
        assert_eq!(scene.msstruct("MS").unwrap().k(), 1);
        // the named constant folded into the coefficient
        let h = scene.form("H").unwrap();
        assert_eq!(h.scalar_part().to_string(), "1/2*p^2 + 1/2*q^2");
    }

    #[test]
    fn jet_symmetries_reference_declared_multivectors() {
        // The auto-generated jet chart of `lagrangian L` is `L_jet` with
        // coordinates (x, y, u, u_x, u_y); declaring a chart with the same
        // name and coordinates lets a scene define jet fields directly.
        let text = r#"
chart L_jet {
  coords x y u u_x u_y
}
multivector Rot on L_jet degree 1 {
  term [1] -y
  term [2] x
  term [4] -u_y
  term [5] u_x
}
lagrangian L {
  base x y
  fiber u
  density (u_x^2 + u_y^2)/2
  section phi = x*y
  symmetry rot jet Rot
}
"#;
        let scene = parse_scene(text, "inline").unwrap();
        let entry = scene.lagrangian("L").unwrap();
        assert_eq!(entry.symmetries.len(), 1);
        let sym = multisym::lagfield::symmetry_check(
            &entry.system,
            &entry.symmetries[0].1,
            &scene.settings,
        )
        .unwrap();
        assert_eq!(sym.lagrangian_invariant, multisym::Tri::Yes);
    }

    #[test]
    fn define_before_use_is_enforced() {
        let text = "msstruct MS {\n  omega Missing\n}\n";
        let err = parse_scene(text, "inline").unwrap_err();
        assert!(format!("{err:#}").contains("unknown form"));
    }

    #[test]
    fn non_closed_structure_is_rejected_at_declaration() {
        let text = r#"
chart M {
  coords x y z
}
form Bad on M degree 2 {
  term [1 2] z
}
msstruct MS {
  omega Bad
}
"#;
        let err = parse_scene(text, "inline").unwrap_err();
        assert!(format!("{err:#}").contains("closed"), "{err:#}");
    }

    #[test]
    fn unbalanced_blocks_are_reported() {
        let err = parse_scene("chart M {\n coords q\n", "inline").unwrap_err();
        assert!(format!("{err:#}").contains("block"));
    }
}
