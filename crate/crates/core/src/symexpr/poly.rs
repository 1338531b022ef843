//! Sparse multivariate polynomials over exact rationals.
//!
//! The variables ("atoms") are either chart coordinates or transcendental
//! kernels (`sin u`, `cos u`, `exp u`, `ln u`) whose argument is a canonical
//! expression tree. Over the coordinate atoms this is an honest polynomial
//! ring; kernel atoms are treated as independent variables after structural
//! normalization, with two rewrites applied during multiplication:
//!
//! * `sin(u)^2 -> 1 - cos(u)^2` (so the sine-degree per kernel argument
//!   stays below 2),
//! * products of `exp` kernels combine into a single `exp` of the summed
//!   arguments.
//!
//! Monomials are ordered by graded lexicographic order; the leading term of
//! a polynomial is its maximum under that order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use super::{ratfn, ScalarExpr};

/// Transcendental kernel tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KernelKind {
    Sin,
    Cos,
    Exp,
    Ln,
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelKind::Sin => write!(f, "sin"),
            KernelKind::Cos => write!(f, "cos"),
            KernelKind::Exp => write!(f, "exp"),
            KernelKind::Ln => write!(f, "ln"),
        }
    }
}

/// A polynomial variable: a coordinate symbol or a transcendental kernel
/// applied to a canonical argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Coord(std::sync::Arc<str>),
    Kernel(KernelKind, ScalarExpr),
}

impl Atom {
    pub fn is_coord(&self) -> bool {
        matches!(self, Atom::Coord(_))
    }
}

/// Exponent vector, sorted by atom; every exponent is >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub(crate) Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn from_atom(a: Atom) -> Monomial {
        Monomial(vec![(a, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|(_, e)| *e as u64).sum()
    }

    pub fn exponent(&self, a: &Atom) -> u32 {
        self.0
            .iter()
            .find(|(b, _)| b == a)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter().map(|(a, _)| a)
    }

    /// Raw product: merge exponent vectors. No kernel rewrites.
    pub fn mul_raw(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(Atom, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Divide exactly if `other` divides `self`.
    pub fn div_exact(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::new();
        let mut j = 0;
        for (a, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == *a {
                let oe = other.0[j].1;
                j += 1;
                if oe > *e {
                    return None;
                }
                if oe < *e {
                    out.push((a.clone(), e - oe));
                }
            } else {
                out.push((a.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        let mut j = 0;
        for (a, e) in &self.0 {
            while j < other.0.len() && other.0[j].0 < *a {
                j += 1;
            }
            if j < other.0.len() && other.0[j].0 == *a {
                out.push((a.clone(), (*e).min(other.0[j].1)));
            }
        }
        Monomial(out)
    }

    fn without(&self, atom: &Atom) -> Monomial {
        Monomial(self.0.iter().filter(|(a, _)| a != atom).cloned().collect())
    }

    fn with_exponent(&self, atom: &Atom, e: u32) -> Monomial {
        let mut m = self.without(atom);
        if e > 0 {
            let pos = m.0.partition_point(|(a, _)| a < atom);
            m.0.insert(pos, (atom.clone(), e));
        }
        m
    }
}

/// Graded lexicographic: compare total degree, then exponents along the atom
/// order (larger exponent on the earlier atom wins).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((a, ea)), Some((b, eb))) => match a.cmp(b) {
                    // The earlier atom appears only on one side: that side has
                    // a positive exponent where the other has zero.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        match ea.cmp(eb) {
                            Ordering::Equal => {}
                            ord => return ord,
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; invariant: no stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn from_atom(a: Atom) -> Poly {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::from_atom(a), BigRational::one());
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn as_constant(&self) -> Option<&BigRational> {
        if self.terms.is_empty() {
            None
        } else if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                Some(c)
            } else {
                None
            }
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.leading().map(|(_, c)| c)
    }

    pub fn atoms(&self) -> BTreeSet<&Atom> {
        self.terms.keys().flat_map(|m| m.atoms()).collect()
    }

    pub fn has_kernel(&self) -> bool {
        self.terms
            .keys()
            .any(|m| m.atoms().any(|a| !a.is_coord()))
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Raw product in the free ring: no kernel rewrites. This is what the
    /// fraction-free elimination uses (exact division must stay in the free
    /// ring).
    pub fn mul_raw(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul_raw(mb), ca * cb);
            }
        }
        out
    }

    /// Canonical product: raw product followed by the kernel rewrites.
    pub fn mul(&self, other: &Poly) -> Poly {
        canonicalize(self.mul_raw(other))
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn pow_raw(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul_raw(self);
        }
        out
    }

    /// gcd of the rational coefficients (gcd of numerators over lcm of
    /// denominators), with the sign of the leading coefficient.
    pub fn rational_content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num::Integer::gcd(&num_gcd, c.numer());
            den_lcm = num::Integer::lcm(&den_lcm, c.denom());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading_coeff().unwrap().is_negative() {
            content = -content;
        }
        content
    }

    /// Divide all coefficients by the rational content; leading coefficient
    /// becomes positive and the integer coefficients coprime.
    pub fn primitive_rational(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let content = self.rational_content();
        self.scale(&content.recip())
    }

    /// Exact polynomial division in the free ring; `None` if not divisible.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = divisor.leading().unwrap();
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().unwrap();
            let qm = rm.div_exact(dm)?;
            let qc = rc / dc;
            let mut t = Poly::zero();
            t.add_term(qm, qc);
            rem = rem.sub(&t.mul_raw(divisor));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Degree in one atom.
    pub fn degree_in(&self, atom: &Atom) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(atom))
            .max()
            .unwrap_or(0)
    }

    /// View as a univariate polynomial in `atom`: exponent -> coefficient.
    pub fn coeffs_in(&self, atom: &Atom) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(atom);
            out.entry(e)
                .or_default()
                .add_term(m.with_exponent(atom, 0), c.clone());
        }
        out
    }

    fn from_coeffs_in(atom: &Atom, coeffs: &BTreeMap<u32, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (e, p) in coeffs {
            for (m, c) in &p.terms {
                out.add_term(m.with_exponent(atom, m.exponent(atom) + e), c.clone());
            }
        }
        out
    }
}

/// Apply the kernel rewrites until stable: reduce `sin(u)^k` for `k >= 2`
/// and merge `exp` factors inside each monomial.
pub fn canonicalize(p: Poly) -> Poly {
    let mut p = p;
    loop {
        let mut changed = false;

        // exp merging first: it never raises sine degrees.
        let mut next = Poly::zero();
        for (m, c) in &p.terms {
            let exps: Vec<(ScalarExpr, u32)> = m
                .0
                .iter()
                .filter_map(|(a, e)| match a {
                    Atom::Kernel(KernelKind::Exp, arg) => Some((arg.clone(), *e)),
                    _ => None,
                })
                .collect();
            let needs_merge = exps.len() > 1 || exps.iter().any(|(_, e)| *e > 1);
            if !needs_merge {
                next.add_term(m.clone(), c.clone());
                continue;
            }
            changed = true;
            let mut stripped = Monomial(
                m.0.iter()
                    .filter(|(a, _)| !matches!(a, Atom::Kernel(KernelKind::Exp, _)))
                    .cloned()
                    .collect(),
            );
            let mut total = ratfn::RatFn::zero();
            for (arg, e) in &exps {
                let arg_rf = ratfn::to_ratfn(arg).expect("canonical kernel argument");
                total = total.add(&arg_rf.scale(&BigRational::from_integer(BigInt::from(*e))));
            }
            if !total.is_zero() {
                let atom = Atom::Kernel(KernelKind::Exp, ratfn::ratfn_to_expr(&total));
                stripped = stripped.mul_raw(&Monomial::from_atom(atom));
            }
            next.add_term(stripped, c.clone());
        }
        p = next;

        // sin(u)^2 -> 1 - cos(u)^2
        loop {
            let target = p.terms.iter().find_map(|(m, _)| {
                m.0.iter().find_map(|(a, e)| match a {
                    Atom::Kernel(KernelKind::Sin, arg) if *e >= 2 => {
                        Some((m.clone(), a.clone(), arg.clone(), *e))
                    }
                    _ => None,
                })
            });
            let Some((m, sin_atom, arg, e)) = target else {
                break;
            };
            changed = true;
            let c = p.terms.remove(&m).unwrap();
            let base = m.with_exponent(&sin_atom, e - 2);
            let cos2 = Monomial(vec![(Atom::Kernel(KernelKind::Cos, arg), 2)]);
            // c * base * (1 - cos(u)^2)
            p.add_term(base.clone(), c.clone());
            p.add_term(base.mul_raw(&cos2), -c);
        }

        if !changed {
            break;
        }
    }
    p
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", ratfn::poly_to_expr(self))
    }
}

/// Polynomial gcd, primitive and with positive leading coefficient.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive_rational();
    }
    if b.is_zero() {
        return a.primitive_rational();
    }
    let atoms: BTreeSet<Atom> = a.atoms().into_iter().chain(b.atoms()).cloned().collect();
    let Some(main) = atoms.into_iter().next_back() else {
        return Poly::one();
    };
    gcd_univariate(a, b, &main)
}

fn content_in(p: &Poly, atom: &Atom) -> Poly {
    let coeffs = p.coeffs_in(atom);
    let mut g = Poly::zero();
    for c in coeffs.values() {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn gcd_univariate(a: &Poly, b: &Poly, x: &Atom) -> Poly {
    let cont_a = content_in(a, x);
    let cont_b = content_in(b, x);
    let c = gcd(&cont_a, &cont_b);
    let mut u = a.exact_div(&cont_a).expect("content divides");
    let mut v = b.exact_div(&cont_b).expect("content divides");
    if u.degree_in(x) < v.degree_in(x) {
        std::mem::swap(&mut u, &mut v);
    }
    while !v.is_zero() {
        let r = pseudo_rem(&u, &v, x);
        u = v;
        v = if r.is_zero() {
            Poly::zero()
        } else {
            let cont = content_in(&r, x);
            r.exact_div(&cont).expect("content divides")
        };
    }
    let prim = {
        let cont = content_in(&u, x);
        u.exact_div(&cont).expect("content divides")
    };
    c.mul_raw(&prim).primitive_rational()
}

/// Pseudo-remainder of `u` by `v` in the variable `x`.
fn pseudo_rem(u: &Poly, v: &Poly, x: &Atom) -> Poly {
    let dv = v.degree_in(x);
    let v_coeffs = v.coeffs_in(x);
    let lcv = v_coeffs.get(&dv).cloned().unwrap_or_default();
    let mut r = u.clone();
    while !r.is_zero() {
        let dr = r.degree_in(x);
        if dr < dv {
            break;
        }
        let r_coeffs = r.coeffs_in(x);
        let lcr = r_coeffs.get(&dr).cloned().unwrap_or_default();
        // r := lcv * r - lcr * x^(dr-dv) * v
        let mut shift: BTreeMap<u32, Poly> = BTreeMap::new();
        shift.insert(dr - dv, lcr);
        let shifted = Poly::from_coeffs_in(x, &shift).mul_raw(v);
        r = r.mul_raw(&lcv).sub(&shifted);
    }
    r
}
