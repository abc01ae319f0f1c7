//! Exact polygons of admissible `(1/p, 1/q)`.
//!
//! Every constraint is a half-plane `a*x + b*y >= c` with `x = 1/p`,
//! `y = 1/q`, intersected with the unit square.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::classify::{classify, CaseLabel, ClassifyError, SurfaceInvariants};
use crate::factor::{factor_decomposition, is_linearly_adapted, linearly_adapt, FactorError};
use crate::newton::newton_data;
use crate::poly::{int, mixed_weight, BivarPoly, Rational};

pub type Point = (Rational, Rational);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("case {0} has no region of this form; use the excluded-region builder")]
    ExcludedCase(CaseLabel),
    #[error("the polynomial is not linearly adapted")]
    AdaptationRequired,
    #[error("consistency failure ({lemma}): {detail}")]
    ConsistencyFailure { lemma: String, detail: String },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

fn consistency(lemma: &str, detail: impl Into<String>) -> RegionError {
    RegionError::ConsistencyFailure { lemma: lemma.into(), detail: detail.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlane {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub tag: &'static str,
}

impl HalfPlane {
    pub fn new(a: Rational, b: Rational, c: Rational, tag: &'static str) -> Self {
        assert!(!(a.is_zero() && b.is_zero()), "degenerate half-plane {tag}");
        Self { a, b, c, tag }
    }

    /// `y >= slope*x - offset`.
    pub fn above(slope: Rational, offset: Rational, tag: &'static str) -> Self {
        Self::new(-slope, Rational::one(), -offset, tag)
    }

    pub fn slack(&self, p: &Point) -> Rational {
        &self.a * &p.0 + &self.b * &p.1 - &self.c
    }

    pub fn contains(&self, p: &Point) -> bool {
        !self.slack(p).is_negative()
    }

    pub fn is_tight(&self, p: &Point) -> bool {
        self.slack(p).is_zero()
    }

    fn intersect(&self, o: &Self) -> Option<Point> {
        let det = &self.a * &o.b - &o.a * &self.b;
        if det.is_zero() {
            return None;
        }
        let x = (&self.c * &o.b - &o.c * &self.b) / &det;
        let y = (&self.a * &o.c - &o.a * &self.c) / &det;
        Some((x, y))
    }
}

fn unit_box() -> Vec<HalfPlane> {
    vec![
        HalfPlane::new(int(1), int(0), int(0), "box"),
        HalfPlane::new(int(-1), int(0), int(-1), "box"),
        HalfPlane::new(int(0), int(1), int(0), "box"),
        HalfPlane::new(int(0), int(-1), int(-1), "box"),
    ]
}

fn basic() -> Vec<HalfPlane> {
    vec![
        HalfPlane::new(int(1), int(-1), int(0), "q_ge_p"),
        HalfPlane::above(Rational::new(1.into(), 3.into()), int(0), "q_le_3p"),
        HalfPlane::above(int(3), int(2), "q_le_3p_dual"),
    ]
}

fn recip(q: Rational) -> Rational {
    Rational::one() / q
}

/// `y >= (k+1)/(2k+1) x - 1/(2k+1)` and its dual.
fn curved_pair(k: &Rational, tag: &'static str, dual_tag: &'static str) -> [HalfPlane; 2] {
    let one = Rational::one();
    let two_k1 = int(2) * k + &one;
    let k1 = k + &one;
    [
        HalfPlane::above(&k1 / &two_k1, recip(two_k1.clone()), tag),
        HalfPlane::above(&two_k1 / &k1, one, dual_tag),
    ]
}

/// `y >= (k+1)/(k+2) x - 1/(k+2)` and its dual.
fn height_pair(k: &Rational, tag: &'static str, dual_tag: &'static str) -> [HalfPlane; 2] {
    let k1 = k + Rational::one();
    let k2 = k + int(2);
    [
        HalfPlane::above(&k1 / &k2, recip(k2.clone()), tag),
        HalfPlane::above(&k2 / &k1, int(2) / &k1, dual_tag),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorParams {
    pub d_h: Rational,
    pub nu: u32,
    pub a: u32,
    pub n: u32,
}

pub fn factor_constraints(p: &FactorParams) -> Vec<HalfPlane> {
    let mut cs = basic();
    cs.push(HalfPlane::above(int(1), recip(&p.d_h + int(1)), "scaling"));
    cs.push(HalfPlane::above(int(1), recip(int(p.nu as i64 + 1)), "nu"));
    cs.extend(curved_pair(&int(p.a as i64), "A", "A_dual"));
    cs.extend(height_pair(&int(p.n as i64), "N", "N_dual"));
    if p.n > 0 {
        cs.push(HalfPlane::above(int(1), recip(int(p.n as i64)), "N_inverse"));
    }
    cs
}

pub fn newton_constraints(d_phi: &Rational, d_r: Option<&Rational>, h: &Rational) -> Vec<HalfPlane> {
    let mut cs = basic();
    cs.push(HalfPlane::above(int(1), recip(d_phi + int(1)), "newton_distance"));
    if let Some(d) = d_r {
        cs.extend(curved_pair(d, "reduced_distance", "reduced_distance_dual"));
    }
    cs.extend(height_pair(h, "height", "height_dual"));
    cs.push(HalfPlane::above(int(1), recip(h.clone()), "height_inverse"));
    cs
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub tag: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RieszRegion {
    /// Counterclockwise, starting at the origin.
    pub vertices: Vec<Point>,
    pub edges: Vec<Edge>,
    pub constraints: Vec<HalfPlane>,
    /// The `p = q` segment.
    pub degenerate: bool,
}

fn half(v: &Point) -> u8 {
    if v.1.is_positive() || (v.1.is_zero() && v.0.is_positive()) {
        0
    } else {
        1
    }
}

fn cross(u: &Point, v: &Point) -> Rational {
    &u.0 * &v.1 - &u.1 * &v.0
}

fn sub(a: &Point, b: &Point) -> Point {
    (&a.0 - &b.0, &a.1 - &b.1)
}

impl RieszRegion {
    pub fn from_constraints(constraints: Vec<HalfPlane>) -> Self {
        let mut all = constraints.clone();
        all.extend(unit_box());
        let mut pts: BTreeSet<Point> = BTreeSet::new();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if let Some(p) = all[i].intersect(&all[j]) {
                    if all.iter().all(|h| h.contains(&p)) {
                        pts.insert(p);
                    }
                }
            }
        }
        let mut vs: Vec<Point> = pts.into_iter().collect();
        if vs.len() >= 3 {
            let n = int(vs.len() as i64);
            let cx = vs.iter().fold(Rational::zero(), |acc, p| acc + &p.0) / &n;
            let cy = vs.iter().fold(Rational::zero(), |acc, p| acc + &p.1) / &n;
            let c = (cx, cy);
            vs.sort_by(|p, q| {
                let (u, v) = (sub(p, &c), sub(q, &c));
                half(&u).cmp(&half(&v)).then_with(|| {
                    let x = cross(&u, &v);
                    if x.is_positive() {
                        Ordering::Less
                    } else if x.is_negative() {
                        Ordering::Greater
                    } else {
                        Ordering::Equal
                    }
                })
            });
            // Drop points in the middle of an edge.
            let mut i = 0;
            while vs.len() >= 3 && i < vs.len() {
                let n = vs.len();
                let (a, b, d) = (&vs[(i + n - 1) % n], &vs[i], &vs[(i + 1) % n]);
                if cross(&sub(b, a), &sub(d, b)).is_zero() {
                    vs.remove(i);
                } else {
                    i += 1;
                }
            }
            let origin = (Rational::zero(), Rational::zero());
            let start = vs.iter().position(|p| *p == origin).unwrap_or(0);
            vs.rotate_left(start);
        }
        let mut region = Self { vertices: vs, edges: Vec::new(), constraints, degenerate: false };
        region.edges = region.tag_edges(&all);
        region
    }

    fn tag_edges(&self, all: &[HalfPlane]) -> Vec<Edge> {
        let n = self.vertices.len();
        if n < 2 {
            return Vec::new();
        }
        let count = if n == 2 { 1 } else { n };
        (0..count)
            .map(|i| {
                let j = (i + 1) % n;
                let (p, q) = (&self.vertices[i], &self.vertices[j]);
                let tag = all
                    .iter()
                    .filter(|h| h.is_tight(p) && h.is_tight(q))
                    .map(|h| h.tag)
                    .find(|t| *t != "box")
                    .unwrap_or("box");
                Edge { from: i, to: j, tag }
            })
            .collect()
    }

    pub fn diagonal() -> Self {
        let vertices = vec![(int(0), int(0)), (int(1), int(1))];
        Self {
            vertices,
            edges: vec![Edge { from: 0, to: 1, tag: "p_eq_q" }],
            constraints: Vec::new(),
            degenerate: true,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        if self.degenerate {
            return p.0 == p.1 && !p.0.is_negative() && p.0 <= Rational::one();
        }
        let inside_box = !p.0.is_negative() && !p.1.is_negative() && p.0 <= int(1) && p.1 <= int(1);
        inside_box && self.constraints.iter().all(|h| h.contains(p))
    }

    /// Vertex set invariant under `(x, y) -> (1 - y, 1 - x)`.
    pub fn is_self_dual(&self) -> bool {
        let set: BTreeSet<&Point> = self.vertices.iter().collect();
        self.vertices
            .iter()
            .all(|(x, y)| set.contains(&(int(1) - y, int(1) - x)))
    }

    pub fn vertex_set(&self) -> BTreeSet<Point> {
        self.vertices.iter().cloned().collect()
    }
}

fn excluded(case: CaseLabel) -> Result<(), RegionError> {
    if case.is_excluded() {
        Err(RegionError::ExcludedCase(case))
    } else {
        Ok(())
    }
}

pub fn factor_params(inv: &SurfaceInvariants) -> Result<FactorParams, RegionError> {
    excluded(inv.case)?;
    let d_h = inv.d_h().cloned().ok_or(RegionError::ExcludedCase(inv.case))?;
    Ok(FactorParams { d_h, nu: inv.nu, a: inv.a, n: inv.n })
}

pub fn region_factor_form(inv: &SurfaceInvariants) -> Result<RieszRegion, RegionError> {
    Ok(RieszRegion::from_constraints(factor_constraints(&factor_params(inv)?)))
}

pub fn region_newton_form(d_phi: &Rational, d_r: Option<&Rational>, h: &Rational) -> RieszRegion {
    RieszRegion::from_constraints(newton_constraints(d_phi, d_r, h))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonInputs {
    pub d_phi: Rational,
    pub d_r: Option<Rational>,
    pub o_phi: u32,
    pub h: Rational,
}

/// Newton-form inputs of an adapted polynomial.
pub fn newton_inputs(phi: &BivarPoly) -> Result<NewtonInputs, RegionError> {
    let w = mixed_weight(phi).map_err(ClassifyError::from)?;
    if !is_linearly_adapted(phi, &w)? {
        return Err(RegionError::AdaptationRequired);
    }
    let nd = newton_data(&phi.support());
    let o_phi = factor_decomposition(phi, &w)?.max_real_multiplicity();
    let o = int(o_phi as i64);
    let h = if o > nd.d_phi { o } else { nd.d_phi.clone() };
    Ok(NewtonInputs { d_phi: nd.d_phi, d_r: nd.d_r, o_phi, h })
}

pub fn region_newton_form_for(phi: &BivarPoly) -> Result<RieszRegion, RegionError> {
    let ni = newton_inputs(phi)?;
    Ok(region_newton_form(&ni.d_phi, ni.d_r.as_ref(), &ni.h))
}

/// Both formulations for `phi`, adapting homogeneous inputs first.
pub fn both_forms(phi: &BivarPoly) -> Result<(RieszRegion, RieszRegion), RegionError> {
    let inv = classify(phi)?;
    let factor = region_factor_form(&inv)?;
    let (adapted, _) = linearly_adapt(phi)?;
    let newton = region_newton_form_for(&adapted)?;
    Ok((factor, newton))
}

pub fn equivalence_check(phi: &BivarPoly) -> Result<bool, RegionError> {
    let (f, n) = both_forms(phi)?;
    Ok(f.vertices == n.vertices)
}

/// Region for `z1^J` (any polynomial with vanishing Hessian after a linear
/// change of variables), or the diagonal for the zero polynomial.
pub fn excluded_region(case: CaseLabel) -> RieszRegion {
    let j = match case {
        CaseLabel::ExcludedMonomialPower(j) | CaseLabel::ExcludedLinearPower(j) => j,
        _ => return RieszRegion::diagonal(),
    };
    let half = Rational::new(1.into(), 2.into());
    RieszRegion::from_constraints(vec![
        HalfPlane::new(int(1), int(-1), int(0), "q_ge_p"),
        HalfPlane::above(half, int(0), "q_le_2p"),
        HalfPlane::above(int(2), int(1), "q_le_2p_dual"),
        HalfPlane::above(int(1), recip(int(j as i64 + 1)), "monomial_power"),
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcase {
    AInt,
    NInt,
    NQEqPPrime,
    AQEqPPrime,
    NTwoThirdsOneThird,
    NQEq2PScal,
    NQEq2PNeqScal,
}

impl fmt::Display for Subcase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subcase::AInt => "A_Int",
            Subcase::NInt => "N_Int",
            Subcase::NQEqPPrime => "N_q=p'",
            Subcase::AQEqPPrime => "A_q=p'",
            Subcase::NTwoThirdsOneThird => "N_(2/3,1/3)",
            Subcase::NQEq2PScal => "N_q=2p_scal",
            Subcase::NQEq2PNeqScal => "N_q=2p_neq_scal",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexInfo {
    pub index: usize,
    pub point: Point,
    pub relevant: bool,
    pub on_scaling_line: bool,
    pub subcase: Option<Subcase>,
}

/// Closed-form first relevant vertex on `y = x/3`.
pub fn first_vertex_formula(inv: &SurfaceInvariants) -> Point {
    let k = if inv.case.is_rectangular() { int(inv.t as i64) } else { inv.d_omega.clone() };
    let den = k + int(4);
    (int(3) / &den, int(1) / &den)
}

/// Closed-form second relevant vertex in cases A and N.
pub fn second_vertex_subcase(inv: &SurfaceInvariants) -> Result<(Subcase, Point), RegionError> {
    let d_h = inv.d_h().cloned().ok_or(RegionError::ExcludedCase(inv.case))?;
    let d1 = &d_h + int(1);
    let one = Rational::one();
    match inv.case {
        CaseLabel::CaseA => {
            let t = int(inv.t as i64);
            let den = &d1 * (&t + int(2));
            let x = (int(2) * &t + int(5) - &d1) / &den;
            let y = (&t + int(3) - &d1) / &den;
            let sub = if &x + &y == one { Subcase::AQEqPPrime } else { Subcase::AInt };
            Ok((sub, (x, y)))
        }
        CaseLabel::CaseN => {
            let n = int(inv.n as i64);
            if n < d1 {
                let x = (&n + int(1) - &d_h) / &d1;
                let y = (&n - &d_h) / &d1;
                let sub = if &x + &y == one { Subcase::NQEqPPrime } else { Subcase::NInt };
                Ok((sub, (x, y)))
            } else {
                let p = (int(2) / &n, int(1) / &n);
                let sub = if p == (Rational::new(2.into(), 3.into()), Rational::new(1.into(), 3.into())) {
                    Subcase::NTwoThirdsOneThird
                } else if n == d1 {
                    Subcase::NQEq2PScal
                } else {
                    Subcase::NQEq2PNeqScal
                };
                Ok((sub, p))
            }
        }
        other => Err(RegionError::ExcludedCase(other)),
    }
}

/// Annotates vertices and checks the closed forms for the relevant ones.
pub fn relevant_vertices(region: &RieszRegion, inv: &SurfaceInvariants) -> Result<Vec<VertexInfo>, RegionError> {
    excluded(inv.case)?;
    let d_h = inv.d_h().cloned().ok_or(RegionError::ExcludedCase(inv.case))?;
    let scal = recip(&d_h + int(1));
    let mut infos: Vec<VertexInfo> = region
        .vertices
        .iter()
        .enumerate()
        .map(|(index, p)| VertexInfo {
            index,
            point: p.clone(),
            relevant: p.1 < p.0 && &p.0 + &p.1 <= int(1),
            on_scaling_line: p.1 == &p.0 - &scal,
            subcase: None,
        })
        .collect();
    let mut rel: Vec<usize> = infos.iter().filter(|v| v.relevant).map(|v| v.index).collect();
    rel.sort_by(|&i, &j| infos[i].point.0.cmp(&infos[j].point.0));

    let want = first_vertex_formula(inv);
    match rel.first() {
        Some(&i) if infos[i].point == want => {}
        _ => {
            return Err(consistency(
                "first relevant vertex",
                format!("expected ({}, {}) among the relevant vertices", want.0, want.1),
            ))
        }
    }
    if matches!(inv.case, CaseLabel::CaseA | CaseLabel::CaseN) {
        let (sub, p) = second_vertex_subcase(inv)?;
        match rel.get(1) {
            Some(&i) if infos[i].point == p => infos[i].subcase = Some(sub),
            _ => {
                return Err(consistency(
                    "second relevant vertex",
                    format!("expected ({}, {}) as the second relevant vertex", p.0, p.1),
                ))
            }
        }
    }
    Ok(infos)
}

pub fn rational_json(q: &Rational) -> [Value; 2] {
    let conv = |b: &num_bigint::BigInt| match b.to_i64() {
        Some(v) => json!(v),
        None => json!(b.to_string()),
    };
    [conv(q.numer()), conv(q.denom())]
}

pub fn point_json(p: &Point) -> Value {
    let [a, b] = rational_json(&p.0);
    let [c, d] = rational_json(&p.1);
    json!([a, b, c, d])
}

/// `{vertices, edges, relevant, subcase, degenerate}` with exact `[num, den]` pairs.
pub fn region_json(region: &RieszRegion, infos: &[VertexInfo]) -> Value {
    let vertices: Vec<Value> = region.vertices.iter().map(point_json).collect();
    let edges: Vec<Value> = region
        .edges
        .iter()
        .map(|e| json!({"from": e.from, "to": e.to, "condition_tag": e.tag}))
        .collect();
    let relevant: Vec<Value> = infos
        .iter()
        .filter(|v| v.relevant)
        .map(|v| {
            json!({
                "index": v.index,
                "point": point_json(&v.point),
                "on_scaling_line": v.on_scaling_line,
                "subcase": v.subcase.map(|s| s.to_string()),
            })
        })
        .collect();
    let subcase = infos.iter().find_map(|v| v.subcase).map(|s| s.to_string());
    json!({
        "vertices": vertices,
        "edges": edges,
        "relevant": relevant,
        "subcase": subcase,
        "degenerate": region.degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::poly::rat;
    use proptest::prelude::*;

    fn pts(v: &[(i64, i64, i64, i64)]) -> Vec<Point> {
        v.iter().map(|&(a, b, c, d)| (rat(a, b), rat(c, d))).collect()
    }

    fn factor_region(s: &str) -> (RieszRegion, SurfaceInvariants) {
        let inv = classify(&parse(s).unwrap()).unwrap();
        (region_factor_form(&inv).unwrap(), inv)
    }

    #[test]
    fn factor_form_fixtures() {
        let (r, _) = factor_region("z1*z2");
        assert_eq!(r.vertices, pts(&[(0, 1, 0, 1), (3, 4, 1, 4), (1, 1, 1, 1)]));
        let (r, _) = factor_region("(z2 - z1^2)^2");
        assert_eq!(
            r.vertices,
            pts(&[(0, 1, 0, 1), (3, 5, 1, 5), (5, 7, 2, 7), (4, 5, 2, 5), (1, 1, 1, 1)])
        );
        let (r, _) = factor_region("z1^4 + z1^2*z2 + 1/6*z2^2");
        assert_eq!(r.vertices, pts(&[(0, 1, 0, 1), (9, 14, 3, 14), (11, 14, 5, 14), (1, 1, 1, 1)]));
    }

    #[test]
    fn newton_form_fixtures() {
        let f = parse("(z2 - z1^2)^2").unwrap();
        let ni = newton_inputs(&f).unwrap();
        assert_eq!((ni.d_phi.clone(), ni.d_r.clone(), ni.h.clone()), (rat(4, 3), Some(int(2)), int(2)));
        assert!(equivalence_check(&f).unwrap());
        let f = parse("z1^2 + z2^3").unwrap();
        let ni = newton_inputs(&f).unwrap();
        assert_eq!((ni.d_phi.clone(), ni.d_r.clone(), ni.h.clone()), (rat(6, 5), Some(int(3)), rat(6, 5)));
        assert!(equivalence_check(&f).unwrap());
        assert!(equivalence_check(&parse("z1*z2").unwrap()).unwrap());
        assert!(equivalence_check(&parse("(z2 - z1^2)^3").unwrap()).unwrap());
        let g = parse("z1*(z2 - z1)^3").unwrap();
        assert_eq!(newton_inputs(&g), Err(RegionError::AdaptationRequired));
        assert!(equivalence_check(&g).unwrap());
    }

    #[test]
    fn relevant_and_subcases() {
        let (r, inv) = factor_region("(z2 - z1^2)^2");
        let rel: Vec<_> = relevant_vertices(&r, &inv).unwrap().into_iter().filter(|v| v.relevant).collect();
        assert_eq!(rel[0].point, (rat(3, 5), rat(1, 5)));
        assert_eq!(rel[1].point, (rat(5, 7), rat(2, 7)));
        assert_eq!(rel[1].subcase, Some(Subcase::NQEqPPrime));
        assert!(rel[1].on_scaling_line);

        let (r, inv) = factor_region("(z2 - z1^2)^3");
        let rel: Vec<_> = relevant_vertices(&r, &inv).unwrap().into_iter().filter(|v| v.relevant).collect();
        assert_eq!(rel[0].point, (rat(3, 7), rat(1, 7)));
        assert_eq!(rel[1].point, (rat(2, 3), rat(1, 3)));
        assert_eq!(rel[1].subcase, Some(Subcase::NTwoThirdsOneThird));

        for s in ["z1^2 + z2^3", "z1^2 - z2^3"] {
            let (r, inv) = factor_region(s);
            let rel: Vec<_> = relevant_vertices(&r, &inv).unwrap().into_iter().filter(|v| v.relevant).collect();
            assert_eq!(rel[1].point, (rat(8, 11), rat(3, 11)));
            assert_eq!(rel[1].subcase, Some(Subcase::AQEqPPrime));
        }

        let (r, inv) = factor_region("z1^4 + z1^2*z2 + 1/6*z2^2");
        let rel: Vec<_> = relevant_vertices(&r, &inv).unwrap().into_iter().filter(|v| v.relevant).collect();
        assert_eq!(rel.len(), 1);
        assert_eq!(rel[0].point, (rat(9, 14), rat(3, 14)));
    }

    #[test]
    fn excluded_regions() {
        let r = excluded_region(CaseLabel::ExcludedMonomialPower(2));
        assert_eq!(r.vertices, pts(&[(0, 1, 0, 1), (2, 3, 1, 3), (1, 1, 1, 1)]));
        let r = excluded_region(CaseLabel::ExcludedMonomialPower(4));
        // x/2 meets x - 1/5 at (2/5, 1/5); 2x - 1 meets it at (4/5, 3/5).
        assert_eq!(r.vertices, pts(&[(0, 1, 0, 1), (2, 5, 1, 5), (4, 5, 3, 5), (1, 1, 1, 1)]));
        let z = excluded_region(CaseLabel::ExcludedZero);
        assert!(z.degenerate);
        assert_eq!(z.vertices, pts(&[(0, 1, 0, 1), (1, 1, 1, 1)]));
        let inv = classify(&parse("z1^3").unwrap()).unwrap();
        assert!(matches!(region_factor_form(&inv), Err(RegionError::ExcludedCase(_))));
    }

    #[test]
    fn json_shape() {
        let (r, inv) = factor_region("(z2 - z1^2)^2");
        let infos = relevant_vertices(&r, &inv).unwrap();
        let v = region_json(&r, &infos);
        assert_eq!(v["vertices"][2], json!([5, 7, 2, 7]));
        assert_eq!(v["subcase"], json!("N_q=p'"));
        assert_eq!(v["edges"].as_array().unwrap().len(), 5);
    }

    fn params() -> impl Strategy<Value = FactorParams> {
        (1i64..20, 1i64..6, 0u32..8, 0u32..8, 0u32..8).prop_map(|(n, d, nu, a, nn)| FactorParams {
            d_h: rat(n, d) + int(1),
            nu,
            a,
            n: nn,
        })
    }

    proptest! {
        #[test]
        fn polygon_invariants(p in params()) {
            let r = RieszRegion::from_constraints(factor_constraints(&p));
            prop_assert!(r.is_self_dual());
            prop_assert_eq!(r.vertices.first(), Some(&(int(0), int(0))));
            prop_assert!(r.vertices.contains(&(int(1), int(1))));
            let mut all = r.constraints.clone();
            all.extend(unit_box());
            for v in &r.vertices {
                prop_assert!(all.iter().all(|h| h.contains(v)));
                prop_assert!(all.iter().filter(|h| h.is_tight(v)).count() >= 2);
            }
            // Strictly convex, counterclockwise.
            let n = r.vertices.len();
            for i in 0..n {
                let (a, b, c) = (&r.vertices[i], &r.vertices[(i + 1) % n], &r.vertices[(i + 2) % n]);
                prop_assert!(cross(&sub(b, a), &sub(c, b)).is_positive());
            }
        }

        #[test]
        fn worse_invariants_shrink_region(p in params(), extra in 1u32..4) {
            let base = RieszRegion::from_constraints(factor_constraints(&p));
            for q in [
                FactorParams { n: p.n + extra, ..p.clone() },
                FactorParams { nu: p.nu + extra, ..p.clone() },
                FactorParams { a: p.a + extra, ..p.clone() },
            ] {
                let worse = RieszRegion::from_constraints(factor_constraints(&q));
                for v in &worse.vertices {
                    prop_assert!(base.contains(v));
                }
            }
        }
    }
}
