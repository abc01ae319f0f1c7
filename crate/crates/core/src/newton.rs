//! Newton polyhedron, Newton distance and reduced Newton distances.

use num_traits::Zero;

use crate::poly::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonData {
    /// Extreme points of the lower-left boundary, by increasing first coordinate.
    pub polytope_vertices: Vec<(u32, u32)>,
    pub d_phi: Rational,
    pub d_r1: Option<Rational>,
    pub d_r2: Option<Rational>,
    pub d_r: Option<Rational>,
}

fn cross(o: (u32, u32), a: (u32, u32), b: (u32, u32)) -> i64 {
    let (ox, oy) = (o.0 as i64, o.1 as i64);
    (a.0 as i64 - ox) * (b.1 as i64 - oy) - (a.1 as i64 - oy) * (b.0 as i64 - ox)
}

/// Extreme points of `conv(support + R_+^2)`, ordered by increasing `a1`
/// (hence strictly decreasing `a2`).
pub fn newton_polytope(support: &[(u32, u32)]) -> Vec<(u32, u32)> {
    assert!(!support.is_empty(), "Newton polytope of an empty support");
    let mut pts = support.to_vec();
    pts.sort();
    pts.dedup();
    // Pareto-minimal points: strictly smaller second coordinate than everything to the left.
    let mut stair: Vec<(u32, u32)> = Vec::new();
    for p in pts {
        if stair.last().is_none_or(|q| p.1 < q.1) {
            stair.push(p);
        }
    }
    let mut hull: Vec<(u32, u32)> = Vec::new();
    for p in stair {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Where the bisectrix meets the boundary of the polyhedron.
pub fn newton_distance(chain: &[(u32, u32)]) -> Rational {
    let first = chain[0];
    if first.0 >= first.1 {
        return int(first.0 as i64);
    }
    let last = chain[chain.len() - 1];
    if last.1 >= last.0 {
        return int(last.1 as i64);
    }
    for w in chain.windows(2) {
        let (p, q) = (w[0], w[1]);
        let dp = p.0 as i64 - p.1 as i64;
        let dq = q.0 as i64 - q.1 as i64;
        if dp <= 0 && dq >= 0 {
            // p + t (q - p) on the diagonal: t = -dp / (dq - dp)
            let t = Rational::new((-dp).into(), (dq - dp).into());
            return int(p.0 as i64) + t * int(q.0 as i64 - p.0 as i64);
        }
    }
    unreachable!("a+b ordering along the chain guarantees a crossing")
}

fn distance_of(support: impl Iterator<Item = (u32, u32)>) -> Option<Rational> {
    let pts: Vec<_> = support.collect();
    (!pts.is_empty()).then(|| newton_distance(&newton_polytope(&pts)))
}

/// `(d_R1, d_R2, d_R)`; ties select the first.
pub fn reduced_newton_distances(support: &[(u32, u32)]) -> (Option<Rational>, Option<Rational>, Option<Rational>) {
    let d1 = distance_of(support.iter().copied().filter(|p| p.0 != 0));
    let d2 = distance_of(support.iter().copied().filter(|p| p.1 != 0));
    let d = match (&d1, &d2) {
        (Some(a), Some(b)) => Some(if a >= b { a.clone() } else { b.clone() }),
        (Some(a), None) => Some(a.clone()),
        (None, Some(b)) => Some(b.clone()),
        (None, None) => None,
    };
    (d1, d2, d)
}

pub fn newton_data(support: &[(u32, u32)]) -> NewtonData {
    let polytope_vertices = newton_polytope(support);
    let d_phi = newton_distance(&polytope_vertices);
    let (d_r1, d_r2, d_r) = reduced_newton_distances(support);
    NewtonData { polytope_vertices, d_phi, d_r1, d_r2, d_r }
}

/// Whether `(x, y)` lies in the closed polyhedron spanned by `chain`.
pub fn contains(chain: &[(u32, u32)], x: &Rational, y: &Rational) -> bool {
    let (first, last) = (chain[0], chain[chain.len() - 1]);
    if *x < int(first.0 as i64) || *y < int(last.1 as i64) {
        return false;
    }
    chain.windows(2).all(|w| {
        let (p, q) = (w[0], w[1]);
        // Inside means on or above the edge line (to the right of p->q).
        let ex = int(q.0 as i64 - p.0 as i64);
        let ey = int(q.1 as i64 - p.1 as i64);
        let c = &ex * (y - int(p.1 as i64)) - &ey * (x - int(p.0 as i64));
        !(c < Rational::zero())
    })
}
