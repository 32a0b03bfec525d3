//! Planar polyline geometry: segment intersection, bounding-box chunking,
//! distances, winding numbers, decimation and the Fermat point.

use crate::C64;

pub fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

pub fn dot(a: C64, b: C64) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Intersection of segments [p0,p1] and [q0,q1] as parameters (s, u) in
/// [0,1]² and the point. Segments parallel to rounding yield `None`.
pub fn segment_intersection(p0: C64, p1: C64, q0: C64, q1: C64) -> Option<(f64, f64, C64)> {
    let r = p1 - p0;
    let s = q1 - q0;
    let den = cross(r, s);
    if den.abs() <= 1e-12 * r.norm() * s.norm() {
        return None;
    }
    let d = q0 - p0;
    let a = cross(d, s) / den;
    let b = cross(d, r) / den;
    if (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) {
        Some((a, b, p0 + r * a))
    } else {
        None
    }
}

/// Distance from `p` to segment [a,b] and the clamped parameter.
pub fn point_segment(p: C64, a: C64, b: C64) -> (f64, f64) {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    let u = if l2 == 0.0 { 0.0 } else { (dot(p - a, ab) / l2).clamp(0.0, 1.0) };
    ((p - (a + ab * u)).norm(), u)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub lo: C64,
    pub hi: C64,
}

impl BBox {
    pub fn of(points: &[C64]) -> BBox {
        let mut lo = C64::new(f64::INFINITY, f64::INFINITY);
        let mut hi = C64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            lo.re = lo.re.min(p.re);
            lo.im = lo.im.min(p.im);
            hi.re = hi.re.max(p.re);
            hi.im = hi.im.max(p.im);
        }
        BBox { lo, hi }
    }

    pub fn overlaps(&self, o: &BBox, pad: f64) -> bool {
        self.lo.re <= o.hi.re + pad
            && o.lo.re <= self.hi.re + pad
            && self.lo.im <= o.hi.im + pad
            && o.lo.im <= self.hi.im + pad
    }

    pub fn distance(&self, p: C64) -> f64 {
        let dx = (self.lo.re - p.re).max(0.0).max(p.re - self.hi.re);
        let dy = (self.lo.im - p.im).max(0.0).max(p.im - self.hi.im);
        dx.hypot(dy)
    }
}

const CHUNK: usize = 24;

/// Bounding boxes over runs of consecutive segments.
#[derive(Debug, Clone)]
pub struct Chunks {
    pub ranges: Vec<(usize, usize, BBox)>,
}

impl Chunks {
    pub fn new(points: &[C64]) -> Chunks {
        let mut ranges = Vec::new();
        if points.len() >= 2 {
            let mut i = 0;
            while i + 1 < points.len() {
                let j = (i + CHUNK).min(points.len() - 1);
                ranges.push((i, j, BBox::of(&points[i..=j])));
                i = j;
            }
        }
        Chunks { ranges }
    }
}

/// A crossing between segment `i` of A and segment `j` of B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub i: usize,
    pub j: usize,
    pub s: f64,
    pub u: f64,
    pub point: C64,
}

pub fn crossings(a: &[C64], ca: &Chunks, b: &[C64], cb: &Chunks) -> Vec<Crossing> {
    let mut out = Vec::new();
    for &(ai, aj, abox) in &ca.ranges {
        for &(bi, bj, bbox) in &cb.ranges {
            if !abox.overlaps(&bbox, 0.0) {
                continue;
            }
            for i in ai..aj {
                let sb = BBox::of(&a[i..=i + 1]);
                if !sb.overlaps(&bbox, 0.0) {
                    continue;
                }
                for j in bi..bj {
                    if let Some((s, u, p)) = segment_intersection(a[i], a[i + 1], b[j], b[j + 1]) {
                        out.push(Crossing { i, j, s, u, point: p });
                    }
                }
            }
        }
    }
    // A crossing exactly at a shared vertex is reported by both adjacent segments.
    out.sort_by(|x, y| (x.i, x.j).cmp(&(y.i, y.j)));
    let mut dedup: Vec<Crossing> = Vec::new();
    for c in out {
        if dedup.iter().any(|d| (d.point - c.point).norm() <= 1e-14 * (1.0 + c.point.norm())) {
            continue;
        }
        dedup.push(c);
    }
    dedup
}

/// Self-crossings of a polyline between non-adjacent segments.
pub fn self_crossings(a: &[C64]) -> usize {
    let ch = Chunks::new(a);
    let mut n = 0;
    for x in crossings(a, &ch, a, &ch) {
        if x.j > x.i + 1 {
            n += 1;
        }
    }
    n
}

/// Minimal distance from `p` to the polyline, segment index and parameter.
pub fn closest_on_polyline(p: C64, pts: &[C64], ch: &Chunks) -> (f64, usize, f64) {
    if pts.len() == 1 {
        return ((p - pts[0]).norm(), 0, 0.0);
    }
    let mut order: Vec<(f64, usize)> = ch.ranges.iter().enumerate().map(|(k, r)| (r.2.distance(p), k)).collect();
    order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut best = (f64::INFINITY, 0, 0.0);
    for (lb, k) in order {
        if lb > best.0 {
            break;
        }
        let (i0, i1, _) = ch.ranges[k];
        for i in i0..i1 {
            let (d, u) = point_segment(p, pts[i], pts[i + 1]);
            if d < best.0 {
                best = (d, i, u);
            }
        }
    }
    best
}

/// Directed Hausdorff distance sup_{a∈A} d(a, B), sampling A at vertices and
/// segment midpoints.
pub fn directed_hausdorff(a: &[C64], b: &[C64]) -> f64 {
    let cb = Chunks::new(b);
    let mut h: f64 = 0.0;
    for (k, &p) in a.iter().enumerate() {
        h = h.max(closest_on_polyline(p, b, &cb).0);
        if k + 1 < a.len() {
            h = h.max(closest_on_polyline(0.5 * (p + a[k + 1]), b, &cb).0);
        }
    }
    h
}

pub fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Winding number of a closed polygon (last vertex joins the first) around `p`.
pub fn winding_number(poly: &[C64], p: C64) -> i32 {
    let n = poly.len();
    let mut total = 0.0;
    for k in 0..n {
        let a = poly[k] - p;
        let b = poly[(k + 1) % n] - p;
        total += (b / a).arg();
    }
    (total / (2.0 * std::f64::consts::PI)).round() as i32
}

pub fn signed_area(poly: &[C64]) -> f64 {
    let n = poly.len();
    (0..n).map(|k| cross(poly[k], poly[(k + 1) % n])).sum::<f64>() * 0.5
}

/// Distance from `p` to the boundary of a closed polygon.
pub fn boundary_distance(poly: &[C64], p: C64) -> f64 {
    let n = poly.len();
    (0..n).map(|k| point_segment(p, poly[k], poly[(k + 1) % n]).0).fold(f64::INFINITY, f64::min)
}

/// Douglas-Peucker decimation keeping both endpoints.
pub fn decimate(pts: &[C64], tol: f64) -> Vec<C64> {
    if pts.len() <= 2 {
        return pts.to_vec();
    }
    let mut keep = vec![false; pts.len()];
    keep[0] = true;
    keep[pts.len() - 1] = true;
    let mut stack = vec![(0usize, pts.len() - 1)];
    while let Some((i, j)) = stack.pop() {
        let mut best = (0.0, 0usize);
        for k in i + 1..j {
            let d = point_segment(pts[k], pts[i], pts[j]).0;
            if d > best.0 {
                best = (d, k);
            }
        }
        if best.0 > tol {
            keep[best.1] = true;
            stack.push((i, best.1));
            stack.push((best.1, j));
        }
    }
    pts.iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| *p).collect()
}

/// Intersection of the lines p + s·d and q + u·e.
pub fn line_intersection(p: C64, d: C64, q: C64, e: C64) -> Option<C64> {
    let den = cross(d, e);
    if den.abs() < 1e-300 {
        return None;
    }
    Some(p + d * (cross(q - p, e) / den))
}

/// Fermat point of a triangle whose angles are all below 2π/3, as the meet
/// of the lines joining each vertex to the outer equilateral apex on the
/// opposite side.
pub fn fermat_point(a: C64, b: C64, c: C64) -> C64 {
    let apex = |p: C64, q: C64, opposite: C64| -> C64 {
        let r1 = p + (q - p) * C64::from_polar(1.0, std::f64::consts::PI / 3.0);
        let r2 = p + (q - p) * C64::from_polar(1.0, -std::f64::consts::PI / 3.0);
        let side = cross(q - p, opposite - p);
        if cross(q - p, r1 - p) * side < 0.0 {
            r1
        } else {
            r2
        }
    };
    let a2 = apex(b, c, a);
    let b2 = apex(c, a, b);
    line_intersection(a, a2 - a, b, b2 - b).unwrap_or((a + b + c) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn segments_cross_once() {
        let r = segment_intersection(c(0.0, 0.0), c(2.0, 2.0), c(0.0, 2.0), c(2.0, 0.0)).unwrap();
        assert!((r.2 - c(1.0, 1.0)).norm() < 1e-15);
        assert!(segment_intersection(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(1.0, 1.0)).is_none());
    }

    #[test]
    fn fermat_point_of_equilateral_is_centroid() {
        let a = c(0.0, 0.0);
        let b = c(1.0, 0.0);
        let cc = C64::from_polar(1.0, std::f64::consts::PI / 3.0);
        assert!((fermat_point(a, b, cc) - (a + b + cc) / 3.0).norm() < 1e-14);
    }

    #[test]
    fn fermat_point_sees_sides_at_120_degrees() {
        let (a, b, cc) = (c(0.0, 0.0), c(3.0, 0.2), c(1.0, 2.0));
        let f = fermat_point(a, b, cc);
        let ang = |p: C64, q: C64| ((q - f) / (p - f)).arg().abs();
        for (p, q) in [(a, b), (b, cc), (cc, a)] {
            assert!((ang(p, q) - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn winding_and_area() {
        let sq = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        assert_eq!(winding_number(&sq, c(0.5, 0.5)), 1);
        assert_eq!(winding_number(&sq, c(1.5, 0.5)), 0);
        assert!((signed_area(&sq) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn decimation_keeps_corners() {
        let pts: Vec<C64> = (0..=10).map(|k| c(k as f64, 0.0)).chain((1..=10).map(|k| c(10.0, k as f64))).collect();
        let d = decimate(&pts, 1e-9);
        assert_eq!(d, vec![c(0.0, 0.0), c(10.0, 0.0), c(10.0, 10.0)]);
    }

    #[test]
    fn hausdorff_of_offset_lines() {
        let a: Vec<C64> = (0..=100).map(|k| c(k as f64 / 100.0, 0.0)).collect();
        let b: Vec<C64> = a.iter().map(|p| p + c(0.0, 0.25)).collect();
        assert!((hausdorff(&a, &b) - 0.25).abs() < 1e-12);
    }
}
