//! Independent reference arithmetic: complex numbers, the two generators
//! written out from their formulas, boundary arcs as angle pairs.

#![allow(dead_code)]

use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

pub const fn cx(re: f64, im: f64) -> Cx {
    Cx { re, im }
}

impl Cx {
    pub fn add(self, o: Cx) -> Cx {
        cx(self.re + o.re, self.im + o.im)
    }
    pub fn sub(self, o: Cx) -> Cx {
        cx(self.re - o.re, self.im - o.im)
    }
    pub fn mul(self, o: Cx) -> Cx {
        cx(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
    pub fn div(self, o: Cx) -> Cx {
        let d = o.re * o.re + o.im * o.im;
        cx((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)
    }
    pub fn scale(self, s: f64) -> Cx {
        cx(self.re * s, self.im * s)
    }
    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }
    pub fn sqrt(self) -> Cx {
        let (r, t) = (self.abs().sqrt(), 0.5 * self.arg());
        cx(r * t.cos(), r * t.sin())
    }
    pub fn polar(r: f64, t: f64) -> Cx {
        cx(r * t.cos(), r * t.sin())
    }
}

/// `[[α, β], [γ, δ]]` acting by `z ↦ (αz + β)/(γz + δ)`.
pub type Mat = [Cx; 4];

pub fn center_distance(r: f64) -> f64 {
    (1.0 + r * r).sqrt()
}

/// `g_a = (cz + 1)/(z + c)`, `g_b = (cz + i)/(−iz + c)` and their inverses.
pub fn generator(letter: char, r: f64) -> Mat {
    let c = cx(center_distance(r), 0.0);
    let (one, i) = (cx(1.0, 0.0), cx(0.0, 1.0));
    let neg = |z: Cx| z.scale(-1.0);
    match letter {
        'a' => [c, one, one, c],
        'A' => [c, neg(one), neg(one), c],
        'b' => [c, i, neg(i), c],
        'B' => [c, neg(i), i, c],
        _ => panic!("letter {letter:?}"),
    }
}

pub fn mat_mul(m: &Mat, n: &Mat) -> Mat {
    [
        m[0].mul(n[0]).add(m[1].mul(n[2])),
        m[0].mul(n[1]).add(m[1].mul(n[3])),
        m[2].mul(n[0]).add(m[3].mul(n[2])),
        m[2].mul(n[1]).add(m[3].mul(n[3])),
    ]
}

/// Rescaled so the largest entry has modulus 1; the map is unchanged.
pub fn normalize(m: &Mat) -> Mat {
    let s = 1.0 / m.iter().map(|z| z.abs()).fold(0.0, f64::max);
    [m[0].scale(s), m[1].scale(s), m[2].scale(s), m[3].scale(s)]
}

fn unit_determinant(m: &Mat) -> Mat {
    let det = m[0].mul(m[3]).sub(m[1].mul(m[2]));
    let s = cx(1.0, 0.0).div(det.sqrt());
    [m[0].mul(s), m[1].mul(s), m[2].mul(s), m[3].mul(s)]
}

pub fn word_map(word: &str, r: f64) -> Mat {
    let mut m = [cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)];
    for letter in word.chars() {
        m = normalize(&mat_mul(&m, &generator(letter, r)));
    }
    m
}

pub fn apply(m: &Mat, z: Cx) -> Cx {
    m[0].mul(z).add(m[1]).div(m[2].mul(z).add(m[3]))
}

pub fn apply_angle(m: &Mat, t: f64) -> f64 {
    apply(m, Cx::polar(1.0, t)).arg()
}

pub fn wrap(t: f64) -> f64 {
    t.rem_euclid(TAU)
}

/// Counterclockwise offset from `from` to `to` in `[0, 2π)`.
pub fn ccw(from: f64, to: f64) -> f64 {
    wrap(to - from)
}

pub fn circ_dist(s: f64, t: f64) -> f64 {
    let d = ccw(s, t);
    d.min(TAU - d)
}

/// Open counterclockwise arc from `start` to `end`, as angles.
#[derive(Debug, Clone, Copy)]
pub struct OArc {
    pub start: f64,
    pub end: f64,
}

impl OArc {
    pub fn width(&self) -> f64 {
        ccw(self.start, self.end)
    }
    pub fn contains(&self, t: f64) -> bool {
        let o = ccw(self.start, t);
        o > 0.0 && o < self.width()
    }
    pub fn contains_arc(&self, inner: &OArc) -> bool {
        let o = ccw(self.start, inner.start);
        o > 0.0 && o + inner.width() < self.width()
    }
    pub fn image(&self, m: &Mat) -> OArc {
        OArc { start: apply_angle(m, self.start), end: apply_angle(m, self.end) }
    }
}

/// Limit point of a letter sequence from the orbit of 0 under its prefixes.
pub fn limit_angle(letters: &str, r: f64) -> f64 {
    apply(&word_map(letters, r), cx(0.0, 0.0)).arg()
}

/// Attracting fixed point of `m`, from `γz² + (δ − α)z − β = 0`.
pub fn attracting_fixed_point(m: &Mat) -> Cx {
    let m = unit_determinant(m);
    let (a, b, c, d) = (m[0], m[1], m[2], m[3]);
    let p = d.sub(a);
    let disc = p.mul(p).add(c.mul(b).scale(4.0)).sqrt();
    let two_c = c.scale(2.0);
    let roots = [p.scale(-1.0).add(disc).div(two_c), p.scale(-1.0).sub(disc).div(two_c)];
    // |g'(z)| = 1/|γz + δ|² for determinant 1
    let contraction = |z: Cx| 1.0 / c.mul(z).add(d).abs().powi(2);
    if contraction(roots[0]) < contraction(roots[1]) {
        roots[0]
    } else {
        roots[1]
    }
}

/// Hyperbolic distance from `z` to the ray from 0 towards angle `t`.
pub fn distance_to_ray(z: Cx, t: f64) -> f64 {
    let w = z.mul(Cx::polar(1.0, -t));
    let n2 = w.re * w.re + w.im * w.im;
    if w.re <= 0.0 {
        // nearest point of the ray is the origin
        2.0 * w.abs().atanh()
    } else {
        (2.0 * w.im.abs() / (1.0 - n2)).asinh()
    }
}
