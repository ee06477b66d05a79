//! Real quaternion algebra.
//!
//! A quaternion `q = d + a e1 + b e2 + c e3` is stored with its scalar part `d`
//! and vector part `(a, b, c)`. The same type doubles as a point or vector of
//! R^4 through the coordinate map `(x1, x2, x3, x4) = (a, b, c, d)`, i.e. the
//! scalar unit `e4 = 1` is the fourth axis.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// Vector of R^3, the vector part of a spatial quaternion.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

/// Real quaternion `d + a e1 + b e2 + c e3`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    /// Scalar part.
    pub d: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion { d: 0.0, a: 0.0, b: 0.0, c: 0.0 };
    pub const ONE: Quaternion = Quaternion { d: 1.0, a: 0.0, b: 0.0, c: 0.0 };
    pub const E1: Quaternion = Quaternion { d: 0.0, a: 1.0, b: 0.0, c: 0.0 };
    pub const E2: Quaternion = Quaternion { d: 0.0, a: 0.0, b: 1.0, c: 0.0 };
    pub const E3: Quaternion = Quaternion { d: 0.0, a: 0.0, b: 0.0, c: 1.0 };
    /// The scalar unit, fourth axis of R^4.
    pub const E4: Quaternion = Quaternion::ONE;

    /// Builds `d + a e1 + b e2 + c e3`.
    pub const fn new(d: f64, a: f64, b: f64, c: f64) -> Self {
        Quaternion { d, a, b, c }
    }

    pub fn from_parts(scalar: f64, vector: Vec3) -> Self {
        Quaternion::new(scalar, vector.x, vector.y, vector.z)
    }

    /// Point of R^4 with coordinates `(x1, x2, x3, x4)`.
    pub const fn from_coords(x: [f64; 4]) -> Self {
        Quaternion::new(x[3], x[0], x[1], x[2])
    }

    /// R^4 coordinates `(x1, x2, x3, x4)`; the scalar part comes last.
    pub const fn coords(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn scalar(self) -> f64 {
        self.d
    }

    pub fn vector(self) -> Vec3 {
        Vec3::new(self.a, self.b, self.c)
    }

    pub fn conjugate(self) -> Self {
        conjugate(self)
    }

    pub fn norm(self) -> f64 {
        qnorm(self)
    }

    pub fn norm_squared(self) -> f64 {
        hform(self, self)
    }

    /// Euclidean inner product of R^4, identical to [`hform`].
    pub fn dot(self, other: Quaternion) -> f64 {
        self.d * other.d + self.a * other.a + self.b * other.b + self.c * other.c
    }

    pub fn normalized(self) -> Self {
        self / self.norm()
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.d.abs().max(self.a.abs()).max(self.b.abs()).max(self.c.abs())
    }

    pub fn is_finite(self) -> bool {
        self.d.is_finite() && self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }

    pub fn is_spatial(self, tol: f64) -> bool {
        is_spatial(self, tol)
    }

    pub fn is_temporal(self, tol: f64) -> bool {
        self.vector().norm() <= tol
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.d + o.d, self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.d - o.d, self.a - o.a, self.b - o.b, self.c - o.c)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.d, -self.a, -self.b, -self.c)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, k: f64) -> Quaternion {
        Quaternion::new(self.d * k, self.a * k, self.b * k, self.c * k)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, k: f64) -> Quaternion {
        Quaternion::new(self.d / k, self.a / k, self.b / k, self.c / k)
    }
}

/// Quaternion product.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        qmul(self, q)
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Quaternion {
        iter.fold(Quaternion::ZERO, |acc, q| acc + q)
    }
}

/// `p x q = SpSq - <Vp,Vq> + Sp Vq + Sq Vp + Vp ^ Vq`.
pub fn qmul(p: Quaternion, q: Quaternion) -> Quaternion {
    let (sp, vp) = (p.scalar(), p.vector());
    let (sq, vq) = (q.scalar(), q.vector());
    Quaternion::from_parts(sp * sq - vp.dot(vq), vq * sp + vp * sq + vp.cross(vq))
}

pub fn conjugate(q: Quaternion) -> Quaternion {
    Quaternion::new(q.d, -q.a, -q.b, -q.c)
}

/// Symmetric bilinear form `½(p q̄ + q p̄)`, which is a pure scalar.
///
/// Only the scalar part of each product is needed; it reduces to the Euclidean
/// dot product of the two 4-tuples.
pub fn hform(p: Quaternion, q: Quaternion) -> f64 {
    let s1 = p.d * q.d + p.a * q.a + p.b * q.b + p.c * q.c;
    let s2 = q.d * p.d + q.a * p.a + q.b * p.b + q.c * p.c;
    0.5 * (s1 + s2)
}

pub fn qnorm(q: Quaternion) -> f64 {
    hform(q, q).sqrt()
}

/// True iff the scalar part is within `tol` of zero.
pub fn is_spatial(q: Quaternion, tol: f64) -> bool {
    q.d.abs() <= tol
}

fn det3(r0: [f64; 3], r1: [f64; 3], r2: [f64; 3]) -> f64 {
    r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
}

fn drop_column(x: [f64; 4], col: usize) -> [f64; 3] {
    let mut out = [0.0; 3];
    let mut j = 0;
    for (i, v) in x.iter().enumerate() {
        if i != col {
            out[j] = *v;
            j += 1;
        }
    }
    out
}

/// Ternary wedge of three R^4 vectors.
///
/// Returns the vector `w` with `<w, v> = det(v, a, b, c)` for every `v` (rows
/// in R^4 coordinates), so `cross4(e2, e3, e4) = e1` and `cross4(e1, e2, e3) = -e4`.
pub fn cross4(a: Quaternion, b: Quaternion, c: Quaternion) -> Quaternion {
    let (ra, rb, rc) = (a.coords(), b.coords(), c.coords());
    let mut w = [0.0; 4];
    for (i, wi) in w.iter_mut().enumerate() {
        let minor = det3(drop_column(ra, i), drop_column(rb, i), drop_column(rc, i));
        *wi = if i % 2 == 0 { minor } else { -minor };
    }
    Quaternion::from_coords(w)
}

/// Determinant of the 4x4 matrix with rows `r0..r3` (R^4 coordinates).
pub fn det4(r0: Quaternion, r1: Quaternion, r2: Quaternion, r3: Quaternion) -> f64 {
    hform(cross4(r1, r2, r3), r0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-14;

    fn close(p: Quaternion, q: Quaternion, tol: f64) -> bool {
        (p - q).max_abs() <= tol
    }

    /// Left-multiplication matrix of `p` acting on (d, a, b, c).
    fn left_matrix(p: Quaternion) -> [[f64; 4]; 4] {
        let Quaternion { d, a, b, c } = p;
        [[d, -a, -b, -c], [a, d, -c, b], [b, c, d, -a], [c, -b, a, d]]
    }

    fn matrix_product(p: Quaternion, q: Quaternion) -> Quaternion {
        let m = left_matrix(p);
        let v = [q.d, q.a, q.b, q.c];
        let r: Vec<f64> = m.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect();
        Quaternion::new(r[0], r[1], r[2], r[3])
    }

    #[test]
    fn basis_products() {
        use Quaternion as Q;
        assert_eq!(Q::E1 * Q::E2, Q::E3);
        assert_eq!(Q::E2 * Q::E1, -Q::E3);
        assert_eq!(Q::E2 * Q::E3, Q::E1);
        assert_eq!(Q::E3 * Q::E1, Q::E2);
        for e in [Q::E1, Q::E2, Q::E3] {
            assert_eq!(e * e, -Q::E4);
        }
    }

    #[test]
    fn one_is_identity() {
        let q = Quaternion::new(0.3, -1.2, 2.5, 7.0);
        assert_eq!(q * Quaternion::ONE, q);
        assert_eq!(Quaternion::ONE * q, q);
    }

    #[test]
    fn product_matches_matrix_oracle() {
        let p = Quaternion::new(0.1, -0.7, 0.4, 0.9);
        let q = Quaternion::new(-0.5, 0.2, 0.8, -0.3);
        assert!(close(p * q, matrix_product(p, q), EPS));
        assert!(((p * q).norm() - p.norm() * q.norm()).abs() < 1e-12);
    }

    #[test]
    fn conjugate_examples() {
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(q.conjugate(), Quaternion::new(1.0, -2.0, -3.0, -4.0));
        assert_eq!(Quaternion::E4.conjugate(), Quaternion::E4);
        let n = q * q.conjugate();
        assert!(close(n, Quaternion::new(30.0, 0.0, 0.0, 0.0), EPS));
    }

    #[test]
    fn hform_examples() {
        assert_eq!(hform(Quaternion::E1, Quaternion::E2), 0.0);
        let p = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let q = Quaternion::new(5.0, 6.0, 7.0, 8.0);
        assert_eq!(hform(p, q), 70.0);
        assert_eq!(hform(p, p), 30.0);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(qnorm(Quaternion::ONE), 1.0);
        assert_eq!(qnorm(Quaternion::new(1.0, 1.0, 1.0, 1.0)), 2.0);
    }

    #[test]
    fn spatial_predicate() {
        assert!(is_spatial(Quaternion::new(0.0, 1.0, 2.0, 3.0), 1e-12));
        assert!(!is_spatial(Quaternion::ONE, 1e-12));
        assert!(Quaternion::new(2.0, 0.0, 0.0, 0.0).is_temporal(0.0));
    }

    /// Leibniz expansion over all 24 permutations.
    fn det_oracle(rows: [[f64; 4]; 4]) -> f64 {
        let mut total = 0.0;
        let idx = [0usize, 1, 2, 3];
        for p0 in idx {
            for p1 in idx {
                for p2 in idx {
                    for p3 in idx {
                        let perm = [p0, p1, p2, p3];
                        let mut seen = [false; 4];
                        if perm.iter().any(|&i| std::mem::replace(&mut seen[i], true)) {
                            continue;
                        }
                        let mut inversions = 0;
                        for i in 0..4 {
                            for j in i + 1..4 {
                                if perm[i] > perm[j] {
                                    inversions += 1;
                                }
                            }
                        }
                        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
                        total += sign * rows[0][p0] * rows[1][p1] * rows[2][p2] * rows[3][p3];
                    }
                }
            }
        }
        total
    }

    #[test]
    fn cross4_basis_convention() {
        use Quaternion as Q;
        assert_eq!(cross4(Q::E1, Q::E2, Q::E3), -Q::E4);
        assert_eq!(cross4(Q::E2, Q::E3, Q::E4), Q::E1);
    }

    #[test]
    fn cross4_matches_cofactor_oracle() {
        let a = Quaternion::from_coords([0.3, -1.1, 0.7, 2.0]);
        let b = Quaternion::from_coords([1.5, 0.2, -0.4, 0.9]);
        let c = Quaternion::from_coords([-0.6, 0.8, 1.3, -0.2]);
        let w = cross4(a, b, c);
        for (i, e) in [Quaternion::E1, Quaternion::E2, Quaternion::E3, Quaternion::E4].into_iter().enumerate() {
            let expected = det_oracle([e.coords(), a.coords(), b.coords(), c.coords()]);
            assert!((w.coords()[i] - expected).abs() < 1e-13);
        }
        assert!(hform(w, a).abs() < 1e-13);
        assert!(hform(w, b).abs() < 1e-13);
        assert!(hform(w, c).abs() < 1e-13);
        assert!(cross4(a, a, b).max_abs() < 1e-15);
        let det = det4(a, b, c, w);
        assert!((det - det_oracle([a.coords(), b.coords(), c.coords(), w.coords()])).abs() < 1e-12);
    }
}
