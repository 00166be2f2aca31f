//! Numerical ranges: closed-form disks for Jordan blocks, sampled support
//! functions for arbitrary matrices and convex hulls of finitely many disks.

use std::f64::consts::{PI, TAU};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::jordan::{nilpotent_numerical_radius, JordanSpec};
use crate::matrix::{hermitian_eigen, Complex, ComplexMatrix};

pub const MIN_DIRECTIONS: usize = 64;

/// Closed disk `{z : |z - center| <= radius}`; a point when the radius is 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: Complex,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex, radius: f64) -> Result<Self> {
        if !(center.re.is_finite() && center.im.is_finite() && radius.is_finite()) {
            return Err(Error::NonFinite("disk"));
        }
        if radius < 0.0 {
            return Err(Error::DimensionMismatch(format!("negative disk radius {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn point(center: Complex) -> Self {
        Self { center, radius: 0.0 }
    }

    /// Support function `max Re(e^{-iθ} z)` over the disk.
    pub fn support(&self, theta: f64) -> f64 {
        rot_re(self.center, theta) + self.radius
    }
}

/// `Re(e^{-iθ} z)`.
fn rot_re(z: Complex, theta: f64) -> f64 {
    z.re * theta.cos() + z.im * theta.sin()
}

/// `W(J_m(λ))`: the disk about `λ` of radius `cos(π/(m+1))`.
pub fn jordan_numrange(m: usize, lambda: Complex) -> Result<Disk> {
    if m == 0 {
        return Err(Error::ZeroBlockSize);
    }
    Disk::new(lambda, nilpotent_numerical_radius(m))
}

/// Numerical-range disks of every block of a specification, in block order.
pub fn spec_disks(spec: &JordanSpec) -> Vec<Disk> {
    spec.blocks()
        .iter()
        .map(|b| Disk { center: b.eigenvalue, radius: b.numerical_radius() })
        .collect()
}

/// Support function of `W(T)` sampled on evenly spaced directions.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportProfile {
    pub directions: Vec<f64>,
    pub values: Vec<f64>,
}

fn directions(n_theta: usize) -> Vec<f64> {
    (0..n_theta).map(|i| TAU * i as f64 / n_theta as f64).collect()
}

pub fn support_profile(t: &ComplexMatrix, n_theta: usize) -> Result<SupportProfile> {
    if !t.is_square() {
        return Err(Error::NotSquare { rows: t.rows(), cols: t.cols() });
    }
    if n_theta < MIN_DIRECTIONS {
        return Err(Error::TooFewSamples { got: n_theta, min: MIN_DIRECTIONS });
    }
    let directions = directions(n_theta);
    let values = directions.iter().map(|&th| hermitian_eigen(&t.rotated_real_part(th)).max()).collect();
    Ok(SupportProfile { directions, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    BoundaryAmbiguous,
}

impl SupportProfile {
    /// Classifies `z` against the sampled half-planes with a band of width
    /// `tol` on either side of the boundary.
    pub fn classify(&self, z: Complex, tol: f64) -> Membership {
        let mut worst = f64::NEG_INFINITY;
        for (&th, &h) in self.directions.iter().zip(&self.values) {
            worst = worst.max(rot_re(z, th) - h);
        }
        if worst > tol {
            Membership::Out
        } else if worst <= -tol || (tol == 0.0 && worst <= 0.0) {
            Membership::In
        } else {
            Membership::BoundaryAmbiguous
        }
    }
}

pub fn point_in_numrange(z: Complex, t: &ComplexMatrix, tol: f64) -> Result<Membership> {
    Ok(support_profile(t, Tolerances::DEFAULT.n_theta)?.classify(z, tol))
}

/// Convex hull of finitely many closed disks, i.e. the numerical range of a
/// direct sum of Jordan blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct HullOfDisks {
    disks: Vec<Disk>,
}

impl HullOfDisks {
    pub fn new(disks: Vec<Disk>) -> Result<Self> {
        if disks.is_empty() {
            return Err(Error::EmptySpec);
        }
        Ok(Self { disks })
    }

    pub fn of_spec(spec: &JordanSpec) -> Self {
        Self { disks: spec_disks(spec) }
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    /// `H(θ) = max_k (Re(e^{-iθ} c_k) + r_k)`.
    pub fn support(&self, theta: f64) -> f64 {
        self.disks.iter().map(|d| d.support(theta)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Exact `min_θ (H(θ) - Re(e^{-iθ} c) - r)`: non-negative exactly when
    /// the disk `(c, r)` lies in the hull, and for a point it is the
    /// Euclidean distance to the hull boundary, signed positive inside.
    pub fn containment_margin(&self, disk: &Disk) -> f64 {
        // g(θ) = max_k (A_k cos(θ - φ_k) + r_k - r) with c_k - c = A_k e^{iφ_k};
        // its minimum sits at a piece's own minimum or at a crossing of two.
        let pieces: Vec<(f64, f64, f64)> = self
            .disks
            .iter()
            .map(|d| {
                let w = d.center - disk.center;
                (w.norm(), w.im.atan2(w.re), d.radius - disk.radius)
            })
            .collect();
        let g = |th: f64| {
            pieces.iter().map(|&(a, phi, r)| a * (th - phi).cos() + r).fold(f64::NEG_INFINITY, f64::max)
        };
        let mut candidates = Vec::new();
        for &(a, phi, _) in &pieces {
            if a > 0.0 {
                candidates.push(phi + PI);
            }
        }
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                candidates.extend(crossings(pieces[i], pieces[j]));
            }
        }
        if candidates.is_empty() {
            candidates.push(0.0);
        }
        candidates.into_iter().map(g).fold(f64::INFINITY, f64::min)
    }

    pub fn point_margin(&self, z: Complex) -> f64 {
        self.containment_margin(&Disk::point(z))
    }

    /// Membership of `z` with a band of width `tol` around the boundary.
    pub fn classify(&self, z: Complex, tol: f64) -> Membership {
        let m = self.point_margin(z);
        if m < -tol {
            Membership::Out
        } else if m >= tol {
            Membership::In
        } else {
            Membership::BoundaryAmbiguous
        }
    }

    /// Exact membership, counting points within `eq_tol` of the boundary as
    /// inside (the hull is closed).
    pub fn contains(&self, z: Complex, eq_tol: f64) -> bool {
        self.point_margin(z) >= -eq_tol
    }

    /// Supporting points `(θ, p(θ))` on `n` evenly spaced outward normals.
    pub fn boundary_sample(&self, n: usize) -> Result<Vec<(f64, Complex)>> {
        if n < 256 {
            return Err(Error::TooFewSamples { got: n, min: 256 });
        }
        Ok(directions(n)
            .into_iter()
            .map(|th| {
                let d = self
                    .disks
                    .iter()
                    .max_by(|a, b| a.support(th).total_cmp(&b.support(th)))
                    .expect("non-empty hull");
                (th, d.center + Complex::from_polar(d.radius, th))
            })
            .collect())
    }

    /// Indices of disks that are points and extreme points of the hull.
    pub fn extreme_point_disks(&self, eq_tol: f64) -> Vec<usize> {
        (0..self.disks.len())
            .filter(|&k| self.disks[k].radius == 0.0)
            .filter(|&k| {
                let z = self.disks[k].center;
                let coincident = |d: &Disk| d.radius == 0.0 && (d.center - z).norm() <= eq_tol;
                let others: Vec<Disk> = self
                    .disks
                    .iter()
                    .enumerate()
                    .filter(|&(j, d)| j != k && !coincident(d))
                    .map(|(_, d)| *d)
                    .collect();
                match HullOfDisks::new(others) {
                    Ok(h) => !h.contains(self.disks[k].center, eq_tol),
                    Err(_) => true,
                }
            })
            .collect()
    }
}

/// Angles where `a1 cos(θ-φ1) + r1 = a2 cos(θ-φ2) + r2`.
fn crossings((a1, p1, r1): (f64, f64, f64), (a2, p2, r2): (f64, f64, f64)) -> Vec<f64> {
    // (a1 cos p1 - a2 cos p2) cos θ + (a1 sin p1 - a2 sin p2) sin θ = r2 - r1
    let x = a1 * p1.cos() - a2 * p2.cos();
    let y = a1 * p1.sin() - a2 * p2.sin();
    let rho = x.hypot(y);
    let c = r2 - r1;
    if rho == 0.0 || c.abs() > rho {
        return Vec::new();
    }
    let base = y.atan2(x);
    let delta = (c / rho).clamp(-1.0, 1.0).acos();
    vec![base + delta, base - delta]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::jordan_block;

    fn c(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    fn hull(disks: &[(f64, f64)]) -> HullOfDisks {
        HullOfDisks::new(disks.iter().map(|&(x, r)| Disk::new(c(x), r).unwrap()).collect()).unwrap()
    }

    #[test]
    fn jordan_disks() {
        assert_eq!(jordan_numrange(2, c(0.0)).unwrap().radius, (PI / 3.0).cos());
        assert!((jordan_numrange(2, c(0.0)).unwrap().radius - 0.5).abs() < 1e-15);
        assert_eq!(jordan_numrange(1, c(3.0)).unwrap().radius, 0.0);
        assert!((jordan_numrange(3, c(0.0)).unwrap().radius - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(jordan_numrange(0, c(0.0)), Err(Error::ZeroBlockSize));
    }

    #[test]
    fn support_profile_examples() {
        let p = support_profile(&ComplexMatrix::identity(1), 64).unwrap();
        for (th, h) in p.directions.iter().zip(&p.values) {
            assert!((h - th.cos()).abs() < 1e-15);
        }
        let p = support_profile(&jordan_block(2, c(0.0)).unwrap(), 64).unwrap();
        assert!(p.values.iter().all(|h| (h - 0.5).abs() < 1e-14));
        let p = support_profile(&ComplexMatrix::diagonal(&[c(0.0), c(2.0)]), 64).unwrap();
        for (th, h) in p.directions.iter().zip(&p.values) {
            assert!((h - (2.0 * th.cos()).max(0.0)).abs() < 1e-14);
        }
        assert!(matches!(
            support_profile(&ComplexMatrix::identity(2), 10),
            Err(Error::TooFewSamples { got: 10, min: 64 })
        ));
    }

    #[test]
    fn point_membership_examples() {
        let lambda = Complex::new(0.3, 0.4);
        let t = ComplexMatrix::diagonal(&[lambda]);
        assert_eq!(point_in_numrange(lambda, &t, 0.0).unwrap(), Membership::In);
        assert_eq!(point_in_numrange(lambda, &t, 1e-7).unwrap(), Membership::BoundaryAmbiguous);

        let t = ComplexMatrix::direct_sum(&[ComplexMatrix::diagonal(&[c(0.0)]), jordan_block(2, c(1.0)).unwrap()]);
        assert_eq!(point_in_numrange(c(2.0), &t, 1e-7).unwrap(), Membership::Out);

        let t = jordan_block(2, c(0.5)).unwrap();
        // 0 sits on the boundary circle of B_{1/2}(1/2).
        assert_eq!(point_in_numrange(c(0.0), &t, 0.0).unwrap(), Membership::In);
    }

    #[test]
    fn hull_margins() {
        let h = hull(&[(0.0, 0.5)]);
        assert!((h.point_margin(c(0.0)) - 0.5).abs() < 1e-15);
        assert!((h.point_margin(c(0.8)) + 0.3).abs() < 1e-15);
        assert_eq!(h.point_margin(c(0.5)), 0.0);

        // conv{0, B_{1/2}(1)} excludes 2 and contains 1/2.
        let h = hull(&[(0.0, 0.0), (1.0, 0.5)]);
        assert!(h.point_margin(c(2.0)) < 0.0);
        assert_eq!(h.classify(c(2.0), 1e-7), Membership::Out);
        assert_eq!(h.classify(c(0.5), 1e-7), Membership::In);
        // The tangent segment from 0 to the disk passes above 0.5 + 0.2i.
        assert!(h.contains(Complex::new(0.5, 0.2), 0.0));
        assert!(!h.contains(Complex::new(0.5, 0.3), 0.0));
    }

    #[test]
    fn four_generator_hulls() {
        let gens = [(3.0, 0.0), (2.0, 0.5), (1.0, 0.5), (0.0, 0.0)];
        for k in 0..4 {
            let others: Vec<(f64, f64)> = gens.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, g)| *g).collect();
            let d = Disk::new(c(gens[k].0), gens[k].1).unwrap();
            assert!(hull(&others).containment_margin(&d) < 0.0, "generator {k}");
        }
        let h = hull(&[(3.0, 0.0), (2.0, 0.5), (0.5, 0.5), (0.0, 0.0)]);
        assert!(h.contains(c(0.0), 0.0));
        let rest = hull(&[(3.0, 0.0), (2.0, 0.5), (0.5, 0.5)]);
        assert!(rest.contains(c(0.0), 1e-12));
    }

    #[test]
    fn hull_boundary_sample_traces_circle() {
        let s = hull(&[(0.0, 0.5)]).boundary_sample(720).unwrap();
        assert_eq!(s.len(), 720);
        assert!(s.iter().all(|(_, p)| (p.norm() - 0.5).abs() < 1e-15));
        assert!(hull(&[(0.0, 0.5)]).boundary_sample(100).is_err());
    }

    #[test]
    fn extreme_point_disks() {
        let h = hull(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert_eq!(h.extreme_point_disks(1e-12), vec![0, 2]);
        let h = hull(&[(0.0, 0.5), (0.8, 0.0)]);
        assert_eq!(h.extreme_point_disks(1e-12), vec![1]);
        let h = hull(&[(0.0, 0.5), (0.3, 0.0)]);
        assert!(h.extreme_point_disks(1e-12).is_empty());
    }
}
