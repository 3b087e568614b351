//! Seeded random generators: generic vectors, boundary points,
//! form-unitary matrices, loxodromic maps, and regular chart curves.
//! Everything draws from a ChaCha stream, so runs reproduce exactly
//! across platforms for a fixed seed.

use crate::boundary::{heis_embed, BoundaryPoint, HeisenbergPoint};
use crate::curves::ChartPath;
use crate::hermitian::{boxtimes, herm_inner, FormTag};
use crate::{c, cr, CMat3, CVec3, C};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Complex number with both parts uniform in [-scale, scale].
    pub fn complex(&mut self, scale: f64) -> C {
        c(
            self.uniform(-scale, scale),
            self.uniform(-scale, scale),
        )
    }

    pub fn phase(&mut self) -> C {
        C::from_polar(1.0, self.uniform(0.0, 2.0 * std::f64::consts::PI))
    }

    /// Generic vector with entries of order `scale`.
    pub fn vector(&mut self, scale: f64) -> CVec3 {
        CVec3::new(
            self.complex(scale),
            self.complex(scale),
            self.complex(scale),
        )
    }

    pub fn heis_point(&mut self, radius: f64, height: f64) -> HeisenbergPoint {
        HeisenbergPoint::finite(self.complex(radius), self.uniform(-height, height))
    }

    /// Random boundary point away from infinity, in the requested model.
    pub fn null_point(&mut self, form: FormTag) -> BoundaryPoint {
        heis_embed(self.heis_point(1.5, 2.0)).to_form(form)
    }

    /// Haar-ish random form-unitary matrix, built column by column:
    /// a negative unit column, a positive unit column orthogonal to it,
    /// and their cross product closing the frame.
    pub fn unitary(&mut self, form: FormTag) -> CMat3 {
        let ball = loop {
            // interior-dominated draw keeps the pairing negative
            let neg_raw = CVec3::new(self.complex(0.4), self.complex(0.4), cr(1.0));
            let nn = herm_inner(FormTag::Form1, &neg_raw, &neg_raw).re;
            if nn >= -0.05 {
                continue;
            }
            let c3 = neg_raw * (self.phase() / cr((-nn).sqrt()));
            let cand = self.vector(1.0);
            let proj = cand + c3 * herm_inner(FormTag::Form1, &cand, &c3);
            let pp = herm_inner(FormTag::Form1, &proj, &proj).re;
            if pp <= 0.05 {
                continue;
            }
            let c1 = proj / cr(pp.sqrt());
            // unit positive and orthogonal to both, by the pairing rule
            // for cross products of orthogonal unit columns
            let c2 = boxtimes(FormTag::Form1, &c1, &c3) * self.phase();
            break CMat3::from_columns(&[c1, c2, c3]);
        };
        match form {
            FormTag::Form1 => ball,
            FormTag::Form2 => {
                let cm = crate::hermitian::cayley_matrix();
                cm * ball * cm
            }
        }
    }

    /// Random loxodromic map: a dilation-rotation conjugated by a
    /// random unitary of the same form.
    pub fn loxodromic(&mut self, form: FormTag) -> CMat3 {
        let s = self.uniform(1.3, 2.5);
        let phi1 = self.phase();
        let phi2 = self.phase();
        let core = CMat3::from_diagonal(&CVec3::new(
            phi1 * cr(s),
            phi2,
            phi1 / cr(s),
        ));
        let core = match form {
            FormTag::Form2 => core,
            FormTag::Form1 => {
                let cm = crate::hermitian::cayley_matrix();
                cm * core * cm
            }
        };
        let k = self.unitary(form);
        let k_inv = form_inverse(form, &k);
        k * core * k_inv
    }

    /// Closed chart curve with bounded harmonics and velocity bounded
    /// away from zero, suitable for projection and curvature tests.
    pub fn chart_path(&mut self, harmonics: usize) -> ChartPath {
        loop {
            let mut zeta = vec![(0i64, self.complex(0.5)), (1i64, cr(1.0))];
            let mut v = vec![(1i64, self.complex(0.5))];
            for k in 2..(2 + harmonics as i64) {
                let damp = 0.25 / (k * k) as f64;
                zeta.push((k, self.complex(damp)));
                zeta.push((-k + 1, self.complex(damp)));
                v.push((k, self.complex(2.0 * damp)));
            }
            let path = ChartPath::new(zeta, v);
            let regular = (0..64).all(|i| {
                let (_, _, dz, _, _, _) = path.chart2(i as f64 / 64.0);
                dz.norm() > 0.25
            });
            if regular {
                return path;
            }
        }
    }
}

/// Exact inverse of a form-unitary matrix: J M* J.
pub fn form_inverse(form: FormTag, m: &CMat3) -> CMat3 {
    let j = form.gram();
    j * m.adjoint() * j
}
