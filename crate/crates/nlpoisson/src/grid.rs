//! Uniform periodic grids on `[-L, L)^n` and complex fields sampled on them.
//!
//! A grid with `N` points per axis carries the dual frequency lattice
//! `xi_k = (k - N/2) * pi/L`, so the discrete duality `dx * dxi * N = 2*pi`
//! holds exactly. Grids with `L = sqrt(N*pi/2)` are self-dual: the physical
//! and frequency lattices are the same point set, which is what lets the
//! pointwise identity pipelines compare their two sides sample by sample.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("points_per_dim must be a power of two >= 8, got {0}")]
    BadPointCount(usize),
    #[error("half_width must be positive and finite, got {0}")]
    BadHalfWidth(f64),
    #[error("unsupported dimension {0}; expected 1, 2, or 3")]
    BadDimension(usize),
}

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("sample at flat index {index} is not finite")]
    NonFinite { index: usize },
    #[error("expected {expected} samples for this grid, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("grid is not self-dual; physical and frequency lattices differ")]
    NotSelfDual,
    #[error("fields live on different grids or spaces")]
    Mismatch,
}

/// Which lattice the samples of a [`Field`] refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceTag {
    Physical,
    Frequency,
}

/// Uniform periodic grid: `n_dim` axes, `points_per_dim` points per axis,
/// physical box `[-half_width, half_width)` per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    n_dim: usize,
    points_per_dim: usize,
    half_width: f64,
}

/// Builds a grid, rejecting non-power-of-two point counts, nonpositive
/// half-widths and dimensions outside 1..=3.
pub fn make_grid(n_dim: usize, points_per_dim: usize, half_width: f64) -> Result<SpatialGrid, GridError> {
    SpatialGrid::new(n_dim, points_per_dim, half_width)
}

impl SpatialGrid {
    pub fn new(n_dim: usize, points_per_dim: usize, half_width: f64) -> Result<Self, GridError> {
        if !(1..=3).contains(&n_dim) {
            return Err(GridError::BadDimension(n_dim));
        }
        if points_per_dim < 8 || !points_per_dim.is_power_of_two() {
            return Err(GridError::BadPointCount(points_per_dim));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(GridError::BadHalfWidth(half_width));
        }
        Ok(SpatialGrid { n_dim, points_per_dim, half_width })
    }

    /// Grid with `L = sqrt(N*pi/2)`, making the frequency lattice coincide
    /// with the physical one.
    pub fn self_dual(n_dim: usize, points_per_dim: usize) -> Result<Self, GridError> {
        let l = (points_per_dim as f64 * PI / 2.0).sqrt();
        SpatialGrid::new(n_dim, points_per_dim, l)
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    pub fn points_per_dim(&self) -> usize {
        self.points_per_dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// `dx = 2L/N`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points_per_dim as f64
    }

    /// `dxi = pi/L`.
    pub fn freq_spacing(&self) -> f64 {
        PI / self.half_width
    }

    /// Half-extent of the frequency lattice, `N*pi/(2L)`.
    pub fn freq_half_width(&self) -> f64 {
        self.points_per_dim as f64 * PI / (2.0 * self.half_width)
    }

    pub fn total_points(&self) -> usize {
        self.points_per_dim.pow(self.n_dim as u32)
    }

    /// Physical coordinate of axis index `j`: `-L + j*dx`.
    pub fn coord(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    /// Frequency coordinate of axis index `k`: `(k - N/2)*dxi`.
    pub fn freq_coord(&self, k: usize) -> f64 {
        (k as f64 - self.points_per_dim as f64 / 2.0) * self.freq_spacing()
    }

    pub fn is_self_dual(&self) -> bool {
        let dx = self.spacing();
        let dxi = self.freq_spacing();
        (dx - dxi).abs() <= 1e-12 * dx
    }

    /// Decodes a flat row-major index into per-axis indices.
    pub fn decode(&self, flat: usize, idx: &mut [usize]) {
        let mut rem = flat;
        for a in (0..self.n_dim).rev() {
            idx[a] = rem % self.points_per_dim;
            rem /= self.points_per_dim;
        }
    }

    /// Physical position of a flat index; `pos` must have length `n_dim`.
    pub fn position(&self, flat: usize, pos: &mut [f64]) {
        let mut rem = flat;
        for a in (0..self.n_dim).rev() {
            pos[a] = self.coord(rem % self.points_per_dim);
            rem /= self.points_per_dim;
        }
    }

    /// Frequency position of a flat index.
    pub fn freq_position(&self, flat: usize, pos: &mut [f64]) {
        let mut rem = flat;
        for a in (0..self.n_dim).rev() {
            pos[a] = self.freq_coord(rem % self.points_per_dim);
            rem /= self.points_per_dim;
        }
    }
}

/// Complex samples on a grid, tagged with the lattice they live on.
/// Row-major over axes. Construction rejects non-finite samples, so a
/// `Field` obtained from any operation in this crate is finite throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: SpatialGrid,
    space: SpaceTag,
    samples: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: SpatialGrid, space: SpaceTag, samples: Vec<Complex64>) -> Result<Self, FieldError> {
        if samples.len() != grid.total_points() {
            return Err(FieldError::LengthMismatch {
                expected: grid.total_points(),
                got: samples.len(),
            });
        }
        for (index, s) in samples.iter().enumerate() {
            if !s.re.is_finite() || !s.im.is_finite() {
                return Err(FieldError::NonFinite { index });
            }
        }
        Ok(Field { grid, space, samples })
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn space(&self) -> SpaceTag {
        self.space
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// L^2 norm with the rectangle-rule weight of the lattice the samples
    /// live on (`dx^n` or `dxi^n`).
    pub fn l2_norm(&self) -> f64 {
        let w = match self.space {
            SpaceTag::Physical => self.grid.spacing(),
            SpaceTag::Frequency => self.grid.freq_spacing(),
        };
        let sum: f64 = self.samples.iter().map(|z| z.norm_sqr()).sum();
        (sum * w.powi(self.grid.n_dim as i32)).sqrt()
    }

    pub fn linf_norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: Complex64) -> Field {
        Field {
            grid: self.grid,
            space: self.space,
            samples: self.samples.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Field) -> Result<f64, FieldError> {
        if self.grid != other.grid || self.space != other.space {
            return Err(FieldError::Mismatch);
        }
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// On a self-dual grid the frequency lattice is the physical lattice,
    /// so frequency samples may be re-read as a physical-space field.
    pub fn reinterpret_physical(self) -> Result<Field, FieldError> {
        if !self.grid.is_self_dual() {
            return Err(FieldError::NotSelfDual);
        }
        Ok(Field { space: SpaceTag::Physical, ..self })
    }
}

/// Samples a pointwise function on the physical lattice. A non-finite value
/// is reported with the flat index of the offending node.
pub fn sample<F>(f: F, grid: &SpatialGrid) -> Result<Field, FieldError>
where
    F: Fn(&[f64]) -> Complex64,
{
    let mut pos = [0.0f64; 3];
    let n = grid.n_dim();
    let mut samples = Vec::with_capacity(grid.total_points());
    for flat in 0..grid.total_points() {
        grid.position(flat, &mut pos[..n]);
        let v = f(&pos[..n]);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(FieldError::NonFinite { index: flat });
        }
        samples.push(v);
    }
    Field::new(*grid, SpaceTag::Physical, samples)
}

/// Samples a pointwise function on the frequency lattice.
pub fn sample_frequency<F>(f: F, grid: &SpatialGrid) -> Result<Field, FieldError>
where
    F: Fn(&[f64]) -> Complex64,
{
    let mut pos = [0.0f64; 3];
    let n = grid.n_dim();
    let mut samples = Vec::with_capacity(grid.total_points());
    for flat in 0..grid.total_points() {
        grid.freq_position(flat, &mut pos[..n]);
        let v = f(&pos[..n]);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(FieldError::NonFinite { index: flat });
        }
        samples.push(v);
    }
    Field::new(*grid, SpaceTag::Frequency, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_examples() {
        let g = make_grid(1, 256, 20.0).unwrap();
        assert_eq!(g.spacing(), 0.15625);
        assert!((g.freq_spacing() - PI / 20.0).abs() < 1e-16);

        let g2 = make_grid(2, 64, 10.0).unwrap();
        assert_eq!(g2.total_points(), 4096);

        assert!(make_grid(1, 100, 5.0).is_err());
        assert!(make_grid(1, 4, 5.0).is_err());
        assert!(make_grid(1, 256, 0.0).is_err());
        assert!(make_grid(0, 256, 5.0).is_err());
        assert!(make_grid(4, 256, 5.0).is_err());
    }

    #[test]
    fn discrete_duality_is_exact() {
        for (n, l) in [(256usize, 20.0), (512, 13.7), (1024, 80.0)] {
            let g = make_grid(1, n, l).unwrap();
            let product = g.spacing() * g.freq_spacing() * n as f64;
            assert!((product - 2.0 * PI).abs() < 1e-12 * PI);
            // frequency lattice covers [-N pi/(2L), N pi/(2L))
            assert!((g.freq_coord(0) + g.freq_half_width()).abs() < 1e-12);
        }
    }

    #[test]
    fn self_dual_lattices_coincide() {
        let g = SpatialGrid::self_dual(1, 512).unwrap();
        assert!(g.is_self_dual());
        for k in [0, 1, 255, 256, 511] {
            assert!((g.coord(k) - g.freq_coord(k)).abs() < 1e-12);
        }
        assert!(!make_grid(1, 512, 20.0).unwrap().is_self_dual());
    }

    #[test]
    fn sampling_and_errors() {
        let g = make_grid(1, 64, 5.0).unwrap();
        let ones = sample(|_| Complex64::new(1.0, 0.0), &g).unwrap();
        assert!(ones.samples().iter().all(|z| *z == Complex64::new(1.0, 0.0)));

        let gauss = sample(|x| Complex64::new((-x[0] * x[0] / 2.0).exp(), 0.0), &g).unwrap();
        let mid = gauss.samples()[32];
        assert!((mid.re - 1.0).abs() < 1e-15); // x = 0 sits on the lattice

        // 1/x blows up at the origin node
        let err = sample(|x| Complex64::new(1.0 / x[0], 0.0), &g);
        match err {
            Err(FieldError::NonFinite { index }) => assert_eq!(index, 32),
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn row_major_decode() {
        let g = make_grid(2, 8, 4.0).unwrap();
        let mut idx = [0usize; 2];
        g.decode(8 * 3 + 5, &mut idx);
        assert_eq!(idx, [3, 5]);
        let mut pos = [0.0; 2];
        g.position(8 * 3 + 5, &mut pos);
        assert!((pos[0] - g.coord(3)).abs() < 1e-15);
        assert!((pos[1] - g.coord(5)).abs() < 1e-15);
    }

    #[test]
    fn field_length_check() {
        let g = make_grid(1, 16, 2.0).unwrap();
        let bad = Field::new(g, SpaceTag::Physical, vec![Complex64::default(); 15]);
        assert!(matches!(bad, Err(FieldError::LengthMismatch { .. })));
        let nan = Field::new(
            g,
            SpaceTag::Physical,
            vec![Complex64::new(f64::NAN, 0.0); 16],
        );
        assert!(matches!(nan, Err(FieldError::NonFinite { index: 0 })));
    }
}
