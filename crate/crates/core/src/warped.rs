//! The two-dimensional warped product `R x_{cosh(sqrt(sigma) t)} S^1`
//! with measure `cosh^{N-1}(sqrt(sigma) t) dt` times the uniform
//! probability measure on a circle of circumference `L`.
//!
//! Half-spaces `{t <= r}` and mixed sets
//! `Q1 x (-inf, r] u Q2 x [r_bar, inf)` (with `Q1` an arc and `Q2` its
//! complement) are measured exactly; their Minkowski boundaries are also
//! estimated on a cell grid by graph dilation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::profiles::CoshModel;
use crate::{Error, ModelParams, Result};

/// Tail mass left outside the default mesh range.
const MESH_TAIL_MASS: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct WarpedProduct {
    model: CoshModel,
    fiber_circumference: f64,
}

impl WarpedProduct {
    pub fn new(params: &ModelParams, fiber_circumference: f64) -> Result<Self> {
        if !(fiber_circumference > 0.0 && fiber_circumference.is_finite()) {
            return Err(Error::Parameter(format!(
                "fiber circumference must be positive, got {fiber_circumference}"
            )));
        }
        Ok(Self {
            model: CoshModel::new(params)?,
            fiber_circumference,
        })
    }

    /// Unit-speed circle fiber, circumference `2 pi`.
    pub fn with_unit_circle(params: &ModelParams) -> Result<Self> {
        Self::new(params, std::f64::consts::TAU)
    }

    pub fn model(&self) -> &CoshModel {
        &self.model
    }

    pub fn fiber_circumference(&self) -> f64 {
        self.fiber_circumference
    }

    /// Boundary measure `2 / L` of any proper arc in the fiber.
    pub fn arc_boundary(&self) -> f64 {
        2.0 / self.fiber_circumference
    }

    /// Horizontal stretch factor `cosh(sqrt(sigma) t)`.
    pub fn warp(&self, t: f64) -> f64 {
        (self.model.sqrt_sigma() * t).cosh()
    }

    /// Level of the half-space of mass `theta`.
    pub fn level(&self, theta: f64) -> Result<f64> {
        self.model.quantile(theta)
    }
}

/// A set in the warped product. Arcs start at fiber coordinate 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SetSpec {
    Empty,
    Whole,
    /// `{t <= r}`.
    HalfSpace { r: f64 },
    /// `Q1 x (-inf, r] u Q2 x [r_bar, inf)` where `Q1` is the arc of
    /// fiber fraction `q1` and `Q2` its complement.
    Mixed { q1: f64, r: f64, r_bar: f64 },
}

impl SetSpec {
    pub fn mixed(q1: f64, r: f64, r_bar: f64) -> Result<Self> {
        if !(q1 > 0.0 && q1 < 1.0) {
            return Err(Error::Parameter(format!(
                "arc fraction must lie in (0, 1), got {q1}"
            )));
        }
        if r.is_nan() || r_bar.is_nan() {
            return Err(Error::Parameter("mixed-set levels must be numbers".into()));
        }
        Ok(Self::Mixed { q1, r, r_bar })
    }

    /// Mixed set whose two columns each carry mass fraction `theta`.
    pub fn mixed_at_mass(space: &WarpedProduct, q1: f64, theta: f64) -> Result<Self> {
        let r = space.level(theta)?;
        let r_bar = space.level(1.0 - theta)?;
        Self::mixed(q1, r, r_bar)
    }
}

/// Normalized measure of `set`.
pub fn measure(space: &WarpedProduct, set: &SetSpec) -> Result<f64> {
    let cdf = |t| space.model.cdf(t);
    Ok(match *set {
        SetSpec::Empty => 0.0,
        SetSpec::Whole => 1.0,
        SetSpec::HalfSpace { r } => cdf(r)?,
        SetSpec::Mixed { q1, r, r_bar } => q1 * cdf(r)? + (1.0 - q1) * (1.0 - cdf(r_bar)?),
    })
}

/// Boundary measure `cosh^{N-1}(sqrt(sigma) r) / m` of `{t <= r}`.
pub fn halfspace_boundary(space: &WarpedProduct, r: f64) -> f64 {
    space.model.density(r)
}

/// Lower-bound decomposition for the boundary of a mixed set whose
/// columns have common mass `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixedExcess {
    pub theta: f64,
    pub q1: f64,
    pub b: f64,
    /// `I(theta)`, the half-space boundary at mass `theta`.
    pub profile_value: f64,
    /// `[m(Q1) I(theta), m(Q2) I(theta)]`.
    pub vertical_terms: [f64; 2],
    /// `(c / k) * 2 / L`.
    pub horizontal_term: f64,
    /// Normalized mass of the slab `[b, r]`.
    pub c: f64,
    /// Maximum of the warp on `[b, r]`.
    pub k: f64,
    pub strict_excess: f64,
}

/// Splits the boundary of a mixed set into the vertical contributions of
/// its two columns and a horizontal contribution from the arc endpoints
/// over the slab `[b, r]`.
pub fn mixed_excess(space: &WarpedProduct, set: &SetSpec, b: f64) -> Result<MixedExcess> {
    let SetSpec::Mixed { q1, r, r_bar } = *set else {
        return Err(Error::Parameter("mixed_excess needs a mixed set".into()));
    };
    if !(q1 > 0.0 && q1 < 1.0) {
        return Err(Error::Parameter(format!("arc fraction must lie in (0, 1), got {q1}")));
    }
    if !(b < r) {
        return Err(Error::Parameter(format!("need b < r, got b = {b}, r = {r}")));
    }
    let theta = space.model.cdf(r)?;
    let upper = 1.0 - space.model.cdf(r_bar)?;
    if (theta - upper).abs() > 1e-9 {
        return Err(Error::Parameter(format!(
            "column masses differ: {theta} below r, {upper} above r_bar"
        )));
    }
    let profile_value = space.model.density(r);
    let c = theta - space.model.cdf(b)?;
    let k = space.warp(b.abs().max(r.abs()));
    let horizontal_term = c / k * space.arc_boundary();
    if !(horizontal_term > 0.0) {
        return Err(Error::Parameter(format!(
            "horizontal term is not positive ({horizontal_term})"
        )));
    }
    Ok(MixedExcess {
        theta,
        q1,
        b,
        profile_value,
        vertical_terms: [q1 * profile_value, (1.0 - q1) * profile_value],
        horizontal_term,
        c,
        k,
        strict_excess: horizontal_term,
    })
}

/// Cell-centred mesh on `[-half_range, half_range] x S^1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridMesh {
    pub half_range: f64,
    pub n_t: usize,
    pub n_fiber: usize,
}

impl GridMesh {
    /// `n_t` must be even so that `t = 0` is a cell face.
    pub fn new(half_range: f64, n_t: usize, n_fiber: usize) -> Result<Self> {
        if !(half_range > 0.0 && half_range.is_finite()) {
            return Err(Error::Parameter(format!("half-range must be positive, got {half_range}")));
        }
        if n_t < 4 || !n_t.is_multiple_of(2) {
            return Err(Error::Parameter(format!("n_t must be even and at least 4, got {n_t}")));
        }
        if n_fiber < 4 {
            return Err(Error::Parameter(format!("n_fiber must be at least 4, got {n_fiber}")));
        }
        Ok(Self {
            half_range,
            n_t,
            n_fiber,
        })
    }

    /// Mesh covering all but `1e-8` of the measure.
    pub fn for_space(space: &WarpedProduct, n_t: usize, n_fiber: usize) -> Result<Self> {
        let half_range = space.level(1.0 - 0.5 * MESH_TAIL_MASS)?;
        Self::new(half_range, n_t, n_fiber)
    }

    pub fn dt(&self) -> f64 {
        2.0 * self.half_range / self.n_t as f64
    }

    pub fn t_center(&self, i: usize) -> f64 {
        -self.half_range + (i as f64 + 0.5) * self.dt()
    }

    fn t_face(&self, i: usize) -> f64 {
        -self.half_range + i as f64 * self.dt()
    }

    /// Horizontal edge length at row `i`.
    fn horizontal(&self, space: &WarpedProduct, i: usize) -> f64 {
        space.warp(self.t_center(i)) * space.fiber_circumference() / self.n_fiber as f64
    }

    /// Smallest admissible dilation radius for `set`: twice the longest
    /// edge in the band where the set's boundary lives.
    pub fn min_eps(&self, space: &WarpedProduct, set: &SetSpec) -> f64 {
        let band = band_level(set);
        let horizontal = space.warp(band) * space.fiber_circumference() / self.n_fiber as f64;
        2.0 * self.dt().max(horizontal)
    }
}

/// Largest `|t|` at which the set's boundary, or its horizontal growth
/// that matters, is probed.
fn band_level(set: &SetSpec) -> f64 {
    match *set {
        SetSpec::Empty | SetSpec::Whole => 0.0,
        SetSpec::HalfSpace { r } => r.abs(),
        SetSpec::Mixed { r, r_bar, .. } => r.abs().max(r_bar.abs()) + 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Frontier {
    dist: f64,
    node: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `(m(A^eps) - m(A)) / eps` on the mesh, where `A^eps` is the dilation of
/// the cell set `A` in the graph metric (vertical edges `dt`, horizontal
/// edges `cosh(sqrt(sigma) t) L / n_fiber`).
///
/// A cell first reached at distance `d` through an edge of length `l`
/// spans distances `[d - l, d]` from `A` and is counted with the covered
/// fraction `clamp((eps - d + l) / l, 0, 1)`.
pub fn grid_eps_boundary(
    space: &WarpedProduct,
    mesh: &GridMesh,
    set: &SetSpec,
    eps: f64,
) -> Result<f64> {
    if matches!(set, SetSpec::Empty | SetSpec::Whole) {
        return Ok(0.0);
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
    }
    if eps < mesh.min_eps(space, set) {
        let band = band_level(set);
        let required_n_t = ((4.0 * mesh.half_range / eps).ceil() as usize).next_multiple_of(2);
        let required_n_fiber =
            (2.0 * space.warp(band) * space.fiber_circumference() / eps).ceil() as usize;
        return Err(Error::UnderResolved {
            eps,
            required_n_t: required_n_t.max(mesh.n_t),
            required_n_fiber: required_n_fiber.max(mesh.n_fiber),
        });
    }

    let (n_t, n_f) = (mesh.n_t, mesh.n_fiber);
    let row_mass: Vec<f64> = {
        let cdfs = (0..=n_t)
            .map(|i| match i {
                0 => Ok(0.0),
                i if i == n_t => Ok(1.0),
                i => space.model.cdf(mesh.t_face(i)),
            })
            .collect::<Result<Vec<f64>>>()?;
        cdfs.windows(2).map(|w| (w[1] - w[0]) / n_f as f64).collect()
    };
    let horizontal: Vec<f64> = (0..n_t).map(|i| mesh.horizontal(space, i)).collect();
    let dt = mesh.dt();

    let inside = |i: usize, j: usize| -> bool {
        let t = mesh.t_center(i);
        match *set {
            SetSpec::HalfSpace { r } => t < r,
            SetSpec::Mixed { q1, r, r_bar } => {
                let in_q1 = (j as f64 + 0.5) / n_f as f64 <= q1;
                if in_q1 {
                    t < r
                } else {
                    t > r_bar
                }
            }
            SetSpec::Empty => false,
            SetSpec::Whole => true,
        }
    };

    let idx = |i: usize, j: usize| i * n_f + j;
    let mut dist = vec![f64::INFINITY; n_t * n_f];
    let mut last_edge = vec![0.0; n_t * n_f];
    let mut heap = BinaryHeap::new();
    for i in 0..n_t {
        for j in 0..n_f {
            if inside(i, j) {
                dist[idx(i, j)] = 0.0;
                heap.push(Frontier {
                    dist: 0.0,
                    node: idx(i, j),
                });
            }
        }
    }
    while let Some(Frontier { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        let (i, j) = (node / n_f, node % n_f);
        let h = horizontal[i];
        let up = (i + 1 < n_t).then(|| idx(i + 1, j));
        let down = (i > 0).then(|| idx(i - 1, j));
        let neighbours = [
            (Some(idx(i, (j + 1) % n_f)), h),
            (Some(idx(i, (j + n_f - 1) % n_f)), h),
            (up, dt),
            (down, dt),
        ];
        for (next, len) in neighbours {
            let Some(next) = next else { continue };
            let nd = d + len;
            // Cells whose nearest point is already beyond eps add nothing.
            if nd - len >= eps || nd >= dist[next] {
                continue;
            }
            dist[next] = nd;
            last_edge[next] = len;
            heap.push(Frontier { dist: nd, node: next });
        }
    }

    let mut added = 0.0;
    for (node, &d) in dist.iter().enumerate() {
        if d > 0.0 && d.is_finite() {
            let l = last_edge[node];
            let fraction = ((eps - d + l) / l).clamp(0.0, 1.0);
            added += fraction * row_mass[node / n_f];
        }
    }
    Ok(added / eps)
}
