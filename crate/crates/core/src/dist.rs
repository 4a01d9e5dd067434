//! Discrete probability distributions on finite ordered grids.
//!
//! A [`SupportGrid`] is a Cartesian product of strictly increasing real level
//! lists, enumerated lexicographically (last dimension fastest). The
//! lexicographic order is a linear extension of the componentwise order, which
//! the upper-set enumeration below relies on.
//!
//! [`DiscreteDistribution`] carries a shared grid and one weight per point.
//! Besides the usual mixing/product/pushforward machinery it implements the
//! usual stochastic order and the join/meet built from upper rectangular sets.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::{Tolerances, UPPER_SET_LIMIT};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SupportGrid {
    dims: Vec<Vec<f64>>,
    strides: Vec<usize>,
    len: usize,
}

impl PartialEq for SupportGrid {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims
    }
}

impl TryFrom<Vec<Vec<f64>>> for SupportGrid {
    type Error = Error;

    fn try_from(dims: Vec<Vec<f64>>) -> Result<Self> {
        SupportGrid::new(dims)
    }
}

impl From<SupportGrid> for Vec<Vec<f64>> {
    fn from(grid: SupportGrid) -> Self {
        grid.dims
    }
}

impl SupportGrid {
    pub fn new(dims: Vec<Vec<f64>>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidGrid("grid has no dimensions".into()));
        }
        for (k, levels) in dims.iter().enumerate() {
            if levels.is_empty() {
                return Err(Error::InvalidGrid(format!("dimension {k} has no levels")));
            }
            if levels.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidGrid(format!("dimension {k} has a non-finite level")));
            }
            if levels.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidGrid(format!(
                    "levels of dimension {k} are not strictly increasing"
                )));
            }
        }
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len() - 1).rev() {
            strides[k] = strides[k + 1] * dims[k + 1].len();
        }
        let len = strides[0] * dims[0].len();
        Ok(Self { dims, strides, len })
    }

    /// One-dimensional grid.
    pub fn line(levels: Vec<f64>) -> Result<Self> {
        Self::new(vec![levels])
    }

    /// The grid `{0, 1, ..., k-1}`, used to index finite state lists.
    pub fn indices(k: usize) -> Result<Self> {
        Self::line((0..k).map(|i| i as f64).collect())
    }

    /// Cartesian product of several grids, dimensions concatenated.
    pub fn product(grids: &[&SupportGrid]) -> Result<Self> {
        if grids.is_empty() {
            return Err(Error::Empty("product of zero grids"));
        }
        Self::new(grids.iter().flat_map(|g| g.dims.iter().cloned()).collect())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[Vec<f64>] {
        &self.dims
    }

    pub fn shape(&self) -> Vec<usize> {
        self.dims.iter().map(Vec::len).collect()
    }

    pub fn multi_index(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (k, stride) in self.strides.iter().enumerate() {
            out[k] = index / stride;
            index %= stride;
        }
        out
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn point(&self, index: usize) -> Vec<f64> {
        self.multi_index(index)
            .into_iter()
            .zip(&self.dims)
            .map(|(i, levels)| levels[i])
            .collect()
    }

    /// Index of the grid point nearest to `coords`, provided every coordinate
    /// lies within `tol` (scaled by magnitude above 1) of a level.
    pub fn snap(&self, coords: &[f64], tol: f64) -> Option<usize> {
        if coords.len() != self.dims.len() {
            return None;
        }
        let mut multi = Vec::with_capacity(coords.len());
        for (x, levels) in coords.iter().zip(&self.dims) {
            let pos = levels.partition_point(|l| l < x);
            let mut best: Option<(usize, f64)> = None;
            for cand in [pos.wrapping_sub(1), pos] {
                if let Some(l) = levels.get(cand) {
                    let d = (l - x).abs();
                    if best.is_none_or(|(_, bd)| d < bd) {
                        best = Some((cand, d));
                    }
                }
            }
            let (i, d) = best?;
            if d > tol * x.abs().max(1.0) {
                return None;
            }
            multi.push(i);
        }
        Some(self.flat_index(&multi))
    }

    /// Exact lookup of a point.
    pub fn locate(&self, coords: &[f64]) -> Option<usize> {
        self.snap(coords, 0.0)
    }

    /// Componentwise order between two grid points.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        let (ma, mb) = (self.multi_index(a), self.multi_index(b));
        ma.iter().zip(&mb).all(|(x, y)| x <= y)
    }

    /// Index of the point one level up along dimension `k`, if any.
    fn step_up(&self, index: usize, k: usize) -> Option<usize> {
        let coord = (index / self.strides[k]) % self.dims[k].len();
        (coord + 1 < self.dims[k].len()).then(|| index + self.strides[k])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    grid: Arc<SupportGrid>,
    weights: Vec<f64>,
}

fn same_grid(a: &Arc<SupportGrid>, b: &Arc<SupportGrid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn check_probability_vector(weights: &[f64], tol: f64) -> Result<()> {
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::NotProbability(format!("weight {w} is negative or not finite")));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > tol {
        return Err(Error::NotProbability(format!("weights sum to {sum}")));
    }
    Ok(())
}

impl DiscreteDistribution {
    pub fn new(grid: Arc<SupportGrid>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != grid.len() {
            return Err(Error::NotProbability(format!(
                "{} weights for a grid of {} points",
                weights.len(),
                grid.len()
            )));
        }
        check_probability_vector(&weights, Tolerances::default().mass)?;
        Ok(Self { grid, weights })
    }

    pub fn dirac(grid: Arc<SupportGrid>, point: &[f64]) -> Result<Self> {
        let index = grid
            .locate(point)
            .ok_or_else(|| Error::PointNotOnGrid(point.to_vec()))?;
        Ok(Self::dirac_at(grid, index))
    }

    /// Dirac measure at a point given by its flat index.
    pub fn dirac_at(grid: Arc<SupportGrid>, index: usize) -> Self {
        let mut weights = vec![0.0; grid.len()];
        weights[index] = 1.0;
        Self { grid, weights }
    }

    pub fn uniform(grid: Arc<SupportGrid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            weights: vec![1.0 / n as f64; n],
        }
    }

    /// Skips validation; callers guarantee a probability vector of the right length.
    pub(crate) fn from_parts_unchecked(grid: Arc<SupportGrid>, weights: Vec<f64>) -> Self {
        debug_assert_eq!(grid.len(), weights.len());
        Self { grid, weights }
    }

    pub fn grid(&self) -> &Arc<SupportGrid> {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> f64 {
        self.weights[index]
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(i, _)| i)
    }

    /// Index of the single atom, if this is a Dirac measure.
    pub fn as_dirac(&self) -> Option<usize> {
        let mut support = self.support();
        let first = support.next()?;
        support.next().is_none().then_some(first)
    }

    pub fn mix(components: &[(f64, &DiscreteDistribution)]) -> Result<Self> {
        let (_, first) = components.first().ok_or(Error::Empty("mixture components"))?;
        let coefs: Vec<f64> = components.iter().map(|(w, _)| *w).collect();
        check_probability_vector(&coefs, Tolerances::default().mass)?;
        if components.iter().any(|(_, d)| !same_grid(&d.grid, &first.grid)) {
            return Err(Error::GridMismatch);
        }
        let mut weights = vec![0.0; first.grid.len()];
        for (c, d) in components {
            for (acc, w) in weights.iter_mut().zip(&d.weights) {
                *acc += c * w;
            }
        }
        Ok(Self {
            grid: first.grid.clone(),
            weights,
        })
    }

    /// Product measure on the product grid (dimensions concatenated in order).
    pub fn product(dists: &[&DiscreteDistribution]) -> Result<Self> {
        if dists.is_empty() {
            return Err(Error::Empty("product of zero distributions"));
        }
        if dists.len() == 1 {
            return Ok(dists[0].clone());
        }
        let grids: Vec<&SupportGrid> = dists.iter().map(|d| d.grid.as_ref()).collect();
        let grid = Arc::new(SupportGrid::product(&grids)?);
        let mut weights = vec![1.0];
        for d in dists {
            let mut next = Vec::with_capacity(weights.len() * d.weights.len());
            for w in &weights {
                next.extend(d.weights.iter().map(|v| w * v));
            }
            weights = next;
        }
        Ok(Self { grid, weights })
    }

    /// Image measure. `map` receives the flat index of a source point (use
    /// [`SupportGrid::point`] for its coordinates) and returns target
    /// coordinates, which are snapped to the target grid within `tol.snap`.
    pub fn pushforward<F>(&self, target: &Arc<SupportGrid>, mut map: F) -> Result<Self>
    where
        F: FnMut(usize) -> Vec<f64>,
    {
        let tol = Tolerances::default().snap;
        let mut weights = vec![0.0; target.len()];
        for (i, w) in self.weights.iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            let coords = map(i);
            let j = target.snap(&coords, tol).ok_or(Error::NotRepresentable {
                value: coords.first().copied().unwrap_or(f64::NAN),
            })?;
            weights[j] += w;
        }
        Ok(Self {
            grid: target.clone(),
            weights,
        })
    }

    /// Image measure under a map between flat indices.
    pub fn pushforward_index<F>(&self, target: &Arc<SupportGrid>, mut map: F) -> Self
    where
        F: FnMut(usize) -> usize,
    {
        let mut weights = vec![0.0; target.len()];
        for (i, w) in self.weights.iter().enumerate() {
            if *w != 0.0 {
                weights[map(i)] += w;
            }
        }
        Self {
            grid: target.clone(),
            weights,
        }
    }

    pub fn expectation<F>(&self, f: F) -> f64
    where
        F: Fn(&[f64]) -> f64,
    {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(i, w)| w * f(&self.grid.point(i)))
            .sum()
    }

    /// Mean of a one-dimensional distribution.
    pub fn mean(&self) -> f64 {
        let levels = &self.grid.dims[0];
        if self.grid.ndim() == 1 {
            self.weights.iter().zip(levels).map(|(w, x)| w * x).sum()
        } else {
            self.expectation(|p| p[0])
        }
    }

    /// Sup-norm distance between weight vectors on the same grid.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if !same_grid(&self.grid, &other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other).is_ok_and(|d| d <= tol)
    }

    /// Mass of every upper rectangular set `{y >= x}`, indexed by `x`.
    fn upper_rect_masses(&self) -> Vec<f64> {
        let grid = &self.grid;
        let mut s = self.weights.clone();
        for k in 0..grid.ndim() {
            for i in (0..grid.len()).rev() {
                if let Some(j) = grid.step_up(i, k) {
                    s[i] += s[j];
                }
            }
        }
        s
    }

    /// Usual stochastic order `self <= other`: every upper set carries at
    /// least as much mass under `other`, up to `tol.order`.
    pub fn stochastic_leq(&self, other: &Self) -> Result<bool> {
        if !same_grid(&self.grid, &other.grid) {
            return Err(Error::GridMismatch);
        }
        let tol = Tolerances::default().order;
        let grid = &self.grid;
        if grid.ndim() == 1 {
            let (s1, s2) = (self.upper_rect_masses(), other.upper_rect_masses());
            return Ok(s1.iter().zip(&s2).all(|(a, b)| *a <= b + tol));
        }
        if grid.len() > UPPER_SET_LIMIT {
            return Err(Error::GridTooLarge {
                points: grid.len(),
                limit: UPPER_SET_LIMIT,
            });
        }
        let diff: Vec<f64> = other
            .weights
            .iter()
            .zip(&self.weights)
            .map(|(b, a)| b - a)
            .collect();
        let mut included = vec![false; grid.len()];
        Ok(every_upper_set(grid, &diff, grid.len(), 0.0, &mut included, &mut |d| {
            d >= -tol
        }))
    }

    pub fn lattice_join(&self, other: &Self) -> Result<Self> {
        self.lattice_op(other, f64::max)
    }

    pub fn lattice_meet(&self, other: &Self) -> Result<Self> {
        self.lattice_op(other, f64::min)
    }

    fn lattice_op(&self, other: &Self, pick: fn(f64, f64) -> f64) -> Result<Self> {
        if !same_grid(&self.grid, &other.grid) {
            return Err(Error::GridMismatch);
        }
        let grid = &self.grid;
        let (s1, s2) = (self.upper_rect_masses(), other.upper_rect_masses());
        let s: Vec<f64> = s1.iter().zip(&s2).map(|(a, b)| pick(*a, *b)).collect();
        let mut weights = if grid.ndim() == 1 {
            (0..grid.len())
                .map(|i| s[i] - grid.step_up(i, 0).map_or(0.0, |j| s[j]))
                .collect::<Vec<_>>()
        } else {
            inclusion_exclusion(grid, &s)
        };
        let floor = -Tolerances::default().lattice_negative;
        if let Some((i, m)) = weights.iter().enumerate().find(|(_, m)| **m < floor) {
            return Err(Error::ConstructionFailed {
                point: grid.point(i),
                mass: *m,
            });
        }
        for m in weights.iter_mut() {
            *m = m.max(0.0);
        }
        let total: f64 = weights.iter().sum();
        for m in weights.iter_mut() {
            *m /= total;
        }
        Ok(Self {
            grid: grid.clone(),
            weights,
        })
    }
}

fn inclusion_exclusion(grid: &SupportGrid, s: &[f64]) -> Vec<f64> {
    let d = grid.ndim();
    (0..grid.len())
        .map(|i| {
            let mut total = 0.0;
            'corners: for mask in 0u32..(1 << d) {
                let mut j = i;
                for k in 0..d {
                    if mask & (1 << k) != 0 {
                        match grid.step_up(j, k) {
                            Some(up) => j = up,
                            None => continue 'corners,
                        }
                    }
                }
                let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * s[j];
            }
            total
        })
        .collect()
}

/// Enumerates every upper set of the grid's componentwise order, deciding
/// points from the top of the lexicographic order down. Calls `check` with the
/// accumulated `value` sum of each complete upper set and stops at the first
/// `false`.
fn every_upper_set(
    grid: &SupportGrid,
    value: &[f64],
    remaining: usize,
    acc: f64,
    included: &mut [bool],
    check: &mut dyn FnMut(f64) -> bool,
) -> bool {
    if remaining == 0 {
        return check(acc);
    }
    let i = remaining - 1;
    if !every_upper_set(grid, value, i, acc, included, check) {
        return false;
    }
    let closed = (0..grid.ndim()).all(|k| grid.step_up(i, k).is_none_or(|j| included[j]));
    if closed {
        included[i] = true;
        let ok = every_upper_set(grid, value, i, acc + value[i], included, check);
        included[i] = false;
        if !ok {
            return false;
        }
    }
    true
}

/// Number of upper sets of a grid (test helper for the enumeration).
#[cfg(test)]
fn count_upper_sets(grid: &SupportGrid) -> usize {
    let zeros = vec![0.0; grid.len()];
    let mut included = vec![false; grid.len()];
    let mut count = 0;
    every_upper_set(grid, &zeros, grid.len(), 0.0, &mut included, &mut |_| {
        count += 1;
        true
    });
    count
}
