//! Synthetic inputs: point clouds, set-cover instances with a planted optimum,
//! and covering point sets, whose solution points have a minimum navigable
//! neighborhood of exactly `OPT + 1` for the set-cover instance they encode.

use std::ops::Range;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::{DistanceOracle, Metric, PointSet};
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::setcover::{CoverAccess, ExplicitInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointKind {
    /// 1-D points with strictly growing gaps: `2^i - 1` while exactly
    /// representable, a flatter geometric progression beyond that.
    Line,
    /// The first `n` points of an integer lattice with side `⌈n^(1/dim)⌉`.
    Grid,
    /// Uniform in `[0, 1)^dim`.
    Uniform,
    /// Isotropic Gaussian blobs (σ = 0.5) around centers uniform in `[0, 10)^dim`.
    GaussianClusters { clusters: usize },
}

impl FromStr for PointKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "line" => Ok(PointKind::Line),
            "grid" => Ok(PointKind::Grid),
            "uniform" => Ok(PointKind::Uniform),
            "clusters" | "gaussian-clusters" => Ok(PointKind::GaussianClusters { clusters: 8 }),
            _ => Err(Error::input(format!("unknown point kind {s:?}"))),
        }
    }
}

/// Largest `n` for which `2^(n-1) - 1` is still an exact f64.
const EXACT_LINE: usize = 53;

pub fn line_positions(n: usize) -> Vec<f64> {
    if n <= EXACT_LINE {
        return (0..n).map(|i| ((1u64 << i) - 1) as f64).collect();
    }
    // Same shape, scaled so the far end stays near 2^50.
    let b = 2f64.powf(50.0 / (n - 1) as f64);
    (0..n).map(|i| (b.powi(i as i32) - 1.0) / (b - 1.0)).collect()
}

pub fn gen_points(kind: PointKind, n: usize, dim: usize, seed: u64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::input("point count must be at least 1"));
    }
    if dim == 0 {
        return Err(Error::input("dimension must be at least 1"));
    }
    let mut rng = substream(seed, "points", 0);
    match kind {
        PointKind::Line => PointSet::from_flat(1, line_positions(n)),
        PointKind::Grid => {
            let mut side = 1usize;
            while side.checked_pow(dim as u32).is_some_and(|c| c < n) {
                side += 1;
            }
            let mut coords = Vec::with_capacity(n * dim);
            for mut x in 0..n {
                for _ in 0..dim {
                    coords.push((x % side) as f64);
                    x /= side;
                }
            }
            PointSet::from_flat(dim, coords)
        }
        PointKind::Uniform => PointSet::from_flat(dim, (0..n * dim).map(|_| rng.random::<f64>()).collect()),
        PointKind::GaussianClusters { clusters } => {
            let k = clusters.clamp(1, n);
            let centers: Vec<f64> = (0..k * dim).map(|_| rng.random_range(0.0..10.0)).collect();
            let noise = Normal::new(0.0, 0.5).expect("valid sigma");
            let mut coords = Vec::with_capacity(n * dim);
            for i in 0..n {
                let c = &centers[(i % k) * dim..(i % k + 1) * dim];
                coords.extend(c.iter().map(|&x| x + noise.sample(&mut rng)));
            }
            PointSet::from_flat(dim, coords)
        }
    }
}

/// A set-cover instance whose optimum is known by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedCover {
    pub instance: ExplicitInstance,
    /// Ids of the sets partitioning the universe; an optimal cover.
    pub planted: Vec<usize>,
}

impl PlantedCover {
    pub fn opt(&self) -> usize {
        self.planted.len()
    }
}

/// `k_opt` disjoint sets partition `0..n_elements` into near-equal parts; the
/// other `m_sets - k_opt` sets are random strict subsets of planted sets, so
/// every set lies inside one part and no cover beats `k_opt`. Set order is
/// shuffled.
pub fn gen_planted_cover(n_elements: usize, k_opt: usize, m_sets: usize, seed: u64) -> Result<PlantedCover> {
    if k_opt == 0 || k_opt > n_elements || k_opt > m_sets {
        return Err(Error::input(format!(
            "need 1 <= k_opt <= min(n_elements, m_sets); got k_opt = {k_opt}, n = {n_elements}, m = {m_sets}"
        )));
    }
    let mut rng = substream(seed, "planted", 0);
    let mut elems: Vec<usize> = (0..n_elements).collect();
    elems.shuffle(&mut rng);
    let (base, extra) = (n_elements / k_opt, n_elements % k_opt);
    let mut parts = Vec::with_capacity(k_opt);
    let mut at = 0;
    for p in 0..k_opt {
        let len = base + usize::from(p < extra);
        parts.push(elems[at..at + len].to_vec());
        at += len;
    }
    let mut sets: Vec<(bool, Vec<usize>)> = parts.iter().map(|p| (true, p.clone())).collect();
    for _ in k_opt..m_sets {
        let part = &parts[rng.random_range(0..k_opt)];
        let decoy = if part.len() < 2 {
            Vec::new()
        } else {
            let size = rng.random_range(1..part.len());
            index::sample(&mut rng, part.len(), size).into_iter().map(|x| part[x]).collect()
        };
        sets.push((false, decoy));
    }
    sets.shuffle(&mut rng);
    let planted = sets.iter().enumerate().filter(|(_, (p, _))| *p).map(|(s, _)| s).collect();
    let instance = ExplicitInstance::new(n_elements, sets.into_iter().map(|(_, s)| s).collect())?;
    Ok(PlantedCover { instance, planted })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoveringFlavor {
    /// Explicit distance table with values in `{1, 1.5, 2}`.
    General,
    /// Points in Euclidean space of dimension `m + n + 2 + s`.
    Euclidean,
}

/// Where each role lives in a covering point set. Solution points take the
/// lowest ids, then the centroid, then the set points and element points
/// (each block in a seed-dependent order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringLayout {
    pub solutions: Range<usize>,
    pub centroid: usize,
    /// `set_point[j]` is the point id of set `j`.
    pub set_point: Vec<usize>,
    /// `element_point[i]` is the point id of element `i`.
    pub element_point: Vec<usize>,
}

impl CoveringLayout {
    fn new(s: usize, m: usize, n: usize, seed: u64) -> Self {
        let mut rng = substream(seed, "covering-layout", 0);
        let mut set_point: Vec<usize> = (s + 1..s + 1 + m).collect();
        let mut element_point: Vec<usize> = (s + 1 + m..s + 1 + m + n).collect();
        set_point.shuffle(&mut rng);
        element_point.shuffle(&mut rng);
        Self {
            solutions: 0..s,
            centroid: s,
            set_point,
            element_point,
        }
    }

    pub fn len(&self) -> usize {
        self.solutions.len() + 1 + self.set_point.len() + self.element_point.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn roles(&self) -> Vec<Role> {
        let mut roles = vec![Role::Solution; self.len()];
        roles[self.centroid] = Role::Centroid;
        for (j, &p) in self.set_point.iter().enumerate() {
            roles[p] = Role::Set(j);
        }
        for (i, &p) in self.element_point.iter().enumerate() {
            roles[p] = Role::Element(i);
        }
        roles
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Solution,
    Centroid,
    Set(usize),
    Element(usize),
}

#[derive(Clone, Debug)]
pub struct CoveringPointSet {
    pub oracle: DistanceOracle,
    pub layout: CoveringLayout,
}

fn check_base(instance: &ExplicitInstance, s: usize) -> Result<()> {
    if s == 0 {
        return Err(Error::input("at least one solution point is required"));
    }
    if instance.n_elements() == 0 {
        return Err(Error::input("the set-cover instance has no elements"));
    }
    if let Some(e) = (0..instance.n_elements()).find(|&e| instance.freq_of(e) == 0) {
        return Err(Error::Uncoverable(e));
    }
    Ok(())
}

/// Covering point set over an explicit distance table.
pub fn gen_covering_general(instance: &ExplicitInstance, s: usize, seed: u64) -> Result<CoveringPointSet> {
    check_base(instance, s)?;
    let layout = CoveringLayout::new(s, instance.n_sets(), instance.n_elements(), seed);
    let roles = layout.roles();
    let total = roles.len();
    let mut table = vec![0.0; total * total];
    for a in 0..total {
        for b in 0..total {
            if a == b {
                continue;
            }
            table[a * total + b] = match (roles[a], roles[b]) {
                (Role::Element(i), Role::Set(j)) | (Role::Set(j), Role::Element(i)) => {
                    if instance.member_of(j, i) {
                        1.0
                    } else {
                        2.0
                    }
                }
                (Role::Set(_), Role::Set(_)) => 1.0,
                (Role::Solution, Role::Solution) => 1.5,
                (Role::Solution, Role::Centroid) | (Role::Centroid, Role::Solution) => 1.0,
                _ => 2.0,
            };
        }
    }
    Ok(CoveringPointSet {
        oracle: DistanceOracle::matrix(total, table)?,
        layout,
    })
}

/// Covering point set in Euclidean space, one axis per set, element,
/// solution point, plus two shared axes.
///
/// Element points sit at distance `a` along their own axis with
/// `a = max(n, ⌊√(m+1)⌋ + 1)`, so that two element points are never closer
/// to each other than a solution point is, whatever the set frequencies.
pub fn gen_covering_euclidean(instance: &ExplicitInstance, s: usize, seed: u64) -> Result<CoveringPointSet> {
    check_base(instance, s)?;
    let (n, m) = (instance.n_elements(), instance.n_sets());
    let layout = CoveringLayout::new(s, m, n, seed);
    let dim = m + n + 2 + s;
    let set_axis = |j: usize| j;
    let elem_axis = |i: usize| m + i;
    let shared = m + n;
    let centroid_axis = m + n + 1;
    let solution_axis = |k: usize| m + n + 2 + k;
    let scale = n.max(((m + 1) as f64).sqrt().floor() as usize + 1) as f64;

    let total = layout.len();
    let mut coords = vec![0.0; total * dim];
    let row = |p: usize| p * dim;
    for (j, &p) in layout.set_point.iter().enumerate() {
        let r = row(p);
        coords[r + set_axis(j)] = 1.0;
        coords[r + shared] = 1.0;
    }
    for (i, &p) in layout.element_point.iter().enumerate() {
        let r = row(p);
        coords[r + elem_axis(i)] = scale;
        for j in 0..m {
            if instance.member_of(j, i) {
                coords[r + set_axis(j)] = 1.0;
            }
        }
    }
    for k in layout.solutions.clone() {
        let r = row(k);
        coords[r + centroid_axis] = 0.5;
        coords[r + solution_axis(k)] = 0.75f64.sqrt();
    }
    coords[row(layout.centroid) + centroid_axis] = 1.0;
    let points = PointSet::from_flat(dim, coords)?;
    Ok(CoveringPointSet {
        oracle: DistanceOracle::vector(points, Metric::Euclidean)?,
        layout,
    })
}

/// Base instance and solution-point count giving exactly `total` points:
/// `⌊total/8⌋` elements (at least 2), `⌊total/16⌋` sets (at least 1) and a
/// planted optimum of half the sets.
pub fn covering_of_size(total: usize, flavor: CoveringFlavor, seed: u64) -> Result<(CoveringPointSet, PlantedCover)> {
    let n = (total / 8).max(2);
    let m = (total / 16).max(1);
    if total < n + m + 2 {
        return Err(Error::input(format!("{total} points are too few for a covering point set")));
    }
    let k = (m / 2).max(1);
    let planted = gen_planted_cover(n, k, m, seed)?;
    let s = total - n - m - 1;
    let cps = match flavor {
        CoveringFlavor::General => gen_covering_general(&planted.instance, s, seed)?,
        CoveringFlavor::Euclidean => gen_covering_euclidean(&planted.instance, s, seed)?,
    };
    Ok((cps, planted))
}

/// Checks the four defining properties of a covering point set on raw
/// distances, returning a description of each failure:
///
/// 1. the centroid is the unique nearest neighbor of every solution point;
/// 2. set points are closer to each other than to any solution point;
/// 3. from a solution point, exactly the element itself and the sets
///    containing it are strictly closer to an element point;
/// 4. solution points are closer to each other than to any set or element point.
pub fn check_covering_properties(cps: &CoveringPointSet, instance: &ExplicitInstance) -> Vec<String> {
    let o = &cps.oracle;
    let l = &cps.layout;
    let roles = l.roles();
    let total = roles.len();
    let d = |a: usize, b: usize| o.distance(a, b);
    let mut failures = Vec::new();
    let others = |p: usize| (0..total).filter(move |&q| q != p);

    for p in l.solutions.clone() {
        for q in others(p).filter(|&q| q != l.centroid) {
            if d(p, l.centroid) >= d(p, q) {
                failures.push(format!("property 1: solution {p} is not strictly nearest to the centroid (vs {q})"));
            }
        }
        for &a in &l.set_point {
            for &b in &l.set_point {
                if a != b && d(a, b) >= d(a, p) {
                    failures.push(format!("property 2: set points {a},{b} vs solution {p}"));
                }
            }
        }
        for (i, &e) in l.element_point.iter().enumerate() {
            for (q, &role) in roles.iter().enumerate() {
                let closer = d(q, e) < d(p, e);
                let expected = q == e || matches!(role, Role::Set(j) if instance.member_of(j, i));
                if closer != expected {
                    failures.push(format!(
                        "property 3: solution {p}, element {i}, point {q}: closer = {closer}, expected {expected}"
                    ));
                }
            }
        }
        for p2 in l.solutions.clone().filter(|&p2| p2 != p) {
            for q in l.set_point.iter().chain(&l.element_point) {
                if d(p, p2) >= d(p, *q) {
                    failures.push(format!("property 4: solutions {p},{p2} vs point {q}"));
                }
            }
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_generator() {
        assert_eq!(line_positions(4), vec![0.0, 1.0, 3.0, 7.0]);
        let far = line_positions(200);
        assert!(far.windows(3).all(|w| w[2] - w[1] > w[1] - w[0]));
        assert!(gen_points(PointKind::Uniform, 0, 2, 1).is_err());
        assert!(gen_points(PointKind::Uniform, 3, 0, 1).is_err());
    }

    #[test]
    fn generators_are_deterministic_and_valid() {
        for kind in [PointKind::Line, PointKind::Grid, PointKind::Uniform, PointKind::GaussianClusters { clusters: 3 }] {
            let a = gen_points(kind, 50, 3, 5).unwrap();
            assert_eq!(a, gen_points(kind, 50, 3, 5).unwrap());
            assert!(a.rows().flatten().all(|c| c.is_finite()));
            DistanceOracle::vector(a, Metric::Euclidean).unwrap();
        }
    }

    #[test]
    fn planted_shapes() {
        let one = gen_planted_cover(5, 1, 1, 0).unwrap();
        assert_eq!(one.instance.set(0), &[0, 1, 2, 3, 4]);
        let pairs = gen_planted_cover(6, 3, 3, 0).unwrap();
        assert!(pairs.instance.sets().iter().all(|s| s.len() == 2));
        assert!(gen_planted_cover(3, 4, 5, 0).is_err());
        assert!(gen_planted_cover(3, 2, 1, 0).is_err());
    }

    #[test]
    fn general_table_values() {
        let planted = gen_planted_cover(4, 2, 3, 1).unwrap();
        let cps = gen_covering_general(&planted.instance, 3, 1).unwrap();
        let (o, l) = (&cps.oracle, &cps.layout);
        assert_eq!(o.distance(0, l.centroid), 1.0);
        assert_eq!(o.distance(0, 1), 1.5);
        assert_eq!(o.distance(l.set_point[0], l.set_point[1]), 1.0);
        assert_eq!(o.distance(l.set_point[0], 0), 2.0);
        assert!(check_covering_properties(&cps, &planted.instance).is_empty());
    }

    #[test]
    fn euclidean_table_values() {
        let planted = gen_planted_cover(4, 2, 3, 1).unwrap();
        let cps = gen_covering_euclidean(&planted.instance, 3, 1).unwrap();
        let (o, l) = (&cps.oracle, &cps.layout);
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        assert!(close(o.distance(l.set_point[0], l.centroid), 3f64.sqrt()));
        assert!(close(o.distance(0, 1), 1.5f64.sqrt()));
        assert!(close(o.distance(0, l.centroid), 1.0));
        assert!(close(o.distance(l.set_point[0], l.set_point[2]), 2f64.sqrt()));
        assert!(check_covering_properties(&cps, &planted.instance).is_empty());
    }

    #[test]
    fn sized_covering_sets() {
        for total in [16, 64, 100] {
            for flavor in [CoveringFlavor::General, CoveringFlavor::Euclidean] {
                let (cps, _) = covering_of_size(total, flavor, 3).unwrap();
                assert_eq!(cps.oracle.len(), total);
            }
        }
    }
}
