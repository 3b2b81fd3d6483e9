//! Point sets, distance oracles and search graphs, plus their file formats.
//!
//! Distances need not satisfy the triangle inequality. The only requirement is
//! `d(i, i) = 0` and `d(i, j) = d(j, i) > 0` for `i != j`. Ties between equal
//! distances are broken by point id, which turns "closer to q" into a strict
//! total order for every fixed q.

use std::cmp::Ordering;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest point count for which [`DistanceOracle::with_cache`] materializes
/// the full distance table.
pub const CACHE_LIMIT: usize = 1 << 14;

const MATRIX_MAGIC: &[u8; 4] = b"NGDM";

/// A set of `n` points with `dim` coordinates each, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::input("all points must have the same dimension"));
        }
        Self::from_flat(dim, rows.into_iter().flatten().collect())
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("point dimension must be at least 1"));
        }
        if coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(Error::input(format!(
                "{} coordinates do not form a non-empty set of {dim}-dimensional points",
                coords.len()
            )));
        }
        if let Some(bad) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::input(format!(
                "point {} has a non-finite coordinate",
                bad / dim
            )));
        }
        Ok(Self { dim, coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    /// Returns a pair of ids holding identical coordinates, if any.
    fn find_duplicate(&self) -> Option<(usize, usize)> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_unstable_by(|&a, &b| lex_cmp(self.row(a), self.row(b)));
        order
            .windows(2)
            .find(|w| self.row(w[0]) == self.row(w[1]))
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Distance function over vector data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Euclidean,
    /// Induces the same comparison order as [`Metric::Euclidean`] without
    /// square roots.
    SquaredEuclidean,
    Manhattan,
}

impl Metric {
    #[inline]
    pub fn eval(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => squared_l2(a, b).sqrt(),
            Metric::SquaredEuclidean => squared_l2(a, b),
            Metric::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        }
    }
}

#[inline]
fn squared_l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Clone, Debug)]
enum Source {
    Vector { points: PointSet, metric: Metric },
    Matrix { n: usize, table: Vec<f64> },
}

/// Answers `d(p_i, p_j)` for a fixed point set.
#[derive(Clone, Debug)]
pub struct DistanceOracle {
    source: Source,
    cache: Option<Vec<f64>>,
}

impl DistanceOracle {
    /// Wraps vector data. Fails if two points coincide.
    pub fn vector(points: PointSet, metric: Metric) -> Result<Self> {
        if let Some((a, b)) = points.find_duplicate() {
            return Err(Error::input(format!("points {a} and {b} are identical")));
        }
        Ok(Self {
            source: Source::Vector { points, metric },
            cache: None,
        })
    }

    /// Wraps an explicit row-major `n x n` table.
    pub fn matrix(n: usize, table: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("distance matrix must have at least one point"));
        }
        if table.len() != n * n {
            return Err(Error::input(format!(
                "distance matrix for {n} points needs {} entries, got {}",
                n * n,
                table.len()
            )));
        }
        validate_table(n, &table).map_err(|(_, msg)| Error::input(msg))?;
        Ok(Self {
            source: Source::Matrix { n, table },
            cache: None,
        })
    }

    /// Materializes every pairwise distance when `n <= CACHE_LIMIT`; otherwise
    /// returns `self` unchanged.
    pub fn with_cache(mut self) -> Self {
        let n = self.len();
        if self.cache.is_some() || n > CACHE_LIMIT || matches!(self.source, Source::Matrix { .. }) {
            return self;
        }
        let mut table = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = self.raw_distance(i, j);
                table[i * n + j] = d;
                table[j * n + i] = d;
            }
        }
        self.cache = Some(table);
        self
    }

    pub fn len(&self) -> usize {
        match &self.source {
            Source::Vector { points, .. } => points.len(),
            Source::Matrix { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Option<&PointSet> {
        match &self.source {
            Source::Vector { points, .. } => Some(points),
            Source::Matrix { .. } => None,
        }
    }

    pub fn metric(&self) -> Option<Metric> {
        match &self.source {
            Source::Vector { metric, .. } => Some(*metric),
            Source::Matrix { .. } => None,
        }
    }

    /// Row-major table for explicit-matrix oracles.
    pub fn table(&self) -> Option<&[f64]> {
        match &self.source {
            Source::Matrix { table, .. } => Some(table),
            Source::Vector { .. } => None,
        }
    }

    /// Short name used in reports: `l2`, `l2sq`, `l1` or `matrix`.
    pub fn kind_name(&self) -> &'static str {
        match &self.source {
            Source::Vector { metric: Metric::Euclidean, .. } => "l2",
            Source::Vector { metric: Metric::SquaredEuclidean, .. } => "l2sq",
            Source::Vector { metric: Metric::Manhattan, .. } => "l1",
            Source::Matrix { .. } => "matrix",
        }
    }

    #[inline]
    fn raw_distance(&self, i: usize, j: usize) -> f64 {
        match &self.source {
            Source::Vector { points, metric } => {
                if i == j {
                    0.0
                } else {
                    metric.eval(points.row(i), points.row(j))
                }
            }
            Source::Matrix { n, table } => table[i * n + j],
        }
    }

    /// `d(p_i, p_j)`. Panics if either id is out of range.
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match &self.cache {
            Some(table) => table[i * self.len() + j],
            None => self.raw_distance(i, j),
        }
    }

    pub fn try_distance(&self, i: usize, j: usize) -> Result<f64> {
        let n = self.len();
        if i >= n || j >= n {
            return Err(Error::input(format!(
                "point id out of range: ({i}, {j}) with n = {n}"
            )));
        }
        Ok(self.distance(i, j))
    }

    /// Compares `a` and `b` by `(d(q, .), id)`.
    #[inline]
    pub fn cmp_from(&self, q: usize, a: usize, b: usize) -> Ordering {
        self.distance(q, a)
            .total_cmp(&self.distance(q, b))
            .then(a.cmp(&b))
    }

    /// True iff `a` precedes `b` in the tie-broken order around `q`.
    #[inline]
    pub fn closer(&self, q: usize, a: usize, b: usize) -> bool {
        self.cmp_from(q, a, b) == Ordering::Less
    }

    /// Fills `out` with `d(q, x)` for every point `x`.
    pub fn distances_from(&self, q: usize, out: &mut Vec<f64>) {
        out.clear();
        match &self.cache {
            Some(table) => {
                let n = self.len();
                out.extend_from_slice(&table[q * n..(q + 1) * n]);
            }
            None => out.extend((0..self.len()).map(|x| self.raw_distance(q, x))),
        }
    }
}

fn validate_table(n: usize, table: &[f64]) -> std::result::Result<(), (usize, String)> {
    for i in 0..n {
        for j in 0..n {
            let d = table[i * n + j];
            if d.is_nan() {
                return Err((i, format!("d({i},{j}) is NaN")));
            }
            if i == j && d != 0.0 {
                return Err((i, format!("d({i},{i}) = {d}, expected 0")));
            }
            if i != j && d <= 0.0 {
                return Err((i, format!("d({i},{j}) = {d} must be positive")));
            }
            if d.is_infinite() {
                return Err((i, format!("d({i},{j}) is infinite")));
            }
            if d.to_bits() != table[j * n + i].to_bits() {
                return Err((
                    i.max(j),
                    format!("matrix is not symmetric: d({i},{j}) != d({j},{i})"),
                ));
            }
        }
    }
    Ok(())
}

/// A directed graph over point ids with sorted, duplicate-free out-lists and
/// no self-loops.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SearchGraph {
    out: Vec<Vec<u32>>,
}

impl SearchGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            out: vec![Vec::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        Self {
            out: (0..n)
                .map(|i| (0..n as u32).filter(|&j| j as usize != i).collect())
                .collect(),
        }
    }

    /// Builds a graph from arbitrary neighbor lists: self-loops and duplicates
    /// are dropped, ids outside `0..lists.len()` are rejected.
    pub fn from_lists<I, L>(lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = L>,
        L: IntoIterator<Item = usize>,
    {
        let raw: Vec<Vec<usize>> = lists.into_iter().map(|l| l.into_iter().collect()).collect();
        let n = raw.len();
        let mut out = Vec::with_capacity(n);
        for (i, list) in raw.into_iter().enumerate() {
            let mut row = Vec::with_capacity(list.len());
            for j in list {
                if j >= n {
                    return Err(Error::input(format!("edge {i} -> {j} leaves 0..{n}")));
                }
                if j != i {
                    row.push(j as u32);
                }
            }
            row.sort_unstable();
            row.dedup();
            out.push(row);
        }
        Ok(Self { out })
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    pub fn out(&self, i: usize) -> &[u32] {
        &self.out[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.out[i].binary_search(&(j as u32)).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn avg_degree(&self) -> f64 {
        if self.out.is_empty() {
            0.0
        } else {
            self.edge_count() as f64 / self.out.len() as f64
        }
    }

    pub fn max_degree(&self) -> usize {
        self.out.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `hist[d]` is the number of nodes with out-degree `d`.
    pub fn degree_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0; self.max_degree() + 1];
        for row in &self.out {
            hist[row.len()] += 1;
        }
        hist
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&j| (i, j as usize)))
    }

    /// Writes the `"i j"` edge list, sorted by `(i, j)`.
    pub fn write_edges<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (i, j) in self.edges() {
            writeln!(w, "{i} {j}")?;
        }
        w.flush()
    }

    pub fn to_edge_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edges(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }

    /// Parses an edge list over `n` nodes. `origin` only labels errors.
    pub fn read_edges<R: BufRead>(reader: R, n: usize, origin: &Path) -> Result<Self> {
        let mut lists = vec![Vec::new(); n];
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::format(origin, lineno + 1, msg);
            let mut parts = line.split_whitespace();
            let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad(format!("expected \"i j\", got {line:?}")));
            };
            let i: u64 = a.parse().map_err(|_| bad(format!("bad node id {a:?}")))?;
            let j: u64 = b.parse().map_err(|_| bad(format!("bad node id {b:?}")))?;
            if i as usize >= n || j as usize >= n {
                return Err(bad(format!("edge {i} {j} outside 0..{n}")));
            }
            if i == j {
                return Err(bad(format!("self-loop on {i}")));
            }
            lists[i as usize].push(j as usize);
        }
        Self::from_lists(lists)
    }
}

/// Reads comma-separated points, one per line. Blank lines are skipped and
/// `header` drops the first line.
pub fn read_points<R: BufRead>(reader: R, header: bool, origin: &Path) -> Result<PointSet> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if header && lineno == 0 {
            continue;
        }
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| Error::format(origin, lineno + 1, msg);
        let row = line
            .split(',')
            .map(|field| {
                let field = field.trim();
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| bad(format!("invalid coordinate {field:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(bad(format!(
                    "expected {} columns, found {}",
                    first.len(),
                    row.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::format(origin, 0, "no points"));
    }
    PointSet::from_rows(rows)
}

pub fn load_points(path: impl AsRef<Path>, header: bool) -> Result<PointSet> {
    let path = path.as_ref();
    read_points(BufReader::new(File::open(path)?), header, path)
}

pub fn write_points<W: Write>(points: &PointSet, mut w: W) -> std::io::Result<()> {
    for row in points.rows() {
        let line: Vec<String> = row.iter().map(|c| format!("{c:?}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()
}

pub fn save_points(points: &PointSet, path: impl AsRef<Path>) -> Result<()> {
    write_points(points, BufWriter::new(File::create(path)?))?;
    Ok(())
}

/// Reads a distance matrix, either binary (`NGDM` magic, u64 `n`, then `n^2`
/// little-endian f64 row-major) or CSV with `n` rows of `n` values.
pub fn read_matrix<R: Read>(mut reader: R, origin: &Path) -> Result<DistanceOracle> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    let (n, table) = if bytes.starts_with(MATRIX_MAGIC) {
        parse_binary_matrix(&bytes, origin)?
    } else {
        parse_csv_matrix(&bytes, origin)?
    };
    validate_table(n, &table).map_err(|(row, msg)| Error::format(origin, row + 1, msg))?;
    DistanceOracle::matrix(n, table)
}

fn parse_binary_matrix(bytes: &[u8], origin: &Path) -> Result<(usize, Vec<f64>)> {
    let header = MATRIX_MAGIC.len() + 8;
    if bytes.len() < header {
        return Err(Error::format(origin, 0, "truncated binary matrix header"));
    }
    let n = u64::from_le_bytes(bytes[4..12].try_into().expect("8-byte slice")) as usize;
    let expected = n
        .checked_mul(n)
        .and_then(|c| c.checked_mul(8))
        .ok_or_else(|| Error::format(origin, 0, "matrix size overflows"))?;
    if n == 0 || bytes.len() - header != expected {
        return Err(Error::format(
            origin,
            0,
            format!("binary matrix with n = {n} needs {expected} payload bytes, found {}", bytes.len() - header),
        ));
    }
    let table = bytes[header..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Ok((n, table))
}

fn parse_csv_matrix(bytes: &[u8], origin: &Path) -> Result<(usize, Vec<f64>)> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::format(origin, 0, "matrix is neither binary nor UTF-8 text"))?;
    let mut table = Vec::new();
    let mut n = None;
    let mut rows = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| Error::format(origin, lineno + 1, msg);
        let before = table.len();
        for field in line.split(',') {
            let field = field.trim();
            let v: f64 = field.parse().map_err(|_| bad(format!("invalid distance {field:?}")))?;
            if v.is_nan() || v < 0.0 {
                return Err(bad(format!("distance {field} must be a non-negative number")));
            }
            table.push(v);
        }
        let width = table.len() - before;
        match n {
            None => n = Some(width),
            Some(w) if w != width => return Err(bad(format!("expected {w} columns, found {width}"))),
            _ => {}
        }
        rows += 1;
    }
    let n = n.ok_or_else(|| Error::format(origin, 0, "empty matrix"))?;
    if rows != n {
        return Err(Error::format(origin, rows, format!("matrix has {rows} rows but {n} columns")));
    }
    Ok((n, table))
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<DistanceOracle> {
    let path = path.as_ref();
    read_matrix(File::open(path)?, path)
}

/// Writes an explicit-matrix oracle in the binary `NGDM` layout.
pub fn write_matrix_binary<W: Write>(oracle: &DistanceOracle, mut w: W) -> Result<()> {
    let n = oracle.len();
    w.write_all(MATRIX_MAGIC)?;
    w.write_all(&(n as u64).to_le_bytes())?;
    for i in 0..n {
        for j in 0..n {
            w.write_all(&oracle.distance(i, j).to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_matrix_csv<W: Write>(oracle: &DistanceOracle, mut w: W) -> Result<()> {
    let n = oracle.len();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:?}", oracle.distance(i, j))).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Saves a matrix, choosing the binary layout when the path ends in `.bin`.
pub fn save_matrix(oracle: &DistanceOracle, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let w = BufWriter::new(File::create(path)?);
    if path.extension().is_some_and(|e| e == "bin") {
        write_matrix_binary(oracle, w)
    } else {
        write_matrix_csv(oracle, w)
    }
}

pub fn save_graph(graph: &SearchGraph, path: impl AsRef<Path>) -> Result<()> {
    graph.write_edges(BufWriter::new(File::create(path)?))?;
    Ok(())
}

pub fn load_graph(path: impl AsRef<Path>, n: usize) -> Result<SearchGraph> {
    let path = path.as_ref();
    SearchGraph::read_edges(BufReader::new(File::open(path)?), n, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(positions: &[f64]) -> DistanceOracle {
        let rows = positions.iter().map(|&x| vec![x]).collect();
        DistanceOracle::vector(PointSet::from_rows(rows).unwrap(), Metric::Euclidean).unwrap()
    }

    #[test]
    fn line_distances() {
        let o = line(&[0.0, 1.0, 3.0, 7.0]);
        assert_eq!(o.distance(0, 0), 0.0);
        assert_eq!(o.distance(0, 3), 7.0);
        assert_eq!(o.distance(3, 0), 7.0);
        assert!(o.try_distance(0, 4).is_err());
    }

    #[test]
    fn closer_is_strict_with_index_tiebreak() {
        let o = line(&[0.0, 1.0, 3.0, 7.0]);
        assert!(!o.closer(3, 2, 2));
        assert!(o.closer(3, 2, 0));
        // 0 and 2 are both at distance 1 from point 1.
        let o = line(&[0.0, 1.0, 2.0]);
        assert!(o.closer(1, 0, 2));
        assert!(!o.closer(1, 2, 0));
    }

    #[test]
    fn duplicate_points_rejected() {
        let ps = PointSet::from_rows(vec![vec![1.0, 2.0], vec![0.0, 0.0], vec![1.0, 2.0]]).unwrap();
        let err = DistanceOracle::vector(ps, Metric::Manhattan).unwrap_err();
        assert!(err.to_string().contains("0 and 2"), "{err}");
    }

    #[test]
    fn matrix_validation() {
        assert!(DistanceOracle::matrix(2, vec![0.0, 1.0, 1.0, 0.0]).is_ok());
        assert!(DistanceOracle::matrix(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(DistanceOracle::matrix(2, vec![0.0, -1.0, -1.0, 0.0]).is_err());
        assert!(DistanceOracle::matrix(2, vec![0.0, f64::NAN, f64::NAN, 0.0]).is_err());
        assert!(DistanceOracle::matrix(2, vec![1.0, 1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn csv_points_parse() {
        let ps = read_points("1,2\n3.5, 4\n\n-1e3,0\n".as_bytes(), false, Path::new("t")).unwrap();
        assert_eq!((ps.len(), ps.dim()), (3, 2));
        assert_eq!(ps.row(2), &[-1000.0, 0.0]);
        let ps = read_points("x,y\n1,2\n".as_bytes(), true, Path::new("t")).unwrap();
        assert_eq!(ps.len(), 1);
    }

    #[test]
    fn csv_points_report_line_numbers() {
        let err = read_points("1,2\n3\n".as_bytes(), false, Path::new("pts.csv")).unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
        let err = read_points("1,2\n3,abc\n".as_bytes(), false, Path::new("pts.csv")).unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
    }

    #[test]
    fn csv_matrix_errors() {
        let err = read_matrix("0,1\n2,0\n".as_bytes(), Path::new("m")).unwrap_err();
        assert!(err.to_string().contains("symmetric"), "{err}");
        let err = read_matrix("0,1\n-1,0\n".as_bytes(), Path::new("m")).unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
        let err = read_matrix("0,nan\nnan,0\n".as_bytes(), Path::new("m")).unwrap_err();
        assert!(matches!(err, Error::Format { line: 1, .. }), "{err}");
    }

    #[test]
    fn binary_matrix_reproduces_table_bit_exactly() {
        let table = vec![0.0, 0.1, 1.0 / 3.0, 0.1, 0.0, 2.5, 1.0 / 3.0, 2.5, 0.0];
        let o = DistanceOracle::matrix(3, table.clone()).unwrap();
        let mut buf = Vec::new();
        write_matrix_binary(&o, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"NGDM");
        let back = read_matrix(buf.as_slice(), Path::new("m")).unwrap();
        let bits = |t: &[f64]| t.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(back.table().unwrap()), bits(&table));

        let mut csv = Vec::new();
        write_matrix_csv(&o, &mut csv).unwrap();
        let back = read_matrix(csv.as_slice(), Path::new("m")).unwrap();
        assert_eq!(bits(back.table().unwrap()), bits(&table));
    }

    #[test]
    fn graph_edges_canonical_round_trip() {
        let text = "2 0\n\n0 1\n0 2\n0 1\n";
        let g = SearchGraph::read_edges(text.as_bytes(), 3, Path::new("g")).unwrap();
        assert_eq!(g.to_edge_string(), "0 1\n0 2\n2 0\n");
        let again = SearchGraph::read_edges(g.to_edge_string().as_bytes(), 3, Path::new("g")).unwrap();
        assert_eq!(again, g);
        assert!(SearchGraph::read_edges("0 3\n".as_bytes(), 3, Path::new("g")).is_err());
        assert!(SearchGraph::read_edges("1 1\n".as_bytes(), 3, Path::new("g")).is_err());
        assert!(SearchGraph::read_edges("1\n".as_bytes(), 3, Path::new("g")).is_err());
    }

    #[test]
    fn graph_stats() {
        let g = SearchGraph::from_lists(vec![vec![1, 2, 2, 0], vec![], vec![0]]).unwrap();
        assert_eq!(g.out(0), &[1, 2]);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.max_degree(), 2);
        assert_eq!(g.degree_histogram(), vec![1, 1, 1]);
        assert!((g.avg_degree() - 1.0).abs() < 1e-12);
        assert_eq!(SearchGraph::complete(4).edge_count(), 12);
    }

    #[test]
    fn cache_matches_direct_evaluation() {
        let o = line(&[0.0, 1.0, 3.0, 7.0, 15.0]);
        let c = o.clone().with_cache();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(o.distance(i, j), c.distance(i, j));
            }
        }
    }
}
