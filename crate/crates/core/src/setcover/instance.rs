use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::CoverAccess;
use crate::error::{Error, Result};

/// A set-cover instance held in memory, with both set→elements and
/// element→sets lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitInstance {
    n_elements: usize,
    sets: Vec<Vec<u32>>,
    containing: Vec<Vec<u32>>,
}

impl ExplicitInstance {
    /// Element ids must lie in `0..n_elements`; duplicates inside a set are
    /// dropped.
    pub fn new(n_elements: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut containing = vec![Vec::new(); n_elements];
        let mut canon = Vec::with_capacity(sets.len());
        for (s, set) in sets.into_iter().enumerate() {
            let mut set: Vec<u32> = set
                .into_iter()
                .map(|e| {
                    if e < n_elements {
                        Ok(e as u32)
                    } else {
                        Err(Error::input(format!("set {s} contains element {e} outside 0..{n_elements}")))
                    }
                })
                .collect::<Result<_>>()?;
            set.sort_unstable();
            set.dedup();
            for &e in &set {
                containing[e as usize].push(s as u32);
            }
            canon.push(set);
        }
        Ok(Self {
            n_elements,
            sets: canon,
            containing,
        })
    }

    pub fn set(&self, s: usize) -> &[u32] {
        &self.sets[s]
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    /// Header `"n m"`, then one line per set listing its elements.
    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n_elements, self.sets.len())?;
        for set in &self.sets {
            let line: Vec<String> = set.iter().map(u32::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        w.flush()
    }

    pub fn read<R: BufRead>(reader: R, origin: &Path) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let (n, m) = loop {
            let Some((lineno, line)) = lines.next() else {
                return Err(Error::format(origin, 0, "missing \"n m\" header"));
            };
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let nums: Vec<&str> = line.split_whitespace().collect();
            let parsed = match nums.as_slice() {
                [a, b] => a.parse::<usize>().ok().zip(b.parse::<usize>().ok()),
                _ => None,
            };
            break parsed.ok_or_else(|| Error::format(origin, lineno + 1, format!("bad header {line:?}")))?;
        };
        let mut sets = Vec::with_capacity(m);
        for (lineno, line) in lines.by_ref() {
            if sets.len() == m {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                return Err(Error::format(origin, lineno + 1, format!("more than {m} sets")));
            }
            let line = line?;
            let set = line
                .split_whitespace()
                .map(|tok| match tok.parse::<usize>() {
                    Ok(e) if e < n => Ok(e),
                    _ => Err(Error::format(origin, lineno + 1, format!("bad element {tok:?} (n = {n})"))),
                })
                .collect::<Result<Vec<_>>>()?;
            sets.push(set);
        }
        // Trailing empty sets may have lost their blank lines.
        sets.resize(m, Vec::new());
        Self::new(n, sets)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::read(BufReader::new(File::open(path)?), path)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write(BufWriter::new(File::create(path)?))?;
        Ok(())
    }
}

impl CoverAccess for ExplicitInstance {
    fn n_elements(&self) -> usize {
        self.n_elements
    }

    fn n_sets(&self) -> usize {
        self.sets.len()
    }

    fn member_of(&self, set: usize, elem: usize) -> bool {
        self.sets[set].binary_search(&(elem as u32)).is_ok()
    }

    fn freq_of(&self, elem: usize) -> usize {
        self.containing[elem].len()
    }

    fn set_of(&self, elem: usize, l: usize) -> Option<usize> {
        self.containing[elem].get(l).map(|&s| s as usize)
    }

    fn elements_of(&self, set: usize) -> Vec<usize> {
        self.sets[set].iter().map(|&e| e as usize).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_round_trip_keeps_empty_sets() {
        let inst = ExplicitInstance::new(4, vec![vec![0, 1], vec![], vec![3, 2, 2]]).unwrap();
        let mut buf = Vec::new();
        inst.write(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "4 3\n0 1\n\n2 3\n");
        let back = ExplicitInstance::read(buf.as_slice(), Path::new("i")).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = ExplicitInstance::read("2 1\n0 5\n".as_bytes(), Path::new("i")).unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
        let err = ExplicitInstance::read("2\n".as_bytes(), Path::new("i")).unwrap_err();
        assert!(matches!(err, Error::Format { line: 1, .. }), "{err}");
        let err = ExplicitInstance::read("2 1\n0\n1\n".as_bytes(), Path::new("i")).unwrap_err();
        assert!(matches!(err, Error::Format { line: 3, .. }), "{err}");
    }

    #[test]
    fn access_contract() {
        let inst = ExplicitInstance::new(3, vec![vec![0, 1], vec![1, 2], vec![2]]).unwrap();
        assert_eq!(inst.freq_of(1), 2);
        assert_eq!(inst.sets_of(2).collect::<Vec<_>>(), vec![1, 2]);
        assert!(inst.member_of(0, 1) && !inst.member_of(0, 2));
        assert_eq!(inst.elements_of(1), vec![1, 2]);
    }
}
