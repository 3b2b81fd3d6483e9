use crate::perm_index::{PermutationIndex, PrefixTable};
use crate::setcover::CoverAccess;

/// The covering instance of one node: elements and sets are both point ids,
/// and set `k` holds the points that stepping from the node to `k` brings
/// strictly closer. The node itself is not an element and its own set is
/// empty.
///
/// With a [`PrefixTable`] the sets shrink to the α- or τ-strengthened ones.
#[derive(Clone, Copy, Debug)]
pub struct NodeInstance<'a> {
    idx: &'a PermutationIndex,
    prefix: Option<&'a PrefixTable>,
    node: usize,
}

impl<'a> NodeInstance<'a> {
    pub fn new(idx: &'a PermutationIndex, node: usize) -> Self {
        Self { idx, prefix: None, node }
    }

    pub fn strengthened(idx: &'a PermutationIndex, prefix: &'a PrefixTable, node: usize) -> Self {
        Self {
            idx,
            prefix: Some(prefix),
            node,
        }
    }

    pub fn node(&self) -> usize {
        self.node
    }
}

impl CoverAccess for NodeInstance<'_> {
    fn n_elements(&self) -> usize {
        self.idx.len()
    }

    fn n_sets(&self) -> usize {
        self.idx.len()
    }

    #[inline]
    fn member_of(&self, set: usize, elem: usize) -> bool {
        match self.prefix {
            None => self.idx.member_of(self.node, elem, set),
            Some(p) => p.member_of(self.idx, self.node, elem, set),
        }
    }

    #[inline]
    fn freq_of(&self, elem: usize) -> usize {
        match self.prefix {
            None => self.idx.freq(self.node, elem),
            Some(p) => p.prefix_len(self.node, elem),
        }
    }

    #[inline]
    fn set_of(&self, elem: usize, l: usize) -> Option<usize> {
        match self.prefix {
            None => self.idx.set_of(self.node, elem, l + 1),
            Some(p) => p.set_of(self.idx, self.node, elem, l + 1),
        }
    }

    fn sets_of(&self, elem: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.idx.row(elem);
        row[..self.freq_of(elem)].iter().map(|&k| k as usize)
    }

    fn universe(&self) -> Vec<usize> {
        (0..self.idx.len()).filter(|&j| j != self.node).collect()
    }
}
