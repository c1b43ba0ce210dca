//! Connected components of the "shares a variable" relation on functions.

/// Disjoint-set forest with path compression and union by size.
#[derive(Clone, Debug)]
pub(crate) struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != root {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        a
    }
}

/// One block of the dependency partition: functions that are (transitively)
/// linked through shared variables, and the variables they read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Function indices, ascending.
    pub functions: Vec<usize>,
    /// Variable indices read by those functions, ascending.
    pub variables: Vec<usize>,
}

/// Partition of functions by shared variables. Blocks are ordered by their
/// smallest function index. Variables that no function reads belong to no
/// block; a function reading nothing forms a block with no variables.
pub(crate) fn components(num_vars: usize, reads: &[&[usize]]) -> Vec<Component> {
    let mut dsu = DisjointSet::new(num_vars);
    for vars in reads {
        for pair in vars.windows(2) {
            dsu.union(pair[0], pair[1]);
        }
    }

    let mut block_of_root: Vec<Option<usize>> = vec![None; num_vars];
    let mut blocks: Vec<Component> = Vec::new();
    for (j, vars) in reads.iter().enumerate() {
        let block = match vars.first() {
            None => {
                blocks.push(Component { functions: Vec::new(), variables: Vec::new() });
                blocks.len() - 1
            }
            Some(&v) => {
                let root = dsu.find(v);
                *block_of_root[root].get_or_insert_with(|| {
                    blocks.push(Component { functions: Vec::new(), variables: Vec::new() });
                    blocks.len() - 1
                })
            }
        };
        blocks[block].functions.push(j);
    }

    let mut seen = vec![false; num_vars];
    for block in &mut blocks {
        for &j in &block.functions {
            for &v in reads[j] {
                if !seen[v] {
                    seen[v] = true;
                    block.variables.push(v);
                }
            }
        }
        block.variables.sort_unstable();
    }
    blocks
}
