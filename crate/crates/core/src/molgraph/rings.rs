use super::MolecularGraph;

/// Marks every bond that is not a bridge. Iterative lowlink DFS, so deep
/// chains do not overflow the stack.
pub(crate) fn ring_bonds(g: &MolecularGraph) -> Vec<bool> {
    let n = g.atom_count();
    let mut ring = vec![true; g.bond_count()];
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (atom, bond used to enter it, next neighbor slot)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while let Some(&(u, via, slot)) = stack.last() {
            if let Some(&(w, b)) = g.neighbors(u).get(slot) {
                stack.last_mut().expect("non-empty").2 += 1;
                if b == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, b, 0));
                } else {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[u]);
                    if low[u] > disc[parent] {
                        ring[via] = false;
                    }
                }
            }
        }
    }
    ring
}
