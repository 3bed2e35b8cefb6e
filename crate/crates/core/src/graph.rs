//! Explicit graph helpers: strongly connected components and shortest paths.

use std::collections::VecDeque;

/// Strongly connected components of the subgraph induced by `keep`, in
/// reverse topological order (Tarjan, iterative).
pub fn sccs(n: usize, succ: &dyn Fn(usize) -> Vec<usize>, keep: &dyn Fn(usize) -> bool) -> Vec<Vec<usize>> {
    const NONE: usize = usize::MAX;
    let mut index = vec![NONE; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = vec![];
    let mut out = vec![];
    let mut counter = 0;
    for root in 0..n {
        if index[root] != NONE || !keep(root) {
            continue;
        }
        let mut call: Vec<(usize, Vec<usize>, usize)> = vec![];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, succ(root), 0));
        while let Some((v, edges, pos)) = call.last_mut() {
            let v = *v;
            if *pos < edges.len() {
                let w = edges[*pos];
                *pos += 1;
                if !keep(w) {
                    continue;
                }
                if index[w] == NONE {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    let ws = succ(w);
                    call.push((w, ws, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some((parent, _, _)) = call.last() {
                    low[*parent] = low[*parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = vec![];
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Whether a component contains at least one edge (a cycle).
pub fn is_nontrivial(comp: &[usize], succ: &dyn Fn(usize) -> Vec<usize>) -> bool {
    comp.len() > 1 || succ(comp[0]).contains(&comp[0])
}

/// Shortest path (as a node list, both ends included) from any of `from` to a
/// node satisfying `target`, moving only through nodes satisfying `allowed`.
/// With `nonempty`, the path must take at least one edge.
pub fn bfs_path(
    from: &[usize],
    succ: &dyn Fn(usize) -> Vec<usize>,
    allowed: &dyn Fn(usize) -> bool,
    target: &dyn Fn(usize) -> bool,
    nonempty: bool,
) -> Option<Vec<usize>> {
    use rustc_hash::{FxHashMap, FxHashSet};
    // parent of each visited node; `first` holds nodes entered through an
    // edge out of a source (when `nonempty`), whose parent is that source
    let mut parent: FxHashMap<usize, Option<usize>> = FxHashMap::default();
    let mut first = FxHashSet::default();
    let mut queue = VecDeque::new();
    for &s in from {
        if nonempty {
            for t in succ(s) {
                if allowed(t) && !parent.contains_key(&t) {
                    parent.insert(t, Some(s));
                    first.insert(t);
                    queue.push_back(t);
                }
            }
        } else if allowed(s) && !parent.contains_key(&s) {
            parent.insert(s, None);
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        if target(v) {
            let mut path = vec![v];
            let mut cur = v;
            while let Some(p) = parent[&cur] {
                path.push(p);
                if first.contains(&cur) {
                    break;
                }
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for w in succ(v) {
            if allowed(w) && !parent.contains_key(&w) {
                parent.insert(w, Some(v));
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_and_paths() {
        // 0 -> 1 -> 2 -> 1, 2 -> 3, 3 -> 3
        let g = [vec![1], vec![2], vec![1, 3], vec![3]];
        let succ = |v: usize| g[v].clone();
        let mut comps = sccs(4, &succ, &|_| true);
        comps.iter_mut().for_each(|c| c.sort());
        assert_eq!(comps, vec![vec![3], vec![1, 2], vec![0]]);
        assert!(is_nontrivial(&[3], &succ));
        assert!(!is_nontrivial(&[0], &succ));
        assert_eq!(bfs_path(&[0], &succ, &|_| true, &|v| v == 3, false), Some(vec![0, 1, 2, 3]));
        assert_eq!(bfs_path(&[1], &succ, &|_| true, &|v| v == 1, true), Some(vec![1, 2, 1]));
        assert_eq!(bfs_path(&[1], &succ, &|_| true, &|v| v == 1, false), Some(vec![1]));
        assert_eq!(bfs_path(&[0], &succ, &|v| v != 2, &|v| v == 3, false), None);
    }
}
