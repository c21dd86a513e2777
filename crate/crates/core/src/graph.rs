//! Small directed-graph toolkit over adjacency lists: strongly connected
//! components, acyclicity, reachability and a heuristic feedback vertex set.

use alloc::vec;
use alloc::vec::Vec;

/// Out-adjacency lists; `out[u]` lists the heads of the edges leaving `u`.
pub type Adjacency = Vec<Vec<usize>>;

/// Strongly connected components (Tarjan), each sorted ascending, listed in
/// reverse topological order of the condensation.
pub fn strongly_connected_components(out: &Adjacency) -> Vec<Vec<usize>> {
    let n = out.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    // Explicit call stack of (node, next edge position).
    let mut calls: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        calls.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            if *pos < out[v].len() {
                let w = out[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

/// Whether the graph with the `removed` nodes deleted has no directed cycle
/// (self-loops count as cycles).
pub fn is_acyclic_without(out: &Adjacency, removed: &[bool]) -> bool {
    let n = out.len();
    let mut indeg = vec![0usize; n];
    for u in (0..n).filter(|&u| !removed[u]) {
        for &v in &out[u] {
            if !removed[v] {
                indeg[v] += 1;
            }
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&u| !removed[u] && indeg[u] == 0).collect();
    let mut seen = 0;
    while let Some(u) = queue.pop() {
        seen += 1;
        for &v in &out[u] {
            if !removed[v] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push(v);
                }
            }
        }
    }
    seen == removed.iter().filter(|&&r| !r).count()
}

/// Nodes reachable from `sources` along directed edges (sources included).
pub fn reachable_from(out: &Adjacency, sources: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; out.len()];
    let mut stack: Vec<usize> = Vec::new();
    for s in sources {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(u) = stack.pop() {
        for &v in &out[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

fn has_self_loop(out: &Adjacency, u: usize) -> bool {
    out[u].contains(&u)
}

/// Heuristic feedback vertex set of the graph with `removed` nodes deleted.
/// Repeatedly deletes the node of largest in+out degree inside a cyclic
/// strongly connected component (lowest index on ties), then drops chosen
/// nodes that are redundant, scanning in reverse order of choice.
pub fn heuristic_fvs(out: &Adjacency, removed: &[bool]) -> Vec<usize> {
    let n = out.len();
    let mut gone = removed.to_vec();
    let mut chosen = Vec::new();
    loop {
        let sub: Adjacency = (0..n)
            .map(|u| {
                if gone[u] {
                    Vec::new()
                } else {
                    out[u].iter().copied().filter(|&v| !gone[v]).collect()
                }
            })
            .collect();
        let comps = strongly_connected_components(&sub);
        let mut comp_of = vec![usize::MAX; n];
        for (c, comp) in comps.iter().enumerate() {
            for &u in comp {
                comp_of[u] = c;
            }
        }
        let cyclic = |u: usize| !gone[u] && (comps[comp_of[u]].len() > 1 || has_self_loop(&sub, u));
        let mut degree = vec![0usize; n];
        for u in 0..n {
            for &v in &sub[u] {
                if comp_of[u] == comp_of[v] {
                    degree[u] += 1;
                    degree[v] += 1;
                }
            }
        }
        let best = (0..n)
            .filter(|&u| cyclic(u))
            .max_by(|&a, &b| degree[a].cmp(&degree[b]).then(b.cmp(&a)));
        match best {
            Some(u) => {
                gone[u] = true;
                chosen.push(u);
            }
            None => break,
        }
    }
    let mut k = chosen.len();
    while k > 0 {
        k -= 1;
        let u = chosen[k];
        gone[u] = false;
        if is_acyclic_without(out, &gone) {
            chosen.remove(k);
        } else {
            gone[u] = true;
        }
    }
    chosen.sort_unstable();
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_of_cycle_and_tail() {
        let out = vec![vec![1], vec![0, 2], vec![]];
        let comps = strongly_connected_components(&out);
        assert_eq!(comps.len(), 2);
        assert!(comps.contains(&vec![0, 1]));
        assert_eq!(comps[0], vec![2]);
    }

    #[test]
    fn acyclicity_counts_self_loops() {
        let out = vec![vec![0], vec![]];
        assert!(!is_acyclic_without(&out, &[false, false]));
        assert!(is_acyclic_without(&out, &[true, false]));
    }

    #[test]
    fn fvs_breaks_every_cycle() {
        let out = vec![vec![1], vec![2], vec![0, 3], vec![4], vec![3]];
        let fvs = heuristic_fvs(&out, &[false; 5]);
        let mut removed = vec![false; 5];
        for &u in &fvs {
            removed[u] = true;
        }
        assert!(is_acyclic_without(&out, &removed));
        assert_eq!(fvs.len(), 2);
    }

    #[test]
    fn reachability() {
        let out = vec![vec![1], vec![], vec![1]];
        assert_eq!(reachable_from(&out, [0]), vec![true, true, false]);
    }
}
