use std::collections::{BTreeMap, HashMap, VecDeque};

use gr1kit::game::display_value;
use gr1kit::problem::{Gr1Problem, Player, VarKind};
use gr1kit::strategy::CounterStrategy;

/// System moves that lead the counter-strategy into two consecutive states
/// with `var` true, found by breadth-first search, followed by `extra` more
/// replies (the first listed each time).
pub fn consecutive_script(cs: &CounterStrategy, p: &Gr1Problem, var: &str, extra: usize) -> Vec<BTreeMap<String, String>> {
    let v = p.var_index(var).unwrap();
    let mut parent = HashMap::new();
    let mut queue = VecDeque::new();
    for &i in &cs.initial {
        parent.insert(i, None);
        queue.push_back(i);
    }
    let mut end = None;
    'bfs: while let Some(a) = queue.pop_front() {
        for &b in &cs.states[a].successors {
            if parent.contains_key(&b) {
                continue;
            }
            parent.insert(b, Some(a));
            if cs.states[a].values[v] == 1 && cs.states[b].values[v] == 1 {
                end = Some(b);
                break 'bfs;
            }
            queue.push_back(b);
        }
    }
    let mut path = vec![end.expect("two consecutive states reachable")];
    while let Some(Some(prev)) = parent.get(path.last().unwrap()) {
        path.push(*prev);
    }
    path.reverse();
    for _ in 0..extra {
        match cs.states[*path.last().unwrap()].successors.first() {
            Some(&t) => path.push(t),
            None => break,
        }
    }
    let sys: Vec<usize> =
        (0..p.vars.len()).filter(|&i| p.vars[i].player == Player::Sys && p.vars[i].kind == VarKind::Declared).collect();
    path.iter()
        .map(|&n| {
            sys.iter()
                .map(|&i| (p.vars[i].name.clone(), display_value(&p.vars[i].domain, cs.states[n].values[i])))
                .collect()
        })
        .collect()
}
