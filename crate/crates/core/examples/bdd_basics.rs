//! Build a few diagrams by hand: canonicity, quantification, model counting.

use gr1kit::bdd::{BddManager, VarSet};

fn main() {
    let mut m = BddManager::new(3);
    let (a, b, c) = (m.var(0), m.var(1), m.var(2));

    // a & (b | c) built two ways ends in the same node
    let bc = m.or(b, c);
    let f = m.and(a, bc);
    let ab = m.and(a, b);
    let ac = m.and(a, c);
    let g = m.or(ab, ac);
    assert_eq!(f, g);
    println!("a & (b | c): {} nodes, {} models", m.node_count(f), m.sat_count(f, VarSet::from_vars(0..3)));

    let ex = m.exists(f, VarSet::from_vars([0]));
    println!("exists a. f == b | c: {}", ex == bc);
    println!("smallest model: {:?}", m.pick_min(f, VarSet::from_vars(0..3)));
    println!("{}", m.to_dot(f, |v| ["a", "b", "c"][v as usize].to_string()));
}
