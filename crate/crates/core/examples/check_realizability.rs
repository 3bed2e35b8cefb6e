//! Parse a small arbiter, compile it and decide realizability.

use gr1kit::game::GameStructure;
use gr1kit::lang;
use gr1kit::problem::compile;
use gr1kit::solver::check_realizability;

const ARBITER: &str = "
SPEC arbiter
VARENV r1 : boolean; r2 : boolean;
VAR g1 : boolean; g2 : boolean;
-- never both
GAR G (!(g1 & g2));
GAR Globally (r1) leads to (g1);
GAR Globally (r2) leads to (g2);
";

fn main() {
    let doc = lang::load(ARBITER).unwrap_or_else(|errs| {
        errs.iter().for_each(|e| eprintln!("{e}"));
        std::process::exit(1)
    });
    println!("{}", lang::pretty(&doc));
    let problem = compile(&doc).unwrap();
    println!("{} variables after compilation:", problem.vars.len());
    for v in &problem.vars {
        println!("  {:<14} {:?} {:?}", v.name, v.player, v.kind);
    }
    let mut g = GameStructure::build(problem).unwrap();
    let sol = check_realizability(&mut g);
    println!("verdict: {:?} after {} iterations", sol.verdict, sol.iterations);

    // a guarantee that never grants r1 cannot answer its requests
    let broken = ARBITER.replace("GAR G (!(g1 & g2));", "GAR G (!g1);");
    let mut g = GameStructure::build(compile(&lang::load(&broken).unwrap()).unwrap()).unwrap();
    println!("without ever granting r1: {:?}", check_realizability(&mut g).verdict);
}
