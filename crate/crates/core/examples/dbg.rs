use legfront::classify::*;
use legfront::realize::*;
fn main() {
    let t = std::time::Instant::now();
    let pairs = enumerate_admissible(6);
    println!("admissible pairs at bound 6: {}", pairs.len());
    let mut fail = 0;
    for pair in &pairs {
        match stab_recipe(pair) {
            Err(e) => { fail += 1; if fail < 8 { println!("RECIPE FAIL {:?}: {}", pair, e); } }
            Ok(r) => match apply_recipe(&r) {
                Err(e) => { fail += 1; if fail < 8 { println!("APPLY FAIL {:?}: {}", pair, e); } }
                Ok(d) => {
                    let inv = d.theta_invariants().expect("theta");
                    if InvariantPair::new(inv.tb, inv.rot) != *pair {
                        fail += 1;
                        if fail < 8 { println!("MISMATCH {:?} got {:?}/{:?} recipe {:?}", pair, inv.tb, inv.rot, r); }
                    }
                }
            }
        }
    }
    println!("failures: {fail}, elapsed {:?}", t.elapsed());
}
